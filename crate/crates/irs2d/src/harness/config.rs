//! Experiment configuration, loadable from a TOML file and overridable from
//! the command line.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use super::complexity::Method;
use crate::channel::ArrayConfig;
use crate::error::{Error, Result};

/// Which family of figures an experiment reproduces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricKind {
    Rmse,
    Nmse,
    Se,
    Complexity,
}

impl MetricKind {
    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Rmse => "rmse",
            MetricKind::Nmse => "nmse",
            MetricKind::Se => "se",
            MetricKind::Complexity => "complexity",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rmse" => Ok(MetricKind::Rmse),
            "nmse" => Ok(MetricKind::Nmse),
            "se" => Ok(MetricKind::Se),
            "complexity" => Ok(MetricKind::Complexity),
            other => Err(Error::Config(format!("unknown metric '{other}'"))),
        }
    }

    pub const ALL: [MetricKind; 4] = [
        MetricKind::Rmse,
        MetricKind::Nmse,
        MetricKind::Se,
        MetricKind::Complexity,
    ];
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// BS elements per axis.
    pub m_y: usize,
    pub m_z: usize,
    /// UE elements per axis.
    pub q_y: usize,
    pub q_z: usize,
    /// IRS elements per axis.
    pub n_y: usize,
    pub n_z: usize,

    /// SNR grid in dB (SNR = P_T / sigma_n^2).
    pub snr_db: Vec<f64>,
    /// Monte Carlo trials per sweep point.
    pub trials: usize,
    /// Methods to run (HKMR, TSHDR, LS, KRF; HDR for complexity only).
    pub methods: Vec<String>,
    /// Metrics to produce (rmse, nmse, se, complexity).
    pub metrics: Vec<String>,
    /// IRS sizes for the N sweeps; empty means the configured array only.
    pub irs_sizes: Vec<usize>,
    /// Master seed; everything derives from it.
    pub seed: u64,
    /// Output directory for CSV files.
    pub out_dir: PathBuf,
    /// Total transmit power in watts.
    pub p_t: f64,
    /// Physically unit-modulus IRS phase vectors (receive filters rescale to
    /// compensate) instead of the row-orthonormal convention.
    pub unit_modulus_irs: bool,
    /// Scale the Fisher information by the training energy P_T * T * K when
    /// emitting bound curves (a plotting convention for RMSE overlays).
    pub crlb_energy_scaled: bool,
    /// Peak-search grid resolution.
    pub grid_resolution: usize,
    /// Also emit a matplotlib script next to the CSV files.
    pub plot_script: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            m_y: 4,
            m_z: 4,
            q_y: 4,
            q_z: 4,
            n_y: 4,
            n_z: 4,
            snr_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
            trials: 500,
            methods: vec!["HKMR".into(), "TSHDR".into(), "LS".into(), "KRF".into()],
            metrics: vec!["rmse".into(), "nmse".into()],
            irs_sizes: vec![],
            seed: 1,
            out_dir: PathBuf::from("results"),
            p_t: 1.0,
            unit_modulus_irs: false,
            crlb_energy_scaled: false,
            grid_resolution: 4096,
            plot_script: false,
        }
    }
}

impl ExperimentConfig {
    pub fn array(&self) -> ArrayConfig {
        ArrayConfig::new(self.m_y, self.m_z, self.q_y, self.q_z, self.n_y, self.n_z)
    }

    pub fn parsed_methods(&self) -> Result<Vec<Method>> {
        let mut out = Vec::new();
        for m in &self.methods {
            let parsed = Method::parse(m)?;
            if !out.contains(&parsed) {
                out.push(parsed);
            }
        }
        Ok(out)
    }

    pub fn parsed_metrics(&self) -> Result<Vec<MetricKind>> {
        let mut out = Vec::new();
        for m in &self.metrics {
            let parsed = MetricKind::parse(m)?;
            if !out.contains(&parsed) {
                out.push(parsed);
            }
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            context: format!("reading config {}", path.display()),
            source,
        })?;
        let cfg: ExperimentConfig =
            toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("snr_db must not be empty".into()));
        }
        if self.grid_resolution < 2 {
            return Err(Error::Config("grid_resolution must be at least 2".into()));
        }
        if self.p_t <= 0.0 {
            return Err(Error::Config("p_t must be positive".into()));
        }
        if [self.m_y, self.m_z, self.q_y, self.q_z, self.n_y, self.n_z].contains(&0) {
            return Err(Error::Config("array dimensions must be positive".into()));
        }
        self.parsed_methods()?;
        self.parsed_metrics()?;
        for &n in &self.irs_sizes {
            if n == 0 {
                return Err(Error::Config("irs_sizes entries must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Factor an IRS element count into the most square `n_y x n_z` grid with
/// `n_y >= n_z`.
pub fn near_square_factors(n: usize) -> (usize, usize) {
    assert!(n >= 1);
    let mut d = (n as f64).sqrt().floor() as usize;
    while d > 1 && !n.is_multiple_of(d) {
        d -= 1;
    }
    (n / d.max(1), d.max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_square_reference_points() {
        assert_eq!(near_square_factors(16), (4, 4));
        assert_eq!(near_square_factors(64), (8, 8));
        assert_eq!(near_square_factors(256), (16, 16));
        assert_eq!(near_square_factors(3000), (60, 50));
        assert_eq!(near_square_factors(7), (7, 1));
        assert_eq!(near_square_factors(1), (1, 1));
    }

    #[test]
    fn toml_roundtrip_and_validation() {
        let cfg = ExperimentConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.trials, cfg.trials);
        assert_eq!(back.snr_db, cfg.snr_db);
        back.validate().unwrap();

        let bad = ExperimentConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());

        let unknown_method = ExperimentConfig {
            methods: vec!["MUSIC".into()],
            ..Default::default()
        };
        assert!(unknown_method.validate().is_err());
    }
}
