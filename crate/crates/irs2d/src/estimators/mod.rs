//! Channel parameter estimators and baselines.
//!
//! Two decoupled estimators recover the six spatial frequencies of the
//! BS-IRS-UE geometry from the received pilot blocks:
//!
//! - HKMR factors each block into its horizontal/vertical Kronecker parts
//!   first, then solves two small rank-one tensor problems for the BS/UE
//!   parameters and a rank-one matrix problem for the IRS parameters;
//! - TSHDR matched-filters the whole observation into the cascaded
//!   Khatri-Rao channel, permutes it into Kronecker form, and solves two
//!   rank-one tensor problems that deliver BS, UE, and IRS parameters
//!   jointly.
//!
//! LS and KRF baselines estimate the cascaded channel without exploiting the
//! two-dimensional decoupling.

mod baselines;
mod hkmr;
mod peak;
mod reconstruct;
mod tshdr;

pub use baselines::{krf_baseline, ls_baseline, KrfEstimate};
pub use hkmr::hkmr_estimate;
pub use peak::{peak_search, wrap_to_pi, PeakGrid};
pub use reconstruct::{cascaded_reference, reconstruct_cascaded};
pub use tshdr::tshdr_estimate;

use num_complex::Complex64;

/// Fit-quality diagnostics carried alongside a frequency estimate.
#[derive(Clone, Debug, Default)]
pub struct EstimateDiagnostics {
    /// Estimate was produced from a degenerate (near-zero) fit and parked at
    /// the grid center.
    pub degenerate: bool,
    /// Relative energy left behind by the Kronecker factorization step(s).
    pub kron_residual: f64,
    /// Relative residual of the horizontal rank-one tensor fit.
    pub tensor_residual_y: f64,
    /// Relative residual of the vertical rank-one tensor fit.
    pub tensor_residual_z: f64,
}

/// The six estimated spatial frequencies plus the unit-norm direction
/// estimates they were read from.
#[derive(Clone, Debug)]
pub struct FrequencyEstimate {
    pub mu_bs: f64,
    pub psi_bs: f64,
    pub mu_ue: f64,
    pub psi_ue: f64,
    /// Combined IRS horizontal frequency, wrapped into (-pi, pi].
    pub mu_y: f64,
    /// Combined IRS vertical frequency, wrapped into (-pi, pi].
    pub psi_z: f64,

    pub a_y: Vec<Complex64>,
    pub a_z: Vec<Complex64>,
    pub q_y: Vec<Complex64>,
    pub q_z: Vec<Complex64>,
    pub n_y: Vec<Complex64>,
    pub n_z: Vec<Complex64>,

    pub diagnostics: EstimateDiagnostics,
}

impl FrequencyEstimate {
    /// Frequencies in the fixed order (mu_bs, psi_bs, mu_ue, psi_ue, mu_y,
    /// psi_z), matching `SceneParams::target_frequencies`.
    pub fn frequencies(&self) -> [f64; 6] {
        [
            self.mu_bs,
            self.psi_bs,
            self.mu_ue,
            self.psi_ue,
            self.mu_y,
            self.psi_z,
        ]
    }

    /// Flagged estimate parked at the grid center, used when every fit in
    /// the chain is degenerate.
    pub(crate) fn degenerate(cfg: &crate::channel::ArrayConfig) -> Self {
        let zeros = |n: usize| vec![Complex64::new(0.0, 0.0); n];
        Self {
            mu_bs: 0.0,
            psi_bs: 0.0,
            mu_ue: 0.0,
            psi_ue: 0.0,
            mu_y: 0.0,
            psi_z: 0.0,
            a_y: zeros(cfg.m_y),
            a_z: zeros(cfg.m_z),
            q_y: zeros(cfg.q_y),
            q_z: zeros(cfg.q_z),
            n_y: zeros(cfg.n_y),
            n_z: zeros(cfg.n_z),
            diagnostics: EstimateDiagnostics {
                degenerate: true,
                ..Default::default()
            },
        }
    }
}

/// Names of the six estimated parameters, in `frequencies()` order.
pub const PARAMETER_NAMES: [&str; 6] = ["mu_bs", "psi_bs", "mu_ue", "psi_ue", "mu_y", "psi_z"];

/// Unit norm with the largest-magnitude entry rotated real nonnegative; the
/// gauge every stored direction estimate follows.
pub(crate) fn unit_gauge(v: &[Complex64]) -> Vec<Complex64> {
    let norm = crate::multilin::vec_norm(v);
    if norm == 0.0 {
        return v.to_vec();
    }
    let mut best = 0usize;
    for i in 0..v.len() {
        if v[i].norm_sqr() > v[best].norm_sqr() {
            best = i;
        }
    }
    let rot = v[best].conj() / v[best].norm();
    v.iter().map(|z| z * rot / norm).collect()
}
