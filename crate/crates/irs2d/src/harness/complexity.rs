//! Analytic flop-count models for the estimators and baselines.
//!
//! The expressions evaluate the leading-order operation counts with unit
//! constants, as exact integer arithmetic. Only ratios and orderings between
//! methods are meaningful.

use serde::{Deserialize, Serialize};

use crate::channel::ArrayConfig;
use crate::error::{Error, Result};

/// Estimation methods known to the harness. `Hdr` is a competitor modeled
/// only through its complexity curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Hkmr,
    Tshdr,
    Ls,
    Krf,
    Hdr,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Hkmr => "HKMR",
            Method::Tshdr => "TSHDR",
            Method::Ls => "LS",
            Method::Krf => "KRF",
            Method::Hdr => "HDR",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HKMR" => Ok(Method::Hkmr),
            "TSHDR" => Ok(Method::Tshdr),
            "LS" => Ok(Method::Ls),
            "KRF" => Ok(Method::Krf),
            "HDR" => Ok(Method::Hdr),
            other => Err(Error::Config(format!("unknown method '{other}'"))),
        }
    }

    /// Methods that produce parameter estimates in this artifact.
    pub fn is_simulated(&self) -> bool {
        !matches!(self, Method::Hdr)
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Leading-order operation count of one estimate for the given geometry,
/// pilot length `t = t_y t_z`, and IRS block count `k`.
pub fn complexity_flops(method: Method, cfg: &ArrayConfig, t: usize, k: usize) -> u128 {
    let m_y = cfg.m_y as u128;
    let m_z = cfg.m_z as u128;
    let q_y = cfg.q_y as u128;
    let q_z = cfg.q_z as u128;
    let n_y = cfg.n_y as u128;
    let n_z = cfg.n_z as u128;
    let m = m_y * m_z;
    let q = q_y * q_z;
    let n = n_y * n_z;
    let t = t as u128;
    let k = k as u128;
    // Per-axis pilot lengths under the default square Hadamard design.
    let t_y = m_y;
    let t_z = m_z;

    match method {
        Method::Hkmr => {
            k * (q * q * t
                + q_y * t_y * m_y
                + q_z * t_z * m_z
                + q_y * q_y * m_y
                + m_y * m_y * q_y
                + q_z * q_z * m_z
                + m_z * m_z * q_z)
                + n_z * n_z * n_y
        }
        Method::Tshdr => {
            k * m * q * t
                + m * m * q * q * n
                + q_y * q_y * m_y * n_y
                + m_y * m_y * q_y * n_y
                + n_y * n_y * q_y * m_y
                + q_z * q_z * m_z * n_z
                + m_z * m_z * q_z * n_z
                + n_z * n_z * q_z * m_z
        }
        Method::Ls => q * q * m * n * t * k,
        Method::Krf => q * q * m * n * t * k + n * n * q * q * m * m,
        Method::Hdr => q * q * m * n * t * k + q * m * n * (q_z + q_y + m_z + m_y + n_z + n_y),
    }
}
