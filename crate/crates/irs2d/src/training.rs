//! Kronecker-structured pilot and IRS phase-shift design, plus forward
//! simulation of the received pilot blocks.
//!
//! Pilots are scaled Hadamard matrices per axis and the IRS schedule is built
//! from row-orthonormal DFT codebooks, so the assembled designs satisfy
//! `S S^H = I_M` and `Omega Omega^H = I_N`. One explicit amplitude
//! `sqrt(P_T)` multiplies the transmitted block; SNR is `P_T / sigma_n^2`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::channel::{ArrayConfig, ChannelFactors};
use crate::error::{Error, Result};
use crate::multilin::{dft_codebook, hadamard_matrix, khatri_rao, kron, CMatrix};

/// Horizontal and vertical pilot matrices (scaled Hadamard, so
/// `S_t S_t^H = I`).
pub fn build_pilots(cfg: &ArrayConfig) -> Result<(CMatrix, CMatrix)> {
    Ok((hadamard_matrix(cfg.m_y)?, hadamard_matrix(cfg.m_z)?))
}

/// IRS schedule: per-axis DFT codebooks expanded over all `K = K_y K_z`
/// column pairs. Column `k = k_y K_z + k_z` of the horizontal schedule is
/// column `k_y` of `W_y`; the vertical schedule walks `k_z` the same way.
pub fn build_irs_schedule(cfg: &ArrayConfig, k_y: usize, k_z: usize) -> Result<(CMatrix, CMatrix)> {
    let w_y = dft_codebook(cfg.n_y, k_y)?;
    let w_z = dft_codebook(cfg.n_z, k_z)?;
    let k = k_y * k_z;
    let omega_y = CMatrix::from_fn(cfg.n_y, k, |r, c| w_y[(r, c / k_z)]);
    let omega_z = CMatrix::from_fn(cfg.n_z, k, |r, c| w_z[(r, c % k_z)]);
    Ok((omega_y, omega_z))
}

/// Pilot and IRS training design for one experiment.
///
/// The stored schedule matrices are always in the row-orthonormal convention.
/// When `unit_modulus_irs` is set, the transmit-side phase vectors are scaled
/// up to unit modulus per element and the receive-side matched filter is
/// scaled down to compensate, leaving the noiseless algebra unchanged.
#[derive(Clone, Debug)]
pub struct TrainingDesign {
    s_y: CMatrix,
    s_z: CMatrix,
    omega_y: CMatrix,
    omega_z: CMatrix,
    k_y: usize,
    k_z: usize,
    unit_modulus_irs: bool,
}

impl TrainingDesign {
    /// Default design: `T_t = M_t`, `K_t = N_t`, orthonormal IRS convention.
    pub fn build(cfg: &ArrayConfig) -> Result<Self> {
        Self::build_with(cfg, cfg.n_y, cfg.n_z, false)
    }

    pub fn build_with(
        cfg: &ArrayConfig,
        k_y: usize,
        k_z: usize,
        unit_modulus_irs: bool,
    ) -> Result<Self> {
        let (s_y, s_z) = build_pilots(cfg)?;
        let (omega_y, omega_z) = build_irs_schedule(cfg, k_y, k_z)?;
        Ok(Self {
            s_y,
            s_z,
            omega_y,
            omega_z,
            k_y,
            k_z,
            unit_modulus_irs,
        })
    }

    pub fn s_y(&self) -> &CMatrix {
        &self.s_y
    }

    pub fn s_z(&self) -> &CMatrix {
        &self.s_z
    }

    /// Assembled pilot matrix `S = S_y ⊗ S_z`.
    pub fn s(&self) -> CMatrix {
        kron(&self.s_y, &self.s_z)
    }

    pub fn t_y(&self) -> usize {
        self.s_y.cols()
    }

    pub fn t_z(&self) -> usize {
        self.s_z.cols()
    }

    pub fn t(&self) -> usize {
        self.t_y() * self.t_z()
    }

    pub fn k_y(&self) -> usize {
        self.k_y
    }

    pub fn k_z(&self) -> usize {
        self.k_z
    }

    /// Number of IRS training blocks.
    pub fn k(&self) -> usize {
        self.k_y * self.k_z
    }

    pub fn unit_modulus_irs(&self) -> bool {
        self.unit_modulus_irs
    }

    /// Row-orthonormal horizontal schedule (N_y x K).
    pub fn omega_y(&self) -> &CMatrix {
        &self.omega_y
    }

    /// Row-orthonormal vertical schedule (N_z x K).
    pub fn omega_z(&self) -> &CMatrix {
        &self.omega_z
    }

    /// Assembled orthonormal schedule `Omega = Omega_y ⋄ Omega_z` (N x K).
    pub fn omega(&self) -> CMatrix {
        khatri_rao(&self.omega_y, &self.omega_z).expect("schedules share K columns")
    }

    fn tx_scale_y(&self) -> f64 {
        if self.unit_modulus_irs {
            (self.k_y as f64).sqrt()
        } else {
            1.0
        }
    }

    fn tx_scale_z(&self) -> f64 {
        if self.unit_modulus_irs {
            (self.k_z as f64).sqrt()
        } else {
            1.0
        }
    }

    /// Horizontal phase vector applied at the IRS during block `k`.
    pub fn tx_omega_y_col(&self, k: usize) -> Vec<Complex64> {
        let s = self.tx_scale_y();
        self.omega_y.col(k).iter().map(|z| z * s).collect()
    }

    /// Vertical phase vector applied at the IRS during block `k`.
    pub fn tx_omega_z_col(&self, k: usize) -> Vec<Complex64> {
        let s = self.tx_scale_z();
        self.omega_z.col(k).iter().map(|z| z * s).collect()
    }

    /// Schedule matrix to use in receive-side matched filtering. Under the
    /// unit-modulus convention this is scaled by `1/sqrt(K)` so the filter
    /// inverts the transmit-side scaling.
    pub fn rx_omega(&self) -> CMatrix {
        let omega = self.omega();
        if self.unit_modulus_irs {
            let inv = 1.0 / (self.tx_scale_y() * self.tx_scale_z());
            omega.scale(Complex64::new(inv, 0.0))
        } else {
            omega
        }
    }
}

/// Additive receiver noise: circularly symmetric white Gaussian with the
/// stated per-entry variance (`R_k = sigma_n^2 I`).
#[derive(Clone, Copy, Debug)]
pub struct NoiseModel {
    pub sigma2: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self { sigma2: 0.0 }
    }

    /// Variance from `SNR = P_T / sigma_n^2` in dB.
    pub fn from_snr_db(p_t: f64, snr_db: f64) -> Self {
        Self {
            sigma2: p_t * 10f64.powf(-snr_db / 10.0),
        }
    }
}

/// The `K` received pilot blocks of one channel sounding, plus the noise and
/// power bookkeeping needed by the estimators and metrics.
#[derive(Clone, Debug)]
pub struct PilotObservation {
    /// Array geometry the blocks were generated under.
    pub cfg: ArrayConfig,
    /// Received blocks `X_k`, each Q x T.
    pub blocks: Vec<CMatrix>,
    pub sigma2: f64,
    pub p_t: f64,
}

/// Per-axis received pilot blocks before noise:
/// `X_t^(k) = G_t diag(w_t^(k)) H_t S_t`.
fn axis_block(g: &CMatrix, w: &[Complex64], h: &CMatrix, s: &CMatrix) -> CMatrix {
    // G diag(w): scale the columns of G.
    let gd = CMatrix::from_fn(g.rows(), g.cols(), |r, c| g[(r, c)] * w[c]);
    gd.matmul(h).unwrap().matmul(s).unwrap()
}

/// Simulate the received pilot signal for every IRS training block:
/// `X_k = sqrt(P_T) G diag(w_k) H S + V_k`, computed through the per-axis
/// factorization so the noiseless blocks are Kronecker products bit-exactly.
pub fn synthesize_received<R: Rng + ?Sized>(
    ch: &ChannelFactors,
    design: &TrainingDesign,
    noise: NoiseModel,
    p_t: f64,
    rng: &mut R,
) -> Result<PilotObservation> {
    if ch.g_y.cols() != design.omega_y.rows() || ch.g_z.cols() != design.omega_z.rows() {
        return Err(Error::ShapeMismatch {
            op: "synthesize_received",
            left_rows: ch.g_y.cols(),
            left_cols: ch.g_z.cols(),
            right_rows: design.omega_y.rows(),
            right_cols: design.omega_z.rows(),
        });
    }
    if ch.h_y.cols() != design.s_y.rows() || ch.h_z.cols() != design.s_z.rows() {
        return Err(Error::ShapeMismatch {
            op: "synthesize_received",
            left_rows: ch.h_y.cols(),
            left_cols: ch.h_z.cols(),
            right_rows: design.s_y.rows(),
            right_cols: design.s_z.rows(),
        });
    }
    let cfg = ArrayConfig::new(
        ch.h_y.cols(),
        ch.h_z.cols(),
        ch.g_y.rows(),
        ch.g_z.rows(),
        ch.g_y.cols(),
        ch.g_z.cols(),
    );
    let amp = p_t.sqrt();
    let noise_std = (noise.sigma2 / 2.0).sqrt();
    let mut blocks = Vec::with_capacity(design.k());
    for k in 0..design.k() {
        let x_y = axis_block(&ch.g_y, &design.tx_omega_y_col(k), &ch.h_y, &design.s_y);
        let x_z = axis_block(&ch.g_z, &design.tx_omega_z_col(k), &ch.h_z, &design.s_z);
        let mut x = kron(&x_y, &x_z).scale(Complex64::new(amp, 0.0));
        if noise.sigma2 > 0.0 {
            for c in 0..x.cols() {
                for r in 0..x.rows() {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    x[(r, c)] += Complex64::new(re * noise_std, im * noise_std);
                }
            }
        }
        blocks.push(x);
    }
    Ok(PilotObservation {
        cfg,
        blocks,
        sigma2: noise.sigma2,
        p_t,
    })
}
