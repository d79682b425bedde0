//! Hybrid Kronecker factorization and multi-rank-one estimator.
//!
//! Stage one splits every received block into its horizontal and vertical
//! Kronecker factors and matched-filters each with the per-axis pilots; the
//! stacked results form two third-order tensors whose rank-one factors carry
//! the BS and UE steering vectors. Stage two beamforms the tensors down to
//! the per-block IRS gains, matched-filters with the IRS schedule, and reads
//! the combined IRS frequencies from one final rank-one matrix fit.

use num_complex::Complex64;

use super::peak::{peak_search, PeakGrid};
use super::{EstimateDiagnostics, FrequencyEstimate};
use crate::channel::steering_vector;
use crate::error::{Error, Result};
use crate::multilin::{
    hosvd_rank1_3, kron, nearest_kronecker, svd_rank1, unvec, CMatrix, CTensor3,
};
use crate::training::{PilotObservation, TrainingDesign};

pub(super) fn validate(obs: &PilotObservation, design: &TrainingDesign) -> Result<()> {
    let cfg = &obs.cfg;
    if obs.blocks.len() != design.k() {
        return Err(Error::LengthMismatch {
            op: "estimate",
            len: obs.blocks.len(),
            expected: design.k(),
        });
    }
    for x in &obs.blocks {
        if x.rows() != cfg.q() || x.cols() != design.t() {
            return Err(Error::ShapeMismatch {
                op: "estimate",
                left_rows: x.rows(),
                left_cols: x.cols(),
                right_rows: cfg.q(),
                right_cols: design.t(),
            });
        }
    }
    if design.s_y().rows() != cfg.m_y || design.s_z().rows() != cfg.m_z {
        return Err(Error::ShapeMismatch {
            op: "estimate",
            left_rows: design.s_y().rows(),
            left_cols: design.s_z().rows(),
            right_rows: cfg.m_y,
            right_cols: cfg.m_z,
        });
    }
    Ok(())
}

/// Degeneracy threshold: fits whose energy falls below this fraction of the
/// total observation energy are treated as rank-deficient noise.
fn degenerate_floor(total_energy: f64) -> f64 {
    10.0 * f64::EPSILON * total_energy.sqrt()
}

pub fn hkmr_estimate(
    obs: &PilotObservation,
    design: &TrainingDesign,
    grid: &PeakGrid,
) -> Result<FrequencyEstimate> {
    validate(obs, design)?;
    let cfg = &obs.cfg;
    let k = design.k();
    let total_energy: f64 = obs.blocks.iter().map(|x| x.norm_sqr()).sum();
    if total_energy == 0.0 {
        return Ok(FrequencyEstimate::degenerate(cfg));
    }
    let floor = degenerate_floor(total_energy);

    // Per-block Kronecker split and matched filtering with the axis pilots.
    let s_y_adj = design.s_y().adjoint();
    let s_z_adj = design.s_z().adjoint();
    let mut t_y = CTensor3::zeros(cfg.q_y, cfg.m_y, k);
    let mut t_z = CTensor3::zeros(cfg.q_z, cfg.m_z, k);
    let mut kron_resid = 0.0f64;
    for (k_idx, x) in obs.blocks.iter().enumerate() {
        if x.norm_sqr() == 0.0 {
            continue; // zero block contributes zero slices
        }
        let (x_y, x_z) = nearest_kronecker(x, cfg.q_y, design.t_y())?;
        kron_resid += x.sub(&kron(&x_y, &x_z))?.norm_sqr();
        // The scale split between the factors is unresolved (only their
        // product is); balance it so both stacked tensors weight each block
        // by its signal strength rather than leaving one side unit-norm.
        let (x_y, x_z) = balance_scale(x_y, x_z);
        let u_y = x_y.matmul(&s_y_adj)?;
        let u_z = x_z.matmul(&s_z_adj)?;
        for m in 0..cfg.m_y {
            for q in 0..cfg.q_y {
                t_y[(q, m, k_idx)] = u_y[(q, m)];
            }
        }
        for m in 0..cfg.m_z {
            for q in 0..cfg.q_z {
                t_z[(q, m, k_idx)] = u_z[(q, m)];
            }
        }
    }

    if t_y.norm() < floor || t_z.norm() < floor {
        return Ok(FrequencyEstimate::degenerate(cfg));
    }

    // BS/UE parameters from the two rank-one tensor fits.
    let triple_y = hosvd_rank1_3(&t_y)?;
    let triple_z = hosvd_rank1_3(&t_z)?;
    let mu_ue = peak_search(&triple_y.u1, grid)?;
    let mu_bs = peak_search(&triple_y.u2, grid)?;
    let psi_ue = peak_search(&triple_z.u1, grid)?;
    let psi_bs = peak_search(&triple_z.u2, grid)?;

    let mut diagnostics = EstimateDiagnostics {
        degenerate: false,
        kron_residual: kron_resid / total_energy,
        tensor_residual_y: triple_y.residual_sqr(&t_y) / t_y.norm_sqr(),
        tensor_residual_z: triple_z.residual_sqr(&t_z) / t_z.norm_sqr(),
    };

    // Spatial filtering with unit-norm beams at the estimated frequencies
    // collapses each tensor to its per-block IRS gain sequence.
    let beam = |mu: f64, l: usize| -> Vec<Complex64> {
        let s = 1.0 / (l as f64).sqrt();
        steering_vector(mu, l)
            .iter()
            .map(|z| z.conj() * s)
            .collect()
    };
    let g_y = beam(mu_ue, cfg.q_y);
    let f_y = beam(mu_bs, cfg.m_y);
    let g_z = beam(psi_ue, cfg.q_z);
    let f_z = beam(psi_bs, cfg.m_z);
    let l_y = contract_blocks(&t_y, &g_y, &f_y);
    let l_z = contract_blocks(&t_z, &g_z, &f_z);
    let l: Vec<Complex64> = l_y.iter().zip(&l_z).map(|(a, b)| a * b).collect();

    // Matched filter with the IRS schedule, then split the effective IRS
    // response into its vertical/horizontal steering vectors.
    let n_hat = design.rx_omega().conj().matvec(&l)?;
    let n_mat = unvec(&n_hat, cfg.n_z, cfg.n_y)?;

    let (mu_y, psi_z, n_y, n_z) = if n_mat.norm() < floor {
        diagnostics.degenerate = true;
        (
            0.0,
            0.0,
            vec![Complex64::new(0.0, 0.0); cfg.n_y],
            vec![Complex64::new(0.0, 0.0); cfg.n_z],
        )
    } else {
        let (u, _, v) = svd_rank1(&n_mat)?;
        let n_y: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
        let n_z = u;
        let mu_y = peak_search(&n_y, grid)?;
        let psi_z = peak_search(&n_z, grid)?;
        (mu_y, psi_z, n_y, n_z)
    };

    Ok(FrequencyEstimate {
        mu_bs,
        psi_bs,
        mu_ue,
        psi_ue,
        mu_y,
        psi_z,
        a_y: triple_y.u2,
        a_z: triple_z.u2,
        q_y: triple_y.u1,
        q_z: triple_z.u1,
        n_y,
        n_z,
        diagnostics,
    })
}

/// Move half of the scale of `b` onto `a`, leaving `kron(a, b)` unchanged.
fn balance_scale(a: CMatrix, b: CMatrix) -> (CMatrix, CMatrix) {
    let s = b.norm();
    if s == 0.0 {
        return (a, b);
    }
    let r = s.sqrt();
    (
        a.scale(Complex64::new(r, 0.0)),
        b.scale(Complex64::new(1.0 / r, 0.0)),
    )
}

/// Contract modes 1 and 2 of the tensor with `g` and `f`, leaving the
/// per-block sequence.
fn contract_blocks(t: &CTensor3, g: &[Complex64], f: &[Complex64]) -> Vec<Complex64> {
    let (d1, d2, d3) = t.dims();
    debug_assert_eq!(g.len(), d1);
    debug_assert_eq!(f.len(), d2);
    (0..d3)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..d2 {
                for q in 0..d1 {
                    acc += g[q] * f[m] * t[(q, m, k)];
                }
            }
            acc
        })
        .collect()
}
