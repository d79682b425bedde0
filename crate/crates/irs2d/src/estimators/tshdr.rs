//! Two-stage higher-dimensional rank-one estimator.
//!
//! The whole observation is matched-filtered into the cascaded Khatri-Rao
//! channel, permuted into its Kronecker form, split once into horizontal and
//! vertical combined channels, and each is solved as a single rank-one
//! tensor problem that yields the BS, UE, and IRS parameters jointly.

use super::baselines::matched_filter_cascaded;
use super::hkmr::validate;
use super::peak::{peak_search, PeakGrid};
use super::{EstimateDiagnostics, FrequencyEstimate};
use crate::error::Result;
use crate::multilin::{
    block_perm_indices, gather_rows, hosvd_rank1_3, kron, nearest_kronecker, CTensor3,
};
use crate::training::{PilotObservation, TrainingDesign};

pub fn tshdr_estimate(
    obs: &PilotObservation,
    design: &TrainingDesign,
    grid: &PeakGrid,
) -> Result<FrequencyEstimate> {
    validate(obs, design)?;
    let cfg = &obs.cfg;
    let total_energy: f64 = obs.blocks.iter().map(|x| x.norm_sqr()).sum();
    if total_energy == 0.0 {
        return Ok(FrequencyEstimate::degenerate(cfg));
    }
    let floor = 10.0 * f64::EPSILON * total_energy.sqrt();

    // Matched filtering with pilots and schedule gives the cascaded channel,
    // then the block permutation exposes its y/z Kronecker structure.
    let e = matched_filter_cascaded(obs, design)?;
    let perm = block_perm_indices(cfg.m_y, cfg.m_z, cfg.q_y, cfg.q_z, cfg.n_y, cfg.n_z);
    let j = gather_rows(&e, &perm)?;
    if j.norm() < floor {
        return Ok(FrequencyEstimate::degenerate(cfg));
    }

    let (j_y, j_z) = nearest_kronecker(&j, cfg.q_y * cfg.m_y, cfg.n_y)?;
    let kron_residual = j.sub(&kron(&j_y, &j_z))?.norm_sqr() / j.norm_sqr();

    // Column n of each factor reshapes to a Q x M slice of a rank-one tensor
    // q ∘ a ∘ n.
    let t_y = CTensor3::from_fn(cfg.q_y, cfg.m_y, cfg.n_y, |q, m, n| {
        j_y[(m * cfg.q_y + q, n)]
    });
    let t_z = CTensor3::from_fn(cfg.q_z, cfg.m_z, cfg.n_z, |q, m, n| {
        j_z[(m * cfg.q_z + q, n)]
    });

    let triple_y = hosvd_rank1_3(&t_y)?;
    let triple_z = hosvd_rank1_3(&t_z)?;
    let mu_ue = peak_search(&triple_y.u1, grid)?;
    let mu_bs = peak_search(&triple_y.u2, grid)?;
    let mu_y = peak_search(&triple_y.u3, grid)?;
    let psi_ue = peak_search(&triple_z.u1, grid)?;
    let psi_bs = peak_search(&triple_z.u2, grid)?;
    let psi_z = peak_search(&triple_z.u3, grid)?;

    let diagnostics = EstimateDiagnostics {
        degenerate: false,
        kron_residual,
        tensor_residual_y: triple_y.residual_sqr(&t_y) / t_y.norm_sqr(),
        tensor_residual_z: triple_z.residual_sqr(&t_z) / t_z.norm_sqr(),
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
        n_y: super::unit_gauge(&triple_y.u3),
        n_z: super::unit_gauge(&triple_z.u3),
        diagnostics,
    })
}
