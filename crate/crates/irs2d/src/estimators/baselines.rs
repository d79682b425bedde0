//! LS and KRF baseline estimators of the cascaded Khatri-Rao channel.

use num_complex::Complex64;

use super::hkmr::validate;
use crate::error::Result;
use crate::multilin::{kron_vec, svd_rank1, unvec, vec_of, CMatrix};
use crate::training::{PilotObservation, TrainingDesign};

/// Matched-filter chain shared by LS, KRF, and TSHDR: per-block pilot
/// filtering `U_k = X_k S^H`, stacking `U = [vec(U_1), ..., vec(U_K)]`, and
/// schedule filtering `E = U Omega^H`, an estimate of
/// `sqrt(P_T) (H^T ⋄ G)` of size QM x N.
pub(super) fn matched_filter_cascaded(
    obs: &PilotObservation,
    design: &TrainingDesign,
) -> Result<CMatrix> {
    let cfg = &obs.cfg;
    let s_adj = design.s().adjoint();
    let mut u = CMatrix::zeros(cfg.q() * cfg.m(), design.k());
    for (k, x) in obs.blocks.iter().enumerate() {
        let u_k = x.matmul(&s_adj)?;
        for (r, z) in vec_of(&u_k).into_iter().enumerate() {
            u[(r, k)] = z;
        }
    }
    u.matmul(&design.rx_omega().adjoint())
}

/// Least-squares baseline: the matched-filter output itself, with no
/// structure exploitation.
pub fn ls_baseline(obs: &PilotObservation, design: &TrainingDesign) -> Result<CMatrix> {
    validate(obs, design)?;
    matched_filter_cascaded(obs, design)
}

/// Result of the Khatri-Rao factorization baseline.
#[derive(Clone, Debug)]
pub struct KrfEstimate {
    /// Estimated BS-IRS channel, N x M.
    pub h: CMatrix,
    /// Estimated IRS-UE channel, Q x N.
    pub g: CMatrix,
    /// Reassembled cascaded channel `H^T ⋄ G`, QM x N.
    pub e: CMatrix,
}

/// KRF baseline: every column of the LS estimate is reshaped to Q x M and
/// factored by a rank-one SVD into its UE- and BS-side vectors.
pub fn krf_baseline(obs: &PilotObservation, design: &TrainingDesign) -> Result<KrfEstimate> {
    let e_ls = ls_baseline(obs, design)?;
    let cfg = &obs.cfg;
    let (q, m, n) = (cfg.q(), cfg.m(), cfg.n());
    let mut h = CMatrix::zeros(n, m);
    let mut g = CMatrix::zeros(q, n);
    let mut e = CMatrix::zeros(q * m, n);
    for col in 0..n {
        let slice = unvec(e_ls.col(col), q, m)?;
        if slice.norm_sqr() == 0.0 {
            continue;
        }
        let (u, s, v) = svd_rank1(&slice)?;
        // slice = s u v^H = g_n h_n^T with the unit-norm factor first.
        let g_n = u;
        let h_n: Vec<Complex64> = v.iter().map(|z| z.conj() * s).collect();
        for (r, z) in h_n.iter().enumerate() {
            h[(col, r)] = *z; // h_n is row `col` of H (column of H^T)
        }
        for (r, z) in g_n.iter().enumerate() {
            g[(r, col)] = *z;
        }
        for (r, z) in kron_vec(&h_n, &g_n).into_iter().enumerate() {
            e[(r, col)] = z;
        }
    }
    Ok(KrfEstimate { h, g, e })
}
