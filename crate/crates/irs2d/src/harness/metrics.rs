//! Performance metrics: wrap-aware RMSE, normalized reconstruction error,
//! and beamformed spectral efficiency.

use num_complex::Complex64;

use crate::channel::{steering_vector, ArrayConfig, ChannelFactors};
use crate::error::{Error, Result};
use crate::estimators::{wrap_to_pi, FrequencyEstimate};
use crate::multilin::{kron_vec, svd_rank1, vec_dot, CMatrix};

/// Root-mean-square of estimation errors wrapped into (-pi, pi].
pub fn rmse_wrapped(truth: f64, estimates: &[f64]) -> Result<f64> {
    if estimates.is_empty() {
        return Err(Error::Config("rmse over an empty estimate list".into()));
    }
    let acc: f64 = estimates
        .iter()
        .map(|e| wrap_to_pi(e - truth).powi(2))
        .sum();
    Ok((acc / estimates.len() as f64).sqrt())
}

/// Square root of the median squared wrapped error; robust companion to
/// [`rmse_wrapped`] for heavy-tailed low-SNR error distributions.
pub fn rmse_wrapped_median(errors_sqr: &mut [f64]) -> Result<f64> {
    if errors_sqr.is_empty() {
        return Err(Error::Config("median over an empty error list".into()));
    }
    errors_sqr.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = errors_sqr.len();
    let med = if n % 2 == 1 {
        errors_sqr[n / 2]
    } else {
        0.5 * (errors_sqr[n / 2 - 1] + errors_sqr[n / 2])
    };
    Ok(med.sqrt())
}

/// Squared wrapped error of one estimate.
pub fn wrapped_error_sqr(truth: f64, estimate: f64) -> f64 {
    wrap_to_pi(estimate - truth).powi(2)
}

/// Normalized reconstruction error `||E - Ehat||^2 / ||E||^2`.
pub fn nmse(e: &CMatrix, e_hat: &CMatrix) -> Result<f64> {
    let denom = e.norm_sqr();
    if denom == 0.0 {
        return Err(Error::DegenerateInput { op: "nmse" });
    }
    Ok(e.sub(e_hat)?.norm_sqr() / denom)
}

/// NMSE after fitting the single complex scale `c` minimizing
/// `||E - c Ehat||`; used for parametric reconstructions whose overall gain
/// is unidentifiable.
pub fn gauged_nmse(e: &CMatrix, e_hat: &CMatrix) -> Result<f64> {
    let denom = e.norm_sqr();
    if denom == 0.0 {
        return Err(Error::DegenerateInput { op: "nmse" });
    }
    let hh = e_hat.norm_sqr();
    if hh == 0.0 {
        return Ok(1.0);
    }
    let cross = e_hat.inner(e)?;
    Ok(((denom - cross.norm_sqr() / hh) / denom).max(0.0))
}

/// Spectral efficiency of one beamformed link:
/// `log2(1 + (P_T / sigma^2) |w^H G diag(omega) H f|^2)`, with the true
/// channel and the supplied beams.
pub fn se_from_beams(
    ch: &ChannelFactors,
    f: &[Complex64],
    w: &[Complex64],
    omega: &[Complex64],
    sigma2: f64,
    p_t: f64,
) -> Result<f64> {
    if sigma2 <= 0.0 {
        return Err(Error::Config(
            "spectral efficiency needs a positive noise variance".into(),
        ));
    }
    let h = ch.h();
    let g = ch.g();
    let hf = h.matvec(f)?;
    let reflected: Vec<Complex64> = hf.iter().zip(omega).map(|(a, b)| a * b).collect();
    let received = g.matvec(&reflected)?;
    let gain = vec_dot(w, &received);
    Ok((1.0 + p_t / sigma2 * gain.norm_sqr()).log2())
}

fn normalized(v: Vec<Complex64>) -> Vec<Complex64> {
    let n = crate::multilin::vec_norm(&v);
    if n == 0.0 {
        return v;
    }
    v.into_iter().map(|z| z / n).collect()
}

/// Beams from a parametric frequency estimate: conjugate-matched transmit and
/// receive beams at the estimated BS/UE directions and unit-modulus IRS
/// phases conjugate to the estimated effective IRS response. The channel
/// itself is the true one.
pub fn spectral_efficiency(
    ch: &ChannelFactors,
    est: &FrequencyEstimate,
    cfg: &ArrayConfig,
    sigma2: f64,
    p_t: f64,
) -> Result<f64> {
    let f = normalized(
        kron_vec(
            &steering_vector(est.mu_bs, cfg.m_y),
            &steering_vector(est.psi_bs, cfg.m_z),
        )
        .into_iter()
        .map(|z| z.conj())
        .collect(),
    );
    let w = normalized(kron_vec(
        &steering_vector(est.mu_ue, cfg.q_y),
        &steering_vector(est.psi_ue, cfg.q_z),
    ));
    let omega: Vec<Complex64> = kron_vec(
        &steering_vector(est.mu_y, cfg.n_y),
        &steering_vector(est.psi_z, cfg.n_z),
    )
    .into_iter()
    .map(|z| z.conj())
    .collect();
    se_from_beams(ch, &f, &w, &omega, sigma2, p_t)
}

/// Beams from matrix-valued channel estimates (the KRF baseline): dominant
/// singular directions of the estimated hop channels, and IRS phases read
/// from the per-element cascade coefficients the factorization itself
/// estimates.
///
/// Steering vectors are anchored at 1 in their first entry, so the (1,1)
/// entry of element n's estimated outer product `g_n h_n^T` is exactly the
/// element's combined phase term. A non-parametric estimate has no array
/// manifold to average that readout over; sharpening it across antennas is
/// what the parametric estimators buy.
pub fn spectral_efficiency_from_matrices(
    ch: &ChannelFactors,
    h_hat: &CMatrix,
    g_hat: &CMatrix,
    sigma2: f64,
    p_t: f64,
) -> Result<f64> {
    let n = h_hat.rows();
    let (f, w) = if h_hat.norm_sqr() == 0.0 || g_hat.norm_sqr() == 0.0 {
        (
            vec![Complex64::new(0.0, 0.0); h_hat.cols()],
            vec![Complex64::new(0.0, 0.0); g_hat.rows()],
        )
    } else {
        let (_, _, v_h) = svd_rank1(h_hat)?;
        let (u_g, _, _) = svd_rank1(g_hat)?;
        (v_h, u_g)
    };
    let omega: Vec<Complex64> = (0..n)
        .map(|i| {
            let z = h_hat[(i, 0)] * g_hat[(0, i)];
            let m = z.norm();
            if m == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                z.conj() / m
            }
        })
        .collect();
    se_from_beams(ch, &f, &w, &omega, sigma2, p_t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{build_channel_factors, sample_scene, SceneParams};
    use crate::estimators::EstimateDiagnostics;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    #[test]
    fn rmse_reference_cases() {
        assert_eq!(rmse_wrapped(0.4, &[0.4, 0.4]).unwrap(), 0.0);
        // Wrap-aware difference across the branch cut.
        let r = rmse_wrapped(PI - 0.1, &[-PI + 0.1]).unwrap();
        assert!((r - 0.2).abs() < 1e-12);
        let r = rmse_wrapped(1.0, &[1.0 + 0.05, 1.0 - 0.05]).unwrap();
        assert!((r - 0.05).abs() < 1e-12);
        assert!(rmse_wrapped(0.0, &[]).is_err());
    }

    #[test]
    fn nmse_reference_cases() {
        let e = CMatrix::from_fn(3, 2, |r, c| Complex64::new((r + c) as f64 + 1.0, 0.5));
        assert_eq!(nmse(&e, &e).unwrap(), 0.0);
        let zero = CMatrix::zeros(3, 2);
        assert!((nmse(&e, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert!(nmse(&zero, &e).is_err());

        // A unit-norm perturbation of size delta gives delta^2 / ||E||^2.
        let delta = 0.01;
        let mut pert = e.clone();
        pert[(0, 0)] += Complex64::new(delta, 0.0);
        let want = delta * delta / e.norm_sqr();
        assert!((nmse(&e, &pert).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn gauged_nmse_removes_scale() {
        let e = CMatrix::from_fn(4, 3, |r, c| Complex64::new(r as f64 - 1.0, c as f64));
        let scaled = e.scale(Complex64::from_polar(3.0, 1.2));
        assert!(gauged_nmse(&e, &scaled).unwrap() < 1e-15);
        let zero = CMatrix::zeros(4, 3);
        assert!((gauged_nmse(&e, &zero).unwrap() - 1.0).abs() < 1e-15);
    }

    fn perfect_estimate(scene: &SceneParams) -> FrequencyEstimate {
        FrequencyEstimate {
            mu_bs: scene.mu_bs,
            psi_bs: scene.psi_bs,
            mu_ue: scene.mu_ue,
            psi_ue: scene.psi_ue,
            mu_y: scene.mu_y(),
            psi_z: scene.psi_z(),
            a_y: vec![],
            a_z: vec![],
            q_y: vec![],
            q_z: vec![],
            n_y: vec![],
            n_z: vec![],
            diagnostics: EstimateDiagnostics::default(),
        }
    }

    #[test]
    fn perfect_estimates_hit_ideal_benchmark() {
        let cfg = ArrayConfig::default_16();
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..5 {
            let scene = sample_scene(&mut rng);
            let ch = build_channel_factors(&cfg, &scene);
            let (sigma2, p_t) = (0.5, 1.0);
            let se =
                spectral_efficiency(&ch, &perfect_estimate(&scene), &cfg, sigma2, p_t).unwrap();
            let m = cfg.m() as f64;
            let q = cfg.q() as f64;
            let n = cfg.n() as f64;
            let ideal = (1.0 + p_t / sigma2 * m * q * n * n).log2();
            assert!(
                (se - ideal).abs() < 1e-9 * ideal,
                "se {se} vs ideal {ideal}"
            );
        }
    }

    #[test]
    fn mismatched_estimates_never_beat_ideal() {
        let cfg = ArrayConfig::default_16();
        let mut rng = StdRng::seed_from_u64(6);
        let scene = sample_scene(&mut rng);
        let ch = build_channel_factors(&cfg, &scene);
        let ideal = spectral_efficiency(&ch, &perfect_estimate(&scene), &cfg, 0.5, 1.0).unwrap();
        for _ in 0..20 {
            let wrong = sample_scene(&mut rng);
            let se = spectral_efficiency(&ch, &perfect_estimate(&wrong), &cfg, 0.5, 1.0).unwrap();
            assert!(se <= ideal + 1e-12);
        }
    }

    #[test]
    fn krf_style_beams_with_true_channels_are_ideal() {
        let cfg = ArrayConfig::default_16();
        let scene = sample_scene(&mut StdRng::seed_from_u64(7));
        let ch = build_channel_factors(&cfg, &scene);
        let se = spectral_efficiency_from_matrices(&ch, &ch.h(), &ch.g(), 0.25, 1.0).unwrap();
        let ideal = spectral_efficiency(&ch, &perfect_estimate(&scene), &cfg, 0.25, 1.0).unwrap();
        assert!((se - ideal).abs() < 1e-9 * ideal);
    }
}
