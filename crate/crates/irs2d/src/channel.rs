//! Geometric BS-IRS-UE channel construction.
//!
//! Both terminals and the IRS carry uniform rectangular arrays, so every
//! steering vector factors into a horizontal (y) and a vertical (z) uniform
//! linear array response, and both hop channels factor into Kronecker
//! products of per-axis rank-one matrices.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::multilin::{kron, CMatrix};

/// Antenna/element counts per axis for the BS (`m_*`), UE (`q_*`), and IRS
/// (`n_*`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrayConfig {
    pub m_y: usize,
    pub m_z: usize,
    pub q_y: usize,
    pub q_z: usize,
    pub n_y: usize,
    pub n_z: usize,
}

impl ArrayConfig {
    pub fn new(m_y: usize, m_z: usize, q_y: usize, q_z: usize, n_y: usize, n_z: usize) -> Self {
        assert!(
            m_y >= 1 && m_z >= 1 && q_y >= 1 && q_z >= 1 && n_y >= 1 && n_z >= 1,
            "all array dimensions must be at least 1"
        );
        Self {
            m_y,
            m_z,
            q_y,
            q_z,
            n_y,
            n_z,
        }
    }

    /// 4x4 arrays everywhere (M = Q = N = 16).
    pub fn default_16() -> Self {
        Self::new(4, 4, 4, 4, 4, 4)
    }

    pub fn m(&self) -> usize {
        self.m_y * self.m_z
    }

    pub fn q(&self) -> usize {
        self.q_y * self.q_z
    }

    pub fn n(&self) -> usize {
        self.n_y * self.n_z
    }
}

/// Ground-truth geometry: azimuth/elevation pairs for the BS departure, the
/// IRS arrival and departure, and the UE arrival, plus the derived spatial
/// frequencies.
#[derive(Clone, Copy, Debug)]
pub struct SceneParams {
    pub phi_bs: f64,
    pub theta_bs: f64,
    pub phi_ue: f64,
    pub theta_ue: f64,
    pub phi_irs_a: f64,
    pub theta_irs_a: f64,
    pub phi_irs_d: f64,
    pub theta_irs_d: f64,

    pub mu_bs: f64,
    pub psi_bs: f64,
    pub mu_ue: f64,
    pub psi_ue: f64,
    pub mu_irs_a: f64,
    pub psi_irs_a: f64,
    pub mu_irs_d: f64,
    pub psi_irs_d: f64,
}

impl SceneParams {
    /// Build a scene from angles in radians.
    pub fn from_angles(
        (phi_bs, theta_bs): (f64, f64),
        (phi_ue, theta_ue): (f64, f64),
        (phi_irs_a, theta_irs_a): (f64, f64),
        (phi_irs_d, theta_irs_d): (f64, f64),
    ) -> Self {
        let (mu_bs, psi_bs) = spatial_freqs_from_angles(phi_bs, theta_bs);
        let (mu_ue, psi_ue) = spatial_freqs_from_angles(phi_ue, theta_ue);
        let (mu_irs_a, psi_irs_a) = spatial_freqs_from_angles(phi_irs_a, theta_irs_a);
        let (mu_irs_d, psi_irs_d) = spatial_freqs_from_angles(phi_irs_d, theta_irs_d);
        Self {
            phi_bs,
            theta_bs,
            phi_ue,
            theta_ue,
            phi_irs_a,
            theta_irs_a,
            phi_irs_d,
            theta_irs_d,
            mu_bs,
            psi_bs,
            mu_ue,
            psi_ue,
            mu_irs_a,
            psi_irs_a,
            mu_irs_d,
            psi_irs_d,
        }
    }

    /// Combined horizontal IRS spatial frequency (arrival plus departure).
    pub fn mu_y(&self) -> f64 {
        self.mu_irs_a + self.mu_irs_d
    }

    /// Combined vertical IRS spatial frequency.
    pub fn psi_z(&self) -> f64 {
        self.psi_irs_a + self.psi_irs_d
    }

    /// The six frequencies targeted by the estimators, in the fixed order
    /// (mu_bs, psi_bs, mu_ue, psi_ue, mu_y, psi_z).
    pub fn target_frequencies(&self) -> [f64; 6] {
        [
            self.mu_bs,
            self.psi_bs,
            self.mu_ue,
            self.psi_ue,
            self.mu_y(),
            self.psi_z(),
        ]
    }
}

/// Spatial frequencies from azimuth/elevation: `mu = pi sin(theta) sin(phi)`,
/// `psi = pi cos(theta)` (half-wavelength element spacing is implied by the
/// `pi` factor).
pub fn spatial_freqs_from_angles(phi: f64, theta: f64) -> (f64, f64) {
    (PI * theta.sin() * phi.sin(), PI * theta.cos())
}

/// Uniform linear array response `[1, e^{-j mu}, ..., e^{-j (l-1) mu}]`.
pub fn steering_vector(mu: f64, l: usize) -> Vec<Complex64> {
    (0..l)
        .map(|i| Complex64::from_polar(1.0, -(i as f64) * mu))
        .collect()
}

/// The four per-axis channel factors. Each is an outer product of two
/// steering vectors, hence numerically rank one.
#[derive(Clone, Debug)]
pub struct ChannelFactors {
    /// `b_y(mu_irs_a) a_y^T(mu_bs)`, size N_y x M_y.
    pub h_y: CMatrix,
    /// `b_z(psi_irs_a) a_z^T(psi_bs)`, size N_z x M_z.
    pub h_z: CMatrix,
    /// `q_y(mu_ue) p_y^T(mu_irs_d)`, size Q_y x N_y.
    pub g_y: CMatrix,
    /// `q_z(psi_ue) p_z^T(psi_irs_d)`, size Q_z x N_z.
    pub g_z: CMatrix,
}

impl ChannelFactors {
    /// Assembled BS-IRS channel `H = H_y ⊗ H_z` (N x M).
    pub fn h(&self) -> CMatrix {
        kron(&self.h_y, &self.h_z)
    }

    /// Assembled IRS-UE channel `G = G_y ⊗ G_z` (Q x N).
    pub fn g(&self) -> CMatrix {
        kron(&self.g_y, &self.g_z)
    }
}

fn outer(u: &[Complex64], v: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(u.len(), v.len(), |r, c| u[r] * v[c])
}

/// Construct the per-axis channel factors for a scene. The path attenuation
/// is fixed at one; amplitude enters the model only through transmit power.
pub fn build_channel_factors(cfg: &ArrayConfig, scene: &SceneParams) -> ChannelFactors {
    let a_y = steering_vector(scene.mu_bs, cfg.m_y);
    let a_z = steering_vector(scene.psi_bs, cfg.m_z);
    let b_y = steering_vector(scene.mu_irs_a, cfg.n_y);
    let b_z = steering_vector(scene.psi_irs_a, cfg.n_z);
    let p_y = steering_vector(scene.mu_irs_d, cfg.n_y);
    let p_z = steering_vector(scene.psi_irs_d, cfg.n_z);
    let q_y = steering_vector(scene.mu_ue, cfg.q_y);
    let q_z = steering_vector(scene.psi_ue, cfg.q_z);
    ChannelFactors {
        h_y: outer(&b_y, &a_y),
        h_z: outer(&b_z, &a_z),
        g_y: outer(&q_y, &p_y),
        g_z: outer(&q_z, &p_z),
    }
}

/// Effective IRS steering vectors: entrywise products of the arrival and
/// departure responses, equal to steering vectors at the combined
/// frequencies.
pub fn effective_irs_vectors(
    scene: &SceneParams,
    cfg: &ArrayConfig,
) -> (Vec<Complex64>, Vec<Complex64>) {
    (
        steering_vector(scene.mu_y(), cfg.n_y),
        steering_vector(scene.psi_z(), cfg.n_z),
    )
}

/// Azimuth range for scene sampling: one 120-degree sector.
pub const AZIMUTH_RANGE_DEG: (f64, f64) = (-60.0, 60.0);
/// Elevation range for scene sampling.
pub const ELEVATION_RANGE_DEG: (f64, f64) = (90.0, 130.0);

/// Draw a scene with azimuths uniform in [-60, 60] degrees and elevations
/// uniform in [90, 130] degrees.
pub fn sample_scene<R: Rng + ?Sized>(rng: &mut R) -> SceneParams {
    let deg = PI / 180.0;
    let mut az = || rng.gen_range(AZIMUTH_RANGE_DEG.0 * deg..AZIMUTH_RANGE_DEG.1 * deg);
    let bs_phi = az();
    let ue_phi = az();
    let irs_a_phi = az();
    let irs_d_phi = az();
    let mut el = || rng.gen_range(ELEVATION_RANGE_DEG.0 * deg..ELEVATION_RANGE_DEG.1 * deg);
    let bs_theta = el();
    let ue_theta = el();
    let irs_a_theta = el();
    let irs_d_theta = el();
    SceneParams::from_angles(
        (bs_phi, bs_theta),
        (ue_phi, ue_theta),
        (irs_a_phi, irs_a_theta),
        (irs_d_phi, irs_d_theta),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multilin::{hadamard_product, singular_values, vec_of};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn spatial_freq_reference_points() {
        let deg = PI / 180.0;
        let (mu, psi) = spatial_freqs_from_angles(90.0 * deg, 90.0 * deg);
        assert!((mu - PI).abs() < 1e-12);
        assert!(psi.abs() < 1e-12);

        let (mu, _) = spatial_freqs_from_angles(0.0, 42.0 * deg);
        assert!(mu.abs() < 1e-12);

        let (mu, psi) = spatial_freqs_from_angles(30.0 * deg, 120.0 * deg);
        assert!((mu - PI * (120.0 * deg).sin() * 0.5).abs() < 1e-12);
        assert!((mu - 1.360349523).abs() < 1e-8);
        assert!((psi + PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn steering_vector_reference_points() {
        let v = steering_vector(0.0, 4);
        for z in &v {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
        let v = steering_vector(PI, 2);
        assert!((v[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((v[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn joint_ura_response_matches_kron_of_axes() {
        // Element m = m_z + (m_y - 1) M_z of the URA response equals the
        // Kronecker product of the per-axis responses.
        let deg = PI / 180.0;
        let (phi, theta) = (37.0 * deg, 105.0 * deg);
        let (m_y, m_z) = (3usize, 4usize);
        let (mu, psi) = spatial_freqs_from_angles(phi, theta);
        let joint: Vec<Complex64> = {
            let a_y = steering_vector(mu, m_y);
            let a_z = steering_vector(psi, m_z);
            crate::multilin::kron_vec(&a_y, &a_z)
        };
        for my in 0..m_y {
            for mz in 0..m_z {
                let m = mz + my * m_z;
                let phase =
                    -PI * ((my as f64) * theta.sin() * phi.sin() + (mz as f64) * theta.cos());
                let want = Complex64::from_polar(1.0, phase);
                assert!((joint[m] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn factors_have_rank_one_and_kron_assembles() {
        let cfg = ArrayConfig::default_16();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let scene = sample_scene(&mut rng);
            let ch = build_channel_factors(&cfg, &scene);
            for f in [&ch.h_y, &ch.h_z, &ch.g_y, &ch.g_z] {
                let sv = singular_values(f);
                assert!(sv[1] < 1e-12 * sv[0]);
            }
            // H equals the direct two-dimensional construction.
            let b = crate::multilin::kron_vec(
                &steering_vector(scene.mu_irs_a, cfg.n_y),
                &steering_vector(scene.psi_irs_a, cfg.n_z),
            );
            let a = crate::multilin::kron_vec(
                &steering_vector(scene.mu_bs, cfg.m_y),
                &steering_vector(scene.psi_bs, cfg.m_z),
            );
            let h_direct = CMatrix::from_fn(cfg.n(), cfg.m(), |r, c| b[r] * a[c]);
            let h = ch.h();
            assert!(h.sub(&h_direct).unwrap().norm() < 1e-12 * h.norm());

            // vec(H) = a kron b (vec identity on the outer product).
            let vh = vec_of(&h);
            let ab = crate::multilin::kron_vec(&a, &b);
            let diff: f64 = vh
                .iter()
                .zip(&ab)
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-12 * h.norm());
        }
    }

    #[test]
    fn all_zero_frequencies_give_all_ones_channels() {
        let cfg = ArrayConfig::new(2, 2, 2, 2, 2, 2);
        let scene = SceneParams::from_angles(
            (0.0, PI / 2.0),
            (0.0, PI / 2.0),
            (0.0, PI / 2.0),
            (0.0, PI / 2.0),
        );
        let ch = build_channel_factors(&cfg, &scene);
        let h = ch.h();
        for r in 0..h.rows() {
            for c in 0..h.cols() {
                assert!((h[(r, c)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn effective_irs_vector_is_entrywise_product() {
        let cfg = ArrayConfig::default_16();
        let mut rng = StdRng::seed_from_u64(8);
        let scene = sample_scene(&mut rng);
        let (n_y, n_z) = effective_irs_vectors(&scene, &cfg);
        let b_y = CMatrix::col_vector(&steering_vector(scene.mu_irs_a, cfg.n_y));
        let p_y = CMatrix::col_vector(&steering_vector(scene.mu_irs_d, cfg.n_y));
        let prod = hadamard_product(&b_y, &p_y).unwrap();
        for (i, z) in n_y.iter().enumerate() {
            assert!((z - prod[(i, 0)]).norm() < 1e-12);
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
        let b_z = CMatrix::col_vector(&steering_vector(scene.psi_irs_a, cfg.n_z));
        let p_z = CMatrix::col_vector(&steering_vector(scene.psi_irs_d, cfg.n_z));
        let prod_z = hadamard_product(&b_z, &p_z).unwrap();
        for (i, z) in n_z.iter().enumerate() {
            assert!((z - prod_z[(i, 0)]).norm() < 1e-12);
        }
    }

    #[test]
    fn steering_frequency_addition() {
        let (mu1, mu2, l) = (0.7, -1.3, 9);
        let s1 = CMatrix::col_vector(&steering_vector(mu1, l));
        let s2 = CMatrix::col_vector(&steering_vector(mu2, l));
        let sum = CMatrix::col_vector(&steering_vector(mu1 + mu2, l));
        let prod = hadamard_product(&s1, &s2).unwrap();
        assert!(prod.sub(&sum).unwrap().norm() < 1e-12);
    }

    #[test]
    fn sampled_scenes_respect_ranges() {
        let mut rng = StdRng::seed_from_u64(42);
        let deg = PI / 180.0;
        for _ in 0..10_000 {
            let s = sample_scene(&mut rng);
            for phi in [s.phi_bs, s.phi_ue, s.phi_irs_a, s.phi_irs_d] {
                assert!((-60.0 * deg..=60.0 * deg).contains(&phi));
            }
            for theta in [s.theta_bs, s.theta_ue, s.theta_irs_a, s.theta_irs_d] {
                assert!((90.0 * deg..=130.0 * deg).contains(&theta));
            }
            for f in [
                s.mu_bs,
                s.psi_bs,
                s.mu_ue,
                s.psi_ue,
                s.mu_irs_a,
                s.psi_irs_a,
                s.mu_irs_d,
                s.psi_irs_d,
            ] {
                assert!((-PI..=PI).contains(&f));
            }
        }
    }

    #[test]
    fn fixed_seed_reproduces_scene() {
        let a = sample_scene(&mut StdRng::seed_from_u64(123));
        let b = sample_scene(&mut StdRng::seed_from_u64(123));
        assert_eq!(a.mu_bs, b.mu_bs);
        assert_eq!(a.psi_z(), b.psi_z());
    }
}
