//! Fisher information matrices and Cramér-Rao lower bounds for the
//! horizontal and vertical parameter triples.
//!
//! Per domain the observed structure is `S(eta) = (a ⊗ q) n^T` with
//! `eta = (mu_bs, mu_ue, mu_y)` (or the psi analogues), and the information
//! matrix is `F[i,j] = (2/sigma^2) Re tr{ dS^H/d eta_i  dS/d eta_j }`.

use num_complex::Complex64;

use crate::channel::{steering_vector, ArrayConfig, SceneParams};
use crate::error::{Error, Result};
use crate::multilin::{kron_vec, CMatrix};

/// Which parameter triple a Fisher matrix refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Horizontal: (mu_bs, mu_ue, mu_y).
    Y,
    /// Vertical: (psi_bs, psi_ue, psi_z).
    Z,
}

/// 3x3 Fisher information matrix for one domain.
#[derive(Clone, Debug)]
pub struct FimDomain {
    pub domain: Domain,
    pub f: [[f64; 3]; 3],
    pub sigma2: f64,
}

/// Elementwise derivative of the steering vector with respect to its spatial
/// frequency: entry `l` is `-j l e^{-j l mu}`.
pub fn steering_derivative(mu: f64, l: usize) -> Vec<Complex64> {
    (0..l)
        .map(|i| {
            let phase = Complex64::from_polar(1.0, -(i as f64) * mu);
            Complex64::new(0.0, -(i as f64)) * phase
        })
        .collect()
}

fn outer(u: &[Complex64], v: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(u.len(), v.len(), |r, c| u[r] * v[c])
}

/// Fisher information matrix for one domain of a scene.
pub fn fim_domain(
    scene: &SceneParams,
    cfg: &ArrayConfig,
    sigma2: f64,
    domain: Domain,
) -> Result<FimDomain> {
    if sigma2 <= 0.0 {
        return Err(Error::Config(
            "fim_domain requires a strictly positive noise variance".into(),
        ));
    }
    let (mu_bs, mu_ue, mu_comb, dims) = match domain {
        Domain::Y => (
            scene.mu_bs,
            scene.mu_ue,
            scene.mu_y(),
            (cfg.m_y, cfg.q_y, cfg.n_y),
        ),
        Domain::Z => (
            scene.psi_bs,
            scene.psi_ue,
            scene.psi_z(),
            (cfg.m_z, cfg.q_z, cfg.n_z),
        ),
    };
    let (l_bs, l_ue, l_irs) = dims;
    let a = steering_vector(mu_bs, l_bs);
    let a_d = steering_derivative(mu_bs, l_bs);
    let q = steering_vector(mu_ue, l_ue);
    let q_d = steering_derivative(mu_ue, l_ue);
    let n = steering_vector(mu_comb, l_irs);
    let n_d = steering_derivative(mu_comb, l_irs);

    let ds = [
        outer(&kron_vec(&a_d, &q), &n),
        outer(&kron_vec(&a, &q_d), &n),
        outer(&kron_vec(&a, &q), &n_d),
    ];
    let mut f = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let tr = ds[i].inner(&ds[j]).expect("derivative shapes agree");
            let val = 2.0 / sigma2 * tr.re;
            f[i][j] = val;
            f[j][i] = val;
        }
    }
    Ok(FimDomain { domain, f, sigma2 })
}

impl FimDomain {
    /// Scale the information content, e.g. by the total training energy
    /// `P_T * T * K` when overlaying bounds with simulated RMSE curves. The
    /// bounds shrink by the square root of the factor.
    pub fn scale_information(&self, factor: f64) -> Self {
        let mut f = self.f;
        for row in f.iter_mut() {
            for v in row.iter_mut() {
                *v *= factor;
            }
        }
        Self {
            domain: self.domain,
            f,
            sigma2: self.sigma2,
        }
    }

    /// Eigenvalues of the symmetric 3x3 matrix, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        sym3_eigenvalues(&self.f)
    }
}

/// Square roots of the diagonal of `F^{-1}`: the standard-deviation lower
/// bound per parameter. Near-singular information matrices are rejected with
/// a condition diagnostic instead of producing huge bounds.
pub fn crlb_bounds(fim: &FimDomain) -> Result<[f64; 3]> {
    let f = &fim.f;
    let det = det3(f);
    let eig = sym3_eigenvalues(f);
    let cond = if eig[0].abs() > 0.0 {
        eig[2].abs() / eig[0].abs()
    } else {
        f64::INFINITY
    };
    if !(det.is_finite()) || eig[0] <= 0.0 || cond > 1e12 {
        return Err(Error::SingularFim { condition: cond });
    }
    // Adjugate / determinant gives the diagonal of the inverse directly.
    let inv_diag = [
        (f[1][1] * f[2][2] - f[1][2] * f[2][1]) / det,
        (f[0][0] * f[2][2] - f[0][2] * f[2][0]) / det,
        (f[0][0] * f[1][1] - f[0][1] * f[1][0]) / det,
    ];
    let mut out = [0.0f64; 3];
    for (o, d) in out.iter_mut().zip(inv_diag) {
        if d < 0.0 {
            return Err(Error::SingularFim { condition: cond });
        }
        *o = d.sqrt();
    }
    Ok(out)
}

fn det3(f: &[[f64; 3]; 3]) -> f64 {
    f[0][0] * (f[1][1] * f[2][2] - f[1][2] * f[2][1])
        - f[0][1] * (f[1][0] * f[2][2] - f[1][2] * f[2][0])
        + f[0][2] * (f[1][0] * f[2][1] - f[1][1] * f[2][0])
}

/// Eigenvalues of a symmetric 3x3 matrix by the trigonometric closed form,
/// returned ascending.
fn sym3_eigenvalues(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut d = [m[0][0], m[1][1], m[2][2]];
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return d;
    }
    let p2 = (m[0][0] - q).powi(2) + (m[1][1] - q).powi(2) + (m[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (m[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let r = (det3(&b) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let e2 = 3.0 * q - e1 - e3;
    let mut out = [e1, e2, e3];
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}
