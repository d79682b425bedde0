//! Dominant singular triplets of dense complex matrices.
//!
//! Two routes sit behind [`svd_rank1`]: a one-sided Jacobi decomposition for
//! small matrices (both dimensions at most [`JACOBI_DIM_LIMIT`]) and a
//! deterministic power iteration on the Gram matrix for anything larger.
//! Both are exact enough for the 1e-12 contracts the callers rely on.

use num_complex::Complex64;

use super::cmatrix::{vec_norm, CMatrix};
use crate::error::{Error, Result};

/// Matrices with both dimensions at or below this bound go through the full
/// Jacobi decomposition instead of power iteration.
pub const JACOBI_DIM_LIMIT: usize = 64;

/// Power iteration stops when the singular value estimate moves by less than
/// this relative amount between iterations.
pub const POWER_ITER_TOL: f64 = 1e-12;

/// Hard cap on power iterations; noise-dominated spectra may hit it, in which
/// case the current iterate is returned.
pub const POWER_ITER_CAP: usize = 500;

/// Dominant singular triplet `(u, s, v)` with `s >= 0`, `u` and `v` unit norm,
/// and `s * u * v^H` the best rank-one approximation of the input.
///
/// Gauge: the largest-magnitude entry of `u` is real nonnegative; `v` carries
/// the compensating phase so the product is unchanged.
pub fn svd_rank1(m: &CMatrix) -> Result<(Vec<Complex64>, f64, Vec<Complex64>)> {
    if m.norm_sqr() == 0.0 {
        return Err(Error::DegenerateInput { op: "svd_rank1" });
    }
    let (mut u, s, mut v) = if m.rows() <= JACOBI_DIM_LIMIT && m.cols() <= JACOBI_DIM_LIMIT {
        jacobi_dominant(m)
    } else {
        power_iteration(m)
    };
    fix_phase(&mut u, &mut v);
    Ok((u, s, v))
}

/// All singular values of `m` in descending order (one-sided Jacobi).
///
/// Intended for small matrices; used by residual diagnostics.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let (_, svals) = jacobi_orthogonalize(m);
    svals
}

/// Rotate the global phase so the largest-magnitude entry of `u` is real
/// nonnegative; `v` absorbs the inverse rotation.
fn fix_phase(u: &mut [Complex64], v: &mut [Complex64]) {
    let mut best = 0usize;
    let mut best_mag = -1.0f64;
    for (i, z) in u.iter().enumerate() {
        let mag = z.norm_sqr();
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    let mag = u[best].norm();
    if mag == 0.0 {
        return;
    }
    let phase = u[best] / mag;
    let rot = phase.conj();
    for z in u.iter_mut() {
        *z *= rot;
    }
    // (s u v^H) is invariant when v rotates by the same factor.
    for z in v.iter_mut() {
        *z *= rot;
    }
}

/// Power iteration on the smaller Gram matrix. Start vector is the first
/// column of `m` (falling back to the largest-norm column when the first is
/// zero), which keeps the routine deterministic.
fn power_iteration(m: &CMatrix) -> (Vec<Complex64>, f64, Vec<Complex64>) {
    let iterate_right = m.cols() <= m.rows();
    // Deterministic start: first nonzero column (or row slice) of m.
    let mut x: Vec<Complex64> = if iterate_right {
        let mut start = m.adjoint_matvec(m.col(0)).unwrap();
        if vec_norm(&start) == 0.0 {
            let best = best_column(m);
            start = m.adjoint_matvec(m.col(best)).unwrap();
        }
        start
    } else {
        let best = best_column(m);
        m.col_to_vec(best)
    };
    normalize(&mut x);

    let mut sigma = 0.0f64;
    for _ in 0..POWER_ITER_CAP {
        let y = if iterate_right {
            let mx = m.matvec(&x).unwrap();
            m.adjoint_matvec(&mx).unwrap()
        } else {
            let mhx = m.adjoint_matvec(&x).unwrap();
            m.matvec(&mhx).unwrap()
        };
        let sigma_sqr = vec_norm(&y);
        x = y;
        normalize(&mut x);
        let sigma_new = sigma_sqr.sqrt();
        let converged =
            (sigma_new - sigma).abs() <= POWER_ITER_TOL * sigma_new.max(f64::MIN_POSITIVE);
        sigma = sigma_new;
        if converged {
            break;
        }
    }

    if iterate_right {
        let v = x;
        let mut u = m.matvec(&v).unwrap();
        let s = vec_norm(&u);
        if s > 0.0 {
            for z in u.iter_mut() {
                *z /= s;
            }
        }
        (u, s, v)
    } else {
        let u = x;
        let mut vh = m.adjoint_matvec(&u).unwrap();
        let s = vec_norm(&vh);
        if s > 0.0 {
            for z in vh.iter_mut() {
                *z /= s;
            }
        }
        (u, s, vh)
    }
}

fn best_column(m: &CMatrix) -> usize {
    let mut best = 0usize;
    let mut best_norm = -1.0f64;
    for c in 0..m.cols() {
        let n = m.col(c).iter().map(|z| z.norm_sqr()).sum::<f64>();
        if n > best_norm {
            best_norm = n;
            best = c;
        }
    }
    best
}

fn normalize(v: &mut [Complex64]) {
    let n = vec_norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
}

/// One-sided Jacobi: orthogonalize the columns of a working copy by complex
/// plane rotations, accumulating the right factor. Returns the column basis
/// (unnormalized) and singular values sorted descending alongside the
/// accumulated `V`.
fn jacobi_dominant(m: &CMatrix) -> (Vec<Complex64>, f64, Vec<Complex64>) {
    // Work on the adjoint when the matrix is wide so the rotation count
    // follows the smaller dimension: A^H = s x y^H implies A = s y x^H.
    if m.cols() > m.rows() {
        let (x, s, y) = jacobi_dominant(&m.adjoint());
        return (y, s, x);
    }
    let (work, svals_v) = jacobi_sweeps(m);
    let (svals, v) = svals_v;
    // Dominant column index after sorting is 0 by construction.
    let s = svals[0];
    let dominant_col = work.col_to_vec(0);
    let mut u = dominant_col;
    if s > 0.0 {
        for z in u.iter_mut() {
            *z /= s;
        }
    }
    let v_dom = v.col_to_vec(0);
    (u, s, v_dom)
}

/// Run Jacobi sweeps and return singular values only.
fn jacobi_orthogonalize(m: &CMatrix) -> (CMatrix, Vec<f64>) {
    if m.cols() > m.rows() {
        return jacobi_orthogonalize(&m.adjoint());
    }
    let (work, (svals, _)) = jacobi_sweeps(m);
    (work, svals)
}

/// Core one-sided Jacobi loop; returns the rotated working matrix plus
/// `(singular values desc, V with matching column order)`.
fn jacobi_sweeps(m: &CMatrix) -> (CMatrix, (Vec<f64>, CMatrix)) {
    let n = m.cols();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);
    let total = m.norm_sqr();
    let tol = 1e-28 * total.max(f64::MIN_POSITIVE);
    const MAX_SWEEPS: usize = 60;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let (app, aqq, apq) = column_gram(&a, p, q);
                off += apq.norm_sqr();
                if apq.norm_sqr() <= tol * 1e-4 {
                    continue;
                }
                // Hermitian 2x2 eigen-rotation zeroing the off-diagonal.
                let beta = apq.norm();
                let phase = apq / beta;
                let tau = (aqq - app) / (2.0 * beta);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut a, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
            }
        }
        if off <= tol {
            break;
        }
    }

    // Column norms are the singular values; sort descending with V in step.
    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|c| vec_norm(a.col(c))).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());
    let a_sorted = CMatrix::from_fn(a.rows(), n, |r, c| a[(r, order[c])]);
    let v_sorted = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let svals: Vec<f64> = order.iter().map(|&c| norms[c]).collect();
    (a_sorted, (svals, v_sorted))
}

fn column_gram(a: &CMatrix, p: usize, q: usize) -> (f64, f64, Complex64) {
    let cp = a.col(p);
    let cq = a.col(q);
    let mut app = 0.0;
    let mut aqq = 0.0;
    let mut apq = Complex64::new(0.0, 0.0);
    for r in 0..a.rows() {
        app += cp[r].norm_sqr();
        aqq += cq[r].norm_sqr();
        apq += cp[r].conj() * cq[r];
    }
    (app, aqq, apq)
}

/// Apply the complex rotation `[c, s*phase; -s*conj(phase), c]` to columns
/// `p` and `q`.
fn rotate_columns(a: &mut CMatrix, p: usize, q: usize, c: f64, s: f64, phase: Complex64) {
    for r in 0..a.rows() {
        let xp = a[(r, p)];
        let xq = a[(r, q)];
        a[(r, p)] = xp * c - xq * (phase.conj() * s);
        a[(r, q)] = xp * (phase * s) + xq * c;
    }
}
