//! Multilinear algebra kernels: Kronecker/Khatri-Rao products, vectorization,
//! the Kronecker-to-rank-one rearrangement, rank-one approximations, block
//! permutations, and the Hadamard/DFT training codebooks.
//!
//! Everything here is a pure function over immutable values.

mod cmatrix;
mod svd;
mod tensor;

pub use cmatrix::{vec_dot, vec_norm, CMatrix};
pub use svd::{singular_values, svd_rank1, JACOBI_DIM_LIMIT, POWER_ITER_CAP, POWER_ITER_TOL};
pub use tensor::{hosvd_rank1_3, mode_product, refine_rank1, CTensor3, Rank1Triple};

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Kronecker product: block (i, j) of the result is `a[i,j] * b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (br, bc) = (b.rows(), b.cols());
    CMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, c| {
        a[(r / br, c / bc)] * b[(r % br, c % bc)]
    })
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Khatri-Rao product: column n is `kron(a[:,n], b[:,n])`.
pub fn khatri_rao(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch {
            op: "khatri_rao",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    let br = b.rows();
    Ok(CMatrix::from_fn(a.rows() * br, a.cols(), |r, c| {
        a[(r / br, c)] * b[(r % br, c)]
    }))
}

/// Elementwise (Hadamard) product.
pub fn hadamard_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeMismatch {
            op: "hadamard_product",
            left_rows: a.rows(),
            left_cols: a.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    Ok(CMatrix::from_fn(a.rows(), a.cols(), |r, c| {
        a[(r, c)] * b[(r, c)]
    }))
}

/// Column-stacking vectorization.
pub fn vec_of(a: &CMatrix) -> Vec<Complex64> {
    a.data().to_vec()
}

/// Inverse of [`vec_of`]: reshape a vector into a `rows x cols` matrix,
/// column-major.
pub fn unvec(v: &[Complex64], rows: usize, cols: usize) -> Result<CMatrix> {
    CMatrix::from_col_major(rows, cols, v)
}

/// Rearrangement turning a Kronecker structure into a rank-one structure:
/// if `x = A ⊗ B` with `A` of size `block_rows x block_cols`, the output
/// satisfies `x' = vec(B) vec(A)^T`.
pub fn van_loan_rearrange(x: &CMatrix, block_rows: usize, block_cols: usize) -> Result<CMatrix> {
    if block_rows == 0
        || block_cols == 0
        || !x.rows().is_multiple_of(block_rows)
        || !x.cols().is_multiple_of(block_cols)
    {
        return Err(Error::NonDivisibleBlocks {
            op: "van_loan_rearrange",
            rows: x.rows(),
            cols: x.cols(),
            block_rows,
            block_cols,
        });
    }
    let m2 = x.rows() / block_rows;
    let n2 = x.cols() / block_cols;
    Ok(CMatrix::from_fn(
        m2 * n2,
        block_rows * block_cols,
        |r, c| {
            // r indexes vec(B) = (k, l) column-major; c indexes vec(A) = (i, j).
            let (k, l) = (r % m2, r / m2);
            let (i, j) = (c % block_rows, c / block_rows);
            x[(i * m2 + k, j * n2 + l)]
        },
    ))
}

/// Best Frobenius approximation of `x` by `A ⊗ B` via the dominant singular
/// triplet of the rearranged matrix. `A` has unit Frobenius norm with its
/// largest-magnitude entry real nonnegative; `B` absorbs scale and phase.
pub fn nearest_kronecker(
    x: &CMatrix,
    block_rows: usize,
    block_cols: usize,
) -> Result<(CMatrix, CMatrix)> {
    let xr = van_loan_rearrange(x, block_rows, block_cols)?;
    if xr.norm_sqr() == 0.0 {
        return Err(Error::DegenerateInput {
            op: "nearest_kronecker",
        });
    }
    let m2 = x.rows() / block_rows;
    let n2 = x.cols() / block_cols;
    let (u, s, v) = svd_rank1(&xr)?;
    // x' = vec(B) vec(A)^T = s u v^H, so vec(A) = conj(v) and vec(B) = s u,
    // then re-gauge so A's largest entry is real nonnegative.
    let mut a_vec: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    let mut best = 0usize;
    for i in 0..a_vec.len() {
        if a_vec[i].norm_sqr() > a_vec[best].norm_sqr() {
            best = i;
        }
    }
    let mag = a_vec[best].norm();
    let rot = if mag > 0.0 {
        a_vec[best].conj() / mag
    } else {
        Complex64::new(1.0, 0.0)
    };
    for z in a_vec.iter_mut() {
        *z *= rot;
    }
    // B absorbs the inverse rotation so kron(A, B) is unchanged.
    let b_vec: Vec<Complex64> = u.iter().map(|z| z * s * rot.conj()).collect();
    Ok((
        unvec(&a_vec, block_rows, block_cols)?,
        unvec(&b_vec, m2, n2)?,
    ))
}

/// Row gather map relating the two layouts of a Khatri-Rao product of
/// Kronecker factors: with `e = (A ⊗ B) ⋄ (C ⊗ D)` and
/// `j = (A ⋄ C) ⊗ (B ⋄ D)` for `A: I x R`, `B: J x S`, `C: K x R`,
/// `D: L x S`, the returned map `p` satisfies `j.row(r) = e.row(p[r])`.
///
/// Dimension names follow the channel correspondence
/// `(A, B, C, D) = (H_y^T, H_z^T, G_y, G_z)`, i.e.
/// `(I, J, K, L) = (M_y, M_z, Q_y, Q_z)`.
pub fn block_perm_indices(
    m_y: usize,
    m_z: usize,
    q_y: usize,
    q_z: usize,
    _n_y: usize,
    _n_z: usize,
) -> Vec<usize> {
    let q = q_y * q_z;
    let mut p = Vec::with_capacity(m_y * m_z * q_y * q_z);
    for my in 0..m_y {
        for qy in 0..q_y {
            for mz in 0..m_z {
                for qz in 0..q_z {
                    let m = my * m_z + mz;
                    let qq = qy * q_z + qz;
                    p.push(m * q + qq);
                }
            }
        }
    }
    p
}

/// Gather rows: `out.row(r) = x.row(map[r])`.
pub fn gather_rows(x: &CMatrix, map: &[usize]) -> Result<CMatrix> {
    if map.len() != x.rows() {
        return Err(Error::LengthMismatch {
            op: "gather_rows",
            len: map.len(),
            expected: x.rows(),
        });
    }
    Ok(CMatrix::from_fn(x.rows(), x.cols(), |r, c| x[(map[r], c)]))
}

/// Inverse of a permutation given as an index map.
pub fn invert_permutation(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; map.len()];
    for (i, &m) in map.iter().enumerate() {
        inv[m] = i;
    }
    inv
}

/// Sylvester Hadamard matrix of order `n` (a power of two), scaled by
/// `1/sqrt(n)` so that `H H^H = I`.
pub fn hadamard_matrix(n: usize) -> Result<CMatrix> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut signs = vec![1.0f64];
    let mut order = 1usize;
    while order < n {
        let mut next = vec![0.0f64; 4 * order * order];
        for r in 0..order {
            for c in 0..order {
                let s = signs[r * order + c];
                next[r * 2 * order + c] = s;
                next[r * 2 * order + (c + order)] = s;
                next[(r + order) * 2 * order + c] = s;
                next[(r + order) * 2 * order + (c + order)] = -s;
            }
        }
        signs = next;
        order *= 2;
    }
    let scale = 1.0 / (n as f64).sqrt();
    Ok(CMatrix::from_fn(n, n, |r, c| {
        Complex64::new(signs[r * n + c] * scale, 0.0)
    }))
}

/// Row-orthonormal (possibly truncated) DFT codebook: `n x k` with
/// `W[m, l] = exp(-j 2 pi m l / k) / sqrt(k)`, so `W W^H = I_n` for `k >= n`.
pub fn dft_codebook(n: usize, k: usize) -> Result<CMatrix> {
    if k < n {
        return Err(Error::CodebookTooSmall { rows: n, cols: k });
    }
    let scale = 1.0 / (k as f64).sqrt();
    Ok(CMatrix::from_fn(n, k, |r, c| {
        let phase = -2.0 * PI * (r as f64) * (c as f64) / (k as f64);
        Complex64::from_polar(scale, phase)
    }))
}
