//! Third-order complex tensors, mode unfoldings, and rank-one approximation.

use num_complex::Complex64;

use super::cmatrix::{vec_norm, CMatrix};
use super::svd::svd_rank1;
use crate::error::{Error, Result};

/// Dense third-order tensor. Entry (i1, i2, i3) is stored at
/// `i1 + d1*(i2 + d2*i3)`, so mode-1 fibers are contiguous.
#[derive(Clone, Debug)]
pub struct CTensor3 {
    dims: (usize, usize, usize),
    data: Vec<Complex64>,
}

impl CTensor3 {
    pub fn zeros(d1: usize, d2: usize, d3: usize) -> Self {
        Self {
            dims: (d1, d2, d3),
            data: vec![Complex64::new(0.0, 0.0); d1 * d2 * d3],
        }
    }

    pub fn from_fn(
        d1: usize,
        d2: usize,
        d3: usize,
        mut f: impl FnMut(usize, usize, usize) -> Complex64,
    ) -> Self {
        let mut t = Self::zeros(d1, d2, d3);
        for i3 in 0..d3 {
            for i2 in 0..d2 {
                for i1 in 0..d1 {
                    t[(i1, i2, i3)] = f(i1, i2, i3);
                }
            }
        }
        t
    }

    /// Rank-one tensor `a ∘ b ∘ c`.
    pub fn outer3(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Self {
        Self::from_fn(a.len(), b.len(), c.len(), |i, j, k| a[i] * b[j] * c[k])
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims);
        Self {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dims, other.dims);
        Self {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Mode-n unfolding (n in 1..=3). Rows follow mode n; the remaining modes
    /// index columns with the lower mode varying fastest.
    pub fn unfold(&self, mode: usize) -> CMatrix {
        let (d1, d2, d3) = self.dims;
        match mode {
            1 => CMatrix::from_fn(d1, d2 * d3, |r, c| self[(r, c % d2, c / d2)]),
            2 => CMatrix::from_fn(d2, d1 * d3, |r, c| self[(c % d1, r, c / d1)]),
            3 => CMatrix::from_fn(d3, d1 * d2, |r, c| self[(c % d1, c / d1, r)]),
            _ => panic!("mode must be 1, 2, or 3"),
        }
    }

    /// Inverse of [`CTensor3::unfold`] for the same mode convention.
    pub fn fold(mode: usize, m: &CMatrix, dims: (usize, usize, usize)) -> Self {
        let (d1, d2, d3) = dims;
        match mode {
            1 => Self::from_fn(d1, d2, d3, |i1, i2, i3| m[(i1, i2 + d2 * i3)]),
            2 => Self::from_fn(d1, d2, d3, |i1, i2, i3| m[(i2, i1 + d1 * i3)]),
            3 => Self::from_fn(d1, d2, d3, |i1, i2, i3| m[(i3, i1 + d1 * i2)]),
            _ => panic!("mode must be 1, 2, or 3"),
        }
    }
}

impl std::ops::Index<(usize, usize, usize)> for CTensor3 {
    type Output = Complex64;
    fn index(&self, (i1, i2, i3): (usize, usize, usize)) -> &Complex64 {
        let (d1, d2, d3) = self.dims;
        debug_assert!(i1 < d1 && i2 < d2 && i3 < d3);
        &self.data[i1 + d1 * (i2 + d2 * i3)]
    }
}

impl std::ops::IndexMut<(usize, usize, usize)> for CTensor3 {
    fn index_mut(&mut self, (i1, i2, i3): (usize, usize, usize)) -> &mut Complex64 {
        let (d1, d2, d3) = self.dims;
        debug_assert!(i1 < d1 && i2 < d2 && i3 < d3);
        &mut self.data[i1 + d1 * (i2 + d2 * i3)]
    }
}

/// Contract mode `mode` of `t` with `v` (plain product, no conjugation),
/// producing a matrix over the remaining two modes in ascending mode order.
///
/// For a rank-one tensor `a ∘ b ∘ c`, contracting modes 1 and 2 with `g`, `f`
/// yields `(g^T a)(f^T b) c`.
pub fn mode_product(t: &CTensor3, v: &[Complex64], mode: usize) -> Result<CMatrix> {
    let (d1, d2, d3) = t.dims();
    let expected = match mode {
        1 => d1,
        2 => d2,
        3 => d3,
        _ => panic!("mode must be 1, 2, or 3"),
    };
    if v.len() != expected {
        return Err(Error::LengthMismatch {
            op: "mode_product",
            len: v.len(),
            expected,
        });
    }
    let out = match mode {
        1 => CMatrix::from_fn(d2, d3, |i2, i3| {
            (0..d1).map(|i1| v[i1] * t[(i1, i2, i3)]).sum()
        }),
        2 => CMatrix::from_fn(d1, d3, |i1, i3| {
            (0..d2).map(|i2| v[i2] * t[(i1, i2, i3)]).sum()
        }),
        3 => CMatrix::from_fn(d1, d2, |i1, i2| {
            (0..d3).map(|i3| v[i3] * t[(i1, i2, i3)]).sum()
        }),
        _ => unreachable!(),
    };
    Ok(out)
}

/// Factors of a rank-one tensor approximation `u1 ∘ u2 ∘ u3`.
///
/// `u1` and `u2` are unit norm with their largest-magnitude entry real
/// nonnegative; `u3` carries the scale and any residual phase.
#[derive(Clone, Debug)]
pub struct Rank1Triple {
    pub u1: Vec<Complex64>,
    pub u2: Vec<Complex64>,
    pub u3: Vec<Complex64>,
}

impl Rank1Triple {
    pub fn reconstruct(&self) -> CTensor3 {
        CTensor3::outer3(&self.u1, &self.u2, &self.u3)
    }

    /// Squared residual of the reconstruction against `t`.
    pub fn residual_sqr(&self, t: &CTensor3) -> f64 {
        t.sub(&self.reconstruct()).norm_sqr()
    }
}

/// Truncated rank-one HOSVD: `u1`, `u2` are the dominant left singular
/// vectors of the mode-1 and mode-2 unfoldings; `u3` is the least-squares
/// mode-3 factor given `u1` and `u2`, i.e. the tensor contracted with their
/// conjugates. Exact on rank-one inputs.
pub fn hosvd_rank1_3(t: &CTensor3) -> Result<Rank1Triple> {
    if t.norm_sqr() == 0.0 {
        return Err(Error::DegenerateInput {
            op: "hosvd_rank1_3",
        });
    }
    let (u1, _, _) = svd_rank1(&t.unfold(1))?;
    let (u2, _, _) = svd_rank1(&t.unfold(2))?;
    let u3 = ls_mode3(t, &u1, &u2)?;
    Ok(normalize_triple(Rank1Triple { u1, u2, u3 }))
}

/// One alternating refinement pass: re-solve each factor in turn against the
/// other two in the least-squares sense. The reconstruction error never
/// increases.
pub fn refine_rank1(t: &CTensor3, triple: &Rank1Triple) -> Result<Rank1Triple> {
    let conj = |v: &[Complex64]| v.iter().map(|z| z.conj()).collect::<Vec<_>>();

    // u1 | u2, u3
    let m23 = mode_product(t, &conj(&triple.u2), 2)?;
    let u3n = vec_norm(&triple.u3);
    let mut u1: Vec<Complex64> = {
        let w = conj(&triple.u3);
        (0..m23.rows())
            .map(|r| (0..m23.cols()).map(|c| m23[(r, c)] * w[c]).sum())
            .collect()
    };
    let n1 = vec_norm(&u1);
    if n1 == 0.0 || u3n == 0.0 {
        return Ok(triple.clone());
    }
    for z in u1.iter_mut() {
        *z /= n1;
    }

    // u2 | u1, u3
    let m13 = mode_product(t, &conj(&u1), 1)?;
    let mut u2: Vec<Complex64> = {
        let w = conj(&triple.u3);
        (0..m13.rows())
            .map(|r| (0..m13.cols()).map(|c| m13[(r, c)] * w[c]).sum())
            .collect()
    };
    let n2 = vec_norm(&u2);
    if n2 == 0.0 {
        return Ok(triple.clone());
    }
    for z in u2.iter_mut() {
        *z /= n2;
    }

    let u3 = ls_mode3(t, &u1, &u2)?;
    Ok(normalize_triple(Rank1Triple { u1, u2, u3 }))
}

/// Least-squares mode-3 factor for unit `u1`, `u2`: contract modes 1 and 2
/// with the conjugated factors.
fn ls_mode3(t: &CTensor3, u1: &[Complex64], u2: &[Complex64]) -> Result<Vec<Complex64>> {
    let g: Vec<Complex64> = u1.iter().map(|z| z.conj()).collect();
    let f: Vec<Complex64> = u2.iter().map(|z| z.conj()).collect();
    let m = mode_product(t, &g, 1)?;
    // m is d2 x d3; contract rows with f.
    Ok((0..m.cols())
        .map(|c| (0..m.rows()).map(|r| f[r] * m[(r, c)]).sum())
        .collect())
}

/// Push scale and phase into `u3` so that `u1`, `u2` satisfy the stated gauge
/// while the reconstruction is untouched.
fn normalize_triple(mut t: Rank1Triple) -> Rank1Triple {
    for u in [&mut t.u1, &mut t.u2] {
        let mut best = 0usize;
        for i in 0..u.len() {
            if u[i].norm_sqr() > u[best].norm_sqr() {
                best = i;
            }
        }
        let mag = u[best].norm();
        if mag == 0.0 {
            continue;
        }
        let rot = u[best].conj() / mag;
        for z in u.iter_mut() {
            *z *= rot;
        }
        for z in t.u3.iter_mut() {
            *z *= rot.conj();
        }
    }
    t
}
