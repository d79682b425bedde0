//! Grid peak search for spatial frequencies.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::multilin::vec_norm;

/// Uniform search grid over a frequency interval with optional local
/// refinement of the winning grid point.
#[derive(Clone, Copy, Debug)]
pub struct PeakGrid {
    /// Number of grid points.
    pub resolution: usize,
    /// Inclusive lower edge of the interval.
    pub lo: f64,
    /// Exclusive upper edge of the interval.
    pub hi: f64,
    /// Apply one parabolic interpolation of the log-magnitude around the
    /// peak.
    pub refine: bool,
}

impl Default for PeakGrid {
    fn default() -> Self {
        Self {
            resolution: 4096,
            lo: -PI,
            hi: PI,
            refine: true,
        }
    }
}

impl PeakGrid {
    pub fn with_resolution(resolution: usize) -> Self {
        Self {
            resolution,
            ..Self::default()
        }
    }

    fn step(&self) -> f64 {
        (self.hi - self.lo) / self.resolution as f64
    }
}

/// Wrap a frequency into (-pi, pi].
pub fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    x - two_pi * ((x - PI) / two_pi).ceil()
}

/// Correlation magnitude `|v^H a(mu)|` of `v` against the steering vector at
/// `mu`; the peak-search objective. Invariant to any global complex scaling
/// of `v`.
fn correlation(v: &[Complex64], mu: f64) -> f64 {
    // v^H a(mu) = sum_l conj(v[l]) e^{-j l mu}
    let mut acc = Complex64::new(0.0, 0.0);
    let rot = Complex64::from_polar(1.0, -mu);
    let mut phase = Complex64::new(1.0, 0.0);
    for z in v {
        acc += z.conj() * phase;
        phase *= rot;
    }
    acc.norm()
}

/// Frequency maximizing `|v^H a(mu)|` over the grid. Ties break toward the
/// lowest grid index. With refinement enabled, one parabolic interpolation
/// of the log-magnitude through the peak and its circular neighbors sharpens
/// the estimate well below the grid step.
pub fn peak_search(v: &[Complex64], grid: &PeakGrid) -> Result<f64> {
    if v.is_empty() || vec_norm(v) == 0.0 {
        return Err(Error::DegenerateInput { op: "peak_search" });
    }
    let g = grid.resolution;
    assert!(g >= 2, "grid resolution must be at least 2");
    let step = grid.step();

    let mut best_idx = 0usize;
    let mut best_val = -1.0f64;
    let mut values = vec![0.0f64; g];
    for (i, slot) in values.iter_mut().enumerate() {
        let mu = grid.lo + step * i as f64;
        let val = correlation(v, mu);
        *slot = val;
        if val > best_val {
            best_val = val;
            best_idx = i;
        }
    }

    let mut mu_hat = grid.lo + step * best_idx as f64;
    if grid.refine && best_val > 0.0 {
        // Neighbors wrap around only when the grid covers one full period;
        // on a sub-interval an edge peak is left unrefined.
        let full_period = (grid.hi - grid.lo - 2.0 * PI).abs() <= 1e-12;
        let (left, right) = if full_period {
            (values[(best_idx + g - 1) % g], values[(best_idx + 1) % g])
        } else if best_idx > 0 && best_idx + 1 < g {
            (values[best_idx - 1], values[best_idx + 1])
        } else {
            (0.0, 0.0)
        };
        if left > 0.0 && right > 0.0 {
            let y0 = left.ln();
            let y1 = best_val.ln();
            let y2 = right.ln();
            let denom = y0 - 2.0 * y1 + y2;
            if denom < 0.0 {
                let delta = 0.5 * (y0 - y2) / denom;
                if delta.abs() <= 0.5 {
                    mu_hat += delta * step;
                }
            }
        }
    }
    Ok(wrap_to_pi(mu_hat))
}
