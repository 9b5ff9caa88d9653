//! Cubic Hermite interpolation on uniform grids.
//!
//! Correction functions are sampled on dense grids over their support and
//! evaluated between samples through this interpolant. Slopes come from
//! fourth-order centered differences so the interior error is O(h^4) for
//! smooth data; grid density is validated by refinement doubling where it
//! matters.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubicSpline {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl CubicSpline {
    /// Interpolant of `values[i] = f(x0 + i h)` over `[x0, x1]`.
    pub fn from_uniform_samples(x0: f64, x1: f64, values: Vec<f64>) -> Self {
        let n = values.len();
        assert!(n >= 5, "need at least 5 samples");
        let h = (x1 - x0) / (n as f64 - 1.0);
        let mut slopes = vec![0.0; n];
        for i in 0..n {
            slopes[i] = if i >= 2 && i + 2 < n {
                (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
                    / (12.0 * h)
            } else if i >= 1 && i + 1 < n {
                (values[i + 1] - values[i - 1]) / (2.0 * h)
            } else if i == 0 {
                // Third-order one-sided difference.
                (-11.0 * values[0] + 18.0 * values[1] - 9.0 * values[2] + 2.0 * values[3])
                    / (6.0 * h)
            } else {
                (11.0 * values[n - 1] - 18.0 * values[n - 2] + 9.0 * values[n - 3]
                    - 2.0 * values[n - 4])
                    / (6.0 * h)
            };
        }
        CubicSpline {
            x0,
            h,
            values,
            slopes,
        }
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.values.len();
        let t = (x - self.x0) / self.h;
        let i = (t.floor() as isize).clamp(0, n as isize - 2) as usize;
        (i, t - i as f64)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, t) = self.locate(x);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.h, self.slopes[i + 1] * self.h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * v0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * v1
            + (t3 - t2) * m1
    }

    /// Derivative of order `k <= 2` of the interpolant.
    pub fn eval_derivative(&self, x: f64, k: usize) -> f64 {
        assert!(k <= 2);
        if k == 0 {
            return self.eval(x);
        }
        let (i, t) = self.locate(x);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * self.h, self.slopes[i + 1] * self.h);
        let t2 = t * t;
        match k {
            1 => {
                ((6.0 * t2 - 6.0 * t) * v0
                    + (3.0 * t2 - 4.0 * t + 1.0) * m0
                    + (-6.0 * t2 + 6.0 * t) * v1
                    + (3.0 * t2 - 2.0 * t) * m1)
                    / self.h
            }
            _ => {
                ((12.0 * t - 6.0) * v0
                    + (6.0 * t - 4.0) * m0
                    + (-12.0 * t + 6.0) * v1
                    + (6.0 * t - 2.0) * m1)
                    / (self.h * self.h)
            }
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}
