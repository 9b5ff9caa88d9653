//! Gevrey-class bump functions supported on the critical intervals.
//!
//! `f_n` equals 1 on `I_n/10`, lies in (0, 1] on the rest of `I_n`, and
//! vanishes outside `I_n`. It is assembled from the glue
//! `w_0(y) = p(y+2)/(p(y+2) + p(-y-1))` with `p(t) = exp(-t^{-1/(nu-1)})`,
//! with the transition zone mapped affinely onto `[b_n/10, b_n]` so that
//! the support is exactly `I_n` (the raw `w_1(10 x / b_n)` scaling would
//! cut the support at `I_n/5`).

use serde::{Deserialize, Serialize};

use crate::frequency::ConvergentTable;
use crate::jet::Jet;
use crate::orbit::CriticalIntervalFamily;
use crate::rational::Rat;
use crate::{Error, Result};
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BumpFunction {
    pub n: usize,
    /// Gevrey index of the glue, `1 < nu`.
    pub nu: f64,
    /// Half width `b_n` of the symmetric critical interval.
    pub half_width: f64,
    /// Plateau radius: `f_n = 1` on `[-inner, inner]`. At least `b_n/10`
    /// (the zone the angle identities are stated on); it may extend
    /// further, since the taper is only constrained to lie in (0, 1].
    pub inner: f64,
}

/// Build the bump for level `n` with the standard plateau `b_n/10`; `nu`
/// must satisfy `1 < nu < s` when used inside a Gevrey-class construction
/// (checked by the caller against its class; here only `nu > 1` is
/// enforced).
pub fn bump(n: usize, nu: f64, table: &ConvergentTable) -> Result<BumpFunction> {
    bump_with_plateau(n, nu, table, 0.1)
}

/// Bump with plateau radius `frac * b_n`, `1/10 <= frac < 1`.
pub fn bump_with_plateau(
    n: usize,
    nu: f64,
    table: &ConvergentTable,
    frac: f64,
) -> Result<BumpFunction> {
    if nu <= 1.0 {
        return Err(Error::InvalidInput("bump needs nu > 1".into()));
    }
    if !(0.1..1.0).contains(&frac) {
        return Err(Error::InvalidInput("plateau fraction must be in [1/10, 1)".into()));
    }
    table.require_depth(n, n + 1)?;
    let b: Rat = CriticalIntervalFamily::b_n(table, n);
    let half_width = b.to_f64().unwrap();
    Ok(BumpFunction {
        n,
        nu,
        half_width,
        inner: half_width * frac,
    })
}

impl BumpFunction {
    /// Evaluate at the signed representative `x in [-1/2, 1/2)` (the bump
    /// is centered on the critical point 0).
    pub fn eval(&self, x: f64) -> f64 {
        self.jet(x, 0).value()
    }

    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        self.jet(x, k).derivative(k)
    }

    pub fn jet(&self, x: f64, order: usize) -> Jet {
        let t = x.abs();
        if t <= self.inner {
            return Jet::constant(1.0, order);
        }
        if t >= self.half_width {
            return Jet::constant(0.0, order);
        }
        // Map |x| in [inner, b] onto y in [-1, -2] and apply w_0.
        let v = Jet::variable(x, order);
        let at = if x >= 0.0 { v } else { v.neg() };
        let y = at
            .sub(&Jet::constant(self.inner, order))
            .scale(-1.0 / (self.half_width - self.inner))
            .add(&Jet::constant(-1.0, order));
        self.w0(&y, order)
    }

    /// `w_0(y) = p(y+2) / (p(y+2) + p(-y-1))`, `p(t) = exp(-t^{-1/(nu-1)})`.
    fn w0(&self, y: &Jet, order: usize) -> Jet {
        let e = -1.0 / (self.nu - 1.0);
        let p = |t: &Jet| -> Option<Jet> {
            if t.value() <= 0.0 {
                None // p vanishes flatly
            } else {
                Some(t.powf(e).neg().exp())
            }
        };
        let a = y.add(&Jet::constant(2.0, order));
        let b = Jet::constant(-1.0, order).sub(y);
        match (p(&a), p(&b)) {
            (Some(pa), Some(pb)) => pa.div(&pa.add(&pb)),
            (Some(_), None) => Jet::constant(1.0, order),
            _ => Jet::constant(0.0, order),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::{convergents, synthesize, GrowthRule};

    fn table() -> ConvergentTable {
        convergents(&synthesize(&GrowthRule::Constant(1), 12, 0).unwrap())
    }

    #[test]
    fn bump_values_and_support() {
        let t = table();
        let f = bump(4, 2.0, &t).unwrap();
        assert_eq!(f.eval(0.0), 1.0);
        assert_eq!(f.eval(f.inner * 0.99), 1.0);
        assert_eq!(f.eval(f.half_width), 0.0);
        assert_eq!(f.eval(f.half_width * 1.5), 0.0);
        assert_eq!(f.eval(-f.half_width - 1e-9), 0.0);
        for k in 1..40 {
            let x = f.inner + (f.half_width - f.inner) * k as f64 / 40.0;
            let v = f.eval(x);
            assert!(v > 0.0 && v <= 1.0, "x = {x}, v = {v}");
            assert!((f.eval(-x) - v).abs() < 1e-15);
        }
    }

    #[test]
    fn bump_monotone_on_taper() {
        let t = table();
        let f = bump(5, 2.0, &t).unwrap();
        let mut prev = 1.0 + 1e-12;
        for k in 0..=200 {
            let x = f.inner + (f.half_width - f.inner) * k as f64 / 200.0;
            let v = f.eval(x);
            assert!(v <= prev + 1e-12, "not monotone at x = {x}");
            prev = v;
        }
    }

    #[test]
    fn bump_smooth_at_inner_edge() {
        let t = table();
        let f = bump(4, 2.0, &t).unwrap();
        // All low-order derivatives vanish at both edges of the taper.
        for k in 1..=3 {
            assert!(f.derivative(f.inner * 0.5, k).abs() < 1e-12);
            assert!(f.derivative(f.half_width * 1.01, k).abs() < 1e-12);
        }
        let h = (f.half_width - f.inner) * 1e-4;
        let mid = (f.inner + f.half_width) / 2.0;
        let fd = (f.eval(mid + h) - f.eval(mid - h)) / (2.0 * h);
        let an = f.derivative(mid, 1);
        assert!((fd - an).abs() < 1e-3 * an.abs().max(1.0));
    }
}
