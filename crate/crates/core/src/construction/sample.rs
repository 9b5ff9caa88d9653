//! Sample functions: the rotation-angle profiles with a single degenerate
//! zero whose flatness order matches the target smoothness class.
//!
//! Profiles are defined on the circle of circumference 1 through the
//! signed representative `x in [-1/2, 1/2)`. The classes that the source
//! construction states 2pi-periodically are rescaled by `t = 2 pi x` at
//! evaluation time; the `C^l` power profile is taken directly in circle
//! units.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

use crate::jet::Jet;
use crate::{Error, Result};

/// Smoothness class of the profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum SampleClass {
    /// `phi_0(x) = |x|^{l+1}` for `|x| <= delta0`, glued to a plateau below
    /// `pi/2` outside; C^l across the kink at 0.
    Cl { l: u32, delta0: f64 },
    /// `phi_0 = exp(-(log(8pi/t))^sigma - (log(8pi/(2pi-t)))^sigma)`,
    /// `sigma > 1`.
    Cinf { sigma: f64 },
    /// `phi_0 = exp(-t^{-1/(s-1)} - (2pi-t)^{-1/(s-1)})`, `s > 1`.
    Gevrey { s: f64 },
}

/// A sample function `phi_0 >= 0` with its unique zero at x = 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleFunction {
    pub class: SampleClass,
}

impl SampleFunction {
    pub fn new(class: SampleClass) -> Result<Self> {
        match class {
            SampleClass::Cl { l, delta0 } => {
                if l == 0 || !(0.0..0.5).contains(&delta0) || delta0 <= 0.0 {
                    return Err(Error::InvalidInput(
                        "Cl needs l >= 1 and 0 < delta0 < 1/2".into(),
                    ));
                }
            }
            SampleClass::Cinf { sigma } => {
                if sigma <= 1.0 {
                    return Err(Error::InvalidInput("Cinf needs sigma > 1".into()));
                }
            }
            SampleClass::Gevrey { s } => {
                if s <= 1.0 {
                    return Err(Error::InvalidInput("Gevrey needs s > 1".into()));
                }
            }
        }
        Ok(SampleFunction { class })
    }

    /// Evaluate at the signed representative `x in [-1/2, 1/2)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.jet(x, 0).value()
    }

    /// `d^k phi_0 / dx^k` at `x`, from the closed form via jets, `k <= 8`.
    pub fn derivative(&self, x: f64, k: usize) -> f64 {
        self.jet(x, k).derivative(k)
    }

    /// Taylor jet of the profile at `x` (signed representative).
    pub fn jet(&self, x: f64, order: usize) -> Jet {
        match self.class {
            SampleClass::Cl { l, delta0 } => cl_jet(x, l, delta0, order),
            SampleClass::Cinf { sigma } => {
                let t = to_two_pi(x, order);
                // exp(-(log(8pi/t))^sigma) vanishes flatly as t -> 0+ and
                // the mirrored factor as t -> 2pi-.
                if t.value() <= 0.0 || t.value() >= 2.0 * PI {
                    return Jet::constant(0.0, order);
                }
                let a = log_power_factor(&t, sigma, order);
                let t2 = Jet::constant(2.0 * PI, order).sub(&t);
                let b = log_power_factor(&t2, sigma, order);
                a.add(&b).neg().exp()
            }
            SampleClass::Gevrey { s } => {
                let t = to_two_pi(x, order);
                if t.value() <= 0.0 || t.value() >= 2.0 * PI {
                    return Jet::constant(0.0, order);
                }
                let c = -1.0 / (s - 1.0);
                let t2 = Jet::constant(2.0 * PI, order).sub(&t);
                t.powf(c).add(&t2.powf(c)).neg().exp()
            }
        }
    }
}

/// `t = 2 pi * (x mod 1)` as a jet in x.
fn to_two_pi(x: f64, order: usize) -> Jet {
    let unsigned = if x < 0.0 { x + 1.0 } else { x };
    Jet::variable(unsigned, order).scale(2.0 * PI)
}

/// `(log(8pi/t))^sigma` as a jet; requires `0 < t < 8pi`.
fn log_power_factor(t: &Jet, sigma: f64, order: usize) -> Jet {
    let c = Jet::constant(8.0 * PI, order);
    c.div(t).ln().powf(sigma)
}

/// The smooth monotone glue `w(u) = p(u)/(p(u) + p(1-u))`,
/// `p(t) = exp(-1/t)`: 0 for u <= 0, 1 for u >= 1, C-infinity.
pub fn smooth_step_jet(u: &Jet, order: usize) -> Jet {
    if u.value() <= 0.0 {
        return Jet::constant(0.0, order);
    }
    if u.value() >= 1.0 {
        return Jet::constant(1.0, order);
    }
    let p = |v: &Jet| v.powf(-1.0).neg().exp();
    let one_minus = Jet::constant(1.0, order).sub(u);
    let a = p(u);
    let b = p(&one_minus);
    a.div(&a.add(&b))
}

fn cl_jet(x: f64, l: u32, delta0: f64, order: usize) -> Jet {
    let ax = x.abs();
    // |x|^{l+1} as a jet; at the kink itself the jet is flat to every
    // represented order (the true function is C^l there).
    let power = |order: usize| -> Jet {
        if x == 0.0 {
            return Jet::constant(0.0, order);
        }
        let v = Jet::variable(x, order);
        let p = v.powi(l + 1);
        if x > 0.0 || (l + 1) % 2 == 0 {
            p
        } else {
            p.neg()
        }
    };
    if ax <= delta0 {
        power(order)
    } else {
        // Beyond delta0 the power law blends into the pi/4 plateau:
        // (1 - w) |x|^{l+1} + w pi/4 with the flat-germ step w. All
        // derivatives match |x|^{l+1} at the seam and vanish at the
        // antipode, and the value stays in (delta0^{l+1}, pi/2).
        let v = Jet::variable(x, order);
        let avx = if x >= 0.0 { v } else { v.neg() };
        let u = avx
            .sub(&Jet::constant(delta0, order))
            .scale(1.0 / (0.5 - delta0));
        let w = smooth_step_jet(&u, order);
        let one_minus_w = Jet::constant(1.0, order).sub(&w);
        one_minus_w
            .mul(&power(order))
            .add(&w.scale(FRAC_PI_4))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cl_profile_shape() {
        let f = SampleFunction::new(SampleClass::Cl { l: 1, delta0: 0.4 }).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert!((f.eval(0.1) - 0.01).abs() < 1e-15);
        assert!((f.eval(-0.1) - 0.01).abs() < 1e-15);
        // Outside delta0: strictly between delta0^{l+1} and pi/2.
        for x in [0.41, 0.45, 0.49, -0.45] {
            let v = f.eval(x);
            assert!(v > 0.4f64.powi(2) && v < PI / 2.0, "x = {x}, v = {v}");
        }
        // Kink order: first and second derivatives vanish at 0 from both sides.
        assert!(f.derivative(1e-9, 1).abs() < 1e-8);
        assert!(f.derivative(-1e-9, 1).abs() < 1e-8);
    }

    #[test]
    fn cl_seam_is_smooth() {
        // Finite differences across |x| = delta0 agree with the jet.
        let f = SampleFunction::new(SampleClass::Cl { l: 2, delta0: 0.3 }).unwrap();
        let h = 1e-6;
        for x0 in [0.3f64, -0.3] {
            let fd = (f.eval(x0 + h) - f.eval(x0 - h)) / (2.0 * h);
            let an = 3.0 * x0 * x0 * x0.signum(); // d/dx |x|^3 at the seam
            assert!(
                (fd - an).abs() < 1e-3,
                "seam derivative mismatch at {x0}: {fd} vs {an}"
            );
        }
    }

    #[test]
    fn cinf_profile_zero_and_positive() {
        let f = SampleFunction::new(SampleClass::Cinf { sigma: 1.5 }).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        for x in [0.05, 0.2, 0.45, -0.3, -0.05] {
            let v = f.eval(x);
            assert!(v > 0.0 && v < PI / 2.0, "x = {x}");
        }
        // Even symmetry.
        assert!((f.eval(0.2) - f.eval(-0.2)).abs() < 1e-15);
    }

    #[test]
    fn gevrey_profile_zero_and_positive() {
        let f = SampleFunction::new(SampleClass::Gevrey { s: 3.0 }).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        for x in [1e-3, 0.1, 0.3, -0.2] {
            let v = f.eval(x);
            assert!(v > 0.0 && v < PI / 2.0);
        }
        assert!((f.eval(0.31) - f.eval(-0.31)).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let cases = [
            SampleFunction::new(SampleClass::Cinf { sigma: 1.3 }).unwrap(),
            SampleFunction::new(SampleClass::Gevrey { s: 2.5 }).unwrap(),
        ];
        let h = 1e-5;
        for f in cases {
            for x in [0.07, 0.23, 0.41] {
                let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
                let an = f.derivative(x, 1);
                let scale = an.abs().max(1e-6);
                assert!((fd - an).abs() / scale < 1e-4, "x = {x}: {fd} vs {an}");
                let fd2 = (f.eval(x + h) - 2.0 * f.eval(x) + f.eval(x - h)) / (h * h);
                let an2 = f.derivative(x, 2);
                let scale2 = an2.abs().max(1e-3);
                assert!((fd2 - an2).abs() / scale2 < 1e-3);
            }
        }
    }
}
