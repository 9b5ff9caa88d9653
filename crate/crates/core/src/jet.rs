//! Truncated Taylor-series (jet) arithmetic.
//!
//! The sample functions and bump functions are compositions of exp, powers
//! and logarithms; their derivatives up to order ~8 are needed by the
//! Gevrey seminorm and the smoothness spot-checks. Jets propagate exact
//! Taylor coefficients through the closed forms, which is both faster and
//! far more accurate than nested finite differences.

/// Taylor coefficients `c[k] = f^{(k)}(x0) / k!` up to a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = value;
        Jet { c }
    }

    /// The identity function at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = x0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `f^{(k)}(x0)`.
    pub fn derivative(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 1..=k {
            fact *= i as f64;
        }
        self.c[k] * fact
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        assert_eq!(self.c.len(), rhs.c.len());
        Jet {
            c: self
                .c
                .iter()
                .zip(&rhs.c)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Jet {
        Jet {
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    pub fn neg(&self) -> Jet {
        self.scale(-1.0)
    }

    pub fn mul(&self, rhs: &Jet) -> Jet {
        assert_eq!(self.c.len(), rhs.c.len());
        let n = self.c.len();
        let mut c = vec![0.0; n];
        for i in 0..n {
            if self.c[i] == 0.0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Jet { c }
    }

    pub fn div(&self, rhs: &Jet) -> Jet {
        assert!(rhs.c[0] != 0.0, "division by a jet with zero value");
        let n = self.c.len();
        let mut c = vec![0.0; n];
        for k in 0..n {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= rhs.c[j] * c[k - j];
            }
            c[k] = acc / rhs.c[0];
        }
        Jet { c }
    }

    pub fn exp(&self) -> Jet {
        let n = self.c.len();
        let mut c = vec![0.0; n];
        c[0] = self.c[0].exp();
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * c[k - j];
            }
            c[k] = acc / k as f64;
        }
        Jet { c }
    }

    pub fn ln(&self) -> Jet {
        assert!(self.c[0] > 0.0, "log of non-positive jet value");
        let n = self.c.len();
        let mut c = vec![0.0; n];
        c[0] = self.c[0].ln();
        for k in 1..n {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= (j as f64 / k as f64) * c[j] * self.c[k - j];
            }
            c[k] = acc / self.c[0];
        }
        Jet { c }
    }

    /// Real power `f^a`; requires positive value.
    pub fn powf(&self, a: f64) -> Jet {
        assert!(self.c[0] > 0.0, "powf of non-positive jet value");
        let n = self.c.len();
        let mut c = vec![0.0; n];
        c[0] = self.c[0].powf(a);
        for k in 1..n {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((a + 1.0) * j as f64 / k as f64 - 1.0) * self.c[j] * c[k - j];
            }
            c[k] = acc / self.c[0];
        }
        Jet { c }
    }

    /// Integer power by repeated multiplication (any sign of value).
    pub fn powi(&self, mut e: u32) -> Jet {
        let mut acc = Jet::constant(1.0, self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let n = self.c.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        let (s0, c0) = self.c[0].sin_cos();
        s[0] = s0;
        c[0] = c0;
        for k in 1..n {
            let mut sa = 0.0;
            let mut ca = 0.0;
            for j in 1..=k {
                sa += j as f64 * self.c[j] * c[k - j];
                ca += j as f64 * self.c[j] * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = -ca / k as f64;
        }
        (Jet { c: s }, Jet { c })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        // f(x) = (1 + x)^3 at x = 2: f = 27, f' = 27, f'' = 18, f''' = 6.
        let x = Jet::variable(2.0, 4);
        let f = x.add(&Jet::constant(1.0, 4)).powi(3);
        assert!((f.derivative(0) - 27.0).abs() < 1e-12);
        assert!((f.derivative(1) - 27.0).abs() < 1e-12);
        assert!((f.derivative(2) - 18.0).abs() < 1e-12);
        assert!((f.derivative(3) - 6.0).abs() < 1e-12);
        assert!(f.derivative(4).abs() < 1e-12);
    }

    #[test]
    fn exp_matches_closed_form() {
        // f(x) = exp(-1/x); f'(x) = exp(-1/x)/x^2.
        let x0 = 0.7;
        let x = Jet::variable(x0, 3);
        let f = x.powf(-1.0).neg().exp();
        let v = (-1.0 / x0).exp();
        assert!((f.value() - v).abs() < 1e-14);
        assert!((f.derivative(1) - v / (x0 * x0)).abs() < 1e-12);
        // f'' = e^{-1/x} (1/x^4 - 2/x^3).
        let d2 = v * (x0.powi(-4) - 2.0 * x0.powi(-3));
        assert!((f.derivative(2) - d2).abs() < 1e-10);
    }

    #[test]
    fn ln_and_div_consistency() {
        let x0 = 1.9;
        let x = Jet::variable(x0, 6);
        let a = x.ln().exp();
        for k in 0..=6 {
            let expect = if k == 0 {
                x0
            } else if k == 1 {
                1.0
            } else {
                0.0
            };
            assert!((a.derivative(k) - expect).abs() < 1e-10, "k = {k}");
        }
        let b = Jet::constant(1.0, 6).div(&x);
        assert!((b.derivative(1) + x0.powi(-2)).abs() < 1e-12);
    }

    #[test]
    fn sin_cos_derivatives() {
        let x0 = 0.4;
        let x = Jet::variable(x0, 5);
        let (s, c) = x.sin_cos();
        assert!((s.derivative(1) - x0.cos()).abs() < 1e-13);
        assert!((s.derivative(2) + x0.sin()).abs() < 1e-13);
        assert!((c.derivative(1) + x0.sin()).abs() < 1e-13);
        // Chain rule through a composite argument.
        let (s2, _) = x.powi(2).sin_cos();
        assert!((s2.derivative(1) - 2.0 * x0 * (x0 * x0).cos()).abs() < 1e-12);
    }
}
