//! Truncated Gevrey seminorm
//! `||f||_{s,K} = (4 pi^2 / 3) sup_k (1+k)^2 / (K^k (k!)^s) ||d^k f||_C0`,
//! evaluated over derivative orders `k <= k_max` only.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SeminormReport {
    pub s: f64,
    pub big_k: f64,
    pub k_max: usize,
    /// The truncated seminorm: max of `terms`.
    pub value: f64,
    /// Order attaining the max.
    pub attained_k: usize,
    /// Weighted terms per order `0..=k_max`.
    pub terms: Vec<f64>,
    /// Always true: orders above k_max are not examined.
    pub truncated: bool,
}

/// Evaluate the truncated seminorm of `f` given its derivative evaluator
/// `deriv(x, k)` on a uniform grid of the signed fundamental domain.
///
/// `k_max <= 8` (jet-backed closed forms go that far); the sup over x is a
/// grid sup, consistent with every other desk-scale estimate here.
pub fn gevrey_seminorm<F>(
    deriv: F,
    s: f64,
    big_k: f64,
    k_max: usize,
    grid: usize,
) -> Result<SeminormReport>
where
    F: Fn(f64, usize) -> f64,
{
    if k_max > 8 {
        return Err(Error::InvalidInput("truncated seminorm supports k <= 8".into()));
    }
    if !(s > 1.0) || !(big_k > 0.0) || grid < 16 {
        return Err(Error::InvalidInput(
            "need s > 1, K > 0 and a nontrivial grid".into(),
        ));
    }
    let front = 4.0 * std::f64::consts::PI * std::f64::consts::PI / 3.0;
    let mut terms = Vec::with_capacity(k_max + 1);
    let mut factorial = 1.0f64;
    for k in 0..=k_max {
        if k > 0 {
            factorial *= k as f64;
        }
        let mut sup = 0.0f64;
        for j in 0..grid {
            // Signed representative sweep over [-1/2, 1/2).
            let x = -0.5 + j as f64 / grid as f64;
            sup = sup.max(deriv(x, k).abs());
        }
        let weight = (1.0 + k as f64).powi(2) / (big_k.powi(k as i32) * factorial.powf(s));
        terms.push(front * weight * sup);
    }
    let (attained_k, value) = terms
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| {
            if *v > bv {
                (i, *v)
            } else {
                (bi, bv)
            }
        });
    Ok(SeminormReport {
        s,
        big_k,
        k_max,
        value,
        attained_k,
        terms,
        truncated: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::sample::{SampleClass, SampleFunction};

    #[test]
    fn constant_function() {
        let rep = gevrey_seminorm(|_, k| if k == 0 { 2.5 } else { 0.0 }, 2.0, 1.0, 4, 64).unwrap();
        let front = 4.0 * std::f64::consts::PI * std::f64::consts::PI / 3.0;
        assert!((rep.value - front * 2.5).abs() < 1e-12);
        assert_eq!(rep.attained_k, 0);
    }

    #[test]
    fn sine_large_k_dominated_by_k0() {
        // f = sin(2 pi x): ||d^k f|| = (2 pi)^k; with K large the k = 0
        // term wins.
        let tau = 2.0 * std::f64::consts::PI;
        let rep = gevrey_seminorm(
            |x: f64, k: usize| {
                let phase = tau * x + k as f64 * std::f64::consts::FRAC_PI_2;
                tau.powi(k as i32) * phase.sin()
            },
            2.0,
            100.0,
            6,
            256,
        )
        .unwrap();
        assert_eq!(rep.attained_k, 0);
        for k in 1..=6 {
            assert!(rep.terms[k] < rep.terms[0]);
        }
    }

    #[test]
    fn gevrey_sample_membership_consistent() {
        // phi_0 built with index s = 3 evaluated in the seminorm with the
        // same s: the weighted terms stay bounded for a suitable K, i.e.
        // the truncated value is finite and no term explodes with k.
        let f = SampleFunction::new(SampleClass::Gevrey { s: 3.0 }).unwrap();
        let rep = gevrey_seminorm(|x, k| f.derivative(x, k), 3.0, 40.0, 8, 256).unwrap();
        assert!(rep.value.is_finite());
        // Terms do not grow with k once the Gevrey weight kicks in.
        let head = rep.terms[0].max(rep.terms[1]).max(rep.terms[2]);
        for k in 3..=8 {
            assert!(rep.terms[k] <= 10.0 * head, "term {k} = {}", rep.terms[k]);
        }
    }
}
