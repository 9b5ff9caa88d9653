//! Exceptional sets: backward-shifted balls around the critical point,
//! excluded when certifying finite-LE lower bounds.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::frequency::ConvergentTable;
use crate::rational::{merge_intervals, union_contains, CirclePoint, Rat};
use crate::{Error, Result};

/// Budget guard on the number of shifted balls.
pub const MAX_SHIFTS: u64 = 500_000;

/// The union `B_n = U_{l=1}^{[q_{n+1}^{3/2}]} (B(0, q_{n+1}^{-2}) - l alpha)`
/// as merged disjoint arcs with exact endpoints.
#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalSet {
    pub level: usize,
    /// Merged disjoint half-open arcs, sorted by left endpoint in [0, 1).
    #[serde(skip)]
    pub intervals: Vec<(Rat, Rat)>,
    pub interval_count: usize,
    /// Exact total measure as f64 for reporting.
    pub measure: f64,
    #[serde(skip)]
    pub measure_exact: Rat,
    /// Ball radius `q_{n+1}^{-2}`.
    pub radius: f64,
    /// Number of shifts `[q_{n+1}^{3/2}]`.
    pub shift_count: u64,
}

impl ExceptionalSet {
    pub fn contains(&self, x: &CirclePoint) -> bool {
        union_contains(&self.intervals, x)
    }
}

/// `[q^{3/2}] = isqrt(q^3)` exactly.
fn floor_q_three_halves(q: &BigInt) -> BigInt {
    (q * q * q).sqrt()
}

/// Build `B_n` per the standard count `[q_{n+1}^{3/2}]`.
pub fn exceptional_set(table: &ConvergentTable, n: usize) -> Result<ExceptionalSet> {
    let count = floor_q_three_halves(table.q(n + 1))
        .to_u64()
        .ok_or_else(|| Error::BudgetExceeded("shift count overflows u64".into()))?;
    exceptional_set_with_count(table, n, count)
}

/// Build the same union with an explicit shift count (the `l = 1..=count`
/// range); used by tests and by budget-capped callers.
pub fn exceptional_set_with_count(
    table: &ConvergentTable,
    n: usize,
    count: u64,
) -> Result<ExceptionalSet> {
    table.require_depth(n, n + 2)?;
    if count == 0 {
        return Err(Error::InvalidInput("shift count must be >= 1".into()));
    }
    if count > MAX_SHIFTS {
        return Err(Error::BudgetExceeded(format!(
            "shift count {count} exceeds {MAX_SHIFTS}"
        )));
    }
    let q1 = table.q(n + 1);
    let radius = Rat::new(BigInt::one(), q1 * q1);
    let alpha = table.alpha_hat();
    let arcs: Vec<(Rat, Rat)> = (1..=count)
        .map(|l| {
            let shift = alpha.clone() * Rat::from(BigInt::from(l));
            (-radius.clone() - &shift, radius.clone() - &shift)
        })
        .collect();
    let (intervals, measure_exact) = merge_intervals(arcs);
    Ok(ExceptionalSet {
        level: n,
        interval_count: intervals.len(),
        measure: measure_exact.to_f64().unwrap(),
        measure_exact,
        radius: radius.to_f64().unwrap(),
        shift_count: count,
        intervals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::{convergents, synthesize, GrowthRule};
    use crate::rational::rat;
    use num_traits::Zero;

    fn golden(depth: usize) -> ConvergentTable {
        convergents(&synthesize(&GrowthRule::Constant(1), depth, 0).unwrap())
    }

    #[test]
    fn measure_bound_holds_exactly() {
        let t = golden(14);
        for n in 2..=7 {
            let b = exceptional_set(&t, n).unwrap();
            // measure <= 2 * [q^{3/2}] * q^{-2} <= 2 q_{n+1}^{-1/2}.
            let q1 = Rat::from(t.q(n + 1).clone());
            let bound = Rat::from(BigInt::from(2 * b.shift_count)) / (q1.clone() * &q1);
            assert!(b.measure_exact <= bound);
            let loose = 2.0 / (t.q_u64(n + 1) as f64).sqrt();
            assert!(b.measure <= loose + 1e-15);
        }
    }

    #[test]
    fn single_ball_case() {
        let t = golden(14);
        let b = exceptional_set_with_count(&t, 4, 1).unwrap();
        assert_eq!(b.interval_count, 1);
        let q1 = Rat::from(t.q(5).clone());
        assert_eq!(b.measure_exact, rat(2, 1) / (q1.clone() * &q1));
    }

    #[test]
    fn membership_shifted_center() {
        let t = golden(14);
        let b = exceptional_set(&t, 4).unwrap();
        // x = 0 - alpha is the center of the l = 1 ball.
        let x = CirclePoint::new(-t.alpha_hat());
        assert!(b.contains(&x));
        // The critical point itself is not excluded (shifts start at l=1)
        // unless a later ball happens to wrap onto it; check directly.
        let zero = CirclePoint::zero();
        let expect = b
            .intervals
            .iter()
            .any(|(lo, hi)| lo <= &Rat::zero() && &Rat::zero() < hi);
        assert_eq!(b.contains(&zero), expect);
    }

    #[test]
    fn disjoint_and_sorted() {
        let t = golden(12);
        let b = exceptional_set(&t, 3).unwrap();
        for w in b.intervals.windows(2) {
            assert!(w[0].1 < w[1].0, "arcs overlap or touch");
        }
    }
}
