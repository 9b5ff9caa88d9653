//! Exact rational arithmetic on the circle of circumference 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Shorthand used throughout the crate.
pub type Rat = BigRational;

/// Build a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Floor of a rational as a BigInt.
pub fn rat_floor(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// A point on the circle R/Z, stored as a reduced rational in [0, 1).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirclePoint(Rat);

impl CirclePoint {
    /// Reduce an arbitrary rational mod 1.
    pub fn new(x: Rat) -> Self {
        let f = x.floor();
        CirclePoint(x - f)
    }

    pub fn zero() -> Self {
        CirclePoint(Rat::zero())
    }

    /// Representative in [0, 1).
    pub fn unsigned_repr(&self) -> &Rat {
        &self.0
    }

    /// Representative in [-1/2, 1/2).
    pub fn signed_repr(&self) -> Rat {
        if self.0 < rat(1, 2) {
            self.0.clone()
        } else {
            self.0.clone() - Rat::one()
        }
    }

    /// Translate by a rational step (the rotation by alpha).
    pub fn add(&self, step: &Rat) -> Self {
        CirclePoint::new(self.0.clone() + step)
    }

    /// Circle distance to 0, i.e. ||x|| = min(x, 1-x).
    pub fn dist_to_zero(&self) -> Rat {
        let one_minus = Rat::one() - &self.0;
        if self.0 <= one_minus {
            self.0.clone()
        } else {
            one_minus
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("circle point fits f64 range")
    }

    /// Signed representative as f64 (for sample-function evaluation).
    pub fn signed_f64(&self) -> f64 {
        self.signed_repr().to_f64().expect("fits f64")
    }
}

/// A half-open or half-closed arc on the circle with rational endpoints.
///
/// Stored as a real interval with `lo < hi <= lo + 1`; the arc may straddle
/// 0 (e.g. the symmetric critical interval `[-b_n, b_n)`). Membership lifts
/// the queried point to its representative in `[lo, lo + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleInterval {
    lo: Rat,
    hi: Rat,
    lo_closed: bool,
    hi_closed: bool,
}

impl CircleInterval {
    /// `[lo, hi)` with rational endpoints, `lo < hi <= lo + 1`.
    pub fn half_open(lo: Rat, hi: Rat) -> Self {
        Self::new(lo, hi, true, false)
    }

    /// `(lo, hi]` — the odd-level convention of the critical intervals.
    pub fn open_closed(lo: Rat, hi: Rat) -> Self {
        Self::new(lo, hi, false, true)
    }

    pub fn new(lo: Rat, hi: Rat, lo_closed: bool, hi_closed: bool) -> Self {
        assert!(lo < hi, "interval endpoints out of order");
        assert!(hi.clone() - &lo <= Rat::one(), "arc longer than the circle");
        CircleInterval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn length(&self) -> Rat {
        self.hi.clone() - &self.lo
    }

    /// Midpoint as a circle point.
    pub fn midpoint(&self) -> CirclePoint {
        CirclePoint::new((self.lo.clone() + &self.hi) / rat(2, 1))
    }

    /// Lift `x` to its representative in `[lo, lo + 1)`.
    pub fn lift(&self, x: &CirclePoint) -> Rat {
        let d = x.unsigned_repr().clone() - &self.lo;
        let k = d.floor();
        x.unsigned_repr().clone() - k
    }

    pub fn contains(&self, x: &CirclePoint) -> bool {
        let r = self.lift(x);
        let above = if self.lo_closed {
            r >= self.lo
        } else {
            r > self.lo
        };
        let below = if self.hi_closed {
            r <= self.hi
        } else {
            r < self.hi
        };
        above && below
    }

    /// Interior sample points `lo + (hi-lo)*k/(count+1)`, k = 1..=count.
    pub fn interior_samples(&self, count: usize) -> Vec<CirclePoint> {
        let len = self.length();
        (1..=count)
            .map(|k| {
                let t = self.lo.clone() + len.clone() * rat(k as i64, count as i64 + 1);
                CirclePoint::new(t)
            })
            .collect()
    }

    /// Endpoints that belong to the arc itself.
    pub fn contained_endpoints(&self) -> Vec<CirclePoint> {
        let mut out = Vec::new();
        if self.lo_closed {
            out.push(CirclePoint::new(self.lo.clone()));
        }
        if self.hi_closed {
            out.push(CirclePoint::new(self.hi.clone()));
        }
        out
    }
}

/// Merge possibly overlapping arcs into disjoint ones and return them with
/// the total measure. Arcs are treated as half-open `[lo, hi)` for merging.
pub fn merge_intervals(mut arcs: Vec<(Rat, Rat)>) -> (Vec<(Rat, Rat)>, Rat) {
    // Normalize each arc start into [0, 1), splitting wrap-around arcs.
    let mut flat: Vec<(Rat, Rat)> = Vec::new();
    for (lo, hi) in arcs.drain(..) {
        debug_assert!(lo < hi);
        let shift = lo.floor();
        let lo = lo - &shift;
        let hi = hi - &shift;
        if hi <= Rat::one() {
            flat.push((lo, hi));
        } else {
            flat.push((lo, Rat::one()));
            flat.push((Rat::zero(), hi - Rat::one()));
        }
    }
    flat.sort();
    let mut merged: Vec<(Rat, Rat)> = Vec::new();
    for (lo, hi) in flat {
        match merged.last_mut() {
            Some((_, phi)) if &lo <= phi => {
                if hi > *phi {
                    *phi = hi;
                }
            }
            _ => merged.push((lo, hi)),
        }
    }
    let mut measure = Rat::zero();
    for (lo, hi) in &merged {
        measure += hi.clone() - lo;
    }
    (merged, measure)
}

/// Is `x` in the union of disjoint sorted half-open arcs?
pub fn union_contains(arcs: &[(Rat, Rat)], x: &CirclePoint) -> bool {
    let r = x.unsigned_repr();
    // Binary search on the starts.
    let mut lo = 0usize;
    let mut hi = arcs.len();
    while lo < hi {
        let mid = (lo + hi) / 2;
        if &arcs[mid].0 <= r {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if lo == 0 {
        return false;
    }
    let (_, end) = &arcs[lo - 1];
    r < end
}

/// Exact absolute value.
pub fn rat_abs(x: &Rat) -> Rat {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_point_normalizes() {
        let x = CirclePoint::new(rat(7, 2));
        assert_eq!(x.unsigned_repr(), &rat(1, 2));
        let y = CirclePoint::new(rat(-1, 4));
        assert_eq!(y.unsigned_repr(), &rat(3, 4));
    }

    #[test]
    fn signed_repr_halves() {
        assert_eq!(CirclePoint::new(rat(3, 4)).signed_repr(), rat(-1, 4));
        assert_eq!(CirclePoint::new(rat(1, 4)).signed_repr(), rat(1, 4));
    }

    #[test]
    fn straddling_interval_membership() {
        // [-1/8, 1/8) straddles zero.
        let i = CircleInterval::half_open(rat(-1, 8), rat(1, 8));
        assert!(i.contains(&CirclePoint::new(rat(0, 1))));
        assert!(i.contains(&CirclePoint::new(rat(15, 16)))); // = -1/16
        assert!(!i.contains(&CirclePoint::new(rat(1, 8))));
        assert!(i.contains(&CirclePoint::new(rat(7, 8)))); // = -1/8, closed end
        assert!(!i.contains(&CirclePoint::new(rat(1, 2))));
    }

    #[test]
    fn open_closed_membership() {
        let i = CircleInterval::open_closed(rat(0, 1), rat(1, 4));
        assert!(!i.contains(&CirclePoint::zero()));
        assert!(i.contains(&CirclePoint::new(rat(1, 4))));
    }

    #[test]
    fn merge_and_query() {
        let arcs = vec![
            (rat(1, 10), rat(2, 10)),
            (rat(15, 100), rat(3, 10)),
            (rat(-1, 20), rat(1, 20)),
        ];
        let (merged, measure) = merge_intervals(arcs);
        assert_eq!(merged.len(), 3); // [0,1/20), [1/10,3/10), [19/20,1)
        assert_eq!(measure, rat(3, 10));
        assert!(union_contains(&merged, &CirclePoint::new(rat(19, 20))));
        assert!(union_contains(&merged, &CirclePoint::new(rat(1, 4))));
        assert!(!union_contains(&merged, &CirclePoint::new(rat(1, 2))));
    }
}
