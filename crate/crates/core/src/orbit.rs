//! Circle-rotation orbit structure: three-distance gaps, first-entry times,
//! and the exact first-return partition of the critical intervals `I_n`.
//!
//! Everything here is exact. Orbits of `T: x -> x + alpha_hat` are stepped
//! as integer residues modulo a common denominator whenever that
//! denominator fits in a `u128` (the usual case), falling back to full
//! rational arithmetic otherwise, so brute-force oracles compare equal to
//! closed forms with zero tolerance.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::frequency::ConvergentTable;
use crate::rational::{CircleInterval, CirclePoint, Rat};
use crate::{Error, Result};

/// Which of the two return times applies to a point of `I_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubInterval {
    /// `I_n^0`: the fast zone with forward return time `q_n`.
    Fast0,
    /// `I_n^i`, `1 <= i <= a_{n+2}`: the ladder translated by `T^{q_{n+1}}`.
    Ladder(u64),
    /// `I_n^*`: the sliver mapped into `I_n^0` by `T^{q_{n+1}}`.
    Star,
}

impl std::fmt::Display for SubInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SubInterval::Fast0 => write!(f, "I0"),
            SubInterval::Ladder(i) => write!(f, "I{i}"),
            SubInterval::Star => write!(f, "I*"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `[0, |z_n| + |z_{n+1}|)` for even n, `(0, |z_n| + |z_{n+1}|]` for odd.
    Asymmetric,
    /// `[-b_n, b_n)` with `b_n = (|z_n| + |z_{n+1}|)/2`, both parities.
    Symmetric,
}

/// The critical interval `I_n` and its exact return-time partition.
#[derive(Clone, Debug)]
pub struct CriticalIntervalFamily {
    pub n: usize,
    pub convention: Convention,
    /// `I_n` itself.
    pub interval: CircleInterval,
    /// `I_n^0`.
    pub fast0: CircleInterval,
    /// `I_n^i` for `i = 1..=a_{n+2}`.
    pub ladder: Vec<CircleInterval>,
    /// `I_n^*`.
    pub star: CircleInterval,
}

impl CriticalIntervalFamily {
    /// Half width `b_n` of the symmetric convention.
    pub fn b_n(table: &ConvergentTable, n: usize) -> Rat {
        (table.abs_z(n) + table.abs_z(n + 1)) / Rat::from(BigInt::from(2))
    }

    pub fn subinterval_of(&self, x: &CirclePoint) -> Option<SubInterval> {
        if self.fast0.contains(x) {
            return Some(SubInterval::Fast0);
        }
        if self.star.contains(x) {
            return Some(SubInterval::Star);
        }
        for (k, arc) in self.ladder.iter().enumerate() {
            if arc.contains(x) {
                return Some(SubInterval::Ladder(k as u64 + 1));
            }
        }
        None
    }

    pub fn arc(&self, sub: SubInterval) -> Result<&CircleInterval> {
        match sub {
            SubInterval::Fast0 => Ok(&self.fast0),
            SubInterval::Star => Ok(&self.star),
            SubInterval::Ladder(i) => self
                .ladder
                .get(i as usize - 1)
                .ok_or_else(|| Error::InvalidInput(format!("no ladder interval I^{i}"))),
        }
    }

    /// Check that `I_n^0, I_n^*, I_n^i` tile `I_n` exactly (shared endpoints,
    /// matching open/closed sides, no gaps).
    pub fn verify_cover(&self) -> bool {
        let mut arcs: Vec<&CircleInterval> = Vec::with_capacity(self.ladder.len() + 2);
        arcs.push(&self.fast0);
        arcs.push(&self.star);
        arcs.extend(self.ladder.iter());
        arcs.sort_by(|a, b| a.lo().cmp(b.lo()));
        if arcs[0].lo() != self.interval.lo()
            || arcs[0].lo_closed() != self.interval.lo_closed()
        {
            return false;
        }
        for w in arcs.windows(2) {
            if w[0].hi() != w[1].lo() || w[0].hi_closed() == w[1].lo_closed() {
                return false;
            }
        }
        let last = arcs.last().unwrap();
        last.hi() == self.interval.hi() && last.hi_closed() == self.interval.hi_closed()
    }
}

/// Build `I_n` with exact rational endpoints from the convergent table.
pub fn critical_intervals(
    table: &ConvergentTable,
    n: usize,
    convention: Convention,
) -> Result<CriticalIntervalFamily> {
    table.require_depth(n, n + 3)?;
    let zn = table.abs_z(n);
    let zn1 = table.abs_z(n + 1);
    let zn2 = table.abs_z(n + 2);
    let a_n2 = table
        .quotient(n + 2)
        .to_u64()
        .ok_or_else(|| Error::InvalidInput("a_{n+2} too large to enumerate ladder".into()))?;
    let even = n % 2 == 0;
    let shift = match convention {
        Convention::Asymmetric => Rat::zero(),
        // Recenter so that I_n = [-b_n, b_n): the asymmetric interval has
        // width 2 b_n, so the partition translates verbatim.
        Convention::Symmetric => -CriticalIntervalFamily::b_n(table, n),
    };
    let seg = |lo: Rat, hi: Rat| -> CircleInterval {
        if even {
            CircleInterval::half_open(lo + &shift, hi + &shift)
        } else {
            CircleInterval::open_closed(lo + &shift, hi + &shift)
        }
    };
    let full = zn.clone() + &zn1;
    let interval = match convention {
        Convention::Asymmetric => seg(Rat::zero(), full.clone()),
        // Section-4 convention is [-b_n, b_n), half-open for both parities.
        Convention::Symmetric => {
            let b = CriticalIntervalFamily::b_n(table, n);
            CircleInterval::half_open(-b.clone(), b)
        }
    };
    let (fast0, ladder, star) = if even {
        let fast0 = seg(Rat::zero(), zn1.clone());
        let star = seg(zn1.clone(), zn1.clone() + &zn2);
        let ladder = (1..=a_n2)
            .map(|i| {
                let i = BigInt::from(i);
                let lo = zn.clone() - zn1.clone() * Rat::from(i.clone() - BigInt::one());
                let hi = zn.clone() - zn1.clone() * Rat::from(i - BigInt::from(2));
                seg(lo, hi)
            })
            .collect();
        (fast0, ladder, star)
    } else {
        let fast0 = seg(zn.clone(), full.clone());
        let star = seg(zn.clone() - &zn2, zn.clone());
        let ladder = (1..=a_n2)
            .map(|i| {
                let i = BigInt::from(i);
                let lo = zn1.clone() * Rat::from(i.clone() - BigInt::one());
                let hi = zn1.clone() * Rat::from(i);
                seg(lo, hi)
            })
            .collect();
        (fast0, ladder, star)
    };
    Ok(CriticalIntervalFamily {
        n,
        convention,
        interval,
        fast0,
        ladder,
        star,
    })
}

// ---------------------------------------------------------------------------
// Integer-residue orbit stepping
// ---------------------------------------------------------------------------

const MAX_SCALED_BITS: u64 = 126;

#[derive(Clone, Copy, Debug)]
struct ScaledArc {
    lo: u128,
    len: u128,
    lo_closed: bool,
    hi_closed: bool,
}

impl ScaledArc {
    #[inline]
    fn contains(&self, pos: u128, l: u128) -> bool {
        let d = if pos >= self.lo {
            pos - self.lo
        } else {
            l - self.lo + pos
        };
        if d.is_zero() {
            self.lo_closed
        } else if d < self.len {
            true
        } else {
            d == self.len && self.hi_closed
        }
    }
}

/// Common-denominator view of an orbit and a set of target arcs.
struct ScaledOrbit {
    l: u128,
    pos: u128,
    step: u128,
    arcs: Vec<ScaledArc>,
}

fn scaled_setup(
    x: &CirclePoint,
    alpha: &Rat,
    targets: &[&CircleInterval],
) -> Option<ScaledOrbit> {
    let mut l: BigInt = x.unsigned_repr().denom().clone();
    l = l.lcm(alpha.denom());
    for t in targets {
        l = l.lcm(t.lo().denom());
        l = l.lcm(t.hi().denom());
    }
    if l.bits() > MAX_SCALED_BITS {
        return None;
    }
    let l_u = l.to_u128()?;
    let scale = |r: &Rat| -> u128 {
        let v = (r.numer() * (&l / r.denom())).mod_floor(&l);
        v.to_u128().unwrap()
    };
    let pos = scale(x.unsigned_repr());
    let step = scale(alpha);
    let arcs = targets
        .iter()
        .map(|t| {
            let lo = scale(t.lo());
            let len_big = (t.hi().clone() - t.lo()) * Rat::from(l.clone());
            let len = len_big.to_integer().to_u128().unwrap();
            ScaledArc {
                lo,
                len,
                lo_closed: t.lo_closed(),
                hi_closed: t.hi_closed(),
            }
        })
        .collect();
    Some(ScaledOrbit {
        l: l_u,
        pos,
        step,
        arcs,
    })
}

/// Smallest `j >= start` such that `T^{±j} x` lies in `target`, capped.
pub fn first_hit(
    x: &CirclePoint,
    alpha: &Rat,
    target: &CircleInterval,
    direction: Direction,
    start: u64,
    cap: u64,
    context: &str,
) -> Result<u64> {
    if let Some(mut orbit) = scaled_setup(x, alpha, &[target]) {
        let step = match direction {
            Direction::Forward => orbit.step,
            Direction::Backward => (orbit.l - orbit.step) % orbit.l,
        };
        let arc = orbit.arcs[0];
        // Advance to the start offset.
        for _ in 0..start {
            orbit.pos += step;
            if orbit.pos >= orbit.l {
                orbit.pos -= orbit.l;
            }
        }
        let mut j = start;
        loop {
            if arc.contains(orbit.pos, orbit.l) {
                return Ok(j);
            }
            if j >= cap {
                return Err(Error::CapExceeded {
                    cap,
                    context: context.to_string(),
                });
            }
            orbit.pos += step;
            if orbit.pos >= orbit.l {
                orbit.pos -= orbit.l;
            }
            j += 1;
        }
    }
    // Rational fallback for oversized denominators.
    let signed_step = match direction {
        Direction::Forward => alpha.clone(),
        Direction::Backward => -alpha.clone(),
    };
    let mut pos = x.clone();
    for _ in 0..start {
        pos = pos.add(&signed_step);
    }
    let mut j = start;
    loop {
        if target.contains(&pos) {
            return Ok(j);
        }
        if j >= cap {
            return Err(Error::CapExceeded {
                cap,
                context: context.to_string(),
            });
        }
        pos = pos.add(&signed_step);
        j += 1;
    }
}

// ---------------------------------------------------------------------------
// Three-distance structure
// ---------------------------------------------------------------------------

/// The ordered orbit segment `X_n = {q alpha_hat mod 1 : 0 <= q < q_{n+1}}`
/// with its gap structure.
#[derive(Clone, Debug)]
pub struct ThreeDistanceStructure {
    pub n: usize,
    /// `(point, q)` sorted by circle position; `points[0]` is 0 itself.
    pub points: Vec<(CirclePoint, u64)>,
    /// `gaps[k]` is the gap from `points[k]` to its circular successor.
    pub gaps: Vec<Rat>,
    /// The two admissible gap values `(|z_n|, |z_n| + |z_{n+1}|)`.
    pub small_gap: Rat,
    pub large_gap: Rat,
}

impl ThreeDistanceStructure {
    /// Number of gaps equal to the large value.
    pub fn large_gap_count(&self) -> usize {
        self.gaps.iter().filter(|g| **g == self.large_gap).count()
    }

    /// The successor rule: the gap adjacent to a point is `|z_n|` exactly
    /// when the relevant coefficient satisfies `q < q_{n+1} - q_n`. For even
    /// `n` the rule keys the gap after a point on that point's coefficient;
    /// for odd `n` it keys the gap before a point (equivalently the gap
    /// after `points[k]` is keyed on `points[k+1]`).
    pub fn successor_rule_holds(&self, table: &ConvergentTable) -> bool {
        let threshold = table.q_u64(self.n + 1) - table.q_u64(self.n);
        let m = self.points.len();
        for k in 0..m {
            let keyed_q = if self.n % 2 == 0 {
                self.points[k].1
            } else {
                self.points[(k + 1) % m].1
            };
            let expect_small = keyed_q < threshold;
            let actual_small = self.gaps[k] == self.small_gap;
            if expect_small != actual_small {
                return false;
            }
        }
        true
    }
}

/// Enumerate and sort `X_n`; every gap must be `|z_n|` or `|z_n|+|z_{n+1}|`.
pub fn three_distance(table: &ConvergentTable, n: usize) -> Result<ThreeDistanceStructure> {
    table.require_depth(n, n + 2)?;
    let qn1 = table.q_u64(n + 1);
    let alpha = table.alpha_hat();
    let denom = alpha
        .denom()
        .to_u128()
        .ok_or_else(|| Error::InvalidInput("q_M too large for three-distance scan".into()))?;
    let step = alpha.numer().to_u128().unwrap() % denom;
    let mut pts: Vec<(u128, u64)> = Vec::with_capacity(qn1 as usize);
    let mut pos: u128 = 0;
    for q in 0..qn1 {
        pts.push((pos, q));
        pos += step;
        if pos >= denom {
            pos -= denom;
        }
    }
    pts.sort_unstable();
    let small_gap = table.abs_z(n);
    let large_gap = table.abs_z(n) + table.abs_z(n + 1);
    let to_rat = |v: u128| Rat::new(BigInt::from(v), BigInt::from(denom));
    let mut gaps = Vec::with_capacity(pts.len());
    for k in 0..pts.len() {
        let here = pts[k].0;
        let next = pts[(k + 1) % pts.len()].0;
        let gap = if k + 1 == pts.len() {
            denom - here + next
        } else {
            next - here
        };
        let gap = to_rat(gap);
        if gap != small_gap && gap != large_gap {
            return Err(Error::Domain(format!(
                "three-distance violation at level {n}: gap {gap}"
            )));
        }
        gaps.push(gap);
    }
    let points = pts
        .into_iter()
        .map(|(v, q)| (CirclePoint::new(to_rat(v)), q))
        .collect();
    Ok(ThreeDistanceStructure {
        n,
        points,
        gaps,
        small_gap,
        large_gap,
    })
}

// ---------------------------------------------------------------------------
// First entry and first return
// ---------------------------------------------------------------------------

/// `min{j >= 0 : T^j x in [-b_n, b_n)}`; always `< q_{n+1}`.
pub fn first_entry_time(x: &CirclePoint, table: &ConvergentTable, n: usize) -> Result<u64> {
    table.require_depth(n, n + 2)?;
    let fam_interval = {
        let b = CriticalIntervalFamily::b_n(table, n);
        CircleInterval::half_open(-b.clone(), b)
    };
    let qn1 = table.q_u64(n + 1);
    first_hit(
        x,
        &table.alpha_hat(),
        &fam_interval,
        Direction::Forward,
        0,
        qn1,
        "first_entry_time",
    )
}

/// Exact first-return time of `x in I_n` by brute iteration.
pub fn return_time_brute(
    x: &CirclePoint,
    table: &ConvergentTable,
    n: usize,
    direction: Direction,
    convention: Convention,
    cap: u64,
) -> Result<u64> {
    if table.is_finite_expansion() {
        return Err(Error::Domain(
            "orbit operations reject finite (rational) expansions".into(),
        ));
    }
    let fam = critical_intervals(table, n, convention)?;
    if !fam.interval.contains(x) {
        return Err(Error::Domain(format!("point not in I_{n}")));
    }
    first_hit(
        x,
        &table.alpha_hat(),
        &fam.interval,
        direction,
        1,
        cap,
        "return_time_brute",
    )
}

/// Closed-form first-return time for the asymmetric convention.
///
/// Forward: `q_n` on `I_n^0` and `q_{n+1}` on `I_n \ I_n^0`. Backward: the
/// mirrored partition, derived from the forward return map being a
/// bijection of `I_n` (its inverse is the backward first return): the
/// backward-fast zone is `T^{q_n}(I_n^0) = I_n^1`, so the time is `q_n` on
/// `I_n^1` and `q_{n+1}` elsewhere. The brute-force oracle freezes this.
pub fn return_time_closed(
    x: &CirclePoint,
    table: &ConvergentTable,
    n: usize,
    direction: Direction,
) -> Result<(u64, SubInterval)> {
    table.require_depth(n, n + 3)?;
    let fam = critical_intervals(table, n, Convention::Asymmetric)?;
    let sub = fam
        .subinterval_of(x)
        .ok_or_else(|| Error::Domain(format!("point not in I_{n}")))?;
    let time = match direction {
        Direction::Forward => match sub {
            SubInterval::Fast0 => table.q_u64(n),
            _ => table.q_u64(n + 1),
        },
        Direction::Backward => match sub {
            SubInterval::Ladder(1) => table.q_u64(n),
            _ => table.q_u64(n + 1),
        },
    };
    Ok((time, sub))
}

/// Closed-form first-return time for the symmetric interval `[-b_n, b_n)`.
///
/// Validated against the brute-force oracle and frozen: lifting
/// `y = x + b_n` into `[0, 2 b_n)`, the fast zone (time `q_n`) is
/// `y in [0, |z_{n+1}|)` forward / `y in [|z_n|, 2 b_n)` backward for even
/// `n`, and the two swap for odd `n`; everywhere else the time is `q_{n+1}`.
pub fn symmetric_return_time_closed(
    x: &CirclePoint,
    table: &ConvergentTable,
    n: usize,
    direction: Direction,
) -> Result<u64> {
    table.require_depth(n, n + 3)?;
    let b = CriticalIntervalFamily::b_n(table, n);
    let interval = CircleInterval::half_open(-b.clone(), b.clone());
    if !interval.contains(x) {
        return Err(Error::Domain(format!("point not in symmetric I_{n}")));
    }
    let y = interval.lift(x) + &b; // in [0, 2 b_n)
    let zn = table.abs_z(n);
    let zn1 = table.abs_z(n + 1);
    let fast = match (n % 2 == 0, direction) {
        (true, Direction::Forward) => y < zn1,
        (true, Direction::Backward) => y >= zn,
        (false, Direction::Forward) => y >= zn,
        (false, Direction::Backward) => y < zn1,
    };
    Ok(if fast {
        table.q_u64(n)
    } else {
        table.q_u64(n + 1)
    })
}

/// One maximal piece of the symmetric `I_n` on which both first-return
/// times are constant.
///
/// The return-time fields jump at `x_f = -b_n + |z_{n+1}|` and
/// `x_b = b_n - |z_{n+1}|`; every field derived from return blocks (frame
/// angles, corrections) is smooth strictly inside a region and genuinely
/// discontinuous across these two points, so region-aware sampling is the
/// only way to represent such fields exactly.
#[derive(Clone, Debug)]
pub struct ReturnRegion {
    pub lo: Rat,
    pub hi: Rat,
    pub r_plus: u64,
    pub r_minus: u64,
}

/// The three constant-return regions of the symmetric `I_n = [-b_n, b_n)`,
/// ordered left to right (half-open, left endpoint included).
pub fn symmetric_return_regions(table: &ConvergentTable, n: usize) -> Result<Vec<ReturnRegion>> {
    table.require_depth(n, n + 3)?;
    let b = CriticalIntervalFamily::b_n(table, n);
    let zn1 = table.abs_z(n + 1);
    let x_f = -b.clone() + &zn1;
    let x_b = b.clone() - &zn1;
    let qn = table.q_u64(n);
    let qn1 = table.q_u64(n + 1);
    let (left, right) = if n % 2 == 0 {
        ((qn, qn1), (qn1, qn))
    } else {
        ((qn1, qn), (qn, qn1))
    };
    Ok(vec![
        ReturnRegion {
            lo: -b.clone(),
            hi: x_f.clone(),
            r_plus: left.0,
            r_minus: left.1,
        },
        ReturnRegion {
            lo: x_f,
            hi: x_b.clone(),
            r_plus: qn1,
            r_minus: qn1,
        },
        ReturnRegion {
            lo: x_b,
            hi: b,
            r_plus: right.0,
            r_minus: right.1,
        },
    ])
}

// ---------------------------------------------------------------------------
// Return map images
// ---------------------------------------------------------------------------

/// Image of a subinterval under its first-return map, verified exactly on
/// endpoints: `T^{q_n}(I_n^0) = I_n^1`, `T^{q_{n+1}}(I_n^i) = I_n^{i+1}`
/// for `i < a_{n+2}`, `T^{q_{n+1}}(I_n^{a_{n+2}})` lands in `I_n^* u I_n^0`,
/// and `T^{q_{n+1}}(I_n^*)` lands in `I_n^0`.
pub fn return_map_image(
    table: &ConvergentTable,
    n: usize,
    sub: SubInterval,
) -> Result<Vec<SubInterval>> {
    table.require_depth(n, n + 3)?;
    let fam = critical_intervals(table, n, Convention::Asymmetric)?;
    let a_n2 = table.quotient(n + 2).to_u64().unwrap();
    let src = fam.arc(sub)?;
    // `exact` marks images that coincide with the target arc endpoint for
    // endpoint; Star and the top ladder rung only land inside their targets.
    let (step, expected, exact): (Rat, Vec<SubInterval>, bool) = match sub {
        SubInterval::Fast0 => (table.z(n).clone(), vec![SubInterval::Ladder(1)], true),
        SubInterval::Ladder(i) if i < a_n2 => {
            (table.z(n + 1).clone(), vec![SubInterval::Ladder(i + 1)], true)
        }
        SubInterval::Ladder(i) if i == a_n2 => (
            table.z(n + 1).clone(),
            vec![SubInterval::Star, SubInterval::Fast0],
            false,
        ),
        SubInterval::Ladder(i) => {
            return Err(Error::InvalidInput(format!("no ladder interval I^{i}")))
        }
        SubInterval::Star => (table.z(n + 1).clone(), vec![SubInterval::Fast0], false),
    };
    let img_lo = src.lo().clone() + &step;
    let img_hi = src.hi().clone() + &step;
    // Exact verification of the translated endpoints against the targets.
    let lo_arc = fam.arc(expected[0])?;
    let hi_arc = fam.arc(*expected.last().unwrap())?;
    let ok = if exact {
        img_lo == *lo_arc.lo() && img_hi == *lo_arc.hi()
    } else {
        let union_lo = lo_arc.lo().min(hi_arc.lo());
        let union_hi = lo_arc.hi().max(hi_arc.hi());
        img_lo >= *union_lo && img_hi <= *union_hi
    };
    if !ok {
        return Err(Error::Domain(format!(
            "return-map endpoint verification failed for {sub} at level {n}"
        )));
    }
    Ok(expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::{convergents, synthesize, GrowthRule};
    use crate::rational::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn golden(depth: usize) -> ConvergentTable {
        convergents(&synthesize(&GrowthRule::Constant(1), depth, 0).unwrap())
    }

    #[test]
    fn golden_three_distance_level2() {
        let t = golden(12);
        let td = three_distance(&t, 2).unwrap();
        assert_eq!(td.points.len(), 3); // q_3 = 3
        assert!(td.gaps.iter().all(|g| *g == td.small_gap || *g == td.large_gap));
        assert!(td.successor_rule_holds(&t));
    }

    #[test]
    fn large_gap_count_equals_qn() {
        let t = golden(14);
        for n in 1..=8 {
            let td = three_distance(&t, n).unwrap();
            assert_eq!(td.large_gap_count() as u64, t.q_u64(n), "level {n}");
            assert!(td.successor_rule_holds(&t), "successor rule at level {n}");
        }
    }

    #[test]
    fn interval_family_covers_exactly() {
        let t = golden(14);
        for n in 1..=9 {
            let fam = critical_intervals(&t, n, Convention::Asymmetric).unwrap();
            assert!(fam.verify_cover(), "cover failed at level {n}");
            assert_eq!(fam.interval.length(), t.abs_z(n) + t.abs_z(n + 1));
        }
    }

    #[test]
    fn forward_return_times_match_lemma() {
        let t = golden(14);
        for n in 2..=8 {
            let fam = critical_intervals(&t, n, Convention::Asymmetric).unwrap();
            let qn = t.q_u64(n);
            let qn1 = t.q_u64(n + 1);
            let cap = t.q_u64(n + 2) + qn1 + 2;
            let mut check = |x: &CirclePoint| {
                let (closed, sub) = return_time_closed(x, &t, n, Direction::Forward).unwrap();
                let brute =
                    return_time_brute(x, &t, n, Direction::Forward, Convention::Asymmetric, cap)
                        .unwrap();
                assert_eq!(closed, brute, "mismatch at level {n}, x = {x:?}");
                match sub {
                    SubInterval::Fast0 => assert_eq!(closed, qn),
                    _ => assert_eq!(closed, qn1),
                }
            };
            for arc in std::iter::once(&fam.fast0)
                .chain(std::iter::once(&fam.star))
                .chain(fam.ladder.iter())
            {
                for x in arc.interior_samples(5) {
                    check(&x);
                }
                for x in arc.contained_endpoints() {
                    check(&x);
                }
            }
        }
    }

    #[test]
    fn backward_return_times_mirror() {
        let t = golden(14);
        for n in 2..=8 {
            let fam = critical_intervals(&t, n, Convention::Asymmetric).unwrap();
            let cap = t.q_u64(n + 2) + t.q_u64(n + 1) + 2;
            for arc in std::iter::once(&fam.fast0)
                .chain(std::iter::once(&fam.star))
                .chain(fam.ladder.iter())
            {
                for x in arc
                    .interior_samples(5)
                    .into_iter()
                    .chain(arc.contained_endpoints())
                {
                    let (closed, _) = return_time_closed(&x, &t, n, Direction::Backward).unwrap();
                    let brute = return_time_brute(
                        &x,
                        &t,
                        n,
                        Direction::Backward,
                        Convention::Asymmetric,
                        cap,
                    )
                    .unwrap();
                    assert_eq!(closed, brute, "backward mismatch at level {n}");
                }
            }
        }
    }

    #[test]
    fn odd_level_partition_brute_checked() {
        // Level 3 of the silver ratio exercises the odd-parity intervals.
        let t = convergents(&synthesize(&GrowthRule::Constant(2), 12, 0).unwrap());
        for n in [3usize, 5] {
            let fam = critical_intervals(&t, n, Convention::Asymmetric).unwrap();
            assert!(fam.verify_cover());
            let cap = t.q_u64(n + 2) + t.q_u64(n + 1) + 2;
            for arc in std::iter::once(&fam.fast0).chain(fam.ladder.iter()) {
                for x in arc.interior_samples(7).into_iter().chain(arc.contained_endpoints()) {
                    let (closed, _) = return_time_closed(&x, &t, n, Direction::Forward).unwrap();
                    let brute = return_time_brute(
                        &x,
                        &t,
                        n,
                        Direction::Forward,
                        Convention::Asymmetric,
                        cap,
                    )
                    .unwrap();
                    assert_eq!(closed, brute, "odd-level mismatch at level {n}");
                }
            }
        }
    }

    #[test]
    fn symmetric_return_times_brute_checked() {
        let t = golden(14);
        for n in 2..=7 {
            let b = CriticalIntervalFamily::b_n(&t, n);
            let interval = CircleInterval::half_open(-b.clone(), b.clone());
            let cap = t.q_u64(n + 2) + t.q_u64(n + 1) + 2;
            for dir in [Direction::Forward, Direction::Backward] {
                let mut fast_pts: Vec<Rat> = Vec::new();
                for x in interval
                    .interior_samples(40)
                    .into_iter()
                    .chain(interval.contained_endpoints())
                {
                    let closed = symmetric_return_time_closed(&x, &t, n, dir).unwrap();
                    let brute =
                        return_time_brute(&x, &t, n, dir, Convention::Symmetric, cap).unwrap();
                    assert_eq!(closed, brute, "symmetric mismatch level {n} {dir:?}");
                    assert!(closed == t.q_u64(n) || closed == t.q_u64(n + 1));
                    if closed == t.q_u64(n) {
                        fast_pts.push(interval.lift(&x));
                    }
                }
                // Fast-return points form one contiguous block of the lift.
                fast_pts.sort();
                if fast_pts.len() > 2 {
                    let lo = fast_pts.first().unwrap();
                    let hi = fast_pts.last().unwrap();
                    let width = hi.clone() - lo;
                    assert!(width < t.abs_z(n + 1), "fast zone too wide at level {n}");
                }
            }
        }
    }

    #[test]
    fn return_regions_match_closed_form() {
        for t in [golden(14), convergents(&synthesize(&GrowthRule::Constant(2), 14, 0).unwrap())] {
            for n in 2..=7 {
                let regions = symmetric_return_regions(&t, n).unwrap();
                assert_eq!(regions.len(), 3);
                for reg in &regions {
                    let seg = CircleInterval::half_open(reg.lo.clone(), reg.hi.clone());
                    for x in seg.interior_samples(9).into_iter().chain(seg.contained_endpoints()) {
                        let rp =
                            symmetric_return_time_closed(&x, &t, n, Direction::Forward).unwrap();
                        let rm =
                            symmetric_return_time_closed(&x, &t, n, Direction::Backward).unwrap();
                        assert_eq!((rp, rm), (reg.r_plus, reg.r_minus), "level {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn fast0_self_return_times() {
        let t = golden(14);
        for n in 2..=7 {
            let fam = critical_intervals(&t, n, Convention::Asymmetric).unwrap();
            let qn1 = t.q_u64(n + 1);
            let qn2 = t.q_u64(n + 2);
            let cap = qn2 + qn1 + 2;
            for x in fam
                .fast0
                .interior_samples(25)
                .into_iter()
                .chain(fam.fast0.contained_endpoints())
            {
                let r = first_hit(
                    &x,
                    &t.alpha_hat(),
                    &fam.fast0,
                    Direction::Forward,
                    1,
                    cap,
                    "fast0 self-return",
                )
                .unwrap();
                assert!(
                    r == qn2 || r == qn2 + qn1,
                    "I_n^0 self-return {r} not in {{q_{{n+2}}, q_{{n+2}}+q_{{n+1}}}} at level {n}"
                );
            }
        }
    }

    #[test]
    fn first_entry_bounded_by_qn1() {
        let t = golden(14);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=8 {
            let qn1 = t.q_u64(n + 1);
            for _ in 0..100 {
                let num = rng.gen_range(0..1u64 << 20);
                let x = CirclePoint::new(rat(num as i64, 1 << 20));
                let j = first_entry_time(&x, &t, n).unwrap();
                assert!(j < qn1);
            }
            // x already inside maps to 0.
            assert_eq!(first_entry_time(&CirclePoint::zero(), &t, n).unwrap(), 0);
        }
    }

    #[test]
    fn return_map_images_exact() {
        let t = golden(14);
        for n in 2..=7 {
            let a_n2 = t.quotient(n + 2).to_u64().unwrap();
            assert_eq!(
                return_map_image(&t, n, SubInterval::Fast0).unwrap(),
                vec![SubInterval::Ladder(1)]
            );
            for i in 1..a_n2 {
                assert_eq!(
                    return_map_image(&t, n, SubInterval::Ladder(i)).unwrap(),
                    vec![SubInterval::Ladder(i + 1)]
                );
            }
            assert_eq!(
                return_map_image(&t, n, SubInterval::Star).unwrap(),
                vec![SubInterval::Fast0]
            );
            let last = return_map_image(&t, n, SubInterval::Ladder(a_n2)).unwrap();
            assert_eq!(last, vec![SubInterval::Star, SubInterval::Fast0]);
        }
    }

    #[test]
    fn domain_error_outside_interval() {
        let t = golden(12);
        let x = CirclePoint::new(rat(1, 2));
        assert!(matches!(
            return_time_closed(&x, &t, 4, Direction::Forward),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cap_error_signals() {
        let t = golden(12);
        let x = CirclePoint::zero();
        let err = first_hit(
            &x,
            &t.alpha_hat(),
            &CircleInterval::half_open(rat(1, 3), rat(1, 3) + rat(1, 1000000)),
            Direction::Forward,
            1,
            3,
            "test",
        );
        assert!(matches!(err, Err(Error::CapExceeded { .. })));
    }
}
