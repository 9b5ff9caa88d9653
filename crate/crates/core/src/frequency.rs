//! Continued-fraction arithmetic for irrational frequencies.
//!
//! A frequency is handled exclusively through its truncated expansion
//! `[a_0; a_1, ..., a_M]`: the exact rational convergent `p_M/q_M` stands in
//! for the irrational number, and any level-`n` query downstream is only
//! answered when `n + 3 <= M`, so the queried orbit structure is identical
//! for the truncation and the number it approximates.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rat;
use crate::{Error, Result};

/// Minimum number of partial quotients for a usable expansion.
pub const MIN_DEPTH: usize = 3;

/// A truncated continued fraction `[a_0; a_1, ..., a_M]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialQuotients {
    pub a0: BigInt,
    /// `a_1..a_M`, all >= 1.
    pub quotients: Vec<BigUint>,
    /// True when the Gauss-map expansion terminated exactly, i.e. the input
    /// was rational with this finite expansion. Downstream orbit operations
    /// reject finite expansions.
    pub finite: bool,
}

impl PartialQuotients {
    pub fn new(a0: i64, quotients: Vec<u64>) -> Result<Self> {
        Self::from_biguints(
            BigInt::from(a0),
            quotients.into_iter().map(BigUint::from).collect(),
            false,
        )
    }

    pub fn from_biguints(a0: BigInt, quotients: Vec<BigUint>, finite: bool) -> Result<Self> {
        if quotients.len() < MIN_DEPTH {
            return Err(Error::InvalidInput(format!(
                "need at least {MIN_DEPTH} partial quotients, got {}",
                quotients.len()
            )));
        }
        if quotients.iter().any(|a| a.is_zero()) {
            return Err(Error::InvalidInput("partial quotients must be >= 1".into()));
        }
        Ok(PartialQuotients {
            a0,
            quotients,
            finite,
        })
    }

    /// Truncation depth M.
    pub fn depth(&self) -> usize {
        self.quotients.len()
    }

    /// Largest level `n` for which level-`n` structure may be queried.
    pub fn validity_depth(&self) -> usize {
        self.depth().saturating_sub(3)
    }
}

/// One row of the convergent table.
#[derive(Clone, Debug)]
pub struct ConvergentRow {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
    /// `z_n = q_n * alpha_hat - p_n`, exact; zero at the last row `n = M`.
    pub z: Rat,
}

/// Exact convergents `p_n/q_n` and signed errors `z_n` of a truncated
/// expansion, for `n = 0..=M`, computed against `alpha_hat = p_M/q_M`.
#[derive(Clone, Debug)]
pub struct ConvergentTable {
    rows: Vec<ConvergentRow>,
    quotients: Vec<BigUint>,
    a0: BigInt,
    finite: bool,
}

impl ConvergentTable {
    pub fn rows(&self) -> &[ConvergentRow] {
        &self.rows
    }

    /// Truncation depth M.
    pub fn depth(&self) -> usize {
        self.rows.len() - 1
    }

    /// Largest level `n` usable for orbit queries (`n <= M - 3`).
    pub fn validity_depth(&self) -> usize {
        self.depth().saturating_sub(3)
    }

    pub fn is_finite_expansion(&self) -> bool {
        self.finite
    }

    /// Partial quotient `a_n`, `1 <= n <= M`.
    pub fn quotient(&self, n: usize) -> &BigUint {
        &self.quotients[n - 1]
    }

    pub fn q(&self, n: usize) -> &BigInt {
        &self.rows[n].q
    }

    pub fn p(&self, n: usize) -> &BigInt {
        &self.rows[n].p
    }

    pub fn z(&self, n: usize) -> &Rat {
        &self.rows[n].z
    }

    /// |z_n| as an exact rational.
    pub fn abs_z(&self, n: usize) -> Rat {
        self.rows[n].z.abs()
    }

    /// The exact stand-in frequency `alpha_hat = p_M/q_M`.
    pub fn alpha_hat(&self) -> Rat {
        let last = self.rows.last().unwrap();
        Rat::new(last.p.clone(), last.q.clone())
    }

    pub fn q_u64(&self, n: usize) -> u64 {
        self.rows[n].q.to_u64().expect("q_n fits in u64")
    }

    /// Guard for level-n queries that need rows up to `n + extra`.
    pub fn require_depth(&self, level: usize, need: usize) -> Result<()> {
        if need > self.depth() {
            Err(Error::InsufficientDepth {
                level,
                need,
                depth: self.depth(),
            })
        } else {
            Ok(())
        }
    }
}

/// Gauss-map expansion of an exact rational in (0, 1).
///
/// Rationals always terminate; a terminating expansion is returned marked
/// `finite` when it is at least [`MIN_DEPTH`] quotients long, and is a
/// [`Error::FiniteExpansion`] otherwise.
pub fn expand_real(x: &Rat, depth: usize) -> Result<PartialQuotients> {
    if x <= &Rat::zero() || x >= &Rat::one() {
        return Err(Error::InvalidInput(format!("x = {x} not in (0,1)")));
    }
    if depth < 1 {
        return Err(Error::InvalidInput("depth must be >= 1".into()));
    }
    let mut quotients: Vec<BigUint> = Vec::with_capacity(depth);
    // x_k = num/den; Gauss map f(x) = 1/x - [1/x] on exact rationals.
    let mut num = x.numer().to_biguint().unwrap();
    let mut den = x.denom().to_biguint().unwrap();
    let mut finite = false;
    while quotients.len() < depth {
        // 1/x = den/num; a = floor(den/num), remainder r = den - a*num.
        let (a, r) = den.div_rem(&num);
        quotients.push(a);
        if r.is_zero() {
            finite = true;
            break;
        }
        den = num;
        num = r;
    }
    if finite && quotients.len() < MIN_DEPTH {
        return Err(Error::FiniteExpansion {
            value: x.to_string(),
            got: quotients.len(),
            need: MIN_DEPTH,
        });
    }
    PartialQuotients::from_biguints(BigInt::zero(), quotients, finite)
}

/// Exact convergent rows for `n = 0..=M` with the standard seeds
/// `p_{-1} = 1, p_{-2} = 0, q_{-1} = 0, q_{-2} = 1`.
pub fn convergents(pq: &PartialQuotients) -> ConvergentTable {
    let m = pq.depth();
    let mut p_prev2 = BigInt::zero(); // p_{-2}
    let mut p_prev1 = BigInt::one(); // p_{-1}
    let mut q_prev2 = BigInt::one(); // q_{-2}
    let mut q_prev1 = BigInt::zero(); // q_{-1}
    let mut ps: Vec<BigInt> = Vec::with_capacity(m + 1);
    let mut qs: Vec<BigInt> = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let a = if n == 0 {
            pq.a0.clone()
        } else {
            BigInt::from(pq.quotients[n - 1].clone())
        };
        let p = &a * &p_prev1 + &p_prev2;
        let q = &a * &q_prev1 + &q_prev2;
        ps.push(p.clone());
        qs.push(q.clone());
        p_prev2 = p_prev1;
        p_prev1 = p;
        q_prev2 = q_prev1;
        q_prev1 = q;
    }
    let alpha_hat = Rat::new(ps[m].clone(), qs[m].clone());
    let rows = (0..=m)
        .map(|n| {
            let z = Rat::from(qs[n].clone()) * &alpha_hat - Rat::from(ps[n].clone());
            ConvergentRow {
                n,
                p: ps[n].clone(),
                q: qs[n].clone(),
                z,
            }
        })
        .collect();
    ConvergentTable {
        rows,
        quotients: pq.quotients.clone(),
        a0: pq.a0.clone(),
        finite: pq.finite,
    }
}

/// Per-level classification outcome of the finite-truncation report.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LevelStat {
    pub n: usize,
    /// log q_{n+1} / q_n
    pub beta_term: f64,
    /// log q_{n+1} / q_n^delta
    pub beta_delta_term: f64,
    /// q_{n+1} / q_n
    pub ratio: f64,
    pub sdc_pass: bool,
    pub dc_pass: bool,
}

/// Finite-truncation frequency classification. All statistics are estimates
/// computed from the available convergent rows; none of them proves
/// membership in any class.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FrequencyClassReport {
    /// max over the tail window of log q_{n+1}/q_n.
    pub beta_hat: f64,
    /// max over the tail window of log q_{n+1}/q_n^delta.
    pub beta_delta_hat: f64,
    /// max over the tail window of q_{n+1}/q_n.
    pub bounded_m_hat: f64,
    pub delta: f64,
    pub gamma: f64,
    pub tau: f64,
    /// Per-level stats for every available n >= 1.
    pub levels: Vec<LevelStat>,
    pub sdc_pass_all: bool,
    pub dc_pass_all: bool,
    /// Always true: finite-truncation estimates are never proofs.
    pub finite_truncation_caveat: bool,
    /// First level of the tail window the hat statistics maximize over.
    pub tail_start: usize,
}

/// Parameters for [`classify`].
#[derive(Clone, Copy, Debug)]
pub struct ClassifyParams {
    pub gamma: f64,
    pub tau: f64,
    pub delta: f64,
}

/// Classify a frequency from its convergent table.
///
/// The hat statistics (`beta_hat`, `beta_delta_hat`, `bounded_m_hat`)
/// estimate limsups, so they maximize over the tail window
/// `n in [ceil(M/2), M-1]`; the per-level SDC/DC booleans cover every
/// available `n >= 1`. Levels with `q_n = 1` are skipped for SDC (the bound
/// `gamma^{-1} q_n (log q_n)^tau` degenerates to 0 there).
pub fn classify(table: &ConvergentTable, params: ClassifyParams) -> Result<FrequencyClassReport> {
    let m = table.depth();
    if m < 4 {
        return Err(Error::InsufficientDepth {
            level: 0,
            need: 4,
            depth: m,
        });
    }
    let tail_start = m.div_ceil(2);
    let mut levels = Vec::new();
    let mut beta_hat = f64::NEG_INFINITY;
    let mut beta_delta_hat = f64::NEG_INFINITY;
    let mut bounded_m_hat = f64::NEG_INFINITY;
    let mut sdc_all = true;
    let mut dc_all = true;
    for n in 1..m {
        let qn = big_log(table.q(n));
        let qn1 = big_log(table.q(n + 1));
        let log_ratio = qn1 - qn;
        let beta_term = qn1 / table.q(n).to_f64().unwrap_or(f64::INFINITY);
        let beta_delta_term = qn1 / table.q(n).to_f64().unwrap_or(f64::INFINITY).powf(params.delta);
        let ratio = log_ratio.exp();
        // SDC: q_{n+1} <= gamma^{-1} q_n (log q_n)^tau, in log space.
        let sdc_pass = if table.q(n).is_one() {
            true // bound degenerate at q_n = 1; skipped
        } else {
            qn1 <= -params.gamma.ln() + qn + params.tau * qn.ln()
        };
        // DC: q_{n+1} <= gamma^{-1} q_n^tau.
        let dc_pass = qn1 <= -params.gamma.ln() + params.tau * qn;
        if n >= tail_start {
            beta_hat = beta_hat.max(beta_term);
            beta_delta_hat = beta_delta_hat.max(beta_delta_term);
            bounded_m_hat = bounded_m_hat.max(ratio);
        }
        sdc_all &= sdc_pass;
        dc_all &= dc_pass;
        levels.push(LevelStat {
            n,
            beta_term,
            beta_delta_term,
            ratio,
            sdc_pass,
            dc_pass,
        });
    }
    Ok(FrequencyClassReport {
        beta_hat,
        beta_delta_hat,
        bounded_m_hat,
        delta: params.delta,
        gamma: params.gamma,
        tau: params.tau,
        levels,
        sdc_pass_all: sdc_all,
        dc_pass_all: dc_all,
        finite_truncation_caveat: true,
        tail_start,
    })
}

/// Natural log of a positive BigInt, accurate to f64 precision for any size.
pub fn big_log(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().unwrap().ln();
    }
    // x = mantissa * 2^shift with a 64-bit mantissa.
    let shift = bits - 53;
    let mantissa = (x >> shift).to_f64().unwrap();
    mantissa.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Deterministic generators for partial-quotient sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowthRule {
    /// All quotients equal to `a`.
    Constant(u64),
    /// Repeat the given block.
    Pattern(Vec<u64>),
    /// Base quotients `base`, with `a_p = factor` at each 1-based position
    /// `p` in `positions`, so that `q_p >= factor * q_{p-1}`.
    Spike {
        base: u64,
        positions: Vec<usize>,
        factor: u64,
    },
    /// Uniform quotients in `[lo, hi]`, deterministic in the seed.
    Random { lo: u64, hi: u64 },
}

/// Generate a truncated expansion from a rule. `seed` is only consumed by
/// the `Random` rule; identical inputs always yield identical output.
pub fn synthesize(rule: &GrowthRule, depth: usize, seed: u64) -> Result<PartialQuotients> {
    if depth < MIN_DEPTH {
        return Err(Error::InvalidInput(format!(
            "depth must be >= {MIN_DEPTH}"
        )));
    }
    let quotients: Vec<u64> = match rule {
        GrowthRule::Constant(a) => {
            if *a == 0 {
                return Err(Error::InvalidInput("constant quotient must be >= 1".into()));
            }
            vec![*a; depth]
        }
        GrowthRule::Pattern(block) => {
            if block.is_empty() || block.contains(&0) {
                return Err(Error::InvalidInput("pattern block must be nonempty, >= 1".into()));
            }
            (0..depth).map(|k| block[k % block.len()]).collect()
        }
        GrowthRule::Spike {
            base,
            positions,
            factor,
        } => {
            if *base == 0 || *factor == 0 {
                return Err(Error::InvalidInput("spike parameters must be >= 1".into()));
            }
            let mut qs = vec![*base; depth];
            for &p in positions {
                if p == 0 || p > depth {
                    return Err(Error::InvalidInput(format!(
                        "spike position {p} outside 1..={depth}"
                    )));
                }
                // q_p = a_p q_{p-1} + q_{p-2} >= factor * q_{p-1}.
                qs[p - 1] = *factor;
            }
            qs
        }
        GrowthRule::Random { lo, hi } => {
            if *lo == 0 || lo > hi {
                return Err(Error::InvalidInput("random range must satisfy 1 <= lo <= hi".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..depth).map(|_| rng.gen_range(*lo..=*hi)).collect()
        }
    };
    PartialQuotients::new(0, quotients)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn golden(depth: usize) -> ConvergentTable {
        convergents(&synthesize(&GrowthRule::Constant(1), depth, 0).unwrap())
    }

    #[test]
    fn expand_seven_tenths_terminates() {
        let pq = expand_real(&rat(7, 10), 4).unwrap();
        assert_eq!(pq.quotients, vec![BigUint::from(1u32), 2u32.into(), 3u32.into()]);
        assert!(pq.finite);
    }

    #[test]
    fn expand_half_too_short() {
        match expand_real(&rat(1, 2), 3) {
            Err(Error::FiniteExpansion { got, .. }) => assert_eq!(got, 1),
            other => panic!("expected FiniteExpansion, got {other:?}"),
        }
    }

    #[test]
    fn expand_golden_60_digits_all_ones() {
        // (sqrt(5)-1)/2 to 60 digits: x = (isqrt(5*10^120) - 10^60) / (2*10^60).
        use num_bigint::BigUint;
        use num_traits::Pow;
        let ten60 = BigUint::from(10u32).pow(60u32);
        let five = BigUint::from(5u32) * &ten60 * &ten60;
        let s = five.sqrt();
        let num = BigInt::from(s) - BigInt::from(ten60.clone());
        let den = BigInt::from(2u32) * BigInt::from(ten60);
        let x = Rat::new(num, den);
        let pq = expand_real(&x, 10).unwrap();
        assert!(!pq.finite);
        assert!(pq.quotients.iter().all(|a| a.is_one()));
    }

    #[test]
    fn convergent_rows_seven_tenths() {
        let pq = expand_real(&rat(7, 10), 4).unwrap();
        let t = convergents(&pq);
        let pq_rows: Vec<(i64, i64)> = t
            .rows()
            .iter()
            .map(|r| (r.p.to_i64().unwrap(), r.q.to_i64().unwrap()))
            .collect();
        assert_eq!(pq_rows, vec![(0, 1), (1, 1), (2, 3), (7, 10)]);
    }

    #[test]
    fn golden_qs_are_fibonacci() {
        let t = golden(8);
        let qs: Vec<u64> = (0..=8).map(|n| t.q_u64(n)).collect();
        assert_eq!(qs, vec![1, 1, 2, 3, 5, 8, 13, 21, 34]);
    }

    /// q_{n+1}|z_n| + q_n|z_{n+1}| = 1, exactly, for every row pair.
    fn check_exact_identity(t: &ConvergentTable) {
        for n in 0..t.depth() {
            let lhs = Rat::from(t.q(n + 1).clone()) * t.abs_z(n)
                + Rat::from(t.q(n).clone()) * t.abs_z(n + 1);
            assert_eq!(lhs, Rat::one(), "identity failed at n = {n}");
        }
    }

    #[test]
    fn exact_identity_golden() {
        check_exact_identity(&golden(12));
    }

    #[test]
    fn z_recurrence_and_signs() {
        let t = golden(10);
        let alpha = t.alpha_hat();
        // z_0 = alpha_hat - a_0, z_{-1} = -1; z_n = a_n z_{n-1} + z_{n-2}.
        let mut z_prev = -Rat::one();
        let mut z_cur = alpha.clone();
        assert_eq!(&z_cur, t.z(0));
        for n in 1..=t.depth() {
            let a = Rat::from(BigInt::from(t.quotient(n).clone()));
            let z_next = a * &z_cur + &z_prev;
            assert_eq!(&z_next, t.z(n), "z recurrence failed at n = {n}");
            z_prev = z_cur;
            z_cur = z_next;
        }
        // Signs hold up to the final row; strict decrease of |z_n| and the
        // strict sandwich degrade at the truncation boundary (|z_{M-2}| can
        // equal |z_{M-1}| when a_M = 1), which is exactly why level-n
        // queries require n <= M - 3.
        for n in 0..t.depth() {
            assert_eq!(t.z(n).is_negative(), n % 2 == 1, "sign at {n}");
        }
        for n in 0..=t.validity_depth() {
            assert!(t.abs_z(n) > t.abs_z(n + 1), "|z| not decreasing at {n}");
        }
    }

    #[test]
    fn sandwich_bounds() {
        let t = golden(12);
        for n in 0..=t.validity_depth() {
            let lo = Rat::new(BigInt::one(), t.q(n).clone() + t.q(n + 1));
            let hi = Rat::new(BigInt::one(), t.q(n + 1).clone());
            let z = t.abs_z(n);
            assert!(lo < z && z < hi, "sandwich failed at n = {n}");
        }
    }

    /// Best approximation: |q alpha - round(q alpha)| > |z_n| for 0 < q < q_{n+1}, q != q_n.
    #[test]
    fn best_approximation_brute() {
        let t = golden(12);
        let alpha = t.alpha_hat();
        for n in 2..=5 {
            let zn = t.abs_z(n);
            let qn1 = t.q_u64(n + 1);
            for q in 1..qn1 {
                if q == t.q_u64(n) {
                    continue;
                }
                let qa = Rat::from(BigInt::from(q)) * &alpha;
                let nearest = {
                    let fl = qa.floor();
                    let frac = qa.clone() - &fl;
                    if frac <= rat(1, 2) {
                        frac
                    } else {
                        Rat::one() - frac
                    }
                };
                assert!(nearest > zn, "best-approx violated at n={n}, q={q}");
            }
        }
    }

    #[test]
    fn classify_golden() {
        let t = golden(20);
        let report = classify(
            &t,
            ClassifyParams {
                gamma: 1.0,
                tau: 2.0,
                delta: 0.5,
            },
        )
        .unwrap();
        assert!(report.bounded_m_hat <= 2.0);
        // Tail ratios approach the golden ratio.
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        assert!((report.bounded_m_hat - phi).abs() < 0.02);
        assert!((report.beta_hat - phi.ln() / 1.0).abs() < 1.0); // beta -> 0 actually
        assert!(report.finite_truncation_caveat);
    }

    #[test]
    fn classify_ak_equals_k() {
        // a_k = k. DC(tau=2, gamma=1) needs q_{n+1} <= q_n^2, which fails at
        // the first levels (q_2 = 3 > q_1^2 = 1) and holds from n = 3 on;
        // with gamma = 1/4 it holds at every available level.
        let quotients: Vec<u64> = (1..=12).collect();
        let t = convergents(&PartialQuotients::new(0, quotients).unwrap());
        let strict = classify(
            &t,
            ClassifyParams {
                gamma: 1.0,
                tau: 2.0,
                delta: 0.5,
            },
        )
        .unwrap();
        assert!(!strict.levels[0].dc_pass);
        assert!(strict.levels.iter().filter(|l| l.n >= 3).all(|l| l.dc_pass));
        let relaxed = classify(
            &t,
            ClassifyParams {
                gamma: 0.25,
                tau: 2.0,
                delta: 0.5,
            },
        )
        .unwrap();
        assert!(relaxed.dc_pass_all);
        // Bounded type clearly fails: ratios grow like a_{n+1}.
        assert!(strict.bounded_m_hat > 5.0);
    }

    #[test]
    fn classify_doubling_exponent_rule() {
        // a_{k+1} = 2^{q_k}: beta_hat stays near log 2 while beta_delta_hat
        // (delta = 1/2) grows with depth.
        let mut quotients: Vec<BigUint> = vec![BigUint::one()];
        let mut q_prev = BigInt::one(); // q_0
        let mut q_cur = BigInt::one(); // q_1
        for _ in 1..4 {
            let a = BigUint::one() << q_cur.to_u64().unwrap();
            let q_next = BigInt::from(a.clone()) * &q_cur + &q_prev;
            quotients.push(a);
            q_prev = q_cur;
            q_cur = q_next;
        }
        let t = convergents(&PartialQuotients::from_biguints(BigInt::zero(), quotients, false).unwrap());
        let stats: Vec<(f64, f64)> = (1..t.depth())
            .map(|n| {
                let qn1 = big_log(t.q(n + 1));
                let qf = t.q(n).to_f64().unwrap();
                (qn1 / qf, qn1 / qf.sqrt())
            })
            .collect();
        // beta terms bounded by ~log 2 + slack at every level.
        assert!(stats.iter().all(|(b, _)| *b <= 1.2));
        // beta_delta terms strictly increase with depth.
        for w in stats.windows(2) {
            assert!(w[1].1 > w[0].1);
        }
        assert!(stats.last().unwrap().1 > 2.0 * stats[0].1);
    }

    #[test]
    fn synthesize_spike_reaches_factor() {
        let pq = synthesize(
            &GrowthRule::Spike {
                base: 1,
                positions: vec![5],
                factor: 200,
            },
            10,
            0,
        )
        .unwrap();
        let t = convergents(&pq);
        assert!(t.quotient(5) >= &BigUint::from(200u32));
        assert!(t.q(5) >= &(t.q(4) * BigInt::from(200)));
    }

    #[test]
    fn synthesize_random_deterministic() {
        let a = synthesize(&GrowthRule::Random { lo: 1, hi: 9 }, 12, 7).unwrap();
        let b = synthesize(&GrowthRule::Random { lo: 1, hi: 9 }, 12, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.quotients.iter().all(|q| {
            let v = q.to_u64().unwrap();
            (1..=9).contains(&v)
        }));
    }

    #[test]
    fn synthesize_constant_is_golden_prefix() {
        let pq = synthesize(&GrowthRule::Constant(1), 8, 0).unwrap();
        assert!(pq.quotients.iter().all(|a| a.is_one()));
    }

    proptest! {
        /// The exact identity and the sandwich hold for arbitrary quotient
        /// sequences, not just the named families.
        #[test]
        fn prop_exact_identities(qs in proptest::collection::vec(1u64..40, 4..12)) {
            let t = convergents(&PartialQuotients::new(0, qs).unwrap());
            check_exact_identity(&t);
            for n in 0..=t.validity_depth() {
                let lo = Rat::new(BigInt::one(), t.q(n).clone() + t.q(n + 1));
                let hi = Rat::new(BigInt::one(), t.q(n + 1).clone());
                let z = t.abs_z(n);
                prop_assert!(lo < z && z < hi);
            }
            // gcd(p_n, q_n) = 1 and q strictly increasing from n = 1.
            for n in 0..=t.depth() {
                prop_assert!(t.p(n).gcd(t.q(n)).is_one());
            }
            for n in 1..t.depth() {
                prop_assert!(t.q(n + 1) > t.q(n));
            }
        }
    }
}
