//! Quasiperiodic cocycle iteration and finite-horizon Lyapunov-exponent
//! estimation over rational phase grids.
//!
//! Orbit phases are exact rationals; matrix products run log-scaled. Grid
//! estimates reduce in fixed index order, so results are bit-identical for
//! a given configuration regardless of the worker count.

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::construction::sample::SampleFunction;
use crate::construction::spline::CubicSpline;
use crate::frequency::ConvergentTable;
use crate::orbit::{symmetric_return_time_closed, Direction};
use crate::rational::{rat, union_contains, CircleInterval, CirclePoint, Rat};
use crate::sl2::{compose, rotation, svd_frame, FrameDecomp, LogScaledMat2, Mat2, FRAME_FLOOR};
use crate::{Error, Result};

/// Iteration budget for a single cocycle product.
pub const ITERATE_BUDGET: u64 = 10_000_000;
/// Total step budget (horizon x grid) for one LE estimate.
pub const LE_BUDGET: u64 = 200_000_000;

/// Base profile of the rotation-angle field.
#[derive(Clone, Debug)]
pub enum PhiBase {
    Constant(f64),
    Sample(SampleFunction),
}

/// One smooth piece of a correction, covering `[lo, hi)` of the signed
/// coordinate.
#[derive(Clone, Debug)]
pub struct CorrectionPiece {
    pub lo: Rat,
    pub hi: Rat,
    pub lo_f: f64,
    pub hi_f: f64,
    pub spline: CubicSpline,
}

/// One localized correction `ê_k`, supported exactly on its interval.
///
/// Correction fields inherit jump discontinuities from the return-time
/// switch points of `I_k`, so they are stored as one interpolant per
/// constant-return region; inside each piece the sampled field is smooth.
#[derive(Clone, Debug)]
pub struct LocalizedCorrection {
    pub level: usize,
    /// Symmetric critical interval `[-b_k, b_k)`.
    pub support: CircleInterval,
    /// Pieces ordered left to right, tiling `[-b_k, b_k)`.
    pub pieces: Vec<CorrectionPiece>,
    /// Support half-width as f64, for the hot evaluation path.
    pub half_width: f64,
}

impl LocalizedCorrection {
    /// sup |correction| over the stored samples.
    pub fn sup(&self) -> f64 {
        self.pieces
            .iter()
            .fold(0.0f64, |m, p| m.max(p.spline.max_abs()))
    }

    fn piece_eval(&self, signed_rat: Option<&Rat>, signed_f: f64) -> f64 {
        for p in &self.pieces {
            let inside = match signed_rat {
                Some(r) => r >= &p.lo && r < &p.hi,
                None => signed_f >= p.lo_f && signed_f < p.hi_f,
            };
            if inside {
                return p.spline.eval(signed_f);
            }
        }
        0.0
    }

    /// Exact-membership evaluation (support and piece boundaries decided
    /// in rational arithmetic).
    pub fn eval(&self, x: &CirclePoint) -> f64 {
        if self.support.contains(x) {
            let r = x.signed_repr();
            self.piece_eval(Some(&r), x.signed_f64())
        } else {
            0.0
        }
    }

    /// f64-membership evaluation; differs from `eval` only within a
    /// rounding error of the support/piece boundaries.
    pub fn eval_fast(&self, signed_x: f64) -> f64 {
        if signed_x.abs() < self.half_width {
            self.piece_eval(None, signed_x)
        } else {
            0.0
        }
    }

    /// Derivative of order `k <= 2` of the interpolant at an interior point.
    pub fn derivative_fast(&self, signed_x: f64, k: usize) -> f64 {
        if signed_x.abs() < self.half_width {
            for p in &self.pieces {
                if signed_x >= p.lo_f && signed_x < p.hi_f {
                    return p.spline.eval_derivative(signed_x, k);
                }
            }
        }
        0.0
    }
}

/// The rotation-angle field `phi = base + sum of localized corrections`.
#[derive(Clone, Debug)]
pub struct PhiField {
    pub base: PhiBase,
    pub corrections: Vec<LocalizedCorrection>,
}

impl PhiField {
    pub fn constant(c: f64) -> Self {
        PhiField {
            base: PhiBase::Constant(c),
            corrections: Vec::new(),
        }
    }

    pub fn from_sample(sf: SampleFunction) -> Self {
        PhiField {
            base: PhiBase::Sample(sf),
            corrections: Vec::new(),
        }
    }

    pub fn base_eval(&self, signed_x: f64) -> f64 {
        match &self.base {
            PhiBase::Constant(c) => *c,
            PhiBase::Sample(sf) => sf.eval(signed_x),
        }
    }

    /// Exact support membership; the corrections contribute exactly zero
    /// outside their recorded intervals.
    pub fn eval(&self, x: &CirclePoint) -> f64 {
        let mut v = self.base_eval(x.signed_f64());
        for c in &self.corrections {
            v += c.eval(x);
        }
        v
    }

    /// Hot-path evaluation from the signed f64 representative.
    pub fn eval_fast(&self, signed_x: f64) -> f64 {
        let mut v = self.base_eval(signed_x);
        for c in &self.corrections {
            v += c.eval_fast(signed_x);
        }
        v
    }

    /// Derivative of order `k <= 2` (base via jets, corrections via the
    /// interpolant).
    pub fn derivative(&self, signed_x: f64, k: usize) -> f64 {
        let mut v = match &self.base {
            PhiBase::Constant(_) => 0.0,
            PhiBase::Sample(sf) => sf.derivative(signed_x, k),
        };
        for c in &self.corrections {
            v += c.derivative_fast(signed_x, k);
        }
        v
    }
}

/// Generator of the cocycle.
#[derive(Clone, Debug)]
pub enum Generator {
    /// `A(x) = diag(lambda, 1/lambda) R_{pi/2 - phi(x)}`.
    RotHyp { log_lambda: f64, phi: PhiField },
    /// Schrodinger form `(E - v(x), -1; 1, 0)`.
    Schrodinger { energy: f64, v: PhiField },
}

/// A quasiperiodic cocycle `(alpha_hat, A)`.
#[derive(Clone, Debug)]
pub struct CocycleSpec {
    pub table: ConvergentTable,
    pub generator: Generator,
}

impl CocycleSpec {
    pub fn new(table: ConvergentTable, generator: Generator) -> Result<Self> {
        if table.is_finite_expansion() {
            return Err(Error::Domain(
                "cocycles over terminating (rational) expansions are rejected".into(),
            ));
        }
        if let Generator::RotHyp { log_lambda, .. } = &generator {
            if !(*log_lambda > 0.0 && *log_lambda < 300.0) {
                return Err(Error::InvalidInput(
                    "RotHyp needs 0 < log_lambda < 300".into(),
                ));
            }
        }
        Ok(CocycleSpec { table, generator })
    }

    pub fn alpha(&self) -> Rat {
        self.table.alpha_hat()
    }

    /// Generator matrix at the signed f64 phase.
    pub fn matrix_at_f64(&self, signed_x: f64) -> Mat2 {
        match &self.generator {
            Generator::RotHyp { log_lambda, phi } => {
                let lam = log_lambda.exp();
                let r = rotation(FRAC_PI_2 - phi.eval_fast(signed_x));
                Mat2::diag(lam, 1.0 / lam).mul(&r)
            }
            Generator::Schrodinger { energy, v } => {
                Mat2::new(energy - v.eval_fast(signed_x), -1.0, 1.0, 0.0)
            }
        }
    }

    pub fn matrix_at(&self, x: &CirclePoint) -> Mat2 {
        match &self.generator {
            Generator::RotHyp { log_lambda, phi } => {
                let lam = log_lambda.exp();
                let r = rotation(FRAC_PI_2 - phi.eval(x));
                Mat2::diag(lam, 1.0 / lam).mul(&r)
            }
            Generator::Schrodinger { energy, v } => {
                Mat2::new(energy - v.eval(x), -1.0, 1.0, 0.0)
            }
        }
    }
}

/// `A^n(x)` in log-scaled form; `n = 0` is the identity and negative `n`
/// follows `A^{-m}(x) = (A^m(T^{-m} x))^{-1}`.
pub fn iterate(spec: &CocycleSpec, x: &CirclePoint, n: i64) -> Result<LogScaledMat2> {
    let m = n.unsigned_abs();
    if m > ITERATE_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "iterate horizon {m} exceeds {ITERATE_BUDGET}"
        )));
    }
    if n == 0 {
        return Ok(LogScaledMat2::identity());
    }
    let alpha = spec.alpha();
    let start = if n > 0 {
        x.clone()
    } else {
        // T^{n} x = x - m alpha.
        let shift = alpha.clone() * rat(-(m as i64), 1);
        x.add(&shift)
    };
    let mut acc = LogScaledMat2::identity();
    let mut pos = start;
    for _ in 0..m {
        let a = LogScaledMat2::from_mat2(&spec.matrix_at(&pos));
        acc = compose(&a, &acc);
        pos = pos.add(&alpha);
    }
    if n > 0 {
        Ok(acc)
    } else {
        Ok(acc.inverse())
    }
}

/// Finite-horizon Lyapunov-exponent estimate over a uniform rational grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteLEEstimate {
    pub horizon: u64,
    pub grid: usize,
    /// `(1/N) * mean over grid of log ||A^N(x_j)||`, in nats.
    pub value: f64,
    /// Mean one-step tail increment `log||A^N|| - log||A^{N-1}||`; for a
    /// constant generator this converges to log of the spectral radius at
    /// machine precision while `value` carries an O(log(cond)/N) bias.
    pub tail_rate: f64,
    /// Standard error of the per-point `value` across the grid (grid
    /// dispersion, not a confidence interval).
    pub stderr: f64,
    /// Fraction of grid points skipped by the exclusion set.
    pub excluded_fraction: f64,
    /// Grid points actually averaged.
    pub used_points: usize,
}

/// Deterministic LE estimate on the grid `x_j = j/G`, `j = 0..G-1`.
pub fn finite_le(spec: &CocycleSpec, horizon: u64, grid: usize) -> Result<FiniteLEEstimate> {
    finite_le_excluding(spec, horizon, grid, &[])
}

/// LE estimate skipping grid points inside the exclusion set (disjoint
/// sorted half-open arcs, e.g. from
/// [`crate::construction::exceptional_set`]).
pub fn finite_le_excluding(
    spec: &CocycleSpec,
    horizon: u64,
    grid: usize,
    exclusion: &[(Rat, Rat)],
) -> Result<FiniteLEEstimate> {
    if grid == 0 || horizon == 0 {
        return Err(Error::InvalidInput("horizon and grid must be positive".into()));
    }
    let total = horizon
        .checked_mul(grid as u64)
        .ok_or_else(|| Error::BudgetExceeded("horizon * grid overflow".into()))?;
    if total > LE_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "horizon * grid = {total} exceeds {LE_BUDGET}"
        )));
    }
    let keep: Vec<bool> = (0..grid)
        .map(|j| {
            let x = CirclePoint::new(rat(j as i64, grid as i64));
            !union_contains(exclusion, &x)
        })
        .collect();
    if keep.iter().all(|k| !*k) {
        return Err(Error::Domain("exclusion covers the whole grid".into()));
    }
    // Integer-residue fast path over L = lcm(G, q_M).
    let alpha = spec.alpha();
    let l_big = num_bigint::BigInt::from(grid as u64).lcm(alpha.denom());
    let results: Vec<Option<(f64, f64)>> = if l_big.bits() <= 62 {
        let l = l_big.to_u64().unwrap();
        let step = {
            let s = (alpha.numer() * (&l_big / alpha.denom())).mod_floor(&l_big);
            s.to_u64().unwrap()
        };
        let unit = l / grid as u64;
        (0..grid)
            .into_par_iter()
            .map(|j| {
                if !keep[j] {
                    return None;
                }
                let mut pos = unit * j as u64;
                let mut acc = LogScaledMat2::identity();
                let mut prev = 0.0;
                for k in 0..horizon {
                    if k + 1 == horizon {
                        prev = acc.log_norm();
                    }
                    let signed = signed_from_residue(pos, l);
                    let a = LogScaledMat2::from_mat2(&spec.matrix_at_f64(signed));
                    acc = compose(&a, &acc);
                    pos += step;
                    if pos >= l {
                        pos -= l;
                    }
                }
                Some((acc.log_norm(), prev))
            })
            .collect()
    } else {
        (0..grid)
            .into_par_iter()
            .map(|j| {
                if !keep[j] {
                    return None;
                }
                let mut pos = CirclePoint::new(rat(j as i64, grid as i64));
                let mut acc = LogScaledMat2::identity();
                let mut prev = 0.0;
                for k in 0..horizon {
                    if k + 1 == horizon {
                        prev = acc.log_norm();
                    }
                    let a = LogScaledMat2::from_mat2(&spec.matrix_at(&pos));
                    acc = compose(&a, &acc);
                    pos = pos.add(&alpha);
                }
                Some((acc.log_norm(), prev))
            })
            .collect()
    };
    // Fixed-order reduction.
    let mut sum = 0.0f64;
    let mut sum_tail = 0.0f64;
    let mut vals: Vec<f64> = Vec::new();
    for r in results.iter().flatten() {
        let v = r.0 / horizon as f64;
        sum += v;
        sum_tail += r.0 - r.1;
        vals.push(v);
    }
    let used = vals.len();
    let mean = sum / used as f64;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / used.max(1) as f64;
    Ok(FiniteLEEstimate {
        horizon,
        grid,
        value: mean,
        tail_rate: sum_tail / used as f64,
        stderr: (var / used as f64).sqrt(),
        excluded_fraction: (grid - used) as f64 / grid as f64,
        used_points: used,
    })
}

#[inline]
fn signed_from_residue(pos: u64, l: u64) -> f64 {
    // Exact for l < 2^53; representative in [-1/2, 1/2).
    if 2 * pos < l {
        pos as f64 / l as f64
    } else {
        (pos as f64 - l as f64) / l as f64
    }
}

/// One sampled point of the invariant-direction fields `s_n`, `u_n`.
#[derive(Clone, Debug, Serialize)]
pub struct FrameSample {
    pub x_signed: f64,
    pub r_plus: u64,
    pub r_minus: u64,
    /// `s_n(x) = s(A^{r_n^+}(x))` as an RP^1 angle.
    pub s_angle: f64,
    /// `u_n(x) = s(A^{-r_n^-}(x))`.
    pub u_angle: f64,
    pub log_norm_fwd: f64,
    pub log_norm_bwd: f64,
    pub well_defined: bool,
}

/// Sample `s_n(x) = s(A^{r_n^+}(x))` and `u_n(x) = s(A^{-r_n^-}(x))` at
/// points of the symmetric critical interval `I_n`.
pub fn frame_fields(
    spec: &CocycleSpec,
    level: usize,
    samples: &[CirclePoint],
    frame_floor: f64,
) -> Result<Vec<FrameSample>> {
    spec.table.require_depth(level, level + 3)?;
    let out: Vec<Result<FrameSample>> = samples
        .par_iter()
        .map(|x| -> Result<FrameSample> {
            let r_plus = symmetric_return_time_closed(x, &spec.table, level, Direction::Forward)?;
            let r_minus =
                symmetric_return_time_closed(x, &spec.table, level, Direction::Backward)?;
            let fwd = iterate(spec, x, r_plus as i64)?;
            let bwd = iterate(spec, x, -(r_minus as i64))?;
            let ff: FrameDecomp = svd_frame(&fwd, frame_floor);
            let fb: FrameDecomp = svd_frame(&bwd, frame_floor);
            Ok(FrameSample {
                x_signed: x.signed_f64(),
                r_plus,
                r_minus,
                s_angle: ff.s_angle,
                u_angle: fb.s_angle,
                log_norm_fwd: ff.log_norm,
                log_norm_bwd: fb.log_norm,
                well_defined: ff.well_defined && fb.well_defined,
            })
        })
        .collect();
    out.into_iter().collect()
}

/// Sample the frame fields with fixed block powers, one smooth branch of
/// the piecewise return-time fields: `s(A^{r_plus}(x))` and
/// `s(A^{-r_minus}(x))` regardless of the true return times at `x`.
pub fn fixed_power_frames(
    spec: &CocycleSpec,
    samples: &[CirclePoint],
    r_plus: u64,
    r_minus: u64,
    frame_floor: f64,
) -> Result<Vec<FrameSample>> {
    let out: Vec<Result<FrameSample>> = samples
        .par_iter()
        .map(|x| -> Result<FrameSample> {
            let fwd = iterate(spec, x, r_plus as i64)?;
            let bwd = iterate(spec, x, -(r_minus as i64))?;
            let ff: FrameDecomp = svd_frame(&fwd, frame_floor);
            let fb: FrameDecomp = svd_frame(&bwd, frame_floor);
            Ok(FrameSample {
                x_signed: x.signed_f64(),
                r_plus,
                r_minus,
                s_angle: ff.s_angle,
                u_angle: fb.s_angle,
                log_norm_fwd: ff.log_norm,
                log_norm_bwd: fb.log_norm,
                well_defined: ff.well_defined && fb.well_defined,
            })
        })
        .collect();
    out.into_iter().collect()
}

/// Convenience: frame floor used by the construction.
pub fn default_frame_floor() -> f64 {
    FRAME_FLOOR
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::{convergents, synthesize, GrowthRule};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn golden(depth: usize) -> ConvergentTable {
        convergents(&synthesize(&GrowthRule::Constant(1), depth, 0).unwrap())
    }

    fn const_lambda_spec(lam: f64) -> CocycleSpec {
        // phi = pi/2 makes R_0, so A = diag(lam, 1/lam) everywhere.
        CocycleSpec::new(
            golden(12),
            Generator::RotHyp {
                log_lambda: lam.ln(),
                phi: PhiField::constant(FRAC_PI_2),
            },
        )
        .unwrap()
    }

    #[test]
    fn iterate_identity_at_zero() {
        let spec = const_lambda_spec(30.0);
        let id = iterate(&spec, &CirclePoint::zero(), 0).unwrap();
        assert_eq!(id.log_norm(), 0.0);
    }

    #[test]
    fn iterate_constant_lambda_power() {
        let spec = const_lambda_spec(30.0);
        let n = 1000;
        let m = iterate(&spec, &CirclePoint::zero(), n).unwrap();
        assert!((m.log_norm() - n as f64 * 30f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn cocycle_identity_random_triples() {
        let table = golden(12);
        let spec = CocycleSpec::new(
            table,
            Generator::RotHyp {
                log_lambda: 3.0f64.ln(),
                phi: PhiField::from_sample(
                    SampleFunction::new(crate::construction::sample::SampleClass::Cl {
                        l: 1,
                        delta0: 0.45,
                    })
                    .unwrap(),
                ),
            },
        )
        .unwrap();
        let alpha = spec.alpha();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let m = rng.gen_range(1i64..40);
            let n = rng.gen_range(1i64..40);
            let x = CirclePoint::new(rat(rng.gen_range(0..1024), 1024));
            let whole = iterate(&spec, &x, m + n).unwrap();
            let xn = x.add(&(alpha.clone() * rat(n, 1)));
            let split = compose(
                &iterate(&spec, &xn, m).unwrap(),
                &iterate(&spec, &x, n).unwrap(),
            );
            let rel = (whole.log_norm() - split.log_norm()).abs() / whole.log_norm().abs().max(1.0);
            assert!(rel < 1e-9, "cocycle identity failed: {rel}");
        }
    }

    #[test]
    fn inverse_consistency() {
        let spec = const_lambda_spec(7.0);
        let alpha = spec.alpha();
        let x = CirclePoint::new(rat(13, 64));
        for n in [1i64, 5, 17] {
            let back = iterate(&spec, &x, -n).unwrap();
            let fwd_from = x.add(&(alpha.clone() * rat(-n, 1)));
            let fwd = iterate(&spec, &fwd_from, n).unwrap().inverse();
            let rel = (back.log_norm() - fwd.log_norm()).abs() / back.log_norm().abs().max(1.0);
            assert!(rel < 1e-9);
        }
    }

    #[test]
    fn le_rotation_is_zero() {
        let spec = CocycleSpec::new(
            golden(12),
            Generator::RotHyp {
                log_lambda: f64::MIN_POSITIVE.max(1e-300),
                phi: PhiField::constant(0.3),
            },
        );
        // log_lambda must be positive; use a Schrodinger-free rotation via
        // a directly-constructed spec instead.
        drop(spec);
        let table = golden(12);
        let spec = CocycleSpec {
            table,
            generator: Generator::RotHyp {
                log_lambda: 0.0,
                phi: PhiField::constant(0.9),
            },
        };
        let est = finite_le(&spec, 2000, 32).unwrap();
        assert!(est.value.abs() <= 1e-12, "rotation LE = {}", est.value);
    }

    #[test]
    fn le_constant_lambda_exact() {
        let spec = const_lambda_spec(30.0);
        let est = finite_le(&spec, 5000, 16).unwrap();
        assert!((est.value - 30f64.ln()).abs() < 1e-10);
        assert!((est.tail_rate - 30f64.ln()).abs() < 1e-10);
        assert!(est.stderr < 1e-12);
    }

    #[test]
    fn le_schrodinger_free_energy3() {
        let spec = CocycleSpec::new(
            golden(12),
            Generator::Schrodinger {
                energy: 3.0,
                v: PhiField::constant(0.0),
            },
        )
        .unwrap();
        let est = finite_le(&spec, 10_000, 8).unwrap();
        let rho = (3.0 + 5f64.sqrt()) / 2.0;
        // The tail increment nails the spectral radius; the (1/N) average
        // carries the log(cond)/N bias.
        assert!((est.tail_rate - rho.ln()).abs() <= 1e-9, "{}", est.tail_rate);
        assert!((est.value - rho.ln()).abs() < 1e-3);
        assert!(est.value >= rho.ln());
    }

    #[test]
    fn le_determinism_across_thread_counts() {
        let spec = const_lambda_spec(11.0);
        let est1 = finite_le(&spec, 500, 64).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let est2 = pool.install(|| finite_le(&spec, 500, 64).unwrap());
        assert_eq!(est1.value.to_bits(), est2.value.to_bits());
        assert_eq!(est1.stderr.to_bits(), est2.stderr.to_bits());
    }

    #[test]
    fn le_excluding_empty_equals_plain() {
        let spec = const_lambda_spec(9.0);
        let a = finite_le(&spec, 300, 50).unwrap();
        let b = finite_le_excluding(&spec, 300, 50, &[]).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(b.excluded_fraction, 0.0);
    }

    #[test]
    fn le_excluding_fraction_matches_measure() {
        let spec = const_lambda_spec(9.0);
        // One arc of measure 1/4: the grid-count error is < 1/G per arc.
        let arcs = vec![(rat(1, 8), rat(3, 8))];
        let grid = 200;
        let est = finite_le_excluding(&spec, 100, grid, &arcs).unwrap();
        assert!((est.excluded_fraction - 0.25).abs() <= 2.0 / grid as f64);
    }

    #[test]
    fn subadditivity_on_grid() {
        let table = golden(12);
        let spec = CocycleSpec::new(
            table,
            Generator::Schrodinger {
                energy: 1.2,
                v: PhiField::constant(0.0),
            },
        )
        .unwrap();
        let a1 = finite_le(&spec, 200, 128).unwrap();
        let a2 = finite_le(&spec, 400, 128).unwrap();
        // mean log||A^{2N}|| <= 2 mean log||A^N|| within grid dispersion.
        let lhs = a2.value * 400.0;
        let rhs = 2.0 * a1.value * 200.0;
        assert!(lhs <= rhs + 400.0 * (a1.stderr + a2.stderr) + 1e-6);
    }

    #[test]
    fn frame_fields_constant_lambda() {
        let spec = const_lambda_spec(30.0);
        let b = crate::orbit::CriticalIntervalFamily::b_n(&spec.table, 4);
        let interval = CircleInterval::half_open(-b.clone(), b);
        let samples = interval.interior_samples(16);
        let frames = frame_fields(&spec, 4, &samples, 10.0).unwrap();
        for fr in frames {
            assert!(fr.well_defined);
            assert!((fr.s_angle - FRAC_PI_2).abs() < 1e-12);
            assert!(fr.u_angle.abs() < 1e-12 || (fr.u_angle - std::f64::consts::PI).abs() < 1e-12);
        }
    }
}
