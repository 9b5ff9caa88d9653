//! The inductive correction ledger.
//!
//! Level by level, the angle field is corrected so that the invariant
//! directions of the first-return products satisfy
//! `s_n - u_n = phi_0` on `I_n/10`, then perturbed so that
//! `s~_n = u~_n` there (complete resonance). Each step is accepted only
//! after re-verifying the angle identities, the lower bound on `I_n \
//! I_n/10`, and mu-hyperbolicity of the return blocks on the updated
//! cocycle; at desk scale an inequality that the source regime would
//! guarantee may fail, and the step then fails loudly.

use serde::{Deserialize, Serialize};

use crate::cocycle::{
    fixed_power_frames, frame_fields, CocycleSpec, CorrectionPiece, FrameSample, Generator,
    LocalizedCorrection, PhiField,
};
use crate::construction::bump::{bump_with_plateau, BumpFunction};
use crate::construction::sample::{SampleClass, SampleFunction};
use crate::construction::schedule::{lambda_schedule, LambdaSchedule, ScheduleClass};
use crate::construction::spline::CubicSpline;
use crate::frequency::ConvergentTable;
use crate::orbit::{symmetric_return_regions, CriticalIntervalFamily};
use crate::rational::{rat, CircleInterval, CirclePoint, Rat};
use crate::sl2::{check_mu_hyperbolic, rp1_diff, HyperbolicityReport, LogScaledMat2};
use crate::{Error, Result};
use num_traits::ToPrimitive;

/// Parameters of one construction run.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionConfig {
    pub class: SampleClass,
    pub schedule: ScheduleClass,
    pub log_lambda: f64,
    pub epsilon: f64,
    /// Exponent budget in the derivative estimates; the source constrains
    /// only `eta < 1/(100 l)`, defaulted here to `1/(200 l)`.
    pub eta: f64,
    /// Gevrey index of the bump glue.
    pub nu: f64,
    /// Plateau radius of the bump as a fraction of b_n (>= 1/10). The
    /// angle identities are stated on I_n/10; a wider plateau is
    /// admissible (the taper is only constrained to (0, 1]) and widens the
    /// resonant zone the gap experiment measures.
    pub bump_plateau_frac: f64,
    pub n_start: usize,
    pub n_max: usize,
    /// Samples (inclusive of endpoints) for each correction interpolant.
    pub sample_points: usize,
    /// Verification points per zone.
    pub verify_points: usize,
    /// Points of I_n at which return blocks are certified.
    pub hyper_samples: usize,
    pub tol_angle: f64,
    pub tol_resonance: f64,
    pub frame_floor: f64,
}

impl ConstructionConfig {
    /// The frozen desk-scale C^l configuration shape.
    pub fn cl(l: u32, delta0: f64, lambda: f64, n_start: usize, n_max: usize) -> Self {
        ConstructionConfig {
            class: SampleClass::Cl { l, delta0 },
            schedule: ScheduleClass::Cl { l },
            log_lambda: lambda.ln(),
            epsilon: 0.05,
            eta: 1.0 / (200.0 * l as f64),
            nu: 2.0,
            bump_plateau_frac: 0.5,
            n_start,
            n_max,
            sample_points: 16385,
            verify_points: 101,
            hyper_samples: 16,
            tol_angle: 1e-6,
            tol_resonance: 1e-8,
            frame_floor: 10.0,
        }
    }
}

/// Verification record of one accepted `phi_n` step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepReport {
    pub n: usize,
    pub r_fast: u64,
    pub r_slow: u64,
    /// max over the I_n/10 verification grid of |s_n - u_n - phi_0|.
    pub angle_identity_max_err: f64,
    /// min over I_n \ I_n/10 of |s_n - u_n| - phi_0/2 (>= 0 to accept).
    pub angle_lower_margin: f64,
    /// Worst mu-hyperbolicity outcome over the sampled return blocks.
    pub hyperbolicity_worst_ratio: f64,
    pub hyperbolicity_degenerate: bool,
    /// log lambda_n used as log mu.
    pub log_mu: f64,
    /// sup |e^_n|.
    pub correction_sup: f64,
    /// Schedule bound shape lambda_n^{-r_{n-1}/3} (lambda^{-2} at n = N).
    pub smallness_bound_shape: f64,
    pub smallness_fitted_c: f64,
    /// Refinement-doubling estimate of the interpolation error.
    pub interp_refinement_err: f64,
    pub accepted: bool,
}

/// Verification record of one accepted `phi~_n` step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TildeStepReport {
    pub n: usize,
    /// max over the I_n/10 verification grid of |s~_n - u~_n|.
    pub resonance_max_err: f64,
    pub hyperbolicity_worst_ratio: f64,
    pub hyperbolicity_degenerate: bool,
    pub log_mu: f64,
    /// sup |e~_n|.
    pub correction_sup: f64,
    /// Bound shape q_{n+1}^{-2}.
    pub smallness_bound_shape: f64,
    pub smallness_fitted_c: f64,
    pub accepted: bool,
}

/// The inductive state: the current angle field and its perturbed twin.
#[derive(Clone, Debug)]
pub struct CorrectionLedger {
    pub config: ConstructionConfig,
    pub table: ConvergentTable,
    pub schedule: LambdaSchedule,
    sample_fn: SampleFunction,
    /// phi_{n_built}.
    pub phi: PhiField,
    /// `(level, phi~_level)` for the most recent resonant perturbation.
    pub phi_tilde: Option<(usize, PhiField)>,
    pub steps: Vec<StepReport>,
    pub tilde_steps: Vec<TildeStepReport>,
    /// Accumulated jump points of the current angle field (signed
    /// representatives): return-time switch points of every built level
    /// plus their orbit preimages absorbed into later corrections.
    jump_points: Vec<Rat>,
    next_level: usize,
}

impl CorrectionLedger {
    pub fn sample_fn(&self) -> &SampleFunction {
        &self.sample_fn
    }

    pub fn next_level(&self) -> usize {
        self.next_level
    }

    /// Levels N..=n all built?
    pub fn built_through(&self, n: usize) -> bool {
        self.next_level > n
    }

    /// Cocycle over the current phi_n.
    pub fn spec(&self) -> Result<CocycleSpec> {
        CocycleSpec::new(
            self.table.clone(),
            Generator::RotHyp {
                log_lambda: self.config.log_lambda,
                phi: self.phi.clone(),
            },
        )
    }

    /// Cocycle over phi~_n, once built.
    pub fn spec_tilde(&self) -> Option<Result<CocycleSpec>> {
        self.phi_tilde.as_ref().map(|(_, phi)| {
            CocycleSpec::new(
                self.table.clone(),
                Generator::RotHyp {
                    log_lambda: self.config.log_lambda,
                    phi: phi.clone(),
                },
            )
        })
    }
}

/// Initialize the ledger at `phi = phi_0` and precompute the schedule.
pub fn new_ledger(table: ConvergentTable, config: ConstructionConfig) -> Result<CorrectionLedger> {
    if table.is_finite_expansion() {
        return Err(Error::Domain("construction needs an infinite expansion".into()));
    }
    table.require_depth(config.n_max, config.n_max + 3)?;
    let sample_fn = SampleFunction::new(config.class)?;
    if let SampleClass::Cl { delta0, .. } = config.class {
        let b_start = CriticalIntervalFamily::b_n(&table, config.n_start)
            .to_f64()
            .unwrap();
        if b_start > delta0 {
            return Err(Error::InvalidInput(format!(
                "b_N = {b_start} exceeds delta0 = {delta0}; raise n_start or delta0"
            )));
        }
    }
    let schedule = lambda_schedule(
        config.schedule,
        config.log_lambda,
        config.n_start,
        config.n_max,
        &table,
        config.epsilon,
    )?;
    let phi = PhiField::from_sample(sample_fn);
    let next_level = config.n_start;
    Ok(CorrectionLedger {
        config,
        table,
        schedule,
        sample_fn,
        phi,
        phi_tilde: None,
        steps: Vec::new(),
        tilde_steps: Vec::new(),
        jump_points: Vec::new(),
        next_level,
    })
}

/// Rational sampling grid of `[lo, hi]`, endpoints included, odd count.
fn closed_grid(lo: &Rat, hi: &Rat, count: usize) -> Vec<CirclePoint> {
    let count = count | 1;
    let len = hi.clone() - lo;
    (0..count)
        .map(|i| {
            let t = lo.clone() + len.clone() * rat(i as i64, count as i64 - 1);
            CirclePoint::new(t)
        })
        .collect()
}

/// Offset verification grid strictly inside `[lo, hi]`.
fn offset_grid(lo: &Rat, hi: &Rat, count: usize) -> Vec<CirclePoint> {
    let len = hi.clone() - lo;
    (0..count)
        .map(|k| {
            let t = lo.clone() + len.clone() * rat(2 * k as i64 + 1, 2 * count as i64);
            CirclePoint::new(t)
        })
        .collect()
}

struct BuiltCorrection {
    correction: LocalizedCorrection,
    sup: f64,
    refinement_err: f64,
    /// Jump points of this correction (signed representatives).
    breakpoints: Vec<Rat>,
    refinement_worst_x: f64,
}

/// Sample a raw field over each constant-return region of `I_n`, multiply
/// by the bump, and interpolate piecewise. The raw field is a function of
/// the fixed-power frame sample at the point, so each piece is smooth; the
/// jumps across region boundaries are represented exactly.
/// All points of `(-b, b)` where the level-`n` raw field can jump: the
/// interval's own return-time switch points plus every accumulated jump
/// point of the current angle field pulled along the orbit through the
/// block range (the field at `x` reads `phi` at `T^j x` for
/// `-r_minus <= j <= r_plus - 1`).
fn field_breakpoints(
    table: &ConvergentTable,
    n: usize,
    b: &Rat,
    inherited: &[Rat],
) -> Result<Vec<Rat>> {
    let regions = symmetric_return_regions(table, n)?;
    let mut cuts: Vec<Rat> = vec![regions[0].hi.clone(), regions[1].hi.clone()];
    let alpha = table.alpha_hat();
    let r_max = table.q_u64(n + 1) as i64;
    for s in inherited {
        for j in -r_max..r_max {
            let shifted = CirclePoint::new(s - alpha.clone() * rat(j, 1)).signed_repr();
            if &shifted > &(-b.clone()) && &shifted < b {
                cuts.push(shifted);
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    Ok(cuts)
}

fn build_correction<F>(
    spec: &CocycleSpec,
    n: usize,
    cfg: &ConstructionConfig,
    bump_fn: &BumpFunction,
    b: &Rat,
    inherited_jumps: &[Rat],
    raw_field: F,
) -> Result<BuiltCorrection>
where
    F: Fn(&CirclePoint, &FrameSample) -> f64,
{
    let regions = symmetric_return_regions(&spec.table, n)?;
    let cuts = field_breakpoints(&spec.table, n, b, inherited_jumps)?;
    // Piece boundaries: -b, the cut points, b.
    let mut bounds: Vec<Rat> = Vec::with_capacity(cuts.len() + 2);
    bounds.push(-b.clone());
    bounds.extend(cuts.iter().cloned());
    bounds.push(b.clone());
    let total_width = b.to_f64().unwrap() * 2.0;
    let mut pieces = Vec::with_capacity(bounds.len() - 1);
    let mut sup = 0.0f64;
    let mut refinement_err = 0.0f64;
    let mut refinement_worst_x = 0.0f64;
    for w in bounds.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        // Block powers from the constant-return region holding the piece.
        let mid = (lo.clone() + hi) / rat(2, 1);
        let reg = regions
            .iter()
            .find(|r| mid >= r.lo && mid < r.hi)
            .expect("piece midpoint inside a return region");
        let width = (hi.clone() - lo).to_f64().unwrap();
        let count =
            (((cfg.sample_points as f64) * width / total_width).ceil() as usize).clamp(33, 32769);
        let xs = closed_grid(lo, hi, count);
        // Pieces are left-closed; the right endpoint belongs to the NEXT
        // piece and the field there takes the right-sided limit. Evaluate
        // the last sample a fraction of a cell inside so it carries this
        // piece's one-sided limit (the O(delta * f') registration error is
        // far below the interpolation budget).
        let mut eval_xs = xs.clone();
        let delta = (hi.clone() - lo) / rat((count as i64 - 1) << 24, 1);
        *eval_xs.last_mut().unwrap() = CirclePoint::new(hi.clone() - delta);
        let frames = fixed_power_frames(spec, &eval_xs, reg.r_plus, reg.r_minus, cfg.frame_floor)?;
        let mut values = Vec::with_capacity(xs.len());
        for (x, fr) in xs.iter().zip(&frames) {
            if !fr.well_defined {
                return Err(Error::StepRejected {
                    n,
                    reason: format!(
                        "return-block frame below floor at x = {} (log norms {:.3}/{:.3})",
                        x.signed_f64(),
                        fr.log_norm_fwd,
                        fr.log_norm_bwd
                    ),
                });
            }
            values.push(raw_field(x, fr) * bump_fn.eval(x.signed_f64()));
        }
        let lo_f = lo.to_f64().unwrap();
        let hi_f = hi.to_f64().unwrap();
        let spline = CubicSpline::from_uniform_samples(lo_f, hi_f, values.clone());
        // Density validation by doubling: evaluate the field at the cell
        // midpoints (the refined grid's new nodes) and measure the stored
        // interpolant against them directly.
        let mids: Vec<CirclePoint> = xs
            .windows(2)
            .map(|w| {
                // Midpoint in the signed coordinate; the region may straddle
                // the unsigned wrap at 0.
                let m = (w[0].signed_repr() + w[1].signed_repr()) / rat(2, 1);
                CirclePoint::new(m)
            })
            .collect();
        let mid_frames = fixed_power_frames(spec, &mids, reg.r_plus, reg.r_minus, cfg.frame_floor)?;
        for (x, fr) in mids.iter().zip(&mid_frames) {
            let sx = x.signed_f64();
            let v = raw_field(x, fr) * bump_fn.eval(sx);
            let err = (spline.eval(sx) - v).abs();
            if err > refinement_err {
                refinement_err = err;
                refinement_worst_x = sx;
            }
        }
        sup = values.iter().fold(sup, |m, v| m.max(v.abs()));
        pieces.push(CorrectionPiece {
            lo: lo.clone(),
            hi: hi.clone(),
            lo_f,
            hi_f,
            spline,
        });
    }
    let correction = LocalizedCorrection {
        level: n,
        support: CircleInterval::half_open(-b.clone(), b.clone()),
        pieces,
        half_width: b.to_f64().unwrap(),
    };
    Ok(BuiltCorrection {
        correction,
        sup,
        refinement_err,
        breakpoints: cuts,
        refinement_worst_x,
    })
}

/// Certify the return blocks `{A(x), ..., A(T^{r-1} x)}` at sampled points
/// of `I_n` with `mu = lambda_n`; returns the worst report.
fn certify_blocks(
    spec: &CocycleSpec,
    table: &ConvergentTable,
    n: usize,
    samples: &[CirclePoint],
    log_mu: f64,
    log_lambda: f64,
    eps: f64,
) -> Result<(f64, bool, bool)> {
    let alpha = table.alpha_hat();
    let mu = log_mu.exp();
    let lambda = log_lambda.exp() * (1.0 + 1e-9);
    let mut worst = f64::INFINITY;
    let mut all_pass = true;
    for x in samples {
        let r = crate::orbit::symmetric_return_time_closed(
            x,
            table,
            n,
            crate::orbit::Direction::Forward,
        )?;
        let mut blocks = Vec::with_capacity(r as usize);
        let mut pos = x.clone();
        for _ in 0..r {
            blocks.push(LogScaledMat2::from_mat2(&spec.matrix_at(&pos)));
            pos = pos.add(&alpha);
        }
        let rep: HyperbolicityReport = check_mu_hyperbolic(&blocks, mu, lambda, eps)?;
        all_pass &= rep.passes;
        if rep.worst_ratio < worst {
            worst = rep.worst_ratio;
        }
    }
    let degenerate = (1.0 - eps) * log_mu <= 0.0;
    Ok((worst, degenerate, all_pass))
}

/// Build and verify the level-`n` correction `e^_n`, advancing
/// `phi_{n-1} -> phi_n`. The ledger is only mutated on acceptance.
pub fn build_phi_n(ledger: &mut CorrectionLedger, n: usize) -> Result<StepReport> {
    if n != ledger.next_level {
        return Err(Error::InvalidInput(format!(
            "steps are sequential: expected level {}, got {n}",
            ledger.next_level
        )));
    }
    if n > ledger.config.n_max {
        return Err(Error::InvalidInput(format!(
            "level {n} beyond configured n_max {}",
            ledger.config.n_max
        )));
    }
    let table = ledger.table.clone();
    let cfg = ledger.config.clone();
    let b = CriticalIntervalFamily::b_n(&table, n);
    let bump_fn = bump_with_plateau(n, cfg.nu, &table, cfg.bump_plateau_frac)?;
    let spec_prev = ledger.spec()?;
    // e_n = phi_0 - (s-bar_n - u-bar_n), sampled per constant-return region.
    let sample_fn = ledger.sample_fn;
    let jumps = ledger.jump_points.clone();
    let sampled = build_correction(&spec_prev, n, &cfg, &bump_fn, &b, &jumps, |x, fr| {
        sample_fn.eval(x.signed_f64()) - rp1_diff(fr.s_angle, fr.u_angle)
    })?;
    if sampled.refinement_err > cfg.tol_angle / 10.0 {
        return Err(Error::StepRejected {
            n,
            reason: format!(
                "interpolation error {} at x = {} above tol_angle/10; raise sample_points",
                sampled.refinement_err, sampled.refinement_worst_x
            ),
        });
    }
    // Candidate phi_n.
    let mut phi_new = ledger.phi.clone();
    phi_new.corrections.push(sampled.correction.clone());
    let spec_new = CocycleSpec::new(
        table.clone(),
        Generator::RotHyp {
            log_lambda: cfg.log_lambda,
            phi: phi_new.clone(),
        },
    )?;
    // (3.1)_n on I_n/10.
    let b10 = b.clone() / rat(10, 1);
    let inner = offset_grid(&(-b10.clone()), &b10, cfg.verify_points);
    let inner_frames = frame_fields(&spec_new, n, &inner, cfg.frame_floor)?;
    let mut angle_err = 0.0f64;
    for (x, fr) in inner.iter().zip(&inner_frames) {
        let su = rp1_diff(fr.s_angle, fr.u_angle);
        let phi0 = ledger.sample_fn.eval(x.signed_f64());
        angle_err = angle_err.max((su - phi0).abs());
    }
    // (3.2)_n on I_n \ I_n/10 (both sides).
    let mut lower_margin = f64::INFINITY;
    for (lo, hi) in [(-b.clone(), -b10.clone()), (b10.clone(), b.clone())] {
        let outer = offset_grid(&lo, &hi, cfg.verify_points);
        let outer_frames = frame_fields(&spec_new, n, &outer, cfg.frame_floor)?;
        for (x, fr) in outer.iter().zip(&outer_frames) {
            let su = rp1_diff(fr.s_angle, fr.u_angle).abs();
            let phi0 = ledger.sample_fn.eval(x.signed_f64());
            lower_margin = lower_margin.min(su - phi0 / 2.0);
        }
    }
    // (2)_n with mu = lambda_n.
    let log_mu = ledger.schedule.log_mu(n).unwrap();
    let hyper_xs = offset_grid(&(-b.clone()), &b, cfg.hyper_samples);
    let (worst_ratio, degenerate, hyper_pass) = certify_blocks(
        &spec_new,
        &table,
        n,
        &hyper_xs,
        log_mu,
        cfg.log_lambda,
        cfg.epsilon,
    )?;
    // (1)_n smallness against the schedule shape.
    let shape = if n == cfg.n_start {
        (-2.0 * cfg.log_lambda).exp()
    } else {
        // r_{n-1} = q_n: the first return of I_n/10 to I_{n-1}.
        (-log_mu * table.q_u64(n) as f64 / 3.0).exp()
    };
    let report = StepReport {
        n,
        r_fast: table.q_u64(n),
        r_slow: table.q_u64(n + 1),
        angle_identity_max_err: angle_err,
        angle_lower_margin: lower_margin,
        hyperbolicity_worst_ratio: worst_ratio,
        hyperbolicity_degenerate: degenerate,
        log_mu,
        correction_sup: sampled.sup,
        smallness_bound_shape: shape,
        smallness_fitted_c: sampled.sup / shape,
        interp_refinement_err: sampled.refinement_err,
        accepted: angle_err <= cfg.tol_angle && lower_margin >= 0.0 && hyper_pass,
    };
    if !report.accepted {
        return Err(Error::StepRejected {
            n,
            reason: format!(
                "angle err {:.3e} (tol {:.1e}), lower margin {:.3e}, hyperbolic pass {}",
                report.angle_identity_max_err, cfg.tol_angle, report.angle_lower_margin, hyper_pass
            ),
        });
    }
    ledger.phi = phi_new;
    ledger.steps.push(report.clone());
    ledger.jump_points.extend(sampled.breakpoints);
    ledger.jump_points.sort();
    ledger.jump_points.dedup();
    ledger.next_level = n + 1;
    Ok(report)
}

/// Build and verify the resonant perturbation `e~_n = -(s_n - u_n) f_n`,
/// defining `phi~_n`; requires `phi_n` built and verified.
pub fn build_phi_tilde_n(ledger: &mut CorrectionLedger, n: usize) -> Result<TildeStepReport> {
    if !ledger.built_through(n) {
        return Err(Error::InvalidInput(format!(
            "phi_{n} not built yet (next level is {})",
            ledger.next_level
        )));
    }
    let table = ledger.table.clone();
    let cfg = ledger.config.clone();
    let b = CriticalIntervalFamily::b_n(&table, n);
    let bump_fn = bump_with_plateau(n, cfg.nu, &table, cfg.bump_plateau_frac)?;
    let spec_n = ledger.spec()?;
    // e~_n = -(s_n - u_n) f_n, sampled per constant-return region.
    let jumps = ledger.jump_points.clone();
    let sampled = build_correction(&spec_n, n, &cfg, &bump_fn, &b, &jumps, |_, fr| {
        -rp1_diff(fr.s_angle, fr.u_angle)
    })?;
    let mut phi_tilde = ledger.phi.clone();
    phi_tilde.corrections.push(sampled.correction.clone());
    let spec_tilde = CocycleSpec::new(
        table.clone(),
        Generator::RotHyp {
            log_lambda: cfg.log_lambda,
            phi: phi_tilde.clone(),
        },
    )?;
    // (3')_n: complete resonance on I_n/10.
    let b10 = b.clone() / rat(10, 1);
    let inner = offset_grid(&(-b10.clone()), &b10, cfg.verify_points);
    let inner_frames = frame_fields(&spec_tilde, n, &inner, cfg.frame_floor)?;
    let mut res_err = 0.0f64;
    for fr in &inner_frames {
        res_err = res_err.max(rp1_diff(fr.s_angle, fr.u_angle).abs());
    }
    // (2')_n.
    let log_mu = ledger.schedule.log_mu(n).unwrap();
    let hyper_xs = offset_grid(&(-b.clone()), &b, cfg.hyper_samples);
    let (worst_ratio, degenerate, hyper_pass) = certify_blocks(
        &spec_tilde,
        &table,
        n,
        &hyper_xs,
        log_mu,
        cfg.log_lambda,
        cfg.epsilon,
    )?;
    // (1')_n.
    let q1 = table.q_u64(n + 1) as f64;
    let shape = q1.powi(-2);
    let report = TildeStepReport {
        n,
        resonance_max_err: res_err,
        hyperbolicity_worst_ratio: worst_ratio,
        hyperbolicity_degenerate: degenerate,
        log_mu,
        correction_sup: sampled.sup,
        smallness_bound_shape: shape,
        smallness_fitted_c: sampled.sup / shape,
        accepted: res_err <= cfg.tol_resonance && hyper_pass,
    };
    if !report.accepted {
        return Err(Error::StepRejected {
            n,
            reason: format!(
                "resonance err {:.3e} (tol {:.1e}), hyperbolic pass {}",
                report.resonance_max_err, cfg.tol_resonance, hyper_pass
            ),
        });
    }
    ledger.phi_tilde = Some((n, phi_tilde));
    ledger.tilde_steps.push(report.clone());
    Ok(report)
}

/// Build every level `n_start..=n_max` and the resonant twin at `n_max`.
pub fn build_all(ledger: &mut CorrectionLedger) -> Result<()> {
    for n in ledger.config.n_start..=ledger.config.n_max {
        build_phi_n(ledger, n)?;
    }
    build_phi_tilde_n(ledger, ledger.config.n_max)?;
    Ok(())
}
