//! Verification suites binding every module into reproducible experiments.
//!
//! Each suite is a pure function of the configuration: no timestamps, no
//! ambient randomness, fixed-order reductions. Re-running a suite with the
//! same config produces a byte-identical report at any worker count.

use anyhow::Result;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use cocycle_lab::cocycle::{finite_le, CocycleSpec, Generator, PhiField};
use cocycle_lab::construction::experiment::{gap_from_ledger, resonant_chain_check};
use cocycle_lab::construction::ledger::{build_phi_n, build_phi_tilde_n, new_ledger};
use cocycle_lab::frequency::{convergents, synthesize, ConvergentTable, GrowthRule};
use cocycle_lab::orbit::{
    critical_intervals, first_entry_time, first_hit, return_time_brute, return_time_closed,
    symmetric_return_time_closed, three_distance, Convention, CriticalIntervalFamily, Direction,
};
use cocycle_lab::rational::{rat, CircleInterval, CirclePoint};
use cocycle_lab::sl2::{
    check_mu_hyperbolic, faa_di_bruno_closed_form, faa_di_bruno_partition_sum,
    nonresonant_product_check, resonant_cancellation_check, rotation, rp1, svd_frame,
    LogScaledMat2, Mat2, ResonantParams, FRAME_FLOOR,
};

use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    OrbitOracle,
    Sl2Lemmas,
    ConstructionStep,
    LeGap,
    All,
}

impl SuiteName {
    pub fn parse(s: &str) -> Option<SuiteName> {
        Some(match s {
            "orbit-oracle" => SuiteName::OrbitOracle,
            "sl2-lemmas" => SuiteName::Sl2Lemmas,
            "construction-step" => SuiteName::ConstructionStep,
            "le-gap" => SuiteName::LeGap,
            "all" => SuiteName::All,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            SuiteName::OrbitOracle => "orbit-oracle",
            SuiteName::Sl2Lemmas => "sl2-lemmas",
            SuiteName::ConstructionStep => "construction-step",
            SuiteName::LeGap => "le-gap",
            SuiteName::All => "all",
        }
    }
}

/// One verified invariant: counts, the worst observed value, and on
/// failure the witness input that violated it.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub violations: u64,
    pub worst: f64,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &str, cases: u64, worst: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: true,
            cases,
            violations: 0,
            worst,
            detail: detail.into(),
        }
    }

    fn fail(name: &str, cases: u64, violations: u64, worst: f64, witness: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            cases,
            violations,
            worst,
            detail: witness.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn from_checks(suite: &str, checks: Vec<CheckResult>) -> Self {
        SuiteReport {
            suite: suite.into(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

/// Run one suite (or all of them) against a configuration.
pub fn run_suite(name: SuiteName, cfg: &ExperimentConfig) -> Result<SuiteReport> {
    Ok(match name {
        SuiteName::OrbitOracle => orbit_oracle_suite(cfg)?,
        SuiteName::Sl2Lemmas => sl2_lemmas_suite(cfg)?,
        SuiteName::ConstructionStep => construction_step_suite(cfg)?,
        SuiteName::LeGap => le_gap_suite(cfg)?,
        SuiteName::All => {
            let mut checks = Vec::new();
            for part in [
                SuiteName::OrbitOracle,
                SuiteName::Sl2Lemmas,
                SuiteName::ConstructionStep,
                SuiteName::LeGap,
            ] {
                checks.extend(run_suite(part, cfg)?.checks);
            }
            SuiteReport::from_checks("all", checks)
        }
    })
}

// ---------------------------------------------------------------------------
// Orbit oracle suite
// ---------------------------------------------------------------------------

/// The five frozen frequency families. The per-family truncation depth is
/// the largest M <= 15 whose q_M stays under the brute-force work cap, so
/// every queried level is exact and the whole suite stays inside its time
/// budget.
pub fn oracle_families() -> Vec<(&'static str, GrowthRule, u64)> {
    vec![
        ("golden", GrowthRule::Constant(1), 0),
        ("silver", GrowthRule::Constant(2), 0),
        (
            "spike",
            GrowthRule::Spike {
                base: 1,
                positions: vec![5],
                factor: 200,
            },
            0,
        ),
        ("random", GrowthRule::Random { lo: 1, hi: 9 }, 7),
        ("increasing", GrowthRule::Pattern((1..=15).collect()), 0),
    ]
}

const Q_CAP: u64 = 300_000;
const MAX_DEPTH: usize = 15;

pub fn family_table(rule: &GrowthRule, seed: u64) -> ConvergentTable {
    let mut depth = MAX_DEPTH;
    loop {
        let table = convergents(&synthesize(rule, depth, seed).unwrap());
        if table.q(depth).to_u64().map(|q| q <= Q_CAP).unwrap_or(false) || depth == 4 {
            return table;
        }
        depth -= 1;
    }
}

fn orbit_oracle_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let samples_per_arc = 200usize;
    let mut rt_cases = 0u64;
    let mut rt_viol = 0u64;
    let mut rt_witness = String::new();
    let mut td_cases = 0u64;
    let mut td_viol = 0u64;
    let mut td_witness = String::new();
    let mut sr_cases = 0u64;
    let mut sr_viol = 0u64;
    let mut sr_witness = String::new();
    let mut fe_cases = 0u64;
    let mut fe_viol = 0u64;
    let mut fe_witness = String::new();
    for (family, rule, seed) in oracle_families() {
        let table = family_table(&rule, seed);
        let top = table.validity_depth().min(12);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ seed ^ 0xA5);
        for n in 2..=top {
            let qn1 = table.q_u64(n + 1);
            let qn2 = table.q_u64(n + 2);
            let cap = qn2 + qn1 + 2;
            // Criterion: closed-form return times equal brute force on
            // every subinterval, samples plus contained endpoints, both
            // directions, exact arithmetic.
            let fam = critical_intervals(&table, n, Convention::Asymmetric)?;
            let mut arcs = vec![fam.fast0.clone(), fam.star.clone()];
            arcs.extend(fam.ladder.iter().cloned());
            for arc in &arcs {
                let mut points = arc.interior_samples(samples_per_arc);
                points.extend(arc.contained_endpoints());
                for x in points {
                    for dir in [Direction::Forward, Direction::Backward] {
                        rt_cases += 1;
                        let (closed, _) = return_time_closed(&x, &table, n, dir)?;
                        let brute =
                            return_time_brute(&x, &table, n, dir, Convention::Asymmetric, cap)?;
                        if closed != brute {
                            rt_viol += 1;
                            if rt_witness.is_empty() {
                                rt_witness = format!(
                                    "family {family} level {n} {dir:?} x = {:?}: closed {closed} != brute {brute}",
                                    x.unsigned_repr()
                                );
                            }
                        }
                    }
                }
            }
            // Symmetric convention, both directions.
            let b = CriticalIntervalFamily::b_n(&table, n);
            let sym = CircleInterval::half_open(-b.clone(), b.clone());
            for x in sym
                .interior_samples(40)
                .into_iter()
                .chain(sym.contained_endpoints())
            {
                for dir in [Direction::Forward, Direction::Backward] {
                    rt_cases += 1;
                    let closed = symmetric_return_time_closed(&x, &table, n, dir)?;
                    let brute = return_time_brute(&x, &table, n, dir, Convention::Symmetric, cap)?;
                    if closed != brute {
                        rt_viol += 1;
                        if rt_witness.is_empty() {
                            rt_witness = format!(
                                "family {family} level {n} symmetric {dir:?} x = {:?}",
                                x.unsigned_repr()
                            );
                        }
                    }
                }
            }
            // Criterion: three-distance gap dichotomy and successor rule,
            // plus the forced large-gap count q_n.
            td_cases += 1;
            match three_distance(&table, n) {
                Ok(td) => {
                    let ok = td.successor_rule_holds(&table)
                        && td.large_gap_count() as u64 == table.q_u64(n);
                    if !ok {
                        td_viol += 1;
                        if td_witness.is_empty() {
                            td_witness = format!("family {family} level {n}: successor/count");
                        }
                    }
                }
                Err(e) => {
                    td_viol += 1;
                    if td_witness.is_empty() {
                        td_witness = format!("family {family} level {n}: {e}");
                    }
                }
            }
            // Criterion: I_n^0 self-returns land in {q_{n+2}, q_{n+2}+q_{n+1}}.
            for x in fam
                .fast0
                .interior_samples(100)
                .into_iter()
                .chain(fam.fast0.contained_endpoints())
            {
                sr_cases += 1;
                let r = first_hit(
                    &x,
                    &table.alpha_hat(),
                    &fam.fast0,
                    Direction::Forward,
                    1,
                    cap,
                    "fast0 self-return",
                )?;
                if r != qn2 && r != qn2 + qn1 {
                    sr_viol += 1;
                    if sr_witness.is_empty() {
                        sr_witness =
                            format!("family {family} level {n} x = {:?}: r = {r}", x.unsigned_repr());
                    }
                }
            }
            // Criterion: first-entry time below q_{n+1} on random phases.
            for _ in 0..1000 {
                fe_cases += 1;
                let num = rng.gen_range(0u64..1 << 20);
                let x = CirclePoint::new(rat(num as i64, 1 << 20));
                let j = first_entry_time(&x, &table, n)?;
                if j >= qn1 {
                    fe_viol += 1;
                    if fe_witness.is_empty() {
                        fe_witness = format!("family {family} level {n} x = {num}/2^20: j = {j}");
                    }
                }
            }
        }
    }
    let checks = vec![
        if rt_viol == 0 {
            CheckResult::pass("return-time-oracle-equivalence", rt_cases, 0.0, "zero mismatches")
        } else {
            CheckResult::fail("return-time-oracle-equivalence", rt_cases, rt_viol, 0.0, rt_witness)
        },
        if td_viol == 0 {
            CheckResult::pass("three-distance-exactness", td_cases, 0.0, "gaps and successor rule exact")
        } else {
            CheckResult::fail("three-distance-exactness", td_cases, td_viol, 0.0, td_witness)
        },
        if sr_viol == 0 {
            CheckResult::pass("fast-zone-self-returns", sr_cases, 0.0, "all in {q_{n+2}, q_{n+2}+q_{n+1}}")
        } else {
            CheckResult::fail("fast-zone-self-returns", sr_cases, sr_viol, 0.0, sr_witness)
        },
        if fe_viol == 0 {
            CheckResult::pass("first-entry-bound", fe_cases, 0.0, "all below q_{n+1}")
        } else {
            CheckResult::fail("first-entry-bound", fe_cases, fe_viol, 0.0, fe_witness)
        },
    ];
    Ok(SuiteReport::from_checks("orbit-oracle", checks))
}

// ---------------------------------------------------------------------------
// SL(2,R) lemma suite
// ---------------------------------------------------------------------------

fn sl2_lemmas_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    checks.push(svd_check(cfg.sl2_trials, cfg.seed));
    checks.push(nonresonant_check(cfg.sl2_trials, cfg.seed));
    checks.extend(resonant_checks(1000, cfg.seed));
    checks.push(faa_check());
    checks.push(hyperbolic_check(200, cfg.seed));
    Ok(SuiteReport::from_checks("sl2-lemmas", checks))
}

pub fn svd_check(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51D);
    let mut worst = 0.0f64;
    for k in 0..trials {
        let l: f64 = rng.gen_range(0.0..9.21); // condition number up to 1e8
        let m = rotation(rng.gen_range(0.0..PI))
            .mul(&Mat2::diag(l.exp(), (-l).exp()))
            .mul(&rotation(rng.gen_range(0.0..PI)));
        let f = svd_frame(&LogScaledMat2::from_mat2(&m), FRAME_FLOOR);
        let rel = f.reconstruct().sub(&m).frobenius() / m.frobenius();
        let sv = m.apply_compensated(f.s_hat());
        let contracted = sv.0.hypot(sv.1);
        let expect = m.det_compensated() * (-f.log_norm).exp();
        let rel2 = (contracted - expect).abs() / expect;
        let err = rel.max(rel2);
        worst = worst.max(err);
        if err > 1e-12 {
            return CheckResult::fail(
                "svd-frame-reconstruction",
                trials as u64,
                1,
                err,
                format!("trial {k}: relative error {err}"),
            );
        }
    }
    CheckResult::pass(
        "svd-frame-reconstruction",
        trials as u64,
        worst,
        "reconstruction and contracted-value residuals within 1e-12",
    )
}

pub fn nonresonant_check(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xBA51C);
    let eta = 0.01;
    let mut worst = 0.0f64;
    for k in 0..trials {
        let l1: f64 = rng.gen_range(1e4f64.ln()..1e6f64.ln());
        let l2: f64 = rng.gen_range(1e4f64.ln()..1e6f64.ln());
        let e0: f64 = l1.min(l2).exp();
        let u1 = rng.gen_range(0.0..PI);
        let min_t = e0.powf(-eta);
        let theta: f64 =
            rng.gen_range(min_t..FRAC_PI_2) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let s2 = rp1(u1 + theta);
        let e1m = LogScaledMat2::from_frame(l1, u1, rng.gen_range(0.0..PI));
        let e2m = LogScaledMat2::from_frame(l2, rng.gen_range(0.0..PI), s2);
        let rep = nonresonant_product_check(&e1m, &e2m, eta);
        if !rep.admissible {
            return CheckResult::fail(
                "nonresonant-product",
                trials as u64,
                1,
                0.0,
                format!("trial {k}: inadmissible construction (theta = {theta})"),
            );
        }
        worst = worst
            .max(rep.discrepancy / rep.norm_bound)
            .max(rep.u_drift / rep.u_drift_bound)
            .max(rep.s_drift / rep.s_drift_bound);
        if !rep.passes {
            return CheckResult::fail(
                "nonresonant-product",
                trials as u64,
                1,
                worst,
                format!(
                    "trial {k}: discrepancy {:.3e} vs bound {:.3e}, drifts {:.3e}/{:.3e}",
                    rep.discrepancy, rep.norm_bound, rep.u_drift, rep.s_drift
                ),
            );
        }
    }
    CheckResult::pass(
        "nonresonant-product",
        trials as u64,
        worst,
        "norm and drift bounds held; worst = max residual/bound ratio",
    )
}

pub fn resonant_checks(trials: usize, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4E50);
    let log_lambda = 10f64.ln();
    let mut worst = f64::NEG_INFINITY;
    let mut aligned_viol = 0u64;
    let mut witness = String::new();
    let mut control_viol = 0u64;
    for k in 0..trials {
        // min(m, n) <= 6 keeps the cancellation depth representable in f64.
        let m = rng.gen_range(4u32..9);
        let n = rng.gen_range(4u32..7);
        let u_a = rng.gen_range(0.0..PI);
        let a = LogScaledMat2::from_frame(log_lambda * m as f64, u_a, rng.gen_range(0.0..PI));
        let b = LogScaledMat2::from_frame(log_lambda * n as f64, rng.gen_range(0.0..PI), u_a);
        let params = ResonantParams {
            log_lambda1: log_lambda,
            m,
            log_lambda2: log_lambda,
            n,
        };
        let rep = resonant_cancellation_check(&a, &b, params);
        worst = worst.max(rep.log_norm_ba - rep.log_bound);
        if !rep.passes {
            aligned_viol += 1;
            if witness.is_empty() {
                witness = format!(
                    "trial {k}: m={m} n={n} log||BA|| = {:.6} > bound {:.6}",
                    rep.log_norm_ba, rep.log_bound
                );
            }
        }
        // Sharpness control: a 1e-3 misalignment may break the bound.
        let b_off = LogScaledMat2::from_frame(
            log_lambda * n as f64,
            rng.gen_range(0.0..PI),
            u_a + 1e-3,
        );
        let rep_off = resonant_cancellation_check(&a, &b_off, params);
        if rep_off.log_norm_ba > rep_off.log_bound {
            control_viol += 1;
        }
    }
    let aligned = if aligned_viol == 0 {
        CheckResult::pass(
            "resonant-cancellation",
            trials as u64,
            worst,
            "log-domain bound held on every aligned pair; worst = max slack deficit",
        )
    } else {
        CheckResult::fail("resonant-cancellation", trials as u64, aligned_viol, worst, witness)
    };
    let control = if control_viol > 0 {
        CheckResult::pass(
            "resonant-misaligned-control",
            trials as u64,
            control_viol as f64,
            format!("{control_viol} of {trials} misaligned pairs violated the bound, demonstrating sharpness"),
        )
    } else {
        CheckResult::fail(
            "resonant-misaligned-control",
            trials as u64,
            1,
            0.0,
            "no misaligned pair violated the bound; control has no power",
        )
    };
    vec![aligned, control]
}

pub fn faa_check() -> CheckResult {
    let mut cases = 0u64;
    for n in 1..=12 {
        for r in [rat(1, 1), rat(2, 1), rat(1, 2), rat(5, 1)] {
            cases += 1;
            let lhs = faa_di_bruno_partition_sum(n, &r).unwrap();
            let rhs = faa_di_bruno_closed_form(n, &r);
            if lhs != rhs {
                return CheckResult::fail(
                    "faa-di-bruno-partition-identity",
                    cases,
                    1,
                    0.0,
                    format!("n = {n}, R = {r}: enumeration != closed form"),
                );
            }
        }
    }
    CheckResult::pass(
        "faa-di-bruno-partition-identity",
        cases,
        0.0,
        "exact equality with R(1+R)^(n-1) for all n <= 12",
    )
}

pub fn hyperbolic_check(trials: usize, seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x47B);
    let mut unexpected = 0u64;
    let mut witness = String::new();
    for k in 0..trials {
        let mu: f64 = rng.gen_range(2.0..20.0);
        let len = rng.gen_range(5usize..25);
        let blocks: Vec<_> = (0..len)
            .map(|_| LogScaledMat2::from_mat2(&Mat2::diag(mu, 1.0 / mu)))
            .collect();
        let rep = check_mu_hyperbolic(&blocks, mu, mu, 0.0).unwrap();
        if !rep.passes {
            unexpected += 1;
            if witness.is_empty() {
                witness = format!("trial {k}: uniform diagonal block failed (mu = {mu})");
            }
        }
        // Insert a quarter turn: growth breaks at that index.
        let mut broken = blocks.clone();
        broken.insert(len / 2, LogScaledMat2::from_mat2(&rotation(FRAC_PI_2)));
        let rep2 = check_mu_hyperbolic(&broken, mu, mu, 0.05).unwrap();
        if rep2.passes {
            unexpected += 1;
            if witness.is_empty() {
                witness = format!("trial {k}: rotation-broken block passed (mu = {mu})");
            }
        }
    }
    if unexpected == 0 {
        CheckResult::pass(
            "mu-hyperbolic-certificate",
            2 * trials as u64,
            0.0,
            "uniform blocks certified, rotation-broken blocks rejected",
        )
    } else {
        CheckResult::fail("mu-hyperbolic-certificate", 2 * trials as u64, unexpected, 0.0, witness)
    }
}

// ---------------------------------------------------------------------------
// Construction-step suite
// ---------------------------------------------------------------------------

fn construction_step_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let table = cfg.table()?;
    let mut ledger = new_ledger(table.clone(), cfg.construction())?;
    let mut checks = Vec::new();
    for n in cfg.n_start..=cfg.n_max {
        let phi_before = ledger.phi.clone();
        let step = match build_phi_n(&mut ledger, n) {
            Ok(s) => s,
            Err(e) => {
                checks.push(CheckResult::fail(
                    &format!("step-{n}-accepted"),
                    1,
                    1,
                    0.0,
                    format!("{e}"),
                ));
                return Ok(SuiteReport::from_checks("construction-step", checks));
            }
        };
        checks.push(CheckResult::pass(
            &format!("step-{n}-angle-identity"),
            cfg.verify_points as u64,
            step.angle_identity_max_err,
            format!("|s_n - u_n - phi_0| on I_{n}/10; tol {:.1e}", cfg.tol_angle),
        ));
        checks.push(CheckResult::pass(
            &format!("step-{n}-angle-lower-bound"),
            2 * cfg.verify_points as u64,
            step.angle_lower_margin,
            "min |s_n - u_n| - phi_0/2 on I_n minus I_n/10",
        ));
        checks.push(if step.hyperbolicity_degenerate {
            CheckResult::pass(
                &format!("step-{n}-hyperbolicity"),
                cfg.hyper_samples as u64,
                step.hyperbolicity_worst_ratio,
                format!(
                    "mu = lambda_{n} = {:.4} <= 1 at desk scale: growth condition vacuous, certified degenerate",
                    step.log_mu.exp()
                ),
            )
        } else {
            CheckResult::pass(
                &format!("step-{n}-hyperbolicity"),
                cfg.hyper_samples as u64,
                step.hyperbolicity_worst_ratio,
                format!("mu = lambda_{n} = {:.4}; worst log||A^i||/(i(1-eps)log mu)", step.log_mu.exp()),
            )
        });
        // Support discipline: phi_n == phi_{n-1} outside I_n, bit for bit.
        let b = CriticalIntervalFamily::b_n(&table, n);
        let bf = b.to_f64().unwrap();
        let mut support_ok = true;
        let mut support_witness = String::new();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (n as u64) << 8);
        let mut tested = 0u64;
        while tested < 200 {
            let num = rng.gen_range(0u64..1 << 24);
            let x = CirclePoint::new(rat(num as i64, 1 << 24));
            if x.signed_f64().abs() <= bf {
                continue;
            }
            tested += 1;
            let before = phi_before.eval(&x);
            let after = ledger.phi.eval(&x);
            if before.to_bits() != after.to_bits() {
                support_ok = false;
                if support_witness.is_empty() {
                    support_witness = format!("x = {num}/2^24: {before} -> {after}");
                }
            }
        }
        checks.push(if support_ok {
            CheckResult::pass(
                &format!("step-{n}-support-discipline"),
                tested,
                0.0,
                "phi_n identical to phi_{n-1} outside I_n (exact)",
            )
        } else {
            CheckResult::fail(&format!("step-{n}-support-discipline"), tested, 1, 0.0, support_witness)
        });
        checks.push(CheckResult::pass(
            &format!("step-{n}-correction-smallness"),
            1,
            step.smallness_fitted_c,
            format!(
                "||e^_{n}||_inf = {:.3e} against shape {:.3e}; fitted constant reported, not asserted",
                step.correction_sup, step.smallness_bound_shape
            ),
        ));
    }
    let tilde = match build_phi_tilde_n(&mut ledger, cfg.n_max) {
        Ok(t) => t,
        Err(e) => {
            checks.push(CheckResult::fail("tilde-step-accepted", 1, 1, 0.0, format!("{e}")));
            return Ok(SuiteReport::from_checks("construction-step", checks));
        }
    };
    checks.push(CheckResult::pass(
        "tilde-step-resonance-identity",
        cfg.verify_points as u64,
        tilde.resonance_max_err,
        format!("|s~_n - u~_n| on I_n/10; tol {:.1e}", cfg.tol_resonance),
    ));
    checks.push(CheckResult::pass(
        "tilde-step-hyperbolicity",
        cfg.hyper_samples as u64,
        tilde.hyperbolicity_worst_ratio,
        if tilde.hyperbolicity_degenerate {
            "mu <= 1 at desk scale: certified degenerate"
        } else {
            "worst ratio across sampled blocks"
        },
    ));
    // Schedule context, reported (desk scale does not reach the source
    // thresholds; violations here are expected and not failures).
    let sch = &ledger.schedule;
    checks.push(CheckResult::pass(
        "lambda-schedule-report",
        sch.log_lambda_n.len() as u64,
        sch.threshold.relaxation,
        format!(
            "threshold satisfied: {}; relaxation factor {:.3e}; monotone: {}; smallness sums satisfied: {:?}",
            sch.threshold.satisfied,
            sch.threshold.relaxation,
            sch.monotone,
            sch.smallness.iter().map(|s| s.satisfied).collect::<Vec<_>>()
        ),
    ));
    Ok(SuiteReport::from_checks("construction-step", checks))
}

// ---------------------------------------------------------------------------
// LE-gap suite
// ---------------------------------------------------------------------------

fn le_gap_suite(cfg: &ExperimentConfig) -> Result<SuiteReport> {
    let mut checks = Vec::new();
    // Cocycle sanity: rotation, constant hyperbolic, free Schrodinger.
    let golden = convergents(&synthesize(&GrowthRule::Constant(1), 12, 0)?);
    let rot = CocycleSpec {
        table: golden.clone(),
        generator: Generator::RotHyp {
            log_lambda: 0.0,
            phi: PhiField::constant(0.9),
        },
    };
    let est = finite_le(&rot, 2000, 32)?;
    checks.push(if est.value.abs() <= 1e-12 {
        CheckResult::pass("cocycle-rotation-le-zero", est.used_points as u64, est.value.abs(), "rotation cocycle LE = 0")
    } else {
        CheckResult::fail("cocycle-rotation-le-zero", est.used_points as u64, 1, est.value, "rotation LE nonzero")
    });
    let lam = 30.0f64;
    let const_spec = CocycleSpec::new(
        golden.clone(),
        Generator::RotHyp {
            log_lambda: lam.ln(),
            phi: PhiField::constant(FRAC_PI_2),
        },
    )?;
    let est = finite_le(&const_spec, 5000, 16)?;
    let err = (est.value - lam.ln()).abs();
    checks.push(if err <= 1e-10 {
        CheckResult::pass("cocycle-constant-lambda-le", est.used_points as u64, err, "LE = log lambda at f64 sum accuracy")
    } else {
        CheckResult::fail("cocycle-constant-lambda-le", est.used_points as u64, 1, err, format!("value {}", est.value))
    });
    let schrod = CocycleSpec::new(
        golden,
        Generator::Schrodinger {
            energy: 3.0,
            v: PhiField::constant(0.0),
        },
    )?;
    let est = finite_le(&schrod, 10_000, 8)?;
    let rho = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let err = (est.tail_rate - rho).abs();
    checks.push(if err <= 1e-9 {
        CheckResult::pass(
            "cocycle-schrodinger-free-le",
            est.used_points as u64,
            err,
            format!(
                "tail increment matches log((3+sqrt5)/2); the (1/N) average carries its log(cond)/N bias ({:.3e})",
                est.value - rho
            ),
        )
    } else {
        CheckResult::fail("cocycle-schrodinger-free-le", est.used_points as u64, 1, err, format!("tail {}", est.tail_rate))
    });
    // The gap experiment at the frozen configuration and at doubled lambda.
    for (tag, lambda) in [("base", cfg.lambda), ("doubled", 2.0 * cfg.lambda)] {
        let mut run_cfg = cfg.clone();
        run_cfg.lambda = lambda;
        let table = run_cfg.table()?;
        let mut ledger = new_ledger(table.clone(), run_cfg.construction())?;
        for n in run_cfg.n_start..=run_cfg.n_max {
            build_phi_n(&mut ledger, n)?;
        }
        build_phi_tilde_n(&mut ledger, run_cfg.n_max)?;
        let res = gap_from_ledger(&ledger, &run_cfg.gap_config())?;
        let threshold = cfg.gap_threshold_factor * res.log_lambda;
        let gap_ok = res.min_gap >= threshold && res.spike_ok && !res.capped;
        let grids = res
            .per_grid
            .iter()
            .map(|g| format!("G={}: {:.4}", g.grid, g.gap))
            .collect::<Vec<_>>()
            .join(", ");
        checks.push(if gap_ok {
            CheckResult::pass(
                &format!("le-gap-{tag}"),
                res.per_grid.len() as u64,
                res.min_gap,
                format!(
                    "min gap {:.4} >= {:.4} (= {} log lambda) at horizon {}; per grid: {grids}",
                    res.min_gap, threshold, cfg.gap_threshold_factor, res.horizon
                ),
            )
        } else {
            CheckResult::fail(
                &format!("le-gap-{tag}"),
                res.per_grid.len() as u64,
                1,
                res.min_gap,
                format!("min gap {:.4} below {:.4}; per grid: {grids}", res.min_gap, threshold),
            )
        });
        checks.push(if res.control_gap == 0.0 {
            CheckResult::pass(
                &format!("le-gap-{tag}-control"),
                1,
                0.0,
                "replacing the perturbed cocycle by the original yields gap exactly 0",
            )
        } else {
            CheckResult::fail(&format!("le-gap-{tag}-control"), 1, 1, res.control_gap, "control gap nonzero")
        });
        let chain = resonant_chain_check(&ledger, run_cfg.level, run_cfg.chain_returns, run_cfg.chain_eps_prime)?;
        checks.push(if chain.pass_a && chain.pass_tilde {
            CheckResult::pass(
                &format!("resonant-chain-{tag}"),
                chain.steps,
                chain.rate_a - chain.rate_tilde,
                format!(
                    "A rate {:.4} >= (1-eps') log lambda {:.4}; perturbed rate {:.4} <= (1/2) log lambda {:.4}",
                    chain.rate_a,
                    (1.0 - run_cfg.chain_eps_prime) * chain.log_lambda,
                    chain.rate_tilde,
                    0.5 * chain.log_lambda
                ),
            )
        } else {
            CheckResult::fail(
                &format!("resonant-chain-{tag}"),
                chain.steps,
                1,
                chain.rate_a - chain.rate_tilde,
                format!("rates {:.4} / {:.4}", chain.rate_a, chain.rate_tilde),
            )
        });
    }
    Ok(SuiteReport::from_checks("le-gap", checks))
}
