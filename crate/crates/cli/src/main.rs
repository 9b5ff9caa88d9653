//! Single-binary laboratory: exact continued-fraction and orbit queries,
//! matrix-lemma ensembles, cocycle LE estimates, construction runs, and
//! the verification suites.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use cocycle_lab::cocycle::{finite_le, finite_le_excluding, frame_fields};
use cocycle_lab::construction::exceptional_set;
use cocycle_lab::frequency::{classify, convergents, expand_real, ClassifyParams};
use cocycle_lab::orbit::{
    critical_intervals, return_time_brute, return_time_closed, three_distance, Convention,
    CriticalIntervalFamily, Direction,
};
use cocycle_lab::rational::{CircleInterval, Rat};

use cocycle_lab_cli::config::{CocycleConfig, ExperimentConfig, RuleSpec};
use cocycle_lab_cli::export::{construct_run, export_run, frames_csv};
use cocycle_lab_cli::report::{csv_document, to_json_17};
use cocycle_lab_cli::suites::{
    faa_check, hyperbolic_check, nonresonant_check, resonant_checks, run_suite, svd_check,
    SuiteName,
};

#[derive(Parser)]
#[command(name = "cocycle-lab", version, about = "Quasiperiodic cocycle laboratory")]
struct Cli {
    /// Worker threads (also via COCYCLE_LAB_WORKERS); 0 = library default.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Continued-fraction arithmetic.
    #[command(subcommand)]
    Freq(FreqCmd),
    /// Circle-rotation orbit structure.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Matrix product lemma ensembles.
    #[command(subcommand)]
    Sl2(Sl2Cmd),
    /// Cocycle iteration and Lyapunov estimates.
    #[command(subcommand)]
    Cocycle(CocycleCmd),
    /// Inductive construction runs.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Re-emit stored run measurements.
    Export(ExportArgs),
}

#[derive(Args)]
struct FreqArgs {
    /// Rule: golden | silver | desk | constant:A | pattern:A,B,... |
    /// spike:BASE@POSxFACTOR | random:LO,HI
    #[arg(long)]
    rule: String,
    #[arg(long, default_value_t = 15)]
    depth: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum FreqCmd {
    /// Gauss-map expansion of an exact rational in (0,1).
    Expand {
        /// P/Q
        #[arg(long)]
        rational: String,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Synthesize a frequency from a growth rule.
    Synth {
        #[command(flatten)]
        freq: FreqArgs,
    },
    /// Finite-truncation frequency classification.
    Classify {
        #[command(flatten)]
        freq: FreqArgs,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 2.0)]
        tau: f64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
    },
}

#[derive(Subcommand)]
enum OrbitCmd {
    /// Three-distance gap structure of level n.
    Gaps {
        #[command(flatten)]
        freq: FreqArgs,
        #[arg(long)]
        n: usize,
    },
    /// Closed-form vs brute-force return times on I_n; CSV output.
    Return {
        #[command(flatten)]
        freq: FreqArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Also run the brute-force oracle (otherwise t_brute = t_closed).
        #[arg(long)]
        brute: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Sl2Cmd {
    /// Randomized checks of one matrix lemma.
    Verify {
        /// basic | resonant | hyperbolic | faa | svd
        #[arg(long)]
        lemma: String,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum CocycleCmd {
    /// Finite-horizon Lyapunov estimate on a rational grid.
    Le {
        /// Cocycle spec JSON file.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Exclude the exceptional set of this level.
        #[arg(long)]
        exclude_level: Option<usize>,
    },
    /// Invariant-direction fields s_n, u_n over I_n; CSV output.
    Frames {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        level: usize,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Build the ledger, run the gap experiment, persist the run dir.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// orbit-oracle | sl2-lemmas | construction-step | le-gap | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    run: PathBuf,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
}

fn load_config(path: &Option<PathBuf>) -> Result<ExperimentConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {p:?}"))?;
            Ok(serde_json::from_str(&text)?)
        }
        None => Ok(cocycle_lab_cli::config::default_config()),
    }
}

fn parse_rational(text: &str) -> Result<Rat> {
    let (p, q) = text.split_once('/').context("expected P/Q")?;
    let p: num_bigint::BigInt = p.trim().parse()?;
    let q: num_bigint::BigInt = q.trim().parse()?;
    Ok(Rat::new(p, q))
}

#[derive(Serialize)]
struct ConvergentRowOut {
    n: usize,
    p: String,
    q: String,
    z_num: String,
    z_den: String,
}

fn table_rows(table: &cocycle_lab::frequency::ConvergentTable) -> Vec<ConvergentRowOut> {
    table
        .rows()
        .iter()
        .map(|r| ConvergentRowOut {
            n: r.n,
            p: r.p.to_string(),
            q: r.q.to_string(),
            z_num: r.z.numer().to_string(),
            z_den: r.z.denom().to_string(),
        })
        .collect()
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let workers = if cli.workers > 0 {
        cli.workers
    } else {
        std::env::var("COCYCLE_LAB_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    };
    if workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .ok();
    }
    match cli.command {
        Command::Freq(cmd) => freq_cmd(cmd)?,
        Command::Orbit(cmd) => orbit_cmd(cmd)?,
        Command::Sl2(cmd) => sl2_cmd(cmd)?,
        Command::Cocycle(cmd) => cocycle_cmd(cmd)?,
        Command::Construct(ConstructCmd::Run { config, out }) => {
            let cfg = load_config(&config)?;
            let gap = construct_run(&cfg, &out)?;
            println!(
                "run complete: min gap {:.6} over grids {:?}; artifacts in {}",
                gap.min_gap,
                cfg.grids,
                out.display()
            );
        }
        Command::Verify(args) => {
            let cfg = load_config(&args.config)?;
            let name = SuiteName::parse(&args.suite)
                .with_context(|| format!("unknown suite {:?}", args.suite))?;
            let report = run_suite(name, &cfg)?;
            let json = to_json_17(&report);
            match &args.out {
                Some(p) => std::fs::write(p, &json)?,
                None => print!("{json}"),
            }
            for c in &report.checks {
                eprintln!(
                    "[{}] {} ({} cases, {} violations)",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.cases,
                    c.violations
                );
            }
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Export(args) => {
            for f in export_run(&args.run, &args.format)? {
                println!("{f}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn freq_cmd(cmd: FreqCmd) -> Result<()> {
    match cmd {
        FreqCmd::Expand { rational, depth } => {
            let x = parse_rational(&rational)?;
            let pq = expand_real(&x, depth)?;
            let table = convergents(&pq);
            #[derive(Serialize)]
            struct Out {
                quotients: Vec<String>,
                finite: bool,
                rows: Vec<ConvergentRowOut>,
            }
            print!(
                "{}",
                to_json_17(&Out {
                    quotients: pq.quotients.iter().map(|a| a.to_string()).collect(),
                    finite: pq.finite,
                    rows: table_rows(&table),
                })
            );
        }
        FreqCmd::Synth { freq } => {
            let rule = RuleSpec::parse(&freq.rule)?;
            let table = convergents(&cocycle_lab::frequency::synthesize(
                &rule.to_rule(),
                freq.depth,
                freq.seed,
            )?);
            #[derive(Serialize)]
            struct Out {
                alpha_hat: String,
                rows: Vec<ConvergentRowOut>,
            }
            print!(
                "{}",
                to_json_17(&Out {
                    alpha_hat: table.alpha_hat().to_string(),
                    rows: table_rows(&table),
                })
            );
        }
        FreqCmd::Classify {
            freq,
            gamma,
            tau,
            delta,
        } => {
            let rule = RuleSpec::parse(&freq.rule)?;
            let table = convergents(&cocycle_lab::frequency::synthesize(
                &rule.to_rule(),
                freq.depth,
                freq.seed,
            )?);
            let report = classify(&table, ClassifyParams { gamma, tau, delta })?;
            print!("{}", to_json_17(&report));
        }
    }
    Ok(())
}

fn orbit_cmd(cmd: OrbitCmd) -> Result<()> {
    match cmd {
        OrbitCmd::Gaps { freq, n } => {
            let rule = RuleSpec::parse(&freq.rule)?;
            let table = convergents(&cocycle_lab::frequency::synthesize(
                &rule.to_rule(),
                freq.depth,
                freq.seed,
            )?);
            let td = three_distance(&table, n)?;
            #[derive(Serialize)]
            struct Out {
                n: usize,
                points: usize,
                small_gap: String,
                large_gap: String,
                large_gap_count: usize,
                successor_rule_holds: bool,
            }
            print!(
                "{}",
                to_json_17(&Out {
                    n,
                    points: td.points.len(),
                    small_gap: td.small_gap.to_string(),
                    large_gap: td.large_gap.to_string(),
                    large_gap_count: td.large_gap_count(),
                    successor_rule_holds: td.successor_rule_holds(&table),
                })
            );
        }
        OrbitCmd::Return {
            freq,
            n,
            samples,
            brute,
            out,
        } => {
            let rule = RuleSpec::parse(&freq.rule)?;
            let table = convergents(&cocycle_lab::frequency::synthesize(
                &rule.to_rule(),
                freq.depth,
                freq.seed,
            )?);
            let fam = critical_intervals(&table, n, Convention::Asymmetric)?;
            let cap = table.q_u64(n + 2) + table.q_u64(n + 1) + 2;
            let mut rows = Vec::new();
            let mut arcs = vec![fam.fast0.clone(), fam.star.clone()];
            arcs.extend(fam.ladder.iter().cloned());
            for arc in &arcs {
                for x in arc
                    .interior_samples(samples)
                    .into_iter()
                    .chain(arc.contained_endpoints())
                {
                    let (t_closed, sub) = return_time_closed(&x, &table, n, Direction::Forward)?;
                    let t_brute = if brute {
                        return_time_brute(&x, &table, n, Direction::Forward, Convention::Asymmetric, cap)?
                    } else {
                        t_closed
                    };
                    rows.push(vec![
                        x.unsigned_repr().numer().to_string(),
                        x.unsigned_repr().denom().to_string(),
                        sub.to_string(),
                        t_closed.to_string(),
                        t_brute.to_string(),
                        (t_closed == t_brute).to_string(),
                    ]);
                }
            }
            let csv = csv_document(
                &["x_num", "x_den", "subinterval", "t_closed", "t_brute", "match"],
                &rows,
            );
            match out {
                Some(p) => std::fs::write(p, csv)?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}

fn sl2_cmd(cmd: Sl2Cmd) -> Result<()> {
    let Sl2Cmd::Verify {
        lemma,
        trials,
        seed,
    } = cmd;
    let checks = match lemma.as_str() {
        "basic" => vec![nonresonant_check(trials, seed)],
        "resonant" => resonant_checks(trials, seed),
        "hyperbolic" => vec![hyperbolic_check(trials, seed)],
        "faa" => vec![faa_check()],
        "svd" => vec![svd_check(trials, seed)],
        other => bail!("unknown lemma {other:?} (basic|resonant|hyperbolic|faa|svd)"),
    };
    #[derive(Serialize)]
    struct Out {
        lemma: String,
        trials: usize,
        violations: u64,
        worst_case: f64,
        checks: Vec<cocycle_lab_cli::suites::CheckResult>,
    }
    let violations = checks.iter().map(|c| c.violations).sum();
    let worst_case = checks.iter().fold(0.0f64, |m, c| m.max(c.worst));
    let passed = checks.iter().all(|c| c.passed);
    print!(
        "{}",
        to_json_17(&Out {
            lemma,
            trials,
            violations,
            worst_case,
            checks,
        })
    );
    if !passed {
        bail!("lemma ensemble reported violations");
    }
    Ok(())
}

fn cocycle_cmd(cmd: CocycleCmd) -> Result<()> {
    match cmd {
        CocycleCmd::Le {
            spec,
            horizon,
            grid,
            exclude_level,
        } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {spec:?}"))?;
            let cc: CocycleConfig = serde_json::from_str(&text)?;
            let spec = cc.to_spec()?;
            let est = match exclude_level {
                Some(level) => {
                    let excl = exceptional_set(&spec.table, level)?;
                    finite_le_excluding(&spec, horizon, grid, &excl.intervals)?
                }
                None => finite_le(&spec, horizon, grid)?,
            };
            print!("{}", to_json_17(&est));
        }
        CocycleCmd::Frames {
            spec,
            level,
            samples,
            out,
        } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {spec:?}"))?;
            let cc: CocycleConfig = serde_json::from_str(&text)?;
            let spec = cc.to_spec()?;
            let b = CriticalIntervalFamily::b_n(&spec.table, level);
            let interval = CircleInterval::half_open(-b.clone(), b);
            let xs = interval.interior_samples(samples);
            let frames = frame_fields(&spec, level, &xs, 10.0)?;
            let csv = frames_csv(&frames);
            match out {
                Some(p) => std::fs::write(p, csv)?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}
