//! Run persistence and re-export.
//!
//! `construct run` writes a run directory: the canonical config, the
//! per-step verification report, the ledger (correction interpolants with
//! exact-rational piece boundaries), the gap measurements, plot-ready CSV,
//! and a manifest with digests. `export` re-emits the CSV/JSON views from
//! the stored measurements; re-export is byte-idempotent.

use anyhow::{bail, Context, Result};
use serde::Serialize;
use std::path::Path;

use cocycle_lab::cocycle::{frame_fields, FrameSample};
use cocycle_lab::construction::experiment::{gap_from_ledger, GapResult};
use cocycle_lab::construction::ledger::{
    build_phi_n, build_phi_tilde_n, new_ledger, CorrectionLedger, StepReport, TildeStepReport,
};
use cocycle_lab::orbit::CriticalIntervalFamily;
use cocycle_lab::rational::CircleInterval;

use crate::config::ExperimentConfig;
use crate::manifest::RunManifest;
use crate::report::{csv_document, csv_f64, to_json_17};

/// CSV schema tag for the gap table.
pub const LE_GAP_CSV_VERSION: &str = "le_gap_v1";
/// CSV schema tag for frame-field samples.
pub const FRAMES_CSV_VERSION: &str = "frames_v1";

#[derive(Serialize)]
struct LedgerDumpPiece {
    lo: String,
    hi: String,
    x0: f64,
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

#[derive(Serialize)]
struct LedgerDumpCorrection {
    level: usize,
    support_lo: String,
    support_hi: String,
    pieces: Vec<LedgerDumpPiece>,
}

#[derive(Serialize)]
struct LedgerDump {
    steps: Vec<StepReport>,
    tilde_steps: Vec<TildeStepReport>,
    corrections: Vec<LedgerDumpCorrection>,
    tilde_corrections: Vec<LedgerDumpCorrection>,
}

fn dump_corrections(corrections: &[cocycle_lab::cocycle::LocalizedCorrection]) -> Vec<LedgerDumpCorrection> {
    corrections
        .iter()
        .map(|c| LedgerDumpCorrection {
            level: c.level,
            support_lo: c.support.lo().to_string(),
            support_hi: c.support.hi().to_string(),
            pieces: c
                .pieces
                .iter()
                .map(|p| LedgerDumpPiece {
                    lo: p.lo.to_string(),
                    hi: p.hi.to_string(),
                    x0: p.spline.x0,
                    h: p.spline.h,
                    values: p.spline.values.clone(),
                    slopes: p.spline.slopes.clone(),
                })
                .collect(),
        })
        .collect()
}

pub fn gap_csv(gap: &GapResult) -> String {
    let rows: Vec<Vec<String>> = gap
        .per_grid
        .iter()
        .map(|g| {
            vec![
                LE_GAP_CSV_VERSION.to_string(),
                g.grid.to_string(),
                gap.horizon.to_string(),
                csv_f64(g.le_a.value),
                csv_f64(g.le_a.stderr),
                csv_f64(g.le_a.excluded_fraction),
                csv_f64(g.le_tilde.value),
                csv_f64(g.le_tilde.stderr),
                csv_f64(g.gap),
            ]
        })
        .collect();
    csv_document(
        &[
            "schema",
            "grid",
            "horizon",
            "le_a",
            "le_a_stderr",
            "le_a_excluded_fraction",
            "le_tilde",
            "le_tilde_stderr",
            "gap",
        ],
        &rows,
    )
}

pub fn frames_csv(frames: &[FrameSample]) -> String {
    let rows: Vec<Vec<String>> = frames
        .iter()
        .map(|f| {
            vec![
                FRAMES_CSV_VERSION.to_string(),
                csv_f64(f.x_signed),
                f.r_plus.to_string(),
                f.r_minus.to_string(),
                csv_f64(f.log_norm_fwd),
                csv_f64(f.s_angle),
                csv_f64(f.u_angle),
                if f.well_defined { "ok" } else { "ill_defined" }.to_string(),
            ]
        })
        .collect();
    csv_document(
        &["schema", "x", "r_plus", "r_minus", "logscale", "s_angle", "u_angle", "flags"],
        &rows,
    )
}

/// Execute a full construction run and persist every artifact.
pub fn construct_run(cfg: &ExperimentConfig, out: &Path) -> Result<GapResult> {
    std::fs::create_dir_all(out)?;
    let config_json = to_json_17(cfg);
    let mut manifest = RunManifest::new(&config_json);
    manifest.record(out, "config.json", &config_json)?;
    let table = cfg.table()?;
    let mut ledger: CorrectionLedger = new_ledger(table.clone(), cfg.construction())?;
    for n in cfg.n_start..=cfg.n_max {
        build_phi_n(&mut ledger, n)?;
    }
    build_phi_tilde_n(&mut ledger, cfg.n_max)?;
    let gap = gap_from_ledger(&ledger, &cfg.gap_config())?;
    // Ledger with interpolant knots.
    let dump = LedgerDump {
        steps: ledger.steps.clone(),
        tilde_steps: ledger.tilde_steps.clone(),
        corrections: dump_corrections(&ledger.phi.corrections),
        tilde_corrections: ledger
            .phi_tilde
            .as_ref()
            .map(|(_, phi)| dump_corrections(&phi.corrections))
            .unwrap_or_default(),
    };
    manifest.record(out, "ledger.json", &to_json_17(&dump))?;
    manifest.record(out, "verification.json", &to_json_17(&gap))?;
    manifest.record(out, "le_gap.csv", &gap_csv(&gap))?;
    // Frame fields at the final level over the built cocycle.
    let b = CriticalIntervalFamily::b_n(&table, cfg.level);
    let interval = CircleInterval::half_open(-b.clone(), b);
    let samples = interval.interior_samples(128);
    let spec = ledger.spec()?;
    let frames = frame_fields(&spec, cfg.level, &samples, cfg.frame_floor)?;
    manifest.record(out, "frames.csv", &frames_csv(&frames))?;
    std::fs::write(out.join("manifest.json"), to_json_17(&manifest))?;
    Ok(gap)
}

/// Re-emit the stored measurements in the requested format; byte-idempotent.
pub fn export_run(dir: &Path, format: &str) -> Result<Vec<String>> {
    let verification = dir.join("verification.json");
    if !verification.exists() {
        bail!("missing run artifact {verification:?}");
    }
    let gap: GapResult = serde_json::from_str(
        &std::fs::read_to_string(&verification).context("reading verification.json")?,
    )?;
    let mut written = Vec::new();
    match format {
        "csv" => {
            let path = dir.join("export_le_gap.csv");
            std::fs::write(&path, gap_csv(&gap))?;
            written.push(path.display().to_string());
        }
        "json" => {
            #[derive(Serialize)]
            struct Export<'a> {
                schema: &'static str,
                gap: &'a GapResult,
            }
            let path = dir.join("export_le_gap.json");
            std::fs::write(
                &path,
                to_json_17(&Export {
                    schema: "le_gap_export_v1",
                    gap: &gap,
                }),
            )?;
            written.push(path.display().to_string());
        }
        other => bail!("unknown export format {other:?} (use csv or json)"),
    }
    Ok(written)
}
