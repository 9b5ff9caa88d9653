//! Experiment configuration: a single JSON document drives every suite.
//!
//! Unknown fields are rejected and serialization round-trips exactly, so a
//! config file is a faithful, replayable record of a run.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use cocycle_lab::cocycle::{CocycleSpec, Generator, PhiField};
use cocycle_lab::construction::experiment::GapConfig;
use cocycle_lab::construction::ledger::ConstructionConfig;
use cocycle_lab::construction::sample::{SampleClass, SampleFunction};
use cocycle_lab::construction::schedule::ScheduleClass;
use cocycle_lab::frequency::{convergents, synthesize, ConvergentTable, GrowthRule};

/// Frequency synthesis rule, as written in config files and on the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleSpec {
    Constant { a: u64 },
    Pattern { block: Vec<u64> },
    Spike {
        base: u64,
        positions: Vec<usize>,
        factor: u64,
    },
    Random { lo: u64, hi: u64 },
}

impl RuleSpec {
    pub fn to_rule(&self) -> GrowthRule {
        match self {
            RuleSpec::Constant { a } => GrowthRule::Constant(*a),
            RuleSpec::Pattern { block } => GrowthRule::Pattern(block.clone()),
            RuleSpec::Spike {
                base,
                positions,
                factor,
            } => GrowthRule::Spike {
                base: *base,
                positions: positions.clone(),
                factor: *factor,
            },
            RuleSpec::Random { lo, hi } => GrowthRule::Random { lo: *lo, hi: *hi },
        }
    }

    /// Parse the CLI shorthand: `golden`, `silver`, `desk`,
    /// `constant:3`, `pattern:1,1,3`, `spike:1@5x200`, `random:1,9`.
    pub fn parse(text: &str) -> Result<RuleSpec> {
        match text {
            "golden" => return Ok(RuleSpec::Constant { a: 1 }),
            "silver" => return Ok(RuleSpec::Constant { a: 2 }),
            "desk" => {
                return Ok(RuleSpec::Pattern {
                    block: cocycle_lab::construction::experiment::desk_frequency_quotients(),
                })
            }
            _ => {}
        }
        let (kind, rest) = text
            .split_once(':')
            .with_context(|| format!("unrecognized rule {text:?}"))?;
        let spec = match kind {
            "constant" => RuleSpec::Constant { a: rest.parse()? },
            "pattern" => RuleSpec::Pattern {
                block: rest
                    .split(',')
                    .map(|s| s.trim().parse::<u64>().map_err(Into::into))
                    .collect::<Result<_>>()?,
            },
            "spike" => {
                let (base, tail) = rest.split_once('@').context("spike needs base@pos x factor")?;
                let (pos, factor) = tail.split_once('x').context("spike needs posxfactor")?;
                RuleSpec::Spike {
                    base: base.parse()?,
                    positions: pos
                        .split('+')
                        .map(|s| s.parse::<usize>().map_err(Into::into))
                        .collect::<Result<_>>()?,
                    factor: factor.parse()?,
                }
            }
            "random" => {
                let (lo, hi) = rest.split_once(',').context("random needs lo,hi")?;
                RuleSpec::Random {
                    lo: lo.parse()?,
                    hi: hi.parse()?,
                }
            }
            other => bail!("unrecognized rule kind {other:?}"),
        };
        Ok(spec)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyConfig {
    #[serde(flatten)]
    pub rule: RuleSpec,
    pub depth: usize,
    pub seed: u64,
}

impl FrequencyConfig {
    pub fn table(&self) -> Result<ConvergentTable> {
        Ok(convergents(&synthesize(
            &self.rule.to_rule(),
            self.depth,
            self.seed,
        )?))
    }
}

/// Angle/potential profile, as written in cocycle spec files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    Constant { value: f64 },
    Cl { l: u32, delta0: f64 },
    Cinf { sigma: f64 },
    Gevrey { s: f64 },
}

impl ProfileConfig {
    pub fn to_field(&self) -> Result<PhiField> {
        Ok(match self {
            ProfileConfig::Constant { value } => PhiField::constant(*value),
            ProfileConfig::Cl { l, delta0 } => PhiField::from_sample(SampleFunction::new(
                SampleClass::Cl {
                    l: *l,
                    delta0: *delta0,
                },
            )?),
            ProfileConfig::Cinf { sigma } => {
                PhiField::from_sample(SampleFunction::new(SampleClass::Cinf { sigma: *sigma })?)
            }
            ProfileConfig::Gevrey { s } => {
                PhiField::from_sample(SampleFunction::new(SampleClass::Gevrey { s: *s })?)
            }
        })
    }
}

/// A standalone cocycle description for `cocycle le` / `cocycle frames`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorConfig {
    RotHyp { lambda: f64, phi: ProfileConfig },
    Schrodinger { energy: f64, v: ProfileConfig },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleConfig {
    pub frequency: FrequencyConfig,
    #[serde(flatten)]
    pub generator: GeneratorConfig,
}

impl CocycleConfig {
    pub fn to_spec(&self) -> Result<CocycleSpec> {
        let table = self.frequency.table()?;
        let generator = match &self.generator {
            GeneratorConfig::RotHyp { lambda, phi } => Generator::RotHyp {
                log_lambda: lambda.ln(),
                phi: phi.to_field()?,
            },
            GeneratorConfig::Schrodinger { energy, v } => Generator::Schrodinger {
                energy: *energy,
                v: v.to_field()?,
            },
        };
        Ok(CocycleSpec::new(table, generator)?)
    }
}

/// Sample-function class plus its schedule parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClassConfig {
    Cl { l: u32, delta0: f64 },
    Cinf { sigma: f64, delta: f64 },
    GevreyDc { s: f64, tau: f64, gamma: f64 },
    GevreySdc { s: f64 },
}

impl ClassConfig {
    pub fn sample_class(&self) -> SampleClass {
        match self {
            ClassConfig::Cl { l, delta0 } => SampleClass::Cl {
                l: *l,
                delta0: *delta0,
            },
            ClassConfig::Cinf { sigma, .. } => SampleClass::Cinf { sigma: *sigma },
            ClassConfig::GevreyDc { s, .. } | ClassConfig::GevreySdc { s } => {
                SampleClass::Gevrey { s: *s }
            }
        }
    }

    pub fn schedule_class(&self) -> ScheduleClass {
        match self {
            ClassConfig::Cl { l, .. } => ScheduleClass::Cl { l: *l },
            ClassConfig::Cinf { delta, .. } => ScheduleClass::Cinf { delta: *delta },
            ClassConfig::GevreyDc { s, tau, gamma } => ScheduleClass::GevreyDc {
                s: *s,
                tau: *tau,
                gamma: *gamma,
            },
            ClassConfig::GevreySdc { s } => ScheduleClass::GevreySdc { s: *s },
        }
    }
}

/// The full experiment configuration consumed by `construct run` and the
/// verification suites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub frequency: FrequencyConfig,
    pub class: ClassConfig,
    pub lambda: f64,
    pub epsilon: f64,
    /// Defaults to 1/(200 l) for the C^l class when absent.
    pub eta: Option<f64>,
    pub nu: f64,
    pub bump_plateau_frac: f64,
    pub n_start: usize,
    pub n_max: usize,
    pub sample_points: usize,
    pub verify_points: usize,
    pub hyper_samples: usize,
    pub tol_angle: f64,
    pub tol_resonance: f64,
    pub frame_floor: f64,
    /// Cancellation level of the gap experiment (= n_max).
    pub level: usize,
    pub horizon: u64,
    pub horizon_cap: u64,
    pub grids: Vec<usize>,
    pub exclusion_level: usize,
    pub chain_returns: usize,
    pub chain_eps_prime: f64,
    /// Gap acceptance threshold as a multiple of log lambda.
    pub gap_threshold_factor: f64,
    /// Trials for the randomized matrix-lemma ensembles.
    pub sl2_trials: usize,
    pub seed: u64,
    /// Worker threads; absent = library default.
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn construction(&self) -> ConstructionConfig {
        let eta = self.eta.unwrap_or(match &self.class {
            ClassConfig::Cl { l, .. } => 1.0 / (200.0 * *l as f64),
            _ => 0.004,
        });
        ConstructionConfig {
            class: self.class.sample_class(),
            schedule: self.class.schedule_class(),
            log_lambda: self.lambda.ln(),
            epsilon: self.epsilon,
            eta,
            nu: self.nu,
            bump_plateau_frac: self.bump_plateau_frac,
            n_start: self.n_start,
            n_max: self.n_max,
            sample_points: self.sample_points,
            verify_points: self.verify_points,
            hyper_samples: self.hyper_samples,
            tol_angle: self.tol_angle,
            tol_resonance: self.tol_resonance,
            frame_floor: self.frame_floor,
        }
    }

    pub fn gap_config(&self) -> GapConfig {
        GapConfig {
            construction: self.construction(),
            level: self.level,
            horizon: self.horizon,
            horizon_cap: self.horizon_cap,
            grids: self.grids.clone(),
            exclusion_level: self.exclusion_level,
            chain_returns: self.chain_returns,
            chain_eps_prime: self.chain_eps_prime,
        }
    }

    pub fn table(&self) -> Result<ConvergentTable> {
        self.frequency.table()
    }
}

/// The frozen desk-scale configuration every suite defaults to.
pub fn default_config() -> ExperimentConfig {
    ExperimentConfig {
        schema_version: 1,
        frequency: FrequencyConfig {
            rule: RuleSpec::Pattern {
                block: cocycle_lab::construction::experiment::desk_frequency_quotients(),
            },
            depth: 10,
            seed: 0,
        },
        class: ClassConfig::Cl { l: 1, delta0: 0.12 },
        lambda: 70.0,
        epsilon: 0.05,
        eta: None,
        nu: 2.0,
        bump_plateau_frac: 0.5,
        n_start: 2,
        n_max: 3,
        sample_points: 16385,
        verify_points: 101,
        hyper_samples: 16,
        tol_angle: 1e-6,
        tol_resonance: 1e-8,
        frame_floor: 10.0,
        level: 3,
        horizon: 3614,
        horizon_cap: 1_000_000,
        grids: vec![241, 331, 401],
        exclusion_level: 4,
        chain_returns: 10,
        chain_eps_prime: 0.85,
        gap_threshold_factor: 0.1,
        sl2_trials: 10_000,
        seed: 1,
        workers: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_exact() {
        let cfg = default_config();
        let json = serde_json::to_string_pretty(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);
        let json2 = serde_json::to_string_pretty(&back).unwrap();
        assert_eq!(json, json2);
    }

    #[test]
    fn unknown_fields_rejected() {
        let mut v: serde_json::Value =
            serde_json::to_value(default_config()).unwrap();
        v.as_object_mut()
            .unwrap()
            .insert("surprise".into(), serde_json::json!(1));
        let err = serde_json::from_value::<ExperimentConfig>(v);
        assert!(err.is_err());
    }

    #[test]
    fn rule_shorthand() {
        assert_eq!(RuleSpec::parse("golden").unwrap(), RuleSpec::Constant { a: 1 });
        assert_eq!(
            RuleSpec::parse("pattern:1,1,3").unwrap(),
            RuleSpec::Pattern { block: vec![1, 1, 3] }
        );
        assert_eq!(
            RuleSpec::parse("spike:1@5x200").unwrap(),
            RuleSpec::Spike {
                base: 1,
                positions: vec![5],
                factor: 200
            }
        );
        assert_eq!(
            RuleSpec::parse("random:1,9").unwrap(),
            RuleSpec::Random { lo: 1, hi: 9 }
        );
        assert!(RuleSpec::parse("nonsense").is_err());
    }
}
