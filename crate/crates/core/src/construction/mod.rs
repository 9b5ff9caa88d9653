//! The inductive counterexample builder: sample functions per smoothness
//! class, lambda schedules, correction functions building the cocycle pair
//! `(A_n, Ã_n)`, exceptional sets, and the LE-gap experiment.

pub mod bump;
pub mod exceptional;
pub mod experiment;
pub mod ledger;
pub mod sample;
pub mod schedule;
pub mod seminorm;
pub mod spline;

pub use bump::{bump, bump_with_plateau, BumpFunction};
pub use exceptional::{exceptional_set, exceptional_set_with_count, ExceptionalSet};
pub use experiment::{le_gap_experiment, resonant_chain_check, ChainReport, GapConfig, GapResult};
pub use ledger::{
    build_phi_n, build_phi_tilde_n, new_ledger, ConstructionConfig, CorrectionLedger, StepReport,
    TildeStepReport,
};
pub use sample::{SampleClass, SampleFunction};
pub use schedule::{lambda_schedule, LambdaSchedule, ScheduleClass, SmallnessReport, ThresholdReport};
pub use seminorm::{gevrey_seminorm, SeminormReport};
