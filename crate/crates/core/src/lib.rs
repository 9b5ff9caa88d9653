//! Computational laboratory for quasiperiodic SL(2,R) cocycles over
//! irrational circle rotations.
//!
//! The crate is organized around five layers:
//!
//! - [`frequency`]: exact continued-fraction arithmetic; a frequency is
//!   always the exact rational convergent `p_M/q_M` of a truncated
//!   expansion, so every orbit statement below is checked with integer
//!   arithmetic and zero tolerance.
//! - [`orbit`]: three-distance gap structure, first-entry times, and the
//!   exact first-return partition of the critical intervals `I_n`,
//!   together with brute-force oracles.
//! - [`sl2`]: 2x2 singular frames, overflow-safe log-scaled products, and
//!   checks for the non-resonant growth / resonant cancellation estimates.
//! - [`cocycle`]: quasiperiodic cocycle iteration and finite-horizon
//!   Lyapunov-exponent estimation on rational phase grids.
//! - [`construction`]: sample functions per smoothness class, lambda
//!   schedules, the inductive correction ledger building the cocycle pair
//!   `(A_n, Ã_n)`, and the LE-gap experiment.

pub mod cocycle;
pub mod construction;
pub mod error;
pub mod frequency;
pub mod jet;
pub mod orbit;
pub mod rational;
pub mod sl2;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
