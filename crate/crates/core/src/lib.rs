//! Sensitivity and block sensitivity of Boolean functions.
//!
//! The crate is split along the lines of the workflow:
//!
//! * [`boolfun`] holds truth tables, predicate-backed functions and the exact
//!   analyzers for `s(f)` and `bs(f)`.
//! * [`families`] builds the known separating families.
//! * [`cnf`] turns "some `f` on `n` variables has `s(f) <= s` and `bs(f) >= bs`"
//!   into one CNF instance per integer partition of `n`.
//! * [`search`] drives external SAT solvers over those instances, keeps a
//!   resumable record log, and carries the brute-force oracle.
//!
//! Bit convention everywhere: variable `x_1` is the least significant bit of
//! the canonical input index.

pub mod boolfun;
pub mod cnf;
mod error;
pub mod families;
pub mod search;

pub use boolfun::{
    block_sensitivity, block_sensitivity_at, block_sensitivity_with, sensitivity, sensitivity_at,
    sensitivity_with, BlockSet, BooleanFunction, Input, ScanLimits, SensitivityReport, StructuredFunction, TruthTable,
};
pub use error::{Error, Result};

/// The separation bound `bs <= (s^2 + s) / 2` observed for every function on
/// at most 12 variables.
pub fn conjectured_bs_bound(s: usize) -> usize {
    (s * s + s) / 2
}

pub fn satisfies_conjectured_bound(s: usize, bs: usize) -> bool {
    bs <= conjectured_bs_bound(s)
}
