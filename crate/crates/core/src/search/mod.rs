//! SAT-driven search for maximal sensitivity / block sensitivity separations.

mod oracle;
mod orchestrate;
mod records;
mod solver;

pub use oracle::{oracle_max_bs, OracleEntry, OracleResult, ORACLE_MAX_N, ORACLE_OPT_IN_MAX_N};
pub use orchestrate::{
    build_table, max_bs, search_point, MaxBsReport, PointOutcome, PointReport, SearchConfig,
    SeparationRow, SeparationTable, TableCell, DEFAULT_TABLE_MAX_N,
};
pub use records::{RecordLog, SearchRecord};
pub use solver::{
    parse_solver_output, run_solver, SolverCommand, SolverConfig, SolverStatus, SolverVerdict,
    DEFAULT_TIME_LIMIT, FILE_PLACEHOLDER, REFERENCE_SOLVER, SOLVER_ENV,
};

use crate::boolfun::{block_sensitivity_with, sensitivity, ScanLimits, TruthTable};
use crate::error::Result;

/// Exact `s(f)` and `bs(f)` of a produced function, and whether
/// `bs <= (s^2 + s) / 2` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjectureCheck {
    pub s: usize,
    pub bs: usize,
    pub holds: bool,
}

/// Measures `f` exactly and logs an error if it beats the conjectured bound.
pub fn check_conjecture(f: &TruthTable) -> Result<ConjectureCheck> {
    let s = sensitivity(f)?.value;
    let bs = block_sensitivity_with(f, ScanLimits::large())?.value();
    let holds = crate::satisfies_conjectured_bound(s, bs);
    if !holds {
        log::error!(
            "bound violated: s = {s}, bs = {bs} > {} for {}",
            crate::conjectured_bs_bound(s),
            f.to_text()
        );
    }
    Ok(ConjectureCheck { s, bs, holds })
}
