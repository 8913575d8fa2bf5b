//! Boolean functions and their sensitivity measures.

mod input;
mod measures;
mod structured;
mod table;

pub use input::Input;
pub use measures::{
    block_sensitivity, block_sensitivity_at, block_sensitivity_with, minimal_sensitive_blocks,
    sensitivity, sensitivity_at, sensitivity_with, BlockSet, ScanLimits, SensitivityReport,
};
pub use structured::StructuredFunction;
pub use table::{TruthTable, MAX_TABLE_VARS};

use crate::error::{invalid, Result};

/// Anything that can be evaluated on a canonical input index.
///
/// Implementations must be pure: the same index always yields the same bit.
pub trait BooleanFunction: Sync {
    fn arity(&self) -> usize;

    /// Evaluate on the input whose canonical index is `index` (`x_1` = bit 0).
    fn eval(&self, index: u64) -> bool;

    fn value(&self, input: &Input) -> Result<bool> {
        check_arity(self.arity(), input)?;
        Ok(self.eval(input.index()))
    }
}

pub(crate) fn check_arity(n: usize, input: &Input) -> Result<()> {
    if input.n() != n {
        return Err(invalid(format!(
            "input has {} variables, function has {n}",
            input.n()
        )));
    }
    Ok(())
}
