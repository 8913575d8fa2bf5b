use std::fmt;
use std::sync::Arc;

use super::input::MAX_INPUT_VARS;
use super::{BooleanFunction, TruthTable};
use crate::error::{invalid, Result};

type Evaluator = dyn Fn(u64) -> bool + Send + Sync;

/// A function given by a predicate over canonical input indices, for widths
/// where an explicit table is out of reach.
#[derive(Clone)]
pub struct StructuredFunction {
    name: String,
    n: usize,
    evaluator: Arc<Evaluator>,
}

impl StructuredFunction {
    /// `evaluator` must be pure.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        evaluator: impl Fn(u64) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        if n == 0 || n > MAX_INPUT_VARS {
            return Err(invalid(format!("arity {n} outside 1..={MAX_INPUT_VARS}")));
        }
        Ok(Self {
            name: name.into(),
            n,
            evaluator: Arc::new(evaluator),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Materialize the table (only for `n <= 20`).
    pub fn to_table(&self) -> Result<TruthTable> {
        TruthTable::from_fn(self.n, |x| (self.evaluator)(x))
    }
}

impl BooleanFunction for StructuredFunction {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, index: u64) -> bool {
        (self.evaluator)(index)
    }
}

impl fmt::Debug for StructuredFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StructuredFunction")
            .field("name", &self.name)
            .field("n", &self.n)
            .finish()
    }
}
