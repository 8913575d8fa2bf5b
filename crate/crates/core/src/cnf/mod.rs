//! CNF encoding of "some `f` on `n` variables has `s(f) <= s` and
//! `bs(f) >= bs`", one instance per partition of `n` into `bs` parts.
//!
//! Variable numbering is fixed: the table variable of input index `x` is
//! `x + 1`, followed by the counting-ladder variables of each input in
//! ascending canonical order, each ladder in row-major `(i, j)` order.

mod instance;
mod ladder;
mod partition;
mod wlog;

pub use instance::{
    build_instance, build_sensitivity_instance, decode_model, emit_dimacs, encode_bs_constraint,
    encode_sensitivity_constraint, table_var, CnfInstance, InstanceMeta, SensitivityEncoding,
    VarMap, MAX_ENCODE_VARS,
};
pub use ladder::{encode_ladder, ladder_cell_count, CountingLadder, Term};
pub use partition::{enumerate_partitions, Partition};
pub use wlog::normalize_witness;

/// A DIMACS literal: positive for the variable, negative for its negation.
pub type Literal = i32;
pub type Clause = Vec<Literal>;
