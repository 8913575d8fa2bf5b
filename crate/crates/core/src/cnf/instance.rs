use std::collections::HashMap;
use std::fmt::Write;
use std::ops::Range;

use super::ladder::{encode_ladder, push_clause, CountingLadder, Term};
use super::{Clause, Literal, Partition};
use crate::boolfun::TruthTable;
use crate::error::{invalid, Error, Result};

/// Widest function the encoder accepts.
pub const MAX_ENCODE_VARS: usize = 14;

/// Table variable holding `f(x)` for canonical index `x`.
pub fn table_var(index: u64) -> Literal {
    index as Literal + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceMeta {
    pub s: usize,
    pub bs: Option<usize>,
    pub partition: Option<Partition>,
}

/// Where each group of variables lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarMap {
    pub n: usize,
    /// `1..2^n + 1`
    pub table: Range<Literal>,
    /// Ladder variables of input `x` at `ladders[x]`; empty when the
    /// sensitivity bound is vacuous.
    pub ladders: Vec<Range<Literal>>,
    pub meta: InstanceMeta,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    var_count: usize,
    clauses: Vec<Clause>,
    var_map: Option<VarMap>,
}

impl CnfInstance {
    /// A bare instance without a variable map.
    pub fn from_clauses(var_count: usize, clauses: Vec<Clause>) -> Result<Self> {
        let instance = Self {
            var_count,
            clauses,
            var_map: None,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn var_map(&self) -> Option<&VarMap> {
        self.var_map.as_ref()
    }

    /// Append unit clauses fixing every table variable to `f`.
    pub fn pin_function(&self, f: &TruthTable) -> Result<Self> {
        let map = self
            .var_map
            .as_ref()
            .ok_or_else(|| invalid("instance has no table variables"))?;
        if map.n != f.n() {
            return Err(invalid(format!("instance has n = {}, function has n = {}", map.n, f.n())));
        }
        let mut pinned = self.clone();
        pinned.clauses.extend((0..f.len() as u64).map(|x| {
            let v = table_var(x);
            vec![if f.get(x) { v } else { -v }]
        }));
        Ok(pinned)
    }

    /// `model[v - 1]` is the value of variable `v`.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&l| model.get(l.unsigned_abs() as usize - 1) == Some(&(l > 0)))
        })
    }

    fn validate(&self) -> Result<()> {
        for clause in &self.clauses {
            if clause.is_empty() {
                return Err(invalid("empty clause"));
            }
            for &l in clause {
                if l == 0 || l.unsigned_abs() as usize > self.var_count {
                    return Err(invalid(format!(
                        "literal {l} outside 1..={} in {clause:?}",
                        self.var_count
                    )));
                }
                if clause.contains(&-l) {
                    return Err(invalid(format!("clause {clause:?} is a tautology")));
                }
            }
        }
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    if n > MAX_ENCODE_VARS {
        return Err(Error::Capacity {
            what: "CNF encoding",
            n,
            limit: MAX_ENCODE_VARS,
        });
    }
    Ok(())
}

/// `f(0) = 0` and `f(0^{P_i}) = 1` for each consecutive block `P_i`.
pub fn encode_bs_constraint(partition: &Partition) -> Vec<Clause> {
    std::iter::once(vec![-table_var(0)])
        .chain(partition.block_masks().into_iter().map(|m| vec![table_var(m)]))
        .collect()
}

pub struct SensitivityEncoding {
    pub clauses: Vec<Clause>,
    /// One ladder per input, ascending canonical order; empty when `s >= n`.
    pub ladders: Vec<CountingLadder>,
    /// First variable not used by the encoding.
    pub next_var: Literal,
}

/// `s(f, w) <= s` for every input `w`, with ladder variables allocated from
/// `first_var` upwards.
///
/// With `b_i = f(w^{i})` counted by a ladder with outputs `a_j`, the bound is
/// `(!f(w) & !a_{s+1}) | (f(w) & a_{n-s})`, emitted as the two clauses
/// `(!f(w) | a_{n-s})` and `(f(w) | !a_{s+1})`.
pub fn encode_sensitivity_constraint(n: usize, s: usize, first_var: Literal) -> SensitivityEncoding {
    let mut enc = SensitivityEncoding {
        clauses: Vec::new(),
        ladders: Vec::new(),
        next_var: first_var,
    };
    if s >= n {
        return enc;
    }
    let mut neighbours = Vec::with_capacity(n);
    for w in 0..1u64 << n {
        neighbours.clear();
        neighbours.extend((0..n).map(|i| table_var(w ^ 1 << i)));
        let ladder = encode_ladder(&neighbours, &mut enc.next_var, &mut enc.clauses);
        let fw = Term::Lit(table_var(w));
        push_clause(&mut enc.clauses, &[Term::Lit(-table_var(w)), ladder.output(n - s)]);
        push_clause(&mut enc.clauses, &[fw, negate(ladder.output(s + 1))]);
        enc.ladders.push(ladder);
    }
    enc
}

fn negate(t: Term) -> Term {
    match t {
        Term::Const(b) => Term::Const(!b),
        Term::Lit(l) => Term::Lit(-l),
    }
}

fn assemble(n: usize, s: usize, mut clauses: Vec<Clause>, meta: InstanceMeta) -> CnfInstance {
    let table_end = table_var(1 << n);
    let enc = encode_sensitivity_constraint(n, s, table_end);
    clauses.extend(enc.clauses);
    let var_map = VarMap {
        n,
        table: 1..table_end,
        ladders: enc.ladders.iter().map(CountingLadder::var_range).collect(),
        meta,
    };
    CnfInstance {
        var_count: (enc.next_var - 1) as usize,
        clauses,
        var_map: Some(var_map),
    }
}

/// Instance for "some `f` has `s(f) <= s` and is sensitive at `0^n` on each
/// block of `partition`".
pub fn build_instance(n: usize, s: usize, bs: usize, partition: &Partition) -> Result<CnfInstance> {
    check_n(n)?;
    if partition.n() != n || partition.len() != bs {
        return Err(invalid(format!(
            "partition {partition} is not a partition of {n} into {bs} parts"
        )));
    }
    let meta = InstanceMeta {
        s,
        bs: Some(bs),
        partition: Some(partition.clone()),
    };
    Ok(assemble(n, s, encode_bs_constraint(partition), meta))
}

/// Instance carrying only the sensitivity bound.
pub fn build_sensitivity_instance(n: usize, s: usize) -> Result<CnfInstance> {
    check_n(n)?;
    let meta = InstanceMeta {
        s,
        bs: None,
        partition: None,
    };
    Ok(assemble(n, s, Vec::new(), meta))
}

/// DIMACS text. Comment lines carry the parameters and variable layout.
pub fn emit_dimacs(instance: &CnfInstance) -> String {
    let mut out = String::with_capacity(16 * instance.clauses.len() + 256);
    if let Some(map) = &instance.var_map {
        let meta = &map.meta;
        let bs = meta.bs.map_or_else(|| "none".to_string(), |b| b.to_string());
        let partition = meta
            .partition
            .as_ref()
            .map_or_else(|| "none".to_string(), ToString::to_string);
        let _ = writeln!(
            out,
            "c meta n={} s={} bs={bs} partition={partition} bitorder=lsb-x1",
            map.n, meta.s
        );
        let _ = writeln!(out, "c vars table={}..{}", map.table.start, map.table.end - 1);
        match (map.ladders.first(), map.ladders.last()) {
            (Some(first), Some(last)) => {
                let _ = writeln!(
                    out,
                    "c vars ladder={}..{} per_input={}",
                    first.start,
                    last.end - 1,
                    first.len()
                );
            }
            _ => out.push_str("c vars ladder=none\n"),
        }
    }
    let _ = writeln!(out, "p cnf {} {}", instance.var_count, instance.clauses.len());
    for clause in &instance.clauses {
        for l in clause {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    out
}

/// Read `f` off the table variables of a model given as DIMACS literals.
pub fn decode_model(instance: &CnfInstance, assignment: &[Literal]) -> Result<TruthTable> {
    let map = instance
        .var_map
        .as_ref()
        .ok_or_else(|| Error::Decode("instance has no table variables".into()))?;
    let mut values: HashMap<Literal, bool> = HashMap::with_capacity(assignment.len());
    for &l in assignment {
        if l == 0 {
            continue;
        }
        if let Some(prev) = values.insert(l.abs(), l > 0) {
            if prev != (l > 0) {
                return Err(Error::Decode(format!("variable {} assigned both ways", l.abs())));
            }
        }
    }
    let mut table = TruthTable::constant(map.n, false)?;
    for x in 0..1u64 << map.n {
        let v = table_var(x);
        let value = values
            .get(&v)
            .ok_or_else(|| Error::Decode(format!("table variable {v} missing from model")))?;
        table.set(x, *value);
    }
    Ok(table)
}
