//! Unary counting ladder.
//!
//! Cell `c(i, j)` is true iff at least `j` of `b_1..b_i` are true, defined by
//! `c(i, j) = (c(i-1, j-1) & b_i) | c(i-1, j)`. Base cells are constants
//! (`c(i, 0) = true`, `c(i, j) = false` for `i < j`) and never become
//! variables. The outputs `a_j = c(n, j)` form a sorted (thermometer) copy of
//! the inputs.

use super::{Clause, Literal};

/// A literal or a folded constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    Const(bool),
    Lit(Literal),
}

impl Term {
    fn negate(self) -> Self {
        match self {
            Term::Const(b) => Term::Const(!b),
            Term::Lit(l) => Term::Lit(-l),
        }
    }
}

/// Push a clause after constant folding; satisfied clauses are dropped.
pub(crate) fn push_clause(clauses: &mut Vec<Clause>, terms: &[Term]) {
    let mut clause = Vec::with_capacity(terms.len());
    for &t in terms {
        match t {
            Term::Const(true) => return,
            Term::Const(false) => {}
            Term::Lit(l) => clause.push(l),
        }
    }
    assert!(!clause.is_empty(), "ladder folding produced an empty clause");
    clauses.push(clause);
}

/// Variables `c(i, j)` for `1 <= j <= i <= n`.
pub fn ladder_cell_count(n: usize) -> usize {
    n * (n + 1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingLadder {
    pub first_var: Literal,
    pub n: usize,
}

impl CountingLadder {
    /// Variable of `c(i, j)`, `1 <= j <= i <= n`.
    pub fn cell(&self, i: usize, j: usize) -> Literal {
        debug_assert!(1 <= j && j <= i && i <= self.n);
        self.first_var + ((i - 1) * i / 2 + (j - 1)) as Literal
    }

    fn term(&self, i: usize, j: usize) -> Term {
        if j == 0 {
            Term::Const(true)
        } else if i < j {
            Term::Const(false)
        } else {
            Term::Lit(self.cell(i, j))
        }
    }

    /// `a_j = c(n, j)`: true iff at least `j` inputs are true.
    pub fn output(&self, j: usize) -> Term {
        self.term(self.n, j)
    }

    pub fn var_range(&self) -> std::ops::Range<Literal> {
        self.first_var..self.first_var + ladder_cell_count(self.n) as Literal
    }
}

/// Allocate a ladder over `inputs` starting at `*next_var` and append its
/// defining clauses (both directions of each recurrence).
pub fn encode_ladder(
    inputs: &[Literal],
    next_var: &mut Literal,
    clauses: &mut Vec<Clause>,
) -> CountingLadder {
    let n = inputs.len();
    let ladder = CountingLadder {
        first_var: *next_var,
        n,
    };
    *next_var += ladder_cell_count(n) as Literal;
    for i in 1..=n {
        let b = Term::Lit(inputs[i - 1]);
        for j in 1..=i {
            let c = Term::Lit(ladder.cell(i, j));
            let carry = ladder.term(i - 1, j - 1);
            let keep = ladder.term(i - 1, j);
            push_clause(clauses, &[carry.negate(), b.negate(), c]);
            push_clause(clauses, &[keep.negate(), c]);
            push_clause(clauses, &[c.negate(), carry, keep]);
            push_clause(clauses, &[c.negate(), b, keep]);
        }
    }
    ladder
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    /// Plain unit propagation over `clauses` from the given fixed values.
    fn propagate(clauses: &[Clause], fixed: &HashMap<Literal, bool>) -> HashMap<Literal, bool> {
        let mut value = fixed.clone();
        loop {
            let mut changed = false;
            for clause in clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &l in clause {
                    match value.get(&l.abs()) {
                        Some(&v) if v == (l > 0) => satisfied = true,
                        Some(_) => {}
                        None => {
                            open += 1;
                            unassigned = Some(l);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                assert!(open > 0, "conflict in clause {clause:?}");
                if open == 1 {
                    let l = unassigned.unwrap();
                    value.insert(l.abs(), l > 0);
                    changed = true;
                }
            }
            if !changed {
                return value;
            }
        }
    }

    fn check_semantics(b: &[bool]) {
        let n = b.len();
        let inputs: Vec<Literal> = (1..=n as Literal).collect();
        let mut next = n as Literal + 1;
        let mut clauses = Vec::new();
        let ladder = encode_ladder(&inputs, &mut next, &mut clauses);
        assert_eq!(next - ladder.first_var, ladder_cell_count(n) as Literal);

        let fixed: HashMap<Literal, bool> = inputs.iter().zip(b).map(|(&v, &x)| (v, x)).collect();
        let value = propagate(&clauses, &fixed);
        let ones = b.iter().filter(|&&x| x).count();
        for i in 1..=n {
            let prefix = b[..i].iter().filter(|&&x| x).count();
            for j in 1..=i {
                // propagation alone fixes every cell: the valuation is unique
                assert_eq!(value.get(&ladder.cell(i, j)), Some(&(prefix >= j)), "c({i},{j})");
            }
        }
        for j in 1..=n {
            assert_eq!(ladder.output(j), Term::Lit(ladder.cell(n, j)));
            assert_eq!(value[&ladder.cell(n, j)], ones >= j);
        }
        assert_eq!(ladder.output(n + 1), Term::Const(false));
        assert_eq!(ladder.output(0), Term::Const(true));
    }

    #[test]
    fn exhaustive_small_widths() {
        for n in 1..=6 {
            for code in 0u32..1 << n {
                let b: Vec<bool> = (0..n).map(|i| code >> i & 1 == 1).collect();
                check_semantics(&b);
            }
        }
    }

    #[test]
    fn single_input_ladder_is_an_equivalence() {
        let mut next = 2;
        let mut clauses = Vec::new();
        encode_ladder(&[1], &mut next, &mut clauses);
        let mut sorted: Vec<Clause> = clauses.into_iter().map(|mut c| { c.sort(); c }).collect();
        sorted.sort();
        assert_eq!(sorted, vec![vec![-2, 1], vec![-1, 2]]);
    }

    proptest! {
        #[test]
        fn counts_like_popcount(b in prop::collection::vec(any::<bool>(), 1..=10)) {
            check_semantics(&b);
        }
    }
}
