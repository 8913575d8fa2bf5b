//! Brute-force reference: enumerate every function on `n` variables.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::boolfun::{block_sensitivity, sensitivity, BooleanFunction, TruthTable};
use crate::error::{Error, Result};
use crate::satisfies_conjectured_bound;

pub const ORACLE_MAX_N: usize = 4;
/// Reachable with `allow_n5`; 2^32 functions, hours of CPU time.
pub const ORACLE_OPT_IN_MAX_N: usize = 5;

/// Function `x -> bit x of code`, for `n <= 5`.
#[derive(Clone, Copy)]
struct Coded {
    n: usize,
    code: u64,
}

impl BooleanFunction for Coded {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, index: u64) -> bool {
        self.code >> index & 1 == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleEntry {
    pub s: usize,
    pub max_bs: usize,
    /// Smallest table code attaining `max_bs` at sensitivity exactly `s`.
    pub witness: TruthTable,
}

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub n: usize,
    /// Keyed by exact sensitivity `s >= 1`; constant functions are skipped.
    pub entries: BTreeMap<usize, OracleEntry>,
    pub functions_checked: u64,
    /// Functions found with `bs > (s^2 + s) / 2`.
    pub conjecture_violations: u64,
}

impl OracleResult {
    pub fn max_bs(&self, s: usize) -> Option<usize> {
        self.entries.get(&s).map(|e| e.max_bs)
    }
}

/// Exact maximum `bs(f)` over all `f` on `n` variables with `s(f) = s`,
/// for every `s` (or only `s_filter`).
pub fn oracle_max_bs(n: usize, s_filter: Option<usize>, allow_n5: bool) -> Result<OracleResult> {
    let limit = if allow_n5 { ORACLE_OPT_IN_MAX_N } else { ORACLE_MAX_N };
    if n == 0 || n > limit {
        return Err(Error::Capacity {
            what: "brute-force oracle",
            n,
            limit,
        });
    }
    if n == ORACLE_OPT_IN_MAX_N {
        log::warn!("enumerating all 2^32 functions on 5 variables; expect hours of runtime");
    }
    let count = 1u64 << (1 << n);
    // per s: (max bs, smallest code), plus totals
    type Acc = (BTreeMap<usize, (usize, u64)>, u64, u64);
    let (best, checked, violations) = (0..count)
        .into_par_iter()
        .fold(
            || (BTreeMap::new(), 0u64, 0u64),
            |mut acc: Acc, code| {
                let f = Coded { n, code };
                let s = sensitivity(&f).expect("n <= 5").value;
                if s == 0 || s_filter.is_some_and(|want| want != s) {
                    return acc;
                }
                let bs = block_sensitivity(&f).expect("n <= 5").value();
                acc.1 += 1;
                if !satisfies_conjectured_bound(s, bs) {
                    log::error!("n={n} code={code:#x}: bs = {bs} exceeds (s^2+s)/2 for s = {s}");
                    acc.2 += 1;
                }
                merge_best(&mut acc.0, s, (bs, code));
                acc
            },
        )
        .reduce(
            || (BTreeMap::new(), 0, 0),
            |mut a, b| {
                for (s, cand) in b.0 {
                    merge_best(&mut a.0, s, cand);
                }
                (a.0, a.1 + b.1, a.2 + b.2)
            },
        );
    let entries = best
        .into_iter()
        .map(|(s, (max_bs, code))| {
            let witness = TruthTable::from_fn(n, |x| code >> x & 1 == 1)?;
            Ok((s, OracleEntry { s, max_bs, witness }))
        })
        .collect::<Result<_>>()?;
    Ok(OracleResult {
        n,
        entries,
        functions_checked: checked,
        conjecture_violations: violations,
    })
}

fn merge_best(best: &mut BTreeMap<usize, (usize, u64)>, s: usize, cand: (usize, u64)) {
    best.entry(s)
        .and_modify(|cur| {
            if cand.0 > cur.0 || (cand.0 == cur.0 && cand.1 < cur.1) {
                *cur = cand;
            }
        })
        .or_insert(cand);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_oracles() {
        let one = oracle_max_bs(1, None, false).unwrap();
        assert_eq!(one.entries.len(), 1);
        assert_eq!(one.max_bs(1), Some(1));
        assert_eq!(one.functions_checked, 2);

        let two = oracle_max_bs(2, None, false).unwrap();
        assert_eq!((two.max_bs(1), two.max_bs(2)), (Some(1), Some(2)));

        let three = oracle_max_bs(3, None, false).unwrap();
        for s in 1..=3 {
            assert_eq!(three.max_bs(s), Some(s));
        }
    }

    #[test]
    fn filter_and_limits() {
        let only = oracle_max_bs(3, Some(2), false).unwrap();
        assert_eq!(only.entries.keys().copied().collect::<Vec<_>>(), vec![2]);
        assert!(matches!(oracle_max_bs(5, None, false), Err(Error::Capacity { limit: 4, .. })));
        assert!(oracle_max_bs(6, None, true).is_err());
    }

    #[test]
    fn witnesses_attain_their_entry() {
        let r = oracle_max_bs(3, None, false).unwrap();
        for e in r.entries.values() {
            assert_eq!(sensitivity(&e.witness).unwrap().value, e.s);
            assert_eq!(block_sensitivity(&e.witness).unwrap().value(), e.max_bs);
        }
    }
}
