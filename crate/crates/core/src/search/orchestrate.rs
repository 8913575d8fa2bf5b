//! Point searches, `max_bs` scans and separation tables.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use super::records::{verify_witness, RecordLog, SearchRecord};
use super::solver::{run_solver_until, RunOutcome, SolverConfig, SolverStatus, SolverVerdict};
use super::{check_conjecture, ConjectureCheck};
use crate::boolfun::TruthTable;
use crate::cnf::{build_instance, decode_model, enumerate_partitions, Partition, MAX_ENCODE_VARS};
use crate::error::{invalid, Error, Result};

/// Default upper end for [`build_table`].
pub const DEFAULT_TABLE_MAX_N: usize = 9;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub solver: SolverConfig,
    /// Skip partitions with more singleton parts than `s`.
    pub prune_singletons: bool,
    pub records: Option<RecordLog>,
}

impl SearchConfig {
    pub fn new(solver: SolverConfig) -> Self {
        Self {
            solver,
            prune_singletons: true,
            records: None,
        }
    }

    pub fn with_records(mut self, log: RecordLog) -> Self {
        self.records = Some(log);
        self
    }

    pub fn with_pruning(mut self, prune: bool) -> Self {
        self.prune_singletons = prune;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointOutcome {
    /// A verified function with `s(f) <= s`, sensitive at `0^n` on every
    /// block of `partition`.
    Feasible {
        function: TruthTable,
        partition: Partition,
    },
    Infeasible,
    Unknown,
}

impl PointOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PointOutcome::Feasible { .. })
    }
}

#[derive(Clone, Debug)]
pub struct PointReport {
    pub n: usize,
    pub s: usize,
    pub bs: usize,
    pub outcome: PointOutcome,
    /// Partitions left after pruning.
    pub partitions: usize,
    /// Solver processes started by this call.
    pub solver_calls: usize,
    /// Partitions answered from the record log.
    pub reused: usize,
    /// Records appended to the log by this call, in partition order.
    pub records: Vec<SearchRecord>,
    /// Exact measures of the returned function.
    pub measures: Option<ConjectureCheck>,
}

enum Known {
    Sat(TruthTable),
    Unsat,
}

struct Solved {
    verdict: SolverVerdict,
    function: Option<TruthTable>,
}

fn check_point(n: usize, s: usize, bs: usize) -> Result<()> {
    if n == 0 || n > MAX_ENCODE_VARS {
        return Err(invalid(format!("n must lie in 1..={MAX_ENCODE_VARS}, got {n}")));
    }
    if s == 0 || s > n {
        return Err(invalid(format!("s must lie in 1..={n}, got {s}")));
    }
    if bs == 0 || bs > n {
        return Err(invalid(format!("bs must lie in 1..={n}, got {bs}")));
    }
    Ok(())
}

fn record_key(n: usize, s: usize, bs: usize, p: &Partition) -> (usize, usize, usize, Vec<usize>) {
    (n, s, bs, p.parts().to_vec())
}

/// Decide whether some `f` on `n` variables has `s(f) <= s` and
/// `bs(f) >= bs`.
///
/// Partitions are solved on a pool of `workers` threads. The result is the
/// satisfiable partition of lowest rank, so outcomes and logged records do not
/// depend on the worker count: once rank `r` is satisfiable, solves of higher
/// rank are cancelled and not logged.
pub fn search_point(n: usize, s: usize, bs: usize, config: &SearchConfig) -> Result<PointReport> {
    check_point(n, s, bs)?;
    let partitions = enumerate_partitions(n, bs, config.prune_singletons.then_some(s));
    let completed = match &config.records {
        Some(log) => log.completed()?,
        None => HashMap::new(),
    };

    let mut known: Vec<Option<Known>> = Vec::with_capacity(partitions.len());
    for p in &partitions {
        let entry = match completed.get(&record_key(n, s, bs, p)) {
            Some(r) if r.status == SolverStatus::Unsat => Some(Known::Unsat),
            Some(r) => {
                let f = r.decoded_function()?.ok_or_else(|| {
                    Error::Consistency(format!("logged sat record for {p} has no function"))
                })?;
                verify_witness(&f, s, p)?;
                Some(Known::Sat(f))
            }
            None => None,
        };
        known.push(entry);
    }
    let first_known_sat = known.iter().position(|k| matches!(k, Some(Known::Sat(_))));
    let horizon = first_known_sat.unwrap_or(partitions.len());
    let pending: Vec<usize> = (0..horizon).filter(|&r| known[r].is_none()).collect();
    let reused = known
        .iter()
        .take(horizon + usize::from(first_known_sat.is_some()))
        .filter(|k| k.is_some())
        .count();

    let best = AtomicUsize::new(first_known_sat.unwrap_or(usize::MAX));
    let failed = AtomicBool::new(false);
    let next = AtomicUsize::new(0);
    let calls = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<Solved>>>> =
        Mutex::new((0..pending.len()).map(|_| None).collect());

    let workers = config.solver.workers().min(pending.len());
    thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let t = next.fetch_add(1, Ordering::SeqCst);
                if t >= pending.len() {
                    break;
                }
                let rank = pending[t];
                if failed.load(Ordering::SeqCst) || rank > best.load(Ordering::SeqCst) {
                    continue;
                }
                let partition = &partitions[rank];
                let solved = build_instance(n, s, bs, partition).and_then(|instance| {
                    calls.fetch_add(1, Ordering::SeqCst);
                    let stop = || failed.load(Ordering::SeqCst) || best.load(Ordering::SeqCst) < rank;
                    match run_solver_until(&instance, &config.solver, &stop)? {
                        RunOutcome::Cancelled => Ok(None),
                        RunOutcome::Finished(verdict) => {
                            let function = match (&verdict.status, &verdict.model) {
                                (SolverStatus::Sat, Some(model)) => {
                                    let f = decode_model(&instance, model)?;
                                    verify_witness(&f, s, partition)?;
                                    best.fetch_min(rank, Ordering::SeqCst);
                                    Some(f)
                                }
                                _ => None,
                            };
                            Ok(Some(Solved { verdict, function }))
                        }
                    }
                });
                let slot = match solved {
                    Ok(None) => continue,
                    Ok(Some(s)) => Ok(s),
                    Err(e) => {
                        failed.store(true, Ordering::SeqCst);
                        Err(e)
                    }
                };
                results.lock().expect("no poisoned workers")[t] = Some(slot);
            });
        }
    });

    let cut = best.load(Ordering::SeqCst);
    let results = results.into_inner().expect("no poisoned workers");
    let mut solved_by_rank: BTreeMap<usize, Solved> = BTreeMap::new();
    for (t, slot) in results.into_iter().enumerate() {
        let rank = pending[t];
        match slot {
            Some(Err(e)) if rank <= cut => return Err(e),
            Some(Ok(solved)) if rank <= cut => {
                solved_by_rank.insert(rank, solved);
            }
            _ => {}
        }
    }

    let records: Vec<SearchRecord> = solved_by_rank
        .iter()
        .map(|(&rank, solved)| SearchRecord {
            n,
            s,
            bs,
            partition: partitions[rank].parts().to_vec(),
            status: solved.verdict.status,
            elapsed_s: solved.verdict.elapsed.as_secs_f64(),
            function: solved.function.as_ref().map(TruthTable::to_text),
            verified: solved.function.is_some(),
        })
        .collect();
    if let Some(log) = &config.records {
        log.append(&records)?;
    }

    let outcome = if cut != usize::MAX {
        let function = match known[cut].take() {
            Some(Known::Sat(f)) => f,
            _ => solved_by_rank
                .remove(&cut)
                .and_then(|s| s.function)
                .expect("the cut rank holds a verified model"),
        };
        PointOutcome::Feasible {
            function,
            partition: partitions[cut].clone(),
        }
    } else {
        let all_unsat = (0..partitions.len()).all(|r| {
            matches!(known[r], Some(Known::Unsat))
                || solved_by_rank
                    .get(&r)
                    .is_some_and(|s| s.verdict.status == SolverStatus::Unsat)
        });
        if all_unsat {
            PointOutcome::Infeasible
        } else {
            PointOutcome::Unknown
        }
    };

    let measures = match &outcome {
        PointOutcome::Feasible { function, .. } => Some(check_conjecture(function)?),
        _ => None,
    };

    Ok(PointReport {
        n,
        s,
        bs,
        outcome,
        partitions: partitions.len(),
        solver_calls: calls.load(Ordering::SeqCst),
        reused,
        records,
        measures,
    })
}

#[derive(Clone, Debug)]
pub struct MaxBsReport {
    pub n: usize,
    pub s: usize,
    /// Largest `bs` shown feasible. With `complete == false` this is only a
    /// lower bound.
    pub value: usize,
    /// False when an `Unknown` verdict stopped the scan.
    pub complete: bool,
    /// Witness for `value` when the scan produced one.
    pub witness: Option<TruthTable>,
    pub points: Vec<PointReport>,
}

/// Largest `bs` such that some `f` on `n` variables has `s(f) <= s` and
/// `bs(f) >= bs`, scanning upwards from `bs = s`.
pub fn max_bs(n: usize, s: usize, config: &SearchConfig) -> Result<MaxBsReport> {
    check_point(n, s, s)?;
    scan_from(n, s, None, config)
}

/// `known` is a value already shown feasible (by padding a smaller instance);
/// the scan then starts just above it.
fn scan_from(
    n: usize,
    s: usize,
    known: Option<usize>,
    config: &SearchConfig,
) -> Result<MaxBsReport> {
    let mut report = MaxBsReport {
        n,
        s,
        value: known.unwrap_or(0),
        complete: false,
        witness: None,
        points: Vec::new(),
    };
    let start = known.map_or(s, |v| v + 1);
    for bs in start..=n {
        let point = search_point(n, s, bs, config)?;
        let outcome = point.outcome.clone();
        report.points.push(point);
        match outcome {
            PointOutcome::Feasible { function, .. } => {
                report.value = bs;
                report.witness = Some(function);
            }
            PointOutcome::Infeasible => {
                report.complete = true;
                break;
            }
            PointOutcome::Unknown => return Ok(report),
        }
    }
    if report.value == 0 {
        return Err(Error::Consistency(format!(
            "bs = s = {s} reported infeasible at n = {n}"
        )));
    }
    // ran off the end: bs = n is feasible
    report.complete = true;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableCell {
    pub n: usize,
    pub s: usize,
    pub max_bs: usize,
    pub complete: bool,
}

/// `(s, bs)` first becomes achievable at `n` variables, with `bs > s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationRow {
    pub n: usize,
    pub s: usize,
    pub bs: usize,
}

#[derive(Clone, Debug)]
pub struct SeparationTable {
    pub max_n: usize,
    pub cells: Vec<TableCell>,
    pub rows: Vec<SeparationRow>,
    /// Some cell is only a lower bound.
    pub partial: bool,
}

impl SeparationTable {
    pub fn cell(&self, n: usize, s: usize) -> Option<&TableCell> {
        self.cells.iter().find(|c| c.n == n && c.s == s)
    }
}

/// `max_bs(n, s)` for every `1 <= s <= n <= max_n`, and the rows where a
/// larger `bs` first appears.
///
/// Padding a function with an ignored variable preserves both measures, so
/// the scan for `(n, s)` resumes from the value at `(n - 1, s)`. Completed
/// cells come from the record log when one is configured.
pub fn build_table(max_n: usize, config: &SearchConfig) -> Result<SeparationTable> {
    if max_n == 0 || max_n > MAX_ENCODE_VARS {
        return Err(invalid(format!("max_n must lie in 1..={MAX_ENCODE_VARS}")));
    }
    let mut cells: Vec<TableCell> = Vec::new();
    let mut previous: BTreeMap<usize, TableCell> = BTreeMap::new();
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for s in 1..=n {
            let below = previous.get(&s).map(|c| c.max_bs);
            let scan = scan_from(n, s, below, config)?;
            let cell = TableCell {
                n,
                s,
                max_bs: scan.value,
                complete: scan.complete,
            };
            if cell.max_bs > s && below.is_none_or(|b| cell.max_bs > b) {
                rows.push(SeparationRow {
                    n,
                    s,
                    bs: cell.max_bs,
                });
            }
            previous.insert(s, cell.clone());
            cells.push(cell);
        }
    }
    let partial = cells.iter().any(|c| !c.complete);
    Ok(SeparationTable {
        max_n,
        cells,
        rows,
        partial,
    })
}
