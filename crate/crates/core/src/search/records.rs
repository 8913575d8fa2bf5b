//! Append-only record log: one JSON object per line, one line per solved
//! `(n, s, bs, partition)` cell.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::SolverStatus;
use crate::boolfun::{sensitivity, BlockSet, Input, TruthTable};
use crate::cnf::Partition;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub n: usize,
    pub s: usize,
    pub bs: usize,
    pub partition: Vec<usize>,
    pub status: SolverStatus,
    pub elapsed_s: f64,
    /// Decoded function in truth-table text form; present iff `sat`.
    pub function: Option<String>,
    pub verified: bool,
}

pub(crate) type RecordKey = (usize, usize, usize, Vec<usize>);

impl SearchRecord {
    pub(crate) fn key(&self) -> RecordKey {
        (self.n, self.s, self.bs, self.partition.clone())
    }

    pub fn decoded_function(&self) -> Result<Option<TruthTable>> {
        self.function.as_deref().map(TruthTable::parse_text).transpose()
    }

    /// Re-run the checks behind `verified` from the logged data alone.
    pub fn reverify(&self) -> Result<bool> {
        let Some(f) = self.decoded_function()? else {
            return Ok(false);
        };
        let partition = Partition::new(self.partition.clone())?;
        Ok(f.n() == self.n
            && partition.n() == self.n
            && partition.len() == self.bs
            && verify_witness(&f, self.s, &partition).is_ok())
    }
}

/// `f(0) = 0`, every block of `partition` flips `f` at `0^n`, and `s(f) <= s`.
pub(crate) fn verify_witness(f: &TruthTable, s: usize, partition: &Partition) -> Result<()> {
    let blocks = BlockSet {
        blocks: partition.blocks(),
        witness: Input::zeros(f.n())?,
    };
    if f.get(0) {
        return Err(Error::Consistency("decoded function has f(0) = 1".into()));
    }
    blocks
        .validate(f)
        .map_err(|e| Error::Consistency(format!("partition {partition}: {e}")))?;
    let found = sensitivity(f)?;
    if found.value > s {
        return Err(Error::Consistency(format!(
            "decoded function has s(f) = {} > {s} (witness {})",
            found.value, found.witness
        )));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RecordLog {
    path: PathBuf,
}

impl RecordLog {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn io_err(&self, source: std::io::Error) -> Error {
        Error::RecordLog {
            path: self.path.clone(),
            source,
        }
    }

    /// All records in file order. A missing file is an empty log; unreadable
    /// lines (torn writes) are skipped.
    pub fn load(&self) -> Result<Vec<SearchRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(self.io_err(e)),
        };
        let lines: Vec<String> = BufReader::new(file)
            .lines()
            .collect::<std::io::Result<_>>()
            .map_err(|e| self.io_err(e))?;
        let mut records = Vec::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(line) {
                Ok(r) => records.push(r),
                // an interrupted write; the cell is simply solved again
                Err(e) => log::warn!("{} line {}: skipping unreadable record: {e}", self.path.display(), i + 1),
            }
        }
        Ok(records)
    }

    /// Latest completed (`sat`/`unsat`) record per cell.
    pub(crate) fn completed(&self) -> Result<HashMap<RecordKey, SearchRecord>> {
        Ok(self
            .load()?
            .into_iter()
            .filter(|r| r.status.is_complete())
            .map(|r| (r.key(), r))
            .collect())
    }

    pub fn append(&self, records: &[SearchRecord]) -> Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        let mut text = String::new();
        if self.needs_leading_newline()? {
            text.push('\n');
        }
        for r in records {
            text.push_str(&serde_json::to_string(r).expect("records always serialize"));
            text.push('\n');
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| self.io_err(e))?;
        file.write_all(text.as_bytes()).map_err(|e| self.io_err(e))?;
        file.sync_data().map_err(|e| self.io_err(e))
    }

    /// A torn final line must not swallow the next record.
    fn needs_leading_newline(&self) -> Result<bool> {
        match std::fs::read(&self.path) {
            Ok(bytes) => Ok(bytes.last().is_some_and(|&b| b != b'\n')),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
            Err(e) => Err(self.io_err(e)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(status: SolverStatus) -> SearchRecord {
        SearchRecord {
            n: 2,
            s: 2,
            bs: 2,
            partition: vec![1, 1],
            status,
            elapsed_s: 0.25,
            function: (status == SolverStatus::Sat).then(|| "n=2\n0110".to_string()),
            verified: status == SolverStatus::Sat,
        }
    }

    #[test]
    fn line_schema() {
        let line = serde_json::to_string(&record(SolverStatus::Sat)).unwrap();
        assert_eq!(
            line,
            r#"{"n":2,"s":2,"bs":2,"partition":[1,1],"status":"sat","elapsed_s":0.25,"function":"n=2\n0110","verified":true}"#
        );
        let line = serde_json::to_string(&record(SolverStatus::Unknown)).unwrap();
        assert!(line.contains(r#""status":"unknown""#));
        assert!(line.contains(r#""function":null"#));
    }

    #[test]
    fn reverify_from_log() {
        assert!(record(SolverStatus::Sat).reverify().unwrap());
        let mut bad = record(SolverStatus::Sat);
        bad.s = 1; // parity has s = 2
        assert!(!bad.reverify().unwrap());
        assert!(!record(SolverStatus::Unsat).reverify().unwrap());
    }

    #[test]
    fn append_load_and_torn_tail() {
        let dir = tempfile::tempdir().unwrap();
        let log = RecordLog::new(dir.path().join("records.jsonl"));
        assert!(log.load().unwrap().is_empty());
        log.append(&[record(SolverStatus::Sat), record(SolverStatus::Unknown)]).unwrap();
        assert_eq!(log.load().unwrap().len(), 2);
        assert_eq!(log.completed().unwrap().len(), 1);

        // simulate a crash in the middle of a write
        let mut f = OpenOptions::new().append(true).open(log.path()).unwrap();
        f.write_all(br#"{"n":2,"s":"#).unwrap();
        drop(f);
        assert_eq!(log.load().unwrap().len(), 2);
        log.append(&[record(SolverStatus::Unsat)]).unwrap();
        let loaded = log.load().unwrap();
        assert_eq!(loaded.len(), 3);
        assert_eq!(loaded[2].status, SolverStatus::Unsat);
    }
}
