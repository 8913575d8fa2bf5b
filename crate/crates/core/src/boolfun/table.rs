use std::fmt;
use std::str::FromStr;

use super::input::index_mask;
use super::{BooleanFunction, Input};
use crate::error::{invalid, Error, Result};

/// Explicit tables are limited to this many variables (2^20 entries).
pub const MAX_TABLE_VARS: usize = 20;

/// The full `2^n`-entry truth table of a Boolean function, indexed by
/// canonical input index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

fn check_width(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("a truth table needs at least one variable"));
    }
    if n > MAX_TABLE_VARS {
        return Err(Error::Capacity {
            what: "explicit truth table",
            n,
            limit: MAX_TABLE_VARS,
        });
    }
    Ok(())
}

impl TruthTable {
    pub fn constant(n: usize, value: bool) -> Result<Self> {
        check_width(n)?;
        let mut table = Self {
            n,
            words: vec![if value { u64::MAX } else { 0 }; word_count(n)],
        };
        table.clear_padding();
        Ok(table)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut table = Self::constant(n, false)?;
        for x in 0..table.len() as u64 {
            if f(x) {
                table.set(x, true);
            }
        }
        Ok(table)
    }

    pub fn from_bits(n: usize, bits: &[bool]) -> Result<Self> {
        check_width(n)?;
        if bits.len() != 1 << n {
            return Err(invalid(format!(
                "table for n = {n} needs {} entries, got {}",
                1usize << n,
                bits.len()
            )));
        }
        Self::from_fn(n, |x| bits[x as usize])
    }

    /// Table whose entry `x` is bit `x` of `value`; handy for `n <= 6`.
    pub fn from_u64(n: usize, value: u64) -> Result<Self> {
        if n > 6 {
            return Err(invalid("from_u64 only covers n <= 6"));
        }
        Self::from_fn(n, |x| value >> x & 1 == 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, index: u64) -> bool {
        self.words[(index >> 6) as usize] >> (index & 63) & 1 == 1
    }

    pub fn set(&mut self, index: u64, value: bool) {
        let word = &mut self.words[(index >> 6) as usize];
        let bit = 1u64 << (index & 63);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len() as u64).map(|x| self.get(x)).collect()
    }

    /// Pointwise negation.
    pub fn negate(&self) -> Self {
        let mut out = Self {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_padding();
        out
    }

    /// `g(x) = f(x^T)` for the 1-based index set `shift`.
    pub fn shift_compose(&self, shift: &[usize]) -> Result<Self> {
        let mask = index_mask(self.n, shift)?;
        Ok(self.shift_by_mask(mask))
    }

    pub(crate) fn shift_by_mask(&self, mask: u64) -> Self {
        Self::from_fn(self.n, |x| self.get(x ^ mask)).expect("width already validated")
    }

    /// Rename variables: `perm[i]` (0-based) is the position that old variable
    /// `x_{i+1}` moves to, i.e. `g(y) = f(x)` where `y_{perm[i]+1} = x_{i+1}`.
    pub fn permute_variables(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(invalid("permutation length differs from arity"));
        }
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(invalid(format!("{perm:?} is not a permutation of 0..{n}")));
            }
        }
        let mut out = Self::constant(n, false)?;
        for x in 0..self.len() as u64 {
            if self.get(x) {
                let y = (0..n)
                    .filter(|&i| x >> i & 1 == 1)
                    .fold(0u64, |acc, i| acc | 1 << perm[i]);
                out.set(y, true);
            }
        }
        Ok(out)
    }

    /// Text form: `n=<n>` on the first line, then `2^n` characters `0`/`1`
    /// in ascending canonical index order. No trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = format!("n={}\n", self.n);
        s.extend((0..self.len() as u64).map(|x| if self.get(x) { '1' } else { '0' }));
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        // tolerate the single newline most editors append
        let text = text.strip_suffix('\n').unwrap_or(text);
        let (header, body) = text
            .split_once('\n')
            .ok_or_else(|| Error::Parse("expected two lines: 'n=<int>' and the table".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad variable count in {header:?}: {e}")))?;
        check_width(n)?;
        if body.len() != 1 << n {
            return Err(Error::Parse(format!(
                "n = {n} needs {} table characters, found {}",
                1usize << n,
                body.len()
            )));
        }
        let bits = body
            .bytes()
            .map(|c| match c {
                b'0' => Ok(false),
                b'1' => Ok(true),
                other => Err(Error::Parse(format!(
                    "unexpected byte {:?} in table",
                    other as char
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(n, &bits)
    }

    pub fn value_at(&self, input: &Input) -> Result<bool> {
        self.value(input)
    }

    fn clear_padding(&mut self) {
        let len = self.len();
        if len < 64 {
            self.words[0] &= (1u64 << len) - 1;
        }
    }
}

impl BooleanFunction for TruthTable {
    fn arity(&self) -> usize {
        self.n
    }

    fn eval(&self, index: u64) -> bool {
        self.get(index)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n <= 8 {
            write!(f, "TruthTable({:?})", self.to_text())
        } else {
            write!(f, "TruthTable(n={}, ones={})", self.n, self.count_ones())
        }
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}
