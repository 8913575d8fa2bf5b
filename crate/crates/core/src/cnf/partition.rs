use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Non-increasing positive parts summing to `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(invalid("a partition needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(invalid(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(format!("partition {parts:?} is not non-increasing")));
        }
        Ok(Self { parts })
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts, i.e. the block count it certifies.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn singletons(&self) -> usize {
        self.parts.iter().filter(|&&p| p == 1).count()
    }

    /// Consecutive 1-based index ranges `P_1, P_2, ...`.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut start = 1;
        self.parts
            .iter()
            .map(|&p| {
                let block = (start..start + p).collect();
                start += p;
                block
            })
            .collect()
    }

    /// The blocks as bit masks over canonical input indices.
    pub fn block_masks(&self) -> Vec<u64> {
        let mut offset = 0;
        self.parts
            .iter()
            .map(|&p| {
                let mask = ((1u64 << p) - 1) << offset;
                offset += p;
                mask
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("bad partition part {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// All partitions of `n` into exactly `bs` parts, in lexicographically
/// decreasing order. With `max_singletons`, partitions carrying more parts of
/// size 1 are dropped (a function cannot have more singleton sensitive blocks
/// than its sensitivity).
pub fn enumerate_partitions(n: usize, bs: usize, max_singletons: Option<usize>) -> Vec<Partition> {
    let mut out = Vec::new();
    if bs == 0 || bs > n {
        return out;
    }
    let mut current = Vec::with_capacity(bs);
    fill(n, bs, n, max_singletons, &mut current, &mut out);
    out
}

fn fill(
    remaining: usize,
    slots: usize,
    cap: usize,
    max_singletons: Option<usize>,
    current: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if slots == 0 {
        if remaining == 0 {
            out.push(Partition {
                parts: current.clone(),
            });
        }
        return;
    }
    let largest = cap.min(remaining - (slots - 1));
    let smallest = remaining.div_ceil(slots);
    for p in (smallest..=largest).rev() {
        if p == 1 {
            // every remaining part is a singleton
            let singles = current.iter().filter(|&&q| q == 1).count() + slots;
            if max_singletons.is_some_and(|m| singles > m) {
                continue;
            }
        }
        current.push(p);
        fill(remaining - p, slots - 1, p, max_singletons, current, out);
        current.pop();
    }
}
