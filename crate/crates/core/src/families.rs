//! Separating families: the odd-square section family with
//! `s = 2k+1, bs = (2k+1)(k+1)` and Rubinstein's even-square family with
//! `2 bs = s^2 = n`.
//!
//! Both are laid out in contiguous sections: section `t` (1-based) owns the
//! global indices `(t-1)w+1 ..= t*w` for section width `w`.

use crate::boolfun::{BlockSet, Input, StructuredFunction, TruthTable};
use crate::error::{invalid, Error, Result};

/// Largest `k` whose `n = (2k+1)^2` fits a packed input.
pub const MAX_VIRZA_K: usize = 3;

/// Parameters of the section family for a given `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VirzaFamily {
    pub k: usize,
}

impl VirzaFamily {
    pub fn new(k: usize) -> Result<Self> {
        if k > MAX_VIRZA_K {
            return Err(Error::Capacity {
                what: "section family",
                n: (2 * k + 1) * (2 * k + 1),
                limit: (2 * MAX_VIRZA_K + 1).pow(2),
            });
        }
        Ok(Self { k })
    }

    pub fn section_width(&self) -> usize {
        2 * self.k + 1
    }

    pub fn section_count(&self) -> usize {
        2 * self.k + 1
    }

    pub fn n(&self) -> usize {
        self.section_count() * self.section_width()
    }

    /// A section is good when its local bits are exactly one complete pair
    /// `x_{2i-1} = x_{2i} = 1` (`1 <= i <= k`), or exactly the last bit.
    pub fn is_good_section(&self, local: u64) -> bool {
        if local == 1 << (2 * self.k) {
            return true;
        }
        let tz = local.trailing_zeros() as usize;
        local.count_ones() == 2 && tz.is_multiple_of(2) && tz < 2 * self.k && local >> tz == 0b11
    }

    pub fn eval(&self, x: u64) -> bool {
        let width = self.section_width();
        let mask = (1u64 << width) - 1;
        (0..self.section_count()).any(|t| self.is_good_section(x >> (t * width) & mask))
    }

    /// At the all-zero input: every pair and every section's last bit.
    pub fn witness_blocks(&self) -> BlockSet {
        let width = self.section_width();
        let mut blocks = Vec::with_capacity(self.section_count() * (self.k + 1));
        for t in 0..self.section_count() {
            let off = t * width;
            for i in 1..=self.k {
                blocks.push(vec![off + 2 * i - 1, off + 2 * i]);
            }
            blocks.push(vec![off + width]);
        }
        BlockSet {
            blocks,
            witness: Input::zeros(self.n()).expect("n <= 49"),
        }
    }

    pub fn function(&self) -> StructuredFunction {
        let family = *self;
        StructuredFunction::new(format!("virza(k={})", self.k), self.n(), move |x| family.eval(x))
            .expect("n <= 49")
    }
}

pub fn virza_family(k: usize) -> Result<StructuredFunction> {
    Ok(VirzaFamily::new(k)?.function())
}

pub fn virza_witness_blocks(k: usize) -> Result<BlockSet> {
    Ok(VirzaFamily::new(k)?.witness_blocks())
}

/// Explicit table of the section family; only `k <= 1` fits.
pub fn virza_table(k: usize) -> Result<TruthTable> {
    virza_family(k)?.to_table()
}

/// Rubinstein's family on `n = m^2` variables, `m` even.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RubinsteinFamily {
    pub m: usize,
}

impl RubinsteinFamily {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 || m % 2 == 1 {
            return Err(invalid(format!("m must be a positive even integer, got {m}")));
        }
        if m * m > 63 {
            return Err(Error::Capacity {
                what: "Rubinstein family",
                n: m * m,
                limit: 36,
            });
        }
        Ok(Self { m })
    }

    pub fn n(&self) -> usize {
        self.m * self.m
    }

    /// `g_i`: the interval holds exactly one aligned pair `{2j-1, 2j}`.
    /// Intervals start at odd global indices, so local and global pairs line up.
    pub fn interval_predicate(&self, local: u64) -> bool {
        let tz = local.trailing_zeros() as usize;
        local.count_ones() == 2 && tz.is_multiple_of(2) && tz + 1 < self.m && local >> tz == 0b11
    }

    /// Disjunction of the interval predicates.
    pub fn eval(&self, x: u64) -> bool {
        let mask = (1u64 << self.m) - 1;
        (0..self.m).any(|i| self.interval_predicate(x >> (i * self.m) & mask))
    }

    pub fn function(&self) -> StructuredFunction {
        let family = *self;
        StructuredFunction::new(format!("rubinstein(m={})", self.m), self.n(), move |x| {
            family.eval(x)
        })
        .expect("n <= 36")
    }
}

pub fn rubinstein_family(m: usize) -> Result<StructuredFunction> {
    Ok(RubinsteinFamily::new(m)?.function())
}
