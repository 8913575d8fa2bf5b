use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Largest supported input width; indices are packed into a `u64`.
pub const MAX_INPUT_VARS: usize = 63;

/// An assignment to `x_1..x_n`, stored as its canonical index
/// `sum x_i * 2^(i-1)`.
///
/// The textual form lists `x_1` first, so `"1100"` is the input with
/// `x_1 = x_2 = 1`, canonical index 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Input {
    n: usize,
    index: u64,
}

impl Input {
    pub fn new(n: usize, index: u64) -> Result<Self> {
        if n == 0 || n > MAX_INPUT_VARS {
            return Err(invalid(format!("input width {n} outside 1..={MAX_INPUT_VARS}")));
        }
        if index >> n != 0 {
            return Err(invalid(format!("index {index} does not fit in {n} bits")));
        }
        Ok(Self { n, index })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let index = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        Self::new(bits.len(), index)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Value of `x_i`, 1-based.
    pub fn bit(&self, i: usize) -> Result<bool> {
        let mask = index_mask(self.n, &[i])?;
        Ok(self.index & mask != 0)
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.n).map(|i| self.index >> i & 1 == 1).collect()
    }

    /// The set `{i : x_i = 1}`, 1-based and ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.index >> i & 1 == 1)
            .map(|i| i + 1)
            .collect()
    }

    /// `w^S`: this input with every (1-based) index in `set` complemented.
    pub fn flip(&self, set: &[usize]) -> Result<Self> {
        let mask = index_mask(self.n, set)?;
        Ok(self.flip_mask(mask))
    }

    pub(crate) fn flip_mask(&self, mask: u64) -> Self {
        Self {
            n: self.n,
            index: self.index ^ mask,
        }
    }
}

/// Bit mask for a set of 1-based indices over `n` variables.
pub(crate) fn index_mask(n: usize, set: &[usize]) -> Result<u64> {
    set.iter().try_fold(0u64, |acc, &i| {
        if i == 0 || i > n {
            Err(invalid(format!("index {i} outside 1..={n}")))
        } else {
            Ok(acc | 1 << (i - 1))
        }
    })
}

/// 1-based ascending indices set in `mask`.
pub(crate) fn mask_indices(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Input {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in input"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inp(s: &str) -> Input {
        s.parse().unwrap()
    }

    #[test]
    fn flip_examples() {
        assert_eq!(inp("000000000").flip(&[1, 2]).unwrap(), inp("110000000"));
        assert_eq!(inp("1101").flip(&[]).unwrap(), inp("1101"));
        assert_eq!(inp("0101").flip(&[1, 3]).unwrap(), inp("1111"));
    }

    #[test]
    fn flip_rejects_out_of_range() {
        assert!(matches!(inp("0101").flip(&[5]), Err(Error::InvalidArgument(_))));
        assert!(matches!(inp("0101").flip(&[0]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn x1_is_least_significant() {
        assert_eq!(inp("1000").index(), 1);
        assert_eq!(inp("0001").index(), 8);
        assert_eq!(inp("1100").support(), vec![1, 2]);
    }

    proptest! {
        #[test]
        fn index_round_trips(n in 1usize..=20, raw in any::<u64>()) {
            let index = raw & ((1u64 << n) - 1);
            let w = Input::new(n, index).unwrap();
            prop_assert_eq!(Input::from_bits(&w.bits()).unwrap(), w);
            prop_assert_eq!(w.to_string().parse::<Input>().unwrap(), w);
        }

        #[test]
        fn flip_is_an_involution(n in 1usize..=16, raw in any::<u64>(), set_raw in any::<u64>()) {
            let w = Input::new(n, raw & ((1u64 << n) - 1)).unwrap();
            let set = mask_indices(set_raw & ((1u64 << n) - 1));
            let once = w.flip(&set).unwrap();
            prop_assert_eq!((once.index() ^ w.index()).count_ones() as usize, set.len());
            prop_assert_eq!(once.flip(&set).unwrap(), w);
        }
    }
}
