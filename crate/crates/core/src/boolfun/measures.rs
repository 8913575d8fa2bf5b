//! Exact sensitivity and block sensitivity.
//!
//! Block sensitivity at a point is computed in two stages: enumerate the
//! minimal sensitive blocks (any maximum packing can be shrunk to one made of
//! minimal blocks), then run a depth-first maximum disjoint packing with a
//! counting bound.

use rayon::prelude::*;

use super::input::{index_mask, mask_indices};
use super::{check_arity, BooleanFunction, Input};
use crate::error::{invalid, Error, Result};

/// Size limits for the exhaustive scans.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanLimits {
    /// Raise the limits to their opt-in values (sensitivity scans up to
    /// n = 25, full block sensitivity scans up to n = 16).
    pub allow_large: bool,
}

impl ScanLimits {
    pub const SENSITIVITY_MAX_N: usize = 20;
    pub const SENSITIVITY_OPT_IN_MAX_N: usize = 25;
    pub const BS_SCAN_MAX_N: usize = 12;
    pub const BS_SCAN_OPT_IN_MAX_N: usize = 16;
    pub const BS_POINT_MAX_N: usize = 16;

    pub fn large() -> Self {
        Self { allow_large: true }
    }

    pub fn sensitivity_limit(&self) -> usize {
        if self.allow_large {
            Self::SENSITIVITY_OPT_IN_MAX_N
        } else {
            Self::SENSITIVITY_MAX_N
        }
    }

    pub fn bs_scan_limit(&self) -> usize {
        if self.allow_large {
            Self::BS_SCAN_OPT_IN_MAX_N
        } else {
            Self::BS_SCAN_MAX_N
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SensitivityReport {
    pub value: usize,
    pub witness: Input,
    /// 1-based, ascending.
    pub sensitive_indices: Vec<usize>,
}

/// Pairwise-disjoint sensitive blocks at a witness input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSet {
    /// Each block is a sorted list of 1-based indices. Blocks are ordered by
    /// their smallest index.
    pub blocks: Vec<Vec<usize>>,
    pub witness: Input,
}

impl BlockSet {
    pub fn value(&self) -> usize {
        self.blocks.len()
    }

    /// Re-check disjointness and that every block flips `f` at the witness.
    pub fn validate(&self, f: &(impl BooleanFunction + ?Sized)) -> Result<()> {
        check_arity(f.arity(), &self.witness)?;
        let n = f.arity();
        let base = f.eval(self.witness.index());
        let mut used = 0u64;
        for block in &self.blocks {
            if block.is_empty() {
                return Err(invalid("empty block"));
            }
            let mask = index_mask(n, block)?;
            if mask.count_ones() as usize != block.len() {
                return Err(invalid(format!("block {block:?} repeats an index")));
            }
            if used & mask != 0 {
                return Err(invalid(format!("block {block:?} overlaps an earlier block")));
            }
            used |= mask;
            if f.eval(self.witness.index() ^ mask) == base {
                return Err(invalid(format!(
                    "flipping {block:?} at {} does not change the output",
                    self.witness
                )));
            }
        }
        Ok(())
    }
}

fn sensitive_mask(f: &(impl BooleanFunction + ?Sized), x: u64) -> u64 {
    let base = f.eval(x);
    (0..f.arity())
        .filter(|&i| f.eval(x ^ 1 << i) != base)
        .fold(0u64, |acc, i| acc | 1 << i)
}

pub fn sensitivity_at(
    f: &(impl BooleanFunction + ?Sized),
    w: &Input,
) -> Result<SensitivityReport> {
    check_arity(f.arity(), w)?;
    let mask = sensitive_mask(f, w.index());
    Ok(SensitivityReport {
        value: mask.count_ones() as usize,
        witness: *w,
        sensitive_indices: mask_indices(mask),
    })
}

pub fn sensitivity(f: &(impl BooleanFunction + ?Sized)) -> Result<SensitivityReport> {
    sensitivity_with(f, ScanLimits::default())
}

/// `s(f)`: exhaustive over all `2^n` inputs. The witness is the smallest
/// canonical index attaining the maximum.
pub fn sensitivity_with(
    f: &(impl BooleanFunction + ?Sized),
    limits: ScanLimits,
) -> Result<SensitivityReport> {
    let n = f.arity();
    let limit = limits.sensitivity_limit();
    if n > limit {
        return Err(Error::Capacity {
            what: "sensitivity scan",
            n,
            limit,
        });
    }
    let bitmap = evaluate_all(f);
    let get = |x: u64| bitmap[(x >> 6) as usize] >> (x & 63) & 1 == 1;
    let (value, index) = (0..1u64 << n)
        .into_par_iter()
        .map(|x| {
            let base = get(x);
            let count = (0..n).filter(|&i| get(x ^ 1 << i) != base).count();
            (count as u32, x)
        })
        .reduce(|| (0, 0), pick_max_smallest_index);
    sensitivity_at(f, &Input::new(n, index)?)
        .inspect(|r| debug_assert_eq!(r.value, value as usize))
}

/// Every output of `f` packed 64 per word, one evaluation per input.
fn evaluate_all(f: &(impl BooleanFunction + ?Sized)) -> Vec<u64> {
    let total = 1u64 << f.arity();
    let words = total.div_ceil(64) as usize;
    (0..words)
        .into_par_iter()
        .map(|w| {
            let start = (w as u64) << 6;
            (0..64.min(total - start)).fold(0u64, |acc, k| acc | u64::from(f.eval(start + k)) << k)
        })
        .collect()
}

fn pick_max_smallest_index(a: (u32, u64), b: (u32, u64)) -> (u32, u64) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

/// Minimal sensitive blocks at `w` as bit masks: blocks `B` with
/// `f(w) != f(w^B)` such that no proper non-empty subset is sensitive.
pub fn minimal_sensitive_blocks(
    f: &(impl BooleanFunction + ?Sized),
    w: &Input,
) -> Result<Vec<u64>> {
    check_arity(f.arity(), w)?;
    let n = f.arity();
    if n > ScanLimits::BS_POINT_MAX_N {
        return Err(Error::Capacity {
            what: "block sensitivity at a point",
            n,
            limit: ScanLimits::BS_POINT_MAX_N,
        });
    }
    Ok(minimal_blocks_raw(f, w.index()))
}

fn minimal_blocks_raw(f: &(impl BooleanFunction + ?Sized), x: u64) -> Vec<u64> {
    let n = f.arity();
    let full = 1usize << n;
    let base = f.eval(x);
    // contains_sensitive[S]: some non-empty subset of S (S included) is sensitive
    let mut contains_sensitive = vec![false; full];
    let mut minimal = Vec::new();
    for set in 1..full {
        let sensitive = f.eval(x ^ set as u64) != base;
        let below = (0..n)
            .filter(|&i| set >> i & 1 == 1)
            .any(|i| contains_sensitive[set ^ 1 << i]);
        contains_sensitive[set] = sensitive || below;
        if sensitive && !below {
            minimal.push(set as u64);
        }
    }
    minimal
}

struct Packer {
    /// Blocks grouped by their lowest index, smaller blocks first.
    by_lowest: Vec<Vec<u64>>,
    singletons: u64,
    /// Smallest size among blocks of size >= 2 (0 when there are none).
    min_wide: u32,
    current: Vec<u64>,
    best: Vec<u64>,
}

impl Packer {
    fn new(n: usize, blocks: &[u64]) -> Self {
        let mut by_lowest = vec![Vec::new(); n];
        let mut singletons = 0;
        let mut min_wide = 0;
        for &b in blocks {
            by_lowest[b.trailing_zeros() as usize].push(b);
            let size = b.count_ones();
            if size == 1 {
                singletons |= b;
            } else if min_wide == 0 || size < min_wide {
                min_wide = size;
            }
        }
        for group in &mut by_lowest {
            group.sort_by_key(|b| (b.count_ones(), *b));
        }
        Self {
            by_lowest,
            singletons,
            min_wide,
            current: Vec::new(),
            best: Vec::new(),
        }
    }

    /// Upper bound on blocks that still fit in `free`: at most the available
    /// singletons, plus the remaining indices divided by the smallest wide
    /// block size.
    fn bound(&self, free: u64) -> usize {
        let singles = (free & self.singletons).count_ones();
        let rest = free.count_ones() - singles;
        let wide = rest.checked_div(self.min_wide).unwrap_or(0);
        self.current.len() + (singles + wide) as usize
    }

    fn search(&mut self, free: u64) {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        if free == 0 || self.bound(free) <= self.best.len() {
            return;
        }
        let lowest = free.trailing_zeros() as usize;
        for k in 0..self.by_lowest[lowest].len() {
            let block = self.by_lowest[lowest][k];
            if block & !free == 0 {
                self.current.push(block);
                self.search(free & !block);
                self.current.pop();
            }
        }
        // leave `lowest` uncovered
        self.search(free & !(1 << lowest));
    }
}

fn pack(n: usize, blocks: &[u64]) -> Vec<u64> {
    let mut packer = Packer::new(n, blocks);
    packer.search(if n == 64 { u64::MAX } else { (1u64 << n) - 1 });
    let mut best = packer.best;
    best.sort_by_key(|b| b.trailing_zeros());
    best
}

fn block_set(w: Input, masks: &[u64]) -> BlockSet {
    BlockSet {
        blocks: masks.iter().map(|&m| mask_indices(m)).collect(),
        witness: w,
    }
}

/// `bs(f, w)` together with a packing that attains it.
pub fn block_sensitivity_at(f: &(impl BooleanFunction + ?Sized), w: &Input) -> Result<BlockSet> {
    let blocks = minimal_sensitive_blocks(f, w)?;
    Ok(block_set(*w, &pack(f.arity(), &blocks)))
}

pub fn block_sensitivity(f: &(impl BooleanFunction + ?Sized)) -> Result<BlockSet> {
    block_sensitivity_with(f, ScanLimits::default())
}

/// `bs(f)`: maximum of `bs(f, w)` over all inputs; ties go to the smallest
/// canonical index.
pub fn block_sensitivity_with(
    f: &(impl BooleanFunction + ?Sized),
    limits: ScanLimits,
) -> Result<BlockSet> {
    let n = f.arity();
    let limit = limits.bs_scan_limit();
    if n > limit {
        return Err(Error::Capacity {
            what: "block sensitivity scan",
            n,
            limit,
        });
    }
    let (_, index) = (0..1u64 << n)
        .into_par_iter()
        .map(|x| (pack(n, &minimal_blocks_raw(f, x)).len() as u32, x))
        .reduce(|| (0, 0), pick_max_smallest_index);
    block_sensitivity_at(f, &Input::new(n, index)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::TruthTable;
    use proptest::prelude::*;

    fn table(n: usize, f: impl FnMut(u64) -> bool) -> TruthTable {
        TruthTable::from_fn(n, f).unwrap()
    }

    fn parity(n: usize) -> TruthTable {
        table(n, |x| x.count_ones() % 2 == 1)
    }

    /// Reference: label every index with a block id (0 = unused) and keep the
    /// best labelling whose classes are all sensitive.
    fn naive_bs_at(f: &TruthTable, x: u64) -> usize {
        let n = f.n();
        let base = f.get(x);
        let mut best = 0;
        let mut labels = vec![0usize; n];
        loop {
            let mut masks = vec![0u64; n + 1];
            for (i, &l) in labels.iter().enumerate() {
                masks[l] |= 1 << i;
            }
            let used: Vec<u64> = masks[1..].iter().copied().filter(|&m| m != 0).collect();
            if used.iter().all(|&m| f.get(x ^ m) != base) {
                best = best.max(used.len());
            }
            // next labelling in base n+1
            let mut i = 0;
            while i < n && labels[i] == n {
                labels[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
            labels[i] += 1;
        }
    }

    #[test]
    fn sensitivity_examples() {
        let p = parity(4);
        for x in 0..16 {
            let w = Input::new(4, x).unwrap();
            assert_eq!(sensitivity_at(&p, &w).unwrap().value, 4);
        }
        let zero = TruthTable::constant(5, false).unwrap();
        assert_eq!(sensitivity_at(&zero, &Input::new(5, 7).unwrap()).unwrap().value, 0);
        let or2 = table(2, |x| x != 0);
        let s = sensitivity(&or2).unwrap();
        assert_eq!(s.value, 2);
        assert_eq!(s.witness.index(), 0);
        assert_eq!(s.sensitive_indices, vec![1, 2]);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = parity(3);
        assert!(matches!(
            sensitivity_at(&p, &Input::zeros(4).unwrap()),
            Err(Error::InvalidArgument(_))
        ));
        assert!(block_sensitivity_at(&p, &Input::zeros(2).unwrap()).is_err());
    }

    #[test]
    fn block_sensitivity_examples() {
        let and3 = table(3, |x| x == 7);
        let at = block_sensitivity_at(&and3, &Input::new(3, 7).unwrap()).unwrap();
        assert_eq!(at.value(), 3);
        at.validate(&and3).unwrap();

        for n in 1..=6 {
            let c = TruthTable::constant(n, true).unwrap();
            assert_eq!(block_sensitivity_at(&c, &Input::new(n, 1).unwrap()).unwrap().value(), 0);
            assert_eq!(block_sensitivity(&parity(n)).unwrap().value(), n);
        }
    }

    #[test]
    fn minimal_blocks_exclude_supersets() {
        // OR_2 at 00: {1} and {2} are sensitive, {1,2} is not minimal
        let or2 = table(2, |x| x != 0);
        let blocks = minimal_sensitive_blocks(&or2, &Input::zeros(2).unwrap()).unwrap();
        assert_eq!(blocks, vec![0b01, 0b10]);
    }

    #[test]
    fn capacity_limits() {
        let f = StructuredFunctionFixture::wide(17);
        assert!(matches!(
            block_sensitivity_at(&f, &Input::zeros(17).unwrap()),
            Err(Error::Capacity { limit: 16, .. })
        ));
        assert!(matches!(
            block_sensitivity(&StructuredFunctionFixture::wide(13)),
            Err(Error::Capacity { limit: 12, .. })
        ));
        assert!(matches!(
            sensitivity(&StructuredFunctionFixture::wide(21)),
            Err(Error::Capacity { limit: 20, .. })
        ));
    }

    struct StructuredFunctionFixture;
    impl StructuredFunctionFixture {
        fn wide(n: usize) -> crate::StructuredFunction {
            crate::StructuredFunction::new("and", n, move |x| x.count_ones() as usize == n).unwrap()
        }
    }

    #[test]
    fn packing_agrees_with_naive_labelling_for_all_small_functions() {
        for n in 1..=3usize {
            for code in 0..1u64 << (1 << n) {
                let f = table(n, |x| code >> x & 1 == 1);
                for x in 0..1u64 << n {
                    let w = Input::new(n, x).unwrap();
                    let got = block_sensitivity_at(&f, &w).unwrap();
                    got.validate(&f).unwrap();
                    assert_eq!(got.value(), naive_bs_at(&f, x), "f={f:?} w={w}");
                }
            }
        }
    }

    #[test]
    fn ties_pick_the_smallest_index() {
        // s = 1 everywhere for the dictator x_2; smallest witness is 0
        let f = table(3, |x| x & 2 != 0);
        let s = sensitivity(&f).unwrap();
        assert_eq!((s.value, s.witness.index()), (1, 0));
        let bs = block_sensitivity(&f).unwrap();
        assert_eq!((bs.value(), bs.witness.index()), (1, 0));
    }

    proptest! {
        #[test]
        fn bs_dominates_s_pointwise(bits in prop::collection::vec(any::<bool>(), 64), x in 0u64..64) {
            let f = TruthTable::from_bits(6, &bits).unwrap();
            let w = Input::new(6, x).unwrap();
            let s = sensitivity_at(&f, &w).unwrap();
            let bs = block_sensitivity_at(&f, &w).unwrap();
            prop_assert!(s.value <= 6);
            prop_assert!(bs.value() >= s.value);
            bs.validate(&f).unwrap();
        }

        #[test]
        fn packing_matches_naive_at_n4(bits in prop::collection::vec(any::<bool>(), 16), x in 0u64..16) {
            let f = TruthTable::from_bits(4, &bits).unwrap();
            let got = block_sensitivity_at(&f, &Input::new(4, x).unwrap()).unwrap();
            prop_assert_eq!(got.value(), naive_bs_at(&f, x));
        }
    }
}
