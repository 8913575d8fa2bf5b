//! Normalize a function and a packing into the shape the encoder pins:
//! witness at `0^n`, `f(0^n) = 0`, blocks as leading consecutive ranges in
//! non-increasing size order.

use super::Partition;
use crate::boolfun::{BlockSet, BooleanFunction, TruthTable};
use crate::error::{invalid, Result};

/// Returns `g` and the partition whose instance `g` satisfies.
///
/// Steps: shift the witness to `0^n`, negate when `f(witness) = 1`, keep the
/// first `bs` blocks, fold uncovered variables into the largest block by
/// projecting them out (which cannot raise sensitivity), then renumber the
/// variables block by block.
pub fn normalize_witness(
    f: &TruthTable,
    packing: &BlockSet,
    bs: usize,
) -> Result<(TruthTable, Partition)> {
    packing.validate(f)?;
    if bs == 0 || bs > packing.value() {
        return Err(invalid(format!(
            "need 1..={} blocks, asked for {bs}",
            packing.value()
        )));
    }
    let n = f.n();
    let mut g = f.shift_by_mask(packing.witness.index());
    if g.eval(0) {
        g = g.negate();
    }

    let mut blocks: Vec<Vec<usize>> = packing.blocks[..bs].to_vec();
    blocks.sort_by_key(|b| std::cmp::Reverse(b.len()));
    let covered: u64 = blocks.iter().flatten().fold(0, |acc, &i| acc | 1 << (i - 1));
    let uncovered = !covered & ((1u64 << n) - 1);
    if uncovered != 0 {
        let projected = &g;
        g = TruthTable::from_fn(n, |x| projected.get(x & !uncovered))?;
        blocks[0].extend((1..=n).filter(|&i| uncovered >> (i - 1) & 1 == 1));
    }

    let mut perm = vec![0usize; n];
    let mut next = 0;
    for block in &blocks {
        for &i in block {
            perm[i - 1] = next;
            next += 1;
        }
    }
    let partition = Partition::new(blocks.iter().map(Vec::len).collect())?;
    Ok((g.permute_variables(&perm)?, partition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfun::{block_sensitivity, sensitivity};

    #[test]
    fn normalized_function_meets_the_block_constraint() {
        for n in 1..=3usize {
            for code in 0..1u64 << (1 << n) {
                let f = TruthTable::from_u64(n, code).unwrap();
                let packing = block_sensitivity(&f).unwrap();
                for bs in 1..=packing.value() {
                    let (g, p) = normalize_witness(&f, &packing, bs).unwrap();
                    assert_eq!(p.n(), n);
                    assert_eq!(p.len(), bs);
                    assert!(!g.get(0));
                    assert!(p.block_masks().iter().all(|&m| g.get(m)));
                    assert!(sensitivity(&g).unwrap().value <= sensitivity(&f).unwrap().value);
                }
            }
        }
    }
}
