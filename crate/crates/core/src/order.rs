//! Up-set enumeration over small preorders given as bit masks.
//!
//! Element `i` of the preorder is described by `up[i]`, the mask of all
//! elements `j` with `i ≤ j` (including `i` itself). The same routine
//! enumerates open sets of Alexandrov spaces and compact families on an open
//! lattice.

use crate::error::{Error, Result};
use crate::pointset::bits_of;

/// Down-masks from up-masks: `down[j]` holds every `i` with `j ∈ up[i]`.
pub fn down_masks(up: &[u64]) -> Vec<u64> {
    let mut down = vec![0u64; up.len()];
    for (i, &u) in up.iter().enumerate() {
        for j in bits_of(u) {
            down[j] |= 1 << i;
        }
    }
    down
}

/// All up-closed subsets, sorted by numeric value.
///
/// Fails with `TooManyOpens(limit)` if more than `limit` sets exist.
pub fn enumerate_upsets(up: &[u64], limit: usize) -> Result<Vec<u64>> {
    let n = up.len();
    assert!(n <= 64);
    let down = down_masks(up);
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut out = Vec::new();
    // (decided, included)
    let mut stack = vec![(0u64, 0u64)];
    while let Some((decided, included)) = stack.pop() {
        if decided == all {
            if out.len() == limit {
                return Err(Error::TooManyOpens(limit));
            }
            out.push(included);
            continue;
        }
        let i = (!decided & all).trailing_zeros() as usize;
        stack.push((decided | down[i], included));
        stack.push((decided | up[i], included | up[i]));
    }
    out.sort_unstable();
    Ok(out)
}

/// Whether `set` is up-closed.
#[inline]
pub fn is_upset(up: &[u64], set: u64) -> bool {
    bits_of(set).all(|i| up[i] & !set == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(up: &[u64]) -> Vec<u64> {
        let n = up.len();
        (0u64..1 << n).filter(|&s| is_upset(up, s)).collect()
    }

    #[test]
    fn chain_and_antichain() {
        // 0 ≤ 1 ≤ 2
        let chain = [0b111, 0b110, 0b100];
        assert_eq!(enumerate_upsets(&chain, 100).unwrap(), vec![0, 0b100, 0b110, 0b111]);
        let anti = [0b001, 0b010, 0b100];
        assert_eq!(enumerate_upsets(&anti, 100).unwrap().len(), 8);
    }

    #[test]
    fn matches_brute_force_on_boolean_lattice() {
        // B_3 ordered by inclusion: element i is the subset with bits i.
        let up: Vec<u64> = (0..8u64)
            .map(|i| (0..8u64).filter(|j| i & !j == 0).fold(0, |m, j| m | 1 << j))
            .collect();
        let fast = enumerate_upsets(&up, 1000).unwrap();
        assert_eq!(fast, brute(&up));
        assert_eq!(fast.len(), 20);
    }

    #[test]
    fn limit_is_enforced() {
        let anti = [0b001, 0b010, 0b100];
        assert_eq!(enumerate_upsets(&anti, 7), Err(Error::TooManyOpens(7)));
    }
}
