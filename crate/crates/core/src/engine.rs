//! Bit-mask evaluation of collection predicates over subcollections of a
//! fixed universe of at most 64 families.
//!
//! Everything that depends only on the universe (restrictions, sections,
//! joinability witnesses, splitting candidates) is tabulated once, so each
//! subcollection test is a handful of mask operations. Exhaustive searches
//! over all `2^|κ|` subcollections go through here.

use crate::collection::{Condition, FamilyCollection};
use crate::error::{Error, Result};
use crate::pointset::bits_of;

pub const MAX_UNIVERSE: usize = 64;

pub struct SubcollectionIndex<'a> {
    universe: &'a FamilyCollection,
    /// Families every hereditary superset must contain; `None` when some
    /// restriction falls outside the universe.
    hereditary_req: Vec<Option<u64>>,
    sectionable_req: Vec<Option<u64>>,
    /// `join_witness[i]`: families `G` with `G ∨ G ⊆ F_i`.
    join_witness: Vec<u64>,
    /// Per family, per member `A`: families `G ∋ A` with `G ∨ G ⊆ F_i`.
    hereditary_witness: Vec<Vec<u64>>,
    /// Per family, per split `(U₁, U₂)`: pairs `(j, mask of k)` with
    /// `G_j, G_k` concentrated on `U₁, U₂` and `G_j ∩ G_k ⊆ F_i`.
    split_options: Vec<Vec<Vec<(usize, u64)>>>,
    /// Position of `F_i ∩ F_j`, if in the universe.
    meet: Vec<Option<u8>>,
}

impl<'a> SubcollectionIndex<'a> {
    pub fn new(universe: &'a FamilyCollection) -> Result<SubcollectionIndex<'a>> {
        let m = universe.len();
        if m > MAX_UNIVERSE {
            return Err(Error::LatticeTooLarge(m, MAX_UNIVERSE));
        }
        let space = universe.space();
        let lat = space.lattice()?;
        let fams = universe.families();
        let pos = |f: &crate::family::OpenFamily| universe.position(f);

        let mut hereditary_req = Vec::with_capacity(m);
        let mut sectionable_req = Vec::with_capacity(m);
        let mut join_witness = Vec::with_capacity(m);
        let mut hereditary_witness = Vec::with_capacity(m);
        let mut split_options = Vec::with_capacity(m);

        let concentrated: Vec<u64> = (0..lat.len())
            .map(|u| {
                fams.iter()
                    .enumerate()
                    .filter(|(_, g)| g.is_concentrated_on(u))
                    .fold(0u64, |acc, (j, _)| acc | 1 << j)
            })
            .collect();

        for f in fams {
            hereditary_req.push(
                bits_of(f.members())
                    .map(|a| pos(&f.restrict_index(a)).map(|p| 1u64 << p))
                    .try_fold(0u64, |acc, bit| bit.map(|b| acc | b)),
            );
            sectionable_req.push(
                space
                    .closed_sets()
                    .filter(|&c| f.in_grill(c))
                    .map(|c| f.section(c).ok().and_then(|s| pos(&s)).map(|p| 1u64 << p))
                    .try_fold(0u64, |acc, bit| bit.map(|b| acc | b)),
            );
            let witnesses: u64 = fams
                .iter()
                .enumerate()
                .filter(|(_, g)| g.self_meet_contained_in(f))
                .fold(0, |acc, (j, _)| acc | 1 << j);
            join_witness.push(witnesses);
            hereditary_witness.push(
                bits_of(f.members())
                    .map(|a| {
                        bits_of(witnesses)
                            .filter(|&j| fams[j].contains_index(a))
                            .fold(0u64, |acc, j| acc | 1 << j)
                    })
                    .collect(),
            );
            let mut splits = Vec::new();
            for u1 in 0..lat.len() {
                for u2 in u1..lat.len() {
                    if !f.contains_index(lat.join(u1, u2)) {
                        continue;
                    }
                    let options = bits_of(concentrated[u1])
                        .map(|j| {
                            let ks = bits_of(concentrated[u2])
                                .filter(|&k| fams[j].members() & fams[k].members() & !f.members() == 0)
                                .fold(0u64, |acc, k| acc | 1 << k);
                            (j, ks)
                        })
                        .filter(|(_, ks)| *ks != 0)
                        .collect();
                    splits.push(options);
                }
            }
            split_options.push(splits);
        }

        let mut meet = vec![None; m * m];
        for i in 0..m {
            for j in 0..m {
                meet[i * m + j] = pos(&fams[i].intersection(&fams[j])?).map(|p| p as u8);
            }
        }

        Ok(SubcollectionIndex {
            universe,
            hereditary_req,
            sectionable_req,
            join_witness,
            hereditary_witness,
            split_options,
            meet,
        })
    }

    pub fn universe(&self) -> &FamilyCollection {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.universe.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    /// Mask of the whole universe.
    #[inline]
    pub fn all(&self) -> u64 {
        let m = self.len();
        if m == 64 {
            u64::MAX
        } else {
            (1u64 << m) - 1
        }
    }

    pub fn collection(&self, mask: u64) -> FamilyCollection {
        self.universe.select(mask)
    }

    pub fn hereditary(&self, mask: u64) -> bool {
        bits_of(mask).all(|i| self.hereditary_req[i].is_some_and(|r| r & !mask == 0))
    }

    pub fn sectionable(&self, mask: u64) -> bool {
        bits_of(mask).all(|i| self.sectionable_req[i].is_some_and(|r| r & !mask == 0))
    }

    #[inline]
    fn joinable_in(&self, i: usize, mask: u64) -> bool {
        self.join_witness[i] & mask != 0
    }

    #[inline]
    fn hereditarily_joinable_in(&self, i: usize, mask: u64) -> bool {
        self.hereditary_witness[i].iter().all(|w| w & mask != 0)
    }

    #[inline]
    fn splittable_in(&self, i: usize, mask: u64) -> bool {
        self.split_options[i].iter().all(|opts| {
            opts.iter()
                .any(|&(j, ks)| mask >> j & 1 == 1 && ks & mask != 0)
        })
    }

    pub fn self_joinable(&self, mask: u64) -> bool {
        bits_of(mask).all(|i| self.joinable_in(i, mask))
    }

    pub fn hereditarily_self_joinable(&self, mask: u64) -> bool {
        bits_of(mask).all(|i| self.hereditarily_joinable_in(i, mask))
    }

    pub fn self_splittable(&self, mask: u64) -> bool {
        bits_of(mask).all(|i| self.splittable_in(i, mask))
    }

    pub fn intersection_closed(&self, mask: u64) -> bool {
        let m = self.len();
        bits_of(mask).all(|i| {
            bits_of(mask).all(|j| self.meet[i * m + j].is_some_and(|p| mask >> p & 1 == 1))
        })
    }

    /// `α^∩` as a mask, if it stays inside the universe.
    pub fn intersection_closure(&self, mask: u64) -> Option<u64> {
        let m = self.len();
        let mut cur = mask;
        loop {
            let mut next = cur;
            for i in bits_of(cur) {
                for j in bits_of(cur) {
                    next |= 1u64 << self.meet[i * m + j]?;
                }
            }
            if next == cur {
                return Some(cur);
            }
            cur = next;
        }
    }

    pub fn satisfies(&self, mask: u64, condition: Condition) -> bool {
        match condition {
            Condition::Joinable => self.self_joinable(mask),
            Condition::HereditarilyJoinable => self.hereditarily_self_joinable(mask),
            Condition::Splittable => self.self_splittable(mask),
        }
    }

    /// Whether family `i` meets `condition` relative to the subcollection `mask`.
    #[inline]
    pub fn member_satisfies(&self, i: usize, mask: u64, condition: Condition) -> bool {
        match condition {
            Condition::Joinable => self.joinable_in(i, mask),
            Condition::HereditarilyJoinable => self.hereditarily_joinable_in(i, mask),
            Condition::Splittable => self.splittable_in(i, mask),
        }
    }

    /// Greatest fixed point below `mask`, with round-based removal.
    pub fn gfp(&self, mask: u64, condition: Condition) -> u64 {
        let mut cur = mask;
        loop {
            let keep = bits_of(cur)
                .filter(|&i| self.member_satisfies(i, cur, condition))
                .fold(0u64, |acc, i| acc | 1 << i);
            if keep == cur {
                return cur;
            }
            cur = keep;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::{greatest_fixed_subcollection, intersection_closure, kappa};
    use crate::space::fixtures::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn masks_agree_with_collection_predicates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in [s2(), d3(), p3(), q4(), discrete(2), indiscrete(3)] {
            let s = s.into_ref();
            let kap = kappa(&s).unwrap();
            let idx = SubcollectionIndex::new(&kap).unwrap();
            for _ in 0..200 {
                let mask = rng.gen::<u64>() & idx.all();
                let alpha = idx.collection(mask);
                assert_eq!(idx.hereditary(mask), alpha.is_hereditary());
                assert_eq!(idx.sectionable(mask), alpha.is_sectionable());
                assert_eq!(idx.self_joinable(mask), alpha.is_self_joinable(false));
                assert_eq!(idx.hereditarily_self_joinable(mask), alpha.is_self_joinable(true));
                assert_eq!(idx.self_splittable(mask), alpha.is_self_splittable());
                assert_eq!(idx.intersection_closed(mask), alpha.is_intersection_closed());
                let closed = idx.intersection_closure(mask).unwrap();
                assert_eq!(idx.collection(closed), intersection_closure(&alpha));
                for cond in [Condition::Joinable, Condition::HereditarilyJoinable, Condition::Splittable] {
                    assert_eq!(
                        idx.collection(idx.gfp(mask, cond)),
                        greatest_fixed_subcollection(&alpha, cond)
                    );
                }
            }
        }
    }
}
