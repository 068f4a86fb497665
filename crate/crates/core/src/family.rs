//! Openly isotone families of opens and the operators on them.
//!
//! A family is a bit mask over the canonical open indices of its space. The
//! ⊆-minimal members form an antichain that determines the family and
//! serves as its key.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointset::{bits_of, PointSet};
use crate::space::{FiniteSpace, SpaceRef};

/// Default bound on `|O_X|` for the literal compactness oracle.
pub const DEFAULT_ORACLE_BOUND: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompactnessMode {
    /// Open isotonicity, checked member by member.
    Fast,
    /// The definition taken literally over every subfamily of `O_X`.
    Oracle { bound: usize },
}

impl CompactnessMode {
    pub const ORACLE: CompactnessMode = CompactnessMode::Oracle {
        bound: DEFAULT_ORACLE_BOUND,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RestrictMode {
    /// Reject restriction to a non-member.
    Strict,
    /// Apply the formula to any set.
    #[default]
    Lenient,
}

/// An openly isotone collection of opens of one space.
#[derive(Clone)]
pub struct OpenFamily {
    space: SpaceRef,
    members: u64,
    minimal: u64,
}

impl PartialEq for OpenFamily {
    fn eq(&self, other: &Self) -> bool {
        self.minimal == other.minimal
    }
}

impl Eq for OpenFamily {}

impl Hash for OpenFamily {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.minimal.hash(state);
    }
}

impl PartialOrd for OpenFamily {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenFamily {
    fn cmp(&self, other: &Self) -> Ordering {
        self.minimal.cmp(&other.minimal)
    }
}

impl fmt::Debug for OpenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .minimal_sets()
            .map(|u| self.space.format_set(u))
            .collect();
        write!(f, "O[{}]", gens.join(" "))
    }
}

pub(crate) fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Open isotonicity of a raw mask of open indices.
fn check_isotone(space: &FiniteSpace, mask: u64) -> Result<()> {
    let lat = space.lattice()?;
    for i in bits_of(mask) {
        let missing = lat.above(i) & !mask;
        if missing != 0 {
            let j = missing.trailing_zeros() as usize;
            return Err(Error::NotIsotone(space.open(i), space.open(j)));
        }
    }
    Ok(())
}

/// Compactness of an arbitrary set of opens (given by open-index mask).
pub fn is_compact_member_set(space: &FiniteSpace, mask: u64, mode: CompactnessMode) -> Result<bool> {
    let lat = space.lattice()?;
    let m = lat.len();
    match mode {
        CompactnessMode::Fast => Ok(check_isotone(space, mask).is_ok()),
        CompactnessMode::Oracle { bound } => {
            if m > bound {
                return Err(Error::OracleTooLarge(m, bound));
            }
            // A = O_X(A): every open containing a member is a member.
            let seeds: Vec<PointSet> = bits_of(mask).map(|i| space.open(i)).collect();
            let hull = space
                .opens()
                .iter()
                .enumerate()
                .filter(|(_, u)| seeds.iter().any(|b| b.is_subset(**u)))
                .fold(0u64, |acc, (j, _)| acc | 1 << j);
            if hull != mask {
                return Ok(false);
            }
            let union_of = |p: u64| {
                bits_of(p).fold(PointSet::EMPTY, |acc, i| acc.union(space.open(i)))
            };
            let in_family =
                |s: PointSet| space.open_index(s).is_some_and(|i| mask >> i & 1 == 1);
            let all = lat.all();
            let mut p = 0u64;
            loop {
                if in_family(union_of(p)) {
                    // Look for a finite subfamily, smallest masks first.
                    let mut sub = 0u64;
                    let found = loop {
                        if in_family(union_of(sub)) {
                            break true;
                        }
                        if sub == p {
                            break false;
                        }
                        sub = sub.wrapping_sub(p) & p;
                    };
                    if !found {
                        return Ok(false);
                    }
                }
                if p == all {
                    break;
                }
                p = p.wrapping_sub(all) & all;
            }
            Ok(true)
        }
    }
}

/// All opens containing some seed.
pub fn isotone_hull(space: &SpaceRef, seeds: &[PointSet]) -> Result<OpenFamily> {
    space.lattice()?;
    let members = space
        .opens()
        .iter()
        .enumerate()
        .filter(|(_, u)| seeds.iter().any(|b| b.is_subset(**u)))
        .fold(0u64, |acc, (j, _)| acc | 1 << j);
    Ok(OpenFamily::from_isotone_mask(space.clone(), members))
}

/// Pairwise intersections `{G ∩ H : G ∈ g, H ∈ h}`, sorted.
pub fn pairwise_meet(g: &OpenFamily, h: &OpenFamily) -> Result<Vec<PointSet>> {
    g.check_same(h)?;
    let mut out: Vec<PointSet> = g
        .member_sets()
        .flat_map(|a| h.member_sets().map(move |b| a.intersection(b)))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Whether every set in `sets` is a member of `f`.
pub fn contained_in(sets: &[PointSet], f: &OpenFamily) -> bool {
    sets.iter().all(|&s| f.contains_set(s))
}

impl OpenFamily {
    /// Trusted constructor; `members` must be up-closed.
    pub(crate) fn from_isotone_mask(space: SpaceRef, members: u64) -> OpenFamily {
        let lat = space.lattice().expect("family over a representable lattice");
        debug_assert_eq!(lat.up_closure(members), members);
        let minimal = lat.minimal(members);
        OpenFamily {
            space,
            members,
            minimal,
        }
    }

    /// Validated constructor from a mask of open indices.
    pub fn from_members(space: SpaceRef, members: u64) -> Result<OpenFamily> {
        let lat = space.lattice()?;
        if members & !lat.all() != 0 {
            return Err(Error::Invalid("member index out of range".into()));
        }
        check_isotone(&space, members)?;
        Ok(OpenFamily::from_isotone_mask(space, members))
    }

    /// Up-closure of a mask of open indices.
    pub fn from_generators_mask(space: SpaceRef, gens: u64) -> Result<OpenFamily> {
        let members = space.lattice()?.up_closure(gens);
        Ok(OpenFamily::from_isotone_mask(space, members))
    }

    pub fn empty(space: SpaceRef) -> Result<OpenFamily> {
        space.lattice()?;
        Ok(OpenFamily::from_isotone_mask(space, 0))
    }

    /// `O_X` itself, the only family containing `∅`.
    pub fn full(space: SpaceRef) -> Result<OpenFamily> {
        let all = space.lattice()?.all();
        Ok(OpenFamily::from_isotone_mask(space, all))
    }

    /// `O_X(K)`: opens containing `k`.
    pub fn neighborhoods_of(space: &SpaceRef, k: PointSet) -> Result<OpenFamily> {
        isotone_hull(space, &[k])
    }

    #[inline]
    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    #[inline]
    pub fn members(&self) -> u64 {
        self.members
    }

    #[inline]
    pub fn minimal(&self) -> u64 {
        self.minimal
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    /// Contains the empty open, hence every open.
    #[inline]
    pub fn contains_empty_set(&self) -> bool {
        self.members & 1 == 1
    }

    #[inline]
    pub fn contains_index(&self, i: usize) -> bool {
        self.members >> i & 1 == 1
    }

    /// Membership of an arbitrary set (false for non-opens).
    #[inline]
    pub fn contains_set(&self, s: PointSet) -> bool {
        self.space
            .open_index(s)
            .is_some_and(|i| self.contains_index(i))
    }

    pub fn member_sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        bits_of(self.members).map(|i| self.space.open(i))
    }

    pub fn minimal_sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        bits_of(self.minimal).map(|i| self.space.open(i))
    }

    #[inline]
    pub fn is_subfamily_of(&self, other: &OpenFamily) -> bool {
        self.members & !other.members == 0
    }

    fn check_same(&self, other: &OpenFamily) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn is_compact(&self, mode: CompactnessMode) -> Result<bool> {
        is_compact_member_set(&self.space, self.members, mode)
    }

    /// `B` meets every member.
    pub fn in_grill(&self, b: PointSet) -> bool {
        // Supersets of minimal members meet b whenever the minimal ones do.
        self.minimal_sets().all(|a| !a.is_disjoint(b))
    }

    /// All subsets of `X` meeting every member, in increasing bit order.
    pub fn grill(&self) -> Vec<PointSet> {
        PointSet::all_subsets(self.space.n())
            .filter(|&b| self.in_grill(b))
            .collect()
    }

    /// `{U open : ∃ B ∈ F, B ⊆ A ∩ U}`.
    pub fn restrict(&self, a: PointSet, mode: RestrictMode) -> Result<OpenFamily> {
        if mode == RestrictMode::Strict && !self.contains_set(a) {
            return Err(Error::NotAMember(a));
        }
        let lat = self.space.lattice()?;
        let inside = bits_of(self.minimal)
            .filter(|&i| self.space.open(i).is_subset(a))
            .fold(0u64, |acc, i| acc | 1 << i);
        Ok(OpenFamily::from_isotone_mask(
            self.space.clone(),
            lat.up_closure(inside),
        ))
    }

    /// Restriction to open index `i`, lenient.
    pub(crate) fn restrict_index(&self, i: usize) -> OpenFamily {
        let lat = self.space.lattice().expect("lattice");
        let inside = bits_of(self.minimal)
            .filter(|&j| lat.below(i) >> j & 1 == 1)
            .fold(0u64, |acc, j| acc | 1 << j);
        OpenFamily::from_isotone_mask(self.space.clone(), lat.up_closure(inside))
    }

    /// `G = G↓U` together with `U ∈ G`: every minimal member lies inside `U`
    /// and `U` itself is a member.
    pub fn is_concentrated_on(&self, u_index: usize) -> bool {
        let lat = self.space.lattice().expect("lattice");
        self.contains_index(u_index) && self.minimal & !lat.below(u_index) == 0
    }

    /// Section by a closed set in the grill: `O({A ∩ C : A ∈ F})`.
    pub fn section(&self, c: PointSet) -> Result<OpenFamily> {
        if !self.space.is_closed(c) {
            return Err(Error::NotClosed(c));
        }
        if !self.in_grill(c) {
            return Err(Error::NotInGrill(c));
        }
        let traces: Vec<PointSet> = self.minimal_sets().map(|a| a.intersection(c)).collect();
        isotone_hull(&self.space, &traces)
    }

    /// Member-wise intersection of two families.
    pub fn intersection(&self, other: &OpenFamily) -> Result<OpenFamily> {
        self.check_same(other)?;
        Ok(OpenFamily::from_isotone_mask(
            self.space.clone(),
            self.members & other.members,
        ))
    }

    /// Member-wise union of two families.
    pub fn union(&self, other: &OpenFamily) -> Result<OpenFamily> {
        self.check_same(other)?;
        Ok(OpenFamily::from_isotone_mask(
            self.space.clone(),
            self.members | other.members,
        ))
    }

    /// `{G₁ ∩ G₂ : G₁ ∈ self, G₂ ∈ h} ⊆ f`, decided on minimal members only.
    pub fn meet_contained_in(&self, h: &OpenFamily, f: &OpenFamily) -> bool {
        let lat = self.space.lattice().expect("lattice");
        bits_of(self.minimal)
            .all(|i| bits_of(h.minimal).all(|j| f.contains_index(lat.meet(i, j))))
    }

    /// `self ∨ self ⊆ f`.
    #[inline]
    pub fn self_meet_contained_in(&self, f: &OpenFamily) -> bool {
        self.meet_contained_in(self, f)
    }

    /// Equal to the union of the families `O(K)` it contains.
    pub fn is_compactly_generated(&self) -> bool {
        let n = self.space.n();
        let generated = PointSet::all_subsets(n)
            .filter_map(|k| OpenFamily::neighborhoods_of(&self.space, k).ok())
            .filter(|ok| ok.is_subfamily_of(self))
            .fold(0u64, |acc, ok| acc | ok.members);
        generated == self.members
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::fixtures::*;

    fn set(ix: &[usize]) -> PointSet {
        PointSet::from_indices(ix.iter().copied())
    }

    fn hull(space: &SpaceRef, seeds: &[&[usize]]) -> OpenFamily {
        let seeds: Vec<PointSet> = seeds.iter().map(|s| set(s)).collect();
        isotone_hull(space, &seeds).unwrap()
    }

    #[test]
    fn hull_examples() {
        let s2 = s2().into_ref();
        let f = hull(&s2, &[&[0]]);
        assert_eq!(f.member_sets().collect::<Vec<_>>(), vec![set(&[0]), set(&[0, 1])]);
        let d3 = d3().into_ref();
        assert_eq!(hull(&d3, &[&[0], &[1]]).len(), 6);
        assert!(hull(&d3, &[]).is_empty());
        // seeds need not be open
        let p3 = p3().into_ref();
        assert_eq!(hull(&p3, &[&[0]]).member_sets().collect::<Vec<_>>(), vec![set(&[0, 1, 2])]);
    }

    #[test]
    fn compactness_examples() {
        let s2 = s2().into_ref();
        let f = hull(&s2, &[&[0]]);
        assert!(f.is_compact(CompactnessMode::Fast).unwrap());
        assert!(f.is_compact(CompactnessMode::ORACLE).unwrap());
        let a = s2.open_index(set(&[0])).unwrap();
        for mode in [CompactnessMode::Fast, CompactnessMode::ORACLE] {
            assert!(!is_compact_member_set(&s2, 1 << a, mode).unwrap());
        }
        assert!(matches!(
            OpenFamily::from_members(s2.clone(), 1 << a),
            Err(Error::NotIsotone(..))
        ));
        let d3 = d3().into_ref();
        let big = d3
            .opens()
            .iter()
            .enumerate()
            .filter(|(_, u)| u.len() >= 2)
            .fold(0u64, |m, (i, _)| m | 1 << i);
        assert!(is_compact_member_set(&d3, big, CompactnessMode::ORACLE).unwrap());
        assert!(is_compact_member_set(&d3, big, CompactnessMode::Fast).unwrap());
        assert_eq!(
            is_compact_member_set(&d3, big, CompactnessMode::Oracle { bound: 4 }),
            Err(Error::OracleTooLarge(8, 4))
        );
    }

    #[test]
    fn grill_examples() {
        let s2 = s2().into_ref();
        assert_eq!(hull(&s2, &[&[0]]).grill(), vec![set(&[0]), set(&[0, 1])]);
        assert_eq!(OpenFamily::empty(s2.clone()).unwrap().grill().len(), 4);
        let d3 = d3().into_ref();
        let g = hull(&d3, &[&[0]]).grill();
        assert!(g.iter().all(|b| b.contains(0)) && g.len() == 4);
    }

    #[test]
    fn restrict_examples() {
        let s2 = s2().into_ref();
        let f = hull(&s2, &[&[0]]);
        assert_eq!(f.restrict(s2.full(), RestrictMode::Strict).unwrap(), f);
        let d3 = d3().into_ref();
        let ab = hull(&d3, &[&[0], &[1]]);
        assert_eq!(ab.restrict(set(&[0, 2]), RestrictMode::Strict).unwrap(), hull(&d3, &[&[0]]));
        let q4 = q4().into_ref();
        let f = hull(&q4, &[&[0, 1]]);
        assert_eq!(f.restrict(set(&[0, 1]), RestrictMode::Strict).unwrap(), f);
        // non-member: lenient gives the formula, strict refuses
        let a = hull(&d3, &[&[0]]);
        assert!(a.restrict(set(&[1]), RestrictMode::Lenient).unwrap().is_empty());
        assert_eq!(a.restrict(set(&[1]), RestrictMode::Strict), Err(Error::NotAMember(set(&[1]))));
    }

    #[test]
    fn section_examples() {
        let d3 = d3().into_ref();
        let ac = hull(&d3, &[&[0, 2]]);
        assert_eq!(ac.section(set(&[0, 1])).unwrap(), hull(&d3, &[&[0]]));
        assert_eq!(ac.section(d3.full()).unwrap(), ac);
        assert_eq!(hull(&d3, &[&[0]]).section(set(&[1, 2])), Err(Error::NotInGrill(set(&[1, 2]))));
        let s2 = s2().into_ref();
        assert_eq!(
            hull(&s2, &[&[0]]).section(set(&[0])),
            Err(Error::NotClosed(set(&[0])))
        );
    }

    #[test]
    fn meet_examples() {
        let d3 = d3().into_ref();
        let a = hull(&d3, &[&[0]]);
        assert!(contained_in(&pairwise_meet(&a, &a).unwrap(), &a));
        assert!(a.self_meet_contained_in(&a));
        let ab = hull(&d3, &[&[0], &[1]]);
        let meets = pairwise_meet(&ab, &ab).unwrap();
        assert!(meets.contains(&PointSet::EMPTY));
        assert!(!contained_in(&meets, &ab));
        assert!(!ab.self_meet_contained_in(&ab));
    }

    #[test]
    fn intersection_examples() {
        let d3 = d3().into_ref();
        let a = hull(&d3, &[&[0]]);
        let b = hull(&d3, &[&[1]]);
        assert_eq!(a.intersection(&b).unwrap(), hull(&d3, &[&[0, 1]]));
        let full = OpenFamily::full(d3.clone()).unwrap();
        assert_eq!(a.intersection(&full).unwrap(), a);
        let empty = OpenFamily::empty(d3.clone()).unwrap();
        assert_eq!(a.intersection(&empty).unwrap(), empty);
        let other = s2().into_ref();
        assert_eq!(
            a.intersection(&OpenFamily::empty(other).unwrap()),
            Err(Error::SpaceMismatch)
        );
    }

    #[test]
    fn compactly_generated_on_finite_spaces() {
        let d3 = d3().into_ref();
        assert!(hull(&d3, &[&[0], &[1, 2]]).is_compactly_generated());
        assert!(OpenFamily::empty(d3).unwrap().is_compactly_generated());
    }
}
