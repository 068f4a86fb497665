//! Collections of compact families and their closure predicates.
//!
//! `Λ`, `Λ↓` and `Σ` are greatest fixed points inside `κ`.

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::family::{same_space, OpenFamily};
use crate::hyperspace::{compare_topologies, generate_topology, Comparison};
use crate::order::enumerate_upsets;
use crate::pointset::{bits_of, PointSet};
use crate::space::{SpaceRef, MAX_OPENS};

/// Default bound on `|O_X|` for enumerating `κ(X)`.
pub const DEFAULT_ENUMERATION_BOUND: usize = 12;

#[derive(Clone, Default)]
struct Flags {
    hereditary: OnceLock<bool>,
    sectionable: OnceLock<bool>,
    self_joinable: OnceLock<bool>,
    hereditarily_self_joinable: OnceLock<bool>,
    self_splittable: OnceLock<bool>,
}

/// A set of families over one space, kept sorted by canonical key.
#[derive(Clone)]
pub struct FamilyCollection {
    space: SpaceRef,
    families: Vec<OpenFamily>,
    flags: Flags,
}

impl PartialEq for FamilyCollection {
    fn eq(&self, other: &Self) -> bool {
        self.families == other.families
    }
}

impl Eq for FamilyCollection {}

impl fmt::Debug for FamilyCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.families).finish()
    }
}

impl FamilyCollection {
    pub fn new<I>(space: SpaceRef, families: I) -> Result<FamilyCollection>
    where
        I: IntoIterator<Item = OpenFamily>,
    {
        space.lattice()?;
        let mut families: Vec<OpenFamily> = families.into_iter().collect();
        if families.iter().any(|f| !same_space(f.space(), &space)) {
            return Err(Error::SpaceMismatch);
        }
        families.sort_unstable();
        families.dedup();
        Ok(FamilyCollection {
            space,
            families,
            flags: Flags::default(),
        })
    }

    pub(crate) fn from_sorted(space: SpaceRef, families: Vec<OpenFamily>) -> FamilyCollection {
        debug_assert!(families.windows(2).all(|w| w[0] < w[1]));
        FamilyCollection {
            space,
            families,
            flags: Flags::default(),
        }
    }

    pub fn empty(space: SpaceRef) -> Result<FamilyCollection> {
        FamilyCollection::new(space, [])
    }

    #[inline]
    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    #[inline]
    pub fn families(&self) -> &[OpenFamily] {
        &self.families
    }

    pub fn iter(&self) -> std::slice::Iter<'_, OpenFamily> {
        self.families.iter()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.families.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    #[inline]
    pub fn contains(&self, f: &OpenFamily) -> bool {
        self.families.binary_search(f).is_ok()
    }

    pub fn position(&self, f: &OpenFamily) -> Option<usize> {
        self.families.binary_search(f).ok()
    }

    pub fn is_subcollection_of(&self, other: &FamilyCollection) -> bool {
        self.families.iter().all(|f| other.contains(f))
    }

    /// Keeps the families for which `keep` is true.
    pub fn filter<P: FnMut(&OpenFamily) -> bool>(&self, mut keep: P) -> FamilyCollection {
        let families = self.families.iter().filter(|f| keep(f)).cloned().collect();
        FamilyCollection::from_sorted(self.space.clone(), families)
    }

    /// Families selected by a bit mask over positions (`len() ≤ 64`).
    pub fn select(&self, mask: u64) -> FamilyCollection {
        let families = bits_of(mask).map(|i| self.families[i].clone()).collect();
        FamilyCollection::from_sorted(self.space.clone(), families)
    }

    pub fn with(&self, f: OpenFamily) -> Result<FamilyCollection> {
        FamilyCollection::new(self.space.clone(), self.families.iter().cloned().chain([f]))
    }

    pub fn union(&self, other: &FamilyCollection) -> Result<FamilyCollection> {
        FamilyCollection::new(
            self.space.clone(),
            self.families.iter().chain(&other.families).cloned(),
        )
    }

    /// Families containing `∅` as a member (only `O_X` itself qualifies).
    pub fn without_empty_member(&self) -> FamilyCollection {
        self.filter(|f| !f.contains_empty_set())
    }

    pub fn is_hereditary(&self) -> bool {
        *self.flags.hereditary.get_or_init(|| {
            self.families.iter().all(|f| {
                bits_of(f.members()).all(|a| self.contains(&f.restrict_index(a)))
            })
        })
    }

    pub fn is_sectionable(&self) -> bool {
        *self.flags.sectionable.get_or_init(|| {
            let space = &self.space;
            self.families.iter().all(|f| {
                space
                    .closed_sets()
                    .filter(|&c| f.in_grill(c))
                    .all(|c| f.section(c).is_ok_and(|s| self.contains(&s)))
            })
        })
    }

    pub fn is_intersection_closed(&self) -> bool {
        self.families.iter().enumerate().all(|(i, f)| {
            self.families[i + 1..]
                .iter()
                .all(|g| self.contains(&f.intersection(g).expect("same space")))
        })
    }

    pub fn is_self_joinable(&self, hereditary: bool) -> bool {
        let cell = if hereditary {
            &self.flags.hereditarily_self_joinable
        } else {
            &self.flags.self_joinable
        };
        *cell.get_or_init(|| {
            self.families
                .iter()
                .all(|f| is_joinable_rel(f, self, hereditary))
        })
    }

    pub fn is_self_splittable(&self) -> bool {
        *self.flags.self_splittable.get_or_init(|| {
            let ctx = SplitContext::new(self);
            self.families.iter().all(|f| ctx.failure(f).is_none())
        })
    }
}

impl<'a> IntoIterator for &'a FamilyCollection {
    type Item = &'a OpenFamily;
    type IntoIter = std::slice::Iter<'a, OpenFamily>;

    fn into_iter(self) -> Self::IntoIter {
        self.families.iter()
    }
}

/// All compact families: the up-sets of the open lattice, including the empty
/// family and `O_X`.
pub fn kappa(space: &SpaceRef) -> Result<FamilyCollection> {
    kappa_bounded(space, DEFAULT_ENUMERATION_BOUND)
}

pub fn kappa_bounded(space: &SpaceRef, bound: usize) -> Result<FamilyCollection> {
    let lat = space.lattice()?;
    if lat.len() > bound {
        return Err(Error::LatticeTooLarge(lat.len(), bound));
    }
    let masks = enumerate_upsets(lat.above_masks(), MAX_OPENS)?;
    let families = masks
        .into_iter()
        .map(|m| OpenFamily::from_isotone_mask(space.clone(), m));
    FamilyCollection::new(space.clone(), families)
}

/// `{O(K) : K ⊆ X}`. Every `O(K)` is principal, generated by the smallest
/// open containing `K`, so this is the collection of principal up-sets.
pub fn k_collection(space: &SpaceRef) -> Result<FamilyCollection> {
    let lat = space.lattice()?;
    let families = (0..lat.len())
        .map(|i| OpenFamily::from_isotone_mask(space.clone(), lat.above(i)))
        .collect::<Vec<_>>();
    FamilyCollection::new(space.clone(), families)
}

/// `{O(F) : F ⊆ X finite}`, built from each finite point set directly.
pub fn p_collection(space: &SpaceRef) -> Result<FamilyCollection> {
    let mut families = Vec::new();
    for f in PointSet::all_subsets(space.n()) {
        families.push(OpenFamily::neighborhoods_of(space, f)?);
    }
    FamilyCollection::new(space.clone(), families)
}

/// Smallest superset closed under pairwise family intersection.
pub fn intersection_closure(alpha: &FamilyCollection) -> FamilyCollection {
    let mut current = alpha.clone();
    loop {
        let mut next: Vec<OpenFamily> = current.families.clone();
        for (i, f) in current.families.iter().enumerate() {
            for g in &current.families[i + 1..] {
                next.push(f.intersection(g).expect("same space"));
            }
        }
        let next = FamilyCollection::new(alpha.space.clone(), next).expect("same space");
        if next.len() == current.len() {
            return current;
        }
        current = next;
    }
}

/// Some `G ∈ γ` has `G ∨ G ⊆ F`; the hereditary variant asks for such a `G`
/// containing each member of `F`.
pub fn is_joinable_rel(f: &OpenFamily, gamma: &FamilyCollection, hereditary: bool) -> bool {
    joinable_failure(f, gamma, hereditary).is_none()
}

/// `None` if joinable; otherwise the member with no witness (or `None` inside
/// for the plain variant).
pub fn joinable_failure(
    f: &OpenFamily,
    gamma: &FamilyCollection,
    hereditary: bool,
) -> Option<Option<PointSet>> {
    let witnesses = || gamma.iter().filter(|g| g.self_meet_contained_in(f));
    if hereditary {
        for a in bits_of(f.members()) {
            if !witnesses().any(|g| g.contains_index(a)) {
                return Some(Some(f.space().open(a)));
            }
        }
        None
    } else if witnesses().next().is_some() {
        None
    } else {
        Some(None)
    }
}

/// Precomputed candidates for splitting relative to a collection `γ`:
/// `candidates[u]` holds the families `G ∈ γ` with `U ∈ G` and `G = G↓U`,
/// smallest first.
pub struct SplitContext<'a> {
    gamma: &'a FamilyCollection,
    candidates: Vec<Vec<&'a OpenFamily>>,
}

impl<'a> SplitContext<'a> {
    pub fn new(gamma: &'a FamilyCollection) -> SplitContext<'a> {
        let m = gamma.space.num_opens();
        let candidates = (0..m)
            .map(|u| {
                let mut c: Vec<&OpenFamily> =
                    gamma.iter().filter(|g| g.is_concentrated_on(u)).collect();
                c.sort_by_key(|g| g.len());
                c
            })
            .collect();
        SplitContext { gamma, candidates }
    }

    pub fn gamma(&self) -> &FamilyCollection {
        self.gamma
    }

    /// First pair `(U₁, U₂)` with `U₁ ∪ U₂ ∈ F` that admits no splitting.
    pub fn failure(&self, f: &OpenFamily) -> Option<(PointSet, PointSet)> {
        let space = self.gamma.space();
        let lat = space.lattice().expect("lattice");
        let m = lat.len();
        for i in 0..m {
            for j in i..m {
                if !f.contains_index(lat.join(i, j)) {
                    continue;
                }
                let ok = self.candidates[i].iter().any(|g1| {
                    self.candidates[j]
                        .iter()
                        .any(|g2| g1.members() & g2.members() & !f.members() == 0)
                });
                if !ok {
                    return Some((space.open(i), space.open(j)));
                }
            }
        }
        None
    }
}

/// Every split `U₁ ∪ U₂ ∈ F` is refined by `G₁ ∩ G₂ ⊆ F` with `Gᵢ ∈ γ`,
/// `Uᵢ ∈ Gᵢ` and `Gᵢ = Gᵢ↓Uᵢ`.
pub fn is_splittable_rel(f: &OpenFamily, gamma: &FamilyCollection) -> bool {
    SplitContext::new(gamma).failure(f).is_none()
}

pub fn is_self_splittable(alpha: &FamilyCollection) -> bool {
    alpha.is_self_splittable()
}

pub fn is_self_joinable(alpha: &FamilyCollection, hereditary: bool) -> bool {
    alpha.is_self_joinable(hereditary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Joinable,
    HereditarilyJoinable,
    Splittable,
}

/// Largest subcollection of `alpha` on which the matching "self-" predicate
/// holds. Each round drops every family failing the condition relative to
/// the current collection; stops when a round drops nothing.
pub fn greatest_fixed_subcollection(alpha: &FamilyCollection, condition: Condition) -> FamilyCollection {
    let mut beta = alpha.clone();
    loop {
        let keep: Vec<bool> = match condition {
            Condition::Joinable | Condition::HereditarilyJoinable => {
                let hereditary = condition == Condition::HereditarilyJoinable;
                beta.families
                    .par_iter()
                    .map(|f| is_joinable_rel(f, &beta, hereditary))
                    .collect()
            }
            Condition::Splittable => {
                let ctx = SplitContext::new(&beta);
                beta.families
                    .par_iter()
                    .map(|f| ctx.failure(f).is_none())
                    .collect()
            }
        };
        if keep.iter().all(|&k| k) {
            return beta;
        }
        let survivors = beta
            .families
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(f, _)| f.clone())
            .collect();
        beta = FamilyCollection::from_sorted(alpha.space.clone(), survivors);
    }
}

/// `Λ(X)`.
pub fn lambda(space: &SpaceRef, bound: usize) -> Result<FamilyCollection> {
    Ok(greatest_fixed_subcollection(&kappa_bounded(space, bound)?, Condition::Joinable))
}

/// `Λ↓(X)`.
pub fn lambda_down(space: &SpaceRef, bound: usize) -> Result<FamilyCollection> {
    Ok(greatest_fixed_subcollection(
        &kappa_bounded(space, bound)?,
        Condition::HereditarilyJoinable,
    ))
}

/// `Σ(X)`.
pub fn sigma(space: &SpaceRef, bound: usize) -> Result<FamilyCollection> {
    Ok(greatest_fixed_subcollection(&kappa_bounded(space, bound)?, Condition::Splittable))
}

/// The canonical collections of one space, computed once.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub kappa: FamilyCollection,
    pub k: FamilyCollection,
    pub p: FamilyCollection,
    pub lambda: FamilyCollection,
    pub lambda_down: FamilyCollection,
    pub sigma: FamilyCollection,
}

impl Canonical {
    pub fn compute(space: &SpaceRef, bound: usize) -> Result<Canonical> {
        let kappa = kappa_bounded(space, bound)?;
        Ok(Canonical {
            k: k_collection(space)?,
            p: p_collection(space)?,
            lambda: greatest_fixed_subcollection(&kappa, Condition::Joinable),
            lambda_down: greatest_fixed_subcollection(&kappa, Condition::HereditarilyJoinable),
            sigma: greatest_fixed_subcollection(&kappa, Condition::Splittable),
            kappa,
        })
    }

    pub fn by_name(&self, name: &str) -> Option<&FamilyCollection> {
        Some(match name {
            "kappa" => &self.kappa,
            "k" => &self.k,
            "p" => &self.p,
            "lambda" => &self.lambda,
            "lambda_down" => &self.lambda_down,
            "sigma" => &self.sigma,
            _ => return None,
        })
    }

    /// `k ⊆ Λ↓ ⊆ Λ ⊆ κ` and `Λ↓ ⊆ Σ ⊆ κ`.
    pub fn inclusions_ok(&self) -> bool {
        self.k.is_subcollection_of(&self.lambda_down)
            && self.lambda_down.is_subcollection_of(&self.lambda)
            && self.lambda.is_subcollection_of(&self.kappa)
            && self.lambda_down.is_subcollection_of(&self.sigma)
            && self.sigma.is_subcollection_of(&self.kappa)
    }
}

pub const COLLECTION_NAMES: [&str; 6] = ["kappa", "k", "p", "lambda", "lambda_down", "sigma"];

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SpaceClassification {
    pub consonant: bool,
    pub infraconsonant: bool,
    pub compactly_splittable: bool,
    pub inclusions_ok: bool,
}

pub fn classify_space(space: &SpaceRef, bound: usize) -> Result<SpaceClassification> {
    let canon = Canonical::compute(space, bound)?;
    Ok(classify_canonical(&canon))
}

pub fn classify_canonical(canon: &Canonical) -> SpaceClassification {
    let tk = generate_topology(&canon.k);
    let tkappa = generate_topology(&canon.kappa);
    let consonant = compare_topologies(&tk.topology, &tkappa.topology)
        .map(|c| c.comparison == Comparison::Equal)
        .unwrap_or(false);
    let ctx = SplitContext::new(&canon.kappa);
    SpaceClassification {
        consonant,
        infraconsonant: canon.kappa.is_self_joinable(false),
        compactly_splittable: canon.kappa.iter().all(|f| ctx.failure(f).is_none()),
        inclusions_ok: canon.inclusions_ok(),
    }
}

/// How to read the auxiliary family adjoined in the proof that self-joinable,
/// hereditary, sectionable collections on regular spaces are self-splittable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxiliaryReading {
    /// `O_X(∅) = O_X`, the family that contains `∅`.
    FullFamily,
    /// `O_X(X) = {X}`.
    TopOnly,
}

impl AuxiliaryReading {
    pub const ALL: [AuxiliaryReading; 2] = [AuxiliaryReading::FullFamily, AuxiliaryReading::TopOnly];
}

/// `α ∪ {O(∅)}` or `α ∪ {O(X)}`.
pub fn augment_auxiliary(alpha: &FamilyCollection, reading: AuxiliaryReading) -> FamilyCollection {
    let space = alpha.space();
    let extra = match reading {
        AuxiliaryReading::FullFamily => OpenFamily::full(space.clone()),
        AuxiliaryReading::TopOnly => OpenFamily::neighborhoods_of(space, space.full()),
    }
    .expect("lattice");
    alpha.with(extra).expect("same space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::isotone_hull;
    use crate::space::fixtures::*;

    fn set(ix: &[usize]) -> PointSet {
        PointSet::from_indices(ix.iter().copied())
    }

    fn hull(space: &SpaceRef, seeds: &[&[usize]]) -> OpenFamily {
        let seeds: Vec<PointSet> = seeds.iter().map(|s| set(s)).collect();
        isotone_hull(space, &seeds).unwrap()
    }

    fn single(f: OpenFamily) -> FamilyCollection {
        FamilyCollection::new(f.space().clone(), [f]).unwrap()
    }

    #[test]
    fn kappa_counts() {
        let s2 = s2().into_ref();
        let k = kappa(&s2).unwrap();
        assert_eq!(k.len(), 4);
        assert!(k.contains(&OpenFamily::empty(s2.clone()).unwrap()));
        assert!(k.contains(&OpenFamily::full(s2.clone()).unwrap()));
        assert_eq!(kappa(&discrete(2).into_ref()).unwrap().len(), 6);
        assert_eq!(kappa(&d3().into_ref()).unwrap().len(), 20);
        let d4 = discrete(4).into_ref();
        assert_eq!(kappa(&d4).unwrap_err(), Error::LatticeTooLarge(16, 12));
        assert_eq!(kappa_bounded(&d4, 16).unwrap().len(), 168);
    }

    #[test]
    fn k_and_p() {
        let s2 = s2().into_ref();
        let k = k_collection(&s2).unwrap();
        assert_eq!(k.len(), 3);
        assert!(k.contains(&hull(&s2, &[&[0]])));
        assert!(k.contains(&hull(&s2, &[&[1]])));
        assert!(k.contains(&OpenFamily::full(s2.clone()).unwrap()));
        assert_eq!(p_collection(&s2).unwrap(), k);
        assert_eq!(
            OpenFamily::neighborhoods_of(&s2, PointSet::EMPTY).unwrap(),
            OpenFamily::full(s2).unwrap()
        );
    }

    #[test]
    fn intersection_closure_examples() {
        let d3 = d3().into_ref();
        let a = FamilyCollection::new(d3.clone(), [hull(&d3, &[&[0]]), hull(&d3, &[&[1]])]).unwrap();
        let c = intersection_closure(&a);
        assert_eq!(c.len(), 3);
        assert!(c.contains(&hull(&d3, &[&[0, 1]])));
        assert_eq!(intersection_closure(&c), c);
        let s2 = s2().into_ref();
        let k = kappa(&s2).unwrap();
        assert_eq!(intersection_closure(&k), k);
        let one = single(hull(&d3, &[&[0]]));
        assert_eq!(intersection_closure(&one), one);
    }

    #[test]
    fn hereditary_examples() {
        assert!(k_collection(&s2().into_ref()).unwrap().is_hereditary());
        let d3 = d3().into_ref();
        assert!(!single(hull(&d3, &[&[0], &[1]])).is_hereditary());
        assert!(FamilyCollection::empty(d3).unwrap().is_hereditary());
    }

    #[test]
    fn sectionable_examples() {
        assert!(kappa(&s2().into_ref()).unwrap().is_sectionable());
        let d3 = d3().into_ref();
        assert!(!single(hull(&d3, &[&[0, 2]])).is_sectionable());
        assert!(FamilyCollection::empty(d3).unwrap().is_sectionable());
    }

    #[test]
    fn joinable_examples() {
        let d = d3().into_ref();
        let a = hull(&d, &[&[0]]);
        assert!(is_joinable_rel(&a, &single(a.clone()), false));
        let ab = hull(&d, &[&[0], &[1]]);
        assert!(!is_joinable_rel(&ab, &single(ab.clone()), false));
        assert!(!single(ab).is_self_joinable(false));
        assert!(kappa(&s2().into_ref()).unwrap().is_self_joinable(false));
        for s in [s2(), d3(), p3(), q4()] {
            let s = s.into_ref();
            assert!(k_collection(&s).unwrap().is_self_joinable(false));
            assert!(k_collection(&s).unwrap().is_self_joinable(true));
        }
    }

    #[test]
    fn splittable_examples() {
        assert!(kappa(&p3().into_ref()).unwrap().is_self_splittable());
        assert!(k_collection(&q4().into_ref()).unwrap().is_self_splittable());
        let d3 = d3().into_ref();
        let top = single(hull(&d3, &[&[0, 1, 2]]));
        assert!(!top.is_self_splittable());
        let ctx = SplitContext::new(&top);
        assert!(ctx.failure(&top.families()[0]).is_some());
    }

    #[test]
    fn gfp_examples() {
        let s2 = s2().into_ref();
        let k = kappa(&s2).unwrap();
        assert_eq!(lambda(&s2, 12).unwrap(), k);
        let d3 = d3().into_ref();
        let bad = single(hull(&d3, &[&[0], &[1]]));
        assert!(greatest_fixed_subcollection(&bad, Condition::Joinable).is_empty());
        // brute force over all 2^4 subcollections of κ(S2)
        let best = (0u64..16)
            .map(|m| k.select(m))
            .filter(|a| a.is_self_joinable(false))
            .max_by_key(|a| a.len())
            .unwrap();
        assert_eq!(best, greatest_fixed_subcollection(&k, Condition::Joinable));
    }

    #[test]
    fn classify_examples() {
        for s in [s2(), p3(), q4()] {
            let c = classify_space(&s.into_ref(), 12).unwrap();
            assert!(c.consonant && c.infraconsonant && c.compactly_splittable && c.inclusions_ok);
        }
    }

    #[test]
    fn auxiliary_readings() {
        let d3 = d3().into_ref();
        let alpha = k_collection(&d3).unwrap();
        let full = augment_auxiliary(&alpha, AuxiliaryReading::FullFamily);
        assert_eq!(full, alpha); // O(∅) = O_X is already principal
        let top = augment_auxiliary(&alpha, AuxiliaryReading::TopOnly);
        assert!(top.contains(&hull(&d3, &[&[0, 1, 2]])));
    }
}
