//! Finite topological spaces.
//!
//! A [`FiniteSpace`] keeps its open sets as a sorted list of [`PointSet`]s.
//! The position of an open in that list is its canonical index, and every
//! family of opens elsewhere in the crate is a bit mask over those indices.
//!
//! Alexandrov convention: the opens of a preorder `≤` are its up-sets, and
//! the specialization preorder of a space has `x ≤ y` iff every open
//! containing `x` also contains `y`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::enumerate_upsets;
use crate::pointset::{bits_of, PointSet, MAX_POINTS};

/// Upper bound on the number of opens any constructed space may have.
pub const MAX_OPENS: usize = 1 << 20;

/// Largest open lattice over which families can be represented.
pub const MAX_LATTICE: usize = 64;

pub type SpaceRef = Arc<FiniteSpace>;

/// Order structure of `O_X`, indexed by canonical open index.
#[derive(Clone, Debug)]
pub struct OpenLattice {
    m: usize,
    /// `above[i]`: opens containing open `i` (including `i`).
    above: Vec<u64>,
    /// `below[i]`: opens contained in open `i` (including `i`).
    below: Vec<u64>,
    meet: Vec<u8>,
    join: Vec<u8>,
}

impl OpenLattice {
    fn new(opens: &[PointSet]) -> OpenLattice {
        let m = opens.len();
        debug_assert!(m <= MAX_LATTICE);
        let index = |s: PointSet| opens.binary_search(&s).expect("lattice closed") as u8;
        let mut above = vec![0u64; m];
        let mut below = vec![0u64; m];
        let mut meet = vec![0u8; m * m];
        let mut join = vec![0u8; m * m];
        for (i, &u) in opens.iter().enumerate() {
            for (j, &v) in opens.iter().enumerate() {
                if u.is_subset(v) {
                    above[i] |= 1 << j;
                    below[j] |= 1 << i;
                }
                meet[i * m + j] = index(u.intersection(v));
                join[i * m + j] = index(u.union(v));
            }
        }
        OpenLattice {
            m,
            above,
            below,
            meet,
            join,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    #[inline]
    pub fn above(&self, i: usize) -> u64 {
        self.above[i]
    }

    #[inline]
    pub fn below(&self, i: usize) -> u64 {
        self.below[i]
    }

    #[inline]
    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.m + j] as usize
    }

    #[inline]
    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.m + j] as usize
    }

    pub fn above_masks(&self) -> &[u64] {
        &self.above
    }

    /// Mask of all open indices.
    #[inline]
    pub fn all(&self) -> u64 {
        if self.m == 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }

    /// Up-closure of a mask of open indices.
    #[inline]
    pub fn up_closure(&self, mask: u64) -> u64 {
        bits_of(mask).fold(0, |acc, i| acc | self.above[i])
    }

    /// The ⊆-minimal elements of a mask of open indices.
    #[inline]
    pub fn minimal(&self, mask: u64) -> u64 {
        bits_of(mask)
            .filter(|&i| self.below[i] & mask == 1 << i)
            .fold(0, |acc, i| acc | 1 << i)
    }
}

/// A finite point set with an explicit lattice of open sets.
#[derive(Clone)]
pub struct FiniteSpace {
    n: usize,
    opens: Vec<PointSet>,
    names: Option<Vec<String>>,
    /// Smallest open neighbourhood of each point.
    neighborhoods: Vec<PointSet>,
    lattice: Option<OpenLattice>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.opens == other.opens && self.names == other.names
    }
}

impl Eq for FiniteSpace {}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opens: Vec<String> = self.opens.iter().map(|&u| self.format_set(u)).collect();
        f.debug_struct("FiniteSpace")
            .field("n", &self.n)
            .field("opens", &opens)
            .finish()
    }
}

impl FiniteSpace {
    /// Builds a space from opens already known to form a topology.
    pub(crate) fn from_sorted_opens(n: usize, opens: Vec<PointSet>) -> FiniteSpace {
        debug_assert!(opens.windows(2).all(|w| w[0] < w[1]));
        let full = PointSet::full(n);
        let mut neighborhoods = vec![full; n];
        for &u in &opens {
            for x in u.iter() {
                neighborhoods[x] = neighborhoods[x].intersection(u);
            }
        }
        let lattice = (opens.len() <= MAX_LATTICE).then(|| OpenLattice::new(&opens));
        FiniteSpace {
            n,
            opens,
            names: None,
            neighborhoods,
            lattice,
        }
    }

    /// Attaches point labels. Fails if the count is wrong or labels repeat.
    pub fn with_names(mut self, names: Vec<String>) -> Result<FiniteSpace> {
        if names.len() != self.n {
            return Err(Error::Invalid(format!(
                "{} labels for {} points",
                names.len(),
                self.n
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Invalid(format!("duplicate point label {a:?}")));
            }
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn into_ref(self) -> SpaceRef {
        Arc::new(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn full(&self) -> PointSet {
        PointSet::full(self.n)
    }

    /// Opens in canonical (numeric) order.
    #[inline]
    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    #[inline]
    pub fn open(&self, i: usize) -> PointSet {
        self.opens[i]
    }

    #[inline]
    pub fn num_opens(&self) -> usize {
        self.opens.len()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Label of point `i`; falls back to the decimal index.
    pub fn label(&self, i: usize) -> String {
        match &self.names {
            Some(names) => names[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn point_index(&self, label: &str) -> Option<usize> {
        match &self.names {
            Some(names) => names.iter().position(|s| s == label),
            None => label.parse().ok().filter(|&i| i < self.n),
        }
    }

    pub fn format_set(&self, s: PointSet) -> String {
        let items: Vec<String> = s.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", items.join(","))
    }

    /// Canonical index of an open set, if `s` is open.
    #[inline]
    pub fn open_index(&self, s: PointSet) -> Option<usize> {
        self.opens.binary_search(&s).ok()
    }

    /// Openness via minimal neighbourhoods.
    #[inline]
    pub fn is_open(&self, s: PointSet) -> bool {
        s.fits(self.n) && s.iter().all(|x| self.neighborhoods[x].is_subset(s))
    }

    #[inline]
    pub fn is_closed(&self, s: PointSet) -> bool {
        s.fits(self.n) && self.is_open(s.complement(self.n))
    }

    /// Smallest open set containing `x`.
    #[inline]
    pub fn neighborhood(&self, x: usize) -> PointSet {
        self.neighborhoods[x]
    }

    pub fn neighborhoods(&self) -> &[PointSet] {
        &self.neighborhoods
    }

    /// Smallest open set containing `s`.
    pub fn open_hull(&self, s: PointSet) -> PointSet {
        s.iter()
            .fold(PointSet::EMPTY, |acc, x| acc.union(self.neighborhoods[x]))
    }

    /// The open lattice, when `|O_X| ≤ 64`.
    pub fn lattice(&self) -> Result<&OpenLattice> {
        self.lattice
            .as_ref()
            .ok_or(Error::LatticeTooLarge(self.opens.len(), MAX_LATTICE))
    }

    /// Smallest closed subsets (complements of opens), in canonical open order.
    pub fn closed_sets(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().map(|u| u.complement(self.n))
    }

    /// Largest open subset of `a`.
    pub fn interior(&self, a: PointSet) -> PointSet {
        self.opens
            .iter()
            .filter(|u| u.is_subset(a))
            .fold(PointSet::EMPTY, |acc, &u| acc.union(u))
    }

    /// Complement of the interior of the complement.
    pub fn closure(&self, a: PointSet) -> PointSet {
        self.interior(a.complement(self.n)).complement(self.n)
    }

    /// Points and closed sets can be separated by disjoint opens.
    pub fn is_regular(&self) -> bool {
        let n = self.n;
        for c in self.closed_sets() {
            for x in c.complement(n).iter() {
                let separated = self.opens.iter().any(|&u| {
                    u.contains(x)
                        && self
                            .opens
                            .iter()
                            .any(|&v| c.is_subset(v) && u.is_disjoint(v))
                });
                if !separated {
                    return false;
                }
            }
        }
        true
    }

    /// `x` is isolated when `{x}` is open.
    pub fn is_isolated(&self, x: usize) -> bool {
        self.neighborhoods[x] == PointSet::singleton(x)
    }

    /// At most one non-isolated point.
    pub fn is_prime(&self) -> bool {
        (0..self.n).filter(|&x| !self.is_isolated(x)).count() <= 1
    }

    pub fn is_discrete(&self) -> bool {
        (0..self.n).all(|x| self.is_isolated(x))
    }

    pub fn is_indiscrete(&self) -> bool {
        self.opens.len() <= 2
    }

    /// Same point count and opens, ignoring labels.
    pub fn same_topology(&self, other: &FiniteSpace) -> bool {
        self.n == other.n && self.opens == other.opens
    }
}

/// Checks the topology axioms and returns the canonical space.
pub fn validate_topology<I>(n: usize, candidate_opens: I) -> Result<FiniteSpace>
where
    I: IntoIterator<Item = PointSet>,
{
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints(n, MAX_POINTS));
    }
    let mut opens: Vec<PointSet> = candidate_opens.into_iter().collect();
    opens.sort_unstable();
    opens.dedup();
    if let Some(&bad) = opens.iter().find(|u| !u.fits(n)) {
        return Err(Error::OutOfRange(bad, n));
    }
    if opens.binary_search(&PointSet::EMPTY).is_err() {
        return Err(Error::MissingEmpty);
    }
    if opens.binary_search(&PointSet::full(n)).is_err() {
        return Err(Error::MissingFull);
    }
    for (i, &u) in opens.iter().enumerate() {
        for &v in &opens[i + 1..] {
            if opens.binary_search(&u.union(v)).is_err() {
                return Err(Error::NotClosedUnderUnion(u, v));
            }
            if opens.binary_search(&u.intersection(v)).is_err() {
                return Err(Error::NotClosedUnderIntersection(u, v));
            }
        }
    }
    Ok(FiniteSpace::from_sorted_opens(n, opens))
}

/// A reflexive, transitive relation on `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Preorder {
    n: usize,
    /// `up[x] = {y : x ≤ y}`.
    up: Vec<PointSet>,
}

impl fmt::Debug for Preorder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|x| self.up[x].iter().map(move |y| (x, y)))
            .filter(|(x, y)| x != y)
            .collect();
        f.debug_struct("Preorder")
            .field("n", &self.n)
            .field("strict_pairs", &pairs)
            .finish()
    }
}

impl Preorder {
    /// Validates a relation given as `up[x] = {y : x ≤ y}`.
    pub fn from_up_sets(up: Vec<PointSet>) -> Result<Preorder> {
        let n = up.len();
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n, MAX_POINTS));
        }
        for (x, &u) in up.iter().enumerate() {
            if !u.fits(n) {
                return Err(Error::OutOfRange(u, n));
            }
            if !u.contains(x) {
                return Err(Error::NotReflexive(x));
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if let Some(z) = up[y].difference(up[x]).iter().next() {
                    return Err(Error::NotTransitive(x, y, z));
                }
            }
        }
        Ok(Preorder { n, up })
    }

    /// From a boolean matrix, `leq[x][y]` meaning `x ≤ y`.
    pub fn from_matrix(leq: &[Vec<bool>]) -> Result<Preorder> {
        let up = leq
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(y, _)| y)
                    .collect()
            })
            .collect();
        Preorder::from_up_sets(up)
    }

    /// From `x ≤ y` pairs; reflexive pairs are added.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Preorder> {
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n, MAX_POINTS));
        }
        let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::Invalid(format!("pair ({x},{y}) out of range")));
            }
            up[x] = up[x].with(y);
        }
        Preorder::from_up_sets(up)
    }

    pub fn identity(n: usize) -> Preorder {
        Preorder {
            n,
            up: (0..n).map(PointSet::singleton).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn up_sets(&self) -> &[PointSet] {
        &self.up
    }

    /// Relabels points: result has `σ(x) ≤ σ(y)` iff `x ≤ y`.
    pub fn permuted(&self, sigma: &[usize]) -> Preorder {
        let mut up = vec![PointSet::EMPTY; self.n];
        for x in 0..self.n {
            up[sigma[x]] = self.up[x].iter().map(|y| sigma[y]).collect();
        }
        Preorder { n: self.n, up }
    }
}

/// Opens are exactly the up-closed sets of `≤`.
pub fn alexandrov_from_preorder(p: &Preorder) -> Result<FiniteSpace> {
    let up: Vec<u64> = p.up.iter().map(|s| s.bits()).collect();
    let opens = enumerate_upsets(&up, MAX_OPENS)?
        .into_iter()
        .map(PointSet)
        .collect();
    Ok(FiniteSpace::from_sorted_opens(p.n, opens))
}

/// `x ≤ y` iff every open containing `x` contains `y`.
pub fn specialization_preorder(s: &FiniteSpace) -> Preorder {
    Preorder {
        n: s.n,
        up: s.neighborhoods.clone(),
    }
}

/// Named fixture spaces used throughout tests and the CLI.
pub mod fixtures {
    use super::*;

    fn named(n: usize, opens: &[&[usize]], names: &[&str]) -> FiniteSpace {
        validate_topology(n, opens.iter().map(|o| PointSet::from_indices(o.iter().copied())))
            .expect("fixture is a topology")
            .with_names(names.iter().map(|s| s.to_string()).collect())
            .expect("fixture labels")
    }

    /// Sierpiński space on `{a, b}` with `{a}` open.
    pub fn s2() -> FiniteSpace {
        named(2, &[&[], &[0], &[0, 1]], &["a", "b"])
    }

    /// The codomain `$*`: points `0, 1` with `{0}` open.
    pub fn sierpinski_star() -> FiniteSpace {
        named(2, &[&[], &[0], &[0, 1]], &["0", "1"])
    }

    pub fn discrete(n: usize) -> FiniteSpace {
        alexandrov_from_preorder(&Preorder::identity(n)).expect("discrete")
    }

    pub fn indiscrete(n: usize) -> FiniteSpace {
        validate_topology(n, [PointSet::EMPTY, PointSet::full(n)]).expect("indiscrete")
    }

    /// Discrete space on `{a, b, c}`.
    pub fn d3() -> FiniteSpace {
        discrete(3)
            .with_names(vec!["a".into(), "b".into(), "c".into()])
            .unwrap()
    }

    /// Prime space on `{p, x, y}`: `x`, `y` isolated, `p` only in `X`.
    pub fn p3() -> FiniteSpace {
        named(3, &[&[], &[1], &[2], &[1, 2], &[0, 1, 2]], &["p", "x", "y"])
    }

    /// Partition topology on `{1, 2, 3, 4}` with blocks `{1,2}`, `{3,4}`.
    pub fn q4() -> FiniteSpace {
        named(4, &[&[], &[0, 1], &[2, 3], &[0, 1, 2, 3]], &["1", "2", "3", "4"])
    }

    /// Look a fixture up by name.
    pub fn by_name(name: &str) -> Option<FiniteSpace> {
        Some(match name {
            "S2" => s2(),
            "D3" => d3(),
            "P3" => p3(),
            "Q4" => q4(),
            "D2" => discrete(2),
            "I2" => indiscrete(2),
            "$*" | "star" => sierpinski_star(),
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn set(ix: &[usize]) -> PointSet {
        PointSet::from_indices(ix.iter().copied())
    }

    #[test]
    fn validate_examples() {
        assert_eq!(s2().num_opens(), 3);
        let err = validate_topology(2, [set(&[]), set(&[0]), set(&[1])]).unwrap_err();
        assert_eq!(err, Error::MissingFull);
        let err = validate_topology(2, [set(&[]), set(&[0]), set(&[1]), set(&[0, 1, 2])]);
        assert!(matches!(err, Err(Error::OutOfRange(..))));
        let err = validate_topology(3, [set(&[]), set(&[0]), set(&[1]), set(&[0, 1, 2])]);
        assert_eq!(err.unwrap_err(), Error::NotClosedUnderUnion(set(&[0]), set(&[1])));
        let err = validate_topology(3, [set(&[]), set(&[0, 1]), set(&[1, 2]), set(&[0, 1, 2])]);
        assert!(matches!(err, Err(Error::NotClosedUnderIntersection(..))));
        assert!(validate_topology(2, [set(&[0, 1])]).unwrap_err() == Error::MissingEmpty);
        assert_eq!(validate_topology(3, PointSet::all_subsets(3)).unwrap().num_opens(), 8);
    }

    #[test]
    fn alexandrov_examples() {
        assert_eq!(discrete(3).num_opens(), 8);
        // a ≤ b
        let chain = Preorder::from_pairs(2, &[(0, 1)]).unwrap();
        let s = alexandrov_from_preorder(&chain).unwrap();
        assert_eq!(s.opens(), &[set(&[]), set(&[1]), set(&[0, 1])]);
        // p ≤ x, p ≤ y
        let prime = Preorder::from_pairs(3, &[(0, 1), (0, 2)]).unwrap();
        let s = alexandrov_from_preorder(&prime).unwrap();
        assert!(s.same_topology(&p3()));
        assert!(Preorder::from_pairs(3, &[(0, 1), (1, 2)]).is_err());
        assert_eq!(
            Preorder::from_up_sets(vec![set(&[1]), set(&[1])]).unwrap_err(),
            Error::NotReflexive(0)
        );
    }

    #[test]
    fn specialization_examples() {
        let id = specialization_preorder(&d3());
        assert_eq!(id, Preorder::identity(3));
        let sp = specialization_preorder(&s2());
        assert!(sp.leq(1, 0) && !sp.leq(0, 1));
        let total = specialization_preorder(&indiscrete(2));
        assert!(total.leq(0, 1) && total.leq(1, 0));
    }

    #[test]
    fn interior_closure_examples() {
        let s = s2();
        assert_eq!(s.interior(set(&[1])), PointSet::EMPTY);
        assert_eq!(s.closure(set(&[0])), set(&[0, 1]));
        assert_eq!(q4().closure(set(&[0])), set(&[0, 1]));
    }

    #[test]
    fn regularity_examples() {
        assert!(d3().is_regular());
        assert!(!s2().is_regular());
        assert!(q4().is_regular());
        assert!(indiscrete(3).is_regular());
        assert!(!p3().is_regular());
    }

    #[test]
    fn prime_detection() {
        assert!(p3().is_prime());
        assert!(s2().is_prime());
        assert!(d3().is_prime());
        assert!(!q4().is_prime());
    }

    #[test]
    fn is_open_agrees_with_list() {
        for s in [s2(), d3(), p3(), q4(), indiscrete(3)] {
            for a in PointSet::all_subsets(s.n()) {
                assert_eq!(s.is_open(a), s.open_index(a).is_some());
            }
        }
    }

    #[test]
    fn lattice_tables() {
        let d = d3();
        let lat = d.lattice().unwrap();
        let a = d.open_index(set(&[0])).unwrap();
        let b = d.open_index(set(&[1])).unwrap();
        assert_eq!(d.open(lat.join(a, b)), set(&[0, 1]));
        assert_eq!(d.open(lat.meet(a, b)), PointSet::EMPTY);
        assert_eq!(lat.above(a).count_ones(), 4);
        assert_eq!(lat.minimal(lat.all()), 1);
    }
}
