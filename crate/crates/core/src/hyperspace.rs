//! Dual topologies on `O_X` and on spaces of continuous maps.
//!
//! A [`HyperTopology`] has the opens of a base space as its points: point `i`
//! is the open with canonical index `i`. Families become subsets of that
//! carrier, and a collection of families generates a topology on it.
//!
//! Finite codomains only; real-valued function spaces are not modelled.

use serde::Serialize;

use crate::collection::FamilyCollection;
use crate::error::{Error, Result};
use crate::family::{same_space, OpenFamily};
use crate::order::enumerate_upsets;
use crate::pointset::{PointSet, MAX_POINTS};
use crate::space::{fixtures, FiniteSpace, SpaceRef, MAX_OPENS};

/// Upper bound on the number of candidate maps `continuous_maps` will scan.
pub const MAX_CANDIDATE_MAPS: u64 = 1 << 22;

/// Topology generated by a subbase: finite intersections, then unions, with
/// `∅` and the full set adjoined.
///
/// Each point's smallest neighbourhood is the intersection of the subbasic
/// sets containing it, so the opens are the up-sets of that neighbourhood
/// preorder.
pub fn topology_from_subbase(n: usize, subbase: &[PointSet]) -> Result<FiniteSpace> {
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints(n, MAX_POINTS));
    }
    let full = PointSet::full(n);
    let mut nbhd = vec![full; n];
    for &s in subbase {
        if !s.fits(n) {
            return Err(Error::OutOfRange(s, n));
        }
        for x in s.iter() {
            nbhd[x] = nbhd[x].intersection(s);
        }
    }
    let up: Vec<u64> = nbhd.iter().map(|s| s.bits()).collect();
    let opens = enumerate_upsets(&up, MAX_OPENS)?
        .into_iter()
        .map(PointSet)
        .collect();
    Ok(FiniteSpace::from_sorted_opens(n, opens))
}

/// The topology on `O_X` generated by a collection of families.
#[derive(Clone, Debug)]
pub struct HyperTopology {
    pub base: SpaceRef,
    /// `carrier[i]` is the base open with canonical index `i`.
    pub carrier: Vec<PointSet>,
    pub topology: FiniteSpace,
}

impl HyperTopology {
    /// Carrier subset corresponding to a family.
    pub fn family_set(f: &OpenFamily) -> PointSet {
        PointSet(f.members())
    }
}

pub fn generate_topology(alpha: &FamilyCollection) -> HyperTopology {
    let base = alpha.space().clone();
    let m = base.num_opens();
    let subbase: Vec<PointSet> = alpha.iter().map(HyperTopology::family_set).collect();
    let topology = topology_from_subbase(m, &subbase).expect("carrier fits a lattice");
    HyperTopology {
        carrier: base.opens().to_vec(),
        base,
        topology,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    /// The first topology has strictly fewer opens.
    Coarser,
    Finer,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologyComparison {
    pub comparison: Comparison,
    /// An open in one topology but not the other.
    pub witness: Option<PointSet>,
}

pub fn compare_topologies(t1: &FiniteSpace, t2: &FiniteSpace) -> Result<TopologyComparison> {
    if t1.n() != t2.n() {
        return Err(Error::CarrierMismatch(t1.n(), t2.n()));
    }
    let only1 = t1.opens().iter().find(|u| t2.open_index(**u).is_none()).copied();
    let only2 = t2.opens().iter().find(|u| t1.open_index(**u).is_none()).copied();
    let (comparison, witness) = match (only1, only2) {
        (None, None) => (Comparison::Equal, None),
        (None, Some(w)) => (Comparison::Coarser, Some(w)),
        (Some(w), None) => (Comparison::Finer, Some(w)),
        (Some(w), Some(_)) => (Comparison::Incomparable, Some(w)),
    };
    Ok(TopologyComparison {
        comparison,
        witness,
    })
}

/// Point `(i, j)` of the product has index `i * t2.n() + j`.
pub fn product_space(t1: &FiniteSpace, t2: &FiniteSpace) -> Result<FiniteSpace> {
    let (n1, n2) = (t1.n(), t2.n());
    let n = n1 * n2;
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints(n, MAX_POINTS));
    }
    let up: Vec<u64> = (0..n)
        .map(|p| {
            let (i, j) = (p / n2, p % n2);
            rectangle(t1.neighborhood(i), t2.neighborhood(j), n2).bits()
        })
        .collect();
    let opens = enumerate_upsets(&up, MAX_OPENS)?
        .into_iter()
        .map(PointSet)
        .collect();
    Ok(FiniteSpace::from_sorted_opens(n, opens))
}

/// `a × b` as a subset of the product carrier.
pub fn rectangle(a: PointSet, b: PointSet, n2: usize) -> PointSet {
    a.iter()
        .flat_map(|i| b.iter().map(move |j| i * n2 + j))
        .collect()
}

/// A map between finite spaces as a point table.
pub type PointMap = Vec<usize>;

pub fn preimage(f: &[usize], v: PointSet) -> PointSet {
    f.iter()
        .enumerate()
        .filter(|(_, &y)| v.contains(y))
        .map(|(x, _)| x)
        .collect()
}

/// `f⁻(V)` open in `x` for every open `V` of `y`.
pub fn is_continuous(x: &FiniteSpace, y: &FiniteSpace, f: &[usize]) -> bool {
    f.len() == x.n()
        && f.iter().all(|&p| p < y.n())
        && y.opens().iter().all(|&v| x.is_open(preimage(f, v)))
}

/// All continuous maps in lexicographic order of their tables.
pub fn continuous_maps(x: &FiniteSpace, y: &FiniteSpace) -> Result<Vec<PointMap>> {
    let (nx, ny) = (x.n(), y.n());
    if ny == 0 {
        return Ok(if nx == 0 { vec![vec![]] } else { vec![] });
    }
    let total = (ny as u64).checked_pow(nx as u32).filter(|&t| t <= MAX_CANDIDATE_MAPS);
    if total.is_none() {
        return Err(Error::Invalid(format!(
            "{ny}^{nx} candidate maps exceeds {MAX_CANDIDATE_MAPS}"
        )));
    }
    let mut out = Vec::new();
    let mut f = vec![0usize; nx];
    loop {
        if is_continuous(x, y, &f) {
            out.push(f.clone());
        }
        // odometer, last coordinate fastest
        let mut k = nx;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            f[k] += 1;
            if f[k] < ny {
                break;
            }
            f[k] = 0;
        }
    }
}

/// `C_α(X, Y)`: continuous maps with the topology generated by `[A, U]`.
#[derive(Clone, Debug)]
pub struct FunctionSpace {
    pub domain: SpaceRef,
    pub codomain: SpaceRef,
    pub maps: Vec<PointMap>,
    pub topology: FiniteSpace,
}

impl FunctionSpace {
    /// `[A, U] = {f : f⁻(U) ∈ A}` as a subset of the map carrier.
    pub fn subbasic(&self, a: &OpenFamily, u: PointSet) -> PointSet {
        subbasic_set(&self.maps, a, u)
    }
}

fn subbasic_set(maps: &[PointMap], a: &OpenFamily, u: PointSet) -> PointSet {
    maps.iter()
        .enumerate()
        .filter(|(_, f)| a.contains_set(preimage(f, u)))
        .map(|(i, _)| i)
        .collect()
}

/// Families containing the member `∅` are left out of the subbase.
pub fn function_space(x: &SpaceRef, y: &SpaceRef, alpha: &FamilyCollection) -> Result<FunctionSpace> {
    if !same_space(alpha.space(), x) {
        return Err(Error::SpaceMismatch);
    }
    let maps = continuous_maps(x, y)?;
    if maps.len() > MAX_POINTS {
        return Err(Error::TooManyPoints(maps.len(), MAX_POINTS));
    }
    let subbase: Vec<PointSet> = alpha
        .iter()
        .filter(|a| !a.contains_empty_set())
        .flat_map(|a| y.opens().iter().map(|&u| subbasic_set(&maps, a, u)).collect::<Vec<_>>())
        .collect();
    let topology = topology_from_subbase(maps.len(), &subbase)?;
    Ok(FunctionSpace {
        domain: x.clone(),
        codomain: y.clone(),
        maps,
        topology,
    })
}

/// The codomain `$*`.
pub fn sierpinski_star() -> SpaceRef {
    fixtures::sierpinski_star().into_ref()
}

/// For maps into `$*`: `f ↦` canonical open index of `f⁻({0})`.
pub fn star_identification(fs: &FunctionSpace) -> Option<PointMap> {
    let zero = PointSet::singleton(0);
    fs.maps
        .iter()
        .map(|f| fs.domain.open_index(preimage(f, zero)))
        .collect()
}

/// A bijection carrying opens exactly onto opens.
pub fn is_homeomorphism(t1: &FiniteSpace, t2: &FiniteSpace, f: &[usize]) -> bool {
    if t1.n() != t2.n() || f.len() != t1.n() || t1.num_opens() != t2.num_opens() {
        return false;
    }
    let image: PointSet = f.iter().copied().filter(|&y| y < t2.n()).collect();
    if image != t2.full() {
        return false;
    }
    t1.opens().iter().all(|u| {
        let img: PointSet = u.iter().map(|x| f[x]).collect();
        t2.open_index(img).is_some()
    })
}

/// Joint continuity of `(U, V) ↦ U ∩ V` on the topology generated by `α`.
///
/// A map between finite spaces is continuous iff it carries each point's
/// smallest neighbourhood into the smallest neighbourhood of the image, and
/// the smallest neighbourhood of `(U, V)` in the product is `N(U) × N(V)`.
pub fn meet_jointly_continuous(alpha: &FamilyCollection) -> bool {
    meet_discontinuity(alpha).is_none()
}

/// A pair of base opens at which `∩` is not continuous.
pub fn meet_discontinuity(alpha: &FamilyCollection) -> Option<(PointSet, PointSet)> {
    let hyper = generate_topology(alpha);
    let t = &hyper.topology;
    let lat = hyper.base.lattice().expect("lattice");
    let m = lat.len();
    for u in 0..m {
        for v in 0..m {
            let target = t.neighborhood(lat.meet(u, v));
            let ok = t.neighborhood(u).iter().all(|u2| {
                t.neighborhood(v)
                    .iter()
                    .all(|v2| target.contains(lat.meet(u2, v2)))
            });
            if !ok {
                return Some((hyper.carrier[u], hyper.carrier[v]));
            }
        }
    }
    None
}
