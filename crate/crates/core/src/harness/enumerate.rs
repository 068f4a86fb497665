use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{alexandrov_from_preorder, FiniteSpace, Preorder};

pub const MAX_EXHAUSTIVE_POINTS: usize = 4;

fn transitive(up: &[PointSet]) -> bool {
    (0..up.len()).all(|x| up[x].iter().all(|y| up[y].is_subset(up[x])))
}

/// Preorders on `n` points, identified by their off-diagonal pairs.
fn preorders(n: usize) -> Vec<Vec<PointSet>> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    (0u64..1 << pairs.len())
        .filter_map(|mask| {
            let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
            for (b, &(x, y)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    up[x] = up[x].with(y);
                }
            }
            transitive(&up).then_some(up)
        })
        .collect()
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == perm.len() {
            out.push(perm.clone());
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, out);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, &mut out);
    out
}

/// Smallest encoding of the preorder over all relabelings.
fn canonical_form(p: &Preorder, perms: &[Vec<usize>]) -> Vec<u64> {
    perms
        .iter()
        .map(|sigma| p.permuted(sigma).up_sets().iter().map(|s| s.bits()).collect::<Vec<_>>())
        .min()
        .expect("at least the identity")
}

/// Every topology on `n ≤ 4` labeled points, optionally one per
/// homeomorphism class.
pub fn enumerate_preorders(n: usize, up_to_iso: bool) -> Result<Vec<FiniteSpace>> {
    if n > MAX_EXHAUSTIVE_POINTS {
        return Err(Error::TooLarge(n, MAX_EXHAUSTIVE_POINTS));
    }
    let perms = all_permutations(n);
    let mut seen = std::collections::HashSet::new();
    preorders(n)
        .into_iter()
        .map(|up| Preorder::from_up_sets(up).expect("checked transitive"))
        .filter(|p| !up_to_iso || seen.insert(canonical_form(p, &perms)))
        .map(|p| alexandrov_from_preorder(&p))
        .collect()
}

/// A reproducible random topology: each ordered pair is related with a
/// seed-chosen density, then the relation is closed transitively.
pub fn random_space(n: usize, seed: u64) -> Result<FiniteSpace> {
    if n > crate::pointset::MAX_POINTS {
        return Err(Error::TooManyPoints(n, crate::pointset::MAX_POINTS));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density: f64 = rng.gen_range(0.05..0.6);
    let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
    for (x, row) in up.iter_mut().enumerate() {
        for y in 0..n {
            if y != x && rng.gen_bool(density) {
                *row = row.with(y);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if up[i].contains(k) {
                up[i] = up[i].union(up[k]);
            }
        }
    }
    alexandrov_from_preorder(&Preorder::from_up_sets(up)?)
}
