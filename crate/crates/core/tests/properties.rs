use proptest::prelude::*;

use fintopo::family::isotone_hull;
use fintopo::harness::random_space;
use fintopo::json::{parse_space, space_json};
use fintopo::space::{alexandrov_from_preorder, specialization_preorder};
use fintopo::{kappa_bounded, CompactnessMode, FiniteSpace, PointSet, Preorder, RestrictMode, SpaceRef};

/// Reflexive-transitive closure of a random relation on `n` points.
fn closed(n: usize, bits: &[bool]) -> Vec<Vec<bool>> {
    let mut leq: Vec<Vec<bool>> = (0..n)
        .map(|x| (0..n).map(|y| x == y || bits[x * n + y]).collect())
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    leq
}

fn preorder(max_n: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.3), n * n).prop_map(move |b| closed(n, &b))
    })
}

fn space_of(leq: &[Vec<bool>]) -> FiniteSpace {
    alexandrov_from_preorder(&Preorder::from_matrix(leq).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn alexandrov_round_trip(leq in preorder(6)) {
        let s = space_of(&leq);
        let p = specialization_preorder(&s);
        for (x, row) in leq.iter().enumerate() {
            for (y, &le) in row.iter().enumerate() {
                prop_assert_eq!(p.leq(x, y), le);
            }
        }
    }

    #[test]
    fn opens_are_up_sets(leq in preorder(5)) {
        let s = space_of(&leq);
        let n = leq.len();
        let up_sets: Vec<PointSet> = PointSet::all_subsets(n)
            .filter(|u| u.iter().all(|x| (0..n).all(|y| !leq[x][y] || u.contains(y))))
            .collect();
        let mut opens = s.opens().to_vec();
        opens.sort();
        let mut expected = up_sets;
        expected.sort();
        prop_assert_eq!(opens, expected);
    }

    #[test]
    fn interior_and_closure(leq in preorder(5), a in 0u64..32) {
        let s = space_of(&leq);
        let n = s.n();
        let a = PointSet(a).intersection(PointSet::full(n));
        let naive = s
            .opens()
            .iter()
            .filter(|u| u.is_subset(a))
            .fold(PointSet::EMPTY, |acc, &u| acc.union(u));
        prop_assert_eq!(s.interior(a), naive);
        let cl = s.closure(a);
        prop_assert!(a.is_subset(cl));
        prop_assert!(s.is_closed(cl));
        prop_assert!(s.closed_sets().filter(|c| a.is_subset(*c)).all(|c| cl.is_subset(c)));
    }

    #[test]
    fn regular_iff_symmetric(leq in preorder(5)) {
        let s = space_of(&leq);
        let n = leq.len();
        let symmetric = (0..n).all(|x| (0..n).all(|y| leq[x][y] == leq[y][x]));
        prop_assert_eq!(s.is_regular(), symmetric);
    }

    #[test]
    fn prime_counts_isolated(leq in preorder(5)) {
        let s = space_of(&leq);
        let n = leq.len();
        let isolated = (0..n).filter(|&x| (0..n).all(|y| y == x || !leq[x][y])).count();
        prop_assert_eq!(s.is_prime(), n - isolated <= 1);
    }

    #[test]
    fn grill_duality(leq in preorder(4), seeds in proptest::collection::vec(0u64..16, 0..4)) {
        let s: SpaceRef = space_of(&leq).into_ref();
        let n = s.n();
        let seeds: Vec<PointSet> = seeds.iter().map(|&b| PointSet(b).intersection(PointSet::full(n))).collect();
        let f = isotone_hull(&s, &seeds).unwrap();
        let grill = f.grill();
        for &u in s.opens() {
            prop_assert_eq!(f.contains_set(u), !grill.contains(&u.complement(n)));
        }
        for b in PointSet::all_subsets(n) {
            prop_assert_eq!(grill.contains(&b), f.member_sets().all(|m| !m.is_disjoint(b)));
        }
    }

    #[test]
    fn restriction_stays_compact(leq in preorder(4), seeds in proptest::collection::vec(0u64..16, 1..4)) {
        let s: SpaceRef = space_of(&leq).into_ref();
        let n = s.n();
        let seeds: Vec<PointSet> = seeds.iter().map(|&b| PointSet(b).intersection(PointSet::full(n))).collect();
        let f = isotone_hull(&s, &seeds).unwrap();
        prop_assert!(f.is_compact(CompactnessMode::ORACLE).unwrap());
        for a in f.member_sets() {
            let r = f.restrict(a, RestrictMode::Strict).unwrap();
            prop_assert!(r.is_subfamily_of(&f));
            prop_assert!(r.contains_set(a));
            prop_assert!(r.is_compact(CompactnessMode::ORACLE).unwrap());
            prop_assert!(r.member_sets().all(|u| f.member_sets().any(|b| b.is_subset(a.intersection(u)))));
        }
    }

    #[test]
    fn kappa_members_compact(leq in preorder(4)) {
        let s: SpaceRef = space_of(&leq).into_ref();
        for f in kappa_bounded(&s, 16).unwrap().iter() {
            prop_assert!(f.is_compact(CompactnessMode::ORACLE).unwrap());
        }
    }

    #[test]
    fn json_round_trip(leq in preorder(6)) {
        let s = space_of(&leq);
        let back = parse_space(&space_json(&s)).unwrap();
        prop_assert!(back.same_topology(&s));
    }

    #[test]
    fn random_space_is_reproducible(n in 1usize..8, seed in any::<u64>()) {
        let a = random_space(n, seed).unwrap();
        let b = random_space(n, seed).unwrap();
        prop_assert_eq!(a.opens(), b.opens());
        prop_assert_eq!(a.n(), n);
    }
}
