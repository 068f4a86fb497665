use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::collection::{
    augment_auxiliary, classify_canonical, AuxiliaryReading, Canonical,
    Condition, FamilyCollection, SplitContext, DEFAULT_ENUMERATION_BOUND,
};
use crate::engine::{SubcollectionIndex, MAX_UNIVERSE};
use crate::error::{Error, Result};
use crate::family::{CompactnessMode, OpenFamily, RestrictMode, DEFAULT_ORACLE_BOUND};
use crate::hyperspace::{
    compare_topologies, function_space, generate_topology, is_homeomorphism,
    meet_discontinuity, sierpinski_star, star_identification, Comparison,
};
use crate::json::{set_json, space_json};
use crate::measure::{gamma_mu, rational, verify_selfjoin, verify_selfsplit, PointMeasure, Rational};
use crate::space::SpaceRef;

/// A registered claim: stable id and what it asserts.
#[derive(Clone, Copy, Debug)]
pub struct Claim {
    pub id: &'static str,
    pub statement: &'static str,
}

macro_rules! claims {
    ($($id:literal => $text:literal,)*) => {
        pub const CLAIMS: &[Claim] = &[$(Claim { id: $id, statement: $text },)*];
    };
}

claims! {
    "kappa-compact" => "every family in κ passes the literal finite-subfamily compactness test",
    "grill-duality" => "for every F in κ and open U: U ∈ F iff X∖U is not in the grill of F",
    "restrict-compact" => "F↓A is a compact subfamily of F containing A, for F in κ and A ∈ F",
    "section-compact" => "F∨C is compact for every F in κ and closed C in the grill of F",
    "kappa-hereditary" => "κ is hereditary",
    "kappa-sectionable" => "κ is sectionable",
    "p-equals-k" => "p and k coincide",
    "inclusion-chain" => "k ⊆ Λ↓ ⊆ Λ ⊆ κ and Λ↓ ⊆ Σ ⊆ κ",
    "finite-collapse" => "κ = Λ = Λ↓ = Σ",
    "gfp-maximal" => "Λ, Λ↓ and Σ are the largest subcollections of κ with their self- property",
    "gfp-order-independent" => "removing failing families one at a time in shuffled order reaches the same Λ, Λ↓, Σ",
    "lambda-down-hereditary" => "Λ↓ is hereditary and self-joinable",
    "consonant" => "the topologies generated by k and κ are equal",
    "infraconsonant" => "κ is self-joinable",
    "compactly-splittable" => "every family in κ is κ-splittable",
    "prime-splittable" => "a prime space is compactly splittable",
    "regular-split" => "on a regular space every self-joinable, hereditary, sectionable subcollection of κ is self-splittable",
    "k-self-splittable" => "on a regular space k is self-splittable",
    "meet-continuity" => "∩ is jointly continuous for the κ topology exactly when κ is self-joinable, and both hold",
    "function-space" => "C_α(X,$*) is homeomorphic to the α topology on the opens via f ↦ f⁻¹(0), for α = p, k, κ",
    "subbase-meet" => "[F,U] ∩ [G,U] = [F∩G, U] for F, G in κ",
    "level-compact" => "every level family M_r is compact",
    "tau-additive" => "every trial measure is τ-additive",
    "lemma-selfjoin" => "(M_m↓U)∨(M_m↓U) ⊆ M_r↓U with m = (r+μ(U))/2 for μ(U) > r > 0",
    "lemma-selfsplit" => "(M_m₁↓U₁) ∩ (M_m₂↓U₂) ⊆ M_r whenever U₁∪U₂ ∈ M_r and d > 0",
    "gamma-hereditarily-self-joinable" => "γ_μ is hereditary and hereditarily self-joinable",
    "gamma-self-splittable" => "γ_μ is self-splittable",
}

/// Number of built-in trial measures per space.
pub const DEFAULT_MEASURE_TRIALS: usize = 3;

#[derive(Clone, Debug)]
pub struct BatteryOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Record wall-clock milliseconds per claim; otherwise `ms` is 0.
    pub timing: bool,
    /// Enumeration bound on `|O_X|` for κ.
    pub bound: usize,
    /// Largest `|κ|` for brute force over all subcollections.
    pub brute_force_limit: usize,
    /// Largest `|κ|` for the exhaustive subcollection battery.
    pub exhaustive_limit: usize,
    /// Sampled subcollections when κ is larger than `exhaustive_limit`.
    pub samples: usize,
    pub seed: u64,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions {
            threads: None,
            timing: false,
            bound: DEFAULT_ENUMERATION_BOUND,
            brute_force_limit: 20,
            exhaustive_limit: 20,
            samples: 256,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimVerdict {
    pub id: &'static str,
    /// `None` when the claim could not be evaluated.
    pub pass: Option<bool>,
    pub witness: Option<Value>,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimReport {
    pub space: Value,
    pub claims: Vec<ClaimVerdict>,
    pub notes: Vec<String>,
}

impl ClaimReport {
    pub fn all_pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass != Some(false))
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimVerdict> {
        self.claims.iter().filter(|c| c.pass == Some(false))
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimVerdict> {
        self.claims.iter().find(|c| c.id == id)
    }
}

enum Outcome {
    Pass,
    Fail(Value),
    /// Hypothesis does not hold on this space.
    Vacuous(String),
    Skipped(String),
}

impl From<Result<Outcome>> for Outcome {
    fn from(r: Result<Outcome>) -> Outcome {
        r.unwrap_or_else(|e| Outcome::Skipped(e.to_string()))
    }
}

fn check(ok: bool, witness: impl FnOnce() -> Value) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(witness())
    }
}

fn first_failure<T>(items: impl IntoIterator<Item = T>, fail: impl FnMut(&T) -> Option<Value>) -> Outcome {
    match items.into_iter().find_map({
        let mut fail = fail;
        move |t| fail(&t)
    }) {
        Some(w) => Outcome::Fail(w),
        None => Outcome::Pass,
    }
}

fn fam(f: &OpenFamily) -> Value {
    let s = f.space();
    Value::Array(f.minimal_sets().map(|u| set_json(s, u)).collect())
}

fn coll(c: &FamilyCollection) -> Value {
    Value::Array(c.iter().map(fam).collect())
}

fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

fn measure_weights(mu: &PointMeasure) -> Value {
    Value::Array(mu.weights().iter().map(rat).collect())
}

/// Weights `2^i`, all ones, and `i mod 3` (which has zero weights).
fn trial_measures(s: &SpaceRef) -> Result<Vec<PointMeasure>> {
    let n = s.n();
    let powers: Vec<i64> = (0..n).map(|i| 1i64 << i.min(40)).collect();
    let ones = vec![1; n];
    let cyclic: Vec<i64> = (0..n as i64).map(|i| i % 3).collect();
    [powers, ones, cyclic]
        .iter()
        .map(|w| PointMeasure::from_integers(s.clone(), w))
        .collect()
}

/// Representative thresholds together with the quarter-step grid below `μ(X)`.
fn threshold_grid(mu: &PointMeasure) -> Vec<Rational> {
    let mut grid = mu.representative_thresholds();
    let quarter = rational(1, 4);
    let mut r = quarter.clone();
    while r < mu.total() {
        grid.push(r.clone());
        r += &quarter;
    }
    grid.sort();
    grid.dedup();
    grid
}

struct Ctx<'a> {
    s: &'a SpaceRef,
    canon: &'a Canonical,
    index: Option<SubcollectionIndex<'a>>,
    options: &'a BatteryOptions,
    measures: Vec<PointMeasure>,
}

impl Ctx<'_> {
    fn kappa(&self) -> &FamilyCollection {
        &self.canon.kappa
    }

    fn too_big(&self, what: &str, limit: usize) -> Outcome {
        Outcome::Skipped(format!(
            "κ has {} families, {what} needs at most {limit}",
            self.kappa().len()
        ))
    }
}

fn kappa_compact(c: &Ctx) -> Outcome {
    if c.s.num_opens() > DEFAULT_ORACLE_BOUND {
        return Outcome::Skipped(
            Error::OracleTooLarge(c.s.num_opens(), DEFAULT_ORACLE_BOUND).to_string(),
        );
    }
    Outcome::from((|| {
        for f in c.kappa() {
            if !f.is_compact(CompactnessMode::ORACLE)? {
                return Ok(Outcome::Fail(fam(f)));
            }
        }
        Ok(Outcome::Pass)
    })())
}

fn grill_duality(c: &Ctx) -> Outcome {
    let s = c.s;
    first_failure(c.kappa(), |f| {
        s.opens()
            .iter()
            .find(|&&u| f.contains_set(u) == f.in_grill(u.complement(s.n())))
            .map(|&u| json!({"family": fam(f), "open": set_json(s, u)}))
    })
}

fn restrict_compact(c: &Ctx) -> Outcome {
    let oracle = c.s.num_opens() <= DEFAULT_ORACLE_BOUND;
    Outcome::from((|| {
        for f in c.kappa() {
            for a in f.member_sets() {
                let r = f.restrict(a, RestrictMode::Strict)?;
                let compact = !oracle || r.is_compact(CompactnessMode::ORACLE)?;
                if !(compact && r.is_subfamily_of(f) && r.contains_set(a)) {
                    return Ok(Outcome::Fail(json!({"family": fam(f), "member": set_json(c.s, a)})));
                }
            }
        }
        Ok(Outcome::Pass)
    })())
}

fn section_compact(c: &Ctx) -> Outcome {
    let oracle = c.s.num_opens() <= DEFAULT_ORACLE_BOUND;
    Outcome::from((|| {
        for f in c.kappa() {
            for cl in c.s.closed_sets().filter(|&cl| f.in_grill(cl)) {
                let sec = f.section(cl)?;
                if oracle && !sec.is_compact(CompactnessMode::ORACLE)? {
                    return Ok(Outcome::Fail(json!({"family": fam(f), "closed": set_json(c.s, cl)})));
                }
            }
        }
        Ok(Outcome::Pass)
    })())
}

fn inclusion_chain(c: &Ctx) -> Outcome {
    let k = &c.canon;
    let pairs = [
        ("k", &k.k, "lambda_down", &k.lambda_down),
        ("lambda_down", &k.lambda_down, "lambda", &k.lambda),
        ("lambda", &k.lambda, "kappa", &k.kappa),
        ("lambda_down", &k.lambda_down, "sigma", &k.sigma),
        ("sigma", &k.sigma, "kappa", &k.kappa),
    ];
    first_failure(pairs, |(a, ca, b, cb)| {
        ca.iter()
            .find(|f| !cb.contains(f))
            .map(|f| json!({"subset": a, "superset": b, "family": fam(f)}))
    })
}

fn finite_collapse(c: &Ctx) -> Outcome {
    let k = &c.canon;
    first_failure(
        [("lambda", &k.lambda), ("lambda_down", &k.lambda_down), ("sigma", &k.sigma)],
        |(name, col)| {
            k.kappa
                .iter()
                .find(|f| !col.contains(f))
                .map(|f| json!({"collection": name, "missing": fam(f)}))
        },
    )
}

const CONDITIONS: [(Condition, &str); 3] = [
    (Condition::Joinable, "lambda"),
    (Condition::HereditarilyJoinable, "lambda_down"),
    (Condition::Splittable, "sigma"),
];

fn gfp_maximal(c: &Ctx) -> Outcome {
    let Some(idx) = c.index.as_ref().filter(|i| i.len() <= c.options.brute_force_limit) else {
        return c.too_big("brute force", c.options.brute_force_limit);
    };
    let mut best = [0u64; 3];
    for mask in 0..=idx.all() {
        for (slot, (cond, _)) in best.iter_mut().zip(CONDITIONS) {
            if idx.satisfies(mask, cond) {
                *slot |= mask;
            }
        }
    }
    first_failure(CONDITIONS.iter().zip(best), |&((cond, name), max)| {
        let computed = c.canon.by_name(name).expect("name");
        (!idx.satisfies(max, *cond) || idx.collection(max) != *computed).then(|| {
            json!({"collection": name, "brute_force": coll(&idx.collection(max)), "gfp": coll(computed)})
        })
    })
}

fn gfp_order_independent(c: &Ctx) -> Outcome {
    let Some(idx) = c.index.as_ref() else {
        return c.too_big("the mask engine", MAX_UNIVERSE);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(c.options.seed ^ 0x5eed);
    let mut order: Vec<usize> = (0..idx.len()).collect();
    for trial in 0..4 {
        order.shuffle(&mut rng);
        for (cond, name) in CONDITIONS {
            let mut cur = idx.all();
            loop {
                let drop = order
                    .iter()
                    .copied()
                    .find(|&i| cur >> i & 1 == 1 && !idx.member_satisfies(i, cur, cond));
                match drop {
                    Some(i) => cur &= !(1u64 << i),
                    None => break,
                }
            }
            let computed = c.canon.by_name(name).expect("name");
            if idx.collection(cur) != *computed {
                return Outcome::Fail(json!({"collection": name, "trial": trial, "sequential": coll(&idx.collection(cur))}));
            }
        }
    }
    Outcome::Pass
}

fn lambda_down_hereditary(c: &Ctx) -> Outcome {
    let l = &c.canon.lambda_down;
    check(l.is_hereditary() && l.is_self_joinable(true), || coll(l))
}

fn consonant(c: &Ctx) -> Outcome {
    let tk = generate_topology(&c.canon.k);
    let tkappa = generate_topology(&c.canon.kappa);
    Outcome::from(compare_topologies(&tk.topology, &tkappa.topology).map(|cmp| {
        check(cmp.comparison == Comparison::Equal, || {
            let w = cmp.witness.expect("non-equal has witness");
            json!({"comparison": cmp.comparison, "witness": w.iter().map(|i| set_json(c.s, tk.carrier[i])).collect::<Vec<_>>()})
        })
    }))
}

fn infraconsonant(c: &Ctx) -> Outcome {
    let k = c.kappa();
    first_failure(k, |f| (!crate::collection::is_joinable_rel(f, k, false)).then(|| fam(f)))
}

fn split_failure_in(alpha: &FamilyCollection, ctx: &SplitContext, s: &SpaceRef) -> Option<Value> {
    alpha.iter().find_map(|f| {
        ctx.failure(f)
            .map(|(u1, u2)| json!({"family": fam(f), "u1": set_json(s, u1), "u2": set_json(s, u2)}))
    })
}

fn compactly_splittable(c: &Ctx) -> Outcome {
    let ctx = SplitContext::new(c.kappa());
    match split_failure_in(c.kappa(), &ctx, c.s) {
        Some(w) => Outcome::Fail(w),
        None => Outcome::Pass,
    }
}

fn prime_splittable(c: &Ctx) -> Outcome {
    if !c.s.is_prime() {
        return Outcome::Vacuous("space is not prime".into());
    }
    compactly_splittable(c)
}

/// Smallest hereditary and sectionable collection containing `seeds`.
fn hereditary_sectionable_closure(seeds: Vec<OpenFamily>, s: &SpaceRef) -> Result<FamilyCollection> {
    let mut cur = FamilyCollection::new(s.clone(), seeds)?;
    loop {
        let mut more: Vec<OpenFamily> = cur.families().to_vec();
        for f in cur.iter() {
            for a in f.member_sets() {
                more.push(f.restrict(a, RestrictMode::Strict)?);
            }
            for cl in s.closed_sets().filter(|&cl| f.in_grill(cl)) {
                more.push(f.section(cl)?);
            }
        }
        let next = FamilyCollection::new(s.clone(), more)?;
        if next.len() == cur.len() {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Runs `f` on each subcollection of κ that is self-joinable, hereditary
/// and sectionable: all of them when κ is small, sampled otherwise.
fn for_each_good_subcollection(
    c: &Ctx,
    mut f: impl FnMut(&FamilyCollection) -> Option<Value>,
) -> Result<(Option<Value>, usize, bool)> {
    let kap = c.kappa();
    let mut count = 0;
    if let Some(idx) = c.index.as_ref().filter(|i| i.len() <= c.options.exhaustive_limit) {
        for mask in 0..=idx.all() {
            if idx.hereditary(mask) && idx.sectionable(mask) && idx.self_joinable(mask) {
                count += 1;
                if let Some(w) = f(&idx.collection(mask)) {
                    return Ok((Some(w), count, true));
                }
            }
        }
        return Ok((None, count, true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(c.options.seed);
    for _ in 0..c.options.samples {
        let k = rng.gen_range(1..=3);
        let seeds = (0..k)
            .map(|_| kap.families()[rng.gen_range(0..kap.len())].clone())
            .collect();
        let alpha = hereditary_sectionable_closure(seeds, c.s)?;
        if alpha.is_self_joinable(false) {
            count += 1;
            if let Some(w) = f(&alpha) {
                return Ok((Some(w), count, false));
            }
        }
    }
    Ok((None, count, false))
}

fn regular_split(c: &Ctx) -> Outcome {
    if !c.s.is_regular() {
        return Outcome::Vacuous("space is not regular".into());
    }
    Outcome::from(for_each_good_subcollection(c, |alpha| {
        let ctx = SplitContext::new(alpha);
        split_failure_in(alpha, &ctx, c.s).map(|w| json!({"collection": coll(alpha), "failure": w}))
    })
    .map(|(w, _, _)| match w {
        Some(w) => Outcome::Fail(w),
        None => Outcome::Pass,
    }))
}

fn k_self_splittable(c: &Ctx) -> Outcome {
    if !c.s.is_regular() {
        return Outcome::Vacuous("space is not regular".into());
    }
    let ctx = SplitContext::new(&c.canon.k);
    match split_failure_in(&c.canon.k, &ctx, c.s) {
        Some(w) => Outcome::Fail(w),
        None => Outcome::Pass,
    }
}

fn meet_continuity(c: &Ctx) -> Outcome {
    let disc = meet_discontinuity(c.kappa());
    let joinable = c.kappa().is_self_joinable(false);
    check(disc.is_none() && joinable, || {
        json!({
            "self_joinable": joinable,
            "discontinuity": disc.map(|(u, v)| vec![set_json(c.s, u), set_json(c.s, v)]),
        })
    })
}

fn function_space_claim(c: &Ctx) -> Outcome {
    let star = sierpinski_star();
    Outcome::from((|| {
        for name in ["p", "k", "kappa"] {
            let alpha = c.canon.by_name(name).expect("name");
            let fs = function_space(c.s, &star, alpha)?;
            let hyper = generate_topology(alpha);
            let ok = star_identification(&fs)
                .is_some_and(|f| is_homeomorphism(&fs.topology, &hyper.topology, &f));
            if !ok {
                return Ok(Outcome::Fail(json!({"collection": name})));
            }
        }
        Ok(Outcome::Pass)
    })())
}

fn subbase_meet(c: &Ctx) -> Outcome {
    let star = sierpinski_star();
    Outcome::from((|| {
        let fs = function_space(c.s, &star, c.kappa())?;
        let kap = c.kappa().families();
        for (i, f) in kap.iter().enumerate() {
            for g in &kap[i..] {
                let fg = f.intersection(g)?;
                for &u in star.opens() {
                    let lhs = fs.subbasic(f, u).intersection(fs.subbasic(g, u));
                    if lhs != fs.subbasic(&fg, u) {
                        return Ok(Outcome::Fail(json!({"f": fam(f), "g": fam(g), "u": set_json(&star, u)})));
                    }
                }
            }
        }
        Ok(Outcome::Pass)
    })())
}

fn level_compact(c: &Ctx) -> Outcome {
    if c.s.num_opens() > DEFAULT_ORACLE_BOUND {
        return Outcome::Skipped(
            Error::OracleTooLarge(c.s.num_opens(), DEFAULT_ORACLE_BOUND).to_string(),
        );
    }
    Outcome::from((|| {
        for mu in &c.measures {
            for r in threshold_grid(mu) {
                if !mu.level_family(&r).is_compact(CompactnessMode::ORACLE)? {
                    return Ok(Outcome::Fail(json!({"weights": measure_weights(mu), "r": rat(&r)})));
                }
            }
        }
        Ok(Outcome::Pass)
    })())
}

fn tau_additive(c: &Ctx) -> Outcome {
    first_failure(&c.measures, |mu| (!mu.is_tau_additive()).then(|| measure_weights(mu)))
}

fn lemma_selfjoin(c: &Ctx) -> Outcome {
    Outcome::from((|| {
        for mu in &c.measures {
            for r in threshold_grid(mu) {
                for &u in c.s.opens() {
                    if mu.measure_of(u) <= r {
                        continue;
                    }
                    let chk = verify_selfjoin(mu, u, &r)?;
                    if !chk.pass {
                        return Ok(Outcome::Fail(json!({
                            "weights": measure_weights(mu), "u": set_json(c.s, u), "r": rat(&r),
                            "violation": chk.violation.map(|(a, b)| vec![set_json(c.s, a), set_json(c.s, b)]),
                        })));
                    }
                }
            }
        }
        Ok(Outcome::Pass)
    })())
}

fn lemma_selfsplit(c: &Ctx) -> Outcome {
    Outcome::from((|| {
        for mu in &c.measures {
            for r in threshold_grid(mu) {
                for &u1 in c.s.opens() {
                    for &u2 in c.s.opens() {
                        let d_ok = mu.measure_of(u1) > Rational::from_integer(0.into())
                            && mu.measure_of(u2) > Rational::from_integer(0.into());
                        if !d_ok || mu.measure_of(u1.union(u2)) <= r {
                            continue;
                        }
                        let chk = verify_selfsplit(mu, u1, u2, &r)?;
                        if !chk.pass {
                            return Ok(Outcome::Fail(json!({
                                "weights": measure_weights(mu), "u1": set_json(c.s, u1),
                                "u2": set_json(c.s, u2), "r": rat(&r),
                                "violation": chk.violation.map(|v| set_json(c.s, v)),
                            })));
                        }
                    }
                }
            }
        }
        Ok(Outcome::Pass)
    })())
}

fn gamma_joinable(c: &Ctx) -> Outcome {
    first_failure(&c.measures, |mu| {
        let g = gamma_mu(mu);
        (!(g.is_hereditary() && g.is_self_joinable(true))).then(|| measure_weights(mu))
    })
}

fn gamma_splittable(c: &Ctx) -> Outcome {
    first_failure(&c.measures, |mu| {
        let g = gamma_mu(mu);
        let ctx = SplitContext::new(&g);
        split_failure_in(&g, &ctx, c.s).map(|w| json!({"weights": measure_weights(mu), "failure": w}))
    })
}

type ClaimFn = fn(&Ctx) -> Outcome;

fn claim_fn(id: &str) -> ClaimFn {
    match id {
        "kappa-compact" => kappa_compact,
        "grill-duality" => grill_duality,
        "restrict-compact" => restrict_compact,
        "section-compact" => section_compact,
        "kappa-hereditary" => |c| check(c.kappa().is_hereditary(), || Value::Null),
        "kappa-sectionable" => |c| check(c.kappa().is_sectionable(), || Value::Null),
        "p-equals-k" => |c| check(c.canon.p == c.canon.k, || coll(&c.canon.p)),
        "inclusion-chain" => inclusion_chain,
        "finite-collapse" => finite_collapse,
        "gfp-maximal" => gfp_maximal,
        "gfp-order-independent" => gfp_order_independent,
        "lambda-down-hereditary" => lambda_down_hereditary,
        "consonant" => consonant,
        "infraconsonant" => infraconsonant,
        "compactly-splittable" => compactly_splittable,
        "prime-splittable" => prime_splittable,
        "regular-split" => regular_split,
        "k-self-splittable" => k_self_splittable,
        "meet-continuity" => meet_continuity,
        "function-space" => function_space_claim,
        "subbase-meet" => subbase_meet,
        "level-compact" => level_compact,
        "tau-additive" => tau_additive,
        "lemma-selfjoin" => lemma_selfjoin,
        "lemma-selfsplit" => lemma_selfsplit,
        "gamma-hereditarily-self-joinable" => gamma_joinable,
        "gamma-self-splittable" => gamma_splittable,
        other => unreachable!("unregistered claim {other}"),
    }
}

fn auxiliary_note(c: &Ctx) -> Option<String> {
    if !c.s.is_regular() {
        return None;
    }
    let mut kept = [0usize; 2];
    let mut split = [0usize; 2];
    let result = for_each_good_subcollection(c, |alpha| {
        for (i, reading) in AuxiliaryReading::ALL.into_iter().enumerate() {
            let a1 = augment_auxiliary(alpha, reading);
            if a1.is_hereditary() && a1.is_sectionable() && a1.is_self_joinable(false) {
                kept[i] += 1;
            }
            if a1.is_self_splittable() {
                split[i] += 1;
            }
        }
        None
    });
    let (_, total, exhaustive) = result.ok()?;
    let scope = if exhaustive { "all" } else { "sampled" };
    let verdict = if kept == split && kept[0] == kept[1] { "no divergence" } else { "readings diverge" };
    Some(format!(
        "auxiliary family over {total} {scope} self-joinable hereditary sectionable subcollections: \
         with O(∅) adjoined {} keep the three properties and {} are self-splittable; \
         with {{X}} adjoined {} and {}; {verdict}",
        kept[0], split[0], kept[1], split[1]
    ))
}

fn cap_stability_note(c: &Ctx) -> Option<String> {
    let idx = c.index.as_ref().filter(|i| i.len() <= c.options.brute_force_limit)?;
    let mut divergent = None;
    let mut count = 0usize;
    for mask in 0..=idx.all() {
        let closed = idx.intersection_closure(mask)?;
        if idx.self_joinable(mask) != idx.self_joinable(closed) {
            count += 1;
            divergent.get_or_insert(mask);
        }
    }
    Some(match divergent {
        None => format!(
            "intersection closure: self-joinability of α and α^∩ agree on all {} subcollections of κ",
            idx.all().wrapping_add(1)
        ),
        Some(m) => format!(
            "intersection closure: self-joinability of α and α^∩ differ on {count} subcollections, first {}",
            coll(&idx.collection(m))
        ),
    })
}

fn meet_versus_joinable_note(c: &Ctx) -> Option<String> {
    let idx = c.index.as_ref().filter(|i| i.len() <= 12)?;
    let mut diverge = 0usize;
    let mut first = None;
    for mask in 0..=idx.all() {
        let alpha = idx.collection(mask);
        if meet_discontinuity(&alpha).is_none() != idx.self_joinable(mask) {
            diverge += 1;
            first.get_or_insert(mask);
        }
    }
    Some(match first {
        None => "meet continuity and self-joinability agree on every subcollection of κ".into(),
        Some(m) => format!(
            "meet continuity and self-joinability differ on {diverge} subcollections of κ, first {}",
            coll(&idx.collection(m))
        ),
    })
}

fn gamma_notes(c: &Ctx) -> Vec<String> {
    let mut notes = Vec::new();
    let non_sectionable = c.measures.iter().find(|mu| !gamma_mu(mu).is_sectionable());
    notes.push(match non_sectionable {
        Some(mu) => format!("γ_μ is not sectionable for weights {}", measure_weights(mu)),
        None => "γ_μ is sectionable for every trial measure".into(),
    });
    notes
}

fn evaluate(c: &Ctx, id: &'static str, timing: bool) -> ClaimVerdict {
    let start = Instant::now();
    let outcome = claim_fn(id)(c);
    let ms = if timing { start.elapsed().as_millis() as u64 } else { 0 };
    let (pass, witness, detail) = match outcome {
        Outcome::Pass => (Some(true), None, None),
        Outcome::Fail(w) => (Some(false), Some(w), None),
        Outcome::Vacuous(why) => (Some(true), None, Some(format!("vacuous: {why}"))),
        Outcome::Skipped(why) => (None, None, Some(format!("skipped: {why}"))),
    };
    ClaimVerdict {
        id,
        pass,
        witness,
        ms,
        detail,
    }
}

fn battery_inner(s: &SpaceRef, options: &BatteryOptions) -> ClaimReport {
    let canon = match Canonical::compute(s, options.bound) {
        Ok(c) => c,
        Err(e) => {
            let reason = format!("skipped: {e}");
            return ClaimReport {
                space: space_json(s),
                claims: CLAIMS
                    .iter()
                    .map(|c| ClaimVerdict {
                        id: c.id,
                        pass: None,
                        witness: None,
                        ms: 0,
                        detail: Some(reason.clone()),
                    })
                    .collect(),
                notes: Vec::new(),
            };
        }
    };
    let ctx = Ctx {
        s,
        canon: &canon,
        index: SubcollectionIndex::new(&canon.kappa).ok(),
        options,
        measures: trial_measures(s).unwrap_or_default(),
    };
    let claims = CLAIMS
        .par_iter()
        .map(|claim| evaluate(&ctx, claim.id, options.timing))
        .collect();
    let mut notes: Vec<String> = [auxiliary_note(&ctx), cap_stability_note(&ctx), meet_versus_joinable_note(&ctx)]
        .into_iter()
        .flatten()
        .collect();
    notes.extend(gamma_notes(&ctx));
    let class = classify_canonical(&canon);
    notes.push(format!(
        "classification: consonant {}, infraconsonant {}, compactly splittable {}, inclusions {}",
        class.consonant, class.infraconsonant, class.compactly_splittable, class.inclusions_ok
    ));
    ClaimReport {
        space: space_json(s),
        claims,
        notes,
    }
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        None => f(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .expect("thread pool")
            .install(f),
    }
}

/// One verdict per registered claim, in registry order.
pub fn run_battery(s: &SpaceRef, options: &BatteryOptions) -> ClaimReport {
    with_pool(options.threads, || battery_inner(s, options))
}

/// Batteries for many spaces, in input order.
pub fn run_batteries(spaces: &[SpaceRef], options: &BatteryOptions) -> Vec<ClaimReport> {
    with_pool(options.threads, || {
        spaces.par_iter().map(|s| battery_inner(s, options)).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::fixtures::*;

    fn failing(report: &ClaimReport) -> Vec<&str> {
        report.failures().map(|c| c.id).collect()
    }

    #[test]
    fn registry_ids_are_unique() {
        for (i, c) in CLAIMS.iter().enumerate() {
            assert!(CLAIMS[..i].iter().all(|d| d.id != c.id));
            claim_fn(c.id);
        }
    }

    #[test]
    fn s2_fails_only_the_literal_gamma_split() {
        let report = run_battery(&s2().into_ref(), &BatteryOptions::default());
        assert_eq!(report.claims.len(), CLAIMS.len());
        assert!(report.claims.iter().all(|c| c.pass.is_some()));
        assert_eq!(failing(&report), ["gamma-self-splittable"]);
        let w = &report.claim("gamma-self-splittable").unwrap().witness.as_ref().unwrap()["failure"];
        assert_eq!(w["u1"], json!([]));
    }

    #[test]
    fn p3_and_q4() {
        let report = run_battery(&p3().into_ref(), &BatteryOptions::default());
        assert_eq!(report.claim("prime-splittable").unwrap().pass, Some(true));
        assert_eq!(report.claim("prime-splittable").unwrap().detail, None);
        assert_eq!(report.claim("compactly-splittable").unwrap().pass, Some(true));
        let report = run_battery(&q4().into_ref(), &BatteryOptions::default());
        let regular_split = report.claim("regular-split").unwrap();
        assert_eq!(regular_split.pass, Some(false));
        let w = regular_split.witness.as_ref().unwrap();
        assert_eq!(w["collection"], json!([[["1", "2"]]]));
        assert_eq!(w["failure"]["u1"], json!([]));
        assert_eq!(failing(&report), ["regular-split", "gamma-self-splittable"]);
        let aux = report.notes.iter().find(|n| n.starts_with("auxiliary")).unwrap();
        assert!(aux.contains("readings diverge"), "{aux}");
    }

    #[test]
    fn reports_do_not_depend_on_threads() {
        let s = d3().into_ref();
        let one = run_battery(&s, &BatteryOptions { threads: Some(1), ..Default::default() });
        let four = run_battery(&s, &BatteryOptions { threads: Some(4), ..Default::default() });
        assert_eq!(serde_json::to_string(&one).unwrap(), serde_json::to_string(&four).unwrap());
    }

    #[test]
    fn oversized_spaces_skip_with_reason() {
        let s = discrete(4).into_ref();
        let report = run_battery(&s, &BatteryOptions::default());
        assert!(report.claims.iter().all(|c| c.pass.is_none()));
        assert!(report.claims[0].detail.as_ref().unwrap().contains("16"));
    }
}
