use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::enumerate::{enumerate_preorders, random_space};
use crate::collection::{
    augment_auxiliary, classify_canonical, intersection_closure, AuxiliaryReading, Canonical,
    FamilyCollection, SpaceClassification, COLLECTION_NAMES, DEFAULT_ENUMERATION_BOUND,
};
use crate::engine::SubcollectionIndex;
use crate::error::{Error, Result};
use crate::hyperspace::meet_jointly_continuous;
use crate::json::{parse_family, parse_space, set_json, space_json};
use crate::space::{FiniteSpace, SpaceRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Space,
    Collection,
}

#[derive(Clone, Copy, Debug)]
pub struct PredicateInfo {
    pub name: &'static str,
    pub level: Level,
    pub description: &'static str,
}

const fn space(name: &'static str, description: &'static str) -> PredicateInfo {
    PredicateInfo { name, level: Level::Space, description }
}

const fn coll(name: &'static str, description: &'static str) -> PredicateInfo {
    PredicateInfo { name, level: Level::Collection, description }
}

/// Named predicates usable in search expressions. Collection-level ones
/// refer to the candidate subcollection `alpha` of κ.
pub const PREDICATES: &[PredicateInfo] = &[
    space("regular", "every point and closed set not containing it have disjoint neighbourhoods"),
    space("prime", "at most one non-isolated point"),
    space("discrete", "every subset is open"),
    space("indiscrete", "only ∅ and X are open"),
    space("t0", "distinct points have distinct neighbourhood filters"),
    space("consonant", "k and κ generate the same topology"),
    space("infraconsonant", "κ is self-joinable"),
    space("compactly_splittable", "every compact family is κ-splittable"),
    space("inclusions_ok", "k ⊆ Λ↓ ⊆ Λ ⊆ κ and Λ↓ ⊆ Σ ⊆ κ"),
    space("kappa_meet_continuous", "∩ is jointly continuous for the κ topology"),
    coll("nonempty", "alpha has at least one family"),
    coll("hereditary", "alpha is closed under restriction"),
    coll("sectionable", "alpha is closed under sections"),
    coll("self_joinable", "every family of alpha is alpha-joinable"),
    coll("hereditarily_self_joinable", "every family of alpha is hereditarily alpha-joinable"),
    coll("self_splittable", "every family of alpha is alpha-splittable"),
    coll("intersection_closed", "alpha is closed under pairwise intersection"),
    coll("meet_continuous", "∩ is jointly continuous for the alpha topology"),
    coll("cap_self_joinable", "the intersection closure of alpha is self-joinable"),
    coll("aux_full_sound", "alpha with O(∅) adjoined is hereditary, sectionable and self-joinable"),
    coll("aux_top_sound", "alpha with {X} adjoined is hereditary, sectionable and self-joinable"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CollectionRef {
    /// Index into [`COLLECTION_NAMES`].
    Named(usize),
    Alpha,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Pred(usize),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Equal(CollectionRef, CollectionRef),
}

impl Expr {
    fn uses_alpha(&self) -> bool {
        match self {
            Expr::Pred(i) => PREDICATES[*i].level == Level::Collection,
            Expr::Not(e) => e.uses_alpha(),
            Expr::And(a, b) | Expr::Or(a, b) => a.uses_alpha() || b.uses_alpha(),
            Expr::Equal(a, b) => *a == CollectionRef::Alpha || *b == CollectionRef::Alpha,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Eq,
    Ne,
    Open,
    Close,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |b: u8| bytes.get(i + 1) == Some(&b);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::Open,
            b')' => Tok::Close,
            b'!' if two(b'=') => {
                i += 1;
                Tok::Ne
            }
            b'!' => Tok::Not,
            b'&' => {
                if two(b'&') {
                    i += 1;
                }
                Tok::And
            }
            b'|' => {
                if two(b'|') {
                    i += 1;
                }
                Tok::Or
            }
            b'=' => {
                if two(b'=') {
                    i += 1;
                }
                Tok::Eq
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => return Err(Error::Parse(i, format!("unexpected character {:?}", c as char))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse(self.offset(), msg.into()))
    }

    fn or(&mut self) -> Result<Expr> {
        let mut e = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            e = Expr::Or(Box::new(e), Box::new(self.and()?));
        }
        Ok(e)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            e = Expr::And(Box::new(e), Box::new(self.unary()?));
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Expr::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.or()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.error("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Ident(_)) => self.atom(),
            _ => self.error("expected a predicate, '!' or '('"),
        }
    }

    fn collection(&mut self) -> Result<CollectionRef> {
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return self.error("expected a collection name");
        };
        let r = if name == "alpha" {
            CollectionRef::Alpha
        } else if let Some(i) = COLLECTION_NAMES.iter().position(|&c| c == name) {
            CollectionRef::Named(i)
        } else {
            return self.error(format!("unknown collection {name:?}"));
        };
        self.pos += 1;
        Ok(r)
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            unreachable!("atom starts with an identifier");
        };
        if let Some(i) = PREDICATES.iter().position(|p| p.name == name) {
            self.pos += 1;
            return Ok(Expr::Pred(i));
        }
        let lhs = self.collection()?;
        let negate = match self.peek() {
            Some(Tok::Eq) => false,
            Some(Tok::Ne) => true,
            _ => return self.error("expected '=' or '!=' after a collection name"),
        };
        self.pos += 1;
        let rhs = self.collection()?;
        let eq = Expr::Equal(lhs, rhs);
        Ok(if negate { Expr::Not(Box::new(eq)) } else { eq })
    }
}

/// Parses `!`, `&`, `|`, parentheses, registered predicate names and
/// `c = d` / `c != d` between collection names.
pub fn parse_predicate(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        end: src.len(),
    };
    let e = p.or()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// Every labeled space on `1..=n` points.
    Exhaustive { n: usize, up_to_iso: bool },
    /// `count` spaces on `n` points, instance `i` from seed `seed + i`.
    Random { n: usize, seed: u64, count: usize },
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub expression: String,
    pub generator: Generator,
    pub max_instances: Option<usize>,
    pub max_duration: Option<Duration>,
    pub bound: usize,
    /// Subcollections are enumerated exhaustively up to this `|κ|`.
    pub collection_limit: usize,
    /// Random subcollections per space above `collection_limit`.
    pub samples: usize,
    pub seed: u64,
}

impl SearchSpec {
    pub fn new(expression: impl Into<String>, generator: Generator) -> SearchSpec {
        SearchSpec {
            expression: expression.into(),
            generator,
            max_instances: None,
            max_duration: None,
            bound: DEFAULT_ENUMERATION_BOUND,
            collection_limit: 20,
            samples: 4096,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub instance: usize,
    pub n: usize,
    pub seed: Option<u64>,
    pub space: Value,
    /// Generators of each family of `alpha`, for collection-level searches.
    pub collection: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub expression: String,
    pub instances: usize,
    /// Instances whose canonical collections were out of bounds.
    pub skipped: usize,
    pub budget_exhausted: bool,
    pub counterexamples: Vec<Counterexample>,
}

struct Instance<'a> {
    space: &'a SpaceRef,
    bound: usize,
    canon: OnceLock<Result<Canonical>>,
    class: OnceLock<Option<SpaceClassification>>,
}

impl<'a> Instance<'a> {
    fn new(space: &'a SpaceRef, bound: usize) -> Instance<'a> {
        Instance {
            space,
            bound,
            canon: OnceLock::new(),
            class: OnceLock::new(),
        }
    }

    fn canonical(&self) -> Result<&Canonical> {
        self.canon
            .get_or_init(|| Canonical::compute(self.space, self.bound))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn class(&self) -> Result<&SpaceClassification> {
        let c = self.canonical()?;
        Ok(self
            .class
            .get_or_init(|| Some(classify_canonical(c)))
            .as_ref()
            .expect("set above"))
    }
}

/// The candidate subcollection, as a mask over κ or as an explicit value.
enum Alpha<'a> {
    Mask(&'a SubcollectionIndex<'a>, u64),
    Explicit(&'a FamilyCollection),
}

impl Alpha<'_> {
    fn collection(&self) -> FamilyCollection {
        match self {
            Alpha::Mask(idx, m) => idx.collection(*m),
            Alpha::Explicit(c) => (*c).clone(),
        }
    }
}

fn aux_sound(alpha: &FamilyCollection, reading: AuxiliaryReading) -> bool {
    let a1 = augment_auxiliary(alpha, reading);
    a1.is_hereditary() && a1.is_sectionable() && a1.is_self_joinable(false)
}

fn eval_collection(name: &str, alpha: &Alpha) -> bool {
    if let Alpha::Mask(idx, m) = alpha {
        let m = *m;
        match name {
            "nonempty" => return m != 0,
            "hereditary" => return idx.hereditary(m),
            "sectionable" => return idx.sectionable(m),
            "self_joinable" => return idx.self_joinable(m),
            "hereditarily_self_joinable" => return idx.hereditarily_self_joinable(m),
            "self_splittable" => return idx.self_splittable(m),
            "intersection_closed" => return idx.intersection_closed(m),
            "cap_self_joinable" => {
                if let Some(c) = idx.intersection_closure(m) {
                    return idx.self_joinable(c);
                }
            }
            _ => {}
        }
    }
    let c = alpha.collection();
    match name {
        "nonempty" => !c.is_empty(),
        "hereditary" => c.is_hereditary(),
        "sectionable" => c.is_sectionable(),
        "self_joinable" => c.is_self_joinable(false),
        "hereditarily_self_joinable" => c.is_self_joinable(true),
        "self_splittable" => c.is_self_splittable(),
        "intersection_closed" => c.is_intersection_closed(),
        "meet_continuous" => meet_jointly_continuous(&c),
        "cap_self_joinable" => intersection_closure(&c).is_self_joinable(false),
        "aux_full_sound" => aux_sound(&c, AuxiliaryReading::FullFamily),
        "aux_top_sound" => aux_sound(&c, AuxiliaryReading::TopOnly),
        other => unreachable!("unregistered predicate {other}"),
    }
}

fn eval_space(name: &str, inst: &Instance) -> Result<bool> {
    let s = inst.space;
    Ok(match name {
        "regular" => s.is_regular(),
        "prime" => s.is_prime(),
        "discrete" => s.is_discrete(),
        "indiscrete" => s.is_indiscrete(),
        "t0" => {
            let nb = s.neighborhoods();
            (0..nb.len()).all(|i| !nb[..i].contains(&nb[i]))
        }
        "consonant" => inst.class()?.consonant,
        "infraconsonant" => inst.class()?.infraconsonant,
        "compactly_splittable" => inst.class()?.compactly_splittable,
        "inclusions_ok" => inst.class()?.inclusions_ok,
        "kappa_meet_continuous" => meet_jointly_continuous(&inst.canonical()?.kappa),
        other => unreachable!("unregistered predicate {other}"),
    })
}

fn resolve(r: CollectionRef, inst: &Instance, alpha: Option<&Alpha>) -> Result<FamilyCollection> {
    match r {
        CollectionRef::Named(i) => Ok(inst
            .canonical()?
            .by_name(COLLECTION_NAMES[i])
            .expect("listed")
            .clone()),
        CollectionRef::Alpha => Ok(alpha.expect("alpha-level instance").collection()),
    }
}

fn eval(e: &Expr, inst: &Instance, alpha: Option<&Alpha>) -> Result<bool> {
    match e {
        Expr::Pred(i) => {
            let p = &PREDICATES[*i];
            match p.level {
                Level::Space => eval_space(p.name, inst),
                Level::Collection => Ok(eval_collection(p.name, alpha.expect("alpha-level instance"))),
            }
        }
        Expr::Not(e) => Ok(!eval(e, inst, alpha)?),
        Expr::And(a, b) => Ok(eval(a, inst, alpha)? && eval(b, inst, alpha)?),
        Expr::Or(a, b) => Ok(eval(a, inst, alpha)? || eval(b, inst, alpha)?),
        Expr::Equal(a, b) => Ok(resolve(*a, inst, alpha)? == resolve(*b, inst, alpha)?),
    }
}

fn generate(g: &Generator) -> Result<Vec<(Option<u64>, FiniteSpace)>> {
    match *g {
        Generator::Exhaustive { n, up_to_iso } => {
            let mut out = Vec::new();
            for k in 1..=n {
                out.extend(enumerate_preorders(k, up_to_iso)?.into_iter().map(|s| (None, s)));
            }
            Ok(out)
        }
        Generator::Random { n, seed, count } => (0..count as u64)
            .map(|i| {
                let s = seed.wrapping_add(i);
                Ok((Some(s), random_space(n, s)?))
            })
            .collect(),
    }
}

fn families_json(c: &FamilyCollection) -> Value {
    let s = c.space();
    Value::Array(
        c.iter()
            .map(|f| Value::Array(f.minimal_sets().map(|u| set_json(s, u)).collect()))
            .collect(),
    )
}

fn counterexample(
    instance: usize,
    seed: Option<u64>,
    s: &SpaceRef,
    alpha: Option<FamilyCollection>,
) -> Counterexample {
    Counterexample {
        instance,
        n: s.n(),
        seed,
        space: space_json(s),
        collection: alpha.as_ref().map(families_json),
    }
}

struct Budget {
    limit: Option<usize>,
    deadline: Option<Instant>,
    used: usize,
    exhausted: AtomicBool,
}

impl Budget {
    fn out_of_time(&self) -> bool {
        let late = self.deadline.is_some_and(|d| Instant::now() >= d);
        if late {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        late
    }

    /// How many of `wanted` further instances fit.
    fn take(&mut self, wanted: usize) -> usize {
        let room = self.limit.map_or(wanted, |l| l.saturating_sub(self.used).min(wanted));
        if room < wanted {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        self.used += room;
        room
    }
}

/// Every instance within budget on which the expression is true, in
/// generation order. Collection-level expressions range over
/// subcollections of κ of each generated space.
pub fn search(spec: &SearchSpec) -> Result<SearchResult> {
    let expr = parse_predicate(&spec.expression)?;
    let spaces: Vec<(Option<u64>, SpaceRef)> = generate(&spec.generator)?
        .into_iter()
        .map(|(seed, s)| (seed, s.into_ref()))
        .collect();
    let mut budget = Budget {
        limit: spec.max_instances,
        deadline: spec.max_duration.map(|d| Instant::now() + d),
        used: 0,
        exhausted: AtomicBool::new(false),
    };
    let mut skipped = 0;
    let mut found = Vec::new();

    if !expr.uses_alpha() {
        let take = budget.take(spaces.len());
        let verdicts: Vec<Option<Result<bool>>> = spaces[..take]
            .par_iter()
            .map(|(_, s)| {
                if budget.out_of_time() {
                    return None;
                }
                Some(eval(&expr, &Instance::new(s, spec.bound), None))
            })
            .collect();
        for (i, v) in verdicts.into_iter().enumerate() {
            match v {
                Some(Ok(true)) => found.push(counterexample(i, spaces[i].0, &spaces[i].1, None)),
                Some(Err(_)) => skipped += 1,
                _ => {}
            }
        }
        let evaluated = budget.used;
        return Ok(SearchResult {
            expression: spec.expression.clone(),
            instances: evaluated,
            skipped,
            budget_exhausted: budget.exhausted.load(Ordering::Relaxed),
            counterexamples: found,
        });
    }

    let mut instance = 0usize;
    for (si, (seed, s)) in spaces.iter().enumerate() {
        if budget.out_of_time() {
            break;
        }
        let inst = Instance::new(s, spec.bound);
        let Ok(canon) = inst.canonical() else {
            skipped += 1;
            continue;
        };
        let Ok(idx) = SubcollectionIndex::new(&canon.kappa) else {
            skipped += 1;
            continue;
        };
        let mut masks: Vec<u64> = if idx.len() <= spec.collection_limit {
            (0..=idx.all()).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ (si as u64).wrapping_mul(0x9e37_79b9));
            (0..spec.samples).map(|_| rng.gen::<u64>() & idx.all()).collect()
        };
        let take = budget.take(masks.len());
        masks.truncate(take);
        let hits: Vec<(usize, u64)> = masks
            .par_iter()
            .enumerate()
            .filter(|(_, &m)| {
                !budget.out_of_time() && eval(&expr, &inst, Some(&Alpha::Mask(&idx, m))).unwrap_or(false)
            })
            .map(|(j, &m)| (j, m))
            .collect();
        for (j, m) in hits {
            found.push(counterexample(instance + j, *seed, s, Some(idx.collection(m))));
        }
        instance += masks.len();
        if take == 0 {
            break;
        }
    }
    Ok(SearchResult {
        expression: spec.expression.clone(),
        instances: budget.used,
        skipped,
        budget_exhausted: budget.exhausted.load(Ordering::Relaxed),
        counterexamples: found,
    })
}

/// Re-evaluates the expression from a counterexample's reproduction data,
/// using the definitional predicates rather than the mask engine.
pub fn replay(expression: &str, cx: &Counterexample, bound: usize) -> Result<bool> {
    let expr = parse_predicate(expression)?;
    let s = match cx.seed {
        Some(seed) => {
            let regenerated = random_space(cx.n, seed)?;
            if parse_space(&cx.space)?.opens() != regenerated.opens() {
                return Err(Error::Invalid("seed does not reproduce the recorded space".into()));
            }
            regenerated.into_ref()
        }
        None => parse_space(&cx.space)?.into_ref(),
    };
    let inst = Instance::new(&s, bound);
    match (&cx.collection, expr.uses_alpha()) {
        (None, false) => eval(&expr, &inst, None),
        (Some(Value::Array(fams)), true) => {
            let families = fams
                .iter()
                .map(|f| parse_family(f, Some(&s)))
                .collect::<Result<Vec<_>>>()?;
            let alpha = FamilyCollection::new(s.clone(), families)?;
            eval(&expr, &inst, Some(&Alpha::Explicit(&alpha)))
        }
        _ => Err(Error::Invalid("reproduction data does not match the expression".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parser_precedence_and_errors() {
        let e = parse_predicate("!regular & prime | discrete").unwrap();
        let reg = PREDICATES.iter().position(|p| p.name == "regular").unwrap();
        match e {
            Expr::Or(lhs, _) => match *lhs {
                Expr::And(a, _) => assert_eq!(*a, Expr::Not(Box::new(Expr::Pred(reg)))),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_predicate("kappa != lambda").unwrap(),
            Expr::Not(inner) if matches!(*inner, Expr::Equal(CollectionRef::Named(0), CollectionRef::Named(3)))
        ));
        assert!(parse_predicate("(regular && prime) || !t0").is_ok());
        assert!(matches!(parse_predicate("regular &"), Err(Error::Parse(9, _))));
        assert!(matches!(parse_predicate("nosuch"), Err(Error::Parse(0, _))));
        assert!(matches!(parse_predicate("kappa"), Err(Error::Parse(5, _))));
        assert!(matches!(parse_predicate("regular $"), Err(Error::Parse(8, _))));
        assert!(parse_predicate("(regular").is_err());
    }

    #[test]
    fn kappa_equals_lambda_on_small_spaces() {
        let spec = SearchSpec::new("kappa != lambda", Generator::Exhaustive { n: 3, up_to_iso: false });
        let r = search(&spec).unwrap();
        assert_eq!(r.instances, 1 + 4 + 29);
        assert!(r.counterexamples.is_empty());
        assert!(!r.budget_exhausted);
    }

    #[test]
    fn prime_spaces_never_fail_splitting() {
        let spec = SearchSpec::new(
            "prime & !compactly_splittable",
            Generator::Exhaustive { n: 3, up_to_iso: false },
        );
        assert!(search(&spec).unwrap().counterexamples.is_empty());
    }

    #[test]
    fn counterexamples_replay() {
        let expr = "self_joinable & nonempty & !hereditary";
        let spec = SearchSpec::new(expr, Generator::Exhaustive { n: 2, up_to_iso: false });
        let r = search(&spec).unwrap();
        assert!(!r.counterexamples.is_empty());
        for cx in &r.counterexamples {
            assert!(replay(expr, cx, DEFAULT_ENUMERATION_BOUND).unwrap());
        }
        let spec = SearchSpec::new("!regular", Generator::Random { n: 3, seed: 9, count: 6 });
        let r = search(&spec).unwrap();
        for cx in &r.counterexamples {
            assert!(cx.seed.is_some());
            assert!(replay("!regular", cx, DEFAULT_ENUMERATION_BOUND).unwrap());
        }
    }

    #[test]
    fn budget_is_flagged() {
        let mut spec = SearchSpec::new("t0", Generator::Exhaustive { n: 3, up_to_iso: false });
        spec.max_instances = Some(10);
        let r = search(&spec).unwrap();
        assert_eq!(r.instances, 10);
        assert!(r.budget_exhausted);
        let mut spec = SearchSpec::new("hereditary", Generator::Exhaustive { n: 2, up_to_iso: false });
        spec.max_instances = Some(5);
        let r = search(&spec).unwrap();
        assert_eq!(r.instances, 5);
        assert!(r.budget_exhausted);
        assert!(r.counterexamples.iter().all(|c| c.instance < 5));
    }
}
