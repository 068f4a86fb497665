//! Point measures with exact rational weights and the level families
//! `M_r = {O open : μ(O) > r}` they induce.
//!
//! Every comparison against a threshold is exact; nothing here touches
//! floating point.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::collection::FamilyCollection;
use crate::error::{Error, Result};
use crate::family::{OpenFamily, RestrictMode};
use crate::pointset::{bits_of, PointSet};
use crate::space::SpaceRef;

pub type Rational = BigRational;

/// Parses `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Ok(i) = BigInt::from_str(t) {
        return Ok(Rational::from_integer(i));
    }
    Rational::from_str(t).map_err(|_| Error::Invalid(format!("not a rational: {s:?}")))
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Nonnegative weight per point; `μ(S)` is the sum over `S`.
#[derive(Clone, Debug)]
pub struct PointMeasure {
    space: SpaceRef,
    weights: Vec<Rational>,
    /// `μ` of each open, by canonical index.
    open_measures: Vec<Rational>,
}

impl PointMeasure {
    pub fn new(space: SpaceRef, weights: Vec<Rational>) -> Result<PointMeasure> {
        if weights.len() != space.n() {
            return Err(Error::Invalid(format!(
                "{} weights for {} points",
                weights.len(),
                space.n()
            )));
        }
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::NegativeWeight(i));
        }
        space.lattice()?;
        let open_measures = space
            .opens()
            .iter()
            .map(|&u| sum_over(&weights, u))
            .collect();
        Ok(PointMeasure {
            space,
            weights,
            open_measures,
        })
    }

    pub fn from_integers(space: SpaceRef, weights: &[i64]) -> Result<PointMeasure> {
        PointMeasure::new(space, weights.iter().map(|&w| rational(w, 1)).collect())
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn total(&self) -> Rational {
        self.measure_of(self.space.full())
    }

    pub fn measure_of(&self, s: PointSet) -> Rational {
        sum_over(&self.weights, s)
    }

    fn open_measure(&self, s: PointSet) -> Result<&Rational> {
        self.space
            .open_index(s)
            .map(|i| &self.open_measures[i])
            .ok_or(Error::NotOpen(s))
    }

    /// `M_r`: opens of measure strictly above `r`.
    pub fn level_family(&self, r: &Rational) -> OpenFamily {
        let mask = self
            .open_measures
            .iter()
            .enumerate()
            .filter(|(_, m)| *m > r)
            .fold(0u64, |acc, (i, _)| acc | 1 << i);
        OpenFamily::from_members(self.space.clone(), mask).expect("level sets are up-closed")
    }

    /// Positive thresholds hitting every distinct level family. Includes the
    /// midpoints between consecutive open measures.
    pub fn representative_thresholds(&self) -> Vec<Rational> {
        let mut values: Vec<Rational> = self
            .open_measures
            .iter()
            .filter(|m| m.is_positive())
            .cloned()
            .collect();
        values.sort();
        values.dedup();
        let mut reps = Vec::new();
        if let Some(first) = values.first() {
            reps.push(first / rational(2, 1));
        }
        for (i, v) in values.iter().enumerate() {
            reps.push(v.clone());
            if let Some(next) = values.get(i + 1) {
                reps.push((v + next) / rational(2, 1));
            }
        }
        reps
    }

    /// `τ`-additivity with the strongest tolerance: every family of opens is
    /// matched in measure by a finite subfamily of itself.
    pub fn is_tau_additive(&self) -> bool {
        let m = self.space.num_opens();
        if m >= 20 {
            return true;
        }
        (0u64..1 << m).all(|p| {
            let union = bits_of(p).fold(PointSet::EMPTY, |acc, i| acc.union(self.space.open(i)));
            let target = self.measure_of(union);
            let mut sub = 0u64;
            loop {
                let u = bits_of(sub).fold(PointSet::EMPTY, |acc, i| acc.union(self.space.open(i)));
                if self.measure_of(u) >= target {
                    return true;
                }
                if sub == p {
                    return false;
                }
                sub = sub.wrapping_sub(p) & p;
            }
        })
    }
}

fn sum_over(weights: &[Rational], s: PointSet) -> Rational {
    s.iter().fold(Rational::zero(), |acc, i| acc + &weights[i])
}

/// `{M_r↓A : r > 0, A ∈ M_r}`, over the representative thresholds.
pub fn gamma_mu(mu: &PointMeasure) -> FamilyCollection {
    let mut families = Vec::new();
    for r in mu.representative_thresholds() {
        let level = mu.level_family(&r);
        for a in level.member_sets() {
            families.push(level.restrict(a, RestrictMode::Strict).expect("member"));
        }
    }
    FamilyCollection::new(mu.space.clone(), families).expect("same space")
}

/// `γ_μ ∪ {O_X}`: adjoins the one family that can split off an open of
/// measure zero.
pub fn gamma_mu_with_full(mu: &PointMeasure) -> FamilyCollection {
    gamma_mu(mu)
        .with(OpenFamily::full(mu.space.clone()).expect("lattice"))
        .expect("same space")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinCheck {
    /// `(r + μ(U)) / 2`, as `"p/q"`.
    pub midpoint: String,
    pub pass: bool,
    /// First pair of members of `M_m↓U` whose intersection leaves `M_r↓U`.
    pub violation: Option<(PointSet, PointSet)>,
}

/// `(M_m↓U) ∨ (M_m↓U) ⊆ M_r↓U` with `m = (r + μ(U)) / 2`, every pair checked.
pub fn verify_selfjoin(mu: &PointMeasure, u: PointSet, r: &Rational) -> Result<JoinCheck> {
    let mu_u = mu.open_measure(u)?.clone();
    if !r.is_positive() || mu_u <= *r {
        return Err(Error::PreconditionFailed(format!(
            "need μ(U) > r > 0, got μ(U) = {mu_u}, r = {r}"
        )));
    }
    let m = (r + &mu_u) / rational(2, 1);
    let lhs = mu.level_family(&m).restrict(u, RestrictMode::Strict)?;
    let rhs = mu.level_family(r).restrict(u, RestrictMode::Strict)?;
    let mut violation = None;
    'outer: for o1 in lhs.member_sets() {
        for o2 in lhs.member_sets() {
            if !rhs.contains_set(o1.intersection(o2)) {
                violation = Some((o1, o2));
                break 'outer;
            }
        }
    }
    Ok(JoinCheck {
        midpoint: m.to_string(),
        pass: violation.is_none(),
        violation,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitCheck {
    pub d: String,
    pub m1: String,
    pub m2: String,
    pub pass: bool,
    /// A member of the intersection that is not in `M_r`.
    pub violation: Option<PointSet>,
}

/// `(M_{m₁}↓U₁) ∩ (M_{m₂}↓U₂) ⊆ M_r` with
/// `d = min(μ(U₁), μ(U₂), μ(U₁∪U₂) − r)` and `mᵢ = μ(Uᵢ) − d/2`.
pub fn verify_selfsplit(mu: &PointMeasure, u1: PointSet, u2: PointSet, r: &Rational) -> Result<SplitCheck> {
    let m_u1 = mu.open_measure(u1)?.clone();
    let m_u2 = mu.open_measure(u2)?.clone();
    let m_union = mu.open_measure(u1.union(u2))?.clone();
    if !r.is_positive() || m_union <= *r {
        return Err(Error::PreconditionFailed(format!(
            "need μ(U₁∪U₂) > r > 0, got μ(U₁∪U₂) = {m_union}, r = {r}"
        )));
    }
    let d = m_u1.clone().min(m_u2.clone()).min(&m_union - r);
    if !d.is_positive() {
        return Err(Error::PreconditionFailed(format!("d = {d} is not positive")));
    }
    let half = &d / rational(2, 1);
    let m1 = &m_u1 - &half;
    let m2 = &m_u2 - &half;
    let g1 = mu.level_family(&m1).restrict(u1, RestrictMode::Strict)?;
    let g2 = mu.level_family(&m2).restrict(u2, RestrictMode::Strict)?;
    let target = mu.level_family(r);
    let both = g1.intersection(&g2)?;
    let violation = both.member_sets().find(|&p| !target.contains_set(p));
    Ok(SplitCheck {
        d: d.to_string(),
        m1: m1.to_string(),
        m2: m2.to_string(),
        pass: violation.is_none(),
        violation,
    })
}
