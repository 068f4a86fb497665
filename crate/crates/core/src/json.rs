//! JSON encodings of the core types.
//!
//! Points are referred to by label. A space is either a fixture name
//! (`"D3"`) or an object with `"points"` and exactly one of `"opens"` or
//! `"preorder"`; opens are the up-sets of the preorder, pairs `[x, y]`
//! meaning `x ≤ y`.

use serde_json::{json, Map, Value};

use crate::collection::{Canonical, FamilyCollection, COLLECTION_NAMES};
use crate::error::{Error, Result};
use crate::family::{isotone_hull, OpenFamily};
use crate::measure::{parse_rational, PointMeasure, Rational};
use crate::pointset::PointSet;
use crate::space::{
    alexandrov_from_preorder, fixtures, validate_topology, FiniteSpace, Preorder, SpaceRef,
};

fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}

/// Parses JSON text, mapping syntax errors to [`Error::Parse`].
pub fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        let offset = text
            .lines()
            .take(e.line().saturating_sub(1))
            .map(|l| l.len() + 1)
            .sum::<usize>()
            + e.column().saturating_sub(1);
        Error::Parse(offset, e.to_string())
    })
}

fn point_label(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(invalid(format!("point label must be a string, got {other}"))),
    }
}

fn point_of(space: &FiniteSpace, v: &Value) -> Result<usize> {
    let label = point_label(v)?;
    space
        .point_index(&label)
        .ok_or(Error::UnknownPoint(label))
}

/// A set given as a list of point labels.
pub fn parse_set(space: &FiniteSpace, v: &Value) -> Result<PointSet> {
    let items = v
        .as_array()
        .ok_or_else(|| invalid(format!("expected a list of points, got {v}")))?;
    items.iter().map(|p| point_of(space, p)).collect()
}

pub fn set_json(space: &FiniteSpace, s: PointSet) -> Value {
    Value::Array(s.iter().map(|i| Value::String(space.label(i))).collect())
}

fn labels_of(v: &Value) -> Result<Vec<String>> {
    match v {
        Value::Array(items) => items.iter().map(point_label).collect(),
        Value::Number(n) => {
            let n = n
                .as_u64()
                .ok_or_else(|| invalid("\"points\" must be a nonnegative count"))?;
            Ok((0..n).map(|i| i.to_string()).collect())
        }
        _ => Err(invalid("\"points\" must be a list of labels or a count")),
    }
}

pub fn parse_space(v: &Value) -> Result<FiniteSpace> {
    if let Value::String(name) = v {
        return fixtures::by_name(name).ok_or_else(|| invalid(format!("unknown space {name:?}")));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("space must be a fixture name or an object"))?;
    let labels = labels_of(obj.get("points").ok_or_else(|| invalid("space needs \"points\""))?)?;
    let n = labels.len();
    if n > crate::pointset::MAX_POINTS {
        return Err(Error::TooManyPoints(n, crate::pointset::MAX_POINTS));
    }
    let index = |v: &Value| -> Result<usize> {
        let label = point_label(v)?;
        labels
            .iter()
            .position(|l| *l == label)
            .ok_or(Error::UnknownPoint(label))
    };
    let space = match (obj.get("opens"), obj.get("preorder")) {
        (Some(opens), None) => {
            let opens = opens
                .as_array()
                .ok_or_else(|| invalid("\"opens\" must be a list"))?;
            let sets = opens
                .iter()
                .map(|o| {
                    o.as_array()
                        .ok_or_else(|| invalid("each open must be a list of points"))?
                        .iter()
                        .map(&index)
                        .collect::<Result<PointSet>>()
                })
                .collect::<Result<Vec<_>>>()?;
            validate_topology(n, sets)?
        }
        (None, Some(pairs)) => {
            let pairs = pairs
                .as_array()
                .ok_or_else(|| invalid("\"preorder\" must be a list of pairs"))?
                .iter()
                .map(|p| match p.as_array().map(Vec::as_slice) {
                    Some([x, y]) => Ok((index(x)?, index(y)?)),
                    _ => Err(invalid(format!("preorder entry {p} is not a pair"))),
                })
                .collect::<Result<Vec<_>>>()?;
            alexandrov_from_preorder(&closure_of_pairs(n, &pairs))?
        }
        (Some(_), Some(_)) => return Err(invalid("give either \"opens\" or \"preorder\", not both")),
        (None, None) => return Err(invalid("space needs \"opens\" or \"preorder\"")),
    };
    space.with_names(labels)
}

/// Reflexive-transitive closure of a list of pairs.
fn closure_of_pairs(n: usize, pairs: &[(usize, usize)]) -> Preorder {
    let mut up: Vec<PointSet> = (0..n).map(PointSet::singleton).collect();
    for &(x, y) in pairs {
        up[x] = up[x].with(y);
    }
    for k in 0..n {
        for i in 0..n {
            if up[i].contains(k) {
                up[i] = up[i].union(up[k]);
            }
        }
    }
    Preorder::from_up_sets(up).expect("closure is a preorder")
}

pub fn space_json(space: &FiniteSpace) -> Value {
    json!({
        "points": (0..space.n()).map(|i| space.label(i)).collect::<Vec<_>>(),
        "opens": space.opens().iter().map(|&u| set_json(space, u)).collect::<Vec<_>>(),
    })
}

/// Resolves the `"space"` field against an enclosing space, if any.
fn space_field(obj: &Map<String, Value>, outer: Option<&SpaceRef>) -> Result<SpaceRef> {
    match (obj.get("space"), outer) {
        (Some(v), Some(outer)) => {
            let s = parse_space(v)?;
            if s == **outer {
                Ok(outer.clone())
            } else {
                Err(Error::SpaceMismatch)
            }
        }
        (Some(v), None) => Ok(parse_space(v)?.into_ref()),
        (None, Some(outer)) => Ok(outer.clone()),
        (None, None) => Err(invalid("missing \"space\"")),
    }
}

/// A family is the isotone hull of its `"generators"`. Inside a collection
/// the `"space"` field may be omitted, and a bare list of generators is
/// accepted.
pub fn parse_family(v: &Value, outer: Option<&SpaceRef>) -> Result<OpenFamily> {
    let (space, gens) = match v {
        Value::Array(_) => (
            outer.cloned().ok_or_else(|| invalid("family needs a \"space\""))?,
            v,
        ),
        Value::Object(obj) => (
            space_field(obj, outer)?,
            obj.get("generators")
                .ok_or_else(|| invalid("family needs \"generators\""))?,
        ),
        _ => return Err(invalid("family must be an object or a list of generators")),
    };
    let seeds = gens
        .as_array()
        .ok_or_else(|| invalid("\"generators\" must be a list of point sets"))?
        .iter()
        .map(|g| parse_set(&space, g))
        .collect::<Result<Vec<_>>>()?;
    isotone_hull(&space, &seeds)
}

fn generators_json(f: &OpenFamily) -> Value {
    let space = f.space();
    Value::Array(f.minimal_sets().map(|u| set_json(space, u)).collect())
}

pub fn family_json(f: &OpenFamily) -> Value {
    json!({ "space": space_json(f.space()), "generators": generators_json(f) })
}

/// Collection from `{"space", "families"}` where `"families"` is a list or
/// a built-in name; built-ins are computed with the given `κ` bound.
pub fn parse_collection(v: &Value, bound: usize) -> Result<FamilyCollection> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("collection must be an object"))?;
    let space = space_field(obj, None)?;
    match obj.get("families") {
        Some(Value::String(name)) => builtin_collection(&space, name, bound),
        Some(Value::Array(items)) => {
            let fams = items
                .iter()
                .map(|f| parse_family(f, Some(&space)))
                .collect::<Result<Vec<_>>>()?;
            FamilyCollection::new(space, fams)
        }
        _ => Err(invalid("collection needs \"families\": a list or a built-in name")),
    }
}

pub fn builtin_collection(space: &SpaceRef, name: &str, bound: usize) -> Result<FamilyCollection> {
    if !COLLECTION_NAMES.contains(&name) {
        return Err(invalid(format!(
            "unknown collection {name:?}, expected one of {}",
            COLLECTION_NAMES.join(", ")
        )));
    }
    match name {
        "k" => crate::collection::k_collection(space),
        "p" => crate::collection::p_collection(space),
        "kappa" => crate::collection::kappa_bounded(space, bound),
        _ => Ok(Canonical::compute(space, bound)?
            .by_name(name)
            .expect("listed name")
            .clone()),
    }
}

pub fn collection_json(c: &FamilyCollection) -> Value {
    json!({
        "space": space_json(c.space()),
        "families": c.iter().map(generators_json).collect::<Vec<_>>(),
    })
}

fn parse_weight(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                Err(invalid(format!("weight {n} must be an integer or a \"p/q\" string")))
            }
        }
        other => Err(invalid(format!("weight must be a number or string, got {other}"))),
    }
}

/// `{"space", "weights": {label: weight}}`; every point needs a weight.
pub fn parse_measure(v: &Value) -> Result<PointMeasure> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("measure must be an object"))?;
    let space = space_field(obj, None)?;
    let weights = obj
        .get("weights")
        .and_then(Value::as_object)
        .ok_or_else(|| invalid("measure needs a \"weights\" object"))?;
    for label in weights.keys() {
        if space.point_index(label).is_none() {
            return Err(Error::UnknownPoint(label.clone()));
        }
    }
    let w = (0..space.n())
        .map(|i| {
            let label = space.label(i);
            weights
                .get(&label)
                .ok_or_else(|| invalid(format!("no weight for point {label:?}")))
                .and_then(parse_weight)
        })
        .collect::<Result<Vec<_>>>()?;
    PointMeasure::new(space, w)
}

pub fn measure_json(mu: &PointMeasure) -> Value {
    let space = mu.space();
    let weights: Map<String, Value> = mu
        .weights()
        .iter()
        .enumerate()
        .map(|(i, w)| (space.label(i), Value::String(w.to_string())))
        .collect();
    json!({ "space": space_json(space), "weights": weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::fixtures::{d3, s2};

    #[test]
    fn space_formats() {
        let v = json!({"points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]});
        assert_eq!(parse_space(&v).unwrap(), s2());
        let v = json!({"points": ["a", "b"], "preorder": [["b", "a"]]});
        assert_eq!(parse_space(&v).unwrap(), s2());
        assert_eq!(parse_space(&space_json(&d3())).unwrap(), d3());
        assert_eq!(parse_space(&json!("D3")).unwrap(), d3());
        let both = json!({"points": ["a"], "opens": [[], ["a"]], "preorder": []});
        assert!(parse_space(&both).is_err());
        let bad = json!({"points": ["a", "b"], "opens": [[], ["a"]]});
        assert_eq!(parse_space(&bad).unwrap_err(), Error::MissingFull);
        let unknown = json!({"points": ["a"], "opens": [[], ["z"]]});
        assert_eq!(parse_space(&unknown).unwrap_err(), Error::UnknownPoint("z".into()));
    }

    #[test]
    fn preorder_pairs_are_closed_transitively() {
        let v = json!({"points": ["a", "b", "c"], "preorder": [["a", "b"], ["b", "c"]]});
        let s = parse_space(&v).unwrap();
        assert_eq!(s.num_opens(), 4);
        assert_eq!(s.neighborhood(0), PointSet::full(3));
    }

    #[test]
    fn families_emit_minimal_generators() {
        let v = json!({"space": "D3", "generators": [["a"], ["a", "b"], ["b", "c"]]});
        let f = parse_family(&v, None).unwrap();
        assert_eq!(f.len(), 5);
        let out = family_json(&f);
        assert_eq!(out["generators"], json!([["a"], ["b", "c"]]));
        assert_eq!(parse_family(&out, None).unwrap(), f);
    }

    #[test]
    fn collections_round_trip() {
        let v = json!({"space": "S2", "families": "kappa"});
        let c = parse_collection(&v, 12).unwrap();
        assert_eq!(c.len(), 4);
        let back = parse_collection(&collection_json(&c), 12).unwrap();
        assert_eq!(back.families(), c.families());
        let v = json!({"space": "D3", "families": [[["a"]], {"generators": [["b"]]}]});
        assert_eq!(parse_collection(&v, 12).unwrap().len(), 2);
        let v = json!({"space": "D3", "families": [{"space": "S2", "generators": []}]});
        assert_eq!(parse_collection(&v, 12).unwrap_err(), Error::SpaceMismatch);
        assert!(parse_collection(&json!({"space": "S2", "families": "nope"}), 12).is_err());
    }

    #[test]
    fn measures() {
        let v = json!({"space": "D3", "weights": {"a": 1, "b": "2", "c": "9/2"}});
        let mu = parse_measure(&v).unwrap();
        assert_eq!(mu.total(), crate::measure::rational(15, 2));
        assert_eq!(measure_json(&mu)["weights"]["c"], json!("9/2"));
        let v = json!({"space": "D3", "weights": {"a": 1, "b": 2}});
        assert!(parse_measure(&v).is_err());
        let v = json!({"space": "D3", "weights": {"a": -1, "b": 2, "c": 0}});
        assert_eq!(parse_measure(&v).unwrap_err(), Error::NegativeWeight(0));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert!(matches!(parse_text("{\"a\": }"), Err(Error::Parse(6, _))));
    }
}
