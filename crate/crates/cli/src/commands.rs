use std::time::Duration;

use anyhow::{anyhow, bail, Result};
use serde_json::{json, Map, Value};

use fintopo::collection::{classify_canonical, joinable_failure, SplitContext, COLLECTION_NAMES};
use fintopo::harness::{
    enumerate_preorders, hyper_dot, inclusion_dot, lattice_dot, random_space, run_batteries,
    search, BatteryOptions, Generator, Level, SearchSpec, PREDICATES,
};
use fintopo::hyperspace::{
    function_space, is_homeomorphism, meet_discontinuity, sierpinski_star, star_identification,
    HyperTopology,
};
use fintopo::json::{
    builtin_collection, collection_json, family_json, measure_json, parse_collection,
    parse_measure, parse_space, set_json, space_json,
};
use fintopo::measure::{gamma_mu, gamma_mu_with_full, parse_rational, verify_selfjoin, verify_selfsplit};
use fintopo::{
    compare_topologies, generate_topology, Canonical, Error, FamilyCollection, FiniteSpace,
    PointMeasure, PointSet, SpaceRef,
};

use crate::io::Io;
use crate::{Cli, Command, DotKind, GeneratorArgs, MeasureAction, SpaceArg};

/// Runs one verb; `Ok(false)` means a claim failed or a search hit.
pub fn run(cli: Cli) -> Result<bool> {
    let io = Io {
        input: cli.input,
        output: cli.output,
        compact: cli.compact,
    };
    let bound = cli.bound;
    match cli.command {
        Command::Validate(arg) => validate(&io, &arg),
        Command::Analyze {
            space,
            generator,
            threads,
            timing,
            samples,
        } => {
            let spaces = match generated(&generator)? {
                Some(s) => s,
                None => spaces_from(&read_doc(&io, &space)?)?,
            };
            let opts = BatteryOptions {
                threads,
                timing,
                bound,
                samples,
                ..Default::default()
            };
            let reports = run_batteries(&spaces, &opts);
            let ok = reports.iter().all(|r| r.all_pass());
            let out = if reports.len() == 1 {
                serde_json::to_value(&reports[0])?
            } else {
                serde_json::to_value(&reports)?
            };
            io.write_json(&out)?;
            Ok(ok)
        }
        Command::Collection { space, name } => {
            let doc = read_doc(&io, &space)?;
            let out = if is_collection(&doc) {
                collection_report(&parse_collection(&doc, bound)?)
            } else {
                let s = parse_space(&doc)?.into_ref();
                match name {
                    Some(n) => collection_json(&builtin_collection(&s, &n, bound)?),
                    None => canonical_report(&s, bound)?,
                }
            };
            io.write_json(&out)?;
            Ok(true)
        }
        Command::Hyper {
            space,
            name,
            compare,
        } => {
            let alpha = collection_from(&read_doc(&io, &space)?, &name, bound)?;
            io.write_json(&hyper_report(&alpha, compare.as_deref(), bound)?)?;
            Ok(true)
        }
        Command::Measure { action } => {
            let mu = parse_measure(&io.read_json()?)?;
            measure(&io, &mu, action)
        }
        Command::Search {
            expr,
            generator,
            max_instances,
            max_seconds,
            samples,
            list,
        } => {
            if list {
                io.write_json(&predicate_list())?;
                return Ok(true);
            }
            let generator = match (generator.exhaustive, generator.random) {
                (Some(n), _) => Generator::Exhaustive {
                    n,
                    up_to_iso: generator.iso,
                },
                (None, Some(n)) => Generator::Random {
                    n,
                    seed: generator.seed,
                    count: generator.count,
                },
                (None, None) => bail!("search needs --exhaustive N or --random N"),
            };
            let mut spec = SearchSpec::new(expr.expect("required by clap"), generator);
            spec.bound = bound;
            spec.samples = samples;
            spec.max_instances = max_instances;
            if let Some(secs) = max_seconds {
                spec.max_duration = Some(
                    Duration::try_from_secs_f64(secs).map_err(|e| anyhow!("--max-seconds: {e}"))?,
                );
            }
            let result = search(&spec)?;
            io.write_json(&serde_json::to_value(&result)?)?;
            Ok(result.counterexamples.is_empty())
        }
        Command::ExportDot { space, kind, name } => {
            let doc = read_doc(&io, &space)?;
            let dot = match kind {
                DotKind::Lattice => lattice_dot(&parse_space(&doc)?),
                DotKind::Hyper => hyper_dot(&generate_topology(&collection_from(&doc, &name, bound)?)),
                DotKind::Inclusion => {
                    inclusion_dot(&Canonical::compute(&parse_space(&doc)?.into_ref(), bound)?)
                }
            };
            io.write_text(&dot)?;
            Ok(true)
        }
    }
}

fn read_doc(io: &Io, arg: &SpaceArg) -> Result<Value> {
    match &arg.space {
        Some(name) => Ok(Value::String(name.clone())),
        None => io.read_json(),
    }
}

fn is_collection(doc: &Value) -> bool {
    doc.get("families").is_some()
}

fn collection_from(doc: &Value, name: &str, bound: usize) -> Result<FamilyCollection> {
    if is_collection(doc) {
        Ok(parse_collection(doc, bound)?)
    } else {
        let s = parse_space(doc)?.into_ref();
        Ok(builtin_collection(&s, name, bound)?)
    }
}

fn generated(g: &GeneratorArgs) -> Result<Option<Vec<SpaceRef>>> {
    let spaces: Vec<FiniteSpace> = match (g.exhaustive, g.random) {
        (Some(n), _) => {
            let mut all = Vec::new();
            for k in 1..=n {
                all.extend(enumerate_preorders(k, g.iso)?);
            }
            all
        }
        (None, Some(n)) => (0..g.count as u64)
            .map(|i| random_space(n, g.seed + i))
            .collect::<fintopo::Result<_>>()?,
        (None, None) => return Ok(None),
    };
    Ok(Some(spaces.into_iter().map(FiniteSpace::into_ref).collect()))
}

/// One space or a list of them, bare or under `"spaces"`.
fn spaces_from(doc: &Value) -> Result<Vec<SpaceRef>> {
    let items = match doc {
        Value::Array(items) => items.as_slice(),
        Value::Object(obj) if obj.contains_key("spaces") => obj["spaces"]
            .as_array()
            .ok_or_else(|| anyhow!("\"spaces\" must be a list"))?
            .as_slice(),
        single => std::slice::from_ref(single),
    };
    items
        .iter()
        .map(|v| Ok(parse_space(v)?.into_ref()))
        .collect()
}

fn is_topology_error(e: &Error) -> bool {
    matches!(
        e,
        Error::MissingEmpty
            | Error::MissingFull
            | Error::NotClosedUnderUnion(..)
            | Error::NotClosedUnderIntersection(..)
            | Error::OutOfRange(..)
            | Error::NotReflexive(_)
            | Error::NotTransitive(..)
    )
}

fn validate(io: &Io, arg: &SpaceArg) -> Result<bool> {
    let doc = read_doc(io, arg)?;
    let s = match parse_space(&doc) {
        Ok(s) => s,
        Err(e) if is_topology_error(&e) => {
            io.write_json(&json!({ "valid": false, "error": e.to_string() }))?;
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    let nb = s.neighborhoods();
    let t0 = (0..nb.len()).all(|i| !nb[..i].contains(&nb[i]));
    io.write_json(&json!({
        "valid": true,
        "space": space_json(&s),
        "points": s.n(),
        "opens": s.num_opens(),
        "t0": t0,
        "regular": s.is_regular(),
        "prime": s.is_prime(),
        "discrete": s.is_discrete(),
        "indiscrete": s.is_indiscrete(),
    }))?;
    Ok(true)
}

fn canonical_report(s: &SpaceRef, bound: usize) -> Result<Value> {
    let canon = Canonical::compute(s, bound)?;
    let mut collections = Map::new();
    for name in COLLECTION_NAMES {
        let c = canon.by_name(name).expect("listed name");
        collections.insert(
            name.to_string(),
            json!({ "size": c.len(), "families": collection_json(c)["families"] }),
        );
    }
    Ok(json!({
        "space": space_json(s),
        "classification": classify_canonical(&canon),
        "collections": collections,
    }))
}

fn split_witness(alpha: &FamilyCollection) -> Option<Value> {
    let ctx = SplitContext::new(alpha);
    let s = alpha.space();
    alpha.iter().find_map(|f| {
        ctx.failure(f).map(|(u1, u2)| {
            json!({
                "family": generators(f),
                "u1": set_json(s, u1),
                "u2": set_json(s, u2),
            })
        })
    })
}

fn generators(f: &fintopo::OpenFamily) -> Value {
    family_json(f)["generators"].clone()
}

fn collection_report(alpha: &FamilyCollection) -> Value {
    let s = alpha.space();
    let join_witness = |hereditary: bool| {
        alpha.iter().find_map(|f| {
            joinable_failure(f, alpha, hereditary).map(|member| {
                json!({
                    "family": generators(f),
                    "member": member.map(|u| set_json(s, u)),
                })
            })
        })
    };
    let meet = meet_discontinuity(alpha).map(|(u, v)| json!([set_json(s, u), set_json(s, v)]));
    json!({
        "space": space_json(s),
        "size": alpha.len(),
        "hereditary": alpha.is_hereditary(),
        "sectionable": alpha.is_sectionable(),
        "intersection_closed": alpha.is_intersection_closed(),
        "self_joinable": alpha.is_self_joinable(false),
        "hereditarily_self_joinable": alpha.is_self_joinable(true),
        "self_splittable": alpha.is_self_splittable(),
        "meet_jointly_continuous": meet.is_none(),
        "witnesses": {
            "self_joinable": join_witness(false),
            "hereditarily_self_joinable": join_witness(true),
            "self_splittable": split_witness(alpha),
            "meet": meet,
        },
    })
}

fn carrier_json(h: &HyperTopology, set: PointSet) -> Value {
    Value::Array(set.iter().map(|i| set_json(&h.base, h.carrier[i])).collect())
}

fn hyper_report(alpha: &FamilyCollection, compare: Option<&str>, bound: usize) -> Result<Value> {
    let h = generate_topology(alpha);
    let s = &h.base;
    let fs = function_space(s, &sierpinski_star(), alpha)?;
    let identified = star_identification(&fs).is_some_and(|f| is_homeomorphism(&fs.topology, &h.topology, &f));
    let meet = meet_discontinuity(alpha).map(|(u, v)| json!([set_json(s, u), set_json(s, v)]));
    let mut out = json!({
        "space": space_json(s),
        "collection_size": alpha.len(),
        "carrier": h.carrier.iter().map(|&u| set_json(s, u)).collect::<Vec<_>>(),
        "open_count": h.topology.num_opens(),
        "neighborhoods": (0..h.topology.n())
            .map(|i| carrier_json(&h, h.topology.neighborhood(i)))
            .collect::<Vec<_>>(),
        "meet_jointly_continuous": meet.is_none(),
        "meet_discontinuity": meet,
        "function_space_homeomorphic": identified,
    });
    if let Some(name) = compare {
        let other = generate_topology(&builtin_collection(s, name, bound)?);
        let cmp = compare_topologies(&h.topology, &other.topology)?;
        out["comparison"] = json!({
            "with": name,
            "result": cmp.comparison,
            "witness": cmp.witness.map(|w| carrier_json(&h, w)),
        });
    }
    Ok(out)
}

fn parse_points(s: &FiniteSpace, list: &str) -> Result<PointSet> {
    list.split(',')
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            s.point_index(l)
                .ok_or_else(|| Error::UnknownPoint(l.to_string()).into())
        })
        .collect()
}

fn measure(io: &Io, mu: &PointMeasure, action: MeasureAction) -> Result<bool> {
    let s = mu.space();
    match action {
        MeasureAction::Level { threshold } => {
            let r = parse_rational(&threshold)?;
            let level = mu.level_family(&r);
            io.write_json(&json!({
                "threshold": r.to_string(),
                "compact": level.is_compact(fintopo::CompactnessMode::ORACLE)?,
                "generators": generators(&level),
            }))?;
            Ok(true)
        }
        MeasureAction::VerifyJoin { open, threshold } => {
            let u = parse_points(s, &open)?;
            let r = parse_rational(&threshold)?;
            let c = verify_selfjoin(mu, u, &r)?;
            io.write_json(&json!({
                "open": set_json(s, u),
                "threshold": r.to_string(),
                "midpoint": c.midpoint,
                "pass": c.pass,
                "violation": c.violation.map(|(a, b)| json!([set_json(s, a), set_json(s, b)])),
            }))?;
            Ok(c.pass)
        }
        MeasureAction::VerifySplit { u1, u2, threshold } => {
            let (u1, u2) = (parse_points(s, &u1)?, parse_points(s, &u2)?);
            let r = parse_rational(&threshold)?;
            let c = verify_selfsplit(mu, u1, u2, &r)?;
            io.write_json(&json!({
                "u1": set_json(s, u1),
                "u2": set_json(s, u2),
                "threshold": r.to_string(),
                "d": c.d,
                "m1": c.m1,
                "m2": c.m2,
                "pass": c.pass,
                "violation": c.violation.map(|v| set_json(s, v)),
            }))?;
            Ok(c.pass)
        }
        MeasureAction::Gamma => {
            let g = gamma_mu(mu);
            let hereditary = g.is_hereditary();
            let hsj = g.is_self_joinable(true);
            let split = g.is_self_splittable();
            io.write_json(&json!({
                "measure": measure_json(mu),
                "total": mu.total().to_string(),
                "tau_additive": mu.is_tau_additive(),
                "thresholds": mu.representative_thresholds().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "gamma": collection_json(&g)["families"],
                "hereditary": hereditary,
                "hereditarily_self_joinable": hsj,
                "self_splittable": split,
                "split_failure": split_witness(&g),
                "with_full_family_self_splittable": gamma_mu_with_full(mu).is_self_splittable(),
            }))?;
            Ok(hereditary && hsj && split)
        }
    }
}

fn predicate_list() -> Value {
    Value::Array(
        PREDICATES
            .iter()
            .map(|p| {
                json!({
                    "name": p.name,
                    "level": match p.level {
                        Level::Space => "space",
                        Level::Collection => "collection",
                    },
                    "description": p.description,
                })
            })
            .collect(),
    )
}
