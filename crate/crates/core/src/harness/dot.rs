use std::fmt::Write;

use crate::collection::Canonical;
use crate::hyperspace::HyperTopology;
use crate::pointset::{bits_of, PointSet};
use crate::space::FiniteSpace;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Covering pairs `(i, j)` of a partial order given by strict up-masks.
fn covers(strictly_above: &[u64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &up) in strictly_above.iter().enumerate() {
        for j in bits_of(up) {
            let between = bits_of(up).any(|k| strictly_above[k] >> j & 1 == 1);
            if !between {
                out.push((i, j));
            }
        }
    }
    out
}

fn hasse(name: &str, labels: &[String], strictly_above: &[u64]) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n", quote(name));
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label={}];", quote(l));
    }
    for (i, j) in covers(strictly_above) {
        let _ = writeln!(out, "  n{i} -> n{j};");
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram of the open lattice, edges pointing to larger opens.
pub fn lattice_dot(s: &FiniteSpace) -> String {
    let opens = s.opens();
    let labels: Vec<String> = opens.iter().map(|&u| s.format_set(u)).collect();
    let above: Vec<u64> = opens
        .iter()
        .map(|&u| {
            opens
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != u && u.is_subset(v))
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    hasse("opens", &labels, &above)
}

/// Specialization order of the generated topology on the base opens.
/// Points in the same smallest neighbourhood as each other are merged.
pub fn hyper_dot(h: &HyperTopology) -> String {
    let t = &h.topology;
    let mut classes: Vec<PointSet> = Vec::new();
    for x in 0..t.n() {
        let class: PointSet = (0..t.n())
            .filter(|&y| t.neighborhood(x).contains(y) && t.neighborhood(y).contains(x))
            .collect();
        if !classes.contains(&class) {
            classes.push(class);
        }
    }
    let labels: Vec<String> = classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|i| h.base.format_set(h.carrier[i]))
                .collect::<Vec<_>>()
                .join(" ~ ")
        })
        .collect();
    let rep = |c: &PointSet| c.iter().next().expect("nonempty class");
    let above: Vec<u64> = classes
        .iter()
        .map(|c| {
            let x = rep(c);
            classes
                .iter()
                .enumerate()
                .filter(|(_, d)| *d != c && t.neighborhood(x).contains(rep(d)))
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    hasse("hypertopology", &labels, &above)
}

/// The five collections with inclusion arrows; each arrow is labelled `=`
/// or `⊊` as computed.
pub fn inclusion_dot(c: &Canonical) -> String {
    let nodes = [
        ("k", "k", &c.k),
        ("lambda_down", "Λ↓", &c.lambda_down),
        ("lambda", "Λ", &c.lambda),
        ("sigma", "Σ", &c.sigma),
        ("kappa", "κ", &c.kappa),
    ];
    let edges = [
        ("k", "lambda_down"),
        ("lambda_down", "lambda"),
        ("lambda", "kappa"),
        ("lambda_down", "sigma"),
        ("sigma", "kappa"),
    ];
    let get = |id: &str| nodes.iter().find(|n| n.0 == id).expect("node").2;
    let mut out = String::from("digraph inclusions {\n  rankdir=BT;\n");
    for (id, label, col) in &nodes {
        let _ = writeln!(out, "  {id} [label={}];", quote(&format!("{label} ({})", col.len())));
    }
    for (a, b) in edges {
        let (ca, cb) = (get(a), get(b));
        let rel = if ca == cb {
            "="
        } else if ca.is_subcollection_of(cb) {
            "⊊"
        } else {
            "⊄"
        };
        let _ = writeln!(out, "  {a} -> {b} [label={}];", quote(rel));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::kappa;
    use crate::hyperspace::generate_topology;
    use crate::space::fixtures::*;

    fn edges(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("->")).count()
    }

    fn nodes(dot: &str) -> usize {
        dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count()
    }

    #[test]
    fn lattices() {
        let s2 = lattice_dot(&s2());
        assert_eq!((nodes(&s2), edges(&s2)), (3, 2));
        assert!(s2.contains("n0 -> n1;") && s2.contains("n1 -> n2;"));
        let cube = lattice_dot(&d3());
        assert_eq!((nodes(&cube), edges(&cube)), (8, 12));
        assert!(cube.starts_with("digraph \"opens\" {"));
    }

    #[test]
    fn inclusion_diagram() {
        let s = s2().into_ref();
        let dot = inclusion_dot(&Canonical::compute(&s, 12).unwrap());
        assert_eq!((nodes(&dot), edges(&dot)), (5, 5));
        assert_eq!(dot.matches("label=\"=\"").count(), 4);
        assert!(dot.contains("k -> lambda_down [label=\"⊊\"]"));
    }

    #[test]
    fn hyper_order() {
        let s = s2().into_ref();
        let dot = hyper_dot(&generate_topology(&kappa(&s).unwrap()));
        assert_eq!(nodes(&dot), 3);
        assert_eq!(edges(&dot), 2);
    }
}
