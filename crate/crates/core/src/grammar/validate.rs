use std::collections::BTreeSet;

use crate::dap::{DapId, Edap, Relation};
use crate::feature::{is_polarizable, Marking, Phon, Polarity};
use crate::saturation::{Rule, ValidityReport, Violation};

fn violation(edap: &Edap, rule: Rule, nodes: &[DapId], message: impl Into<String>) -> Violation {
    Violation {
        rule,
        nodes: nodes.iter().map(|&d| edap.dap.node(d).label()).collect(),
        message: message.into(),
    }
}

fn has_children(edap: &Edap, id: DapId) -> bool {
    !edap.dap.children(id).is_empty() || edap.dap.relation(Relation::Dom).iter().any(|&(a, _)| a == id)
}

/// Checks the well-formedness conditions on an elementary description: one
/// anchor leaf, empty nodes as leaves, `cat` everywhere with the non-empty
/// principal nodes forming the projection path, a single principal sibling
/// next to every positive `funct`, polarity only on `cat` and `funct`, and
/// dominance forming one tree.
pub fn validate_edap(edap: &Edap) -> ValidityReport {
    let dap = &edap.dap;
    let mut out = Vec::new();

    let anchors = edap.anchors();
    match anchors.as_slice() {
        [] => out.push(Violation {
            rule: Rule::Principle1,
            nodes: Vec::new(),
            message: format!("entry {} has no anchor", edap.word_form),
        }),
        [a] => {
            if has_children(edap, *a) {
                out.push(violation(edap, Rule::Principle1, &[*a], "anchor is not a leaf"));
            }
            if dap.node(*a).phon == Phon::Empty {
                out.push(violation(edap, Rule::Principle2, &[*a], "anchor is empty"));
            }
        }
        many => out.push(violation(
            edap,
            Rule::Principle1,
            many,
            format!("{} anchors, expected one", many.len()),
        )),
    }

    let mut all_cat = true;
    for n in dap.nodes() {
        if n.phon == Phon::Empty && has_children(edap, n.id) {
            out.push(violation(edap, Rule::Principle2, &[n.id], "empty node is not a leaf"));
        }
        if n.cat().is_err() {
            all_cat = false;
            out.push(violation(edap, Rule::Principle3, &[n.id], "node has no cat feature"));
        }
        for f in n.features.iter() {
            match (is_polarizable(&f.name), f.marking) {
                (true, Marking::Neutral) => out.push(violation(
                    edap,
                    Rule::FeatureKinds,
                    &[n.id],
                    format!("{} must carry a polarity", f.name),
                )),
                (false, Marking::Polarized(_)) => out.push(violation(
                    edap,
                    Rule::FeatureKinds,
                    &[n.id],
                    format!("{} must be neutral", f.name),
                )),
                _ => {}
            }
        }
    }

    if all_cat && anchors.len() == 1 {
        let projections: BTreeSet<DapId> = edap.projections().into_iter().collect();
        if projections.is_empty() {
            out.push(violation(
                edap,
                Rule::Principle3,
                &anchors,
                "anchor is not a non-empty principal node",
            ));
        }
        for n in dap.nodes() {
            if n.is_nonempty_principal().unwrap_or(false) && !projections.contains(&n.id) {
                out.push(violation(
                    edap,
                    Rule::Principle3,
                    &[n.id],
                    "non-empty principal node is not a projection of the anchor",
                ));
            }
        }
    }

    for n in dap.nodes() {
        let positive = n
            .feature("funct")
            .is_some_and(|f| f.polarity() == Some(Polarity::Positive));
        if !positive {
            continue;
        }
        let principal: Vec<DapId> = dap
            .siblings(n.id)
            .into_iter()
            .filter(|&s| dap.node(s).is_principal().unwrap_or(false))
            .collect();
        if principal.len() != 1 {
            out.push(violation(
                edap,
                Rule::Principle4,
                &[n.id],
                format!(
                    "positive funct needs exactly one principal sibling, found {}",
                    principal.len()
                ),
            ));
        }
    }

    let mut parents = vec![0usize; dap.len()];
    for rel in [Relation::ImmDom, Relation::Dom] {
        for &(_, b) in dap.relation(rel) {
            parents[b.0] += 1;
        }
    }
    for (i, &count) in parents.iter().enumerate() {
        if count > 1 {
            out.push(violation(edap, Rule::Shape, &[DapId(i)], "node has several parents"));
        }
    }
    let roots: Vec<DapId> = dap.ids().filter(|d| parents[d.0] == 0).collect();
    if roots.len() > 1 {
        out.push(violation(
            edap,
            Rule::Shape,
            &roots,
            format!("dominance forms {} trees, expected one", roots.len()),
        ));
    }

    ValidityReport::new(out)
}
