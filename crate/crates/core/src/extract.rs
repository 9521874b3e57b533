//! Dependency extraction.
//!
//! Every model node `N` carrying `funct = X` yields one dependency labelled
//! `X`. Its kind is read off `N`: linear when the `funct` antecedent of `N` is
//! positive, non-linear when it is saturated; canonical when `N` is
//! non-empty, non-canonical when it is an empty node whose `ref` is shared
//! with a realized node `C`.
//!
//! | kind | governor node | dependent node |
//! |---|---|---|
//! | linear | `antecedent(N, funct)` | |
//! | non-linear | `antecedent(parent(N), cat)` | |
//! | canonical | | `antecedent(N, cat)` |
//! | non-canonical | | `antecedent(C, cat)` |
//!
//! The words are the anchors of the elementary descriptions those nodes
//! belong to.

use thiserror::Error;

use crate::dap::DapId;
use crate::dependency::{Canonicity, Dependency, DependencyGraph, DependencyKind, Linearity};
use crate::feature::Polarity;
use crate::graph::{coindex_classes, CoindexClasses, FeatureOcc, InterpretationGraph, NodeRef};
use crate::heads::{anchor_token, antecedent, HeadError};
use crate::patterns::{dap_of, match_pattern, model_of, GraphPattern, PatternError};
use crate::tree::ModelId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractionError {
    #[error(transparent)]
    Head(#[from] HeadError),
    #[error("{0} carries no funct feature")]
    NoFunct(String),
    #[error("{node} has funct value {value}, expected a single atom")]
    AmbiguousLabel { node: String, value: String },
    #[error("{0} is the root and has no governor")]
    RootNonLinear(String),
    #[error("governor {governor} of {node} has {count} principal sibling(s), expected 1")]
    PrincipalSibling {
        node: String,
        governor: String,
        count: usize,
    },
    #[error("{0} is empty and carries no ref feature")]
    NoRef(String),
    #[error("no realized node in the ref class of {node} ({class})")]
    NoRealization { node: String, class: String },
    #[error("several realized nodes in the ref class of {node} ({class}): {}", .candidates.join(", "))]
    SeveralRealizations {
        node: String,
        class: String,
        candidates: Vec<String>,
    },
}

/// A dependency graph and the funct-bearing nodes that could not be turned
/// into a dependency.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Extraction {
    pub graph: DependencyGraph,
    pub errors: Vec<ExtractionError>,
}

impl Extraction {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

pub fn classify(graph: &InterpretationGraph, n: ModelId) -> Result<DependencyKind, ExtractionError> {
    let node = graph.model_node(n);
    if node.feature("funct").is_none() {
        return Err(ExtractionError::NoFunct(node.name.clone()));
    }
    let ante = antecedent(graph, n, "funct")?;
    let linearity = match graph.dap_node(ante).feature("funct").and_then(|f| f.polarity()) {
        Some(Polarity::Positive) => Linearity::Linear,
        _ => Linearity::NonLinear,
    };
    let canonicity = if node.is_empty() {
        Canonicity::NonCanonical
    } else {
        Canonicity::Canonical
    };
    Ok(DependencyKind::new(linearity, canonicity))
}

/// The description node whose elementary description holds the governor.
pub fn governor_dapnode(
    graph: &InterpretationGraph,
    n: ModelId,
    linearity: Linearity,
) -> Result<DapId, ExtractionError> {
    match linearity {
        Linearity::Linear => {
            let g = antecedent(graph, n, "funct")?;
            let count = graph
                .dap()
                .siblings(g)
                .into_iter()
                .filter(|&s| graph.dap_node(s).is_principal().unwrap_or(false))
                .count();
            if count != 1 {
                return Err(ExtractionError::PrincipalSibling {
                    node: graph.model_node(n).name.clone(),
                    governor: graph.dap_node(g).label(),
                    count,
                });
            }
            Ok(g)
        }
        Linearity::NonLinear => {
            let p = graph
                .tree()
                .parent(n)
                .ok_or_else(|| ExtractionError::RootNonLinear(graph.model_node(n).name.clone()))?;
            Ok(antecedent(graph, p, "cat")?)
        }
    }
}

/// The realized node sharing the `ref` class of the empty node `n`.
pub fn realization(
    graph: &InterpretationGraph,
    classes: &CoindexClasses,
    n: ModelId,
) -> Result<ModelId, ExtractionError> {
    let name = || graph.model_node(n).name.clone();
    if graph.model_node(n).feature("ref").is_none() {
        return Err(ExtractionError::NoRef(name()));
    }
    let occ = FeatureOcc::new(NodeRef::Model(n), "ref");
    let class = || {
        classes
            .members(&occ)
            .map(|o| format!("{}.{}", graph.label(o.node), o.name))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut candidates: Vec<ModelId> = classes
        .members(&occ)
        .filter_map(|o| match o.node {
            NodeRef::Model(m) if o.name == "ref" && !graph.model_node(m).is_empty() => Some(m),
            _ => None,
        })
        .collect();
    candidates.sort();
    candidates.dedup();
    match candidates.as_slice() {
        [c] => Ok(*c),
        [] => Err(ExtractionError::NoRealization {
            node: name(),
            class: class(),
        }),
        many => Err(ExtractionError::SeveralRealizations {
            node: name(),
            class: class(),
            candidates: many.iter().map(|&m| graph.model_node(m).name.clone()).collect(),
        }),
    }
}

/// The description node whose elementary description holds the dependent.
pub fn dependent_dapnode(
    graph: &InterpretationGraph,
    classes: &CoindexClasses,
    n: ModelId,
    canonicity: Canonicity,
) -> Result<DapId, ExtractionError> {
    let target = match canonicity {
        Canonicity::Canonical => n,
        Canonicity::NonCanonical => realization(graph, classes, n)?,
    };
    Ok(antecedent(graph, target, "cat")?)
}

fn label(graph: &InterpretationGraph, n: ModelId) -> Result<String, ExtractionError> {
    let node = graph.model_node(n);
    let f = node
        .feature("funct")
        .ok_or_else(|| ExtractionError::NoFunct(node.name.clone()))?;
    f.value
        .as_atom()
        .map(str::to_owned)
        .ok_or_else(|| ExtractionError::AmbiguousLabel {
            node: node.name.clone(),
            value: f.value.to_string(),
        })
}

fn extract_one(
    graph: &InterpretationGraph,
    classes: &CoindexClasses,
    n: ModelId,
) -> Result<Dependency, ExtractionError> {
    let kind = classify(graph, n)?;
    let label = label(graph, n)?;
    let g = governor_dapnode(graph, n, kind.linearity)?;
    let d = dependent_dapnode(graph, classes, n, kind.canonicity)?;
    Ok(Dependency {
        governor: anchor_token(graph, g)?,
        dependent: anchor_token(graph, d)?,
        label,
        kind,
    })
}

/// Extracts one dependency per funct-bearing model node. Nodes that fail
/// are reported in `errors` and the rest of the graph is still built.
pub fn extract_dependencies(graph: &InterpretationGraph) -> Extraction {
    let classes = coindex_classes(graph);
    let mut out = Extraction {
        graph: DependencyGraph::new(graph.tree().tokens(), []),
        errors: Vec::new(),
    };
    for n in graph.tree().preorder() {
        if graph.model_node(n).feature("funct").is_none() {
            continue;
        }
        match extract_one(graph, &classes, n) {
            Ok(dep) => {
                out.graph.insert(dep);
            }
            Err(e) => out.errors.push(e),
        }
    }
    out
}

/// Builds the dependency `pattern` emits for one of its matches.
fn emitted(
    pattern: &GraphPattern,
    graph: &InterpretationGraph,
    m: &crate::patterns::Match,
) -> Result<Option<Dependency>, ExtractionError> {
    let Some(e) = &pattern.emit else {
        return Ok(None);
    };
    let g = dap_of(m, pattern, &e.governor).expect("validated pattern");
    let d = dap_of(m, pattern, &e.dependent).expect("validated pattern");
    let n = model_of(m, pattern, &e.label).expect("validated pattern");
    Ok(Some(Dependency {
        governor: anchor_token(graph, g)?,
        dependent: anchor_token(graph, d)?,
        label: label(graph, n)?,
        kind: e.kind,
    }))
}

/// Dependencies emitted by every match of `patterns`.
pub fn extract_via_patterns(
    graph: &InterpretationGraph,
    patterns: &[GraphPattern],
) -> Result<Extraction, PatternError> {
    let mut out = Extraction {
        graph: DependencyGraph::new(graph.tree().tokens(), []),
        errors: Vec::new(),
    };
    for p in patterns {
        for m in match_pattern(p, graph)? {
            match emitted(p, graph, &m) {
                Ok(Some(dep)) => {
                    out.graph.insert(dep);
                }
                Ok(None) => {}
                Err(e) => out.errors.push(e),
            }
        }
    }
    Ok(out)
}
