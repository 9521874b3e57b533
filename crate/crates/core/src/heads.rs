//! Principal antecedents and heads of model nodes.
//!
//! For a model node `m` and a polarizable feature `f`, the antecedent of `m`
//! for `f` is the one description node interpreted in `m` that carries `f`
//! positive or saturated. The head of a non-empty node is the image of the
//! anchor of the elementary description its `cat` antecedent comes from.

use thiserror::Error;

use crate::dap::DapId;
use crate::feature::{Polarity, Token};
use crate::graph::InterpretationGraph;
use crate::tree::ModelId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeadError {
    #[error("{node} has no antecedent for {feature}")]
    NoAntecedent { node: String, feature: String },
    #[error("{node} has several antecedents for {feature}: {}", .candidates.join(", "))]
    AmbiguousAntecedent {
        node: String,
        feature: String,
        candidates: Vec<String>,
    },
    #[error("{0} is empty and has no head")]
    EmptyNode(String),
    #[error("elementary description {0} has no single anchor")]
    NoAnchor(usize),
}

/// The unique preimage of `m` whose `feature` is positive or saturated.
pub fn antecedent(graph: &InterpretationGraph, m: ModelId, feature: &str) -> Result<DapId, HeadError> {
    let candidates: Vec<DapId> = graph
        .inverse(m)
        .iter()
        .copied()
        .filter(|&d| {
            matches!(
                graph.dap_node(d).feature(feature).and_then(|f| f.polarity()),
                Some(Polarity::Positive) | Some(Polarity::Saturated)
            )
        })
        .collect();
    match candidates.as_slice() {
        [d] => Ok(*d),
        [] => Err(HeadError::NoAntecedent {
            node: graph.model_node(m).name.clone(),
            feature: feature.to_owned(),
        }),
        many => Err(HeadError::AmbiguousAntecedent {
            node: graph.model_node(m).name.clone(),
            feature: feature.to_owned(),
            candidates: many.iter().map(|&d| graph.dap_node(d).label()).collect(),
        }),
    }
}

/// The anchor token of the elementary instance `d` belongs to.
pub fn anchor_token(graph: &InterpretationGraph, d: DapId) -> Result<Token, HeadError> {
    let inst = graph.dap_node(d).instance;
    graph
        .dap()
        .anchor_of(inst)
        .and_then(|a| a.anchor.clone())
        .ok_or(HeadError::NoAnchor(inst))
}

/// The model node realizing the head word of `m`.
pub fn head(graph: &InterpretationGraph, m: ModelId) -> Result<ModelId, HeadError> {
    if graph.model_node(m).is_empty() {
        return Err(HeadError::EmptyNode(graph.model_node(m).name.clone()));
    }
    let ante = antecedent(graph, m, "cat")?;
    let inst = graph.dap_node(ante).instance;
    let anchor = graph.dap().anchor_of(inst).ok_or(HeadError::NoAnchor(inst))?;
    Ok(graph.interp(anchor.id))
}

/// The head word of `m`.
pub fn head_token(graph: &InterpretationGraph, m: ModelId) -> Result<Token, HeadError> {
    if graph.model_node(m).is_empty() {
        return Err(HeadError::EmptyNode(graph.model_node(m).name.clone()));
    }
    anchor_token(graph, antecedent(graph, m, "cat")?)
}
