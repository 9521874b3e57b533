use thiserror::Error;

/// Violations of the construction-time invariants of descriptions, trees and
/// interpretation graphs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("node {0} has no cat feature")]
    MissingCat(String),
    #[error("node ids must be dense and in order: expected {expected}, found {found}")]
    NodeOrder { expected: usize, found: usize },
    #[error("duplicate node label {0}")]
    DuplicateLabel(String),
    #[error("relation endpoint {0} is not a node")]
    UnknownNode(usize),
    #[error("relation {kind} {from} {to} crosses elementary descriptions")]
    CrossEdap {
        kind: &'static str,
        from: String,
        to: String,
    },
    #[error("node {0} has more than one immediate-dominance parent")]
    MultipleParents(String),
    #[error("dominance cycle through {0}")]
    DominanceCycle(String),
    #[error("tree has no root")]
    NoRoot,
    #[error("tree has several roots: {0} and {1}")]
    MultipleRoots(String, String),
    #[error("tree is not connected: {0} is unreachable from the root")]
    Disconnected(String),
    #[error("interpretation has {found} entries for {expected} description nodes")]
    InterpNotTotal { expected: usize, found: usize },
    #[error("interpretation target {0} is not a model node")]
    UnknownModelNode(usize),
}
