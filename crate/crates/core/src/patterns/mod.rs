//! Declarative patterns over interpretation graphs.
//!
//! A pattern names nodes of either sort with feature and phonology
//! constraints, and relates them by interpretation edges (`interp d m`),
//! immediate dominance within one sort (`child p c`) and shared coindexation
//! of a feature (`coref a b ref`). A match assigns a graph node to every
//! pattern node so that all constraints hold; two pattern nodes may share a
//! graph node.
//!
//! ```
//! use igdep::format::parse_graph;
//! use igdep::patterns::{match_pattern, parse_patterns};
//!
//! let graph = parse_graph(
//!     "dap\n\
//!      node 0.A anchor=a@0 phon=nonempty cat<->x\n\
//!      tree\n\
//!      node A word=a@0 phon=nonempty cat<->x\n\
//!      interp\n\
//!      0.A A\n",
//! )
//! .unwrap();
//! let patterns = parse_patterns(
//!     "pattern anchored\n\
//!        node D sort=dap feat=cat;pol=<->\n\
//!        node M sort=model phon=nonempty\n\
//!        interp D M\n\
//!      end\n",
//! )
//! .unwrap();
//! let matches = match_pattern(&patterns[0], &graph).unwrap();
//! assert_eq!(matches.len(), 1);
//! ```

mod builtin;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::dap::DapId;
use crate::dependency::DependencyKind;
use crate::feature::{FeatureValue, Marking, Phon};
use crate::format::SyntaxError;
use crate::graph::{coindex_classes, CoindexClasses, FeatureOcc, InterpretationGraph, NodeRef};
use crate::tree::ModelId;

pub use builtin::{builtin_patterns, BUILTIN_PATTERNS};
pub use parse::{parse_patterns, write_pattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Dap,
    Model,
}

impl Sort {
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Dap => "dap",
            Sort::Model => "model",
        }
    }
}

/// `name`, optionally restricted to values meeting `values` and to the
/// markings in `markings`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureConstraint {
    pub name: String,
    pub values: Option<FeatureValue>,
    pub markings: Option<BTreeSet<Marking>>,
}

impl FeatureConstraint {
    pub fn present(name: impl Into<String>) -> Self {
        FeatureConstraint {
            name: name.into(),
            values: None,
            markings: None,
        }
    }

    pub fn with_markings(mut self, markings: impl IntoIterator<Item = Marking>) -> Self {
        self.markings = Some(markings.into_iter().collect());
        self
    }

    pub fn with_values(mut self, values: FeatureValue) -> Self {
        self.values = Some(values);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodePattern {
    pub id: String,
    pub sort: Sort,
    pub features: Vec<FeatureConstraint>,
    pub phon: Option<Phon>,
    /// Marks the node a pattern is about; informational.
    pub capture: bool,
}

impl NodePattern {
    pub fn new(id: impl Into<String>, sort: Sort) -> Self {
        NodePattern {
            id: id.into(),
            sort,
            features: Vec::new(),
            phon: None,
            capture: false,
        }
    }

    pub fn feature(mut self, c: FeatureConstraint) -> Self {
        self.features.push(c);
        self
    }

    pub fn phon(mut self, phon: Phon) -> Self {
        self.phon = Some(phon);
        self
    }
}

/// The `feature` of `a` and of `b` are in one coindexation class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coref {
    pub a: String,
    pub b: String,
    pub feature: String,
}

/// How a match becomes a dependency: the words anchoring the elementary
/// descriptions of `governor` and `dependent`, labelled with the `funct`
/// value of `label`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Emit {
    pub governor: String,
    pub dependent: String,
    pub label: String,
    pub kind: DependencyKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GraphPattern {
    pub name: String,
    pub nodes: Vec<NodePattern>,
    pub interp: Vec<(String, String)>,
    pub child: Vec<(String, String)>,
    pub coref: Vec<Coref>,
    pub emit: Option<Emit>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("syntax error: {0}")]
    Syntax(#[from] SyntaxError),
    #[error("pattern {pattern}: {message}")]
    Invalid { pattern: String, message: String },
}

impl GraphPattern {
    pub fn new(name: impl Into<String>) -> Self {
        GraphPattern {
            name: name.into(),
            ..GraphPattern::default()
        }
    }

    pub fn index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    fn invalid(&self, message: impl Into<String>) -> PatternError {
        PatternError::Invalid {
            pattern: self.name.clone(),
            message: message.into(),
        }
    }

    fn sort_of(&self, id: &str) -> Result<Sort, PatternError> {
        self.index(id)
            .map(|i| self.nodes[i].sort)
            .ok_or_else(|| self.invalid(format!("unknown node {}", id)))
    }

    /// Checks that ids are unique, edges reference declared nodes of the
    /// right sorts and polarity sets are non-empty.
    pub fn validate(&self) -> Result<(), PatternError> {
        let mut ids = BTreeSet::new();
        for n in &self.nodes {
            if !ids.insert(n.id.as_str()) {
                return Err(self.invalid(format!("node {} declared twice", n.id)));
            }
            for f in &n.features {
                if f.markings.as_ref().is_some_and(BTreeSet::is_empty) {
                    return Err(self.invalid(format!("empty polarity set for {} on {}", f.name, n.id)));
                }
            }
        }
        for (d, m) in &self.interp {
            if self.sort_of(d)? != Sort::Dap || self.sort_of(m)? != Sort::Model {
                return Err(self.invalid(format!("interp {} {} must go from dap to model", d, m)));
            }
        }
        for (p, c) in &self.child {
            if self.sort_of(p)? != self.sort_of(c)? {
                return Err(self.invalid(format!("child {} {} crosses sorts", p, c)));
            }
        }
        for c in &self.coref {
            self.sort_of(&c.a)?;
            self.sort_of(&c.b)?;
        }
        if let Some(e) = &self.emit {
            if self.sort_of(&e.governor)? != Sort::Dap || self.sort_of(&e.dependent)? != Sort::Dap {
                return Err(self.invalid("emit governor and dependent must be dap nodes"));
            }
            if self.sort_of(&e.label)? != Sort::Model {
                return Err(self.invalid("emit label must be a model node"));
            }
        }
        Ok(())
    }
}

/// An assignment of graph nodes to pattern nodes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Match {
    /// Graph node of each pattern node, in declaration order.
    pub nodes: Vec<NodeRef>,
}

impl Match {
    pub fn get(&self, pattern: &GraphPattern, id: &str) -> Option<NodeRef> {
        pattern.index(id).map(|i| self.nodes[i])
    }

    pub fn render(&self, pattern: &GraphPattern, graph: &InterpretationGraph) -> String {
        pattern
            .nodes
            .iter()
            .zip(&self.nodes)
            .map(|(p, n)| format!("{}={}", p.id, graph.label(*n)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Whether `node` meets the unary constraints of `p`.
pub fn node_matches(p: &NodePattern, graph: &InterpretationGraph, node: NodeRef) -> bool {
    let (sort, phon) = match node {
        NodeRef::Dap(d) => (Sort::Dap, graph.dap_node(d).phon),
        NodeRef::Model(m) => (Sort::Model, graph.model_node(m).phon),
    };
    if sort != p.sort || p.phon.is_some_and(|want| want != phon) {
        return false;
    }
    p.features.iter().all(|c| match graph.feature(node, &c.name) {
        None => false,
        Some(f) => {
            c.values.as_ref().is_none_or(|v| v.intersect(&f.value).is_some())
                && c.markings.as_ref().is_none_or(|m| m.contains(&f.marking))
        }
    })
}

enum Binary<'p> {
    Interp(usize, usize),
    Child(usize, usize),
    Coref(usize, usize, &'p str),
}

impl Binary<'_> {
    fn ends(&self) -> (usize, usize) {
        match *self {
            Binary::Interp(a, b) | Binary::Child(a, b) | Binary::Coref(a, b, _) => (a, b),
        }
    }

    fn holds(&self, graph: &InterpretationGraph, classes: &CoindexClasses, x: NodeRef, y: NodeRef) -> bool {
        match (self, x, y) {
            (Binary::Interp(..), NodeRef::Dap(d), NodeRef::Model(m)) => graph.interp(d) == m,
            (Binary::Child(..), NodeRef::Dap(p), NodeRef::Dap(c)) => graph.dap().parent(c) == Some(p),
            (Binary::Child(..), NodeRef::Model(p), NodeRef::Model(c)) => graph.tree().parent(c) == Some(p),
            (Binary::Coref(_, _, f), a, b) => classes.same_class(&FeatureOcc::new(a, *f), &FeatureOcc::new(b, *f)),
            _ => false,
        }
    }
}

/// All matches of `pattern` in `graph`, sorted and without duplicates.
pub fn match_pattern(pattern: &GraphPattern, graph: &InterpretationGraph) -> Result<Vec<Match>, PatternError> {
    pattern.validate()?;
    let idx = |id: &str| pattern.index(id).expect("validated");
    let mut binaries: Vec<Binary> = Vec::new();
    binaries.extend(pattern.interp.iter().map(|(d, m)| Binary::Interp(idx(d), idx(m))));
    binaries.extend(pattern.child.iter().map(|(p, c)| Binary::Child(idx(p), idx(c))));
    binaries.extend(pattern.coref.iter().map(|c| Binary::Coref(idx(&c.a), idx(&c.b), c.feature.as_str())));
    let classes = if pattern.coref.is_empty() {
        CoindexClasses::default()
    } else {
        coindex_classes(graph)
    };

    let candidates: Vec<Vec<NodeRef>> = pattern
        .nodes
        .iter()
        .map(|p| {
            let all: Vec<NodeRef> = match p.sort {
                Sort::Dap => graph.dap().ids().map(NodeRef::Dap).collect(),
                Sort::Model => graph.tree().ids().map(NodeRef::Model).collect(),
            };
            all.into_iter().filter(|&n| node_matches(p, graph, n)).collect()
        })
        .collect();
    // Most selective nodes first.
    let mut order: Vec<usize> = (0..pattern.nodes.len()).collect();
    order.sort_by_key(|&i| (candidates[i].len(), i));
    let mut position = vec![0usize; order.len()];
    for (k, &i) in order.iter().enumerate() {
        position[i] = k;
    }
    // Each binary constraint is checked once both ends are assigned.
    let mut due: Vec<Vec<&Binary>> = vec![Vec::new(); order.len()];
    for b in &binaries {
        let (x, y) = b.ends();
        due[position[x].max(position[y])].push(b);
    }

    let mut out = Vec::new();
    let mut assignment: Vec<Option<NodeRef>> = vec![None; order.len()];
    search(0, &order, &candidates, &due, graph, &classes, &mut assignment, &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    k: usize,
    order: &[usize],
    candidates: &[Vec<NodeRef>],
    due: &[Vec<&Binary>],
    graph: &InterpretationGraph,
    classes: &CoindexClasses,
    assignment: &mut Vec<Option<NodeRef>>,
    out: &mut Vec<Match>,
) {
    if k == order.len() {
        out.push(Match {
            nodes: assignment.iter().map(|n| n.expect("complete")).collect(),
        });
        return;
    }
    let i = order[k];
    for &cand in &candidates[i] {
        assignment[i] = Some(cand);
        let ok = due[k].iter().all(|b| {
            let (x, y) = b.ends();
            b.holds(graph, classes, assignment[x].unwrap(), assignment[y].unwrap())
        });
        if ok {
            search(k + 1, order, candidates, due, graph, classes, assignment, out);
        }
    }
    assignment[i] = None;
}

/// Description node assigned to a dap-sort pattern node.
pub(crate) fn dap_of(m: &Match, pattern: &GraphPattern, id: &str) -> Option<DapId> {
    match m.get(pattern, id)? {
        NodeRef::Dap(d) => Some(d),
        NodeRef::Model(_) => None,
    }
}

/// Model node assigned to a model-sort pattern node.
pub(crate) fn model_of(m: &Match, pattern: &GraphPattern, id: &str) -> Option<ModelId> {
    match m.get(pattern, id)? {
        NodeRef::Model(x) => Some(x),
        NodeRef::Dap(_) => None,
    }
}
