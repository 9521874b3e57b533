//! Polarity saturation and validity of interpretation graphs.
//!
//! A set of polarized features interpreted in the same model feature is
//! acceptable in exactly two configurations:
//!
//! * non-linear: one saturated feature, every other one virtual;
//! * linear: one positive, one negative, every other one virtual.
//!
//! [`check_interpretation`] applies this to every model feature together with
//! the structural, value, coindexation and phonology conditions. Model
//! minimality is not checked.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::feature::{CoindexTag, FeatureValue, Marking, Phon, Polarity};
use crate::graph::{coindex_classes, coindex_classes_from, CoindexSources, InterpretationGraph, NodeRef};
use crate::dap::Relation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SaturationVerdict {
    ValidLinear,
    ValidNonLinear,
    Invalid(PolarityCounts),
}

impl SaturationVerdict {
    pub fn is_valid(self) -> bool {
        !matches!(self, SaturationVerdict::Invalid(_))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolarityCounts {
    pub positive: usize,
    pub negative: usize,
    pub virtual_: usize,
    pub saturated: usize,
}

impl PolarityCounts {
    pub fn of<'a>(pols: impl IntoIterator<Item = &'a Polarity>) -> Self {
        let mut c = PolarityCounts::default();
        for p in pols {
            c.add(*p);
        }
        c
    }

    pub fn add(&mut self, p: Polarity) {
        match p {
            Polarity::Positive => self.positive += 1,
            Polarity::Negative => self.negative += 1,
            Polarity::Virtual => self.virtual_ += 1,
            Polarity::Saturated => self.saturated += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.positive + self.negative + self.virtual_ + self.saturated
    }

    /// The counts can still grow into a valid configuration by adding
    /// further occurrences.
    pub fn is_extensible(&self) -> bool {
        self.positive <= 1
            && self.negative <= 1
            && self.saturated <= 1
            && !(self.saturated == 1 && self.positive + self.negative > 0)
    }

    pub fn verdict(&self) -> SaturationVerdict {
        let c = *self;
        if c.saturated == 1 && c.positive == 0 && c.negative == 0 {
            SaturationVerdict::ValidNonLinear
        } else if c.positive == 1 && c.negative == 1 && c.saturated == 0 {
            SaturationVerdict::ValidLinear
        } else {
            SaturationVerdict::Invalid(c)
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("polarity multiset is empty")]
pub struct EmptyMultiset;

/// Classifies a multiset of polarities interpreted in one model feature.
pub fn check_polarity_multiset(pols: &[Polarity]) -> Result<SaturationVerdict, EmptyMultiset> {
    if pols.is_empty() {
        return Err(EmptyMultiset);
    }
    Ok(PolarityCounts::of(pols).verdict())
}

/// Value unification is set intersection.
pub fn unify_values(a: &FeatureValue, b: &FeatureValue) -> Option<FeatureValue> {
    a.intersect(b)
}

/// Identifies the condition a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// One anchor per elementary description, a leaf.
    Principle1,
    /// Empty nodes are leaves; the anchor is not empty.
    Principle2,
    /// `cat` everywhere; non-empty principal nodes form the spine path.
    Principle3,
    /// A positive `funct` node has exactly one principal sibling.
    Principle4,
    /// Polarity marking matches the feature kind.
    FeatureKinds,
    /// Dominance in an elementary description forms one tree.
    Shape,
    /// Dominance and precedence are preserved.
    R1,
    /// Polarities saturate and values are preserved.
    R2,
    /// Coindexation is preserved.
    R3,
    /// Phonology and words are respected.
    R4,
    /// Every model node and feature has a source.
    R5,
}

impl Rule {
    pub fn code(self) -> &'static str {
        match self {
            Rule::Principle1 => "P1",
            Rule::Principle2 => "P2",
            Rule::Principle3 => "P3",
            Rule::Principle4 => "P4",
            Rule::FeatureKinds => "PF",
            Rule::Shape => "PT",
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub rule: Rule,
    /// Labels of the nodes involved.
    pub nodes: Vec<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.rule, self.nodes.join(","), self.message)
    }
}

/// Violations sorted by rule, then nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidityReport {
    violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn new(mut violations: Vec<Violation>) -> Self {
        violations.sort();
        violations.dedup();
        ValidityReport { violations }
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn has_rule(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }

    /// One line per violation, or `ok`.
    pub fn render(&self) -> String {
        if self.ok() {
            return "ok\n".to_owned();
        }
        let mut out = String::new();
        for v in &self.violations {
            out.push_str(&v.to_string());
            out.push('\n');
        }
        out
    }
}

struct Collector<'g> {
    graph: &'g InterpretationGraph,
    out: Vec<Violation>,
}

impl<'g> Collector<'g> {
    fn push(&mut self, rule: Rule, nodes: &[NodeRef], message: String) {
        let nodes = nodes.iter().map(|n| self.graph.label(*n)).collect();
        self.out.push(Violation {
            rule,
            nodes,
            message,
        });
    }
}

/// Full validity check of an interpretation graph. Never fails; every problem
/// becomes a report entry.
pub fn check_interpretation(graph: &InterpretationGraph) -> ValidityReport {
    let mut c = Collector {
        graph,
        out: Vec::new(),
    };
    check_structure(&mut c);
    check_features(&mut c);
    check_coindexation(&mut c);
    check_phonology(&mut c);
    check_sources(&mut c);
    ValidityReport::new(c.out)
}

fn check_structure(c: &mut Collector) {
    let g = c.graph;
    let tree = g.tree();
    for (kind, x, y) in g.dap().edges() {
        let (mx, my) = (g.interp(x), g.interp(y));
        let holds = match kind {
            Relation::ImmDom => tree.parent(my) == Some(mx),
            Relation::Dom => tree.is_proper_ancestor(mx, my),
            Relation::ImmPrec => tree.immediately_precedes(mx, my),
            Relation::Prec => tree.precedes(mx, my),
        };
        if !holds {
            c.push(
                Rule::R1,
                &[NodeRef::Dap(x), NodeRef::Dap(y)],
                format!(
                    "{} {} {} not preserved by images {} and {}",
                    kind.keyword(),
                    g.dap_node(x).label(),
                    g.dap_node(y).label(),
                    tree.node(mx).name,
                    tree.node(my).name
                ),
            );
        }
    }
}

fn check_features(c: &mut Collector) {
    let g = c.graph;
    for m in g.tree().ids() {
        let node = g.model_node(m);
        let pre = g.inverse(m);
        let mut names: BTreeSet<&str> = BTreeSet::new();
        for &d in pre {
            names.extend(g.dap_node(d).features.names());
        }
        for name in names {
            let occs: Vec<_> = pre
                .iter()
                .filter_map(|&d| g.dap_node(d).feature(name).map(|f| (d, f)))
                .collect();
            let pols: Vec<Polarity> = occs.iter().filter_map(|(_, f)| f.polarity()).collect();
            if !pols.is_empty() {
                if let SaturationVerdict::Invalid(counts) = PolarityCounts::of(&pols).verdict() {
                    let mut nodes: Vec<NodeRef> = vec![NodeRef::Model(m)];
                    nodes.extend(occs.iter().map(|(d, _)| NodeRef::Dap(*d)));
                    c.push(
                        Rule::R2,
                        &nodes,
                        format!(
                            "{} polarities do not saturate ({} positive, {} negative, {} virtual, {} saturated)",
                            name, counts.positive, counts.negative, counts.virtual_, counts.saturated
                        ),
                    );
                }
            }
            let Some(mf) = node.feature(name) else {
                c.push(
                    Rule::R2,
                    &[NodeRef::Model(m)],
                    format!("{} is missing on the model node", name),
                );
                continue;
            };
            let expected = if pols.is_empty() {
                Marking::Neutral
            } else {
                Marking::Polarized(Polarity::Saturated)
            };
            if mf.marking != expected {
                c.push(
                    Rule::R2,
                    &[NodeRef::Model(m)],
                    format!("{} is marked {} on the model, expected {}", name, mf.marking, expected),
                );
            }
            if !mf.value.is_singleton() {
                c.push(
                    Rule::R2,
                    &[NodeRef::Model(m)],
                    format!("{} value {} is not fully specified", name, mf.value),
                );
            }
            for (d, f) in &occs {
                if !f.value.is_superset(&mf.value) {
                    c.push(
                        Rule::R2,
                        &[NodeRef::Dap(*d), NodeRef::Model(m)],
                        format!("{} value {} does not preserve {}", name, f.value, mf.value),
                    );
                }
            }
        }
    }
}

fn check_coindexation(c: &mut Collector) {
    let g = c.graph;
    let full = coindex_classes(g);
    for class in full.classes() {
        if class.len() < 2 {
            continue;
        }
        let mut values = class.iter().filter_map(|o| g.feature(o.node, &o.name).map(|f| &f.value));
        let first = values.next().cloned();
        let unified = values.try_fold(first, |acc, v| acc.and_then(|a| a.intersect(v)).map(Some));
        if !matches!(unified, Some(Some(_))) {
            let nodes: Vec<NodeRef> = class.iter().map(|o| o.node).collect();
            c.push(
                Rule::R3,
                &nodes,
                "coindexed features have no common value".to_owned(),
            );
        }
    }

    // Coindexation induced by the description must match the model tags exactly.
    let induced = coindex_classes_from(
        g,
        CoindexSources {
            dap_tags: true,
            model_tags: false,
        },
    );
    for class in induced.classes() {
        let model_occs: Vec<_> = class
            .iter()
            .filter(|o| matches!(o.node, NodeRef::Model(_)))
            .collect();
        if model_occs.len() < 2 {
            continue;
        }
        let tags: BTreeSet<Option<CoindexTag>> = model_occs
            .iter()
            .map(|o| g.feature(o.node, &o.name).and_then(|f| f.coindex))
            .collect();
        if tags.len() != 1 || tags.contains(&None) {
            let nodes: Vec<NodeRef> = model_occs.iter().map(|o| o.node).collect();
            c.push(
                Rule::R3,
                &nodes,
                "coindexed description features are not coindexed in the model".to_owned(),
            );
        }
    }
    let mut by_tag: BTreeMap<CoindexTag, Vec<NodeRef>> = BTreeMap::new();
    let mut class_by_tag: BTreeMap<CoindexTag, BTreeSet<usize>> = BTreeMap::new();
    for node in g.tree().nodes() {
        for f in node.features.iter() {
            if let Some(tag) = f.coindex {
                let occ = crate::graph::FeatureOcc::new(NodeRef::Model(node.id), &f.name);
                by_tag.entry(tag).or_default().push(occ.node);
                class_by_tag
                    .entry(tag)
                    .or_default()
                    .extend(induced.class_of(&occ));
            }
        }
    }
    for (tag, classes) in class_by_tag {
        if classes.len() > 1 {
            c.push(
                Rule::R3,
                &by_tag[&tag],
                format!("model coindex {} joins features the description keeps apart", tag),
            );
        }
    }
}

fn check_phonology(c: &mut Collector) {
    let g = c.graph;
    let tree = g.tree();
    for m in tree.ids() {
        let node = tree.node(m);
        if node.phon == Phon::Any {
            c.push(
                Rule::R4,
                &[NodeRef::Model(m)],
                "model node has unconstrained phonology".to_owned(),
            );
            continue;
        }
        let realized = if tree.yield_of(m).is_empty() {
            Phon::Empty
        } else {
            Phon::NonEmpty
        };
        if node.phon != realized {
            c.push(
                Rule::R4,
                &[NodeRef::Model(m)],
                format!("marked {} but its yield is {}", node.phon, realized),
            );
        }
        if node.word.is_some() && !tree.is_leaf(m) {
            c.push(
                Rule::R4,
                &[NodeRef::Model(m)],
                "word on an internal node".to_owned(),
            );
        }
        if let Some(word) = &node.word {
            let sourced = g
                .inverse(m)
                .iter()
                .any(|&d| g.dap_node(d).anchor.as_ref() == Some(word));
            if !sourced {
                c.push(
                    Rule::R4,
                    &[NodeRef::Model(m)],
                    format!("word {} is not the image of an anchor", word),
                );
            }
        }
    }
    for d in g.dap().ids() {
        let dn = g.dap_node(d);
        let m = g.interp(d);
        let mn = tree.node(m);
        if !dn.phon.admits(mn.phon) {
            c.push(
                Rule::R4,
                &[NodeRef::Dap(d), NodeRef::Model(m)],
                format!("{} node interpreted in a {} node", dn.phon, mn.phon),
            );
        }
        if let Some(tok) = &dn.anchor {
            if mn.word.as_ref() != Some(tok) {
                c.push(
                    Rule::R4,
                    &[NodeRef::Dap(d), NodeRef::Model(m)],
                    format!("anchor {} is not realized by its image", tok),
                );
            }
        }
    }
    let positions: Vec<usize> = tree.tokens().iter().map(|t| t.position).collect();
    if positions.windows(2).any(|w| w[0] >= w[1]) {
        c.push(
            Rule::R4,
            &[NodeRef::Model(tree.root())],
            format!("surface order {:?} does not follow token positions", positions),
        );
    }
}

fn check_sources(c: &mut Collector) {
    let g = c.graph;
    for m in g.tree().ids() {
        let pre = g.inverse(m);
        if pre.is_empty() {
            c.push(
                Rule::R5,
                &[NodeRef::Model(m)],
                "model node is the image of no description node".to_owned(),
            );
            continue;
        }
        for f in g.model_node(m).features.iter() {
            if !pre.iter().any(|&d| g.dap_node(d).features.contains(&f.name)) {
                c.push(
                    Rule::R5,
                    &[NodeRef::Model(m)],
                    format!("{} has no source in the description", f.name),
                );
            }
        }
    }
}
