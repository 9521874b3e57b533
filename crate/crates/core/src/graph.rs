//! Interpretation graphs: a description, a model and the interpretation
//! mapping description nodes onto model nodes.

use std::collections::{BTreeMap, BTreeSet};

use crate::dap::{Dap, DapId, DapNode};
use crate::error::StructureError;
use crate::feature::{CoindexTag, Feature};
use crate::tree::{ModelId, ModelNode, SyntaxTree};

/// A node of either sort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeRef {
    Dap(DapId),
    Model(ModelId),
}

/// Validity is a separate predicate (see [`crate::saturation`]); construction
/// only requires the interpretation to be total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpretationGraph {
    dap: Dap,
    tree: SyntaxTree,
    interp: Vec<ModelId>,
    inverse: Vec<Vec<DapId>>,
}

impl InterpretationGraph {
    /// `interp[i]` is the image of description node `i`.
    pub fn new(
        dap: Dap,
        tree: SyntaxTree,
        interp: Vec<ModelId>,
    ) -> Result<InterpretationGraph, StructureError> {
        if interp.len() != dap.len() {
            return Err(StructureError::InterpNotTotal {
                expected: dap.len(),
                found: interp.len(),
            });
        }
        let mut inverse = vec![Vec::new(); tree.len()];
        for (d, m) in interp.iter().enumerate() {
            if m.0 >= tree.len() {
                return Err(StructureError::UnknownModelNode(m.0));
            }
            inverse[m.0].push(DapId(d));
        }
        Ok(InterpretationGraph {
            dap,
            tree,
            interp,
            inverse,
        })
    }

    pub fn dap(&self) -> &Dap {
        &self.dap
    }

    pub fn tree(&self) -> &SyntaxTree {
        &self.tree
    }

    pub fn interp(&self, d: DapId) -> ModelId {
        self.interp[d.0]
    }

    pub fn interpretation(&self) -> &[ModelId] {
        &self.interp
    }

    /// Description nodes interpreted in `m`, in id order.
    pub fn inverse(&self, m: ModelId) -> &[DapId] {
        &self.inverse[m.0]
    }

    pub fn dap_node(&self, d: DapId) -> &DapNode {
        self.dap.node(d)
    }

    pub fn model_node(&self, m: ModelId) -> &ModelNode {
        self.tree.node(m)
    }

    pub fn label(&self, n: NodeRef) -> String {
        match n {
            NodeRef::Dap(d) => self.dap.node(d).label(),
            NodeRef::Model(m) => self.tree.node(m).name.clone(),
        }
    }

    pub fn feature(&self, n: NodeRef, name: &str) -> Option<&Feature> {
        match n {
            NodeRef::Dap(d) => self.dap.node(d).feature(name),
            NodeRef::Model(m) => self.tree.node(m).feature(name),
        }
    }

    /// Rebuilds the graph with another interpretation, keeping description
    /// and model.
    pub fn with_interpretation(&self, interp: Vec<ModelId>) -> Result<Self, StructureError> {
        InterpretationGraph::new(self.dap.clone(), self.tree.clone(), interp)
    }

    /// A text key that ignores model node names and the numbering of model
    /// coindex tags. Two graphs over the same description have equal keys iff
    /// their models are isomorphic in a way that preserves the interpretation.
    pub fn canonical_form(&self) -> String {
        let order = self.tree.preorder();
        let mut rank = vec![0usize; self.tree.len()];
        for (i, m) in order.iter().enumerate() {
            rank[m.0] = i;
        }
        let mut tags: BTreeMap<CoindexTag, usize> = BTreeMap::new();
        let mut out = String::new();
        for &m in &order {
            let node = self.tree.node(m);
            let parent = match self.tree.parent(m) {
                Some(p) => rank[p.0].to_string(),
                None => "-".to_owned(),
            };
            out.push_str(&format!("{} {} phon={}", rank[m.0], parent, node.phon));
            if let Some(w) = &node.word {
                out.push_str(&format!(" word={}", w));
            }
            for f in node.features.iter() {
                out.push_str(&format!(" {}{}{}", f.name, f.marking, f.value));
                if let Some(t) = f.coindex {
                    let next = tags.len() + 1;
                    out.push_str(&format!("#{}", tags.entry(t).or_insert(next)));
                }
            }
            out.push('\n');
        }
        for d in self.dap.ids() {
            out.push_str(&format!("{} {}\n", self.dap.node(d).label(), rank[self.interp(d).0]));
        }
        out
    }
}

/// One occurrence of a named feature on a node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureOcc {
    pub node: NodeRef,
    pub name: String,
}

impl FeatureOcc {
    pub fn new(node: NodeRef, name: impl Into<String>) -> Self {
        FeatureOcc {
            node,
            name: name.into(),
        }
    }
}

/// Partition of all feature occurrences of a graph into coindexation classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoindexClasses {
    class_of: BTreeMap<FeatureOcc, usize>,
    classes: Vec<BTreeSet<FeatureOcc>>,
}

impl CoindexClasses {
    pub fn class_of(&self, occ: &FeatureOcc) -> Option<usize> {
        self.class_of.get(occ).copied()
    }

    pub fn class(&self, idx: usize) -> &BTreeSet<FeatureOcc> {
        &self.classes[idx]
    }

    pub fn classes(&self) -> &[BTreeSet<FeatureOcc>] {
        &self.classes
    }

    pub fn same_class(&self, a: &FeatureOcc, b: &FeatureOcc) -> bool {
        match (self.class_of(a), self.class_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// Members of the class of `occ`, including `occ`.
    pub fn members(&self, occ: &FeatureOcc) -> impl Iterator<Item = &FeatureOcc> {
        self.class_of(occ)
            .into_iter()
            .flat_map(move |c| self.classes[c].iter())
    }
}

pub(crate) struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller representative wins, so roots are deterministic.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Which sources of coindexation to close over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct CoindexSources {
    pub dap_tags: bool,
    pub model_tags: bool,
}

/// Coindexation classes of all feature occurrences: shared description tags,
/// shared model tags, and propagation of a tagged description feature to the
/// same-named feature of its image.
pub fn coindex_classes(graph: &InterpretationGraph) -> CoindexClasses {
    coindex_classes_from(
        graph,
        CoindexSources {
            dap_tags: true,
            model_tags: true,
        },
    )
}

pub(crate) fn coindex_classes_from(
    graph: &InterpretationGraph,
    sources: CoindexSources,
) -> CoindexClasses {
    let mut occs: Vec<(FeatureOcc, Option<CoindexTag>)> = Vec::new();
    for node in graph.dap().nodes() {
        for f in node.features.iter() {
            occs.push((FeatureOcc::new(NodeRef::Dap(node.id), &f.name), f.coindex));
        }
    }
    let first_model = occs.len();
    for node in graph.tree().nodes() {
        for f in node.features.iter() {
            occs.push((FeatureOcc::new(NodeRef::Model(node.id), &f.name), f.coindex));
        }
    }
    let index: BTreeMap<FeatureOcc, usize> = occs
        .iter()
        .enumerate()
        .map(|(i, (o, _))| (o.clone(), i))
        .collect();

    let mut sets = DisjointSets::new(occs.len());
    let mut by_dap_tag: BTreeMap<CoindexTag, usize> = BTreeMap::new();
    let mut by_model_tag: BTreeMap<CoindexTag, usize> = BTreeMap::new();
    for (i, (occ, tag)) in occs.iter().enumerate() {
        let Some(tag) = tag else { continue };
        let is_model = i >= first_model;
        if is_model && sources.model_tags {
            match by_model_tag.get(tag) {
                Some(&j) => sets.union(i, j),
                None => {
                    by_model_tag.insert(*tag, i);
                }
            }
        }
        if !is_model && sources.dap_tags {
            match by_dap_tag.get(tag) {
                Some(&j) => sets.union(i, j),
                None => {
                    by_dap_tag.insert(*tag, i);
                }
            }
            if let NodeRef::Dap(d) = occ.node {
                let image = FeatureOcc::new(NodeRef::Model(graph.interp(d)), &occ.name);
                if let Some(&j) = index.get(&image) {
                    sets.union(i, j);
                }
            }
        }
    }

    let mut root_to_class: BTreeMap<usize, usize> = BTreeMap::new();
    let mut classes: Vec<BTreeSet<FeatureOcc>> = Vec::new();
    let mut class_of = BTreeMap::new();
    for (i, (occ, _)) in occs.iter().enumerate() {
        let root = sets.find(i);
        let c = *root_to_class.entry(root).or_insert_with(|| {
            classes.push(BTreeSet::new());
            classes.len() - 1
        });
        classes[c].insert(occ.clone());
        class_of.insert(occ.clone(), c);
    }
    CoindexClasses { class_of, classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dap::Relation;
    use crate::feature::{FeatureStructure, FeatureValue, Marking, Phon, Polarity};

    fn feat(name: &str, tag: Option<u32>) -> Feature {
        let marking = if name == "cat" {
            Marking::Polarized(Polarity::Saturated)
        } else {
            Marking::Neutral
        };
        let f = Feature::new(name, marking, FeatureValue::atom("v"));
        match tag {
            Some(t) => f.with_coindex(CoindexTag(t)),
            None => f,
        }
    }

    fn dnode(id: usize, name: &str, feats: Vec<Feature>) -> DapNode {
        DapNode {
            id: DapId(id),
            name: name.into(),
            instance: 0,
            features: feats.into_iter().collect(),
            phon: Phon::Any,
            anchor: None,
        }
    }

    fn mnode(id: usize, name: &str, feats: Vec<Feature>) -> ModelNode {
        ModelNode {
            id: ModelId(id),
            name: name.into(),
            features: feats.into_iter().collect::<FeatureStructure>(),
            phon: Phon::NonEmpty,
            word: None,
        }
    }

    fn graph(tagged: bool) -> InterpretationGraph {
        let t = |n| if tagged { Some(n) } else { None };
        let dap = Dap::new(
            vec![
                dnode(0, "R", vec![feat("cat", None)]),
                dnode(1, "A", vec![feat("cat", None), feat("ref", t(9))]),
                dnode(2, "B", vec![feat("cat", None), feat("ref", t(9))]),
            ],
            [
                (Relation::ImmDom, DapId(0), DapId(1)),
                (Relation::ImmDom, DapId(0), DapId(2)),
            ],
        )
        .unwrap();
        let tree = SyntaxTree::new(
            vec![
                mnode(0, "R", vec![feat("cat", None)]),
                mnode(1, "A", vec![feat("cat", None), feat("ref", t(1))]),
                mnode(2, "B", vec![feat("cat", None), feat("ref", t(1))]),
            ],
            [(ModelId(0), ModelId(1)), (ModelId(0), ModelId(2))],
        )
        .unwrap();
        InterpretationGraph::new(dap, tree, vec![ModelId(0), ModelId(1), ModelId(2)]).unwrap()
    }

    #[test]
    fn tags_and_propagation() {
        let g = graph(true);
        let cc = coindex_classes(&g);
        let a = FeatureOcc::new(NodeRef::Dap(DapId(1)), "ref");
        let b = FeatureOcc::new(NodeRef::Dap(DapId(2)), "ref");
        let mb = FeatureOcc::new(NodeRef::Model(ModelId(2)), "ref");
        assert!(cc.same_class(&a, &b));
        assert!(cc.same_class(&a, &mb));
        assert_eq!(cc.members(&a).count(), 4);
        let cat = FeatureOcc::new(NodeRef::Dap(DapId(1)), "cat");
        assert!(!cc.same_class(&a, &cat));
    }

    #[test]
    fn untagged_graph_has_singletons() {
        let g = graph(false);
        let cc = coindex_classes(&g);
        assert!(cc.classes().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn closure_is_idempotent() {
        let g = graph(true);
        let cc = coindex_classes(&g);
        assert_eq!(cc, coindex_classes(&g));
        for class in cc.classes() {
            for a in class {
                for b in class {
                    assert!(cc.same_class(a, b));
                }
            }
        }
    }

    #[test]
    fn interp_must_be_total() {
        let g = graph(true);
        let err = InterpretationGraph::new(g.dap().clone(), g.tree().clone(), vec![ModelId(0)]);
        assert!(matches!(err, Err(StructureError::InterpNotTotal { .. })));
        let err = g.with_interpretation(vec![ModelId(0), ModelId(1), ModelId(7)]);
        assert_eq!(err, Err(StructureError::UnknownModelNode(7)));
    }

    #[test]
    fn canonical_form_ignores_names_and_tag_numbers() {
        let g = graph(true);
        let renamed: Vec<ModelNode> = g
            .tree()
            .nodes()
            .iter()
            .cloned()
            .map(|mut n| {
                n.name = format!("x{}", n.name);
                for f in n.features.iter_mut() {
                    if let Some(t) = f.coindex.as_mut() {
                        t.0 = 40;
                    }
                }
                n
            })
            .collect();
        let tree = SyntaxTree::new(renamed, g.tree().edges().collect::<Vec<_>>()).unwrap();
        let h = InterpretationGraph::new(g.dap().clone(), tree, g.interpretation().to_vec()).unwrap();
        assert_ne!(g, h);
        assert_eq!(g.canonical_form(), h.canonical_form());
        let moved = g.with_interpretation(vec![ModelId(0), ModelId(2), ModelId(1)]).unwrap();
        assert_ne!(g.canonical_form(), moved.canonical_form());
    }
}
