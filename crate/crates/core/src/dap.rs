//! Polarized tree descriptions.
//!
//! A [`Dap`] is a set of nodes related by immediate and underspecified
//! dominance and precedence. A description composed for a sentence is the
//! disjoint union of elementary descriptions, one per word; each node records
//! which elementary instance it came from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::StructureError;
use crate::feature::{Feature, FeatureStructure, Phon, Polarity, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DapId(pub usize);

impl fmt::Display for DapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DapNode {
    pub id: DapId,
    /// Local name, unique within the elementary instance.
    pub name: String,
    /// Elementary instance this node belongs to. For a composed description
    /// this is the position of the token the instance was selected for.
    pub instance: usize,
    pub features: FeatureStructure,
    pub phon: Phon,
    /// Set on the anchor only.
    pub anchor: Option<Token>,
}

impl DapNode {
    /// `instance.name`, the label used in text formats and reports.
    pub fn label(&self) -> String {
        format!("{}.{}", self.instance, self.name)
    }

    pub fn is_anchor(&self) -> bool {
        self.anchor.is_some()
    }

    pub fn feature(&self, name: &str) -> Option<&Feature> {
        self.features.get(name)
    }

    pub fn cat(&self) -> Result<&Feature, StructureError> {
        self.features
            .get("cat")
            .ok_or_else(|| StructureError::MissingCat(self.label()))
    }

    /// A node is principal iff its `cat` is positive or saturated.
    pub fn is_principal(&self) -> Result<bool, StructureError> {
        Ok(matches!(
            self.cat()?.polarity(),
            Some(Polarity::Positive) | Some(Polarity::Saturated)
        ))
    }

    /// Principal and not constrained to be empty.
    pub fn is_nonempty_principal(&self) -> Result<bool, StructureError> {
        Ok(self.phon != Phon::Empty && self.is_principal()?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    ImmDom,
    Dom,
    ImmPrec,
    Prec,
}

impl Relation {
    pub const ALL: [Relation; 4] = [
        Relation::ImmDom,
        Relation::Dom,
        Relation::ImmPrec,
        Relation::Prec,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Relation::ImmDom => "child",
            Relation::Dom => "dom",
            Relation::ImmPrec => "iprec",
            Relation::Prec => "prec",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Relation> {
        Relation::ALL.into_iter().find(|r| r.keyword() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dap {
    nodes: Vec<DapNode>,
    relations: BTreeMap<Relation, BTreeSet<(DapId, DapId)>>,
    imm_parent: Vec<Option<DapId>>,
    imm_children: Vec<Vec<DapId>>,
}

impl Dap {
    /// Builds a description, checking that ids are dense, labels unique,
    /// endpoints exist, no relation crosses two instances and immediate
    /// dominance is a forest.
    pub fn new(
        nodes: Vec<DapNode>,
        relations: impl IntoIterator<Item = (Relation, DapId, DapId)>,
    ) -> Result<Dap, StructureError> {
        let mut labels = BTreeSet::new();
        for (i, node) in nodes.iter().enumerate() {
            if node.id.0 != i {
                return Err(StructureError::NodeOrder {
                    expected: i,
                    found: node.id.0,
                });
            }
            if !labels.insert(node.label()) {
                return Err(StructureError::DuplicateLabel(node.label()));
            }
        }

        let mut rels: BTreeMap<Relation, BTreeSet<(DapId, DapId)>> =
            Relation::ALL.iter().map(|r| (*r, BTreeSet::new())).collect();
        let mut imm_parent = vec![None; nodes.len()];
        let mut imm_children = vec![Vec::new(); nodes.len()];
        for (kind, from, to) in relations {
            for end in [from, to] {
                if end.0 >= nodes.len() {
                    return Err(StructureError::UnknownNode(end.0));
                }
            }
            if nodes[from.0].instance != nodes[to.0].instance {
                return Err(StructureError::CrossEdap {
                    kind: kind.keyword(),
                    from: nodes[from.0].label(),
                    to: nodes[to.0].label(),
                });
            }
            if !rels.get_mut(&kind).unwrap().insert((from, to)) {
                continue;
            }
            if kind == Relation::ImmDom {
                if imm_parent[to.0].is_some() {
                    return Err(StructureError::MultipleParents(nodes[to.0].label()));
                }
                imm_parent[to.0] = Some(from);
                imm_children[from.0].push(to);
            }
        }

        let dap = Dap {
            nodes,
            relations: rels,
            imm_parent,
            imm_children,
        };
        dap.check_acyclic()?;
        Ok(dap)
    }

    fn check_acyclic(&self) -> Result<(), StructureError> {
        // Dominance (immediate or not) must not loop.
        let mut succ = vec![Vec::new(); self.nodes.len()];
        for rel in [Relation::ImmDom, Relation::Dom] {
            for &(a, b) in &self.relations[&rel] {
                succ[a.0].push(b.0);
            }
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some(&mut (n, ref mut next)) = stack.last_mut() {
                if *next < succ[n].len() {
                    let m = succ[n][*next];
                    *next += 1;
                    match state[m] {
                        0 => {
                            state[m] = 1;
                            stack.push((m, 0));
                        }
                        1 => {
                            return Err(StructureError::DominanceCycle(self.nodes[m].label()))
                        }
                        _ => {}
                    }
                } else {
                    state[n] = 2;
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[DapNode] {
        &self.nodes
    }

    pub fn node(&self, id: DapId) -> &DapNode {
        &self.nodes[id.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = DapId> {
        (0..self.nodes.len()).map(DapId)
    }

    pub fn relation(&self, kind: Relation) -> &BTreeSet<(DapId, DapId)> {
        &self.relations[&kind]
    }

    /// All relation edges, grouped by kind.
    pub fn edges(&self) -> impl Iterator<Item = (Relation, DapId, DapId)> + '_ {
        self.relations
            .iter()
            .flat_map(|(k, set)| set.iter().map(move |&(a, b)| (*k, a, b)))
    }

    pub fn parent(&self, id: DapId) -> Option<DapId> {
        self.imm_parent[id.0]
    }

    pub fn children(&self, id: DapId) -> &[DapId] {
        &self.imm_children[id.0]
    }

    /// Parent through immediate or underspecified dominance.
    pub fn dominance_parent(&self, id: DapId) -> Option<DapId> {
        self.imm_parent[id.0].or_else(|| {
            self.relations[&Relation::Dom]
                .iter()
                .find(|(_, b)| *b == id)
                .map(|(a, _)| *a)
        })
    }

    /// Immediate-dominance siblings of `id`, excluding `id` itself.
    pub fn siblings(&self, id: DapId) -> Vec<DapId> {
        match self.parent(id) {
            Some(p) => self
                .children(p)
                .iter()
                .copied()
                .filter(|&c| c != id)
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn find(&self, label: &str) -> Option<DapId> {
        self.nodes.iter().find(|n| n.label() == label).map(|n| n.id)
    }

    /// Instance indexes present, ascending.
    pub fn instances(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.nodes.iter().map(|n| n.instance).collect();
        set.into_iter().collect()
    }

    pub fn instance_nodes(&self, instance: usize) -> impl Iterator<Item = &DapNode> {
        self.nodes.iter().filter(move |n| n.instance == instance)
    }

    /// The anchor of an elementary instance, if it has exactly one.
    pub fn anchor_of(&self, instance: usize) -> Option<&DapNode> {
        let mut anchors = self.instance_nodes(instance).filter(|n| n.is_anchor());
        match (anchors.next(), anchors.next()) {
            (Some(a), None) => Some(a),
            _ => None,
        }
    }

    /// Disjoint union. Node ids of `other` are shifted; instance indexes are
    /// kept as they are and must not collide.
    pub fn disjoint_union(&self, other: &Dap) -> Result<Dap, StructureError> {
        let offset = self.nodes.len();
        let mut nodes = self.nodes.clone();
        nodes.extend(other.nodes.iter().cloned().map(|mut n| {
            n.id = DapId(n.id.0 + offset);
            n
        }));
        let edges = self.edges().chain(
            other
                .edges()
                .map(|(k, a, b)| (k, DapId(a.0 + offset), DapId(b.0 + offset))),
        );
        let edges: Vec<_> = edges.collect();
        Dap::new(nodes, edges)
    }
}

/// An elementary description, anchored to one word form.
///
/// Templates keep every node in instance 0; [`Edap::instantiate`] relabels
/// them for a concrete token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edap {
    pub word_form: String,
    pub dap: Dap,
}

impl Edap {
    pub fn anchors(&self) -> Vec<DapId> {
        self.dap
            .nodes()
            .iter()
            .filter(|n| n.is_anchor())
            .map(|n| n.id)
            .collect()
    }

    /// The anchor, when there is exactly one.
    pub fn anchor(&self) -> Option<DapId> {
        match self.anchors().as_slice() {
            [a] => Some(*a),
            _ => None,
        }
    }

    /// The anchor and its dominance ancestors, bottom-up.
    pub fn spine(&self) -> Vec<DapId> {
        let mut path = Vec::new();
        let mut cur = self.anchor();
        while let Some(id) = cur {
            path.push(id);
            cur = self.dap.dominance_parent(id);
        }
        path
    }

    /// Projections of the anchor, bottom-up: the maximal run of non-empty
    /// principal nodes on the spine, starting at the anchor.
    pub fn projections(&self) -> Vec<DapId> {
        self.spine()
            .into_iter()
            .take_while(|&id| self.dap.node(id).is_nonempty_principal().unwrap_or(false))
            .collect()
    }

    /// Topmost projection of the anchor.
    pub fn max_projection(&self) -> Option<DapId> {
        self.projections().last().copied()
    }

    pub fn is_projection(&self, id: DapId) -> bool {
        self.projections().contains(&id)
    }

    /// Copies the template for the token at `position`, with `tag_offset`
    /// added to every coindex tag so distinct instances never share tags.
    pub fn instantiate(&self, position: usize, tag_offset: u32) -> Dap {
        let nodes = self
            .dap
            .nodes()
            .iter()
            .map(|n| {
                let mut n = n.clone();
                n.instance = position;
                if let Some(tok) = n.anchor.as_mut() {
                    tok.position = position;
                }
                for f in n.features.iter_mut() {
                    if let Some(tag) = f.coindex.as_mut() {
                        tag.0 += tag_offset;
                    }
                }
                n
            })
            .collect();
        Dap::new(nodes, self.dap.edges().collect::<Vec<_>>())
            .expect("relabelling a valid template keeps it valid")
    }

    /// Largest coindex tag used in the template.
    pub fn max_tag(&self) -> u32 {
        self.dap
            .nodes()
            .iter()
            .flat_map(|n| n.features.iter())
            .filter_map(|f| f.coindex.map(|t| t.0))
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature::{Feature, Marking};
    use crate::feature::FeatureValue;

    fn node(id: usize, inst: usize, name: &str, cat: Polarity) -> DapNode {
        DapNode {
            id: DapId(id),
            name: name.into(),
            instance: inst,
            features: std::iter::once(Feature::new(
                "cat",
                Marking::Polarized(cat),
                FeatureValue::atom("x"),
            ))
            .collect(),
            phon: Phon::Any,
            anchor: None,
        }
    }

    #[test]
    fn principal_follows_cat_polarity() {
        assert!(node(0, 0, "a", Polarity::Positive).is_principal().unwrap());
        assert!(node(0, 0, "a", Polarity::Saturated).is_principal().unwrap());
        assert!(!node(0, 0, "a", Polarity::Virtual).is_principal().unwrap());
        assert!(!node(0, 0, "a", Polarity::Negative).is_principal().unwrap());
        let mut bare = node(0, 0, "a", Polarity::Positive);
        bare.features = FeatureStructure::new();
        assert_eq!(
            bare.is_principal(),
            Err(StructureError::MissingCat("0.a".into()))
        );
    }

    #[test]
    fn rejects_cross_instance_edges() {
        let nodes = vec![
            node(0, 0, "a", Polarity::Saturated),
            node(1, 1, "b", Polarity::Saturated),
        ];
        let err = Dap::new(nodes, [(Relation::ImmDom, DapId(0), DapId(1))]).unwrap_err();
        assert!(matches!(err, StructureError::CrossEdap { .. }));
    }

    #[test]
    fn rejects_two_parents_and_cycles() {
        let nodes = || {
            vec![
                node(0, 0, "a", Polarity::Saturated),
                node(1, 0, "b", Polarity::Saturated),
                node(2, 0, "c", Polarity::Saturated),
            ]
        };
        let err = Dap::new(
            nodes(),
            [
                (Relation::ImmDom, DapId(0), DapId(2)),
                (Relation::ImmDom, DapId(1), DapId(2)),
            ],
        )
        .unwrap_err();
        assert_eq!(err, StructureError::MultipleParents("0.c".into()));
        let err = Dap::new(
            nodes(),
            [
                (Relation::ImmDom, DapId(0), DapId(1)),
                (Relation::Dom, DapId(1), DapId(0)),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, StructureError::DominanceCycle(_)));
    }
}
