//! Fully specified syntax trees, the models of descriptions.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::StructureError;
use crate::feature::{Feature, FeatureStructure, Phon, Token};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelId(pub usize);

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelNode {
    pub id: ModelId,
    /// Display name, unique within the tree.
    pub name: String,
    pub features: FeatureStructure,
    pub phon: Phon,
    /// The word realized at this node. Only non-empty leaves carry one.
    pub word: Option<Token>,
}

impl ModelNode {
    pub fn feature(&self, name: &str) -> Option<&Feature> {
        self.features.get(name)
    }

    pub fn is_empty(&self) -> bool {
        self.phon == Phon::Empty
    }
}

/// An ordered tree. Sibling order is the order of the child lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxTree {
    nodes: Vec<ModelNode>,
    parent: Vec<Option<ModelId>>,
    children: Vec<Vec<ModelId>>,
    root: ModelId,
}

impl SyntaxTree {
    /// `edges` are `(parent, child)` pairs; the order in which the children of
    /// one parent appear is their sibling order.
    pub fn new(
        nodes: Vec<ModelNode>,
        edges: impl IntoIterator<Item = (ModelId, ModelId)>,
    ) -> Result<SyntaxTree, StructureError> {
        let mut names = BTreeSet::new();
        for (i, n) in nodes.iter().enumerate() {
            if n.id.0 != i {
                return Err(StructureError::NodeOrder {
                    expected: i,
                    found: n.id.0,
                });
            }
            if !names.insert(n.name.as_str()) {
                return Err(StructureError::DuplicateLabel(n.name.clone()));
            }
        }
        let mut parent = vec![None; nodes.len()];
        let mut children = vec![Vec::new(); nodes.len()];
        for (p, c) in edges {
            for end in [p, c] {
                if end.0 >= nodes.len() {
                    return Err(StructureError::UnknownNode(end.0));
                }
            }
            if parent[c.0].is_some() {
                return Err(StructureError::MultipleParents(nodes[c.0].name.clone()));
            }
            parent[c.0] = Some(p);
            children[p.0].push(c);
        }
        let mut roots = (0..nodes.len()).filter(|&i| parent[i].is_none());
        let root = match (roots.next(), roots.next()) {
            (None, _) => return Err(StructureError::NoRoot),
            (Some(r), None) => ModelId(r),
            (Some(a), Some(b)) => {
                return Err(StructureError::MultipleRoots(
                    nodes[a].name.clone(),
                    nodes[b].name.clone(),
                ))
            }
        };
        let tree = SyntaxTree {
            nodes,
            parent,
            children,
            root,
        };
        let reached = tree.preorder();
        if reached.len() != tree.nodes.len() {
            let seen: BTreeSet<_> = reached.into_iter().collect();
            let missing = tree.ids().find(|id| !seen.contains(id)).unwrap();
            return Err(StructureError::Disconnected(tree.node(missing).name.clone()));
        }
        Ok(tree)
    }

    pub fn nodes(&self) -> &[ModelNode] {
        &self.nodes
    }

    pub fn node(&self, id: ModelId) -> &ModelNode {
        &self.nodes[id.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ModelId> {
        (0..self.nodes.len()).map(ModelId)
    }

    pub fn root(&self) -> ModelId {
        self.root
    }

    pub fn parent(&self, id: ModelId) -> Option<ModelId> {
        self.parent[id.0]
    }

    pub fn children(&self, id: ModelId) -> &[ModelId] {
        &self.children[id.0]
    }

    pub fn is_leaf(&self, id: ModelId) -> bool {
        self.children[id.0].is_empty()
    }

    /// `(parent, child)` pairs, parents in id order, children in sibling order.
    pub fn edges(&self) -> impl Iterator<Item = (ModelId, ModelId)> + '_ {
        self.ids()
            .flat_map(move |p| self.children(p).iter().map(move |&c| (p, c)))
    }

    pub fn find(&self, name: &str) -> Option<ModelId> {
        self.nodes.iter().find(|n| n.name == name).map(|n| n.id)
    }

    pub fn preorder(&self) -> Vec<ModelId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        let mut seen = vec![false; self.nodes.len()];
        while let Some(n) = stack.pop() {
            if std::mem::replace(&mut seen[n.0], true) {
                continue;
            }
            out.push(n);
            stack.extend(self.children(n).iter().rev().copied());
        }
        out
    }

    /// Ancestors of `id`, nearest first, excluding `id`.
    pub fn ancestors(&self, id: ModelId) -> Vec<ModelId> {
        let mut out = Vec::new();
        let mut cur = self.parent(id);
        while let Some(p) = cur {
            out.push(p);
            cur = self.parent(p);
        }
        out
    }

    /// Whether `a` is a proper ancestor of `b`.
    pub fn is_proper_ancestor(&self, a: ModelId, b: ModelId) -> bool {
        self.ancestors(b).contains(&a)
    }

    /// `a` lies entirely to the left of `b`: neither dominates the other and,
    /// below their lowest common ancestor, the branch of `a` comes first.
    pub fn precedes(&self, a: ModelId, b: ModelId) -> bool {
        if a == b || self.is_proper_ancestor(a, b) || self.is_proper_ancestor(b, a) {
            return false;
        }
        let mut path_a = self.ancestors(a);
        path_a.insert(0, a);
        let mut path_b = self.ancestors(b);
        path_b.insert(0, b);
        // Find the children of the lowest common ancestor on each path.
        for (i, &x) in path_a.iter().enumerate().skip(1) {
            if let Some(j) = path_b.iter().position(|&y| y == x) {
                let ca = path_a[i - 1];
                let cb = path_b[j - 1];
                let sibs = self.children(x);
                let ia = sibs.iter().position(|&c| c == ca).unwrap();
                let ib = sibs.iter().position(|&c| c == cb).unwrap();
                return ia < ib;
            }
        }
        false
    }

    /// `a` and `b` are siblings and `b` comes right after `a`.
    pub fn immediately_precedes(&self, a: ModelId, b: ModelId) -> bool {
        match (self.parent(a), self.parent(b)) {
            (Some(pa), Some(pb)) if pa == pb => {
                let sibs = self.children(pa);
                let ia = sibs.iter().position(|&c| c == a).unwrap();
                sibs.get(ia + 1) == Some(&b)
            }
            _ => false,
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<ModelId> {
        self.preorder()
            .into_iter()
            .filter(|&n| self.is_leaf(n))
            .collect()
    }

    /// Words of the leaves, left to right.
    pub fn tokens(&self) -> Vec<Token> {
        self.leaves()
            .into_iter()
            .filter_map(|n| self.node(n).word.clone())
            .collect()
    }

    /// Words in the subtree of `id`, left to right.
    pub fn yield_of(&self, id: ModelId) -> Vec<Token> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            if let Some(w) = &self.node(n).word {
                out.push(w.clone());
            }
            stack.extend(self.children(n).iter().rev().copied());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mnode(id: usize, name: &str) -> ModelNode {
        ModelNode {
            id: ModelId(id),
            name: name.into(),
            features: FeatureStructure::new(),
            phon: Phon::NonEmpty,
            word: None,
        }
    }

    fn sample() -> SyntaxTree {
        // S(A(a1, a2), B)
        let nodes = vec![mnode(0, "S"), mnode(1, "A"), mnode(2, "B"), mnode(3, "a1"), mnode(4, "a2")];
        SyntaxTree::new(
            nodes,
            [
                (ModelId(0), ModelId(1)),
                (ModelId(0), ModelId(2)),
                (ModelId(1), ModelId(3)),
                (ModelId(1), ModelId(4)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn order_relations() {
        let t = sample();
        assert_eq!(t.preorder(), vec![ModelId(0), ModelId(1), ModelId(3), ModelId(4), ModelId(2)]);
        assert!(t.precedes(ModelId(3), ModelId(2)));
        assert!(t.precedes(ModelId(1), ModelId(2)));
        assert!(!t.precedes(ModelId(2), ModelId(4)));
        assert!(!t.precedes(ModelId(0), ModelId(2)));
        assert!(t.immediately_precedes(ModelId(3), ModelId(4)));
        assert!(!t.immediately_precedes(ModelId(4), ModelId(2)));
        assert!(t.is_proper_ancestor(ModelId(0), ModelId(4)));
        assert!(!t.is_proper_ancestor(ModelId(4), ModelId(4)));
    }

    #[test]
    fn shape_errors() {
        let two_roots = SyntaxTree::new(vec![mnode(0, "a"), mnode(1, "b")], []);
        assert!(matches!(two_roots, Err(StructureError::MultipleRoots(..))));
        let cycle = SyntaxTree::new(
            vec![mnode(0, "r"), mnode(1, "a"), mnode(2, "b")],
            [(ModelId(1), ModelId(2)), (ModelId(2), ModelId(1))],
        );
        assert!(matches!(cycle, Err(StructureError::Disconnected(_))));
        let dup = SyntaxTree::new(vec![mnode(0, "a"), mnode(1, "a")], [(ModelId(0), ModelId(1))]);
        assert!(matches!(dup, Err(StructureError::DuplicateLabel(_))));
    }
}
