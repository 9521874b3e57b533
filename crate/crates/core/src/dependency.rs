//! Word-to-word dependency graphs. They may contain cycles and isolated
//! tokens.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::feature::Token;

/// Linearity of the interaction that produced a dependency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Linearity {
    Linear,
    NonLinear,
}

/// Whether the dependent is realized in place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Canonicity {
    Canonical,
    NonCanonical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DependencyKind {
    pub linearity: Linearity,
    pub canonicity: Canonicity,
}

impl DependencyKind {
    pub const ALL: [DependencyKind; 4] = [
        DependencyKind::new(Linearity::Linear, Canonicity::Canonical),
        DependencyKind::new(Linearity::Linear, Canonicity::NonCanonical),
        DependencyKind::new(Linearity::NonLinear, Canonicity::Canonical),
        DependencyKind::new(Linearity::NonLinear, Canonicity::NonCanonical),
    ];

    pub const fn new(linearity: Linearity, canonicity: Canonicity) -> Self {
        DependencyKind {
            linearity,
            canonicity,
        }
    }

    pub fn as_str(self) -> &'static str {
        match (self.linearity, self.canonicity) {
            (Linearity::Linear, Canonicity::Canonical) => "linear-canonical",
            (Linearity::Linear, Canonicity::NonCanonical) => "linear-noncanonical",
            (Linearity::NonLinear, Canonicity::Canonical) => "nonlinear-canonical",
            (Linearity::NonLinear, Canonicity::NonCanonical) => "nonlinear-noncanonical",
        }
    }
}

impl fmt::Display for DependencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DependencyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DependencyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown dependency kind `{}`", s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dependency {
    pub governor: Token,
    pub dependent: Token,
    pub label: String,
    pub kind: DependencyKind,
}

impl Dependency {
    fn sort_key(&self) -> (usize, &str, usize, DependencyKind) {
        (
            self.dependent.position,
            &self.label,
            self.governor.position,
            self.kind,
        )
    }
}

impl PartialOrd for Dependency {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Dependent position, then label, then governor position.
impl Ord for Dependency {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.governor.cmp(&other.governor))
            .then_with(|| self.dependent.cmp(&other.dependent))
    }
}

impl fmt::Display for Dependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({} -> {}) [{}]",
            self.label, self.governor, self.dependent, self.kind
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    tokens: Vec<Token>,
    edges: BTreeSet<Dependency>,
}

impl DependencyGraph {
    pub fn new(tokens: Vec<Token>, edges: impl IntoIterator<Item = Dependency>) -> Self {
        DependencyGraph {
            tokens,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = &Dependency> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn insert(&mut self, dep: Dependency) -> bool {
        self.edges.insert(dep)
    }

    /// Whether an edge with this label links the two word forms.
    pub fn contains(&self, label: &str, governor: &str, dependent: &str) -> bool {
        self.edges
            .iter()
            .any(|d| d.label == label && d.governor.form == governor && d.dependent.form == dependent)
    }

    /// Number of edges touching the token at `position`.
    pub fn degree(&self, position: usize) -> usize {
        self.edges
            .iter()
            .map(|d| {
                usize::from(d.governor.position == position)
                    + usize::from(d.dependent.position == position)
            })
            .sum()
    }

    /// Whether the edges, read governor to dependent, contain a directed cycle.
    pub fn has_cycle(&self) -> bool {
        let n = self
            .tokens
            .iter()
            .map(|t| t.position + 1)
            .chain(
                self.edges
                    .iter()
                    .flat_map(|d| [d.governor.position + 1, d.dependent.position + 1]),
            )
            .max()
            .unwrap_or(0);
        let mut succ = vec![Vec::new(); n];
        for d in &self.edges {
            succ[d.governor.position].push(d.dependent.position);
        }
        let mut state = vec![0u8; n];
        fn visit(v: usize, succ: &[Vec<usize>], state: &mut [u8]) -> bool {
            state[v] = 1;
            for &w in &succ[v] {
                if state[w] == 1 || (state[w] == 0 && visit(w, succ, state)) {
                    return true;
                }
            }
            state[v] = 2;
            false
        }
        (0..n).any(|v| state[v] == 0 && visit(v, &succ, &mut state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dep(g: (&str, usize), d: (&str, usize), label: &str) -> Dependency {
        Dependency {
            governor: Token::new(g.0, g.1),
            dependent: Token::new(d.0, d.1),
            label: label.into(),
            kind: DependencyKind::ALL[0],
        }
    }

    #[test]
    fn cycles_and_isolated_tokens() {
        let tokens = ["la", "fille", "que", "Jean", "connaît"]
            .iter()
            .enumerate()
            .map(|(i, f)| Token::new(*f, i))
            .collect();
        let g = DependencyGraph::new(
            tokens,
            [
                dep(("fille", 1), ("connaît", 4), "mod"),
                dep(("connaît", 4), ("fille", 1), "obj"),
            ],
        );
        assert!(g.has_cycle());
        assert_eq!(g.degree(2), 0);
        assert_eq!(g.degree(1), 2);
        let acyclic = DependencyGraph::new(vec![], [dep(("a", 0), ("b", 1), "x")]);
        assert!(!acyclic.has_cycle());
    }

    #[test]
    fn edges_sorted_by_dependent_then_label() {
        let g = DependencyGraph::new(
            vec![],
            [
                dep(("c", 2), ("b", 1), "z"),
                dep(("c", 2), ("a", 0), "y"),
                dep(("c", 2), ("b", 1), "a"),
            ],
        );
        let order: Vec<_> = g.edges().map(|d| (d.dependent.position, d.label.as_str())).collect();
        assert_eq!(order, vec![(0, "y"), (1, "a"), (1, "z")]);
    }

    #[test]
    fn kind_names_roundtrip() {
        for k in DependencyKind::ALL {
            assert_eq!(k.as_str().parse::<DependencyKind>(), Ok(k));
        }
    }
}
