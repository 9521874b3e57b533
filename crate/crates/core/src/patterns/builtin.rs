use super::{parse_patterns, GraphPattern};

/// Source of the four patterns that read dependencies off a graph, one per
/// dependency kind.
pub const BUILTIN_PATTERNS: &str = include_str!("../../patterns/dependencies.pat");

pub fn builtin_patterns() -> Vec<GraphPattern> {
    parse_patterns(BUILTIN_PATTERNS).expect("built-in patterns parse")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependency::DependencyKind;

    #[test]
    fn one_pattern_per_kind() {
        let kinds: Vec<DependencyKind> = builtin_patterns()
            .iter()
            .map(|p| p.emit.as_ref().unwrap().kind)
            .collect();
        assert_eq!(kinds, DependencyKind::ALL.to_vec());
    }
}
