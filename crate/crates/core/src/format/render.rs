use std::fmt::Write;
use std::str::FromStr;

use crate::dependency::DependencyGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Tsv,
    Dot,
    /// Interpretation-graph serialization; only meaningful where a graph is
    /// available.
    Ig,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(OutputFormat::Tsv),
            "dot" => Ok(OutputFormat::Dot),
            "ig" => Ok(OutputFormat::Ig),
            _ => Err(format!("unknown format `{}` (tsv, dot, ig)", s)),
        }
    }
}

/// One header line, then one edge per line:
/// `dep_position dep_form gov_position gov_form label kind`.
pub fn render_tsv(graph: &DependencyGraph) -> String {
    let mut out = String::from("dep_position\tdep_form\tgov_position\tgov_form\tlabel\tkind\n");
    for d in graph.edges() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            d.dependent.position, d.dependent.form, d.governor.position, d.governor.form, d.label, d.kind
        )
        .unwrap();
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Tokens as nodes in surface order, edges from governor to dependent.
pub fn render_dot(graph: &DependencyGraph) -> String {
    let mut out = String::from("digraph dependencies {\n  node [shape=plaintext];\n");
    for t in graph.tokens() {
        writeln!(out, "  t{} [label=\"{}\"];", t.position, escape(&t.form)).unwrap();
    }
    if graph.tokens().len() > 1 {
        let chain: Vec<String> = graph.tokens().iter().map(|t| format!("t{}", t.position)).collect();
        writeln!(
            out,
            "  {{ rank=same; {} [style=invis]; }}",
            chain.join(" -> ")
        )
        .unwrap();
    }
    for d in graph.edges() {
        writeln!(
            out,
            "  t{} -> t{} [label=\"{}\"];",
            d.governor.position,
            d.dependent.position,
            escape(&d.label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Renders dependencies as TSV or DOT. `Ig` has no dependency rendering and
/// falls back to the `deps` listing.
pub fn render(graph: &DependencyGraph, format: OutputFormat) -> String {
    match format {
        OutputFormat::Tsv => render_tsv(graph),
        OutputFormat::Dot => render_dot(graph),
        OutputFormat::Ig => super::write_dependency_graph(graph),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dependency::{Dependency, DependencyKind};
    use crate::feature::Token;

    fn sample() -> DependencyGraph {
        DependencyGraph::new(
            vec![Token::new("Jean", 0), Token::new("dort", 1)],
            [Dependency {
                governor: Token::new("dort", 1),
                dependent: Token::new("Jean", 0),
                label: "subj".into(),
                kind: DependencyKind::ALL[0],
            }],
        )
    }

    #[test]
    fn tsv_columns() {
        assert_eq!(
            render_tsv(&sample()),
            "dep_position\tdep_form\tgov_position\tgov_form\tlabel\tkind\n0\tJean\t1\tdort\tsubj\tlinear-canonical\n"
        );
    }

    #[test]
    fn dot_arrows_go_from_governor() {
        let dot = render_dot(&sample());
        assert!(dot.contains("t1 -> t0 [label=\"subj\"];"));
        assert!(dot.contains("t0 [label=\"Jean\"];"));
    }
}
