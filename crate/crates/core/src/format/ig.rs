use std::collections::BTreeMap;

use thiserror::Error;

use super::{parse_node_attrs, tokenize, write_attrs, SyntaxError, Tok};
use crate::dap::{Dap, DapId, DapNode, Relation};
use crate::dependency::{Dependency, DependencyGraph};
use crate::error::StructureError;
use crate::feature::{Phon, Token};
use crate::graph::InterpretationGraph;
use crate::tree::{ModelId, ModelNode, SyntaxTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Structure(#[from] StructureError),
}

pub fn write_dap(dap: &Dap) -> String {
    let mut out = String::from("dap\n");
    for n in dap.nodes() {
        out.push_str(&format!("node {}", n.label()));
        write_attrs(&mut out, n.phon, "anchor", n.anchor.as_ref(), n.features.iter());
        out.push('\n');
    }
    for (kind, a, b) in dap.edges() {
        out.push_str(&format!(
            "{} {} {}\n",
            kind.keyword(),
            dap.node(a).label(),
            dap.node(b).label()
        ));
    }
    out
}

pub fn write_tree(tree: &SyntaxTree) -> String {
    let mut out = String::from("tree\n");
    for n in tree.nodes() {
        out.push_str(&format!("node {}", n.name));
        write_attrs(&mut out, n.phon, "word", n.word.as_ref(), n.features.iter());
        out.push('\n');
    }
    for (p, c) in tree.edges() {
        out.push_str(&format!("child {} {}\n", tree.node(p).name, tree.node(c).name));
    }
    out
}

/// Canonical serialization of an interpretation graph.
pub fn write_graph(graph: &InterpretationGraph) -> String {
    let mut out = write_dap(graph.dap());
    out.push_str(&write_tree(graph.tree()));
    out.push_str("interp\n");
    for d in graph.dap().ids() {
        out.push_str(&format!(
            "{} {}\n",
            graph.dap_node(d).label(),
            graph.model_node(graph.interp(d)).name
        ));
    }
    out
}

pub fn write_dependency_graph(graph: &DependencyGraph) -> String {
    let mut out = String::from("deps\n");
    for t in graph.tokens() {
        out.push_str(&format!("token {}\n", t));
    }
    for d in graph.edges() {
        out.push_str(&format!(
            "dep {} {} {} {}\n",
            d.governor, d.dependent, d.label, d.kind
        ));
    }
    out
}

type Lines<'a> = std::iter::Peekable<std::vec::IntoIter<Vec<Tok<'a>>>>;

fn expect_header(lines: &mut Lines<'_>, header: &str) -> Result<(), SyntaxError> {
    match lines.next() {
        Some(line) if line[0].text == header && line.len() == 1 => Ok(()),
        Some(line) => Err(SyntaxError::at(
            &line[0],
            format!("expected section `{}`", header),
        )),
        None => Err(SyntaxError {
            line: 0,
            column: 0,
            message: format!("missing section `{}`", header),
        }),
    }
}

fn at_section(lines: &mut Lines<'_>) -> bool {
    match lines.peek() {
        None => true,
        Some(l) => matches!(l[0].text, "dap" | "tree" | "interp") && l.len() == 1,
    }
}

fn parse_dap_body(lines: &mut Lines<'_>) -> Result<Dap, FormatError> {
    let mut nodes: Vec<DapNode> = Vec::new();
    let mut index: BTreeMap<String, DapId> = BTreeMap::new();
    let mut edges = Vec::new();
    while !at_section(lines) {
        let line = lines.next().unwrap();
        let head = &line[0];
        if head.text == "node" {
            let label = line
                .get(1)
                .ok_or_else(|| SyntaxError::at(head, "node without a label"))?;
            let (inst, name) = label
                .text
                .split_once('.')
                .ok_or_else(|| SyntaxError::at(label, "node label must be instance.name"))?;
            let instance: usize = inst
                .parse()
                .map_err(|_| SyntaxError::at(label, "instance must be a number"))?;
            if index.contains_key(label.text) {
                return Err(SyntaxError::at(label, "duplicate node").into());
            }
            let attrs = parse_node_attrs(&line[2..], Some("anchor"), None)?;
            let id = DapId(nodes.len());
            index.insert(label.text.to_owned(), id);
            nodes.push(DapNode {
                id,
                name: name.to_owned(),
                instance,
                features: attrs.features.into_iter().collect(),
                phon: attrs.phon.unwrap_or(Phon::Any),
                anchor: attrs.token,
            });
        } else if let Some(kind) = Relation::from_keyword(head.text) {
            if line.len() != 3 {
                return Err(SyntaxError::at(head, "relation needs two nodes").into());
            }
            let a = lookup(&index, &line[1])?;
            let b = lookup(&index, &line[2])?;
            edges.push((kind, a, b));
        } else {
            return Err(SyntaxError::at(head, format!("unexpected `{}`", head.text)).into());
        }
    }
    Ok(Dap::new(nodes, edges)?)
}

fn lookup<T: Copy>(index: &BTreeMap<String, T>, tok: &Tok<'_>) -> Result<T, SyntaxError> {
    index
        .get(tok.text)
        .copied()
        .ok_or_else(|| SyntaxError::at(tok, format!("unknown node `{}`", tok.text)))
}

fn parse_tree_body(lines: &mut Lines<'_>) -> Result<SyntaxTree, FormatError> {
    let mut nodes: Vec<ModelNode> = Vec::new();
    let mut index: BTreeMap<String, ModelId> = BTreeMap::new();
    let mut edges = Vec::new();
    while !at_section(lines) {
        let line = lines.next().unwrap();
        let head = &line[0];
        match head.text {
            "node" => {
                let name = line
                    .get(1)
                    .ok_or_else(|| SyntaxError::at(head, "node without a name"))?;
                if index.contains_key(name.text) {
                    return Err(SyntaxError::at(name, "duplicate node").into());
                }
                let attrs = parse_node_attrs(&line[2..], Some("word"), None)?;
                let id = ModelId(nodes.len());
                index.insert(name.text.to_owned(), id);
                nodes.push(ModelNode {
                    id,
                    name: name.text.to_owned(),
                    features: attrs.features.into_iter().collect(),
                    phon: attrs.phon.unwrap_or(Phon::Any),
                    word: attrs.token,
                });
            }
            "child" => {
                if line.len() != 3 {
                    return Err(SyntaxError::at(head, "child needs two nodes").into());
                }
                edges.push((lookup(&index, &line[1])?, lookup(&index, &line[2])?));
            }
            other => {
                return Err(SyntaxError::at(head, format!("unexpected `{}`", other)).into());
            }
        }
    }
    Ok(SyntaxTree::new(nodes, edges)?)
}

fn finish(lines: &mut Lines<'_>) -> Result<(), SyntaxError> {
    match lines.next() {
        None => Ok(()),
        Some(l) => Err(SyntaxError::at(&l[0], "trailing content")),
    }
}

pub fn parse_dap(src: &str) -> Result<Dap, FormatError> {
    let mut lines: Lines<'_> = tokenize(src).into_iter().peekable();
    expect_header(&mut lines, "dap")?;
    let dap = parse_dap_body(&mut lines)?;
    finish(&mut lines)?;
    Ok(dap)
}

pub fn parse_tree(src: &str) -> Result<SyntaxTree, FormatError> {
    let mut lines: Lines<'_> = tokenize(src).into_iter().peekable();
    expect_header(&mut lines, "tree")?;
    let tree = parse_tree_body(&mut lines)?;
    finish(&mut lines)?;
    Ok(tree)
}

pub fn parse_graph(src: &str) -> Result<InterpretationGraph, FormatError> {
    let mut lines: Lines<'_> = tokenize(src).into_iter().peekable();
    expect_header(&mut lines, "dap")?;
    let dap = parse_dap_body(&mut lines)?;
    expect_header(&mut lines, "tree")?;
    let tree = parse_tree_body(&mut lines)?;
    expect_header(&mut lines, "interp")?;
    let dap_index: BTreeMap<String, DapId> =
        dap.nodes().iter().map(|n| (n.label(), n.id)).collect();
    let model_index: BTreeMap<String, ModelId> =
        tree.nodes().iter().map(|n| (n.name.clone(), n.id)).collect();
    let mut interp: Vec<Option<ModelId>> = vec![None; dap.len()];
    for line in lines.by_ref() {
        if line.len() != 2 {
            return Err(SyntaxError::at(&line[0], "interp lines are `description-node model-node`").into());
        }
        let d = lookup(&dap_index, &line[0])?;
        let m = lookup(&model_index, &line[1])?;
        if interp[d.0].replace(m).is_some() {
            return Err(SyntaxError::at(&line[0], "node interpreted twice").into());
        }
    }
    let found = interp.iter().filter(|m| m.is_some()).count();
    if found != dap.len() {
        return Err(StructureError::InterpNotTotal {
            expected: dap.len(),
            found,
        }
        .into());
    }
    let interp = interp.into_iter().map(Option::unwrap).collect();
    Ok(InterpretationGraph::new(dap, tree, interp)?)
}

pub fn parse_dependency_graph(src: &str) -> Result<DependencyGraph, FormatError> {
    let mut lines: Lines<'_> = tokenize(src).into_iter().peekable();
    match lines.next() {
        Some(l) if l[0].text == "deps" && l.len() == 1 => {}
        Some(l) => return Err(SyntaxError::at(&l[0], "expected section `deps`").into()),
        None => {
            return Err(SyntaxError {
                line: 0,
                column: 0,
                message: "missing section `deps`".into(),
            }
            .into())
        }
    }
    let token = |t: &Tok<'_>| -> Result<Token, SyntaxError> {
        t.text.parse().map_err(|e: String| SyntaxError::at(t, e))
    };
    let mut tokens = Vec::new();
    let mut edges = Vec::new();
    for line in lines {
        match (line[0].text, line.len()) {
            ("token", 2) => tokens.push(token(&line[1])?),
            ("dep", 5) => edges.push(Dependency {
                governor: token(&line[1])?,
                dependent: token(&line[2])?,
                label: line[3].text.to_owned(),
                kind: line[4].text.parse().map_err(|e: String| SyntaxError::at(&line[4], e))?,
            }),
            _ => return Err(SyntaxError::at(&line[0], "expected `token` or `dep` line").into()),
        }
    }
    Ok(DependencyGraph::new(tokens, edges))
}
