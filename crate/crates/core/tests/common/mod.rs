#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;

use igdep::dap::Relation;
use igdep::feature::{Marking, Phon, Polarity};
use igdep::format::parse_graph;
use igdep::graph::{InterpretationGraph, NodeRef};
use igdep::patterns::{FeatureConstraint, GraphPattern, NodePattern, Sort};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub struct Entry {
    pub name: String,
    pub sentence: String,
    pub source: String,
    pub graph: InterpretationGraph,
}

pub fn corpus() -> Vec<Entry> {
    let list = std::fs::read_to_string(corpus_dir().join("sentences.tsv")).unwrap();
    list.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (name, sentence) = l.split_once('\t').unwrap();
            let source = std::fs::read_to_string(corpus_dir().join(format!("{}.ig", name))).unwrap();
            let graph = parse_graph(&source).unwrap();
            Entry {
                name: name.to_owned(),
                sentence: sentence.to_owned(),
                source,
                graph,
            }
        })
        .collect()
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn igdep(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_igdep")).args(args).output().unwrap();
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// One TSV row: dependent, governor, label, kind.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub dep: (usize, String),
    pub gov: (usize, String),
    pub label: String,
    pub kind: String,
}

impl Edge {
    pub fn is(&self, label: &str, gov: &str, dep: &str) -> bool {
        self.label == label && self.gov.1 == gov && self.dep.1 == dep
    }
}

pub fn parse_tsv(text: &str) -> Vec<Edge> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("dep_position\tdep_form\tgov_position\tgov_form\tlabel\tkind")
    );
    lines
        .map(|l| {
            let c: Vec<&str> = l.split('\t').collect();
            assert_eq!(c.len(), 6, "{}", l);
            Edge {
                dep: (c[0].parse().unwrap(), c[1].to_owned()),
                gov: (c[2].parse().unwrap(), c[3].to_owned()),
                label: c[4].to_owned(),
                kind: c[5].to_owned(),
            }
        })
        .collect()
}

/// Saturation by enumeration: some element is the saturated one, or some
/// ordered pair is the positive/negative pair, and everything else is
/// virtual.
pub fn saturates_by_search(pols: &[Polarity]) -> Option<&'static str> {
    let rest_virtual = |skip: &[usize]| {
        pols.iter()
            .enumerate()
            .all(|(i, p)| skip.contains(&i) || *p == Polarity::Virtual)
    };
    for i in 0..pols.len() {
        if pols[i] == Polarity::Saturated && rest_virtual(&[i]) {
            return Some("nonlinear");
        }
        for j in 0..pols.len() {
            if i != j && pols[i] == Polarity::Positive && pols[j] == Polarity::Negative && rest_virtual(&[i, j]) {
                return Some("linear");
            }
        }
    }
    None
}

// Random interpretation graphs and patterns.

const MARKINGS: [&str; 5] = ["->", "<-", "~", "<->", "="];
const CATS: [&str; 3] = ["a", "b", "c"];
const FUNCTS: [&str; 2] = ["subj", "obj"];
const REFS: [&str; 2] = ["anim", "inanim"];

fn value<R: Rng>(rng: &mut R, domain: &[&str]) -> String {
    loop {
        let picked: Vec<&str> = domain.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        if !picked.is_empty() {
            return picked.join("|");
        }
    }
}

fn features<R: Rng>(rng: &mut R, model: bool) -> String {
    let mark = |rng: &mut R| {
        if model {
            *["<->", "="].choose(rng).unwrap()
        } else {
            *MARKINGS.choose(rng).unwrap()
        }
    };
    let mut feats = vec![(format!("cat{}{}", mark(rng), value(rng, &CATS)), 0.2)];
    if rng.gen_bool(0.5) {
        feats.push((format!("funct{}{}", mark(rng), value(rng, &FUNCTS)), 0.2));
    }
    if rng.gen_bool(0.5) {
        feats.push((format!("ref={}", value(rng, &REFS)), 0.6));
    }
    let mut out = String::new();
    for (f, p) in feats {
        out.push(' ');
        out.push_str(&f);
        if rng.gen_bool(p) {
            out.push_str(&format!("#{}", rng.gen_range(1..=3)));
        }
    }
    out
}

/// A random graph, structurally well-formed but usually invalid.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize) -> InterpretationGraph {
    let nd = rng.gen_range(1..=max_nodes);
    let nm = rng.gen_range(1..=max_nodes);
    let inst: Vec<usize> = (0..nd).map(|_| rng.gen_range(0..3)).collect();
    let mut src = String::from("dap\n");
    for (i, inst_i) in inst.iter().enumerate() {
        let phon = *["empty", "nonempty", "any"].choose(rng).unwrap();
        src.push_str(&format!("node {}.D{} phon={}{}\n", inst_i, i, phon, features(rng, false)));
    }
    for i in 0..nd {
        let earlier: Vec<usize> = (0..i).filter(|&j| inst[j] == inst[i]).collect();
        if !earlier.is_empty() && rng.gen_bool(0.7) {
            let p = *earlier.choose(rng).unwrap();
            src.push_str(&format!("child {}.D{} {}.D{}\n", inst[p], p, inst[i], i));
        }
    }
    src.push_str("tree\n");
    for i in 0..nm {
        let phon = *["empty", "nonempty"].choose(rng).unwrap();
        src.push_str(&format!("node M{} phon={}{}\n", i, phon, features(rng, true)));
    }
    for i in 1..nm {
        src.push_str(&format!("child M{} M{}\n", rng.gen_range(0..i), i));
    }
    src.push_str("interp\n");
    for (i, inst_i) in inst.iter().enumerate() {
        src.push_str(&format!("{}.D{} M{}\n", inst_i, i, rng.gen_range(0..nm)));
    }
    parse_graph(&src).unwrap_or_else(|e| panic!("{}\n{}", e, src))
}

fn random_constraint<R: Rng>(rng: &mut R) -> FeatureConstraint {
    let (name, domain): (&str, &[&str]) = *[("cat", &CATS[..]), ("funct", &FUNCTS[..]), ("ref", &REFS[..])]
        .choose(rng)
        .unwrap();
    let mut c = FeatureConstraint::present(name);
    if rng.gen_bool(0.4) {
        let atoms: Vec<String> = value(rng, domain).split('|').map(str::to_owned).collect();
        c = c.with_values(igdep::feature::FeatureValue::new(atoms).unwrap());
    }
    if rng.gen_bool(0.4) {
        let mut ms: Vec<Marking> = MARKINGS
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .map(|s| Marking::from_symbol(s).unwrap())
            .collect();
        if ms.is_empty() {
            ms.push(Marking::Polarized(Polarity::Saturated));
        }
        c = c.with_markings(ms);
    }
    c
}

pub fn random_pattern<R: Rng>(rng: &mut R, max_nodes: usize) -> GraphPattern {
    let k = rng.gen_range(1..=max_nodes);
    let mut p = GraphPattern::new("random");
    for i in 0..k {
        let sort = if rng.gen_bool(0.5) { Sort::Dap } else { Sort::Model };
        let mut n = NodePattern::new(format!("X{}", i), sort);
        for _ in 0..rng.gen_range(0..=2) {
            n = n.feature(random_constraint(rng));
        }
        if rng.gen_bool(0.3) {
            n = n.phon(*[Phon::Empty, Phon::NonEmpty].choose(rng).unwrap());
        }
        p.nodes.push(n);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let a = rng.gen_range(0..k);
        let b = rng.gen_range(0..k);
        let (na, nb) = (&p.nodes[a], &p.nodes[b]);
        match rng.gen_range(0..3) {
            0 if na.sort == Sort::Dap && nb.sort == Sort::Model => p.interp.push((na.id.clone(), nb.id.clone())),
            1 if na.sort == nb.sort => p.child.push((na.id.clone(), nb.id.clone())),
            2 => p.coref.push(igdep::patterns::Coref {
                a: na.id.clone(),
                b: nb.id.clone(),
                feature: (*["ref", "cat"].choose(rng).unwrap()).to_owned(),
            }),
            _ => {}
        }
    }
    p
}

/// Coindexation classes computed from scratch: description tags, model tags
/// and tagged description features reaching their image.
pub fn coref_oracle(graph: &InterpretationGraph) -> BTreeMap<(NodeRef, String), usize> {
    let mut occs: Vec<(NodeRef, String, Option<u32>)> = Vec::new();
    for n in graph.dap().nodes() {
        for f in n.features.iter() {
            occs.push((NodeRef::Dap(n.id), f.name.clone(), f.coindex.map(|t| t.0)));
        }
    }
    for n in graph.tree().nodes() {
        for f in n.features.iter() {
            occs.push((NodeRef::Model(n.id), f.name.clone(), f.coindex.map(|t| t.0)));
        }
    }
    let mut class: Vec<usize> = (0..occs.len()).collect();
    let relabel = |class: &mut Vec<usize>, a: usize, b: usize| {
        let (from, to) = (class[a].max(class[b]), class[a].min(class[b]));
        for c in class.iter_mut() {
            if *c == from {
                *c = to;
            }
        }
    };
    for i in 0..occs.len() {
        for j in 0..occs.len() {
            let (ni, fi, ti) = &occs[i];
            let (nj, fj, tj) = &occs[j];
            let same_sort = matches!((ni, nj), (NodeRef::Dap(_), NodeRef::Dap(_)) | (NodeRef::Model(_), NodeRef::Model(_)));
            let shared_tag = same_sort && ti.is_some() && ti == tj;
            let image = match (ni, nj) {
                (NodeRef::Dap(d), NodeRef::Model(m)) => ti.is_some() && graph.interp(*d) == *m && fi == fj,
                _ => false,
            };
            if shared_tag || image {
                relabel(&mut class, i, j);
            }
        }
    }
    occs.into_iter()
        .zip(class)
        .map(|((n, f, _), c)| ((n, f), c))
        .collect()
}

fn unary_oracle(p: &NodePattern, graph: &InterpretationGraph, n: NodeRef) -> bool {
    let (sort, phon, feats) = match n {
        NodeRef::Dap(d) => (Sort::Dap, graph.dap_node(d).phon, &graph.dap_node(d).features),
        NodeRef::Model(m) => (Sort::Model, graph.model_node(m).phon, &graph.model_node(m).features),
    };
    if sort != p.sort {
        return false;
    }
    if let Some(want) = p.phon {
        if want != phon {
            return false;
        }
    }
    p.features.iter().all(|c| {
        let Some(f) = feats.get(&c.name) else {
            return false;
        };
        let values_ok = match &c.values {
            None => true,
            Some(v) => {
                let have: BTreeSet<&str> = f.value.atoms().collect();
                v.atoms().any(|a| have.contains(a))
            }
        };
        let marking_ok = c.markings.as_ref().is_none_or(|ms| ms.contains(&f.marking));
        values_ok && marking_ok
    })
}

/// Every sort-respecting assignment that satisfies all constraints, found
/// by trying them all.
pub fn brute_force_matches(p: &GraphPattern, graph: &InterpretationGraph) -> Vec<Vec<NodeRef>> {
    let coref = coref_oracle(graph);
    let dap: Vec<NodeRef> = graph.dap().ids().map(NodeRef::Dap).collect();
    let model: Vec<NodeRef> = graph.tree().ids().map(NodeRef::Model).collect();
    let domains: Vec<&Vec<NodeRef>> = p
        .nodes
        .iter()
        .map(|n| if n.sort == Sort::Dap { &dap } else { &model })
        .collect();
    let idx = |id: &str| p.nodes.iter().position(|n| n.id == id).unwrap();
    let imm: &BTreeSet<_> = graph.dap().relation(Relation::ImmDom);
    let mut out = Vec::new();
    let mut counter = vec![0usize; p.nodes.len()];
    if domains.iter().any(|d| d.is_empty()) {
        return out;
    }
    loop {
        let a: Vec<NodeRef> = counter.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
        let ok = p.nodes.iter().zip(&a).all(|(n, &x)| unary_oracle(n, graph, x))
            && p.interp.iter().all(|(d, m)| match (a[idx(d)], a[idx(m)]) {
                (NodeRef::Dap(d), NodeRef::Model(m)) => graph.interp(d) == m,
                _ => false,
            })
            && p.child.iter().all(|(x, y)| match (a[idx(x)], a[idx(y)]) {
                (NodeRef::Dap(x), NodeRef::Dap(y)) => imm.contains(&(x, y)),
                (NodeRef::Model(x), NodeRef::Model(y)) => graph.tree().children(x).contains(&y),
                _ => false,
            })
            && p.coref.iter().all(|c| {
                let ka = (a[idx(&c.a)], c.feature.clone());
                let kb = (a[idx(&c.b)], c.feature.clone());
                matches!((coref.get(&ka), coref.get(&kb)), (Some(x), Some(y)) if x == y)
            });
        if ok {
            out.push(a);
        }
        // Odometer step.
        let mut k = counter.len();
        loop {
            if k == 0 {
                out.sort();
                out.dedup();
                return out;
            }
            k -= 1;
            counter[k] += 1;
            if counter[k] < domains[k].len() {
                break;
            }
            counter[k] = 0;
        }
    }
}

// Single-edit perturbations of a serialized graph.

fn sections(src: &str) -> (Vec<String>, Vec<String>, Vec<String>) {
    let mut parts: [Vec<String>; 3] = Default::default();
    let mut cur = 0;
    for line in src.lines() {
        match line {
            "dap" => cur = 0,
            "tree" => cur = 1,
            "interp" => cur = 2,
            _ => parts[cur].push(line.to_owned()),
        }
    }
    let [a, b, c] = parts;
    (a, b, c)
}

fn join(dap: &[String], tree: &[String], interp: &[String]) -> String {
    let mut out = String::from("dap\n");
    for l in dap {
        out.push_str(l);
        out.push('\n');
    }
    out.push_str("tree\n");
    for l in tree {
        out.push_str(l);
        out.push('\n');
    }
    out.push_str("interp\n");
    for l in interp {
        out.push_str(l);
        out.push('\n');
    }
    out
}

fn flip(token: &str) -> Option<String> {
    for (from, to) in [("<->", "<-"), ("->", "~"), ("<-", "->"), ("~", "<->")] {
        if let Some(pos) = token.find(from) {
            // `<->` contains both `<-` and `->`; match it first.
            let mut out = token.to_owned();
            out.replace_range(pos..pos + from.len(), to);
            return Some(out);
        }
    }
    None
}

/// A fixed suite of ten single edits: four interpretation redirects, four
/// polarity flips and two broken coindexations.
pub fn perturbations(src: &str) -> Vec<(String, String)> {
    let (dap, tree, interp) = sections(src);
    let model_names: Vec<String> = tree
        .iter()
        .filter(|l| l.starts_with("node "))
        .map(|l| l.split_whitespace().nth(1).unwrap().to_owned())
        .collect();
    let mut out = Vec::new();

    let n = interp.len();
    for k in [0, n / 3, (2 * n) / 3, n - 1] {
        let (d, m) = interp[k].split_once(' ').unwrap();
        let at = model_names.iter().position(|x| x == m).unwrap();
        let to = &model_names[(at + 1) % model_names.len()];
        let mut edited = interp.clone();
        edited[k] = format!("{} {}", d, to);
        out.push((format!("redirect {} to {}", d, to), join(&dap, &tree, &edited)));
    }

    let polarized: Vec<(usize, usize)> = dap
        .iter()
        .enumerate()
        .filter(|(_, l)| l.starts_with("node "))
        .flat_map(|(i, l)| {
            l.split_whitespace()
                .enumerate()
                .filter(|(_, t)| !t.contains('=') && flip(t).is_some())
                .map(move |(j, _)| (i, j))
                .collect::<Vec<_>>()
        })
        .collect();
    let m = polarized.len();
    for k in [0, m / 4, m / 2, (3 * m) / 4] {
        let (i, j) = polarized[k];
        let mut toks: Vec<String> = dap[i].split_whitespace().map(str::to_owned).collect();
        let before = toks[j].clone();
        toks[j] = flip(&before).unwrap();
        let mut edited = dap.clone();
        edited[i] = toks.join(" ");
        out.push((format!("flip {} on {}", before, toks[1]), join(&edited, &tree, &interp)));
    }

    let dap_tag = dap.iter().position(|l| l.contains('#')).expect("tagged description feature");
    let mut edited = dap.clone();
    edited[dap_tag] = retag(&dap[dap_tag], Some(99));
    out.push(("retag a description feature".to_owned(), join(&edited, &tree, &interp)));

    let model_tag = tree.iter().position(|l| l.contains('#')).expect("tagged model feature");
    let mut edited = tree.clone();
    edited[model_tag] = retag(&tree[model_tag], None);
    out.push(("untag a model feature".to_owned(), join(&dap, &edited, &interp)));
    out
}

fn retag(line: &str, tag: Option<u32>) -> String {
    let pos = line.find('#').unwrap();
    let end = line[pos + 1..]
        .find(|c: char| !c.is_ascii_digit())
        .map_or(line.len(), |e| pos + 1 + e);
    let replacement = tag.map(|t| format!("#{}", t)).unwrap_or_default();
    format!("{}{}{}", &line[..pos], replacement, &line[end..])
}
