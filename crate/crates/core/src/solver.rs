//! Search for valid interpretation graphs of a composed description.
//!
//! The search partitions description nodes into classes, each class becoming
//! one model node. It repeatedly takes the lowest class whose polarities are
//! not yet saturated and tries merging it with every other class, lowest
//! first. Merges force further merges (two nodes in one class have their
//! immediate-dominance parents in one class), and a branch is cut as soon as
//! a class or the partition as a whole can no longer lead to a model:
//!
//! * a class holds two anchors, contradicting phonology, or polarities that
//!   no extension can saturate;
//! * for some feature, unsaturated positive and negative classes are not in
//!   equal number, or only virtual classes are left;
//! * merged values or coindexed values have no common atom;
//! * dominance loops, an anchored or empty class has children, or the words
//!   below two sibling classes (or two classes in precedence) interleave.
//!
//! Once every class is saturated the partition is turned into trees: each
//! class takes its immediate-dominance parent as model parent, sibling order
//! follows the words, empty siblings go to every position, and unresolved
//! values are enumerated. Candidates that pass
//! [`check_interpretation`](crate::saturation::check_interpretation) are
//! kept, without duplicates, in discovery order.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use crate::dap::{Dap, Relation};
use crate::feature::{CoindexTag, Feature, FeatureStructure, FeatureValue, Marking, Phon, Polarity, Token};
use crate::graph::{DisjointSets, InterpretationGraph};
use crate::saturation::{check_interpretation, PolarityCounts};
use crate::tree::{ModelId, ModelNode, SyntaxTree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Stop after this many models.
    pub max_models: usize,
    /// Maximum number of chosen merges along one branch.
    pub max_merge_depth: usize,
    pub timeout_ms: u64,
    /// Explore merges in ascending node order. The search is always
    /// deterministic; the flag is kept for configuration files.
    pub deterministic_seed_order: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_models: 16,
            max_merge_depth: 256,
            timeout_ms: 30_000,
            deterministic_seed_order: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverStatus {
    /// The search space was fully explored.
    Exhausted,
    /// A model or depth bound cut the search.
    Bounded,
    TimedOut,
}

#[derive(Clone, Debug)]
pub struct SolverOutcome {
    pub models: Vec<InterpretationGraph>,
    pub status: SolverStatus,
}

impl SolverOutcome {
    pub fn is_complete(&self) -> bool {
        self.status == SolverStatus::Exhausted
    }
}

type Partition = Vec<usize>;

fn merge(p: &mut Partition, a: usize, b: usize) {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if lo == hi {
        return;
    }
    for x in p.iter_mut() {
        if *x == hi {
            *x = lo;
        }
    }
}

fn labels(p: &Partition) -> Vec<usize> {
    (0..p.len()).filter(|&i| p[i] == i).collect()
}

struct Search<'a> {
    dap: &'a Dap,
    cfg: &'a SolverConfig,
    deadline: Instant,
    imm: Vec<(usize, usize)>,
    down: Vec<(usize, usize)>,
    prec: Vec<(usize, usize)>,
    iprec: Vec<(usize, usize)>,
    anchor: Vec<Option<usize>>,
    tags: BTreeMap<CoindexTag, Vec<(usize, &'a str)>>,
    seen: HashSet<Partition>,
    keys: HashSet<String>,
    models: Vec<InterpretationGraph>,
    bounded: bool,
    timed_out: bool,
}

/// Finds valid interpretation graphs of `dap`.
pub fn find_models(dap: &Dap, cfg: &SolverConfig) -> SolverOutcome {
    let pairs = |r: Relation| -> Vec<(usize, usize)> {
        dap.relation(r).iter().map(|&(a, b)| (a.0, b.0)).collect()
    };
    let mut tags: BTreeMap<CoindexTag, Vec<(usize, &str)>> = BTreeMap::new();
    for n in dap.nodes() {
        for f in n.features.iter() {
            if let Some(t) = f.coindex {
                tags.entry(t).or_default().push((n.id.0, f.name.as_str()));
            }
        }
    }
    let imm = pairs(Relation::ImmDom);
    let mut down = imm.clone();
    down.extend(pairs(Relation::Dom));
    let mut s = Search {
        dap,
        cfg,
        deadline: Instant::now() + Duration::from_millis(cfg.timeout_ms),
        imm,
        down,
        prec: pairs(Relation::Prec),
        iprec: pairs(Relation::ImmPrec),
        anchor: dap
            .nodes()
            .iter()
            .map(|n| n.anchor.as_ref().map(|t| t.position))
            .collect(),
        tags,
        seen: HashSet::new(),
        keys: HashSet::new(),
        models: Vec::new(),
        bounded: false,
        timed_out: false,
    };
    if !dap.is_empty() {
        let mut start: Partition = (0..dap.len()).collect();
        if s.close(&mut start) && s.consistent(&start) {
            s.seen.insert(start.clone());
            s.explore(start, 0);
        }
    }
    let status = if s.timed_out {
        SolverStatus::TimedOut
    } else if s.bounded || s.models.len() >= cfg.max_models {
        SolverStatus::Bounded
    } else {
        SolverStatus::Exhausted
    };
    SolverOutcome {
        models: s.models,
        status,
    }
}

impl<'a> Search<'a> {
    fn done(&mut self) -> bool {
        if self.timed_out || self.models.len() >= self.cfg.max_models {
            return true;
        }
        if Instant::now() >= self.deadline {
            self.timed_out = true;
            return true;
        }
        false
    }

    fn explore(&mut self, p: Partition, depth: usize) {
        if self.done() {
            return;
        }
        let Some(u) = self.unsaturated(&p) else {
            self.build_models(&p);
            return;
        };
        if depth >= self.cfg.max_merge_depth {
            self.bounded = true;
            return;
        }
        for v in labels(&p) {
            if v == u {
                continue;
            }
            let mut next = p.clone();
            merge(&mut next, u, v);
            if !self.close(&mut next) || !self.seen.insert(next.clone()) {
                continue;
            }
            if self.consistent(&next) {
                self.explore(next, depth + 1);
            }
            if self.done() {
                return;
            }
        }
    }

    /// Polarity counts per class and feature name.
    fn counts(&self, p: &Partition) -> BTreeMap<(usize, &'a str), PolarityCounts> {
        let mut out: BTreeMap<(usize, &str), PolarityCounts> = BTreeMap::new();
        for n in self.dap.nodes() {
            for f in n.features.iter() {
                if let Some(pol) = f.polarity() {
                    out.entry((p[n.id.0], f.name.as_str())).or_default().add(pol);
                }
            }
        }
        out
    }

    fn unsaturated(&self, p: &Partition) -> Option<usize> {
        self.counts(p)
            .into_iter()
            .filter(|(_, c)| !c.verdict().is_valid())
            .map(|((class, _), _)| class)
            .min()
    }

    /// Applies forced merges until none is left. Returns false when a forced
    /// merge would put a node in its own class's parent.
    fn close(&self, p: &mut Partition) -> bool {
        loop {
            let mut changed = false;
            for (edges, by_child) in [(&self.imm, true), (&self.iprec, false), (&self.iprec, true)] {
                let mut first: BTreeMap<usize, usize> = BTreeMap::new();
                for &(a, b) in edges.iter() {
                    let (key, val) = if by_child { (p[b], p[a]) } else { (p[a], p[b]) };
                    match first.get(&key) {
                        Some(&q) if q != val => {
                            merge(p, q, val);
                            changed = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            first.insert(key, val);
                        }
                    }
                }
                if changed {
                    break;
                }
            }
            if !changed {
                return self.imm.iter().all(|&(a, b)| p[a] != p[b]);
            }
        }
    }

    fn consistent(&self, p: &Partition) -> bool {
        let n = p.len();
        let dap = self.dap;
        let mut anchors = vec![0usize; n];
        let mut empty = vec![false; n];
        let mut nonempty = vec![false; n];
        let mut values: BTreeMap<(usize, &str), FeatureValue> = BTreeMap::new();
        for node in dap.nodes() {
            let c = p[node.id.0];
            if node.is_anchor() {
                anchors[c] += 1;
                if anchors[c] > 1 {
                    return false;
                }
            }
            match node.phon {
                Phon::Empty => empty[c] = true,
                Phon::NonEmpty => nonempty[c] = true,
                Phon::Any => {}
            }
            for f in node.features.iter() {
                let key = (c, f.name.as_str());
                let v = match values.get(&key) {
                    Some(v) => v.intersect(&f.value),
                    None => Some(f.value.clone()),
                };
                match v {
                    Some(v) => {
                        values.insert(key, v);
                    }
                    None => return false,
                }
            }
        }
        if (0..n).any(|c| empty[c] && nonempty[c]) {
            return false;
        }

        // Polarities, per class and across the partition.
        let counts = self.counts(p);
        let mut per_name: BTreeMap<&str, (usize, usize, usize, usize)> = BTreeMap::new();
        for (&(_, name), c) in &counts {
            if !c.is_extensible() {
                return false;
            }
            let e = per_name.entry(name).or_default();
            match (c.positive, c.negative, c.saturated) {
                (1, 0, 0) => e.0 += 1,
                (0, 1, 0) => e.1 += 1,
                (0, 0, 0) => e.2 += 1,
                _ => e.3 += 1,
            }
        }
        for &(pos, neg, virt, other) in per_name.values() {
            if pos != neg || (virt > 0 && pos + neg + other == 0) {
                return false;
            }
        }

        // Coindexed values.
        let keys: Vec<(usize, &str)> = values.keys().copied().collect();
        let index: BTreeMap<(usize, &str), usize> =
            keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut sets = DisjointSets::new(keys.len());
        for occs in self.tags.values() {
            let first = index[&(p[occs[0].0], occs[0].1)];
            for &(d, name) in &occs[1..] {
                sets.union(first, index[&(p[d], name)]);
            }
        }
        let mut group: BTreeMap<usize, FeatureValue> = BTreeMap::new();
        for (i, k) in keys.iter().enumerate() {
            let r = sets.find(i);
            let v = match group.get(&r) {
                Some(g) => g.intersect(&values[k]),
                None => Some(values[k].clone()),
            };
            match v {
                Some(v) => {
                    group.insert(r, v);
                }
                None => return false,
            }
        }

        // Structure over classes.
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut imm_children: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut imm_parent: Vec<Option<usize>> = vec![None; n];
        for &(a, b) in &self.down {
            let (ca, cb) = (p[a], p[b]);
            if ca == cb || anchors[ca] > 0 || empty[ca] {
                return false;
            }
            children[ca].push(cb);
        }
        for &(a, b) in &self.imm {
            imm_children[p[a]].insert(p[b]);
            imm_parent[p[b]] = Some(p[a]);
        }
        let Some(order) = topological(&children, p) else {
            return false;
        };
        // Descendants and spans of known words, bottom-up.
        let mut desc: Vec<Vec<bool>> = vec![Vec::new(); n];
        let mut span: Vec<Option<(usize, usize)>> = vec![None; n];
        for x in 0..n {
            if let Some(pos) = self.anchor[x] {
                span[p[x]] = Some((pos, pos));
            }
        }
        for &c in order.iter().rev() {
            let mut d = vec![false; n];
            let mut s = span[c];
            for &k in &children[c] {
                d[k] = true;
                for (j, &b) in desc[k].iter().enumerate() {
                    d[j] |= b;
                }
                s = join(s, span[k]);
            }
            desc[c] = d;
            span[c] = s;
        }
        for &(a, b) in self.prec.iter().chain(&self.iprec) {
            let (ca, cb) = (p[a], p[b]);
            if ca == cb || desc[ca][cb] || desc[cb][ca] {
                return false;
            }
            if let (Some((_, hi)), Some((lo, _))) = (span[ca], span[cb]) {
                if hi >= lo {
                    return false;
                }
            }
        }
        for &(a, b) in &self.iprec {
            if let (Some(x), Some(y)) = (imm_parent[p[a]], imm_parent[p[b]]) {
                if x != y {
                    return false;
                }
            }
        }
        for kids in &imm_children {
            let spans: Vec<(usize, usize)> = kids.iter().filter_map(|&k| span[k]).collect();
            for (i, x) in spans.iter().enumerate() {
                for y in &spans[i + 1..] {
                    if x.0 <= y.1 && y.0 <= x.1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn build_models(&mut self, p: &Partition) {
        let dap = self.dap;
        let classes = labels(p);
        let n = p.len();
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.imm {
            if parent[p[b]].is_none() {
                parent[p[b]] = Some(p[a]);
                kids[p[a]].push(p[b]);
            }
        }
        let roots: Vec<usize> = classes.iter().copied().filter(|&c| parent[c].is_none()).collect();
        let [root] = roots.as_slice() else { return };
        let root = *root;

        // Words below each class, and the resulting phonology.
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut post = Vec::new();
        let mut stack = vec![(root, false)];
        while let Some((c, expanded)) = stack.pop() {
            if expanded {
                post.push(c);
            } else {
                stack.push((c, true));
                stack.extend(kids[c].iter().map(|&k| (k, false)));
            }
        }
        if post.len() != classes.len() {
            return;
        }
        for x in 0..n {
            if let Some(pos) = self.anchor[x] {
                words[p[x]].push(pos);
            }
        }
        for &c in &post {
            let below: Vec<usize> = kids[c].iter().flat_map(|&k| words[k].clone()).collect();
            words[c].extend(below);
            words[c].sort_unstable();
        }
        let mut phon = vec![Phon::Any; n];
        for &c in &classes {
            phon[c] = if words[c].is_empty() {
                Phon::Empty
            } else {
                Phon::NonEmpty
            };
        }
        if dap.nodes().iter().any(|d| !d.phon.admits(phon[p[d.id.0]])) {
            return;
        }

        // Sibling orders: words fix the non-empty children, empty ones go
        // anywhere, local precedence filters.
        let mut before: BTreeMap<usize, Vec<(usize, usize, bool)>> = BTreeMap::new();
        for (&(a, b), immediate) in self
            .prec
            .iter()
            .map(|e| (e, false))
            .chain(self.iprec.iter().map(|e| (e, true)))
        {
            let Some((lca, x, y)) = split_below_lca(&parent, p[a], p[b]) else {
                return;
            };
            if immediate && (x != p[a] || y != p[b]) {
                return;
            }
            before.entry(lca).or_default().push((x, y, immediate));
        }
        let mut orders: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
        for &c in &classes {
            if kids[c].is_empty() {
                continue;
            }
            let mut full: Vec<usize> = kids[c].iter().copied().filter(|&k| !words[k].is_empty()).collect();
            full.sort_by_key(|&k| words[k][0]);
            for w in full.windows(2) {
                if words[w[0]].last() > words[w[1]].first() {
                    return;
                }
            }
            let empties: Vec<usize> = kids[c].iter().copied().filter(|&k| words[k].is_empty()).collect();
            let constraints = before.get(&c).map(Vec::as_slice).unwrap_or(&[]);
            let alternatives: Vec<Vec<usize>> = interleavings(&full, &empties)
                .into_iter()
                .filter(|o| respects(o, constraints))
                .collect();
            if alternatives.is_empty() {
                return;
            }
            orders.push((c, alternatives));
        }

        // Values: one choice per coindexed group.
        let mut value_of: BTreeMap<(usize, &str), FeatureValue> = BTreeMap::new();
        let mut polarized: BTreeSet<(usize, &str)> = BTreeSet::new();
        for d in dap.nodes() {
            for f in d.features.iter() {
                let key = (p[d.id.0], f.name.as_str());
                let v = match value_of.get(&key) {
                    Some(v) => v.intersect(&f.value),
                    None => Some(f.value.clone()),
                };
                let Some(v) = v else { return };
                value_of.insert(key, v);
                if f.polarity().is_some() {
                    polarized.insert(key);
                }
            }
        }
        let keys: Vec<(usize, &str)> = value_of.keys().copied().collect();
        let index: BTreeMap<(usize, &str), usize> =
            keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut sets = DisjointSets::new(keys.len());
        for occs in self.tags.values() {
            let first = index[&(p[occs[0].0], occs[0].1)];
            for &(d, name) in &occs[1..] {
                sets.union(first, index[&(p[d], name)]);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..keys.len() {
            groups.entry(sets.find(i)).or_default().push(i);
        }
        let mut group_choices: Vec<(Vec<usize>, Vec<String>)> = Vec::new();
        for members in groups.into_values() {
            let mut v = value_of[&keys[members[0]]].clone();
            for &i in &members[1..] {
                match v.intersect(&value_of[&keys[i]]) {
                    Some(x) => v = x,
                    None => return,
                }
            }
            group_choices.push((members, v.atoms().map(str::to_owned).collect()));
        }

        let names = self.class_names(p, &classes);
        let words_tok: BTreeMap<usize, Token> = dap
            .nodes()
            .iter()
            .filter_map(|d| d.anchor.clone().map(|t| (p[d.id.0], t)))
            .collect();

        let order_counts: Vec<usize> = orders.iter().map(|(_, a)| a.len()).collect();
        let value_counts: Vec<usize> = group_choices.iter().map(|(_, a)| a.len()).collect();
        for order_pick in odometer(&order_counts) {
            let mut children = kids.clone();
            for ((c, alts), &i) in orders.iter().zip(&order_pick) {
                children[*c] = alts[i].clone();
            }
            let pre = preorder(root, &children);
            let mut rank = vec![0usize; n];
            for (i, &c) in pre.iter().enumerate() {
                rank[c] = i;
            }
            for value_pick in odometer(&value_counts) {
                if self.done() {
                    return;
                }
                let mut chosen: Vec<String> = vec![String::new(); keys.len()];
                let mut tag_of: Vec<Option<usize>> = vec![None; keys.len()];
                let mut tag_groups: Vec<(usize, usize)> = Vec::new();
                for (g, ((members, atoms), &i)) in group_choices.iter().zip(&value_pick).enumerate() {
                    for &m in members {
                        chosen[m] = atoms[i].clone();
                        if members.len() > 1 {
                            tag_of[m] = Some(g);
                        }
                    }
                    if members.len() > 1 {
                        let first = members.iter().map(|&m| (rank[keys[m].0], keys[m].1)).min().unwrap();
                        tag_groups.push((first.0, g));
                    }
                }
                tag_groups.sort();
                let mut tag_number: BTreeMap<usize, u32> = BTreeMap::new();
                for (i, &(_, g)) in tag_groups.iter().enumerate() {
                    tag_number.insert(g, i as u32 + 1);
                }

                let mut nodes = Vec::with_capacity(pre.len());
                for (i, &c) in pre.iter().enumerate() {
                    let mut features = FeatureStructure::new();
                    for (k, key) in keys.iter().enumerate() {
                        if key.0 != c {
                            continue;
                        }
                        let marking = if polarized.contains(key) {
                            Marking::Polarized(Polarity::Saturated)
                        } else {
                            Marking::Neutral
                        };
                        let mut f = Feature::new(key.1, marking, FeatureValue::atom(chosen[k].clone()));
                        if let Some(g) = tag_of[k] {
                            f = f.with_coindex(CoindexTag(tag_number[&g]));
                        }
                        features.insert(f);
                    }
                    nodes.push(ModelNode {
                        id: ModelId(i),
                        name: names[&c].clone(),
                        features,
                        phon: phon[c],
                        word: words_tok.get(&c).cloned(),
                    });
                }
                let edges: Vec<(ModelId, ModelId)> = pre
                    .iter()
                    .flat_map(|&c| children[c].iter().map(move |&k| (c, k)))
                    .map(|(c, k)| (ModelId(rank[c]), ModelId(rank[k])))
                    .collect();
                let Ok(tree) = SyntaxTree::new(nodes, edges) else { continue };
                let interp = (0..n).map(|x| ModelId(rank[p[x]])).collect();
                let Ok(graph) = InterpretationGraph::new(dap.clone(), tree, interp) else { continue };
                if !check_interpretation(&graph).ok() {
                    continue;
                }
                if self.keys.insert(graph.canonical_form()) {
                    self.models.push(graph);
                    if self.models.len() >= self.cfg.max_models {
                        return;
                    }
                }
            }
        }
    }

    /// `Np-Subj` style names from the non-virtual members, the principal one
    /// first, numbered when several classes would get the same name.
    fn class_names(&self, p: &Partition, classes: &[usize]) -> BTreeMap<usize, String> {
        let mut base: BTreeMap<usize, String> = BTreeMap::new();
        for &c in classes {
            let mut members: Vec<&crate::dap::DapNode> =
                self.dap.nodes().iter().filter(|d| p[d.id.0] == c).collect();
            // The principal member leads.
            members.sort_by_key(|d| !d.is_principal().unwrap_or(false));
            let strong: Vec<&str> = members
                .iter()
                .filter(|d| d.cat().ok().and_then(|f| f.polarity()) != Some(Polarity::Virtual))
                .map(|d| d.name.as_str())
                .collect();
            let parts = if strong.is_empty() {
                members.iter().map(|d| d.name.as_str()).collect()
            } else {
                strong
            };
            base.insert(c, parts.join("-"));
        }
        let mut count: BTreeMap<&str, usize> = BTreeMap::new();
        for name in base.values() {
            *count.entry(name.as_str()).or_default() += 1;
        }
        let mut used: BTreeSet<String> = base
            .values()
            .filter(|n| count[n.as_str()] == 1)
            .cloned()
            .collect();
        let mut next: BTreeMap<String, usize> = BTreeMap::new();
        let mut out = BTreeMap::new();
        for (&c, name) in &base {
            if count[name.as_str()] == 1 {
                out.insert(c, name.clone());
                continue;
            }
            let k = next.entry(name.clone()).or_insert(0);
            let unique = loop {
                *k += 1;
                let candidate = number_name(name, *k);
                if !used.contains(&candidate) {
                    break candidate;
                }
            };
            used.insert(unique.clone());
            out.insert(c, unique);
        }
        out
    }
}

/// `Np-Subj` numbered 2 becomes `Np2-Subj`.
fn number_name(name: &str, k: usize) -> String {
    match name.split_once('-') {
        Some((head, rest)) => format!("{}{}-{}", head, k, rest),
        None => format!("{}{}", name, k),
    }
}

fn join(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some(x), Some(y)) => Some((x.0.min(y.0), x.1.max(y.1))),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Class labels in an order where parents come before children, or `None`
/// on a cycle.
fn topological(children: &[Vec<usize>], p: &Partition) -> Option<Vec<usize>> {
    let n = children.len();
    let mut indegree = vec![0usize; n];
    for kids in children {
        for &k in kids {
            indegree[k] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&c| p[c] == c && indegree[c] == 0).collect();
    let mut out = Vec::new();
    while let Some(c) = ready.pop() {
        out.push(c);
        for &k in &children[c] {
            indegree[k] -= 1;
            if indegree[k] == 0 {
                ready.push(k);
            }
        }
    }
    (out.len() == labels(p).len()).then_some(out)
}

/// The lowest common ancestor of `a` and `b` and its two children leading
/// to them, or `None` if one dominates the other.
fn split_below_lca(parent: &[Option<usize>], a: usize, b: usize) -> Option<(usize, usize, usize)> {
    let path = |mut x: usize| {
        let mut v = vec![x];
        while let Some(q) = parent[x] {
            v.push(q);
            x = q;
        }
        v.reverse();
        v
    };
    let (pa, pb) = (path(a), path(b));
    let common = pa.iter().zip(&pb).take_while(|(x, y)| x == y).count();
    if common == 0 || common == pa.len() || common == pb.len() {
        return None;
    }
    Some((pa[common - 1], pa[common], pb[common]))
}

fn respects(order: &[usize], constraints: &[(usize, usize, bool)]) -> bool {
    let pos = |c: usize| order.iter().position(|&x| x == c);
    constraints.iter().all(|&(x, y, immediate)| match (pos(x), pos(y)) {
        (Some(i), Some(j)) => {
            if immediate {
                j == i + 1
            } else {
                i < j
            }
        }
        _ => true,
    })
}

/// Every sequence keeping `fixed` in order with each permutation of `free`
/// spread over all positions.
fn interleavings(fixed: &[usize], free: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![fixed.to_vec()];
    for &e in free {
        let mut next = Vec::new();
        for seq in &out {
            for i in 0..=seq.len() {
                let mut s = seq.clone();
                s.insert(i, e);
                next.push(s);
            }
        }
        out = next;
    }
    out
}

fn preorder(root: usize, children: &[Vec<usize>]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(c) = stack.pop() {
        out.push(c);
        stack.extend(children[c].iter().rev());
    }
    out
}

/// All index vectors below `sizes`, last position varying fastest.
fn odometer(sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0usize; sizes.len()];
    if sizes.contains(&0) {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut k = idx.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < sizes[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{load_grammar, select_and_compose, Grammar};

    fn solve(grammar: &Grammar, words: &[&str]) -> SolverOutcome {
        let daps = select_and_compose(words, grammar, 4).unwrap();
        find_models(&daps[0], &SolverConfig::default())
    }

    #[test]
    fn fully_specified_entry_has_the_identity_model() {
        let g = load_grammar(
            "domain cat s v np\nedap dort\n node S cat<->s\n node Subj cat<->np phon=empty\n anchor V cat<->v\n child S Subj\n child S V\n prec Subj V\nend\n",
        )
        .unwrap();
        let out = solve(&g, &["dort"]);
        assert_eq!(out.status, SolverStatus::Exhausted);
        assert_eq!(out.models.len(), 1);
        let m = &out.models[0];
        assert_eq!(m.tree().len(), 3);
        for d in m.dap().ids() {
            assert_eq!(m.inverse(m.interp(d)), &[d]);
        }
    }

    #[test]
    fn unmatched_positive_feature_gives_nothing() {
        let g = load_grammar(
            "domain cat s np\nedap a\n anchor A cat->np\nend\nedap b\n anchor B cat->np\nend\n",
        )
        .unwrap();
        let out = solve(&g, &["a", "b"]);
        assert!(out.models.is_empty());
        assert_eq!(out.status, SolverStatus::Exhausted);
    }

    #[test]
    fn simple_subject_verb() {
        let g = load_grammar(
            "domain cat s v np\ndomain funct subj\n\
             edap Jean\n anchor Np cat->np funct<-subj\nend\n\
             edap dort\n node S cat<->s\n node Subj cat<-np funct->subj\n anchor V cat<->v\n child S Subj\n child S V\n prec Subj V\nend\n",
        )
        .unwrap();
        let out = solve(&g, &["Jean", "dort"]);
        assert_eq!(out.models.len(), 1, "{:?}", out.status);
        let m = &out.models[0];
        assert!(check_interpretation(m).ok());
        assert_eq!(m.tree().len(), 3);
        assert!(m.tree().find("Np-Subj").is_some());
        let words: Vec<String> = m.tree().tokens().iter().map(|t| t.form.clone()).collect();
        assert_eq!(words, vec!["Jean", "dort"]);
    }

    #[test]
    fn model_bound_is_reported() {
        let g = load_grammar(
            "domain cat s v np\n\
             edap x\n node S cat<->s\n node E cat<->np phon=empty\n node F cat<->np phon=empty\n anchor V cat<->v\n child S E\n child S F\n child S V\nend\n",
        )
        .unwrap();
        let all = solve(&g, &["x"]);
        assert_eq!(all.status, SolverStatus::Exhausted);
        assert_eq!(all.models.len(), 6);
        let daps = select_and_compose(&["x"], &g, 4).unwrap();
        let cfg = SolverConfig {
            max_models: 2,
            ..SolverConfig::default()
        };
        let some = find_models(&daps[0], &cfg);
        assert_eq!(some.status, SolverStatus::Bounded);
        assert_eq!(some.models.len(), 2);
        assert_eq!(some.models[..], all.models[..2]);
    }

    #[test]
    fn helpers() {
        assert_eq!(interleavings(&[1, 2], &[9]).len(), 3);
        assert_eq!(odometer(&[2, 3]).len(), 6);
        assert_eq!(odometer(&[2, 0]).len(), 0);
        assert_eq!(number_name("Np-Subj", 2), "Np2-Subj");
        let parent = vec![None, Some(0), Some(0), Some(1)];
        assert_eq!(split_below_lca(&parent, 3, 2), Some((0, 1, 2)));
        assert_eq!(split_below_lca(&parent, 1, 3), None);
    }
}
