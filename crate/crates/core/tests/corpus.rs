mod common;

use common::{corpus, corpus_dir};
use igdep::extract::{extract_dependencies, extract_via_patterns};
use igdep::format::render_tsv;
use igdep::patterns::builtin_patterns;

#[test]
fn expected_dependencies() {
    for e in corpus() {
        let ex = extract_dependencies(&e.graph);
        assert!(ex.is_ok(), "{}: {:?}", e.name, ex.errors);
        let expected = std::fs::read_to_string(corpus_dir().join(format!("{}.tsv", e.name))).unwrap();
        assert_eq!(render_tsv(&ex.graph), expected, "{}", e.name);
    }
}

#[test]
fn one_edge_per_function() {
    for e in corpus() {
        let functs = e.graph.tree().nodes().iter().filter(|n| n.feature("funct").is_some()).count();
        let ex = extract_dependencies(&e.graph);
        assert_eq!(ex.graph.len() + ex.errors.len(), functs, "{}", e.name);
    }
}

#[test]
fn tokens_are_the_sentence() {
    for e in corpus() {
        let ex = extract_dependencies(&e.graph);
        let words: Vec<&str> = ex.graph.tokens().iter().map(|t| t.form.as_str()).collect();
        assert_eq!(words.join(" "), e.sentence);
        for d in ex.graph.edges() {
            assert!(ex.graph.tokens().contains(&d.governor));
            assert!(ex.graph.tokens().contains(&d.dependent));
        }
    }
}

#[test]
fn both_routes_agree() {
    let patterns = builtin_patterns();
    for e in corpus() {
        let direct = extract_dependencies(&e.graph);
        let via = extract_via_patterns(&e.graph, &patterns).unwrap();
        assert_eq!(direct, via, "{}", e.name);
    }
}

#[test]
fn worked_example_roles() {
    let e = corpus().into_iter().find(|e| e.name == "apprecie").unwrap();
    let g = extract_dependencies(&e.graph).graph;
    assert!(g.contains("subj", "apprécie", "Jean"));
    assert!(g.contains("deobj", "goût", "en"));
    assert!(g.contains("obj", "apprécie", "goût"));
    assert!(g.contains("det", "goût", "le"));
}
