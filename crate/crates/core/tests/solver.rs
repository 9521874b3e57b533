mod common;

use common::corpus;
use igdep::grammar::{select_and_compose, Grammar, DEFAULT_COMBINATION_CAP};
use igdep::saturation::check_interpretation;
use igdep::solver::{find_models, SolverConfig, SolverStatus};

fn compose(sentence: &str) -> Vec<igdep::dap::Dap> {
    let tokens: Vec<&str> = sentence.split_whitespace().collect();
    select_and_compose(&tokens, &Grammar::toy_french(), DEFAULT_COMBINATION_CAP).unwrap()
}

#[test]
fn corpus_sentences_have_exactly_the_golden_model() {
    for e in corpus() {
        let daps = compose(&e.sentence);
        assert_eq!(daps.len(), 1, "{}", e.name);
        let out = find_models(&daps[0], &SolverConfig::default());
        assert_eq!(out.status, SolverStatus::Exhausted, "{}", e.name);
        assert_eq!(out.models.len(), 1, "{}", e.name);
        assert_eq!(out.models[0].canonical_form(), e.graph.canonical_form(), "{}", e.name);
    }
}

#[test]
fn outputs_pass_the_checker() {
    let sentences = ["Jean apprécie Marie", "Marie connaît le goût", "Jean en connaît le goût"];
    for s in sentences {
        let models: Vec<_> = compose(s)
            .iter()
            .flat_map(|dap| find_models(dap, &SolverConfig::default()).models)
            .collect();
        assert!(!models.is_empty(), "{}", s);
        for m in models {
            let report = check_interpretation(&m);
            assert!(report.ok(), "{}: {}", s, report.render());
        }
    }
}

#[test]
fn ungrammatical_input_has_no_model() {
    // The free-standing noun phrase of `fille` cannot fill an argument slot.
    for s in ["Jean", "le goût", "Jean Marie apprécie", "la fille connaît Jean"] {
        for dap in compose(s) {
            let out = find_models(&dap, &SolverConfig::default());
            assert!(out.models.is_empty(), "{}", s);
            assert_eq!(out.status, SolverStatus::Exhausted, "{}", s);
        }
    }
}

#[test]
fn output_order_is_stable() {
    let dap = &compose("Jean permet à Marie de venir")[0];
    let forms = |cfg: &SolverConfig| -> Vec<String> {
        find_models(dap, cfg).models.iter().map(|m| m.canonical_form()).collect()
    };
    let cfg = SolverConfig::default();
    assert_eq!(forms(&cfg), forms(&cfg));
}

#[test]
fn zero_timeout_is_reported() {
    let dap = &compose("Jean promet à Marie de venir")[0];
    let cfg = SolverConfig {
        timeout_ms: 0,
        ..SolverConfig::default()
    };
    let out = find_models(dap, &cfg);
    assert!(matches!(out.status, SolverStatus::TimedOut | SolverStatus::Exhausted));
    assert!(!out.is_complete() || out.models.len() == 1);
}
