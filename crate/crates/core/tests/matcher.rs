mod common;

use common::{brute_force_matches, corpus, random_graph, random_pattern};
use igdep::patterns::{builtin_patterns, match_pattern};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matches(p: &igdep::patterns::GraphPattern, g: &igdep::graph::InterpretationGraph) -> Vec<Vec<igdep::graph::NodeRef>> {
    match_pattern(p, g).unwrap().into_iter().map(|m| m.nodes).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn agrees_with_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 8);
        for _ in 0..8 {
            let p = random_pattern(&mut rng, 3);
            prop_assert_eq!(matches(&p, &g), brute_force_matches(&p, &g));
        }
    }

    #[test]
    fn matches_are_sorted_and_unique(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 10);
        let p = random_pattern(&mut rng, 4);
        let found = matches(&p, &g);
        prop_assert!(found.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn small_builtins_agree_with_brute_force_on_corpus() {
    for e in corpus() {
        for p in builtin_patterns().iter().filter(|p| p.nodes.len() <= 4) {
            assert_eq!(matches(p, &e.graph), brute_force_matches(p, &e.graph), "{} {}", e.name, p.name);
        }
    }
}

#[test]
fn builtins_match_once_per_function() {
    for e in corpus() {
        let functs = e.graph.tree().nodes().iter().filter(|n| n.feature("funct").is_some()).count();
        let total: usize = builtin_patterns().iter().map(|p| matches(p, &e.graph).len()).sum();
        assert_eq!(total, functs, "{}", e.name);
    }
}
