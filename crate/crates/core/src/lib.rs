//! Complete dependency graphs from interaction grammar parses.
//!
//! A parse is an [interpretation graph](graph::InterpretationGraph): the
//! polarized descriptions selected for the words of a sentence, the syntax
//! tree they describe and the map between them. [`extract`] reads one
//! labelled dependency off every model node that fills a syntactic function,
//! including the indirect dependencies the tree only implies.
//!
//! ```
//! use igdep::extract::extract_dependencies;
//! use igdep::grammar::{select_and_compose, Grammar, DEFAULT_COMBINATION_CAP};
//! use igdep::solver::{find_models, SolverConfig};
//!
//! let grammar = Grammar::toy_french();
//! let tokens = ["Jean", "permet", "à", "Marie", "de", "venir"];
//! let dap = &select_and_compose(&tokens, &grammar, DEFAULT_COMBINATION_CAP).unwrap()[0];
//! let model = &find_models(dap, &SolverConfig::default()).models[0];
//! let deps = extract_dependencies(model).graph;
//! assert!(deps.contains("subj", "venir", "Marie"));
//! ```
//!
//! Modules, in pipeline order:
//!
//! * [`feature`], [`dap`], [`tree`], [`graph`]: the data model;
//! * [`grammar`]: grammar files, entry validation and lexical selection;
//! * [`saturation`]: polarity saturation and validity of interpretation graphs;
//! * [`solver`]: model enumeration;
//! * [`heads`]: antecedents and heads;
//! * [`patterns`]: declarative graph patterns and their matcher;
//! * [`extract`]: dependency extraction;
//! * [`format`], [`cli`]: text formats and the command line.

pub mod cli;
pub mod dap;
pub mod dependency;
pub mod error;
pub mod extract;
pub mod feature;
pub mod format;
pub mod grammar;
pub mod graph;
pub mod heads;
pub mod patterns;
pub mod saturation;
pub mod solver;
pub mod tree;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/descriptions.md")]
    mod descriptions {}
    #[doc = include_str!("../../../book/src/interpretation.md")]
    mod interpretation {}
    #[doc = include_str!("../../../book/src/models.md")]
    mod models {}
    #[doc = include_str!("../../../book/src/heads.md")]
    mod heads {}
    #[doc = include_str!("../../../book/src/patterns.md")]
    mod patterns {}
    #[doc = include_str!("../../../book/src/extraction.md")]
    mod extraction {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
