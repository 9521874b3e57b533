//! Grammars: word forms mapped to elementary descriptions.
//!
//! A grammar file lists feature domains and one block per elementary
//! description:
//!
//! ```text
//! grammar tiny 0.1
//! domain cat s np v
//!
//! edap dort
//!   node S cat<->s
//!   node Subj cat<-np
//!   anchor V cat<->v
//!   child S Subj
//!   child S V
//!   prec Subj V
//! end
//! ```
//!
//! See `docs/formats.md` for the full syntax.

mod parse;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::dap::{Dap, DapId, Edap};
use crate::error::StructureError;
use crate::feature::FeatureValue;
use crate::format::SyntaxError;
use crate::saturation::{Rule, ValidityReport, Violation};

pub use validate::validate_edap;

/// Source of the bundled toy French grammar.
pub const TOY_FRENCH: &str = include_str!("../../grammars/french_toy.grammar");

/// Default bound on the number of lexical combinations composed for one
/// sentence.
pub const DEFAULT_COMBINATION_CAP: usize = 256;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grammar {
    pub name: String,
    pub version: String,
    /// Declared value domains, used to expand `?`.
    pub domains: BTreeMap<String, FeatureValue>,
    entries: BTreeMap<String, Vec<Edap>>,
}

impl Grammar {
    /// The bundled toy grammar.
    pub fn toy_french() -> Grammar {
        load_grammar(TOY_FRENCH).expect("bundled grammar is valid")
    }

    /// Entries for a word form, in file order.
    pub fn entries(&self, form: &str) -> &[Edap] {
        self.entries.get(form).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Number of elementary descriptions.
    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// An entry that failed validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvalidEntry {
    pub word: String,
    /// Index among the entries of the same word form.
    pub index: usize,
    pub line: usize,
    pub report: ValidityReport,
}

impl fmt::Display for InvalidEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.report.violations() {
            writeln!(f, "entry {} (line {}): {}", self.word, self.line, v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error("syntax error: {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{}", render_invalid(.0))]
    Invalid(Vec<InvalidEntry>),
    #[error("unknown word form `{form}` at position {position}")]
    UnknownToken { form: String, position: usize },
    #[error("empty sentence")]
    EmptySentence,
    #[error("{count} lexical combinations exceed the cap of {cap}")]
    TooManyCombinations { count: usize, cap: usize },
}

fn render_invalid(entries: &[InvalidEntry]) -> String {
    entries.iter().map(|e| e.to_string()).collect::<String>().trim_end().to_owned()
}

/// Parses entries without validating them.
#[cfg(test)]
pub(crate) fn load_grammar_unchecked(src: &str) -> Result<Vec<Edap>, GrammarError> {
    let parsed = parse::parse(src)?;
    Ok(parsed
        .entries
        .into_iter()
        .filter_map(|e| e.edap.ok().map(|dap| Edap { word_form: e.word, dap }))
        .collect())
}

fn structure_report(err: &StructureError) -> ValidityReport {
    let rule = match err {
        StructureError::MissingCat(_) => Rule::Principle3,
        _ => Rule::Shape,
    };
    ValidityReport::new(vec![Violation {
        rule,
        nodes: Vec::new(),
        message: err.to_string(),
    }])
}

/// Parses and validates a grammar. Every invalid entry is reported, not just
/// the first.
pub fn load_grammar(src: &str) -> Result<Grammar, GrammarError> {
    let parsed = parse::parse(src)?;
    let mut grammar = Grammar {
        name: parsed.name,
        version: parsed.version,
        domains: parsed.domains,
        entries: BTreeMap::new(),
    };
    let mut invalid = Vec::new();
    for entry in parsed.entries {
        let index = grammar.entries(&entry.word).len()
            + invalid.iter().filter(|i: &&InvalidEntry| i.word == entry.word).count();
        let report = match &entry.edap {
            Ok(dap) => validate_edap(&Edap {
                word_form: entry.word.clone(),
                dap: dap.clone(),
            }),
            Err(e) => structure_report(e),
        };
        if !report.ok() {
            invalid.push(InvalidEntry {
                word: entry.word,
                index,
                line: entry.line,
                report,
            });
            continue;
        }
        let dap = entry.edap.expect("validated");
        grammar
            .entries
            .entry(entry.word.clone())
            .or_default()
            .push(Edap {
                word_form: entry.word,
                dap,
            });
    }
    if invalid.is_empty() {
        Ok(grammar)
    } else {
        Err(GrammarError::Invalid(invalid))
    }
}

/// Composes one description per combination of lexical choices. Instance `i`
/// is the entry chosen for token `i`; coindex tags are shifted so instances
/// never share one. Combinations come in lexicographic order of entry
/// indexes, the last token varying fastest.
pub fn select_and_compose<S: AsRef<str>>(
    tokens: &[S],
    grammar: &Grammar,
    cap: usize,
) -> Result<Vec<Dap>, GrammarError> {
    if tokens.is_empty() {
        return Err(GrammarError::EmptySentence);
    }
    let mut choices: Vec<&[Edap]> = Vec::with_capacity(tokens.len());
    for (position, tok) in tokens.iter().enumerate() {
        let entries = grammar.entries(tok.as_ref());
        if entries.is_empty() {
            return Err(GrammarError::UnknownToken {
                form: tok.as_ref().to_owned(),
                position,
            });
        }
        choices.push(entries);
    }
    let count = choices
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .unwrap_or(usize::MAX);
    if count > cap {
        return Err(GrammarError::TooManyCombinations { count, cap });
    }

    let mut out = Vec::with_capacity(count);
    let mut idx = vec![0usize; tokens.len()];
    loop {
        out.push(compose(choices.iter().zip(&idx).map(|(c, &i)| &c[i])));
        let mut k = idx.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn compose<'a>(edaps: impl Iterator<Item = &'a Edap>) -> Dap {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut offset = 0u32;
    for (position, edap) in edaps.enumerate() {
        let inst = edap.instantiate(position, offset);
        offset += edap.max_tag();
        let base = nodes.len();
        edges.extend(
            inst.edges()
                .map(|(k, a, b)| (k, DapId(a.0 + base), DapId(b.0 + base))),
        );
        nodes.extend(inst.nodes().iter().cloned().map(|mut n| {
            n.id = DapId(n.id.0 + base);
            n
        }));
    }
    Dap::new(nodes, edges).expect("instances are disjoint and individually valid")
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("the anchor has no principal child")]
    IsAnchor,
    #[error("node is not a projection of the anchor")]
    NotProjection,
}

/// The child of a projection that is itself a projection, one step closer to
/// the anchor.
pub fn principal_child(edap: &Edap, node: DapId) -> Result<DapId, ProjectionError> {
    if edap.anchor() == Some(node) {
        return Err(ProjectionError::IsAnchor);
    }
    let projections = edap.projections();
    match projections.iter().position(|&p| p == node) {
        Some(i) if i > 0 => Ok(projections[i - 1]),
        _ => Err(ProjectionError::NotProjection),
    }
}
