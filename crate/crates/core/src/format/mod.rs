//! Text formats: interpretation graphs (`ig`), dependency renderings and the
//! line tokenizer shared with the grammar and pattern parsers.
//!
//! The syntax is described in `docs/formats.md`.

mod ig;
mod render;

pub use ig::{
    FormatError, parse_dap, parse_dependency_graph, parse_graph, parse_tree, write_dap, write_dependency_graph,
    write_graph, write_tree,
};
pub use render::{render, render_dot, render_tsv, OutputFormat};

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::feature::{parse_feature_literal, Feature, FeatureValue, Phon, Token};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn at(tok: &Tok<'_>, message: impl fmt::Display) -> Self {
        SyntaxError {
            line: tok.line,
            column: tok.column,
            message: message.to_string(),
        }
    }
}

/// A whitespace-separated word with its 1-based position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Tok<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

/// Splits `src` into non-empty lines of tokens. A token starting with `#`
/// starts a comment that runs to the end of the line.
pub fn tokenize(src: &str) -> Vec<Vec<Tok<'_>>> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let mut toks = Vec::new();
        let mut start: Option<usize> = None;
        let mut chars = line.char_indices().peekable();
        let mut col = 0usize;
        let mut start_col = 0usize;
        loop {
            let next = chars.next();
            let boundary = match next {
                None => true,
                Some((_, c)) => c.is_whitespace(),
            };
            if let Some((bi, _)) = next {
                if !boundary && start.is_none() {
                    start = Some(bi);
                    start_col = col + 1;
                }
            }
            if boundary {
                if let Some(s) = start.take() {
                    let end = next.map(|(bi, _)| bi).unwrap_or(line.len());
                    let text = &line[s..end];
                    if text.starts_with('#') {
                        break;
                    }
                    toks.push(Tok {
                        text,
                        line: i + 1,
                        column: start_col,
                    });
                }
            }
            if next.is_none() {
                break;
            }
            col += 1;
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

/// Attributes of a node line: features plus `phon=`, `anchor=` and `word=`.
#[derive(Clone, Debug, Default)]
pub(crate) struct NodeAttrs {
    pub features: Vec<Feature>,
    pub phon: Option<Phon>,
    pub token: Option<Token>,
}

/// Parses node attributes. `?` in a value expands to the declared domain of
/// the feature when `domains` is given.
pub(crate) fn parse_node_attrs(
    toks: &[Tok<'_>],
    token_key: Option<&str>,
    domains: Option<&BTreeMap<String, FeatureValue>>,
) -> Result<NodeAttrs, SyntaxError> {
    let mut attrs = NodeAttrs::default();
    for tok in toks {
        if let Some(kw) = tok.text.strip_prefix("phon=") {
            let phon = Phon::from_keyword(kw)
                .ok_or_else(|| SyntaxError::at(tok, format!("unknown phonology `{}`", kw)))?;
            attrs.phon = Some(phon);
            continue;
        }
        if let Some(t) = token_key
            .and_then(|k| tok.text.strip_prefix(k))
            .and_then(|r| r.strip_prefix('='))
        {
            let token: Token = t.parse().map_err(|e: String| SyntaxError::at(tok, e))?;
            attrs.token = Some(token);
            continue;
        }
        let lit = parse_feature_literal(tok.text).map_err(|e| SyntaxError::at(tok, e))?;
        let value = if lit.atoms == ["?"] {
            let domain = domains
                .and_then(|d| d.get(&lit.name))
                .ok_or_else(|| {
                    SyntaxError::at(tok, format!("`?` used for {} without a domain", lit.name))
                })?;
            domain.clone()
        } else {
            FeatureValue::new(lit.atoms).expect("literal atoms are non-empty")
        };
        if attrs.features.iter().any(|f| f.name == lit.name) {
            return Err(SyntaxError::at(tok, format!("feature {} given twice", lit.name)));
        }
        attrs.features.push(Feature {
            name: lit.name,
            value,
            marking: lit.marking,
            coindex: lit.coindex,
        });
    }
    Ok(attrs)
}

pub(crate) fn write_attrs(
    out: &mut String,
    phon: Phon,
    token_key: &str,
    token: Option<&Token>,
    features: impl Iterator<Item = impl fmt::Display>,
) {
    if let Some(t) = token {
        out.push_str(&format!(" {}={}", token_key, t));
    }
    out.push_str(&format!(" phon={}", phon));
    for f in features {
        out.push_str(&format!(" {}", f));
    }
}
