use std::collections::BTreeMap;

use crate::dap::{Dap, DapId, DapNode, Relation};
use crate::error::StructureError;
use crate::feature::{FeatureValue, Phon, Token};
use crate::format::{parse_node_attrs, tokenize, SyntaxError, Tok};

pub(crate) struct ParsedEntry {
    pub word: String,
    pub line: usize,
    pub edap: Result<Dap, StructureError>,
}

pub(crate) struct ParsedGrammar {
    pub name: String,
    pub version: String,
    pub domains: BTreeMap<String, FeatureValue>,
    pub entries: Vec<ParsedEntry>,
}

struct Block<'a> {
    word: String,
    line: usize,
    nodes: Vec<DapNode>,
    index: BTreeMap<&'a str, DapId>,
    edges: Vec<(Relation, DapId, DapId)>,
}

pub(crate) fn parse(src: &str) -> Result<ParsedGrammar, SyntaxError> {
    let mut g = ParsedGrammar {
        name: String::new(),
        version: String::new(),
        domains: BTreeMap::new(),
        entries: Vec::new(),
    };
    let mut block: Option<Block<'_>> = None;
    for line in tokenize(src) {
        let head = &line[0];
        match (&mut block, head.text) {
            (None, "grammar") => {
                if line.len() != 3 {
                    return Err(SyntaxError::at(head, "expected `grammar NAME VERSION`"));
                }
                g.name = line[1].text.to_owned();
                g.version = line[2].text.to_owned();
            }
            (None, "domain") => {
                if line.len() < 3 {
                    return Err(SyntaxError::at(head, "expected `domain FEATURE ATOM...`"));
                }
                let value = FeatureValue::new(line[2..].iter().map(|t| t.text))
                    .expect("at least one atom");
                if g.domains.insert(line[1].text.to_owned(), value).is_some() {
                    return Err(SyntaxError::at(&line[1], "domain declared twice"));
                }
            }
            (None, "edap") => {
                if line.len() != 2 {
                    return Err(SyntaxError::at(head, "expected `edap WORD`"));
                }
                block = Some(Block {
                    word: line[1].text.to_owned(),
                    line: head.line,
                    nodes: Vec::new(),
                    index: BTreeMap::new(),
                    edges: Vec::new(),
                });
            }
            (None, other) => {
                return Err(SyntaxError::at(head, format!("unexpected `{}` outside an edap block", other)));
            }
            (Some(b), "node") | (Some(b), "anchor") => {
                let name = line
                    .get(1)
                    .ok_or_else(|| SyntaxError::at(head, "node without a name"))?;
                if name.text.contains('.') {
                    return Err(SyntaxError::at(name, "node names cannot contain `.`"));
                }
                if b.index.contains_key(name.text) {
                    return Err(SyntaxError::at(name, format!("node {} declared twice", name.text)));
                }
                let attrs = parse_node_attrs(&line[2..], None, Some(&g.domains))?;
                let is_anchor = head.text == "anchor";
                let default_phon = if is_anchor { Phon::NonEmpty } else { Phon::Any };
                let id = DapId(b.nodes.len());
                b.index.insert(name.text, id);
                b.nodes.push(DapNode {
                    id,
                    name: name.text.to_owned(),
                    instance: 0,
                    features: attrs.features.into_iter().collect(),
                    phon: attrs.phon.unwrap_or(default_phon),
                    anchor: is_anchor.then(|| Token::new(b.word.clone(), 0)),
                });
            }
            (Some(_), "end") => {
                let b = block.take().expect("inside a block");
                g.entries.push(ParsedEntry {
                    word: b.word,
                    line: b.line,
                    edap: Dap::new(b.nodes, b.edges),
                });
            }
            (Some(b), kw) => {
                let kind = Relation::from_keyword(kw)
                    .ok_or_else(|| SyntaxError::at(head, format!("unexpected `{}` in edap block", kw)))?;
                if line.len() != 3 {
                    return Err(SyntaxError::at(head, "relation needs two nodes"));
                }
                let find = |t: &Tok<'_>| {
                    b.index
                        .get(t.text)
                        .copied()
                        .ok_or_else(|| SyntaxError::at(t, format!("unknown node `{}`", t.text)))
                };
                let (x, y) = (find(&line[1])?, find(&line[2])?);
                b.edges.push((kind, x, y));
            }
        }
    }
    if let Some(b) = block {
        return Err(SyntaxError {
            line: b.line,
            column: 1,
            message: format!("edap {} is not closed with `end`", b.word),
        });
    }
    Ok(g)
}
