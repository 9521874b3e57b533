use std::collections::BTreeSet;

use super::{Coref, Emit, FeatureConstraint, GraphPattern, NodePattern, PatternError, Sort};
use crate::feature::{FeatureValue, Marking, Phon};
use crate::format::{tokenize, SyntaxError, Tok};

fn sort(tok: &Tok<'_>, s: &str) -> Result<Sort, SyntaxError> {
    match s {
        "dap" => Ok(Sort::Dap),
        "model" => Ok(Sort::Model),
        _ => Err(SyntaxError::at(tok, format!("unknown sort `{}`", s))),
    }
}

/// `name[:a,b][;pol=->|<->]`
fn feature(tok: &Tok<'_>, s: &str) -> Result<FeatureConstraint, SyntaxError> {
    let (head, pol) = match s.split_once(';') {
        Some((h, p)) => {
            let p = p
                .strip_prefix("pol=")
                .ok_or_else(|| SyntaxError::at(tok, "expected `pol=` after `;`"))?;
            (h, Some(p))
        }
        None => (s, None),
    };
    let (name, values) = match head.split_once(':') {
        Some((n, v)) => {
            let v = FeatureValue::new(v.split(',').filter(|a| !a.is_empty()))
                .map_err(|_| SyntaxError::at(tok, "empty value set"))?;
            (n, Some(v))
        }
        None => (head, None),
    };
    if name.is_empty() {
        return Err(SyntaxError::at(tok, "empty feature name"));
    }
    let markings = match pol {
        None => None,
        Some(p) => {
            let mut set = BTreeSet::new();
            for sym in p.split('|') {
                let m = Marking::from_symbol(sym)
                    .ok_or_else(|| SyntaxError::at(tok, format!("unknown polarity `{}`", sym)))?;
                set.insert(m);
            }
            Some(set)
        }
    };
    Ok(FeatureConstraint {
        name: name.to_owned(),
        values,
        markings,
    })
}

fn node(line: &[Tok<'_>]) -> Result<NodePattern, SyntaxError> {
    let id = line
        .get(1)
        .ok_or_else(|| SyntaxError::at(&line[0], "node without an id"))?;
    let mut sort_kw = None;
    let mut p = NodePattern::new(id.text, Sort::Dap);
    for tok in &line[2..] {
        if let Some(s) = tok.text.strip_prefix("sort=") {
            sort_kw = Some(sort(tok, s)?);
        } else if let Some(f) = tok.text.strip_prefix("feat=") {
            p.features.push(feature(tok, f)?);
        } else if let Some(ph) = tok.text.strip_prefix("phon=") {
            p.phon = match Phon::from_keyword(ph) {
                Some(Phon::Any) => None,
                Some(x) => Some(x),
                None => return Err(SyntaxError::at(tok, format!("unknown phonology `{}`", ph))),
            };
        } else if tok.text == "capture" {
            p.capture = true;
        } else {
            return Err(SyntaxError::at(tok, format!("unexpected `{}`", tok.text)));
        }
    }
    p.sort = sort_kw.ok_or_else(|| SyntaxError::at(id, "node needs `sort=dap` or `sort=model`"))?;
    Ok(p)
}

fn emit(line: &[Tok<'_>]) -> Result<Emit, SyntaxError> {
    let get = |key: &str| -> Result<String, SyntaxError> {
        line[1..]
            .iter()
            .find_map(|t| t.text.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
            .map(str::to_owned)
            .ok_or_else(|| SyntaxError::at(&line[0], format!("emit needs `{}=`", key)))
    };
    let governor = get("governor")?;
    let dependent = get("dependent")?;
    let label = get("label")?;
    let kind_text = get("kind")?;
    let kind = kind_text
        .parse()
        .map_err(|e: String| SyntaxError::at(&line[0], e))?;
    Ok(Emit {
        governor,
        dependent,
        label,
        kind,
    })
}

/// Parses `pattern NAME ... end` blocks and validates each pattern.
pub fn parse_patterns(src: &str) -> Result<Vec<GraphPattern>, PatternError> {
    let mut out = Vec::new();
    let mut current: Option<(GraphPattern, usize)> = None;
    for line in tokenize(src) {
        let head = &line[0];
        let Some((p, _)) = current.as_mut() else {
            if head.text != "pattern" || line.len() != 2 {
                return Err(SyntaxError::at(head, "expected `pattern NAME`").into());
            }
            current = Some((GraphPattern::new(line[1].text), head.line));
            continue;
        };
        let pair = |what: &str| -> Result<(String, String), SyntaxError> {
            if line.len() != 3 {
                return Err(SyntaxError::at(head, format!("{} needs two nodes", what)));
            }
            Ok((line[1].text.to_owned(), line[2].text.to_owned()))
        };
        match head.text {
            "node" => p.nodes.push(node(&line)?),
            "interp" => p.interp.push(pair("interp")?),
            "child" => p.child.push(pair("child")?),
            "coref" => {
                if line.len() != 4 {
                    return Err(SyntaxError::at(head, "coref needs two nodes and a feature").into());
                }
                p.coref.push(Coref {
                    a: line[1].text.to_owned(),
                    b: line[2].text.to_owned(),
                    feature: line[3].text.to_owned(),
                });
            }
            "emit" => {
                if p.emit.is_some() {
                    return Err(SyntaxError::at(head, "pattern has two emit lines").into());
                }
                p.emit = Some(emit(&line)?);
            }
            "end" => {
                let (p, _) = current.take().expect("inside a pattern");
                p.validate()?;
                out.push(p);
            }
            other => return Err(SyntaxError::at(head, format!("unexpected `{}`", other)).into()),
        }
    }
    if let Some((p, line)) = current {
        return Err(SyntaxError {
            line,
            column: 1,
            message: format!("pattern {} is not closed with `end`", p.name),
        }
        .into());
    }
    Ok(out)
}

/// Text form accepted by [`parse_patterns`].
pub fn write_pattern(p: &GraphPattern) -> String {
    let mut out = format!("pattern {}\n", p.name);
    for n in &p.nodes {
        out.push_str(&format!("  node {} sort={}", n.id, n.sort));
        for f in &n.features {
            out.push_str(&format!(" feat={}", f.name));
            if let Some(v) = &f.values {
                out.push(':');
                out.push_str(&v.atoms().collect::<Vec<_>>().join(","));
            }
            if let Some(ms) = &f.markings {
                out.push_str(";pol=");
                out.push_str(&ms.iter().map(|m| m.symbol()).collect::<Vec<_>>().join("|"));
            }
        }
        if let Some(ph) = n.phon {
            out.push_str(&format!(" phon={}", ph));
        }
        if n.capture {
            out.push_str(" capture");
        }
        out.push('\n');
    }
    for (d, m) in &p.interp {
        out.push_str(&format!("  interp {} {}\n", d, m));
    }
    for (a, b) in &p.child {
        out.push_str(&format!("  child {} {}\n", a, b));
    }
    for c in &p.coref {
        out.push_str(&format!("  coref {} {} {}\n", c.a, c.b, c.feature));
    }
    if let Some(e) = &p.emit {
        out.push_str(&format!(
            "  emit governor={} dependent={} label={} kind={}\n",
            e.governor, e.dependent, e.label, e.kind
        ));
    }
    out.push_str("end\n");
    out
}
