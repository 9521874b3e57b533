//! Polarities, feature values and feature structures.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Names of the features that carry a polarity. Every other feature is neutral.
pub const POLARIZABLE: [&str; 2] = ["cat", "funct"];

pub fn is_polarizable(name: &str) -> bool {
    POLARIZABLE.contains(&name)
}

/// The four polarities a polarizable feature can carry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Virtual,
    Saturated,
}

impl Polarity {
    pub const ALL: [Polarity; 4] = [
        Polarity::Positive,
        Polarity::Negative,
        Polarity::Virtual,
        Polarity::Saturated,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Polarity::Positive => "->",
            Polarity::Negative => "<-",
            Polarity::Virtual => "~",
            Polarity::Saturated => "<->",
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// How a feature occurrence is marked: with a polarity, or neutral (`=`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Marking {
    Polarized(Polarity),
    Neutral,
}

impl Marking {
    pub fn polarity(self) -> Option<Polarity> {
        match self {
            Marking::Polarized(p) => Some(p),
            Marking::Neutral => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Marking::Polarized(p) => p.symbol(),
            Marking::Neutral => "=",
        }
    }

    /// Parses an operator symbol. Both the ASCII and the arrow spellings are
    /// accepted.
    pub fn from_symbol(s: &str) -> Option<Marking> {
        let m = match s {
            "->" | "→" => Marking::Polarized(Polarity::Positive),
            "<-" | "←" => Marking::Polarized(Polarity::Negative),
            "~" | "∼" => Marking::Polarized(Polarity::Virtual),
            "<->" | "↔" => Marking::Polarized(Polarity::Saturated),
            "=" => Marking::Neutral,
            _ => return None,
        };
        Some(m)
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("feature values must contain at least one atom")]
pub struct EmptyValue;

/// A non-empty set of atoms. A singleton is a fully specified value, a larger
/// set is a disjunction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureValue(BTreeSet<String>);

impl FeatureValue {
    pub fn new<I, S>(atoms: I) -> Result<Self, EmptyValue>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = atoms.into_iter().map(Into::into).collect();
        if set.is_empty() {
            Err(EmptyValue)
        } else {
            Ok(FeatureValue(set))
        }
    }

    pub fn atom(atom: impl Into<String>) -> Self {
        FeatureValue(std::iter::once(atom.into()).collect())
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.0.len() == 1
    }

    /// The atom of a singleton value.
    pub fn as_atom(&self) -> Option<&str> {
        if self.is_singleton() {
            self.0.iter().next().map(String::as_str)
        } else {
            None
        }
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.0.contains(atom)
    }

    pub fn is_superset(&self, other: &FeatureValue) -> bool {
        self.0.is_superset(&other.0)
    }

    /// Set intersection, `None` when it is empty.
    pub fn intersect(&self, other: &FeatureValue) -> Option<FeatureValue> {
        let set: BTreeSet<String> = self.0.intersection(&other.0).cloned().collect();
        if set.is_empty() {
            None
        } else {
            Some(FeatureValue(set))
        }
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, atom) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str(atom)?;
        }
        Ok(())
    }
}

/// Coindexation tag. Feature occurrences sharing a tag denote the same entity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoindexTag(pub u32);

impl fmt::Display for CoindexTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Feature {
    pub name: String,
    pub value: FeatureValue,
    pub marking: Marking,
    pub coindex: Option<CoindexTag>,
}

impl Feature {
    pub fn new(name: impl Into<String>, marking: Marking, value: FeatureValue) -> Self {
        Feature {
            name: name.into(),
            value,
            marking,
            coindex: None,
        }
    }

    pub fn with_coindex(mut self, tag: CoindexTag) -> Self {
        self.coindex = Some(tag);
        self
    }

    pub fn polarity(&self) -> Option<Polarity> {
        self.marking.polarity()
    }
}

/// `cat<->s`, `funct<-subj|obj`, `ref=anim#1`
impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.name, self.marking, self.value)?;
        if let Some(tag) = self.coindex {
            write!(f, "{}", tag)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureSyntaxError {
    #[error("missing feature operator in `{0}`")]
    MissingOperator(String),
    #[error("empty feature name in `{0}`")]
    EmptyName(String),
    #[error("empty value in `{0}`")]
    EmptyValue(String),
    #[error("bad coindex tag in `{0}`")]
    BadTag(String),
}

/// Raw parts of a feature literal, before `?` expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FeatureLiteral {
    pub name: String,
    pub marking: Marking,
    pub atoms: Vec<String>,
    pub coindex: Option<CoindexTag>,
}

pub(crate) fn parse_feature_literal(s: &str) -> Result<FeatureLiteral, FeatureSyntaxError> {
    let name_end = s
        .char_indices()
        .find(|(_, c)| !(c.is_alphanumeric() || *c == '_'))
        .map(|(i, _)| i)
        .ok_or_else(|| FeatureSyntaxError::MissingOperator(s.to_owned()))?;
    if name_end == 0 {
        return Err(FeatureSyntaxError::EmptyName(s.to_owned()));
    }
    let (name, rest) = s.split_at(name_end);
    const OPS: [&str; 9] = ["<->", "->", "<-", "~", "=", "↔", "→", "←", "∼"];
    let op = OPS
        .iter()
        .find(|op| rest.starts_with(**op))
        .ok_or_else(|| FeatureSyntaxError::MissingOperator(s.to_owned()))?;
    let marking = Marking::from_symbol(op).expect("operator table is consistent");
    let rest = &rest[op.len()..];
    let (value, coindex) = match rest.split_once('#') {
        Some((v, tag)) => {
            let tag = tag
                .parse::<u32>()
                .map_err(|_| FeatureSyntaxError::BadTag(s.to_owned()))?;
            (v, Some(CoindexTag(tag)))
        }
        None => (rest, None),
    };
    let atoms: Vec<String> = value
        .split('|')
        .filter(|a| !a.is_empty())
        .map(str::to_owned)
        .collect();
    if atoms.is_empty() {
        return Err(FeatureSyntaxError::EmptyValue(s.to_owned()));
    }
    Ok(FeatureLiteral {
        name: name.to_owned(),
        marking,
        atoms,
        coindex,
    })
}

impl FromStr for Feature {
    type Err = FeatureSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lit = parse_feature_literal(s)?;
        Ok(Feature {
            name: lit.name,
            value: FeatureValue::new(lit.atoms).expect("atoms checked non-empty"),
            marking: lit.marking,
            coindex: lit.coindex,
        })
    }
}

/// At most one feature per name, kept in name order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FeatureStructure(BTreeMap<String, Feature>);

impl FeatureStructure {
    pub fn new() -> Self {
        FeatureStructure::default()
    }

    /// Inserts `feature`, returning the one it replaced.
    pub fn insert(&mut self, feature: Feature) -> Option<Feature> {
        self.0.insert(feature.name.clone(), feature)
    }

    pub fn get(&self, name: &str) -> Option<&Feature> {
        self.0.get(name)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Feature> {
        self.0.get_mut(name)
    }

    pub fn remove(&mut self, name: &str) -> Option<Feature> {
        self.0.remove(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Feature> {
        self.0.values()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut Feature> {
        self.0.values_mut()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Feature> for FeatureStructure {
    fn from_iter<T: IntoIterator<Item = Feature>>(iter: T) -> Self {
        let mut fs = FeatureStructure::new();
        for f in iter {
            fs.insert(f);
        }
        fs
    }
}

/// Phonological constraint on a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phon {
    Empty,
    NonEmpty,
    /// Only meaningful in descriptions; model nodes are never unconstrained.
    Any,
}

impl Phon {
    pub fn keyword(self) -> &'static str {
        match self {
            Phon::Empty => "empty",
            Phon::NonEmpty => "nonempty",
            Phon::Any => "any",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Phon> {
        match s {
            "empty" => Some(Phon::Empty),
            "nonempty" => Some(Phon::NonEmpty),
            "any" => Some(Phon::Any),
            _ => None,
        }
    }

    /// Whether a node realized as `actual` satisfies this constraint.
    pub fn admits(self, actual: Phon) -> bool {
        match self {
            Phon::Any => true,
            c => c == actual,
        }
    }
}

impl fmt::Display for Phon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A surface word and its 0-based position in the sentence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token {
    pub form: String,
    pub position: usize,
}

impl Token {
    pub fn new(form: impl Into<String>, position: usize) -> Self {
        Token {
            form: form.into(),
            position,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.form, self.position)
    }
}

impl FromStr for Token {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (form, pos) = s
            .rsplit_once('@')
            .ok_or_else(|| format!("token `{}` lacks an @position", s))?;
        if form.is_empty() {
            return Err(format!("token `{}` has an empty form", s));
        }
        let position = pos
            .parse()
            .map_err(|_| format!("bad position in token `{}`", s))?;
        Ok(Token::new(form, position))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_literal_roundtrip() {
        for lit in ["cat<->s", "funct<-obj|subj", "ref=anim#9", "cat~np", "cat->det"] {
            let f: Feature = lit.parse().unwrap();
            assert_eq!(f.to_string(), lit);
        }
    }

    #[test]
    fn arrow_spelling() {
        let f: Feature = "cat↔s".parse().unwrap();
        assert_eq!(f.marking, Marking::Polarized(Polarity::Saturated));
        let f: Feature = "funct→subj".parse().unwrap();
        assert_eq!(f.marking, Marking::Polarized(Polarity::Positive));
    }

    #[test]
    fn bad_literals() {
        assert!(matches!(
            "cat".parse::<Feature>(),
            Err(FeatureSyntaxError::MissingOperator(_))
        ));
        assert!(matches!(
            "cat->".parse::<Feature>(),
            Err(FeatureSyntaxError::EmptyValue(_))
        ));
        assert!(matches!(
            "ref=a#x".parse::<Feature>(),
            Err(FeatureSyntaxError::BadTag(_))
        ));
    }

    #[test]
    fn values_are_never_empty() {
        assert_eq!(FeatureValue::new(Vec::<String>::new()), Err(EmptyValue));
        let a = FeatureValue::new(["subj", "obj"]).unwrap();
        let b = FeatureValue::atom("obj");
        assert_eq!(a.intersect(&b), Some(b.clone()));
        assert_eq!(b.intersect(&FeatureValue::atom("subj")), None);
    }

    #[test]
    fn token_parse() {
        assert_eq!("apprécie@2".parse::<Token>(), Ok(Token::new("apprécie", 2)));
        assert!("x".parse::<Token>().is_err());
    }
}
