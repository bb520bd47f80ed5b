//! JSON document formats for trees, domains, profiles and rule
//! designations.
//!
//! ```text
//! tree:    {"nodes": ["a", ...], "edges": [["a", "b"], ...]}
//! domain:  {"alternatives": [...], "preferences": [[best, ..., worst], ...]}
//! profile: {"entries": [ranking, ...]}  or  {"indices": [0, 3, ...]}
//! rule:    {"type": "extreme", "leaf": "a"}
//! ```
//!
//! Writers emit the canonical form (sorted nodes, sorted edge pairs), so
//! loading and saving a value is stable. Parse errors carry the JSON path
//! and line/column of the offending field.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::alternative::{Alphabet, Alternative};
use crate::error::{Error, Result};
use crate::preference::{Domain, Preference, Profile};
use crate::rules::ExtremeRule;
use crate::tree::Tree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub nodes: Vec<Alternative>,
    pub edges: Vec<(Alternative, Alternative)>,
}

impl From<&Tree> for TreeDoc {
    fn from(t: &Tree) -> Self {
        Self {
            nodes: t.nodes().to_vec(),
            edges: t.edges().map(|(u, v)| (u.clone(), v.clone())).collect(),
        }
    }
}

impl TryFrom<TreeDoc> for Tree {
    type Error = Error;

    fn try_from(doc: TreeDoc) -> Result<Tree> {
        Tree::new(doc.nodes, &doc.edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainDoc {
    pub alternatives: Vec<Alternative>,
    pub preferences: Vec<Vec<Alternative>>,
}

impl From<&Domain> for DomainDoc {
    fn from(d: &Domain) -> Self {
        Self {
            alternatives: d.alphabet().to_vec(),
            preferences: d.preferences().iter().map(Preference::to_vec).collect(),
        }
    }
}

impl TryFrom<DomainDoc> for Domain {
    type Error = Error;

    fn try_from(doc: DomainDoc) -> Result<Domain> {
        let alphabet = Alphabet::new(doc.alternatives)?;
        let prefs = doc
            .preferences
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Preference::new(r, &alphabet).map_err(|e| Error::Malformed(format!("preferences[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Domain::new(alphabet, prefs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileDoc {
    Entries { entries: Vec<Vec<Alternative>> },
    Indices { indices: Vec<usize> },
}

impl ProfileDoc {
    /// Resolves against the alphabet (for rankings) or the domain (for
    /// indices). Index form requires a domain.
    pub fn resolve(&self, alphabet: &Alphabet, domain: Option<&Domain>) -> Result<Profile> {
        match self {
            ProfileDoc::Entries { entries } => Profile::new(
                entries
                    .iter()
                    .map(|r| Preference::new(r, alphabet))
                    .collect::<Result<Vec<_>>>()?,
            ),
            ProfileDoc::Indices { indices } => {
                let domain = domain.ok_or_else(|| {
                    Error::Malformed("an index profile needs a domain file".into())
                })?;
                Profile::from_indices(domain, indices)
            }
        }
    }
}

impl From<&Profile> for ProfileDoc {
    fn from(p: &Profile) -> Self {
        ProfileDoc::Entries {
            entries: p.entries().iter().map(Preference::to_vec).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleDoc {
    Extreme { leaf: Alternative },
}

impl RuleDoc {
    pub fn build(&self, tree: &Tree) -> Result<ExtremeRule> {
        match self {
            RuleDoc::Extreme { leaf } => ExtremeRule::new(tree, leaf),
        }
    }
}

impl From<&ExtremeRule> for RuleDoc {
    fn from(r: &ExtremeRule) -> Self {
        RuleDoc::Extreme { leaf: r.leaf().clone() }
    }
}

/// Parses a JSON document, reporting the failing field path and position.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Malformed(format!(
            "at {} (line {}, column {}): {}",
            if path == "." { "top level".to_string() } else { path },
            inner.line(),
            inner.column(),
            inner
        ))
    })
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

fn with_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Malformed(m) => Error::Malformed(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn tree_from_str(text: &str) -> Result<Tree> {
    Tree::try_from(parse::<TreeDoc>(text)?)
}

pub fn tree_to_string(tree: &Tree) -> String {
    to_json(&TreeDoc::from(tree))
}

pub fn domain_from_str(text: &str) -> Result<Domain> {
    Domain::try_from(parse::<DomainDoc>(text)?)
}

pub fn domain_to_string(domain: &Domain) -> String {
    to_json(&DomainDoc::from(domain))
}

pub fn profile_to_string(profile: &Profile) -> String {
    to_json(&ProfileDoc::from(profile))
}

pub fn load_tree(path: &Path) -> Result<Tree> {
    with_file(path, tree_from_str(&read(path)?))
}

pub fn load_domain(path: &Path) -> Result<Domain> {
    with_file(path, domain_from_str(&read(path)?))
}

pub fn load_profile(path: &Path, alphabet: &Alphabet, domain: Option<&Domain>) -> Result<Profile> {
    let doc: ProfileDoc = with_file(path, parse(&read(path)?))?;
    with_file(path, doc.resolve(alphabet, domain))
}

pub fn load_rule(path: &Path) -> Result<RuleDoc> {
    with_file(path, parse(&read(path)?))
}

/// `#[serde(with = ...)]` adapter storing a [`Tree`] in file form.
pub mod tree_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(tree: &Tree, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeDoc::from(tree).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Tree, D::Error> {
        let doc = TreeDoc::deserialize(d)?;
        Tree::try_from(doc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn tree_round_trip_is_canonical() {
        let text = r#"{"nodes": ["d", "c", "b", "a"], "edges": [["d", "c"], ["b", "a"], ["c", "b"]]}"#;
        let t = tree_from_str(text).unwrap();
        let saved = tree_to_string(&t);
        assert_eq!(tree_from_str(&saved).unwrap(), t);
        assert_eq!(tree_to_string(&tree_from_str(&saved).unwrap()), saved);
        assert!(saved.find("\"a\"").unwrap() < saved.find("\"d\"").unwrap());
    }

    #[test]
    fn self_loop_is_diagnosed() {
        let text = r#"{"nodes": ["a", "b", "c"], "edges": [["a", "b"], ["c", "c"]]}"#;
        assert_eq!(tree_from_str(text), Err(Error::SelfLoop("c".into())));
    }

    #[test]
    fn malformed_documents_name_the_field() {
        let text = "{\"nodes\": [\"a\", \"b\", \"c\"],\n \"edges\": [[\"a\", 3]]}";
        let Err(Error::Malformed(msg)) = tree_from_str(text) else { panic!() };
        assert!(msg.contains("edges[0]"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
        let Err(Error::Malformed(msg)) = tree_from_str(r#"{"nodes": ["a b"], "edges": []}"#) else { panic!() };
        assert!(msg.contains("nodes[0]"), "{msg}");
    }

    #[test]
    fn domain_round_trip() {
        let d = Domain::single_peaked(&catalog::star(4));
        let saved = domain_to_string(&d);
        assert_eq!(domain_from_str(&saved).unwrap(), d);
        assert_eq!(domain_to_string(&domain_from_str(&saved).unwrap()), saved);
    }

    #[test]
    fn duplicate_domain_entries_are_rejected() {
        let text = r#"{"alternatives": ["a","b","c"], "preferences": [["a","b","c"],["a","b","c"]]}"#;
        assert!(matches!(domain_from_str(text), Err(Error::DuplicatePreference(_))));
    }

    #[test]
    fn profiles_by_rankings_and_indices() {
        let t = catalog::line(4);
        let d = Domain::single_peaked(&t);
        let by_index: ProfileDoc = parse(r#"{"indices": [0, 7]}"#).unwrap();
        let p = by_index.resolve(t.nodes(), Some(&d)).unwrap();
        assert_eq!(p.entry(1).to_string(), "[d,c,b,a]");
        assert!(by_index.resolve(t.nodes(), None).is_err());
        let by_rank: ProfileDoc = parse(&profile_to_string(&p)).unwrap();
        assert_eq!(by_rank.resolve(t.nodes(), None).unwrap(), p);
    }

    #[test]
    fn rule_designation() {
        let r: RuleDoc = parse(r#"{"type": "extreme", "leaf": "a"}"#).unwrap();
        let t = catalog::line(4);
        assert_eq!(r.build(&t).unwrap().leaf().as_str(), "a");
        assert_eq!(to_json(&RuleDoc::from(&r.build(&t).unwrap())).replace(char::is_whitespace, ""), r#"{"type":"extreme","leaf":"a"}"#);
        assert!(parse::<RuleDoc>(r#"{"type": "median", "leaf": "a"}"#).is_err());
    }
}
