//! Alternatives and canonical alternative sets.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the outcome set, named by a short whitespace-free token.
///
/// Alternatives order lexicographically by token; that order is the
/// canonical order used everywhere in the crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Alternative(Arc<str>);

impl Alternative {
    pub fn new(token: &str) -> Result<Self> {
        if token.is_empty() || token.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(token.to_string()));
        }
        Ok(Self(Arc::from(token)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Alternative {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s)
    }
}

impl TryFrom<String> for Alternative {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Self::new(&s)
    }
}

impl From<Alternative> for String {
    fn from(a: Alternative) -> String {
        a.0.to_string()
    }
}

/// Parses a list of tokens, e.g. `alts(["a", "b"])`.
pub fn alts<I, S>(tokens: I) -> Result<Vec<Alternative>>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    tokens.into_iter().map(|t| Alternative::new(t.as_ref())).collect()
}

/// Parses a comma- or whitespace-separated list such as `"d,b,c,a"`.
pub fn parse_list(text: &str) -> Result<Vec<Alternative>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(Alternative::new)
        .collect()
}

/// A canonically sorted set of distinct alternatives.
///
/// Positions in an `Alphabet` are the node/alternative ids used by the
/// index-level APIs of [`Tree`](crate::Tree) and
/// [`Preference`](crate::Preference). Cloning is cheap.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(Arc<[Alternative]>);

impl Alphabet {
    /// Builds the canonical alphabet; duplicates are an error.
    pub fn new(members: impl IntoIterator<Item = Alternative>) -> Result<Self> {
        let mut members: Vec<Alternative> = members.into_iter().collect();
        members.sort();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateNode(w[0].to_string()));
        }
        Ok(Self(members.into()))
    }

    pub fn index_of(&self, a: &Alternative) -> Option<usize> {
        self.0.binary_search(a).ok()
    }

    pub fn id(&self, a: &Alternative) -> Result<usize> {
        self.index_of(a)
            .ok_or_else(|| Error::UnknownAlternative(a.to_string()))
    }

    pub fn get(&self, id: usize) -> &Alternative {
        &self.0[id]
    }

    pub fn same_as(&self, other: &Alphabet) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Deref for Alphabet {
    type Target = [Alternative];

    fn deref(&self) -> &[Alternative] {
        &self.0
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}
