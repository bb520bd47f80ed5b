//! Social choice functions: the generic [`Rule`] interface used by the
//! verifier, the extreme rules of a tree, and a couple of reference rules.

use std::fmt;
use std::sync::OnceLock;

use crate::alternative::{Alphabet, Alternative};
use crate::error::{Error, Result};
use crate::preference::{Preference, Profile};
use crate::tree::Tree;

/// Largest tree for which extreme rules tabulate outcomes by peak set.
const MEMO_MAX_NODES: usize = 16;

/// A social choice function over a fixed alphabet.
///
/// The verifier treats rules as black boxes: it only ever calls
/// [`choose`](Rule::choose). Implementations may assume every entry is over
/// [`alphabet`](Rule::alphabet) and that the profile is nonempty.
pub trait Rule: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    /// Outcome as an alphabet id.
    fn choose(&self, profile: &[&Preference]) -> usize;

    fn name(&self) -> String;

    /// Checked evaluation on a [`Profile`].
    fn apply(&self, profile: &Profile) -> Result<Alternative> {
        if !profile.alphabet().same_as(self.alphabet()) {
            return Err(Error::AlphabetMismatch(format!(
                "profile over {} but rule over {}",
                profile.alphabet(),
                self.alphabet()
            )));
        }
        let refs: Vec<&Preference> = profile.entries().iter().collect();
        Ok(self.alphabet().get(self.choose(&refs)).clone())
    }
}

/// A rule whose outcome depends only on the set of reported peaks.
///
/// Implementing this trait is a promise; the accelerated strategy-proofness
/// search relies on it and is unsound for rules that break it.
pub trait TopsOnlyRule: Rule {
    /// Outcome for a nonempty list of peak ids (duplicates allowed).
    fn choose_by_tops(&self, tops: &[usize]) -> usize;
}

/// The extreme rule of a leaf: picks the node of the peaks' path hull
/// nearest to that leaf.
pub struct ExtremeRule {
    tree: Tree,
    leaf: usize,
    memo: OnceLock<Option<Box<[u8]>>>,
}

impl ExtremeRule {
    pub fn new(tree: &Tree, leaf: &Alternative) -> Result<Self> {
        let id = tree.id(leaf)?;
        if tree.degree(id) != 1 {
            return Err(Error::NotALeaf(leaf.to_string()));
        }
        Ok(Self {
            tree: tree.clone(),
            leaf: id,
            memo: OnceLock::new(),
        })
    }

    /// One rule per leaf, in canonical leaf order.
    pub fn all(tree: &Tree) -> Vec<ExtremeRule> {
        tree.leaf_ids()
            .into_iter()
            .map(|l| ExtremeRule::new(tree, tree.node(l)).expect("leaf"))
            .collect()
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn leaf(&self) -> &Alternative {
        self.tree.node(self.leaf)
    }

    pub fn leaf_id(&self) -> usize {
        self.leaf
    }

    fn direct(&self, tops: &[usize]) -> usize {
        let hull = self.tree.hull_mask(tops);
        self.tree.gate(self.leaf, &hull)
    }

    fn table(&self) -> Option<&[u8]> {
        self.memo
            .get_or_init(|| {
                let m = self.tree.len();
                if m > MEMO_MAX_NODES {
                    return None;
                }
                let mut table = vec![u8::MAX; 1 << m];
                let mut ids = Vec::with_capacity(m);
                for (mask, slot) in table.iter_mut().enumerate().skip(1) {
                    ids.clear();
                    ids.extend((0..m).filter(|i| mask >> i & 1 == 1));
                    *slot = self.direct(&ids) as u8;
                }
                Some(table.into())
            })
            .as_deref()
    }
}

impl Rule for ExtremeRule {
    fn alphabet(&self) -> &Alphabet {
        self.tree.nodes()
    }

    fn choose(&self, profile: &[&Preference]) -> usize {
        match self.table() {
            Some(table) => {
                let mask = profile.iter().fold(0usize, |m, p| m | 1 << p.top_id());
                table[mask] as usize
            }
            None => {
                let tops: Vec<usize> = profile.iter().map(|p| p.top_id()).collect();
                self.direct(&tops)
            }
        }
    }

    fn name(&self) -> String {
        format!("extreme[{}]", self.leaf())
    }
}

impl TopsOnlyRule for ExtremeRule {
    fn choose_by_tops(&self, tops: &[usize]) -> usize {
        match self.table() {
            Some(table) => table[tops.iter().fold(0usize, |m, &t| m | 1 << t)] as usize,
            None => self.direct(tops),
        }
    }
}

impl fmt::Debug for ExtremeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtremeRule")
            .field("tree", &self.tree.to_string())
            .field("leaf", &self.leaf())
            .finish()
    }
}

impl Clone for ExtremeRule {
    fn clone(&self) -> Self {
        Self {
            tree: self.tree.clone(),
            leaf: self.leaf,
            memo: OnceLock::new(),
        }
    }
}

impl PartialEq for ExtremeRule {
    fn eq(&self, other: &Self) -> bool {
        self.leaf == other.leaf && self.tree == other.tree
    }
}

/// Always returns the peak of one fixed agent (0-based).
#[derive(Clone, Debug)]
pub struct Dictatorship {
    alphabet: Alphabet,
    agent: usize,
}

impl Dictatorship {
    pub fn new(alphabet: &Alphabet, agent: usize) -> Self {
        Self {
            alphabet: alphabet.clone(),
            agent,
        }
    }
}

impl Rule for Dictatorship {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn choose(&self, profile: &[&Preference]) -> usize {
        profile[self.agent.min(profile.len() - 1)].top_id()
    }

    fn name(&self) -> String {
        format!("dictator[{}]", self.agent + 1)
    }
}

/// Ignores the profile.
#[derive(Clone, Debug)]
pub struct ConstantRule {
    alphabet: Alphabet,
    outcome: usize,
}

impl ConstantRule {
    pub fn new(alphabet: &Alphabet, outcome: &Alternative) -> Result<Self> {
        Ok(Self {
            alphabet: alphabet.clone(),
            outcome: alphabet.id(outcome)?,
        })
    }
}

impl Rule for ConstantRule {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn choose(&self, _profile: &[&Preference]) -> usize {
        self.outcome
    }

    fn name(&self) -> String {
        format!("constant[{}]", self.alphabet.get(self.outcome))
    }
}
