//! Strict preferences, domains and profiles, with single-peakedness on a
//! tree.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::alternative::{Alphabet, Alternative};
use crate::error::{Error, Result};
use crate::tree::{write_list, NodeSet, Tree};

/// A strict total order over an alphabet, stored best first.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Alternative>", into = "Vec<Alternative>")]
pub struct Preference {
    alphabet: Alphabet,
    ranking: Box<[usize]>,
    position: Box<[usize]>,
}

/// Builds a preference from a best-first ranking over `alphabet`.
pub fn make_preference(ranking: &[Alternative], alphabet: &[Alternative]) -> Result<Preference> {
    let alphabet = Alphabet::new(alphabet.iter().cloned())?;
    Preference::new(ranking, &alphabet)
}

impl Preference {
    pub fn new(ranking: &[Alternative], alphabet: &Alphabet) -> Result<Self> {
        let ids = ranking
            .iter()
            .map(|a| {
                alphabet
                    .index_of(a)
                    .ok_or_else(|| Error::NotAPermutation(format!("{a} is not in {alphabet}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_ids(alphabet.clone(), ids)
    }

    /// A preference over exactly the alternatives it ranks.
    pub fn from_ranking(ranking: Vec<Alternative>) -> Result<Self> {
        let alphabet = Alphabet::new(ranking.iter().cloned())
            .map_err(|e| Error::NotAPermutation(e.to_string()))?;
        Self::new(&ranking, &alphabet)
    }

    pub fn from_tokens(ranking: &[&str], alphabet: &Alphabet) -> Result<Self> {
        Self::new(&crate::alternative::alts(ranking)?, alphabet)
    }

    pub fn from_ids(alphabet: Alphabet, ranking: Vec<usize>) -> Result<Self> {
        let m = alphabet.len();
        if ranking.len() != m {
            return Err(Error::NotAPermutation(format!(
                "ranks {} alternatives, alphabet {alphabet} has {m}",
                ranking.len()
            )));
        }
        let mut position = vec![usize::MAX; m];
        for (rank, &id) in ranking.iter().enumerate() {
            if id >= m {
                return Err(Error::NotAPermutation(format!("id {id} out of range")));
            }
            if position[id] != usize::MAX {
                return Err(Error::NotAPermutation(format!(
                    "{} is ranked twice",
                    alphabet.get(id)
                )));
            }
            position[id] = rank;
        }
        Ok(Self {
            alphabet,
            ranking: ranking.into(),
            position: position.into(),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn ranking(&self) -> impl ExactSizeIterator<Item = &Alternative> + '_ {
        self.ranking.iter().map(|&i| self.alphabet.get(i))
    }

    pub fn to_vec(&self) -> Vec<Alternative> {
        self.ranking().cloned().collect()
    }

    pub fn ranking_ids(&self) -> &[usize] {
        &self.ranking
    }

    /// The peak of the preference.
    pub fn top(&self) -> &Alternative {
        self.alphabet.get(self.ranking[0])
    }

    pub fn top_id(&self) -> usize {
        self.ranking[0]
    }

    /// Rank of alternative `id`, 0 being best.
    pub fn position(&self, id: usize) -> usize {
        self.position[id]
    }

    /// Whether `a` is strictly preferred to `b`.
    pub fn prefers(&self, a: &Alternative, b: &Alternative) -> Result<bool> {
        if a == b {
            return Err(Error::EqualArguments(a.to_string()));
        }
        Ok(self.prefers_ids(self.alphabet.id(a)?, self.alphabet.id(b)?))
    }

    pub fn prefers_ids(&self, a: usize, b: usize) -> bool {
        self.position[a] < self.position[b]
    }

    /// The relative order of this preference on a sub-alphabet.
    pub fn restrict(&self, to: &Alphabet) -> Result<Preference> {
        let kept: Vec<Alternative> = self.ranking().filter(|a| to.index_of(a).is_some()).cloned().collect();
        if kept.len() != to.len() {
            return Err(Error::AlphabetMismatch(format!("{to} is not a subset of {}", self.alphabet)));
        }
        Preference::new(&kept, to)
    }

    /// The lexicographically first pair `(outer, inner)` with `inner` on the
    /// path from the peak to `outer` but `outer` ranked above `inner`, or
    /// `None` if the preference is single-peaked on `tree`.
    pub fn single_peak_violation(&self, tree: &Tree) -> Result<Option<PeakViolation>> {
        self.check_tree(tree)?;
        if self.single_peaked_ids(tree) {
            return Ok(None);
        }
        let parent = tree.parents_from(self.top_id());
        for outer in 0..tree.len() {
            let mut on_path = Vec::new();
            let mut cur = outer;
            while cur != self.top_id() {
                cur = parent[cur];
                on_path.push(cur);
            }
            on_path.sort_unstable();
            if let Some(&inner) = on_path.iter().find(|&&b| self.prefers_ids(outer, b)) {
                return Ok(Some(PeakViolation {
                    outer: tree.node(outer).clone(),
                    inner: tree.node(inner).clone(),
                }));
            }
        }
        unreachable!("local check failed but no violating pair exists")
    }

    pub fn is_single_peaked(&self, tree: &Tree) -> Result<bool> {
        self.check_tree(tree)?;
        Ok(self.single_peaked_ids(tree))
    }

    /// Every node is ranked below its neighbour towards the peak; with
    /// transitivity this is the same as the pairwise condition.
    fn single_peaked_ids(&self, tree: &Tree) -> bool {
        let parent = tree.parents_from(self.top_id());
        (0..tree.len())
            .filter(|&v| v != self.top_id())
            .all(|v| self.prefers_ids(parent[v], v))
    }

    fn check_tree(&self, tree: &Tree) -> Result<()> {
        if !self.alphabet.same_as(tree.nodes()) {
            return Err(Error::AlphabetMismatch(format!(
                "preference over {} but tree over {}",
                self.alphabet,
                tree.nodes()
            )));
        }
        Ok(())
    }
}

impl PartialEq for Preference {
    fn eq(&self, other: &Self) -> bool {
        self.ranking == other.ranking && self.alphabet.same_as(&other.alphabet)
    }
}

impl Eq for Preference {}

impl Hash for Preference {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.alphabet.hash(state);
        self.ranking.hash(state);
    }
}

impl PartialOrd for Preference {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Preference {
    /// Over a common alphabet this is lexicographic order of the rankings.
    fn cmp(&self, other: &Self) -> Ordering {
        if self.alphabet.same_as(&other.alphabet) {
            self.ranking.cmp(&other.ranking)
        } else {
            self.alphabet.cmp(&other.alphabet)
        }
    }
}

impl TryFrom<Vec<Alternative>> for Preference {
    type Error = Error;

    fn try_from(ranking: Vec<Alternative>) -> Result<Self> {
        Self::from_ranking(ranking)
    }
}

impl From<Preference> for Vec<Alternative> {
    fn from(p: Preference) -> Self {
        p.to_vec()
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.to_vec())
    }
}

/// A witness that a preference is not single-peaked: `inner` lies on the
/// path from the peak to `outer`, yet `outer` is ranked above `inner`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakViolation {
    pub outer: Alternative,
    pub inner: Alternative,
}

/// A nonempty list of distinct preferences over one alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    alphabet: Alphabet,
    preferences: Vec<Preference>,
}

impl Domain {
    /// Validates a domain. Duplicates are rejected rather than merged.
    pub fn new(alphabet: Alphabet, preferences: Vec<Preference>) -> Result<Self> {
        if preferences.is_empty() {
            return Err(Error::EmptyDomain);
        }
        let mut seen = std::collections::HashSet::new();
        for p in &preferences {
            if !p.alphabet.same_as(&alphabet) {
                return Err(Error::AlphabetMismatch(format!(
                    "preference {p} is not over {alphabet}"
                )));
            }
            if !seen.insert(p.ranking_ids()) {
                return Err(Error::DuplicatePreference(p.to_string()));
            }
        }
        // Share one alphabet allocation across all members.
        let preferences = preferences
            .into_iter()
            .map(|p| Preference {
                alphabet: alphabet.clone(),
                ..p
            })
            .collect();
        Ok(Self {
            alphabet,
            preferences,
        })
    }

    pub fn from_tokens(alphabet: &[&str], rankings: &[&[&str]]) -> Result<Self> {
        let alphabet = Alphabet::new(crate::alternative::alts(alphabet)?)?;
        let prefs = rankings
            .iter()
            .map(|r| Preference::from_tokens(r, &alphabet))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, prefs)
    }

    /// Every strict order over `alphabet`, in lexicographic order.
    pub fn unrestricted(alphabet: &Alphabet) -> Domain {
        let m = alphabet.len();
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(m);
        let mut used = vec![false; m];
        permutations(m, &mut prefix, &mut used, &mut |r| out.push(r.to_vec()));
        let prefs = out
            .into_iter()
            .map(|r| Preference::from_ids(alphabet.clone(), r).expect("permutation"))
            .collect();
        Domain::new(alphabet.clone(), prefs).expect("nonempty")
    }

    /// All preferences single-peaked on `tree`, in lexicographic order.
    ///
    /// Rankings are grown top-down so that every prefix stays a connected
    /// subtree, which is exactly the single-peaked condition.
    pub fn single_peaked(tree: &Tree) -> Domain {
        let m = tree.len();
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(m);
        let mut in_prefix = vec![false; m];
        grow_connected(tree, &mut prefix, &mut in_prefix, &mut out);
        let prefs = out
            .into_iter()
            .map(|r| Preference::from_ids(tree.nodes().clone(), r).expect("permutation"))
            .collect();
        Domain::new(tree.nodes().clone(), prefs).expect("trees have nodes")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn preferences(&self) -> &[Preference] {
        &self.preferences
    }

    pub fn get(&self, index: usize) -> Result<&Preference> {
        self.preferences.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.preferences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preferences.is_empty()
    }

    pub fn index_of(&self, p: &Preference) -> Option<usize> {
        self.preferences.iter().position(|q| q == p)
    }

    /// Index of the first member whose peak is alternative `id`.
    pub fn first_with_top(&self, id: usize) -> Option<usize> {
        self.preferences.iter().position(|p| p.top_id() == id)
    }

    /// The set of attained peaks.
    pub fn tops(&self) -> NodeSet {
        NodeSet::new(self.preferences.iter().map(|p| p.top().clone()))
    }

    /// Whether every alternative is the peak of some member.
    pub fn is_minimally_rich(&self) -> bool {
        let mut hit = vec![false; self.alphabet.len()];
        for p in &self.preferences {
            hit[p.top_id()] = true;
        }
        hit.iter().all(|&h| h)
    }

    /// Restricts to the attained peaks, merging preferences that become
    /// equal. The first occurrence keeps its place.
    pub fn restrict(&self) -> Result<Domain> {
        let tops = self.tops();
        if tops.len() < 3 {
            return Err(Error::RestrictionTooSmall(tops.len()));
        }
        let sub = Alphabet::new(tops.iter().cloned())?;
        let mut prefs: Vec<Preference> = Vec::new();
        for p in &self.preferences {
            let r = p.restrict(&sub)?;
            if !prefs.contains(&r) {
                prefs.push(r);
            }
        }
        Domain::new(sub, prefs)
    }

    /// A copy with `p` appended.
    pub fn with_preference(&self, p: Preference) -> Result<Domain> {
        let mut prefs = self.preferences.clone();
        prefs.push(p);
        Domain::new(self.alphabet.clone(), prefs)
    }

    /// A copy with the member at `index` removed.
    pub fn without(&self, index: usize) -> Result<Domain> {
        self.get(index)?;
        let mut prefs = self.preferences.clone();
        prefs.remove(index);
        Domain::new(self.alphabet.clone(), prefs)
    }

    /// Whether every member is single-peaked on `tree`.
    pub fn is_single_peaked_on(&self, tree: &Tree) -> Result<bool> {
        Ok(self.first_not_single_peaked(tree)?.is_none())
    }

    /// Index of the first member that is not single-peaked on `tree`.
    pub fn first_not_single_peaked(&self, tree: &Tree) -> Result<Option<usize>> {
        for (i, p) in self.preferences.iter().enumerate() {
            if !p.is_single_peaked(tree)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.len(), self.alphabet)
    }
}

fn permutations(m: usize, prefix: &mut Vec<usize>, used: &mut [bool], emit: &mut impl FnMut(&[usize])) {
    if prefix.len() == m {
        emit(prefix);
        return;
    }
    for v in 0..m {
        if !used[v] {
            used[v] = true;
            prefix.push(v);
            permutations(m, prefix, used, emit);
            prefix.pop();
            used[v] = false;
        }
    }
}

fn grow_connected(tree: &Tree, prefix: &mut Vec<usize>, in_prefix: &mut [bool], out: &mut Vec<Vec<usize>>) {
    let m = tree.len();
    if prefix.len() == m {
        out.push(prefix.clone());
        return;
    }
    for v in 0..m {
        let attachable = !in_prefix[v]
            && (prefix.is_empty() || tree.neighbors(v).iter().any(|&u| in_prefix[u]));
        if attachable {
            in_prefix[v] = true;
            prefix.push(v);
            grow_connected(tree, prefix, in_prefix, out);
            prefix.pop();
            in_prefix[v] = false;
        }
    }
}

/// One preference per agent, all over the same alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub struct Profile {
    entries: Vec<Preference>,
}

#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    entries: Vec<Preference>,
}

impl TryFrom<ProfileRepr> for Profile {
    type Error = Error;

    fn try_from(r: ProfileRepr) -> Result<Self> {
        Profile::new(r.entries)
    }
}

impl From<Profile> for ProfileRepr {
    fn from(p: Profile) -> Self {
        ProfileRepr { entries: p.entries }
    }
}

impl Profile {
    pub fn new(entries: Vec<Preference>) -> Result<Self> {
        let first = entries.first().ok_or(Error::EmptyProfile)?;
        let alphabet = first.alphabet.clone();
        if let Some(bad) = entries.iter().find(|p| !p.alphabet.same_as(&alphabet)) {
            return Err(Error::AlphabetMismatch(format!(
                "entry {bad} is not over {alphabet}"
            )));
        }
        let entries = entries
            .into_iter()
            .map(|p| Preference {
                alphabet: alphabet.clone(),
                ..p
            })
            .collect();
        Ok(Self { entries })
    }

    /// A profile of domain members picked by index.
    pub fn from_indices(domain: &Domain, indices: &[usize]) -> Result<Self> {
        let entries = indices
            .iter()
            .map(|&i| domain.get(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Preference] {
        &self.entries
    }

    pub fn entry(&self, agent: usize) -> &Preference {
        &self.entries[agent]
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.entries[0].alphabet
    }

    /// The set of reported peaks.
    pub fn tops(&self) -> NodeSet {
        tops_of(&self.entries)
    }

    /// Peak ids, sorted and deduplicated.
    pub fn top_ids(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.entries.iter().map(Preference::top_id).collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// `sigma[i]` names the agent whose preference agent `i` receives.
    pub fn permuted(&self, sigma: &[usize]) -> Result<Profile> {
        let mut check = sigma.to_vec();
        check.sort_unstable();
        if check != (0..self.n()).collect::<Vec<_>>() {
            return Err(Error::Malformed(format!("{sigma:?} is not a permutation of the agents")));
        }
        Profile::new(sigma.iter().map(|&i| self.entries[i].clone()).collect())
    }

    /// A copy where `agent` (0-based) reports `p` instead.
    pub fn with_entry(&self, agent: usize, p: Preference) -> Result<Profile> {
        let mut entries = self.entries.clone();
        *entries
            .get_mut(agent)
            .ok_or_else(|| Error::Malformed(format!("no agent {agent}")))? = p;
        Profile::new(entries)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Set of peaks of any group of preferences.
pub fn tops_of(entries: &[Preference]) -> NodeSet {
    NodeSet::new(entries.iter().map(|p| p.top().clone()))
}
