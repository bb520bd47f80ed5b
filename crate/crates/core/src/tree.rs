//! Trees over an alternative set: paths, distances, path hulls and
//! distance minimizers.
//!
//! Every query has two layers. The public layer speaks [`Alternative`]s
//! and returns [`NodePath`]/[`NodeSet`] values. The id layer (`*_ids`,
//! `hull_mask`, `gate`) works on positions in the tree's [`Alphabet`] and
//! is what the rule and verification code uses in hot loops.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alternative::{Alphabet, Alternative};
use crate::error::{Error, Result};

const NO_PARENT: usize = usize::MAX;

/// A validated tree whose node set is the alternative set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    nodes: Alphabet,
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Tree {
    /// Validates and builds a tree. Node order is irrelevant; the stored
    /// order is canonical.
    pub fn new(nodes: Vec<Alternative>, edges: &[(Alternative, Alternative)]) -> Result<Self> {
        let nodes = Alphabet::new(nodes)?;
        let n = nodes.len();
        if n < 3 {
            return Err(Error::TooFewNodes(n));
        }

        let mut adjacency = vec![Vec::new(); n];
        let mut pairs = Vec::with_capacity(edges.len());
        let mut components = DisjointSets::new(n);
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop(u.to_string()));
            }
            let iu = nodes
                .index_of(u)
                .ok_or_else(|| Error::UnknownEndpoint(u.to_string()))?;
            let iv = nodes
                .index_of(v)
                .ok_or_else(|| Error::UnknownEndpoint(v.to_string()))?;
            let pair = (iu.min(iv), iu.max(iv));
            if pairs.contains(&pair) {
                return Err(Error::DuplicateEdge(u.to_string(), v.to_string()));
            }
            if !components.union(iu, iv) {
                return Err(Error::CycleDetected(u.to_string(), v.to_string()));
            }
            pairs.push(pair);
            adjacency[iu].push(iv);
            adjacency[iv].push(iu);
        }
        if components.count > 1 {
            return Err(Error::DisconnectedGraph(components.count));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        pairs.sort_unstable();
        Ok(Self {
            nodes,
            adjacency,
            edges: pairs,
        })
    }

    /// Convenience constructor from string tokens.
    pub fn from_tokens(nodes: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let nodes = nodes
            .iter()
            .map(|t| Alternative::new(t))
            .collect::<Result<Vec<_>>>()?;
        let edges = edges
            .iter()
            .map(|(u, v)| Ok((Alternative::new(u)?, Alternative::new(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(nodes, &edges)
    }

    pub fn nodes(&self) -> &Alphabet {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Edges as canonical `(smaller, larger)` pairs in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (&Alternative, &Alternative)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v)| (self.nodes.get(u), self.nodes.get(v)))
    }

    pub fn edge_ids(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn id(&self, x: &Alternative) -> Result<usize> {
        self.nodes
            .index_of(x)
            .ok_or_else(|| Error::UnknownNode(x.to_string()))
    }

    pub fn node(&self, id: usize) -> &Alternative {
        self.nodes.get(id)
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    pub fn degree(&self, id: usize) -> usize {
        self.adjacency[id].len()
    }

    /// The unique path from `x` to `y`, both endpoints included.
    pub fn path(&self, x: &Alternative, y: &Alternative) -> Result<NodePath> {
        let ids = self.path_ids(self.id(x)?, self.id(y)?);
        Ok(NodePath(ids.into_iter().map(|i| self.node(i).clone()).collect()))
    }

    /// Number of edges on the path from `x` to `y`.
    pub fn distance(&self, x: &Alternative, y: &Alternative) -> Result<usize> {
        Ok(self.distance_ids(self.id(x)?, self.id(y)?))
    }

    /// The path hull of `set`: the union of all pairwise paths, which is the
    /// smallest subtree containing `set`.
    pub fn path_hull(&self, set: &NodeSet) -> Result<NodeSet> {
        let ids = self.ids_of(set)?;
        let mask = self.hull_mask(&ids);
        Ok(self.set_from_mask(&mask))
    }

    /// The unique node of the path hull of `set` closest to `x`.
    pub fn distance_minimizer(&self, x: &Alternative, set: &NodeSet) -> Result<Alternative> {
        let from = self.id(x)?;
        let ids = self.ids_of(set)?;
        let mask = self.hull_mask(&ids);
        Ok(self.node(self.gate(from, &mask)).clone())
    }

    /// All degree-one nodes.
    pub fn leaves(&self) -> NodeSet {
        NodeSet(
            self.leaf_ids()
                .into_iter()
                .map(|i| self.node(i).clone())
                .collect(),
        )
    }

    pub fn leaf_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degree(i) == 1).collect()
    }

    pub fn is_leaf(&self, x: &Alternative) -> Result<bool> {
        Ok(self.degree(self.id(x)?) == 1)
    }

    /// True iff no node has degree above two.
    pub fn is_line(&self) -> bool {
        self.adjacency.iter().all(|n| n.len() <= 2)
    }

    // --- id layer -------------------------------------------------------

    /// Breadth-first parent pointers towards `root` (`usize::MAX` at root).
    pub fn parents_from(&self, root: usize) -> Vec<usize> {
        let mut parent = vec![NO_PARENT; self.len()];
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    pub fn path_ids(&self, x: usize, y: usize) -> Vec<usize> {
        // Parents towards y, so walking from x yields the path in order.
        let parent = self.parents_from(y);
        let mut path = vec![x];
        let mut cur = x;
        while cur != y {
            cur = parent[cur];
            path.push(cur);
        }
        path
    }

    pub fn distance_ids(&self, x: usize, y: usize) -> usize {
        self.path_ids(x, y).len() - 1
    }

    /// Membership mask of the path hull of `set`. An empty `set` yields an
    /// all-false mask.
    pub fn hull_mask(&self, set: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.len()];
        let Some(&root) = set.first() else {
            return mask;
        };
        // Every path between members passes through the union of paths to
        // one fixed member.
        let parent = self.parents_from(root);
        mask[root] = true;
        for &s in &set[1..] {
            let mut cur = s;
            while !mask[cur] {
                mask[cur] = true;
                cur = parent[cur];
            }
        }
        mask
    }

    /// The hull member closest to `from`. `hull` must be a nonempty
    /// connected mask, e.g. from [`hull_mask`](Self::hull_mask).
    pub fn gate(&self, from: usize, hull: &[bool]) -> usize {
        if hull[from] {
            return from;
        }
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if hull[v] {
                    return v;
                }
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        panic!("gate called with an empty hull");
    }

    pub fn ids_of(&self, set: &NodeSet) -> Result<Vec<usize>> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        set.iter().map(|a| self.id(a)).collect()
    }

    pub fn set_from_mask(&self, mask: &[bool]) -> NodeSet {
        NodeSet(
            mask.iter()
                .enumerate()
                .filter(|(_, &m)| m)
                .map(|(i, _)| self.node(i).clone())
                .collect(),
        )
    }

    pub fn set_from_ids(&self, ids: impl IntoIterator<Item = usize>) -> NodeSet {
        NodeSet::from_iter(ids.into_iter().map(|i| self.node(i).clone()))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.nodes)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "]")
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    count: usize,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            count: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.count -= 1;
        true
    }
}

/// A simple path in a tree, listed from its first endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodePath(Vec<Alternative>);

impl NodePath {
    pub fn nodes(&self) -> &[Alternative] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &Alternative) -> bool {
        self.0.contains(a)
    }

    pub fn reversed(&self) -> NodePath {
        NodePath(self.0.iter().rev().cloned().collect())
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.0)
    }
}

/// A set of alternatives, stored sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Alternative>", into = "Vec<Alternative>")]
pub struct NodeSet(Vec<Alternative>);

impl NodeSet {
    pub fn new(members: impl IntoIterator<Item = Alternative>) -> Self {
        let mut v: Vec<Alternative> = members.into_iter().collect();
        v.sort();
        v.dedup();
        Self(v)
    }

    pub fn from_tokens(tokens: &[&str]) -> Result<Self> {
        Ok(Self::new(crate::alternative::alts(tokens)?))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &Alternative) -> bool {
        self.0.binary_search(a).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Alternative> {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn as_slice(&self) -> &[Alternative] {
        &self.0
    }
}

impl FromIterator<Alternative> for NodeSet {
    fn from_iter<I: IntoIterator<Item = Alternative>>(iter: I) -> Self {
        Self::new(iter)
    }
}

impl From<Vec<Alternative>> for NodeSet {
    fn from(v: Vec<Alternative>) -> Self {
        Self::new(v)
    }
}

impl From<NodeSet> for Vec<Alternative> {
    fn from(s: NodeSet) -> Self {
        s.0
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = &'a Alternative;
    type IntoIter = std::slice::Iter<'a, Alternative>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for NodeSet {
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

pub(crate) fn write_list(f: &mut fmt::Formatter<'_>, items: &[Alternative]) -> fmt::Result {
    write!(f, "[")?;
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, "]")
}
