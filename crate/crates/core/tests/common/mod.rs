//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's traversal code; graphs are rebuilt from the edge list.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use treechoice::{Domain, Preference, Tree};

pub fn adjacency(tree: &Tree) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); tree.len()];
    for &(u, v) in tree.edge_ids() {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// Every simple path from `x` to `y`, by depth-first enumeration.
pub fn all_simple_paths(adj: &[Vec<usize>], x: usize, y: usize) -> Vec<Vec<usize>> {
    fn go(adj: &[Vec<usize>], cur: usize, y: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur == y {
            out.push(path.clone());
            return;
        }
        for &v in &adj[cur] {
            if !path.contains(&v) {
                path.push(v);
                go(adj, v, y, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(adj, x, y, &mut vec![x], &mut out);
    out
}

/// Breadth-first path from `x` to `y`.
pub fn bfs_path(adj: &[Vec<usize>], x: usize, y: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[x] = true;
    let mut q = VecDeque::from([x]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                prev[v] = u;
                q.push_back(v);
            }
        }
    }
    let mut path = vec![y];
    while *path.last().unwrap() != x {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    path
}

pub fn dist(adj: &[Vec<usize>], x: usize, y: usize) -> usize {
    bfs_path(adj, x, y).len() - 1
}

/// Union of all pairwise paths.
pub fn hull(adj: &[Vec<usize>], set: &[usize]) -> BTreeSet<usize> {
    let mut h = BTreeSet::new();
    for &a in set {
        for &b in set {
            h.extend(bfs_path(adj, a, b));
        }
    }
    h
}

/// All hull members at minimum distance from `x`.
pub fn argmin_on_hull(adj: &[Vec<usize>], x: usize, set: &[usize]) -> Vec<usize> {
    let h = hull(adj, set);
    let best = h.iter().map(|&v| dist(adj, x, v)).min().unwrap();
    h.into_iter().filter(|&v| dist(adj, x, v) == best).collect()
}

/// Nonempty subsets of `0..m` as sorted id lists.
pub fn subsets(m: usize) -> Vec<Vec<usize>> {
    (1..1usize << m)
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// The definition, pair by pair: whenever b is on the path from the peak
/// to a (a != b), b is ranked above a.
pub fn pairwise_single_peaked(adj: &[Vec<usize>], ranking: &[usize]) -> bool {
    let m = ranking.len();
    let mut pos = vec![0; m];
    for (r, &v) in ranking.iter().enumerate() {
        pos[v] = r;
    }
    let top = ranking[0];
    for a in 0..m {
        for &b in &bfs_path(adj, top, a) {
            if b != a && pos[b] > pos[a] {
                return false;
            }
        }
    }
    true
}

/// Every prefix of the ranking induces a connected subgraph.
pub fn prefixes_connected(adj: &[Vec<usize>], ranking: &[usize]) -> bool {
    (1..=ranking.len()).all(|k| {
        let members: BTreeSet<usize> = ranking[..k].iter().copied().collect();
        let mut seen = BTreeSet::from([ranking[0]]);
        let mut stack = vec![ranking[0]];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if members.contains(&v) && seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        seen == members
    })
}

/// All profiles of `domain^n` as index tuples.
pub fn index_tuples(d: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..d).map(move |i| {
                    let mut u = t.clone();
                    u.push(i);
                    u
                })
            })
            .collect();
    }
    out
}

pub fn refs<'a>(domain: &'a Domain, idx: &[usize]) -> Vec<&'a Preference> {
    idx.iter().map(|&i| &domain.preferences()[i]).collect()
}

/// Labeled trees on `k` nodes from Pruefer sequences, as edge lists.
pub fn pruefer_trees(k: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for seq in index_tuples(k, k - 2) {
        let mut degree = vec![1; k];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut edges = Vec::new();
        for &s in &seq {
            let leaf = (0..k).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(edges);
    }
    out
}

/// Isomorphism-invariant form: smallest sorted edge list over all
/// relabelings.
pub fn brute_canonical(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    perms
        .iter()
        .map(|p| {
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(u, v)| (p[u].min(p[v]), p[u].max(p[v])))
                .collect();
            e.sort();
            e
        })
        .min()
        .unwrap_or_default()
}

/// A labeled tree from an edge list over `0..k`, nodes named n0, n1, ...
pub fn tree_from_edges(k: usize, edges: &[(usize, usize)]) -> Tree {
    let names: Vec<String> = (0..k).map(|i| format!("n{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let e: Vec<(&str, &str)> = edges.iter().map(|&(u, v)| (refs[u], refs[v])).collect();
    Tree::from_tokens(&refs, &e).unwrap()
}
