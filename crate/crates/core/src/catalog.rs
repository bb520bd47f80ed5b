//! Small-tree fixtures: lines, stars, and every unlabeled tree of a given
//! size up to isomorphism.
//!
//! Trees are grown one leaf at a time and deduplicated by a canonical code
//! (AHU encoding rooted at the center, minimized over bicentral roots).
//! Nodes are named `a`, `b`, ... in breadth-first order from the center,
//! or `v00`, `v01`, ... past 26 nodes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alternative::Alternative;
use crate::tree::Tree;

/// A tree with a stable catalog identifier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogTree {
    pub id: String,
    #[serde(with = "crate::io::tree_serde")]
    pub tree: Tree,
}

pub fn node_name(i: usize, size: usize) -> String {
    if size <= 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("v{i:02}")
    }
}

/// The line `a - b - c - ...` on `m` nodes.
pub fn line(m: usize) -> Tree {
    let names: Vec<String> = (0..m).map(|i| node_name(i, m)).collect();
    let edges: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
    labeled(&names, &edges)
}

/// The star with center `c` (or the first name) and `m - 1` leaves.
pub fn star(m: usize) -> Tree {
    let names: Vec<String> = (0..m).map(|i| node_name(i, m)).collect();
    let edges: Vec<(usize, usize)> = (1..m).map(|i| (0, i)).collect();
    labeled(&names, &edges)
}

fn labeled(names: &[String], edges: &[(usize, usize)]) -> Tree {
    let nodes = names.iter().map(|n| Alternative::new(n).unwrap()).collect();
    let edges: Vec<_> = edges
        .iter()
        .map(|&(u, v)| (Alternative::new(&names[u]).unwrap(), Alternative::new(&names[v]).unwrap()))
        .collect();
    Tree::new(nodes, &edges).expect("valid fixture")
}

/// Canonical isomorphism code of a tree: equal iff the trees are
/// isomorphic.
pub fn canonical_code(tree: &Tree) -> String {
    let adj: Vec<Vec<usize>> = (0..tree.len()).map(|i| tree.neighbors(i).to_vec()).collect();
    code_of(&adj).0
}

/// Every tree on `size` nodes up to isomorphism, sorted by canonical code.
/// Sizes below 3 are not trees in this crate's sense and yield nothing.
pub fn nonisomorphic_trees(size: usize) -> Vec<Tree> {
    if size < 3 {
        return Vec::new();
    }
    let mut layer: BTreeMap<String, Vec<Vec<usize>>> = BTreeMap::new();
    layer.insert(String::new(), vec![Vec::new()]);
    for _ in 1..size {
        let mut next = BTreeMap::new();
        for adj in layer.values() {
            for attach in 0..adj.len() {
                let mut grown = adj.clone();
                let new = grown.len();
                grown.push(vec![attach]);
                grown[attach].push(new);
                let (code, _) = code_of(&grown);
                next.entry(code).or_insert(grown);
            }
        }
        layer = next;
    }
    layer.values().map(|adj| relabel(adj)).collect()
}

/// All trees with sizes in `sizes`, with ids `t<size>_<k>`.
pub fn catalog(sizes: impl IntoIterator<Item = usize>) -> Vec<CatalogTree> {
    sizes
        .into_iter()
        .flat_map(|size| {
            nonisomorphic_trees(size)
                .into_iter()
                .enumerate()
                .map(move |(k, tree)| CatalogTree {
                    id: format!("t{size}_{k}"),
                    tree,
                })
        })
        .collect()
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &v in &adj[leaf] {
                degree[v] -= 1;
                if degree[v] == 1 {
                    next.push(v);
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&u| u != parent)
        .map(|&u| rooted_code(adj, u, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// (code, root achieving it)
fn code_of(adj: &[Vec<usize>]) -> (String, usize) {
    centers(adj)
        .into_iter()
        .map(|c| (rooted_code(adj, c, usize::MAX), c))
        .min()
        .expect("nonempty")
}

fn relabel(adj: &[Vec<usize>]) -> Tree {
    let (_, root) = code_of(adj);
    let n = adj.len();
    // Breadth-first from the root, children in canonical-code order.
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; n];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let mut kids: Vec<(String, usize)> = adj[v]
            .iter()
            .filter(|&&u| u != parent[v])
            .map(|&u| (rooted_code(adj, u, v), u))
            .collect();
        kids.sort();
        for (_, u) in kids {
            parent[u] = v;
            order.push(u);
        }
    }
    let mut name_of = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        name_of[v] = k;
    }
    let names: Vec<String> = (0..n).map(|k| node_name(k, n)).collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .filter(|&v| parent[v] != usize::MAX)
        .map(|v| (name_of[parent[v]], name_of[v]))
        .collect();
    labeled(&names, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_sequence() {
        let counts: Vec<usize> = (3..=9).map(|k| nonisomorphic_trees(k).len()).collect();
        assert_eq!(counts, [1, 2, 3, 6, 11, 23, 47]);
        assert!(nonisomorphic_trees(2).is_empty());
    }

    #[test]
    fn catalog_up_to_six_has_twelve_trees() {
        let cat = catalog(3..=6);
        assert_eq!(cat.len(), 12);
        assert_eq!(cat[0].id, "t3_0");
        assert!(cat.iter().all(|c| c.tree.len() >= 3));
    }

    #[test]
    fn fixtures() {
        assert!(line(5).is_line());
        assert_eq!(line(5).leaves().len(), 2);
        assert_eq!(star(5).leaves().len(), 4);
        let four: Vec<String> = nonisomorphic_trees(4).iter().map(canonical_code).collect();
        assert!(four.contains(&canonical_code(&line(4))));
        assert!(four.contains(&canonical_code(&star(4))));
    }

    #[test]
    fn codes_separate_shapes() {
        assert_ne!(canonical_code(&line(4)), canonical_code(&star(4)));
        let relabeled = Tree::from_tokens(&["p", "q", "r", "s"], &[("q", "s"), ("s", "p"), ("p", "r")]).unwrap();
        assert_eq!(canonical_code(&relabeled), canonical_code(&line(4)));
    }
}
