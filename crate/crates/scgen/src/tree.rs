//! Rooted weighted trees realizing pruned matrices as subtree families.
//!
//! Columns become nodes `v_0..v_{n-1}` with `v_0` the root. Node `j >= 1`
//! hangs below the rightmost column `< j` that holds a 1 in any row whose
//! column `j` is 1 — prefix agreement makes that column independent of the
//! chosen row — or below the root if no such row exists. The edge weight is
//! the index gap, so the weighted distance from the root to `v_j` is
//! exactly `j` and nodes are ordered by strictly increasing root distance.

use crate::matrix::{scan_forbidden, BitMatrix, PatternSet, PatternWitness};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    /// `parent[j] < j` for `j >= 1`; `parent[0]` is unused and stored as 0.
    parent: Vec<usize>,
    /// `weight[j] = j - parent[j]`; `weight[0]` is unused and stored as 0.
    weight: Vec<u64>,
}

impl WeightedTree {
    /// Build from a parent array, deriving each edge weight as the index
    /// gap. Panics unless `parent[j] < j` for every non-root node.
    pub fn from_parents(parent: Vec<usize>) -> Self {
        assert!(!parent.is_empty(), "a tree has at least its root");
        let mut weight = vec![0u64; parent.len()];
        for (j, &p) in parent.iter().enumerate().skip(1) {
            assert!(p < j, "parent of node {j} must be a lower index, got {p}");
            weight[j] = (j - p) as u64;
        }
        WeightedTree { parent, weight }
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Parent of a node; `None` for the root.
    pub fn parent(&self, node: usize) -> Option<usize> {
        assert!(node < self.node_count(), "node {node} out of bounds");
        (node > 0).then(|| self.parent[node])
    }

    /// Weight of the edge from `node` up to its parent.
    pub fn edge_weight(&self, node: usize) -> u64 {
        assert!(
            node > 0 && node < self.node_count(),
            "node {node} has no parent edge"
        );
        self.weight[node]
    }

    /// Weighted distance from the root; equals the node index by
    /// construction (the gap weights telescope).
    pub fn root_distance(&self, node: usize) -> u64 {
        assert!(node < self.node_count(), "node {node} out of bounds");
        node as u64
    }

    /// Weighted distance between two nodes along the unique tree path.
    ///
    /// Both endpoints climb toward the root; the higher-indexed one is
    /// strictly deeper, so repeatedly lifting it reaches the meeting point.
    pub fn distance(&self, a: usize, b: usize) -> u64 {
        assert!(a < self.node_count(), "node {a} out of bounds");
        assert!(b < self.node_count(), "node {b} out of bounds");
        let (mut a, mut b) = (a, b);
        let mut total = 0;
        while a != b {
            if a < b {
                total += self.weight[b];
                b = self.parent[b];
            } else {
                total += self.weight[a];
                a = self.parent[a];
            }
        }
        total
    }

    /// Nodes on the path from `a` to `b`, inclusive, in path order.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut up = vec![a];
        let mut down = vec![b];
        let (mut x, mut y) = (a, b);
        while x != y {
            if x < y {
                y = self.parent[y];
                down.push(y);
            } else {
                x = self.parent[x];
                up.push(x);
            }
        }
        down.pop();
        down.reverse();
        up.extend(down);
        up
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("matrix contains a forbidden pattern: {witness}")]
pub struct TreeBuildError {
    pub witness: PatternWitness,
}

/// Realize a pruned pattern-free matrix as a tree: column `j` attaches to
/// the rightmost earlier column holding a 1 in any row that has a 1 in
/// column `j`, or to the root. Fails with a witness if the matrix is not
/// pattern-free (prefix agreement is what makes the rule well defined).
pub fn build_tree(pruned: &BitMatrix) -> Result<WeightedTree, TreeBuildError> {
    if let Some(witness) = scan_forbidden(pruned, PatternSet::Both) {
        return Err(TreeBuildError { witness });
    }
    let n = pruned.cols();
    assert!(n >= 1, "a tree needs at least one column");
    let mut parent = vec![0usize; n];
    for (j, slot) in parent.iter_mut().enumerate().skip(1) {
        // any row with a 1 in column j gives the same answer; take the first
        *slot = (0..pruned.rows())
            .find(|&r| pruned.get(r, j))
            .and_then(|r| pruned.rightmost_one_before(r, j))
            .unwrap_or(0);
    }
    Ok(WeightedTree::from_parents(parent))
}

/// A tree together with its realized subtree node sets (the row supports).
#[derive(Clone, Debug)]
pub struct SubtreeFamily {
    pub tree: WeightedTree,
    pub members: Vec<Vec<usize>>,
}

impl SubtreeFamily {
    pub fn from_pruned(tree: WeightedTree, pruned: &BitMatrix) -> Self {
        assert_eq!(tree.node_count(), pruned.cols());
        let members = (0..pruned.rows()).map(|r| pruned.support(r)).collect();
        SubtreeFamily { tree, members }
    }
}

/// Do the nodes induce a connected subgraph of the tree?
///
/// Empty sets are not connected; singletons are. Because every non-root
/// node's parent has a lower index, the induced subgraph is connected
/// exactly when each member other than the lowest-indexed one has its
/// parent in the set.
pub fn is_connected_in_tree(tree: &WeightedTree, nodes: &[usize]) -> bool {
    let Some(&lowest) = nodes.iter().min() else {
        return false;
    };
    let mut member = vec![false; tree.node_count()];
    for &v in nodes {
        assert!(v < tree.node_count(), "node {v} out of bounds");
        member[v] = true;
    }
    nodes.iter().all(|&v| v == lowest || member[tree.parent[v]])
}

/// Fullness of `a` with respect to `b`: for any nodes `u, v` of `b` with
/// `root_distance(u) <= root_distance(v)`, if `v` lies in `a` then so must
/// `u`. Evaluated literally; the sets here are row supports, never large.
pub fn is_full(tree: &WeightedTree, a: &[usize], b: &[usize]) -> bool {
    let mut in_a = vec![false; tree.node_count()];
    for &x in a {
        assert!(x < tree.node_count(), "node {x} out of bounds");
        in_a[x] = true;
    }
    for &v in b {
        if !in_a[v] {
            continue;
        }
        for &u in b {
            if tree.root_distance(u) <= tree.root_distance(v) && !in_a[u] {
                return false;
            }
        }
    }
    true
}

/// Every unordered pair of members must be full in at least one direction.
pub fn is_compatible_family(family: &SubtreeFamily) -> bool {
    #[cfg(feature = "parallel")]
    {
        is_compatible_family_par(family)
    }
    #[cfg(not(feature = "parallel"))]
    {
        is_compatible_family_seq(family)
    }
}

pub fn is_compatible_family_seq(family: &SubtreeFamily) -> bool {
    let members = &family.members;
    (0..members.len()).all(|i| (i + 1..members.len()).all(|j| full_either_way(family, i, j)))
}

#[cfg(feature = "parallel")]
pub fn is_compatible_family_par(family: &SubtreeFamily) -> bool {
    use rayon::prelude::*;
    let members = &family.members;
    (0..members.len())
        .into_par_iter()
        .all(|i| (i + 1..members.len()).all(|j| full_either_way(family, i, j)))
}

fn full_either_way(family: &SubtreeFamily, i: usize, j: usize) -> bool {
    let (a, b) = (&family.members[i], &family.members[j]);
    is_full(&family.tree, a, b) || is_full(&family.tree, b, a)
}

/// One `parent child weight` line per non-root node, children ascending.
pub fn tree_to_edge_list(tree: &WeightedTree) -> String {
    let mut out = String::new();
    for j in 1..tree.node_count() {
        out.push_str(&format!("{} {} {}\n", tree.parent[j], j, tree.weight[j]));
    }
    out
}

/// Graphviz rendering; node labels `v_j`, edges labeled by weight.
pub fn tree_to_dot(tree: &WeightedTree) -> String {
    let mut out = String::from("graph tree {\n");
    for j in 0..tree.node_count() {
        out.push_str(&format!("  n{j} [label=\"v_{j}\"];\n"));
    }
    for j in 1..tree.node_count() {
        out.push_str(&format!(
            "  n{} -- n{} [label=\"{}\"];\n",
            tree.parent[j], j, tree.weight[j]
        ));
    }
    out.push_str("}\n");
    out
}
