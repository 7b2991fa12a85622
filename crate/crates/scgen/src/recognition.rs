//! Strong chordality recognition, plus a factorial oracle to check it.
//!
//! The polynomial recognizer eliminates *simple* vertices: `v` is simple
//! when the closed neighborhoods of its neighbors form an inclusion chain.
//! Strongly chordal graphs are exactly the graphs where this elimination
//! never gets stuck (hereditarily, every induced subgraph has a simple
//! vertex), so the greedy loop is both sound and complete. Chordality uses
//! the same loop with simplicial vertices. [`brute_force_strong_elimination`]
//! searches vertex orderings directly and exists to cross-validate the
//! recognizer on small graphs.

use crate::graph::Graph;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderKind {
    /// Produced by simple-vertex elimination.
    Simple,
    /// Produced by the ordering search oracle.
    StrongBruteForce,
}

/// A vertex elimination order together with how it was certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationOrder {
    pub order: Vec<usize>,
    pub kind: OrderKind,
}

/// Closed neighborhoods as bit rows, `words` u64s per vertex.
struct Closed {
    words: usize,
    bits: Vec<u64>,
}

impl Closed {
    fn of(g: &Graph) -> Self {
        let n = g.vertex_count();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for v in 0..n {
            let row = &mut bits[v * words..(v + 1) * words];
            row.copy_from_slice(g.adjacency_words(v));
            row[v / 64] |= 1 << (v % 64);
        }
        Closed { words, bits }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    fn contains(&self, v: usize, u: usize) -> bool {
        self.row(v)[u / 64] & (1 << (u % 64)) != 0
    }
}

/// `a ∩ alive ⊆ b`?
fn subset_within(a: &[u64], b: &[u64], alive: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .zip(alive)
        .all(|((&x, &y), &m)| x & m & !y == 0)
}

fn alive_mask(n: usize) -> Vec<u64> {
    let words = n.div_ceil(64);
    let mut mask = vec![u64::MAX; words];
    if !n.is_multiple_of(64) {
        if let Some(last) = mask.last_mut() {
            *last = (1u64 << (n % 64)) - 1;
        }
    }
    mask
}

fn is_alive(alive: &[u64], v: usize) -> bool {
    alive[v / 64] & (1 << (v % 64)) != 0
}

/// Simple within the subgraph induced by `alive`: the closed neighborhoods
/// of v's alive neighbors are pairwise comparable under inclusion.
fn simple_in(closed: &Closed, alive: &[u64], v: usize, n: usize) -> bool {
    let nb: Vec<usize> = (0..n)
        .filter(|&u| u != v && is_alive(alive, u) && closed.contains(v, u))
        .collect();
    for (i, &x) in nb.iter().enumerate() {
        for &y in &nb[i + 1..] {
            if !subset_within(closed.row(x), closed.row(y), alive)
                && !subset_within(closed.row(y), closed.row(x), alive)
            {
                return false;
            }
        }
    }
    true
}

/// Simplicial within `alive`: v's alive neighbors are pairwise adjacent.
fn simplicial_in(closed: &Closed, alive: &[u64], v: usize, n: usize) -> bool {
    (0..n)
        .filter(|&u| u != v && is_alive(alive, u) && closed.contains(v, u))
        .all(|u| {
            // every alive neighbor of v (including v itself) must lie in N[u]
            subset_within(closed.row(v), closed.row(u), alive)
        })
}

/// Is `v` a simple vertex of `g`?
pub fn is_simple_vertex(g: &Graph, v: usize) -> bool {
    let n = g.vertex_count();
    assert!(v < n, "vertex {v} out of bounds");
    simple_in(&Closed::of(g), &alive_mask(n), v, n)
}

fn eliminate(g: &Graph, mut ok: impl FnMut(&Closed, &[u64], usize) -> bool) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let closed = Closed::of(g);
    let mut alive = alive_mask(n);
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        // lowest-index candidate, so orders are reproducible
        let v = (0..n).find(|&v| is_alive(&alive, v) && ok(&closed, &alive, v))?;
        order.push(v);
        alive[v / 64] &= !(1 << (v % 64));
    }
    Some(order)
}

/// Eliminate simple vertices until the graph empties; the order, if one
/// exists, certifies strong chordality.
pub fn is_strongly_chordal(g: &Graph) -> Option<EliminationOrder> {
    let n = g.vertex_count();
    eliminate(g, |closed, alive, v| simple_in(closed, alive, v, n)).map(|order| EliminationOrder {
        order,
        kind: OrderKind::Simple,
    })
}

/// Simplicial-vertex elimination; succeeds exactly on chordal graphs.
pub fn is_chordal(g: &Graph) -> bool {
    let n = g.vertex_count();
    eliminate(g, |closed, alive, v| simplicial_in(closed, alive, v, n)).is_some()
}

/// Search all vertex orderings for a strong elimination ordering: for
/// positions `i < j` and `k < l` with `v_k, v_l` in the closed
/// neighborhood of `v_i` restricted to positions `>= i`, adjacency
/// `v_j ∈ N[v_k]` must imply `v_j ∈ N[v_l]`. Equivalently, the suffix
/// parts of the closed neighborhoods along `N[v_i]` are nested in
/// position order.
///
/// Orders are built back to front; once position `i` is filled, every
/// condition indexed by `i` involves only positions `>= i`, so it is
/// checked immediately and violating prefixes are pruned. Panics above 9
/// vertices (the search is factorial by design).
pub fn brute_force_strong_elimination(g: &Graph) -> Option<EliminationOrder> {
    let n = g.vertex_count();
    assert!(
        n <= 9,
        "brute_force_strong_elimination is capped at 9 vertices, got {n}"
    );
    let closed: Vec<u16> = (0..n)
        .map(|v| {
            let mut mask = 1u16 << v;
            for u in g.neighbors(v) {
                mask |= 1 << u;
            }
            mask
        })
        .collect();
    let mut order = vec![usize::MAX; n];
    let mut used = 0u16;
    if fill_backwards(&closed, n, &mut order, &mut used, n) {
        Some(EliminationOrder {
            order,
            kind: OrderKind::StrongBruteForce,
        })
    } else {
        None
    }
}

fn fill_backwards(
    closed: &[u16],
    n: usize,
    order: &mut [usize],
    used: &mut u16,
    tail: usize,
) -> bool {
    if tail == 0 {
        return true;
    }
    let pos = tail - 1;
    for v in 0..n {
        // candidates in increasing id, so the found order is deterministic
        if *used & (1 << v) != 0 {
            continue;
        }
        order[pos] = v;
        *used |= 1 << v;
        if strong_condition_at(closed, order, n, pos) && fill_backwards(closed, n, order, used, pos)
        {
            return true;
        }
        *used &= !(1 << v);
    }
    order[pos] = usize::MAX;
    false
}

/// Check every (j, k, l) condition indexed by position `pos`; positions
/// `>= pos` are all filled. `j` ranges over the whole suffix, `k` and `l`
/// over the positions of N[v_i] members (including `pos` itself).
fn strong_condition_at(closed: &[u16], order: &[usize], n: usize, pos: usize) -> bool {
    let vi = order[pos];
    // positions >= pos whose vertex lies in N[v_i]; ascending
    let in_nb: Vec<usize> = (pos..n)
        .filter(|&q| closed[vi] & (1 << order[q]) != 0)
        .collect();
    for pj in pos + 1..n {
        let vj = order[pj];
        for (a, &pk) in in_nb.iter().enumerate() {
            if closed[order[pk]] & (1 << vj) == 0 {
                continue;
            }
            for &pl in &in_nb[a + 1..] {
                if closed[order[pl]] & (1 << vj) == 0 {
                    return false;
                }
            }
        }
    }
    true
}
