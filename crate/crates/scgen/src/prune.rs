//! Row pruning: drop rows that cannot name a subtree.
//!
//! All-zero rows go first, then any row equal to an earlier surviving row.
//! Columns are never removed, even when a column ends up all-zero across
//! the surviving rows.

use crate::matrix::BitMatrix;

/// Pruned matrix plus an audit trail. All indices refer to rows of the
/// *input* matrix, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneResult {
    pub pruned: BitMatrix,
    /// Input rows that survived, ascending; row `i` of `pruned` is input
    /// row `kept_rows[i]`.
    pub kept_rows: Vec<usize>,
    pub removed_zero: Vec<usize>,
    /// `(removed, kept)`: row `removed` was dropped as a duplicate of the
    /// earlier surviving row `kept`.
    pub removed_duplicate: Vec<(usize, usize)>,
}

pub fn prune(m: &BitMatrix) -> PruneResult {
    let mut kept_rows: Vec<usize> = Vec::new();
    let mut removed_zero = Vec::new();
    let mut removed_duplicate = Vec::new();
    for r in 0..m.rows() {
        if m.is_zero_row(r) {
            removed_zero.push(r);
        } else if let Some(&first) = kept_rows.iter().find(|&&k| m.rows_equal(k, r)) {
            removed_duplicate.push((r, first));
        } else {
            kept_rows.push(r);
        }
    }
    PruneResult {
        pruned: m.select_rows(&kept_rows),
        kept_rows,
        removed_zero,
        removed_duplicate,
    }
}
