//! 0-1 matrices and pattern-avoiding random generation.
//!
//! The generator produces `subtrees x nodes` matrices that avoid two 2x2
//! submatrix patterns (over arbitrary, not necessarily contiguous, row and
//! column pairs):
//!
//! ```text
//! delta1 = 1 1    delta2 = 0 1
//!          0 1             1 1
//! ```
//!
//! Matrices avoiding both patterns have the *prefix agreement* property:
//! whenever two rows share a 1 in column `l`, they agree on every column
//! left of `l`. [`find_forbidden_submatrix`] is the brute-force reference
//! scanner; [`scan_forbidden`] is the word-parallel equivalent used on hot
//! paths.

use std::fmt;
use std::str::FromStr;

use rand::distr::{Bernoulli, Distribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The two forbidden 2x2 patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    /// `[[1,1],[0,1]]`
    Delta1,
    /// `[[0,1],[1,1]]`
    Delta2,
}

/// Which patterns a scan (or the generator) treats as forbidden.
///
/// `Delta1Only` exists for experiments that drop the second pattern; the
/// default everywhere is `Both`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternSet {
    #[serde(rename = "both")]
    Both,
    #[serde(rename = "delta1-only")]
    Delta1Only,
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternSet::Both => "both",
            PatternSet::Delta1Only => "delta1-only",
        })
    }
}

/// Two rows and two columns whose four cells form a forbidden pattern.
/// Always normalized: `upper_row < lower_row`, `left_col < right_col`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternWitness {
    pub upper_row: usize,
    pub lower_row: usize,
    pub left_col: usize,
    pub right_col: usize,
    pub pattern: Pattern,
}

impl PatternWitness {
    /// Check the witness against the matrix it claims to describe.
    pub fn holds_in(&self, m: &BitMatrix) -> bool {
        if self.upper_row >= self.lower_row
            || self.left_col >= self.right_col
            || self.lower_row >= m.rows()
            || self.right_col >= m.cols()
        {
            return false;
        }
        let cells = (
            m.get(self.upper_row, self.left_col),
            m.get(self.upper_row, self.right_col),
            m.get(self.lower_row, self.left_col),
            m.get(self.lower_row, self.right_col),
        );
        match self.pattern {
            Pattern::Delta1 => cells == (true, true, false, true),
            Pattern::Delta2 => cells == (false, true, true, true),
        }
    }
}

impl fmt::Display for PatternWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.pattern {
            Pattern::Delta1 => "delta1",
            Pattern::Delta2 => "delta2",
        };
        write!(
            f,
            "{name} at rows ({}, {}), cols ({}, {})",
            self.upper_row, self.lower_row, self.left_col, self.right_col
        )
    }
}

/// Row-major 0-1 matrix, one `u64` word per 64 columns of a row.
///
/// Zero rows and zero columns are representable (pruning can eliminate
/// every row); generation and parsing enforce at least one of each.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

/// Borrowed view of one matrix row.
#[derive(Clone, Copy)]
pub struct RowBits<'a> {
    words: &'a [u64],
    len: usize,
}

impl<'a> RowBits<'a> {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, col: usize) -> bool {
        assert!(col < self.len, "column {col} out of bounds ({})", self.len);
        self.words[col / 64] & (1 << (col % 64)) != 0
    }

    pub(crate) fn words(&self) -> &'a [u64] {
        self.words
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    /// Build from explicit 0/1 entries; convenient in tests.
    ///
    /// Panics if the rows are ragged or an entry is not 0 or 1.
    pub fn from_bits<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &bit) in row.iter().enumerate() {
                match bit {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => panic!("entry ({i}, {j}) is {other}, expected 0 or 1"),
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows, "row {row} out of bounds ({})", self.rows);
        assert!(col < self.cols, "col {col} out of bounds ({})", self.cols);
        self.data[row * self.words_per_row + col / 64] & (1 << (col % 64)) != 0
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows, "row {row} out of bounds ({})", self.rows);
        assert!(col < self.cols, "col {col} out of bounds ({})", self.cols);
        let word = &mut self.data[row * self.words_per_row + col / 64];
        if value {
            *word |= 1 << (col % 64);
        } else {
            *word &= !(1 << (col % 64));
        }
    }

    pub fn row(&self, row: usize) -> RowBits<'_> {
        RowBits {
            words: self.row_words(row),
            len: self.cols,
        }
    }

    pub(crate) fn row_words(&self, row: usize) -> &[u64] {
        assert!(row < self.rows, "row {row} out of bounds ({})", self.rows);
        &self.data[row * self.words_per_row..(row + 1) * self.words_per_row]
    }

    pub(crate) fn set_row_words(&mut self, row: usize, words: &[u64]) {
        assert_eq!(words.len(), self.words_per_row);
        let start = row * self.words_per_row;
        self.data[start..start + self.words_per_row].copy_from_slice(words);
    }

    pub fn is_zero_row(&self, row: usize) -> bool {
        self.row_words(row).iter().all(|&w| w == 0)
    }

    pub fn rows_equal(&self, a: usize, b: usize) -> bool {
        self.row_words(a) == self.row_words(b)
    }

    /// Columns holding a 1 in `row`, ascending.
    pub fn support(&self, row: usize) -> Vec<usize> {
        let mut cols = Vec::new();
        for (w, &word) in self.row_words(row).iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                cols.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        cols
    }

    /// New matrix keeping exactly the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            let words = self.row_words(r).to_vec();
            out.set_row_words(i, &words);
        }
        out
    }

    /// Rightmost column `< col` holding a 1 in `row`.
    pub fn rightmost_one_before(&self, row: usize, col: usize) -> Option<usize> {
        if col == 0 {
            return None;
        }
        let words = self.row_words(row);
        let top = (col - 1) / 64;
        let top_bits = (col - 1) % 64 + 1; // number of valid bits in word `top`
        for w in (0..=top).rev() {
            let mut word = words[w];
            if w == top && top_bits < 64 {
                word &= (1 << top_bits) - 1;
            }
            if word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    /// Highest column where both rows hold a 1.
    fn highest_shared_one(&self, a: usize, b: usize) -> Option<usize> {
        let (wa, wb) = (self.row_words(a), self.row_words(b));
        for w in (0..self.words_per_row).rev() {
            let word = wa[w] & wb[w];
            if word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    /// Lowest column `> col` where both rows hold a 1.
    fn lowest_shared_one_after(&self, a: usize, b: usize, col: usize) -> Option<usize> {
        let (wa, wb) = (self.row_words(a), self.row_words(b));
        let start = (col + 1) / 64;
        for w in start..self.words_per_row {
            let mut word = wa[w] & wb[w];
            if w == start {
                let skip = (col + 1) % 64;
                if skip > 0 {
                    word &= !((1u64 << skip) - 1);
                }
                // col+1 multiple of 64: whole word is already past col
            }
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Lowest column `< col` where the rows disagree, restricted to the
    /// requested kind of disagreement.
    fn lowest_disagreement_before(
        &self,
        a: usize,
        b: usize,
        col: usize,
        forbid: PatternSet,
    ) -> Option<usize> {
        let (wa, wb) = (self.row_words(a), self.row_words(b));
        let limit_word = col / 64;
        for w in 0..=limit_word.min(self.words_per_row.saturating_sub(1)) {
            let mut word = match forbid {
                PatternSet::Both => wa[w] ^ wb[w],
                // only "upper row 1, lower row 0" completes a delta1
                PatternSet::Delta1Only => wa[w] & !wb[w],
            };
            if w == limit_word {
                let rem = col % 64;
                if rem == 0 {
                    return None;
                }
                word &= (1u64 << rem) - 1;
            }
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Scan every row pair and column pair for a forbidden submatrix; the
/// reference implementation, quartic on purpose. Returns the first witness
/// in lexicographic `(upper_row, lower_row, left_col, right_col)` order.
pub fn find_forbidden_submatrix(m: &BitMatrix) -> Option<PatternWitness> {
    for upper in 0..m.rows() {
        for lower in upper + 1..m.rows() {
            for left in 0..m.cols() {
                for right in left + 1..m.cols() {
                    let cells = (
                        m.get(upper, left),
                        m.get(upper, right),
                        m.get(lower, left),
                        m.get(lower, right),
                    );
                    let pattern = match cells {
                        (true, true, false, true) => Pattern::Delta1,
                        (false, true, true, true) => Pattern::Delta2,
                        _ => continue,
                    };
                    return Some(PatternWitness {
                        upper_row: upper,
                        lower_row: lower,
                        left_col: left,
                        right_col: right,
                        pattern,
                    });
                }
            }
        }
    }
    None
}

/// Word-parallel forbidden-pattern scan.
///
/// Uses the prefix-agreement characterization: a matrix avoids both
/// patterns iff any two rows sharing a 1 agree on every column left of a
/// shared 1. Same verdict as [`find_forbidden_submatrix`] (the witnesses
/// may differ); with `PatternSet::Delta1Only` the disagreement must put
/// the 1 in the upper row.
pub fn scan_forbidden(m: &BitMatrix, forbid: PatternSet) -> Option<PatternWitness> {
    for a in 0..m.rows() {
        for b in a + 1..m.rows() {
            let Some(shared) = m.highest_shared_one(a, b) else {
                continue;
            };
            let Some(left) = m.lowest_disagreement_before(a, b, shared, forbid) else {
                continue;
            };
            let right = m
                .lowest_shared_one_after(a, b, left)
                .expect("a shared 1 exists above the disagreement");
            let pattern = if m.get(a, left) {
                Pattern::Delta1
            } else {
                Pattern::Delta2
            };
            return Some(PatternWitness {
                upper_row: a,
                lower_row: b,
                left_col: left,
                right_col: right,
                pattern,
            });
        }
    }
    None
}

/// How the generator guards a candidate 1 against pattern completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenMode {
    /// Check the candidate cell against every earlier row and column. This
    /// is the mode that actually guarantees pattern-free output.
    Exhaustive,
    /// Check only the immediately adjacent cells `(i-1, j)`, `(i-1, j-1)`,
    /// `(i, j-1)`. Kept because it is cheap and *almost* works; it can leak
    /// patterns formed by non-adjacent rows (see the regression fixture in
    /// the tests).
    Literal,
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenMode::Exhaustive => "exhaustive",
            GenMode::Literal => "literal",
        })
    }
}

/// Parameters of one generation run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    /// Columns of the matrix = nodes of the tree.
    pub nodes: usize,
    /// Rows of the matrix = subtrees (before pruning).
    pub subtrees: usize,
    pub seed: u64,
    /// Bernoulli probability of drawing a candidate 1.
    pub density: f64,
    pub mode: GenMode,
    pub forbid: PatternSet,
}

impl GenerationConfig {
    pub fn new(nodes: usize, subtrees: usize, seed: u64) -> Self {
        GenerationConfig {
            nodes,
            subtrees,
            seed,
            density: 0.5,
            mode: GenMode::Exhaustive,
            forbid: PatternSet::Both,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.nodes == 0 {
            return Err(ConfigError::NoNodes);
        }
        if self.subtrees == 0 {
            return Err(ConfigError::NoSubtrees);
        }
        if !(self.density > 0.0 && self.density < 1.0) {
            return Err(ConfigError::Density(self.density));
        }
        Ok(())
    }

    /// The generator's random stream: ChaCha8 keyed by `seed` alone, so a
    /// run is reproducible from its config.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("nodes must be at least 1")]
    NoNodes,
    #[error("subtrees must be at least 1")]
    NoSubtrees,
    #[error("density must lie strictly between 0 and 1, got {0}")]
    Density(f64),
}

/// Generate a pattern-avoiding matrix from the config's own seed.
pub fn generate_matrix(config: &GenerationConfig) -> Result<BitMatrix, ConfigError> {
    let mut rng = config.rng();
    generate_matrix_with(config, &mut rng)
}

/// Generate from a caller-supplied random stream.
///
/// Cells are drawn row-major, one Bernoulli draw per cell whether or not
/// the draw ends up committed, so equal seeds give equal matrices across
/// modes with the same draw sequence. Cells in row 0 or column 0 commit
/// their draw unconditionally (a pattern needs two earlier-and-left
/// partners); any other candidate 1 is demoted to 0 if committing it would
/// complete a forbidden pattern.
pub fn generate_matrix_with<R: Rng + ?Sized>(
    config: &GenerationConfig,
    rng: &mut R,
) -> Result<BitMatrix, ConfigError> {
    config.validate()?;
    let coin = Bernoulli::new(config.density).expect("density validated");
    let mut m = BitMatrix::zeros(config.subtrees, config.nodes);
    for i in 0..config.subtrees {
        for j in 0..config.nodes {
            if !coin.sample(rng) {
                continue;
            }
            let commit = i == 0 || j == 0 || {
                let blocked = match config.mode {
                    GenMode::Exhaustive => completes_pattern(&m, i, j, config.forbid),
                    GenMode::Literal => completes_pattern_adjacent(&m, i, j, config.forbid),
                };
                !blocked
            };
            if commit {
                m.set(i, j, true);
            }
        }
    }
    Ok(m)
}

/// Would committing a 1 at `(row, col)` complete a forbidden pattern
/// against the cells already committed above and to the left?
///
/// In row-major order `(row, col)` is necessarily the bottom-right cell of
/// any pattern it completes, so checking rows `< row` against the column
/// prefix is exhaustive.
pub fn would_complete_pattern(m: &BitMatrix, row: usize, col: usize) -> bool {
    assert!(
        row >= 1 && col >= 1,
        "cells in row 0 or column 0 cannot complete a pattern"
    );
    completes_pattern(m, row, col, PatternSet::Both)
}

fn completes_pattern(m: &BitMatrix, row: usize, col: usize, forbid: PatternSet) -> bool {
    // A pattern with bottom-right (row, col) needs an earlier row with a 1
    // in col whose prefix disagrees with row's prefix.
    (0..row).any(|r| m.get(r, col) && m.lowest_disagreement_before(r, row, col, forbid).is_some())
}

fn completes_pattern_adjacent(m: &BitMatrix, row: usize, col: usize, forbid: PatternSet) -> bool {
    if !m.get(row - 1, col) {
        return false;
    }
    let above_left = m.get(row - 1, col - 1);
    let left = m.get(row, col - 1);
    match forbid {
        PatternSet::Both => above_left != left,
        PatternSet::Delta1Only => above_left && !left,
    }
}

/// Render as the plain text format: '0'/'1' separated by single spaces,
/// one row per line, each line newline-terminated.
pub fn matrix_to_text(m: &BitMatrix) -> String {
    let mut out = String::with_capacity(m.rows() * (2 * m.cols()).max(1));
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if c > 0 {
                out.push(' ');
            }
            out.push(if m.get(r, c) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseMatrixError {
    #[error("matrix file has no rows")]
    Empty,
    #[error("line {line}: unexpected token {token:?}, expected '0' or '1'")]
    BadToken { line: usize, token: String },
    #[error("line {line}: row has {got} columns, expected {expected}")]
    RaggedRow {
        line: usize,
        got: usize,
        expected: usize,
    },
}

impl FromStr for BitMatrix {
    type Err = ParseMatrixError;

    /// Parse the plain text format. Blank lines are ignored; any amount of
    /// whitespace separates entries.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut rows: Vec<Vec<bool>> = Vec::new();
        let mut width = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for token in raw.split_whitespace() {
                row.push(match token {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(ParseMatrixError::BadToken {
                            line,
                            token: other.to_string(),
                        })
                    }
                });
            }
            let expected = *width.get_or_insert(row.len());
            if row.len() != expected {
                return Err(ParseMatrixError::RaggedRow {
                    line,
                    got: row.len(),
                    expected,
                });
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(ParseMatrixError::Empty);
        }
        let mut m = BitMatrix::zeros(rows.len(), rows[0].len());
        for (i, row) in rows.iter().enumerate() {
            for (j, &bit) in row.iter().enumerate() {
                if bit {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }
}
