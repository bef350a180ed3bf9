//! Dense max-plus vectors and matrices.
//!
//! Matrices here are small (a handful of servers), so everything is a
//! dense row-major `Vec` and products are the textbook triple loop with
//! `oplus`/`otimes` in place of `+`/`*`.

use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::{big_oplus, MaxPlusScalar, E, EPS};

/// Column vector of max-plus scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct MaxPlusVector {
    entries: Vec<MaxPlusScalar>,
}

impl MaxPlusVector {
    pub fn new(entries: Vec<MaxPlusScalar>) -> Self {
        assert!(!entries.is_empty(), "vector dimension must be positive");
        MaxPlusVector { entries }
    }

    /// Vector with every entry `e` (the usual initial state).
    pub fn all_e(dim: usize) -> Self {
        Self::new(vec![E; dim])
    }

    /// Vector with every entry `eps`.
    pub fn all_eps(dim: usize) -> Self {
        Self::new(vec![EPS; dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[MaxPlusScalar] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> MaxPlusScalar {
        self.entries[i]
    }

    /// Componentwise ⊕ of two vectors of equal dimension.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "vector oplus",
                left: format!("{}", self.dim()),
                right: format!("{}", other.dim()),
            });
        }
        Ok(MaxPlusVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.oplus(*b))
                .collect(),
        ))
    }
}

impl fmt::Debug for MaxPlusVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

/// Dense rectangular max-plus matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MaxPlusMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MaxPlusScalar>,
}

impl MaxPlusMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<MaxPlusScalar>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        assert_eq!(
            entries.len(),
            rows * cols,
            "expected {rows}x{cols} = {} entries, got {}",
            rows * cols,
            entries.len()
        );
        MaxPlusMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Square matrix filled with `eps`.
    pub fn all_eps(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![EPS; rows * cols])
    }

    /// Builds an `rows x cols` matrix from a per-entry function.
    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> MaxPlusScalar,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    /// The semiring identity matrix: `e` on the diagonal, `eps` elsewhere.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity dimension must be positive");
        Self::from_fn(n, n, |i, j| if i == j { E } else { EPS })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> MaxPlusScalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: MaxPlusScalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.entries[i * self.cols + j] = value;
    }

    /// Matrix-vector product: result[i] = ⊕_j M[i][j] ⊗ v[j].
    pub fn mat_vec(&self, v: &MaxPlusVector) -> Result<MaxPlusVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                context: "mat_vec",
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("dim {}", v.dim()),
            });
        }
        let entries = (0..self.rows)
            .map(|i| big_oplus((0..self.cols).map(|j| self.get(i, j).otimes(v.get(j)))))
            .collect();
        Ok(MaxPlusVector::new(entries))
    }

    /// Matrix product: C[i][j] = ⊕_l A[i][l] ⊗ B[l][j].
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "mat_mul",
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            big_oplus((0..self.cols).map(|l| self.get(i, l).otimes(other.get(l, j))))
        }))
    }

    /// Plain-text render with columns aligned; `eps` for the additive
    /// identity and `0` for `e`. Trailing spaces are trimmed.
    pub fn render(&self) -> String {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| cells.iter().map(|row| row[j].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let mut line = String::new();
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    line.push(' ');
                }
                line.push_str(cell);
                if j + 1 < row.len() {
                    for _ in cell.len()..widths[j] {
                        line.push(' ');
                    }
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for MaxPlusMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}\n{}", self.rows, self.cols, self.render())
    }
}
