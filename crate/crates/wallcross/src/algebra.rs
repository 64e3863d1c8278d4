//! exact rational scalars and sparse matrices with rank / kernel / solve.
//!
//! scalars are arbitrary-precision rationals; there is deliberately no
//! conversion from floats anywhere in this crate, so every downstream
//! check is an exact equality.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// exact rational scalar. always stored reduced with positive denominator.
pub type Rat = num_rational::BigRational;

/// integer as a `Rat`.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// fraction n/d as a `Rat`.
pub fn ratq(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// sparse matrix over the rationals. absent entries are zero; the shape is
/// fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Rat) {
        let cur = self.get(r, c) + v;
        self.set(r, c, cur);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = QMatrix::zero(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zero(self.cols, self.rows);
        for (&(r, c), v) in &self.entries {
            t.set(c, r, v.clone());
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = QMatrix::zero(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            for c in 0..other.cols {
                let b = other.get(k, c);
                if !b.is_zero() {
                    out.add_to(r, c, &(a.clone() * b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        let mut out = vec![Rat::zero(); self.rows];
        for (&(r, c), a) in &self.entries {
            if !v[c].is_zero() {
                out[r] += a.clone() * &v[c];
            }
        }
        out
    }

    fn to_dense(&self) -> Vec<Vec<Rat>> {
        let mut d = vec![vec![Rat::zero(); self.cols]; self.rows];
        for (&(r, c), v) in &self.entries {
            d[r][c] = v.clone();
        }
        d
    }

    /// row echelon form; returns (reduced rows, pivot column per pivot row).
    fn echelon(&self) -> (Vec<Vec<Rat>>, Vec<usize>) {
        let mut a = self.to_dense();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, pr);
            let inv = a[row][col].recip();
            for j in col..self.cols {
                let v = a[row][j].clone() * &inv;
                a[row][j] = v;
            }
            for r in 0..self.rows {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in col..self.cols {
                        let sub = a[row][j].clone() * &f;
                        a[r][j] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    /// exact rank over Q.
    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// basis of the right kernel, one column vector per basis element.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let (a, pivots) = self.echelon();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -a[prow][f].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// particular solution of m x = b, or None when the system is inconsistent.
    pub fn solve_linear(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows, "rhs length mismatch");
        // eliminate on the augmented matrix
        let mut aug = QMatrix::zero(self.rows, self.cols + 1);
        for (&(r, c), v) in &self.entries {
            aug.set(r, c, v.clone());
        }
        for (r, v) in b.iter().enumerate() {
            aug.set(r, self.cols, v.clone());
        }
        let (a, pivots) = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None; // pivot in the rhs column: inconsistent
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = a[prow][self.cols].clone();
        }
        Some(x)
    }

    /// stack rows of `other` under `self`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut out = QMatrix::zero(self.rows + other.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v.clone());
        }
        for (&(r, c), v) in &other.entries {
            out.set(self.rows + r, c, v.clone());
        }
        out
    }

    /// append columns of `other` to the right of `self`.
    pub fn hstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut out = QMatrix::zero(self.rows, self.cols + other.cols);
        for (&(r, c), v) in &self.entries {
            out.set(r, c, v.clone());
        }
        for (&(r, c), v) in &other.entries {
            out.set(r, self.cols + c, v.clone());
        }
        out
    }

    /// matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rat>], rows: usize) -> QMatrix {
        let mut m = QMatrix::zero(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }
}

/// dimension of the span of the given coefficient vectors.
pub fn span_dimension(vectors: &[Vec<Rat>], len: usize) -> usize {
    QMatrix::from_columns(vectors, len).rank()
}

/// is `v` in the span of `vectors`? (all of length `len`)
pub fn in_span(v: &[Rat], vectors: &[Vec<Rat>], len: usize) -> bool {
    let m = QMatrix::from_columns(vectors, len);
    m.solve_linear(v).is_some()
}
