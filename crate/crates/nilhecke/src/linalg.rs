//! Dense exact linear algebra over the rationals.
//!
//! Everything the kernel needs reduces to row-reduced echelon form of
//! modest dense matrices (a few hundred rows/columns at desk scale):
//! unique solving for coordinate vectors, kernels for centralizers,
//! span membership for ideal and basis checks, ranks for graded
//! dimension counts. [`Solver`] factors a matrix once (carrying the
//! row transform along) so that repeated right-hand sides cost one
//! matrix-vector product each.

use crate::scalar::Scalar;
use crate::{Error, Result};
use num_traits::{One, Zero};

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Build from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from column vectors; all columns must have equal length.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = Matrix::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    /// `self · v`.
    pub fn matvec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let a = self.at(i, j);
                        if !a.is_zero() {
                            acc += a * x;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// `[self | other]` side by side.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.at(i, j).clone());
            }
        }
        m
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(self.rows + other.rows);
        for i in 0..self.rows {
            rows.push(self.row(i).to_vec());
        }
        for i in 0..other.rows {
            rows.push(other.row(i).to_vec());
        }
        Matrix::from_rows(rows)
    }

    /// In-place Gauss–Jordan elimination with pivots restricted to the
    /// first `pivot_cols` columns (trailing columns ride along, which is
    /// how augmented systems are reduced); returns the pivot columns.
    /// Pivot rows prefer ±1 entries to keep intermediate fractions small.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..pivot_cols {
            if lead >= self.rows {
                break;
            }
            let mut choice: Option<usize> = None;
            for r in lead..self.rows {
                let v = self.at(r, col);
                if v.is_zero() {
                    continue;
                }
                if v.numer().magnitude() == v.denom().magnitude() {
                    choice = Some(r);
                    break;
                }
                if choice.is_none() {
                    choice = Some(r);
                }
            }
            let Some(pr) = choice else { continue };
            if pr != lead {
                for j in 0..self.cols {
                    self.data.swap(lead * self.cols + j, pr * self.cols + j);
                }
            }
            let inv = self.at(lead, col).recip();
            if !inv.is_one() {
                for j in col..self.cols {
                    if !self.at(lead, j).is_zero() {
                        let v = self.at(lead, j) * &inv;
                        self.set(lead, j, v);
                    }
                }
            }
            for r in 0..self.rows {
                if r == lead || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for j in col..self.cols {
                    if !self.at(lead, j).is_zero() {
                        let v = self.at(r, j) - &factor * self.at(lead, j);
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        pivots
    }
}

/// Row-reduced echelon form together with its pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut r = m.clone();
    let pivots = r.rref_in_place(r.cols);
    (r, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// A factored matrix for repeated exact solves, holding the row transform
/// `T` with `T·a` in reduced row-echelon form.
pub struct Solver {
    cols: usize,
    transform: Matrix,
    pivots: Vec<usize>,
}

impl Solver {
    pub fn new(a: &Matrix) -> Self {
        // Reduce [a | I]; pivots stay inside the original columns and the
        // identity block accumulates the row transform.
        let mut work = a.hstack(&Matrix::identity(a.nrows()));
        let pivots = work.rref_in_place(a.ncols());
        let mut transform = Matrix::zeros(work.nrows(), a.nrows());
        for i in 0..work.nrows() {
            for j in 0..a.nrows() {
                transform.set(i, j, work.at(i, a.ncols() + j).clone());
            }
        }
        Solver {
            cols: a.ncols(),
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solve `a·x = b` insisting on a unique solution.
    pub fn solve_unique(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        let y = self.transform.matvec(b);
        for (i, v) in y.iter().enumerate().skip(self.pivots.len()) {
            if !v.is_zero() {
                return Err(Error::NoSolution(format!(
                    "inconsistent at eliminated row {i}"
                )));
            }
        }
        if self.pivots.len() < self.cols {
            return Err(Error::NotUnique(format!(
                "rank {} < {} unknowns",
                self.pivots.len(),
                self.cols
            )));
        }
        // Full column rank: pivot i sits in column i.
        Ok(y[..self.cols].to_vec())
    }

    /// Solve `a·x = b`, free variables set to zero; `None` if inconsistent.
    pub fn solve_any(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let y = self.transform.matvec(b);
        for v in y.iter().skip(self.pivots.len()) {
            if !v.is_zero() {
                return None;
            }
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &pc) in self.pivots.iter().enumerate() {
            x[pc] = y[i].clone();
        }
        Some(x)
    }
}

/// Solve `a·x = b` insisting on a unique solution.
pub fn solve_unique(a: &Matrix, b: &[Scalar]) -> Result<Vec<Scalar>> {
    Solver::new(a).solve_unique(b)
}

/// Basis of the right kernel `{x : a·x = 0}`.
pub fn kernel_basis(a: &Matrix) -> Vec<Vec<Scalar>> {
    let (r, pivots) = rref(a);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..a.ncols() {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); a.ncols()];
        v[free] = Scalar::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -r.at(i, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Express `target` in the span of `vectors`: coefficients `c` with
/// `Σ c_i·vectors[i] = target`, or `None` if it is outside the span.
pub fn in_span(vectors: &[Vec<Scalar>], target: &[Scalar]) -> Option<Vec<Scalar>> {
    let a = Matrix::from_columns(vectors);
    if a.nrows() != target.len() {
        assert!(
            vectors.is_empty(),
            "span vectors and target have different lengths"
        );
        // Empty span: only the zero vector belongs to it.
        return target.iter().all(Scalar::is_zero).then(Vec::new);
    }
    Solver::new(&a).solve_any(target)
}
