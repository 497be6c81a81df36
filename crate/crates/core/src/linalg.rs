//! Exact dense linear algebra.
//!
//! Generic Gauss–Jordan elimination over any [`Field`], plus a fraction-free
//! (Bareiss) path for rational systems, which keeps intermediate entries as
//! integers and is what the annihilator and recognition searches use.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{Field, Rat};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: Vec<Vec<F>>,
    cols: usize,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows: vec![vec![F::zero(); cols]; rows],
            cols,
        }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.rows[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.rows[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.rows[r]
    }

    pub fn mul_vec(&self, x: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.cols);
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    ///
    /// Pivots are taken column by column, using the first row with a nonzero
    /// entry, so the result is deterministic.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = self.rows[r][c]
                .checked_inv()
                .expect("nonzero pivot must be invertible");
            for v in self.rows[r].iter_mut().skip(c) {
                if !v.is_zero() {
                    *v = v.clone() * inv.clone();
                }
            }
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !p.is_zero() {
                        *v = v.clone() - f.clone() * p.clone();
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of the right kernel, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![F::zero(); self.cols];
            v[free] = F::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.rows[i][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant by elimination. Panics if not square.
    pub fn det(&self) -> F {
        assert_eq!(self.rows.len(), self.cols, "determinant of non-square matrix");
        let mut m = self.rows.clone();
        let n = self.cols;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return F::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            let inv = m[c][c].checked_inv().expect("nonzero pivot must be invertible");
            det = det * m[c][c].clone();
            for i in c + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let f = m[i][c].clone() * inv.clone();
                for j in c..n {
                    if !m[c][j].is_zero() {
                        m[i][j] = m[i][j].clone() - f.clone() * m[c][j].clone();
                    }
                }
            }
        }
        det
    }
}

/// Solves `a x = b`, returning the solution with every free variable zero,
/// or `None` if the system is inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(a.nrows(), b.len());
    let mut aug = a.clone();
    for (row, v) in aug.rows.iter_mut().zip(b) {
        row.push(v.clone());
    }
    aug.cols += 1;
    let pivots = aug.rref();
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![F::zero(); a.cols];
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.rows[i][a.cols].clone();
    }
    Some(x)
}

fn integer_rows(rows: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter()
                .map(|v| (v * Rat::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Determinant of a rational matrix by fraction-free Bareiss elimination.
pub fn bareiss_det(a: &Matrix<Rat>) -> Rat {
    assert_eq!(a.nrows(), a.ncols(), "determinant of non-square matrix");
    let n = a.ncols();
    if n == 0 {
        return Rat::one();
    }
    let scale = a.rows.iter().fold(Rat::one(), |acc, row| {
        let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        acc * Rat::from_integer(l)
    });
    let mut m = integer_rows(&a.rows);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Rat::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    Rat::from_integer(sign * &m[n - 1][n - 1]) / scale
}

/// Solves `a x = b` over Q by fraction-free forward elimination followed by
/// rational back substitution. Free variables are set to zero; `None` means
/// the system is inconsistent.
pub fn solve_fraction_free(a: &Matrix<Rat>, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.nrows(), b.len());
    let ncols = a.ncols();
    let aug: Vec<Vec<Rat>> = a
        .rows
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut m = integer_rows(&aug);
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..=ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if c == ncols {
            return None;
        }
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..=ncols {
                let v = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
    }
    let mut x = vec![Rat::zero(); ncols];
    for &(row, c) in pivots.iter().rev() {
        let mut acc = Rat::from_integer(m[row][ncols].clone());
        for j in c + 1..ncols {
            if !x[j].is_zero() && !m[row][j].is_zero() {
                acc -= Rat::from_integer(m[row][j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rat::from_integer(m[row][c].clone());
    }
    debug_assert!(x.iter().all(|v| !v.denom().is_negative()));
    Some(x)
}
