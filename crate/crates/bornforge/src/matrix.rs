//! Dense exact matrices and the linear-algebra kernel.
//!
//! Gaussian elimination pivots on the first nonzero entry; there is no
//! numerical tolerance anywhere. All instances in this problem domain are
//! tiny (forms up to Λ³ of a 6-dimensional space give 20×15 matrices), so
//! dense storage is the right trade-off.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{BornError, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Sylvester signature of a symmetric bilinear form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer-literal constructor, handy in tests and fixed data.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::rational::rat(x)).collect())
                .collect(),
        )
    }

    /// Column vector from a slice.
    pub fn col_vec(entries: &[Rational]) -> Self {
        Matrix {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, k: &Rational) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] * k)
    }

    pub fn col(&self, c: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |r, _| self[(r, c)].clone())
    }

    pub fn hstack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for r in 0..rows {
                for c in 0..b.cols {
                    m[(r, off + c)] = b[(r, c)].clone();
                }
            }
            off += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Matrix]) -> Matrix {
        assert!(!blocks.is_empty());
        let cols = blocks[0].cols;
        assert!(blocks.iter().all(|b| b.cols == cols));
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..cols {
                    m[(off + r, c)] = b[(r, c)].clone();
                }
            }
            off += b.rows;
        }
        m
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m[(ro + r, co + c)] = b[(r, c)].clone();
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        m
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            // first nonzero entry in this column at or below `row`
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for c in col..m.cols {
                        let v = &m[(r, c)] - &(&factor * &m[(row, c)]);
                        m[(r, c)] = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of non-square matrix");
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Rational::zero();
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            det *= m[(col, col)].clone();
            let inv = m[(col, col)].recip();
            for r in col + 1..n {
                if !m[(r, col)].is_zero() {
                    let factor = &m[(r, col)] * &inv;
                    for c in col..n {
                        let v = &m[(r, c)] - &(&factor * &m[(col, c)]);
                        m[(r, c)] = v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Matrix::hstack(&[self, &Matrix::identity(n)]);
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Exact solution of `A x = b`, or `None` if inconsistent.
    ///
    /// When underdetermined, free variables are set to zero; the full
    /// solution space is this particular solution plus [`Matrix::kernel`].
    pub fn solve_linear(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if self.rows != b.rows() {
            return Err(BornError::Dimension(format!(
                "solve: A has {} rows, b has {}",
                self.rows,
                b.rows()
            )));
        }
        let aug = Matrix::hstack(&[self, b]);
        let (r, pivots) = aug.rref();
        // inconsistent iff a pivot lands in the b-block
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.cols, b.cols());
        for (row, &p) in pivots.iter().enumerate() {
            for c in 0..b.cols() {
                x[(p, c)] = r[(row, self.cols + c)].clone();
            }
        }
        Ok(Some(x))
    }

    /// Exact basis of the kernel `{x : A x = 0}` as column vectors.
    pub fn kernel(&self) -> Vec<Matrix> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = Matrix::zeros(self.cols, 1);
            v[(free, 0)] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[(p, 0)] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space, as columns of the returned matrix.
    pub fn column_space_basis(&self) -> Matrix {
        let (r, pivots) = self.transpose().rref();
        let mut rows = Vec::new();
        for i in 0..pivots.len() {
            rows.push((0..self.rows).map(|c| r[(i, c)].clone()).collect());
        }
        if rows.is_empty() {
            Matrix::zeros(self.rows, 0)
        } else {
            Matrix::from_rows(rows).transpose()
        }
    }

    /// Does the column span of `self` contain the vector `v`?
    pub fn span_contains(&self, v: &Matrix) -> bool {
        let base_rank = self.rank();
        Matrix::hstack(&[self, v]).rank() == base_rank
    }

    /// Sylvester signature by exact symmetric Gaussian congruence reduction.
    pub fn signature_of_symmetric(&self) -> Result<Signature> {
        if !self.is_symmetric() {
            return Err(BornError::Invariant(
                "signature_of_symmetric: input is not symmetric".into(),
            ));
        }
        let n = self.rows;
        let mut s = self.clone();
        let (mut pos, mut neg) = (0usize, 0usize);
        for k in 0..n {
            if s[(k, k)].is_zero() {
                // try to bring a nonzero diagonal entry to position k
                if let Some(j) = (k + 1..n).find(|&j| !s[(j, j)].is_zero()) {
                    s.congruence_swap(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !s[(k, j)].is_zero()) {
                    // hyperbolic pair: e_k += e_j makes the diagonal nonzero
                    s.congruence_add(k, j);
                }
            }
            if s[(k, k)].is_zero() {
                continue;
            }
            if s[(k, k)].is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let pivot_inv = s[(k, k)].recip();
            for i in k + 1..n {
                if !s[(i, k)].is_zero() {
                    let factor = &s[(i, k)] * &pivot_inv;
                    s.congruence_sub_scaled(i, k, &factor);
                }
            }
        }
        Ok(Signature {
            positive: pos,
            negative: neg,
            zero: n - pos - neg,
        })
    }

    // row/col operations that preserve congruence class
    fn congruence_swap(&mut self, a: usize, b: usize) {
        self.swap_rows(a, b);
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn congruence_add(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            let v = &self[(a, c)] + &self[(b, c)];
            self[(a, c)] = v;
        }
        for r in 0..self.rows {
            let v = &self[(r, a)] + &self[(r, b)];
            self[(r, a)] = v;
        }
    }

    fn congruence_sub_scaled(&mut self, i: usize, k: usize, factor: &Rational) {
        for c in 0..self.cols {
            let v = &self[(i, c)] - &(factor * &self[(k, c)]);
            self[(i, c)] = v;
        }
        for r in 0..self.rows {
            let v = &self[(r, i)] - &(factor * &self[(r, k)]);
            self[(r, i)] = v;
        }
    }

    /// Entries as exact strings, row-major nested.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| format_rational(&self[(r, c)])).collect())
            .collect()
    }

    pub fn from_string_rows(rows: &[Vec<String>]) -> Result<Matrix> {
        let parsed: Result<Vec<Vec<Rational>>> = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect())
            .collect();
        Ok(Matrix::from_rows(parsed?))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] + &rhs[(r, c)])
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| &self[(r, c)] - &rhs[(r, c)])
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| -self[(r, c)].clone())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix product: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self[(r, k)].is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    if !rhs[(k, c)].is_zero() {
                        let v = &out[(r, c)] + &(&self[(r, k)] * &rhs[(k, c)]);
                        out[(r, c)] = v;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format_rational(&self[(r, c)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        Matrix::from_string_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn solve_identity() {
        let a = Matrix::identity(3);
        let b = Matrix::from_i64(&[&[1], &[2], &[3]]);
        let x = a.solve_linear(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_inconsistent_rank_one() {
        let a = Matrix::from_i64(&[&[1, 1], &[1, 1]]);
        let b = Matrix::from_i64(&[&[1], &[2]]);
        assert!(a.solve_linear(&b).unwrap().is_none());
    }

    #[test]
    fn solve_diagonal() {
        let a = Matrix::from_i64(&[&[2, 0], &[0, 4]]);
        let b = Matrix::from_i64(&[&[1], &[1]]);
        let x = a.solve_linear(&b).unwrap().unwrap();
        assert_eq!(x[(0, 0)], ratio(1, 2));
        assert_eq!(x[(1, 0)], ratio(1, 4));
    }

    #[test]
    fn solve_dimension_mismatch() {
        let a = Matrix::identity(2);
        let b = Matrix::from_i64(&[&[1], &[2], &[3]]);
        assert!(a.solve_linear(&b).is_err());
    }

    #[test]
    fn kernel_cases() {
        assert!(Matrix::identity(4).kernel().is_empty());
        assert_eq!(Matrix::zeros(2, 2).kernel().len(), 2);
        let k = Matrix::from_i64(&[&[1, 1]]).kernel();
        assert_eq!(k.len(), 1);
        // (1, -1) up to scaling
        assert_eq!(k[0][(0, 0)], -k[0][(1, 0)].clone());
    }

    #[test]
    fn signature_examples() {
        let s = Matrix::identity(4).signature_of_symmetric().unwrap();
        assert_eq!((s.positive, s.negative, s.zero), (4, 0, 0));

        // h = e1.e3 + e2.e4 on R^4 (hyperbolic pairs)
        let h = Matrix::from_i64(&[
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
        ]);
        let s = h.signature_of_symmetric().unwrap();
        assert_eq!((s.positive, s.negative, s.zero), (2, 2, 0));

        // h3 on heis3: e1 (x) e1 - e2 (x) e2 + e2 . e3
        let h3 = Matrix::from_i64(&[&[1, 0, 0], &[0, -1, 1], &[0, 1, 0]]);
        let s = h3.signature_of_symmetric().unwrap();
        assert_eq!((s.positive, s.negative, s.zero), (2, 1, 0));
    }

    #[test]
    fn signature_rejects_non_symmetric() {
        let m = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert!(m.signature_of_symmetric().is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
        assert!(Matrix::from_i64(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn det_values() {
        assert_eq!(Matrix::identity(3).det(), rat(1));
        assert_eq!(Matrix::from_i64(&[&[0, 1], &[1, 0]]).det(), rat(-1));
        assert_eq!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).det(), rat(0));
    }
}
