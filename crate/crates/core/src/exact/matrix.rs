//! Small dense matrices over exact rationals.
//!
//! Determinants go through fraction-free (Bareiss) elimination on a
//! denominator-cleared integer copy, which keeps intermediate entries from
//! blowing up the way naive rational elimination does. Dimensions up to 4 use
//! expansion by minors instead; the two routes cross-check each other in the
//! property tests.

use num::bigint::BigInt;
use num::{One, Zero};

use super::rational::{lcm, Rational};
use crate::error::{Error, Result};

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::IndexOutOfRange(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Rational>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    /// Returns a copy with column `col` replaced by `values`.
    pub fn with_column(&self, col: usize, values: &[Rational]) -> Result<Self> {
        if col >= self.cols {
            return Err(Error::IndexOutOfRange(format!(
                "column {col} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if values.len() != self.rows {
            return Err(Error::IndexOutOfRange(format!(
                "replacement column has {} entries, expected {}",
                values.len(),
                self.rows
            )));
        }
        let mut out = self.clone();
        for (i, v) in values.iter().enumerate() {
            *out.entry_mut(i, col) = v.clone();
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::IndexOutOfRange(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols)
                .map(|k| self.entry(i, k) * rhs.entry(k, j))
                .sum()
        }))
    }

    /// Exact determinant. The empty matrix has determinant 1.
    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        match self.rows {
            0 => Ok(Rational::one()),
            n if n <= 4 => Ok(self.det_minors()),
            _ => Ok(self.det_bareiss()),
        }
    }

    /// Rank via exact Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let at = |m: &Vec<Rational>, i: usize, j: usize| m[i * cols + j].clone();
        let mut rank = 0;
        let mut col = 0;
        while rank < rows && col < cols {
            let pivot_row = (rank..rows).find(|&i| !at(&m, i, col).is_zero());
            let Some(p) = pivot_row else {
                col += 1;
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(rank * cols + j, p * cols + j);
                }
            }
            let pivot = at(&m, rank, col);
            for i in (rank + 1)..rows {
                let factor = &at(&m, i, col) / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in col..cols {
                    let v = &at(&m, i, j) - &(&factor * &at(&m, rank, j));
                    m[i * cols + j] = v;
                }
            }
            rank += 1;
            col += 1;
        }
        rank
    }

    fn det_minors(&self) -> Rational {
        let n = self.rows;
        match n {
            0 => Rational::one(),
            1 => self.entry(0, 0).clone(),
            _ => {
                let mut acc = Rational::zero();
                for j in 0..n {
                    let a = self.entry(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
                        self.entry(r + 1, if c < j { c } else { c + 1 }).clone()
                    });
                    let term = a * &minor.det_minors();
                    if j % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
        }
    }

    /// Bareiss elimination on a denominator-cleared integer matrix.
    fn det_bareiss(&self) -> Rational {
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row_lcm = BigInt::one();
            for j in 0..n {
                row_lcm = lcm(&row_lcm, self.entry(i, j).denom());
            }
            scale *= &row_lcm;
            m.push(
                (0..n)
                    .map(|j| {
                        let e = self.entry(i, j);
                        e.numer() * (&row_lcm / e.denom())
                    })
                    .collect(),
            );
        }

        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(p) = ((k + 1)..n).find(|&i| !m[i][k].is_zero()) else {
                    return Rational::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    // Exact division: the Bareiss identity guarantees divisibility.
                    m[i][j] = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let det_int = if sign < 0 { -prev } else { prev };
        Rational::new(det_int, scale)
    }
}

/// Outcome of an exact linear solve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinearSolution {
    Unique(Vec<Rational>),
    Inconsistent,
    Underdetermined,
}

impl Matrix {
    /// Sum over rows of `coeff[i] * row_i`, as a vector; used in tests.
    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Solves `self * x = rhs` exactly by Gauss-Jordan elimination on the
    /// augmented matrix; the system may be rectangular.
    pub fn solve(&self, rhs: &[Rational]) -> Result<LinearSolution> {
        Ok(match self.gauss_jordan(rhs)? {
            None => LinearSolution::Inconsistent,
            Some((_, free)) if free > 0 => LinearSolution::Underdetermined,
            Some((x, _)) => LinearSolution::Unique(x),
        })
    }

    /// Like [`Matrix::solve`], but an underdetermined system yields the
    /// particular solution with every free variable pinned to zero, along
    /// with the number of free variables. `None` means inconsistent.
    pub fn solve_particular(&self, rhs: &[Rational]) -> Result<Option<(Vec<Rational>, usize)>> {
        self.gauss_jordan(rhs)
    }

    fn gauss_jordan(&self, rhs: &[Rational]) -> Result<Option<(Vec<Rational>, usize)>> {
        if rhs.len() != self.rows {
            return Err(Error::IndexOutOfRange(format!(
                "rhs has {} entries, matrix has {} rows",
                rhs.len(),
                self.rows
            )));
        }
        let (rows, cols) = (self.rows, self.cols);
        let width = cols + 1;
        let mut aug: Vec<Rational> = Vec::with_capacity(rows * width);
        for (i, b) in rhs.iter().enumerate() {
            aug.extend(self.row(i).iter().cloned());
            aug.push(b.clone());
        }
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&i| !aug[i * width + col].is_zero()) else {
                continue;
            };
            for j in 0..width {
                aug.swap(rank * width + j, p * width + j);
            }
            let pivot = aug[rank * width + col].clone();
            for j in col..width {
                let v = &aug[rank * width + j] / &pivot;
                aug[rank * width + j] = v;
            }
            for i in 0..rows {
                if i == rank || aug[i * width + col].is_zero() {
                    continue;
                }
                let factor = aug[i * width + col].clone();
                for j in col..width {
                    let v = &aug[i * width + j] - &(&factor * &aug[rank * width + j]);
                    aug[i * width + j] = v;
                }
            }
            pivot_cols.push(col);
            rank += 1;
            if rank == rows {
                break;
            }
        }
        for i in rank..rows {
            if !aug[i * width + cols].is_zero() {
                return Ok(None);
            }
        }
        let mut x = vec![Rational::zero(); cols];
        for (r, &col) in pivot_cols.iter().enumerate() {
            x[col] = aug[r * width + cols].clone();
        }
        Ok(Some((x, cols - rank)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn m(rows: usize, cols: usize, entries: &[(i64, i64)]) -> Matrix {
        Matrix::new(rows, cols, entries.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn identity_det() {
        assert_eq!(Matrix::identity(3).det().unwrap(), int(1));
    }

    #[test]
    fn dependent_rows_det_zero() {
        let a = m(2, 2, &[(1, 1), (2, 1), (2, 1), (4, 1)]);
        assert_eq!(a.det().unwrap(), int(0));
    }

    #[test]
    fn two_by_two_formula() {
        let a = m(2, 2, &[(1, 1), (1, 2), (1, 3), (1, 4)]);
        assert_eq!(a.det().unwrap(), rat(1, 12));
    }

    #[test]
    fn non_square_rejected() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(
            a.det(),
            Err(Error::NonSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn empty_det_is_one() {
        assert_eq!(Matrix::zeros(0, 0).det().unwrap(), int(1));
    }

    #[test]
    fn bareiss_matches_minors() {
        // 5x5 exercises the Bareiss path; compare against cofactor expansion
        // done by embedding into det_minors via a direct recursive call.
        let entries: Vec<Rational> = (0..25)
            .map(|k| rat((k as i64 * 7 + 3) % 11 - 5, (k as i64 % 4) + 1))
            .collect();
        let a = Matrix::new(5, 5, entries).unwrap();
        let slow = {
            // cofactor expansion along the first row
            fn cof(m: &Matrix) -> Rational {
                if m.rows() == 1 {
                    return m.entry(0, 0).clone();
                }
                let n = m.rows();
                let mut acc = Rational::zero();
                for j in 0..n {
                    let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
                        m.entry(r + 1, if c < j { c } else { c + 1 }).clone()
                    });
                    let term = m.entry(0, j) * &cof(&minor);
                    if j % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
            cof(&a)
        };
        assert_eq!(a.det().unwrap(), slow);
    }

    #[test]
    fn rank_of_rank_deficient() {
        let a = m(3, 3, &[(1, 1), (2, 1), (3, 1), (2, 1), (4, 1), (6, 1), (0, 1), (1, 1), (1, 1)]);
        assert_eq!(a.rank(), 2);
        assert_eq!(Matrix::identity(4).rank(), 4);
        assert_eq!(Matrix::zeros(3, 5).rank(), 0);
    }
}
