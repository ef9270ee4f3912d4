//! Elimination over fields: rank, reduced row echelon form, kernels, inverses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::ring::{Field, Rational};
use crate::error::{Error, Result};

/// Rank of a rational matrix by fraction-free (Bareiss) elimination after
/// clearing denominators row by row.
pub fn bareiss_rank(m: &Matrix<Rational>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let lcm = m
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            m.row(i)
                .iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = &a[rank][c] * &a[r][j] - &a[r][c] * &a[rank][j];
                a[r][j] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

impl<F: Field> Matrix<F> {
    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let (rows, cols) = (m.rows(), m.cols());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    let a = m.get(r, j).clone();
                    let b = m.get(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.get(r, c).inv().expect("pivot is nonzero");
            for j in c..cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        F::matrix_rank(self)
    }

    pub fn nullity(&self) -> usize {
        self.cols() - self.rank()
    }

    /// Basis of the right kernel `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let cols = self.cols();
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); cols];
                v[f] = F::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(row, f).neg();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Matrix<F>> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows();
        let mut aug = Matrix::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Matrix::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Domain("matrix is singular".into()));
        }
        Ok(r.block(0, n, n, n))
    }

    pub fn det(&self) -> Result<F> {
        let coeffs = self.charpoly_coeffs()?;
        let c0 = coeffs[0].clone();
        Ok(if self.rows().is_multiple_of(2) { c0 } else { c0.neg() })
    }

    /// Solve `self · x = b` for one solution, if any.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let (rows, cols) = (self.rows(), self.cols());
        assert_eq!(b.len(), rows);
        let mut aug = Matrix::zeros(rows, cols + 1);
        aug.set_block(0, 0, self);
        for (i, bi) in b.iter().enumerate() {
            aug.set(i, cols, bi.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&cols) {
            return None;
        }
        let mut x = vec![F::zero(); cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, cols).clone();
        }
        Some(x)
    }
}
