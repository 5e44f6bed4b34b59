//! Dense square matrices over an arbitrary exact scalar.
//!
//! Entries are stored row-major. Column `j` is the image of basis state `j`,
//! so a matrix acts on column vectors by left multiplication.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch: expected {expected}, found {found}")]
pub struct DimensionError {
    pub expected: usize,
    pub found: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, DimensionError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(DimensionError { expected: dim, found: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from its columns, i.e. from the images of the basis
    /// states.
    pub fn from_columns(columns: Vec<Vec<T>>) -> Result<Self, DimensionError> {
        let dim = columns.len();
        for col in &columns {
            if col.len() != dim {
                return Err(DimensionError { expected: dim, found: col.len() });
            }
        }
        Ok(Self::from_fn(dim, |r, c| columns[c][r].clone()))
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &T {
        &self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.entries.chunks(self.dim.max(1)).take(self.dim)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = &T> {
        (0..self.dim).map(move |r| self.get(r, col))
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { dim: self.dim, entries: self.entries.iter().map(f).collect() }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| T::zero())
    }

    /// The all-ones matrix.
    pub fn ones(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| T::one())
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &[T]) -> Result<Vec<T>, DimensionError> {
        if v.len() != self.dim {
            return Err(DimensionError { expected: self.dim, found: v.len() });
        }
        Ok(self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (m, x)| acc + m.clone() * x.clone())
            })
            .collect())
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self, DimensionError> {
        if rhs.dim != self.dim {
            return Err(DimensionError { expected: self.dim, found: rhs.dim });
        }
        let n = self.dim;
        Ok(Self::from_fn(n, |r, c| {
            (0..n).fold(T::zero(), |acc, i| acc + self.get(r, i).clone() * rhs.get(i, c).clone())
        }))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, DimensionError> {
        if rhs.dim != self.dim {
            return Err(DimensionError { expected: self.dim, found: rhs.dim });
        }
        Ok(Matrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn scale(&self, factor: &T) -> Self {
        self.map(|e| factor.clone() * e.clone())
    }

    pub fn column_sum(&self, col: usize) -> T {
        self.column(col).fold(T::zero(), |acc, e| acc + e.clone())
    }

    pub fn row_sum(&self, row: usize) -> T {
        self.row(row).iter().fold(T::zero(), |acc, e| acc + e.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}

/// Exact product `M v`.
pub fn mat_apply<T>(m: &Matrix<T>, v: &[T]) -> Result<Vec<T>, DimensionError>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T>,
{
    m.apply(v)
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            for c in 0..self.dim {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.entries[r * self.dim + c])?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{integer, rational, Rational};

    fn q(n: i64) -> Rational {
        integer(n)
    }

    #[test]
    fn identity_is_neutral() {
        let id = Matrix::<Rational>::identity(2);
        assert_eq!(id.apply(&[q(2), q(-1)]).unwrap(), vec![q(2), q(-1)]);
    }

    #[test]
    fn stochastic_application() {
        let m = Matrix::from_columns(vec![
            vec![rational(1, 2), rational(1, 2)],
            vec![q(0), q(1)],
        ])
        .unwrap();
        assert_eq!(m.apply(&[q(1), q(0)]).unwrap(), vec![rational(1, 2), rational(1, 2)]);
    }

    #[test]
    fn affine_application_keeps_sum() {
        let m = Matrix::from_columns(vec![vec![q(2), q(-1)], vec![q(-1), q(2)]]).unwrap();
        let out = m.apply(&[q(3), q(-2)]).unwrap();
        assert_eq!(out, vec![q(8), q(-7)]);
        assert_eq!(out.iter().cloned().sum::<Rational>(), q(1));
    }

    #[test]
    fn dimension_mismatch() {
        let m = Matrix::<Rational>::identity(2);
        assert_eq!(m.apply(&[q(1)]), Err(DimensionError { expected: 2, found: 1 }));
        assert!(Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(3)]]).is_err());
        assert!(m.mul(&Matrix::identity(3)).is_err());
    }

    #[test]
    fn rows_and_columns_layout() {
        let m = Matrix::from_rows(vec![vec![1i64, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.column(0).copied().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(m.row(1), &[3, 4]);
        let t = Matrix::from_columns(vec![vec![1i64, 3], vec![2, 4]]).unwrap();
        assert_eq!(m, t);
        assert_eq!(m.mul(&m).unwrap(), Matrix::from_rows(vec![vec![7, 10], vec![15, 22]]).unwrap());
    }
}
