use super::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Row-compressed matrix; each row holds `(column, value)` pairs sorted by
/// column with no explicit zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    cols: usize,
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> SparseMatrix<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![Vec::new(); rows],
        }
    }

    /// Builds from column vectors given as `(row, value)` lists.
    pub fn from_columns(rows: usize, columns: &[Vec<(usize, T)>]) -> Result<Self> {
        let mut out = Self::new(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col {
                if *i >= rows {
                    return Err(Error::IndexOutOfRange {
                        index: *i,
                        bound: rows,
                    });
                }
                if !v.is_zero() {
                    out.rows[*i].push((j, v.clone()));
                }
            }
        }
        for row in &mut out.rows {
            row.sort_by_key(|(j, _)| *j);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Parse("repeated entry in a sparse column".into()));
            }
        }
        Ok(out)
    }

    /// Builds from sparse rows; each row must be sorted by column with no
    /// repeats, and explicit zeros are dropped.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(usize, T)>>) -> Result<Self> {
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            if let Some(&(j, _)) = row.iter().find(|(j, _)| *j >= cols) {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    bound: cols,
                });
            }
            if row.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Parse("sparse row not strictly sorted".into()));
            }
            out.push(row.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(Self { cols, rows: out })
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.rows[i]
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(T::zero(), |acc, (j, v)| acc + v.clone() * &x[*j])
            })
            .collect())
    }

    pub fn tr_mul_vec(&self, y: &[T]) -> Result<Vec<T>> {
        if y.len() != self.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                y.len(),
                self.rows.len()
            )));
        }
        let mut out = vec![T::zero(); self.cols];
        for (row, yi) in self.rows.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (j, v) in row {
                out[*j] = out[*j].clone() + v.clone() * yi;
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.rows.len(), self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m[(i, *j)] = v.clone();
            }
        }
        m
    }
}

impl<T: Scalar> From<&Matrix<T>> for SparseMatrix<T> {
    fn from(m: &Matrix<T>) -> Self {
        let rows = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        Self {
            cols: m.cols(),
            rows,
        }
    }
}
