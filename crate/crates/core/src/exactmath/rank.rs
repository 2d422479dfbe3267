//! Exact rank by fraction-free (Bareiss) elimination.
//!
//! Each row is scaled by the lcm of its denominators so elimination runs on
//! integers. After step `k` every live entry equals a `(k+1)`-minor of the
//! scaled matrix, so the division by the previous pivot is always exact.

use std::collections::HashSet;

use num_rational::Ratio;

use super::{ExactInteger, Matrix};
use crate::error::{Error, Result};

/// Rank of `m` over the rationals. An empty matrix has rank 0.
pub fn rat_rank<I: ExactInteger>(m: &Matrix<Ratio<I>>) -> usize {
    let rows = (0..m.rows())
        .map(|i| clear_denominators(m.row(i)))
        .collect();
    integer_rank(rows, m.cols())
}

/// True iff the listed columns of `m` are linearly independent.
pub fn columns_independent<I: ExactInteger>(m: &Matrix<Ratio<I>>, cols: &[usize]) -> Result<bool> {
    let mut seen = HashSet::with_capacity(cols.len());
    for &c in cols {
        if !seen.insert(c) {
            return Err(Error::DuplicateIndex(c));
        }
    }
    if cols.len() > m.rows() {
        // still validates the indices
        m.select_columns(cols)?;
        return Ok(false);
    }
    let sub = m.select_columns(cols)?;
    Ok(rat_rank(&sub) == cols.len())
}

fn clear_denominators<I: ExactInteger>(row: &[Ratio<I>]) -> Vec<I> {
    let lcm = row.iter().fold(I::one(), |acc, v| acc.lcm(v.denom()));
    row.iter()
        .map(|v| v.numer().clone() * (lcm.clone() / v.denom().clone()))
        .collect()
}

fn integer_rank<I: ExactInteger>(mut a: Vec<Vec<I>>, cols: usize) -> usize {
    let nrows = a.len();
    let mut rank = 0;
    let mut prev = I::one();
    for c in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let factor = std::mem::replace(&mut row[c], I::zero());
            for j in c + 1..cols {
                let lhs = pivot.clone() * row[j].clone();
                let num = if factor.is_zero() || pivot_row[j].is_zero() {
                    lhs
                } else {
                    lhs - factor.clone() * pivot_row[j].clone()
                };
                debug_assert!(num.is_multiple_of(&prev), "inexact Bareiss step");
                row[j] = num / prev.clone();
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}
