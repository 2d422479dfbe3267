//! Exact feasibility for `{x ≥ 0 : C·x = d}`.
//!
//! Phase one of the primal simplex method on a fraction-free integer tableau
//! with one artificial column per row. Rows that are linearly dependent modulo
//! a large prime are set aside first; answers on the remaining rows are
//! re-validated against the full system. The entering column is the one with the most
//! negative reduced cost (least index on ties) and the leaving row comes from
//! a lexicographic ratio test over `(rhs, B⁻¹ row)`. The pivot sequence is
//! deterministic, and the lexicographic rule rules out cycling on degenerate
//! systems whatever the entering choice.
//!
//! When phase one ends with a positive artificial total, the final duals `π`
//! satisfy `πᵀA ≤ 0` on the structural columns and `πᵀb > 0`, so `y = −π`
//! (with the row sign flips undone) is a Farkas certificate for the input.

use serde::Serialize;

use super::{modular, ExactField, ExactInteger, Matrix, SparseMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Feasibility<T> {
    /// `witness ≥ 0` with `C·witness = d`.
    Feasible { witness: Vec<T> },
    /// `Cᵀ·farkas ≥ 0` and `dᵀ·farkas < 0`.
    Infeasible { farkas: Vec<T> },
}

impl<T> Feasibility<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible { .. })
    }

    pub fn witness(&self) -> Option<&[T]> {
        match self {
            Self::Feasible { witness } => Some(witness),
            Self::Infeasible { .. } => None,
        }
    }

    pub fn farkas(&self) -> Option<&[T]> {
        match self {
            Self::Feasible { .. } => None,
            Self::Infeasible { farkas } => Some(farkas),
        }
    }
}

pub fn lp_feasible<T: ExactField>(c: &Matrix<T>, d: &[T]) -> Result<Feasibility<T>> {
    lp_feasible_sparse(&SparseMatrix::from(c), d)
}

/// Decides feasibility; the returned witness or certificate has already been
/// re-checked against `(c, d)`.
pub fn lp_feasible_sparse<T: ExactField>(c: &SparseMatrix<T>, d: &[T]) -> Result<Feasibility<T>> {
    if c.rows() != d.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} constraint rows but {} right-hand sides",
            c.rows(),
            d.len()
        )));
    }
    let outcome = match reduced_rows(c) {
        Some(kept) => solve_on_rows(c, d, &kept)?,
        None => None,
    };
    let outcome = match outcome {
        Some(found) => found,
        None => Tableau::new(c, d).solve::<T>()?,
    };
    let verified = match &outcome {
        Feasibility::Feasible { witness } => check_witness_sparse(c, d, witness)?,
        Feasibility::Infeasible { farkas } => check_farkas_sparse(c, d, farkas)?,
    };
    if !verified {
        return Err(Error::Solver(
            "phase one produced a result that fails re-substitution".into(),
        ));
    }
    Ok(outcome)
}

// Rows that look independent modulo a large prime. `None` when no row can be
// dropped or some entry has no residue.
fn reduced_rows<T: ExactField>(c: &SparseMatrix<T>) -> Option<Vec<usize>> {
    let residues = (0..c.rows())
        .map(|i| {
            c.row(i)
                .iter()
                .map(|(j, v)| v.residue(modular::PRIME).map(|r| (*j, r)))
                .collect::<Option<Vec<_>>>()
        })
        .collect::<Option<Vec<_>>>()?;
    let kept = modular::independent_rows(&residues, c.cols(), modular::PRIME);
    (kept.len() < c.rows()).then_some(kept)
}

// Solves on a row subset and lifts the answer. A witness is only accepted if
// it also satisfies the dropped rows; a certificate lifts by zero padding.
fn solve_on_rows<T: ExactField>(
    c: &SparseMatrix<T>,
    d: &[T],
    kept: &[usize],
) -> Result<Option<Feasibility<T>>> {
    let sub = SparseMatrix::from_rows(c.cols(), kept.iter().map(|&i| c.row(i).to_vec()).collect())?;
    let sub_d: Vec<T> = kept.iter().map(|&i| d[i].clone()).collect();
    Ok(match Tableau::new(&sub, &sub_d).solve::<T>()? {
        Feasibility::Feasible { witness } => {
            check_witness_sparse(c, d, &witness)?.then_some(Feasibility::Feasible { witness })
        }
        Feasibility::Infeasible { farkas } => {
            let mut full = vec![T::zero(); c.rows()];
            for (&i, y) in kept.iter().zip(farkas) {
                full[i] = y;
            }
            Some(Feasibility::Infeasible { farkas: full })
        }
    })
}

/// True iff `Cᵀ·y ≥ 0` componentwise and `dᵀ·y < 0`.
pub fn check_farkas<T: ExactField>(c: &Matrix<T>, d: &[T], y: &[T]) -> Result<bool> {
    check_farkas_sparse(&SparseMatrix::from(c), d, y)
}

pub fn check_farkas_sparse<T: ExactField>(c: &SparseMatrix<T>, d: &[T], y: &[T]) -> Result<bool> {
    if d.len() != c.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} constraint rows but {} right-hand sides",
            c.rows(),
            d.len()
        )));
    }
    let cty = c.tr_mul_vec(y)?;
    let dty = d
        .iter()
        .zip(y)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b);
    Ok(cty.iter().all(|v| !v.is_negative()) && dty.is_negative())
}

/// True iff `x ≥ 0` and `C·x = d` exactly.
pub fn check_witness<T: ExactField>(c: &Matrix<T>, d: &[T], x: &[T]) -> Result<bool> {
    check_witness_sparse(&SparseMatrix::from(c), d, x)
}

pub fn check_witness_sparse<T: ExactField>(c: &SparseMatrix<T>, d: &[T], x: &[T]) -> Result<bool> {
    if d.len() != c.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} constraint rows but {} right-hand sides",
            c.rows(),
            d.len()
        )));
    }
    let cx = c.mul_vec(x)?;
    Ok(x.iter().all(|v| !v.is_negative()) && cx.as_slice() == d)
}

// Integer-preserving tableau: the true tableau is `rows / det`, where `det` is
// the last pivot element. Every stored entry is a minor of the scaled input,
// so the update divisions are exact.
struct Tableau<I> {
    structural: usize,
    // per-row positive multipliers that cleared denominators, with the sign
    // flip that made the right-hand side nonnegative
    scales: Vec<I>,
    signs: Vec<bool>,
    rows: Vec<Vec<I>>,
    rhs: Vec<I>,
    basis: Vec<usize>,
    // phase-one reduced costs and the negated objective value
    costs: Vec<I>,
    cost_rhs: I,
    det: I,
}

impl<I: ExactInteger> Tableau<I> {
    fn new<T: ExactField<Int = I>>(c: &SparseMatrix<T>, d: &[T]) -> Self {
        let m = c.rows();
        let n = c.cols();
        let width = n + m;
        let mut scales = Vec::with_capacity(m);
        let mut signs = Vec::with_capacity(m);
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut costs = vec![I::zero(); width];
        let mut cost_rhs = I::zero();
        for i in 0..m {
            let scale = c
                .row(i)
                .iter()
                .map(|(_, v)| v)
                .chain(std::iter::once(&d[i]))
                .fold(I::one(), |acc, v| acc.lcm(&v.to_parts().1));
            let flip = d[i].is_negative();
            let to_int = |v: &T| {
                let (num, den) = v.to_parts();
                let x = num * (scale.clone() / den);
                if flip {
                    -x
                } else {
                    x
                }
            };
            let mut row = vec![I::zero(); width];
            for (j, v) in c.row(i) {
                row[*j] = to_int(v);
                costs[*j] = costs[*j].clone() - &row[*j];
            }
            row[n + i] = I::one();
            let b = to_int(&d[i]);
            cost_rhs = cost_rhs - &b;
            rows.push(row);
            rhs.push(b);
            scales.push(scale);
            signs.push(flip);
        }
        Self {
            structural: n,
            scales,
            signs,
            rows,
            rhs,
            basis: (n..n + m).collect(),
            costs,
            cost_rhs,
            det: I::one(),
        }
    }

    fn solve<T: ExactField<Int = I>>(mut self) -> Result<Feasibility<T>> {
        while let Some(entering) = self.entering() {
            let leaving = self.ratio_test(entering).ok_or_else(|| {
                Error::Solver("phase-one objective unbounded, which is impossible".into())
            })?;
            self.pivot(leaving, entering);
        }

        if self.cost_rhs.is_zero() {
            let mut witness = vec![T::zero(); self.structural];
            for (i, &var) in self.basis.iter().enumerate() {
                if var < self.structural {
                    witness[var] = T::from_parts(self.rhs[i].clone(), self.det.clone());
                }
            }
            Ok(Feasibility::Feasible { witness })
        } else {
            // π_i = 1 − (reduced cost of artificial i) and y = −π, scaled by det > 0;
            // then undo the row scalings and flips.
            let raw: Vec<I> = (0..self.rows.len())
                .map(|i| {
                    let y = (self.costs[self.structural + i].clone() - &self.det) * &self.scales[i];
                    if self.signs[i] {
                        -y
                    } else {
                        y
                    }
                })
                .collect();
            let g = raw.iter().fold(I::zero(), |acc, v| acc.gcd(v));
            let farkas = raw
                .into_iter()
                .map(|v| T::from_parts(if g.is_zero() { v } else { v / g.clone() }, I::one()))
                .collect();
            Ok(Feasibility::Infeasible { farkas })
        }
    }

    // Dantzig's rule over the structural columns; the artificials never re-enter.
    fn entering(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (j, v) in self.costs[..self.structural].iter().enumerate() {
            if v.is_negative() && best.is_none_or(|b| *v < self.costs[b]) {
                best = Some(j);
            }
        }
        best
    }

    // Lexicographic minimum of `(rhs_i, B⁻¹ row i) / a_ie` over rows with a_ie > 0.
    // Rows of B⁻¹ are distinct, so the minimum is unique.
    fn ratio_test(&self, e: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[e].is_positive() {
                continue;
            }
            let better = match best {
                None => true,
                Some(k) => self.lex_less(i, k, e),
            };
            if better {
                best = Some(i);
            }
        }
        best
    }

    fn lex_less(&self, i: usize, k: usize, e: usize) -> bool {
        let (ai, ak) = (&self.rows[i][e], &self.rows[k][e]);
        let keys = std::iter::once((&self.rhs[i], &self.rhs[k])).chain(
            self.rows[i][self.structural..]
                .iter()
                .zip(&self.rows[k][self.structural..]),
        );
        for (x, y) in keys {
            let lhs = x.clone() * ak;
            let rhs = y.clone() * ai;
            if lhs != rhs {
                return lhs < rhs;
            }
        }
        false
    }

    fn pivot(&mut self, p: usize, e: usize) {
        let a = self.rows[p][e].clone();
        let pivot_row = std::mem::take(&mut self.rows[p]);
        let pivot_rhs = self.rhs[p].clone();
        let det = self.det.clone();
        let update = |row: &mut [I], rhs: &mut I| {
            let f = row[e].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if x.is_zero() && (y.is_zero() || f.is_zero()) {
                    continue;
                }
                let v = x.clone() * &a - f.clone() * y;
                *x = v / det.clone();
            }
            *rhs = (rhs.clone() * &a - f * &pivot_rhs) / det.clone();
        };
        for i in 0..self.rows.len() {
            if i != p {
                update(&mut self.rows[i], &mut self.rhs[i]);
            }
        }
        update(&mut self.costs, &mut self.cost_rhs);
        self.rows[p] = pivot_row;
        self.basis[p] = e;
        self.det = a;
    }
}
