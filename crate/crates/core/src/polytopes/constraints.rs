use std::fmt::Write;

use num_rational::Ratio;
use serde::Serialize;

use super::TensorIndex;
use crate::error::{Error, Result};
use crate::exactmath::{columns_independent, rat_rank, ExactInteger, Matrix, Scalar};

/// Which index ranges generate the third and fourth balance families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyReading {
    /// Families 3 and 4 distinguish `k = 2..n` with `i, j` free, mirroring
    /// families 1 and 2.
    #[default]
    Standard,
    /// Families 3 and 4 over `i = 2..n`, `k = 1..n`, `j` free; rows that
    /// vanish identically are dropped.
    Literal,
}

/// `C·x = d` with implicit `x ≥ 0`, one provenance label per row.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem<T> {
    pub n: usize,
    pub matrix: Matrix<T>,
    pub rhs: Vec<T>,
    pub labels: Vec<String>,
}

impl<T: Scalar> ConstraintSystem<T> {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    /// One line per row: `label : +1*c(i,k;j,l) -1*c(..) ... = rhs`.
    pub fn to_text(&self) -> String {
        let index = TensorIndex::new(self.n);
        let mut out = String::new();
        for (r, label) in self.labels.iter().enumerate() {
            write!(out, "{label} :").unwrap();
            for (var, coeff) in self.matrix.row(r).iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let sign = if coeff.is_negative() { "" } else { "+" };
                write!(out, " {sign}{coeff}*{}", index.var_label(var)).unwrap();
            }
            writeln!(out, " = {}", self.rhs[r]).unwrap();
        }
        out
    }

    /// The augmented matrix `[C | d]`, for the plain matrix text format.
    pub fn augmented(&self) -> Matrix<T> {
        let cols = self.matrix.cols() + 1;
        let mut data = Vec::with_capacity(self.rows() * cols);
        for r in 0..self.rows() {
            data.extend(self.matrix.row(r).iter().cloned());
            data.push(self.rhs[r].clone());
        }
        Matrix::from_vec(self.rows(), cols, data).expect("consistent shape")
    }
}

struct RowBuilder<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> RowBuilder<T> {
    fn new(len: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); len],
        }
    }

    fn add(&mut self, var: usize, sign: bool) {
        let c = &mut self.coeffs[var];
        *c = if sign {
            c.clone() + T::one()
        } else {
            c.clone() - T::one()
        };
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(T::is_zero)
    }
}

/// Global row/column sums plus the four balance families.
pub fn build_phi_constraints<T: Scalar>(
    n: usize,
    reading: FamilyReading,
) -> Result<ConstraintSystem<T>> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let t = TensorIndex::new(n);
    let nvars = t.dim() * t.dim();
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut rhs = Vec::new();
    let mut labels = Vec::new();
    let mut emit = |row: RowBuilder<T>, value: T, label: String| {
        rows.push(row.coeffs);
        rhs.push(value);
        labels.push(label);
    };

    for i in 0..n {
        for k in 0..n {
            let mut row = RowBuilder::new(nvars);
            for j in 0..n {
                for l in 0..n {
                    row.add(t.var(i, k, j, l), true);
                }
            }
            emit(row, T::one(), format!("row-sum({},{})", i + 1, k + 1));
        }
    }
    for i in 0..n {
        for k in 0..n {
            let mut row = RowBuilder::new(nvars);
            for j in 0..n {
                for l in 0..n {
                    row.add(t.var(j, l, i, k), true);
                }
            }
            emit(row, T::one(), format!("col-sum({},{})", i + 1, k + 1));
        }
    }

    // family 1: Σ_j c(i,k;j,l) = Σ_j c(1,k;j,l)
    for i in 1..n {
        for k in 0..n {
            for l in 0..n {
                let mut row = RowBuilder::new(nvars);
                for j in 0..n {
                    row.add(t.var(i, k, j, l), true);
                    row.add(t.var(0, k, j, l), false);
                }
                emit(
                    row,
                    T::zero(),
                    format!("f1(i={},k={},l={})", i + 1, k + 1, l + 1),
                );
            }
        }
    }
    // family 2: Σ_j c(j,k;i,l) = Σ_j c(1,k;j,l)
    for i in 1..n {
        for k in 0..n {
            for l in 0..n {
                let mut row = RowBuilder::new(nvars);
                for j in 0..n {
                    row.add(t.var(j, k, i, l), true);
                    row.add(t.var(0, k, j, l), false);
                }
                emit(
                    row,
                    T::zero(),
                    format!("f2(i={},k={},l={})", i + 1, k + 1, l + 1),
                );
            }
        }
    }

    let family34_indices: Vec<(usize, usize, usize)> = match reading {
        FamilyReading::Standard => (1..n)
            .flat_map(|k| (0..n).flat_map(move |i| (0..n).map(move |j| (i, j, k))))
            .collect(),
        FamilyReading::Literal => (1..n)
            .flat_map(|i| (0..n).flat_map(move |k| (0..n).map(move |j| (i, j, k))))
            .collect(),
    };
    // family 3: Σ_l c(i,k;j,l) = Σ_l c(i,1;j,l)
    for &(i, j, k) in &family34_indices {
        let mut row = RowBuilder::new(nvars);
        for l in 0..n {
            row.add(t.var(i, k, j, l), true);
            row.add(t.var(i, 0, j, l), false);
        }
        if !row.is_zero() {
            emit(
                row,
                T::zero(),
                format!("f3(i={},j={},k={})", i + 1, j + 1, k + 1),
            );
        }
    }
    // family 4: Σ_l c(i,l;j,k) = Σ_l c(i,1;j,l)
    for &(i, j, k) in &family34_indices {
        let mut row = RowBuilder::new(nvars);
        for l in 0..n {
            row.add(t.var(i, l, j, k), true);
            row.add(t.var(i, 0, j, l), false);
        }
        if !row.is_zero() {
            emit(
                row,
                T::zero(),
                format!("f4(i={},j={},k={})", i + 1, j + 1, k + 1),
            );
        }
    }

    let nrows = rows.len();
    let data = rows.into_iter().flatten().collect();
    Ok(ConstraintSystem {
        n,
        matrix: Matrix::from_vec(nrows, nvars, data)?,
        rhs,
        labels,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowViolation<T> {
    pub row: usize,
    pub label: String,
    /// `C_row · c − d_row`
    pub residual: T,
}

/// Outcome of a Φ-membership test with everything that failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiCheck<T> {
    /// `(row, col)` of entries below zero.
    pub negative_entries: Vec<(usize, usize)>,
    pub violations: Vec<RowViolation<T>>,
}

impl<T> PhiCheck<T> {
    pub fn is_member(&self) -> bool {
        self.negative_entries.is_empty() && self.violations.is_empty()
    }
}

fn check_shape<T: Scalar>(c: &Matrix<T>, sys: &ConstraintSystem<T>) -> Result<()> {
    let dim = sys.n * sys.n;
    if c.rows() != dim || c.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected a {dim}x{dim} matrix, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    Ok(())
}

/// Exact residual of every labelled row, plus the sign check.
pub fn phi_contains<T: Scalar>(c: &Matrix<T>, sys: &ConstraintSystem<T>) -> Result<PhiCheck<T>> {
    check_shape(c, sys)?;
    let negative_entries = (0..c.rows())
        .flat_map(|i| (0..c.cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| c[(i, j)].is_negative())
        .collect();
    let x = c.entries();
    let mut violations = Vec::new();
    for (r, label) in sys.labels.iter().enumerate() {
        let lhs = sys
            .matrix
            .row(r)
            .iter()
            .zip(x)
            .filter(|(a, v)| !a.is_zero() && !v.is_zero())
            .fold(T::zero(), |acc, (a, v)| acc + a.clone() * v);
        let residual = lhs - &sys.rhs[r];
        if !residual.is_zero() {
            violations.push(RowViolation {
                row: r,
                label: label.clone(),
                residual,
            });
        }
    }
    Ok(PhiCheck {
        negative_entries,
        violations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCheck {
    pub support_size: usize,
    pub support_rank: usize,
}

impl VertexCheck {
    pub fn is_vertex(&self) -> bool {
        self.support_size == self.support_rank
    }
}

/// Support size and the rank of the constraint columns on the support. Errors
/// if `c` is not a member of the system.
pub fn vertex_check<I: ExactInteger>(
    c: &Matrix<Ratio<I>>,
    sys: &ConstraintSystem<Ratio<I>>,
) -> Result<VertexCheck> {
    let check = phi_contains(c, sys)?;
    if !check.is_member() {
        return Err(Error::NotInPhi(describe_failure(&check)));
    }
    let support = c.support();
    let sub = sys.matrix.select_columns(&support)?;
    Ok(VertexCheck {
        support_size: support.len(),
        support_rank: rat_rank(&sub),
    })
}

/// `c` is a vertex of `{x ≥ 0 : Cx = d}` iff it is feasible and the columns of
/// `C` on its support are independent.
pub fn is_vertex_of_phi<I: ExactInteger>(
    c: &Matrix<Ratio<I>>,
    sys: &ConstraintSystem<Ratio<I>>,
) -> Result<bool> {
    let check = phi_contains(c, sys)?;
    if !check.is_member() {
        return Err(Error::NotInPhi(describe_failure(&check)));
    }
    columns_independent(&sys.matrix, &c.support())
}

fn describe_failure<T: Scalar>(check: &PhiCheck<T>) -> String {
    if let Some(&(i, j)) = check.negative_entries.first() {
        format!("negative entry at ({}, {})", i + 1, j + 1)
    } else if let Some(v) = check.violations.first() {
        format!("row {} violated by {}", v.label, v.residual)
    } else {
        "member".into()
    }
}

/// `alpha[i][j] = Σ_l c(i,1;j,l)` and `beta[k][l] = Σ_j c(1,k;j,l)`.
pub fn induced_marginals<T: Scalar>(c: &Matrix<T>, n: usize) -> Result<(Matrix<T>, Matrix<T>)> {
    let sys = build_phi_constraints::<T>(n, FamilyReading::Standard)?;
    let check = phi_contains(c, &sys)?;
    if !check.is_member() {
        return Err(Error::NotInPhi(describe_failure(&check)));
    }
    let t = TensorIndex::new(n);
    let mut alpha = Matrix::<T>::zeros(n, n);
    let mut beta = Matrix::<T>::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            for l in 0..n {
                alpha[(a, b)] = alpha[(a, b)].clone() + &c[(t.flat(a, 0), t.flat(b, l))];
                beta[(a, b)] = beta[(a, b)].clone() + &c[(t.flat(0, a), t.flat(l, b))];
            }
        }
    }
    Ok((alpha, beta))
}
