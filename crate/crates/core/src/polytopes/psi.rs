use serde::Serialize;

use super::TensorIndex;
use crate::error::{Error, Result};
use crate::exactmath::{lp_feasible_sparse, ExactField, Matrix, Scalar, SparseMatrix};
use crate::permutations::{Permutation, SnEnumerator};

/// Largest `n` for which [`PsiMode::Full`] runs without `allow_large`.
pub const FULL_MODE_DEFAULT_MAX_N: usize = 4;

/// Largest `n` for which all `n!²` vertex pairs are ever enumerated.
pub const PAIR_ENUMERATION_MAX_N: usize = 6;
/// Certificates are rechecked against every vertex column up to this `n`.
pub const FULL_FARKAS_RECHECK_MAX_N: usize = 5;

/// `P ⊗ Q`: entry `((i,k),(j,l))` is 1 iff `j = p(i)` and `l = q(k)`.
pub fn kron<T: Scalar>(p: &Permutation, q: &Permutation) -> Result<Matrix<T>> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch {
            expected: p.len(),
            actual: q.len(),
        });
    }
    let t = TensorIndex::new(p.len());
    let mut m = Matrix::zeros(t.dim(), t.dim());
    for (i, k) in pairs(p.len()) {
        m[(t.flat(i, k), t.flat(p.apply(i), q.apply(k)))] = T::one();
    }
    Ok(m)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |k| (i, k)))
}

/// All `(p, q) ∈ Sₙ × Sₙ` in lexicographic order.
pub fn kronecker_pairs(n: usize) -> Result<Vec<(Permutation, Permutation)>> {
    let perms = SnEnumerator::new().cap(PAIR_ENUMERATION_MAX_N).all(n)?;
    Ok(perms
        .iter()
        .flat_map(|p| perms.iter().map(move |q| (p.clone(), q.clone())))
        .collect())
}

/// Pairs whose `P ⊗ Q` has no 1 outside the positive entries of `c`, in
/// lexicographic order. Backtracks over `p(0), q(0..n), p(1..n)`, checking
/// each entry `c[(i,k),(p(i),q(k))] > 0` as soon as both images are known.
pub fn support_contained_pairs<T: Scalar>(
    c: &Matrix<T>,
    n: usize,
) -> Result<Vec<(Permutation, Permutation)>> {
    check_square(c, n)?;
    let mut search = ContainmentSearch {
        c,
        t: TensorIndex::new(n),
        p: vec![usize::MAX; n],
        q: vec![usize::MAX; n],
        p_used: vec![false; n],
        q_used: vec![false; n],
        found: Vec::new(),
    };
    if n > 0 {
        search.assign_p0();
    }
    let mut found = search.found;
    found.sort();
    Ok(found)
}

struct ContainmentSearch<'a, T> {
    c: &'a Matrix<T>,
    t: TensorIndex,
    p: Vec<usize>,
    q: Vec<usize>,
    p_used: Vec<bool>,
    q_used: Vec<bool>,
    found: Vec<(Permutation, Permutation)>,
}

impl<T: Scalar> ContainmentSearch<'_, T> {
    fn positive(&self, i: usize, k: usize) -> bool {
        self.c[(self.t.flat(i, k), self.t.flat(self.p[i], self.q[k]))].is_positive()
    }

    fn assign_p0(&mut self) {
        for j in 0..self.t.n() {
            self.p[0] = j;
            self.p_used[j] = true;
            self.assign_q(0);
            self.p_used[j] = false;
        }
    }

    fn assign_q(&mut self, k: usize) {
        let n = self.t.n();
        if k == n {
            self.assign_p(1);
            return;
        }
        for l in 0..n {
            if self.q_used[l] {
                continue;
            }
            self.q[k] = l;
            if self.positive(0, k) {
                self.q_used[l] = true;
                self.assign_q(k + 1);
                self.q_used[l] = false;
            }
        }
    }

    fn assign_p(&mut self, i: usize) {
        let n = self.t.n();
        if i == n {
            self.found.push((
                Permutation::from_image(self.p.clone()).expect("bijection"),
                Permutation::from_image(self.q.clone()).expect("bijection"),
            ));
            return;
        }
        for j in 0..n {
            if self.p_used[j] {
                continue;
            }
            self.p[i] = j;
            if (0..n).all(|k| self.positive(i, k)) {
                self.p_used[j] = true;
                self.assign_p(i + 1);
                self.p_used[j] = false;
            }
        }
    }
}

fn check_square<T: Scalar>(c: &Matrix<T>, n: usize) -> Result<()> {
    let dim = n * n;
    if c.rows() != dim || c.cols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected a {dim}x{dim} matrix, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    Ok(())
}

/// The system `Σ w_s·vec(P_s ⊗ Q_s) = vec(c)`, `Σ w_s = 1` over the given
/// pairs: `n⁴ + 1` rows, one column per pair.
pub fn psi_system<T: Scalar>(
    c: &Matrix<T>,
    n: usize,
    pairs_: &[(Permutation, Permutation)],
) -> Result<(SparseMatrix<T>, Vec<T>)> {
    check_square(c, n)?;
    let t = TensorIndex::new(n);
    let total = t.dim() * t.dim();
    let columns: Vec<Vec<(usize, T)>> = pairs_
        .iter()
        .map(|(p, q)| {
            let mut col: Vec<(usize, T)> = pairs(n)
                .map(|(i, k)| (t.var(i, k, p.apply(i), q.apply(k)), T::one()))
                .collect();
            col.push((total, T::one()));
            col
        })
        .collect();
    let matrix = SparseMatrix::from_columns(total + 1, &columns)?;
    let mut rhs: Vec<T> = c.entries().to_vec();
    rhs.push(T::one());
    Ok((matrix, rhs))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiMode {
    /// Drop every vertex with a 1 where `c` is 0 before solving.
    #[default]
    SupportFiltered,
    /// Solve over all `n!²` vertices.
    Full,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PsiOptions {
    pub mode: PsiMode,
    /// Permit full mode above [`FULL_MODE_DEFAULT_MAX_N`].
    pub allow_large: bool,
}

impl PsiOptions {
    pub fn new(mode: PsiMode) -> Self {
        Self {
            mode,
            allow_large: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedPair<T> {
    pub p: Permutation,
    pub q: Permutation,
    pub weight: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PsiVerdict<T> {
    /// Positive weights reconstructing the input exactly.
    Inside { weights: Vec<WeightedPair<T>> },
    /// Certificate against the full system over all `n!²` vertices, rows
    /// ordered as in [`psi_system`].
    Outside { farkas: Vec<T> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipResult<T> {
    pub mode: PsiMode,
    /// Number of vertex columns handed to the LP.
    pub admissible_columns: usize,
    pub verdict: PsiVerdict<T>,
}

impl<T> MembershipResult<T> {
    pub fn in_psi(&self) -> bool {
        matches!(self.verdict, PsiVerdict::Inside { .. })
    }

    pub fn weights(&self) -> Option<&[WeightedPair<T>]> {
        match &self.verdict {
            PsiVerdict::Inside { weights } => Some(weights),
            PsiVerdict::Outside { .. } => None,
        }
    }

    pub fn farkas(&self) -> Option<&[T]> {
        match &self.verdict {
            PsiVerdict::Inside { .. } => None,
            PsiVerdict::Outside { farkas } => Some(farkas),
        }
    }
}

/// Decides `c ∈ Ψ(n,n)` exactly as a convex combination of Kronecker vertices.
///
/// In support-filtered mode, vertices touching a zero of `c` are dropped; any
/// certificate for the reduced system is lifted back to all `n!²` columns by
/// adding a large enough multiple of the zero-pattern indicator, which leaves
/// `dᵀy` unchanged because those right-hand sides are 0.
pub fn psi_contains<T: ExactField>(
    c: &Matrix<T>,
    n: usize,
    options: PsiOptions,
) -> Result<MembershipResult<T>> {
    check_square(c, n)?;
    if let Some(pos) = c.entries().iter().position(|v| v.is_negative()) {
        let dim = n * n;
        return Err(Error::NegativeEntry {
            row: pos / dim,
            col: pos % dim,
        });
    }
    let candidate_pairs = match options.mode {
        PsiMode::Full => {
            if n > FULL_MODE_DEFAULT_MAX_N && !options.allow_large {
                return Err(Error::OverCap {
                    n,
                    cap: FULL_MODE_DEFAULT_MAX_N,
                });
            }
            kronecker_pairs(n)?
        }
        PsiMode::SupportFiltered => support_contained_pairs(c, n)?,
    };

    let (system, rhs) = psi_system(c, n, &candidate_pairs)?;
    let outcome = lp_feasible_sparse(&system, &rhs)?;
    let verdict = match outcome {
        crate::exactmath::Feasibility::Feasible { witness } => {
            let weights: Vec<WeightedPair<T>> = candidate_pairs
                .into_iter()
                .zip(witness)
                .filter(|(_, w)| !w.is_zero())
                .map(|((p, q), weight)| WeightedPair { p, q, weight })
                .collect();
            if !reconstructs(c, &weights)? {
                return Err(Error::Solver("weights do not reconstruct the input".into()));
            }
            PsiVerdict::Inside { weights }
        }
        crate::exactmath::Feasibility::Infeasible { farkas } => {
            let farkas = match options.mode {
                PsiMode::Full => farkas,
                PsiMode::SupportFiltered => lift_certificate(c, n, farkas)?,
            };
            if n <= FULL_FARKAS_RECHECK_MAX_N && !check_psi_farkas(c, n, &farkas)? {
                return Err(Error::Solver(
                    "certificate fails against the full vertex set".into(),
                ));
            }
            PsiVerdict::Outside { farkas }
        }
    };
    Ok(MembershipResult {
        mode: options.mode,
        admissible_columns: system.cols(),
        verdict,
    })
}

fn reconstructs<T: ExactField>(c: &Matrix<T>, weights: &[WeightedPair<T>]) -> Result<bool> {
    let mut sum = Matrix::zeros(c.rows(), c.cols());
    let mut total = T::zero();
    for w in weights {
        if !w.weight.is_positive() {
            return Ok(false);
        }
        sum = sum.add(&kron::<T>(&w.p, &w.q)?.scale(&w.weight))?;
        total = total + &w.weight;
    }
    Ok(total.is_one() && &sum == c)
}

/// Raises the certificate on zero entries of `c` until every dropped vertex
/// column has `(Cᵀy)_col ≥ 0`.
fn lift_certificate<T: ExactField>(c: &Matrix<T>, n: usize, mut y: Vec<T>) -> Result<Vec<T>> {
    let t = TensorIndex::new(n);
    let zero_rows: Vec<usize> = c
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i)
        .collect();
    if zero_rows.is_empty() {
        return Ok(y);
    }
    // Every dropped column has at least one 1 on a zero row, so a shift of
    // max(0, −min over all columns of (Cᵀy)) is enough. The minimum over all
    // Kronecker columns is bounded below by the sum of the per-(i,k) minima.
    let sum_row = y[t.dim() * t.dim()].clone();
    let mut lower = sum_row;
    for (i, k) in pairs(n) {
        let row = t.flat(i, k);
        let min = (0..t.dim())
            .map(|col| y[row * t.dim() + col].clone())
            .fold(None, |acc: Option<T>, v| match acc {
                Some(a) if a <= v => Some(a),
                _ => Some(v),
            })
            .expect("nonempty row");
        lower = lower + min;
    }
    if lower.is_negative() {
        let shift = -lower;
        for r in zero_rows {
            y[r] = y[r].clone() + &shift;
        }
    }
    Ok(y)
}

/// Brute-force check that `y` certifies `c ∉ Ψ(n,n)` against every one of the
/// `n!²` vertex columns.
pub fn check_psi_farkas<T: ExactField>(c: &Matrix<T>, n: usize, y: &[T]) -> Result<bool> {
    check_square(c, n)?;
    let t = TensorIndex::new(n);
    let total = t.dim() * t.dim();
    if y.len() != total + 1 {
        return Err(Error::DimensionMismatch(format!(
            "certificate of length {} for {} rows",
            y.len(),
            total + 1
        )));
    }
    let dty = c
        .entries()
        .iter()
        .zip(y)
        .fold(y[total].clone(), |acc, (a, b)| acc + a.clone() * b);
    if !dty.is_negative() {
        return Ok(false);
    }
    let perms = SnEnumerator::new().cap(PAIR_ENUMERATION_MAX_N).all(n)?;
    for p in &perms {
        for q in &perms {
            let col = pairs(n).fold(y[total].clone(), |acc, (i, k)| {
                acc + &y[t.var(i, k, p.apply(i), q.apply(k))]
            });
            if col.is_negative() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutations::cyclic;
    use crate::Rational;
    use num_traits::One;

    #[test]
    fn identity_kron_is_identity() {
        let id = Permutation::identity(3);
        assert_eq!(kron::<Rational>(&id, &id).unwrap(), Matrix::identity(9));
    }

    #[test]
    fn kron_is_a_permutation_matrix() {
        let p = cyclic(3).unwrap();
        let q = Permutation::parse("(1 2)", 3).unwrap();
        let m = kron::<Rational>(&p, &q).unwrap();
        assert!(m.is_doubly_stochastic());
        assert_eq!(m.support().len(), 9);
    }

    #[test]
    fn swap_kron_swap() {
        let s = cyclic(2).unwrap();
        let m = kron::<Rational>(&s, &s).unwrap();
        let t = TensorIndex::new(2);
        assert!(m[(t.flat(0, 0), t.flat(1, 1))].is_one());
        assert!(kron::<Rational>(&s, &cyclic(3).unwrap()).is_err());
    }

    #[test]
    fn vertex_is_in_psi_with_unit_weight() {
        let p = cyclic(3).unwrap();
        let q = p.inverse();
        let m = kron::<Rational>(&p, &q).unwrap();
        for mode in [PsiMode::SupportFiltered, PsiMode::Full] {
            let res = psi_contains(&m, 3, PsiOptions::new(mode)).unwrap();
            let w = res.weights().expect("inside");
            assert_eq!(w.len(), 1);
            assert_eq!((&w[0].p, &w[0].q), (&p, &q));
            assert!(w[0].weight.is_one());
        }
    }

    #[test]
    fn rejects_bad_input() {
        let m = Matrix::<Rational>::identity(4);
        assert!(psi_contains(&m, 3, PsiOptions::default()).is_err());
        let mut neg = Matrix::<Rational>::identity(4);
        neg[(0, 1)] = Rational::from_integer((-1).into());
        assert!(matches!(
            psi_contains(&neg, 2, PsiOptions::default()),
            Err(Error::NegativeEntry { row: 0, col: 1 })
        ));
        let big = Matrix::<Rational>::identity(25);
        assert!(matches!(
            psi_contains(&big, 5, PsiOptions::new(PsiMode::Full)),
            Err(Error::OverCap { .. })
        ));
    }

    #[test]
    fn non_doubly_stochastic_is_outside() {
        let mut m = Matrix::<Rational>::identity(4);
        m[(0, 0)] = Rational::new(1.into(), 2.into());
        for mode in [PsiMode::SupportFiltered, PsiMode::Full] {
            let res = psi_contains(&m, 2, PsiOptions::new(mode)).unwrap();
            assert!(check_psi_farkas(&m, 2, res.farkas().unwrap()).unwrap());
        }
    }
}
