//! The equality system cutting out `Φ(n,n)`, membership and vertex tests for
//! it, Kronecker vertices `P ⊗ Q`, and exact `Ψ(n,n)` membership.
//!
//! Tensor indices are flattened row-major: `(i, k) ↦ n·i + k` (0-based), and
//! the variable `c_{(i,k),(j,l)}` sits at flat index `(n·i + k)·n² + (n·j + l)`,
//! which is the row-major position of that entry in the `n² × n²` matrix.

mod constraints;
mod psi;

pub use constraints::{
    build_phi_constraints, induced_marginals, is_vertex_of_phi, phi_contains, vertex_check,
    ConstraintSystem, FamilyReading, PhiCheck, RowViolation, VertexCheck,
};
pub use psi::{
    check_psi_farkas, kron, kronecker_pairs, psi_contains, psi_system, support_contained_pairs,
    MembershipResult, PsiMode, PsiOptions, PsiVerdict, WeightedPair, FULL_FARKAS_RECHECK_MAX_N,
    FULL_MODE_DEFAULT_MAX_N, PAIR_ENUMERATION_MAX_N,
};

/// Row-major flattening of pairs in `{0..n}²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorIndex {
    n: usize,
}

impl TensorIndex {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n²`, the side length of the tensor matrices.
    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn flat(&self, i: usize, k: usize) -> usize {
        debug_assert!(i < self.n && k < self.n);
        self.n * i + k
    }

    pub fn split(&self, f: usize) -> (usize, usize) {
        (f / self.n, f % self.n)
    }

    /// Flat variable index of `c_{(i,k),(j,l)}`.
    pub fn var(&self, i: usize, k: usize, j: usize, l: usize) -> usize {
        self.flat(i, k) * self.dim() + self.flat(j, l)
    }

    /// 1-based label `c(i,k;j,l)` for a flat variable index.
    pub fn var_label(&self, var: usize) -> String {
        let (row, col) = (var / self.dim(), var % self.dim());
        let (i, k) = self.split(row);
        let (j, l) = self.split(col);
        format!("c({},{};{},{})", i + 1, k + 1, j + 1, l + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_index_is_bijective() {
        for n in 1..=5 {
            let t = TensorIndex::new(n);
            let mut seen = vec![false; t.dim()];
            for i in 0..n {
                for k in 0..n {
                    let f = t.flat(i, k);
                    assert!(!std::mem::replace(&mut seen[f], true));
                    assert_eq!(t.split(f), (i, k));
                }
            }
            assert!(seen.into_iter().all(|s| s));
        }
    }

    #[test]
    fn var_labels_are_one_based() {
        let t = TensorIndex::new(4);
        assert_eq!(t.var_label(t.var(0, 0, 1, 3)), "c(1,1;2,4)");
    }
}
