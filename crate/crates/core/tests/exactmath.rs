mod common;

use common::{q, rank_oracle};
use num_traits::{Signed, Zero};
use phipsi::counterexample::build_t;
use phipsi::exactmath::lp::{check_farkas, check_witness, lp_feasible};
use phipsi::exactmath::{columns_independent, rat_rank};
use phipsi::polytopes::{build_phi_constraints, FamilyReading};
use phipsi::{Feasibility, Matrix, Permutation, RatMatrix, Rational};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RatMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(small_rational(), r * c)
            .prop_map(move |data| Matrix::from_vec(r, c, data).unwrap())
    })
}

/// Low-rank matrices are rare under uniform sampling, so build some as products.
fn low_rank_matrix() -> impl Strategy<Value = RatMatrix> {
    (small_matrix(5, 2), 1usize..=5).prop_flat_map(|(left, cols)| {
        let k = left.cols();
        proptest::collection::vec(small_rational(), k * cols).prop_map(move |data| {
            let right = Matrix::from_vec(k, cols, data).unwrap();
            left.mul(&right).unwrap()
        })
    })
}

#[test]
fn support_submatrix_rank_matches_oracle() {
    let sigma = Permutation::parse("(3 4)", 4).unwrap();
    let t: RatMatrix = build_t(4, &sigma).unwrap();
    let sys = build_phi_constraints::<Rational>(4, FamilyReading::Standard).unwrap();
    let support = t.support();
    assert_eq!(support.len(), 64);
    let sub = sys.matrix.select_columns(&support).unwrap();
    assert_eq!((sub.rows(), sub.cols()), (224, 64));
    // frozen from the Gauss-Jordan oracle
    assert_eq!(rank_oracle(&sub), 64);
    assert_eq!(rat_rank(&sub), 64);
    assert!(columns_independent(&sys.matrix, &support).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_agrees_with_oracle(m in prop_oneof![small_matrix(5, 5), low_rank_matrix()]) {
        prop_assert_eq!(rat_rank(&m), rank_oracle(&m));
    }

    #[test]
    fn rank_of_transpose(m in prop_oneof![small_matrix(5, 5), low_rank_matrix()]) {
        prop_assert_eq!(rat_rank(&m), rat_rank(&m.transpose()));
    }

    #[test]
    fn rank_invariant_under_row_scaling_and_permutation(
        m in low_rank_matrix(),
        scales in proptest::collection::vec((1i64..=5, 1i64..=5, any::<bool>()), 5),
        seed in any::<u64>(),
    ) {
        let mut rows: Vec<Vec<Rational>> = (0..m.rows())
            .map(|i| {
                let (n, d, neg) = scales[i];
                let s = if neg { q(-n, d) } else { q(n, d) };
                m.row(i).iter().map(|v| v.clone() * s.clone()).collect()
            })
            .collect();
        let len = rows.len();
        rows.rotate_left((seed as usize) % len);
        let scaled = Matrix::from_rows(rows).unwrap();
        prop_assert_eq!(rat_rank(&scaled), rat_rank(&m));
    }

    #[test]
    fn column_independence_is_rank_test(m in low_rank_matrix(), mask in any::<u8>()) {
        let cols: Vec<usize> = (0..m.cols()).filter(|c| mask & (1 << c) != 0).collect();
        let expected = rat_rank(&m.select_columns(&cols).unwrap()) == cols.len();
        prop_assert_eq!(columns_independent(&m, &cols).unwrap(), expected);
    }

    #[test]
    fn lp_results_always_reverify(
        c in small_matrix(4, 6),
        d in proptest::collection::vec(small_rational(), 4),
    ) {
        let d = &d[..c.rows()];
        match lp_feasible(&c, d).unwrap() {
            Feasibility::Feasible { witness } => {
                prop_assert!(check_witness(&c, d, &witness).unwrap());
            }
            Feasibility::Infeasible { farkas } => {
                prop_assert!(check_farkas(&c, d, &farkas).unwrap());
            }
        }
    }

    #[test]
    fn dependent_rows_do_not_change_the_verdict(
        c in small_matrix(3, 5),
        d in proptest::collection::vec(small_rational(), 3),
        (a, b) in (small_rational(), small_rational()),
        bump in prop_oneof![Just(0i64), 1i64..=2],
    ) {
        let d = d[..c.rows()].to_vec();
        let first = c.row(0).to_vec();
        let last = c.row(c.rows() - 1).to_vec();
        let combo: Vec<Rational> = first
            .iter()
            .zip(&last)
            .map(|(x, y)| a.clone() * x + b.clone() * y)
            .collect();
        let mut rows: Vec<Vec<Rational>> = (0..c.rows()).map(|i| c.row(i).to_vec()).collect();
        rows.push(combo);
        let wide = Matrix::from_rows(rows).unwrap();
        let mut wide_d = d.clone();
        let combo_rhs =
            a.clone() * &d[0] + b.clone() * &d[c.rows() - 1] + Rational::from_integer(bump.into());
        wide_d.push(combo_rhs);
        let narrow = lp_feasible(&c, &d).unwrap();
        let out = lp_feasible(&wide, &wide_d).unwrap();
        match &out {
            Feasibility::Feasible { witness } => {
                prop_assert!(check_witness(&wide, &wide_d, witness).unwrap());
            }
            Feasibility::Infeasible { farkas } => {
                prop_assert!(check_farkas(&wide, &wide_d, farkas).unwrap());
            }
        }
        if bump == 0 {
            prop_assert_eq!(out.is_feasible(), narrow.is_feasible());
        } else {
            // a shifted copy of a combination of rows can never be satisfied
            prop_assert!(!out.is_feasible());
        }
    }

    #[test]
    fn lp_finds_planted_points(
        c in small_matrix(4, 6),
        x in proptest::collection::vec((0i64..=3, 1i64..=3), 6),
    ) {
        let x: Vec<Rational> = x[..c.cols()].iter().map(|&(n, d)| q(n, d)).collect();
        let d = c.mul_vec(&x).unwrap();
        let out = lp_feasible(&c, &d).unwrap();
        let witness = out.witness().expect("planted point makes the system feasible");
        prop_assert!(witness.iter().all(|v| !v.is_negative()));
        prop_assert_eq!(c.mul_vec(witness).unwrap(), d);
    }
}

#[test]
fn farkas_sign_bookkeeping() {
    let c = Matrix::from_rows(vec![vec![q(1, 1), q(1, 1)]]).unwrap();
    let out = lp_feasible(&c, &[q(-1, 1)]).unwrap();
    let y = out.farkas().unwrap();
    assert_eq!(y, &[q(1, 1)]);
    let cty = c.tr_mul_vec(y).unwrap();
    assert!(cty.iter().all(|v| !v.is_negative()));
    assert!((q(-1, 1) * y[0].clone()).is_negative());
    assert!(!y[0].is_zero());
}
