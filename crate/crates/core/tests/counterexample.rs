mod common;

use std::collections::HashSet;

use common::{q, shift};
use num_traits::{One, Zero};
use phipsi::counterexample::{
    block_structure_report, build_t, certify_not_in_psi, distinct_t_count, full_verification,
    verify_many, verify_transfer_identity, Outcome, PsiLpStatus, VerifyOptions,
};
use phipsi::permutations::{enumerate_counterexample_sigmas, SnEnumerator};
use phipsi::polytopes::{kron, kronecker_pairs, support_contained_pairs, TensorIndex};
use phipsi::symbolic::{apply_pq, build_a, build_b, exists_pq};
use phipsi::{Permutation, RatMatrix, Rational};

fn printed_t() -> RatMatrix {
    phipsi::exactmath::text::parse_matrix(include_str!("data/printed_t_n4_sigma_34.txt")).unwrap()
}

/// Direct formula: row (i,k) holds the variable (i+k) mod n in A, column
/// (j,l) holds σ((j+l) mod n) in B.
fn t_oracle(n: usize, sigma: &Permutation) -> RatMatrix {
    let dim = n * n;
    let mut t = RatMatrix::zeros(dim, dim);
    for (i, k, j, l) in quads(n) {
        if sigma.apply((j + l) % n) == (i + k) % n {
            t[(n * i + k, n * j + l)] = q(1, n as i64);
        }
    }
    t
}

fn quads(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |i| {
        (0..n).flat_map(move |k| (0..n).flat_map(move |j| (0..n).map(move |l| (i, k, j, l))))
    })
}

#[test]
fn golden_t_matches_printed_matrix() {
    let sigma = Permutation::parse("(3 4)", 4).unwrap();
    let t: RatMatrix = build_t(4, &sigma).unwrap();
    let printed = printed_t();
    assert_eq!(t, printed);
    let quarter = q(1, 4);
    assert_eq!(
        printed.entries().iter().filter(|v| **v == quarter).count(),
        64
    );
    assert_eq!(
        printed.entries().iter().filter(|v| v.is_zero()).count(),
        192
    );
    // row (1,1): nonzeros at (1,1), (2,4), (3,3), (4,2)
    let idx = TensorIndex::new(4);
    let cols: Vec<usize> = (0..16).filter(|&c| !t[(0, c)].is_zero()).collect();
    let mut expected = vec![
        idx.flat(0, 0),
        idx.flat(1, 3),
        idx.flat(2, 2),
        idx.flat(3, 1),
    ];
    expected.sort();
    assert_eq!(cols, expected);
}

#[test]
fn t_matches_the_circulant_formula() {
    for n in 1..=4 {
        for sigma in SnEnumerator::new().all(n).unwrap() {
            assert_eq!(build_t::<Rational>(n, &sigma).unwrap(), t_oracle(n, &sigma));
        }
    }
    for n in 5..=6 {
        for sigma in enumerate_counterexample_sigmas(n)
            .unwrap()
            .iter()
            .step_by(37)
        {
            assert_eq!(build_t::<Rational>(n, sigma).unwrap(), t_oracle(n, sigma));
        }
    }
}

#[test]
fn identity_sigma_gives_the_sum_pattern() {
    let t: RatMatrix = build_t(4, &Permutation::identity(4)).unwrap();
    for (i, k, j, l) in quads(4) {
        let expected = if (i + k) % 4 == (j + l) % 4 {
            q(1, 4)
        } else {
            Rational::zero()
        };
        assert_eq!(t[(4 * i + k, 4 * j + l)], expected);
    }
}

#[test]
fn support_and_margins() {
    for n in 1..=5 {
        for sigma in SnEnumerator::new().all(n).unwrap() {
            let t: RatMatrix = build_t(n, &sigma).unwrap();
            let share = q(1, n as i64);
            assert_eq!(t.support().len(), n * n * n);
            assert!(t.entries().iter().all(|v| v.is_zero() || *v == share));
            assert!(t.row_sums().iter().all(Rational::is_one));
            assert!(t.col_sums().iter().all(Rational::is_one));
            assert!(verify_transfer_identity(&t, n, &sigma).unwrap());
            assert!(block_structure_report(&t, n).passed());
        }
    }
}

#[test]
fn n3_has_no_family_members() {
    for sigma in SnEnumerator::new().all(3).unwrap() {
        let report = full_verification(3, &sigma, VerifyOptions::default()).unwrap();
        assert!(!report.lemma1_pass);
        assert!(!report.lemma2_pass);
        assert_eq!(report.outcome, Outcome::NotInFamily);
        assert_eq!(report.psi_lp_status, PsiLpStatus::Feasible);
    }
}

#[test]
fn all_sixteen_at_n4_are_confirmed_with_the_lp() {
    let sigmas = enumerate_counterexample_sigmas(4).unwrap();
    assert_eq!(sigmas.len(), 16);
    let reports = verify_many(4, &sigmas, VerifyOptions::default(), 4).unwrap();
    for (sigma, r) in sigmas.iter().zip(&reports) {
        assert_eq!(&r.sigma, sigma);
        assert_eq!(
            r.outcome,
            Outcome::Confirmed,
            "{}: {:?}",
            sigma.cycle_notation(),
            r.divergences
        );
        assert!(r.lemma1_pass && r.lemma2_pass && r.in_phi && r.psi_certificate_pass);
        assert!(r.transfer_identity_pass && r.block_structure_pass && r.support_scan_agrees);
        assert_eq!(r.constraint_rows, 224);
        assert_eq!(
            (r.support_size, r.support_rank, r.is_vertex),
            (64, Some(64), Some(true))
        );
        assert_eq!(r.psi_lp_status, PsiLpStatus::InfeasibleCertified);
        assert_eq!(r.psi_lp_columns, Some(576));
        assert_eq!(r.psi_lp_certificate_verified, Some(true));
        assert_eq!(r.first_failed_stage, None);
    }
}

#[test]
fn n5_sample_is_confirmed_on_the_certificate_path() {
    let all = enumerate_counterexample_sigmas(5).unwrap();
    assert_eq!(all.len(), 100);
    let mut sample: Vec<Permutation> = all.iter().step_by(10).cloned().collect();
    sample.push(Permutation::parse("(4 5)", 5).unwrap());
    assert!(sample.len() >= 11);
    let reports = verify_many(5, &sample, VerifyOptions::default(), 4).unwrap();
    for r in &reports {
        assert_eq!(
            r.outcome,
            Outcome::Confirmed,
            "{}: {:?}",
            r.sigma_cycles,
            r.divergences
        );
        assert_eq!((r.support_size, r.support_rank), (125, Some(125)));
        assert_eq!(r.psi_lp_status, PsiLpStatus::Skipped);
    }
}

#[test]
fn identity_control_report() {
    let r = full_verification(4, &Permutation::identity(4), VerifyOptions::default()).unwrap();
    assert!(!r.lemma1_pass);
    assert!(!r.lemma2_pass);
    assert!(r.pq_witness.is_some());
    assert!(r.in_phi && r.transfer_identity_pass && r.block_structure_pass);
    assert_eq!(r.is_vertex, Some(false));
    assert!(!r.psi_certificate_pass);
    assert_eq!(r.psi_lp_status, PsiLpStatus::Feasible);
    assert_eq!(r.first_failed_stage.as_deref(), Some("lemma1"));
    assert_eq!(r.outcome, Outcome::NotInFamily);
    assert!(r.divergences.is_empty());
}

#[test]
fn identity_support_holds_exactly_the_four_shift_pairs() {
    let t: RatMatrix = build_t(4, &Permutation::identity(4)).unwrap();
    assert!(!certify_not_in_psi(&t, 4).unwrap());
    let pairs = support_contained_pairs(&t, 4).unwrap();
    let mut expected: Vec<_> = (0..4)
        .map(|m| (shift(4, m), shift(4, (4 - m) % 4)))
        .collect();
    expected.sort();
    assert_eq!(pairs, expected);
}

/// Support containment of `P ⊗ Q` in `T` holds exactly when `A = P·B·Q` as
/// patterns, checked pair by pair against a direct entrywise scan.
#[test]
fn support_scan_matches_pattern_equality_for_every_pair() {
    for n in 1..=4 {
        let a = build_a(n).unwrap();
        let pairs = kronecker_pairs(n).unwrap();
        for sigma in SnEnumerator::new().all(n).unwrap() {
            let b = build_b(n, &sigma).unwrap();
            let t: RatMatrix = build_t(n, &sigma).unwrap();
            let support: HashSet<usize> = t.support().into_iter().collect();
            let mut contained = Vec::new();
            for (p, qq) in &pairs {
                let k: RatMatrix = kron(p, qq).unwrap();
                let fits = k.support().iter().all(|s| support.contains(s));
                let pattern = apply_pq(&b, p, qq).unwrap() == a;
                assert_eq!(fits, pattern, "n={n} sigma={sigma} p={p} q={qq}");
                if fits {
                    contained.push((p.clone(), qq.clone()));
                }
            }
            assert_eq!(support_contained_pairs(&t, n).unwrap(), contained);
            assert_eq!(exists_pq(&a, &b).unwrap().is_some(), !contained.is_empty());
            assert_eq!(certify_not_in_psi(&t, n).unwrap(), contained.is_empty());
        }
    }
}

#[test]
fn distinctness_audit() {
    let sigmas = enumerate_counterexample_sigmas(4).unwrap();
    // measured, not a claim being tested
    assert_eq!(distinct_t_count(4, &sigmas).unwrap(), DISTINCT_T_AT_N4);
}

const DISTINCT_T_AT_N4: usize = 16;
