mod common;

use common::brute_force_sn;
use phipsi::permutations::{
    counterexample_count_formula, cyclic, enumerate_counterexample_sigmas, euler_phi,
    is_counterexample_sigma, power_of_cyclic, SnEnumerator,
};
use phipsi::symbolic::{apply_pq, build_a, build_b, exists_pq};
use phipsi::Permutation;
use proptest::prelude::*;

/// Counts conjugates outside ⟨ρ⟩ by listing the powers of ρ explicitly.
fn lemma_one_oracle(n: usize) -> usize {
    let rho: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let powers: Vec<Vec<usize>> = (0..n)
        .map(|e| (0..n).map(|i| (i + e) % n).collect())
        .collect();
    brute_force_sn(n)
        .into_iter()
        .filter(|s| {
            let mut inv = vec![0; n];
            for (i, &v) in s.iter().enumerate() {
                inv[v] = i;
            }
            let conj: Vec<usize> = (0..n).map(|i| s[rho[inv[i]]]).collect();
            !powers.contains(&conj)
        })
        .count()
}

#[test]
fn counts_match_enumeration_oracle_and_formula() {
    let frozen = [0, 0, 0, 16, 100, 708, 4998];
    for n in 1..=7 {
        let enumerated = enumerate_counterexample_sigmas(n).unwrap().len();
        assert_eq!(enumerated, frozen[n - 1], "n = {n}");
        assert_eq!(enumerated, counterexample_count_formula(n), "n = {n}");
        if n <= 6 {
            assert_eq!(lemma_one_oracle(n), frozen[n - 1], "oracle n = {n}");
        }
    }
}

#[test]
fn conjugates_of_rho_are_full_cycles() {
    for n in 1..=6 {
        let rho = cyclic(n).unwrap();
        for sigma in SnEnumerator::new().all(n).unwrap() {
            assert!(sigma.conjugate(&rho).unwrap().is_full_cycle());
        }
    }
}

#[test]
fn normalizer_characterisation_by_cyclic_differences() {
    // σρσ⁻¹ ∈ ⟨ρ⟩ iff σ(i+1) − σ(i) is a constant unit mod n
    for n in 1..=7usize {
        for sigma in SnEnumerator::new().all(n).unwrap() {
            let diffs: Vec<usize> = (0..n)
                .map(|i| (sigma.apply((i + 1) % n) + n - sigma.apply(i)) % n)
                .collect();
            let constant = diffs.iter().all(|&d| d == diffs[0]);
            let unit = num_integer::gcd(diffs[0], n) == 1;
            assert_eq!(
                !is_counterexample_sigma(&sigma),
                constant && unit,
                "{sigma}"
            );
        }
    }
}

#[test]
fn both_conjugation_orientations_select_the_same_set() {
    for n in 1..=6 {
        let rho = cyclic(n).unwrap();
        for sigma in SnEnumerator::new().all(n).unwrap() {
            let other = sigma.inverse().conjugate(&rho).unwrap();
            assert_eq!(
                is_counterexample_sigma(&sigma),
                power_of_cyclic(&other).is_none(),
                "{sigma}"
            );
        }
    }
}

#[test]
fn totient_small_values() {
    let expected = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4];
    for (n, &phi) in (1..=10).zip(&expected) {
        let brute = (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count();
        assert_eq!(euler_phi(n), phi);
        assert_eq!(brute, phi);
    }
}

#[test]
fn circulants_are_latin_squares() {
    for n in 1..=6 {
        assert!(build_a(n).unwrap().is_latin());
        for sigma in SnEnumerator::new().all(n).unwrap() {
            let b = build_b(n, &sigma).unwrap();
            assert!(b.is_latin());
            assert!((0..n).all(|v| b.occurrences(v) == n));
        }
    }
}

#[test]
fn exists_pq_matches_exhaustive_pair_search() {
    for n in 1..=4 {
        let all = SnEnumerator::new().all(n).unwrap();
        let a = build_a(n).unwrap();
        for sigma in &all {
            let b = build_b(n, sigma).unwrap();
            let brute = all.iter().find_map(|p| {
                all.iter()
                    .find(|q| apply_pq(&b, p, q).unwrap() == a)
                    .map(|q| (p.clone(), q.clone()))
            });
            assert_eq!(exists_pq(&a, &b).unwrap(), brute, "sigma = {sigma}");
        }
    }
}

#[test]
fn lemma_two_and_its_converse() {
    for n in 1..=5 {
        let a = build_a(n).unwrap();
        for sigma in SnEnumerator::new().all(n).unwrap() {
            let b = build_b(n, &sigma).unwrap();
            let found = exists_pq(&a, &b).unwrap();
            if let Some((p, q)) = &found {
                assert_eq!(&apply_pq(&b, p, q).unwrap(), &a);
            }
            assert_eq!(found.is_none(), is_counterexample_sigma(&sigma), "{sigma}");
        }
    }
}

#[test]
fn exists_pq_at_n6_spot_checks() {
    let a = build_a(6).unwrap();
    let sigma = Permutation::parse("(5 6)", 6).unwrap();
    assert!(is_counterexample_sigma(&sigma));
    assert!(exists_pq(&a, &build_b(6, &sigma).unwrap())
        .unwrap()
        .is_none());
    let affine = Permutation::from_image((0..6).map(|i| (5 * i + 2) % 6).collect()).unwrap();
    assert!(!is_counterexample_sigma(&affine));
    assert!(exists_pq(&a, &build_b(6, &affine).unwrap())
        .unwrap()
        .is_some());
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_image(v).unwrap())
}

proptest! {
    #[test]
    fn compose_with_inverse_is_identity(p in (1usize..=8).prop_flat_map(perm_strategy)) {
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert!(p.inverse().compose(&p).unwrap().is_identity());
    }

    #[test]
    fn text_forms_roundtrip(p in (1usize..=8).prop_flat_map(perm_strategy)) {
        let n = p.len();
        prop_assert_eq!(Permutation::parse(&p.to_string(), n).unwrap(), p.clone());
        prop_assert_eq!(Permutation::parse(&p.cycle_notation(), n).unwrap(), p);
    }
}
