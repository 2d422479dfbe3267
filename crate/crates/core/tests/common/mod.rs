#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Zero};
use phipsi::permutations::SnEnumerator;
use phipsi::polytopes::kron;
use phipsi::{Permutation, RatMatrix, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Plain Gauss-Jordan elimination over the rationals, kept separate from the
/// fraction-free implementation it checks.
pub fn rank_oracle(m: &RatMatrix) -> usize {
    let mut a: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = Rational::one() / a[rank][c].clone();
        for v in a[rank].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == rank || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot) {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
        rank += 1;
    }
    rank
}

/// Brute-force permutation enumeration by filtering all n^n maps.
pub fn brute_force_sn(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let total = n.pow(n as u32);
    for code in 0..total {
        let mut x = code;
        let mut img = vec![0; n];
        for slot in img.iter_mut().rev() {
            *slot = x % n;
            x /= n;
        }
        let mut seen = vec![false; n];
        if img.iter().all(|&v| !std::mem::replace(&mut seen[v], true)) {
            out.push(img);
        }
    }
    out
}

pub fn shift(n: usize, m: usize) -> Permutation {
    Permutation::from_image((0..n).map(|i| (i + m) % n).collect()).unwrap()
}

/// Random convex combination of up to `terms` permutation matrices.
pub fn random_birkhoff<R: Rng>(rng: &mut R, n: usize, terms: usize) -> RatMatrix {
    let perms = SnEnumerator::new().all(n).unwrap();
    let count = rng.gen_range(1..=terms);
    let weights: Vec<i64> = (0..count).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    let mut acc = RatMatrix::zeros(n, n);
    for w in weights {
        let p = perms.choose(rng).unwrap();
        let mut pm = RatMatrix::zeros(n, n);
        for i in 0..n {
            pm[(i, p.apply(i))] = Rational::one();
        }
        acc = acc.add(&pm.scale(&q(w, total))).unwrap();
    }
    acc
}

/// Random convex combination of up to `terms` products `A ⊗ B` of random
/// doubly stochastic matrices.
pub fn random_psi_point<R: Rng>(rng: &mut R, n: usize, terms: usize) -> RatMatrix {
    let count = rng.gen_range(1..=terms);
    let weights: Vec<i64> = (0..count).map(|_| rng.gen_range(1..=7)).collect();
    let total: i64 = weights.iter().sum();
    let dim = n * n;
    let mut acc = RatMatrix::zeros(dim, dim);
    for w in weights {
        let a = random_birkhoff(rng, n, 3);
        let b = random_birkhoff(rng, n, 3);
        acc = acc.add(&a.kron(&b).scale(&q(w, total))).unwrap();
    }
    acc
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Permutation {
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    Permutation::from_image(img).unwrap()
}

pub fn weighted_sum(n: usize, terms: &[(Permutation, Permutation, Rational)]) -> RatMatrix {
    let dim = n * n;
    let mut acc = RatMatrix::zeros(dim, dim);
    for (p, qq, w) in terms {
        acc = acc.add(&kron::<Rational>(p, qq).unwrap().scale(w)).unwrap();
    }
    acc
}
