//! Permutations of `{1..n}`, the cyclic generator `ρ = (1 2 … n)`, and the
//! permutations `σ` whose conjugate `σρσ⁻¹` leaves the cyclic group `⟨ρ⟩`.
//!
//! Internally a permutation is its 0-based image array; text I/O is 1-based.

use std::fmt;
use std::thread;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on `n` for enumerations over all of `Sₙ`.
pub const DEFAULT_SN_CAP: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    /// Validates a 0-based image array.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection of 0..{n}",
                    image
                )));
            }
        }
        Ok(Self { image })
    }

    /// Validates a 1-based image array such as `[2, 3, 4, 1]`.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::InvalidPermutation("1-based image contains 0".into()));
        }
        Self::from_image(image.iter().map(|v| v - 1).collect())
    }

    /// Product of cycles on `{1..n}`, given as 1-based cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for &v in cycle {
                if v == 0 || v > n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {v} outside 1..={n}"
                    )));
                }
                if std::mem::replace(&mut touched[v - 1], true) {
                    return Err(Error::InvalidPermutation(format!(
                        "{v} appears in more than one cycle position"
                    )));
                }
            }
            for (a, b) in cycle.iter().zip(cycle.iter().cycle().skip(1)) {
                image[a - 1] = b - 1;
            }
        }
        Self::from_image(image)
    }

    /// Parses `identity`/`id`/`()`, cycle notation such as `(1 2)(3 4)`, or a
    /// 1-based one-line image such as `2 3 4 1`. Cycles need parentheses.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let s = text.trim();
        if matches!(s, "identity" | "id" | "e" | "()") {
            return Ok(Self::identity(n));
        }
        let perm = if s.starts_with('(') {
            let mut cycles = Vec::new();
            let mut rest = s;
            while !rest.is_empty() {
                let Some(body) = rest.strip_prefix('(') else {
                    return Err(Error::Parse(format!("expected `(` in `{s}`")));
                };
                let close = body
                    .find(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed cycle in `{s}`")))?;
                let cycle = parse_numbers(&body[..close])?;
                cycles.push(cycle);
                rest = body[close + 1..].trim_start();
            }
            Self::from_cycles(n, &cycles)?
        } else {
            Self::from_one_based(&parse_numbers(s)?)?
        };
        if perm.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: perm.len(),
            });
        }
        Ok(perm)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// 0-based image of 0-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        Ok(Self {
            image: other.image.iter().map(|&i| self.image[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v] = i;
        }
        Self { image }
    }

    /// `self ∘ r ∘ self⁻¹`.
    pub fn conjugate(&self, r: &Self) -> Result<Self> {
        self.compose(r)?.compose(&self.inverse())
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::identity(self.len());
        for _ in 0..exp {
            acc = self.compose(&acc).expect("same size");
        }
        acc
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest element (0-based).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.image[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.image[cur];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle notation with 1-based points, `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".into();
        }
        cycles
            .iter()
            .map(|c| format!("({})", c.iter().map(|v| v + 1).join(" ")))
            .collect()
    }

    /// True iff the permutation is a single cycle through all `n` points.
    pub fn is_full_cycle(&self) -> bool {
        let cycles = self.cycles();
        self.len() == 1 || (cycles.len() == 1 && cycles[0].len() == self.len())
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(())
    }
}

fn parse_numbers(s: &str) -> Result<Vec<usize>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("`{t}` is not a positive integer")))
        })
        .collect()
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.image.iter().map(|v| v + 1).join(" "))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{self}]")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

/// `ρ` with `ρ(i) = i + 1` for `i < n` and `ρ(n) = 1`.
pub fn cyclic(n: usize) -> Result<Permutation> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    Ok(Permutation {
        image: (0..n).map(|i| (i + 1) % n).collect(),
    })
}

/// The exponent `i ∈ 0..n` with `pi = ρⁱ`, if any.
pub fn power_of_cyclic(pi: &Permutation) -> Option<usize> {
    let n = pi.len();
    if n == 0 {
        return None;
    }
    // ρⁱ sends 0 to i, so i is forced by pi(0).
    let i = pi.apply(0);
    (0..n).all(|x| pi.apply(x) == (x + i) % n).then_some(i)
}

/// True iff `σρσ⁻¹` is not a power of `ρ`.
pub fn is_counterexample_sigma(sigma: &Permutation) -> bool {
    let Ok(rho) = cyclic(sigma.len()) else {
        return false;
    };
    let conj = sigma.conjugate(&rho).expect("same size");
    power_of_cyclic(&conj).is_none()
}

pub fn euler_phi(n: usize) -> usize {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// `n! − n·φ(n)`.
pub fn counterexample_count_formula(n: usize) -> usize {
    factorial(n) - n * euler_phi(n)
}

/// Enumerates subsets of `Sₙ` in lexicographic order of image arrays, with
/// an optional worker pool. Output order does not depend on the worker count.
#[derive(Clone, Copy, Debug)]
pub struct SnEnumerator {
    cap: usize,
    workers: usize,
}

impl Default for SnEnumerator {
    fn default() -> Self {
        Self {
            cap: DEFAULT_SN_CAP,
            workers: 1,
        }
    }
}

impl SnEnumerator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    /// All of `Sₙ` in lexicographic order.
    pub fn all(&self, n: usize) -> Result<Vec<Permutation>> {
        self.filtered(n, |_| true)
    }

    pub fn counterexample_sigmas(&self, n: usize) -> Result<Vec<Permutation>> {
        self.filtered(n, is_counterexample_sigma)
    }

    /// Members of `Sₙ` satisfying `keep`, in lexicographic order. Work is split
    /// into blocks by first image value.
    pub fn filtered<F>(&self, n: usize, keep: F) -> Result<Vec<Permutation>>
    where
        F: Fn(&Permutation) -> bool + Sync,
    {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        if n > self.cap {
            return Err(Error::OverCap { n, cap: self.cap });
        }
        let block = |first: usize| -> Vec<Permutation> {
            let rest: Vec<usize> = (0..n).filter(|&v| v != first).collect();
            rest.iter()
                .copied()
                .permutations(n - 1)
                .map(|tail| {
                    let mut image = Vec::with_capacity(n);
                    image.push(first);
                    image.extend(tail);
                    Permutation { image }
                })
                .filter(|p| keep(p))
                .collect()
        };
        if self.workers <= 1 || n == 1 {
            return Ok((0..n).flat_map(block).collect());
        }
        let firsts: Vec<usize> = (0..n).collect();
        let chunk = n.div_ceil(self.workers);
        let blocks: Vec<Vec<Vec<Permutation>>> = thread::scope(|scope| {
            let handles: Vec<_> = firsts
                .chunks(chunk)
                .map(|group| scope.spawn(|| group.iter().map(|&f| block(f)).collect()))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("enumeration worker panicked"))
                .collect()
        });
        Ok(blocks.into_iter().flatten().flatten().collect())
    }
}

/// Lemma-1 permutations for `n` under the default cap, lexicographically ordered.
pub fn enumerate_counterexample_sigmas(n: usize) -> Result<Vec<Permutation>> {
    SnEnumerator::new().counterexample_sigmas(n)
}
