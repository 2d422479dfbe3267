//! Circulant variable matrices over `x₁ … xₙ` and the search for permutation
//! pairs `(p, q)` with `A = P·B·Q` as variable patterns.
//!
//! Project-wide convention: `apply_pq(B, p, q)[i][k] = B[p(i)][q(k)]`.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::permutations::Permutation;

/// `n × n` matrix of 0-based variable indices; every row holds each variable once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarMatrix {
    n: usize,
    entries: Vec<usize>,
}

impl VarMatrix {
    /// Validates the row-Latin property (which forces `n` occurrences per variable).
    pub fn new(n: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidVarMatrix(format!(
                "{} entries for n = {n}",
                entries.len()
            )));
        }
        for (i, row) in entries.chunks(n.max(1)).enumerate() {
            let mut seen = vec![false; n];
            for &v in row {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidVarMatrix(format!(
                        "row {} does not contain each variable exactly once",
                        i + 1
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 0-based variable index at `(i, k)`.
    pub fn get(&self, i: usize, k: usize) -> usize {
        self.entries[i * self.n + k]
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Row-major flattening, matching the vectorization `(a₁₁, …, a₁ₙ, a₂₁, …)`.
    pub fn flat(&self) -> &[usize] {
        &self.entries
    }

    pub fn occurrences(&self, var: usize) -> usize {
        self.entries.iter().filter(|&&v| v == var).count()
    }

    /// True iff every column also holds each variable exactly once.
    pub fn is_latin(&self) -> bool {
        (0..self.n).all(|k| {
            let mut seen = vec![false; self.n];
            (0..self.n).all(|i| !std::mem::replace(&mut seen[self.get(i, k)], true))
        })
    }

    /// `n`, then `n` lines of 1-based variable indices.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let line: Vec<String> = self.row(i).iter().map(|v| (v + 1).to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty variable matrix".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad size line".into()))?;
        let entries = tokens
            .map(|t| match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::Parse(format!("bad variable index `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, entries)
    }
}

/// `A[i][k] = x_{(i + k) mod n}` (0-based): each row shifts the previous one left.
pub fn build_a(n: usize) -> Result<VarMatrix> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let entries = (0..n)
        .flat_map(|i| (0..n).map(move |k| (i + k) % n))
        .collect();
    VarMatrix::new(n, entries)
}

/// `B[j][l] = x_{σ((j + l) mod n)}` (0-based): the σ-permuted first row, shifted left per row.
pub fn build_b(n: usize, sigma: &Permutation) -> Result<VarMatrix> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if sigma.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: sigma.len(),
        });
    }
    let entries = (0..n)
        .flat_map(|j| (0..n).map(move |l| sigma.apply((j + l) % n)))
        .collect();
    VarMatrix::new(n, entries)
}

/// `P·B·Q` as a pattern: `result[i][k] = B[p(i)][q(k)]`.
pub fn apply_pq(b: &VarMatrix, p: &Permutation, q: &Permutation) -> Result<VarMatrix> {
    for perm in [p, q] {
        if perm.len() != b.n {
            return Err(Error::SizeMismatch {
                expected: b.n,
                actual: perm.len(),
            });
        }
    }
    let n = b.n;
    let entries = (0..n)
        .flat_map(|i| (0..n).map(move |k| b.get(p.apply(i), q.apply(k))))
        .collect();
    Ok(VarMatrix { n, entries })
}

/// Lexicographically smallest `(p, q)` with `apply_pq(b, p, q) == a`, if any.
///
/// Exhaustive over all pairs: fixing the row `p(0)` that supplies `A`'s first
/// row forces `q` (rows hold each variable once), and then every other `p(i)`
/// must be a row of `B` matching `A`'s row `i` under `q`. Taking the smallest
/// unused matching row each time yields the smallest `p` for that `q`.
pub fn exists_pq(a: &VarMatrix, b: &VarMatrix) -> Result<Option<(Permutation, Permutation)>> {
    if a.n != b.n {
        return Err(Error::SizeMismatch {
            expected: a.n,
            actual: b.n,
        });
    }
    let n = a.n;
    if n == 0 {
        return Ok(None);
    }
    for first in 0..n {
        // position of each variable in B's row `first`
        let mut pos = vec![0; n];
        for (l, &v) in b.row(first).iter().enumerate() {
            pos[v] = l;
        }
        let q_image: Vec<usize> = a.row(0).iter().map(|&v| pos[v]).collect();
        let mut used = vec![false; n];
        let mut p_image = Vec::with_capacity(n);
        for i in 0..n {
            let candidate = (0..n).find(|&r| {
                !used[r]
                    && (i != 0 || r == first)
                    && (0..n).all(|k| b.get(r, q_image[k]) == a.get(i, k))
            });
            match candidate {
                Some(r) => {
                    used[r] = true;
                    p_image.push(r);
                }
                None => break,
            }
        }
        if p_image.len() == n {
            return Ok(Some((
                Permutation::from_image(p_image)?,
                Permutation::from_image(q_image)?,
            )));
        }
    }
    Ok(None)
}
