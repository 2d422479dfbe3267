//! The matrices `T(n, σ)` with `vec(A) = T·vec(B)` and the end-to-end check
//! that each one is a vertex of `Φ(n,n)` lying outside `Ψ(n,n)`.

use std::collections::{BTreeMap, HashSet};
use std::thread;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::lp::check_farkas_sparse;
use crate::exactmath::{from_count, Matrix, Scalar};
use crate::permutations::{cyclic, is_counterexample_sigma, Permutation};
use crate::polytopes::{
    build_phi_constraints, kronecker_pairs, phi_contains, psi_contains, psi_system,
    support_contained_pairs, vertex_check, FamilyReading, PsiMode, PsiOptions, TensorIndex,
    FULL_MODE_DEFAULT_MAX_N,
};
use crate::symbolic::{build_a, build_b, exists_pq};
use crate::{RatMatrix, Rational};

/// `T[(i,k),(j,l)] = 1/n` iff `B[j][l]` and `A[i][k]` hold the same variable.
pub fn build_t<T: Scalar>(n: usize, sigma: &Permutation) -> Result<Matrix<T>> {
    let a = build_a(n)?;
    let b = build_b(n, sigma)?;
    let idx = TensorIndex::new(n);
    let share = T::one() / from_count::<T>(n);
    let mut t = Matrix::zeros(idx.dim(), idx.dim());
    for (row, &va) in a.flat().iter().enumerate() {
        for (col, &vb) in b.flat().iter().enumerate() {
            if va == vb {
                t[(row, col)] = share.clone();
            }
        }
    }
    Ok(t)
}

/// Checks `u_m = T·v_m` for the indicator vectors of every variable `x_m` in
/// `A` and `B`. Entries are single variables, so these `n` substitutions
/// prove the identity for all `x`.
pub fn verify_transfer_identity<T: Scalar>(
    t: &Matrix<T>,
    n: usize,
    sigma: &Permutation,
) -> Result<bool> {
    let a = build_a(n)?;
    let b = build_b(n, sigma)?;
    let dim = n * n;
    if t.rows() != dim || t.cols() != dim {
        return Ok(false);
    }
    for var in 0..n {
        let indicator = |cells: &[usize]| -> Vec<T> {
            cells
                .iter()
                .map(|&v| if v == var { T::one() } else { T::zero() })
                .collect()
        };
        if t.mul_vec(&indicator(b.flat()))? != indicator(a.flat()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Slice checks over the four ways of fixing one row index and one column index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BlockReport {
    pub slices_checked: usize,
    pub failing: Vec<String>,
}

impl BlockReport {
    pub fn passed(&self) -> bool {
        self.failing.is_empty()
    }
}

/// Every slice of `T` obtained by fixing `(i,j)`, `(k,l)`, `(i,l)` or `(k,j)`
/// must be `1/n` times a permutation matrix.
pub fn block_structure_report<T: Scalar>(t: &Matrix<T>, n: usize) -> BlockReport {
    let idx = TensorIndex::new(n);
    let mut report = BlockReport::default();
    if t.rows() != idx.dim() || t.cols() != idx.dim() {
        report.failing.push("shape".into());
        return report;
    }
    let share = T::one() / from_count::<T>(n.max(1));
    // (name, entry accessor for fixed (a,b) and free (r,s))
    type Accessor = fn(usize, usize, usize, usize) -> (usize, usize, usize, usize);
    let families: [(&str, Accessor); 4] = [
        ("fixed (i,j)", |i, j, k, l| (i, k, j, l)),
        ("fixed (k,l)", |k, l, i, j| (i, k, j, l)),
        ("fixed (i,l)", |i, l, k, j| (i, k, j, l)),
        ("fixed (k,j)", |k, j, i, l| (i, k, j, l)),
    ];
    for (name, entry) in families {
        for a in 0..n {
            for b in 0..n {
                report.slices_checked += 1;
                let slice = |r: usize, s: usize| {
                    let (i, k, j, l) = entry(a, b, r, s);
                    &t[(idx.flat(i, k), idx.flat(j, l))]
                };
                if !is_scaled_permutation(n, &share, slice) {
                    report
                        .failing
                        .push(format!("{name} = ({}, {})", a + 1, b + 1));
                }
            }
        }
    }
    report
}

fn is_scaled_permutation<'a, T: Scalar + 'a>(
    n: usize,
    share: &T,
    slice: impl Fn(usize, usize) -> &'a T,
) -> bool {
    let mut col_hits = vec![0usize; n];
    for r in 0..n {
        let mut row_hits = 0;
        for (s, hits) in col_hits.iter_mut().enumerate() {
            let v = slice(r, s);
            if v.is_zero() {
                continue;
            }
            if v != share {
                return false;
            }
            row_hits += 1;
            *hits += 1;
        }
        if row_hits != 1 {
            return false;
        }
    }
    col_hits.iter().all(|&h| h == 1)
}

/// True iff no Kronecker vertex `P ⊗ Q` fits inside the support of `t`; then
/// every convex decomposition would put zero weight on every vertex.
pub fn certify_not_in_psi<T: Scalar>(t: &Matrix<T>, n: usize) -> Result<bool> {
    Ok(support_contained_pairs(t, n)?.is_empty())
}

/// Number of distinct matrices among `T(n, σ)` for the given `σ`.
pub fn distinct_t_count(n: usize, sigmas: &[Permutation]) -> Result<usize> {
    let mut seen = HashSet::new();
    for sigma in sigmas {
        seen.insert(build_t::<Rational>(n, sigma)?.support());
    }
    Ok(seen.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiLpStatus {
    InfeasibleCertified,
    Feasible,
    Skipped,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// `σ` is in the family and every stage confirmed the theorem.
    Confirmed,
    /// `σ` fails the conjugacy filter; later stages are informational.
    NotInFamily,
    /// Some stage contradicted the expected result or another oracle.
    Divergence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PqPair {
    pub p: Permutation,
    pub q: Permutation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub sigma: Permutation,
    pub sigma_cycles: String,
    /// `σρσ⁻¹`
    pub conjugate: Permutation,
    pub lemma1_pass: bool,
    /// True iff no `(p, q)` gives `A = P·B·Q`.
    pub lemma2_pass: bool,
    pub pq_witness: Option<PqPair>,
    pub transfer_identity_pass: bool,
    pub block_structure_pass: bool,
    pub block_failures: Vec<String>,
    pub in_phi: bool,
    pub phi_violations: Vec<String>,
    pub constraint_rows: usize,
    pub is_vertex: Option<bool>,
    pub support_size: usize,
    pub support_rank: Option<usize>,
    pub psi_certificate_pass: bool,
    /// The support scan and the pattern search agree on whether a vertex fits.
    pub support_scan_agrees: bool,
    pub psi_lp_status: PsiLpStatus,
    pub psi_lp_columns: Option<usize>,
    pub psi_lp_certificate_verified: Option<bool>,
    pub psi_lp_weights: Option<usize>,
    pub first_failed_stage: Option<String>,
    pub stage_errors: Vec<StageError>,
    pub divergences: Vec<String>,
    pub outcome: Outcome,
    pub timings_ms: BTreeMap<String, f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// `None` runs the full LP for `n ≤ 4` only; `Some(true)` forces it at any `n`.
    pub run_lp: Option<bool>,
    pub reading: FamilyReading,
}

impl VerifyOptions {
    pub fn lp_enabled(&self, n: usize) -> bool {
        self.run_lp.unwrap_or(n <= FULL_MODE_DEFAULT_MAX_N)
    }
}

struct Timer(BTreeMap<String, f64>);

impl Timer {
    fn run<R>(&mut self, stage: &str, f: impl FnOnce() -> R) -> R {
        let start = Instant::now();
        let out = f();
        self.0
            .insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }
}

/// Runs every stage for one `σ` and collects the outcome. Stage failures are
/// recorded in the report rather than aborting it.
pub fn full_verification(
    n: usize,
    sigma: &Permutation,
    options: VerifyOptions,
) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if sigma.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: sigma.len(),
        });
    }
    let mut timer = Timer(BTreeMap::new());
    let mut stage_errors = Vec::new();
    let mut record = |stage: &str, e: Error| {
        stage_errors.push(StageError {
            stage: stage.into(),
            message: e.to_string(),
        })
    };

    let rho = cyclic(n)?;
    let conjugate = sigma.conjugate(&rho)?;
    let lemma1_pass = timer.run("lemma1", || is_counterexample_sigma(sigma));

    let pq = timer.run("lemma2", || exists_pq(&build_a(n)?, &build_b(n, sigma)?))?;
    let lemma2_pass = pq.is_none();

    let t: RatMatrix = timer.run("build_t", || build_t(n, sigma))?;
    let transfer_identity_pass = timer.run("transfer_identity", || {
        verify_transfer_identity(&t, n, sigma)
    })?;
    let blocks = timer.run("block_structure", || block_structure_report(&t, n));

    let sys = timer.run("phi_constraints", || {
        build_phi_constraints::<Rational>(n, options.reading)
    })?;
    let phi = timer.run("phi_membership", || phi_contains(&t, &sys))?;
    let in_phi = phi.is_member();
    let (is_vertex, support_rank) = if in_phi {
        match timer.run("phi_vertex", || vertex_check(&t, &sys)) {
            Ok(v) => (Some(v.is_vertex()), Some(v.support_rank)),
            Err(e) => {
                record("phi_vertex", e);
                (None, None)
            }
        }
    } else {
        (None, None)
    };

    let psi_certificate_pass = timer.run("psi_certificate", || certify_not_in_psi(&t, n))?;
    let support_scan_agrees = psi_certificate_pass == lemma2_pass;

    let mut psi_lp_status = PsiLpStatus::Skipped;
    let mut psi_lp_columns = None;
    let mut psi_lp_certificate_verified = None;
    let mut psi_lp_weights = None;
    if options.lp_enabled(n) {
        let lp_options = PsiOptions {
            mode: PsiMode::Full,
            allow_large: options.run_lp == Some(true),
        };
        let outcome = timer.run("psi_lp", || -> Result<_> {
            let res = psi_contains(&t, n, lp_options)?;
            let verified = match res.farkas() {
                Some(y) => {
                    let (system, rhs) = psi_system(&t, n, &kronecker_pairs(n)?)?;
                    Some(check_farkas_sparse(&system, &rhs, y)?)
                }
                None => None,
            };
            Ok((res, verified))
        });
        match outcome {
            Ok((res, verified)) => {
                psi_lp_columns = Some(res.admissible_columns);
                psi_lp_certificate_verified = verified;
                psi_lp_weights = res.weights().map(<[_]>::len);
                psi_lp_status = match (res.in_psi(), verified) {
                    (true, _) => PsiLpStatus::Feasible,
                    (false, Some(true)) => PsiLpStatus::InfeasibleCertified,
                    (false, _) => PsiLpStatus::Failed,
                };
            }
            Err(e) => {
                record("psi_lp", e);
                psi_lp_status = PsiLpStatus::Failed;
            }
        }
    }

    let mut divergences = Vec::new();
    if !transfer_identity_pass {
        divergences.push("T does not satisfy vec(A) = T·vec(B)".into());
    }
    if !support_scan_agrees {
        divergences
            .push("support scan and A = P·B·Q search disagree on support containment".into());
    }
    if psi_certificate_pass && psi_lp_status == PsiLpStatus::Feasible {
        divergences.push("support certificate excludes T from Psi but the LP found weights".into());
    }
    if !psi_certificate_pass && psi_lp_status == PsiLpStatus::InfeasibleCertified {
        divergences.push("support certificate and LP verdict disagree".into());
    }
    if psi_lp_status == PsiLpStatus::Failed {
        divergences.push("LP cross-check failed to produce a verified verdict".into());
    }
    for e in &stage_errors {
        divergences.push(format!("stage {} errored: {}", e.stage, e.message));
    }
    if lemma1_pass {
        let expectations = [
            (lemma2_pass, "lemma2: A = P·B·Q has a solution"),
            (
                blocks.passed(),
                "block structure: a slice is not a scaled permutation",
            ),
            (in_phi, "phi membership: T violates a constraint"),
            (
                is_vertex == Some(true),
                "phi vertex: support columns are dependent",
            ),
            (
                psi_certificate_pass,
                "psi certificate: a vertex fits inside supp(T)",
            ),
        ];
        for (ok, message) in expectations {
            if !ok {
                divergences.push(message.into());
            }
        }
    }

    let stages = [
        ("lemma1", lemma1_pass),
        ("lemma2", lemma2_pass),
        ("transfer_identity", transfer_identity_pass),
        ("block_structure", blocks.passed()),
        ("phi_membership", in_phi),
        ("phi_vertex", is_vertex == Some(true)),
        ("psi_certificate", psi_certificate_pass),
        (
            "psi_lp",
            matches!(
                psi_lp_status,
                PsiLpStatus::InfeasibleCertified | PsiLpStatus::Skipped
            ),
        ),
    ];
    let first_failed_stage = stages
        .iter()
        .find(|(_, ok)| !ok)
        .map(|(name, _)| name.to_string());

    let outcome = if !divergences.is_empty() {
        Outcome::Divergence
    } else if lemma1_pass {
        Outcome::Confirmed
    } else {
        Outcome::NotInFamily
    };

    Ok(VerificationReport {
        n,
        sigma: sigma.clone(),
        sigma_cycles: sigma.cycle_notation(),
        conjugate,
        lemma1_pass,
        lemma2_pass,
        pq_witness: pq.map(|(p, q)| PqPair { p, q }),
        transfer_identity_pass,
        block_structure_pass: blocks.passed(),
        block_failures: blocks.failing,
        in_phi,
        phi_violations: phi.violations.iter().map(|v| v.label.clone()).collect(),
        constraint_rows: sys.rows(),
        is_vertex,
        support_size: t.support().len(),
        support_rank,
        psi_certificate_pass,
        support_scan_agrees,
        psi_lp_status,
        psi_lp_columns,
        psi_lp_certificate_verified,
        psi_lp_weights,
        first_failed_stage,
        stage_errors,
        divergences,
        outcome,
        timings_ms: timer.0,
    })
}

/// Verifies every `σ` in `sigmas`, in parallel, returning reports in input order.
pub fn verify_many(
    n: usize,
    sigmas: &[Permutation],
    options: VerifyOptions,
    workers: usize,
) -> Result<Vec<VerificationReport>> {
    let workers = workers.max(1);
    if workers == 1 || sigmas.len() <= 1 {
        return sigmas
            .iter()
            .map(|s| full_verification(n, s, options))
            .collect();
    }
    let chunk = sigmas.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = sigmas
            .chunks(chunk)
            .map(|group| {
                scope.spawn(move || {
                    group
                        .iter()
                        .map(|s| full_verification(n, s, options))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(sigmas.len());
        for h in handles {
            out.extend(h.join().expect("verification worker panicked")?);
        }
        Ok(out)
    })
}
