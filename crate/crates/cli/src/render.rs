//! Text and JSON renderings. JSON is the stable machine format; text is for
//! people and may change.

use std::fmt::Write;

use phipsi::counterexample::{Outcome, PsiLpStatus, VerificationReport};
use phipsi::polytopes::{MembershipResult, PhiCheck, VertexCheck};
use phipsi::symbolic::VarMatrix;
use phipsi::{ConstraintSystem, Permutation, RatMatrix, Rational};
use serde::Serialize;

use crate::Format;

fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn rows_of_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect())
        .collect()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn count(format: Format, n: usize, enumerated: usize, formula: usize) -> String {
    match format {
        Format::Text => {
            let rel = if enumerated == formula { "=" } else { "!=" };
            format!("{enumerated} {rel} {formula}\n")
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Count {
                n: usize,
                enumerated: usize,
                formula: usize,
                matches: bool,
            }
            to_json(&Count {
                n,
                enumerated,
                formula,
                matches: enumerated == formula,
            })
        }
    }
}

pub fn sigma_list(format: Format, n: usize, sigmas: &[Permutation]) -> String {
    match format {
        Format::Text => sigmas
            .iter()
            .map(|s| format!("{}\t{}\n", s.cycle_notation(), s))
            .collect(),
        Format::Json => {
            #[derive(Serialize)]
            struct Entry<'a> {
                cycles: String,
                image: &'a Permutation,
            }
            #[derive(Serialize)]
            struct List<'a> {
                n: usize,
                count: usize,
                sigmas: Vec<Entry<'a>>,
            }
            to_json(&List {
                n,
                count: sigmas.len(),
                sigmas: sigmas
                    .iter()
                    .map(|s| Entry {
                        cycles: s.cycle_notation(),
                        image: s,
                    })
                    .collect(),
            })
        }
    }
}

pub fn var_matrix(
    format: Format,
    name: &str,
    m: &VarMatrix,
    sigma: Option<&Permutation>,
) -> String {
    match format {
        Format::Text => m.to_text(),
        Format::Json => {
            #[derive(Serialize)]
            struct Vars<'a> {
                target: &'a str,
                n: usize,
                sigma: Option<&'a Permutation>,
                /// 1-based variable indices
                rows: Vec<Vec<usize>>,
            }
            to_json(&Vars {
                target: name,
                n: m.n(),
                sigma,
                rows: (0..m.n())
                    .map(|i| m.row(i).iter().map(|v| v + 1).collect())
                    .collect(),
            })
        }
    }
}

pub fn rat_matrix_json(name: &str, n: usize, sigma: Option<&Permutation>, m: &RatMatrix) -> String {
    #[derive(Serialize)]
    struct Rat<'a> {
        target: &'a str,
        n: usize,
        sigma: Option<&'a Permutation>,
        rows: Vec<Vec<String>>,
    }
    to_json(&Rat {
        target: name,
        n,
        sigma,
        rows: rows_of_strings(m),
    })
}

fn lp_status(s: PsiLpStatus) -> &'static str {
    match s {
        PsiLpStatus::InfeasibleCertified => "infeasible_certified",
        PsiLpStatus::Feasible => "feasible",
        PsiLpStatus::Skipped => "skipped",
        PsiLpStatus::Failed => "failed",
    }
}

fn outcome(o: Outcome) -> &'static str {
    match o {
        Outcome::Confirmed => "confirmed",
        Outcome::NotInFamily => "not_in_family",
        Outcome::Divergence => "divergence",
    }
}

pub fn verification(format: Format, r: &VerificationReport) -> String {
    match format {
        Format::Json => to_json(r),
        Format::Text => {
            let mut out = String::new();
            let pass = |b: bool| if b { "pass" } else { "FAIL" };
            writeln!(out, "n = {}, sigma = {} [{}]", r.n, r.sigma_cycles, r.sigma).unwrap();
            writeln!(out, "conjugate σρσ⁻¹ = [{}]", r.conjugate).unwrap();
            writeln!(out, "lemma1             {}", pass(r.lemma1_pass)).unwrap();
            let witness = r
                .pq_witness
                .as_ref()
                .map(|w| format!(" (p = [{}], q = [{}])", w.p, w.q))
                .unwrap_or_default();
            writeln!(out, "lemma2             {}{witness}", pass(r.lemma2_pass)).unwrap();
            writeln!(out, "transfer_identity  {}", pass(r.transfer_identity_pass)).unwrap();
            writeln!(out, "block_structure    {}", pass(r.block_structure_pass)).unwrap();
            writeln!(
                out,
                "phi_membership     {} ({} rows)",
                pass(r.in_phi),
                r.constraint_rows
            )
            .unwrap();
            let rank = r
                .support_rank
                .map(|k| format!(" (rank {k} of support {})", r.support_size))
                .unwrap_or_default();
            writeln!(
                out,
                "phi_vertex         {}{rank}",
                pass(r.is_vertex == Some(true))
            )
            .unwrap();
            writeln!(out, "psi_certificate    {}", pass(r.psi_certificate_pass)).unwrap();
            let cols = r
                .psi_lp_columns
                .map(|c| format!(" ({c} columns)"))
                .unwrap_or_default();
            writeln!(
                out,
                "psi_lp             {}{cols}",
                lp_status(r.psi_lp_status)
            )
            .unwrap();
            for d in &r.divergences {
                writeln!(out, "divergence: {d}").unwrap();
            }
            writeln!(out, "outcome: {}", outcome(r.outcome)).unwrap();
            out
        }
    }
}

pub fn verification_batch(
    format: Format,
    n: usize,
    reports: &[VerificationReport],
    distinct_t: usize,
) -> String {
    let confirmed = reports
        .iter()
        .filter(|r| r.outcome == Outcome::Confirmed)
        .count();
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Batch<'a> {
                n: usize,
                count: usize,
                confirmed: usize,
                distinct_t: usize,
                reports: &'a [VerificationReport],
            }
            to_json(&Batch {
                n,
                count: reports.len(),
                confirmed,
                distinct_t,
                reports,
            })
        }
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                writeln!(
                    out,
                    "{:<16} {:<14} rank {}/{}  lp {}",
                    r.sigma_cycles,
                    outcome(r.outcome),
                    r.support_rank.map_or("-".into(), |k| k.to_string()),
                    r.support_size,
                    lp_status(r.psi_lp_status)
                )
                .unwrap();
            }
            writeln!(
                out,
                "{} sigma(s), {confirmed} confirmed, {distinct_t} distinct T",
                reports.len()
            )
            .unwrap();
            out
        }
    }
}

pub fn membership(format: Format, n: usize, res: &MembershipResult<Rational>) -> String {
    #[derive(Serialize)]
    struct Weight<'a> {
        p: &'a Permutation,
        q: &'a Permutation,
        weight: String,
    }
    #[derive(Serialize)]
    struct Membership<'a> {
        n: usize,
        mode: phipsi::polytopes::PsiMode,
        admissible_columns: usize,
        verdict: &'static str,
        verified: bool,
        weights: Option<Vec<Weight<'a>>>,
        farkas: Option<Vec<String>>,
    }
    let weights = res.weights().map(|ws| {
        ws.iter()
            .map(|w| Weight {
                p: &w.p,
                q: &w.q,
                weight: w.weight.to_string(),
            })
            .collect::<Vec<_>>()
    });
    match format {
        Format::Json => to_json(&Membership {
            n,
            mode: res.mode,
            admissible_columns: res.admissible_columns,
            verdict: if res.in_psi() { "in" } else { "out" },
            verified: true,
            weights,
            farkas: res.farkas().map(strings),
        }),
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "{}", if res.in_psi() { "in" } else { "out" }).unwrap();
            writeln!(out, "admissible columns: {}", res.admissible_columns).unwrap();
            if let Some(ws) = weights {
                writeln!(out, "weights ({}):", ws.len()).unwrap();
                for w in ws {
                    writeln!(out, "  {}  p = [{}]  q = [{}]", w.weight, w.p, w.q).unwrap();
                }
            }
            if let Some(y) = res.farkas() {
                writeln!(out, "farkas certificate: verified").unwrap();
                writeln!(out, "  {}", strings(y).join(" ")).unwrap();
            }
            out
        }
    }
}

pub fn phi(
    format: Format,
    n: usize,
    sys: &ConstraintSystem,
    check: &PhiCheck<Rational>,
    vertex: Option<VertexCheck>,
    marginals: Option<&(RatMatrix, RatMatrix)>,
) -> String {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Violation<'a> {
                label: &'a str,
                residual: String,
            }
            #[derive(Serialize)]
            struct Marginals {
                alpha: Vec<Vec<String>>,
                beta: Vec<Vec<String>>,
            }
            #[derive(Serialize)]
            struct Phi<'a> {
                n: usize,
                rows: usize,
                member: bool,
                negative_entries: &'a [(usize, usize)],
                violations: Vec<Violation<'a>>,
                support_size: Option<usize>,
                support_rank: Option<usize>,
                is_vertex: Option<bool>,
                marginals: Option<Marginals>,
            }
            to_json(&Phi {
                n,
                rows: sys.rows(),
                member: check.is_member(),
                negative_entries: &check.negative_entries,
                violations: check
                    .violations
                    .iter()
                    .map(|v| Violation {
                        label: &v.label,
                        residual: v.residual.to_string(),
                    })
                    .collect(),
                support_size: vertex.map(|v| v.support_size),
                support_rank: vertex.map(|v| v.support_rank),
                is_vertex: vertex.map(|v| v.is_vertex()),
                marginals: marginals.map(|(a, b)| Marginals {
                    alpha: rows_of_strings(a),
                    beta: rows_of_strings(b),
                }),
            })
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "member: {} ({} rows)",
                yes_no(check.is_member()),
                sys.rows()
            )
            .unwrap();
            for (r, c) in &check.negative_entries {
                writeln!(out, "negative entry at ({}, {})", r + 1, c + 1).unwrap();
            }
            for v in &check.violations {
                writeln!(out, "violated {} residual {}", v.label, v.residual).unwrap();
            }
            if let Some(v) = vertex {
                writeln!(
                    out,
                    "vertex: {} (support {}, rank {})",
                    yes_no(v.is_vertex()),
                    v.support_size,
                    v.support_rank
                )
                .unwrap();
            }
            out
        }
    }
}
