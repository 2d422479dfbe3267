//! `phipsi`: build the `T(n, σ)` matrices, verify them end to end, and query
//! the Φ and Ψ membership oracles from the shell.

mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phipsi::counterexample::{
    build_t, distinct_t_count, full_verification, verify_many, Outcome, VerifyOptions,
};
use phipsi::exactmath::text::{parse_matrix, write_matrix};
use phipsi::permutations::{counterexample_count_formula, SnEnumerator, DEFAULT_SN_CAP};
use phipsi::polytopes::{
    build_phi_constraints, check_psi_farkas, induced_marginals, kron, phi_contains, psi_contains,
    vertex_check, FamilyReading, PsiMode, PsiOptions, PAIR_ENUMERATION_MAX_N,
};
use phipsi::symbolic::{build_a, build_b};
use phipsi::{Error, Permutation, RatMatrix, Rational};

#[derive(Parser, Debug)]
#[command(
    name = "phipsi",
    version,
    about = "Exact checks for the Φ/Ψ tensor polytope counterexamples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for enumeration and batch verification.
    #[arg(long, default_value_t = 1, global = true)]
    workers: usize,

    /// Largest n for which Sₙ may be enumerated.
    #[arg(long, default_value_t = DEFAULT_SN_CAP, global = true)]
    sn_cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Target {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "T", alias = "t")]
    T,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    SupportFiltered,
    Full,
}

#[derive(Args, Debug, Clone, Copy)]
struct LpFlags {
    /// Run the full exact LP cross-check (default for n ≤ 4; forces it above).
    #[arg(long, overrides_with = "no_lp")]
    lp: bool,
    /// Skip the LP cross-check.
    #[arg(long)]
    no_lp: bool,
}

impl LpFlags {
    fn choice(self) -> Option<bool> {
        match (self.lp, self.no_lp) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count σ passing the conjugacy filter and compare with n! − n·φ(n).
    CountSigmas {
        #[arg(long)]
        n: usize,
    },
    /// List σ passing the conjugacy filter.
    ListSigmas {
        #[arg(long)]
        n: usize,
    },
    /// Print A, B or T in the text matrix format.
    Build {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Run every verification stage for one σ.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: String,
        #[command(flatten)]
        lp: LpFlags,
        /// Use the alternate literal reading of constraint families 3 and 4.
        #[arg(long)]
        strict_families: bool,
    },
    /// Verify every σ passing the filter for the given n.
    VerifyAll {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        lp: LpFlags,
        #[arg(long)]
        strict_families: bool,
    },
    /// Decide membership of a matrix in Ψ(n,n).
    PsiOracle {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::SupportFiltered)]
        mode: Mode,
        /// Allow full mode above n = 4.
        #[arg(long)]
        allow_large: bool,
    },
    /// Check membership and vertexhood in Φ(n,n); optionally export the system.
    PhiCheck {
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        strict_families: bool,
        /// Directory to receive `phi_n<N>.txt`, `.mat` and `.labels`.
        #[arg(long)]
        export_system: Option<PathBuf>,
    },
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
enum Failure {
    /// A computed result contradicts an expected one or fails re-verification.
    Divergence(String),
    Usage(String),
    /// `verify` on a σ outside the filtered family.
    NotInFamily(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Divergence(_) => 1,
            Self::Usage(_) => 2,
            Self::NotInFamily(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Divergence(m) | Self::Usage(m) | Self::NotInFamily(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Solver(_) => Self::Divergence(e.to_string()),
            other => Self::Usage(other.to_string()),
        }
    }
}

/// Output of a command: the document to emit plus a possible failure that
/// still wants the document printed.
struct Emitted {
    body: String,
    failure: Option<Failure>,
}

impl Emitted {
    fn ok(body: String) -> Self {
        Self {
            body,
            failure: None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(emitted) => {
            if let Err(f) = write_output(cli.output.as_deref(), &emitted.body) {
                return report(&f);
            }
            match emitted.failure {
                None => ExitCode::SUCCESS,
                Some(f) => report(&f),
            }
        }
        Err(f) => report(&f),
    }
}

fn report(f: &Failure) -> ExitCode {
    eprintln!("error: {}", f.message());
    ExitCode::from(f.code())
}

fn write_output(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(p) => fs::write(p, body)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
    }
}

fn run(cli: &Cli) -> Result<Emitted, Failure> {
    let enumerator = SnEnumerator::new().cap(cli.sn_cap).workers(cli.workers);
    match &cli.command {
        Command::CountSigmas { n } => count_sigmas(cli, enumerator, *n),
        Command::ListSigmas { n } => {
            let n = positive(*n)?;
            let sigmas = enumerator.counterexample_sigmas(n)?;
            Ok(Emitted::ok(render::sigma_list(cli.format, n, &sigmas)))
        }
        Command::Build { target, n, sigma } => build(cli, *target, *n, sigma.as_deref()),
        Command::Verify {
            n,
            sigma,
            lp,
            strict_families,
        } => {
            let n = positive(*n)?;
            let sigma = parse_sigma(sigma, n)?;
            let options = VerifyOptions {
                run_lp: lp.choice(),
                reading: reading(*strict_families),
            };
            let report = full_verification(n, &sigma, options)?;
            let body = render::verification(cli.format, &report);
            let failure = match report.outcome {
                Outcome::Confirmed => None,
                Outcome::NotInFamily => Some(Failure::NotInFamily(format!(
                    "σ = {} is outside the family; first failed stage: {}",
                    report.sigma_cycles,
                    report.first_failed_stage.as_deref().unwrap_or("none")
                ))),
                Outcome::Divergence => Some(Failure::Divergence(format!(
                    "divergence at stage {}: {}",
                    report
                        .first_failed_stage
                        .as_deref()
                        .unwrap_or("cross-check"),
                    report.divergences.join("; ")
                ))),
            };
            Ok(Emitted { body, failure })
        }
        Command::VerifyAll {
            n,
            lp,
            strict_families,
        } => {
            let n = positive(*n)?;
            let sigmas = enumerator.counterexample_sigmas(n)?;
            let options = VerifyOptions {
                run_lp: lp.choice(),
                reading: reading(*strict_families),
            };
            let reports = verify_many(n, &sigmas, options, cli.workers)?;
            let distinct = distinct_t_count(n, &sigmas)?;
            let body = render::verification_batch(cli.format, n, &reports, distinct);
            let divergent: Vec<&str> = reports
                .iter()
                .filter(|r| r.outcome != Outcome::Confirmed)
                .map(|r| r.sigma_cycles.as_str())
                .collect();
            let failure = (!divergent.is_empty())
                .then(|| Failure::Divergence(format!("not confirmed: {}", divergent.join(", "))));
            Ok(Emitted { body, failure })
        }
        Command::PsiOracle {
            matrix,
            n,
            mode,
            allow_large,
        } => psi_oracle(cli, matrix, *n, *mode, *allow_large),
        Command::PhiCheck {
            matrix,
            n,
            strict_families,
            export_system,
        } => phi_check(
            cli,
            matrix.as_deref(),
            *n,
            reading(*strict_families),
            export_system.as_deref(),
        ),
    }
}

fn positive(n: usize) -> Result<usize, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    Ok(n)
}

fn parse_sigma(text: &str, n: usize) -> Result<Permutation, Failure> {
    Permutation::parse(text, n)
        .map_err(|e| Failure::Usage(format!("cannot parse --sigma `{text}`: {e}")))
}

fn reading(strict: bool) -> FamilyReading {
    if strict {
        FamilyReading::Literal
    } else {
        FamilyReading::Standard
    }
}

fn read_matrix(path: &Path) -> Result<RatMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn count_sigmas(cli: &Cli, enumerator: SnEnumerator, n: usize) -> Result<Emitted, Failure> {
    let n = positive(n)?;
    let count = enumerator.counterexample_sigmas(n)?.len();
    let formula = counterexample_count_formula(n);
    let body = render::count(cli.format, n, count, formula);
    let failure = (count != formula).then(|| {
        Failure::Divergence(format!(
            "enumeration gives {count}, formula gives {formula}"
        ))
    });
    Ok(Emitted { body, failure })
}

fn build(cli: &Cli, target: Target, n: usize, sigma: Option<&str>) -> Result<Emitted, Failure> {
    let n = positive(n)?;
    let sigma = match (target, sigma) {
        (Target::A, _) => None,
        (_, Some(s)) => Some(parse_sigma(s, n)?),
        (_, None) => {
            return Err(Failure::Usage(format!(
                "--sigma is required for target {target:?}"
            )))
        }
    };
    let body = match (target, &sigma) {
        (Target::A, _) => render::var_matrix(cli.format, "A", &build_a(n)?, None),
        (Target::B, Some(s)) => render::var_matrix(cli.format, "B", &build_b(n, s)?, Some(s)),
        (Target::T, Some(s)) => {
            let t: RatMatrix = build_t(n, s)?;
            match cli.format {
                Format::Text => write_matrix(&t),
                Format::Json => render::rat_matrix_json("T", n, Some(s), &t),
            }
        }
        _ => unreachable!("sigma checked above"),
    };
    Ok(Emitted::ok(body))
}

fn psi_oracle(
    cli: &Cli,
    path: &Path,
    n: usize,
    mode: Mode,
    allow_large: bool,
) -> Result<Emitted, Failure> {
    let n = positive(n)?;
    if n > PAIR_ENUMERATION_MAX_N {
        return Err(Failure::Usage(format!(
            "psi-oracle supports n ≤ {PAIR_ENUMERATION_MAX_N}"
        )));
    }
    let c = read_matrix(path)?;
    let options = PsiOptions {
        mode: match mode {
            Mode::SupportFiltered => PsiMode::SupportFiltered,
            Mode::Full => PsiMode::Full,
        },
        allow_large,
    };
    let result = psi_contains(&c, n, options)?;
    // independent re-check before anything is printed
    let verified = match (result.weights(), result.farkas()) {
        (Some(weights), _) => {
            let mut sum = RatMatrix::zeros(c.rows(), c.cols());
            let mut total = Rational::from_integer(0.into());
            for w in weights {
                sum = sum.add(&kron::<Rational>(&w.p, &w.q)?.scale(&w.weight))?;
                total += &w.weight;
            }
            sum == c && total == Rational::from_integer(1.into())
        }
        (None, Some(y)) => check_psi_farkas(&c, n, y)?,
        (None, None) => false,
    };
    if !verified {
        return Err(Failure::Divergence(
            "membership answer failed independent re-verification".into(),
        ));
    }
    Ok(Emitted::ok(render::membership(cli.format, n, &result)))
}

fn phi_check(
    cli: &Cli,
    path: Option<&Path>,
    n: usize,
    reading: FamilyReading,
    export: Option<&Path>,
) -> Result<Emitted, Failure> {
    let n = positive(n)?;
    let sys = build_phi_constraints::<Rational>(n, reading)?;
    let mut body = String::new();
    if let Some(dir) = export {
        let write = |name: String, text: String| {
            let p = dir.join(name);
            fs::write(&p, text)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))
        };
        write(format!("phi_n{n}.txt"), sys.to_text())?;
        write(format!("phi_n{n}.mat"), write_matrix(&sys.augmented()))?;
        write(format!("phi_n{n}.labels"), sys.labels.join("\n") + "\n")?;
    }
    match path {
        Some(path) => {
            let c = read_matrix(path)?;
            let check = phi_contains(&c, &sys)?;
            let (vertex, marginals) = if check.is_member() {
                (
                    Some(vertex_check(&c, &sys)?),
                    Some(induced_marginals(&c, n)?),
                )
            } else {
                (None, None)
            };
            body = render::phi(cli.format, n, &sys, &check, vertex, marginals.as_ref());
        }
        None if export.is_none() => {
            return Err(Failure::Usage(
                "phi-check needs --matrix, --export-system, or both".into(),
            ))
        }
        None => {}
    }
    Ok(Emitted::ok(body))
}
