//! `permsphere`: distances, sphere and ball counts, counting polynomials and
//! split-type tables for symmetric groups.

mod output;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use permsphere::enumeration::{DEFAULT_CONFIRM_ABOVE, DEFAULT_MAX_DEGREE};
use permsphere::{
    ball_polynomial, run_verify, sphere_polynomial, Basis, EnumConfig, EnumError, Enumerator,
    Method, Metric, Permutation, Radius, VerifyOptions,
};

use crate::output::{Format, Printer};

const METRIC_HELP: &str = "l1, lp:<p>, linf, hamming, cayley or kendall";

const RADIUS_HELP: &str =
    "Radius in the metric's native integer scale. For lp:<p> this is the p-th power \
                           sum of |u(i) - i|^p, so every count stays exact";

#[derive(Debug, Parser)]
#[command(
    name = "permsphere",
    version,
    about = "Exact sphere and ball sizes in symmetric groups"
)]
struct Cli {
    /// Output format. json prints one document per invocation; csv has a header row.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads for exhaustive enumeration (default: all cores).
    #[arg(long, env = "PERMSPHERE_THREADS", global = true)]
    threads: Option<usize>,

    /// Largest degree m for which S_m may be enumerated.
    #[arg(long, env = "PERMSPHERE_MAX_ENUM_DEGREE", default_value_t = DEFAULT_MAX_DEGREE, global = true)]
    max_enum_degree: usize,

    /// Confirm enumerations of S_m above degree 10 (more than 39 916 800 elements).
    #[arg(long, global = true)]
    allow_large_enum: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance of a permutation from the identity, or between two permutations.
    Dist(DistArgs),
    /// Number of permutations at exactly a given distance from the identity.
    Sphere(CountArgs),
    /// Number of permutations within a given distance of the identity.
    Ball(CountArgs),
    /// Split-type counts beta(R, m, q) for an additive metric.
    Beta(BetaArgs),
    /// Sphere or ball counting polynomial in n.
    Poly(PolyArgs),
    /// Run the cross-validation matrix; exits nonzero only on an internal mismatch.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct DistArgs {
    #[arg(long, help = METRIC_HELP)]
    metric: Metric,
    /// One-line notation, e.g. "1 4 3 2" or "1,4,3,2".
    #[arg(long)]
    perm: Permutation,
    /// Second permutation; prints D(perm, perm2) when given.
    #[arg(long)]
    perm2: Option<Permutation>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Pipeline,
    Oracle,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Pipeline => Method::Pipeline,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Both => Method::Both,
        }
    }
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long, help = METRIC_HELP)]
    metric: Metric,
    #[arg(long)]
    n: usize,
    #[arg(long, help = RADIUS_HELP)]
    radius: u64,
    /// pipeline needs an additive metric; oracle enumerates S_n.
    #[arg(long, value_enum, default_value_t = MethodArg::Pipeline)]
    method: MethodArg,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("size").required(true).args(["k", "radius"])))]
struct BetaArgs {
    #[arg(long, help = METRIC_HELP)]
    metric: Metric,
    /// Radius in steps: R = 2k for l1 and lp:1, R = k otherwise.
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, help = RADIUS_HELP)]
    radius: Option<u64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BasisArg {
    Binomial,
    Monomial,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolyKind {
    Sphere,
    Ball,
}

#[derive(Debug, Args)]
struct PolyArgs {
    #[arg(long, help = METRIC_HELP)]
    metric: Metric,
    #[arg(long, help = RADIUS_HELP)]
    radius: u64,
    #[arg(long, value_enum, default_value_t = BasisArg::Binomial)]
    basis: BasisArg,
    #[arg(long, value_enum, default_value_t = PolyKind::Sphere)]
    kind: PolyKind,
    /// Evaluate at n with the guard [a choose q] = 0 for a < 0.
    #[arg(long)]
    eval: Option<u64>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 6)]
    max_k: usize,
    /// Also compare against the reference P_6, whose [n-5 choose 2] coefficient is disputed.
    #[arg(long)]
    include_printed_p6: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if let Some(EnumError::NeedsConfirmation { .. }) = err.downcast_ref::<EnumError>() {
                eprintln!("hint: pass --allow-large-enum to proceed");
            }
            ExitCode::FAILURE
        }
    }
}

fn enumerator(cli: &Cli) -> Result<Enumerator> {
    let config = EnumConfig {
        max_degree: cli.max_enum_degree,
        confirm_above: DEFAULT_CONFIRM_ABOVE,
        allow_large: cli.allow_large_enum,
        threads: cli.threads,
    };
    Enumerator::try_new(config).context("setting up the enumerator")
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let out = Printer::new(cli.format);
    match &cli.command {
        Command::Dist(a) => {
            let d = match &a.perm2 {
                Some(v) => a.metric.distance(&a.perm, v),
                None => a.metric.distance_to_identity(&a.perm),
            };
            out.distance(a.metric, &a.perm, a.perm2.as_ref(), d)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sphere(a) | Command::Ball(a) => {
            let e = enumerator(cli)?;
            let radius = Radius(a.radius);
            let report = if matches!(cli.command, Command::Sphere(_)) {
                e.sphere_report(a.metric, a.n, radius, a.method.into())?
            } else {
                e.ball_report(a.metric, a.n, radius, a.method.into())?
            };
            out.count(&report)?;
            Ok(if report.matched == Some(false) {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Beta(a) => {
            let e = enumerator(cli)?;
            let radius = Radius(match (a.k, a.radius) {
                (Some(k), None) => k * a.metric.radius_step(),
                (None, Some(r)) => r,
                _ => bail!("give exactly one of --k and --radius"),
            });
            let rows = match (a.m, a.q) {
                (Some(m), Some(q)) => vec![(m, q, e.beta(a.metric, radius, m, q)?)],
                _ => {
                    let bound = a.metric.growth_bound(radius).unwrap_or(0) as usize;
                    let table = e.beta_table(a.metric, radius, 2 * bound)?;
                    let mut rows = table.nonzero_at(radius)?;
                    rows.retain(|(m, q, _)| {
                        a.m.is_none_or(|x| x == *m) && a.q.is_none_or(|x| x == *q)
                    });
                    rows
                }
            };
            out.beta(radius, &rows, a.m.is_some() && a.q.is_some())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Poly(a) => {
            let e = enumerator(cli)?;
            let radius = Radius(a.radius);
            let poly = match a.kind {
                PolyKind::Sphere => sphere_polynomial(&e, a.metric, radius)?,
                PolyKind::Ball => ball_polynomial(&e, a.metric, radius)?,
            };
            match a.eval {
                Some(n) => out.evaluation(a.metric, radius, n, &poly.eval_guarded(n))?,
                None => {
                    let basis = match a.basis {
                        BasisArg::Binomial => Basis::Binomial,
                        BasisArg::Monomial => Basis::Monomial,
                    };
                    out.polynomial(&poly, basis)?
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(a) => {
            let e = enumerator(cli)?;
            let options = VerifyOptions {
                max_n: a.max_n,
                max_k: a.max_k,
                include_printed_p6: a.include_printed_p6,
            };
            let report = run_verify(&e, options)?;
            out.verify(&report)?;
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
