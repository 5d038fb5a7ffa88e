//! Command-line surface for the primitive-root density calculator: exact
//! closed forms, the enumeration engine, and sieve verification, with JSON,
//! table, CSV and JSONL reporting.

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use artin::densities::{
    closed_form_correction, closed_form_density, ExactDensity, ProblemSpec, VanishingVerdict,
};
use artin::finite_model::{delta_exact, DeltaExactReport, EnumerationBudget};
use artin::numtheory::gcd_u64;
use artin::sieve::{run_experiment, EmpiricalReport, SieveConfig};

mod report;
use report::{EmpiricalSection, PrimeRow, Report, SpecEcho};

const EXIT_INVALID_INPUT: i32 = 2;
const EXIT_INCONSISTENT: i32 = 3;
const EXIT_BUDGET: i32 = 4;

#[derive(Parser)]
#[command(name = "artin", about = "Exact and empirical primitive-root densities", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact density of primes with the requested primitive-root behaviour
    Density(DensityArgs),
    /// Sieve primes and compare observed counts with the prediction
    Verify(VerifyArgs),
    /// Cross-product sweep over progressions and indices
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SpecArgs {
    /// Rational r, as an integer or "p/q" (negative allowed), r != 0, ±1
    #[arg(long)]
    r: String,
    /// Progression residue a (requires --f)
    #[arg(long, requires = "f")]
    a: Option<i64>,
    /// Progression modulus f (requires --a)
    #[arg(long, requires = "a")]
    f: Option<u64>,
    /// Requested index of the generated subgroup
    #[arg(long, default_value_t = 1)]
    t: u64,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Also run the enumeration engine and require exact agreement
    #[arg(long)]
    check_oracle: bool,
    #[arg(long, value_parser = ["json", "table"], default_value = "table")]
    format: String,
    /// Write the report here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Count primes up to this bound
    #[arg(long)]
    bound: u64,
    #[arg(long, default_value_t = 4)]
    workers: usize,
    #[arg(long, default_value_t = 1 << 18)]
    segment_size: u64,
    #[arg(long, value_parser = ["json", "table"], default_value = "table")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated rationals (may be empty)
    #[arg(long, default_value = "")]
    r_list: String,
    #[arg(long, default_value_t = 1)]
    f_max: u64,
    #[arg(long, default_value_t = 1)]
    t_max: u64,
    #[arg(long, value_parser = ["csv", "jsonl"], default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Density(args) => cmd_density(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    if let Err(failure) = outcome {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID_INPUT,
            message: message.into(),
        }
    }

    fn inconsistent(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INCONSISTENT,
            message: message.into(),
        }
    }
}

fn map_lib_error(err: artin::Error) -> Failure {
    let code = match &err {
        artin::Error::BudgetExceeded { .. } => EXIT_BUDGET,
        artin::Error::NotStabilized { .. }
        | artin::Error::OracleMismatch(_)
        | artin::Error::LevelMismatch(..) => EXIT_INCONSISTENT,
        _ => EXIT_INVALID_INPUT,
    };
    Failure {
        code,
        message: err.to_string(),
    }
}

fn parse_rational(text: &str) -> Result<BigRational, Failure> {
    let make = |num: &str, den: &str| -> Option<BigRational> {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    };
    let parsed = match text.split_once('/') {
        Some((num, den)) => make(num, den),
        None => make(text, "1"),
    };
    parsed.ok_or_else(|| Failure::invalid(format!("cannot parse rational {text:?}")))
}

fn build_spec(args: &SpecArgs) -> Result<ProblemSpec, Failure> {
    let r = parse_rational(&args.r)?;
    let progression = match (args.a, args.f) {
        (Some(a), Some(f)) => Some((a, f)),
        _ => None,
    };
    let spec = ProblemSpec::new(r, progression, args.t).map_err(map_lib_error)?;
    if !spec.combined_constraints_ok() {
        return Err(Failure::invalid(
            "combined problems require t | f and a ≡ 1 mod t",
        ));
    }
    Ok(spec)
}

fn engine_section(engine: &DeltaExactReport) -> (Vec<PrimeRow>, Option<u64>) {
    let rows = engine
        .per_prime
        .iter()
        .map(|local| PrimeRow {
            p: local.p,
            level: local.level,
            nu: local.nu.to_string(),
            e_p: local.e_p.as_ref().map(|e| e.to_string()),
        })
        .collect();
    (rows, Some(engine.level))
}

fn density_report(spec: &ProblemSpec, check_oracle: bool) -> Result<Report, Failure> {
    let closed = closed_form_density(spec).map_err(map_lib_error)?;
    let correction = closed_form_correction(spec).map_err(map_lib_error)?;

    let (density, verdict, provenance, per_prime, level, correction) = match closed {
        Some((density, verdict)) => {
            if check_oracle {
                let engine = delta_exact(spec, &EnumerationBudget::default()).map_err(map_lib_error)?;
                if engine.density != density {
                    return Err(Failure::inconsistent(format!(
                        "closed form {} disagrees with engine {}",
                        density.as_artin_multiple(),
                        engine.density.as_artin_multiple()
                    )));
                }
                let (rows, level) = engine_section(&engine);
                (density, verdict, "both-agree", rows, level, correction)
            } else {
                (density, verdict, "closed-form", Vec::new(), None, correction)
            }
        }
        None => {
            let engine = run_engine(spec)?;
            let (rows, level) = engine_section(&engine);
            let correction = Some(engine.correction.clone());
            (
                engine.density.clone(),
                engine.verdict,
                "engine",
                rows,
                level,
                correction,
            )
        }
    };
    Ok(assemble_report(
        spec, &density, verdict, provenance, correction, per_prime, level, None,
    ))
}

/// Engine route honoring the combined-problem domain restrictions.
fn run_engine(spec: &ProblemSpec) -> Result<DeltaExactReport, Failure> {
    debug_assert!(spec.combined_constraints_ok());
    delta_exact(spec, &EnumerationBudget::default()).map_err(map_lib_error)
}

#[allow(clippy::too_many_arguments)]
fn assemble_report(
    spec: &ProblemSpec,
    density: &ExactDensity,
    verdict: VanishingVerdict,
    provenance: &str,
    correction: Option<BigRational>,
    per_prime: Vec<PrimeRow>,
    level: Option<u64>,
    empirical: Option<EmpiricalSection>,
) -> Report {
    let normalized = density.normalized();
    Report {
        schema_version: report::SCHEMA_VERSION.into(),
        spec: SpecEcho {
            r: spec.r().to_string(),
            a: spec.progression().map(|(a, _)| a),
            f: spec.progression().map(|(_, f)| f),
            t: spec.index_t(),
        },
        provenance: provenance.into(),
        exact_coeff: normalized.as_artin_multiple().to_string(),
        excluded_tail_primes: density.excluded_tail_primes().to_vec(),
        uses_artin_tail: density.uses_artin_tail(),
        density_float: density.to_f64(),
        correction_exact: correction.as_ref().map(|c| c.to_string()),
        correction_float: correction
            .as_ref()
            .and_then(num_traits::ToPrimitive::to_f64),
        vanishes: verdict.vanishes(),
        cause: verdict.cause().as_str().into(),
        per_prime,
        level,
        empirical,
    }
}

fn emit(text: String, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn render(report: &Report, format: &str) -> String {
    match format {
        "json" => serde_json::to_string_pretty(report).expect("report serializes"),
        _ => report.to_table(),
    }
}

fn cmd_density(args: DensityArgs) -> Result<(), Failure> {
    let spec = build_spec(&args.spec)?;
    let report = density_report(&spec, args.check_oracle)?;
    emit(render(&report, &args.format), &args.out)
}

fn empirical_section(report: &EmpiricalReport) -> EmpiricalSection {
    EmpiricalSection {
        bound: report.bound,
        primes_considered: report.primes_considered,
        excluded: report.excluded,
        matching: report.matching,
        observed: report.observed,
        predicted: report.predicted,
        deviation: report.deviation,
        binomial_se: report.binomial_se,
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let spec = build_spec(&args.spec)?;
    let config = SieveConfig {
        bound: args.bound,
        segment_size: args.segment_size,
        workers: args.workers,
    };
    let empirical = run_experiment(&spec, &config).map_err(map_lib_error)?;
    let engine = run_engine(&spec)?;
    let (rows, level) = engine_section(&engine);
    let report = assemble_report(
        &spec,
        &engine.density,
        engine.verdict,
        "engine",
        Some(engine.correction.clone()),
        rows,
        level,
        Some(empirical_section(&empirical)),
    );
    emit(render(&report, &args.format), &args.out)
}

fn sweep_specs(args: &SweepArgs) -> Result<Vec<ProblemSpec>, Failure> {
    let mut specs = Vec::new();
    for token in args.r_list.split(',').filter(|token| !token.trim().is_empty()) {
        let r = parse_rational(token)?;
        let base = ProblemSpec::new(r.clone(), None, 1).map_err(map_lib_error)?;
        specs.push(base);
        for f in 2..=args.f_max {
            for a in (1..f).filter(|&a| gcd_u64(a, f) == 1) {
                specs.push(
                    ProblemSpec::new(r.clone(), Some((a as i64, f)), 1).map_err(map_lib_error)?,
                );
            }
        }
        for t in 2..=args.t_max {
            specs.push(ProblemSpec::new(r.clone(), None, t).map_err(map_lib_error)?);
            for f in (2..=args.f_max).filter(|f| f % t == 0) {
                for a in (1..f).filter(|&a| gcd_u64(a, f) == 1 && a % t == 1 % t) {
                    specs.push(
                        ProblemSpec::new(r.clone(), Some((a as i64, f)), t)
                            .map_err(map_lib_error)?,
                    );
                }
            }
        }
    }
    Ok(specs)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let specs = sweep_specs(&args)?;
    let mut lines = Vec::new();
    if args.format == "csv" {
        lines.push(Report::csv_header().to_string());
    }
    for spec in &specs {
        // every row runs both paths and requires exact agreement
        let engine = run_engine(spec)?;
        let closed = closed_form_density(spec).map_err(map_lib_error)?;
        let (density, verdict, provenance, correction) = match closed {
            Some((density, verdict)) => {
                if density != engine.density {
                    return Err(Failure::inconsistent(format!(
                        "sweep row disagreement for {spec:?}"
                    )));
                }
                let correction = closed_form_correction(spec).map_err(map_lib_error)?;
                (density, verdict, "both-agree", correction)
            }
            None => (
                engine.density.clone(),
                engine.verdict,
                "engine",
                Some(engine.correction.clone()),
            ),
        };
        let (rows, level) = engine_section(&engine);
        let report = assemble_report(
            spec, &density, verdict, provenance, correction, rows, level, None,
        );
        lines.push(match args.format.as_str() {
            "jsonl" => serde_json::to_string(&report).expect("report serializes"),
            _ => report.to_csv_row(),
        });
    }
    let mut text = lines.join("\n");
    if !text.is_empty() {
        text.push('\n');
    }
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::invalid(format!("cannot write stdout: {e}")))
        }
    }
}
