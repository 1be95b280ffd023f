//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input errors, 3 when a verified
//! statement fails or a structural defect is detected.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::census::{
    classify_census, collect_reduced, formula_k, formula_k_star, published_v_star, run_census,
    total_from_reduced, verify_count_sandwich, verify_inequalities, BoundCheck, CensusOptions,
};
use crate::dcode::{
    adjacency_graph, extend_double_code, is_double_code, is_double_mds_code, is_linear_double_code,
    is_mds_code, is_splittable, prime_components, xor_factorize,
};
use crate::error::Error;
use crate::quasigroup::{
    is_decomposable_oracle, is_decomposable_structural, Classification, Quasigroup,
};
use crate::space::CellSet;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "quasi4",
    version,
    about = "n-quasigroups of order 4 and their double-codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subsets of Σⁿ
    Dcode {
        #[command(subcommand)]
        action: DcodeAction,
    },
    /// Quasigroup value tables
    Quasi {
        #[command(subcommand)]
        action: QuasiAction,
    },
    /// Exhaustive enumeration of reduced quasigroups
    Census {
        #[command(subcommand)]
        action: CensusAction,
    },
    /// Check counting statements against exact data
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
enum DcodeAction {
    /// Code predicates, components, splittability and linearity of a `cs` file
    Analyze { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum QuasiAction {
    /// Print the classification flags of a `q4` file
    Classify { file: PathBuf },
    /// Print the reduced form and the isotopy reproducing the input
    Reduce { file: PathBuf },
}

#[derive(Subcommand, Debug)]
enum CensusAction {
    Run(CensusArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[arg(long)]
    n: usize,
    /// Classify every reduced quasigroup (n ≤ 4)
    #[arg(long)]
    classify: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Allow n = 5
    #[arg(long)]
    long_run: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Resumable progress file for counting runs
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Count through equivalence classes of the layer x1 = 0 (n >= 2)
    #[arg(long)]
    by_first_layer: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Statement {
    Theorem1,
    Theorem2,
    Inequalities,
    Decomposability,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    statement: Statement,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample size for n = 4 decomposability agreement
    #[arg(long, default_value_t = 1000)]
    samples: usize,
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Defect(_) => EXIT_VERIFY,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::precondition(format!("writing output: {e}")))
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Dcode {
            action: DcodeAction::Analyze { file },
        } => {
            let s = CellSet::parse(&read(&file)?)?;
            emit(out, &analyze_set(&s)?)?;
            Ok(EXIT_OK)
        }
        Command::Quasi { action } => {
            let file = match &action {
                QuasiAction::Classify { file } | QuasiAction::Reduce { file } => file,
            };
            let f = Quasigroup::parse(&read(file)?)?;
            match action {
                QuasiAction::Classify { .. } => {
                    emit(out, &format!("{}\n", Classification::of(&f)))?
                }
                QuasiAction::Reduce { .. } => {
                    let (eq, g) = f.reduce();
                    let taus: Vec<String> = eq.taus().iter().map(|t| t.to_string()).collect();
                    emit(out, &format!("taus={}\n{}", taus.join(" "), g.to_text()))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Census {
            action: CensusAction::Run(args),
        } => {
            let opts = CensusOptions {
                jobs: args.jobs,
                classify: args.classify,
                long_run: args.long_run,
                checkpoint: args.checkpoint,
                by_first_layer: args.by_first_layer,
            };
            let report = run_census(args.n, &opts)?;
            match args.format {
                Format::Json => emit(out, &format!("{}\n", report.to_json()))?,
                Format::Text => emit(out, &report.to_text())?,
            }
            Ok(if report.all_bounds_hold() {
                EXIT_OK
            } else {
                EXIT_VERIFY
            })
        }
        Command::Verify(args) => verify(args, out),
    }
}

fn analyze_set(s: &CellSet) -> Result<String, Error> {
    let mut lines = vec![
        format!("n={}", s.dim()),
        format!("size={}", s.len()),
        format!("mds_code={}", is_mds_code(s)),
        format!("double_code={}", is_double_code(s)),
    ];
    let double_mds = is_double_mds_code(s);
    lines.push(format!("double_mds_code={double_mds}"));
    if is_double_code(s) && !s.is_empty() {
        let g = adjacency_graph(s);
        lines.push(format!("adjacency_edges={}", g.edge_count()));
        lines.push(format!("gamma={}", prime_components(s)?.len()));
        match is_linear_double_code(s) {
            Some(form) => lines.push(format!("linear={form}")),
            None => lines.push("linear=none".into()),
        }
        if double_mds {
            let split = is_splittable(s)?;
            lines.push(format!("splittable={}", split.is_some()));
            let gamma = prime_components(s)?.len();
            let codes = if split.is_some() {
                BigUint::from(1u32) << gamma
            } else {
                BigUint::from(0u32)
            };
            lines.push(format!("mds_subcodes={codes}"));
            let factors = xor_factorize(s)?;
            let groups: Vec<String> = factors
                .groups
                .iter()
                .map(|g| {
                    format!(
                        "{{{}}}",
                        g.iter()
                            .map(|c| (c + 1).to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect();
            lines.push(format!("k={}", factors.k()));
            lines.push(format!("xor_factors={}", groups.join(" ")));
        } else {
            let ext = extend_double_code(s)?;
            lines.push(format!("extendable={}", ext.is_some()));
        }
    }
    Ok(lines.join("\n") + "\n")
}

fn verify(args: VerifyArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let n = args.n;
    let jobs = args.jobs.max(1);
    let checks: Vec<BoundCheck> = match args.statement {
        Statement::Theorem1 => {
            let c = classify_census(n, jobs)?;
            let k = formula_k(n)?;
            vec![
                BoundCheck::eq(
                    "semilinear k*_n = 3*2^(2^n-n-1)-2",
                    &BigUint::from(c.k_star),
                    &formula_k_star(n)?,
                ),
                BoundCheck::eq(
                    "semilinear k_n = 4*6^n*k*_n",
                    &total_from_reduced(n, c.k_star),
                    &k,
                ),
            ]
        }
        Statement::Theorem2 => {
            let verdict = verify_count_sandwich(n, published_v_star(n)?)?;
            emit(out, &format!("{verdict}\n"))?;
            return Ok(match verdict.holds() {
                Some(false) => EXIT_VERIFY,
                _ => EXIT_OK,
            });
        }
        Statement::Inequalities => verify_inequalities(n, jobs)?,
        Statement::Decomposability => {
            vec![decomposability_agreement(n, jobs, args.seed, args.samples)?]
        }
    };
    for c in &checks {
        emit(out, &format!("{c}\n"))?;
    }
    Ok(if checks.iter().all(|c| c.holds) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    })
}

/// Oracle and structural decomposability agree on every reduced n-quasigroup
/// for n ≤ 3 and on a seeded sample for n = 4.
fn decomposability_agreement(
    n: usize,
    jobs: usize,
    seed: u64,
    samples: usize,
) -> Result<BoundCheck, Error> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { n, min: 3 });
    }
    let (mut all, _) = collect_reduced(n, jobs)?;
    if n >= 4 && samples < all.len() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        all.shuffle(&mut rng);
        all.truncate(samples);
    }
    let mut disagreements = 0u64;
    for f in &all {
        let a = is_decomposable_oracle(f)?.is_some();
        let b = is_decomposable_structural(f)?.is_some();
        disagreements += u64::from(a != b);
    }
    Ok(BoundCheck::eq(
        format!(
            "decomposability oracle/structural disagreements over {} tables",
            all.len()
        ),
        &BigUint::from(disagreements),
        &BigUint::from(0u32),
    ))
}
