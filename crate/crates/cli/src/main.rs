//! `duality`: solve and verify polyhedral convex-duality problems.
//!
//! Exit codes: 0 success, 1 input or verification error, 2 qualification
//! failure under `--require-qualified`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use duality_cli::problem::{parse_problem, ProblemFile};
use duality_cli::runner::{self, csv_string, RunOutput};
use duality_cli::suites::{run_suite, SUITE_NAMES};

#[derive(Parser)]
#[command(name = "duality", about = "Exact polyhedral convex duality toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Problem file to load.
    file: PathBuf,
    /// Write the report rows as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Exit with code 2 when the relevant qualification fails.
    #[arg(long)]
    require_qualified: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact Fenchel conjugate of a PL function.
    Conjugate(RunArgs),
    /// Solve the Fenchel primal/dual pair and report the gap.
    Fenchel(RunArgs),
    /// Solve a cone program's Lagrangian primal/dual pair.
    Lagrange(RunArgs),
    /// Check or find KKT multipliers at a given point.
    Kkt(RunArgs),
    /// Compute a coderivative value of a polyhedral set-valued map.
    Coderivative(RunArgs),
    /// Run the seeded verification suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Instance count override (default: the suite's specified count).
        #[arg(long)]
        n: Option<usize>,
        /// Random seed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Maximum ambient dimension used by the generators (at most 4).
        #[arg(long, default_value_t = 3)]
        dims: usize,
        /// Write per-instance duality rows as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn load(path: &PathBuf) -> Result<ProblemFile, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_problem(&text).map_err(|d| format!("{}:{d}", path.display()))
}

fn finish(args: &RunArgs, out: RunOutput) -> Result<ExitCode, String> {
    print!("{}", out.text);
    if let Some(path) = &args.csv {
        fs::write(path, csv_string(&out.rows)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if args.require_qualified && out.qualified == Some(false) {
        eprintln!("qualification failed");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_command(
    args: &RunArgs,
    f: impl Fn(&ProblemFile) -> Result<RunOutput, duality_core::Error>,
) -> Result<ExitCode, String> {
    let file = load(&args.file)?;
    match f(&file) {
        Ok(out) => finish(args, out),
        Err(duality_core::Error::Qualification(msg)) if args.require_qualified => {
            eprintln!("qualification failed: {msg}");
            Ok(ExitCode::from(2))
        }
        Err(e) => Err(e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Conjugate(args) => run_command(args, runner::run_conjugate),
        Command::Fenchel(args) => run_command(args, runner::run_fenchel),
        Command::Lagrange(args) => run_command(args, runner::run_lagrange),
        Command::Kkt(args) => run_command(args, runner::run_kkt),
        Command::Coderivative(args) => run_command(args, runner::run_coderivative),
        Command::Verify { suite, n, seed, dims, csv } => {
            verify(suite, *n, *seed, (*dims).min(4), csv.as_ref())
        }
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn verify(
    suite: &str,
    n: Option<usize>,
    seed: u64,
    dims: usize,
    csv: Option<&PathBuf>,
) -> Result<ExitCode, String> {
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        if !SUITE_NAMES.contains(&suite) {
            return Err(format!(
                "unknown suite `{suite}`; available: {} or all",
                SUITE_NAMES.join(", ")
            ));
        }
        vec![suite]
    };
    let mut all_ok = true;
    let mut rows = Vec::new();
    for name in names {
        let out = run_suite(name, seed, n, dims)?;
        println!("{}", out.line());
        println!("{}/{} ok", out.passed, out.total);
        for f in &out.failures {
            println!("  failure: {f}");
        }
        all_ok &= out.ok();
        rows.extend(out.rows);
    }
    if let Some(path) = csv {
        fs::write(path, csv_string(&rows)).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
