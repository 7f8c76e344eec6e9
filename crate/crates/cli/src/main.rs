//! `nlcell solve` runs one SMT-LIB instance; `nlcell bench` runs a directory
//! of instances against several variants in isolated subprocesses and writes
//! one statistics row per pair.

mod bench;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use nlcell::smtlib::{self, Command};
use nlcell::{solve, ApproxConfig, Limits, Rational, SolveResult, SolverConfig};

use record::{write_records, RunRecord};

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_UNKNOWN: u8 = 0;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;

#[derive(Parser)]
#[command(name = "nlcell", version, about = "Exact QF_NRA solving with approximated single cells")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one instance; exit status 10 for sat, 20 for unsat, 0 otherwise.
    Solve(SolveArgs),
    /// Run every `.smt2` file of a directory under each variant.
    Bench(bench::BenchArgs),
}

#[derive(Args, Clone)]
pub struct SolverFlags {
    /// baseline, simple-<j>, dynamic, taylor, pwl-<k> or outside.
    #[arg(long, default_value = "baseline")]
    variant: String,
    /// Upper bound on the number of approximated cells.
    #[arg(long)]
    max_apx_cells: Option<usize>,
    /// Slope of the dynamic degree threshold.
    #[arg(long, value_parser = parse_rational)]
    dynamic_c: Option<Rational>,
    /// Offset of the dynamic degree threshold.
    #[arg(long, value_parser = parse_rational)]
    dynamic_d: Option<Rational>,
    #[arg(long)]
    timeout_ms: Option<u64>,
    /// Search step budget.
    #[arg(long)]
    max_steps: Option<u64>,
    /// Recorded for reproducibility; the search itself is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    flags: SolverFlags,
    /// Append-free CSV file receiving this run's statistics row.
    #[arg(long)]
    stats: Option<PathBuf>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>()
        .ok()
        .or_else(|| smtlib::parse_number(s))
        .ok_or_else(|| format!("'{s}' is not a rational number"))
}

impl SolverFlags {
    fn config(&self) -> Result<SolverConfig, String> {
        let mut approx: ApproxConfig = self.variant.parse().map_err(|e| format!("{e}"))?;
        if self.dynamic_c.is_some() || self.dynamic_d.is_some() {
            let c = self.dynamic_c.clone().unwrap_or_else(|| Rational::new(1.into(), 5.into()));
            let d = self.dynamic_d.clone().unwrap_or_else(|| Rational::from_integer(3.into()));
            approx = approx.with_dynamic(c, d);
        }
        if self.max_apx_cells.is_some() {
            approx = approx.with_budget(self.max_apx_cells);
        }
        let limits = Limits {
            max_steps: self.max_steps,
            timeout: self.timeout_ms.map(Duration::from_millis),
            ..Limits::default()
        };
        Ok(SolverConfig { approx, limits })
    }
}

fn run_solve(args: &SolveArgs) -> u8 {
    let cfg = match args.flags.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = match std::fs::read_to_string(&args.instance) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.instance.display());
            return EXIT_USAGE;
        }
    };
    let script = match smtlib::parse(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}:{e}", args.instance.display());
            return EXIT_PARSE;
        }
    };
    let started = Instant::now();
    let outcome = solve(&script.formula(), script.vars.len(), &cfg);
    let wall_ms = started.elapsed().as_millis() as u64;

    let wants_model = script.commands.contains(&Command::GetModel);
    print!("{}", smtlib::print_result(&outcome.result, &script.vars, wants_model));
    if let SolveResult::Unknown(reason) = &outcome.result {
        eprintln!("unknown: {reason}");
    }
    if let Some(path) = &args.stats {
        let row = RunRecord::from_run(
            &args.instance.display().to_string(),
            &cfg.approx.to_string(),
            &outcome.result,
            &outcome.stats,
            wall_ms,
        );
        if let Err(e) = write_records(path, &[row]) {
            eprintln!("error: cannot write {}: {e}", path.display());
        }
    }
    match outcome.result {
        SolveResult::Sat(_) => EXIT_SAT,
        SolveResult::Unsat => EXIT_UNSAT,
        SolveResult::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(match &cli.command {
        Cmd::Solve(args) => run_solve(args),
        Cmd::Bench(args) => bench::run(args),
    })
}
