use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use psikit::cli::{
    certify_script, exit_code, oracle_fuzz, overall_exit, parse_script, run, sweep_quadratic, to_csv, Engine, Report,
    RunOptions, Script, Selection,
};
use psikit::deduce::Goal;
use psikit::kernel::artinian::set_classification_seed;
use psikit::psi::{Status, DEFAULT_SEARCH_BOUND};
use psikit::Error;

#[derive(Parser)]
#[command(name = "psikit", version, about = "Decide PSI and strong PSI for morphisms of finitely presented rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every command of a script.
    Check {
        file: PathBuf,
        /// Seed for randomized retries in field classification.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest prime searched before answering unknown.
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: u64,
        /// Evaluate sweep rows concurrently.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
    /// Classify the quadratic orders for d in a range, as CSV.
    SweepQuadratic {
        #[arg(long, allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare the deciders on random finite instances.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 256)]
        size_bound: usize,
        #[arg(long)]
        json: bool,
    },
    /// Certify a goal for an expression of a script.
    Certify {
        file: PathBuf,
        #[arg(long)]
        goal: Goal,
        /// Name of the map or expression; defaults to the last one declared.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn load(path: &Path) -> Result<Script, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::UnknownName(format!("cannot read {}: {e}", path.display())))?;
    parse_script(&text)
}

fn emit(reports: &[Report], json: bool) {
    for r in reports {
        if json {
            println!("{}", r.to_json());
        } else {
            println!("{r}");
        }
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { file, seed, bound, parallel, json } => {
            set_classification_seed(seed);
            let script = match load(&file) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let reports = run(&script, &Selection::All, &RunOptions { bound, parallel });
            emit(&reports, json);
            ExitCode::from(overall_exit(&reports))
        }
        Command::SweepQuadratic { from, to, parallel, json } => {
            if from > to {
                eprintln!("error: --from must not exceed --to");
                return ExitCode::from(1);
            }
            let start = std::time::Instant::now();
            let rows = match sweep_quadratic(from, to, parallel) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let unknown = rows.iter().any(|r| r.verdict == Status::Unknown);
            if json {
                let yes = rows.iter().filter(|r| r.verdict == Status::Yes).count();
                let r = Report {
                    command: format!("sweep {from} {to}"),
                    verdict: format!("{yes} yes, {} no", rows.len() - yes),
                    witness: None,
                    trace: to_csv(&rows).lines().map(str::to_string).collect(),
                    millis: start.elapsed().as_millis() as u64,
                    engine: Engine::Finite,
                    exit: 0,
                };
                println!("{}", r.to_json());
            } else {
                print!("{}", to_csv(&rows));
            }
            ExitCode::from(if unknown { 3 } else { 0 })
        }
        Command::Fuzz { seed, count, size_bound, json } => {
            if count == 0 {
                eprintln!("error: --count must be positive");
                return ExitCode::from(1);
            }
            let start = std::time::Instant::now();
            let summary = oracle_fuzz(seed, count, size_bound);
            if json {
                let r = Report {
                    command: format!("fuzz {seed} {count} {size_bound}"),
                    verdict: if summary.passed() { "ok".into() } else { "failed".into() },
                    witness: None,
                    trace: summary.to_string().lines().map(str::to_string).collect(),
                    millis: start.elapsed().as_millis() as u64,
                    engine: Engine::Finite,
                    exit: 0,
                };
                println!("{}", r.to_json());
            } else {
                println!("{summary}");
            }
            // a counterexample is a bug in the deciders
            ExitCode::from(if summary.passed() { 0 } else { 3 })
        }
        Command::Certify { file, goal, target, seed, json } => {
            set_classification_seed(seed);
            let script = match load(&file) {
                Ok(s) => s,
                Err(e) => return fail(&e),
            };
            let reports = certify_script(&script, target.as_deref(), goal, &RunOptions::default());
            emit(&reports, json);
            ExitCode::from(overall_exit(&reports))
        }
    }
}
