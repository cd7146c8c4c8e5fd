use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vanishing::{ProjectMode, Variant};
use vanishing_cli::commands;
use vanishing_cli::io::CliError;

#[derive(Parser)]
#[command(name = "vanishing", version, about = "Vanishing ideals of finite point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Gröbner basis and quotient basis of a point set.
    Basis {
        points: PathBuf,
        /// lex, deglex or degrevlex, optionally with `:i1,...,in`, or matrix:<file>
        #[arg(long, default_value = "degrevlex")]
        order: String,
        #[arg(long, default_value_t = Variant::Mmm)]
        variant: Variant,
        #[arg(long, default_value_t = ProjectMode::Auto)]
        project: ProjectMode,
        /// Result file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stats file; embedded in the result if omitted.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Same as `basis` for a set of commuting matrices acting on a vector.
    Functional {
        system: PathBuf,
        #[arg(long, default_value = "degrevlex")]
        order: String,
        #[arg(long, default_value_t = ProjectMode::Auto)]
        project: ProjectMode,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Merge two sorted tuple lists and print the Δ-sequence and counters.
    Merge { list_a: PathBuf, list_b: PathBuf },
    /// Comparison counts for merging the terms of an S-polynomial.
    BenchSpoly {
        #[arg(long, default_value_t = 10)]
        s: usize,
    },
    /// Run the oracle checks.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Basis {
            points,
            order,
            variant,
            project,
            out,
            stats,
        } => commands::cmd_basis(&points, &order, variant, project, out.as_deref(), stats.as_deref()),
        Command::Functional {
            system,
            order,
            project,
            out,
            stats,
        } => commands::cmd_functional(&system, &order, project, out.as_deref(), stats.as_deref()),
        Command::Merge { list_a, list_b } => commands::cmd_merge(&list_a, &list_b),
        Command::BenchSpoly { s } => commands::cmd_bench_spoly(s),
        Command::Selftest { seed } => {
            let (text, outcomes) = commands::cmd_selftest(seed);
            println!("{text}");
            let failed: Vec<String> = outcomes
                .iter()
                .filter(|o| !o.passed)
                .map(|o| o.id.to_string())
                .collect();
            if failed.is_empty() {
                Ok(String::new())
            } else {
                Err(CliError::Selftest(format!("criteria {}", failed.join(", "))))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            if !text.is_empty() {
                print!("{text}");
                if !text.ends_with('\n') {
                    println!();
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
