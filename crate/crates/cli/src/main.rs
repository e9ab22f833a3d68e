use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use uniqopt::Kind;

mod commands;

use commands::{Engine, Failure, RunConfig};

/// Exact uniqueness decisions for 0-1 quadratic and hyperbolic programs.
///
/// Instances and reports are JSON documents with integers written as decimal
/// strings. `decide` exits with 0 (unique), 1 (multiple) or 2 (infeasible);
/// codes above 10 signal errors: 11 for unparsable input, 12 for instances
/// beyond the enumeration limit, 13 for anything else, 14 for bad usage.
#[derive(Parser, Debug)]
#[command(name = "uniqopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input instance, read from stdin if absent.
    #[arg(long = "in", value_name = "FILE", global = true)]
    input: Option<PathBuf>,

    /// Output file, stdout if absent.
    #[arg(long = "out", value_name = "FILE", global = true)]
    output: Option<PathBuf>,

    /// Backend used by `solve` and `decide`.
    #[arg(long, value_enum, default_value_t = Engine::Oracle, global = true)]
    engine: Engine,

    /// Largest variable count handled by exhaustive enumeration.
    #[arg(long, value_name = "INT", default_value_t = 24, global = true)]
    max_n: usize,

    /// Largest source variable count accepted by `verify`.
    #[arg(long, value_name = "INT", default_value_t = 12, global = true)]
    limit: usize,

    /// Random seed for `gen`.
    #[arg(long, value_name = "INT", default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random instance.
    Gen {
        /// knapsack, subset_sum_goal, rank1_quadratic, quadratic or hyperbolic.
        kind: Kind,
        /// Number of variables.
        #[arg(long, value_name = "INT")]
        n: usize,
        /// Largest absolute value of a coefficient.
        #[arg(long, value_name = "INT", default_value_t = 50)]
        coeff_bound: u64,
    },
    /// Compute the exact optimum and one optimal assignment.
    Solve,
    /// Decide whether the optimum is attained by exactly one assignment.
    Decide,
    /// Compile an instance into another family.
    Reduce {
        /// Expected kind of the input.
        #[arg(long, value_name = "KIND")]
        from: Option<Kind>,
        /// Target kind.
        #[arg(long, value_name = "KIND")]
        to: Kind,
    },
    /// Check by enumeration that reductions carry optimizers one-to-one.
    Verify {
        /// Target kinds to check, every reduction from the input kind if absent.
        #[arg(long, value_name = "KIND")]
        to: Vec<Kind>,
    },
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        None => {
            io::stdin().read_to_string(&mut text).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn write_output(path: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    let mut text = body.to_owned();
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let config = RunConfig::new(cli.max_n, cli.limit, cli.seed, cli.engine)?;
    let (body, code) = match cli.command {
        Command::Gen { kind, n, coeff_bound } => (commands::gen(kind, n, coeff_bound, config.seed)?, 0),
        Command::Solve => commands::solve(&read_input(cli.input.as_ref())?, &config)?,
        Command::Decide => commands::decide(&read_input(cli.input.as_ref())?, &config)?,
        Command::Reduce { from, to } => (commands::reduce(&read_input(cli.input.as_ref())?, from, to, &config)?, 0),
        Command::Verify { to } => commands::verify(&read_input(cli.input.as_ref())?, &to, &config)?,
    };
    write_output(cli.output.as_ref(), &body)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(commands::EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
