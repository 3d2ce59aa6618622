mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CliError, CommandResult};

#[derive(Parser)]
#[command(name = "ame", version, about = "Verification and search toolkit for AME qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Print the JSON report to standard output instead of the table.
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Sector lengths, mixed-marginal counts and AME verdict for a state file.
    Verify(commands::VerifyArgs),
    /// Parity-rule exclusion verdicts with their arithmetic.
    Exclude(commands::ExcludeArgs),
    /// Exhaustive scan over labeled graph states.
    Search(commands::SearchArgs),
    /// Scott/Rains upper limits on n for local dimension D.
    Bounds(commands::BoundsArgs),
    /// Randomized parity-rule and oracle-equivalence checks.
    Selftest(commands::SelftestArgs),
    /// Build, convert or locally complement a graph.
    Graph(commands::GraphArgs),
    /// Re-run fixture discovery and compare against the frozen graph files.
    Fixtures(commands::FixturesArgs),
}

fn run(cli: &Cli) -> Result<CommandResult, CliError> {
    match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Exclude(a) => commands::exclude(a),
        Command::Search(a) => commands::search(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Selftest(a) => commands::selftest(a),
        Command::Graph(a) => commands::graph(a),
        Command::Fixtures(a) => commands::fixtures(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(result) => {
            let json = serde_json::to_string_pretty(&result.report).expect("report serializes");
            if let Some(path) = &cli.output.out {
                if let Err(e) = std::fs::write(path, format!("{json}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if cli.output.json {
                println!("{json}");
            } else {
                print!("{}", result.human);
            }
            ExitCode::from(result.exit_code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
