use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cohcool_cli::{run_scenario_file, RunOptions};

#[derive(Parser)]
#[command(name = "cohcool", version, about = "Coherent cooling scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its CSV table and manifest.
    Run {
        scenario: PathBuf,
        /// Directory that relative output paths are resolved against.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for scenarios that sample random configurations.
        #[arg(long)]
        seed: Option<u64>,
        /// Check the literal closed-form propagator instead of the derived one.
        #[arg(long)]
        verbatim_sm: bool,
        /// Use the bare log-ratio as the cold temperature.
        #[arg(long)]
        tc_verbatim: bool,
    },
}

fn main() -> ExitCode {
    let Command::Run {
        scenario,
        out,
        seed,
        verbatim_sm,
        tc_verbatim,
    } = Cli::parse().command;
    let options = RunOptions {
        out_dir: out,
        seed,
        verbatim_sm,
        tc_verbatim,
    };
    match run_scenario_file(&scenario, &options) {
        Ok(report) => {
            println!("wrote {} ({} rows)", report.csv.display(), report.rows);
            println!("wrote {}", report.manifest.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
