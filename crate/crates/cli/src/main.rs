use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use tomoscope_cli::error::{CliError, EXIT_CHECK, EXIT_OK};
use tomoscope_cli::verify::{run_verify, Faults, Suite};
use tomoscope_cli::{parse_thetas, run_strands, run_tomogram, ScenarioConfig};

#[derive(Parser)]
#[command(name = "tomoscope", version, about = "Optical tomograms of Kerr-evolved light")]
struct Cli {
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "TOMOSCOPE_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a tomogram from a scenario file and write its outputs.
    Tomogram {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a built-in invariant suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::Fast)]
        suite: Suite,
        #[arg(long, hide = true)]
        corrupt_phase_sign: bool,
    },
    /// Count strands in θ-slices of a scenario's tomogram.
    Strands {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated angles, e.g. `0,pi/4`; every lattice angle if omitted.
        #[arg(long)]
        theta: Option<String>,
    },
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::config("output", e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Tomogram { config } => {
            let scenario = ScenarioConfig::load(&config)?.resolve()?;
            let summary = run_tomogram(&scenario)?;
            print_json(&summary)?;
            Ok(if summary.report.passes { EXIT_OK } else { EXIT_CHECK })
        }
        Command::Verify {
            suite,
            corrupt_phase_sign,
        } => {
            let report = run_verify(
                suite,
                Faults {
                    flip_phase_sign: corrupt_phase_sign,
                },
            )?;
            print_json(&report)?;
            Ok(if report.passed { EXIT_OK } else { EXIT_CHECK })
        }
        Command::Strands { config, theta } => {
            let scenario = ScenarioConfig::load(&config)?.resolve()?;
            let thetas = theta.map(|list| parse_thetas(&list, &scenario)).transpose()?;
            let report = run_strands(&scenario, thetas.as_deref())?;
            print!("{}", report.to_table());
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("tomoscope: cannot configure thread pool: {e}");
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("tomoscope: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
