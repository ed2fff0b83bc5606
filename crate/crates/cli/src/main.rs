use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use torem_cli::{render_text, run_str, PlacesMode, RunError, RunOptions};

#[derive(Parser)]
#[command(name = "torem", about = "Exact engine for root data, orientations, and local-global embedding obstructions", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Places {
    Explicit,
    Chebotarev,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and print the report.
    Run {
        /// Path to the scenario file (JSON).
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Cap on enumerated group orders.
        #[arg(long, default_value_t = 10_000)]
        cap_group_order: usize,
        /// Place model used when a payload leaves places unspecified.
        #[arg(long, value_enum, default_value = "chebotarev")]
        places: Places,
        /// Seed for randomized property sweeps.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the scripted four-place local-global failure reproduction.
    Demo {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn emit(report: &torem_cli::Report, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(report).expect("serializable")),
        Format::Text => println!("{}", render_text(report)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), RunError> = match cli.command {
        Command::Run { file, format, cap_group_order, places, seed } => {
            let opts = RunOptions {
                group_cap: cap_group_order,
                places_mode: match places {
                    Places::Explicit => PlacesMode::Explicit,
                    Places::Chebotarev => PlacesMode::Chebotarev,
                },
                seed,
            };
            std::fs::read_to_string(&file)
                .map_err(RunError::from)
                .and_then(|content| run_str(&content, &opts))
                .map(|report| emit(&report, format))
        }
        Command::Demo { format } => {
            let opts = RunOptions::default();
            run_str(r#"{"version":1,"kind":"lgp_failure_demo","payload":{}}"#, &opts)
                .map(|report| emit(&report, format))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
