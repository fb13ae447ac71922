use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wealthsim::error::Result;
use wealthsim::runner::{self, RunOptions, REPORT_FILE, KDE_FILE};

/// Wealth-distribution simulations: inequality process, two-good market,
/// pairwise exchange with monopolists.
#[derive(Parser)]
#[command(name = "wealthsim", version)]
struct Cli {
    /// Override the seed of the config (or the base seed of a sweep).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads. Never changes any output byte.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write snapshots, report and KDE.
    Run { config: PathBuf },
    /// Run a parameter sweep and write the aggregate table and overlay plot.
    Sweep { spec: PathBuf },
    /// Analyze the last round of a snapshot CSV and print the report.
    Analyze {
        snapshot: PathBuf,
        /// Also write report.json and kde.csv into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Overlay `grid,density` CSVs into one SVG chart.
    Plot {
        out: PathBuf,
        kde: Vec<PathBuf>,
        /// Legend label per series, in order. Defaults to file stems.
        #[arg(long = "label")]
        labels: Vec<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wealthsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let options = RunOptions {
        seed: cli.seed,
        threads: cli.threads,
    };
    match cli.command {
        Command::Run { config } => {
            let summary = runner::run_experiment(&config, options)?;
            println!("{}", summary.output_dir.display());
        }
        Command::Sweep { spec } => {
            let summary = runner::run_sweep(&spec, options)?;
            println!("{}", summary.output_dir.display());
        }
        Command::Analyze { snapshot, out } => {
            let (report, kde) = runner::analyze_snapshot(&snapshot)?;
            let json = report.to_json();
            if let Some(dir) = out {
                runner::write_atomic(&dir.join(REPORT_FILE), json.as_bytes())?;
                if let Some(kde) = kde {
                    runner::write_atomic(&dir.join(KDE_FILE), kde.to_csv().as_bytes())?;
                }
            }
            println!("{json}");
        }
        Command::Plot { out, kde, labels } => runner::plot_files(&out, &kde, &labels)?,
    }
    Ok(())
}
