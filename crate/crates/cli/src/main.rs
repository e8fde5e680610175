use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hom_cli::{run_config, RunReport, TaskKind};

#[derive(Parser)]
#[command(name = "homsim", version, about = "Two-photon interference at passive and frequency-shifting beam splitters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate the configured packet pair and report output probabilities.
    Run(Common),
    /// Coincidence probability over a list of delays; writes curve.csv.
    Scan(Common),
    /// Schmidt and beam-splitter decomposition; writes decomposition.json.
    Decompose(Common),
    /// Build a kernel from a Schmidt spec; writes kernel.json.
    Synthesize(Common),
    /// Unitarity and oracle checks.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the point count of every grid.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Suppress the summary and timing lines.
    #[arg(long)]
    quiet: bool,
}

fn summary(report: &RunReport) {
    if let Some(p) = report.probabilities {
        println!("P_RR = {:e}  P_RB = {:e}  P_BB = {:e}", p.rr, p.rb, p.bb);
    }
    if let Some(r) = report.condition_residual {
        println!("interference residual = {r:e}");
    }
    if let Some(&s) = report.schmidt.sigmas.first() {
        println!("leading Schmidt value = {s}");
    }
    if let Some(r) = report.decomposition_residual {
        println!("decomposition residual = {r:e}");
    }
    for f in &report.outputs {
        println!("wrote {f}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, args) = match cli.command {
        Command::Run(a) => (TaskKind::Run, a),
        Command::Scan(a) => (TaskKind::Scan, a),
        Command::Decompose(a) => (TaskKind::Decompose, a),
        Command::Synthesize(a) => (TaskKind::Synthesize, a),
        Command::Verify(a) => (TaskKind::Verify, a),
    };
    match run_config(&args.config, &args.out, args.grid_n, Some(task)) {
        Ok(report) => {
            if !args.quiet {
                summary(&report);
                eprintln!("elapsed {:.3} s", report.elapsed.as_secs_f64());
            }
            if report.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                for f in &report.failures {
                    eprintln!("error: {f}");
                }
                ExitCode::from(3)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
