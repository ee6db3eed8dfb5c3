use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use qew_cli::commands::{execute, CommandKind};
use qew_cli::config;

/// Simulator and analysis toolkit for free-electron wavepackets driven by
/// optical near fields.
#[derive(Parser)]
#[command(name = "qew", version, about)]
struct Cli {
    /// Configuration file describing the run.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Override the `[ensemble]` seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Bound the worker thread pool.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closed-form predictions and regime classification, no propagation.
    Predict,
    /// Propagate and write the exit momentum spectrum.
    Simulate,
    /// Propagate and write the exit phase-space map.
    Wigner,
    /// Classify the waist/drift plane and trace the regime boundary.
    PhaseDiagram,
    /// Scan fringe spacing against drive wavelength.
    Sweep,
    /// Average the exit spectrum over shot-to-shot jitter.
    Ensemble,
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        qew::exec::set_threads(n).map_err(|e| anyhow::anyhow!("--threads {n}: {e}"))?;
    }
    let path = cli
        .config
        .ok_or_else(|| anyhow::anyhow!("--config <FILE> is required"))?;
    let mut cfg = config::load(&path)?;
    if let Some(seed) = cli.seed {
        cfg.ensemble.seed = seed;
    }

    let kind = match cli.command {
        Cmd::Predict => CommandKind::Predict,
        Cmd::Simulate => CommandKind::Simulate,
        Cmd::Wigner => CommandKind::Wigner,
        Cmd::PhaseDiagram => CommandKind::PhaseDiagram,
        Cmd::Sweep => CommandKind::Sweep,
        Cmd::Ensemble => CommandKind::Ensemble,
    };

    match cli.out {
        Some(path) => {
            let file = File::create(&path)?;
            let mut w = BufWriter::new(file);
            execute(kind, &cfg, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            execute(kind, &cfg, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}
