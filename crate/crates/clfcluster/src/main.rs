use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use clfcluster::error::Error;
use clfcluster::experiment::{generate_to_dir, parse_generator_spec, run, sweep, ExperimentConfig};

/// Subspace clustering experiments with a Cauchy-loss representation solver.
///
/// Set CLF_NUM_THREADS to bound the worker pool; results do not depend on it.
#[derive(Parser)]
#[command(name = "clfcluster", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured methods once and write report.json plus CSVs.
    Run {
        /// Experiment config file (key = value lines).
        #[arg(long)]
        config: PathBuf,
        /// Output directory; all artifacts land here.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run the methods over a (lambda, c) grid and write sweep.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated lambda values, e.g. 1e-4,1e-2,1,100.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<f64>,
        /// Comma-separated c values (applies to the clf method).
        #[arg(long, value_delimiter = ',')]
        c: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate synthetic data and write matrix.csv plus labels.csv.
    Gen {
        /// Config file with a synthetic data section.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CLF_NUM_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: CLF_NUM_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }

    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, out } => ExperimentConfig::from_file(&config)
            .and_then(|cfg| run(&cfg, &out))
            .map(|report| {
                for m in &report.methods {
                    let fmt =
                        |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into());
                    println!(
                        "{:<8} ac={} nmi={} ci={}",
                        m.name,
                        fmt(m.ac),
                        fmt(m.nmi),
                        fmt(m.ci)
                    );
                }
            }),
        Command::Sweep {
            config,
            lambda,
            c,
            out,
        } => ExperimentConfig::from_file(&config)
            .and_then(|cfg| sweep(&cfg, &lambda, &c, &out))
            .map(|rows| {
                let failed = rows.iter().filter(|r| r.status != "ok").count();
                println!("sweep complete: {} rows, {} failed", rows.len(), failed);
            }),
        Command::Gen { spec, out } => std::fs::read_to_string(&spec)
            .map_err(|e| Error::config(format!("cannot read spec {}: {e}", spec.display())))
            .and_then(|text| parse_generator_spec(&text))
            .and_then(|generator| generate_to_dir(&generator, &out)),
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Numerical(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
