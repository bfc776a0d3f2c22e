use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use cgconvex::cli::{run, Command, Overrides, EXIT_CONFIG};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sub {
    Check,
    Certify,
    Solve,
    Hull,
    Linearize,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Check => Command::Check,
            Sub::Certify => Command::Certify,
            Sub::Solve => Command::Solve,
            Sub::Hull => Command::Hull,
            Sub::Linearize => Command::Linearize,
        }
    }
}

/// Convexity checks, certificates and hull evaluation for hyperelastic energies.
#[derive(Debug, Parser)]
#[command(name = "cgconvex", version)]
struct Cli {
    #[arg(value_enum)]
    command: Sub,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let overrides = Overrides {
        seed: cli.seed,
        samples: cli.samples,
        tol: cli.tol,
    };
    let outcome = run(cli.command.into(), &cli.config, &cli.out, &overrides);
    for f in &outcome.files {
        println!("{}", f.display());
    }
    if outcome.code == 0 {
        eprintln!("{}", outcome.message);
    } else {
        eprintln!("exit {}: {}", outcome.code, outcome.message);
    }
    std::process::exit(outcome.code);
}
