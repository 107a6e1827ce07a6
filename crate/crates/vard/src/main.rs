//! Batch front end: parse a run configuration, execute a single solve or a
//! sweep, and emit report files. Exit codes: 0 success, 2 configuration or
//! usage error, 3 numeric failure.

use std::path::PathBuf;

use clap::Parser;

use vard::config::parse_config;
use vard::runner::{run_single, run_sweep, Sweep};
use vard::VardError;

#[derive(Parser, Debug)]
#[command(
    name = "vard",
    version,
    about = "Mass-constrained ground states of variable-exponent p(x)-Laplacian problems"
)]
struct Cli {
    /// Path to the JSON run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Output directory (overrides the config file's outputs.directory).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Run a mass sweep over these comma-separated values instead of a
    /// single solve (e.g. "0.04,0.02,0.01").
    #[arg(long, value_name = "LIST", conflicts_with_all = ["sweep_sigma", "sweep_r0"])]
    sweep_c: Option<String>,

    /// Run a ball-radius sweep over these comma-separated values.
    #[arg(long, value_name = "LIST", conflicts_with = "sweep_r0")]
    sweep_sigma: Option<String>,

    /// Re-evaluate the identity remainder of one converged field under the
    /// cutoff-exponent family at these comma-separated radii (p must be a
    /// class_p spec).
    #[arg(long, value_name = "LIST")]
    sweep_r0: Option<String>,

    /// Suppress progress lines (artifacts are still written).
    #[arg(long)]
    quiet: bool,
}

fn parse_list(raw: &str) -> vard::Result<Vec<f64>> {
    let mut values = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let v: f64 = part.parse().map_err(|_| {
            VardError::config("sweep", format!("cannot parse sweep value {part:?}"))
        })?;
        values.push(v);
    }
    if values.is_empty() {
        return Err(VardError::config("sweep", "sweep list is empty"));
    }
    Ok(values)
}

fn run(cli: &Cli) -> vard::Result<()> {
    let mut cfg = parse_config(&cli.config)?;
    if let Some(out) = &cli.out {
        cfg.outputs.directory = out.to_string_lossy().into_owned();
    }

    let sweep = if let Some(raw) = &cli.sweep_c {
        Some(Sweep::Mass(parse_list(raw)?))
    } else if let Some(raw) = &cli.sweep_sigma {
        Some(Sweep::Sigma(parse_list(raw)?))
    } else if let Some(raw) = &cli.sweep_r0 {
        Some(Sweep::CutoffRadius(parse_list(raw)?))
    } else {
        None
    };

    match sweep {
        Some(sweep) => {
            let rows = run_sweep(&cfg, &sweep, cli.quiet)?;
            if rows.iter().all(|r| r.error.is_some()) {
                return Err(VardError::numeric("sweep", "every sweep point failed"));
            }
            Ok(())
        }
        None => run_single(&cfg, cli.quiet).map(|_| ()),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
