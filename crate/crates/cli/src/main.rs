//! `carnot-lab`: verification suites for filtered charts and their Carnot groupoids.
//!
//! Every command prints a JSON report on stdout. Exit status is 0 when every
//! check passes, 1 when a check fails and 2 on bad input.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::InputError;

#[derive(Debug, Parser)]
#[command(name = "carnot-lab", version, about = "Verify osculating group laws, normal-cone charts and Carnot groupoid limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Spec file path, or the name of a bundled spec (heisenberg, engel, ...).
    #[arg(long)]
    spec: String,
    /// Also write the JSON report to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank and bracket conditions at the samples (and optional random points).
    Validate {
        #[command(flatten)]
        common: Common,
        /// Extra seeded random rational points to check.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Structure constants of the osculating algebra at a sample point.
    Levi {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        point: usize,
    },
    /// Products of basis vectors under the (t, tu)-scaled group law.
    BchTable {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        point: usize,
        /// Rational, e.g. `1`, `1/2`, `0.25`.
        #[arg(long, default_value = "1")]
        t: String,
        #[arg(long, default_value = "1")]
        u: String,
    },
    /// Convergence of rescaled pair products to the osculating product.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        point: usize,
        /// Comma-separated frame coordinates; defaults to e1.
        #[arg(long)]
        xi: Option<String>,
        /// Comma-separated frame coordinates; defaults to e2.
        #[arg(long)]
        eta: Option<String>,
        /// Geometric grid `first:last:count`.
        #[arg(long, default_value = "1/2:1/128:7")]
        u_grid: String,
        /// Write the `u,err,est_order` table here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Read arrows in target-based coordinates (limit bch(ξ, η)).
        #[arg(long)]
        target_based: bool,
    },
    /// Multiplicativity of the two scaling actions and the projection relations.
    Actions {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        point: usize,
    },
    /// Chart transitions, dnc(f) limits and curve classes for the spec's tubular data.
    Transition {
        #[command(flatten)]
        common: Common,
    },
}

fn configure_threads() {
    if let Some(n) = std::env::var("CARNOT_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        carnot_core::exec::configure_threads(n);
    }
}

fn run(cli: Cli) -> Result<(report::Report, Option<PathBuf>), InputError> {
    Ok(match cli.command {
        Command::Validate { common, random } => (commands::validate(&common.spec, random, common.seed)?, common.json),
        Command::Levi { common, point } => (commands::levi(&common.spec, point)?, common.json),
        Command::BchTable { common, point, t, u } => (commands::bch_table(&common.spec, point, &t, &u, common.seed)?, common.json),
        Command::Converge { common, point, xi, eta, u_grid, csv, target_based } => {
            let opts = commands::ConvergeOptions { point, xi, eta, u_grid, csv, target_based };
            (commands::converge(&common.spec, &opts)?, common.json)
        }
        Command::Actions { common, point } => (commands::actions(&common.spec, point, common.seed)?, common.json),
        Command::Transition { common } => (commands::transition(&common.spec, common.seed)?, common.json),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok((report, json)) => {
            let text = report.to_json();
            print!("{text}");
            if let Some(path) = json {
                if let Err(e) = std::fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
