//! `bdheight` command-line front end.
//!
//! Exit codes: 0 success, 1 a check or assertion failed, 2 usage or input error.

mod artifact;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use artifact::Format;

#[derive(Debug, Parser)]
#[command(name = "bdheight", version, about = "Busy-period height of the mean-field birth-and-death chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Rates {
    /// rho = nu/mu; a decimal or a fraction such as 1/4
    #[arg(long, value_parser = parse_ratio, required_unless_present = "nu", conflicts_with_all = ["nu", "mu"])]
    pub rho: Option<f64>,
    /// Per-idle-node birth rate (needs --mu)
    #[arg(long, requires = "mu")]
    pub nu: Option<f64>,
    /// Per-busy-node death rate (needs --nu)
    #[arg(long, requires = "nu")]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write here instead of standard output
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Rounding {
    Floor,
    Ceil,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ladder,
    JumpChain,
    FullCtmc,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Survival function, pmf and moments of H_N
    Dist {
        #[arg(long = "n")]
        n: usize,
        #[command(flatten)]
        rates: Rates,
        #[command(flatten)]
        out: Output,
    },
    /// alpha(rho), f(rho) and the bound constants
    Alpha {
        #[arg(long, value_parser = parse_ratio)]
        rho: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Check the finite-N bounds and the oracle on a grid
    Verify {
        #[arg(long, value_parser = parse_ratio, value_delimiter = ',', default_value = "0.25,0.5,0.75,1,2")]
        rho: Vec<f64>,
        #[arg(long = "n", value_delimiter = ',', default_value = "1000,10000,100000,1000000")]
        n: Vec<usize>,
        /// Also hold N below 1000 to the bounds
        #[arg(long)]
        strict: bool,
        /// Rounding of the [C log n] offsets in the growth/decay checks
        #[arg(long, value_enum, default_value = "floor")]
        offset_rounding: Rounding,
        /// Largest N in the oracle equivalence sweep
        #[arg(long, default_value_t = 200)]
        oracle_max_n: usize,
        /// Test hook: scale C2 before checking
        #[arg(long, hide = true)]
        corrupt_c2: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo excursion heights compared with the exact law
    Simulate {
        #[arg(long = "n")]
        n: usize,
        #[command(flatten)]
        rates: Rates,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "ladder")]
        mode: Mode,
        /// Worker threads; results do not depend on this
        #[arg(long, env = "BDHEIGHT_WORKERS")]
        workers: Option<usize>,
        /// DKW confidence parameter
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Per-excursion step budget for the walking modes
        #[arg(long, default_value_t = bdheight::simulate::DEFAULT_MAX_STEPS)]
        max_steps: u64,
        /// Exit 1 when the DKW check fails
        #[arg(long)]
        assert: bool,
        #[command(flatten)]
        out: Output,
    },
    /// E(H_N)/N and Var(H_N)/N against their limits over a list of N
    Sweep {
        #[arg(long, value_parser = parse_ratio)]
        rho: f64,
        #[arg(long = "n", value_delimiter = ',', required = true, num_args = 1..)]
        n: Vec<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Re-run the command recorded in an artifact and compare the bytes
    Replay { artifact: PathBuf },
}

fn parse_ratio(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
            a / b
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not a finite number: {s}"))
    }
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match commands::execute(cli, &raw) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
