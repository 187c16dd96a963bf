//! `mahler`: Mahler measures, family identities and L-values from the
//! command line.

mod commands;
mod report;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mahler_core::families::Family;
use mahler_core::mahler::DEFAULT_TOL;

use commands::{CliError, Settings};
use report::{Format, RunReport};
use suites::Suite;

#[derive(Parser, Debug)]
#[command(name = "mahler", version, about = "Mahler measures of the P/Q/R families and related L-values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Quadrature tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Override the pass/fail threshold of the checks.
    #[arg(long, global = true)]
    check_tol: Option<f64>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for sweeps and verify suites.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mahler measure of a polynomial in x, y (and k).
    Measure {
        poly: String,
        /// Value for the parameter k.
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        /// Cross-check with the two-dimensional torus rule.
        #[arg(long)]
        torus: bool,
    },
    /// Measure and derivative of a family member. For Q, k names Q_{k+2}.
    Family {
        family: Family,
        #[arg(long, allow_negative_numbers = true)]
        k: f64,
        /// Also run the generic engine on the original polynomial.
        #[arg(long)]
        cross_check: bool,
    },
    /// Closed-form dm/dk against a central difference.
    Derivative {
        family: Family,
        #[arg(long)]
        k: f64,
    },
    /// Run an identity or invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        k: Option<Vec<f64>>,
    },
    /// Tabulate k, m, dm/dk over an evenly spaced range.
    Sweep {
        family: Family,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        steps: usize,
    },
    /// L-function data of an elliptic curve: `224`, `210`, `ek:K` or `a1,a2,a3,a4,a6`.
    Lvalue {
        #[arg(allow_hyphen_values = true)]
        curve: String,
        #[arg(long)]
        conductor: Option<u64>,
        /// Extra points at which to print Lambda(s).
        #[arg(long, value_delimiter = ',')]
        s: Vec<f64>,
    },
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let c = &cli.common;
    if !(c.tol > 0.0 && c.tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {}", c.tol)));
    }
    if c.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let settings = Settings { tol: c.tol, check_tol: c.check_tol, jobs: c.jobs };
    let echo = std::iter::once("mahler".to_string()).chain(std::env::args().skip(1)).collect::<Vec<_>>().join(" ");
    let mut r = RunReport::new(echo);
    let start = Instant::now();
    match &cli.command {
        Command::Measure { poly, k, torus } => commands::measure(&mut r, &settings, poly, *k, *torus)?,
        Command::Family { family, k, cross_check } => commands::family(&mut r, &settings, *family, *k, *cross_check)?,
        Command::Derivative { family, k } => commands::derivative(&mut r, &settings, *family, *k)?,
        Command::Verify { suite, k } => suites::verify(&mut r, &settings, *suite, k.clone())?,
        Command::Sweep { family, from, to, steps } => commands::sweep(&mut r, &settings, *family, *from, *to, *steps)?,
        Command::Lvalue { curve, conductor, s } => {
            let curve = commands::parse_curve(curve, *conductor)?;
            commands::lvalue(&mut r, &settings, &curve, s)?
        }
    }
    r.finish(start.elapsed().as_secs_f64());
    Ok(r)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("mahler: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let text = report.render(cli.common.format);
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("mahler: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
