use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use majorana::io::{
    format_number, parse_star_file, parse_stars, parse_state, parse_state_file, stars_json,
    state_json, write_family_csv, write_matrix_csv, write_series_csv,
};
use majorana::psi::derive_psi_coefficients;
use majorana::scan::{family_scan, scan_alpha};
use majorana::stellar::{stars, state_from_stars};
use majorana::transition::{probability, transition_matrix, TransitionSpec};
use majorana::verify::{run_all, VerifyConfig, DEFAULT_SEED};
use majorana::{Error, HalfInt, SpinState, StarSet};

/// Majorana stars of spin-j states and matching probabilities of oriented spins.
///
/// Quantum numbers are passed doubled: `--two-j 3` means j = 3/2.
#[derive(Parser, Debug)]
#[command(name = "majorana", version)]
struct Cli {
    /// Tolerance floor for `verify`; can only loosen the built-in tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Majorana stars of a state file as JSON.
    Stars {
        /// State file; reads stdin when omitted or `-`.
        input: Option<PathBuf>,
        /// Rescale amplitudes to unit norm instead of rejecting them.
        #[arg(long)]
        normalize: bool,
    },
    /// Rebuild a state from a star file and print it as JSON.
    Reconstruct {
        /// Star file; reads stdin when omitted or `-`.
        input: Option<PathBuf>,
    },
    /// Print one matching probability.
    #[command(allow_negative_numbers = true)]
    Prob {
        #[arg(long)]
        two_j: i32,
        #[arg(long)]
        two_m: i32,
        #[arg(long)]
        two_mp: i32,
        #[arg(long)]
        alpha: f64,
    },
    /// Print all matching probabilities for one j as CSV (row m', column m).
    #[command(allow_negative_numbers = true)]
    Matrix {
        #[arg(long)]
        two_j: i32,
        #[arg(long)]
        alpha: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Evaluate probabilities on a uniform alpha grid and write CSV.
    ///
    /// Either a single family (--two-j, --two-m, --two-mp) or a list of spins
    /// with m = m' = S - k (--two-s 1,2,3 --k 0).
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long, required_unless_present = "two_s", conflicts_with = "two_s")]
        two_j: Option<i32>,
        #[arg(long, requires = "two_j")]
        two_m: Option<i32>,
        #[arg(long, requires = "two_j")]
        two_mp: Option<i32>,
        #[arg(long, value_delimiter = ',')]
        two_s: Option<Vec<i32>>,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = std::f64::consts::TAU)]
        alpha_max: f64,
        #[arg(long, default_value_t = 181)]
        steps: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Factor the m = m' = S - k probability family as q cos^(4(S-k))(a/2) Psi(cos a)^2.
    DerivePsi {
        #[arg(long)]
        two_s: i32,
        #[arg(long)]
        k: usize,
    },
    /// Run the invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = majorana::verify::DEFAULT_MAX_TWO_J)]
        max_two_j: i32,
    },
}

enum Failure {
    Usage(String),
    Numerical(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::NonConvergence { .. } | Error::NotPerfectSquare { .. } => {
                Failure::Numerical(err.to_string())
            }
            _ => Failure::Usage(err.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Usage(err.to_string())
    }
}

fn read_input(path: Option<&PathBuf>) -> io::Result<Option<String>> {
    match path {
        Some(p) if p.as_os_str() != "-" => Ok(None),
        _ => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            Ok(Some(text))
        }
    }
}

fn load_state(path: Option<&PathBuf>, normalize: bool) -> Result<SpinState, Failure> {
    Ok(match read_input(path)? {
        Some(text) => parse_state(&text, normalize)?,
        None => parse_state_file(path.unwrap(), normalize)?,
    })
}

fn load_stars(path: Option<&PathBuf>) -> Result<StarSet, Failure> {
    Ok(match read_input(path)? {
        Some(text) => parse_stars(&text)?,
        None => parse_star_file(path.unwrap())?,
    })
}

fn sink(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    match cli.command {
        Command::Stars { input, normalize } => {
            let state = load_state(input.as_ref(), normalize)?;
            writeln!(stdout, "{}", stars_json(&stars(&state)?))?;
        }
        Command::Reconstruct { input } => {
            let star_set = load_stars(input.as_ref())?;
            writeln!(stdout, "{}", state_json(&state_from_stars(&star_set)?))?;
        }
        Command::Prob {
            two_j,
            two_m,
            two_mp,
            alpha,
        } => {
            let spec = TransitionSpec::new(two_j, two_m, two_mp, alpha)?;
            writeln!(stdout, "{}", format_number(probability(&spec)))?;
        }
        Command::Matrix {
            two_j,
            alpha,
            output,
        } => {
            let matrix = transition_matrix(HalfInt::spin(two_j)?, alpha)?;
            let mut out = sink(output.as_ref())?;
            write_matrix_csv(&matrix, &mut out)?;
            out.flush()?;
        }
        Command::Scan {
            two_j,
            two_m,
            two_mp,
            two_s,
            k,
            alpha_min,
            alpha_max,
            steps,
            output,
        } => {
            let mut out = sink(output.as_ref())?;
            match (two_s, two_j) {
                (Some(list), _) => write_family_csv(
                    &family_scan(&list, k, alpha_min, alpha_max, steps)?,
                    &mut out,
                )?,
                (None, Some(j)) => {
                    let (Some(m), Some(mp)) = (two_m, two_mp) else {
                        return Err(Failure::Usage(
                            "scan needs --two-m and --two-mp with --two-j".into(),
                        ));
                    };
                    write_series_csv(
                        &scan_alpha(j, m, mp, alpha_min, alpha_max, steps)?,
                        &mut out,
                    )?;
                }
                (None, None) => return Err(Failure::Usage("scan needs --two-j or --two-s".into())),
            }
            out.flush()?;
        }
        Command::DerivePsi { two_s, k } => {
            let fit = derive_psi_coefficients(HalfInt::spin(two_s)?, k)?;
            writeln!(
                stdout,
                "{}",
                serde_json::to_string(&fit).expect("fit serializes")
            )?;
        }
        Command::Verify { max_two_j } => {
            if max_two_j < 1 {
                return Err(Failure::Usage(format!(
                    "--max-two-j must be positive, got {max_two_j}"
                )));
            }
            let seed = match std::env::var("MAJORANA_SEED") {
                Ok(s) => s.parse().map_err(|_| {
                    Failure::Usage(format!(
                        "MAJORANA_SEED must be an unsigned integer, got {s:?}"
                    ))
                })?,
                Err(_) => DEFAULT_SEED,
            };
            let config = VerifyConfig {
                max_two_j,
                seed,
                tol: cli.tol,
            };
            let reports = run_all(&config);
            for r in &reports {
                writeln!(stdout, "{r}")?;
            }
            let failures = reports.iter().filter(|r| !r.passed).count();
            writeln!(
                stdout,
                "{} of {} checks passed",
                reports.len() - failures,
                reports.len()
            )?;
            if failures > 0 {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(1),
    }
}
