use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectral_torsion::cli::{
    lemma_check, load_scenario, run_report, verify_sweep, CliError, LemmaName, DEFAULT_TOLERANCE,
};
use spectral_torsion::ScalarKind;

/// Residue density of the spectral torsion functional for a rescaled Dirac
/// operator, checked term by term against independent routes.
#[derive(Parser)]
#[command(name = "spectral-torsion", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute every density term for one scenario file and compare.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Relative tolerance for float-mode comparisons.
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the pipeline invariants on random scenarios.
    Sweep {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "exact")]
        mode: ScalarKind,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
    /// Run one targeted verification: laplacian, square, inverse, trace,
    /// contraction, sphere or gamma.
    Lemma {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(json: String, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, json + "\n").map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn run(args: Args) -> Result<i32, CliError> {
    match args.command {
        Command::Run {
            scenario,
            tolerance,
            output,
        } => {
            let doc = load_scenario(&scenario)?;
            let report = run_report(&doc, tolerance)?;
            eprint!("{}", report.diff_table());
            emit(report.to_json(), output.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Sweep {
            m,
            trials,
            seed,
            mode,
            tolerance,
        } => {
            let summary = verify_sweep(m, trials, seed, mode, tolerance)?;
            eprint!("{}", summary.table());
            emit(
                serde_json::to_string_pretty(&summary).expect("serializable"),
                None,
            )?;
            Ok(summary.exit_code())
        }
        Command::Lemma { name, seed } => {
            let name: LemmaName = name.parse()?;
            let summary = lemma_check(name, seed);
            for c in &summary.cases {
                let status = if c.pass { "ok  " } else { "FAIL" };
                match &c.detail {
                    Some(d) => eprintln!("{status} {}: {d}", c.label),
                    None => eprintln!("{status} {}", c.label),
                }
            }
            eprintln!(
                "{name}: {} of {} cases failed",
                summary.failures(),
                summary.cases.len()
            );
            emit(
                serde_json::to_string_pretty(&summary).expect("serializable"),
                None,
            )?;
            Ok(summary.exit_code())
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
