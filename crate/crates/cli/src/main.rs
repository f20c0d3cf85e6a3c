use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use emdec_cli::config::parse_config;
use emdec_cli::runner::run;
use emdec_cli::spectrum_cmd::{run_spectrum, SpectrumArgs};
use emdec_cli::validate::validate_path;
use emdec_cli::{CliError, OUTPUT_DIR_ENV};

/// Structure-preserving Maxwell solvers on primal/dual meshes.
#[derive(Parser)]
#[command(name = "emdec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation described by a config file.
    Run { config: PathBuf },
    /// Check a mesh file, or the mesh a config describes.
    Validate { input: PathBuf },
    /// Periodogram and peaks of one column of an output CSV.
    Spectrum {
        csv: PathBuf,
        #[arg(long)]
        column: Option<String>,
        #[arg(long, default_value_t = 10.0)]
        prominence: f64,
        #[arg(long, default_value_t = 1)]
        neighborhood: usize,
        /// Output directory (default: next to the input).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn env_dir() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Io(format!("{}: {e}", config.display())))?;
            let cfg = parse_config(&text, config.parent().unwrap_or(Path::new(".")))?;
            let out = env_dir().unwrap_or_else(|| cfg.output_dir.clone());
            let report = run(&cfg, &text, &out)?;
            emit(&report.manifest);
            Ok(())
        }
        Command::Validate { input } => {
            let report = validate_path(&input)?;
            emit(&report.to_string());
            if report.failed() {
                return Err(CliError::Numeric("validation found failures".into()));
            }
            Ok(())
        }
        Command::Spectrum {
            csv,
            column,
            prominence,
            neighborhood,
            out,
        } => {
            let args = SpectrumArgs {
                input: csv,
                column,
                prominence,
                neighborhood,
                out_dir: env_dir().or(out),
            };
            let (spec, files) = run_spectrum(&args)?;
            let mut text = format!("bin width {:.6e}\n", spec.bin_width());
            for (i, f) in spec.peaks.iter().enumerate() {
                text += &format!("peak {} {f:.6}\n", i + 1);
            }
            for f in files {
                text += &format!("wrote {}\n", f.display());
            }
            emit(&text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("emdec: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
