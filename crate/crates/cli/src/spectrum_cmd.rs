//! Periodogram of one column of a time-series CSV.

use std::path::{Path, PathBuf};

use emdec::diagnostics::{spectrum, Spectrum};
use emdec::io::{parse_table, peaks_csv, spectrum_csv, write_atomic};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct SpectrumArgs {
    pub input: PathBuf,
    /// Column to analyse; defaults to `total` when present, else the first
    /// column after `time`.
    pub column: Option<String>,
    pub prominence: f64,
    pub neighborhood: usize,
    pub out_dir: Option<PathBuf>,
}

/// Computes the spectrum and writes `<stem>.spectrum.csv` and
/// `<stem>.peaks.csv`. Returns the spectrum and the written paths.
pub fn run_spectrum(args: &SpectrumArgs) -> Result<(Spectrum, Vec<PathBuf>), CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let table = parse_table(&text).map_err(|e| CliError::Config(format!("{}: {e}", args.input.display())))?;
    let time = table
        .column("time")
        .ok_or_else(|| CliError::Config("input has no 'time' column".into()))?;
    let name = match &args.column {
        Some(c) => c.clone(),
        None if table.header.iter().any(|h| h == "total") => "total".into(),
        None => table
            .header
            .iter()
            .find(|h| *h != "time")
            .cloned()
            .ok_or_else(|| CliError::Config("input has no data column".into()))?,
    };
    let series = table
        .column(&name)
        .ok_or_else(|| CliError::Config(format!("no column '{name}'")))?;
    if time.len() < 2 {
        return Err(CliError::Numeric(format!("series has {} samples, need at least 16", time.len())));
    }
    let dt = time[1] - time[0];
    // tolerate the printed precision of the time column
    if let Some(i) = time.windows(2).position(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt.abs()) {
        return Err(CliError::Numeric(format!("time column is not uniform at row {}", i + 2)));
    }
    let spec = spectrum(series, dt, args.prominence, args.neighborhood)
        .map_err(|e| CliError::Numeric(e.to_string()))?;

    let dir = match &args.out_dir {
        Some(d) => d.clone(),
        None => args.input.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let stem = args.input.file_stem().and_then(|s| s.to_str()).unwrap_or("series");
    let mut written = Vec::new();
    for (suffix, body) in [("spectrum", spectrum_csv(&spec)), ("peaks", peaks_csv(&spec))] {
        let path = dir.join(format!("{stem}.{suffix}.csv"));
        write_atomic(&path, body.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok((spec, written))
}
