//! CSV formats and atomic file output.
//!
//! All CSVs use `,` separators, LF line endings, a header row, and Rust's
//! shortest round-trip float formatting, so equal values give equal bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::diagnostics::Spectrum;
use crate::integrators::Sample;

/// Writes `contents` to a temporary file beside `path` and renames it into
/// place, so `path` is either absent, the old file, or fully written.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| std::io::Error::new(std::io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// `time,E_energy,B_energy,total`.
pub fn energy_csv(samples: &[Sample]) -> String {
    let mut out = String::from("time,E_energy,B_energy,total\n");
    for s in samples {
        let _ = writeln!(out, "{},{},{},{}", s.time, s.electric, s.magnetic, s.total);
    }
    out
}

/// `time,divb,gauss`.
pub fn residuals_csv(samples: &[Sample]) -> String {
    let mut out = String::from("time,divb,gauss\n");
    for s in samples {
        let _ = writeln!(out, "{},{},{}", s.time, s.divb, s.gauss);
    }
    out
}

/// `time,<label>...`, one column per probe.
pub fn probes_csv(samples: &[Sample], labels: &[String]) -> String {
    let mut out = String::from("time");
    for l in labels {
        out.push(',');
        out.push_str(l);
    }
    out.push('\n');
    for s in samples {
        let _ = write!(out, "{}", s.time);
        for v in &s.probes {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// `frequency,power`.
pub fn spectrum_csv(spec: &Spectrum) -> String {
    let mut out = String::from("frequency,power\n");
    for (f, p) in spec.frequencies.iter().zip(&spec.power) {
        let _ = writeln!(out, "{f},{p}");
    }
    out
}

/// `rank,frequency`, ranks from 1 in ascending frequency.
pub fn peaks_csv(spec: &Spectrum) -> String {
    let mut out = String::from("rank,frequency\n");
    for (i, f) in spec.peaks.iter().enumerate() {
        let _ = writeln!(out, "{},{f}", i + 1);
    }
    out
}

/// Field dump: a `# form=..,degree=..,placement=..,time=..` line, then
/// `cell_index,value` rows.
pub fn snapshot_csv(form: &str, degree: usize, placement: &str, time: f64, values: &[f64]) -> String {
    let mut out = format!("# form={form},degree={degree},placement={placement},time={time}\ncell_index,value\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i},{v}");
    }
    out
}

/// A parsed numeric CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(&self.columns[i])
    }
}

/// Parses a CSV with one header row and numeric rows; `#` lines are skipped.
pub fn parse_table(text: &str) -> Result<Table, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (_, head) = lines.next().ok_or("empty file")?;
    let header: Vec<String> = head.split(',').map(|s| s.trim().to_string()).collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (i, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(format!(
                "line {}: {} fields, header has {}",
                i + 1,
                fields.len(),
                header.len()
            ));
        }
        for (col, f) in columns.iter_mut().zip(fields) {
            let v: f64 = f
                .trim()
                .parse()
                .map_err(|_| format!("line {}: `{}` is not a number", i + 1, f.trim()))?;
            col.push(v);
        }
    }
    Ok(Table { header, columns })
}
