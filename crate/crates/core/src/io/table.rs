use std::io::Write;
use std::path::Path;

use csv::StringRecord;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::experiments::{DistanceRecord, Grid2dRecord, NoiseRecord, SizeRecord};

/// Significant digits of every floating-point CSV value.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `%.12g`: fixed notation for exponents in `[-5, 12)`, scientific otherwise,
/// trailing zeros removed.
pub fn format_sig(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// A row type with a fixed CSV schema.
pub trait CsvRow: Sized {
    const HEADER: &'static [&'static str];
    fn to_fields(&self) -> Vec<String>;
    fn from_fields(row: &StringRecord) -> Result<Self>;
}

fn field<T: std::str::FromStr>(row: &StringRecord, k: usize, name: &str) -> Result<T> {
    let raw = row
        .get(k)
        .ok_or_else(|| Error::validation(format!("missing column {name}")))?;
    raw.trim()
        .parse()
        .map_err(|_| Error::validation(format!("column {name}: cannot parse {raw:?}")))
}

impl CsvRow for DistanceRecord {
    const HEADER: &'static [&'static str] = &["r_angstrom", "amplitude", "lambda", "excited_energy_ghz", "status"];

    fn to_fields(&self) -> Vec<String> {
        vec![
            format_sig(self.r_angstrom),
            format_sig(self.amplitude),
            format_sig(self.lambda),
            format_sig(self.excited_energy_ghz),
            self.status.clone(),
        ]
    }

    fn from_fields(row: &StringRecord) -> Result<Self> {
        Ok(DistanceRecord {
            r_angstrom: field(row, 0, "r_angstrom")?,
            amplitude: field(row, 1, "amplitude")?,
            lambda: field(row, 2, "lambda")?,
            excited_energy_ghz: field(row, 3, "excited_energy_ghz")?,
            status: field(row, 4, "status")?,
        })
    }
}

impl CsvRow for SizeRecord {
    const HEADER: &'static [&'static str] = &["n", "interacting", "amplitude", "lambda", "status"];

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.interacting.to_string(),
            format_sig(self.amplitude),
            format_sig(self.lambda),
            self.status.clone(),
        ]
    }

    fn from_fields(row: &StringRecord) -> Result<Self> {
        Ok(SizeRecord {
            n: field(row, 0, "n")?,
            interacting: field(row, 1, "interacting")?,
            amplitude: field(row, 2, "amplitude")?,
            lambda: field(row, 3, "lambda")?,
            status: field(row, 4, "status")?,
        })
    }
}

impl CsvRow for Grid2dRecord {
    const HEADER: &'static [&'static str] = &["n", "plane", "amplitude", "lambda", "status"];

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.plane.label().to_string(),
            format_sig(self.amplitude),
            format_sig(self.lambda),
            self.status.clone(),
        ]
    }

    fn from_fields(row: &StringRecord) -> Result<Self> {
        Ok(Grid2dRecord {
            n: field(row, 0, "n")?,
            plane: field(row, 1, "plane")?,
            amplitude: field(row, 2, "amplitude")?,
            lambda: field(row, 3, "lambda")?,
            status: field(row, 4, "status")?,
        })
    }
}

impl CsvRow for NoiseRecord {
    const HEADER: &'static [&'static str] = &[
        "sigma_d_ghz",
        "sigma_r_angstrom",
        "mean_amplitude",
        "std_amplitude",
        "mean_lambda",
        "std_lambda",
        "reps",
        "resamples",
        "status",
    ];

    fn to_fields(&self) -> Vec<String> {
        vec![
            format_sig(self.sigma_d_ghz),
            format_sig(self.sigma_r_angstrom),
            format_sig(self.mean_amplitude),
            format_sig(self.std_amplitude),
            format_sig(self.mean_lambda),
            format_sig(self.std_lambda),
            self.reps.to_string(),
            self.resamples.to_string(),
            self.status.clone(),
        ]
    }

    fn from_fields(row: &StringRecord) -> Result<Self> {
        Ok(NoiseRecord {
            sigma_d_ghz: field(row, 0, "sigma_d_ghz")?,
            sigma_r_angstrom: field(row, 1, "sigma_r_angstrom")?,
            mean_amplitude: field(row, 2, "mean_amplitude")?,
            std_amplitude: field(row, 3, "std_amplitude")?,
            mean_lambda: field(row, 4, "mean_lambda")?,
            std_lambda: field(row, 5, "std_lambda")?,
            reps: field(row, 6, "reps")?,
            resamples: field(row, 7, "resamples")?,
            status: field(row, 8, "status")?,
        })
    }
}

/// One file written by a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` to a temporary file next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<OutputEntry> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(OutputEntry {
        path: path.display().to_string(),
        sha256: sha256_hex(bytes),
        bytes: bytes.len(),
    })
}

pub fn csv_bytes<R: CsvRow>(records: &[R]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(R::HEADER)?;
    for r in records {
        w.write_record(r.to_fields())?;
    }
    w.into_inner()
        .map_err(|e| Error::validation(format!("csv buffer: {e}")))
}

pub fn write_csv<R: CsvRow>(records: &[R], path: &Path) -> Result<OutputEntry> {
    write_atomic(path, &csv_bytes(records)?)
}

pub fn read_csv<R: CsvRow>(path: &Path) -> Result<Vec<R>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let header = rdr.headers()?.clone();
    if header.iter().ne(R::HEADER.iter().copied()) {
        return Err(Error::validation(format!(
            "{}: header {:?} does not match {:?}",
            path.display(),
            header.iter().collect::<Vec<_>>(),
            R::HEADER
        )));
    }
    rdr.records().map(|r| R::from_fields(&r?)).collect()
}

/// First two numeric columns of a CSV with a header row.
pub fn read_xy(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for r in rdr.records() {
        let r = r?;
        xs.push(field(&r, 0, "x")?);
        ys.push(field(&r, 1, "y")?);
    }
    Ok((xs, ys))
}
