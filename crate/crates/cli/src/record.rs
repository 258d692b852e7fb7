//! CSV rows and atomic CSV output.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// One point of a verify run or sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    pub n_system: usize,
    pub n_total: usize,
    #[serde(with = "sig17")]
    pub epsilon: f64,
    #[serde(with = "sig17")]
    pub delta: f64,
    #[serde(with = "sig17")]
    pub j: f64,
    #[serde(with = "sig17")]
    pub lambda_target: f64,
    #[serde(with = "sig17")]
    pub lambda_simulator: f64,
    #[serde(with = "sig17")]
    pub abs_error: f64,
    #[serde(with = "sig17")]
    pub budget: f64,
    /// Exponent of Δ in the leading error term of the slowest gadget used.
    #[serde(with = "sig17_opt")]
    pub bound_exponent_context: Option<f64>,
    /// `‖P e^S H e^{−S} P − H_target‖` with the exact generator, when computed.
    #[serde(with = "sig17_opt")]
    pub heff_error: Option<f64>,
    #[serde(with = "sig17")]
    pub wall_time_seconds: f64,
}

/// Tolerance for recomputing `abs_error` from the two energies.
pub const READBACK_TOL: f64 = 1e-12;

impl ScalingRecord {
    pub fn within_budget(&self) -> bool {
        self.abs_error <= self.budget
    }

    /// `abs_error` agrees with `|λ_target − λ_simulator|`.
    pub fn consistent(&self) -> bool {
        ((self.lambda_target - self.lambda_simulator).abs() - self.abs_error).abs() <= READBACK_TOL
    }
}

/// One line of a bounds run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub suite: String,
    pub instance: usize,
    pub k: usize,
    #[serde(with = "sig17")]
    pub t: f64,
    #[serde(with = "sig17")]
    pub value: f64,
    #[serde(with = "sig17")]
    pub bound: f64,
    pub satisfied: bool,
}

mod sig17 {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{x:.16e}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

mod sig17_opt {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_str(&format!("{v:.16e}")),
            None => s.serialize_str(""),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        let s = String::deserialize(d)?;
        let s = s.trim();
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(serde::de::Error::custom)
        }
    }
}

/// Serializes rows with a header line.
pub fn to_csv_string<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().context("flushing CSV buffer")?;
    Ok(String::from_utf8(bytes)?)
}

/// Writes the CSV through a temporary file in the destination directory and
/// renames it into place, so readers never observe a partial file.
pub fn write_csv_atomic<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    write_atomic(path, to_csv_string(rows)?.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ScalingRecord>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize()
        .map(|row| row.map_err(anyhow::Error::from))
        .collect()
}

pub fn parse_records(text: &str) -> Result<Vec<ScalingRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .map(|row| row.map_err(anyhow::Error::from))
        .collect()
}
