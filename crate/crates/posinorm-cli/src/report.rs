//! Report assembly and output: every command produces one RunReport
//! serialized as JSON (sorted keys, shortest-round-trip floats), so a
//! fixed command line with a fixed seed yields byte-identical bytes
//! once timestamps are suppressed. Sigma curves can be emitted as CSV
//! instead.

use num_complex::Complex64;
use posinorm::rangelab::PowerDiagnosis;
use posinorm::{CMatrix, Error, Result, ToleranceConfig};
use serde::Serialize;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::matfile::MatrixFile;

#[derive(Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub seed: u64,
    pub tolerances: ToleranceEcho,
    pub input: Value,
    pub results: Value,
    pub summary: Summary,
}

#[derive(Serialize)]
pub struct ToleranceEcho {
    pub rank_rtol: f64,
    pub psd_rtol: f64,
    pub residual_rtol: f64,
}

#[derive(Serialize)]
pub struct Summary {
    pub pass: bool,
    pub failures: Vec<String>,
}

impl RunReport {
    pub fn new(
        seed: u64,
        tol: &ToleranceConfig,
        no_timestamp: bool,
        input: Value,
        results: Value,
        failures: Vec<String>,
    ) -> Self {
        let timestamp = if no_timestamp {
            None
        } else {
            Some(
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
            )
        };
        RunReport {
            tool: "posinorm".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
            seed,
            tolerances: ToleranceEcho {
                rank_rtol: tol.rank_rtol,
                psd_rtol: tol.psd_rtol,
                residual_rtol: tol.residual_rtol,
            },
            input,
            results,
            summary: Summary {
                pass: failures.is_empty(),
                failures,
            },
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("report serialization failed: {e}")))
    }
}

/// Basis positions are reported in both conventions to avoid
/// off-by-one confusion: "e1 (index 0)".
pub fn basis_position(index: usize) -> String {
    format!("e{} (index {})", index + 1, index)
}

pub fn complex_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

pub fn matrix_json(m: &CMatrix, label: Option<String>) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(m, label)).expect("matrix serialization")
}

/// CSV for sigma curves: one row per (size, power) sample; an empty
/// sigma field marks a numerically zero power matrix.
pub fn curves_to_csv(report: &[PowerDiagnosis]) -> String {
    let mut out = String::from("n,k,sigma_min_nonzero,rank\n");
    for pd in report {
        for p in &pd.diagnosis.curve {
            let sigma = p.sigma.map(|s| s.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", p.n, pd.k, sigma, p.rank));
        }
    }
    out
}

/// Writes text to --out or stdout, normalized to exactly one trailing
/// newline so repeated runs are byte-comparable.
pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    let body = format!("{}\n", text.trim_end_matches('\n'));
    match out {
        Some(path) => std::fs::write(path, &body)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write!(lock, "{body}")
                .map_err(|e| Error::Internal(format!("stdout write failed: {e}")))
        }
    }
}
