//! Independent re-verification of the certificates embedded in a report.
//!
//! Only the report text is read: every claimed rank is recomputed from the
//! embedded matrices, and the witness structure is re-checked against the
//! recomputed ranks.

use serde::de::DeserializeOwned;
use serde_json::Value;

use lochom::exactla::SparseMatrix;
use lochom::towers::{MLFailureCert, MatrixCell, ProZeroCert};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("malformed report: {0}")]
    Malformed(String),
    #[error("rank mismatch in certificate {index}: {detail}")]
    RankMismatch { index: usize, detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifySummary {
    pub certificates: usize,
    pub cells: usize,
}

fn typed<T: DeserializeOwned>(v: &Value, i: usize) -> Result<T, VerifyError> {
    // Round-trip through text so integer map keys parse as they were written.
    serde_json::from_str(&v.to_string()).map_err(|e| VerifyError::Malformed(format!("certificate {i}: {e}")))
}

fn well_formed(m: &SparseMatrix) -> bool {
    m.columns().len() == m.cols() && m.columns().iter().all(|c| c.max_index().is_none_or(|r| r < m.rows()))
}

fn check_cells(cells: &[MatrixCell], i: usize) -> Result<(), VerifyError> {
    match cells.iter().find(|c| !well_formed(&c.matrix)) {
        Some(c) => Err(VerifyError::Malformed(format!("certificate {i}: matrix for {}→{} degree {} is inconsistent", c.from, c.to, c.degree))),
        None => Ok(()),
    }
}

pub fn verify_report(text: &str) -> Result<VerifySummary, VerifyError> {
    let v: Value = serde_json::from_str(text).map_err(|e| VerifyError::Malformed(e.to_string()))?;
    if v.get("schema").and_then(Value::as_u64) != Some(1) {
        return Err(VerifyError::Malformed("missing or unsupported `schema`".into()));
    }
    let certs = v.get("certificates").and_then(Value::as_array).ok_or_else(|| VerifyError::Malformed("no `certificates` array".into()))?;
    if certs.is_empty() {
        return Err(VerifyError::Malformed("report carries no certificate".into()));
    }
    let mut cells = 0;
    for (i, c) in certs.iter().enumerate() {
        let body = c.get("body").ok_or_else(|| VerifyError::Malformed(format!("certificate {i} has no body")))?;
        let outcome = match c.get("kind").and_then(Value::as_str) {
            Some("pro_zero") => {
                let cert: ProZeroCert = typed(body, i)?;
                check_cells(&cert.cells, i)?;
                cells += cert.cells.len();
                cert.verify()
            }
            Some("ml_failure") => {
                let cert: MLFailureCert = typed(body, i)?;
                check_cells(&cert.cells, i)?;
                cells += cert.cells.len();
                cert.verify()
            }
            other => return Err(VerifyError::Malformed(format!("certificate {i} has unknown kind {other:?}"))),
        };
        outcome.map_err(|detail| VerifyError::RankMismatch { index: i, detail })?;
    }
    Ok(VerifySummary { certificates: certs.len(), cells })
}
