//! Canonical reports: versioned JSON, and a plain-text table view.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use lochom::gradedmod::Window;
use lochom::towers::{MLFailureCert, ProZeroCert};

use crate::error::Exit;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_summand: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Status {
    pub ok: bool,
    pub exit_code: i32,
    /// Every reported cell stabilized within the tower depth.
    pub stabilized: bool,
    pub window_limited: bool,
    pub messages: Vec<String>,
}

impl Status {
    pub fn ok() -> Self {
        Status { ok: true, exit_code: 0, stabilized: true, window_limited: false, messages: Vec::new() }
    }

    pub fn failed(exit: Exit, message: &str) -> Self {
        Status { ok: false, exit_code: exit.code(), stabilized: true, window_limited: false, messages: vec![message.to_string()] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "body", rename_all = "snake_case")]
pub enum Certificate {
    ProZero(ProZeroCert),
    MlFailure(MLFailureCert),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub parameters: Parameters,
    pub result: Value,
    pub certificates: Vec<Certificate>,
    pub status: Status,
}

impl Report {
    pub fn exit(&self) -> Exit {
        match self.status.exit_code {
            0 => Exit::Ok,
            2 => Exit::CertificateNotFound,
            3 => Exit::Mismatch,
            _ => Exit::InputError,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        render(&serde_json::to_value(&self.parameters).unwrap(), "parameters", 0, &mut out);
        render(&self.result, "result", 0, &mut out);
        if !self.certificates.is_empty() {
            writeln!(out, "certificates:").unwrap();
            for c in &self.certificates {
                match c {
                    Certificate::ProZero(p) => {
                        writeln!(out, "  pro_zero k={} witnesses={} cells={}", p.k, p.witnesses.len(), p.cells.len()).unwrap()
                    }
                    Certificate::MlFailure(m) => writeln!(
                        out,
                        "  ml_failure k={} summands={} grid={}x{} cells={}",
                        m.k,
                        m.truncation,
                        m.s_grid.len(),
                        m.t_grid.len(),
                        m.cells.len()
                    )
                    .unwrap(),
                }
            }
        }
        render(&serde_json::to_value(&self.status).unwrap(), "status", 0, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().any(|x| x.is_object()) => None,
        Value::Array(a) if a.len() > 16 => Some(format!("[{} items]", a.len())),
        Value::Array(_) => Some(serde_json::to_string(v).unwrap()),
        Value::Object(_) => None,
    }
}

fn flat_rows(a: &[Value]) -> Option<Vec<String>> {
    let first = a.first()?.as_object()?;
    let keys: Vec<String> = first.keys().cloned().collect();
    a.iter()
        .all(|r| r.as_object().is_some_and(|o| o.len() == keys.len() && o.values().all(|x| scalar(x).is_some())))
        .then_some(keys)
}

fn render(v: &Value, key: &str, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    if let Some(s) = scalar(v) {
        writeln!(out, "{pad}{key}: {s}").unwrap();
        return;
    }
    match v {
        Value::Object(o) => {
            writeln!(out, "{pad}{key}:").unwrap();
            for (k, x) in o {
                if k == "matrix" || k == "basis" {
                    continue;
                }
                render(x, k, indent + 1, out);
            }
        }
        Value::Array(a) => match flat_rows(a) {
            Some(keys) => {
                writeln!(out, "{pad}{key}:").unwrap();
                let keys: Vec<&String> = keys.iter().filter(|k| *k != "matrix" && *k != "basis").collect();
                let rows: Vec<Vec<String>> =
                    a.iter().map(|r| keys.iter().map(|k| scalar(&r[k.as_str()]).unwrap_or_default()).collect()).collect();
                let widths: Vec<usize> = keys
                    .iter()
                    .enumerate()
                    .map(|(i, k)| rows.iter().map(|r| r[i].len()).chain([k.len()]).max().unwrap_or(0))
                    .collect();
                let line = |cells: Vec<&str>| cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
                writeln!(out, "{pad}  {}", line(keys.iter().map(|k| k.as_str()).collect())).unwrap();
                for r in &rows {
                    writeln!(out, "{pad}  {}", line(r.iter().map(|c| c.as_str()).collect())).unwrap();
                }
            }
            None => {
                writeln!(out, "{pad}{key}:").unwrap();
                for (i, x) in a.iter().enumerate() {
                    render(x, &format!("[{i}]"), indent + 1, out);
                }
            }
        },
        _ => unreachable!("scalars handled above"),
    }
}
