//! Check results and their JSON, CSV and text renderings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cli::RunConfig;
use crate::error::{Error, Result};
use crate::linalg::{Scalar, Vector};
use crate::torus::Degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// An expected or observed value: a count or an exact textual rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(x) => write!(f, "{x}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&Scalar> for Cell {
    fn from(x: &Scalar) -> Self {
        Cell::Text(x.to_string())
    }
}

/// One expected/actual record, usually attached to a degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Detail {
    /// empty for records that are not tied to a fiber
    pub degree: Vec<i64>,
    pub expected: Cell,
    pub actual: Cell,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Detail {
    /// A record whose status is `expected == actual`.
    pub fn compare(degree: Option<&Degree>, expected: impl Into<Cell>, actual: impl Into<Cell>, note: impl Into<String>) -> Self {
        let (expected, actual) = (expected.into(), actual.into());
        let status = Status::from_bool(expected == actual);
        Detail { degree: degree.map(|d| d.0.clone()).unwrap_or_default(), expected, actual, status, note: non_empty(note.into()) }
    }

    /// A boolean claim: expected `true`.
    pub fn claim(degree: Option<&Degree>, holds: bool, note: impl Into<String>) -> Self {
        Self::compare(degree, true, holds, note)
    }

    pub fn skipped(note: impl Into<String>) -> Self {
        Detail {
            degree: Vec::new(),
            expected: Cell::Text(String::new()),
            actual: Cell::Text(String::new()),
            status: Status::Skipped,
            note: non_empty(note.into()),
        }
    }
}

fn non_empty(s: String) -> Option<String> {
    if s.is_empty() {
        None
    } else {
        Some(s)
    }
}

/// Parameters a check ran with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckParams {
    #[serde(rename = "N")]
    pub n: usize,
    /// `None` runs every valid `p`
    pub p: Option<usize>,
    pub beta: Vector,
    pub alpha: Vector,
    pub window: i64,
    pub rbound: i64,
    pub seed: u64,
    /// random probes per family
    pub samples: usize,
}

impl CheckParams {
    /// `β = 0`, `α = 0`, the default window, generator bound 1, seed 0, 100
    /// samples.
    pub fn new(n: usize) -> Self {
        CheckParams {
            n,
            p: None,
            beta: Vector::zeros(n),
            alpha: Vector::zeros(n),
            window: crate::cli::default_window(n),
            rbound: 1,
            seed: 0,
            samples: 100,
        }
    }

    pub fn with_p(mut self, p: usize) -> Self {
        self.p = Some(p);
        self
    }

    pub fn with_beta(mut self, beta: Vector) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_alpha(mut self, alpha: Vector) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_window(mut self, d: i64) -> Self {
        self.window = d;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    /// `β = (1/2, 0, …, 0)`.
    pub fn half_beta(n: usize) -> Vector {
        let mut b = Vector::zeros(n);
        if n > 0 {
            b.0[0] = Scalar::new(1, 2).expect("nonzero denominator");
        }
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub params: CheckParams,
    pub status: Status,
    /// what the check establishes when it is not a complete verification
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scope: Option<String>,
    pub details: Vec<Detail>,
}

impl CheckResult {
    /// FAIL if any record fails, SKIPPED if every record is skipped (or there
    /// are none), PASS otherwise.
    pub fn new(check_id: &str, params: CheckParams, details: Vec<Detail>) -> Self {
        let status = if details.iter().any(|d| d.status == Status::Fail) {
            Status::Fail
        } else if details.iter().all(|d| d.status == Status::Skipped) {
            Status::Skipped
        } else {
            Status::Pass
        };
        CheckResult { check_id: check_id.to_string(), params, status, scope: None, details }
    }

    pub fn with_scope(mut self, scope: &str) -> Self {
        self.scope = Some(scope.to_string());
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Detail> {
        self.details.iter().filter(|d| d.status == Status::Fail)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub version: String,
    pub config: RunConfig,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn new(config: RunConfig, results: Vec<CheckResult>) -> Self {
        let mut summary = Summary::default();
        for r in &results {
            match r.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Skipped => summary.skipped += 1,
            }
        }
        ReportDocument { version: env!("CARGO_PKG_VERSION").to_string(), config, results, summary }
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail == 0 {
            0
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

fn degree_text(d: &[i64]) -> String {
    if d.is_empty() {
        String::new()
    } else {
        Degree(d.to_vec()).to_string()
    }
}

pub fn emit(doc: &ReportDocument, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(doc).map_err(|e| Error::Structural(e.to_string()))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Structural(e.to_string());
            w.write_record(["check_id", "degree", "expected", "actual", "status"]).map_err(io)?;
            for r in &doc.results {
                for d in &r.details {
                    w.write_record([
                        r.check_id.as_str(),
                        &degree_text(&d.degree),
                        &d.expected.to_string(),
                        &d.actual.to_string(),
                        &d.status.to_string(),
                    ])
                    .map_err(io)?;
                }
            }
            w.into_inner().map_err(|e| Error::Structural(e.to_string()))
        }
        Format::Text => Ok(text(doc).into_bytes()),
    }
}

fn text(doc: &ReportDocument) -> String {
    use fmt::Write;
    let mut s = String::new();
    for r in &doc.results {
        let p = r.params.p.map_or_else(|| "all".to_string(), |p| p.to_string());
        let _ = writeln!(
            s,
            "{:<8} {:<22} N={} p={} beta={} d={} ({} records)",
            r.status.to_string(),
            r.check_id,
            r.params.n,
            p,
            r.params.beta,
            r.params.window,
            r.details.len()
        );
        if let Some(scope) = &r.scope {
            let _ = writeln!(s, "         {scope}");
        }
        for d in r.failures().take(5) {
            let _ = writeln!(
                s,
                "         at {} expected {} got {}{}",
                if d.degree.is_empty() { "-".to_string() } else { degree_text(&d.degree) },
                d.expected,
                d.actual,
                d.note.as_ref().map(|n| format!(" [{n}]")).unwrap_or_default()
            );
        }
    }
    let _ = writeln!(s, "pass {} fail {} skipped {}", doc.summary.pass, doc.summary.fail, doc.summary.skipped);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(results: Vec<CheckResult>) -> ReportDocument {
        ReportDocument::new(RunConfig::default(), results)
    }

    #[test]
    fn empty_summary() {
        let d = doc(Vec::new());
        let v: serde_json::Value = serde_json::from_slice(&emit(&d, Format::Json).unwrap()).unwrap();
        assert_eq!(v["summary"], serde_json::json!({"pass": 0, "fail": 0, "skipped": 0}));
        assert_eq!(d.exit_code(), 0);
    }

    #[test]
    fn exit_codes_and_csv_rows() {
        let k = Degree(vec![1, -1]);
        let pass = CheckResult::new("a", CheckParams::new(2), vec![Detail::compare(Some(&k), 2usize, 2usize, "")]);
        let fail = CheckResult::new(
            "b",
            CheckParams::new(2),
            vec![Detail::compare(Some(&k), 2usize, 3usize, "x"), Detail::claim(None, true, "y")],
        );
        assert_eq!(pass.status, Status::Pass);
        assert_eq!(fail.status, Status::Fail);
        assert_eq!(doc(vec![pass.clone()]).exit_code(), 0);
        let d = doc(vec![pass, fail]);
        assert_eq!(d.exit_code(), 1);
        let csv = String::from_utf8(emit(&d, Format::Csv).unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 1 + 3);
        assert!(csv.contains("a,\"(1,-1)\",2,2,PASS"));
        let v: serde_json::Value = serde_json::from_slice(&emit(&d, Format::Json).unwrap()).unwrap();
        assert_eq!(v["results"][1]["details"][0]["degree"], serde_json::json!([1, -1]));
        assert_eq!(v["results"][1]["details"][0]["expected"], serde_json::json!(2));
        assert_eq!(v["results"][1]["details"][1]["expected"], serde_json::json!("true"));
    }

    #[test]
    fn skipped_only() {
        let r = CheckResult::new("c", CheckParams::new(2), vec![Detail::skipped("not applicable")]);
        assert_eq!(r.status, Status::Skipped);
        assert_eq!(CheckResult::new("c", CheckParams::new(2), Vec::new()).status, Status::Skipped);
    }
}
