//! Certification reports and their JSON / text rendering.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::config::Format;

/// One verified identity. `lhs`/`rhs` are `[re, im]`; the errors are `None`
/// when the computation itself failed (see `note`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn pair(x: C64) -> [f64; 2] {
    [x.re, x.im]
}

impl Check {
    /// |lhs − rhs| / scale ≤ tol, with scale = |rhs| unless given.
    pub fn compare(name: impl Into<String>, anchor: &str, lhs: C64, rhs: C64, scale: Option<f64>, tol: f64) -> Self {
        let abs = (lhs - rhs).norm();
        let s = scale.unwrap_or(rhs.norm());
        let rel = if s > 0.0 { abs / s } else { abs };
        Check {
            name: name.into(),
            anchor: anchor.to_string(),
            lhs: pair(lhs),
            rhs: pair(rhs),
            abs_err: Some(abs),
            rel_err: Some(rel),
            tol,
            pass: rel <= tol,
            ms: 0,
            note: None,
        }
    }

    /// A check whose computation raised an error.
    pub fn failed(name: impl Into<String>, anchor: &str, tol: f64, why: String) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.to_string(),
            lhs: [0.0, 0.0],
            rhs: [0.0, 0.0],
            abs_err: None,
            rel_err: None,
            tol,
            pass: false,
            ms: 0,
            note: Some(why),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Runs `f` and stamps the elapsed wall time on every check it returns.
pub fn timed<F>(f: F) -> Vec<Check>
where
    F: FnOnce() -> Vec<Check>,
{
    let start = Instant::now();
    let mut out = f();
    let ms = start.elapsed().as_millis() as u64;
    for c in &mut out {
        c.ms = ms;
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub suite: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub config_echo: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl CertificationReport {
    /// Orders the checks by name and recounts the summary.
    pub fn new(suite: &str, config_echo: BTreeMap<String, String>, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = checks.iter().filter(|c| c.pass).count();
        let summary = Summary { pass, fail: checks.len() - pass };
        CertificationReport { suite: suite.to_string(), config_echo, checks, summary }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// Copy with every timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite: {}\n", self.suite);
        s += &format!("{:<44} {:>12} {:>9} {:>6} {:>8}\n", "check", "rel_err", "tol", "pass", "ms");
        for c in &self.checks {
            let err = c.rel_err.map(|e| format!("{e:12.3e}")).unwrap_or_else(|| format!("{:>12}", "error"));
            let name: String = c.name.chars().take(44).collect();
            s += &format!("{name:<44} {err} {:9.1e} {:>6} {:8}\n", c.tol, if c.pass { "ok" } else { "FAIL" }, c.ms);
            if let Some(n) = &c.note {
                s += &format!("    {n}\n");
            }
        }
        s += &format!("passed {} / failed {}\n", self.summary.pass, self.summary.fail);
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}

/// Writes the report to `out` (a file path) or standard output.
pub fn emit_report(report: &CertificationReport, format: Format, out: Option<&std::path::Path>) -> std::io::Result<()> {
    let body = report.render(format);
    match out {
        Some(p) => std::fs::write(p, body + "\n"),
        None => {
            let mut h = std::io::stdout().lock();
            writeln!(h, "{body}")
        }
    }
}
