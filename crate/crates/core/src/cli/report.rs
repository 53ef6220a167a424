use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    id: String,
    status: Status,
    witness: Option<String>,
    detail: Option<String>,
    elapsed: Duration,
}

impl Check {
    pub fn pass(id: &str) -> Self {
        Check {
            id: id.to_string(),
            status: Status::Pass,
            witness: None,
            detail: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn fail(id: &str, witness: impl Into<String>) -> Self {
        Check {
            id: id.to_string(),
            status: Status::Fail,
            witness: Some(witness.into()),
            detail: None,
            elapsed: Duration::ZERO,
        }
    }

    /// Pass when `witness` is `None`.
    pub fn from_witness(id: &str, witness: Option<String>) -> Self {
        match witness {
            None => Check::pass(id),
            Some(w) => Check::fail(id, w),
        }
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn with_elapsed(mut self, d: Duration) -> Self {
        self.elapsed = d;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn witness(&self) -> Option<&str> {
        self.witness.as_deref()
    }

    pub fn detail(&self) -> Option<&str> {
        self.detail.as_deref()
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    suite: String,
    checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: &str) -> Self {
        Report {
            suite: suite.to_string(),
            checks: Vec::new(),
        }
    }

    pub fn suite(&self) -> &str {
        &self.suite
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Run `f` and record its outcome: `Ok(detail)` passes, `Err(witness)` fails.
    pub fn run<F>(&mut self, id: &str, f: F)
    where
        F: FnOnce() -> Result<Option<String>, String>,
    {
        let start = Instant::now();
        let c = match f() {
            Ok(None) => Check::pass(id),
            Ok(Some(d)) => Check::pass(id).with_detail(d),
            Err(w) => Check::fail(id, w),
        };
        self.checks.push(c.with_elapsed(start.elapsed()));
    }

    /// Append another report's checks, prefixing their ids.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.id = format!("{prefix}{}", c.id);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn pass_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed()).count()
    }

    pub fn summary(&self) -> String {
        format!("{}/{}", self.pass_count(), self.checks.len())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn find(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Serialize)]
struct JsonCheck<'a> {
    id: &'a str,
    status: Status,
    witness: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<&'a str>,
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct JsonSummary {
    passed: usize,
    failed: usize,
    total: usize,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    suite: &'a str,
    checks: Vec<JsonCheck<'a>>,
    summary: JsonSummary,
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = format!("suite {}\n", r.suite);
            let width = r.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
            for c in &r.checks {
                let tag = if c.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "  {:<width$}  {tag}", c.id);
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "      witness: {w}");
                }
                if let Some(d) = &c.detail {
                    let _ = writeln!(out, "      note: {d}");
                }
            }
            let _ = writeln!(out, "summary {}", r.summary());
            out
        }
        Format::Json => {
            let j = JsonReport {
                suite: &r.suite,
                checks: r
                    .checks
                    .iter()
                    .map(|c| JsonCheck {
                        id: &c.id,
                        status: c.status,
                        witness: c.witness.as_deref(),
                        detail: c.detail.as_deref(),
                        elapsed_ms: c.elapsed.as_micros() as f64 / 1e3,
                    })
                    .collect(),
                summary: JsonSummary {
                    passed: r.pass_count(),
                    failed: r.checks.len() - r.pass_count(),
                    total: r.checks.len(),
                },
            };
            let mut s = serde_json::to_string_pretty(&j).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_summary() {
        let r = Report::new("empty");
        assert!(r.passed());
        assert_eq!(r.summary(), "0/0");
        assert!(emit_report(&r, Format::Text).contains("summary 0/0"));
    }

    #[test]
    fn text_lines_end_with_status() {
        let mut r = Report::new("demo");
        r.push(Check::pass("a"));
        r.push(Check::fail("bb", "x != y"));
        let t = emit_report(&r, Format::Text);
        assert!(t.lines().any(|l| l.ends_with("PASS")));
        assert!(t.lines().any(|l| l.ends_with("FAIL")));
        assert!(t.contains("witness: x != y"));
        assert!(!r.passed());
    }

    #[test]
    fn json_fields_are_stable() {
        let mut r = Report::new("demo");
        r.push(Check::fail("c", "w"));
        let v: serde_json::Value = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["suite"], "demo");
        assert_eq!(v["checks"][0]["status"], "fail");
        assert_eq!(v["checks"][0]["witness"], "w");
        assert!(v["checks"][0]["elapsed_ms"].is_number());
        assert_eq!(v["summary"]["total"], 1);
    }
}
