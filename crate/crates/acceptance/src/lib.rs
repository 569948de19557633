//! Runner for the acceptance suite: each criterion runs in isolation and
//! prints one `PASS`/`FAIL` line; soft checks print `WARN` and never fail.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

/// What a criterion found.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    pub fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(String, &'static str, String)>,
    failed: usize,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `check`, timing it; a panic counts as a failure.
    pub fn run(&mut self, name: &str, check: impl FnOnce() -> Verdict) {
        let start = Instant::now();
        let verdict = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(v) => v,
            Err(panic) => {
                let message = panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into());
                Verdict::new(false, format!("panicked: {message}"))
            }
        };
        let detail = format!("{} [{:.1}s]", verdict.detail, start.elapsed().as_secs_f64());
        self.record(name, if verdict.pass { "PASS" } else { "FAIL" }, detail);
        if !verdict.pass {
            self.failed += 1;
        }
    }

    /// A check that is reported but cannot fail the suite.
    pub fn soft(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.record(name, if ok { "PASS" } else { "WARN" }, detail.into());
    }

    fn record(&mut self, name: &str, status: &'static str, detail: String) {
        println!("{status}  {name:<34} {detail}");
        self.lines.push((name.to_string(), status, detail));
    }

    pub fn failures(&self) -> usize {
        self.failed
    }

    pub fn summary(&self) -> String {
        let count = |s| self.lines.iter().filter(|l| l.1 == s).count();
        format!(
            "{} passed, {} failed, {} warnings",
            count("PASS"),
            count("FAIL"),
            count("WARN")
        )
    }
}
