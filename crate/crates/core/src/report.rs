//! Property reports.
//!
//! Every verifier returns a [`PropertyReport`]: a named outcome plus an
//! ordered list of key/value observations. The structured rendering is one
//! `key=value` record per line under a versioned header so that reports can
//! be diffed between runs.

use std::fmt;

pub const REPORT_SCHEMA: &str = "report-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The configured budget ran out before a verdict was reached.
    Exhausted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Exhausted => "budget-exhausted",
        }
    }

    /// Process exit code for this outcome.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Exhausted => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub name: String,
    pub status: Status,
    /// False when the verdict comes from sampling rather than exhaustive search.
    pub definitive: bool,
    pub entries: Vec<(String, String)>,
    pub counterexample: Option<String>,
}

impl PropertyReport {
    pub fn new(name: impl Into<String>) -> Self {
        PropertyReport {
            name: name.into(),
            status: Status::Pass,
            definitive: true,
            entries: Vec::new(),
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn record(&mut self, key: impl Into<String>, value: impl fmt::Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Marks the report failed, keeping the first counterexample seen.
    pub fn fail(&mut self, counterexample: impl Into<String>) {
        self.status = Status::Fail;
        if self.counterexample.is_none() {
            self.counterexample = Some(counterexample.into());
        }
    }

    pub fn sampled(mut self) -> Self {
        self.definitive = false;
        self
    }

    /// Folds a sub-report in under a key prefix; any failure propagates.
    pub fn absorb(&mut self, prefix: &str, other: &PropertyReport) {
        self.record(format!("{prefix}.status"), other.status.as_str());
        for (k, v) in &other.entries {
            self.entries.push((format!("{prefix}.{k}"), v.clone()));
        }
        if !other.definitive {
            self.definitive = false;
        }
        match other.status {
            Status::Pass => {}
            Status::Fail => self.fail(format!(
                "{prefix}: {}",
                other.counterexample.as_deref().unwrap_or("failed")
            )),
            Status::Exhausted => {
                if self.status == Status::Pass {
                    self.status = Status::Exhausted;
                }
            }
        }
    }

    pub fn to_structured(&self) -> String {
        let mut out = format!(
            "{REPORT_SCHEMA} name={} status={} definitive={}\n",
            self.name,
            self.status.as_str(),
            self.definitive
        );
        for (k, v) in &self.entries {
            out.push_str(&format!("{k}={v}\n"));
        }
        if let Some(c) = &self.counterexample {
            out.push_str(&format!("counterexample={c}\n"));
        }
        out
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "[{}] {}{}",
            self.status.as_str().to_uppercase(),
            self.name,
            if self.definitive { "" } else { " (sampled)" }
        )?;
        for (k, v) in &self.entries {
            writeln!(f, "  {k:<32} {v}")?;
        }
        if let Some(c) = &self.counterexample {
            writeln!(f, "  counterexample: {c}")?;
        }
        Ok(())
    }
}
