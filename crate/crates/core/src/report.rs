//! Machine-readable verification reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One named check with its witnesses (values shown on failure or kept as
/// evidence) and wall time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    pub witness: Vec<String>,
    pub millis: u64,
}

impl CheckRecord {
    pub fn pass(name: String, witness: String) -> CheckRecord {
        CheckRecord::with_status(name, Status::Pass, witness)
    }

    pub fn fail(name: String, witness: String) -> CheckRecord {
        CheckRecord::with_status(name, Status::Fail, witness)
    }

    pub fn skip(name: String, witness: String) -> CheckRecord {
        CheckRecord::with_status(name, Status::Skip, witness)
    }

    pub fn with_status(name: String, status: Status, witness: String) -> CheckRecord {
        CheckRecord {
            name,
            status,
            witness: if witness.is_empty() {
                Vec::new()
            } else {
                vec![witness]
            },
            millis: 0,
        }
    }

    pub fn of_bool(name: String, ok: bool, witness: String) -> CheckRecord {
        if ok {
            CheckRecord::pass(name, witness)
        } else {
            CheckRecord::fail(name, witness)
        }
    }

    pub fn timed(mut self, millis: u64) -> CheckRecord {
        self.millis = millis;
        self
    }
}

/// A suite report. `overall` is pass exactly when no check failed
/// (skips do not fail a suite).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<CheckRecord>,
    pub overall: Status,
}

impl Report {
    pub fn new(suite: String) -> Report {
        Report {
            suite,
            checks: Vec::new(),
            overall: Status::Pass,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        if check.status == Status::Fail {
            self.overall = Status::Fail;
        }
        self.checks.push(check);
    }

    /// Appends another report's checks under a name prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.push(c);
        }
    }

    pub fn overall_pass(&self) -> bool {
        self.overall != Status::Fail
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,check,status,millis,witness\n");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Skip => "skip",
            };
            let witness = c.witness.join("; ").replace('"', "'");
            out.push_str(&format!(
                "{},{},{},{},\"{}\"\n",
                self.suite, c.name, status, c.millis, witness
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            out.push_str(&format!("[{status}] {}", c.name));
            if !c.witness.is_empty() {
                out.push_str(&format!("  ({})", c.witness.join("; ")));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{}: {}\n",
            self.suite,
            if self.overall_pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}
