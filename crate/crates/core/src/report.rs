//! Verification reports: plain data, serialized deterministically to JSON.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

/// One identity (or family of instances of one identity).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub instances: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status: Status::Pass,
            mode: Mode::Exact,
            seed: None,
            instances: 0,
            points: None,
            counterexample: None,
        }
    }

    pub fn sampled(mut self, seed: u64) -> Self {
        self.mode = Mode::Sampled;
        self.seed = Some(seed);
        self
    }

    /// Records one instance. The first failure keeps its counterexample.
    pub fn observe(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.status == Status::Pass {
            self.status = Status::Fail;
            self.counterexample = Some(witness());
        }
    }

    pub fn add_points(&mut self, n: u64) {
        *self.points.get_or_insert(0) += n;
    }

    /// Folds another run of the same check into this one.
    pub fn merge(&mut self, other: Check) {
        self.instances += other.instances;
        if let Some(p) = other.points {
            self.add_points(p);
        }
        if other.mode == Mode::Sampled {
            self.mode = Mode::Sampled;
            self.seed = self.seed.or(other.seed);
        }
        if other.status == Status::Fail && self.status == Status::Pass {
            self.status = Status::Fail;
            self.counterexample = other.counterexample;
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        };
        write!(f, "{status} {} [{}] {} instance(s)", self.id, self.anchor, self.instances)?;
        if self.mode == Mode::Sampled {
            write!(f, " (sampled")?;
            if let Some(p) = self.points {
                write!(f, ", {p} points")?;
            }
            if let Some(s) = self.seed {
                write!(f, ", seed {s}")?;
            }
            write!(f, ")")?;
        } else if let Some(p) = self.points {
            write!(f, " ({p} points)")?;
        }
        if let Some(c) = &self.counterexample {
            write!(f, "\n    counterexample: {}", c.replace('\n', "\n    "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>) -> Self {
        VerificationReport { suite: suite.into(), ..Default::default() }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    /// Adds a check, merging it into an existing one with the same id.
    pub fn push(&mut self, check: Check) {
        match self.checks.iter_mut().find(|c| c.id == check.id) {
            Some(existing) => {
                debug_assert_eq!(existing.anchor, check.anchor);
                existing.merge(check);
            }
            None => self.checks.push(check),
        }
    }

    pub fn extend(&mut self, other: VerificationReport) {
        for c in other.checks {
            self.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn total_instances(&self) -> u64 {
        self.checks.iter().map(|c| c.instances).sum()
    }

    /// One report out of several tagged ones: check ids become `tag/id`
    /// and parameters `tag.key`.
    pub fn combine(suite: impl Into<String>, parts: Vec<(String, VerificationReport)>) -> VerificationReport {
        let mut out = VerificationReport::new(suite);
        for (tag, r) in parts {
            out.parameters.insert(format!("{tag}.suite"), r.suite);
            for (k, v) in r.parameters {
                out.parameters.insert(format!("{tag}.{k}"), v);
            }
            for mut c in r.checks {
                c.id = format!("{tag}/{}", c.id);
                out.push(c);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "suite {}", self.suite)?;
        for (k, v) in &self.parameters {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} check(s), {} failed", self.checks.len(), failed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_is_kept() {
        let mut c = Check::new("x", "a = b");
        c.observe(true, || unreachable!());
        c.observe(false, || "first".into());
        c.observe(false, || "second".into());
        assert_eq!(c.instances, 3);
        assert_eq!(c.counterexample.as_deref(), Some("first"));
        assert!(!c.passed());
    }

    #[test]
    fn push_merges_by_id() {
        let mut r = VerificationReport::new("s");
        let mut a = Check::new("x", "a");
        a.observe(true, String::new);
        r.push(a.clone());
        r.push(a);
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.checks[0].instances, 2);
    }

    #[test]
    fn json_roundtrip() {
        let mut r = VerificationReport::new("s").param("k", 2);
        let mut c = Check::new("x", "a").sampled(7);
        c.add_points(1000);
        c.observe(true, String::new);
        r.push(c);
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.to_json().contains("counterexample"));
    }
}
