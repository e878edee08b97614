//! Structured run reports: every table names the route that produced it,
//! every cross-check lands in a pass/fail list, and output is
//! byte-deterministic unless timings are explicitly requested.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::spec::ProblemSpec;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub spec: ProblemSpec,
    pub seed: u64,
    pub truncation: usize,
    /// named result tables/values
    pub results: BTreeMap<String, serde_json::Value>,
    /// result name -> computation route ("closed-form" | "toric" | "oracle" | ...)
    pub routes: BTreeMap<String, String>,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl RunReport {
    pub fn new(command: &str, spec: &ProblemSpec) -> Self {
        RunReport {
            command: command.into(),
            spec: spec.clone(),
            seed: spec.seed(),
            truncation: spec.truncation(),
            results: BTreeMap::new(),
            routes: BTreeMap::new(),
            checks: Vec::new(),
            timings_ms: None,
        }
    }

    pub fn add_result<T: Serialize>(&mut self, name: &str, route: &str, value: &T) {
        self.results.insert(
            name.into(),
            serde_json::to_value(value).expect("result serializes"),
        );
        self.routes.insert(name.into(), route.into());
    }

    pub fn add_check(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(CheckOutcome { name: name.into(), pass, detail });
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_json() {
        let spec = ProblemSpec::p2_example(1);
        let build = || {
            let mut r = RunReport::new("analyze", &spec);
            r.add_result("classes", "sweep", &vec![1, 2, 3]);
            r.add_check("smoke", true, "ok".into());
            r.to_json()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn pass_reflects_checks() {
        let spec = ProblemSpec::p2_example(1);
        let mut r = RunReport::new("analyze", &spec);
        assert!(r.pass());
        r.add_check("good", true, String::new());
        r.add_check("bad", false, "boom".into());
        assert!(!r.pass());
        assert!(r.to_json().contains("boom"));
    }
}
