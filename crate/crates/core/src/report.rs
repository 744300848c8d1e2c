//! Run orchestration and the versioned report.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::{Instance, RunConfig, Subject};
use crate::field::FieldElement;
use crate::lattice::LatticeKind;
use crate::reductor::{build_reductor, Component};
use crate::registry::{error_json, run_check, Outcome, Status};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "reductor";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub total_ms: f64,
    pub build_ms: f64,
    pub checks_ms: Map<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub tool_version: &'static str,
    /// sha256 of the canonical JSON form of the effective config.
    pub input_digest: String,
    pub subject: Value,
    pub max_degree: u32,
    pub seed: Option<u64>,
    pub build: Value,
    /// Outcomes keyed by check name, in registry order.
    pub checks: Map<String, Value>,
    pub passed: bool,
    pub timing: Timing,
}

/// The config as actually run: degree bound and seed filled in.
fn effective_config(inst: &Instance) -> RunConfig {
    let mut c = inst.config.clone();
    c.max_degree = Some(inst.max_degree);
    c.seed = inst.seed;
    c.format = None;
    c
}

pub fn digest(config: &RunConfig) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// Execute the requested checks in registry order.
pub fn run(inst: &Instance) -> Report {
    let start = Instant::now();
    let mut checks_ms = Map::new();
    let (subject, build, reductor, build_ms) = match &inst.subject {
        Subject::Algebra(p) => {
            let t = Instant::now();
            let r = build_reductor(p, inst.max_degree);
            let build_ms = ms(t);
            let build = match &r {
                Ok(r) => json!({ "status": "ok", "components": serde_json::to_value(r.components()).expect("serializes") }),
                Err(e) => json!({ "status": "error", "error": error_json(e) }),
            };
            let subject = json!({ "field": inst.field.describe(), "algebra": p.to_string() });
            (subject, build, Some(r), build_ms)
        }
        Subject::Lattice(l) => {
            let vec = |v: &[FieldElement]| format!("[{}]", v.iter().map(|x| inst.field.fmt_elem(x)).collect::<Vec<_>>().join(", "));
            let lattice = match l.kind() {
                LatticeKind::Fg(g) => json!({ "dim": l.dim(), "generators": g.iter().map(|v| vec(v)).collect::<Vec<_>>() }),
                LatticeKind::IdealSum(s) => json!({ "dim": l.dim(), "summands": s.iter().map(|(c, v)| format!("{c} {}", vec(v))).collect::<Vec<_>>() }),
            };
            let subject = json!({ "field": inst.field.describe(), "lattice": lattice });
            (subject, json!({ "status": "ok" }), None, 0.0)
        }
    };
    let mut checks = Map::new();
    let mut passed = true;
    for &id in &inst.checks {
        let t = Instant::now();
        let outcome: Outcome = run_check(id, inst, reductor.as_ref());
        checks_ms.insert(id.name().into(), json!(ms(t)));
        passed &= outcome.passed();
        checks.insert(id.name().into(), serde_json::to_value(&outcome).expect("serializes"));
    }
    Report {
        schema_version: SCHEMA_VERSION,
        tool: TOOL,
        tool_version: TOOL_VERSION,
        input_digest: digest(&effective_config(inst)),
        subject,
        max_degree: inst.max_degree,
        seed: inst.seed,
        build,
        checks,
        passed,
        timing: Timing { total_ms: ms(start), build_ms, checks_ms },
    }
}

impl Report {
    /// JSON value of the report; timing is dropped unless asked for, which
    /// makes the result a pure function of config and seed.
    pub fn to_value(&self, timing: bool) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !timing {
            v.as_object_mut().expect("object").remove("timing");
        }
        v
    }

    pub fn to_json(&self, timing: bool) -> String {
        serde_json::to_string_pretty(&self.to_value(timing)).expect("report serializes")
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}  schema {}  input {}", self.tool, self.tool_version, self.schema_version, &self.input_digest[..16]);
        if let Some(f) = self.subject.get("field").and_then(Value::as_str) {
            let _ = writeln!(s, "field    {f}");
        }
        if let Some(a) = self.subject.get("algebra").and_then(Value::as_str) {
            let _ = writeln!(s, "algebra  {a}");
        }
        if let Some(l) = self.subject.get("lattice") {
            let _ = writeln!(s, "lattice  {l}");
        }
        let _ = write!(s, "degree   N = {}", self.max_degree);
        if let Some(seed) = self.seed {
            let _ = write!(s, ", seed {seed}");
        }
        s.push('\n');
        match self.build.get("status").and_then(Value::as_str) {
            Some("error") => {
                let msg = self.build["error"]["message"].as_str().unwrap_or("error");
                let _ = writeln!(s, "build    error: {msg}");
            }
            _ => {
                if let Some(comps) = self.build.get("components") {
                    let comps: Vec<Component> = serde_json::from_value(comps.clone()).unwrap_or_default();
                    let _ = writeln!(s, "build    ok\n   n   dim  rank  gr_dim  gr_rank  torsion_free");
                    for c in comps {
                        let _ = writeln!(s, "{:>4}  {:>4}  {:>4}  {:>6}  {:>7}  {}", c.degree, c.dim, c.rank, c.graded_dim, c.gr_rank, c.torsion_free);
                    }
                }
            }
        }
        for (name, o) in &self.checks {
            let status = o["status"].as_str().unwrap_or("error");
            let summary = o["summary"].as_str().unwrap_or("");
            let _ = writeln!(s, "[{status:<5}] {name}: {summary}");
        }
        let _ = writeln!(s, "result   {}  ({:.1} ms)", if self.passed { "PASS" } else { "FAIL" }, self.timing.total_ms);
        s
    }

    pub fn check_status(&self, name: &str) -> Option<Status> {
        match self.checks.get(name)?.get("status")?.as_str()? {
            "pass" => Some(Status::Pass),
            "fail" => Some(Status::Fail),
            _ => Some(Status::Error),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = r#"
[field]
base = "Q"

[valuation]
kind = "p-adic"
p = 3

[constants]
q = "2"

[algebra]
generators = ["Y", "X"]
relations = ["X*Y = q*Y*X"]
mode = "graded"

[checks]
run = ["unramified", "valuation_axioms"]
"#;

    #[test]
    fn quantum_plane_run_passes() {
        let mut inst = RunConfig::load(SRC).unwrap();
        inst.max_degree = 4;
        let rep = run(&inst);
        assert!(rep.passed, "{}", rep.to_text());
        assert_eq!(rep.exit_code(), 0);
        let keys: Vec<&String> = rep.checks.keys().collect();
        assert_eq!(keys, ["unramified", "valuation_axioms"]);
        assert_eq!(rep.to_json(false), run(&inst).to_json(false));
        assert!(rep.to_value(true).get("timing").is_some());
        assert!(rep.to_text().contains("[pass ] unramified"));
    }

    #[test]
    fn escape_is_recorded() {
        let mut inst = RunConfig::load(&SRC.replace("q = \"2\"", "q = \"1/3\"")).unwrap();
        inst.max_degree = 3;
        let rep = run(&inst);
        assert!(!rep.passed);
        assert_eq!(rep.build["error"]["kind"], "coefficient-escape");
        assert_eq!(rep.build["error"]["word"], "X*Y");
        assert_eq!(rep.check_status("unramified"), Some(Status::Error));
    }

    #[test]
    fn digest_tracks_seed_and_degree() {
        let inst = RunConfig::load(SRC).unwrap();
        let mut other = inst.clone();
        other.seed = Some(7);
        assert_ne!(digest(&effective_config(&inst)), digest(&effective_config(&other)));
        other.seed = None;
        other.max_degree = 5;
        assert_ne!(digest(&effective_config(&inst)), digest(&effective_config(&other)));
    }
}
