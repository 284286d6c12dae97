use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "nklab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Defaults for algebraic identities, closed-form vs finite-difference
/// comparisons and classifier round trips.
pub const ALGEBRAIC_TOL: f64 = 1e-9;
pub const TWO_PATH_TOL: f64 = 1e-7;
pub const CLASSIFIER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// `None` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub samples: u64,
    pub seed: u64,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64, samples: usize, seed: u64) -> Self {
        let residual = residual.is_finite().then_some(residual);
        CheckResult {
            name: name.into(),
            pass: residual.is_some_and(|r| r <= tolerance),
            residual,
            tolerance,
            samples: samples as u64,
            seed,
        }
    }

    /// A check whose evaluation failed outright.
    pub fn failed(name: impl Into<String>, tolerance: f64, samples: usize, seed: u64) -> Self {
        CheckResult::new(name, f64::NAN, tolerance, samples, seed)
    }

    pub fn from_result<E>(name: impl Into<String>, r: Result<f64, E>, tolerance: f64, samples: usize, seed: u64) -> Self {
        CheckResult::new(name, r.unwrap_or(f64::NAN), tolerance, samples, seed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub algebraic: f64,
    pub two_path: f64,
    pub classifier: f64,
    #[serde(rename = "override")]
    pub override_: Option<f64>,
}

impl Tolerances {
    pub fn with_override(tol: Option<f64>) -> Self {
        Tolerances { algebraic: ALGEBRAIC_TOL, two_path: TWO_PATH_TOL, classifier: CLASSIFIER_TOL, override_: tol }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub suite: String,
    pub seed: u64,
    pub samples: u64,
    pub tolerances: Tolerances,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(suite: &str, seed: u64, samples: usize, tol: Option<f64>, checks: Vec<CheckResult>) -> Self {
        VerificationReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            suite: suite.into(),
            seed,
            samples: samples as u64,
            tolerances: Tolerances::with_override(tol),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} suite={} seed={} samples={}\n", self.tool, self.version, self.suite, self.seed, self.samples);
        for c in &self.checks {
            let r = c.residual.map_or("n/a".to_string(), |r| format!("{r:.3e}"));
            let _ = writeln!(s, "{} {:<48} residual={:<10} tol={:.1e}", if c.pass { "PASS" } else { "FAIL" }, c.name, r, c.tolerance);
        }
        let _ = writeln!(s, "{} ({} checks, {} failed)", if self.pass { "PASS" } else { "FAIL" }, self.checks.len(), self.failures().len());
        s
    }
}

/// Serializes with sorted keys, two-space indentation and floats as
/// `{:.16e}`; non-finite floats become `null`.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.push_str(&"  ".repeat(d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let f = n.as_f64().unwrap_or(f64::NAN);
                if f.is_finite() {
                    let _ = write!(out, "{f:.16e}");
                } else {
                    out.push_str("null");
                }
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (n, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if n + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (n, k) in keys.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("keys serialize"));
                out.push_str(": ");
                write_value(out, &map[k.as_str()], depth + 1);
                out.push_str(if n + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pass_iff_within_tolerance() {
        assert!(CheckResult::new("a", 1e-10, 1e-9, 1, 0).pass);
        assert!(!CheckResult::new("a", 2e-9, 1e-9, 1, 0).pass);
        let nan = CheckResult::new("a", f64::NAN, 1e-9, 1, 0);
        assert!(!nan.pass && nan.residual.is_none());
    }

    #[test]
    fn canonical_format() {
        let s = to_canonical_json(&json!({"b": 1.5, "a": [1, -2], "c": null, "d": {}}));
        assert_eq!(s, "{\n  \"a\": [\n    1,\n    -2\n  ],\n  \"b\": 1.5000000000000000e0,\n  \"c\": null,\n  \"d\": {}\n}\n");
    }

    #[test]
    fn non_finite_is_null() {
        assert!(to_canonical_json(&json!([f64::INFINITY])).contains("null"));
        assert!(to_canonical_json(&CheckResult::failed("x", 1.0, 1, 0)).contains("\"residual\": null"));
    }

    #[test]
    fn overall_pass_is_conjunction() {
        let ok = CheckResult::new("a", 0.0, 1.0, 1, 0);
        let bad = CheckResult::new("b", 2.0, 1.0, 1, 0);
        assert!(VerificationReport::new("s", 0, 1, None, vec![ok.clone()]).pass);
        assert!(!VerificationReport::new("s", 0, 1, None, vec![ok, bad]).pass);
    }
}
