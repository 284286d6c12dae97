use std::path::Path;
use std::sync::Arc;

use lagrangian::{angles_at, lagrangian_residual, Immersion, ImmersionRegistry, LagError};
use nalgebra::Matrix3;
use normal_forms::{classify, refine, totally_geodesic_angle_filter, OperatorPair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sl2_core::{random_point, Sl2Point};

use crate::codazzi::{scan, ScanCase, ScanReport};
use crate::report::VerificationReport;
use crate::suites::{SuiteConfig, SuiteRegistry};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unknown names, unreadable or malformed input.
    #[error("{0}")]
    Usage(String),
    /// Valid input that fails a mathematical requirement.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

pub fn cmd_verify(registry: &SuiteRegistry, target: &str, cfg: &SuiteConfig) -> Result<VerificationReport, CliError> {
    let suite = registry
        .get(target)
        .ok_or_else(|| CliError::Usage(format!("unknown suite {target:?}; expected one of {:?}", registry.names())))?;
    Ok(VerificationReport::new(target, cfg.seed, cfg.samples, cfg.tol, suite.run(cfg)))
}

fn rows(m: &Matrix3<f64>) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|r| [0, 1, 2].map(|c| m[(r, c)]))
}

fn case_number(tag: &str) -> String {
    tag.trim_start_matches("case").trim_start_matches("refined").to_string()
}

/// Classifies the operator pair in `text`.
pub fn classify_str(text: &str) -> Result<Value, CliError> {
    let pair = OperatorPair::from_json_str(text).map_err(|e| CliError::Usage(e.to_string()))?;
    pair.validate().map_err(|e| CliError::Failure(e.to_string()))?;
    let out = classify(&pair).map_err(|e| CliError::Failure(e.to_string()))?;
    let params: serde_json::Map<String, Value> = out.case.params().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let r = pair.residuals();
    let (refined, refine_error) = match refine(&out.case, 1) {
        Ok(c) => (Value::String(c.tag().into()), Value::Null),
        Err(e) => (Value::Null, Value::String(e.to_string())),
    };
    Ok(json!({
        "case": case_number(out.case.tag()),
        "tag": out.case.tag(),
        "delta": pair.delta.index(),
        "params": params,
        "frame": rows(&out.frame),
        "a_form": rows(&out.a_form),
        "b_form": rows(&out.b_form),
        "residuals": {
            "gram": out.gram_residual,
            "form": out.form_residual,
            "symmetry": r.symmetry,
            "commutator": r.commutator,
            "unit": r.unit,
        },
        "refined": refined,
        "refine_error": refine_error,
    }))
}

pub fn cmd_classify(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    classify_str(&text)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleReport {
    pub immersion: String,
    pub seed: u64,
    pub samples: u64,
    pub angles: Vec<[f64; 3]>,
    /// Largest distance of any sample from the first.
    pub spread: f64,
    pub canonical: Option<[f64; 3]>,
    pub canonical_label: Option<u8>,
    pub steps: Vec<String>,
    pub filter_error: Option<String>,
}

fn resolve(registry: &ImmersionRegistry, name: &str) -> Result<Arc<dyn Immersion>, CliError> {
    registry.resolve(name).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cmd_angles(registry: &ImmersionRegistry, name: &str, samples: usize, seed: u64) -> Result<AngleReport, CliError> {
    let imm = resolve(registry, name)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Sl2Point> = (0..samples.max(1)).map(|_| random_point(&mut rng)).collect();
    let mut triples = Vec::new();
    for u in &points {
        let res = lagrangian_residual(imm.as_ref(), u).map_err(|e| CliError::Failure(e.to_string()))?;
        if res > lagrangian::frame::LAGRANGIAN_TOL {
            return Err(CliError::Failure(format!("{name} is not Lagrangian: residual {res:.6e}")));
        }
        let t = angles_at(imm.as_ref(), u).map_err(|e: LagError| CliError::Failure(e.to_string()))?;
        triples.push(t);
    }
    let spread = triples.iter().map(|t| t.distance(&triples[0])).fold(0.0, f64::max);
    let (canonical, canonical_label, steps, filter_error) = match totally_geodesic_angle_filter(&triples[0]) {
        Ok(f) => (Some(f.canonical.angles), Some(f.label), f.steps.iter().map(|s| s.to_string()).collect(), None),
        Err(e) => (None, None, Vec::new(), Some(e.to_string())),
    };
    Ok(AngleReport {
        immersion: imm.name(),
        seed,
        samples: triples.len() as u64,
        angles: triples.iter().map(|t| t.angles).collect(),
        spread,
        canonical,
        canonical_label,
        steps,
        filter_error,
    })
}

pub fn cmd_codazzi_scan(case: u8, grid: usize) -> Result<ScanReport, CliError> {
    let c = ScanCase::from_id(case).ok_or_else(|| CliError::Usage(format!("case must be 2, 3 or 4, got {case}")))?;
    Ok(scan(c, grid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pair() {
        let v = classify_str(r#"{"delta": 1, "A": [[1,0,0],[0,1,0],[0,0,1]], "B": [[0,0,0],[0,0,0],[0,0,0]]}"#).unwrap();
        assert_eq!(v["case"], "1");
        for k in ["two_theta1", "two_theta2", "two_theta3"] {
            assert!(v["params"][k].as_f64().unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn error_codes() {
        assert_eq!(classify_str("{not json").unwrap_err().exit_code(), 2);
        let bad = r#"{"delta": 1, "A": [[2,0,0],[0,1,0],[0,0,1]], "B": [[0,0,0],[0,0,0],[0,0,0]]}"#;
        assert_eq!(classify_str(bad).unwrap_err().exit_code(), 1);
        assert_eq!(cmd_codazzi_scan(5, 3).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn example_angles_are_constant() {
        let reg = ImmersionRegistry::with_builtins();
        let r = cmd_angles(&reg, "example2", 5, 1).unwrap();
        assert!(r.spread <= 1e-7);
        assert_eq!(r.canonical_label, Some(2));
        assert!(cmd_angles(&reg, "nope", 1, 1).unwrap_err().exit_code() == 2);
    }
}
