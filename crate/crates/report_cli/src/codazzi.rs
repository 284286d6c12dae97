use std::collections::BTreeMap;
use std::f64::consts::PI;

use lagrangian::{codazzi_obstruction, ObstructionCase};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanCase {
    Two,
    Three,
    Four,
}

impl ScanCase {
    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            2 => Some(ScanCase::Two),
            3 => Some(ScanCase::Three),
            4 => Some(ScanCase::Four),
            _ => None,
        }
    }

    pub fn id(self) -> u8 {
        match self {
            ScanCase::Two => 2,
            ScanCase::Three => 3,
            ScanCase::Four => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub params: BTreeMap<&'static str, f64>,
    /// Coefficients of `JE₁, JE₂, JE₃`.
    pub value: [f64; 3],
    /// Absolute value of the component carrying the contradiction.
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub case: u8,
    pub grid: usize,
    pub component: String,
    pub points: Vec<ScanPoint>,
    /// Inadmissible parameter points, one notice each.
    pub skipped: Vec<String>,
    pub min_norm: Option<f64>,
    pub max_norm: Option<f64>,
}

/// `θ₁ = kπ/(N+1)`, `k = 1..N`.
fn theta_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 * PI / (n as f64 + 1.0)).collect()
}

fn lambda_grid(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.1];
    }
    (0..n).map(|k| 0.1 + 1.9 * k as f64 / (n as f64 - 1.0)).collect()
}

/// Case 2 over `θ₁`; case 3 over both signs; case 4 over `λ ∈ [0.1, 2]`
/// times `θ₁` with `θ₂ = −2θ₁`.
pub fn scan(case: ScanCase, grid: usize) -> ScanReport {
    let grid = grid.max(1);
    let mut cases: Vec<(ObstructionCase, BTreeMap<&'static str, f64>)> = Vec::new();
    match case {
        ScanCase::Two => {
            for t in theta_grid(grid) {
                cases.push((ObstructionCase::Case2 { theta1: t }, BTreeMap::from([("theta1", t)])));
            }
        }
        ScanCase::Three => {
            for s in [1.0, -1.0] {
                cases.push((ObstructionCase::Case3 { sign: s }, BTreeMap::from([("sign", s)])));
            }
        }
        ScanCase::Four => {
            for l in lambda_grid(grid) {
                for t in theta_grid(grid) {
                    let c = ObstructionCase::Case4 { lambda: l, theta1: t, theta2: -2.0 * t };
                    cases.push((c, BTreeMap::from([("lambda", l), ("theta1", t), ("theta2", -2.0 * t)])));
                }
            }
        }
    }
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for (c, params) in cases {
        match codazzi_obstruction(&c) {
            Ok(value) => points.push(ScanPoint { norm: value[c.component()].abs(), value, params }),
            Err(e) => skipped.push(format!("{params:?}: {e}")),
        }
    }
    let min_norm = points.iter().map(|p| p.norm).reduce(f64::min);
    let max_norm = points.iter().map(|p| p.norm).reduce(f64::max);
    let component = if case == ScanCase::Four { "JE2" } else { "JE1" };
    ScanReport { case: case.id(), grid, component: component.into(), points, skipped, min_norm, max_norm }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case2_grid_avoids_the_axis() {
        let r = scan(ScanCase::Two, 50);
        assert_eq!(r.points.len(), 50);
        assert!(r.skipped.is_empty());
        // |−4/3 / sin 2θ₁| ≥ 4/3
        assert!(r.min_norm.unwrap() >= 4.0 / 3.0 - 1e-12);
    }

    #[test]
    fn odd_grid_skips_the_quarter_turn() {
        let r = scan(ScanCase::Two, 3);
        assert_eq!(r.points.len(), 2);
        assert_eq!(r.skipped.len(), 1);
    }

    #[test]
    fn case4_constraint() {
        let r = scan(ScanCase::Four, 5);
        assert!(r.min_norm.unwrap() > 0.0);
        assert_eq!(r.points.len() + r.skipped.len(), 25);
    }
}
