use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::cases::{angle_dist, lattice_dist, wrap_2pi, NormalFormCase};
use crate::NfError;

/// Tolerance for the refinement relations and the angle filter.
pub const REFINE_TOL: f64 = 1e-6;

fn reject(relation: &str, residual: f64) -> NfError {
    NfError::Rejected { relation: relation.to_string(), residual }
}

/// Imposes the extra relations forced by the Lagrangian condition.
///
/// `epsilon` is the JG-table orientation of the frame. Negating the whole
/// frame flips it without changing `A` or `B`, so none of the relations
/// depend on it; it is validated and otherwise ignored.
pub fn refine(case: &NormalFormCase, epsilon: i8) -> Result<NormalFormCase, NfError> {
    if epsilon != 1 && epsilon != -1 {
        return Err(NfError::Constraint(format!("orientation must be ±1, got {epsilon}")));
    }
    let tau = 2.0 * PI;
    match *case {
        NormalFormCase::Case1 { angles } => {
            let r = lattice_dist(angles.iter().sum(), tau);
            if r > REFINE_TOL {
                return Err(reject("θ₁+θ₂+θ₃ = 0 mod π", r));
            }
            Ok(NormalFormCase::Refined1 { angles: angles.map(wrap_2pi) })
        }
        NormalFormCase::Case2 { angle1, angle2, c } => {
            if c.abs() > REFINE_TOL {
                return Err(reject("c = 0", c.abs()));
            }
            let r = lattice_dist(2.0 * angle1 + angle2, tau);
            if r > REFINE_TOL {
                return Err(reject("2θ₁+θ₂ = 0 mod π", r));
            }
            Ok(NormalFormCase::Refined2 { angle1: wrap_2pi(angle1), angle2: wrap_2pi(angle2) })
        }
        NormalFormCase::Case3 { .. } => Err(reject("no Lagrangian submanifold admits this frame", f64::INFINITY)),
        NormalFormCase::Case4 { angle } => {
            let (dp, dm) = (angle_dist(angle, 2.0 * PI / 3.0), angle_dist(angle, 4.0 * PI / 3.0));
            if dp <= REFINE_TOL {
                Ok(NormalFormCase::Refined3 { sign: 1.0 })
            } else if dm <= REFINE_TOL {
                Ok(NormalFormCase::Refined3 { sign: -1.0 })
            } else {
                Err(reject("2θ = ±2π/3", dp.min(dm)))
            }
        }
        NormalFormCase::Case5 { angle1, angle2, x, y } => {
            let r = lattice_dist(2.0 * angle1 + angle2, tau);
            if r > REFINE_TOL {
                return Err(reject("2θ₁+θ₂ = 0 mod π", r));
            }
            let h = wrap_2pi(angle2) / 2.0;
            // (x, y) = sinh λ (sin θ₂, cos θ₂)
            let sh = x * h.sin() + y * h.cos();
            let perp = (x * h.cos() - y * h.sin()).abs();
            if perp > REFINE_TOL {
                return Err(reject("(x, y) = sinh λ (sin θ₂, cos θ₂)", perp));
            }
            Ok(NormalFormCase::Refined4 { angle1: wrap_2pi(angle1), angle2: wrap_2pi(angle2), lambda: sh.asinh() })
        }
        refined => {
            refined.check_constraints()?;
            Ok(refined)
        }
    }
}

/// Doubled angles `(2θ₁, 2θ₂, 2θ₃)` in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleTriple {
    pub angles: [f64; 3],
}

impl AngleTriple {
    pub fn new(angles: [f64; 3]) -> Self {
        AngleTriple { angles: angles.map(wrap_2pi) }
    }

    pub fn distance(&self, other: &AngleTriple) -> f64 {
        (0..3).map(|i| angle_dist(self.angles[i], other.angles[i])).fold(0.0, f64::max)
    }

    pub fn swap23(&self) -> Self {
        AngleTriple { angles: [self.angles[0], self.angles[2], self.angles[1]] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleMap {
    /// `θ ↦ π − θ`.
    Phi1,
    /// `θ ↦ π/3 − θ`.
    Phi2,
}

impl AngleMap {
    pub fn name(self) -> &'static str {
        match self {
            AngleMap::Phi1 => "phi1",
            AngleMap::Phi2 => "phi2",
        }
    }
}

/// Angle functions of the image under `φ₁` or `φ₂`.
pub fn isometry_angle_map(triple: &AngleTriple, which: AngleMap) -> AngleTriple {
    let shift = match which {
        AngleMap::Phi1 => 2.0 * PI,
        AngleMap::Phi2 => 2.0 * PI / 3.0,
    };
    AngleTriple::new(triple.angles.map(|a| shift - a))
}

pub const CANONICAL_TRIPLES: [[f64; 3]; 3] = [
    [4.0 * PI / 3.0, 4.0 * PI / 3.0, 4.0 * PI / 3.0],
    [0.0, PI, PI],
    [PI, PI, 0.0],
];

#[derive(Clone, Debug, PartialEq)]
pub struct FilterOutcome {
    pub canonical: AngleTriple,
    /// 1, 2 or 3 for the entries of [`CANONICAL_TRIPLES`].
    pub label: u8,
    /// Maps applied in order: `phi1`, `phi2`, `swap23`.
    pub steps: Vec<&'static str>,
}

fn canonical_label(t: &AngleTriple) -> Option<u8> {
    CANONICAL_TRIPLES
        .iter()
        .position(|c| t.distance(&AngleTriple::new(*c)) <= REFINE_TOL)
        .map(|i| i as u8 + 1)
}

/// Checks the totally geodesic angle constraints and moves the triple to a
/// canonical one with the fewest angle maps and `E₂ ↔ E₃` swaps.
pub fn totally_geodesic_angle_filter(triple: &AngleTriple) -> Result<FilterOutcome, NfError> {
    let a = triple.angles;
    for i in 0..3 {
        for j in i + 1..3 {
            let r = lattice_dist(a[i] - a[j], PI);
            if r > REFINE_TOL {
                return Err(reject("sin(2(θᵢ − θⱼ)) = 0", r));
            }
        }
        let r = lattice_dist(3.0 * a[i], PI);
        if r > REFINE_TOL {
            return Err(reject("6θᵢ = 0 mod π", r));
        }
    }
    let r = lattice_dist(a.iter().sum(), 2.0 * PI);
    if r > REFINE_TOL {
        return Err(reject("θ₁+θ₂+θ₃ = 0 mod π", r));
    }
    let mut queue = VecDeque::from([(AngleTriple::new(a), Vec::new())]);
    while let Some((t, steps)) = queue.pop_front() {
        if let Some(label) = canonical_label(&t) {
            return Ok(FilterOutcome {
                canonical: AngleTriple::new(CANONICAL_TRIPLES[label as usize - 1]),
                label,
                steps,
            });
        }
        if steps.len() >= 6 {
            continue;
        }
        let next = [
            ("phi1", isometry_angle_map(&t, AngleMap::Phi1)),
            ("phi2", isometry_angle_map(&t, AngleMap::Phi2)),
            ("swap23", t.swap23()),
        ];
        for (name, n) in next {
            let mut s = steps.clone();
            s.push(name);
            queue.push_back((n, s));
        }
    }
    Err(reject("angle triple is not congruent to a canonical one", f64::INFINITY))
}
