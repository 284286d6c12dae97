//! Berger-like left-invariant metrics on SL(2,ℝ), stretched along the
//! timelike field `X₁ = i` or the spacelike field `X₃ = k`; their Δ₁-orthonormal
//! frames, closed-form connection tables, a Koszul evaluation from Lie
//! brackets, and fitting `(κ, τ)` to a computed table.

use connection::{lie_bracket, product_connection_chart, ConnectionTable, LeftInvariantField};
use nk_structure::PairVec;
use sl2_core::{inner_sl2, Sl2Elem, I, J, K};

/// Δ₁ signs of the frame.
pub const SIGNS: [f64; 3] = [-1.0, 1.0, 1.0];
/// Largest allowed gap between two tables that are declared equal.
pub const MATCH_TOL: f64 = 1e-7;
/// Gram determinants below this are degenerate.
pub const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BergerError {
    #[error("tau must be finite and nonzero, got {0}")]
    Tau(f64),
    #[error("kappa must be finite and positive for this use, got {0}")]
    Kappa(f64),
    #[error("degenerate metric (Gram determinant {0:e})")]
    Degenerate(f64),
    #[error("table is not of Berger type (fit residual {0:e})")]
    NoFit(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stretch {
    /// Along `X₁`.
    Timelike,
    /// Along `X₃`.
    Spacelike,
}

impl Stretch {
    pub fn name(self) -> &'static str {
        match self {
            Stretch::Timelike => "timelike",
            Stretch::Spacelike => "spacelike",
        }
    }

    fn axis(self) -> Sl2Elem {
        match self {
            Stretch::Timelike => I,
            Stretch::Spacelike => K,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BergerMetric {
    pub kappa: f64,
    pub tau: f64,
    pub stretch: Stretch,
}

impl BergerMetric {
    /// The timelike variant needs `κ > 0`; the spacelike one only a
    /// nondegenerate Gram matrix.
    pub fn new(kappa: f64, tau: f64, stretch: Stretch) -> Result<Self, BergerError> {
        if !(tau.is_finite() && tau != 0.0) {
            return Err(BergerError::Tau(tau));
        }
        if !kappa.is_finite() || (stretch == Stretch::Timelike && kappa <= 0.0) {
            return Err(BergerError::Kappa(kappa));
        }
        let m = BergerMetric { kappa, tau, stretch };
        let det = m.gram_determinant();
        if !(det.abs() >= DEGENERATE_TOL) {
            return Err(BergerError::Degenerate(det));
        }
        Ok(m)
    }

    fn stretch_factor(&self) -> f64 {
        let r = 4.0 * self.tau * self.tau / self.kappa;
        match self.stretch {
            Stretch::Timelike => 1.0 - r,
            Stretch::Spacelike => r - 1.0,
        }
    }

    /// `g̃(X,Y)` for left-invariant fields given by their values at the identity.
    pub fn eval(&self, x: &Sl2Elem, y: &Sl2Elem) -> f64 {
        let e = self.stretch.axis();
        4.0 / self.kappa * (inner_sl2(x, y) + self.stretch_factor() * inner_sl2(x, &e) * inner_sl2(y, &e))
    }

    /// Gram matrix in the basis `X₁, X₂, X₃`.
    pub fn gram(&self) -> [[f64; 3]; 3] {
        let b = [I, J, K];
        let mut out = [[0.0; 3]; 3];
        for (r, x) in b.iter().enumerate() {
            for (c, y) in b.iter().enumerate() {
                out[r][c] = self.eval(x, y);
            }
        }
        out
    }

    pub fn gram_determinant(&self) -> f64 {
        let g = self.gram();
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
    }

    /// The Δ₁-orthonormal frame `Ẽ₁, Ẽ₂, Ẽ₃`; requires `κ > 0`.
    pub fn frame(&self) -> Result<[Sl2Elem; 3], BergerError> {
        if self.kappa <= 0.0 {
            return Err(BergerError::Kappa(self.kappa));
        }
        let short = self.kappa.sqrt() / 2.0;
        let long = self.kappa / (4.0 * self.tau);
        Ok(match self.stretch {
            Stretch::Timelike => [I.scale(long), J.scale(short), K.scale(short)],
            Stretch::Spacelike => [I.scale(short), J.scale(short), K.scale(long)],
        })
    }

    /// Closed-form `∇̃_{Ẽᵢ}Ẽⱼ` coefficients.
    pub fn connection_table(&self) -> ConnectionTable {
        table_from(self.tau, self.kappa / (2.0 * self.tau), self.stretch)
    }

    /// The same table from the Koszul formula with constant inner products:
    /// `2g̃(∇_X Y, Z) = g̃([X,Y],Z) − g̃([Y,Z],X) + g̃([Z,X],Y)`.
    pub fn koszul_table(&self) -> Result<ConnectionTable, BergerError> {
        let e = self.frame()?;
        let br = |a: &Sl2Elem, b: &Sl2Elem| {
            lie_bracket(&LeftInvariantField::new(*a, Sl2Elem::ZERO), &LeftInvariantField::new(*b, Sl2Elem::ZERO)).alpha
        };
        let mut t = ConnectionTable::zeros(["E1", "E2", "E3"]);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let s = self.eval(&br(&e[i], &e[j]), &e[k]) - self.eval(&br(&e[j], &e[k]), &e[i])
                        + self.eval(&br(&e[k], &e[i]), &e[j]);
                    t.set(i, j, k, SIGNS[k] * s / 2.0);
                }
            }
        }
        Ok(t)
    }

    /// Largest entry of `∇_{Ẽᵢ}Ẽⱼ − ∇_{Ẽⱼ}Ẽᵢ − [Ẽᵢ,Ẽⱼ]` for `table`.
    pub fn torsion_residual(&self, table: &ConnectionTable) -> Result<f64, BergerError> {
        let e = self.frame()?;
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let b = lie_bracket(&LeftInvariantField::new(e[i], Sl2Elem::ZERO), &LeftInvariantField::new(e[j], Sl2Elem::ZERO)).alpha;
                for k in 0..3 {
                    let coord = SIGNS[k] * self.eval(&b, &e[k]);
                    m = m.max((table.get(i, j, k) - table.get(j, i, k) - coord).abs());
                }
            }
        }
        Ok(m)
    }

    /// Largest `|g̃(Ẽᵢ,Ẽⱼ) − Δ₁ᵢⱼ|`.
    pub fn frame_residual(&self) -> Result<f64, BergerError> {
        let e = self.frame()?;
        let mut m = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { SIGNS[i] } else { 0.0 };
                m = m.max((self.eval(&e[i], &e[j]) - want).abs());
            }
        }
        Ok(m)
    }
}

/// `g̃(X, Y)`.
pub fn berger_eval(m: &BergerMetric, x: &Sl2Elem, y: &Sl2Elem) -> f64 {
    m.eval(x, y)
}

/// The Berger table with `s = κ/(2τ)` as a free parameter; linear in `(τ, s)`.
pub fn table_from(tau: f64, s: f64, stretch: Stretch) -> ConnectionTable {
    let mut t = ConnectionTable::zeros(["E1", "E2", "E3"]);
    let entries = match stretch {
        Stretch::Timelike => [
            (0, 1, 2, s - tau),
            (0, 2, 1, tau - s),
            (1, 0, 2, -tau),
            (1, 2, 0, -tau),
            (2, 0, 1, tau),
            (2, 1, 0, tau),
        ],
        Stretch::Spacelike => [
            (0, 1, 2, tau),
            (0, 2, 1, -tau),
            (1, 0, 2, -tau),
            (1, 2, 0, -tau),
            (2, 0, 1, s - tau),
            (2, 1, 0, s - tau),
        ],
    };
    for (i, j, k, v) in entries {
        t.set(i, j, k, v);
    }
    t
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameMatch {
    pub matches: bool,
    pub deviation: f64,
}

pub fn match_frame_constants(t1: &ConnectionTable, t2: &ConnectionTable) -> FrameMatch {
    let deviation = t1.max_diff(t2);
    FrameMatch { matches: deviation <= MATCH_TOL, deviation }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BergerFit {
    pub metric: BergerMetric,
    /// Largest entry of the table minus the fitted Berger table.
    pub residual: f64,
}

/// Least-squares `(τ, s)` over all 27 entries, then `κ = 2τs`.
pub fn fit_berger(table: &ConnectionTable, stretch: Stretch) -> Result<BergerFit, BergerError> {
    let bt = table_from(1.0, 0.0, stretch);
    let bs = table_from(0.0, 1.0, stretch);
    let (mut ata, mut atb) = ([[0.0f64; 2]; 2], [0.0f64; 2]);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let row = [bt.get(i, j, k), bs.get(i, j, k)];
                for r in 0..2 {
                    atb[r] += row[r] * table.get(i, j, k);
                    for c in 0..2 {
                        ata[r][c] += row[r] * row[c];
                    }
                }
            }
        }
    }
    let det = ata[0][0] * ata[1][1] - ata[0][1] * ata[1][0];
    let tau = (ata[1][1] * atb[0] - ata[0][1] * atb[1]) / det;
    let s = (ata[0][0] * atb[1] - ata[1][0] * atb[0]) / det;
    let residual = table.max_diff(&table_from(tau, s, stretch));
    let metric = BergerMetric::new(2.0 * tau * s, tau, stretch).map_err(|_| BergerError::NoFit(residual))?;
    Ok(BergerFit { metric, residual })
}

/// `F₁ = −√(3/2)(i,i)`, `F₂ = (j,−j)/√2`, `F₃ = (k,−k)/√2`.
pub fn identification_frame() -> [PairVec; 3] {
    let a = -(1.5f64).sqrt();
    let b = 0.5f64.sqrt();
    [PairVec::new(I.scale(a), I.scale(a)), PairVec::new(J.scale(b), J.scale(-b)), PairVec::new(K.scale(b), K.scale(-b))]
}

/// Product-metric connection table of [`identification_frame`].
pub fn identification_table() -> ConnectionTable {
    ConnectionTable::from_frame(&identification_frame(), SIGNS, ["F1", "F2", "F3"], product_connection_chart)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let m = BergerMetric::new(4.0, 1.0, Stretch::Timelike).unwrap();
        assert!((m.eval(&J, &J) - 1.0).abs() < 1e-15);
        let e = m.frame().unwrap();
        assert!((m.eval(&e[0], &e[0]) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn round_when_unstretched() {
        let m = BergerMetric::new(4.0, 1.0, Stretch::Spacelike).unwrap();
        for x in [I, J, K] {
            for y in [I, J, K] {
                assert!((m.eval(&x, &y) - inner_sl2(&x, &y)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(BergerMetric::new(1.0, 0.0, Stretch::Timelike), Err(BergerError::Tau(0.0)));
        assert_eq!(BergerMetric::new(-1.0, 1.0, Stretch::Timelike), Err(BergerError::Kappa(-1.0)));
        assert!(BergerMetric::new(-1.0, 1.0, Stretch::Spacelike).is_ok());
        assert!(BergerMetric::new(-1.0, 1.0, Stretch::Spacelike).unwrap().frame().is_err());
    }

    #[test]
    fn fit_recovers_parameters() {
        let m = BergerMetric::new(3.0, 0.7, Stretch::Spacelike).unwrap();
        let fit = fit_berger(&m.connection_table(), Stretch::Spacelike).unwrap();
        assert!((fit.metric.kappa - 3.0).abs() < 1e-12);
        assert!((fit.metric.tau - 0.7).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
    }
}
