//! The structure tensors as constant-coefficient maps on sl(2,ℝ)².

use sl2_core::{cross, inner_sl2};

use crate::pair::PairVec;

pub const SQRT3: f64 = 1.732_050_807_568_877_2;

/// g = ⅔⟨(α,β),(γ,δ)⟩ − ⅓⟨(β,α),(γ,δ)⟩.
pub fn g(x: &PairVec, y: &PairVec) -> f64 {
    let (a, b, c, d) = (&x.alpha, &x.beta, &y.alpha, &y.beta);
    (2.0 / 3.0) * (inner_sl2(a, c) + inner_sl2(b, d)) - (1.0 / 3.0) * (inner_sl2(b, c) + inner_sl2(a, d))
}

/// J(α,β) = (α − 2β, 2α − β)/√3.
pub fn j(x: &PairVec) -> PairVec {
    let (a, b) = (x.alpha, x.beta);
    PairVec::new(a - b.scale(2.0), a.scale(2.0) - b).scale(1.0 / SQRT3)
}

/// P(α,β) = (β,α).
pub fn p(x: &PairVec) -> PairVec {
    PairVec::new(x.beta, x.alpha)
}

/// Q = −(2PJ − J)/√3, the product structure.
pub fn q(x: &PairVec) -> PairVec {
    let jx = j(x);
    (p(&jx).scale(2.0) - jx).scale(-1.0 / SQRT3)
}

/// The componentwise sum of SL(2,ℝ) inner products.
pub fn product_metric(x: &PairVec, y: &PairVec) -> f64 {
    inner_sl2(&x.alpha, &y.alpha) + inner_sl2(&x.beta, &y.beta)
}

/// G(X,Y) = (∇̃_X J)Y in closed form.
pub fn tensor_g(x: &PairVec, y: &PairVec) -> PairVec {
    let (a, b, c, d) = (&x.alpha, &x.beta, &y.alpha, &y.beta);
    let ac = cross(a, c);
    let ad = cross(a, d);
    let cb = cross(c, b);
    let bd = cross(b, d);
    let first = -ac - ad + cb + bd.scale(2.0);
    let second = ac.scale(-2.0) + ad - cb + bd;
    PairVec::new(first, second).scale(2.0 / (3.0 * SQRT3))
}

/// Closed-form curvature tensor R̃(U,V)W of the nearly Kähler metric.
pub fn curvature(u: &PairVec, v: &PairVec, w: &PairVec) -> PairVec {
    let (ju, jv, jw) = (j(u), j(v), j(w));
    let (pu, pv) = (p(u), p(v));
    let (jpu, jpv) = (j(&pu), j(&pv));
    let t1 = u.scale(g(v, w)) - v.scale(g(u, w));
    let t2 = ju.scale(g(&jv, w)) - jv.scale(g(&ju, w)) - jw.scale(2.0 * g(&ju, v));
    let t3 = pu.scale(g(&pv, w)) - pv.scale(g(&pu, w)) + jpu.scale(g(&jpv, w)) - jpv.scale(g(&jpu, w));
    t1.scale(-5.0 / 6.0) + t2.scale(-1.0 / 6.0) + t3.scale(-2.0 / 3.0)
}

/// Both sides of the constant-type identity for `(X,Y,Z,W)`.
pub fn constant_type_sides(x: &PairVec, y: &PairVec, z: &PairVec, w: &PairVec) -> (f64, f64) {
    let lhs = g(&tensor_g(x, y), &tensor_g(z, w));
    let jx = j(x);
    let rhs = (-2.0 / 3.0)
        * (g(x, z) * g(y, w) - g(x, w) * g(y, z) + g(&jx, z) * g(y, &j(w)) - g(&jx, w) * g(y, &j(z)));
    (lhs, rhs)
}

/// |g(G(X,Y),G(X,Y)) − RHS| with `Z = X`, `W = Y`.
pub fn constant_type_residual(x: &PairVec, y: &PairVec) -> f64 {
    let (l, r) = constant_type_sides(x, y, x, y);
    (l - r).abs()
}
