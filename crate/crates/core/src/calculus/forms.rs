//! Exterior derivatives with the normalised co-boundary conventions:
//! `dω(X,Y) = ½{X ω(Y) − Y ω(X) − ω([X,Y])}` and
//! `dΦ(X,Y,Z) = ⅓{X Φ(Y,Z) + Y Φ(Z,X) + Z Φ(X,Y) − Φ([X,Y],Z) − Φ([Z,X],Y) − Φ([Y,Z],X)}`.

use crate::calculus::lie_bracket;
use crate::field::{LocalCovector, LocalTensor, LocalVector};
use crate::jet::Jet;

/// Human-readable note on the conventions, echoed into reports.
pub const CONVENTION_NOTE: &str = "paper-normalized d: 1/2, 1/3";

pub fn d_oneform(w: &LocalCovector, x: &LocalVector, y: &LocalVector) -> Jet {
    let wy = w.apply(y);
    let wx = w.apply(x);
    let bracket = w.apply(&lie_bracket(x, y));
    (wy.derivative_along(x.comps()) - wx.derivative_along(y.comps()) - bracket) * 0.5
}

pub fn d_twoform(phi: &LocalTensor, x: &LocalVector, y: &LocalVector, z: &LocalVector) -> Jet {
    let term = |a: &LocalVector, b: &LocalVector, c: &LocalVector| {
        phi.bilinear(b, c).derivative_along(a.comps()) - phi.bilinear(&lie_bracket(a, b), c)
    };
    // X Φ(Y,Z) − Φ([X,Y],Z), cycled through (X,Y,Z) → (Y,Z,X) → (Z,X,Y)
    (term(x, y, z) + term(y, z, x) + term(z, x, y)) * (1.0 / 3.0)
}

/// Components `(dω)_ij = ½(∂_i ω_j − ∂_j ω_i)` as a two-form jet.
pub fn exterior_derivative(w: &LocalCovector) -> LocalTensor {
    let m = w.dim();
    LocalTensor::from_fn(m, |i, j| (w.get(j).partial(i) - w.get(i).partial(j)) * 0.5)
}
