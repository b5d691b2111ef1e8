use nalgebra::{DMatrix, DVector};

use crate::calculus::LocalGeometry;
use crate::chart::ChartPoint;
use crate::field::{FieldKind, LocalCovector, LocalTensor, LocalVector, SmoothField};
use crate::jet::Jet;

/// `[X, Y]^i = X(Y^i) − Y(X^i)`.
pub fn lie_bracket(x: &LocalVector, y: &LocalVector) -> LocalVector {
    y.directional(x).sub(&x.directional(y))
}

fn jacobian(x: &LocalVector) -> Vec<LocalVector> {
    (0..x.dim()).map(|k| x.partial(k)).collect()
}

/// `(£_X g)_ij = X(g_ij) + g_kj ∂_i X^k + g_ik ∂_j X^k`.
pub fn lie_derivative_metric(g: &LocalTensor, x: &LocalVector) -> LocalTensor {
    let m = g.dim();
    let dx = jacobian(x);
    LocalTensor::from_fn(m, |i, j| {
        let mut acc = g.at(i, j).derivative_along(x.comps());
        for k in 0..m {
            acc += &(g.at(k, j) * dx[i].get(k));
            acc += &(g.at(i, k) * dx[j].get(k));
        }
        acc
    })
}

/// `(£_X T)^i_j = X(T^i_j) − T^k_j ∂_k X^i + T^i_k ∂_j X^k`.
pub fn lie_derivative_tensor11(t: &LocalTensor, x: &LocalVector) -> LocalTensor {
    let m = t.dim();
    let dx = jacobian(x);
    LocalTensor::from_fn(m, |i, j| {
        let mut acc = t.at(i, j).derivative_along(x.comps());
        for k in 0..m {
            acc -= &(t.at(k, j) * dx[k].get(i));
            acc += &(t.at(i, k) * dx[j].get(k));
        }
        acc
    })
}

/// `(£_X ω)_j = X(ω_j) + ω_k ∂_j X^k`.
pub fn lie_derivative_oneform(w: &LocalCovector, x: &LocalVector) -> LocalCovector {
    let m = w.dim();
    let dx = jacobian(x);
    LocalCovector::new(
        (0..m)
            .map(|j| {
                let mut acc = w.get(j).derivative_along(x.comps());
                for k in 0..m {
                    acc += &(w.get(k) * dx[j].get(k));
                }
                acc
            })
            .collect(),
    )
}

/// Value of a Lie derivative at a point, shaped by the kind of its target.
#[derive(Clone, Debug, PartialEq)]
pub enum LieValue {
    /// `(£_X g)(∂_i, ∂_j)`, a symmetric bilinear form.
    Metric(DMatrix<f64>),
    /// `(£_X T)^i_j`.
    Tensor11(DMatrix<f64>),
    /// `(£_X ω)_j`.
    OneForm(DVector<f64>),
}

/// `£_X` of a metric, (1,1)-tensor or one-form field at `p`.
pub fn lie_derivative(target: &SmoothField, x: &SmoothField, p: &ChartPoint) -> LieValue {
    let xv = x.local_vector(p);
    match target.kind() {
        FieldKind::Metric | FieldKind::TwoForm => {
            LieValue::Metric(lie_derivative_metric(&target.local_tensor(p), &xv).value())
        }
        FieldKind::Tensor11 => {
            LieValue::Tensor11(lie_derivative_tensor11(&target.local_tensor(p), &xv).value())
        }
        FieldKind::OneForm => {
            LieValue::OneForm(lie_derivative_oneform(&target.local_covector(p), &xv).value())
        }
        other => panic!("lie_derivative: unsupported target kind {other:?}"),
    }
}

/// Nijenhuis torsion from brackets:
/// `[S,S](X,Y) = S²[X,Y] + [SX,SY] − S[SX,Y] − S[X,SY]`.
pub fn nijenhuis_bracket(s: &LocalTensor, x: &LocalVector, y: &LocalVector) -> LocalVector {
    let sx = s.apply(x);
    let sy = s.apply(y);
    let xy = lie_bracket(x, y);
    s.apply(&s.apply(&xy))
        .add(&lie_bracket(&sx, &sy))
        .sub(&s.apply(&lie_bracket(&sx, y)))
        .sub(&s.apply(&lie_bracket(x, &sy)))
}

impl LocalGeometry {
    /// Nijenhuis torsion through the Levi-Civita connection:
    /// `[S,S](X,Y) = (S∇_Y S − ∇_{SY} S)X − (S∇_X S − ∇_{SX} S)Y`.
    pub fn nijenhuis_nabla(
        &self,
        s: &LocalTensor,
        x: &LocalVector,
        y: &LocalVector,
    ) -> LocalVector {
        let half = |a: &LocalVector, b: &LocalVector| {
            let s_nabla_a = s.apply(&self.nabla_tensor11(s, a, b));
            let nabla_sa = self.nabla_tensor11(s, &s.apply(a), b);
            s_nabla_a.sub(&nabla_sa)
        };
        half(y, x).sub(&half(x, y))
    }
}

/// `(£_X g)` evaluated on a pair, as a scalar jet.
pub fn killing_form(g: &LocalTensor, x: &LocalVector, u: &LocalVector, v: &LocalVector) -> Jet {
    lie_derivative_metric(g, x).bilinear(u, v)
}
