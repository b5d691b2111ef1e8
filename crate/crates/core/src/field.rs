//! Smooth fields given by chart-component functions, and their local jets.
//!
//! A [`SmoothField`] is a closure from coordinate jets to component jets. The
//! same closure gives plain values (zero-variable jets), exact derivatives
//! (seeded jets) and pullbacks (jets of an embedding fed in as coordinates).
//!
//! Component layouts: vectors and one-forms have `m` entries; (1,1)-tensors,
//! metrics and two-forms are `m×m` row-major, with `T[i*m + j] = T^i_j` for
//! (1,1)-tensors and `ω[i*m + j] = ω_ij` for bilinear forms.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::chart::ChartPoint;
use crate::jet::{dot, Jet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Scalar,
    Vector,
    OneForm,
    Tensor11,
    Metric,
    TwoForm,
}

impl FieldKind {
    pub fn component_count(self, dim: usize) -> usize {
        match self {
            FieldKind::Scalar => 1,
            FieldKind::Vector | FieldKind::OneForm => dim,
            FieldKind::Tensor11 | FieldKind::Metric | FieldKind::TwoForm => dim * dim,
        }
    }
}

type ComponentFn = dyn Fn(&[Jet]) -> Vec<Jet> + Send + Sync;

#[derive(Clone)]
pub struct SmoothField {
    kind: FieldKind,
    dim: usize,
    eval: Arc<ComponentFn>,
}

impl fmt::Debug for SmoothField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothField")
            .field("kind", &self.kind)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

impl SmoothField {
    pub fn new(
        kind: FieldKind,
        dim: usize,
        eval: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self {
            kind,
            dim,
            eval: Arc::new(eval),
        }
    }

    pub fn scalar(dim: usize, eval: impl Fn(&[Jet]) -> Jet + Send + Sync + 'static) -> Self {
        Self::new(FieldKind::Scalar, dim, move |x| vec![eval(x)])
    }

    pub fn vector(
        dim: usize,
        eval: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self::new(FieldKind::Vector, dim, eval)
    }

    pub fn one_form(
        dim: usize,
        eval: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self::new(FieldKind::OneForm, dim, eval)
    }

    pub fn tensor11(
        dim: usize,
        eval: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self::new(FieldKind::Tensor11, dim, eval)
    }

    pub fn metric(
        dim: usize,
        eval: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self::new(FieldKind::Metric, dim, eval)
    }

    pub fn two_form(
        dim: usize,
        eval: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self::new(FieldKind::TwoForm, dim, eval)
    }

    /// Field with constant components.
    pub fn constant(kind: FieldKind, dim: usize, components: Vec<f64>) -> Self {
        assert_eq!(components.len(), kind.component_count(dim));
        Self::new(kind, dim, move |x| {
            let nvars = x.first().map_or(0, Jet::nvars);
            components.iter().map(|&c| Jet::constant(c, nvars)).collect()
        })
    }

    pub fn constant_vector(v: &DVector<f64>) -> Self {
        Self::constant(FieldKind::Vector, v.len(), v.iter().copied().collect())
    }

    pub fn constant_one_form(w: &DVector<f64>) -> Self {
        Self::constant(FieldKind::OneForm, w.len(), w.iter().copied().collect())
    }

    pub fn constant_matrix(kind: FieldKind, a: &DMatrix<f64>) -> Self {
        assert!(a.is_square());
        let m = a.nrows();
        let comps = (0..m * m).map(|k| a[(k / m, k % m)]).collect();
        Self::constant(kind, m, comps)
    }

    pub fn euclidean_metric(dim: usize) -> Self {
        Self::constant_matrix(FieldKind::Metric, &DMatrix::identity(dim, dim))
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates on arbitrary coordinate jets (used for pullbacks).
    pub fn eval_jets(&self, coords: &[Jet]) -> Vec<Jet> {
        assert_eq!(coords.len(), self.dim, "coordinate count");
        let out = (self.eval)(coords);
        assert_eq!(
            out.len(),
            self.kind.component_count(self.dim),
            "component count of {:?} field",
            self.kind
        );
        out
    }

    /// Components with exact first and second partials at `p`.
    pub fn jets_at(&self, p: &ChartPoint) -> Vec<Jet> {
        self.eval_jets(&Jet::seed(p.coords()))
    }

    pub fn values_at(&self, p: &ChartPoint) -> Vec<f64> {
        self.eval_jets(&Jet::seed_values(p.coords()))
            .iter()
            .map(Jet::value)
            .collect()
    }

    pub fn local_vector(&self, p: &ChartPoint) -> LocalVector {
        debug_assert!(matches!(self.kind, FieldKind::Vector));
        LocalVector::new(self.jets_at(p))
    }

    pub fn local_covector(&self, p: &ChartPoint) -> LocalCovector {
        debug_assert!(matches!(self.kind, FieldKind::OneForm));
        LocalCovector::new(self.jets_at(p))
    }

    pub fn local_tensor(&self, p: &ChartPoint) -> LocalTensor {
        debug_assert!(matches!(
            self.kind,
            FieldKind::Tensor11 | FieldKind::Metric | FieldKind::TwoForm
        ));
        LocalTensor::new(self.dim, self.jets_at(p))
    }

    pub fn local_scalar(&self, p: &ChartPoint) -> Jet {
        debug_assert!(matches!(self.kind, FieldKind::Scalar));
        self.jets_at(p).remove(0)
    }
}

fn min_order(comps: &[Jet]) -> u8 {
    comps.iter().map(Jet::order).min().unwrap_or(crate::jet::MAX_ORDER)
}

/// Jet of a vector field at a point: components with their partials.
#[derive(Clone, Debug)]
pub struct LocalVector {
    comps: Vec<Jet>,
}

impl LocalVector {
    pub fn new(comps: Vec<Jet>) -> Self {
        Self { comps }
    }

    /// Constant-coefficient extension of a tangent vector.
    pub fn constant(v: &DVector<f64>, nvars: usize) -> Self {
        Self::new(v.iter().map(|&c| Jet::constant(c, nvars)).collect())
    }

    pub fn zero(dim: usize, nvars: usize) -> Self {
        Self::new(vec![Jet::constant(0.0, nvars); dim])
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn nvars(&self) -> usize {
        self.comps.first().map_or(0, Jet::nvars)
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    pub fn get(&self, i: usize) -> &Jet {
        &self.comps[i]
    }

    pub fn order(&self) -> u8 {
        min_order(&self.comps)
    }

    pub fn value(&self) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.comps.iter().map(Jet::value))
    }

    /// ∂_k of every component.
    pub fn partial(&self, k: usize) -> LocalVector {
        Self::new(self.comps.iter().map(|c| c.partial(k)).collect())
    }

    /// Componentwise derivative `X(Y^i)`, the flat (non-covariant) directional derivative.
    pub fn directional(&self, dir: &LocalVector) -> LocalVector {
        Self::new(
            self.comps
                .iter()
                .map(|c| c.derivative_along(dir.comps()))
                .collect(),
        )
    }

    pub fn add(&self, other: &LocalVector) -> LocalVector {
        Self::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LocalVector) -> LocalVector {
        Self::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: f64) -> LocalVector {
        Self::new(self.comps.iter().map(|a| a * c).collect())
    }

    pub fn scale_by(&self, s: &Jet) -> LocalVector {
        Self::new(self.comps.iter().map(|a| a * s).collect())
    }
}

/// Jet of a one-form at a point.
#[derive(Clone, Debug)]
pub struct LocalCovector {
    comps: Vec<Jet>,
}

impl LocalCovector {
    pub fn new(comps: Vec<Jet>) -> Self {
        Self { comps }
    }

    pub fn constant(w: &DVector<f64>, nvars: usize) -> Self {
        Self::new(w.iter().map(|&c| Jet::constant(c, nvars)).collect())
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    pub fn get(&self, i: usize) -> &Jet {
        &self.comps[i]
    }

    pub fn order(&self) -> u8 {
        min_order(&self.comps)
    }

    pub fn value(&self) -> DVector<f64> {
        DVector::from_iterator(self.dim(), self.comps.iter().map(Jet::value))
    }

    /// ω(X) as a scalar jet.
    pub fn apply(&self, x: &LocalVector) -> Jet {
        dot(&self.comps, x.comps())
    }

    pub fn scale(&self, c: f64) -> LocalCovector {
        Self::new(self.comps.iter().map(|a| a * c).collect())
    }
}

/// Jet of a two-index object (a (1,1)-tensor or a bilinear form) at a point.
#[derive(Clone, Debug)]
pub struct LocalTensor {
    dim: usize,
    comps: Vec<Jet>,
}

impl LocalTensor {
    pub fn new(dim: usize, comps: Vec<Jet>) -> Self {
        assert_eq!(comps.len(), dim * dim);
        Self { dim, comps }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Jet) -> Self {
        let mut comps = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                comps.push(f(i, j));
            }
        }
        Self::new(dim, comps)
    }

    pub fn constant(a: &DMatrix<f64>, nvars: usize) -> Self {
        Self::from_fn(a.nrows(), |i, j| Jet::constant(a[(i, j)], nvars))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.comps.first().map_or(0, Jet::nvars)
    }

    pub fn at(&self, i: usize, j: usize) -> &Jet {
        &self.comps[i * self.dim + j]
    }

    pub fn comps(&self) -> &[Jet] {
        &self.comps
    }

    pub fn order(&self) -> u8 {
        min_order(&self.comps)
    }

    pub fn value(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.at(i, j).value())
    }

    pub fn partial(&self, k: usize) -> LocalTensor {
        Self::new(self.dim, self.comps.iter().map(|c| c.partial(k)).collect())
    }

    /// `T X` for a (1,1)-tensor: `(TX)^i = T^i_j X^j`.
    pub fn apply(&self, x: &LocalVector) -> LocalVector {
        let m = self.dim;
        LocalVector::new(
            (0..m)
                .map(|i| dot(&self.comps[i * m..(i + 1) * m], x.comps()))
                .collect(),
        )
    }

    /// `ω ∘ T` for a (1,1)-tensor: `(ω T)_j = ω_i T^i_j`.
    pub fn pull_covector(&self, w: &LocalCovector) -> LocalCovector {
        let m = self.dim;
        LocalCovector::new(
            (0..m)
                .map(|j| {
                    let column: Vec<Jet> = (0..m).map(|i| self.at(i, j).clone()).collect();
                    dot(w.comps(), &column)
                })
                .collect(),
        )
    }

    /// `B(X, Y) = B_ij X^i Y^j` for a bilinear form.
    pub fn bilinear(&self, x: &LocalVector, y: &LocalVector) -> Jet {
        let m = self.dim;
        let mut acc = Jet::constant(0.0, self.nvars());
        for i in 0..m {
            let row = dot(&self.comps[i * m..(i + 1) * m], y.comps());
            acc += &(x.get(i) * &row);
        }
        acc
    }

    /// `B(X, ·)` as a covector.
    pub fn lower(&self, x: &LocalVector) -> LocalCovector {
        let m = self.dim;
        LocalCovector::new(
            (0..m)
                .map(|j| {
                    let column: Vec<Jet> = (0..m).map(|i| self.at(i, j).clone()).collect();
                    dot(x.comps(), &column)
                })
                .collect(),
        )
    }

    pub fn compose(&self, other: &LocalTensor) -> LocalTensor {
        let m = self.dim;
        Self::from_fn(m, |i, j| {
            let column: Vec<Jet> = (0..m).map(|k| other.at(k, j).clone()).collect();
            dot(&self.comps[i * m..(i + 1) * m], &column)
        })
    }

    pub fn add(&self, other: &LocalTensor) -> LocalTensor {
        Self::new(
            self.dim,
            self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &LocalTensor) -> LocalTensor {
        Self::new(
            self.dim,
            self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        )
    }

    pub fn scale(&self, c: f64) -> LocalTensor {
        Self::new(self.dim, self.comps.iter().map(|a| a * c).collect())
    }

    /// Inverse by Gauss–Jordan elimination on jets (partial pivoting on values).
    pub fn inverse(&self) -> Option<LocalTensor> {
        let m = self.dim;
        let nv = self.nvars();
        let mut a: Vec<Vec<Jet>> = (0..m)
            .map(|i| self.comps[i * m..(i + 1) * m].to_vec())
            .collect();
        let mut inv: Vec<Vec<Jet>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| Jet::constant(if i == j { 1.0 } else { 0.0 }, nv))
                    .collect()
            })
            .collect();
        for col in 0..m {
            let pivot = (col..m).max_by(|&r, &s| {
                a[r][col]
                    .value()
                    .abs()
                    .total_cmp(&a[s][col].value().abs())
            })?;
            if a[pivot][col].value().abs() < 1e-300 {
                return None;
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let rp = a[col][col].recip();
            for j in 0..m {
                a[col][j] = &a[col][j] * &rp;
                inv[col][j] = &inv[col][j] * &rp;
            }
            for r in 0..m {
                if r == col {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..m {
                    let da = &factor * &a[col][j];
                    a[r][j] -= &da;
                    let di = &factor * &inv[col][j];
                    inv[r][j] -= &di;
                }
            }
        }
        Some(Self::new(m, inv.into_iter().flatten().collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_inverse_matches_derivative_formula() {
        // A(x, y) = [[2 + x, y], [y, 3 + x y]]
        let p = ChartPoint::new(vec![0.3, -0.4]);
        let field = SmoothField::metric(2, |x| {
            vec![
                &x[0] + 2.0,
                x[1].clone(),
                x[1].clone(),
                &x[0] * &x[1] + 3.0,
            ]
        });
        let a = field.local_tensor(&p);
        let inv = a.inverse().unwrap();
        let prod = a.compose(&inv);
        for i in 0..2 {
            for j in 0..2 {
                let e = prod.at(i, j);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((e.value() - target).abs() < 1e-14);
                assert!(e.gradient().iter().all(|g| g.abs() < 1e-14));
                assert!(e.hessian().iter().all(|h| h.abs() < 1e-13));
            }
        }
    }

    #[test]
    fn values_and_jets_agree() {
        let field = SmoothField::vector(2, |x| vec![x[0].sin(), &x[0] * &x[1]]);
        let p = ChartPoint::new(vec![0.5, 2.0]);
        let vals = field.values_at(&p);
        let jets = field.local_vector(&p).value();
        assert_eq!(vals, jets.iter().copied().collect::<Vec<_>>());
    }

    #[test]
    fn bilinear_lower_and_apply_are_consistent() {
        let p = ChartPoint::new(vec![0.1, 0.2, 0.3]);
        let b = LocalTensor::constant(
            &DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 2.0, 5.0, 1.0, 0.0, 1.0, 4.0]),
            3,
        );
        let x = LocalVector::constant(&DVector::from_vec(vec![1.0, -1.0, 2.0]), 3);
        let y = LocalVector::constant(&DVector::from_vec(vec![0.5, 0.0, 1.0]), 3);
        let direct = b.bilinear(&x, &y).value();
        let lowered = b.lower(&x).apply(&y).value();
        assert!((direct - lowered).abs() < 1e-15);
        let _ = p;
    }
}
