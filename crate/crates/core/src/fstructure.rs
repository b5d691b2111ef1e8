//! Structure packs `(f, Q, ξ_i, η^i, g)` and their pointwise evaluation.
//!
//! A [`StructurePack`] is a set of fields on a chart; it is not validated on
//! construction, so perturbed or deliberately broken packs can be built and
//! measured. [`LocalPack`] evaluates a pack at one point and caches every
//! tensorial derivative on the coordinate basis, after which identities are
//! cheap multilinear evaluations on arbitrary test vectors.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::calculus::{
    d_oneform, d_twoform, lie_derivative_metric, lie_derivative_tensor11, nijenhuis_bracket,
    LocalGeometry,
};
use crate::chart::{vector_rng, Chart, ChartPoint};
use crate::error::{GeometryError, Result};
use crate::field::{FieldKind, LocalCovector, LocalTensor, LocalVector, SmoothField};
use crate::jet::dot;
use crate::probe::{g_norm, orthonormal_frame, sup, TestFrame};

/// Smallest eigenvalue of the symmetrized `Q` below which a pack is rejected.
pub const Q_EIGEN_FLOOR: f64 = 1e-12;
/// Singular values of `f` below this count towards `ker f`.
pub const RANK_KERNEL_CUTOFF: f64 = 1e-8;
/// Singular values of `f` on `D` must exceed this.
pub const RANK_IMAGE_FLOOR: f64 = 1e-4;

/// The fields of a pack, grouped to keep constructors readable.
#[derive(Clone, Debug)]
pub struct PackFields {
    pub g: SmoothField,
    pub f: SmoothField,
    pub q: SmoothField,
    pub xi: Vec<SmoothField>,
    pub eta: Vec<SmoothField>,
}

#[derive(Clone, Debug)]
pub struct StructurePack {
    name: String,
    chart: Chart,
    n: usize,
    s: usize,
    fields: PackFields,
}

fn expect_field(field: &SmoothField, kind: FieldKind, dim: usize, what: &str) -> Result<()> {
    if field.kind() != kind {
        return Err(GeometryError::InvalidParameter {
            name: what.into(),
            reason: format!("expected a {kind:?} field, got {:?}", field.kind()),
        });
    }
    if field.dim() != dim {
        return Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: field.dim(),
        });
    }
    Ok(())
}

impl StructurePack {
    /// Checks shapes only; the geometric axioms are measured by
    /// [`axioms_residual`].
    pub fn new(
        name: impl Into<String>,
        chart: Chart,
        n: usize,
        s: usize,
        fields: PackFields,
    ) -> Result<Self> {
        let m = chart.dim();
        if 2 * n + s != m {
            return Err(GeometryError::DimensionMismatch {
                expected: 2 * n + s,
                found: m,
            });
        }
        if n == 0 || s == 0 {
            return Err(GeometryError::InvalidParameter {
                name: if n == 0 { "n" } else { "s" }.into(),
                reason: "must be positive".into(),
            });
        }
        expect_field(&fields.g, FieldKind::Metric, m, "g")?;
        expect_field(&fields.f, FieldKind::Tensor11, m, "f")?;
        expect_field(&fields.q, FieldKind::Tensor11, m, "Q")?;
        if fields.xi.len() != s || fields.eta.len() != s {
            return Err(GeometryError::InvalidParameter {
                name: "xi/eta".into(),
                reason: format!(
                    "expected {s} Reeb fields and forms, got {} and {}",
                    fields.xi.len(),
                    fields.eta.len()
                ),
            });
        }
        for x in &fields.xi {
            expect_field(x, FieldKind::Vector, m, "xi")?;
        }
        for e in &fields.eta {
            expect_field(e, FieldKind::OneForm, m, "eta")?;
        }
        Ok(Self {
            name: name.into(),
            chart,
            n,
            s,
            fields,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        2 * self.n + self.s
    }

    pub fn fields(&self) -> &PackFields {
        &self.fields
    }

    pub fn g(&self) -> &SmoothField {
        &self.fields.g
    }

    pub fn f(&self) -> &SmoothField {
        &self.fields.f
    }

    pub fn q(&self) -> &SmoothField {
        &self.fields.q
    }

    pub fn xi(&self, i: usize) -> &SmoothField {
        &self.fields.xi[i]
    }

    pub fn eta(&self, i: usize) -> &SmoothField {
        &self.fields.eta[i]
    }

    /// `Q̃ = Q − id`.
    pub fn q_tilde(&self) -> SmoothField {
        let q = self.fields.q.clone();
        let m = self.dim();
        SmoothField::tensor11(m, move |x| {
            let mut c = q.eval_jets(x);
            for i in 0..m {
                c[i * m + i] = &c[i * m + i] - 1.0;
            }
            c
        })
    }

    /// `ξ̄ = Σ ξ_i`.
    pub fn xi_bar(&self) -> SmoothField {
        sum_fields(&self.fields.xi, FieldKind::Vector, self.dim())
    }

    /// `η̄ = Σ η^i`.
    pub fn eta_bar(&self) -> SmoothField {
        sum_fields(&self.fields.eta, FieldKind::OneForm, self.dim())
    }

    /// Fundamental two-form `Φ(X,Y) = g(X, fY)`, i.e. `Φ_ij = g_ik f^k_j`.
    pub fn phi_field(&self) -> SmoothField {
        let g = self.fields.g.clone();
        let f = self.fields.f.clone();
        let m = self.dim();
        SmoothField::two_form(m, move |x| {
            let g = LocalTensor::new(m, g.eval_jets(x));
            let f = LocalTensor::new(m, f.eval_jets(x));
            g.compose(&f).comps().to_vec()
        })
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same pack with `f` replaced by `c·f` (Q untouched).
    pub fn with_f_scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.fields.f = scaled(&self.fields.f, c);
        out.name = format!("{}[f*{c}]", self.name);
        out
    }

    /// Same pack with every `η^i` replaced by `c·η^i`.
    pub fn with_eta_scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.fields.eta = self.fields.eta.iter().map(|e| scaled(e, c)).collect();
        out.name = format!("{}[eta*{c}]", self.name);
        out
    }

    pub fn with_q(&self, q: SmoothField) -> Self {
        let mut out = self.clone();
        out.fields.q = q;
        out.name = format!("{}[Q replaced]", self.name);
        out
    }

    /// Same pack with `Q = id`, which breaks the axioms on a genuinely weak pack.
    pub fn with_q_identity(&self) -> Self {
        let m = self.dim();
        self.with_q(SmoothField::constant_matrix(
            FieldKind::Tensor11,
            &DMatrix::identity(m, m),
        ))
    }

    pub fn with_xi(&self, i: usize, xi: SmoothField) -> Self {
        let mut out = self.clone();
        out.fields.xi[i] = xi;
        out.name = format!("{}[xi{} replaced]", self.name, i + 1);
        out
    }

    /// Evaluates the pack at `p`, with test vectors drawn from the stream
    /// `(seed, index)`.
    pub fn local(&self, p: &ChartPoint, seed: u64, index: u64) -> Result<LocalPack> {
        self.chart.check(p)?;
        LocalPack::new(self, p, seed, index)
    }
}

fn scaled(field: &SmoothField, c: f64) -> SmoothField {
    let inner = field.clone();
    SmoothField::new(field.kind(), field.dim(), move |x| {
        inner.eval_jets(x).iter().map(|j| j * c).collect()
    })
}

fn sum_fields(fields: &[SmoothField], kind: FieldKind, m: usize) -> SmoothField {
    let fields = fields.to_vec();
    SmoothField::new(kind, m, move |x| {
        let mut acc = fields[0].eval_jets(x);
        for f in &fields[1..] {
            for (a, b) in acc.iter_mut().zip(f.eval_jets(x)) {
                *a += &b;
            }
        }
        acc
    })
}

fn basis_vector(m: usize, k: usize) -> DVector<f64> {
    let mut v = DVector::zeros(m);
    v[k] = 1.0;
    v
}

/// A pack evaluated at one point.
///
/// Matrices named `nabla_*` are indexed by the coordinate direction `k` of
/// `∇_{∂_k}`; bilinear caches are in coordinate components. All cached
/// quantities are tensorial, so constant extension of test vectors is safe.
#[derive(Clone, Debug)]
pub struct LocalPack {
    n: usize,
    s: usize,
    geo: LocalGeometry,
    frame: TestFrame,
    g: DMatrix<f64>,
    f: DMatrix<f64>,
    q: DMatrix<f64>,
    xi: Vec<DVector<f64>>,
    eta: Vec<DVector<f64>>,
    f_jet: LocalTensor,
    q_jet: LocalTensor,
    xi_jet: Vec<LocalVector>,
    eta_jet: Vec<LocalCovector>,
    nabla_f: Vec<DMatrix<f64>>,
    nabla_q: Vec<DMatrix<f64>>,
    /// Column `k` of entry `i` is `∇_{∂_k} ξ_i`.
    nabla_xi: Vec<DMatrix<f64>>,
    d_eta: Vec<DMatrix<f64>>,
    lie_xi_g: Vec<DMatrix<f64>>,
    lie_xi_f: Vec<DMatrix<f64>>,
    /// `[f,f](∂_a, ∂_b)` at `a*m + b`.
    ff: Vec<DVector<f64>>,
    /// `dΦ(∂_a, ∂_b, ∂_c)` at `(a*m + b)*m + c`.
    d_phi: Vec<f64>,
}

impl LocalPack {
    pub fn new(pack: &StructurePack, p: &ChartPoint, seed: u64, index: u64) -> Result<Self> {
        let m = pack.dim();
        let geo = LocalGeometry::at(pack.g(), p)?;
        let nvars = geo.nvars();
        let g = geo.metric_value();
        let f_jet = pack.f().local_tensor(p);
        let q_jet = pack.q().local_tensor(p);
        let xi_jet: Vec<LocalVector> = pack.fields.xi.iter().map(|x| x.local_vector(p)).collect();
        let xi: Vec<DVector<f64>> = xi_jet.iter().map(LocalVector::value).collect();
        let frame = TestFrame::adapted(&g, &xi, &mut vector_rng(seed, index));
        let eta_jet: Vec<LocalCovector> =
            pack.fields.eta.iter().map(|e| e.local_covector(p)).collect();
        let phi_jet = pack.phi_field().local_tensor(p);

        let basis: Vec<LocalVector> = (0..m)
            .map(|k| LocalVector::constant(&basis_vector(m, k), nvars))
            .collect();

        let nabla_f = basis
            .iter()
            .map(|e| geo.covariant_tensor11(&f_jet, e).value())
            .collect();
        let nabla_q = basis
            .iter()
            .map(|e| geo.covariant_tensor11(&q_jet, e).value())
            .collect();
        let nabla_xi = xi_jet
            .iter()
            .map(|x| {
                let cols: Vec<DVector<f64>> =
                    basis.iter().map(|e| geo.nabla_vector(e, x).value()).collect();
                DMatrix::from_columns(&cols)
            })
            .collect();
        let d_eta = eta_jet
            .iter()
            .map(|w| DMatrix::from_fn(m, m, |a, b| d_oneform(w, &basis[a], &basis[b]).value()))
            .collect();
        let lie_xi_g = xi_jet
            .iter()
            .map(|x| lie_derivative_metric(geo.metric(), x).value())
            .collect();
        let lie_xi_f = xi_jet
            .iter()
            .map(|x| lie_derivative_tensor11(&f_jet, x).value())
            .collect();
        let mut ff = Vec::with_capacity(m * m);
        for a in &basis {
            for b in &basis {
                ff.push(nijenhuis_bracket(&f_jet, a, b).value());
            }
        }
        let mut d_phi = Vec::with_capacity(m * m * m);
        for a in &basis {
            for b in &basis {
                for c in &basis {
                    d_phi.push(d_twoform(&phi_jet, a, b, c).value());
                }
            }
        }

        Ok(Self {
            n: pack.n,
            s: pack.s,
            frame,
            g,
            f: f_jet.value(),
            q: q_jet.value(),
            xi,
            eta: eta_jet.iter().map(LocalCovector::value).collect(),
            geo,
            f_jet,
            q_jet,
            xi_jet,
            eta_jet,
            nabla_f,
            nabla_q,
            nabla_xi,
            d_eta,
            lie_xi_g,
            lie_xi_f,
            ff,
            d_phi,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        2 * self.n + self.s
    }

    pub fn geometry(&self) -> &LocalGeometry {
        &self.geo
    }

    pub fn frame(&self) -> &TestFrame {
        &self.frame
    }

    pub fn point(&self) -> &ChartPoint {
        self.geo.point()
    }

    pub fn f_jet(&self) -> &LocalTensor {
        &self.f_jet
    }

    pub fn q_jet(&self) -> &LocalTensor {
        &self.q_jet
    }

    pub fn xi_jet(&self, i: usize) -> &LocalVector {
        &self.xi_jet[i]
    }

    pub fn eta_jet(&self, i: usize) -> &LocalCovector {
        &self.eta_jet[i]
    }

    /// Constant extension of a tangent vector.
    pub fn extend(&self, v: &DVector<f64>) -> LocalVector {
        LocalVector::constant(v, self.geo.nvars())
    }

    /// Extension of `v` as a field tangent to `D`: `v − Σ η^i(v) ξ_i`, with
    /// `η^i` and `ξ_i` varying.
    pub fn extend_in_d(&self, v: &DVector<f64>) -> LocalVector {
        let mut out = self.extend(v);
        for (x, e) in self.xi_jet.iter().zip(&self.eta_jet) {
            let c = dot(e.comps(), out.comps());
            out = out.sub(&x.scale_by(&c));
        }
        out
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn f_matrix(&self) -> &DMatrix<f64> {
        &self.f
    }

    pub fn q_matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.g * y)[(0, 0)]
    }

    pub fn norm(&self, x: &DVector<f64>) -> f64 {
        g_norm(&self.g, x)
    }

    pub fn f(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.f * x
    }

    pub fn f2(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.f * (&self.f * x)
    }

    pub fn q(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.q * x
    }

    pub fn q_tilde(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.q * x - x
    }

    pub fn xi(&self, i: usize) -> &DVector<f64> {
        &self.xi[i]
    }

    pub fn eta(&self, i: usize, x: &DVector<f64>) -> f64 {
        self.eta[i].dot(x)
    }

    pub fn xi_bar(&self) -> DVector<f64> {
        self.xi.iter().fold(DVector::zeros(self.dim()), |acc, x| acc + x)
    }

    pub fn eta_bar(&self, x: &DVector<f64>) -> f64 {
        self.eta.iter().map(|e| e.dot(x)).sum()
    }

    /// `X − Σ η^i(X) ξ_i`.
    pub fn project_d(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = x.clone();
        for i in 0..self.s {
            out -= &self.xi[i] * self.eta(i, x);
        }
        out
    }

    /// `Φ(X,Y) = g(X, fY)`.
    pub fn phi(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.inner(x, &self.f(y))
    }

    /// `(∇_X f) Y`.
    pub fn nabla_f(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        contract_direction(&self.nabla_f, x) * y
    }

    /// `(∇_X Q) Y`.
    pub fn nabla_q(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        contract_direction(&self.nabla_q, x) * y
    }

    /// `∇_X ξ_i`.
    pub fn nabla_xi(&self, i: usize, x: &DVector<f64>) -> DVector<f64> {
        &self.nabla_xi[i] * x
    }

    /// `dη^i(X,Y)`.
    pub fn d_eta(&self, i: usize, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.d_eta[i] * y)[(0, 0)]
    }

    /// `dΦ(X,Y,Z)`.
    pub fn d_phi(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> f64 {
        let m = self.dim();
        let mut acc = 0.0;
        for a in 0..m {
            for b in 0..m {
                let xy = x[a] * y[b];
                if xy == 0.0 {
                    continue;
                }
                for c in 0..m {
                    acc += xy * z[c] * self.d_phi[(a * m + b) * m + c];
                }
            }
        }
        acc
    }

    /// `(£_{ξ_i} g)(X,Y)`.
    pub fn lie_xi_g(&self, i: usize, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.lie_xi_g[i] * y)[(0, 0)]
    }

    /// `[f,f](X,Y)`.
    pub fn nijenhuis_ff(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let m = self.dim();
        let mut out = DVector::zeros(m);
        for a in 0..m {
            for b in 0..m {
                let c = x[a] * y[b];
                if c != 0.0 {
                    out += &self.ff[a * m + b] * c;
                }
            }
        }
        out
    }

    /// `N⁽¹⁾(X,Y) = [f,f](X,Y) + 2 Σ dη^i(X,Y) ξ_i`.
    pub fn n1(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = self.nijenhuis_ff(x, y);
        for i in 0..self.s {
            out += &self.xi[i] * (2.0 * self.d_eta(i, x, y));
        }
        out
    }

    /// `N⁽²⁾_i(X,Y) = 2dη^i(fX,Y) − 2dη^i(fY,X)`.
    pub fn n2(&self, i: usize, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        2.0 * self.d_eta(i, &self.f(x), y) - 2.0 * self.d_eta(i, &self.f(y), x)
    }

    /// `N⁽³⁾_i X = (£_{ξ_i} f) X`.
    pub fn n3(&self, i: usize, x: &DVector<f64>) -> DVector<f64> {
        &self.lie_xi_f[i] * x
    }

    /// `N⁽⁴⁾_ij(X) = 2dη^j(ξ_i, X)`.
    pub fn n4(&self, i: usize, j: usize, x: &DVector<f64>) -> f64 {
        2.0 * self.d_eta(j, &self.xi[i], x)
    }

    /// `f` written in a g-orthonormal frame.
    fn in_orthonormal_frame(&self, t: &DMatrix<f64>) -> DMatrix<f64> {
        let e = orthonormal_frame(&self.g);
        e.transpose() * &self.g * t * &e
    }

    /// Smallest eigenvalue of the symmetrized `Q` in an orthonormal frame.
    pub fn q_min_eigenvalue(&self) -> f64 {
        let qo = self.in_orthonormal_frame(&self.q);
        crate::calculus::smallest_eigenvalue(&qo)
    }

    /// Singular values of `f` in an orthonormal frame, ascending.
    pub fn f_singular_values(&self) -> Vec<f64> {
        let fo = self.in_orthonormal_frame(&self.f);
        let mut sv: Vec<f64> = fo.singular_values().iter().copied().collect();
        sv.sort_by(f64::total_cmp);
        sv
    }
}

fn contract_direction(per_direction: &[DMatrix<f64>], x: &DVector<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(per_direction[0].nrows(), per_direction[0].ncols());
    for (k, mat) in per_direction.iter().enumerate() {
        if x[k] != 0.0 {
            out += mat * x[k];
        }
    }
    out
}

/// Per-invariant residuals of a pack at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomResiduals {
    pub entries: BTreeMap<&'static str, f64>,
    pub q_min_eigenvalue: f64,
}

impl AxiomResiduals {
    pub fn max(&self) -> f64 {
        self.entries.values().copied().fold(0.0, sup)
    }

    /// The invariant with the largest residual (NaN counts as largest).
    pub fn worst(&self) -> (&'static str, f64) {
        self.entries
            .iter()
            .map(|(k, v)| (*k, *v))
            .fold(("none", 0.0), |best, (k, v)| {
                if v.is_nan() || (!best.1.is_nan() && v > best.1) {
                    (k, v)
                } else {
                    best
                }
            })
    }

    /// `Err(NotWeakMetricF)` naming the worst invariant when above `tol`.
    pub fn require(&self, tol: f64) -> Result<()> {
        let (identity, residual) = self.worst();
        if residual.is_nan() || residual > tol {
            return Err(GeometryError::NotWeakMetricF {
                identity: identity.into(),
                residual,
            });
        }
        Ok(())
    }
}

/// Invariant keys reported by [`axioms_residual`], in report order.
pub const AXIOM_KEYS: [&str; 15] = [
    "D_f_invariant",
    "Q_f_commute",
    "Q_self_adjoint",
    "Q_xi",
    "eta_Q",
    "eta_f",
    "eta_g_dual",
    "eta_xi_delta",
    "f2_structure",
    "f_skew",
    "f_xi",
    "metric_compat",
    "rank_f",
    "tangent_splitting",
    "xi_orthonormal",
];

/// Residual of every structure-pack invariant at the pack's point.
///
/// Fails with `QNotPositive` when `Q` leaves the positive-definite cone.
pub fn axioms_residual(lp: &LocalPack) -> Result<AxiomResiduals> {
    let q_min = lp.q_min_eigenvalue();
    if !(q_min > Q_EIGEN_FLOOR) {
        return Err(GeometryError::QNotPositive {
            min_eigenvalue: q_min,
        });
    }
    let s = lp.s();
    let vectors: Vec<&DVector<f64>> = lp.frame().vectors().collect();
    let pairs = lp.frame().pairs();
    let mut r: BTreeMap<&'static str, f64> = AXIOM_KEYS.iter().map(|k| (*k, 0.0)).collect();
    let mut bump = |key: &'static str, v: f64| {
        let slot = r.get_mut(key).expect("known axiom key");
        *slot = sup(*slot, v);
    };

    for (x, y) in &pairs {
        bump("f_skew", (lp.inner(&lp.f(x), y) + lp.inner(x, &lp.f(y))).abs());
        bump("Q_self_adjoint", (lp.inner(&lp.q(x), y) - lp.inner(x, &lp.q(y))).abs());
        let eta_eta: f64 = (0..s).map(|i| lp.eta(i, x) * lp.eta(i, y)).sum();
        bump(
            "metric_compat",
            (lp.inner(&lp.f(x), &lp.f(y)) - lp.inner(x, &lp.q(y)) + eta_eta).abs(),
        );
    }

    for x in &vectors {
        let mut f2 = lp.f2(x) + lp.q(x);
        for i in 0..s {
            f2 -= lp.xi(i) * lp.eta(i, x);
        }
        bump("f2_structure", lp.norm(&f2));
        bump("Q_f_commute", lp.norm(&(lp.q(&lp.f(x)) - lp.f(&lp.q(x)))));

        let xd = lp.project_d(x);
        let mut g_proj = (*x).clone();
        for i in 0..s {
            g_proj -= lp.xi(i) * lp.inner(x, lp.xi(i));
            bump("eta_f", lp.eta(i, &lp.f(x)).abs());
            bump("eta_Q", (lp.eta(i, &lp.q(x)) - lp.eta(i, x)).abs());
            bump("eta_g_dual", (lp.eta(i, x) - lp.inner(x, lp.xi(i))).abs());
            bump("D_f_invariant", lp.eta(i, &lp.f(&xd)).abs());
        }
        // g-orthogonal D-part must lie in every ker η^i and rebuild X.
        let mut rebuilt = g_proj.clone();
        for i in 0..s {
            rebuilt += lp.xi(i) * lp.eta(i, x);
            bump("tangent_splitting", lp.eta(i, &g_proj).abs());
        }
        bump("tangent_splitting", lp.norm(&(rebuilt - *x)));
    }

    for i in 0..s {
        let xi = lp.xi(i);
        bump("Q_xi", lp.norm(&(lp.q(xi) - xi)));
        bump("f_xi", lp.norm(&lp.f(xi)));
        for j in 0..s {
            let delta = if i == j { 1.0 } else { 0.0 };
            bump("eta_xi_delta", (lp.eta(i, lp.xi(j)) - delta).abs());
            bump("xi_orthonormal", (lp.inner(xi, lp.xi(j)) - delta).abs());
        }
    }

    let sv = lp.f_singular_values();
    let kernel = sv[..s].iter().copied().fold(0.0, sup);
    let image_ok = sv[s] > RANK_IMAGE_FLOOR;
    let kernel_ok = kernel < RANK_KERNEL_CUTOFF;
    // report the kernel defect, or a unit failure when rank collapses on D
    bump(
        "rank_f",
        if image_ok {
            if kernel_ok { kernel } else { kernel.max(1.0) }
        } else {
            1.0
        },
    );

    Ok(AxiomResiduals {
        entries: r,
        q_min_eigenvalue: q_min,
    })
}

/// Structure tensor selector for [`structure_tensors`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureTensor {
    N1,
    N2,
    N3,
    N4,
}

/// Sup of `|N|` over test vectors and all indices: g-norm for the vector
/// valued `N⁽¹⁾` and `N⁽³⁾`, absolute value for the scalar ones.
pub fn structure_tensors(lp: &LocalPack, which: StructureTensor) -> f64 {
    let s = lp.s();
    let pairs = lp.frame().pairs();
    let mut out = 0.0;
    match which {
        StructureTensor::N1 => {
            for (x, y) in &pairs {
                out = sup(out, lp.norm(&lp.n1(x, y)));
            }
        }
        StructureTensor::N2 => {
            for (x, y) in &pairs {
                for i in 0..s {
                    out = sup(out, lp.n2(i, x, y).abs());
                }
            }
        }
        StructureTensor::N3 => {
            for x in lp.frame().vectors() {
                for i in 0..s {
                    out = sup(out, lp.norm(&lp.n3(i, x)));
                }
            }
        }
        StructureTensor::N4 => {
            for x in lp.frame().vectors() {
                for i in 0..s {
                    for j in 0..s {
                        out = sup(out, lp.n4(i, j, x).abs());
                    }
                }
            }
        }
    }
    out
}

/// Symmetric eigenvalues, ascending. Small helper shared by builders.
pub fn sorted_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let sym = (a + a.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}
