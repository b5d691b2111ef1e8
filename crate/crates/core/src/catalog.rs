//! Deterministic builders for the concrete structures the engine verifies.
//!
//! Each example is addressed by a name and string parameters, parsed per
//! builder. The same `(name, params)` always yields the same component
//! functions.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::calculus::smallest_eigenvalue;
use crate::chart::Chart;
use crate::classifiers::ClassTag;
use crate::error::{GeometryError, Result};
use crate::field::{FieldKind, SmoothField};
use crate::fstructure::{PackFields, StructurePack};
use crate::jet::Jet;
use crate::submanifold::{Ambient, EmbeddedSubmanifold, SmoothMap, SubmanifoldCase};

/// Smallest eigenvalue of `Q` accepted by `rotated_pack`.
pub const ROTATION_Q_FLOOR: f64 = 1e-12;
/// `‖ψ‖` below which a rotation is considered degenerate.
pub const PSI_FLOOR: f64 = 1e-10;

pub const EXAMPLE_NAMES: [&str; 7] = [
    "flat_pack",
    "rotated_pack",
    "product_pack",
    "sasakian_s3",
    "hypersphere",
    "hypercylinder",
    "linear_subspace",
];

/// A catalog name with its parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExampleSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl ExampleSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    /// Adds a `key=value` assignment.
    pub fn push_assignment(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv.split_once('=').ok_or_else(|| GeometryError::InvalidParameter {
            name: kv.into(),
            reason: "expected key=value".into(),
        })?;
        let k = k.trim();
        if k.is_empty() {
            return Err(GeometryError::InvalidParameter {
                name: kv.into(),
                reason: "empty key".into(),
            });
        }
        self.params.insert(k.into(), v.trim().into());
        Ok(())
    }
}

impl fmt::Display for ExampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

/// Typed access to a spec's parameters; rejects keys a builder never read.
struct Params<'a> {
    spec: &'a ExampleSpec,
    allowed: &'static [&'static str],
}

impl<'a> Params<'a> {
    fn new(spec: &'a ExampleSpec, allowed: &'static [&'static str]) -> Result<Self> {
        if let Some(k) = spec.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(GeometryError::InvalidParameter {
                name: k.clone(),
                reason: format!("not accepted by `{}` (accepted: {})", spec.name, allowed.join(", ")),
            });
        }
        Ok(Self { spec, allowed })
    }

    fn get<T: FromStr>(&self, key: &'static str, default: T) -> Result<T> {
        debug_assert!(self.allowed.contains(&key));
        match self.spec.params.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| GeometryError::InvalidParameter {
                name: key.into(),
                reason: format!("cannot parse `{raw}`"),
            }),
        }
    }

    fn float(&self, key: &'static str, default: f64) -> Result<f64> {
        let v: f64 = self.get(key, default)?;
        if !v.is_finite() {
            return Err(GeometryError::InvalidParameter {
                name: key.into(),
                reason: "must be finite".into(),
            });
        }
        Ok(v)
    }

    fn count(&self, key: &'static str, default: usize, min: usize) -> Result<usize> {
        let v: usize = self.get(key, default)?;
        if v < min || v > 8 {
            return Err(GeometryError::InvalidParameter {
                name: key.into(),
                reason: format!("must lie in {min}..=8"),
            });
        }
        Ok(v)
    }

    fn positive(&self, key: &'static str, default: f64) -> Result<f64> {
        let v = self.float(key, default)?;
        if v <= 0.0 {
            return Err(GeometryError::InvalidParameter {
                name: key.into(),
                reason: "must be positive".into(),
            });
        }
        Ok(v)
    }
}

/// A built example.
#[derive(Clone, Debug)]
pub enum ExampleObject {
    Pack(StructurePack),
    Embedded {
        sub: EmbeddedSubmanifold,
        case: SubmanifoldCase,
    },
}

#[derive(Clone, Debug)]
pub struct Example {
    spec: ExampleSpec,
    object: ExampleObject,
    claims: Vec<ClassTag>,
}

impl Example {
    pub fn spec(&self) -> &ExampleSpec {
        &self.spec
    }

    pub fn object(&self) -> &ExampleObject {
        &self.object
    }

    /// Classes this example is constructed to satisfy.
    pub fn claims(&self) -> &[ClassTag] {
        &self.claims
    }

    pub fn claims_class(&self, class: ClassTag) -> bool {
        self.claims.contains(&class)
    }

    /// The structure pack, induced from the embedding when there is one.
    pub fn pack(&self) -> Result<StructurePack> {
        match &self.object {
            ExampleObject::Pack(p) => Ok(p.clone()),
            ExampleObject::Embedded { sub, .. } => sub.induce_structure(),
        }
    }

    pub fn embedded(&self) -> Option<(&EmbeddedSubmanifold, SubmanifoldCase)> {
        match &self.object {
            ExampleObject::Embedded { sub, case } => Some((sub, *case)),
            ExampleObject::Pack(_) => None,
        }
    }
}

use ClassTag::*;

const FLAT_CLAIMS: &[ClassTag] = &[
    WeakMetricF,
    WeakAlmostK,
    WeakAlmostC,
    Normal,
    WeakK,
    WeakC,
    WeakNearlyC,
];

const SASAKIAN_CLAIMS: &[ClassTag] = &[
    WeakMetricF,
    WeakAlmostK,
    WeakAlmostS,
    Normal,
    WeakK,
    WeakS,
    WeakNearlyS,
    SStructure,
    FKContact,
];

pub fn make_example(spec: &ExampleSpec) -> Result<Example> {
    let (object, claims) = match spec.name.as_str() {
        "flat_pack" => {
            let p = Params::new(spec, &["n", "s", "lambda"])?;
            let pack = flat_pack(p.count("n", 1, 1)?, p.count("s", 1, 1)?, p.positive("lambda", 2.0)?);
            (ExampleObject::Pack(pack), FLAT_CLAIMS)
        }
        "rotated_pack" => {
            let p = Params::new(spec, &["n", "s", "t", "rotation", "angle"])?;
            let rotation = match p.get("rotation", "givens".to_string())?.as_str() {
                "givens" => Rotation::Givens(p.float("angle", 0.3)?),
                "reflect" => Rotation::Reflect,
                "quaternion" => Rotation::Quaternion,
                other => {
                    return Err(GeometryError::InvalidParameter {
                        name: "rotation".into(),
                        reason: format!("unknown rotation `{other}` (givens, reflect, quaternion)"),
                    })
                }
            };
            let pack = rotated_pack(p.count("n", 2, 1)?, p.count("s", 1, 1)?, p.float("t", 0.1)?, rotation)?;
            (ExampleObject::Pack(pack), FLAT_CLAIMS)
        }
        "product_pack" => {
            let p = Params::new(spec, &["n", "s", "lambda"])?;
            let pack = product_pack(p.count("n", 1, 1)?, p.count("s", 2, 1)?, p.positive("lambda", 2.0)?);
            (ExampleObject::Pack(pack), FLAT_CLAIMS)
        }
        "sasakian_s3" => {
            Params::new(spec, &[])?;
            (ExampleObject::Pack(sasakian_s3()), SASAKIAN_CLAIMS)
        }
        "hypersphere" => {
            let p = Params::new(spec, &["n", "radius", "ambient_lambda", "orientation"])?;
            let inward = match p.get("orientation", "inward".to_string())?.as_str() {
                "inward" => true,
                "outward" => false,
                other => {
                    return Err(GeometryError::InvalidParameter {
                        name: "orientation".into(),
                        reason: format!("`{other}` is neither inward nor outward"),
                    })
                }
            };
            let radius = p.positive("radius", 1.0)?;
            let sub = hypersphere(p.count("n", 1, 1)?, radius, p.positive("ambient_lambda", 1.0)?, inward)?;
            let claims: &[ClassTag] = if inward && radius == 1.0 {
                SASAKIAN_CLAIMS
            } else {
                &[WeakMetricF, WeakAlmostK, Normal, WeakK]
            };
            (ExampleObject::Embedded { sub, case: SubmanifoldCase::I }, claims)
        }
        "hypercylinder" => {
            let p = Params::new(spec, &["n", "lambda"])?;
            let sub = hypercylinder(p.count("n", 1, 1)?, p.positive("lambda", 2.0)?)?;
            (ExampleObject::Embedded { sub, case: SubmanifoldCase::II }, FLAT_CLAIMS)
        }
        "linear_subspace" => {
            let p = Params::new(spec, &["n", "s", "lambda"])?;
            let sub = linear_subspace(p.count("n", 1, 1)?, p.count("s", 1, 1)?, p.positive("lambda", 2.0)?)?;
            (ExampleObject::Embedded { sub, case: SubmanifoldCase::II }, FLAT_CLAIMS)
        }
        other => return Err(GeometryError::UnknownExample(other.into())),
    };
    Ok(Example {
        spec: spec.clone(),
        object,
        claims: claims.to_vec(),
    })
}

/// `n` copies of `λJ₀`, `J₀e₁ = e₂`, `J₀e₂ = −e₁`.
pub fn block_complex(n: usize, lambda: f64) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(2 * n, 2 * n);
    for b in 0..n {
        a[(2 * b + 1, 2 * b)] = lambda;
        a[(2 * b, 2 * b + 1)] = -lambda;
    }
    a
}

/// Block-diagonal embedding of `a` into the top-left corner of an `m×m` zero matrix.
fn pad(a: &DMatrix<f64>, m: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m, m);
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out
}

fn unit(m: usize, k: usize) -> DVector<f64> {
    let mut v = DVector::zeros(m);
    v[k] = 1.0;
    v
}

/// Constant pack on `R^{2n+s}` with `f = λJ₀ ⊕ 0` and the given `Q` on `D`.
fn constant_pack(name: String, chart: Chart, n: usize, s: usize, f_d: &DMatrix<f64>, q_d: &DMatrix<f64>) -> StructurePack {
    let m = 2 * n + s;
    let mut q = DMatrix::identity(m, m);
    q.view_mut((0, 0), (2 * n, 2 * n)).copy_from(q_d);
    let fields = PackFields {
        g: SmoothField::euclidean_metric(m),
        f: SmoothField::constant_matrix(FieldKind::Tensor11, &pad(f_d, m)),
        q: SmoothField::constant_matrix(FieldKind::Tensor11, &q),
        xi: (0..s).map(|i| SmoothField::constant_vector(&unit(m, 2 * n + i))).collect(),
        eta: (0..s).map(|i| SmoothField::constant_one_form(&unit(m, 2 * n + i))).collect(),
    };
    StructurePack::new(name, chart, n, s, fields).expect("constant pack fields have consistent shapes")
}

/// `R^{2n+s}` with `f = λJ₀ ⊕ 0`, `Q = λ² ⊕ id`, `ξ_i = e_{2n+i}`.
pub fn flat_pack(n: usize, s: usize, lambda: f64) -> StructurePack {
    let m = 2 * n + s;
    let a = block_complex(n, lambda);
    let q = DMatrix::identity(2 * n, 2 * n) * (lambda * lambda);
    constant_pack(format!("flat_pack(n={n}, s={s}, λ={lambda})"), Chart::cube("flat", m, 1.0), n, s, &a, &q)
}

/// Orthogonal map `R` on `D` producing the second structure `f₂ = R f₁ Rᵀ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rotation {
    /// Rotation by the angle in the `(e₁, e₃)` plane; needs `n ≥ 2`.
    Givens(f64),
    /// `e₂ ↦ −e₂`; gives `f₂ = −f₁` on the first block.
    Reflect,
    /// Conjugation by `(1 + k)/√2` on the first quaternionic block; `ψ`
    /// vanishes there, so for `n = 2` the rotation is degenerate.
    Quaternion,
}

impl Rotation {
    fn matrix(self, n: usize) -> Result<DMatrix<f64>> {
        let d = 2 * n;
        let mut r = DMatrix::identity(d, d);
        match self {
            Rotation::Givens(angle) => {
                if n < 2 {
                    return Err(GeometryError::InvalidParameter {
                        name: "rotation".into(),
                        reason: "givens acts on (e1, e3) and needs n >= 2".into(),
                    });
                }
                let (sn, cs) = angle.sin_cos();
                r[(0, 0)] = cs;
                r[(2, 2)] = cs;
                r[(0, 2)] = -sn;
                r[(2, 0)] = sn;
            }
            Rotation::Reflect => r[(1, 1)] = -1.0,
            Rotation::Quaternion => {
                if n < 2 {
                    return Err(GeometryError::InvalidParameter {
                        name: "rotation".into(),
                        reason: "quaternion acts on R^4 and needs n >= 2".into(),
                    });
                }
                // basis (1, i, j, k): i ↦ j, j ↦ −i
                r[(1, 1)] = 0.0;
                r[(2, 2)] = 0.0;
                r[(2, 1)] = 1.0;
                r[(1, 2)] = -1.0;
            }
        }
        Ok(r)
    }
}

/// Two constant structures `f₁ = J₀ ⊕ 0` and `f₂ = R f₁ Rᵀ` sharing
/// `(ξ, η, g)`, combined as `f = cos t·f₁ + sin t·f₂` with
/// `Q = id − sin t cos t·ψ`, `ψ = f₁f₂ + f₂f₁`.
pub fn rotated_pack(n: usize, s: usize, t: f64, rotation: Rotation) -> Result<StructurePack> {
    let m = 2 * n + s;
    let f1 = block_complex(n, 1.0);
    let r = rotation.matrix(n)?;
    let f2 = &r * &f1 * r.transpose();
    let psi = &f1 * &f2 + &f2 * &f1;
    let psi_norm = psi.norm();
    if psi_norm < PSI_FLOOR {
        return Err(GeometryError::DegenerateRotation { psi_norm });
    }
    let (sn, cs) = t.sin_cos();
    let f = &f1 * cs + &f2 * sn;
    let q = DMatrix::identity(2 * n, 2 * n) - &psi * (sn * cs);
    let min_eigenvalue = smallest_eigenvalue(&q);
    if !(min_eigenvalue > ROTATION_Q_FLOOR) {
        return Err(GeometryError::RotationNotPositive { t, min_eigenvalue });
    }
    Ok(constant_pack(
        format!("rotated_pack(n={n}, s={s}, t={t}, {rotation:?})"),
        Chart::cube("flat", m, 1.0),
        n,
        s,
        &f,
        &q,
    ))
}

/// `(R^{2n}, λJ₀) × R^s` in polar coordinates `(r_b, θ_b)` on each plane,
/// so the metric and `f` have non-constant components.
pub fn product_pack(n: usize, s: usize, lambda: f64) -> StructurePack {
    let m = 2 * n + s;
    let mut lower = Vec::with_capacity(m);
    let mut upper = Vec::with_capacity(m);
    for _ in 0..n {
        lower.extend([0.5, -3.0]);
        upper.extend([2.0, 3.0]);
    }
    lower.extend(std::iter::repeat_n(-1.0, s));
    upper.extend(std::iter::repeat_n(1.0, s));
    let chart = Chart::new("polar_product", lower, upper);

    let g = SmoothField::metric(m, move |x| {
        let nv = x[0].nvars();
        let mut out = vec![Jet::constant(0.0, nv); m * m];
        for k in 0..m {
            out[k * m + k] = Jet::constant(1.0, nv);
        }
        for b in 0..n {
            let th = 2 * b + 1;
            out[th * m + th] = x[2 * b].square();
        }
        out
    });
    let f = SmoothField::tensor11(m, move |x| {
        let nv = x[0].nvars();
        let mut out = vec![Jet::constant(0.0, nv); m * m];
        for b in 0..n {
            let (r, th) = (2 * b, 2 * b + 1);
            // f ∂r = (λ/r) ∂θ, f ∂θ = −λ r ∂r
            out[th * m + r] = x[r].recip() * lambda;
            out[r * m + th] = &x[r] * -lambda;
        }
        out
    });
    let mut q = DMatrix::identity(m, m);
    for k in 0..2 * n {
        q[(k, k)] = lambda * lambda;
    }
    let fields = PackFields {
        g,
        f,
        q: SmoothField::constant_matrix(FieldKind::Tensor11, &q),
        xi: (0..s).map(|i| SmoothField::constant_vector(&unit(m, 2 * n + i))).collect(),
        eta: (0..s).map(|i| SmoothField::constant_one_form(&unit(m, 2 * n + i))).collect(),
    };
    StructurePack::new(format!("product_pack(n={n}, s={s}, λ={lambda})"), chart, n, s, fields)
        .expect("product pack fields have consistent shapes")
}

/// Unit `S³` in Hopf coordinates `(a, b, c) ↦ (cos a·e^{ib}, sin a·e^{ic})`
/// with its standard Sasakian structure.
pub fn sasakian_s3() -> StructurePack {
    let margin = 0.2;
    let chart = Chart::new(
        "hopf",
        vec![margin, -3.0, -3.0],
        vec![FRAC_PI_2 - margin, 3.0, 3.0],
    );
    let g = SmoothField::metric(3, |x| {
        let nv = x[0].nvars();
        let z = Jet::constant(0.0, nv);
        let (s, c) = (x[0].sin(), x[0].cos());
        vec![
            Jet::constant(1.0, nv), z.clone(), z.clone(),
            z.clone(), c.square(), z.clone(),
            z.clone(), z, s.square(),
        ]
    });
    let f = SmoothField::tensor11(3, |x| {
        let nv = x[0].nvars();
        let z = Jet::constant(0.0, nv);
        let (s, c) = (x[0].sin(), x[0].cos());
        let sc = &s * &c;
        vec![
            z.clone(), -&sc, sc,
            x[0].tan(), z.clone(), z.clone(),
            -(x[0].tan().recip()), z.clone(), z,
        ]
    });
    let xi = SmoothField::constant_vector(&DVector::from_vec(vec![0.0, 1.0, 1.0]));
    let eta = SmoothField::one_form(3, |x| {
        let nv = x[0].nvars();
        vec![Jet::constant(0.0, nv), x[0].cos().square(), x[0].sin().square()]
    });
    let fields = PackFields {
        g,
        f,
        q: SmoothField::constant_matrix(FieldKind::Tensor11, &DMatrix::identity(3, 3)),
        xi: vec![xi],
        eta: vec![eta],
    };
    StructurePack::new("sasakian_s3", chart, 1, 1, fields).expect("sasakian fields have consistent shapes")
}

/// Sphere of the given radius in `R^{2n+2}` as a graph over the first
/// `2n+1` coordinates, with ambient `f̄ = J₀ ⊕ λJ₀ ⊕ … ⊕ λJ₀`.
///
/// `λ ≠ 1` makes `f̄N` non-unit somewhere on the sphere and is rejected by
/// validation.
pub fn hypersphere(n: usize, radius: f64, ambient_lambda: f64, inward: bool) -> Result<EmbeddedSubmanifold> {
    let m = 2 * n + 1;
    let big = m + 1;
    let half = 0.6 * radius / (m as f64).sqrt();
    let chart = Chart::cube("graph", m, half);
    let r2 = radius * radius;
    let iota = SmoothMap::new(m, big, move |x| {
        let mut out = x.to_vec();
        let sq = x.iter().fold(Jet::constant(0.0, x[0].nvars()), |acc, c| acc + c.square());
        out.push((r2 - sq).sqrt());
        out
    });
    let sign = if inward { -1.0 / radius } else { 1.0 / radius };
    let iota_n = iota.clone();
    let normal = SmoothMap::new(m, big, move |x| {
        iota_n.eval_jets(x).iter().map(|c| c * sign).collect()
    });
    let mut fbar = block_complex(n + 1, ambient_lambda);
    fbar.view_mut((0, 0), (2, 2)).copy_from(&block_complex(1, 1.0));
    let ambient = Ambient {
        metric: SmoothField::euclidean_metric(big),
        f: SmoothField::constant_matrix(FieldKind::Tensor11, &fbar),
    };
    let orient = if inward { "inward" } else { "outward" };
    EmbeddedSubmanifold::new(
        format!("hypersphere(n={n}, r={radius}, λ={ambient_lambda}, {orient})"),
        chart,
        n,
        1,
        ambient,
        iota,
        vec![normal],
    )
}

/// `S¹ × R^{2n} ⊂ R² × R^{2n}`, `(θ, u) ↦ (cos θ, sin θ, u)`, with ambient
/// `f̄ = J₀ ⊕ λJ₀ ⊕ … ⊕ λJ₀` and inward normal. The induced `ξ` is `−∂θ`.
pub fn hypercylinder(n: usize, lambda: f64) -> Result<EmbeddedSubmanifold> {
    let m = 2 * n + 1;
    let big = m + 1;
    let mut lower = vec![-3.0];
    let mut upper = vec![3.0];
    lower.extend(std::iter::repeat_n(-1.0, 2 * n));
    upper.extend(std::iter::repeat_n(1.0, 2 * n));
    let chart = Chart::new("cylinder", lower, upper);
    let iota = SmoothMap::new(m, big, |x| {
        let mut out = vec![x[0].cos(), x[0].sin()];
        out.extend_from_slice(&x[1..]);
        out
    });
    let normal = SmoothMap::new(m, big, move |x| {
        let nv = x[0].nvars();
        let mut out = vec![-x[0].cos(), -x[0].sin()];
        out.extend(std::iter::repeat_n(Jet::constant(0.0, nv), big - 2));
        out
    });
    let mut fbar = block_complex(n + 1, lambda);
    fbar.view_mut((0, 0), (2, 2)).copy_from(&block_complex(1, 1.0));
    let ambient = Ambient {
        metric: SmoothField::euclidean_metric(big),
        f: SmoothField::constant_matrix(FieldKind::Tensor11, &fbar),
    };
    EmbeddedSubmanifold::new(
        format!("hypercylinder(n={n}, λ={lambda})"),
        chart,
        n,
        1,
        ambient,
        iota,
        vec![normal],
    )
}

/// `R^{2n} × R^s` as the plane `z = 0` in `R^{2n} × R^s × R^s`, with
/// `f̄ = λJ₀ ⊕ (e_{z_i} ↦ e_{y_i}, e_{y_i} ↦ −e_{z_i})` and normals `e_{z_i}`.
pub fn linear_subspace(n: usize, s: usize, lambda: f64) -> Result<EmbeddedSubmanifold> {
    let m = 2 * n + s;
    let big = m + s;
    let chart = Chart::cube("linear", m, 1.0);
    let iota = SmoothMap::new(m, big, move |x| {
        let nv = x[0].nvars();
        let mut out = x.to_vec();
        out.extend(std::iter::repeat_n(Jet::constant(0.0, nv), s));
        out
    });
    let normals = (0..s)
        .map(|i| {
            SmoothMap::new(m, big, move |x| {
                let nv = x[0].nvars();
                (0..big)
                    .map(|k| Jet::constant(if k == m + i { 1.0 } else { 0.0 }, nv))
                    .collect()
            })
        })
        .collect();
    let mut fbar = pad(&block_complex(n, lambda), big);
    for i in 0..s {
        let (y, z) = (2 * n + i, m + i);
        fbar[(y, z)] = 1.0;
        fbar[(z, y)] = -1.0;
    }
    let ambient = Ambient {
        metric: SmoothField::euclidean_metric(big),
        f: SmoothField::constant_matrix(FieldKind::Tensor11, &fbar),
    };
    EmbeddedSubmanifold::new(
        format!("linear_subspace(n={n}, s={s}, λ={lambda})"),
        chart,
        n,
        s,
        ambient,
        iota,
        normals,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_complex_squares_to_minus_lambda_squared() {
        let a = block_complex(2, 3.0);
        assert_eq!(&a * &a, DMatrix::identity(4, 4) * -9.0);
    }

    #[test]
    fn spec_display_and_assignment() {
        let mut spec = ExampleSpec::new("flat_pack");
        spec.push_assignment(" n = 2 ").unwrap();
        spec.push_assignment("lambda=0.5").unwrap();
        assert_eq!(spec.to_string(), "flat_pack lambda=0.5 n=2");
        assert!(spec.push_assignment("=1").is_err());
    }

    #[test]
    fn every_catalog_name_builds_with_defaults() {
        for name in EXAMPLE_NAMES {
            let ex = make_example(&ExampleSpec::new(name)).unwrap();
            assert!(ex.claims_class(ClassTag::WeakMetricF), "{name}");
            assert_eq!(ex.embedded().is_some(), matches!(ex.object(), ExampleObject::Embedded { .. }));
        }
    }
}
