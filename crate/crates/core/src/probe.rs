//! Test vectors at a point and residual accumulation.
//!
//! Operator residuals are measured as a sup over a g-orthonormal basis plus a
//! fixed number of seeded random unit pairs, with vectors measured in the
//! g-norm at the point. This keeps tolerances independent of the chart.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Random unit pairs (and triples) added to the orthonormal basis.
pub const RANDOM_PAIRS: usize = 16;

/// NaN-propagating maximum. `f64::max` silently drops NaN, which would hide
/// evaluation failures inside a residual.
pub fn sup(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

pub fn sup_all(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, sup)
}

/// `√(vᵀ G v)`.
pub fn g_norm(metric: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    (v.transpose() * metric * v)[(0, 0)].max(0.0).sqrt()
}

/// Gram–Schmidt on the coordinate basis with respect to `metric`.
pub fn orthonormal_basis(metric: &DMatrix<f64>) -> Vec<DVector<f64>> {
    orthonormal_basis_from(metric, &[])
}

/// Gram–Schmidt on `leading` followed by the coordinate basis. Candidates
/// that are non-finite or (numerically) dependent on earlier ones are skipped,
/// so the result is always a full basis.
pub fn orthonormal_basis_from(metric: &DMatrix<f64>, leading: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let m = metric.nrows();
    let inner = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * metric * b)[(0, 0)];
    let coords = (0..m).map(|k| {
        let mut v = DVector::zeros(m);
        v[k] = 1.0;
        v
    });
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(m);
    for cand in leading.iter().cloned().chain(coords) {
        if basis.len() == m {
            break;
        }
        let scale = inner(&cand, &cand).sqrt();
        if !(scale.is_finite() && scale > 0.0) {
            continue;
        }
        let mut v = cand / scale;
        // modified Gram–Schmidt, two passes for stability
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&v, b);
                v -= b * c;
            }
        }
        let n = inner(&v, &v).sqrt();
        if n > 1e-8 {
            basis.push(v / n);
        }
    }
    basis
}

/// Matrix whose columns are a g-orthonormal basis.
pub fn orthonormal_frame(metric: &DMatrix<f64>) -> DMatrix<f64> {
    let basis = orthonormal_basis(metric);
    DMatrix::from_columns(&basis)
}

fn random_unit(metric: &DMatrix<f64>, rng: &mut impl Rng) -> DVector<f64> {
    let m = metric.nrows();
    loop {
        let v = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let n = g_norm(metric, &v);
        if n > 1e-6 {
            return v / n;
        }
    }
}

/// Test vectors at one point.
#[derive(Clone, Debug)]
pub struct TestFrame {
    basis: Vec<DVector<f64>>,
    randoms: Vec<DVector<f64>>,
}

impl TestFrame {
    pub fn new(metric: &DMatrix<f64>, rng: &mut impl Rng) -> Self {
        Self::adapted(metric, &[], rng)
    }

    /// Frame whose orthonormal basis starts with (the orthonormalized)
    /// `leading` vectors, e.g. the Reeb fields.
    pub fn adapted(metric: &DMatrix<f64>, leading: &[DVector<f64>], rng: &mut impl Rng) -> Self {
        let basis = orthonormal_basis_from(metric, leading);
        let randoms = (0..3 * RANDOM_PAIRS)
            .map(|_| random_unit(metric, rng))
            .collect();
        Self { basis, randoms }
    }

    pub fn basis(&self) -> &[DVector<f64>] {
        &self.basis
    }

    /// Basis vectors followed by every random unit vector.
    pub fn vectors(&self) -> impl Iterator<Item = &DVector<f64>> {
        self.basis.iter().chain(&self.randoms)
    }

    /// All ordered basis pairs followed by the random pairs.
    pub fn pairs(&self) -> Vec<(&DVector<f64>, &DVector<f64>)> {
        let mut out = Vec::with_capacity(self.basis.len().pow(2) + RANDOM_PAIRS);
        for a in &self.basis {
            for b in &self.basis {
                out.push((a, b));
            }
        }
        for k in 0..RANDOM_PAIRS {
            out.push((&self.randoms[2 * k], &self.randoms[2 * k + 1]));
        }
        out
    }

    /// All ordered basis triples followed by random triples.
    pub fn triples(&self) -> Vec<[&DVector<f64>; 3]> {
        let m = self.basis.len();
        let mut out = Vec::with_capacity(m * m * m + RANDOM_PAIRS);
        for a in &self.basis {
            for b in &self.basis {
                for c in &self.basis {
                    out.push([a, b, c]);
                }
            }
        }
        for k in 0..RANDOM_PAIRS {
            out.push([
                &self.randoms[3 * k],
                &self.randoms[3 * k + 1],
                &self.randoms[3 * k + 2],
            ]);
        }
        out
    }
}
