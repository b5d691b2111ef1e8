use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::chart::ChartPoint;
use crate::error::{GeometryError, Result};
use crate::field::{LocalCovector, LocalTensor, LocalVector, SmoothField};
use crate::jet::{dot, Jet};

/// Smallest eigenvalue of a metric below which it is treated as degenerate.
pub const METRIC_EIGEN_FLOOR: f64 = 1e-12;

/// Levi-Civita coefficients `Γ^k_ij` at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ^k_ij`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[(k * self.dim + i) * self.dim + j]
    }
}

/// Metric data at one point: `g`, `g⁻¹` and `Γ` as jets, ready for covariant
/// derivatives of any field evaluated at the same point.
///
/// `Γ` carries one derivative level fewer than the metric, so curvature
/// needs a metric whose components are known to second order.
#[derive(Clone, Debug)]
pub struct LocalGeometry {
    point: ChartPoint,
    metric: LocalTensor,
    inverse: LocalTensor,
    gamma: Vec<Jet>,
}

pub fn smallest_eigenvalue(a: &DMatrix<f64>) -> f64 {
    let sym = (a + a.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

impl LocalGeometry {
    pub fn at(g: &SmoothField, p: &ChartPoint) -> Result<Self> {
        if p.dim() != g.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: g.dim(),
                found: p.dim(),
            });
        }
        Self::from_metric(g.local_tensor(p), p.clone())
    }

    pub fn from_metric(metric: LocalTensor, point: ChartPoint) -> Result<Self> {
        let m = metric.dim();
        let min_eig = smallest_eigenvalue(&metric.value());
        if !(min_eig > METRIC_EIGEN_FLOOR) {
            return Err(GeometryError::DegenerateMetric {
                min_eigenvalue: min_eig,
            });
        }
        let inverse = metric.inverse().ok_or(GeometryError::DegenerateMetric {
            min_eigenvalue: min_eig,
        })?;
        let dg: Vec<LocalTensor> = (0..m).map(|l| metric.partial(l)).collect();
        let mut gamma = Vec::with_capacity(m * m * m);
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let mut acc = Jet::constant(0.0, metric.nvars());
                    for l in 0..m {
                        let bracket = dg[i].at(l, j) + dg[j].at(l, i) - dg[l].at(i, j);
                        acc += &(inverse.at(k, l) * &bracket);
                    }
                    gamma.push(acc * 0.5);
                }
            }
        }
        Ok(Self {
            point,
            metric,
            inverse,
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn nvars(&self) -> usize {
        self.metric.nvars()
    }

    pub fn point(&self) -> &ChartPoint {
        &self.point
    }

    pub fn metric(&self) -> &LocalTensor {
        &self.metric
    }

    pub fn inverse(&self) -> &LocalTensor {
        &self.inverse
    }

    pub fn metric_value(&self) -> DMatrix<f64> {
        self.metric.value()
    }

    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &Jet {
        let m = self.dim();
        &self.gamma[(k * m + i) * m + j]
    }

    pub fn christoffel(&self) -> Christoffel {
        Christoffel {
            dim: self.dim(),
            data: self.gamma.iter().map(Jet::value).collect(),
        }
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * self.metric_value() * y)[(0, 0)]
    }

    pub fn norm(&self, x: &DVector<f64>) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// `g(X, Y)` as a scalar jet.
    pub fn inner_jet(&self, x: &LocalVector, y: &LocalVector) -> Jet {
        self.metric.bilinear(x, y)
    }

    /// Index lowering `X ↦ g(X, ·)`.
    pub fn flat(&self, x: &LocalVector) -> LocalCovector {
        self.metric.lower(x)
    }

    /// Index raising `ω ↦ ω^♯`.
    pub fn sharp(&self, w: &LocalCovector) -> LocalVector {
        let m = self.dim();
        LocalVector::new(
            (0..m)
                .map(|i| dot(&self.inverse.comps()[i * m..(i + 1) * m], w.comps()))
                .collect(),
        )
    }

    /// `∇_X Y`.
    pub fn nabla_vector(&self, x: &LocalVector, y: &LocalVector) -> LocalVector {
        let m = self.dim();
        let flat = y.directional(x);
        LocalVector::new(
            (0..m)
                .map(|k| {
                    let mut acc = flat.get(k).clone();
                    for i in 0..m {
                        for j in 0..m {
                            acc += &(self.gamma(k, i, j) * &(x.get(i) * y.get(j)));
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    /// `∇_X T` for a (1,1)-tensor:
    /// `(∇_X T)^i_j = X(T^i_j) + Γ^i_kl X^k T^l_j − Γ^l_kj X^k T^i_l`.
    pub fn covariant_tensor11(&self, t: &LocalTensor, x: &LocalVector) -> LocalTensor {
        let m = self.dim();
        let gx = self.contract_gamma(x);
        LocalTensor::from_fn(m, |i, j| {
            let mut acc = t.at(i, j).derivative_along(x.comps());
            for l in 0..m {
                acc += &(&gx[i * m + l] * t.at(l, j));
                acc -= &(&gx[l * m + j] * t.at(i, l));
            }
            acc
        })
    }

    /// `(∇_X T) Y`.
    pub fn nabla_tensor11(
        &self,
        t: &LocalTensor,
        x: &LocalVector,
        y: &LocalVector,
    ) -> LocalVector {
        self.covariant_tensor11(t, x).apply(y)
    }

    /// `(∇_X ω)_j = X(ω_j) − Γ^l_kj X^k ω_l`.
    pub fn nabla_covector(&self, w: &LocalCovector, x: &LocalVector) -> LocalCovector {
        let m = self.dim();
        let gx = self.contract_gamma(x);
        LocalCovector::new(
            (0..m)
                .map(|j| {
                    let mut acc = w.get(j).derivative_along(x.comps());
                    for l in 0..m {
                        acc -= &(&gx[l * m + j] * w.get(l));
                    }
                    acc
                })
                .collect(),
        )
    }

    /// `∇_X B` for a bilinear form.
    pub fn nabla_bilinear(&self, b: &LocalTensor, x: &LocalVector) -> LocalTensor {
        let m = self.dim();
        let gx = self.contract_gamma(x);
        LocalTensor::from_fn(m, |i, j| {
            let mut acc = b.at(i, j).derivative_along(x.comps());
            for l in 0..m {
                acc -= &(&gx[l * m + i] * b.at(l, j));
                acc -= &(&gx[l * m + j] * b.at(i, l));
            }
            acc
        })
    }

    /// `(Γ·X)^a_b = Γ^a_kb X^k`, row-major.
    fn contract_gamma(&self, x: &LocalVector) -> Vec<Jet> {
        let m = self.dim();
        let mut out = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let mut acc = Jet::constant(0.0, self.nvars());
                for k in 0..m {
                    acc += &(self.gamma(a, k, b) * x.get(k));
                }
                out.push(acc);
            }
        }
        out
    }
}

/// Levi-Civita coefficients of `g` at `p`.
pub fn christoffel(g: &SmoothField, p: &ChartPoint) -> Result<Christoffel> {
    Ok(LocalGeometry::at(g, p)?.christoffel())
}
