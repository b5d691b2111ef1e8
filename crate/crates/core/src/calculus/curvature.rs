use nalgebra::DVector;

use crate::calculus::LocalGeometry;
use crate::error::{GeometryError, Result};

/// Below this `|X∧Y|²` a plane is treated as degenerate.
pub const PLANE_FLOOR: f64 = 1e-12;

/// Riemann tensor at a point, `R(∂_i, ∂_j)∂_k = R^l_{kij} ∂_l`, with
/// `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_{[X,Y]}`.
#[derive(Clone, Debug)]
pub struct Riemann {
    dim: usize,
    data: Vec<f64>,
}

impl Riemann {
    pub fn get(&self, l: usize, k: usize, i: usize, j: usize) -> f64 {
        let m = self.dim;
        self.data[((l * m + k) * m + i) * m + j]
    }

    /// `R(X,Y)Z`.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>) -> DVector<f64> {
        let m = self.dim;
        DVector::from_fn(m, |l, _| {
            let mut acc = 0.0;
            for k in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        acc += self.get(l, k, i, j) * x[i] * y[j] * z[k];
                    }
                }
            }
            acc
        })
    }
}

impl LocalGeometry {
    pub fn riemann(&self) -> Result<Riemann> {
        let m = self.dim();
        let mut data = Vec::with_capacity(m * m * m * m);
        for l in 0..m {
            for k in 0..m {
                for i in 0..m {
                    for j in 0..m {
                        let mut r = self.gamma(l, j, k).partial(i).value()
                            - self.gamma(l, i, k).partial(j).value();
                        for a in 0..m {
                            r += self.gamma(l, i, a).value() * self.gamma(a, j, k).value()
                                - self.gamma(l, j, a).value() * self.gamma(a, i, k).value();
                        }
                        data.push(r);
                    }
                }
            }
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(GeometryError::NonFinite {
                what: "Riemann tensor (metric known to second order required)".into(),
            });
        }
        Ok(Riemann { dim: m, data })
    }

    /// `R(X,Y)Z` at this point.
    pub fn curvature(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        z: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        Ok(self.riemann()?.apply(x, y, z))
    }

    /// Sectional curvature `K(X,Y) = g(R(X,Y)Y, X) / |X∧Y|²`.
    pub fn sectional(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        let wedge = self.inner(x, x) * self.inner(y, y) - self.inner(x, y).powi(2);
        if wedge < PLANE_FLOOR {
            return Err(GeometryError::DegeneratePlane {
                wedge_norm_sq: wedge,
            });
        }
        let r = self.riemann()?.apply(x, y, y);
        Ok(self.inner(&r, x) / wedge)
    }
}
