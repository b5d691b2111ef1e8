//! Test-only oracles, written without the engine's jet machinery.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weakf_core::{ChartPoint, SmoothField};

pub const FD_STEP: f64 = 1e-5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Central difference of every component of `field` along coordinate `k`.
pub fn central_difference(field: &SmoothField, p: &ChartPoint, k: usize, h: f64) -> Vec<f64> {
    let shifted = |d: f64| {
        let mut c = p.coords().to_vec();
        c[k] += d;
        field.values_at(&ChartPoint::new(c))
    };
    let (plus, minus) = (shifted(h), shifted(-h));
    plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect()
}

/// Metric matrix at `p` from plain component values.
pub fn metric_at(g: &SmoothField, p: &ChartPoint) -> DMatrix<f64> {
    let m = g.dim();
    DMatrix::from_row_slice(m, m, &g.values_at(p))
}

pub fn tensor_at(t: &SmoothField, p: &ChartPoint) -> DMatrix<f64> {
    let m = t.dim();
    DMatrix::from_row_slice(m, m, &t.values_at(p))
}

pub fn vector_at(v: &SmoothField, p: &ChartPoint) -> DVector<f64> {
    DVector::from_vec(v.values_at(p))
}

/// Christoffel symbols `Γ^k_ij` (index `(k*m + i)*m + j`) from finite
/// differences of the metric.
pub fn christoffel_fd(g: &SmoothField, p: &ChartPoint) -> Vec<f64> {
    let m = g.dim();
    let dg: Vec<Vec<f64>> = (0..m).map(|k| central_difference(g, p, k, FD_STEP)).collect();
    let ginv = metric_at(g, p).try_inverse().expect("metric invertible");
    let mut out = vec![0.0; m * m * m];
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                let mut acc = 0.0;
                for l in 0..m {
                    acc += ginv[(k, l)]
                        * (dg[i][l * m + j] + dg[j][l * m + i] - dg[l][i * m + j]);
                }
                out[(k * m + i) * m + j] = 0.5 * acc;
            }
        }
    }
    out
}

/// Random unit vector in the g-norm.
pub fn random_unit(g: &DMatrix<f64>, rng: &mut impl Rng) -> DVector<f64> {
    let v = DVector::from_fn(g.nrows(), |_, _| rng.random_range(-1.0..1.0));
    let n = (v.transpose() * g * &v)[(0, 0)].sqrt();
    v / n
}

pub fn g_inner(g: &DMatrix<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a.transpose() * g * b)[(0, 0)]
}

/// Smooth scalar `c₀ + c·x + Σ d_kl x_k x_l + e·sin(w·x + φ)` with random
/// coefficients; returned as a closure over coordinate jets.
#[derive(Clone, Debug)]
pub struct RandomScalar {
    c0: f64,
    lin: Vec<f64>,
    quad: Vec<f64>,
    amp: f64,
    freq: Vec<f64>,
    phase: f64,
}

impl RandomScalar {
    pub fn new(dim: usize, scale: f64, rng: &mut impl Rng) -> Self {
        let mut u = |a: f64| rng.random_range(-a..a);
        Self {
            c0: u(scale),
            lin: (0..dim).map(|_| u(scale)).collect(),
            quad: (0..dim * dim).map(|_| u(scale * 0.5)).collect(),
            amp: u(scale),
            freq: (0..dim).map(|_| u(2.0)).collect(),
            phase: u(3.0),
        }
    }

    pub fn eval(&self, x: &[weakf_core::Jet]) -> weakf_core::Jet {
        let m = x.len();
        let mut acc = weakf_core::Jet::constant(self.c0, x[0].nvars());
        let mut arg = weakf_core::Jet::constant(self.phase, x[0].nvars());
        for k in 0..m {
            acc += &(&x[k] * self.lin[k]);
            arg += &(&x[k] * self.freq[k]);
            for l in 0..m {
                acc += &(&(&x[k] * &x[l]) * self.quad[k * m + l]);
            }
        }
        acc + arg.sin() * self.amp
    }
}

pub fn random_field(kind: weakf_core::FieldKind, dim: usize, scale: f64, rng: &mut impl Rng) -> SmoothField {
    let comps: Vec<RandomScalar> = (0..kind.component_count(dim))
        .map(|_| RandomScalar::new(dim, scale, rng))
        .collect();
    SmoothField::new(kind, dim, move |x| comps.iter().map(|c| c.eval(x)).collect())
}

/// Random Riemannian metric on the cube `[-1, 1]^dim`: identity plus a
/// bounded symmetric perturbation, diagonally dominant by construction.
pub fn random_metric(dim: usize, rng: &mut impl Rng) -> SmoothField {
    let bound = 0.4 / dim as f64;
    let comps: Vec<(f64, Vec<f64>, f64)> = (0..dim * dim)
        .map(|_| {
            let amp = rng.random_range(-bound..bound);
            let freq = (0..dim).map(|_| rng.random_range(-1.5..1.5)).collect();
            (amp, freq, rng.random_range(-3.0..3.0))
        })
        .collect();
    SmoothField::metric(dim, move |x| {
        let nv = x[0].nvars();
        let entry = |idx: usize| {
            let (amp, freq, phase) = &comps[idx];
            let mut arg = weakf_core::Jet::constant(*phase, nv);
            for (k, w) in freq.iter().enumerate() {
                arg += &(&x[k] * *w);
            }
            arg.sin() * *amp
        };
        let mut out = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let (a, b) = (i.min(j), i.max(j));
                let mut v = entry(a * dim + b);
                if i == j {
                    v = v + 1.0;
                }
                out.push(v);
            }
        }
        out
    })
}

pub fn random_point(dim: usize, rng: &mut impl Rng) -> ChartPoint {
    ChartPoint::new((0..dim).map(|_| rng.random_range(-0.9..0.9)).collect())
}
