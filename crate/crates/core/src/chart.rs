//! Coordinate charts, points, and deterministic point sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GeometryError, Result};

/// A point of a coordinate chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    coords: Vec<f64>,
}

impl ChartPoint {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl From<Vec<f64>> for ChartPoint {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

/// A coordinate domain of dimension `dim` with a declared open safe box.
///
/// Samples are drawn from the safe box only; it excludes coordinate
/// singularities of the chart (poles of spherical charts and the like).
#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Chart {
    pub fn new(name: impl Into<String>, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "box bounds must agree in length");
        assert!(
            lower.iter().zip(&upper).all(|(a, b)| a < b),
            "box must be non-degenerate"
        );
        Self {
            name: name.into(),
            lower,
            upper,
        }
    }

    /// The symmetric box `[-half_width, half_width]^dim`.
    pub fn cube(name: impl Into<String>, dim: usize, half_width: f64) -> Self {
        Self::new(name, vec![-half_width; dim], vec![half_width; dim])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, p: &ChartPoint) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (a, b))| x > a && x < b)
    }

    pub fn check(&self, p: &ChartPoint) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: p.dim(),
            });
        }
        if !self.contains(p) {
            return Err(GeometryError::OutsideChart {
                chart: self.name.clone(),
                point: p.coords().to_vec(),
            });
        }
        Ok(())
    }

    pub fn center(&self) -> ChartPoint {
        ChartPoint::new(
            self.lower
                .iter()
                .zip(&self.upper)
                .map(|(a, b)| 0.5 * (a + b))
                .collect(),
        )
    }

    /// The `index`-th sample point for `seed`. Each point has its own stream,
    /// so points can be generated independently and in any order.
    pub fn sample_point(&self, seed: u64, index: usize) -> ChartPoint {
        let mut rng = point_rng(seed, index as u64);
        let coords = self
            .lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| {
                // Stay strictly inside the open box.
                let margin = 1e-3 * (b - a);
                rng.random_range((a + margin)..(b - margin))
            })
            .collect();
        ChartPoint::new(coords)
    }

    pub fn sample_points(&self, seed: u64, count: usize) -> Vec<ChartPoint> {
        (0..count).map(|i| self.sample_point(seed, i)).collect()
    }
}

const STREAM_POINTS: u64 = 0x5EED_0001;
const STREAM_VECTORS: u64 = 0x5EED_0002;

fn mix(seed: u64, stream: u64, index: u64) -> u64 {
    // splitmix64 finaliser over the combined key
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn point_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, STREAM_POINTS, index))
}

/// RNG for random test vectors at the `index`-th sample point.
pub fn vector_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(seed, STREAM_VECTORS, index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible_and_inside() {
        let chart = Chart::new("s2", vec![0.2, -3.0], vec![2.9, 3.0]);
        let a = chart.sample_points(42, 50);
        let b = chart.sample_points(42, 50);
        assert_eq!(a, b);
        assert!(a.iter().all(|p| chart.contains(p)));
        let c = chart.sample_points(43, 50);
        assert_ne!(a, c);
        assert_eq!(chart.sample_point(42, 17), a[17]);
    }

    #[test]
    fn check_rejects_bad_points() {
        let chart = Chart::cube("r2", 2, 1.0);
        assert!(chart.check(&ChartPoint::new(vec![0.0, 0.0])).is_ok());
        assert!(matches!(
            chart.check(&ChartPoint::new(vec![0.0])),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            chart.check(&ChartPoint::new(vec![0.0, 1.5])),
            Err(GeometryError::OutsideChart { .. })
        ));
    }
}
