//! Sample points over the tube chart.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// A point `(r, theta_R, s)` of the tube chart.
pub type ChartPoint = [f64; 3];

/// Box from which random interior points are drawn. The axis `r = 0` is a
/// coordinate singularity and is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleDomain {
    pub r: (f64, f64),
    pub theta: (f64, f64),
    pub s: (f64, f64),
}

impl Default for SampleDomain {
    fn default() -> Self {
        SampleDomain {
            r: (0.1, 2.0),
            theta: (0.0, 2.0 * PI),
            s: (0.0, 2.0 * PI),
        }
    }
}

impl SampleDomain {
    /// `n` points drawn uniformly; fully determined by `seed`.
    pub fn random_points(&self, seed: u64, n: usize) -> Vec<ChartPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                [
                    rng.random_range(self.r.0..self.r.1),
                    rng.random_range(self.theta.0..self.theta.1),
                    rng.random_range(self.s.0..self.s.1),
                ]
            })
            .collect()
    }
}

/// Tensor-product grid over `(r, theta_R, s)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleGrid {
    pub r: Vec<f64>,
    pub theta: Vec<f64>,
    pub s: Vec<f64>,
}

impl Default for SampleGrid {
    fn default() -> Self {
        SampleGrid {
            r: vec![0.1, 0.25, 0.5, 1.0, 2.0],
            theta: vec![0.0, PI / 3.0, PI / 2.0, PI, 1.5 * PI],
            s: vec![0.0, 1.0, 2.0],
        }
    }
}

impl SampleGrid {
    /// Evenly spaced axis including both end points.
    pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![a],
            _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
        }
    }

    pub fn points(&self) -> Vec<ChartPoint> {
        let mut out = Vec::with_capacity(self.r.len() * self.theta.len() * self.s.len());
        for &r in &self.r {
            for &th in &self.theta {
                for &s in &self.s {
                    out.push([r, th, s]);
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.r.len() * self.theta.len() * self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
