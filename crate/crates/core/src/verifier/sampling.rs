//! Deterministic sample points on each domain kind.

use crate::domain::{DomainKind, DomainSpec};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SamplePlan {
    pub domain: DomainSpec,
    pub count: usize,
    pub seed: u64,
    /// Annulus bounds for punctured Euclidean domains.
    pub r_min: f64,
    pub r_max: f64,
}

impl SamplePlan {
    pub fn new(domain: DomainSpec, count: usize, seed: u64) -> Self {
        SamplePlan { domain, count, seed, r_min: 0.5, r_max: 2.0 }
    }

    pub fn with_annulus(mut self, r_min: f64, r_max: f64) -> Self {
        assert!(0.0 < r_min && r_min <= r_max, "bad annulus [{r_min}, {r_max}]");
        self.r_min = r_min;
        self.r_max = r_max;
        self
    }

    /// The sample points, in the domain's coordinates.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.count).map(|_| self.draw(&mut rng)).collect()
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self.domain.kind {
            DomainKind::ArcLengthInterval => {
                vec![rng.random_range(0.0..std::f64::consts::TAU)]
            }
            DomainKind::RoundSphere => unit_vector(rng, self.domain.coords()),
            DomainKind::PuncturedEuclidean => {
                let r = if self.r_min == self.r_max {
                    self.r_min
                } else {
                    rng.random_range(self.r_min..self.r_max)
                };
                unit_vector(rng, self.domain.coords()).into_iter().map(|x| r * x).collect()
            }
        }
    }
}

/// Uniform point on the unit sphere of `ℝⁿ` via normalized Gaussians.
pub fn unit_vector<R: RngExt>(rng: &mut R, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}
