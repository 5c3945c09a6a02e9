//! Deterministic sample points for existential searches and randomized identity tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::polycore::Coeff;

const GRID: [i64; 5] = [-2, -1, 1, 2, 3];

/// Search budget: a fixed grid followed by seeded random rational points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SampleBudget {
    pub grid: usize,
    pub random: usize,
    pub seed: u64,
    /// Bound on numerators and denominators of random coordinates.
    pub bound: i64,
}

impl Default for SampleBudget {
    fn default() -> Self {
        SampleBudget { grid: 40, random: 200, seed: 0, bound: 7 }
    }
}

impl SampleBudget {
    pub fn with_seed(seed: u64) -> Self {
        SampleBudget { seed, ..Default::default() }
    }

    pub fn total(&self) -> usize {
        self.grid + self.random
    }

    /// All points in search order: grid first, then random.
    pub fn points(&self, dim: usize) -> Vec<Vec<Coeff>> {
        let mut out: Vec<Vec<Coeff>> = (0..self.grid).map(|k| grid_point(k, dim)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.random {
            out.push(random_rational_point(&mut rng, dim, self.bound));
        }
        out
    }
}

/// The `k`-th grid point; coordinates are drawn from `{-2, -1, 1, 2, 3}`.
pub fn grid_point(k: usize, dim: usize) -> Vec<Coeff> {
    (0..dim).map(|j| Coeff::integer(GRID[(k + j + (k / 5) * j) % 5])).collect()
}

pub fn random_rational_point<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Vec<Coeff> {
    (0..dim)
        .map(|_| Coeff::ratio(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound)))
        .collect()
}

/// Seeded integer points in `[-10, 10]^dim` for probabilistic identity tests.
pub fn integer_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<Coeff>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| Coeff::integer(rng.gen_range(-10..=10))).collect())
        .collect()
}

/// Schwartz-Zippel bound on the probability that a non-zero polynomial of the given
/// degree vanishes at `trials` independent points drawn from a 21-element range.
pub fn schwartz_zippel(degree: u32, trials: usize) -> f64 {
    (degree as f64 / 21.0).min(1.0).powi(trials as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_avoids_zero_and_varies() {
        let pts = SampleBudget::default().points(4);
        assert_eq!(pts.len(), 240);
        assert!(pts[..40].iter().flatten().all(|c| !c.is_zero()));
        assert_ne!(pts[0], pts[1]);
        assert_eq!(pts[0], grid_point(0, 4));
    }

    #[test]
    fn seeded_points_reproduce() {
        let a = SampleBudget::with_seed(9).points(3);
        let b = SampleBudget::with_seed(9).points(3);
        assert_eq!(a, b);
        assert_ne!(a[100], SampleBudget::with_seed(10).points(3)[100]);
        assert_eq!(integer_points(2, 5, 1), integer_points(2, 5, 1));
    }

    #[test]
    fn bound_decays() {
        assert!(schwartz_zippel(6, 10) < 1e-5);
        assert_eq!(schwartz_zippel(40, 3), 1.0);
    }
}
