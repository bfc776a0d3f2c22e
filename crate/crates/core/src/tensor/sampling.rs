//! Deterministic pseudo-random sampling.
//!
//! Every stream is keyed by `(seed, index)`, so a scan partitioned across
//! workers draws exactly the samples a sequential scan would.

use nalgebra::{Quaternion, UnitQuaternion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Mat3, SymMat3};

/// Diagonal floor added to `AᵀA` so that samples are strictly definite.
pub const PSYM_FLOOR: f64 = 1e-3;

/// Generator for the `index`-th stream of `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Samples of the form `AᵀA + floor·I`, entries of `A` uniform in `[-spread, spread]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsymSampler {
    pub seed: u64,
    pub spread: f64,
    pub floor: f64,
}

impl PsymSampler {
    pub fn new(seed: u64, spread: f64) -> Self {
        assert!(spread > 0.0, "spread must be positive");
        PsymSampler {
            seed,
            spread,
            floor: PSYM_FLOOR,
        }
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }

    pub fn sample(&self, index: u64) -> SymMat3 {
        let mut rng = rng_for(self.seed, index);
        self.draw(&mut rng)
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> SymMat3 {
        let s = self.spread;
        let a = Mat3::from_fn(|_, _| rng.random_range(-s..=s));
        SymMat3::new(a.transpose() * a) + SymMat3::scaled_identity(self.floor)
    }
}

/// `sample_psym(seed, spread)`: the first sample of the seeded stream.
pub fn sample_psym(seed: u64, spread: f64) -> SymMat3 {
    PsymSampler::new(seed, spread).sample(0)
}

/// Rotation from a normalized random quaternion.
pub fn random_rotation<R: Rng>(rng: &mut R) -> Mat3 {
    loop {
        let q = Quaternion::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return UnitQuaternion::from_quaternion(q)
                .to_rotation_matrix()
                .into_inner();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{det3, is_positive_definite, right_cauchy_green, spectral};

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(sample_psym(42, 2.0), sample_psym(42, 2.0));
        assert_ne!(sample_psym(42, 2.0), sample_psym(43, 2.0));
    }

    #[test]
    fn samples_are_positive_definite() {
        for seed in 0..200 {
            let c = sample_psym(seed, 2.0);
            assert!(is_positive_definite(&c, 1e-10).unwrap().positive_definite);
        }
    }

    #[test]
    fn floor_bounds_smallest_eigenvalue() {
        let sampler = PsymSampler::new(5, 2.0);
        let min = (0..10_000)
            .map(|k| spectral(&sampler.sample(k)).unwrap().eigenvalues[0])
            .fold(f64::INFINITY, f64::min);
        assert!(min >= 1e-3 * (1.0 - 1e-9), "min eigenvalue {min}");
    }

    #[test]
    fn rotations_leave_cauchy_green_unchanged() {
        let mut rng = rng_for(3, 0);
        for _ in 0..1000 {
            let f = Mat3::from_fn(|_, _| rng.random_range(-2.0..2.0)) + Mat3::identity() * 3.0;
            let r = random_rotation(&mut rng);
            let c = right_cauchy_green(&f).unwrap();
            let c_rot = right_cauchy_green(&(r * f)).unwrap();
            assert!((c - c_rot).norm() <= 1e-13 * (1.0 + c.norm()));
        }
    }

    #[test]
    fn det_of_cauchy_green_is_square() {
        let mut rng = rng_for(4, 0);
        let mut checked = 0;
        while checked < 1000 {
            let f = Mat3::from_fn(|_, _| rng.random_range(-2.0..2.0));
            let d = det3(&f);
            // Cancellation in det C grows like cond(F)²; keep F well conditioned.
            if d.abs() < 0.05 * f.norm().powi(3) {
                continue;
            }
            let c = right_cauchy_green(&f).unwrap();
            assert!((c.det() - d * d).abs() <= 1e-12 * d * d);
            checked += 1;
        }
    }
}
