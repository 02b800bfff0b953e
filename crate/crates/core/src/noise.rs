//! Seeded randomness: Laplace draws, the Laplace mechanism calibrated to a
//! (coupled) global sensitivity, and uniform sampling without replacement.
//!
//! Every estimator run owns one [`NoiseSource`]. Stages derive child sources
//! from `(seed, tag)`, so each stage is reproducible on its own and stage
//! streams never overlap.

use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` under `root`. Serial and parallel runners both use
/// this, so their records agree one for one.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    mix64(root ^ mix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
}

/// Keyed counter-based 64-bit value: the `counter`-th output of the stream
/// named by `key`. Used where a value must depend only on an identifier
/// (a vertex, a vertex pair) and not on the order of access.
#[inline]
pub fn keyed_u64(key: u64, counter: u64) -> u64 {
    mix64(mix64(key) ^ counter.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Maps 64 random bits to the open interval (0, 1).
#[inline]
pub fn bits_to_open01(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

fn fnv1a(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

/// Inverse CDF of Lap(b) at `u` in (0, 1).
#[inline]
pub fn laplace_inverse_cdf(u: f64, b: f64) -> f64 {
    let c = u - 0.5;
    -b * c.signum() * (1.0 - 2.0 * c.abs()).ln()
}

fn check_scale(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("Laplace scale must be positive and finite, got {b}")))
    }
}

#[derive(Debug, Clone)]
pub struct NoiseSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl NoiseSource {
    pub fn new(seed: u64) -> Self {
        NoiseSource {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent source for the stage named `tag`.
    pub fn child(&self, tag: &str) -> NoiseSource {
        NoiseSource::new(mix64(self.seed ^ fnv1a(tag)))
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.random()
    }

    /// Uniform draw from (0, 1).
    pub fn open01(&mut self) -> f64 {
        bits_to_open01(self.next_u64())
    }

    /// One draw from Lap(b).
    pub fn laplace(&mut self, b: f64) -> Result<f64> {
        check_scale(b)?;
        Ok(laplace_inverse_cdf(self.open01(), b))
    }

    /// `value + Lap(b)`, where `b == 0` means no noise and no draw.
    pub(crate) fn perturb(&mut self, value: f64, b: f64) -> f64 {
        if b == 0.0 {
            value
        } else {
            value + laplace_inverse_cdf(self.open01(), b)
        }
    }
}

/// Laplace mechanism: adds i.i.d. Lap(cgs / eps) noise to every coordinate.
/// `cgs == 0` (or `eps == inf`) passes the value through untouched.
pub fn laplace_mechanism(src: &mut NoiseSource, value: &[f64], cgs: f64, eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {eps}")));
    }
    if !(cgs >= 0.0) || !cgs.is_finite() {
        return Err(Error::invalid(format!("sensitivity must be finite and non-negative, got {cgs}")));
    }
    let b = cgs / eps;
    Ok(value.iter().map(|&x| src.perturb(x, b)).collect())
}

/// Uniformly random `k`-subset of `0..n`, in draw order.
pub fn sample_without_replacement(src: &mut NoiseSource, n: usize, k: usize) -> Result<Vec<usize>> {
    if k > n {
        return Err(Error::invalid(format!("cannot sample {k} of {n} without replacement")));
    }
    Ok(rand::seq::index::sample(src.rng(), n, k).into_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn identical_seeds_identical_streams() {
        let mut a = NoiseSource::new(42);
        let mut b = NoiseSource::new(42);
        for _ in 0..100 {
            assert_eq!(a.laplace(1.0).unwrap(), b.laplace(1.0).unwrap());
        }
        let mut c = a.child("x");
        let mut d = a.child("y");
        assert_ne!(c.next_u64(), d.next_u64());
        assert_eq!(a.child("x").seed(), b.child("x").seed());
    }

    #[test]
    fn inverse_cdf_median_is_zero() {
        assert_eq!(laplace_inverse_cdf(0.5, 3.0), 0.0);
        assert!(laplace_inverse_cdf(0.75, 1.0) > 0.0);
        // F^{-1}(0.75) = b ln 2.
        assert!((laplace_inverse_cdf(0.75, 2.0) - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((laplace_inverse_cdf(0.25, 2.0) + 2.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn open01_never_hits_the_ends() {
        assert!(bits_to_open01(0) > 0.0);
        assert!(bits_to_open01(u64::MAX) < 1.0);
        assert!(laplace_inverse_cdf(bits_to_open01(0), 1.0).is_finite());
    }

    #[test]
    fn rejects_bad_scales() {
        let mut s = NoiseSource::new(0);
        assert!(s.laplace(0.0).is_err());
        assert!(s.laplace(-1.0).is_err());
        assert!(s.laplace(f64::NAN).is_err());
        assert!(laplace_mechanism(&mut s, &[1.0], 1.0, 0.0).is_err());
        assert!(laplace_mechanism(&mut s, &[1.0], 1.0, -2.0).is_err());
        assert!(laplace_mechanism(&mut s, &[1.0], -1.0, 1.0).is_err());
    }

    #[test]
    fn zero_sensitivity_passes_through() {
        let mut s = NoiseSource::new(5);
        assert_eq!(laplace_mechanism(&mut s, &[5.0], 0.0, 1.0).unwrap(), vec![5.0]);
        assert_eq!(
            laplace_mechanism(&mut s, &[1.0, 2.0], 1.0, f64::INFINITY).unwrap(),
            vec![1.0, 2.0]
        );
    }

    #[test]
    fn sampling_edge_cases() {
        let mut s = NoiseSource::new(1);
        let mut all = sample_without_replacement(&mut s, 5, 5).unwrap();
        all.sort();
        assert_eq!(all, vec![0, 1, 2, 3, 4]);
        assert!(sample_without_replacement(&mut s, 5, 0).unwrap().is_empty());
        assert!(sample_without_replacement(&mut s, 5, 6).is_err());
        let k = sample_without_replacement(&mut s, 1000, 37).unwrap();
        assert_eq!(k.iter().collect::<HashSet<_>>().len(), 37);
    }

    #[test]
    fn laplace_tail_matches_exponential() {
        let mut s = NoiseSource::new(11);
        let draws: Vec<f64> = (0..200_000).map(|_| s.laplace(1.0).unwrap()).collect();
        for l in [1.0f64, 2.0, 3.0] {
            let p = draws.iter().filter(|y| y.abs() >= l).count() as f64 / draws.len() as f64;
            assert!((p - (-l).exp()).abs() < 0.01, "l={l} p={p}");
        }
    }
}
