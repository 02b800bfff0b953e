use crate::{Error, Result};
use serde::Serialize;

/// Parameters of the private average-degree estimator.
///
/// `eps == f64::INFINITY` selects the noise-free baseline: every Laplace
/// scale is zero while the sampling randomness is kept. All `log`s are
/// natural logarithms; `log_{1+β}` is kept literal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvgDegreeParams {
    pub n: usize,
    pub rho: f64,
    pub beta: f64,
    pub eps: f64,
    /// Number of degree buckets, `⌈log_{1+β} n⌉`.
    pub t: usize,
    /// Sample size before clamping to `n`.
    pub unclamped_sample_size: f64,
    pub sample_size: usize,
    /// Relative big-bucket threshold `T`.
    pub big_threshold: f64,
    /// `M_{ρ,n}`, evaluated on the clamped sample size.
    pub noise_bound: f64,
    /// Merged-bucket cutoff index `K`.
    pub merged_cutoff: usize,
    pub warnings: Vec<String>,
}

impl AvgDegreeParams {
    /// Validated parameters with every derived quantity computed from the
    /// closed-form schedule.
    pub fn new(n: usize, rho: f64, beta: f64, eps: f64) -> Result<Self> {
        let mut violations = Vec::new();
        if n < 2 {
            violations.push(format!("n >= 2 (got {n})"));
        }
        if !(rho > 0.0 && rho <= 0.25) {
            violations.push(format!("0 < rho <= 1/4 (got {rho})"));
        }
        if !(beta > 0.0 && beta <= rho / 8.0) {
            violations.push(format!("0 < beta <= rho/8 (got beta = {beta}, rho/8 = {})", rho / 8.0));
        }
        if !(eps > 0.0) {
            violations.push(format!("eps > 0 (got {eps})"));
        }
        if !violations.is_empty() {
            return Err(Error::invalid(format!(
                "average-degree parameters violate: {}",
                violations.join("; ")
            )));
        }
        Ok(Self::derive(n, rho, beta, eps))
    }

    /// Derives the schedule without the accuracy preconditions on `rho` and
    /// `beta`. Meant for audits and tests that need coarse buckets.
    pub fn unchecked(n: usize, rho: f64, beta: f64, eps: f64) -> Self {
        Self::derive(n.max(2), rho, beta, eps)
    }

    fn derive(n: usize, rho: f64, beta: f64, eps: f64) -> Self {
        let nf = n as f64;
        let ln_n = nf.ln();
        let t = ((ln_n / (1.0 + beta).ln()).ceil() as usize).max(1);
        let inv_eps = if eps.is_infinite() { 0.0 } else { 1.0 / eps };
        let eps_ratio = if eps.is_infinite() { 1.0 } else { eps / (1.0 + eps) };
        let unclamped = t as f64 * (ln_n * ln_n / (rho * rho)) * (nf / rho).sqrt() * (1.0 + inv_eps);
        let mut warnings = Vec::new();
        let sample_size = if unclamped >= nf {
            warnings.push(format!(
                "sample size {unclamped:.3e} exceeds n = {n}; clamped to a full census"
            ));
            n
        } else {
            (unclamped.ceil() as usize).clamp(1, n)
        };
        if inv_eps >= ln_n.powf(0.25) {
            warnings.push(format!(
                "1/eps = {inv_eps:.3} is not small against log(n)^(1/4) = {:.3}; accuracy guarantee may not apply",
                ln_n.powf(0.25)
            ));
        }
        if rho >= 0.25 {
            warnings.push("rho = 1/4 sits on the boundary of the accuracy precondition rho < 1/4".into());
        }
        let big_threshold = 0.5 * (rho / nf).sqrt() * eps_ratio / t as f64;
        let mut p = AvgDegreeParams {
            n,
            rho,
            beta,
            eps,
            t,
            unclamped_sample_size: unclamped,
            sample_size,
            big_threshold,
            noise_bound: 0.0,
            merged_cutoff: 1,
            warnings,
        };
        p.set_sample_size(sample_size);
        p
    }

    /// Overrides `|S|` and recomputes `M_{ρ,n}` and `K`, which depend on it.
    pub fn with_sample_size(mut self, s: usize) -> Self {
        self.set_sample_size(s.clamp(1, self.n));
        self
    }

    /// Overrides the relative big-bucket threshold `T`.
    pub fn with_big_threshold(mut self, t: f64) -> Self {
        self.big_threshold = t;
        self
    }

    /// Overrides the merged-bucket cutoff `K` (at least 1).
    pub fn with_merged_cutoff(mut self, k: usize) -> Self {
        self.merged_cutoff = k.max(1);
        self
    }

    fn set_sample_size(&mut self, s: usize) {
        let nf = self.n as f64;
        self.sample_size = s;
        self.noise_bound =
            (1.0 / 3.0) * (self.rho / (nf * nf.ln().sqrt())).sqrt() * (s as f64 / self.t as f64);
        // K = ⌈log_{1+β}(6M/β)⌉ + 2, kept at least 1 so bucket 1 is always merged.
        let log_term = (6.0 * self.noise_bound / self.beta).ln() / (1.0 + self.beta).ln();
        let k = log_term.ceil() + 2.0;
        self.merged_cutoff = if k.is_finite() && k >= 1.0 { k as usize } else { 1 };
    }

    pub fn is_baseline(&self) -> bool {
        self.eps.is_infinite()
    }

    /// Laplace scale for noisy degrees and for the per-bucket counts, `6/ε`.
    pub fn degree_noise_scale(&self) -> f64 {
        if self.is_baseline() {
            0.0
        } else {
            6.0 / self.eps
        }
    }

    /// Clamp applied to degrees in the merged bucket, `6M(3 + β + 1/β)`.
    pub fn degree_cap(&self) -> f64 {
        6.0 * self.noise_bound * (3.0 + self.beta + 1.0 / self.beta)
    }

    /// Coupled sensitivity of the merged-bucket sum, `12M(3 + β + 1/β)`.
    pub fn merged_sum_sensitivity(&self) -> f64 {
        2.0 * self.degree_cap()
    }

    /// Laplace scale for the merged-bucket sum: its sensitivity over `ε/3`.
    pub fn merged_sum_noise_scale(&self) -> f64 {
        if self.is_baseline() {
            0.0
        } else {
            3.0 * self.merged_sum_sensitivity() / self.eps
        }
    }

    /// Bucket index of a noisy degree: `i` with `x ∈ ((1+β)^{i-1}, (1+β)^i]`,
    /// clamped to `1..=t`.
    pub fn bucket_index(&self, x: f64) -> usize {
        bucket_index(x, self.beta, self.t)
    }

    /// Upper edge `(1+β)^i` of bucket `i`.
    pub fn bucket_upper(&self, i: usize) -> f64 {
        (1.0 + self.beta).powi(i as i32)
    }
}

pub(crate) fn bucket_index(x: f64, beta: f64, t: usize) -> usize {
    if !(x > 1.0) {
        return 1;
    }
    let base = 1.0 + beta;
    let mut i = (x.ln() / base.ln()).ceil().max(1.0) as usize;
    // Repair floating error at the interval edges.
    while i > 1 && base.powi(i as i32 - 1) >= x {
        i -= 1;
    }
    while base.powi(i as i32) < x {
        i += 1;
    }
    i.clamp(1, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_parameters() {
        let err = AvgDegreeParams::new(1000, 0.3, 0.01, 1.0).unwrap_err().to_string();
        assert!(err.contains("rho"), "{err}");
        let err = AvgDegreeParams::new(1000, 0.2, 0.1, 1.0).unwrap_err().to_string();
        assert!(err.contains("beta"), "{err}");
        let err = AvgDegreeParams::new(1000, 0.2, 0.02, 0.0).unwrap_err().to_string();
        assert!(err.contains("eps"), "{err}");
        assert!(AvgDegreeParams::new(1, 0.2, 0.02, 1.0).is_err());
        assert!(AvgDegreeParams::new(1000, 0.2, 0.025, f64::INFINITY).is_ok());
    }

    #[test]
    fn schedule_matches_closed_form() {
        let n = 100_000usize;
        let (rho, beta, eps) = (0.25, 0.25 / 8.0, 1.0);
        let p = AvgDegreeParams::new(n, rho, beta, eps).unwrap();
        let ln_n = (n as f64).ln();
        let t = (ln_n / (1.0f64 + beta).ln()).ceil();
        assert_eq!(p.t as f64, t);
        assert_eq!(p.t, 375);
        let s = t * ln_n.powi(2) / rho.powi(2) * (n as f64 / rho).sqrt() * 2.0;
        assert!((p.unclamped_sample_size - s).abs() < 1e-6 * s);
        assert_eq!(p.sample_size, n);
        assert!(!p.warnings.is_empty());
        let big_t = 0.5 * (rho / n as f64).sqrt() * 0.5 / t;
        assert!((p.big_threshold - big_t).abs() < 1e-15);
        let m = (1.0 / 3.0) * (rho / (n as f64 * ln_n.sqrt())).sqrt() * (n as f64 / t);
        assert!((p.noise_bound - m).abs() < 1e-12);
        let k = ((6.0 * m / beta).ln() / (1.0 + beta).ln()).ceil() as usize + 2;
        assert_eq!(p.merged_cutoff, k);
        assert!((p.degree_cap() - 6.0 * m * (3.0 + beta + 1.0 / beta)).abs() < 1e-12);
    }

    #[test]
    fn baseline_zeroes_noise() {
        let p = AvgDegreeParams::new(5000, 0.2, 0.025, f64::INFINITY).unwrap();
        assert_eq!(p.degree_noise_scale(), 0.0);
        assert_eq!(p.merged_sum_noise_scale(), 0.0);
        let q = AvgDegreeParams::new(5000, 0.2, 0.025, 3.0).unwrap();
        assert_eq!(q.degree_noise_scale(), 2.0);
    }

    #[test]
    fn bucket_boundaries() {
        // (1+β) = 2: bucket i covers (2^{i-1}, 2^i].
        assert_eq!(bucket_index(5.0, 1.0, 10), 3);
        assert_eq!(bucket_index(4.0, 1.0, 10), 2);
        assert_eq!(bucket_index(4.000001, 1.0, 10), 3);
        assert_eq!(bucket_index(2.0, 1.0, 10), 1);
        assert_eq!(bucket_index(1.0, 1.0, 10), 1);
        assert_eq!(bucket_index(-0.3, 1.0, 10), 1);
        assert_eq!(bucket_index(1e9, 1.0, 10), 10);
        for i in 1..200 {
            let x = 1.03f64.powi(i);
            assert_eq!(bucket_index(x, 0.03, 500), i as usize);
        }
    }
}
