//! Repeated seeded estimator runs over one graph, with per-trial error
//! against a known reference value.
//!
//! Trial `i` runs with seed `derive_seed(root, i)` and its own oracle handle,
//! ranking, cache and noise source, so sequential and parallel runs produce
//! the same records in the same order.

use crate::avg_degree::{estimate_average_degree, AvgDegreeParams};
use crate::graph::{Graph, Oracle, QueryCounts};
use crate::matching::{estimate_matching_size, estimate_matching_size_dp, estimate_vc_size, estimate_vc_size_dp};
use crate::noise::{derive_seed, NoiseSource};
use crate::par::{map_indices, Execution};
use crate::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone)]
pub enum Estimator {
    AvgDegree(AvgDegreeParams),
    /// `eps = None` runs the non-private estimator.
    Matching { rho: f64, eps: Option<f64> },
    VertexCover { rho: f64, eps: Option<f64> },
}

impl Estimator {
    pub fn name(&self) -> &'static str {
        match self {
            Estimator::AvgDegree(_) => "avgdeg",
            Estimator::Matching { .. } => "matching",
            Estimator::VertexCover { .. } => "vc",
        }
    }

    /// Whether `estimate` meets the accuracy claim for `reference`.
    ///
    /// * average degree: within `(1 ± ρ)·d̄`;
    /// * matching: `[M/2 − ρn, M]`, widened to `M/2 − 2ρn` when private;
    /// * vertex cover: `[C, 2C + ρn]`, widened to `2C + 2ρn` when private.
    pub fn within_tolerance(&self, estimate: f64, reference: f64, n: usize) -> bool {
        let nf = n as f64;
        match self {
            Estimator::AvgDegree(p) => (estimate - reference).abs() <= p.rho * reference,
            Estimator::Matching { rho, eps } => {
                let k = if eps.is_some() { 2.0 } else { 1.0 };
                estimate >= reference / 2.0 - k * rho * nf && estimate <= reference
            }
            Estimator::VertexCover { rho, eps } => {
                let k = if eps.is_some() { 2.0 } else { 1.0 };
                estimate >= reference && estimate <= 2.0 * reference + k * rho * nf
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub trial: usize,
    pub seed: u64,
    pub estimator: &'static str,
    /// The value the accuracy claim is about: the average-degree estimate,
    /// or the shifted matching / cover estimate.
    pub estimate: f64,
    pub raw: f64,
    pub reference: Option<f64>,
    pub abs_error: Option<f64>,
    pub rel_error: Option<f64>,
    pub pass: Option<bool>,
    pub queries: QueryCounts,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchSummary {
    pub trials: usize,
    /// Trials with a reference value that met the tolerance.
    pub passes: usize,
    pub pass_rate: Option<f64>,
    pub mean_abs_error: Option<f64>,
    pub mean_queries: f64,
}

impl std::fmt::Display for BenchSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} trials", self.trials)?;
        if let Some(r) = self.pass_rate {
            write!(f, ", {} passed ({:.1}%)", self.passes, 100.0 * r)?;
        }
        if let Some(e) = self.mean_abs_error {
            write!(f, ", mean |error| {e:.4}")?;
        }
        write!(f, ", mean queries {:.1}", self.mean_queries)
    }
}

/// One trial with the given seed.
pub fn run_trial(g: &Graph, est: &Estimator, trial: usize, seed: u64, reference: Option<f64>) -> Result<BenchRecord> {
    let src = NoiseSource::new(seed);
    let mut h = Oracle::new(g);
    let (estimate, raw, queries, wall_time_ms) = match est {
        Estimator::AvgDegree(p) => {
            let r = estimate_average_degree(&mut h, p, &src)?;
            (r.estimate, r.raw_estimate, r.queries, r.wall_time_ms)
        }
        Estimator::Matching { rho, eps } => {
            let r = match eps {
                Some(e) => estimate_matching_size_dp(&mut h, *rho, *e, &src)?,
                None => estimate_matching_size(&mut h, *rho, &src)?,
            };
            let value = if eps.is_some() { r.shifted } else { r.raw };
            (value, r.raw, r.queries, r.wall_time_ms)
        }
        Estimator::VertexCover { rho, eps } => {
            let r = match eps {
                Some(e) => estimate_vc_size_dp(&mut h, *rho, *e, &src)?,
                None => estimate_vc_size(&mut h, *rho, &src)?,
            };
            let value = if eps.is_some() { r.shifted } else { r.raw };
            (value, r.raw, r.queries, r.wall_time_ms)
        }
    };
    let abs_error = reference.map(|r| (estimate - r).abs());
    Ok(BenchRecord {
        trial,
        seed,
        estimator: est.name(),
        estimate,
        raw,
        reference,
        abs_error,
        rel_error: reference.zip(abs_error).and_then(|(r, e)| (r != 0.0).then(|| e / r)),
        pass: reference.map(|r| est.within_tolerance(estimate, r, g.n())),
        queries,
        wall_time_ms,
    })
}

/// Runs `trials` trials under `root_seed`.
pub fn run_bench(
    g: &Graph,
    est: &Estimator,
    trials: usize,
    root_seed: u64,
    reference: Option<f64>,
    exec: Execution,
) -> Result<Vec<BenchRecord>> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    map_indices(exec, trials, |i| run_trial(g, est, i, derive_seed(root_seed, i as u64), reference))
        .into_iter()
        .collect()
}

pub fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let judged: Vec<bool> = records.iter().filter_map(|r| r.pass).collect();
    let errors: Vec<f64> = records.iter().filter_map(|r| r.abs_error).collect();
    let n = records.len().max(1) as f64;
    BenchSummary {
        trials: records.len(),
        passes: judged.iter().filter(|&&p| p).count(),
        pass_rate: (!judged.is_empty()).then(|| judged.iter().filter(|&&p| p).count() as f64 / judged.len() as f64),
        mean_abs_error: (!errors.is_empty()).then(|| errors.iter().sum::<f64>() / errors.len() as f64),
        mean_queries: records.iter().map(|r| r.queries.total() as f64).sum::<f64>() / n,
    }
}
