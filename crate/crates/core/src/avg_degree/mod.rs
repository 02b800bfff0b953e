//! Edge-private `(1+ρ)`-approximation of the average degree.
//!
//! The run is split into three stages, each private at `ε/3`:
//!
//! 1. [`noisy_degree_sample`]: sample `S` without replacement and attach
//!    `d̃(v) = deg(v) + Lap(6/ε)` lazily to touched vertices.
//! 2. [`noisy_big_small_edge_count`]: for every big bucket, count sampled
//!    vertices whose random neighbor falls in a non-big bucket, plus
//!    `Lap(6/ε)`.
//! 3. [`noisy_avg_degree`]: combine the bucket estimates; when the merged
//!    low-degree bucket is big, add its clamped-degree sum with noise
//!    calibrated to that sum's coupled sensitivity.
//!
//! Bucketing ([`bucketize`]) is post-processing of stage 1.

mod params;
mod stages;

pub use params::AvgDegreeParams;
pub use stages::{
    bucketize, bucketize_with, noisy_avg_degree, noisy_big_small_edge_count, noisy_degree_sample,
    AvgDegreeOutput, BigSmallCounts, Branch, BucketCount, BucketPartition, NoisyDegreeTable,
};


use crate::graph::{Oracle, QueryCounts};
use crate::noise::NoiseSource;
use crate::Result;
use serde::Serialize;
use std::time::Instant;

#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub estimate: f64,
    pub raw_estimate: f64,
    pub branch: Branch,
    pub params: AvgDegreeParams,
    pub seed: u64,
    pub queries: QueryCounts,
    pub wall_time_ms: f64,
    pub big_buckets: usize,
    pub merged_size: usize,
}

/// Runs the full estimator. Query counts in the report are those charged to
/// `oracle` during this call.
pub fn estimate_average_degree(
    oracle: &mut Oracle<'_>,
    p: &AvgDegreeParams,
    src: &NoiseSource,
) -> Result<EstimateReport> {
    let start = Instant::now();
    let before = oracle.counts();
    let mut tbl = noisy_degree_sample(oracle, p, src)?;
    let part = bucketize(&tbl, p);
    let counts = noisy_big_small_edge_count(oracle, &part, &mut tbl, p, src)?;
    let out = noisy_avg_degree(&part, &counts, &mut tbl, oracle, p, src)?;
    let after = oracle.counts();
    Ok(EstimateReport {
        estimate: out.estimate,
        raw_estimate: out.raw,
        branch: out.branch,
        params: p.clone(),
        seed: src.seed(),
        queries: QueryCounts {
            degree_queries: after.degree_queries - before.degree_queries,
            neighbor_queries: after.neighbor_queries - before.neighbor_queries,
        },
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        big_buckets: part.big.len(),
        merged_size: part.merged.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Family, Graph};

    #[test]
    fn complete_graph_baseline_brackets_n_minus_one() {
        for n in [20usize, 64, 200] {
            let g = Family::Complete(n).generate(0).unwrap();
            let p = AvgDegreeParams::new(n, 0.2, 0.025, f64::INFINITY).unwrap();
            assert_eq!(p.sample_size, n);
            let mut h = Oracle::new(&g);
            let r = estimate_average_degree(&mut h, &p, &NoiseSource::new(1)).unwrap();
            let d = (n - 1) as f64;
            assert!(r.estimate > d && r.estimate <= (1.0 + p.beta) * d + 1e-9, "n={n} est={}", r.estimate);
        }
    }

    #[test]
    fn empty_graph_baseline_is_zero() {
        let g = Graph::empty(100);
        let p = AvgDegreeParams::new(100, 0.2, 0.025, f64::INFINITY).unwrap();
        let r = estimate_average_degree(&mut Oracle::new(&g), &p, &NoiseSource::new(4)).unwrap();
        assert_eq!(r.estimate, 0.0);
    }

    #[test]
    fn same_seed_same_report() {
        let g = Family::Gnp { n: 2000, p: 0.005 }.generate(2).unwrap();
        let p = AvgDegreeParams::new(2000, 0.2, 0.025, 1.0).unwrap().with_sample_size(500);
        let a = estimate_average_degree(&mut Oracle::new(&g), &p, &NoiseSource::new(77)).unwrap();
        let b = estimate_average_degree(&mut Oracle::new(&g), &p, &NoiseSource::new(77)).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.queries, b.queries);
        assert_eq!(a.branch, b.branch);
    }

    #[test]
    fn query_budget_per_run() {
        let g = Family::Gnp { n: 5000, p: 0.004 }.generate(3).unwrap();
        for eps in [0.5, 1.0, f64::INFINITY] {
            let p = AvgDegreeParams::new(5000, 0.2, 0.025, eps).unwrap().with_sample_size(700);
            let mut h = Oracle::new(&g);
            let r = estimate_average_degree(&mut h, &p, &NoiseSource::new(5)).unwrap();
            let s = p.sample_size as u64;
            assert!(r.queries.degree_queries <= 2 * s, "{:?}", r.queries);
            assert!(r.queries.degree_queries >= s);
            assert!(r.queries.neighbor_queries <= s);
            assert_eq!(r.queries, h.counts());
        }
    }
}
