use crate::avg_degree::{bucketize, noisy_big_small_edge_count, AvgDegreeParams, BucketPartition, NoisyDegreeTable};
use super::SensitivityReport;
use crate::graph::{Family, Graph, Oracle};
use crate::noise::{derive_seed, NoiseSource};
use crate::par::{map_indices, Execution};
use crate::Result;
use serde::Serialize;

/// Exact fraction of edge endpoints leaving each big bucket for the
/// non-big buckets, over the whole graph.
#[derive(Debug, Clone, Serialize)]
pub struct TrueAlpha {
    /// `(bucket, α_i)`, with `None` for a bucket no vertex falls in or whose
    /// vertices are all isolated.
    pub per_bucket: Vec<(usize, Option<f64>)>,
}

impl TrueAlpha {
    pub fn get(&self, i: usize) -> Option<f64> {
        self.per_bucket.iter().find(|(b, _)| *b == i).and_then(|(_, a)| *a)
    }
}

/// `α_i = |E'_i| / |E_i|` for every big bucket of `part`, where `E_i` holds
/// the ordered adjacent pairs `(v, w)` with `d̃(v)` in bucket `i` and
/// `E'_i ⊆ E_i` those whose `w` lands outside the big buckets. `noisy[v]`
/// is the fixed noisy degree of every vertex.
pub fn true_alpha(g: &Graph, noisy: &[f64], part: &BucketPartition, p: &AvgDegreeParams) -> TrueAlpha {
    let per_bucket = part
        .big
        .iter()
        .map(|&i| {
            let (mut all, mut out) = (0u64, 0u64);
            for v in (0..g.n()).filter(|&v| p.bucket_index(noisy[v]) == i) {
                for &w in g.neighbors(v) {
                    all += 1;
                    if part.lands_outside(p.bucket_index(noisy[w as usize])) {
                        out += 1;
                    }
                }
            }
            (i, (all > 0).then(|| out as f64 / all as f64))
        })
        .collect();
    TrueAlpha { per_bucket }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlphaComparison {
    pub bucket: usize,
    pub bucket_size: usize,
    pub true_alpha: Option<f64>,
    /// Mean of `α̃_i` over the repetitions.
    pub mean_estimate: f64,
    /// Standard error of that mean.
    pub std_error: f64,
    pub abs_error: Option<f64>,
}

/// Runs the big-small count `reps` times over the fixed sample and noisy
/// degrees, with fresh neighbor coins and count noise each time, and
/// compares the mean `α̃_i` with the exact `α_i`.
pub fn monte_carlo_alpha(
    g: &Graph,
    noisy: &[f64],
    sample: &[usize],
    p: &AvgDegreeParams,
    reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<AlphaComparison>> {
    let fixed = || NoisyDegreeTable::from_fixed(sample.to_vec(), (0..g.n()).map(|v| (v, g.degree(v), noisy[v])));
    let part = bucketize(&fixed(), p);
    let exact = true_alpha(g, noisy, &part, p);
    let runs: Vec<Result<Vec<f64>>> = map_indices(exec, reps, |r| {
        let mut tbl = fixed();
        let mut h = Oracle::new(g);
        let c = noisy_big_small_edge_count(&mut h, &part, &mut tbl, p, &NoiseSource::new(derive_seed(seed, r as u64)))?;
        Ok(c.per_bucket.iter().map(|b| b.alpha).collect())
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(part
        .big
        .iter()
        .enumerate()
        .map(|(k, &i)| {
            let xs: Vec<f64> = runs.iter().map(|r| r[k]).collect();
            let m = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / m;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
            let t = exact.get(i);
            AlphaComparison {
                bucket: i,
                bucket_size: part.bucket(i).len(),
                true_alpha: t,
                mean_estimate: mean,
                std_error: (var / m).sqrt(),
                abs_error: t.map(|a| (a - mean).abs()),
            }
        })
        .collect())
}

/// Fixed instance for the α̃ fidelity audit: a graph, one fixed noise
/// vector, a full-census sample, and a big-bucket threshold of roughly
/// `min_bucket` vertices so that some buckets are small and `α_i` is not
/// trivially zero.
#[derive(Debug, Clone)]
pub struct AlphaFixture {
    pub graph: Graph,
    pub noisy: Vec<f64>,
    pub sample: Vec<usize>,
    pub params: AvgDegreeParams,
}

impl AlphaFixture {
    pub fn gnp(n: usize, p: f64, eps: f64, min_bucket: usize, seed: u64) -> Result<AlphaFixture> {
        let graph = Family::Gnp { n, p }.generate(seed)?;
        let params = AvgDegreeParams::new(n, 0.2, 0.025, eps)?
            .with_sample_size(n)
            .with_big_threshold(min_bucket as f64 / (1.2 * n as f64));
        let mut noise = NoiseSource::new(seed).child("fixed-noise");
        let b = params.degree_noise_scale();
        let noisy = (0..n).map(|v| noise.perturb(graph.degree(v) as f64, b)).collect();
        Ok(AlphaFixture { graph, noisy, sample: (0..n).collect(), params })
    }

    pub fn compare(&self, reps: usize, seed: u64, exec: Execution) -> Result<Vec<AlphaComparison>> {
        monte_carlo_alpha(&self.graph, &self.noisy, &self.sample, &self.params, reps, seed, exec)
    }
}

/// One report per big bucket: `|mean α̃_i − α_i|` against `tolerance`.
pub fn audit_alpha(fx: &AlphaFixture, reps: usize, tolerance: f64, seed: u64, exec: Execution) -> Result<Vec<SensitivityReport>> {
    Ok(fx
        .compare(reps, seed, exec)?
        .into_iter()
        .map(|c| {
            SensitivityReport::new(
                &format!("alpha fidelity, bucket {}", c.bucket),
                "fixed noisy degrees, fresh neighbor coins per repetition",
                tolerance,
                c.abs_error.unwrap_or(f64::INFINITY),
                reps as u64,
                Some(serde_json::json!({
                    "bucket_size": c.bucket_size,
                    "true_alpha": c.true_alpha,
                    "mean_estimate": c.mean_estimate,
                    "std_error": c.std_error,
                })),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_big_bucket_has_zero_alpha() {
        let g = Family::DRegular { n: 50, d: 4 }.generate(1).unwrap();
        let noisy: Vec<f64> = vec![4.0; 50];
        let p = AvgDegreeParams::new(50, 0.2, 0.025, 1.0).unwrap();
        let sample: Vec<usize> = (0..50).collect();
        let part = bucketize(&NoisyDegreeTable::from_fixed(sample, (0..50).map(|v| (v, 4, 4.0))), &p);
        let a = true_alpha(&g, &noisy, &part, &p);
        assert_eq!(a.per_bucket.len(), 1);
        assert_eq!(a.per_bucket[0].1, Some(0.0));
    }

    #[test]
    fn star_leaf_bucket_exits_to_the_center() {
        let n = 30;
        let g = Family::Star(n).generate(0).unwrap();
        let noisy: Vec<f64> = (0..n).map(|v| 3.0 * g.degree(v) as f64).collect();
        let p = AvgDegreeParams::unchecked(n, 0.2, 1.0, f64::INFINITY)
            .with_merged_cutoff(1)
            .with_big_threshold(2.0 / (1.2 * n as f64));
        let sample: Vec<usize> = (0..n).collect();
        let part = bucketize(&NoisyDegreeTable::from_fixed(sample, (0..n).map(|v| (v, g.degree(v), noisy[v]))), &p);
        let a = true_alpha(&g, &noisy, &part, &p);
        assert_eq!(a.get(p.bucket_index(3.0)), Some(1.0));
    }

    #[test]
    fn error_shrinks_like_inverse_root_of_reps() {
        let n = 200;
        let g = Family::Gnp { n, p: 0.05 }.generate(3).unwrap();
        let noisy: Vec<f64> = (0..n).map(|v| g.degree(v) as f64).collect();
        let p = AvgDegreeParams::new(n, 0.2, 0.025, f64::INFINITY)
            .unwrap()
            .with_merged_cutoff(1)
            .with_big_threshold(10.0 / (1.2 * n as f64));
        let sample: Vec<usize> = (0..n).collect();
        let few = monte_carlo_alpha(&g, &noisy, &sample, &p, 100, 1, Execution::Parallel).unwrap();
        let many = monte_carlo_alpha(&g, &noisy, &sample, &p, 1600, 1, Execution::Parallel).unwrap();
        assert!(few.len() >= 3);
        for (a, b) in few.iter().zip(&many).filter(|(a, _)| a.std_error > 0.0) {
            // Sixteen times the repetitions: a quarter of the standard error.
            let ratio = b.std_error / a.std_error;
            assert!((ratio - 0.25).abs() < 0.08, "bucket {}: {ratio}", a.bucket);
            assert!(b.abs_error.unwrap() < 4.0 * b.std_error + 1e-12, "{b:?}");
        }
    }
}
