use super::params::AvgDegreeParams;
use crate::graph::Oracle;
use crate::noise::{bits_to_open01, keyed_u64, laplace_inverse_cdf, sample_without_replacement, NoiseSource};
use crate::Result;
use serde::Serialize;
use std::collections::HashMap;

/// Sampled vertices plus lazily materialised noisy degrees.
///
/// Each vertex's Laplace term is a keyed function of the vertex id, so a
/// vertex sees the same `d̃(v)` whenever it is touched, and the value does not
/// depend on the order in which vertices are first accessed.
#[derive(Debug, Clone)]
pub struct NoisyDegreeTable {
    pub sample: Vec<usize>,
    noise_key: u64,
    scale: f64,
    entries: HashMap<usize, (usize, f64)>,
}

impl NoisyDegreeTable {
    /// `(deg(v), d̃(v))`, querying the oracle on first access only.
    pub fn lookup(&mut self, oracle: &mut Oracle<'_>, v: usize) -> Result<(usize, f64)> {
        if let Some(&e) = self.entries.get(&v) {
            return Ok(e);
        }
        let deg = oracle.degree(v)?;
        let noisy = if self.scale == 0.0 {
            deg as f64
        } else {
            deg as f64 + laplace_inverse_cdf(bits_to_open01(keyed_u64(self.noise_key, v as u64)), self.scale)
        };
        self.entries.insert(v, (deg, noisy));
        Ok((deg, noisy))
    }

    /// Memoised entry; `None` if `v` was never accessed.
    pub fn get(&self, v: usize) -> Option<(usize, f64)> {
        self.entries.get(&v).copied()
    }

    pub fn accessed(&self) -> usize {
        self.entries.len()
    }

    /// Table over a fixed noisy-degree assignment (audits and tests).
    pub fn from_fixed(sample: Vec<usize>, fixed: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        NoisyDegreeTable {
            sample,
            noise_key: 0,
            scale: 0.0,
            entries: fixed.into_iter().map(|(v, d, x)| (v, (d, x))).collect(),
        }
    }
}

/// Draws `S` and the noisy degrees of every sampled vertex.
pub fn noisy_degree_sample(
    oracle: &mut Oracle<'_>,
    p: &AvgDegreeParams,
    src: &NoiseSource,
) -> Result<NoisyDegreeTable> {
    let mut sampler = src.child("sample");
    let sample = sample_without_replacement(&mut sampler, oracle.n(), p.sample_size)?;
    let mut tbl = NoisyDegreeTable {
        sample,
        noise_key: src.child("noisy-degree").next_u64(),
        scale: p.degree_noise_scale(),
        entries: HashMap::with_capacity(p.sample_size),
    };
    for i in 0..tbl.sample.len() {
        let v = tbl.sample[i];
        tbl.lookup(oracle, v)?;
    }
    Ok(tbl)
}

/// Bucket structure over the sample.
#[derive(Debug, Clone, Serialize)]
pub struct BucketPartition {
    /// `buckets[i - 1]` holds the sampled vertices of bucket `i`.
    pub buckets: Vec<Vec<usize>>,
    /// Sampled vertices whose bucket index is at most `K`.
    pub merged: Vec<usize>,
    /// Big bucket indices, ascending; all exceed `K`.
    pub big: Vec<usize>,
    pub merged_is_big: bool,
    pub sample_size: usize,
    pub merged_cutoff: usize,
    #[serde(skip)]
    is_big: Vec<bool>,
}

impl BucketPartition {
    pub fn bucket(&self, i: usize) -> &[usize] {
        &self.buckets[i - 1]
    }

    pub fn is_big(&self, i: usize) -> bool {
        self.is_big.get(i).copied().unwrap_or(false)
    }

    /// Whether a neighbor in bucket `j` counts as landing in a non-big
    /// bucket. When the merged bucket is big, merged indices do not count.
    pub fn lands_outside(&self, j: usize) -> bool {
        !self.is_big(j) && (!self.merged_is_big || j > self.merged_cutoff)
    }
}

/// Partitions `sample` by noisy degree.
pub fn bucketize_with(sample: &[usize], noisy: impl Fn(usize) -> f64, p: &AvgDegreeParams) -> BucketPartition {
    let mut buckets = vec![Vec::new(); p.t];
    let mut merged = Vec::new();
    for &v in sample {
        let i = p.bucket_index(noisy(v));
        buckets[i - 1].push(v);
        if i <= p.merged_cutoff {
            merged.push(v);
        }
    }
    let s = sample.len() as f64;
    let bucket_min = 1.2 * p.big_threshold * s;
    let mut is_big = vec![false; p.t + 1];
    let mut big = Vec::new();
    for i in (p.merged_cutoff + 1)..=p.t {
        let size = buckets[i - 1].len();
        if size > 0 && size as f64 >= bucket_min {
            is_big[i] = true;
            big.push(i);
        }
    }
    let merged_is_big = merged.len() as f64 >= 1.2 * p.big_threshold * s.sqrt() * s;
    BucketPartition {
        buckets,
        merged,
        big,
        merged_is_big,
        sample_size: sample.len(),
        merged_cutoff: p.merged_cutoff,
        is_big,
    }
}

pub fn bucketize(tbl: &NoisyDegreeTable, p: &AvgDegreeParams) -> BucketPartition {
    bucketize_with(&tbl.sample, |v| tbl.get(v).expect("sampled vertex populated").1, p)
}

#[derive(Debug, Clone, Serialize)]
pub struct BucketCount {
    pub bucket: usize,
    /// Sum of the indicators before noise.
    pub hits: usize,
    pub noise: f64,
    /// Noisy count `W_i`.
    pub noisy_count: f64,
    /// `W_i / |S̃_i|`.
    pub alpha: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BigSmallCounts {
    pub per_bucket: Vec<BucketCount>,
}

impl BigSmallCounts {
    pub fn alpha(&self, i: usize) -> Option<f64> {
        self.per_bucket.iter().find(|c| c.bucket == i).map(|c| c.alpha)
    }
}

/// Uniformly random neighbor of `v` through one neighbor query; `None` for
/// isolated vertices, which make no probe.
fn random_neighbor(oracle: &mut Oracle<'_>, v: usize, deg: usize, coins: &mut NoiseSource) -> Result<Option<usize>> {
    if deg == 0 {
        return Ok(None);
    }
    let idx = ((coins.open01() * deg as f64) as usize).min(deg - 1);
    oracle.neighbor(v, idx + 1)
}

/// Indicator `X(v)`: the random neighbor's noisy degree falls in a bucket
/// that is not big (and, when the merged bucket is big, lies above `K`).
fn probe(
    oracle: &mut Oracle<'_>,
    tbl: &mut NoisyDegreeTable,
    part: &BucketPartition,
    p: &AvgDegreeParams,
    v: usize,
    coins: &mut NoiseSource,
) -> Result<bool> {
    let (deg, _) = tbl.lookup(oracle, v)?;
    match random_neighbor(oracle, v, deg, coins)? {
        None => Ok(false),
        Some(w) => {
            let (_, noisy) = tbl.lookup(oracle, w)?;
            Ok(part.lands_outside(p.bucket_index(noisy)))
        }
    }
}

/// Noisy count of sampled big-bucket vertices whose random neighbor lands
/// outside the big buckets.
pub fn noisy_big_small_edge_count(
    oracle: &mut Oracle<'_>,
    part: &BucketPartition,
    tbl: &mut NoisyDegreeTable,
    p: &AvgDegreeParams,
    src: &NoiseSource,
) -> Result<BigSmallCounts> {
    let mut coins = src.child("big-small-coins");
    let mut noise = src.child("big-small-noise");
    let scale = p.degree_noise_scale();
    let mut per_bucket = Vec::with_capacity(part.big.len());
    for &i in &part.big {
        let mut hits = 0;
        for &v in part.bucket(i) {
            if probe(oracle, tbl, part, p, v, &mut coins)? {
                hits += 1;
            }
        }
        let z = noise.perturb(0.0, scale);
        let noisy_count = hits as f64 + z;
        per_bucket.push(BucketCount {
            bucket: i,
            hits,
            noise: z,
            noisy_count,
            alpha: noisy_count / part.bucket(i).len() as f64,
        });
    }
    Ok(BigSmallCounts { per_bucket })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "small-S1")]
    SmallMerged,
    #[serde(rename = "big-S1")]
    BigMerged,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Branch::SmallMerged => "small-S1",
            Branch::BigMerged => "big-S1",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AvgDegreeOutput {
    /// Unclamped estimator value.
    pub raw: f64,
    /// `max(raw, 0)`.
    pub estimate: f64,
    pub branch: Branch,
    /// Noise added to the merged-bucket sum (big-S1 branch only).
    pub merged_noise: Option<f64>,
}

/// Combines the bucket estimates; in the big-S1 branch also probes the
/// merged bucket and adds its clamped-degree sum with Laplace noise.
pub fn noisy_avg_degree(
    part: &BucketPartition,
    counts: &BigSmallCounts,
    tbl: &mut NoisyDegreeTable,
    oracle: &mut Oracle<'_>,
    p: &AvgDegreeParams,
    src: &NoiseSource,
) -> Result<AvgDegreeOutput> {
    let s = part.sample_size as f64;
    let big_sum: f64 = counts
        .per_bucket
        .iter()
        .map(|c| part.bucket(c.bucket).len() as f64 * (1.0 + c.alpha) * p.bucket_upper(c.bucket))
        .sum();
    if !part.merged_is_big {
        let raw = big_sum / s;
        return Ok(AvgDegreeOutput {
            raw,
            estimate: raw.max(0.0),
            branch: Branch::SmallMerged,
            merged_noise: None,
        });
    }
    let mut coins = src.child("merged-coins");
    let cap = p.degree_cap();
    let mut merged_sum = 0.0;
    for &v in &part.merged {
        let x = probe(oracle, tbl, part, p, v, &mut coins)?;
        let (deg, _) = tbl.lookup(oracle, v)?;
        merged_sum += if x { 2.0 } else { 1.0 } * (deg as f64).min(cap);
    }
    let z = src.child("merged-noise").perturb(0.0, p.merged_sum_noise_scale());
    let raw = (big_sum + z + merged_sum) / s;
    Ok(AvgDegreeOutput {
        raw,
        estimate: raw.max(0.0),
        branch: Branch::BigMerged,
        merged_noise: Some(z),
    })
}
