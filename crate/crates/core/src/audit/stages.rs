use super::SensitivityReport;
use crate::avg_degree::{bucketize_with, AvgDegreeParams, BucketPartition};
use crate::graph::{Family, Graph};
use crate::noise::{derive_seed, NoiseSource};
use crate::par::{map_indices, Execution};
use crate::Result;
use serde::Serialize;
use serde_json::json;

/// Random edge-neighboring instances for the per-stage sensitivity checks.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StageAudit {
    pub n: usize,
    pub instances: usize,
    pub edge_p: f64,
    pub sample_size: usize,
    pub rho: f64,
    pub beta: f64,
    pub eps: f64,
    pub seed: u64,
}

impl Default for StageAudit {
    fn default() -> Self {
        StageAudit {
            n: 6,
            instances: 1000,
            edge_p: 0.5,
            sample_size: 5,
            rho: 0.2,
            beta: 0.025,
            eps: 1.0,
            seed: 0,
        }
    }
}

impl StageAudit {
    pub fn params(&self) -> AvgDegreeParams {
        AvgDegreeParams::unchecked(self.n, self.rho, self.beta, self.eps).with_sample_size(self.sample_size)
    }
}

/// One coupled instance: `with` contains the edge `(a, b)`, `without` does
/// not. The sample, the noisy degrees and every coin except those of `a` and
/// `b` are shared.
#[derive(Debug, Clone)]
pub struct StageInstance {
    pub with: Graph,
    pub without: Graph,
    pub edge: (usize, usize),
    pub sample: Vec<usize>,
    pub noisy: Vec<f64>,
    pub coins: Vec<f64>,
    /// Coins of `a` and `b` in `without`.
    pub other_coins: (f64, f64),
}

/// Changes of the three audited quantities across one instance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageDiffs {
    pub degree_l1: f64,
    /// Largest per-bucket change of `ΣX` over big buckets.
    pub bucket_count: f64,
    /// Change of `ΣX` summed over all big buckets.
    pub total_count: f64,
    pub merged_sum: f64,
}

impl StageInstance {
    pub fn random(cfg: &StageAudit, index: u64) -> Result<StageInstance> {
        let mut src = NoiseSource::new(derive_seed(cfg.seed, index));
        let g = Family::Gnp { n: cfg.n, p: cfg.edge_p }.generate(src.next_u64())?;
        let pairs = cfg.n * (cfg.n - 1) / 2;
        let mut k = (src.open01() * pairs as f64) as usize;
        let mut edge = (0, 1);
        'outer: for u in 0..cfg.n {
            for v in u + 1..cfg.n {
                if k == 0 {
                    edge = (u, v);
                    break 'outer;
                }
                k -= 1;
            }
        }
        let h = g.with_edge_toggled(edge.0, edge.1)?;
        let (with, without) = if g.has_edge(edge.0, edge.1) { (g, h) } else { (h, g) };
        let sample = crate::noise::sample_without_replacement(&mut src, cfg.n, cfg.sample_size.min(cfg.n))?;
        let b = cfg.params().degree_noise_scale();
        let mut noisy = Vec::with_capacity(cfg.n);
        for v in 0..cfg.n {
            let d = with.degree(v) as f64;
            noisy.push(src.perturb(d, b));
        }
        let coins: Vec<f64> = (0..cfg.n).map(|_| src.open01()).collect();
        let other_coins = (src.open01(), src.open01());
        Ok(StageInstance { with, without, edge, sample, noisy, coins, other_coins })
    }

    fn coin(&self, v: usize, second: bool) -> f64 {
        match (second, v) {
            (true, v) if v == self.edge.0 => self.other_coins.0,
            (true, v) if v == self.edge.1 => self.other_coins.1,
            _ => self.coins[v],
        }
    }

    /// Bucket index of the coin-selected neighbor of `v`, or `None` when `v`
    /// is isolated.
    fn neighbor_bucket(&self, g: &Graph, v: usize, second: bool, p: &AvgDegreeParams) -> Option<usize> {
        let nbrs = g.neighbors(v);
        if nbrs.is_empty() {
            return None;
        }
        let idx = ((self.coin(v, second) * nbrs.len() as f64) as usize).min(nbrs.len() - 1);
        Some(p.bucket_index(self.noisy[nbrs[idx] as usize]))
    }

    pub fn partition(&self, p: &AvgDegreeParams) -> BucketPartition {
        bucketize_with(&self.sample, |v| self.noisy[v], p)
    }

    pub fn diffs(&self, p: &AvgDegreeParams) -> StageDiffs {
        let part = self.partition(p);
        let degree_l1 = (0..self.with.n())
            .map(|v| self.with.degree(v).abs_diff(self.without.degree(v)))
            .sum::<usize>() as f64;
        let x = |g: &Graph, v: usize, second: bool| {
            self.neighbor_bucket(g, v, second, p)
                .is_some_and(|j| part.lands_outside(j)) as i64
        };
        let mut bucket_count = 0i64;
        let mut total_count = 0i64;
        for &i in &part.big {
            let d: i64 = part
                .bucket(i)
                .iter()
                .map(|&v| x(&self.with, v, false) - x(&self.without, v, true))
                .sum();
            bucket_count = bucket_count.max(d.abs());
            total_count += d;
        }
        let cap = p.degree_cap();
        let k = p.merged_cutoff;
        let term = |g: &Graph, v: usize, second: bool| {
            let h = self
                .neighbor_bucket(g, v, second, p)
                .is_some_and(|j| !part.is_big(j) && j > k);
            (1.0 + h as u8 as f64) * (g.degree(v) as f64).min(cap)
        };
        let merged_sum: f64 = part
            .merged
            .iter()
            .map(|&v| term(&self.with, v, false) - term(&self.without, v, true))
            .sum();
        StageDiffs {
            degree_l1,
            bucket_count: bucket_count as f64,
            total_count: total_count.unsigned_abs() as f64,
            merged_sum: merged_sum.abs(),
        }
    }
}

/// Degree-vector, per-bucket-count and merged-sum changes over random
/// coupled instances, against bounds 2, 2 and `12M(3+β+1/β)`.
pub fn audit_stage_sensitivities(cfg: &StageAudit, exec: Execution) -> Result<Vec<SensitivityReport>> {
    let p = cfg.params();
    let diffs: Vec<Result<StageDiffs>> =
        map_indices(exec, cfg.instances, |i| Ok(StageInstance::random(cfg, i as u64)?.diffs(&p)));
    let diffs = diffs.into_iter().collect::<Result<Vec<_>>>()?;
    let coupling = "shared sample, noisy degrees and coins off the toggled edge";
    let worst = |f: fn(&StageDiffs) -> f64| {
        diffs
            .iter()
            .enumerate()
            .map(|(i, d)| (f(d), i))
            .fold((0.0, 0), |a, b| if b.0 > a.0 { b } else { a })
    };
    let report = |claim: &str, bound: f64, (v, i): (f64, usize)| {
        SensitivityReport::new(
            claim,
            coupling,
            bound,
            v,
            diffs.len() as u64,
            Some(json!({ "instance": i, "seed": cfg.seed, "n": cfg.n })),
        )
    };
    Ok(vec![
        report("noisy-degree vector l1", 2.0, worst(|d| d.degree_l1)),
        report("big-small count per bucket", 2.0, worst(|d| d.bucket_count)),
        report("big-small count over all big buckets", 2.0, worst(|d| d.total_count)),
        report("merged clamped-degree sum", p.merged_sum_sensitivity(), worst(|d| d.merged_sum)),
    ])
}
