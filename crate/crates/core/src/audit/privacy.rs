use crate::avg_degree::{estimate_average_degree, AvgDegreeParams};
use crate::graph::{Graph, Oracle};
use crate::matching::{estimate_matching_size_dp, estimate_vc_size_dp};
use crate::noise::{derive_seed, laplace_mechanism, NoiseSource};
use crate::par::{map_indices, Execution};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

/// A randomized mechanism run on two neighboring inputs.
#[derive(Debug, Clone)]
pub enum Mechanism<'a> {
    /// Laplace mechanism on two scalar query answers.
    Laplace { first: f64, second: f64, cgs: f64, eps: f64 },
    DpMatching { first: &'a Graph, second: &'a Graph, rho: f64, eps: f64 },
    DpVertexCover { first: &'a Graph, second: &'a Graph, rho: f64, eps: f64 },
    DpAvgDegree { first: &'a Graph, second: &'a Graph, params: AvgDegreeParams },
}

impl Mechanism<'_> {
    pub fn id(&self) -> &'static str {
        match self {
            Mechanism::Laplace { .. } => "laplace",
            Mechanism::DpMatching { .. } => "dp-matching",
            Mechanism::DpVertexCover { .. } => "dp-vc",
            Mechanism::DpAvgDegree { .. } => "dp-avgdeg",
        }
    }

    pub fn eps(&self) -> f64 {
        match self {
            Mechanism::Laplace { eps, .. }
            | Mechanism::DpMatching { eps, .. }
            | Mechanism::DpVertexCover { eps, .. } => *eps,
            Mechanism::DpAvgDegree { params, .. } => params.eps,
        }
    }

    fn run(&self, second: bool, seed: u64) -> Result<f64> {
        let src = NoiseSource::new(seed);
        let pick = |a: &Graph, b: &Graph| if second { b.clone() } else { a.clone() };
        match self {
            Mechanism::Laplace { first, second: other, cgs, eps } => {
                let x = if second { *other } else { *first };
                Ok(laplace_mechanism(&mut NoiseSource::new(seed), &[x], *cgs, *eps)?[0])
            }
            Mechanism::DpMatching { first, second: s, rho, eps } => {
                let g = pick(first, s);
                Ok(estimate_matching_size_dp(&mut Oracle::new(&g), *rho, *eps, &src)?.noisy)
            }
            Mechanism::DpVertexCover { first, second: s, rho, eps } => {
                let g = pick(first, s);
                Ok(estimate_vc_size_dp(&mut Oracle::new(&g), *rho, *eps, &src)?.noisy)
            }
            Mechanism::DpAvgDegree { first, second: s, params } => {
                let g = pick(first, s);
                Ok(estimate_average_degree(&mut Oracle::new(&g), params, &src)?.raw_estimate)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrivacyAuditConfig {
    /// Draws per input.
    pub samples: usize,
    pub bin_width: f64,
    /// Minimum count both histograms need in a bin for it to qualify.
    pub floor: u64,
    pub slack: f64,
    /// Width, in standard errors, of the lower confidence bound on each
    /// bin's log ratio.
    pub z: f64,
    pub seed: u64,
}

impl Default for PrivacyAuditConfig {
    fn default() -> Self {
        PrivacyAuditConfig {
            samples: 100_000,
            bin_width: 0.1,
            floor: 50,
            slack: 0.05,
            z: 3.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrivacyAuditReport {
    pub mechanism: String,
    pub eps_claimed: f64,
    /// Largest lower confidence bound on `|log(p̂₁/p̂₂)|` over qualifying
    /// bins; this is the figure checked against the claim.
    pub eps_hat: f64,
    /// Largest plain `|log(p̂₁/p̂₂)|` over qualifying bins.
    pub eps_hat_raw: f64,
    pub bins: usize,
    pub qualifying_bins: usize,
    pub samples: usize,
    pub bin_width: f64,
    pub floor: u64,
    pub slack: f64,
    pub status: AuditStatus,
}

impl PrivacyAuditReport {
    pub fn pass(&self) -> bool {
        self.status == AuditStatus::Pass
    }
}

fn histogram(xs: &[f64], width: f64) -> HashMap<i64, u64> {
    let mut h = HashMap::new();
    for &x in xs {
        *h.entry((x / width).floor() as i64).or_insert(0) += 1;
    }
    h
}

/// Estimates the privacy loss of `mech` from histograms of its outputs on
/// the two inputs, using identical bin edges for both.
///
/// Only bins where both counts reach `floor` qualify. The per-bin estimate
/// is `|log(c₁/c₂)| − z·√(1/c₁ + 1/c₂)`, a lower confidence bound that keeps
/// sampling noise in thin bins from posing as privacy loss. With no
/// qualifying bin the status is inconclusive.
pub fn audit_privacy(mech: &Mechanism<'_>, cfg: &PrivacyAuditConfig, exec: Execution) -> Result<PrivacyAuditReport> {
    if cfg.samples == 0 || !(cfg.bin_width > 0.0) {
        return Err(Error::invalid("privacy audit needs samples > 0 and a positive bin width"));
    }
    let draw = |second: bool| -> Result<Vec<f64>> {
        let root = derive_seed(cfg.seed, second as u64);
        map_indices(exec, cfg.samples, |i| mech.run(second, derive_seed(root, i as u64)))
            .into_iter()
            .collect()
    };
    let a = histogram(&draw(false)?, cfg.bin_width);
    let b = histogram(&draw(true)?, cfg.bin_width);
    let mut keys: Vec<i64> = a.keys().chain(b.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();
    let mut eps_hat = f64::NEG_INFINITY;
    let mut eps_raw = 0.0f64;
    let mut qualifying = 0;
    for k in &keys {
        let (ca, cb) = (a.get(k).copied().unwrap_or(0), b.get(k).copied().unwrap_or(0));
        if ca < cfg.floor || cb < cfg.floor {
            continue;
        }
        qualifying += 1;
        let (fa, fb) = (ca as f64, cb as f64);
        let r = (fa / fb).ln().abs();
        eps_raw = eps_raw.max(r);
        eps_hat = eps_hat.max(r - cfg.z * (1.0 / fa + 1.0 / fb).sqrt());
    }
    let eps_hat = eps_hat.max(0.0);
    let eps = mech.eps();
    let status = if qualifying == 0 {
        AuditStatus::Inconclusive
    } else if eps_hat <= eps + cfg.slack {
        AuditStatus::Pass
    } else {
        AuditStatus::Fail
    };
    Ok(PrivacyAuditReport {
        mechanism: mech.id().to_string(),
        eps_claimed: eps,
        eps_hat,
        eps_hat_raw: eps_raw,
        bins: keys.len(),
        qualifying_bins: qualifying,
        samples: cfg.samples,
        bin_width: cfg.bin_width,
        floor: cfg.floor,
        slack: cfg.slack,
        status,
    })
}
