//! Maximum-matching and minimum-vertex-cover size estimates from local
//! greedy-matching oracles.
//!
//! A random [`EdgeRanking`] `π` fixes a greedy maximal matching `M_π`.
//! [`matching_oracle`] decides whether an edge is in `M_π` by exploring only
//! lower-ranked incident edges, and [`vertex_cover_oracle`] whether a vertex
//! is matched. The estimators sample `s` vertices and scale the number of
//! matched ones. Private variants add Laplace noise calibrated to the
//! coupled sensitivity of that count under the identity coupling of `π`.

mod greedy;
mod oracle;
mod ranking;

pub use greedy::{greedy_matching, matched_vertices};
pub use oracle::{matching_oracle, vertex_cover_oracle, OracleCache};
pub use ranking::{EdgeRanking, Rank};

use crate::graph::{Oracle, QueryCounts};
use crate::noise::{sample_without_replacement, NoiseSource};
use crate::{Error, Result};
use serde::Serialize;
use std::time::Instant;

const SAMPLE_CONSTANT: f64 = 16.0 * 24.0;

/// `s = ⌈384 ln n / ρ²⌉`, clamped to `n`.
pub fn sample_size(n: usize, rho: f64) -> usize {
    let s = (SAMPLE_CONSTANT * (n as f64).ln() / (rho * rho)).ceil();
    if s >= n as f64 { n } else { (s as usize).max(1) }
}

/// Printed Laplace scale of the private matching estimator,
/// `nρ² / (384 ε ln n)`.
pub fn matching_formula_scale(n: usize, rho: f64, eps: f64) -> f64 {
    n as f64 * rho * rho / (SAMPLE_CONSTANT * eps * (n as f64).ln())
}

/// Printed Laplace scale of the private vertex-cover estimator,
/// `nρ² / (192 ε ln n)`.
pub fn vc_formula_scale(n: usize, rho: f64, eps: f64) -> f64 {
    n as f64 * rho * rho / (8.0 * 24.0 * eps * (n as f64).ln())
}

/// Scale actually used: the printed one, raised to `CGS/ε` when rounding `s`
/// up (or clamping it to `n`) pushes the coupled sensitivity above it.
/// Matched counts move by at most 2, so the matching estimate moves by at
/// most `n/s` and the cover estimate by at most `2n/s`.
pub fn effective_noise_scale(kind: Target, n: usize, rho: f64, eps: f64) -> f64 {
    let s = sample_size(n, rho) as f64;
    match kind {
        Target::Matching => matching_formula_scale(n, rho, eps).max(n as f64 / s / eps),
        Target::VertexCover => vc_formula_scale(n, rho, eps).max(2.0 * n as f64 / s / eps),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Matching,
    VertexCover,
}

/// Output of one matching or vertex-cover run.
///
/// `raw` is the estimator as printed (possibly negative), `noisy` adds the
/// Laplace draw, `shifted` re-centres it into the accuracy range, and
/// `clamped` is `shifted` clipped to the feasible range, which is pure
/// post-processing.
#[derive(Debug, Clone, Serialize)]
pub struct SizeEstimate {
    pub target: Target,
    pub raw: f64,
    pub noisy: f64,
    pub shifted: f64,
    pub clamped: f64,
    pub s: usize,
    pub matched_in_sample: usize,
    pub noise_scale: f64,
    pub queries: QueryCounts,
    pub seed: u64,
    pub wall_time_ms: f64,
}

pub type MatchingEstimate = SizeEstimate;
pub type VCEstimate = SizeEstimate;

fn check_rho(n: usize, rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid(format!("rho must lie in (0, 1), got {rho}")));
    }
    if n < 2 {
        return Err(Error::invalid(format!("need n >= 2, got {n}")));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("epsilon must be finite and positive, got {eps}")))
    }
}

/// Samples `s` vertices and returns how many are matched in `M_π` for a
/// ranking drawn from `src`.
fn matched_count(oracle: &mut Oracle<'_>, rho: f64, src: &NoiseSource) -> Result<(usize, usize)> {
    let n = oracle.n();
    let s = sample_size(n, rho);
    let sample = sample_without_replacement(&mut src.child("sample"), n, s)?;
    let pi = EdgeRanking::new(src.child("ranking").next_u64());
    let mut cache = OracleCache::new();
    let mut hits = 0;
    for v in sample {
        if vertex_cover_oracle(oracle, v, &pi, &mut cache)? {
            hits += 1;
        }
    }
    Ok((s, hits))
}

fn finish(
    target: Target,
    n: usize,
    rho: f64,
    eps: Option<f64>,
    s: usize,
    hits: usize,
    src: &NoiseSource,
) -> (f64, f64, f64, f64, f64) {
    let nf = n as f64;
    let x = hits as f64;
    let (raw, offset, hi, tag) = match target {
        Target::Matching => (nf / (2.0 * s as f64) * x - rho * nf / 2.0, -rho * nf / 2.0, nf / 2.0, "matching-noise"),
        Target::VertexCover => (nf / s as f64 * x + rho * nf / 4.0, rho * nf / 2.0, nf, "vc-noise"),
    };
    let scale = eps.map_or(0.0, |e| effective_noise_scale(target, n, rho, e));
    let noisy = src.child(tag).perturb(raw, scale);
    let shifted = noisy + offset;
    (raw, noisy, shifted, shifted.clamp(0.0, hi), scale)
}

fn run(oracle: &mut Oracle<'_>, rho: f64, eps: Option<f64>, src: &NoiseSource, targets: &[Target]) -> Result<Vec<SizeEstimate>> {
    check_rho(oracle.n(), rho)?;
    if let Some(e) = eps {
        check_eps(e)?;
    }
    let start = Instant::now();
    let before = oracle.counts();
    let (s, hits) = matched_count(oracle, rho, src)?;
    let after = oracle.counts();
    let queries = QueryCounts {
        degree_queries: after.degree_queries - before.degree_queries,
        neighbor_queries: after.neighbor_queries - before.neighbor_queries,
    };
    let n = oracle.n();
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(targets
        .iter()
        .map(|&target| {
            let (raw, noisy, shifted, clamped, noise_scale) = finish(target, n, rho, eps, s, hits, src);
            SizeEstimate {
                target,
                raw,
                noisy,
                shifted,
                clamped,
                s,
                matched_in_sample: hits,
                noise_scale,
                queries,
                seed: src.seed(),
                wall_time_ms,
            }
        })
        .collect())
}

/// Non-private matching-size estimate, `n/(2s)·ΣX − ρn/2`.
pub fn estimate_matching_size(oracle: &mut Oracle<'_>, rho: f64, src: &NoiseSource) -> Result<MatchingEstimate> {
    Ok(run(oracle, rho, None, src, &[Target::Matching])?.remove(0))
}

/// `ε`-private matching-size estimate.
pub fn estimate_matching_size_dp(oracle: &mut Oracle<'_>, rho: f64, eps: f64, src: &NoiseSource) -> Result<MatchingEstimate> {
    check_eps(eps)?;
    Ok(run(oracle, rho, Some(eps), src, &[Target::Matching])?.remove(0))
}

/// Non-private vertex-cover-size estimate, `(n/s)·ΣX + ρn/4`.
pub fn estimate_vc_size(oracle: &mut Oracle<'_>, rho: f64, src: &NoiseSource) -> Result<VCEstimate> {
    Ok(run(oracle, rho, None, src, &[Target::VertexCover])?.remove(0))
}

/// `ε`-private vertex-cover-size estimate.
pub fn estimate_vc_size_dp(oracle: &mut Oracle<'_>, rho: f64, eps: f64, src: &NoiseSource) -> Result<VCEstimate> {
    check_eps(eps)?;
    Ok(run(oracle, rho, Some(eps), src, &[Target::VertexCover])?.remove(0))
}

/// Both estimates from one sample, one ranking and one cache. `eps = None`
/// is the non-private estimator. The two noise draws are independent.
pub fn estimate_matching_and_vc(
    oracle: &mut Oracle<'_>,
    rho: f64,
    eps: Option<f64>,
    src: &NoiseSource,
) -> Result<(MatchingEstimate, VCEstimate)> {
    let mut v = run(oracle, rho, eps, src, &[Target::Matching, Target::VertexCover])?;
    let vc = v.pop().expect("two targets");
    Ok((v.pop().expect("two targets"), vc))
}
