use dpsublinear::avg_degree::{Branch, EstimateReport};
use dpsublinear::matching::SizeEstimate;
use dpsublinear::QueryCounts;
use serde::{Serialize, Serializer};

/// Privacy budget as reported: a number, or the string `"inf"`.
#[derive(Debug, Clone, Copy)]
pub struct Eps(pub f64);

impl Serialize for Eps {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl std::fmt::Display for Eps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GenReport {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub average_degree: f64,
    pub seed: u64,
    pub out: String,
}

#[allow(non_snake_case)]
#[derive(Debug, Serialize)]
pub struct AvgdegReport {
    pub graph: String,
    pub estimate: f64,
    pub raw_estimate: f64,
    pub branch: Branch,
    pub n: usize,
    pub rho: f64,
    pub beta: f64,
    pub eps: Eps,
    pub t: usize,
    pub sample_size: usize,
    pub T: f64,
    pub M: f64,
    pub K: usize,
    pub big_buckets: usize,
    pub merged_size: usize,
    pub degree_queries: u64,
    pub neighbor_queries: u64,
    pub wall_time_ms: f64,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl AvgdegReport {
    pub fn new(graph: String, r: EstimateReport, timing: bool) -> Self {
        let p = r.params;
        AvgdegReport {
            graph,
            estimate: r.estimate,
            raw_estimate: r.raw_estimate,
            branch: r.branch,
            n: p.n,
            rho: p.rho,
            beta: p.beta,
            eps: Eps(p.eps),
            t: p.t,
            sample_size: p.sample_size,
            T: p.big_threshold,
            M: p.noise_bound,
            K: p.merged_cutoff,
            big_buckets: r.big_buckets,
            merged_size: r.merged_size,
            degree_queries: r.queries.degree_queries,
            neighbor_queries: r.queries.neighbor_queries,
            wall_time_ms: if timing { r.wall_time_ms } else { 0.0 },
            seed: r.seed,
            warnings: p.warnings,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SizeReport {
    pub graph: String,
    pub target: &'static str,
    pub n: usize,
    pub rho: f64,
    pub eps: Eps,
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

impl SizeReport {
    pub fn new(graph: String, target: &'static str, n: usize, rho: f64, eps: Option<f64>, r: SizeEstimate, timing: bool) -> Self {
        SizeReport {
            graph,
            target,
            n,
            rho,
            eps: Eps(eps.unwrap_or(f64::INFINITY)),
            raw: r.raw,
            noisy: r.noisy,
            shifted: r.shifted,
            clamped: r.clamped,
            s: r.s,
            matched_in_sample: r.matched_in_sample,
            noise_scale: r.noise_scale,
            queries: r.queries,
            seed: r.seed,
            wall_time_ms: if timing { r.wall_time_ms } else { 0.0 },
        }
    }
}
