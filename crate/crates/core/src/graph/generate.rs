use super::Graph;
use crate::noise::NoiseSource;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::HashMap;

/// Synthetic graph families. Random families are deterministic in the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Gnp { n: usize, p: f64 },
    DRegular { n: usize, d: usize },
    Star(usize),
    Path(usize),
    Complete(usize),
    PerfectMatching(usize),
    Empty(usize),
}

impl Family {
    pub fn n(&self) -> usize {
        match *self {
            Family::Gnp { n, .. } | Family::DRegular { n, .. } => n,
            Family::Star(n)
            | Family::Path(n)
            | Family::Complete(n)
            | Family::PerfectMatching(n)
            | Family::Empty(n) => n,
        }
    }

    /// Maximum matching size, for families where it is known in closed form.
    pub fn matching_number(&self) -> Option<usize> {
        match *self {
            Family::Gnp { .. } | Family::DRegular { .. } => None,
            Family::Star(n) => Some(usize::from(n >= 2)),
            Family::Path(n) | Family::Complete(n) | Family::PerfectMatching(n) => Some(n / 2),
            Family::Empty(_) => Some(0),
        }
    }

    /// Minimum vertex cover size, for families where it is known in closed
    /// form.
    pub fn vertex_cover_number(&self) -> Option<usize> {
        match *self {
            Family::Complete(n) => Some(n.saturating_sub(1)),
            _ => self.matching_number(),
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            Family::Gnp { n, p } => gnp(n, p, seed),
            Family::DRegular { n, d } => d_regular(n, d, seed),
            Family::Star(n) => Graph::from_edges(n, (1..n).map(|v| (0, v))),
            Family::Path(n) => Graph::from_edges(n, (1..n).map(|v| (v - 1, v))),
            Family::Complete(n) => {
                Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
            }
            Family::PerfectMatching(n) => {
                if n % 2 != 0 {
                    return Err(Error::invalid(format!("perfect matching needs even n, got {n}")));
                }
                Graph::from_edges(n, (0..n / 2).map(|i| (2 * i, 2 * i + 1)))
            }
            Family::Empty(n) => Ok(Graph::empty(n)),
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Family::Gnp { n, p } => write!(f, "gnp(n={n}, p={p})"),
            Family::DRegular { n, d } => write!(f, "d_regular(n={n}, d={d})"),
            Family::Star(n) => write!(f, "star({n})"),
            Family::Path(n) => write!(f, "path({n})"),
            Family::Complete(n) => write!(f, "complete({n})"),
            Family::PerfectMatching(n) => write!(f, "perfect_matching({n})"),
            Family::Empty(n) => write!(f, "empty({n})"),
        }
    }
}

/// Erdős–Rényi G(n, p) by geometric skipping over the lower triangle, so the
/// cost is proportional to the number of edges produced.
fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return Family::Complete(n).generate(seed);
    }
    let mut src = NoiseSource::new(seed).child("gnp");
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::new();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r = src.open01();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Graph::from_edges(n, edges)
}

/// Random d-regular graph: configuration-model pairing followed by random
/// edge switches that remove self-loops and parallel edges.
fn d_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if d >= n && !(d == 0 && n == 0) {
        return Err(Error::invalid(format!("degree {d} infeasible for n = {n}")));
    }
    if (n * d) % 2 != 0 {
        return Err(Error::invalid(format!("n * d must be even (n = {n}, d = {d})")));
    }
    if d == 0 {
        return Ok(Graph::empty(n));
    }
    let mut src = NoiseSource::new(seed).child("d_regular");
    let rng = src.rng();
    let mut points: Vec<u32> = (0..n as u32)
        .flat_map(|v| std::iter::repeat_n(v, d))
        .collect();
    points.shuffle(rng);
    let key = |a: u32, b: u32| (a.min(b), a.max(b));
    let mut edges: Vec<(u32, u32)> = points.chunks_exact(2).map(|c| key(c[0], c[1])).collect();
    let mut mult: HashMap<(u32, u32), u32> = HashMap::with_capacity(edges.len());
    for &e in &edges {
        *mult.entry(e).or_default() += 1;
    }
    let is_bad = |e: (u32, u32), mult: &HashMap<(u32, u32), u32>| e.0 == e.1 || mult[&e] > 1;
    let bad: Vec<usize> = (0..edges.len()).filter(|&i| is_bad(edges[i], &mult)).collect();
    let max_attempts = 1000 * edges.len().max(16);
    for i in bad {
        let mut attempts = 0;
        while is_bad(edges[i], &mult) {
            attempts += 1;
            if attempts > max_attempts {
                return Err(Error::invalid(format!(
                    "could not repair pairing for d-regular(n = {n}, d = {d})"
                )));
            }
            let j = rng.random_range(0..edges.len());
            if j == i {
                continue;
            }
            let (a, b) = edges[i];
            let (mut c, mut e) = edges[j];
            if rng.random::<bool>() {
                std::mem::swap(&mut c, &mut e);
            }
            let (x, y) = (key(a, c), key(b, e));
            if a == c || b == e || x == y {
                continue;
            }
            if mult.get(&x).copied().unwrap_or(0) > 0 || mult.get(&y).copied().unwrap_or(0) > 0 {
                continue;
            }
            for old in [edges[i], edges[j]] {
                let m = mult.get_mut(&old).unwrap();
                *m -= 1;
                if *m == 0 {
                    mult.remove(&old);
                }
            }
            *mult.entry(x).or_default() += 1;
            *mult.entry(y).or_default() += 1;
            edges[i] = x;
            edges[j] = y;
        }
    }
    Graph::from_edges(n, edges.into_iter().map(|(a, b)| (a as usize, b as usize)))
}
