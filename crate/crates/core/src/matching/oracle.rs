use super::{EdgeRanking, Rank};
use crate::graph::Oracle;
use crate::{Error, Result};
use std::collections::HashMap;

/// Per-run memo of oracle verdicts and of rank-sorted incident edge lists.
///
/// Verdicts are a pure function of `(graph, π)`, so once set they never
/// change. One cache serves one ranking; it must not be reused across
/// rankings.
#[derive(Debug, Default)]
pub struct OracleCache {
    edge_memo: HashMap<(u32, u32), bool>,
    vc_memo: HashMap<u32, bool>,
    lists: Vec<Vec<(Rank, u32)>>,
    list_of: HashMap<u32, usize>,
}

impl OracleCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn edge_verdict(&self, u: usize, v: usize) -> Option<bool> {
        self.edge_memo.get(&key(u, v)).copied()
    }

    pub fn resolved_edges(&self) -> usize {
        self.edge_memo.len()
    }

    /// Vertices whose incident edges have been collected.
    pub fn explored_vertices(&self) -> usize {
        self.lists.len()
    }

    pub fn clear(&mut self) {
        *self = Self::default();
    }

    /// Index of `w`'s incident list, collecting it through the oracle
    /// (one degree query plus `deg(w)` neighbor queries) on first use.
    fn incident(&mut self, oracle: &mut Oracle<'_>, pi: &EdgeRanking, w: u32) -> Result<usize> {
        if let Some(&i) = self.list_of.get(&w) {
            return Ok(i);
        }
        let deg = oracle.degree(w as usize)?;
        let mut list = Vec::with_capacity(deg);
        for i in 1..=deg {
            let x = oracle.neighbor(w as usize, i)?.expect("index within degree");
            list.push((pi.rank(w as usize, x), x as u32));
        }
        list.sort_unstable();
        self.lists.push(list);
        let idx = self.lists.len() - 1;
        self.list_of.insert(w, idx);
        Ok(idx)
    }
}

#[inline]
fn key(u: usize, v: usize) -> (u32, u32) {
    if u < v {
        (u as u32, v as u32)
    } else {
        (v as u32, u as u32)
    }
}

struct Frame {
    edge: (u32, u32),
    rank: Rank,
    lists: [usize; 2],
    pos: [usize; 2],
}

/// Whether edge `(u, v)` belongs to the greedy maximal matching `M_π`.
///
/// Explores incident edges of strictly smaller rank in increasing rank
/// order, returning `false` at the first one found in the matching. The
/// recursion runs on an explicit stack; ranks strictly decrease along it, so
/// it cannot cycle.
pub fn matching_oracle(
    oracle: &mut Oracle<'_>,
    u: usize,
    v: usize,
    pi: &EdgeRanking,
    cache: &mut OracleCache,
) -> Result<bool> {
    if let Some(b) = cache.edge_verdict(u, v) {
        return Ok(b);
    }
    let first = new_frame(oracle, pi, cache, key(u, v))?;
    let lu = &cache.lists[first.lists[0]];
    if lu.binary_search(&(first.rank, first.edge.1)).is_err() {
        return Err(Error::invalid(format!("({u}, {v}) is not an edge")));
    }
    let mut stack = vec![first];
    while let Some(top) = stack.last_mut() {
        // Smallest-rank unexplored incident edge below the frame's rank.
        let mut next: Option<(Rank, usize, u32)> = None;
        for side in 0..2 {
            let list = &cache.lists[top.lists[side]];
            if let Some(&(r, x)) = list.get(top.pos[side]) {
                if r < top.rank && next.is_none_or(|(best, _, _)| r < best) {
                    next = Some((r, side, x));
                }
            }
        }
        let Some((_, side, x)) = next else {
            cache.edge_memo.insert(top.edge, true);
            stack.pop();
            continue;
        };
        let endpoint = if side == 0 { top.edge.0 } else { top.edge.1 };
        let e = key(endpoint as usize, x as usize);
        match cache.edge_memo.get(&e) {
            Some(true) => {
                let done = top.edge;
                cache.edge_memo.insert(done, false);
                stack.pop();
            }
            Some(false) => top.pos[side] += 1,
            None => {
                let f = new_frame(oracle, pi, cache, e)?;
                stack.push(f);
            }
        }
    }
    Ok(cache.edge_verdict(u, v).expect("resolved"))
}

fn new_frame(oracle: &mut Oracle<'_>, pi: &EdgeRanking, cache: &mut OracleCache, e: (u32, u32)) -> Result<Frame> {
    let a = cache.incident(oracle, pi, e.0)?;
    let b = cache.incident(oracle, pi, e.1)?;
    Ok(Frame {
        edge: e,
        rank: pi.rank(e.0 as usize, e.1 as usize),
        lists: [a, b],
        pos: [0, 0],
    })
}

/// Whether `v` is matched in `M_π` (equivalently, in the greedy vertex
/// cover). Probes incident edges by increasing rank and stops at the first
/// matched one.
pub fn vertex_cover_oracle(
    oracle: &mut Oracle<'_>,
    v: usize,
    pi: &EdgeRanking,
    cache: &mut OracleCache,
) -> Result<bool> {
    if v >= oracle.n() {
        return Err(Error::invalid(format!("vertex {v} out of range for n = {}", oracle.n())));
    }
    if let Some(&b) = cache.vc_memo.get(&(v as u32)) {
        return Ok(b);
    }
    let idx = cache.incident(oracle, pi, v as u32)?;
    let mut covered = false;
    for k in 0..cache.lists[idx].len() {
        let x = cache.lists[idx][k].1 as usize;
        if matching_oracle(oracle, v, x, pi, cache)? {
            covered = true;
            break;
        }
    }
    cache.vc_memo.insert(v as u32, covered);
    Ok(covered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Family, Graph};
    use crate::matching::greedy_matching;

    #[test]
    fn path_takes_the_lower_ranked_edge() {
        let g = Family::Path(3).generate(0).unwrap();
        for seed in 0..20 {
            let pi = EdgeRanking::new(seed);
            let mut h = Oracle::new(&g);
            let mut c = OracleCache::new();
            let a = matching_oracle(&mut h, 0, 1, &pi, &mut c).unwrap();
            let b = matching_oracle(&mut h, 1, 2, &pi, &mut c).unwrap();
            assert_eq!(a, pi.rank(0, 1) < pi.rank(1, 2));
            assert_ne!(a, b);
        }
    }

    #[test]
    fn triangle_has_one_matched_edge() {
        let g = Family::Complete(3).generate(0).unwrap();
        for seed in 0..30 {
            let pi = EdgeRanking::new(seed);
            let mut h = Oracle::new(&g);
            let mut c = OracleCache::new();
            let count = g
                .edges()
                .filter(|&(u, v)| matching_oracle(&mut h, u, v, &pi, &mut c).unwrap())
                .count();
            assert_eq!(count, 1);
        }
    }

    #[test]
    fn agrees_with_offline_greedy_on_long_paths() {
        let g = Family::Path(6).generate(0).unwrap();
        for seed in 0..100 {
            let pi = EdgeRanking::new(seed);
            let offline = greedy_matching(&g, &pi);
            let mut h = Oracle::new(&g);
            let mut c = OracleCache::new();
            for (u, v) in g.edges() {
                assert_eq!(matching_oracle(&mut h, u, v, &pi, &mut c).unwrap(), offline.contains(&(u, v)));
            }
        }
    }

    #[test]
    fn non_edges_are_rejected() {
        let g = Family::Path(3).generate(0).unwrap();
        let mut h = Oracle::new(&g);
        let err = matching_oracle(&mut h, 0, 2, &EdgeRanking::new(0), &mut OracleCache::new());
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn vertex_cover_small_cases() {
        let iso = Graph::empty(3);
        let mut h = Oracle::new(&iso);
        assert!(!vertex_cover_oracle(&mut h, 1, &EdgeRanking::new(0), &mut OracleCache::new()).unwrap());
        let e = Graph::from_edges(2, [(0, 1)]).unwrap();
        let mut h = Oracle::new(&e);
        let mut c = OracleCache::new();
        assert!(vertex_cover_oracle(&mut h, 0, &EdgeRanking::new(0), &mut c).unwrap());
        assert!(vertex_cover_oracle(&mut h, 1, &EdgeRanking::new(0), &mut c).unwrap());
        let star = Family::Star(5).generate(0).unwrap();
        for seed in 0..25 {
            let pi = EdgeRanking::new(seed);
            let mut h = Oracle::new(&star);
            let mut c = OracleCache::new();
            assert!(vertex_cover_oracle(&mut h, 0, &pi, &mut c).unwrap());
            let leaves = (1..5).filter(|&v| vertex_cover_oracle(&mut h, v, &pi, &mut c).unwrap()).count();
            assert_eq!(leaves, 1);
        }
    }

    #[test]
    fn long_path_cover_count() {
        let n = 200_000;
        let g = Family::Path(n).generate(0).unwrap();
        let pi = EdgeRanking::new(1);
        let mut h = Oracle::new(&g);
        let mut c = OracleCache::new();
        let offline = greedy_matching(&g, &pi);
        let covered = (0..n)
            .filter(|&v| vertex_cover_oracle(&mut h, v, &pi, &mut c).unwrap())
            .count();
        assert_eq!(covered, 2 * offline.len());
    }

    #[test]
    fn verdicts_survive_cache_clearing() {
        let g = Family::Gnp { n: 60, p: 0.1 }.generate(2).unwrap();
        let pi = EdgeRanking::new(9);
        let mut h = Oracle::new(&g);
        let mut c = OracleCache::new();
        let first: Vec<bool> = g.edges().map(|(u, v)| matching_oracle(&mut h, u, v, &pi, &mut c).unwrap()).collect();
        let again: Vec<bool> = g.edges().map(|(u, v)| matching_oracle(&mut h, u, v, &pi, &mut c).unwrap()).collect();
        c.clear();
        let reversed: Vec<bool> = {
            let edges: Vec<_> = g.edges().collect();
            let mut out: Vec<bool> = edges.iter().rev().map(|&(u, v)| matching_oracle(&mut h, u, v, &pi, &mut c).unwrap()).collect();
            out.reverse();
            out
        };
        assert_eq!(first, again);
        assert_eq!(first, reversed);
    }
}
