use super::EdgeRanking;
use crate::graph::Graph;

/// Greedy maximal matching `M_π`: scan edges by increasing rank and keep an
/// edge whenever both endpoints are still free. Needs the whole graph.
pub fn greedy_matching(g: &Graph, pi: &EdgeRanking) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.sort_by_cached_key(|&(u, v)| pi.rank(u, v));
    let mut matched = vec![false; g.n()];
    let mut out = Vec::new();
    for (u, v) in edges {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            out.push((u, v));
        }
    }
    out
}

/// Vertices covered by a matching, as a membership vector.
pub fn matched_vertices(n: usize, matching: &[(usize, usize)]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &(u, v) in matching {
        m[u] = true;
        m[v] = true;
    }
    m
}
