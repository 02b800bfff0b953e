//! Simple undirected graphs, the query-counting oracle facade, generators,
//! neighboring-graph enumeration and edge-list I/O.

mod generate;
mod io;
mod neighbors;
mod oracle;

pub use generate::Family;
pub use io::{load_edge_list, parse_edge_list, save_edge_list, write_edge_list};
pub use neighbors::{enumerate_neighbors, NeighborKind, NeighborPair, NodeRewiring, Witness};
pub use oracle::{Oracle, QueryCounts};

use crate::{Error, Result};

/// Immutable simple undirected graph on vertices `0..n`.
///
/// Adjacency is stored in compressed rows with each row sorted ascending,
/// which fixes the order behind the 1-indexed neighbor query.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .finish()
    }
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicate
    /// edges (in either orientation) and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::invalid(format!("vertex count {n} exceeds u32 range")));
        }
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            pairs.push((u as u32, v as u32));
            pairs.push((v as u32, u as u32));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            let (u, v) = w[0];
            return Err(Error::invalid(format!(
                "duplicate edge ({}, {})",
                u.min(v),
                u.max(v)
            )));
        }
        Ok(Self::from_sorted_arcs(n, &pairs))
    }

    /// `arcs` must be sorted, symmetric and free of loops and duplicates.
    fn from_sorted_arcs(n: usize, arcs: &[(u32, u32)]) -> Graph {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in arcs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.iter().map(|&(_, v)| v).collect();
        Graph { offsets, targets }
    }

    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            targets: Vec::new(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    /// Exact average degree `2m / n` (0 for the vertexless graph).
    pub fn average_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            2.0 * self.m() as f64 / self.n() as f64
        }
    }

    /// The edge-neighbor obtained by adding `(u, v)` if absent, removing it
    /// otherwise.
    pub fn with_edge_toggled(&self, u: usize, v: usize) -> Result<Graph> {
        if u == v || u >= self.n() || v >= self.n() {
            return Err(Error::invalid(format!("cannot toggle pair ({u}, {v})")));
        }
        let present = self.has_edge(u, v);
        let mut edges: Vec<(usize, usize)> = self
            .edges()
            .filter(|&(a, b)| !(present && (a, b) == (u.min(v), u.max(v))))
            .collect();
        if !present {
            edges.push((u, v));
        }
        Graph::from_edges(self.n(), edges)
    }

    /// The node-neighbor in which `v`'s incident edges are replaced by edges
    /// to `new_neighbors`; every other edge is kept.
    pub fn with_neighborhood(&self, v: usize, new_neighbors: &[usize]) -> Result<Graph> {
        if v >= self.n() {
            return Err(Error::invalid(format!("vertex {v} out of range")));
        }
        let edges = self
            .edges()
            .filter(|&(a, b)| a != v && b != v)
            .chain(new_neighbors.iter().map(|&w| (v, w)));
        Graph::from_edges(self.n(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_sorted_symmetric_adjacency() {
        let g = Graph::from_edges(4, [(2, 0), (0, 1), (3, 0)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(2), &[0]);
        assert_eq!(g.m(), 3);
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.m());
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn toggling_and_rewiring() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let h = g.with_edge_toggled(0, 2).unwrap();
        assert_eq!(h.m(), 3);
        let back = h.with_edge_toggled(2, 0).unwrap();
        assert_eq!(back, g);
        let r = g.with_neighborhood(1, &[]).unwrap();
        assert_eq!(r.m(), 0);
        let r = g.with_neighborhood(0, &[2]).unwrap();
        assert!(r.has_edge(0, 2) && !r.has_edge(0, 1) && r.has_edge(1, 2));
    }

    #[test]
    fn average_degree_is_exact() {
        assert_eq!(Graph::empty(0).average_degree(), 0.0);
        let k4 = Family::Complete(4).generate(0).unwrap();
        assert_eq!(k4.average_degree(), 3.0);
    }
}
