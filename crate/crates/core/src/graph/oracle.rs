use super::Graph;
use crate::{Error, Result};
use serde::Serialize;

/// Totals of the two query kinds of the neighbor-query model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct QueryCounts {
    pub degree_queries: u64,
    pub neighbor_queries: u64,
}

impl QueryCounts {
    pub fn total(&self) -> u64 {
        self.degree_queries + self.neighbor_queries
    }
}

/// Query-counting access to a graph. Estimators see the graph only through
/// this handle; one handle belongs to one run.
#[derive(Debug)]
pub struct Oracle<'g> {
    graph: &'g Graph,
    counts: QueryCounts,
}

impl<'g> Oracle<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Oracle {
            graph,
            counts: QueryCounts::default(),
        }
    }

    /// Vertex count; public in the query model and not charged.
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.graph.n() {
            Err(Error::invalid(format!(
                "vertex {v} out of range for n = {}",
                self.graph.n()
            )))
        } else {
            Ok(())
        }
    }

    pub fn degree(&mut self, v: usize) -> Result<usize> {
        self.check(v)?;
        self.counts.degree_queries += 1;
        Ok(self.graph.degree(v))
    }

    /// The `i`-th neighbor of `v` (1-indexed, ascending id order), or `None`
    /// when `i > deg(v)`.
    pub fn neighbor(&mut self, v: usize, i: usize) -> Result<Option<usize>> {
        self.check(v)?;
        if i == 0 {
            return Err(Error::invalid("neighbor index is 1-based"));
        }
        self.counts.neighbor_queries += 1;
        Ok(self.graph.neighbors(v).get(i - 1).map(|&w| w as usize))
    }

    pub fn counts(&self) -> QueryCounts {
        self.counts
    }

    pub fn reset(&mut self) {
        self.counts = QueryCounts::default();
    }
}
