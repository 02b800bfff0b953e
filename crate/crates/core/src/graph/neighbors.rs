use super::Graph;
use crate::noise::NoiseSource;
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborKind {
    Edge,
    Node,
}

/// What differs between the two graphs of a [`NeighborPair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Edge(usize, usize),
    Vertex(usize),
}

#[derive(Debug, Clone)]
pub struct NeighborPair<'a> {
    pub base: &'a Graph,
    pub variant: Graph,
    pub kind: NeighborKind,
    pub witness: Witness,
}

/// Controls node-neighbor enumeration: every incident-edge subset is tried
/// while `n <= exhaustive_max_n`, otherwise `samples_per_vertex` seeded
/// random neighborhoods per vertex.
#[derive(Debug, Clone, Copy)]
pub struct NodeRewiring {
    pub exhaustive_max_n: usize,
    pub samples_per_vertex: usize,
    pub seed: u64,
}

impl Default for NodeRewiring {
    fn default() -> Self {
        NodeRewiring {
            exhaustive_max_n: 6,
            samples_per_vertex: 100,
            seed: 0,
        }
    }
}

/// Lazily yields the neighbors of `g` of the requested kind.
///
/// Edge kind toggles each of the C(n, 2) pairs once. Node kind replaces the
/// neighborhood of one vertex at a time; the unchanged neighborhood is
/// skipped.
pub fn enumerate_neighbors<'a>(
    g: &'a Graph,
    kind: NeighborKind,
    rewiring: NodeRewiring,
) -> Box<dyn Iterator<Item = NeighborPair<'a>> + 'a> {
    let n = g.n();
    match kind {
        NeighborKind::Edge => Box::new((0..n).flat_map(move |u| {
            (u + 1..n).map(move |v| NeighborPair {
                base: g,
                variant: g.with_edge_toggled(u, v).expect("pair in range"),
                kind,
                witness: Witness::Edge(u, v),
            })
        })),
        NeighborKind::Node => Box::new((0..n).flat_map(move |v| {
            let others: Vec<usize> = (0..n).filter(|&w| w != v).collect();
            let current: Vec<usize> = g.neighbors(v).iter().map(|&w| w as usize).collect();
            let subsets: Vec<Vec<usize>> = if n <= rewiring.exhaustive_max_n {
                (0u64..1 << others.len())
                    .map(|mask| subset(&others, mask))
                    .collect()
            } else {
                let mut src = NoiseSource::new(rewiring.seed).child(&format!("rewire-{v}"));
                (0..rewiring.samples_per_vertex)
                    .map(|_| {
                        others
                            .iter()
                            .copied()
                            .filter(|_| src.rng().random::<bool>())
                            .collect()
                    })
                    .collect()
            };
            subsets
                .into_iter()
                .filter(move |s| *s != current)
                .map(move |s| NeighborPair {
                    base: g,
                    variant: g.with_neighborhood(v, &s).expect("vertex in range"),
                    kind,
                    witness: Witness::Vertex(v),
                })
        })),
    }
}

fn subset(items: &[usize], mask: u64) -> Vec<usize> {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &w)| w)
        .collect()
}
