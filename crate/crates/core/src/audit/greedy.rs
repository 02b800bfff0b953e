use super::SensitivityReport;
use crate::graph::Graph;
use crate::matching::EdgeRanking;
use crate::noise::derive_seed;
use crate::par::{map_indices, Execution};
use serde::Serialize;
use serde_json::json;

/// Greedy maximal matching scanning the given pair order; pairs that are
/// not edges are skipped.
pub fn greedy_in_order(g: &Graph, order: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut matched = vec![false; g.n()];
    let mut out = Vec::new();
    for &(u, v) in order {
        if g.has_edge(u, v) && !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            out.push((u.min(v), u.max(v)));
        }
    }
    out
}

/// Per-ranking greedy outcomes for every graph on `n` vertices, graphs being
/// bitmasks over the pair list.
struct Table {
    n: usize,
    pairs: Vec<(usize, usize)>,
    /// `sizes[r][mask]`, `covered[r][mask]`.
    sizes: Vec<Vec<u8>>,
    covered: Vec<Vec<u8>>,
    seeds: Vec<u64>,
}

fn pairs_of(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn build_table(n: usize, rankings: usize, seed: u64, exec: Execution) -> Table {
    let pairs = pairs_of(n);
    let graphs = 1usize << pairs.len();
    let seeds: Vec<u64> = (0..rankings as u64).map(|r| derive_seed(seed ^ n as u64, r)).collect();
    let rows: Vec<(Vec<u8>, Vec<u8>)> = map_indices(exec, rankings, |r| {
        let pi = EdgeRanking::new(seeds[r]);
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.sort_by_key(|&k| pi.rank(pairs[k].0, pairs[k].1));
        let mut sizes = vec![0u8; graphs];
        let mut covered = vec![0u8; graphs];
        for mask in 0..graphs {
            let mut free = u32::MAX;
            let mut size = 0u8;
            for &k in &order {
                let (u, v) = pairs[k];
                if mask >> k & 1 == 1 && free >> u & 1 == 1 && free >> v & 1 == 1 {
                    free &= !(1 << u | 1 << v);
                    size += 1;
                }
            }
            sizes[mask] = size;
            covered[mask] = (!free & ((1u32 << n) - 1)).count_ones() as u8;
        }
        (sizes, covered)
    });
    let (sizes, covered) = rows.into_iter().unzip();
    Table { n, pairs, sizes, covered, seeds }
}

fn mask_edges(pairs: &[(usize, usize)], mask: usize) -> Vec<(usize, usize)> {
    (0..pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| pairs[k]).collect()
}

/// Masks of the pairs incident to each vertex.
fn incident_masks(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    (0..n)
        .map(|v| {
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == v || b == v)
                .fold(0, |m, (k, _)| m | 1 << k)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GreedyAudit {
    pub max_n: usize,
    pub ranking_samples: usize,
    pub seed: u64,
    pub edge_neighbors: bool,
    pub node_neighbors: bool,
}

impl GreedyAudit {
    pub fn new(max_n: usize, ranking_samples: usize, seed: u64) -> Self {
        GreedyAudit {
            max_n,
            ranking_samples,
            seed,
            edge_neighbors: true,
            node_neighbors: true,
        }
    }
}

#[derive(Clone, Copy)]
enum Quantity {
    MatchingSize,
    MatchedVertices,
}

struct Worst {
    value: u8,
    witness: Option<(usize, usize, usize, &'static str)>,
    cases: u64,
}

fn sweep(cfg: &GreedyAudit, q: Quantity, exec: Execution) -> (u8, u64, Option<serde_json::Value>) {
    let mut best = (0u8, 0u64, None);
    for n in 2..=cfg.max_n {
        let t = build_table(n, cfg.ranking_samples, cfg.seed, exec);
        let graphs = 1usize << t.pairs.len();
        let inc = incident_masks(n, &t.pairs);
        let per_ranking: Vec<Worst> = map_indices(exec, t.seeds.len(), |r| {
            let vals = match q {
                Quantity::MatchingSize => &t.sizes[r],
                Quantity::MatchedVertices => &t.covered[r],
            };
            let mut w = Worst { value: 0, witness: None, cases: 0 };
            let see = |a: usize, b: usize, kind: &'static str, w: &mut Worst| {
                w.cases += 1;
                let d = vals[a].abs_diff(vals[b]);
                if d > w.value || w.witness.is_none() {
                    w.value = w.value.max(d);
                    w.witness = Some((a, b, r, kind));
                }
            };
            for a in 0..graphs {
                if cfg.edge_neighbors {
                    for k in 0..t.pairs.len() {
                        let b = a ^ 1 << k;
                        if a < b {
                            see(a, b, "edge", &mut w);
                        }
                    }
                }
                if cfg.node_neighbors {
                    for &m in &inc {
                        // Every other assignment of the incident pairs.
                        let rest = a & !m;
                        let mut sub = m;
                        loop {
                            let b = rest | sub;
                            if a < b {
                                see(a, b, "node", &mut w);
                            }
                            if sub == 0 {
                                break;
                            }
                            sub = (sub - 1) & m;
                        }
                    }
                }
            }
            w
        });
        for w in per_ranking {
            best.1 += w.cases;
            if w.value > best.0 || (best.2.is_none() && w.witness.is_some()) {
                best.0 = best.0.max(w.value);
                if let Some((a, b, r, kind)) = w.witness {
                    best.2 = Some(json!({
                        "n": t.n,
                        "kind": kind,
                        "base_edges": mask_edges(&t.pairs, a),
                        "variant_edges": mask_edges(&t.pairs, b),
                        "ranking_seed": t.seeds[r],
                    }));
                }
            }
        }
    }
    best
}

/// Largest change of the greedy matching size between neighboring graphs
/// under a shared ranking, over all graphs with `2 <= n <= max_n`. Bound 1.
pub fn audit_greedy_matching_cgs(cfg: &GreedyAudit, exec: Execution) -> SensitivityReport {
    let (v, cases, witness) = sweep(cfg, Quantity::MatchingSize, exec);
    SensitivityReport::new("greedy matching size", "identity ranking", 1.0, v as f64, cases, witness)
}

/// Largest change of the number of matched vertices, same sweep. Bound 2.
pub fn audit_matched_set_difference(cfg: &GreedyAudit, exec: Execution) -> SensitivityReport {
    let (v, cases, witness) = sweep(cfg, Quantity::MatchedVertices, exec);
    SensitivityReport::new("matched vertex count", "identity ranking", 2.0, v as f64, cases, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Family;
    use crate::matching::{greedy_matching, matched_vertices};

    fn permutations(items: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, head);
                out.push(p);
            }
        }
        out
    }

    #[test]
    fn path_plus_chord_every_order() {
        let a = Family::Path(3).generate(0).unwrap();
        let b = a.with_edge_toggled(0, 2).unwrap();
        let orders = permutations(&pairs_of(3));
        assert_eq!(orders.len(), 6);
        for o in orders {
            let d = greedy_in_order(&a, &o).len().abs_diff(greedy_in_order(&b, &o).len());
            assert!(d <= 1);
        }
    }

    #[test]
    fn empty_vs_one_edge_differs_by_exactly_one() {
        let a = Graph::empty(4);
        let b = a.with_edge_toggled(1, 3).unwrap();
        for o in permutations(&pairs_of(4)).into_iter().step_by(37) {
            assert_eq!(greedy_in_order(&b, &o).len() - greedy_in_order(&a, &o).len(), 1);
        }
    }

    #[test]
    fn table_agrees_with_greedy_matching() {
        let t = build_table(4, 20, 9, Execution::Sequential);
        for (r, &seed) in t.seeds.iter().enumerate() {
            let pi = EdgeRanking::new(seed);
            for mask in 0..1usize << t.pairs.len() {
                let g = Graph::from_edges(4, mask_edges(&t.pairs, mask)).unwrap();
                let m = greedy_matching(&g, &pi);
                assert_eq!(t.sizes[r][mask] as usize, m.len());
                let cov = matched_vertices(4, &m).iter().filter(|&&x| x).count();
                assert_eq!(t.covered[r][mask] as usize, cov);
            }
        }
    }

    #[test]
    fn n4_edge_sweep_hits_one() {
        let mut cfg = GreedyAudit::new(4, 100, 1);
        cfg.node_neighbors = false;
        let r = audit_greedy_matching_cgs(&cfg, Execution::Parallel);
        assert!(r.pass);
        assert_eq!(r.observed_max, 1.0);
        // C(n,2) toggles per graph, each unordered pair counted once.
        let want: u64 = (2..=4u64).map(|n| (1u64 << (n * (n - 1) / 2)) * (n * (n - 1) / 2) / 2 * 100).sum();
        assert_eq!(r.cases_checked, want);
    }

    #[test]
    fn n5_node_sweep_matched_set() {
        let mut cfg = GreedyAudit::new(5, 50, 2);
        cfg.edge_neighbors = false;
        let r = audit_matched_set_difference(&cfg, Execution::Parallel);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.observed_max, 2.0);
    }

    #[test]
    fn single_edge_vs_empty_on_two_vertices() {
        let r = audit_matched_set_difference(&GreedyAudit::new(2, 3, 0), Execution::Sequential);
        assert_eq!(r.observed_max, 2.0);
        assert!(r.pass);
    }
}
