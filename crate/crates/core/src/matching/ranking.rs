use crate::noise::keyed_u64;

/// Rank of a vertex pair: a 64-bit key with the pair itself as tie-break,
/// so ranks are totally ordered and injective over all C(n, 2) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rank {
    key: u64,
    lo: u32,
    hi: u32,
}

/// Random ranking `π` over all unordered vertex pairs.
///
/// A pair's key is a keyed function of the pair, computed on demand. The
/// rank therefore does not depend on query order, is identical on every
/// query, and is the same in any two graphs on the same vertex set, which
/// is what the identity coupling between neighboring graphs needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRanking {
    seed: u64,
}

impl EdgeRanking {
    pub fn new(seed: u64) -> Self {
        EdgeRanking { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn rank(&self, u: usize, v: usize) -> Rank {
        let (lo, hi) = if u < v { (u as u32, v as u32) } else { (v as u32, u as u32) };
        let pair = (lo as u64) << 32 | hi as u64;
        Rank {
            key: keyed_u64(self.seed, pair),
            lo,
            hi,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn symmetric_and_stable() {
        let pi = EdgeRanking::new(3);
        assert_eq!(pi.rank(1, 7), pi.rank(7, 1));
        assert_eq!(pi.rank(1, 7), EdgeRanking::new(3).rank(1, 7));
        assert_ne!(pi.rank(1, 7), EdgeRanking::new(4).rank(1, 7));
    }

    #[test]
    fn injective_over_all_pairs() {
        let pi = EdgeRanking::new(11);
        let n = 300;
        let ranks: HashSet<Rank> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|(u, v)| pi.rank(u, v)).collect();
        assert_eq!(ranks.len(), n * (n - 1) / 2);
    }
}
