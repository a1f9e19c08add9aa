//! Cover combinatorics: charts, admissible tuples (repeats allowed), and
//! bundle rank tables.

use alloc::vec;
use alloc::vec::Vec;

pub type ChartId = usize;

/// The nerve of a cover: which sets of charts have nonempty intersection.
/// Admissibility is a property of the *set* of distinct charts in a tuple,
/// and is closed under subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    pub ncharts: usize,
    admissible: Vec<bool>, // indexed by chart-set bitmask
}

impl Nerve {
    /// Every collection of charts intersects.
    pub fn complete(ncharts: usize) -> Self {
        assert!(ncharts > 0 && ncharts <= 16, "chart count out of range");
        Nerve {
            ncharts,
            admissible: vec![true; 1 << ncharts],
        }
    }

    /// Nerve from the list of maximal intersecting chart sets; subsets are
    /// closed over automatically and singletons are always admissible.
    pub fn from_maximal_sets(ncharts: usize, maximal: &[Vec<ChartId>]) -> Self {
        assert!(ncharts > 0 && ncharts <= 16, "chart count out of range");
        let mut admissible = vec![false; 1 << ncharts];
        admissible[0] = true;
        for a in 0..ncharts {
            admissible[1 << a] = true;
        }
        for set in maximal {
            let mut mask = 0usize;
            for &c in set {
                assert!(c < ncharts, "chart id out of range");
                mask |= 1 << c;
            }
            // close downwards
            let mut sub = mask;
            loop {
                admissible[sub] = true;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & mask;
            }
        }
        Nerve {
            ncharts,
            admissible,
        }
    }

    pub fn set_admissible(&self, mask: usize) -> bool {
        self.admissible[mask]
    }

    pub fn tuple_mask(tuple: &[ChartId]) -> usize {
        tuple.iter().fold(0usize, |m, &c| m | (1 << c))
    }

    pub fn tuple_admissible(&self, tuple: &[ChartId]) -> bool {
        !tuple.is_empty() && self.admissible[Self::tuple_mask(tuple)]
    }

    /// All admissible tuples of the given length, repeats allowed, in
    /// lexicographic order.
    pub fn tuples(&self, len: usize) -> Vec<Vec<ChartId>> {
        assert!(len >= 1);
        let mut out = Vec::new();
        let mut cur = vec![0usize; len];
        loop {
            if self.tuple_admissible(&cur) {
                out.push(cur.clone());
            }
            // advance odometer
            let mut i = len;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.ncharts {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Charts whose addition keeps the context admissible.
    pub fn active_charts(&self, context_mask: usize) -> Vec<ChartId> {
        (0..self.ncharts)
            .filter(|&a| self.admissible[context_mask | (1 << a)])
            .collect()
    }
}

/// Per-chart graded rank table: `ranks[chart][level]` is the rank of the
/// level-`level` summand (the bundle in degree −level). Levels are
/// finitely supported and concentrated in nonpositive degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleFamily {
    pub ranks: Vec<Vec<usize>>,
}

impl BundleFamily {
    pub fn new(ranks: Vec<Vec<usize>>) -> Self {
        BundleFamily { ranks }
    }

    /// A single ungraded bundle of rank `rank`, identical on every chart.
    pub fn line(ncharts: usize, rank: usize) -> Self {
        BundleFamily {
            ranks: vec![vec![rank]; ncharts],
        }
    }

    pub fn ncharts(&self) -> usize {
        self.ranks.len()
    }

    pub fn rank(&self, chart: ChartId, level: i64) -> usize {
        if level < 0 {
            return 0;
        }
        self.ranks
            .get(chart)
            .and_then(|r| r.get(level as usize))
            .copied()
            .unwrap_or(0)
    }

    pub fn max_level(&self) -> i64 {
        self.ranks
            .iter()
            .map(|r| r.len() as i64 - 1)
            .max()
            .unwrap_or(-1)
    }

    /// Zero family (no charts carry any rank).
    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|r| r.iter().all(|&x| x == 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_nerve_tuples() {
        let n = Nerve::complete(2);
        assert_eq!(n.tuples(1).len(), 2);
        assert_eq!(n.tuples(2).len(), 4);
        assert_eq!(n.tuples(3).len(), 8);
        assert_eq!(n.active_charts(0b01), vec![0, 1]);
    }

    #[test]
    fn partial_nerve() {
        // Three charts, only {0,1} and {1,2} intersect.
        let n = Nerve::from_maximal_sets(3, &[vec![0, 1], vec![1, 2]]);
        assert!(n.tuple_admissible(&[0, 1]));
        assert!(n.tuple_admissible(&[1, 0, 1]));
        assert!(!n.tuple_admissible(&[0, 2]));
        assert!(!n.tuple_admissible(&[0, 1, 2]));
        assert_eq!(n.active_charts(0b001), vec![0, 1]);
        assert_eq!(n.tuples(2).len(), 3 + 2 * 2);
    }

    #[test]
    fn family_ranks() {
        let f = BundleFamily::new(vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(f.rank(0, 0), 1);
        assert_eq!(f.rank(0, 2), 0);
        assert_eq!(f.rank(0, -1), 0);
        assert_eq!(f.max_level(), 1);
    }
}
