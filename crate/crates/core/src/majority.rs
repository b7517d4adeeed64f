//! Pairwise majorities, the Smith set, beatpaths and the immunity set.

use std::collections::BTreeSet;

use crate::model::{CandidateId, RankingProfile};

/// Entry (a, b) is the weighted number of voters ranking a above b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorityMatrix {
    m: usize,
    n: u64,
    counts: Vec<u64>,
}

impl MajorityMatrix {
    pub fn from_profile(profile: &RankingProfile) -> Self {
        let m = profile.m();
        let mut counts = vec![0u64; m * m];
        for b in profile.ballots() {
            for (i, &a) in b.order.iter().enumerate() {
                for &c in &b.order[i + 1..] {
                    counts[a.0 * m + c.0] += b.weight;
                }
            }
        }
        MajorityMatrix {
            m,
            n: profile.num_voters(),
            counts,
        }
    }

    /// Builds a matrix from raw rows; `n` is the voter count.
    pub fn from_rows(n: u64, rows: &[Vec<u64>]) -> Self {
        let m = rows.len();
        MajorityMatrix {
            m,
            n,
            counts: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn get(&self, a: CandidateId, b: CandidateId) -> u64 {
        self.counts[a.0 * self.m + b.0]
    }

    pub fn candidates(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.m).map(CandidateId)
    }

    /// Strict majority: M(a,b) > n/2.
    pub fn dominates(&self, a: CandidateId, b: CandidateId) -> bool {
        a != b && 2 * self.get(a, b) > self.n
    }

    pub fn weakly_dominates(&self, a: CandidateId, b: CandidateId) -> bool {
        a != b && 2 * self.get(a, b) >= self.n
    }

    pub fn pareto_dominates(&self, a: CandidateId, b: CandidateId) -> bool {
        a != b && self.get(a, b) == self.n
    }

    /// Number of candidates `a` dominates.
    pub fn copeland_score(&self, a: CandidateId) -> usize {
        self.candidates().filter(|&b| self.dominates(a, b)).count()
    }

    pub fn condorcet_winner(&self) -> Option<CandidateId> {
        self.candidates()
            .find(|&a| self.copeland_score(a) == self.m - 1)
    }

    /// The minimal nonempty set whose members all dominate every outsider.
    ///
    /// Every member of a dominant set beats strictly more candidates than any
    /// outsider, so the dominant sets are prefixes of the candidates sorted
    /// by Copeland score, and the shortest dominant prefix is the answer.
    pub fn smith_set(&self) -> BTreeSet<CandidateId> {
        let mut by_score: Vec<CandidateId> = self.candidates().collect();
        by_score.sort_by_key(|&c| (std::cmp::Reverse(self.copeland_score(c)), c));
        for k in 1..=self.m {
            let (inside, outside) = by_score.split_at(k);
            if inside
                .iter()
                .all(|&a| outside.iter().all(|&b| self.dominates(a, b)))
            {
                return inside.iter().copied().collect();
            }
        }
        BTreeSet::new()
    }

    /// Widest paths over strict-domination edges weighted by M.
    pub fn beatpath_strengths(&self) -> BeatpathStrengths {
        let m = self.m;
        let mut p = vec![0u64; m * m];
        for a in self.candidates() {
            for b in self.candidates() {
                if self.dominates(a, b) {
                    p[a.0 * m + b.0] = self.get(a, b);
                }
            }
        }
        for k in 0..m {
            for i in 0..m {
                if i == k {
                    continue;
                }
                for j in 0..m {
                    if j == i || j == k {
                        continue;
                    }
                    let via = p[i * m + k].min(p[k * m + j]);
                    if via > p[i * m + j] {
                        p[i * m + j] = via;
                    }
                }
            }
        }
        BeatpathStrengths { m, p }
    }

    /// Candidates answering every strict defeat with a beatpath back that is
    /// at least as strong.
    pub fn immunity_set(&self) -> BTreeSet<CandidateId> {
        let p = self.beatpath_strengths();
        self.candidates()
            .filter(|&a| {
                self.candidates()
                    .all(|b| !self.dominates(b, a) || p.get(a, b) >= self.get(b, a))
            })
            .collect()
    }
}

/// p[a, b]: the strongest beatpath from a to b, 0 when there is none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeatpathStrengths {
    m: usize,
    p: Vec<u64>,
}

impl BeatpathStrengths {
    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        BeatpathStrengths {
            m: rows.len(),
            p: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, a: CandidateId, b: CandidateId) -> u64 {
        self.p[a.0 * self.m + b.0]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.p.chunks(self.m.max(1)).map(|r| r.to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: usize) -> CandidateId {
        CandidateId(i)
    }

    fn set(cs: &[usize]) -> BTreeSet<CandidateId> {
        cs.iter().map(|&i| c(i)).collect()
    }

    fn cy3() -> MajorityMatrix {
        MajorityMatrix::from_profile(
            &RankingProfile::from_orders(3, &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]])
                .unwrap(),
        )
    }

    fn unanimous(n: usize) -> MajorityMatrix {
        MajorityMatrix::from_profile(
            &RankingProfile::from_orders(3, &vec![vec![0, 1, 2]; n]).unwrap(),
        )
    }

    #[test]
    fn t1_counts() {
        let m = MajorityMatrix::from_profile(
            &RankingProfile::from_orders(2, &[vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap(),
        );
        assert_eq!((m.get(c(0), c(1)), m.get(c(1), c(0))), (2, 1));
        assert!(m.dominates(c(0), c(1)));
        assert!(!m.pareto_dominates(c(0), c(1)));
        assert!(!m.pareto_dominates(c(1), c(0)));
    }

    #[test]
    fn unanimous_counts() {
        let m = unanimous(5);
        assert_eq!(m.get(c(0), c(1)), 5);
        assert_eq!(m.get(c(0), c(2)), 5);
        assert_eq!(m.get(c(1), c(2)), 5);
        assert_eq!(m.get(c(2), c(0)), 0);
        assert!(m.pareto_dominates(c(0), c(1)));
        assert_eq!(m.condorcet_winner(), Some(c(0)));
        assert_eq!(m.smith_set(), set(&[0]));
        assert_eq!(m.immunity_set(), set(&[0]));
        let p = m.beatpath_strengths();
        assert_eq!((p.get(c(0), c(1)), p.get(c(0), c(2))), (5, 5));
        assert_eq!((p.get(c(1), c(0)), p.get(c(2), c(0))), (0, 0));
    }

    #[test]
    fn cycle_structure() {
        let m = cy3();
        assert_eq!(m.get(c(0), c(1)), 2);
        assert_eq!(m.get(c(1), c(2)), 2);
        assert_eq!(m.get(c(2), c(0)), 2);
        assert!(m.dominates(c(2), c(0)));
        for a in 0..3 {
            for b in 0..3 {
                assert!(a == b || !m.pareto_dominates(c(a), c(b)));
            }
        }
        assert_eq!(m.condorcet_winner(), None);
        assert_eq!(m.smith_set(), set(&[0, 1, 2]));
        assert_eq!(m.immunity_set(), set(&[0, 1, 2]));
        let p = m.beatpath_strengths();
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert_eq!(p.get(c(a), c(b)), 2);
                }
            }
        }
    }

    #[test]
    fn even_split_is_weak_only() {
        let m = MajorityMatrix::from_profile(
            &RankingProfile::from_orders(2, &[vec![0, 1], vec![1, 0]]).unwrap(),
        );
        assert!(m.weakly_dominates(c(0), c(1)));
        assert!(!m.dominates(c(0), c(1)));
        let p = m.beatpath_strengths();
        assert_eq!((p.get(c(0), c(1)), p.get(c(1), c(0))), (0, 0));
        assert_eq!(m.smith_set(), set(&[0, 1]));
    }

    #[test]
    fn smith_set_of_top_cycle_over_loser() {
        // c0 > c1 > c2 > c0 cycle, all of them beat c3.
        let orders = vec![vec![0, 1, 2, 3], vec![1, 2, 0, 3], vec![2, 0, 1, 3]];
        let m = MajorityMatrix::from_profile(&RankingProfile::from_orders(4, &orders).unwrap());
        assert_eq!(m.smith_set(), set(&[0, 1, 2]));
    }
}
