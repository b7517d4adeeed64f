//! Election instances and the profiles they induce.

use std::collections::BTreeSet;

use crate::{Error, Rational, Result};

/// Absolute tolerance for every distance comparison.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(pub usize);

impl CandidateId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Index of a voter entry. An entry may stand for several identical voters
/// through its weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VoterId(pub usize);

impl VoterId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Distances between voters and candidates.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricSpace {
    /// One point in R^k per voter entry and per candidate.
    Euclidean {
        voters: Vec<Vec<f64>>,
        candidates: Vec<Vec<f64>>,
    },
    /// Square matrix over voters followed by candidates.
    Explicit {
        voters: usize,
        distances: Vec<Vec<f64>>,
    },
}

/// A point of N ∪ C.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Point {
    Voter(VoterId),
    Candidate(CandidateId),
}

impl MetricSpace {
    pub fn euclidean(voters: Vec<Vec<f64>>, candidates: Vec<Vec<f64>>) -> Self {
        MetricSpace::Euclidean { voters, candidates }
    }

    pub fn explicit(voters: usize, distances: Vec<Vec<f64>>) -> Self {
        MetricSpace::Explicit { voters, distances }
    }

    /// Points on the real line.
    pub fn line(voters: &[f64], candidates: &[f64]) -> Self {
        MetricSpace::Euclidean {
            voters: voters.iter().map(|&x| vec![x]).collect(),
            candidates: candidates.iter().map(|&x| vec![x]).collect(),
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            MetricSpace::Euclidean { voters, candidates } => voters
                .first()
                .or_else(|| candidates.first())
                .map(|p| p.len()),
            MetricSpace::Explicit { .. } => None,
        }
    }

    fn voter_count(&self) -> usize {
        match self {
            MetricSpace::Euclidean { voters, .. } => voters.len(),
            MetricSpace::Explicit { voters, .. } => *voters,
        }
    }

    fn point_count(&self) -> usize {
        match self {
            MetricSpace::Euclidean { voters, candidates } => voters.len() + candidates.len(),
            MetricSpace::Explicit { distances, .. } => distances.len(),
        }
    }

    fn flat(&self, p: Point) -> usize {
        match p {
            Point::Voter(v) => v.0,
            Point::Candidate(c) => self.voter_count() + c.0,
        }
    }

    fn flat_distance(&self, x: usize, y: usize) -> f64 {
        match self {
            MetricSpace::Euclidean { voters, candidates } => {
                let pick = |i: usize| {
                    if i < voters.len() {
                        &voters[i]
                    } else {
                        &candidates[i - voters.len()]
                    }
                };
                euclid(pick(x), pick(y))
            }
            MetricSpace::Explicit { distances, .. } => distances[x][y],
        }
    }

    pub fn distance(&self, a: Point, b: Point) -> f64 {
        self.flat_distance(self.flat(a), self.flat(b))
    }

    /// First triple (x, y, z) of flat point indices with d(x,z) > d(x,y) + d(y,z) + tol.
    pub fn triangle_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let p = self.point_count();
        let d: Vec<Vec<f64>> = (0..p)
            .map(|x| (0..p).map(|y| self.flat_distance(x, y)).collect())
            .collect();
        for x in 0..p {
            for z in 0..p {
                for y in 0..p {
                    if d[x][z] > d[x][y] + d[y][z] + tol {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    fn validate(&self, groups: usize, m: usize, tol: f64) -> Result<()> {
        match self {
            MetricSpace::Euclidean { voters, candidates } => {
                if voters.len() != groups {
                    return Err(Error::Dimension {
                        what: "voter position list".into(),
                        expected: groups,
                        found: voters.len(),
                    });
                }
                if candidates.len() != m {
                    return Err(Error::Dimension {
                        what: "candidate position list".into(),
                        expected: m,
                        found: candidates.len(),
                    });
                }
                let k = self.dimension().unwrap_or(0);
                let all = voters
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (format!("voter {i}"), p))
                    .chain(
                        candidates
                            .iter()
                            .enumerate()
                            .map(|(i, p)| (format!("candidate {i}"), p)),
                    );
                for (what, p) in all {
                    if p.len() != k {
                        return Err(Error::Dimension {
                            what,
                            expected: k,
                            found: p.len(),
                        });
                    }
                    if let Some(&x) = p.iter().find(|x| !x.is_finite()) {
                        return Err(Error::InvalidNumber {
                            what: format!("{what} coordinate"),
                            value: x,
                        });
                    }
                }
                Ok(())
            }
            MetricSpace::Explicit { voters, distances } => {
                let size = groups + m;
                if *voters != groups {
                    return Err(Error::Dimension {
                        what: "explicit metric voter block".into(),
                        expected: groups,
                        found: *voters,
                    });
                }
                if distances.len() != size || distances.iter().any(|r| r.len() != size) {
                    let widths: Vec<String> =
                        distances.iter().map(|r| r.len().to_string()).collect();
                    return Err(Error::MatrixShape {
                        expected: size,
                        found: format!(
                            "{} rows of widths [{}]",
                            distances.len(),
                            widths.join(", ")
                        ),
                    });
                }
                for (i, row) in distances.iter().enumerate() {
                    for (j, &x) in row.iter().enumerate() {
                        if !x.is_finite() || x < 0.0 {
                            return Err(Error::InvalidDistance {
                                row: i,
                                col: j,
                                value: x,
                            });
                        }
                    }
                }
                for (i, row) in distances.iter().enumerate() {
                    if row[i].abs() > tol {
                        return Err(Error::NonzeroDiagonal {
                            index: i,
                            value: row[i],
                        });
                    }
                    for (j, other) in distances.iter().enumerate().skip(i + 1) {
                        if (row[j] - other[i]).abs() > tol {
                            return Err(Error::Asymmetric {
                                row: i,
                                col: j,
                                forward: row[j],
                                backward: other[i],
                            });
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Identical voters sharing a position: weight, acceptability radius and an
/// optional declared ranking that resolves distance ties.
#[derive(Clone, Debug, PartialEq)]
pub struct VoterGroup {
    pub weight: u64,
    pub radius: f64,
    pub ranking: Option<Vec<CandidateId>>,
}

impl VoterGroup {
    pub fn new(weight: u64, radius: f64) -> Self {
        VoterGroup {
            weight,
            radius,
            ranking: None,
        }
    }

    pub fn with_ranking(mut self, ranking: Vec<CandidateId>) -> Self {
        self.ranking = Some(ranking);
        self
    }
}

/// Lexicographic tie-breaking order; earlier is preferred.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TieBreakOrder {
    order: Vec<CandidateId>,
    rank: Vec<usize>,
}

impl TieBreakOrder {
    pub fn new(order: Vec<CandidateId>) -> Result<Self> {
        let m = order.len();
        let rank = permutation_ranks(&order, m).ok_or(Error::NotPermutation {
            what: "tie-break order".into(),
            m,
        })?;
        Ok(TieBreakOrder { order, rank })
    }

    pub fn from_indices(order: &[usize]) -> Result<Self> {
        Self::new(order.iter().map(|&i| CandidateId(i)).collect())
    }

    /// c_1 ≻ c_2 ≻ … ≻ c_m.
    pub fn identity(m: usize) -> Self {
        Self::new((0..m).map(CandidateId).collect()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[CandidateId] {
        &self.order
    }

    /// Position in the order, 0 for the most preferred candidate.
    pub fn rank(&self, c: CandidateId) -> usize {
        self.rank[c.0]
    }

    pub fn prefers(&self, a: CandidateId, b: CandidateId) -> bool {
        self.rank(a) < self.rank(b)
    }

    /// The most preferred candidate of the set.
    pub fn best<I: IntoIterator<Item = CandidateId>>(&self, set: I) -> Option<CandidateId> {
        set.into_iter().min_by_key(|&c| self.rank(c))
    }

    /// The least preferred candidate of the set.
    pub fn worst<I: IntoIterator<Item = CandidateId>>(&self, set: I) -> Option<CandidateId> {
        set.into_iter().max_by_key(|&c| self.rank(c))
    }
}

fn permutation_ranks(order: &[CandidateId], m: usize) -> Option<Vec<usize>> {
    let mut rank = vec![usize::MAX; m];
    for (pos, c) in order.iter().enumerate() {
        if c.0 >= m || rank[c.0] != usize::MAX {
            return None;
        }
        rank[c.0] = pos;
    }
    Some(rank)
}

/// Names "c1" … "cm".
pub fn default_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("c{i}")).collect()
}

/// Voters and candidates in a metric space, with acceptability radii and a
/// tie-breaking order. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ElectionInstance {
    names: Vec<String>,
    groups: Vec<VoterGroup>,
    metric: MetricSpace,
    lex: TieBreakOrder,
    tolerance: f64,
    dist: Vec<f64>,
    total_weight: u64,
}

impl ElectionInstance {
    pub fn new(
        names: Vec<String>,
        metric: MetricSpace,
        groups: Vec<VoterGroup>,
        lex: TieBreakOrder,
    ) -> Result<Self> {
        Self::with_tolerance(names, metric, groups, lex, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(
        names: Vec<String>,
        metric: MetricSpace,
        groups: Vec<VoterGroup>,
        lex: TieBreakOrder,
        tolerance: f64,
    ) -> Result<Self> {
        let m = names.len();
        if groups.is_empty() {
            return Err(Error::NoVoters);
        }
        if m == 0 {
            return Err(Error::NoCandidates);
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::InvalidNumber {
                what: "tolerance".into(),
                value: tolerance,
            });
        }
        if lex.len() != m {
            return Err(Error::NotPermutation {
                what: "tie-break order".into(),
                m,
            });
        }
        metric.validate(groups.len(), m, tolerance)?;
        let mut dist = Vec::with_capacity(groups.len() * m);
        for v in 0..groups.len() {
            for c in 0..m {
                dist.push(
                    metric.distance(Point::Voter(VoterId(v)), Point::Candidate(CandidateId(c))),
                );
            }
        }
        let mut total_weight = 0u64;
        for (v, g) in groups.iter().enumerate() {
            if g.weight == 0 {
                return Err(Error::ZeroWeight { voter: v });
            }
            total_weight += g.weight;
            if !(g.radius.is_finite() && g.radius >= 0.0) {
                return Err(Error::InvalidNumber {
                    what: format!("radius of voter {v}"),
                    value: g.radius,
                });
            }
            let row = &dist[v * m..(v + 1) * m];
            if !row.iter().any(|&d| d <= g.radius + tolerance) {
                return Err(Error::EmptyApproval { voter: v });
            }
            if let Some(ranking) = &g.ranking {
                if permutation_ranks(ranking, m).is_none() {
                    return Err(Error::NotPermutation {
                        what: format!("declared ranking of voter {v}"),
                        m,
                    });
                }
                for (i, &a) in ranking.iter().enumerate() {
                    for &b in &ranking[i + 1..] {
                        if row[a.0] > row[b.0] + tolerance {
                            return Err(Error::InconsistentRanking {
                                voter: v,
                                farther: a.0,
                                closer: b.0,
                            });
                        }
                    }
                }
            }
        }
        Ok(ElectionInstance {
            names,
            groups,
            metric,
            lex,
            tolerance,
            dist,
            total_weight,
        })
    }

    /// Candidates and voter groups on the real line; `voters` holds
    /// (position, weight, radius).
    pub fn on_line(
        candidates: &[f64],
        voters: &[(f64, u64, f64)],
        lex: TieBreakOrder,
    ) -> Result<Self> {
        let metric = MetricSpace::line(&voters.iter().map(|v| v.0).collect::<Vec<_>>(), candidates);
        let groups = voters
            .iter()
            .map(|&(_, w, r)| VoterGroup::new(w, r))
            .collect();
        Self::new(default_names(candidates.len()), metric, groups, lex)
    }

    pub fn m(&self) -> usize {
        self.names.len()
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    /// Total number of voters, counting weights.
    pub fn num_voters(&self) -> u64 {
        self.total_weight
    }

    pub fn groups(&self) -> &[VoterGroup] {
        &self.groups
    }

    pub fn group(&self, v: VoterId) -> &VoterGroup {
        &self.groups[v.0]
    }

    pub fn weight(&self, v: VoterId) -> u64 {
        self.groups[v.0].weight
    }

    pub fn radius(&self, v: VoterId) -> f64 {
        self.groups[v.0].radius
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, c: CandidateId) -> &str {
        &self.names[c.0]
    }

    pub fn candidate(&self, name: &str) -> Option<CandidateId> {
        self.names.iter().position(|n| n == name).map(CandidateId)
    }

    pub fn candidates(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.m()).map(CandidateId)
    }

    pub fn voters(&self) -> impl Iterator<Item = VoterId> {
        (0..self.num_groups()).map(VoterId)
    }

    pub fn metric(&self) -> &MetricSpace {
        &self.metric
    }

    pub fn lex(&self) -> &TieBreakOrder {
        &self.lex
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn distance(&self, v: VoterId, c: CandidateId) -> f64 {
        self.dist[v.0 * self.m() + c.0]
    }

    pub fn distances_from(&self, v: VoterId) -> &[f64] {
        let m = self.m();
        &self.dist[v.0 * m..(v.0 + 1) * m]
    }

    /// Distance from the voter to its nearest candidate.
    pub fn nearest_distance(&self, v: VoterId) -> f64 {
        self.distances_from(v)
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn with_radii(&self, radii: &[f64]) -> Result<Self> {
        if radii.len() != self.num_groups() {
            return Err(Error::Dimension {
                what: "radius list".into(),
                expected: self.num_groups(),
                found: radii.len(),
            });
        }
        let groups = self
            .groups
            .iter()
            .zip(radii)
            .map(|(g, &r)| VoterGroup {
                radius: r,
                ..g.clone()
            })
            .collect();
        Self::with_tolerance(
            self.names.clone(),
            self.metric.clone(),
            groups,
            self.lex.clone(),
            self.tolerance,
        )
    }

    pub fn with_common_radius(&self, r: f64) -> Result<Self> {
        self.with_radii(&vec![r; self.num_groups()])
    }

    pub fn with_lex(&self, lex: TieBreakOrder) -> Result<Self> {
        Self::with_tolerance(
            self.names.clone(),
            self.metric.clone(),
            self.groups.clone(),
            lex,
            self.tolerance,
        )
    }

    /// True when all radii agree within tolerance.
    pub fn has_uniform_radius(&self) -> bool {
        let r0 = self.groups[0].radius;
        self.groups
            .iter()
            .all(|g| (g.radius - r0).abs() <= self.tolerance)
    }
}

/// A strict order over all candidates cast by `weight` identical voters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingBallot {
    pub voter: VoterId,
    pub weight: u64,
    pub order: Vec<CandidateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingProfile {
    m: usize,
    ballots: Vec<RankingBallot>,
}

impl RankingProfile {
    pub fn new(m: usize, ballots: Vec<RankingBallot>) -> Result<Self> {
        for b in &ballots {
            if permutation_ranks(&b.order, m).is_none() || b.order.len() != m {
                return Err(Error::NotPermutation {
                    what: format!("ranking of voter {}", b.voter.0),
                    m,
                });
            }
            if b.weight == 0 {
                return Err(Error::ZeroWeight { voter: b.voter.0 });
            }
        }
        Ok(RankingProfile { m, ballots })
    }

    /// One unit-weight voter per order, given as candidate indices.
    pub fn from_orders(m: usize, orders: &[Vec<usize>]) -> Result<Self> {
        Self::new(
            m,
            orders
                .iter()
                .enumerate()
                .map(|(v, o)| RankingBallot {
                    voter: VoterId(v),
                    weight: 1,
                    order: o.iter().map(|&c| CandidateId(c)).collect(),
                })
                .collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ballots(&self) -> &[RankingBallot] {
        &self.ballots
    }

    pub fn num_voters(&self) -> u64 {
        self.ballots.iter().map(|b| b.weight).sum()
    }

    /// Orders with their total weights, sorted; equal iff the profiles agree
    /// up to a permutation of the voters.
    pub fn multiset(&self) -> Vec<(Vec<CandidateId>, u64)> {
        let mut acc: std::collections::BTreeMap<Vec<CandidateId>, u64> = Default::default();
        for b in &self.ballots {
            *acc.entry(b.order.clone()).or_default() += b.weight;
        }
        acc.into_iter().collect()
    }

    pub fn map_candidates(&self, pi: &[usize]) -> Self {
        RankingProfile {
            m: self.m,
            ballots: self
                .ballots
                .iter()
                .map(|b| RankingBallot {
                    order: b.order.iter().map(|c| CandidateId(pi[c.0])).collect(),
                    ..b.clone()
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApprovalBallot {
    pub voter: VoterId,
    pub weight: u64,
    pub approved: BTreeSet<CandidateId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApprovalProfile {
    m: usize,
    ballots: Vec<ApprovalBallot>,
}

impl ApprovalProfile {
    pub fn new(m: usize, ballots: Vec<ApprovalBallot>) -> Result<Self> {
        for b in &ballots {
            if b.approved.is_empty() {
                return Err(Error::EmptyApproval { voter: b.voter.0 });
            }
            if let Some(c) = b.approved.iter().find(|c| c.0 >= m) {
                return Err(Error::UnknownCandidate { index: c.0, m });
            }
            if b.weight == 0 {
                return Err(Error::ZeroWeight { voter: b.voter.0 });
            }
        }
        Ok(ApprovalProfile { m, ballots })
    }

    /// One ballot per voter entry of an instance, with the instance's weights.
    pub fn for_instance(
        instance: &ElectionInstance,
        sets: Vec<BTreeSet<CandidateId>>,
    ) -> Result<Self> {
        if sets.len() != instance.num_groups() {
            return Err(Error::ProfileMismatch(format!(
                "{} approval sets for {} voter entries",
                sets.len(),
                instance.num_groups()
            )));
        }
        Self::new(
            instance.m(),
            sets.into_iter()
                .enumerate()
                .map(|(v, approved)| ApprovalBallot {
                    voter: VoterId(v),
                    weight: instance.weight(VoterId(v)),
                    approved,
                })
                .collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ballots(&self) -> &[ApprovalBallot] {
        &self.ballots
    }

    pub fn num_voters(&self) -> u64 {
        self.ballots.iter().map(|b| b.weight).sum()
    }

    /// Weighted number of approvals per candidate.
    pub fn approval_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.m];
        for b in &self.ballots {
            for c in &b.approved {
                counts[c.0] += b.weight;
            }
        }
        counts
    }

    pub fn approval_count(&self, c: CandidateId) -> u64 {
        self.ballots
            .iter()
            .filter(|b| b.approved.contains(&c))
            .map(|b| b.weight)
            .sum()
    }
}

/// Candidates grouped by distance from the voter (ties within tolerance),
/// nearest group first, each group in tie-break order.
pub fn distance_tiers(instance: &ElectionInstance, v: VoterId) -> Vec<Vec<CandidateId>> {
    let d = instance.distances_from(v);
    let lex = instance.lex();
    let mut cs: Vec<CandidateId> = instance.candidates().collect();
    cs.sort_by(|a, b| {
        d[a.0]
            .total_cmp(&d[b.0])
            .then(lex.rank(*a).cmp(&lex.rank(*b)))
    });
    let mut tiers: Vec<Vec<CandidateId>> = Vec::new();
    let mut anchor = f64::NEG_INFINITY;
    for c in cs {
        match tiers.last_mut() {
            Some(t) if d[c.0] <= anchor + instance.tolerance() => t.push(c),
            _ => {
                anchor = d[c.0];
                tiers.push(vec![c]);
            }
        }
    }
    for t in &mut tiers {
        t.sort_by_key(|&c| lex.rank(c));
    }
    tiers
}

/// The voter's canonical ranking: its declared ranking if present, otherwise
/// increasing distance with ties in tie-break order.
pub fn canonical_ranking(instance: &ElectionInstance, v: VoterId) -> Vec<CandidateId> {
    match &instance.group(v).ranking {
        Some(r) => r.clone(),
        None => distance_tiers(instance, v).concat(),
    }
}

pub fn induced_ranking(instance: &ElectionInstance) -> RankingProfile {
    RankingProfile {
        m: instance.m(),
        ballots: instance
            .voters()
            .map(|v| RankingBallot {
                voter: v,
                weight: instance.weight(v),
                order: canonical_ranking(instance, v),
            })
            .collect(),
    }
}

pub fn consistent_ranking_count(instance: &ElectionInstance, v: VoterId) -> u128 {
    distance_tiers(instance, v)
        .iter()
        .map(|t| factorial(t.len()))
        .fold(1u128, |a, b| a.saturating_mul(b))
}

pub(crate) fn factorial(k: usize) -> u128 {
    (1..=k as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

/// Every ranking of the voter that never puts a strictly farther candidate
/// before a strictly closer one.
pub fn consistent_rankings(
    instance: &ElectionInstance,
    v: VoterId,
    limit: u128,
) -> Result<Vec<Vec<CandidateId>>> {
    let count = consistent_ranking_count(instance, v);
    if count > limit {
        return Err(Error::SizeGuard {
            what: format!("consistent rankings of voter {}", v.0),
            count,
            limit,
        });
    }
    let mut out: Vec<Vec<CandidateId>> = vec![Vec::new()];
    for tier in distance_tiers(instance, v) {
        let perms = permutations(&tier);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |p| {
                    let mut r = prefix.clone();
                    r.extend_from_slice(p);
                    r
                })
            })
            .collect();
    }
    Ok(out)
}

/// All permutations of `items`, in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Candidates within distance `r` of the voter, boundary included.
pub fn ball(instance: &ElectionInstance, v: VoterId, r: f64) -> BTreeSet<CandidateId> {
    let tol = instance.tolerance();
    instance
        .candidates()
        .filter(|&c| instance.distance(v, c) <= r + tol)
        .collect()
}

fn approvals_with(
    instance: &ElectionInstance,
    radius: impl Fn(VoterId) -> f64,
) -> Result<ApprovalProfile> {
    let mut ballots = Vec::with_capacity(instance.num_groups());
    for v in instance.voters() {
        let approved = ball(instance, v, radius(v));
        if approved.is_empty() {
            return Err(Error::EmptyApproval { voter: v.0 });
        }
        ballots.push(ApprovalBallot {
            voter: v,
            weight: instance.weight(v),
            approved,
        });
    }
    Ok(ApprovalProfile {
        m: instance.m(),
        ballots,
    })
}

/// Every voter approves exactly its acceptability ball.
pub fn truthful_approvals(instance: &ElectionInstance) -> Result<ApprovalProfile> {
    approvals_with(instance, |v| instance.radius(v))
}

/// Every voter approves the ball of the common radius `r`.
pub fn approvals_at_radius(instance: &ElectionInstance, r: f64) -> Result<ApprovalProfile> {
    approvals_with(instance, |_| r)
}

/// Each approval set contains every candidate at least as close as one of
/// its members.
pub fn is_locally_consistent(instance: &ElectionInstance, profile: &ApprovalProfile) -> bool {
    profile.ballots().iter().all(|b| {
        let d = instance.distances_from(b.voter);
        let far = b
            .approved
            .iter()
            .map(|c| d[c.0])
            .fold(f64::NEG_INFINITY, f64::max);
        instance
            .candidates()
            .all(|c| b.approved.contains(&c) || d[c.0] > far)
    })
}

/// Whenever some voter approves a candidate at distance x, every voter
/// approves every candidate within x of itself.
pub fn is_globally_consistent(instance: &ElectionInstance, profile: &ApprovalProfile) -> bool {
    let mut max_approved = f64::NEG_INFINITY;
    let mut min_rejected = f64::INFINITY;
    for b in profile.ballots() {
        let d = instance.distances_from(b.voter);
        for c in instance.candidates() {
            if b.approved.contains(&c) {
                max_approved = max_approved.max(d[c.0]);
            } else {
                min_rejected = min_rejected.min(d[c.0]);
            }
        }
    }
    min_rejected > max_approved
}

/// Fraction of voters approving `c`.
pub fn efficiency_fraction(profile: &ApprovalProfile, c: CandidateId) -> Rational {
    let n = profile.num_voters();
    if n == 0 {
        return Rational::from_integer(0);
    }
    Rational::new(profile.approval_count(c) as i64, n as i64)
}

pub fn approver_set(profile: &ApprovalProfile, c: CandidateId) -> BTreeSet<VoterId> {
    profile
        .ballots()
        .iter()
        .filter(|b| b.approved.contains(&c))
        .map(|b| b.voter)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(cs: &[usize]) -> BTreeSet<CandidateId> {
        cs.iter().map(|&c| CandidateId(c)).collect()
    }

    fn ids(cs: &[usize]) -> Vec<CandidateId> {
        cs.iter().map(|&c| CandidateId(c)).collect()
    }

    fn t1(radii: [f64; 3]) -> ElectionInstance {
        ElectionInstance::on_line(
            &[0.0, 3.0],
            &[(0.0, 1, radii[0]), (1.0, 1, radii[1]), (3.0, 1, radii[2])],
            TieBreakOrder::identity(2),
        )
        .unwrap()
    }

    fn with_sets(inst: &ElectionInstance, sets: &[&[usize]]) -> ApprovalProfile {
        ApprovalProfile::for_instance(inst, sets.iter().map(|s| set(s)).collect()).unwrap()
    }

    #[test]
    fn t1_rankings() {
        let p = induced_ranking(&t1([3.0; 3]));
        let orders: Vec<_> = p.ballots().iter().map(|b| b.order.clone()).collect();
        assert_eq!(orders, vec![ids(&[0, 1]), ids(&[0, 1]), ids(&[1, 0])]);
    }

    #[test]
    fn single_candidate_ranking() {
        let inst = ElectionInstance::on_line(
            &[5.0],
            &[(0.0, 2, 5.0), (9.0, 1, 4.0)],
            TieBreakOrder::identity(1),
        )
        .unwrap();
        for b in induced_ranking(&inst).ballots() {
            assert_eq!(b.order, ids(&[0]));
        }
    }

    #[test]
    fn equidistant_tie_follows_lex() {
        let lex = TieBreakOrder::from_indices(&[1, 0]).unwrap();
        let inst = ElectionInstance::on_line(&[-1.0, 1.0], &[(0.0, 1, 1.0)], lex).unwrap();
        assert_eq!(induced_ranking(&inst).ballots()[0].order, ids(&[1, 0]));
    }

    #[test]
    fn declared_ranking_overrides_tie_break() {
        let metric = MetricSpace::line(&[0.0], &[-1.0, 1.0]);
        let groups = vec![VoterGroup::new(1, 1.0).with_ranking(ids(&[0, 1]))];
        let lex = TieBreakOrder::from_indices(&[1, 0]).unwrap();
        let inst = ElectionInstance::new(default_names(2), metric, groups, lex).unwrap();
        assert_eq!(induced_ranking(&inst).ballots()[0].order, ids(&[0, 1]));
    }

    #[test]
    fn inconsistent_declared_ranking_rejected() {
        let metric = MetricSpace::line(&[0.0], &[0.0, 1.0]);
        let groups = vec![VoterGroup::new(1, 1.0).with_ranking(ids(&[1, 0]))];
        let err =
            ElectionInstance::new(default_names(2), metric, groups, TieBreakOrder::identity(2))
                .unwrap_err();
        assert_eq!(
            err,
            Error::InconsistentRanking {
                voter: 0,
                farther: 1,
                closer: 0
            }
        );
    }

    #[test]
    fn consistent_ranking_counts() {
        let inst =
            ElectionInstance::on_line(&[-1.0, 1.0], &[(0.0, 1, 1.0)], TieBreakOrder::identity(2))
                .unwrap();
        let rs = consistent_rankings(&inst, VoterId(0), 100).unwrap();
        assert_eq!(rs, vec![ids(&[0, 1]), ids(&[1, 0])]);

        let inst = ElectionInstance::on_line(
            &[0.0, 1.0, 3.0],
            &[(0.0, 1, 1.0)],
            TieBreakOrder::identity(3),
        )
        .unwrap();
        assert_eq!(
            consistent_rankings(&inst, VoterId(0), 100).unwrap().len(),
            1
        );

        let inst = ElectionInstance::on_line(
            &[2.0, 2.0, 2.0],
            &[(0.0, 1, 2.0)],
            TieBreakOrder::identity(3),
        )
        .unwrap();
        assert_eq!(
            consistent_rankings(&inst, VoterId(0), 100).unwrap().len(),
            6
        );
        assert!(matches!(
            consistent_rankings(&inst, VoterId(0), 5),
            Err(Error::SizeGuard { count: 6, .. })
        ));
    }

    #[test]
    fn truthful_approval_examples() {
        let p = truthful_approvals(&t1([1.0; 3])).unwrap();
        let sets: Vec<_> = p.ballots().iter().map(|b| b.approved.clone()).collect();
        assert_eq!(sets, vec![set(&[0]), set(&[0]), set(&[1])]);

        let p = truthful_approvals(&t1([3.0; 3])).unwrap();
        assert!(p.ballots().iter().all(|b| b.approved == set(&[0, 1])));

        let inst = ElectionInstance::on_line(
            &[0.0, 3.0],
            &[(0.0, 1, 0.0), (3.0, 1, 0.0)],
            TieBreakOrder::identity(2),
        )
        .unwrap();
        let p = truthful_approvals(&inst).unwrap();
        assert_eq!(p.ballots()[0].approved, set(&[0]));
        assert_eq!(p.ballots()[1].approved, set(&[1]));
    }

    #[test]
    fn boundary_candidate_is_approved() {
        let inst = ElectionInstance::on_line(
            &[0.0, 1.0],
            &[(0.0, 1, 1.0 - 1e-12)],
            TieBreakOrder::identity(2),
        )
        .unwrap();
        assert_eq!(
            truthful_approvals(&inst).unwrap().ballots()[0].approved,
            set(&[0, 1])
        );
    }

    #[test]
    fn approvals_at_common_radius() {
        let inst = t1([3.0; 3]);
        let p = approvals_at_radius(&inst, 3.0).unwrap();
        assert!(p.ballots().iter().all(|b| b.approved == set(&[0, 1])));
        assert_eq!(
            approvals_at_radius(&inst, 0.0),
            Err(Error::EmptyApproval { voter: 1 })
        );
        assert_eq!(
            approvals_at_radius(&inst, 1.0).unwrap(),
            truthful_approvals(&t1([1.0; 3])).unwrap()
        );
    }

    #[test]
    fn empty_ball_rejected_at_construction() {
        let err =
            ElectionInstance::on_line(&[0.0, 3.0], &[(1.0, 1, 0.5)], TieBreakOrder::identity(2))
                .unwrap_err();
        assert_eq!(err, Error::EmptyApproval { voter: 0 });
    }

    #[test]
    fn local_consistency_examples() {
        let inst = t1([3.0; 3]);
        assert!(is_locally_consistent(
            &inst,
            &approvals_at_radius(&inst, 2.0).unwrap()
        ));
        assert!(!is_locally_consistent(
            &inst,
            &with_sets(&inst, &[&[1], &[0], &[1]])
        ));
        assert!(is_locally_consistent(
            &inst,
            &with_sets(&inst, &[&[0], &[0], &[1]])
        ));
    }

    #[test]
    fn global_consistency_examples() {
        let inst = t1([3.0; 3]);
        for r in [1.0, 2.0, 3.0, 7.5] {
            assert!(is_globally_consistent(
                &inst,
                &approvals_at_radius(&inst, r).unwrap()
            ));
        }
        let p = truthful_approvals(&t1([3.0, 3.0, 0.0])).unwrap();
        assert!(!is_globally_consistent(&inst, &p));
        // Same verdict by the defining quantifier.
        let violated = p.ballots().iter().any(|bi| {
            bi.approved.iter().any(|&a| {
                p.ballots().iter().any(|bj| {
                    inst.candidates().any(|c| {
                        inst.distance(bj.voter, c) <= inst.distance(bi.voter, a)
                            && !bj.approved.contains(&c)
                    })
                })
            })
        });
        assert!(violated);

        let single =
            ElectionInstance::on_line(&[0.0, 3.0], &[(1.0, 1, 2.0)], TieBreakOrder::identity(2))
                .unwrap();
        let p = with_sets(&single, &[&[0]]);
        assert!(is_locally_consistent(&single, &p));
        assert!(is_globally_consistent(&single, &p));
    }

    #[test]
    fn efficiency_and_approvers() {
        let p = truthful_approvals(&t1([1.0; 3])).unwrap();
        assert_eq!(efficiency_fraction(&p, CandidateId(0)), Rational::new(2, 3));
        assert_eq!(
            approver_set(&p, CandidateId(0)),
            [VoterId(0), VoterId(1)].into_iter().collect()
        );

        let inst = t1([3.0; 3]);
        let all = approvals_at_radius(&inst, 3.0).unwrap();
        assert_eq!(
            efficiency_fraction(&all, CandidateId(1)),
            Rational::from_integer(1)
        );
        assert_eq!(approver_set(&all, CandidateId(1)).len(), 3);

        let none = with_sets(&inst, &[&[0], &[0], &[0]]);
        assert_eq!(
            efficiency_fraction(&none, CandidateId(1)),
            Rational::from_integer(0)
        );
        assert!(approver_set(&none, CandidateId(1)).is_empty());
    }

    #[test]
    fn weights_count_as_voters() {
        let inst = ElectionInstance::on_line(
            &[0.0, 3.0],
            &[(0.0, 5, 1.0), (3.0, 2, 1.0)],
            TieBreakOrder::identity(2),
        )
        .unwrap();
        assert_eq!(inst.num_voters(), 7);
        let p = truthful_approvals(&inst).unwrap();
        assert_eq!(p.approval_counts(), vec![5, 2]);
        assert_eq!(efficiency_fraction(&p, CandidateId(0)), Rational::new(5, 7));
    }

    #[test]
    fn explicit_metric_validation() {
        let ok = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        let inst = ElectionInstance::new(
            default_names(2),
            MetricSpace::explicit(1, ok),
            vec![VoterGroup::new(1, 1.0)],
            TieBreakOrder::identity(2),
        )
        .unwrap();
        assert_eq!(inst.distance(VoterId(0), CandidateId(1)), 2.0);
        assert_eq!(inst.metric().triangle_violation(1e-9), None);

        let asym = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.5, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        let err = ElectionInstance::new(
            default_names(2),
            MetricSpace::explicit(1, asym),
            vec![VoterGroup::new(1, 1.0)],
            TieBreakOrder::identity(2),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Asymmetric { row: 0, col: 1, .. }));

        let bad_triangle = vec![
            vec![0.0, 1.0, 5.0],
            vec![1.0, 0.0, 1.0],
            vec![5.0, 1.0, 0.0],
        ];
        let inst = ElectionInstance::new(
            default_names(2),
            MetricSpace::explicit(1, bad_triangle),
            vec![VoterGroup::new(1, 1.0)],
            TieBreakOrder::identity(2),
        )
        .unwrap();
        assert!(inst.metric().triangle_violation(1e-9).is_some());
    }

    #[test]
    fn degenerate_instances_rejected() {
        assert_eq!(
            ElectionInstance::on_line(&[0.0], &[], TieBreakOrder::identity(1)),
            Err(Error::NoVoters)
        );
        assert_eq!(
            ElectionInstance::on_line(&[], &[(0.0, 1, 1.0)], TieBreakOrder::identity(0)),
            Err(Error::NoCandidates)
        );
        assert!(TieBreakOrder::from_indices(&[0, 0]).is_err());
    }
}
