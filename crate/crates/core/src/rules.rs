//! The voting rules, made resolute by the instance's tie-break order.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::majority::{BeatpathStrengths, MajorityMatrix};
use crate::model::{
    induced_ranking, truthful_approvals, ApprovalProfile, CandidateId, ElectionInstance,
    RankingProfile, TieBreakOrder,
};
use crate::{Error, Rational, Result};

/// Points awarded for each position of a ranking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoringVector(Vec<Rational>);

impl ScoringVector {
    pub fn new(values: Vec<Rational>) -> Self {
        ScoringVector(values)
    }

    pub fn from_integers(values: &[i64]) -> Self {
        ScoringVector(values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    pub fn plurality(m: usize) -> Self {
        Self::k_approval(m, 1)
    }

    pub fn veto(m: usize) -> Self {
        Self::k_approval(m, m.saturating_sub(1))
    }

    /// (m−1, m−2, …, 0).
    pub fn borda(m: usize) -> Self {
        Self::from_integers(&(0..m as i64).rev().collect::<Vec<_>>())
    }

    /// k ones followed by zeros.
    pub fn k_approval(m: usize, k: usize) -> Self {
        Self::from_integers(&(0..m).map(|i| i64::from(i < k)).collect::<Vec<_>>())
    }

    /// Comma-separated integers or fractions, e.g. "3,2,1" or "1/2,0".
    pub fn parse(text: &str) -> Result<Self> {
        text.split(',')
            .map(|t| {
                let t = t.trim();
                let bad = || Error::Precondition(format!("invalid score {t:?}"));
                match t.split_once('/') {
                    Some((a, b)) => {
                        let a: i64 = a.trim().parse().map_err(|_| bad())?;
                        let b: i64 = b.trim().parse().map_err(|_| bad())?;
                        if b == 0 {
                            return Err(bad());
                        }
                        Ok(Rational::new(a, b))
                    }
                    None => t
                        .parse::<i64>()
                        .map(Rational::from_integer)
                        .map_err(|_| bad()),
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(ScoringVector)
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for ScoringVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Plurality,
    Veto,
    Borda,
    KApproval(usize),
    Scoring(ScoringVector),
    Copeland,
    RankedPairs,
    Schulze,
    Stv,
    Approval,
}

impl Rule {
    /// Parses names such as "plurality", "k-approval:2", "scoring:3,2,1",
    /// "ranked-pairs", "av".
    pub fn parse(text: &str) -> Result<Rule> {
        let lower = text.trim().to_ascii_lowercase();
        let (head, arg) = match lower.split_once(':') {
            Some((h, a)) => (h.to_string(), Some(a.to_string())),
            None => (lower.clone(), None),
        };
        let rule = match (head.as_str(), arg) {
            ("plurality", None) => Rule::Plurality,
            ("veto", None) => Rule::Veto,
            ("borda", None) => Rule::Borda,
            ("k-approval" | "kapproval", Some(k)) => {
                Rule::KApproval(k.parse().map_err(|_| Error::UnknownRule(text.into()))?)
            }
            ("scoring", Some(s)) => Rule::Scoring(ScoringVector::parse(&s)?),
            ("copeland", None) => Rule::Copeland,
            ("ranked-pairs" | "rankedpairs" | "rp", None) => Rule::RankedPairs,
            ("schulze", None) => Rule::Schulze,
            ("stv", None) => Rule::Stv,
            ("av" | "approval", None) => Rule::Approval,
            _ => return Err(Error::UnknownRule(text.into())),
        };
        Ok(rule)
    }

    pub fn name(&self) -> String {
        match self {
            Rule::Plurality => "plurality".into(),
            Rule::Veto => "veto".into(),
            Rule::Borda => "borda".into(),
            Rule::KApproval(k) => format!("k-approval:{k}"),
            Rule::Scoring(s) => format!("scoring:{s}"),
            Rule::Copeland => "copeland".into(),
            Rule::RankedPairs => "ranked-pairs".into(),
            Rule::Schulze => "schulze".into(),
            Rule::Stv => "stv".into(),
            Rule::Approval => "av".into(),
        }
    }

    pub fn uses_rankings(&self) -> bool {
        !matches!(self, Rule::Approval)
    }

    pub fn is_condorcet_consistent(&self) -> bool {
        matches!(self, Rule::Copeland | Rule::RankedPairs | Rule::Schulze)
    }

    /// The positional vector behind a scoring rule for m candidates.
    pub fn scoring_vector(&self, m: usize) -> Option<ScoringVector> {
        match self {
            Rule::Plurality => Some(ScoringVector::plurality(m)),
            Rule::Veto => Some(ScoringVector::veto(m)),
            Rule::Borda => Some(ScoringVector::borda(m)),
            Rule::KApproval(k) => Some(ScoringVector::k_approval(m, *k)),
            Rule::Scoring(s) => Some(s.clone()),
            _ => None,
        }
    }

    pub fn apply_ranking(
        &self,
        profile: &RankingProfile,
        lex: &TieBreakOrder,
    ) -> Result<RuleOutcome> {
        if let Some(s) = self.scoring_vector(profile.m()) {
            return scoring_winner(profile, &s, lex);
        }
        match self {
            Rule::Copeland => Ok(copeland_winner(profile, lex)),
            Rule::RankedPairs => Ok(ranked_pairs_winner(profile, lex)),
            Rule::Schulze => schulze_winner(profile, lex),
            Rule::Stv => Ok(stv_winner(profile, lex)),
            _ => Err(Error::Precondition(format!(
                "{} needs an approval profile",
                self.name()
            ))),
        }
    }

    pub fn apply_approval(
        &self,
        profile: &ApprovalProfile,
        lex: &TieBreakOrder,
    ) -> Result<RuleOutcome> {
        match self {
            Rule::Approval => Ok(av_winner(profile, lex)),
            _ => Err(Error::Precondition(format!(
                "{} needs a ranking profile",
                self.name()
            ))),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Runs the rule on the instance's canonical rankings, or on its truthful
/// approvals for approval voting.
pub fn elect(instance: &ElectionInstance, rule: &Rule) -> Result<RuleOutcome> {
    if rule.uses_rankings() {
        rule.apply_ranking(&induced_ranking(instance), instance.lex())
    } else {
        rule.apply_approval(&truthful_approvals(instance)?, instance.lex())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StvRound {
    pub scores: Vec<(CandidateId, u64)>,
    /// Candidates sharing the lowest score.
    pub lowest: Vec<CandidateId>,
    pub eliminated: CandidateId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleTrace {
    Scores(Vec<Rational>),
    Copeland(Vec<usize>),
    RankedPairs {
        locked: Vec<(CandidateId, CandidateId, u64)>,
        skipped: Vec<(CandidateId, CandidateId, u64)>,
    },
    Schulze(BeatpathStrengths),
    Stv(Vec<StvRound>),
    Approvals(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleOutcome {
    pub winner: CandidateId,
    /// Co-winners before tie-breaking.
    pub tied_set: BTreeSet<CandidateId>,
    pub trace: RuleTrace,
}

fn argmax_outcome<T: Ord + Clone>(
    values: &[T],
    lex: &TieBreakOrder,
) -> (CandidateId, BTreeSet<CandidateId>) {
    let best = values.iter().max().cloned();
    let tied: BTreeSet<CandidateId> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| Some(*v) == best.as_ref())
        .map(|(i, _)| CandidateId(i))
        .collect();
    (lex.best(tied.iter().copied()).expect("no candidates"), tied)
}

pub fn scoring_winner(
    profile: &RankingProfile,
    s: &ScoringVector,
    lex: &TieBreakOrder,
) -> Result<RuleOutcome> {
    if s.len() != profile.m() {
        return Err(Error::ScoringLength {
            expected: profile.m(),
            found: s.len(),
        });
    }
    let mut scores = vec![Rational::zero(); profile.m()];
    for b in profile.ballots() {
        let w = Rational::from_integer(b.weight as i64);
        for (pos, c) in b.order.iter().enumerate() {
            scores[c.0] += s.values()[pos] * w;
        }
    }
    let (winner, tied_set) = argmax_outcome(&scores, lex);
    Ok(RuleOutcome {
        winner,
        tied_set,
        trace: RuleTrace::Scores(scores),
    })
}

pub fn plurality_winner(profile: &RankingProfile, lex: &TieBreakOrder) -> RuleOutcome {
    scoring_winner(profile, &ScoringVector::plurality(profile.m()), lex).unwrap()
}

pub fn copeland_winner(profile: &RankingProfile, lex: &TieBreakOrder) -> RuleOutcome {
    let mm = MajorityMatrix::from_profile(profile);
    let scores: Vec<usize> = mm.candidates().map(|c| mm.copeland_score(c)).collect();
    let (winner, tied_set) = argmax_outcome(&scores, lex);
    RuleOutcome {
        winner,
        tied_set,
        trace: RuleTrace::Copeland(scores),
    }
}

fn reaches(adj: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        if !std::mem::replace(&mut seen[x], true) {
            stack.extend(adj[x].iter().copied());
        }
    }
    false
}

/// Locks majorities strongest first, skipping any edge that would close a
/// cycle; equal majorities go in tie-break order of source, then target.
pub fn ranked_pairs_winner(profile: &RankingProfile, lex: &TieBreakOrder) -> RuleOutcome {
    let mm = MajorityMatrix::from_profile(profile);
    let m = mm.m();
    let mut pairs: Vec<(CandidateId, CandidateId, u64)> = Vec::new();
    for a in mm.candidates() {
        for b in mm.candidates() {
            if mm.get(a, b) > mm.get(b, a) {
                pairs.push((a, b, mm.get(a, b)));
            }
        }
    }
    pairs.sort_by_key(|&(a, b, w)| (std::cmp::Reverse(w), lex.rank(a), lex.rank(b)));
    let mut adj = vec![Vec::new(); m];
    let mut incoming = vec![false; m];
    let (mut locked, mut skipped) = (Vec::new(), Vec::new());
    for (a, b, w) in pairs {
        if reaches(&adj, b.0, a.0) {
            skipped.push((a, b, w));
        } else {
            adj[a.0].push(b.0);
            incoming[b.0] = true;
            locked.push((a, b, w));
        }
    }
    let tied_set: BTreeSet<CandidateId> =
        (0..m).filter(|&c| !incoming[c]).map(CandidateId).collect();
    RuleOutcome {
        winner: lex
            .best(tied_set.iter().copied())
            .expect("locked graph is acyclic"),
        tied_set,
        trace: RuleTrace::RankedPairs { locked, skipped },
    }
}

pub fn schulze_winner(profile: &RankingProfile, lex: &TieBreakOrder) -> Result<RuleOutcome> {
    let mm = MajorityMatrix::from_profile(profile);
    let p = mm.beatpath_strengths();
    let tied_set: BTreeSet<CandidateId> = mm
        .candidates()
        .filter(|&w| mm.candidates().all(|c| p.get(w, c) >= p.get(c, w)))
        .collect();
    let winner = lex
        .best(tied_set.iter().copied())
        .ok_or_else(|| Error::InternalInconsistency("Schulze winner set is empty".into()))?;
    Ok(RuleOutcome {
        winner,
        tied_set,
        trace: RuleTrace::Schulze(p),
    })
}

/// Repeatedly eliminates the plurality loser among the remaining candidates,
/// the least preferred by tie-break order among equal losers.
pub fn stv_winner(profile: &RankingProfile, lex: &TieBreakOrder) -> RuleOutcome {
    let m = profile.m();
    let mut alive = vec![true; m];
    let mut rounds = Vec::new();
    for _ in 1..m {
        let mut score = vec![0u64; m];
        for b in profile.ballots() {
            if let Some(top) = b.order.iter().find(|c| alive[c.0]) {
                score[top.0] += b.weight;
            }
        }
        let scores: Vec<(CandidateId, u64)> = (0..m)
            .filter(|&c| alive[c])
            .map(|c| (CandidateId(c), score[c]))
            .collect();
        let low = scores.iter().map(|s| s.1).min().unwrap();
        let lowest: Vec<CandidateId> = scores.iter().filter(|s| s.1 == low).map(|s| s.0).collect();
        let eliminated = lex.worst(lowest.iter().copied()).unwrap();
        alive[eliminated.0] = false;
        rounds.push(StvRound {
            scores,
            lowest,
            eliminated,
        });
    }
    let winner = CandidateId(
        alive
            .iter()
            .position(|&a| a)
            .expect("one candidate survives"),
    );
    RuleOutcome {
        winner,
        tied_set: [winner].into_iter().collect(),
        trace: RuleTrace::Stv(rounds),
    }
}

pub fn av_winner(profile: &ApprovalProfile, lex: &TieBreakOrder) -> RuleOutcome {
    let counts = profile.approval_counts();
    let (winner, tied_set) = argmax_outcome(&counts, lex);
    RuleOutcome {
        winner,
        tied_set,
        trace: RuleTrace::Approvals(counts),
    }
}

/// max|s_i − s_j| and min over i ≠ j of |s_i − s_j|.
pub fn score_spread(s: &ScoringVector) -> (Rational, Rational) {
    let v = s.values();
    let mut max = Rational::zero();
    let mut min: Option<Rational> = None;
    for i in 0..v.len() {
        for j in 0..v.len() {
            if i != j {
                let d = (v[i] - v[j]).abs();
                max = max.max(d);
                min = Some(min.map_or(d, |x: Rational| x.min(d)));
            }
        }
    }
    (max, min.unwrap_or_else(Rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ApprovalBallot, VoterId};

    fn c(i: usize) -> CandidateId {
        CandidateId(i)
    }

    fn set(cs: &[usize]) -> BTreeSet<CandidateId> {
        cs.iter().map(|&i| c(i)).collect()
    }

    fn cy3() -> RankingProfile {
        RankingProfile::from_orders(3, &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap()
    }

    fn unanimous(n: usize) -> RankingProfile {
        RankingProfile::from_orders(3, &vec![vec![0, 1, 2]; n]).unwrap()
    }

    #[test]
    fn named_vectors() {
        assert_eq!(
            ScoringVector::plurality(3),
            ScoringVector::from_integers(&[1, 0, 0])
        );
        assert_eq!(
            ScoringVector::veto(3),
            ScoringVector::from_integers(&[1, 1, 0])
        );
        assert_eq!(
            ScoringVector::borda(4),
            ScoringVector::from_integers(&[3, 2, 1, 0])
        );
        assert_eq!(
            ScoringVector::k_approval(4, 2),
            ScoringVector::from_integers(&[1, 1, 0, 0])
        );
        assert_eq!(
            ScoringVector::parse("1/2, 0").unwrap(),
            ScoringVector::new(vec![Rational::new(1, 2), Rational::zero()])
        );
        assert!(ScoringVector::parse("1,x").is_err());
    }

    #[test]
    fn rule_names_round_trip() {
        for rule in [
            Rule::Plurality,
            Rule::Veto,
            Rule::Borda,
            Rule::KApproval(2),
            Rule::Scoring(ScoringVector::from_integers(&[3, 1, 0])),
            Rule::Copeland,
            Rule::RankedPairs,
            Rule::Schulze,
            Rule::Stv,
            Rule::Approval,
        ] {
            assert_eq!(Rule::parse(&rule.name()).unwrap(), rule);
        }
        assert!(matches!(
            Rule::parse("dictator"),
            Err(Error::UnknownRule(_))
        ));
    }

    #[test]
    fn t1_plurality() {
        let p = RankingProfile::from_orders(2, &[vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        let out = plurality_winner(&p, &TieBreakOrder::identity(2));
        assert_eq!(out.winner, c(0));
        assert_eq!(
            out.trace,
            RuleTrace::Scores(vec![Rational::from_integer(2), Rational::from_integer(1)])
        );
    }

    #[test]
    fn scoring_length_checked() {
        let err = scoring_winner(
            &cy3(),
            &ScoringVector::plurality(2),
            &TieBreakOrder::identity(3),
        )
        .unwrap_err();
        assert_eq!(
            err,
            Error::ScoringLength {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn unanimous_profile_everywhere() {
        let lex = TieBreakOrder::from_indices(&[2, 1, 0]).unwrap();
        let p = unanimous(4);
        for rule in [
            Rule::Plurality,
            Rule::Borda,
            Rule::Copeland,
            Rule::RankedPairs,
            Rule::Schulze,
            Rule::Stv,
        ] {
            assert_eq!(rule.apply_ranking(&p, &lex).unwrap().winner, c(0), "{rule}");
        }
        let stv = stv_winner(&p, &lex);
        let RuleTrace::Stv(rounds) = stv.trace else {
            panic!()
        };
        // c2 and c3 both score 0 in round one and c2 ranks below c3.
        assert_eq!(
            rounds.iter().map(|r| r.eliminated).collect::<Vec<_>>(),
            vec![c(1), c(2)]
        );
    }

    #[test]
    fn cycle_ranked_pairs() {
        let out = ranked_pairs_winner(&cy3(), &TieBreakOrder::identity(3));
        assert_eq!(out.winner, c(0));
        let RuleTrace::RankedPairs { locked, skipped } = out.trace else {
            panic!()
        };
        assert_eq!(locked, vec![(c(0), c(1), 2), (c(1), c(2), 2)]);
        assert_eq!(skipped, vec![(c(2), c(0), 2)]);
    }

    #[test]
    fn cycle_schulze() {
        let out = schulze_winner(&cy3(), &TieBreakOrder::identity(3)).unwrap();
        assert_eq!(out.tied_set, set(&[0, 1, 2]));
        assert_eq!(out.winner, c(0));
        let lex = TieBreakOrder::from_indices(&[1, 2, 0]).unwrap();
        assert_eq!(schulze_winner(&cy3(), &lex).unwrap().winner, c(1));
    }

    #[test]
    fn cycle_copeland_tie() {
        let lex = TieBreakOrder::from_indices(&[2, 0, 1]).unwrap();
        let out = copeland_winner(&cy3(), &lex);
        assert_eq!(out.tied_set, set(&[0, 1, 2]));
        assert_eq!(out.winner, c(2));
    }

    #[test]
    fn stv_worked_trace() {
        // c3 at 1 (one voter), c1 at 2 (one voter), c2 at 4 (two voters).
        let orders = vec![vec![2, 0, 1], vec![0, 2, 1], vec![1, 0, 2], vec![1, 0, 2]];
        let p = RankingProfile::from_orders(3, &orders).unwrap();
        let lex = TieBreakOrder::from_indices(&[2, 1, 0]).unwrap();
        let out = stv_winner(&p, &lex);
        assert_eq!(out.winner, c(2));
        let RuleTrace::Stv(rounds) = out.trace else {
            panic!()
        };
        assert_eq!(rounds[0].scores, vec![(c(0), 1), (c(1), 2), (c(2), 1)]);
        assert_eq!(rounds[0].eliminated, c(0));
        assert_eq!(rounds[1].scores, vec![(c(1), 2), (c(2), 2)]);
        assert_eq!(rounds[1].eliminated, c(1));
    }

    #[test]
    fn approval_winner() {
        let ballots = vec![ApprovalBallot {
            voter: VoterId(0),
            weight: 3,
            approved: set(&[0, 1]),
        }];
        let p = ApprovalProfile::new(2, ballots).unwrap();
        let lex = TieBreakOrder::from_indices(&[1, 0]).unwrap();
        let out = av_winner(&p, &lex);
        assert_eq!(out.tied_set, set(&[0, 1]));
        assert_eq!(out.winner, c(1));
    }

    #[test]
    fn single_candidate_rules() {
        let p = RankingProfile::from_orders(1, &[vec![0], vec![0]]).unwrap();
        let lex = TieBreakOrder::identity(1);
        for rule in [
            Rule::Plurality,
            Rule::Veto,
            Rule::Borda,
            Rule::Copeland,
            Rule::RankedPairs,
            Rule::Schulze,
            Rule::Stv,
        ] {
            assert_eq!(rule.apply_ranking(&p, &lex).unwrap().winner, c(0));
        }
    }

    #[test]
    fn spread() {
        let (max, min) = score_spread(&ScoringVector::borda(4));
        assert_eq!(
            (max, min),
            (Rational::from_integer(3), Rational::from_integer(1))
        );
        let (max, min) = score_spread(&ScoringVector::from_integers(&[2, 2, 2]));
        assert_eq!((max, min), (Rational::zero(), Rational::zero()));
    }
}
