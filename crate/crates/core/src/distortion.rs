//! Optimal candidates, distance and ab-distortion, the common-radius sweep
//! for approval voting and the closed-form bounds.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::majority::MajorityMatrix;
use crate::model::{
    approvals_at_radius, consistent_rankings, truthful_approvals, ApprovalProfile, CandidateId,
    ElectionInstance, RankingBallot, RankingProfile, VoterId,
};
use crate::rules::{av_winner, score_spread, Rule, ScoringVector};
use crate::{Error, Rational, Result};

/// A distortion: an exact rational, a floating value for irrational
/// geometry, or +∞.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DistortionValue {
    Exact(Rational),
    Approx(f64),
    Infinite,
}

const EXACT_LIMIT: f64 = 9_007_199_254_740_992.0;

impl DistortionValue {
    pub fn from_integer(v: i64) -> Self {
        DistortionValue::Exact(Rational::from_integer(v))
    }

    /// num/den with a/0 = +∞ for a > 0 and 0/0 = 1; zero means |x| ≤ tol.
    /// Integral sums give an exact fraction.
    pub fn ratio(num: f64, den: f64, tol: f64) -> Self {
        if den.abs() <= tol {
            return if num.abs() <= tol {
                DistortionValue::Exact(Rational::one())
            } else {
                DistortionValue::Infinite
            };
        }
        let integral = |x: f64| x.fract() == 0.0 && x.abs() < EXACT_LIMIT;
        if integral(num) && integral(den) {
            DistortionValue::Exact(Rational::new(num as i64, den as i64))
        } else {
            DistortionValue::Approx(num / den)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            DistortionValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            DistortionValue::Approx(x) => *x,
            DistortionValue::Infinite => f64::INFINITY,
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            DistortionValue::Exact(r) => Some(*r),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, DistortionValue::Infinite)
    }

    /// self ≤ other + tol; exact values compare exactly.
    pub fn within(&self, other: &DistortionValue, tol: f64) -> bool {
        match (self, other) {
            (_, DistortionValue::Infinite) => true,
            (DistortionValue::Infinite, _) => false,
            (DistortionValue::Exact(a), DistortionValue::Exact(b)) => a <= b,
            _ => self.to_f64() <= other.to_f64() + tol,
        }
    }

    /// Decimal rendering; "inf" for +∞.
    pub fn decimal(&self) -> String {
        match self {
            DistortionValue::Infinite => "inf".into(),
            _ => format!("{}", self.to_f64()),
        }
    }

    /// Parses "inf", "a/b", integers and decimals.
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        if t == "inf" {
            return Some(DistortionValue::Infinite);
        }
        if let Some((a, b)) = t.split_once('/') {
            let (a, b): (i64, i64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            return (b != 0).then(|| DistortionValue::Exact(Rational::new(a, b)));
        }
        if let Ok(i) = t.parse::<i64>() {
            return Some(DistortionValue::from_integer(i));
        }
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(DistortionValue::Approx)
    }
}

impl PartialOrd for DistortionValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (DistortionValue::Infinite, DistortionValue::Infinite) => Some(Ordering::Equal),
            (DistortionValue::Infinite, _) => Some(Ordering::Greater),
            (_, DistortionValue::Infinite) => Some(Ordering::Less),
            (DistortionValue::Exact(a), DistortionValue::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for DistortionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistortionValue::Exact(r) => write!(f, "{r}"),
            DistortionValue::Approx(x) => write!(f, "{x}"),
            DistortionValue::Infinite => f.write_str("inf"),
        }
    }
}

/// Σ_i w_i d(i, c).
pub fn distance_sum(instance: &ElectionInstance, c: CandidateId) -> f64 {
    instance
        .voters()
        .map(|v| instance.weight(v) as f64 * instance.distance(v, c))
        .sum()
}

fn sum_tolerance(instance: &ElectionInstance) -> f64 {
    instance.tolerance() * instance.num_voters() as f64
}

/// The candidate minimizing the total distance; near-equal sums are ties,
/// resolved by tie-break order.
pub fn optimal_by_distance(instance: &ElectionInstance) -> (CandidateId, f64) {
    let sums: Vec<f64> = instance
        .candidates()
        .map(|c| distance_sum(instance, c))
        .collect();
    let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = sum_tolerance(instance);
    let best = instance
        .lex()
        .best(instance.candidates().filter(|c| sums[c.0] <= min + tol))
        .unwrap();
    (best, sums[best.0])
}

/// The candidate in the most acceptability balls, ties by tie-break order.
pub fn optimal_by_acceptability(instance: &ElectionInstance) -> Result<(CandidateId, u64)> {
    let counts = truthful_approvals(instance)?.approval_counts();
    let max = *counts.iter().max().unwrap();
    let best = instance
        .lex()
        .best(instance.candidates().filter(|c| counts[c.0] == max))
        .unwrap();
    Ok((best, max))
}

pub fn distance_distortion(instance: &ElectionInstance, winner: CandidateId) -> DistortionValue {
    let (_, opt) = optimal_by_distance(instance);
    DistortionValue::ratio(distance_sum(instance, winner), opt, sum_tolerance(instance))
}

/// (max approvals − approvals of the winner) / n on the given profile.
pub fn ab_ratio_on(profile: &ApprovalProfile, winner: CandidateId) -> Rational {
    let counts = profile.approval_counts();
    let max = *counts.iter().max().unwrap_or(&0);
    let n = profile.num_voters();
    if n == 0 {
        return Rational::zero();
    }
    Rational::new((max - counts[winner.0]) as i64, n as i64)
}

pub fn ab_ratio(instance: &ElectionInstance, winner: CandidateId) -> Result<Rational> {
    Ok(ab_ratio_on(&truthful_approvals(instance)?, winner))
}

pub fn ab_distortion(instance: &ElectionInstance, winner: CandidateId) -> Result<DistortionValue> {
    ab_ratio(instance, winner).map(DistortionValue::Exact)
}

/// Worst ab-distortion over all induced ranking profiles.
#[derive(Clone, Debug, PartialEq)]
pub struct WorstCase {
    pub value: Rational,
    pub winner: CandidateId,
    pub profile: RankingProfile,
    /// Number of profiles evaluated.
    pub profiles: u128,
    /// True when the enumeration was too large and only the canonical
    /// profile was evaluated.
    pub fallback: bool,
}

/// Number of ways to spread `weight` identical voters over `k` options.
pub(crate) fn multiset_count(weight: u64, k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    // C(weight + k − 1, k − 1)
    let mut acc: u128 = 1;
    for i in 1..k as u128 {
        acc = acc.saturating_mul(weight as u128 + i) / i;
    }
    acc
}

/// All distributions of `weight` over `k` options.
pub(crate) fn distributions(weight: u64, k: usize) -> Vec<Vec<u64>> {
    if k == 1 {
        return vec![vec![weight]];
    }
    let mut out = Vec::new();
    for first in (0..=weight).rev() {
        for mut rest in distributions(weight - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Calls `f` on every combination of one choice per slot.
pub(crate) fn for_each_product<T>(slots: &[Vec<T>], mut f: impl FnMut(&[&T])) {
    if slots.iter().any(|s| s.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; slots.len()];
    loop {
        let pick: Vec<&T> = slots.iter().zip(&idx).map(|(s, &i)| &s[i]).collect();
        f(&pick);
        let mut k = slots.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < slots[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub fn worst_ranking_ab_distortion(
    instance: &ElectionInstance,
    rule: &Rule,
    limit: u128,
    allow_fallback: bool,
) -> Result<WorstCase> {
    if !rule.uses_rankings() {
        return Err(Error::Precondition(format!("{rule} does not use rankings")));
    }
    let approvals = truthful_approvals(instance)?;
    let lex = instance.lex();
    let mut total: u128 = 1;
    let mut options = Vec::with_capacity(instance.num_groups());
    let mut enumerable = true;
    for v in instance.voters() {
        match consistent_rankings(instance, v, limit) {
            Ok(rs) => {
                total = total.saturating_mul(multiset_count(instance.weight(v), rs.len()));
                options.push(rs);
            }
            Err(_) => {
                enumerable = false;
                break;
            }
        }
    }
    if !enumerable || total > limit {
        if !allow_fallback {
            return Err(Error::SizeGuard {
                what: "induced ranking profiles".into(),
                count: total,
                limit,
            });
        }
        let profile = crate::model::induced_ranking(instance);
        let winner = rule.apply_ranking(&profile, lex)?.winner;
        return Ok(WorstCase {
            value: ab_ratio_on(&approvals, winner),
            winner,
            profile,
            profiles: 1,
            fallback: true,
        });
    }
    let slots: Vec<Vec<Vec<u64>>> = instance
        .voters()
        .zip(&options)
        .map(|(v, rs)| distributions(instance.weight(v), rs.len()))
        .collect();
    let mut best: Option<WorstCase> = None;
    let mut count = 0u128;
    let mut failure = None;
    for_each_product(&slots, |pick| {
        if failure.is_some() {
            return;
        }
        count += 1;
        let mut ballots = Vec::new();
        for (v, split) in pick.iter().enumerate() {
            for (r, &w) in split.iter().enumerate() {
                if w > 0 {
                    ballots.push(RankingBallot {
                        voter: VoterId(v),
                        weight: w,
                        order: options[v][r].clone(),
                    });
                }
            }
        }
        let profile = RankingProfile::new(instance.m(), ballots)
            .expect("consistent rankings are permutations");
        match rule.apply_ranking(&profile, lex) {
            Ok(out) => {
                let value = ab_ratio_on(&approvals, out.winner);
                if best.as_ref().is_none_or(|b| value > b.value) {
                    best = Some(WorstCase {
                        value,
                        winner: out.winner,
                        profile,
                        profiles: 0,
                        fallback: false,
                    });
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut best = best.expect("at least one profile");
    best.profiles = count;
    Ok(best)
}

/// Sorted voter–candidate distances, merged within tolerance.
pub fn breakpoints(instance: &ElectionInstance) -> Vec<f64> {
    let mut all: Vec<f64> = instance
        .voters()
        .flat_map(|v| instance.distances_from(v).to_vec())
        .collect();
    all.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for d in all {
        match out.last() {
            Some(&last) if d <= last + instance.tolerance() => {}
            _ => out.push(d),
        }
    }
    out
}

/// Breakpoints at which every voter's ball is nonempty.
pub fn feasible_radii(instance: &ElectionInstance) -> Vec<f64> {
    let r_min = instance
        .voters()
        .map(|v| instance.nearest_distance(v))
        .fold(0.0, f64::max);
    breakpoints(instance)
        .into_iter()
        .filter(|&r| r + instance.tolerance() >= r_min)
        .collect()
}

/// Approval voting with one common radius over `[radius, upper)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepEntry {
    pub radius: f64,
    pub upper: Option<f64>,
    pub efficiency: Rational,
    pub winner: CandidateId,
    pub distortion: DistortionValue,
}

/// AV outcome for every interval of common radius on which the approval
/// profile is constant, with the efficiency of the distance-optimal candidate.
pub fn av_distortion_sweep(instance: &ElectionInstance) -> Vec<SweepEntry> {
    let (c_o, _) = optimal_by_distance(instance);
    let radii = feasible_radii(instance);
    radii
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let profile = approvals_at_radius(instance, r).expect("feasible radius");
            let winner = av_winner(&profile, instance.lex()).winner;
            SweepEntry {
                radius: r,
                upper: radii.get(i + 1).copied(),
                efficiency: crate::model::efficiency_fraction(&profile, c_o),
                winner,
                distortion: distance_distortion(instance, winner),
            }
        })
        .collect()
}

pub fn sweep_max(entries: &[SweepEntry]) -> Option<&SweepEntry> {
    entries
        .iter()
        .fold(None, |best: Option<&SweepEntry>, e| match best {
            Some(b) if b.distortion >= e.distortion => Some(b),
            _ => Some(e),
        })
}

/// Worst-case distance distortion of AV on globally consistent p-efficient
/// profiles.
pub fn av_bound(p: Rational) -> DistortionValue {
    let one = Rational::one();
    let quarter = Rational::new(1, 4);
    let half = Rational::new(1, 2);
    if p <= Rational::zero() || p >= one {
        DistortionValue::Infinite
    } else if p <= quarter {
        DistortionValue::Exact((one - p) / p)
    } else if p <= half {
        DistortionValue::from_integer(3)
    } else {
        DistortionValue::Exact((Rational::from_integer(2) - p) / (one - p))
    }
}

/// Each voter approves the distance-optimal candidate and everything it
/// likes at least as much.
pub fn best_case_av_profile(instance: &ElectionInstance) -> ApprovalProfile {
    let (c_o, _) = optimal_by_distance(instance);
    let tol = instance.tolerance();
    let sets = instance
        .voters()
        .map(|v| {
            let limit = instance.distance(v, c_o);
            instance
                .candidates()
                .filter(|&c| instance.distance(v, c) <= limit + tol)
                .collect::<BTreeSet<_>>()
        })
        .collect();
    ApprovalProfile::for_instance(instance, sets).expect("c_o is always approved")
}

/// The smallest feasible common radius at which at least ⌈n/4⌉ voters
/// approve the distance-optimal candidate.
pub fn quarter_radius_profile(instance: &ElectionInstance) -> (f64, ApprovalProfile) {
    let (c_o, _) = optimal_by_distance(instance);
    let need = instance.num_voters().div_ceil(4);
    for r in feasible_radii(instance) {
        let profile = approvals_at_radius(instance, r).expect("feasible radius");
        if profile.approval_count(c_o) >= need {
            return (r, profile);
        }
    }
    unreachable!("the largest breakpoint makes everyone approve everything")
}

/// Upper bounds on ab-distortion.
pub mod bounds {
    use super::*;

    /// Any Condorcet-consistent rule when a Condorcet winner exists.
    pub fn condorcet() -> Rational {
        Rational::new(1, 2)
    }

    /// Ranked Pairs and Schulze with a Smith set of size ℓ.
    pub fn smith(ell: usize) -> Rational {
        if ell <= 1 {
            condorcet()
        } else {
            Rational::new(ell as i64 - 1, ell as i64)
        }
    }

    /// max|s_i − s_j| / (max|s_i − s_j| + min_{i≠j}|s_i − s_j|); 1 for a
    /// constant vector.
    pub fn scoring(s: &ScoringVector) -> Rational {
        let (max, min) = score_spread(s);
        if max.is_zero() {
            Rational::one()
        } else {
            max / (max + min)
        }
    }

    pub fn plurality(m: usize) -> Rational {
        Rational::new(m as i64 - 1, m as i64)
    }

    pub fn stv(m: usize) -> Rational {
        let full = 1i64 << (m - 1);
        Rational::new(full - 1, full)
    }

    /// The bound that applies to `rule` on this majority structure, with a
    /// short name.
    pub fn for_rule(rule: &Rule, majority: &MajorityMatrix) -> (String, Rational) {
        let m = majority.m();
        let condorcet_winner = majority.condorcet_winner().is_some();
        match rule {
            Rule::Plurality => ("plurality (m-1)/m".into(), plurality(m)),
            Rule::Stv => ("stv (2^(m-1)-1)/2^(m-1)".into(), stv(m)),
            Rule::Copeland if condorcet_winner => ("condorcet winner 1/2".into(), condorcet()),
            Rule::Copeland => ("trivial 1".into(), Rational::one()),
            Rule::RankedPairs | Rule::Schulze => {
                let ell = majority.smith_set().len();
                (format!("smith set size {ell}"), smith(ell))
            }
            Rule::Approval => ("truthful approval 0".into(), Rational::zero()),
            _ => {
                let s = rule.scoring_vector(m).unwrap();
                ("scoring spread".into(), scoring(&s))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TieBreakOrder;
    use crate::rules::elect;

    fn c(i: usize) -> CandidateId {
        CandidateId(i)
    }

    fn t1(r: f64) -> ElectionInstance {
        ElectionInstance::on_line(
            &[0.0, 3.0],
            &[(0.0, 1, r), (1.0, 1, r), (3.0, 1, r)],
            TieBreakOrder::identity(2),
        )
        .unwrap()
    }

    fn fig2(n: u64) -> ElectionInstance {
        ElectionInstance::on_line(
            &[0.0, 1.0],
            &[(0.0, n, 1.0)],
            TieBreakOrder::from_indices(&[1, 0]).unwrap(),
        )
        .unwrap()
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(
            DistortionValue::ratio(0.0, 0.0, 1e-9),
            DistortionValue::from_integer(1)
        );
        assert_eq!(
            DistortionValue::ratio(3.0, 0.0, 1e-9),
            DistortionValue::Infinite
        );
        assert_eq!(
            DistortionValue::ratio(5.0, 4.0, 1e-9),
            DistortionValue::Exact(q(5, 4))
        );
        assert!(
            matches!(DistortionValue::ratio(1.5, 4.0, 1e-9), DistortionValue::Approx(x) if x == 0.375)
        );
        assert_eq!(DistortionValue::Exact(q(7, 8)).to_string(), "7/8");
        assert_eq!(DistortionValue::Infinite.to_string(), "inf");
        assert_eq!(DistortionValue::Infinite.decimal(), "inf");
        assert_eq!(
            DistortionValue::parse("49/50"),
            Some(DistortionValue::Exact(q(49, 50)))
        );
        assert_eq!(
            DistortionValue::parse("inf"),
            Some(DistortionValue::Infinite)
        );
        assert!(DistortionValue::Infinite > DistortionValue::Approx(1e300));
        assert!(
            DistortionValue::Exact(q(2, 3)).within(&DistortionValue::Approx(0.6666666666), 1e-9)
        );
    }

    #[test]
    fn optimal_candidates() {
        assert_eq!(optimal_by_distance(&t1(1.0)), (c(0), 4.0));
        let inst =
            ElectionInstance::on_line(&[0.0, 2.0], &[(2.0, 3, 0.0)], TieBreakOrder::identity(2))
                .unwrap();
        assert_eq!(optimal_by_distance(&inst), (c(1), 0.0));
        let single = ElectionInstance::on_line(
            &[1.0],
            &[(0.0, 4, 1.0), (3.0, 2, 2.0)],
            TieBreakOrder::identity(1),
        )
        .unwrap();
        assert_eq!(optimal_by_acceptability(&single).unwrap(), (c(0), 6));
    }

    #[test]
    fn distance_distortion_examples() {
        let inst = t1(1.0);
        assert_eq!(
            distance_distortion(&inst, c(0)),
            DistortionValue::from_integer(1)
        );
        assert_eq!(
            distance_distortion(&inst, c(1)),
            DistortionValue::Exact(q(5, 4))
        );
        assert_eq!(
            distance_distortion(&fig2(3), c(1)),
            DistortionValue::Infinite
        );
        assert_eq!(
            distance_distortion(&fig2(3), c(0)),
            DistortionValue::from_integer(1)
        );
    }

    #[test]
    fn ab_distortion_examples() {
        let inst = t1(1.0);
        assert_eq!(ab_ratio(&inst, c(0)).unwrap(), Rational::zero());
        assert_eq!(ab_ratio(&inst, c(1)).unwrap(), q(1, 3));
    }

    #[test]
    fn t1_sweep() {
        let sweep = av_distortion_sweep(&t1(1.0));
        let radii: Vec<_> = sweep.iter().map(|e| (e.radius, e.upper)).collect();
        assert_eq!(radii, vec![(1.0, Some(2.0)), (2.0, Some(3.0)), (3.0, None)]);
        assert!(sweep.iter().all(|e| e.winner == c(0)));
        assert!(sweep
            .iter()
            .all(|e| e.distortion == DistortionValue::from_integer(1)));
        assert_eq!(
            sweep.iter().map(|e| e.efficiency).collect::<Vec<_>>(),
            vec![q(2, 3), q(2, 3), q(1, 1)]
        );
    }

    #[test]
    fn degenerate_sweep_is_infinite() {
        let sweep = av_distortion_sweep(&fig2(3));
        assert!(!sweep.is_empty());
        assert!(sweep
            .iter()
            .all(|e| e.distortion.is_infinite() || e.winner == c(0)));
        assert!(sweep_max(&sweep).unwrap().distortion.is_infinite());
        // At radius 1 both are approved by everyone and c2 wins the tie.
        let out = elect(&fig2(3), &Rule::Approval).unwrap();
        assert_eq!(out.winner, c(1));
    }

    #[test]
    fn av_bound_values() {
        assert_eq!(av_bound(q(1, 8)), DistortionValue::from_integer(7));
        assert_eq!(av_bound(q(1, 4)), DistortionValue::from_integer(3));
        assert_eq!(av_bound(q(3, 8)), DistortionValue::from_integer(3));
        assert_eq!(av_bound(q(1, 2)), DistortionValue::from_integer(3));
        assert_eq!(av_bound(q(3, 4)), DistortionValue::from_integer(5));
        assert_eq!(av_bound(q(0, 1)), DistortionValue::Infinite);
        assert_eq!(av_bound(q(1, 1)), DistortionValue::Infinite);
        // Both neighbouring formulas agree at the joints.
        assert_eq!(
            (Rational::one() - q(1, 4)) / q(1, 4),
            Rational::from_integer(3)
        );
        assert_eq!(
            (Rational::from_integer(2) - q(1, 2)) / (Rational::one() - q(1, 2)),
            Rational::from_integer(3)
        );
    }

    #[test]
    fn best_case_profile_t1() {
        let p = best_case_av_profile(&t1(1.0));
        let sets: Vec<Vec<usize>> = p
            .ballots()
            .iter()
            .map(|b| b.approved.iter().map(|c| c.0).collect())
            .collect();
        assert_eq!(sets, vec![vec![0], vec![0], vec![0, 1]]);
        assert_eq!(av_winner(&p, &TieBreakOrder::identity(2)).winner, c(0));
    }

    #[test]
    fn quarter_radius_t1() {
        let inst = t1(1.0);
        let (r, p) = quarter_radius_profile(&inst);
        assert_eq!(r, 1.0);
        let w = av_winner(&p, inst.lex()).winner;
        assert_eq!(
            distance_distortion(&inst, w),
            DistortionValue::from_integer(1)
        );
    }

    #[test]
    fn quarter_radius_can_exceed_eleven_thirds() {
        // Seven voters sit on c_o, one voter two units away; c_w lies in
        // between. Every ball must be nonempty, which forces r = 1, where
        // c_w collects all eight approvals against c_o's seven.
        let lex = TieBreakOrder::from_indices(&[1, 0]).unwrap();
        let inst =
            ElectionInstance::on_line(&[0.0, 1.0], &[(0.0, 7, 1.0), (2.0, 1, 1.0)], lex).unwrap();
        let (r, p) = quarter_radius_profile(&inst);
        assert_eq!(r, 1.0);
        let w = av_winner(&p, inst.lex()).winner;
        assert_eq!(w, c(1));
        assert_eq!(
            distance_distortion(&inst, w),
            DistortionValue::from_integer(4)
        );
    }

    #[test]
    fn worst_ranking_enumeration() {
        let lex = TieBreakOrder::identity(2);
        let strict = t1(1.0);
        let worst = worst_ranking_ab_distortion(&strict, &Rule::Plurality, 1000, false).unwrap();
        assert_eq!(worst.profiles, 1);
        assert_eq!(worst.value, Rational::zero());

        // Two voters sit halfway between the candidates; if both put c2 first
        // plurality elects c2, which fewer voters accept.
        let voters = [(-1.0, 2, 1.0), (0.0, 1, 1.0), (1.0, 2, 1.0), (2.0, 2, 0.0)];
        let inst = ElectionInstance::on_line(&[0.0, 2.0], &voters, lex.clone()).unwrap();
        let canonical = elect(&inst, &Rule::Plurality).unwrap().winner;
        assert_eq!(canonical, c(0));
        assert_eq!(ab_ratio(&inst, canonical).unwrap(), Rational::zero());
        let worst = worst_ranking_ab_distortion(&inst, &Rule::Plurality, 1000, false).unwrap();
        assert_eq!(worst.profiles, 3);
        assert_eq!(worst.winner, c(1));
        assert_eq!(worst.value, q(1, 7));

        let single =
            ElectionInstance::on_line(&[0.0], &[(3.0, 2, 3.0)], TieBreakOrder::identity(1))
                .unwrap();
        assert_eq!(
            worst_ranking_ab_distortion(&single, &Rule::Stv, 10, false)
                .unwrap()
                .value,
            Rational::zero()
        );

        let inst = ElectionInstance::on_line(
            &[1.0, 1.0, 1.0],
            &[(0.0, 5, 1.0)],
            TieBreakOrder::identity(3),
        )
        .unwrap();
        assert!(matches!(
            worst_ranking_ab_distortion(&inst, &Rule::Borda, 10, false),
            Err(Error::SizeGuard { .. })
        ));
        assert!(
            worst_ranking_ab_distortion(&inst, &Rule::Borda, 10, true)
                .unwrap()
                .fallback
        );
    }

    #[test]
    fn multiset_helpers() {
        assert_eq!(multiset_count(3, 2), 4);
        assert_eq!(multiset_count(2, 6), 21);
        assert_eq!(
            distributions(2, 2),
            vec![vec![2, 0], vec![1, 1], vec![0, 2]]
        );
        for (w, k) in [(3, 3), (4, 2), (1, 5)] {
            assert_eq!(distributions(w, k).len() as u128, multiset_count(w, k));
        }
        let mut seen = Vec::new();
        for_each_product(&[vec![1, 2], vec![3, 4, 5]], |p| seen.push((*p[0], *p[1])));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], (1, 3));
    }

    #[test]
    fn bound_values() {
        assert_eq!(bounds::plurality(4), q(3, 4));
        assert_eq!(bounds::stv(4), q(7, 8));
        assert_eq!(bounds::smith(1), q(1, 2));
        assert_eq!(bounds::smith(3), q(2, 3));
        assert_eq!(bounds::scoring(&ScoringVector::borda(3)), q(2, 3));
        assert_eq!(bounds::scoring(&ScoringVector::veto(4)), q(1, 1));
        assert_eq!(
            bounds::scoring(&ScoringVector::from_integers(&[5, 5, 5])),
            q(1, 1)
        );
    }
}
