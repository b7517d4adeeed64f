//! Parametric hard instances, each with a certificate of the outcome it
//! forces.

use std::fmt;

use num_traits::{One, Zero};

use crate::distortion::{
    ab_distortion, av_bound, bounds, distance_distortion, optimal_by_acceptability,
    optimal_by_distance, DistortionValue,
};
use crate::majority::MajorityMatrix;
use crate::model::{
    default_names, induced_ranking, CandidateId, ElectionInstance, MetricSpace, TieBreakOrder,
    VoterGroup,
};
use crate::rules::{elect, Rule, ScoringVector};
use crate::{Error, Rational, Result};

pub mod simplex;

pub use simplex::{simplex, SimplexGeometry};

/// Default ε for layouts whose bound is only reached in the limit.
pub const DEFAULT_EPS: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Distance distortion against the distance-optimal candidate.
    Distance,
    /// Ab-distortion against the acceptability-optimal candidate.
    Ab,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Distance => "distance",
            Measure::Ab => "ab",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "distance" => Some(Measure::Distance),
            "ab" => Some(Measure::Ab),
            _ => None,
        }
    }
}

/// What a generated instance forces: the winner of `rule` (or a fixed
/// candidate when no rule is named), the optimal candidate under `measure`
/// and the resulting distortion.
#[derive(Clone, Debug, PartialEq)]
pub struct HardInstanceCertificate {
    pub family: String,
    pub rule: Option<Rule>,
    pub winner: CandidateId,
    pub optimal: CandidateId,
    pub measure: Measure,
    /// Value at the generated parameters.
    pub expected: DistortionValue,
    /// Value in the limit ε → 0 (equal to `expected` for exact layouts).
    pub limit: DistortionValue,
    /// 0 for exact comparison.
    pub tolerance: f64,
    pub smith_set_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateCheck {
    pub winner: CandidateId,
    pub optimal: CandidateId,
    pub achieved: DistortionValue,
    pub failures: Vec<String>,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CertificateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "pass (achieved {})", self.achieved)
        } else {
            write!(f, "fail: {}", self.failures.join("; "))
        }
    }
}

impl HardInstanceCertificate {
    pub fn verify(&self, instance: &ElectionInstance) -> Result<CertificateCheck> {
        let mut failures = Vec::new();
        let winner = match &self.rule {
            Some(rule) => elect(instance, rule)?.winner,
            None => self.winner,
        };
        if winner != self.winner {
            failures.push(format!(
                "winner {} instead of {}",
                instance.name(winner),
                instance.name(self.winner)
            ));
        }
        let (optimal, achieved) = match self.measure {
            Measure::Distance => (
                optimal_by_distance(instance).0,
                distance_distortion(instance, winner),
            ),
            Measure::Ab => (
                optimal_by_acceptability(instance)?.0,
                ab_distortion(instance, winner)?,
            ),
        };
        if optimal != self.optimal {
            failures.push(format!(
                "optimal {} instead of {}",
                instance.name(optimal),
                instance.name(self.optimal)
            ));
        }
        let matches = match (achieved, self.expected) {
            (DistortionValue::Infinite, DistortionValue::Infinite) => true,
            (DistortionValue::Infinite, _) | (_, DistortionValue::Infinite) => false,
            (DistortionValue::Exact(a), DistortionValue::Exact(b)) if self.tolerance == 0.0 => {
                a == b
            }
            (a, b) => (a.to_f64() - b.to_f64()).abs() <= self.tolerance.max(instance.tolerance()),
        };
        if !matches {
            failures.push(format!(
                "{} distortion {} instead of {}",
                self.measure.name(),
                achieved,
                self.expected
            ));
        }
        if let Some(ell) = self.smith_set_size {
            let found = MajorityMatrix::from_profile(&induced_ranking(instance))
                .smith_set()
                .len();
            if found != ell {
                failures.push(format!("smith set of size {found} instead of {ell}"));
            }
        }
        Ok(CertificateCheck {
            winner,
            optimal,
            achieved,
            failures,
        })
    }
}

fn ids(cs: &[usize]) -> Vec<CandidateId> {
    cs.iter().map(|&c| CandidateId(c)).collect()
}

fn exact(r: Rational) -> DistortionValue {
    DistortionValue::Exact(r)
}

fn divides(n: u64, d: u64, what: &str) -> Result<u64> {
    if d == 0 || !n.is_multiple_of(d) || n == 0 {
        return Err(Error::Divisibility(format!(
            "{what}: n = {n} must be a positive multiple of {d} (smallest valid n is {d})"
        )));
    }
    Ok(n / d)
}

/// Builder for instances whose voters are grouped at shared points.
struct Layout {
    names: Vec<String>,
    candidates: Vec<Vec<f64>>,
    voters: Vec<Vec<f64>>,
    groups: Vec<VoterGroup>,
}

impl Layout {
    fn new(names: Vec<String>, candidates: Vec<Vec<f64>>) -> Self {
        Layout {
            names,
            candidates,
            voters: Vec::new(),
            groups: Vec::new(),
        }
    }

    /// Adds a group unless it is empty.
    fn group(&mut self, at: Vec<f64>, weight: u64, radius: f64, ranking: Option<&[usize]>) {
        if weight == 0 {
            return;
        }
        let mut g = VoterGroup::new(weight, radius);
        if let Some(r) = ranking {
            g = g.with_ranking(ids(r));
        }
        self.voters.push(at);
        self.groups.push(g);
    }

    fn build(self, lex: &[usize]) -> Result<ElectionInstance> {
        ElectionInstance::new(
            self.names,
            MetricSpace::euclidean(self.voters, self.candidates),
            self.groups,
            TieBreakOrder::from_indices(lex)?,
        )
    }
}

/// Two candidates, all voters on top of c1, everyone accepts both; AV
/// elects c2 by tie-breaking.
pub fn gen_av_degenerate(n: u64) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let mut layout = Layout::new(default_names(2), vec![vec![0.0], vec![1.0]]);
    layout.group(vec![0.0], n, 1.0, None);
    let inst = layout.build(&[1, 0])?;
    let cert = HardInstanceCertificate {
        family: "av-degenerate".into(),
        rule: Some(Rule::Approval),
        winner: CandidateId(1),
        optimal: CandidateId(0),
        measure: Measure::Distance,
        expected: DistortionValue::Infinite,
        limit: DistortionValue::Infinite,
        tolerance: 0.0,
        smith_set_size: None,
    };
    Ok((inst, cert))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AvRegime {
    /// p ∈ (0, 1/4]
    Low,
    /// p ∈ [1/4, 1/2]
    Mid,
    /// p ∈ [1/2, 1)
    High,
}

impl AvRegime {
    pub fn name(self) -> &'static str {
        match self {
            AvRegime::Low => "low",
            AvRegime::Mid => "mid",
            AvRegime::High => "high",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "low" => Some(AvRegime::Low),
            "mid" => Some(AvRegime::Mid),
            "high" => Some(AvRegime::High),
            _ => None,
        }
    }

    /// The regime whose formula applies to p (the lower one at the joints).
    pub fn for_p(p: Rational) -> Self {
        if p <= Rational::new(1, 4) {
            AvRegime::Low
        } else if p <= Rational::new(1, 2) {
            AvRegime::Mid
        } else {
            AvRegime::High
        }
    }
}

/// Globally consistent p-efficient layouts on which AV's distance
/// distortion approaches the bound for p as ε → 0.
///
/// Candidates are named cw, co, c1, c2, … with tie-break order in that
/// sequence; cw is the AV winner and co the distance-optimal candidate.
pub fn gen_av_hard(
    p: Rational,
    n: u64,
    eps: f64,
    regime: AvRegime,
) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    if !(eps > 0.0 && eps < 0.1) {
        return Err(Error::Precondition(format!(
            "eps must lie in (0, 0.1), got {eps}"
        )));
    }
    let (lo, hi, lo_open, hi_open) = match regime {
        AvRegime::Low => (Rational::zero(), Rational::new(1, 4), true, false),
        AvRegime::Mid => (Rational::new(1, 4), Rational::new(1, 2), false, false),
        AvRegime::High => (Rational::new(1, 2), Rational::one(), false, true),
    };
    if p < lo || p > hi || (lo_open && p == lo) || (hi_open && p == hi) {
        return Err(Error::Precondition(format!(
            "p = {p} is outside the {} regime [{lo}, {hi}]",
            regime.name()
        )));
    }
    let pn_r = p * Rational::from_integer(n as i64);
    if !pn_r.is_integer() || n == 0 {
        return Err(Error::Divisibility(format!(
            "p·n must be an integer: n = {n} must be a multiple of {}",
            p.denom()
        )));
    }
    let pn = pn_r.to_integer() as u64;
    let nf = n as f64;
    let pnf = pn as f64;
    let (inst, expected) = match regime {
        AvRegime::Low => {
            // co at 0 with pn voters, cw at 1 with pn voters, and n − 2pn
            // single voters each on its own candidate within ε of co.
            let k = n - 2 * pn;
            let left = k.div_ceil(2);
            let right = k / 2;
            let delta = eps / (k.max(1) as f64);
            let mut names = vec!["cw".to_string(), "co".to_string()];
            let mut candidates = vec![vec![1.0], vec![0.0]];
            let mut singles = Vec::new();
            for j in 1..=left {
                singles.push(-(j as f64) * delta);
            }
            for j in 1..=right {
                singles.push(j as f64 * delta);
            }
            for (i, &x) in singles.iter().enumerate() {
                names.push(format!("c{}", i + 1));
                candidates.push(vec![x]);
            }
            let radius = delta / 4.0;
            let mut layout = Layout::new(names, candidates);
            layout.group(vec![1.0], pn, radius, None);
            layout.group(vec![0.0], pn, radius, None);
            for &x in &singles {
                layout.group(vec![x], 1, radius, None);
            }
            let lex: Vec<usize> = (0..2 + singles.len()).collect();
            let w_sum = pnf + singles.iter().map(|x| 1.0 - x).sum::<f64>();
            let o_sum = pnf + singles.iter().map(|x| x.abs()).sum::<f64>();
            (layout.build(&lex)?, w_sum / o_sum)
        }
        AvRegime::Mid => {
            if !n.is_multiple_of(2) {
                return Err(Error::Divisibility(format!(
                    "mid regime needs n even, got {n}"
                )));
            }
            let side = n / 2 - pn;
            let r = 1.0;
            let names = ["cw", "co", "c1", "c2"].map(String::from).to_vec();
            let candidates = vec![
                vec![3.0 * r + 2.0 * eps, 0.0],
                vec![r + eps, 0.0],
                vec![0.0, eps + r],
                vec![0.0, -eps - r],
            ];
            let mut layout = Layout::new(names, candidates);
            layout.group(vec![0.0, eps], side, r, None);
            layout.group(vec![0.0, -eps], side, r, None);
            layout.group(vec![r + eps, 0.0], pn, r, None);
            layout.group(vec![2.0 * r + 2.0 * eps, 0.0], pn, r, None);
            let sf = side as f64;
            let w_sum = 2.0 * sf * ((3.0 * r + 2.0 * eps).powi(2) + eps * eps).sqrt()
                + pnf * (2.0 * r + eps)
                + pnf * r;
            let o_sum = 2.0 * sf * ((r + eps).powi(2) + eps * eps).sqrt() + pnf * (r + eps);
            (layout.build(&[0, 1, 2, 3])?, w_sum / o_sum)
        }
        AvRegime::High => {
            let r = 1.0;
            let names = ["cw", "co", "c1"].map(String::from).to_vec();
            let candidates = vec![vec![2.0 * r + eps], vec![r + eps], vec![-r]];
            let mut layout = Layout::new(names, candidates);
            layout.group(vec![0.0], n - pn, r, None);
            layout.group(vec![r + eps], pn, r, None);
            let rest = nf - pnf;
            let w_sum = rest * (2.0 * r + eps) + pnf * r;
            let o_sum = rest * (r + eps);
            (layout.build(&[0, 1, 2])?, w_sum / o_sum)
        }
    };
    let cert = HardInstanceCertificate {
        family: format!("av-hard-{}", regime.name()),
        rule: Some(Rule::Approval),
        winner: CandidateId(0),
        optimal: CandidateId(1),
        measure: Measure::Distance,
        expected: DistortionValue::Approx(expected),
        limit: av_bound(p),
        tolerance: 1e-9,
        smith_set_size: None,
    };
    Ok((inst, cert))
}

/// The cyclic family on a regular (ℓ−1)-simplex; instance `shift` = i makes
/// c_i acceptable to everyone and c_{i+1} to only n/ℓ voters, while every
/// shift induces the same ranking profile up to voter order.
pub fn gen_smith_cycle(
    ell: usize,
    n: u64,
    shift: usize,
) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    if ell < 2 {
        return Err(Error::Precondition("ell must be at least 2".into()));
    }
    if shift == 0 || shift > ell {
        return Err(Error::Precondition(format!(
            "shift must lie in 1..={ell}, got {shift}"
        )));
    }
    let per = divides(n, ell as u64, "smith cycle")?;
    let geo = simplex(ell - 1);
    let i = shift - 1;
    let at = |j: isize| (j.rem_euclid(ell as isize)) as usize;
    let mut layout = Layout::new(default_names(ell), geo.vertices.clone());
    for k in 1..=ell {
        let start = i as isize - k as isize + 1;
        let face: Vec<usize> = (0..k as isize).map(|t| at(start + t)).collect();
        let ranking: Vec<usize> = (0..ell as isize).map(|t| at(start + t)).collect();
        layout.group(
            geo.face_circumcenter(&face),
            per,
            geo.circumradius,
            Some(&ranking),
        );
    }
    let inst = layout.build(&(0..ell).collect::<Vec<_>>())?;
    let cert = HardInstanceCertificate {
        family: "smith-cycle".into(),
        rule: None,
        winner: CandidateId((i + 1) % ell),
        optimal: CandidateId(i),
        measure: Measure::Ab,
        expected: exact(bounds::smith(ell)),
        limit: exact(bounds::smith(ell)),
        tolerance: 0.0,
        smith_set_size: Some(ell),
    };
    Ok((inst, cert))
}

/// Two instances with the same induced rankings whose acceptability optima
/// differ; any fixed rule loses 1/2 − 1/n on one of them.
pub fn gen_ell1_pair(n: u64) -> Result<(ElectionInstance, ElectionInstance)> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::Divisibility(format!(
            "ell1 pair needs an even n ≥ 4, got {n} (smallest valid n is 4)"
        )));
    }
    let build = |a: f64, b: f64| {
        let mut layout = Layout::new(default_names(2), vec![vec![0.0], vec![3.0]]);
        layout.group(vec![a], n / 2 + 1, 2.0, None);
        layout.group(vec![b], n / 2 - 1, 2.0, None);
        layout.build(&[0, 1])
    };
    Ok((build(1.0, 3.0)?, build(0.0, 2.0)?))
}

/// A Condorcet winner nobody finds acceptable.
///
/// Candidates cx, cy, cz, cc in the plane; cc beats everyone pairwise while
/// each voter group accepts only its own nearby candidate.
pub fn gen_condorcet_hard(n: u64) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    let quarter = divides(n, 4, "condorcet")?;
    if n < 8 {
        return Err(Error::Divisibility(format!(
            "condorcet needs n ≥ 8, got {n} (smallest valid n is 8)"
        )));
    }
    let names = ["cx", "cy", "cz", "cc"].map(String::from).to_vec();
    let candidates = vec![
        vec![3.0, 3.0],
        vec![0.0, 1.0],
        vec![6.0, 1.0],
        vec![3.0, 2.0],
    ];
    let mut layout = Layout::new(names, candidates);
    layout.group(vec![3.0, 4.0], n / 2 - 1, 1.5, None);
    layout.group(vec![1.0, 1.0], quarter + 1, 1.5, None);
    layout.group(vec![5.0, 1.0], quarter, 1.5, None);
    let inst = layout.build(&[0, 1, 2, 3])?;
    let cert = HardInstanceCertificate {
        family: "condorcet".into(),
        rule: Some(Rule::Copeland),
        winner: CandidateId(3),
        optimal: CandidateId(0),
        measure: Measure::Ab,
        expected: exact(Rational::new(n as i64 / 2 - 1, n as i64)),
        limit: exact(bounds::condorcet()),
        tolerance: 0.0,
        smith_set_size: Some(1),
    };
    Ok((inst, cert))
}

/// Equilateral triangle with a three-way Copeland tie won by the candidate
/// only two voters accept.
pub fn gen_copeland_hard(n: u64) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::Divisibility(format!(
            "copeland needs an even n ≥ 6, got {n} (smallest valid n is 6)"
        )));
    }
    let geo = simplex(2);
    let r = geo.circumradius;
    let mut layout = Layout::new(default_names(3), geo.vertices.clone());
    layout.group(geo.vertices[0].clone(), n / 2 - 1, r, Some(&[0, 1, 2]));
    layout.group(
        geo.face_circumcenter(&[0, 2]),
        n / 2 - 1,
        r,
        Some(&[2, 0, 1]),
    );
    layout.group(geo.circumcenter.clone(), 2, r, Some(&[1, 2, 0]));
    let inst = layout.build(&[1, 0, 2])?;
    let cert = HardInstanceCertificate {
        family: "copeland".into(),
        rule: Some(Rule::Copeland),
        winner: CandidateId(1),
        optimal: CandidateId(0),
        measure: Measure::Ab,
        expected: exact(Rational::new(n as i64 - 2, n as i64)),
        limit: exact(Rational::one()),
        tolerance: 0.0,
        smith_set_size: Some(3),
    };
    Ok((inst, cert))
}

/// Plurality splits evenly among m groups and elects c1, which only its own
/// group accepts.
pub fn gen_plurality_hard(m: usize, n: u64) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    if m < 2 {
        return Err(Error::Precondition("m must be at least 2".into()));
    }
    let per = divides(n, m as u64, "plurality")?;
    let mut candidates = vec![vec![0.0]];
    candidates.extend((1..m).map(|_| vec![3.0]));
    let mut layout = Layout::new(default_names(m), candidates);
    let all: Vec<usize> = (0..m).collect();
    layout.group(vec![1.0], per, 2.0, Some(&all));
    for j in 1..m {
        let mut ranking = vec![j];
        ranking.extend((1..m).filter(|&x| x != j));
        ranking.push(0);
        layout.group(vec![5.0], per, 2.0, Some(&ranking));
    }
    let inst = layout.build(&all)?;
    let cert = HardInstanceCertificate {
        family: "plurality".into(),
        rule: Some(Rule::Plurality),
        winner: CandidateId(0),
        optimal: CandidateId(1),
        measure: Measure::Ab,
        expected: exact(bounds::plurality(m)),
        limit: exact(bounds::plurality(m)),
        tolerance: 0.0,
        smith_set_size: None,
    };
    Ok((inst, cert))
}

/// Two groups on a line tie c1 and c2 under the scoring vector; c2 wins by
/// tie-breaking although only the smaller group accepts it. A constant
/// vector puts everyone next to c1 and elects c_m.
pub fn gen_scoring_hard(
    s: &ScoringVector,
    n: u64,
) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    let m = s.len();
    if m < 2 {
        return Err(Error::Precondition(
            "the scoring vector needs at least 2 entries".into(),
        ));
    }
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let rule = Some(Rule::Scoring(s.clone()));
    if s.is_constant() {
        let mut candidates = vec![vec![0.0]];
        candidates.extend((1..m).map(|_| vec![2.0]));
        let mut layout = Layout::new(default_names(m), candidates);
        layout.group(vec![0.0], n, 1.0, Some(&(0..m).collect::<Vec<_>>()));
        let mut lex = vec![m - 1];
        lex.extend(0..m - 1);
        let cert = HardInstanceCertificate {
            family: "scoring".into(),
            rule,
            winner: CandidateId(m - 1),
            optimal: CandidateId(0),
            measure: Measure::Ab,
            expected: exact(Rational::one()),
            limit: exact(Rational::one()),
            tolerance: 0.0,
            smith_set_size: None,
        };
        return Ok((layout.build(&lex)?, cert));
    }
    if !s.is_non_increasing() {
        return Err(Error::Precondition(
            "scores must be non-increasing (s_1 ≥ … ≥ s_m)".into(),
        ));
    }
    let v = s.values();
    let p = v[0] - v[1];
    let q = v[0] - v[m - 1];
    if let Some(i) = (1..m - 1).find(|&i| v[i] - v[i + 1] < p) {
        return Err(Error::Precondition(format!(
            "s_1 − s_2 ≤ s_i − s_(i+1) fails at i = {}",
            i + 1
        )));
    }
    let nr = Rational::from_integer(n as i64);
    let a = nr * q / (p + q);
    let b = nr * p / (p + q);
    if !a.is_integer() || !b.is_integer() {
        return Err(Error::Divisibility(format!(
            "group sizes n·{}/{} and n·{}/{} must be integers; n = {n} must be a multiple of {}",
            q,
            p + q,
            p,
            p + q,
            (q / (p + q)).denom()
        )));
    }
    let mut candidates = vec![vec![1.0], vec![4.0]];
    candidates.extend((2..m).map(|_| vec![5.0]));
    let mut layout = Layout::new(default_names(m), candidates);
    layout.group(vec![0.0], a.to_integer() as u64, 3.0, None);
    layout.group(vec![4.0], b.to_integer() as u64, 3.0, None);
    let mut lex = vec![1, 0];
    lex.extend(2..m);
    let cert = HardInstanceCertificate {
        family: "scoring".into(),
        rule,
        winner: CandidateId(1),
        optimal: CandidateId(0),
        measure: Measure::Ab,
        expected: exact(q / (p + q)),
        limit: exact(q / (p + q)),
        tolerance: 0.0,
        smith_set_size: None,
    };
    Ok((layout.build(&lex)?, cert))
}

fn stv_sizes(m: usize, n: u64) -> Result<u64> {
    if !(2..=62).contains(&m) {
        return Err(Error::Precondition(format!(
            "m must lie in 2..=62, got {m}"
        )));
    }
    divides(n, 1u64 << (m - 1), "stv")
}

fn stv_certificate(m: usize) -> HardInstanceCertificate {
    HardInstanceCertificate {
        family: "stv".into(),
        rule: Some(Rule::Stv),
        winner: CandidateId(m - 1),
        optimal: CandidateId(0),
        measure: Measure::Ab,
        expected: exact(bounds::stv(m)),
        limit: exact(bounds::stv(m)),
        tolerance: 0.0,
        smith_set_size: None,
    }
}

/// STV on a line: c_m at 1, c_1 at 2, c_j at 2^j, each with its own group.
/// STV eliminates c_1, …, c_{m−1} in turn and elects c_m, which only the
/// smallest group accepts, while everybody accepts c_1.
pub fn gen_stv_hard_1d(m: usize, n: u64) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    let unit = stv_sizes(m, n)?;
    let mut candidates: Vec<Vec<f64>> = (1..m).map(|j| vec![(1u64 << j) as f64]).collect();
    candidates.push(vec![1.0]);
    let mut layout = Layout::new(default_names(m), candidates);
    layout.group(vec![1.0], unit, 1.0, None);
    layout.group(vec![2.0], unit, 0.0, None);
    for j in 2..m {
        let x = (1u64 << j) as f64;
        layout.group(vec![x], unit << (j - 1), x - 2.0, None);
    }
    let lex: Vec<usize> = (0..m).rev().collect();
    Ok((layout.build(&lex)?, stv_certificate(m)))
}

/// The globally consistent version: c_2, …, c_m on a regular
/// (m−2)-simplex, c_1 at its circumcenter, common radius R/2.
pub fn gen_stv_hard_simplex(
    m: usize,
    n: u64,
) -> Result<(ElectionInstance, HardInstanceCertificate)> {
    if m < 3 {
        return Err(Error::Precondition(format!(
            "m must be at least 3, got {m}"
        )));
    }
    let unit = stv_sizes(m, n)?;
    let geo = simplex(m - 2);
    let o = geo.circumcenter.clone();
    let mut candidates = vec![o.clone()];
    candidates.extend(geo.vertices.iter().cloned());
    let radius = geo.circumradius / 2.0;
    let mut layout = Layout::new(default_names(m), candidates.clone());
    layout.group(o.clone(), unit, radius, None);
    for i in 2..=m {
        let mid: Vec<f64> = candidates[i - 1]
            .iter()
            .zip(&o)
            .map(|(a, b)| (a + b) / 2.0)
            .collect();
        let weight = if i == m { unit } else { unit << (i - 1) };
        layout.group(mid, weight, radius, None);
    }
    let lex: Vec<usize> = (0..m).rev().collect();
    let mut cert = stv_certificate(m);
    cert.family = "stv-simplex".into();
    Ok((layout.build(&lex)?, cert))
}
