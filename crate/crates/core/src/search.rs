//! Brute-force oracles and adversarial search over metric placements.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distortion::{
    ab_ratio_on, av_bound, bounds, distance_distortion, distributions, feasible_radii,
    for_each_product, multiset_count, optimal_by_distance, DistortionValue,
};
use crate::majority::{BeatpathStrengths, MajorityMatrix};
use crate::model::{
    default_names, induced_ranking, truthful_approvals, ApprovalBallot, ApprovalProfile,
    CandidateId, ElectionInstance, MetricSpace, RankingProfile, TieBreakOrder, VoterGroup, VoterId,
};
use crate::rules::{av_winner, Rule};
use crate::{Error, Rational, Result};

/// Largest candidate count the oracles accept.
pub const ORACLE_MAX_M: usize = 6;

fn oracle_guard(m: usize) -> Result<()> {
    if m > ORACLE_MAX_M {
        return Err(Error::SizeGuard {
            what: "oracle candidates".into(),
            count: m as u128,
            limit: ORACLE_MAX_M as u128,
        });
    }
    Ok(())
}

/// Smallest nonempty subset whose members all strictly beat every outsider,
/// found by trying every subset.
pub fn oracle_smith(profile: &RankingProfile) -> Result<BTreeSet<CandidateId>> {
    let m = profile.m();
    oracle_guard(m)?;
    let mm = MajorityMatrix::from_profile(profile);
    let mut best: Option<BTreeSet<CandidateId>> = None;
    for mask in 1u32..(1 << m) {
        let inside: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
        if best.as_ref().is_some_and(|b| b.len() <= inside.len()) {
            continue;
        }
        let dominant = inside.iter().all(|&a| {
            (0..m)
                .filter(|b| mask & (1 << b) == 0)
                .all(|b| mm.dominates(CandidateId(a), CandidateId(b)))
        });
        if dominant {
            best = Some(inside.into_iter().map(CandidateId).collect());
        }
    }
    Ok(best.unwrap_or_default())
}

/// Strongest beatpaths by enumerating every simple path of strict defeats.
pub fn oracle_beatpaths(mm: &MajorityMatrix) -> Result<BeatpathStrengths> {
    let m = mm.m();
    oracle_guard(m)?;
    let mut rows = vec![vec![0u64; m]; m];
    fn walk(mm: &MajorityMatrix, at: usize, width: u64, seen: &mut Vec<bool>, row: &mut [u64]) {
        for next in 0..mm.m() {
            if seen[next] || !mm.dominates(CandidateId(at), CandidateId(next)) {
                continue;
            }
            let w = width.min(mm.get(CandidateId(at), CandidateId(next)));
            row[next] = row[next].max(w);
            seen[next] = true;
            walk(mm, next, w, seen, row);
            seen[next] = false;
        }
    }
    for (a, row) in rows.iter_mut().enumerate() {
        let mut seen = vec![false; m];
        seen[a] = true;
        walk(mm, a, u64::MAX, &mut seen, row);
    }
    Ok(BeatpathStrengths::from_rows(&rows))
}

/// Exhaustive worst AV distance distortion over locally consistent
/// approval profiles: every voter approves all candidates up to one of its
/// own candidate distances, and voters sharing a group may choose
/// differently.
pub fn worst_local_profile_av(
    instance: &ElectionInstance,
    limit: u128,
) -> Result<(ApprovalProfile, DistortionValue)> {
    let mut thresholds = Vec::with_capacity(instance.num_groups());
    let mut total: u128 = 1;
    for v in instance.voters() {
        let mut ds = instance.distances_from(v).to_vec();
        ds.sort_by(f64::total_cmp);
        ds.dedup();
        total = total.saturating_mul(multiset_count(instance.weight(v), ds.len()));
        thresholds.push(ds);
    }
    if total > limit {
        return Err(Error::SizeGuard {
            what: "locally consistent approval profiles".into(),
            count: total,
            limit,
        });
    }
    let slots: Vec<Vec<Vec<u64>>> = instance
        .voters()
        .zip(&thresholds)
        .map(|(v, ds)| distributions(instance.weight(v), ds.len()))
        .collect();
    let mut best: Option<(ApprovalProfile, DistortionValue)> = None;
    for_each_product(&slots, |pick| {
        let mut ballots = Vec::new();
        for (i, split) in pick.iter().enumerate() {
            let v = VoterId(i);
            let d = instance.distances_from(v);
            for (k, &w) in split.iter().enumerate() {
                if w > 0 {
                    let cut = thresholds[i][k];
                    ballots.push(ApprovalBallot {
                        voter: v,
                        weight: w,
                        approved: instance.candidates().filter(|c| d[c.0] <= cut).collect(),
                    });
                }
            }
        }
        let profile = ApprovalProfile::new(instance.m(), ballots).expect("thresholds are nonempty");
        let winner = av_winner(&profile, instance.lex()).winner;
        let value = distance_distortion(instance, winner);
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((profile, value));
        }
    });
    Ok(best.expect("at least one profile"))
}

/// Seeded random instances on the integer line [0, grid]: 2 ≤ m ≤ max_m
/// candidates, 1 ≤ n ≤ max_n unit voters and a random tie-break order.
/// Radii reach each voter's nearest candidate plus a random integer slack,
/// per voter or shared.
pub fn line_corpus(
    seed: u64,
    count: usize,
    max_m: usize,
    max_n: usize,
    grid: i64,
    radii: RadiusMode,
) -> Vec<ElectionInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(2..=max_m.max(2));
            let n = rng.gen_range(1..=max_n.max(1));
            let cands: Vec<f64> = (0..m).map(|_| rng.gen_range(0..=grid) as f64).collect();
            let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=grid) as f64).collect();
            let nearest = |x: f64| {
                cands
                    .iter()
                    .map(|c| (c - x).abs())
                    .fold(f64::INFINITY, f64::min)
            };
            let r_min = xs.iter().map(|&x| nearest(x)).fold(0.0, f64::max);
            let shared = r_min + rng.gen_range(0..=grid / 2) as f64;
            let voters: Vec<(f64, u64, f64)> = xs
                .iter()
                .map(|&x| {
                    let r = match radii {
                        RadiusMode::Global => shared,
                        RadiusMode::Local => nearest(x) + rng.gen_range(0..=grid / 2) as f64,
                    };
                    (x, 1, r)
                })
                .collect();
            let mut lex: Vec<usize> = (0..m).collect();
            for i in (1..m).rev() {
                lex.swap(i, rng.gen_range(0..=i));
            }
            ElectionInstance::on_line(&cands, &voters, TieBreakOrder::from_indices(&lex).unwrap())
                .expect("radii reach a candidate")
        })
        .collect()
}

/// Seeded profiles of 1 ≤ n ≤ max_n uniformly random rankings over
/// 1 ≤ m ≤ max_m candidates.
pub fn random_profiles(seed: u64, count: usize, max_m: usize, max_n: usize) -> Vec<RankingProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = rng.gen_range(1..=max_m.max(1));
            let n = rng.gen_range(1..=max_n.max(1));
            let orders: Vec<Vec<usize>> = (0..n)
                .map(|_| {
                    let mut order: Vec<usize> = (0..m).collect();
                    for i in (1..m).rev() {
                        order.swap(i, rng.gen_range(0..=i));
                    }
                    order
                })
                .collect();
            RankingProfile::from_orders(m, &orders).expect("permutations")
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Distance,
    Ab,
}

impl Objective {
    pub fn name(self) -> &'static str {
        match self {
            Objective::Distance => "distance",
            Objective::Ab => "ab",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "distance" => Some(Objective::Distance),
            "ab" => Some(Objective::Ab),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusMode {
    /// One radius for everybody, chosen among the feasible breakpoints.
    Global,
    /// Each voter picks one of its own candidate distances.
    Local,
}

impl RadiusMode {
    pub fn name(self) -> &'static str {
        match self {
            RadiusMode::Global => "global",
            RadiusMode::Local => "local",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "global" => Some(RadiusMode::Global),
            "local" => Some(RadiusMode::Local),
            _ => None,
        }
    }
}

/// Voters (weight 1 each) and candidates on the integer grid [0, grid]^dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub dimension: usize,
    pub grid: i64,
    pub n: usize,
    pub m: usize,
    pub rule: Rule,
    pub objective: Objective,
    pub radii: RadiusMode,
    /// Only count common radii at which the distance-optimal candidate has
    /// exactly this efficiency (AV only).
    pub pinned_p: Option<Rational>,
    /// Total number of evaluated placements over all restarts.
    pub budget: u64,
    pub restarts: usize,
    pub seed: u64,
}

impl SearchConfig {
    pub fn new(rule: Rule, objective: Objective, n: usize, m: usize) -> Self {
        SearchConfig {
            dimension: 1,
            grid: 100,
            n,
            m,
            rule,
            objective,
            radii: RadiusMode::Global,
            pinned_p: None,
            budget: 10_000,
            restarts: 20,
            seed: 0,
        }
    }

    /// AV with global radii and p pinned to 1/4.
    pub fn av_quarter() -> Self {
        SearchConfig {
            pinned_p: Some(Rational::new(1, 4)),
            ..SearchConfig::new(Rule::Approval, Objective::Distance, 4, 4)
        }
    }

    /// Plurality, ab objective, four candidates.
    pub fn plurality_ab() -> Self {
        SearchConfig {
            grid: 150,
            ..SearchConfig::new(Rule::Plurality, Objective::Ab, 4, 4)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Precondition(msg));
        if !(1..=2).contains(&self.dimension) {
            return bad(format!("dimension must be 1 or 2, got {}", self.dimension));
        }
        if self.grid < 1 {
            return bad("grid must be at least 1".into());
        }
        if self.n == 0 || self.m == 0 {
            return bad("n and m must be positive".into());
        }
        if self.restarts == 0 {
            return bad("restarts must be positive".into());
        }
        if self.pinned_p.is_some()
            && (self.rule != Rule::Approval || self.radii != RadiusMode::Global)
        {
            return bad("pinning p needs AV with global radii".into());
        }
        if self.rule == Rule::Approval && self.objective == Objective::Ab {
            return bad("AV maximizes approvals; use the distance objective".into());
        }
        if let Some(s) = self.rule.scoring_vector(self.m) {
            if s.len() != self.m {
                return bad(format!(
                    "scoring vector length {} differs from m = {}",
                    s.len(),
                    self.m
                ));
            }
        }
        Ok(())
    }
}

/// An evaluated placement whose value exceeds the analytic bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundViolation {
    pub instance: ElectionInstance,
    pub achieved: DistortionValue,
    pub bound: DistortionValue,
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "bound violation: achieved {} > bound {}",
            self.achieved, self.bound
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// The best placement, radii set to the evaluated ones.
    pub instance: ElectionInstance,
    pub winner: CandidateId,
    pub achieved: DistortionValue,
    /// None when no analytic bound applies.
    pub bound: Option<DistortionValue>,
    pub bound_name: String,
    pub evaluations: u64,
    pub violations: Vec<BoundViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Placement {
    voters: Vec<Vec<i64>>,
    candidates: Vec<Vec<i64>>,
    /// Per-voter index into its sorted distinct candidate distances
    /// (local radii only).
    radius_idx: Vec<usize>,
}

impl Placement {
    fn key(&self) -> String {
        format!(
            "{:?}|{:?}|{:?}",
            self.candidates, self.voters, self.radius_idx
        )
    }
}

#[derive(Clone, Debug)]
struct Scored {
    value: DistortionValue,
    bound: Option<DistortionValue>,
    bound_name: String,
    instance: ElectionInstance,
    winner: CandidateId,
}

fn to_f64(points: &[Vec<i64>]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| p.iter().map(|&x| x as f64).collect())
        .collect()
}

fn sorted_distances(instance: &ElectionInstance, v: VoterId) -> Vec<f64> {
    let mut ds = instance.distances_from(v).to_vec();
    ds.sort_by(f64::total_cmp);
    ds.dedup();
    ds
}

struct Evaluator<'a> {
    cfg: &'a SearchConfig,
    lex: TieBreakOrder,
}

impl Evaluator<'_> {
    fn base(&self, p: &Placement) -> ElectionInstance {
        let metric = MetricSpace::euclidean(to_f64(&p.voters), to_f64(&p.candidates));
        let far = (self.cfg.grid as f64) * (self.cfg.dimension as f64).sqrt() + 1.0;
        let groups = vec![VoterGroup::new(1, far); self.cfg.n];
        ElectionInstance::new(default_names(self.cfg.m), metric, groups, self.lex.clone())
            .expect("grid placements are valid")
    }

    /// Best radius choice for this placement, or None when nothing counts
    /// (e.g. p never hits its pinned value).
    fn score(&self, p: &Placement) -> Option<Scored> {
        let base = self.base(p);
        let cfg = self.cfg;
        let instance = match cfg.radii {
            RadiusMode::Local => {
                let radii: Vec<f64> = base
                    .voters()
                    .map(|v| {
                        let ds = sorted_distances(&base, v);
                        ds[p.radius_idx[v.0].min(ds.len() - 1)]
                    })
                    .collect();
                return self.score_at(base.with_radii(&radii).expect("radii reach a candidate"));
            }
            RadiusMode::Global => base,
        };
        let mut best: Option<Scored> = None;
        for r in feasible_radii(&instance) {
            let at = instance.with_common_radius(r).expect("feasible radius");
            if let Some(s) = self.score_at(at) {
                if best.as_ref().is_none_or(|b| s.value > b.value) {
                    best = Some(s);
                }
            }
        }
        best
    }

    fn score_at(&self, instance: ElectionInstance) -> Option<Scored> {
        let cfg = self.cfg;
        let approvals = truthful_approvals(&instance).expect("nonempty balls");
        if cfg.rule == Rule::Approval {
            let (c_o, _) = optimal_by_distance(&instance);
            let winner = av_winner(&approvals, instance.lex()).winner;
            let p = crate::model::efficiency_fraction(&approvals, c_o);
            if cfg.pinned_p.is_some_and(|q| q != p) {
                return None;
            }
            let (bound, bound_name) = match cfg.radii {
                RadiusMode::Global => (Some(av_bound(p)), format!("av_bound({p})")),
                RadiusMode::Local => (Some(DistortionValue::Infinite), "unbounded".into()),
            };
            return Some(Scored {
                value: distance_distortion(&instance, winner),
                bound,
                bound_name,
                instance,
                winner,
            });
        }
        let profile = induced_ranking(&instance);
        let winner = cfg
            .rule
            .apply_ranking(&profile, instance.lex())
            .ok()?
            .winner;
        let (value, bound, bound_name) = match cfg.objective {
            Objective::Ab => {
                let (name, b) =
                    bounds::for_rule(&cfg.rule, &MajorityMatrix::from_profile(&profile));
                (
                    DistortionValue::Exact(ab_ratio_on(&approvals, winner)),
                    Some(DistortionValue::Exact(b)),
                    name,
                )
            }
            Objective::Distance => (distance_distortion(&instance, winner), None, "none".into()),
        };
        Some(Scored {
            value,
            bound,
            bound_name,
            instance,
            winner,
        })
    }
}

fn violates(s: &Scored, tol: f64) -> bool {
    match s.bound {
        Some(DistortionValue::Infinite) | None => false,
        Some(b) => s.value.is_infinite() || s.value.to_f64() > b.to_f64() + tol,
    }
}

struct RestartResult {
    best: Option<(Scored, Placement)>,
    evaluations: u64,
    violations: Vec<BoundViolation>,
}

fn random_point(rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> Vec<i64> {
    (0..cfg.dimension)
        .map(|_| rng.gen_range(0..=cfg.grid))
        .collect()
}

/// Half of the voters start on top of a random candidate.
fn random_placement(rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> Placement {
    let candidates: Vec<Vec<i64>> = (0..cfg.m).map(|_| random_point(rng, cfg)).collect();
    let voters = (0..cfg.n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                candidates[rng.gen_range(0..cfg.m)].clone()
            } else {
                random_point(rng, cfg)
            }
        })
        .collect();
    Placement {
        voters,
        candidates,
        radius_idx: (0..cfg.n).map(|_| rng.gen_range(0..cfg.m)).collect(),
    }
}

fn random_step(rng: &mut ChaCha8Rng, cfg: &SearchConfig) -> i64 {
    let levels = 64 - (cfg.grid as u64).leading_zeros();
    let step = 1i64 << rng.gen_range(0..levels.max(1));
    if rng.gen_bool(0.5) {
        step
    } else {
        -step
    }
}

/// One coordinate moved by a step from {1, 2, 4, …}, all points sharing a
/// location moved together, the points near a pivot pulled in or pushed
/// out, a point snapped onto another one, or a voter's radius index changed.
fn perturb(rng: &mut ChaCha8Rng, cfg: &SearchConfig, p: &Placement) -> Placement {
    let mut q = p.clone();
    let kinds = if cfg.radii == RadiusMode::Local { 5 } else { 4 };
    match rng.gen_range(0..kinds) {
        0 => {
            let i = rng.gen_range(0..cfg.n + cfg.m);
            let point = if i < cfg.n {
                &mut q.voters[i]
            } else {
                &mut q.candidates[i - cfg.n]
            };
            let axis = rng.gen_range(0..cfg.dimension);
            point[axis] = (point[axis] + random_step(rng, cfg)).clamp(0, cfg.grid);
        }
        1 => {
            let i = rng.gen_range(0..cfg.n + cfg.m);
            let at = if i < cfg.n {
                p.voters[i].clone()
            } else {
                p.candidates[i - cfg.n].clone()
            };
            let axis = rng.gen_range(0..cfg.dimension);
            let to = (at[axis] + random_step(rng, cfg)).clamp(0, cfg.grid);
            for point in q.voters.iter_mut().chain(q.candidates.iter_mut()) {
                if *point == at {
                    point[axis] = to;
                }
            }
        }
        2 => {
            let all: Vec<Vec<i64>> = p.voters.iter().chain(&p.candidates).cloned().collect();
            let pivot = all[rng.gen_range(0..all.len())].clone();
            let window = random_step(rng, cfg).abs();
            let expand = rng.gen_bool(0.5);
            for point in q.voters.iter_mut().chain(q.candidates.iter_mut()) {
                let near = point
                    .iter()
                    .zip(&pivot)
                    .all(|(x, c)| (x - c).abs() <= window);
                if near {
                    for (x, c) in point.iter_mut().zip(&pivot) {
                        let offset = if expand { 2 * (*x - c) } else { (*x - c) / 2 };
                        *x = (c + offset).clamp(0, cfg.grid);
                    }
                }
            }
        }
        3 => {
            let all: Vec<Vec<i64>> = q.voters.iter().chain(&q.candidates).cloned().collect();
            let target = all[rng.gen_range(0..all.len())].clone();
            let i = rng.gen_range(0..cfg.n + cfg.m);
            if i < cfg.n {
                q.voters[i] = target;
            } else {
                q.candidates[i - cfg.n] = target;
            }
        }
        _ => {
            let v = rng.gen_range(0..cfg.n);
            q.radius_idx[v] = rng.gen_range(0..cfg.m);
        }
    }
    q
}

/// Initial temperature: a drop of this size in the objective is accepted
/// with probability 1/e at the start of a restart.
const ANNEAL_START: f64 = 0.1;

fn run_restart(cfg: &SearchConfig, eval: &Evaluator, restart: usize, budget: u64) -> RestartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut out = RestartResult {
        best: None,
        evaluations: 0,
        violations: Vec::new(),
    };
    let tol = crate::DEFAULT_TOLERANCE;
    let mut current: Option<(Scored, Placement)> = None;
    while out.evaluations < budget {
        let candidate = match &current {
            Some((_, p)) => perturb(&mut rng, cfg, p),
            None => random_placement(&mut rng, cfg),
        };
        out.evaluations += 1;
        let Some(scored) = eval.score(&candidate) else {
            continue;
        };
        if violates(&scored, tol) {
            out.violations.push(BoundViolation {
                instance: scored.instance.clone(),
                achieved: scored.value,
                bound: scored.bound.unwrap(),
            });
        }
        let accept = match &current {
            None => true,
            Some((c, _)) if scored.value >= c.value => true,
            Some((c, _)) => {
                let temperature = ANNEAL_START * (1.0 - out.evaluations as f64 / budget as f64);
                let drop = c.value.to_f64() - scored.value.to_f64();
                temperature > 0.0
                    && drop.is_finite()
                    && rng.gen_bool((-drop / temperature).exp().min(1.0))
            }
        };
        if accept {
            if out
                .best
                .as_ref()
                .is_none_or(|(b, bp)| better(&scored, &candidate, b, bp))
            {
                out.best = Some((scored.clone(), candidate.clone()));
            }
            current = Some((scored, candidate));
        }
    }
    out
}

/// Larger value first, then the lexicographically smaller placement.
fn better(a: &Scored, ap: &Placement, b: &Scored, bp: &Placement) -> bool {
    match a.value.partial_cmp(&b.value) {
        Some(std::cmp::Ordering::Greater) => true,
        Some(std::cmp::Ordering::Less) => false,
        _ => ap.key() < bp.key(),
    }
}

/// Random restarts with hill climbing (plateau moves accepted), run in
/// parallel; the result depends only on the configuration.
pub fn adversarial_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let eval = Evaluator {
        cfg,
        lex: TieBreakOrder::identity(cfg.m),
    };
    let per = cfg.budget / cfg.restarts as u64;
    let extra = cfg.budget % cfg.restarts as u64;
    let results: Vec<RestartResult> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| run_restart(cfg, &eval, i, per + u64::from((i as u64) < extra)))
        .collect();
    let mut evaluations = 0;
    let mut violations = Vec::new();
    let mut best: Option<(Scored, Placement)> = None;
    for r in results {
        evaluations += r.evaluations;
        violations.extend(r.violations);
        if let Some((s, p)) = r.best {
            if best.as_ref().is_none_or(|(b, bp)| better(&s, &p, b, bp)) {
                best = Some((s, p));
            }
        }
    }
    let Some((best, _)) = best else {
        return Err(Error::Precondition(
            "no evaluated placement satisfied the configuration (is p·n an integer?)".into(),
        ));
    };
    Ok(SearchOutcome {
        instance: best.instance,
        winner: best.winner,
        achieved: best.value,
        bound: best.bound,
        bound_name: best.bound_name,
        evaluations,
        violations,
    })
}
