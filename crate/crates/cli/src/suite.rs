//! The acceptance checks and the seeded property suite.

use std::fmt::{self, Write as _};

use crate::commands::{Output, EXIT_CHECK_FAILED};
use mdist_core::distortion::{
    ab_ratio, av_bound, av_distortion_sweep, best_case_av_profile, bounds, distance_distortion,
    quarter_radius_profile, sweep_max,
};
use mdist_core::generators::{
    gen_av_degenerate, gen_av_hard, gen_condorcet_hard, gen_copeland_hard, gen_ell1_pair,
    gen_plurality_hard, gen_scoring_hard, gen_smith_cycle, gen_stv_hard_1d, gen_stv_hard_simplex,
    AvRegime, HardInstanceCertificate,
};
use mdist_core::model::{
    induced_ranking, is_globally_consistent, truthful_approvals, RankingProfile,
};
use mdist_core::rules::{av_winner, elect, RuleTrace};
use mdist_core::search::{
    adversarial_search, line_corpus, oracle_beatpaths, oracle_smith, random_profiles, RadiusMode,
    SearchConfig,
};
use mdist_core::{
    CandidateId, DistortionValue, ElectionInstance, MajorityMatrix, Rational, Rule, ScoringVector,
};

/// Instances per property.
pub const PROPERTY_CASES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub achieved: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {}: expected {}; achieved {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.expected,
            self.achieved
        )
    }
}

fn check(
    id: &str,
    name: &str,
    passed: bool,
    expected: impl Into<String>,
    achieved: impl Into<String>,
) -> Check {
    Check {
        id: id.into(),
        name: name.into(),
        passed,
        expected: expected.into(),
        achieved: achieved.into(),
    }
}

fn failed(id: &str, name: &str, expected: &str, e: impl fmt::Display) -> Check {
    check(id, name, false, expected, format!("error: {e}"))
}

fn q(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn exact(r: Rational) -> DistortionValue {
    DistortionValue::Exact(r)
}

pub fn criterion_1() -> Check {
    let cases = [
        (q(1, 8), exact(q(7, 1))),
        (q(1, 4), exact(q(3, 1))),
        (q(3, 8), exact(q(3, 1))),
        (q(1, 2), exact(q(3, 1))),
        (q(3, 4), exact(q(5, 1))),
        (q(0, 1), DistortionValue::Infinite),
        (q(1, 1), DistortionValue::Infinite),
    ];
    let got: Vec<String> = cases
        .iter()
        .map(|(p, _)| format!("{p}->{}", av_bound(*p)))
        .collect();
    let want: Vec<String> = cases.iter().map(|(p, v)| format!("{p}->{v}")).collect();
    let passed = cases.iter().all(|(p, v)| av_bound(*p) == *v);
    check(
        "01",
        "av bound curve",
        passed,
        want.join(" "),
        got.join(" "),
    )
}

pub fn criterion_2() -> Check {
    let name = "av hard instances";
    let cases = [
        (q(1, 8), 16, AvRegime::Low),
        (q(1, 4), 40, AvRegime::Mid),
        (q(3, 4), 8, AvRegime::High),
    ];
    let mut passed = true;
    let mut got = Vec::new();
    for (p, n, regime) in cases {
        let (inst, _) = match gen_av_hard(p, n, 1e-4, regime) {
            Ok(x) => x,
            Err(e) => return failed("02", name, "generators succeed", e),
        };
        let bound = av_bound(p).to_f64();
        let sweep = av_distortion_sweep(&inst);
        let max = sweep_max(&sweep)
            .map(|e| e.distortion.to_f64())
            .unwrap_or(f64::NAN);
        let entries_ok = sweep
            .iter()
            .all(|e| e.distortion.within(&av_bound(e.efficiency), 1e-9));
        let ok = max >= 0.98 * bound && max <= bound + 1e-9 && entries_ok;
        passed &= ok;
        got.push(format!(
            "p={p} {}: max {max:.6} / bound {bound}",
            regime.name()
        ));
    }
    check(
        "02",
        name,
        passed,
        "0.98*bound <= max <= bound + 1e-9 for each regime",
        got.join("; "),
    )
}

pub fn criterion_3(seed: u64) -> Check {
    let name = "av best case and quarter radius";
    let degenerate = match gen_av_degenerate(4) {
        Ok((inst, _)) => {
            let w = elect(&inst, &Rule::Approval).unwrap().winner;
            distance_distortion(&inst, w)
        }
        Err(e) => return failed("03", name, "generator succeeds", e),
    };
    let corpus = line_corpus(seed, 200, 4, 8, 20, RadiusMode::Local);
    let mut best_case_misses = 0;
    let mut worst_quarter = DistortionValue::from_integer(0);
    let limit = exact(q(11, 3));
    let mut quarter_misses = 0;
    for inst in &corpus {
        let profile = best_case_av_profile(inst);
        let w = av_winner(&profile, inst.lex()).winner;
        if !distance_distortion(inst, w).within(&DistortionValue::from_integer(1), 1e-9) {
            best_case_misses += 1;
        }
        let (_, profile) = quarter_radius_profile(inst);
        let w = av_winner(&profile, inst.lex()).winner;
        let d = distance_distortion(inst, w);
        if !d.within(&limit, 1e-9) {
            quarter_misses += 1;
        }
        if d > worst_quarter {
            worst_quarter = d;
        }
    }
    let passed = degenerate.is_infinite() && best_case_misses == 0 && quarter_misses == 0;
    check(
        "03",
        name,
        passed,
        "degenerate inf; best case 1 on 200 instances; quarter radius <= 11/3",
        format!(
            "degenerate {degenerate}; best case misses {best_case_misses}; quarter radius max {} ({quarter_misses} above 11/3)",
            worst_quarter.decimal()
        ),
    )
}

pub fn criterion_4() -> Check {
    let name = "copeland";
    let (inst, _) = match gen_copeland_hard(100) {
        Ok(x) => x,
        Err(e) => return failed("04", name, "generator succeeds", e),
    };
    let run = |rule: Rule| {
        let w = elect(&inst, &rule).unwrap().winner;
        (w, ab_ratio(&inst, w).unwrap())
    };
    let (cw, cab) = run(Rule::Copeland);
    let (_, rp) = run(Rule::RankedPairs);
    let (_, sch) = run(Rule::Schulze);
    let passed = inst.name(cw) == "c2" && cab == q(49, 50) && rp <= q(2, 3) && sch <= q(2, 3);
    check(
        "04",
        name,
        passed,
        "copeland c2 with 49/50; ranked pairs and schulze <= 2/3",
        format!(
            "copeland {} with {cab}; ranked pairs {rp}; schulze {sch}",
            inst.name(cw)
        ),
    )
}

pub fn criterion_5() -> Check {
    let name = "condorcet";
    let (inst, _) = match gen_condorcet_hard(16) {
        Ok(x) => x,
        Err(e) => return failed("05", name, "generator succeeds", e),
    };
    let mut passed = true;
    let mut got = Vec::new();
    for rule in [Rule::Copeland, Rule::RankedPairs, Rule::Schulze] {
        let w = elect(&inst, &rule).unwrap().winner;
        let ab = ab_ratio(&inst, w).unwrap();
        passed &= inst.name(w) == "cc" && ab == q(7, 16);
        got.push(format!("{rule}: {} {ab}", inst.name(w)));
    }
    check(
        "05",
        name,
        passed,
        "cc with 7/16 under all three rules",
        got.join("; "),
    )
}

/// The cyclic instance in which `w` is acceptable to the fewest voters.
fn shift_targeting(w: CandidateId, ell: usize) -> usize {
    if w.0 == 0 {
        ell
    } else {
        w.0
    }
}

pub fn criterion_6() -> Check {
    let name = "smith lower bound and tightness";
    let (first, _) = match gen_smith_cycle(3, 6, 1) {
        Ok(x) => x,
        Err(e) => return failed("06", name, "generator succeeds", e),
    };
    let smith = MajorityMatrix::from_profile(&induced_ranking(&first))
        .smith_set()
        .len();
    let mut passed = smith == 3;
    let mut got = vec![format!("smith set size {smith}")];
    for rule in [Rule::RankedPairs, Rule::Schulze] {
        let w = elect(&first, &rule).unwrap().winner;
        let (target, _) = gen_smith_cycle(3, 6, shift_targeting(w, 3)).unwrap();
        let same = elect(&target, &rule).unwrap().winner == w;
        let ab = ab_ratio(&target, w).unwrap();
        passed &= same && ab == q(2, 3);
        got.push(format!("{rule} elects {} with ab {ab}", first.name(w)));
    }
    let (a, b) = gen_ell1_pair(8).unwrap();
    let identical = induced_ranking(&a).multiset() == induced_ranking(&b).multiset();
    let worst_best = a
        .candidates()
        .map(|c| ab_ratio(&a, c).unwrap().max(ab_ratio(&b, c).unwrap()))
        .min()
        .unwrap();
    passed &= identical && worst_best >= q(3, 8);
    got.push(format!(
        "ell1 pair identical profiles {identical}; best fixed choice still loses {worst_best}"
    ));
    check(
        "06",
        name,
        passed,
        "size 3; both rules 2/3; identical profiles; loss >= 3/8",
        got.join("; "),
    )
}

type Generated = mdist_core::Result<(ElectionInstance, HardInstanceCertificate)>;

fn certified_value(r: Generated) -> Result<DistortionValue, String> {
    let (inst, cert) = r.map_err(|e| e.to_string())?;
    let c = cert.verify(&inst).map_err(|e| e.to_string())?;
    if c.passed() {
        Ok(c.achieved)
    } else {
        Err(c.to_string())
    }
}

pub fn criterion_7() -> Check {
    let name = "scoring rules";
    let cases: Vec<(&str, Generated, Rational)> = vec![
        (
            "borda m=3",
            gen_scoring_hard(&ScoringVector::borda(3), 3),
            q(2, 3),
        ),
        (
            "veto m=3",
            gen_scoring_hard(&ScoringVector::veto(3), 3),
            q(1, 1),
        ),
        (
            "2-approval m=3",
            gen_scoring_hard(&ScoringVector::k_approval(3, 2), 3),
            q(1, 1),
        ),
        (
            "constant",
            gen_scoring_hard(&ScoringVector::from_integers(&[1, 1, 1]), 3),
            q(1, 1),
        ),
        ("plurality m=4 n=8", gen_plurality_hard(4, 8), q(3, 4)),
    ];
    let mut passed = true;
    let mut want = Vec::new();
    let mut got = Vec::new();
    for (label, r, expected) in cases {
        want.push(format!("{label} {expected}"));
        match certified_value(r) {
            Ok(v) => {
                passed &= v == exact(expected);
                got.push(format!("{label} {v}"));
            }
            Err(e) => {
                passed = false;
                got.push(format!("{label} error: {e}"));
            }
        }
    }
    check("07", name, passed, want.join("; "), got.join("; "))
}

pub fn criterion_8() -> Check {
    let name = "stv";
    let mut passed = true;
    let mut got = Vec::new();
    for (label, r) in [
        ("line", gen_stv_hard_1d(4, 8)),
        ("simplex", gen_stv_hard_simplex(4, 8)),
    ] {
        let (inst, _) = match r {
            Ok(x) => x,
            Err(e) => return failed("08", name, "generators succeed", e),
        };
        let w = elect(&inst, &Rule::Stv).unwrap().winner;
        let ab = ab_ratio(&inst, w).unwrap();
        let mut ok = inst.name(w) == "c4" && ab == q(7, 8);
        if label == "simplex" {
            let global = is_globally_consistent(&inst, &truthful_approvals(&inst).unwrap());
            ok &= global;
            got.push(format!("{label}: {} {ab} global {global}", inst.name(w)));
        } else {
            got.push(format!("{label}: {} {ab}", inst.name(w)));
        }
        passed &= ok;
    }
    let (inst, _) = gen_stv_hard_1d(3, 4).unwrap();
    let RuleTrace::Stv(rounds) = elect(&inst, &Rule::Stv).unwrap().trace else {
        return failed("08", name, "an elimination trace", "no trace");
    };
    let render: Vec<String> = rounds
        .iter()
        .map(|r| {
            let scores: Vec<String> = r
                .scores
                .iter()
                .map(|(c, s)| format!("{}:{s}", inst.name(*c)))
                .collect();
            format!("{{{}}} out {}", scores.join(","), inst.name(r.eliminated))
        })
        .collect();
    let trace = render.join(" / ");
    let want_trace = "{c1:1,c2:2,c3:1} out c1 / {c2:2,c3:2} out c2";
    passed &= trace == want_trace;
    got.push(trace);
    check(
        "08",
        name,
        passed,
        format!("c4 with 7/8 on both, simplex global; trace {want_trace}"),
        got.join("; "),
    )
}

fn describe(p: &RankingProfile) -> String {
    let orders: Vec<String> = p
        .ballots()
        .iter()
        .map(|b| {
            b.order
                .iter()
                .map(|c| format!("c{}", c.0 + 1))
                .collect::<Vec<_>>()
                .join(">")
        })
        .collect();
    format!("[{}]", orders.join(", "))
}

#[derive(Default)]
struct Tally {
    checked: usize,
    violations: usize,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(witness());
            }
        }
    }

    fn into_check(self, id: &str, name: &str) -> Check {
        let mut achieved = format!("{} violations in {} checks", self.violations, self.checked);
        if let Some(w) = self.first {
            let _ = write!(achieved, "; first on {w}");
        }
        check(id, name, self.violations == 0, "0 violations", achieved)
    }
}

/// The eight seeded properties behind criterion 9, one check each.
pub fn property_checks(seed: u64) -> Vec<Check> {
    let corpus = line_corpus(seed, PROPERTY_CASES, 5, 9, 20, RadiusMode::Local);
    let profiles = random_profiles(seed, PROPERTY_CASES, 5, 9);
    let oracle_profiles = random_profiles(seed ^ 0x5eed, PROPERTY_CASES, 6, 9);
    let mut t: Vec<Tally> = (0..8).map(|_| Tally::default()).collect();
    let lex_id = |m| mdist_core::TieBreakOrder::identity(m);

    for p in &profiles {
        let mm = MajorityMatrix::from_profile(p);
        let immune = mm.immunity_set();
        t[0].record(immune.is_subset(&mm.smith_set()), || describe(p));
        for rule in [Rule::RankedPairs, Rule::Schulze] {
            let w = rule.apply_ranking(p, &lex_id(p.m())).unwrap().winner;
            t[1].record(immune.contains(&w), || format!("{rule} {}", describe(p)));
        }
    }
    for inst in &corpus {
        let profile = induced_ranking(inst);
        let mm = MajorityMatrix::from_profile(&profile);
        let m = inst.m();
        let n = inst.num_voters();
        let approvals = truthful_approvals(inst).unwrap();
        let immune = mm.immunity_set();
        t[0].record(immune.is_subset(&mm.smith_set()), || describe(&profile));
        let ab = |w: CandidateId| ab_ratio(inst, w).unwrap();
        let winner = |rule: &Rule| elect(inst, rule).unwrap().winner;
        for rule in [Rule::RankedPairs, Rule::Schulze] {
            let w = winner(&rule);
            t[1].record(immune.contains(&w), || {
                format!("{rule} {}", describe(&profile))
            });
        }
        if let Some(cw) = mm.condorcet_winner() {
            for rule in [Rule::Copeland, Rule::RankedPairs, Rule::Schulze] {
                let w = winner(&rule);
                t[2].record(w == cw && ab(w) <= bounds::condorcet(), || {
                    format!("{rule} {}", describe(&profile))
                });
            }
        }
        let ell = mm.smith_set().len();
        if ell >= 2 {
            for rule in [Rule::RankedPairs, Rule::Schulze] {
                let w = winner(&rule);
                t[3].record(ab(w) <= bounds::smith(ell), || {
                    format!("{rule} {}", describe(&profile))
                });
            }
        }
        let mut vectors = vec![
            ScoringVector::plurality(m),
            ScoringVector::veto(m),
            ScoringVector::borda(m),
        ];
        if m >= 3 {
            vectors.push(ScoringVector::k_approval(m, 2));
        }
        for s in vectors.into_iter().filter(|s| !s.is_constant()) {
            let w = winner(&Rule::Scoring(s.clone()));
            t[4].record(ab(w) <= bounds::scoring(&s), || {
                format!("scoring {s} {}", describe(&profile))
            });
        }
        let w = winner(&Rule::Plurality);
        t[5].record(approvals.approval_count(w) * m as u64 >= n, || {
            describe(&profile)
        });
        let w = winner(&Rule::Stv);
        t[6].record(approvals.approval_count(w) << (m - 1) >= n, || {
            describe(&profile)
        });
    }
    for p in profiles.iter().chain(&oracle_profiles) {
        let mm = MajorityMatrix::from_profile(p);
        let smith_ok = oracle_smith(p)
            .map(|s| s == mm.smith_set())
            .unwrap_or(false);
        let paths_ok = oracle_beatpaths(&mm)
            .map(|b| b == mm.beatpath_strengths())
            .unwrap_or(false);
        t[7].record(smith_ok && paths_ok, || {
            format!(
                "{} ({})",
                describe(p),
                if smith_ok {
                    "beatpath strengths"
                } else {
                    "smith set"
                }
            )
        });
    }
    let names = [
        ("09a", "immunity set inside smith set"),
        ("09b", "ranked pairs and schulze winners immune"),
        ("09c", "condorcet winner elected with ab <= 1/2"),
        ("09d", "ranked pairs and schulze ab <= (l-1)/l"),
        ("09e", "scoring ab within the spread bound"),
        ("09f", "plurality winner approved by n/m"),
        ("09g", "stv winner approved by n/2^(m-1)"),
        ("09h", "smith set and beatpaths match oracles"),
    ];
    t.into_iter()
        .zip(names)
        .map(|(t, (id, name))| t.into_check(id, name))
        .collect()
}

pub fn criterion_9(seed: u64) -> Check {
    let checks = property_checks(seed);
    let passed = checks.iter().all(|c| c.passed);
    let failing: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.to_string())
        .collect();
    check(
        "09",
        "property suite",
        passed,
        format!("8 properties with 0 violations over {PROPERTY_CASES} instances each"),
        if passed {
            "all 8 properties hold".to_string()
        } else {
            failing.join(" | ")
        },
    )
}

pub fn criterion_10(seed: u64) -> Check {
    let name = "adversarial soundness";
    let mut passed = true;
    let mut got = Vec::new();
    for (label, base) in [
        ("av p=1/4", SearchConfig::av_quarter()),
        ("plurality ab", SearchConfig::plurality_ab()),
    ] {
        let cfg = SearchConfig {
            seed,
            budget: 10_000,
            ..base
        };
        match adversarial_search(&cfg) {
            Ok(out) => {
                let bound = out.bound.map(|b| b.to_f64()).unwrap_or(f64::INFINITY);
                let achieved = out.achieved.to_f64();
                let ok = out.violations.is_empty()
                    && achieved <= bound + 1e-9
                    && achieved >= 0.95 * bound;
                passed &= ok;
                got.push(format!(
                    "{label}: {} ({:.4}) of bound {bound}, {} violations in {} evaluations",
                    out.achieved,
                    achieved,
                    out.violations.len(),
                    out.evaluations
                ));
            }
            Err(e) => {
                passed = false;
                got.push(format!("{label}: error {e}"));
            }
        }
    }
    check(
        "10",
        name,
        passed,
        "0.95*bound <= achieved <= bound + 1e-9, no violations",
        got.join("; "),
    )
}

pub fn acceptance_checks(seed: u64) -> Vec<Check> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(seed),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(seed),
        criterion_10(seed),
    ]
}

pub fn report(title: &str, seed: u64, checks: &[Check]) -> String {
    let mut out = format!("# {title} (seed {seed})\n");
    for c in checks {
        let _ = writeln!(out, "{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "# {} passed, {failed} failed", checks.len() - failed);
    out
}

/// Runs `acceptance` or `properties`; any failing check exits with 1.
pub fn suite(name: &str, seed: u64) -> Output {
    let checks = match name {
        "acceptance" => acceptance_checks(seed),
        "properties" => property_checks(seed),
        other => return Output::usage(format!("unknown suite `{other}` (acceptance, properties)")),
    };
    let text = report(name, seed, &checks);
    if checks.iter().all(|c| c.passed) {
        Output::ok(text)
    } else {
        Output {
            text,
            code: EXIT_CHECK_FAILED,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_lines() {
        let c = check("07", "scoring rules", false, "2/3", "1/2");
        assert_eq!(
            c.to_string(),
            "[FAIL] 07 scoring rules: expected 2/3; achieved 1/2"
        );
        let r = report("acceptance", 3, &[c, check("01", "curve", true, "7", "7")]);
        assert!(r.starts_with("# acceptance (seed 3)\n"));
        assert!(r.ends_with("# 1 passed, 1 failed\n"));
    }

    #[test]
    fn violations_name_the_first_profile() {
        let mut t = Tally::default();
        t.record(true, || unreachable!());
        t.record(false, || "[c1>c2]".into());
        t.record(false, || "[c2>c1]".into());
        let c = t.into_check("09h", "oracles");
        assert!(!c.passed);
        assert_eq!(c.achieved, "2 violations in 3 checks; first on [c1>c2]");
    }

    #[test]
    fn profiles_render_one_based() {
        let p = RankingProfile::from_orders(3, &[vec![2, 0, 1]]).unwrap();
        assert_eq!(describe(&p), "[c3>c1>c2]");
    }

    #[test]
    fn unknown_suite_is_a_usage_error() {
        assert_eq!(suite("smoke", 0).code, crate::commands::EXIT_USAGE);
    }
}
