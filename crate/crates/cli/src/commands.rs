//! The subcommands, as functions from arguments to output text and exit
//! code.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use mdist_core::distortion::{
    ab_distortion, av_bound, bounds, distance_distortion, optimal_by_acceptability,
    optimal_by_distance, worst_ranking_ab_distortion,
};
use mdist_core::generators::{
    gen_av_degenerate, gen_av_hard, gen_condorcet_hard, gen_copeland_hard, gen_ell1_pair,
    gen_plurality_hard, gen_scoring_hard, gen_smith_cycle, gen_stv_hard_1d, gen_stv_hard_simplex,
    AvRegime, HardInstanceCertificate, DEFAULT_EPS,
};
use mdist_core::model::{
    efficiency_fraction, induced_ranking, is_globally_consistent, is_locally_consistent,
    truthful_approvals,
};
use mdist_core::rules::elect;
use mdist_core::search::{adversarial_search, SearchConfig};
use mdist_core::{
    DistortionValue, ElectionInstance, Error, MajorityMatrix, Rational, Rule, ScoringVector,
};

use crate::format::{FormatError, InstanceFile};
use crate::record::{
    self, Bound, CertificateOutcome, ResultRecord, SearchSummary, Value, WorstProfile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Profiles examined by `run --enumerate-ties` before giving up.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Output {
            text,
            code: EXIT_OK,
        }
    }

    pub fn usage(message: impl std::fmt::Display) -> Self {
        Output {
            text: format!("error: {message}\n"),
            code: EXIT_USAGE,
        }
    }

    pub fn failed(message: impl std::fmt::Display) -> Self {
        Output {
            text: format!("error: {message}\n"),
            code: EXIT_CHECK_FAILED,
        }
    }
}

fn from_format_error(e: FormatError) -> Output {
    match e {
        FormatError::Invalid(_) => Output::failed(e),
        _ => Output::usage(e),
    }
}

/// Core errors caused by bad arguments map to usage errors, the rest to
/// check failures.
fn from_core_error(e: Error) -> Output {
    match e {
        Error::UnknownRule(_)
        | Error::Divisibility(_)
        | Error::Precondition(_)
        | Error::ScoringLength { .. } => Output::usage(e),
        _ => Output::failed(e),
    }
}

pub fn validate(path: &Path) -> Output {
    let file = match InstanceFile::read(path) {
        Ok(f) => f,
        Err(e) => return from_format_error(e),
    };
    validate_file(&file)
}

pub fn validate_file(file: &InstanceFile) -> Output {
    let inst = match file.to_instance() {
        Ok(i) => i,
        Err(e) => return from_format_error(e),
    };
    let mut text = String::new();
    let mut valid = true;
    let _ = writeln!(text, "candidates: {}", inst.m());
    let _ = writeln!(
        text,
        "voters: {} in {} entries",
        inst.num_voters(),
        inst.num_groups()
    );
    match inst.metric().triangle_violation(inst.tolerance()) {
        None => {
            let _ = writeln!(text, "metric: ok");
        }
        Some((x, y, z)) => {
            valid = false;
            let _ = writeln!(
                text,
                "metric: triangle inequality fails for points {x}, {y}, {z} (voters first, then candidates)"
            );
        }
    }
    let approvals = truthful_approvals(&inst).expect("construction checked nonempty balls");
    let _ = writeln!(text, "approvals: nonempty");
    let level = if is_globally_consistent(&inst, &approvals) {
        "global"
    } else if is_locally_consistent(&inst, &approvals) {
        "local"
    } else {
        "none"
    };
    let _ = writeln!(text, "consistency: {level}");
    if let Ok(Some(cert)) = file.to_certificate() {
        match cert.verify(&inst) {
            Ok(check) => {
                valid &= check.passed();
                let _ = writeln!(text, "certificate: {check}");
            }
            Err(e) => {
                valid = false;
                let _ = writeln!(text, "certificate: {e}");
            }
        }
    }
    let _ = writeln!(text, "valid: {}", if valid { "yes" } else { "no" });
    Output {
        text,
        code: if valid { EXIT_OK } else { EXIT_CHECK_FAILED },
    }
}

fn certificate_outcome(
    instance: &ElectionInstance,
    cert: &HardInstanceCertificate,
) -> Result<CertificateOutcome, Error> {
    let check = cert.verify(instance)?;
    Ok(CertificateOutcome {
        family: cert.family.clone(),
        expected: cert.expected.to_string(),
        achieved: check.achieved.to_string(),
        passed: check.passed(),
        failures: check.failures,
    })
}

/// Evaluates `rule` on the instance with both distortions and the bound
/// that applies to it.
pub fn evaluate(
    instance: &ElectionInstance,
    file: &InstanceFile,
    certificate: Option<&HardInstanceCertificate>,
    rule: &Rule,
    enumerate_ties: bool,
) -> Result<ResultRecord, Error> {
    let name = |c: mdist_core::CandidateId| instance.name(c).to_string();
    let outcome = elect(instance, rule)?;
    let (c_dist, _) = optimal_by_distance(instance);
    let (c_ab, _) = optimal_by_acceptability(instance)?;
    let distance = distance_distortion(instance, outcome.winner);
    let ab = ab_distortion(instance, outcome.winner)?;
    let approvals = truthful_approvals(instance)?;
    let mut worst_profile = None;
    let bound = if rule.uses_rankings() {
        let mm = MajorityMatrix::from_profile(&induced_ranking(instance));
        let (bound_name, b) = bounds::for_rule(rule, &mm);
        let mut worst_ok = true;
        if enumerate_ties {
            let w = worst_ranking_ab_distortion(instance, rule, ENUMERATION_LIMIT, false)?;
            let (_, wb) = bounds::for_rule(rule, &MajorityMatrix::from_profile(&w.profile));
            worst_ok = w.value <= wb;
            worst_profile = Some(WorstProfile {
                ab_distortion: DistortionValue::Exact(w.value).into(),
                winner: name(w.winner),
                profiles: w.profiles.to_string(),
                bound: DistortionValue::Exact(wb).into(),
            });
        }
        let b = DistortionValue::Exact(b);
        Bound {
            name: bound_name,
            measure: "ab".into(),
            value: b.into(),
            respected: ab <= b && worst_ok,
        }
    } else {
        if enumerate_ties {
            return Err(Error::Precondition(
                "--enumerate-ties needs a ranking-based rule".into(),
            ));
        }
        let (bound_name, b) = if is_globally_consistent(instance, &approvals) {
            let p = efficiency_fraction(&approvals, c_dist);
            (format!("av_bound({p})"), av_bound(p))
        } else {
            (
                "locally consistent approvals: unbounded".into(),
                DistortionValue::Infinite,
            )
        };
        Bound {
            name: bound_name,
            measure: "distance".into(),
            value: b.into(),
            respected: distance.within(&b, instance.tolerance()),
        }
    };
    let certificate = match certificate {
        Some(cert) if cert.rule.is_none() || cert.rule.as_ref() == Some(rule) => {
            Some(certificate_outcome(instance, cert)?)
        }
        _ => None,
    };
    Ok(ResultRecord {
        instance_digest: record::digest(file),
        rule: rule.name(),
        winner: name(outcome.winner),
        tied_set: outcome.tied_set.iter().map(|&c| name(c)).collect(),
        optimal_by_distance: name(c_dist),
        optimal_by_acceptability: name(c_ab),
        distance_distortion: distance.into(),
        ab_distortion: ab.into(),
        bound: Some(bound),
        worst_profile,
        certificate,
        search: None,
    })
}

fn record_output(record: &ResultRecord) -> Output {
    Output {
        text: record.to_json() + "\n",
        code: if record.passed() {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        },
    }
}

pub fn run(path: &Path, rule: Option<&str>, enumerate_ties: bool) -> Output {
    let file = match InstanceFile::read(path) {
        Ok(f) => f,
        Err(e) => return from_format_error(e),
    };
    run_file(&file, rule, enumerate_ties)
}

pub fn run_file(file: &InstanceFile, rule: Option<&str>, enumerate_ties: bool) -> Output {
    let instance = match file.to_instance() {
        Ok(i) => i,
        Err(e) => return from_format_error(e),
    };
    let certificate = match file.to_certificate() {
        Ok(c) => c,
        Err(e) => return from_format_error(e),
    };
    let rule = match rule {
        Some(text) => match Rule::parse(text) {
            Ok(r) => r,
            Err(e) => return Output::usage(e),
        },
        None => match certificate.as_ref().and_then(|c| c.rule.clone()) {
            Some(r) => r,
            None => return Output::usage("no --rule given and the file's certificate names none"),
        },
    };
    match evaluate(&instance, file, certificate.as_ref(), &rule, enumerate_ties) {
        Ok(record) => record_output(&record),
        Err(e) => from_core_error(e),
    }
}

/// Generator parameters; which ones are needed depends on the family.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GenerateParams {
    pub m: Option<usize>,
    pub n: Option<u64>,
    pub ell: Option<usize>,
    pub shift: Option<usize>,
    pub p: Option<String>,
    pub eps: Option<f64>,
    pub regime: Option<String>,
    pub scores: Option<String>,
    pub rule: Option<String>,
}

pub const FAMILIES: [&str; 10] = [
    "av-degenerate",
    "av-hard",
    "smith-cycle",
    "ell1-pair",
    "condorcet",
    "copeland",
    "plurality",
    "scoring",
    "stv-1d",
    "stv-simplex",
];

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("{family} needs --{flag}"))
}

/// Instance files for a family, each with an optional name suffix.
pub fn generate(
    family: &str,
    params: &GenerateParams,
) -> Result<Vec<(Option<String>, InstanceFile)>, String> {
    let n = || need(params.n, "n", family);
    let m = || need(params.m, "m", family);
    let single = |r: mdist_core::Result<(ElectionInstance, HardInstanceCertificate)>| {
        r.map(|(inst, cert)| vec![(None, InstanceFile::from_instance(&inst, Some(&cert)))])
            .map_err(|e| e.to_string())
    };
    match family {
        "av-degenerate" => single(gen_av_degenerate(n()?)),
        "av-hard" => {
            let text = params.p.as_deref().ok_or("av-hard needs --p")?;
            let p: Rational = text
                .parse()
                .map_err(|_| format!("--p: not a fraction: {text:?}"))?;
            let regime = match params.regime.as_deref() {
                Some(r) => AvRegime::parse(r)
                    .ok_or_else(|| format!("--regime: expected low, mid or high, got {r:?}"))?,
                None => AvRegime::for_p(p),
            };
            single(gen_av_hard(
                p,
                n()?,
                params.eps.unwrap_or(DEFAULT_EPS),
                regime,
            ))
        }
        "smith-cycle" => single(gen_smith_cycle(
            need(params.ell, "ell", family)?,
            n()?,
            params.shift.unwrap_or(1),
        )),
        "ell1-pair" => {
            let (a, b) = gen_ell1_pair(n()?).map_err(|e| e.to_string())?;
            Ok(vec![
                (Some("a".into()), InstanceFile::from_instance(&a, None)),
                (Some("b".into()), InstanceFile::from_instance(&b, None)),
            ])
        }
        "condorcet" => single(gen_condorcet_hard(n()?)),
        "copeland" => single(gen_copeland_hard(n()?)),
        "plurality" => single(gen_plurality_hard(m()?, n()?)),
        "scoring" => {
            let s = match (&params.scores, &params.rule) {
                (Some(text), _) => ScoringVector::parse(text).map_err(|e| e.to_string())?,
                (None, Some(rule)) => {
                    let rule = Rule::parse(rule).map_err(|e| e.to_string())?;
                    rule.scoring_vector(m()?)
                        .ok_or_else(|| format!("{rule} is not a scoring rule"))?
                }
                (None, None) => return Err("scoring needs --scores or --rule with --m".into()),
            };
            single(gen_scoring_hard(&s, n()?))
        }
        "stv-1d" => single(gen_stv_hard_1d(m()?, n()?)),
        "stv-simplex" => single(gen_stv_hard_simplex(m()?, n()?)),
        _ => Err(format!(
            "unknown family {family:?}; expected one of {}",
            FAMILIES.join(", ")
        )),
    }
}

/// Rows "p,av_bound,p_exact,av_bound_decimal": p = 0, j/(samples+1) for
/// j = 1..=samples, the joints 1/4 and 1/2, and p = 1.
pub fn curve(samples: usize) -> Result<String, String> {
    if samples < 2 {
        return Err(format!("samples must be at least 2, got {samples}"));
    }
    let den = samples as i64 + 1;
    let mut points: BTreeSet<Rational> = (1..den).map(|j| Rational::new(j, den)).collect();
    points.extend([
        Rational::from_integer(0),
        Rational::new(1, 4),
        Rational::new(1, 2),
        Rational::from_integer(1),
    ]);
    let mut csv = String::from("p,av_bound,p_exact,av_bound_decimal\n");
    for p in points {
        let b = av_bound(p);
        let p_dec = *p.numer() as f64 / *p.denom() as f64;
        let _ = writeln!(csv, "{p_dec},{b},{p},{}", b.decimal());
    }
    Ok(csv)
}

pub fn search(cfg: &SearchConfig) -> Output {
    let outcome = match adversarial_search(cfg) {
        Ok(o) => o,
        Err(e) => return from_core_error(e),
    };
    let file = InstanceFile::from_instance(&outcome.instance, None);
    let mut record = match evaluate(&outcome.instance, &file, None, &cfg.rule, false) {
        Ok(r) => r,
        Err(e) => return from_core_error(e),
    };
    record.search = Some(SearchSummary {
        objective: cfg.objective.name().into(),
        radii: cfg.radii.name().into(),
        seed: cfg.seed,
        evaluations: outcome.evaluations,
        achieved: outcome.achieved.into(),
        bound: outcome.bound.map(Value::from),
        bound_name: outcome.bound_name.clone(),
        violations: outcome.violations.iter().map(|v| v.to_string()).collect(),
    });
    let mut out = record_output(&record);
    out.text.push_str("# best instance\n");
    for line in file.to_toml().lines() {
        let _ = writeln!(out.text, "# {line}");
    }
    out
}
