mod common;

use common::{global_line_instance, line_instance};
use mdist_core::distortion::{
    ab_ratio, av_bound, av_distortion_sweep, best_case_av_profile, bounds, distance_distortion,
    optimal_by_distance,
};
use mdist_core::model::{induced_ranking, is_locally_consistent};
use mdist_core::rules::{av_winner, elect, ScoringVector};
use mdist_core::{DistortionValue, MajorityMatrix, Rational, Rule};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn av_respects_its_bound(inst in line_instance(1, 5, 9)) {
        for e in av_distortion_sweep(&inst) {
            let bound = av_bound(e.efficiency);
            prop_assert!(
                bound.is_infinite() || e.distortion.to_f64() <= bound.to_f64() + 1e-9,
                "radius {} p {} distortion {}", e.radius, e.efficiency, e.distortion
            );
        }
    }

    #[test]
    fn ranking_rules_respect_ab_bounds(inst in global_line_instance(2, 5, 9)) {
        let mm = MajorityMatrix::from_profile(&induced_ranking(&inst));
        let m = inst.m();
        let mut rules = vec![Rule::Plurality, Rule::Stv, Rule::Copeland, Rule::RankedPairs, Rule::Schulze, Rule::Borda, Rule::Veto];
        if m >= 3 {
            rules.push(Rule::KApproval(2));
        }
        for rule in rules {
            let w = elect(&inst, &rule).unwrap().winner;
            let ab = ab_ratio(&inst, w).unwrap();
            let (name, bound) = bounds::for_rule(&rule, &mm);
            prop_assert!(ab <= bound, "{} {}: {} > {}", rule, name, ab, bound);
            if mm.condorcet_winner().is_some() && rule.is_condorcet_consistent() {
                prop_assert!(ab <= Rational::new(1, 2));
            }
        }
        prop_assert!(ab_ratio(&inst, elect(&inst, &Rule::Plurality).unwrap().winner).unwrap() <= bounds::plurality(m));
        let s = ScoringVector::borda(m);
        prop_assert!(ab_ratio(&inst, elect(&inst, &Rule::Scoring(s.clone())).unwrap().winner).unwrap() <= bounds::scoring(&s));
    }

    #[test]
    fn best_case_profile_is_consistent_and_optimal(inst in line_instance(1, 5, 9)) {
        let profile = best_case_av_profile(&inst);
        prop_assert!(is_locally_consistent(&inst, &profile));
        prop_assert!(profile.ballots().iter().all(|b| !b.approved.is_empty()));
        let w = av_winner(&profile, inst.lex()).winner;
        let (c_o, _) = optimal_by_distance(&inst);
        let d = distance_distortion(&inst, w);
        prop_assert!(d.within(&distance_distortion(&inst, c_o), 1e-9), "{}", d);
    }
}

#[test]
fn av_bound_is_continuous_at_the_joints() {
    let three = DistortionValue::from_integer(3);
    assert_eq!(av_bound(Rational::new(1, 4)), three);
    assert_eq!(av_bound(Rational::new(1, 2)), three);
    let below = Rational::new(1, 4) - Rational::new(1, 1_000_000);
    let above = Rational::new(1, 2) + Rational::new(1, 1_000_000);
    assert!((av_bound(below).to_f64() - 3.0).abs() < 1e-4);
    assert!((av_bound(above).to_f64() - 3.0).abs() < 1e-4);
}
