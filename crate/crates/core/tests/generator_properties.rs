use mdist_core::generators::{
    gen_av_hard, gen_condorcet_hard, gen_copeland_hard, gen_plurality_hard, gen_scoring_hard,
    gen_smith_cycle, gen_stv_hard_1d, gen_stv_hard_simplex, AvRegime,
};
use mdist_core::model::{induced_ranking, is_globally_consistent, truthful_approvals};
use mdist_core::rules::ScoringVector;
use mdist_core::{ElectionInstance, Rational};
use proptest::prelude::*;

fn valid(inst: &ElectionInstance) -> bool {
    inst.metric().triangle_violation(1e-9).is_none() && truthful_approvals(inst).is_ok()
}

fn certified(
    inst: &ElectionInstance,
    cert: &mdist_core::generators::HardInstanceCertificate,
) -> Result<(), TestCaseError> {
    let check = cert.verify(inst).unwrap();
    prop_assert!(check.passed(), "{}: {}", cert.family, check);
    prop_assert!(valid(inst));
    Ok(())
}

fn global(inst: &ElectionInstance) -> bool {
    is_globally_consistent(inst, &truthful_approvals(inst).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn smith_cycles(ell in 2usize..=6, k in 1u64..=3, shift in 0usize..6) {
        let shift = shift % ell + 1;
        let (inst, cert) = gen_smith_cycle(ell, k * ell as u64, shift).unwrap();
        certified(&inst, &cert)?;
        let (first, _) = gen_smith_cycle(ell, k * ell as u64, 1).unwrap();
        prop_assert_eq!(induced_ranking(&inst).multiset(), induced_ranking(&first).multiset());
    }

    #[test]
    fn condorcet_and_copeland(k in 2u64..=30) {
        let (inst, cert) = gen_condorcet_hard(4 * k).unwrap();
        certified(&inst, &cert)?;
        prop_assert!(global(&inst));
        let (inst, cert) = gen_copeland_hard(2 * k + 2).unwrap();
        certified(&inst, &cert)?;
        prop_assert!(global(&inst));
    }

    #[test]
    fn plurality(m in 2usize..=7, k in 1u64..=4) {
        let (inst, cert) = gen_plurality_hard(m, k * m as u64).unwrap();
        certified(&inst, &cert)?;
        prop_assert!(global(&inst));
    }

    #[test]
    fn scoring(m in 3usize..=6, k in 1u64..=4) {
        for s in [ScoringVector::borda(m), ScoringVector::veto(m), ScoringVector::k_approval(m, m - 1)] {
            let n = k * (m as u64 - 1) * m as u64;
            let (inst, cert) = gen_scoring_hard(&s, n).unwrap();
            certified(&inst, &cert)?;
            prop_assert!(global(&inst));
        }
    }

    #[test]
    fn stv(m in 2usize..=7, k in 1u64..=3) {
        let n = k << (m - 1);
        let (inst, cert) = gen_stv_hard_1d(m, n).unwrap();
        certified(&inst, &cert)?;
        if m >= 3 {
            let (inst, cert) = gen_stv_hard_simplex(m, n).unwrap();
            certified(&inst, &cert)?;
            prop_assert!(global(&inst));
        }
    }

    #[test]
    fn av_hard(den in prop::sample::select(vec![4i64, 5, 6, 8, 10, 16]), num in 1i64..16, k in 1u64..=3) {
        let p = Rational::new(num, den);
        prop_assume!(p < Rational::from_integer(1));
        let regime = AvRegime::for_p(p);
        let n = 2 * k * *p.denom() as u64;
        let (inst, cert) = gen_av_hard(p, n, 1e-4, regime).unwrap();
        certified(&inst, &cert)?;
        prop_assert!(global(&inst));
        prop_assert!(cert.expected.to_f64() <= cert.limit.to_f64() + 1e-9);
        prop_assert!(cert.expected.to_f64() >= 0.98 * cert.limit.to_f64());
    }
}
