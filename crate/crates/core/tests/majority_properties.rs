mod common;

use common::profile;
use mdist_core::search::{oracle_beatpaths, oracle_smith};
use mdist_core::MajorityMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_set_matches_oracle(p in profile(6, 9)) {
        let mm = MajorityMatrix::from_profile(&p);
        prop_assert_eq!(mm.smith_set(), oracle_smith(&p).unwrap());
    }

    #[test]
    fn beatpaths_match_oracle(p in profile(6, 9)) {
        let mm = MajorityMatrix::from_profile(&p);
        prop_assert_eq!(mm.beatpath_strengths(), oracle_beatpaths(&mm).unwrap());
    }

    #[test]
    fn immunity_inside_smith(p in profile(6, 9)) {
        let mm = MajorityMatrix::from_profile(&p);
        prop_assert!(mm.immunity_set().is_subset(&mm.smith_set()));
    }

    #[test]
    fn condorcet_winner_is_the_whole_smith_set(p in profile(6, 9)) {
        let mm = MajorityMatrix::from_profile(&p);
        if let Some(w) = mm.condorcet_winner() {
            prop_assert_eq!(mm.smith_set(), [w].into());
        }
    }

    #[test]
    fn pairwise_counts_sum_to_n(p in profile(6, 9)) {
        let mm = MajorityMatrix::from_profile(&p);
        for a in mm.candidates() {
            for b in mm.candidates() {
                if a != b {
                    prop_assert_eq!(mm.get(a, b) + mm.get(b, a), mm.n());
                }
            }
        }
    }
}
