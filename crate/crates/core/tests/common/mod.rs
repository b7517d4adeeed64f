#![allow(dead_code)]

use mdist_core::model::{ElectionInstance, RankingProfile, TieBreakOrder};
use proptest::prelude::*;

pub fn permutation(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle()
}

/// 1 ≤ m ≤ max_m candidates, 1 ≤ n ≤ max_n voters of weight one.
pub fn profile(max_m: usize, max_n: usize) -> impl Strategy<Value = RankingProfile> {
    (1..=max_m)
        .prop_flat_map(move |m| (Just(m), prop::collection::vec(permutation(m), 1..=max_n)))
        .prop_map(|(m, orders)| RankingProfile::from_orders(m, &orders).unwrap())
}

pub fn profile_with_lex(
    max_m: usize,
    max_n: usize,
) -> impl Strategy<Value = (RankingProfile, TieBreakOrder)> {
    profile(max_m, max_n).prop_flat_map(|p| {
        let m = p.m();
        (
            Just(p),
            permutation(m).prop_map(|o| TieBreakOrder::from_indices(&o).unwrap()),
        )
    })
}

/// Integer points on [0, 20]; every voter gets a radius reaching at least
/// its nearest candidate.
pub fn line_instance(
    min_m: usize,
    max_m: usize,
    max_n: usize,
) -> impl Strategy<Value = ElectionInstance> {
    (min_m..=max_m, 1..=max_n)
        .prop_flat_map(|(m, n)| {
            (
                prop::collection::vec(0i32..=20, m),
                prop::collection::vec((0i32..=20, 0i32..=12), n),
                permutation(m),
            )
        })
        .prop_map(|(cands, voters, lex)| {
            let cands: Vec<f64> = cands.into_iter().map(f64::from).collect();
            let voters: Vec<(f64, u64, f64)> = voters
                .into_iter()
                .map(|(x, extra)| {
                    let x = f64::from(x);
                    let nearest = cands
                        .iter()
                        .map(|c| (c - x).abs())
                        .fold(f64::INFINITY, f64::min);
                    (x, 1, nearest + f64::from(extra))
                })
                .collect();
            ElectionInstance::on_line(&cands, &voters, TieBreakOrder::from_indices(&lex).unwrap())
                .unwrap()
        })
}

/// Same as `line_instance` with one common radius, the largest nearest
/// distance plus an integer slack.
pub fn global_line_instance(
    min_m: usize,
    max_m: usize,
    max_n: usize,
) -> impl Strategy<Value = ElectionInstance> {
    (line_instance(min_m, max_m, max_n), 0i32..=12).prop_map(|(inst, extra)| {
        let r_min = inst
            .voters()
            .map(|v| inst.nearest_distance(v))
            .fold(0.0, f64::max);
        inst.with_common_radius(r_min + f64::from(extra)).unwrap()
    })
}
