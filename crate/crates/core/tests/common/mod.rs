#![allow(dead_code)]

use proptest::prelude::*;
use rankfair::{Profile, Ranking, Rational};

pub fn l(s: &str) -> Ranking {
    Ranking::from_letters(s).unwrap()
}

pub fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

pub fn ranking(m: usize) -> impl Strategy<Value = Ranking> {
    Just((0..m).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Ranking::new(v).unwrap())
}

/// Profiles over `m` alternatives with up to `max_support` rankings and
/// small integer weights.
pub fn profile_over(m: usize, max_support: usize) -> impl Strategy<Value = Profile> {
    prop::collection::vec((ranking(m), 1u64..=12), 1..=max_support)
        .prop_map(|entries| Profile::from_counts(entries).unwrap())
}

pub fn profile(max_m: usize, max_support: usize) -> impl Strategy<Value = Profile> {
    (2..=max_m).prop_flat_map(move |m| profile_over(m, max_support))
}

pub fn two_profiles(max_m: usize, max_support: usize) -> impl Strategy<Value = (Profile, Profile)> {
    (2..=max_m).prop_flat_map(move |m| (profile_over(m, max_support), profile_over(m, max_support)))
}

pub fn lambda() -> impl Strategy<Value = Rational> {
    (1i64..=9).prop_map(|k| Rational::new(k, 10).unwrap())
}
