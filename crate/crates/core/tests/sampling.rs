mod common;

use std::collections::HashMap;

use common::l;
use proptest::prelude::*;
use rankfair::sampling::*;
use rankfair::{enumerate_rankings, Profile, Ranking, Rational};

/// Pearson statistic of `draws` against exact probabilities.
fn chi_square(draws: &[Ranking], probs: &HashMap<Ranking, f64>) -> f64 {
    let mut seen: HashMap<&Ranking, usize> = HashMap::new();
    for r in draws {
        *seen.entry(r).or_default() += 1;
    }
    let n = draws.len() as f64;
    probs
        .iter()
        .map(|(r, p)| {
            let o = *seen.get(r).unwrap_or(&0) as f64;
            (o - n * p).powi(2) / (n * p)
        })
        .sum()
}

fn mallows_probs(center: &Ranking, phi: f64) -> HashMap<Ranking, f64> {
    let w: Vec<(Ranking, f64)> = enumerate_rankings(center.m())
        .unwrap()
        .map(|r| {
            let d = r.swap_distance(center).unwrap();
            (r, phi.powi(d as i32))
        })
        .collect();
    let z: f64 = w.iter().map(|(_, x)| x).sum();
    w.into_iter().map(|(r, x)| (r, x / z)).collect()
}

#[test]
fn mallows_matches_exact_law_m4() {
    let center = l("bdac");
    let mut rng = seeded_rng(11);
    let draws: Vec<Ranking> = (0..24_000).map(|_| sample_mallows(&center, 0.6, &mut rng).unwrap()).collect();
    // 23 degrees of freedom; 49.73 is the 0.999 quantile.
    assert!(chi_square(&draws, &mallows_probs(&center, 0.6)) < 49.73);
}

#[test]
fn impartial_culture_is_uniform_m3() {
    let spec = CultureSpec::new(CultureKind::ImpartialCulture, 3, 12_000, 5);
    let draws = spec.sample_rankings().unwrap();
    // 5 degrees of freedom; 20.52 is the 0.999 quantile.
    assert!(chi_square(&draws, &mallows_probs(&l("abc"), 1.0)) < 20.52);
}

#[test]
fn mallows_two_alternatives_half() {
    let mut rng = seeded_rng(2);
    let n = 60_000;
    let hits = (0..n).filter(|_| sample_mallows(&l("ab"), 0.5, &mut rng).unwrap() == l("ab")).count();
    assert!((hits as f64 / n as f64 - 2.0 / 3.0).abs() < 0.01);
}

#[test]
fn mixture_respects_shares() {
    let spec = CultureSpec::mallows_mixture(6, 20_000, 0.55, 0.0, 0.0, 8).unwrap();
    let draws = spec.sample_rankings().unwrap();
    let center = Ranking::identity(6).unwrap();
    let share = draws.iter().filter(|r| **r == center).count() as f64 / draws.len() as f64;
    assert!(draws.iter().all(|r| *r == center || *r == center.reversed()));
    assert!((share - 0.55).abs() < 0.015);
}

#[test]
fn same_seed_same_profile() {
    let specs = [
        CultureSpec::disc(8, 50, 4),
        CultureSpec::circle(10, 200, 4),
        CultureSpec::two_gaussians(10, 40, 0.75, 4),
        CultureSpec::mallows_mixture(5, 30, 0.55, 0.7, 0.3, 4).unwrap(),
        CultureSpec::new(CultureKind::ImpartialCulture, 5, 30, 4),
    ];
    for s in &specs {
        assert_eq!(s.sample_profile().unwrap(), s.sample_profile().unwrap());
        let mut other = s.clone();
        other.seed = 5;
        assert_ne!(s.sample_rankings().unwrap(), other.sample_rankings().unwrap());
    }
}

#[test]
fn profile_weights_are_counts_over_n() {
    let p = CultureSpec::disc(4, 50, 1).sample_profile().unwrap();
    let total = p.iter().fold(Rational::zero(), |acc, (_, w)| acc + w.clone());
    assert_eq!(total, Rational::one());
    for (_, w) in p.iter() {
        assert!((w.clone() * Rational::from_integer(50)).is_integer());
    }
}

#[test]
fn gaussian_clusters_centre_on_their_means() {
    let kind = PointKind::two_corners(1.0);
    let pts = sample_points(&kind, 4000, &mut seeded_rng(3)).unwrap();
    let mean = |k: usize| pts.iter().map(|p| p[k]).sum::<f64>() / pts.len() as f64;
    assert!((mean(0) - 0.2).abs() < 0.01 && (mean(1) - 0.2).abs() < 0.01);
    let bad = PointKind::Gaussians { centers: vec![[0.0, 0.0]], sigmas: vec![1.0], shares: vec![0.5] };
    assert!(sample_points(&bad, 1, &mut seeded_rng(0)).is_err());
}

#[test]
fn disc_points_fill_the_disc() {
    let pts = sample_points(&PointKind::Disc, 20_000, &mut seeded_rng(9)).unwrap();
    assert!(pts.iter().all(|p| p[0] * p[0] + p[1] * p[1] <= 1.0));
    let inner = pts.iter().filter(|p| p[0] * p[0] + p[1] * p[1] <= 0.25).count() as f64 / pts.len() as f64;
    assert!((inner - 0.25).abs() < 0.01);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(CultureSpec::new(CultureKind::Mallows { center: l("abc"), phi: 1.2 }, 3, 5, 0).sample_profile().is_err());
    assert!(CultureSpec::new(CultureKind::Mallows { center: l("abc"), phi: 0.5 }, 4, 5, 0).sample_profile().is_err());
    assert!(CultureSpec::disc(1, 5, 0).sample_profile().is_err());
    assert!(CultureSpec::disc(3, 0, 0).sample_profile().is_err());
    assert!(CultureSpec::mallows_mixture(3, 5, 1.5, 0.5, 0.5, 0).unwrap().sample_profile().is_err());
}

const SOC: &str = "\
# FILE NAME: toy.soc
# DATA TYPE: soc
# NUMBER ALTERNATIVES: 3
# ALTERNATIVE NAME 1: Red
# ALTERNATIVE NAME 2: Green
# ALTERNATIVE NAME 3: Blue
# NUMBER VOTERS: 6
# NUMBER UNIQUE ORDERS: 2
4: 1,2,3
2: 3,2,1
";

#[test]
fn preflib_soc_round_trip() {
    let p = parse_preflib(SOC).unwrap();
    let expected = Profile::from_counts([(l("abc"), 4), (l("cba"), 2)]).unwrap();
    assert_eq!(p.iter().collect::<Vec<_>>(), expected.iter().collect::<Vec<_>>());
    assert_eq!(p.label_names(), vec!["Red", "Green", "Blue"]);
}

#[test]
fn preflib_errors_carry_line_numbers() {
    let soi = SOC.replace("DATA TYPE: soc", "DATA TYPE: soi");
    assert!(parse_preflib(&soi).unwrap_err().to_string().contains("soi"));
    let short = SOC.replace("2: 3,2,1", "2: 3,2");
    assert!(matches!(parse_preflib(&short), Err(rankfair::Error::Parse { line: 10, .. })));
    let range = SOC.replace("4: 1,2,3", "4: 1,2,4");
    assert!(matches!(parse_preflib(&range), Err(rankfair::Error::Parse { line: 9, .. })));
    let dup = SOC.replace("4: 1,2,3", "4: 1,1,3");
    assert!(matches!(parse_preflib(&dup), Err(rankfair::Error::Parse { line: 9, .. })));
    assert!(parse_preflib("# DATA TYPE: soc\n").is_err());
}

#[test]
fn random_restriction_keeps_sorted_subset() {
    let p = CultureSpec::disc(10, 30, 2).sample_profile().unwrap();
    let (r, keep) = restrict_random(&p, 4, 7).unwrap();
    assert_eq!(r.m(), 4);
    assert!(keep.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(restrict_random(&p, 4, 7).unwrap().1, keep);
    assert!(restrict_random(&p, 11, 7).is_err());
}

fn config() -> impl Strategy<Value = PointConfig> {
    (2usize..=6, 1usize..=20, any::<u64>()).prop_map(|(m, n, seed)| {
        let mut rng = seeded_rng(seed);
        let alts = sample_points(&PointKind::Disc, m, &mut rng).unwrap();
        let voters = sample_points(&PointKind::Disc, n, &mut rng).unwrap();
        PointConfig::new(voters, alts).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euclidean_profiles_ignore_exact_rigid_motions(cfg in config(), k in 0usize..8) {
        let motion = |p: &Point| {
            let [x, y] = *p;
            let r = match k % 4 { 0 => [x, y], 1 => [-y, x], 2 => [-x, -y], _ => [y, -x] };
            if k >= 4 { [2.0 * r[0], -2.0 * r[1]] } else { r }
        };
        let moved = PointConfig::new(
            cfg.voter_points.iter().map(motion).collect(),
            cfg.alt_points.iter().map(motion).collect(),
        ).unwrap();
        prop_assert_eq!(profile_from_points(&cfg).unwrap(), profile_from_points(&moved).unwrap());
    }

    #[test]
    fn euclidean_profiles_are_neutral(cfg in config(), seed in any::<u64>()) {
        let m = cfg.m();
        let mut tau: Vec<usize> = (0..m).collect();
        use rand::seq::SliceRandom;
        tau.shuffle(&mut seeded_rng(seed));
        let mut alts = cfg.alt_points.clone();
        for a in 0..m {
            alts[tau[a]] = cfg.alt_points[a];
        }
        let relabelled = PointConfig::new(cfg.voter_points.clone(), alts).unwrap();
        prop_assert_eq!(
            profile_from_points(&cfg).unwrap().permuted(&tau).unwrap(),
            profile_from_points(&relabelled).unwrap()
        );
    }

    #[test]
    fn voters_rank_nearer_alternatives_first(cfg in config()) {
        for v in 0..cfg.voter_points.len() {
            let r = voter_ranking(&cfg, v);
            let d = |a: usize| {
                let p = cfg.voter_points[v];
                (p[0] - cfg.alt_points[a][0]).powi(2) + (p[1] - cfg.alt_points[a][1]).powi(2)
            };
            prop_assert!(r.order().windows(2).all(|w| d(w[0]) <= d(w[1])));
        }
    }
}
