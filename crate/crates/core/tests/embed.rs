mod common;

use proptest::prelude::*;
use rand::Rng;
use rankfair::embed::*;
use rankfair::sampling::{ranking_at, sample_points, seeded_rng, voter_ranking, CultureSpec, PointConfig, PointKind};
use rankfair::Ranking;

fn reconstruction_error(m: &SymmetricMatrix) -> f64 {
    let e = jacobi_eigen(m).unwrap();
    let n = m.n();
    let mut err = 0.0;
    for i in 0..n {
        for j in 0..n {
            let r: f64 = (0..n).map(|k| e.values[k] * e.vectors[k][i] * e.vectors[k][j]).sum();
            err += (r - m.get(i, j)).powi(2);
        }
    }
    err.sqrt()
}

fn orthonormality_error(e: &Eigen) -> f64 {
    let n = e.values.len();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            let dot: f64 = e.vectors[a].iter().zip(&e.vectors[b]).map(|(x, y)| x * y).sum();
            worst = worst.max((dot - (a == b) as u8 as f64).abs());
        }
    }
    worst
}

fn euclidean(points: &[[f64; 2]]) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(points.len(), |i, j| {
        ((points[i][0] - points[j][0]).powi(2) + (points[i][1] - points[j][1]).powi(2)).sqrt()
    })
    .unwrap()
}

#[test]
fn jacobi_reconstructs_random_symmetric_matrices() {
    let mut rng = seeded_rng(1);
    for n in [2, 3, 7, 20, 60] {
        let m = SymmetricMatrix::from_fn(n, |_, _| rng.random_range(-5.0..5.0)).unwrap();
        let e = jacobi_eigen(&m).unwrap();
        assert!(reconstruction_error(&m) <= 1e-8 * m.frobenius_norm(), "n={n}");
        assert!(orthonormality_error(&e) <= 1e-9);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn jacobi_refuses_huge_matrices() {
    assert!(jacobi_eigen(&SymmetricMatrix::zeros(513)).is_err());
}

#[test]
fn planar_configurations_are_recovered() {
    let mut rng = seeded_rng(2);
    for n in [3, 5, 12, 40] {
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)]).collect();
        let e = classical_mds(&euclidean(&pts)).unwrap();
        assert!(procrustes_residual(&e.coords, &pts) <= 1e-6, "n={n}");
        assert!(e.stress < 1e-12);
        assert!(e.clamped_mass < 1e-9);
    }
}

#[test]
fn procrustes_sees_through_rotation_and_reflection() {
    let pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [3.0, 1.0]];
    let (s, c) = 0.7f64.sin_cos();
    let moved: Vec<[f64; 2]> = pts.iter().map(|p| [c * p[0] + s * p[1] + 5.0, s * p[0] - c * p[1] - 1.0]).collect();
    assert!(procrustes_residual(&pts, &moved) < 1e-12);
    let bent = [[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [3.0, 2.0]];
    assert!(procrustes_residual(&pts, &bent) > 0.1);
}

#[test]
fn swap_metrics_clamp_negative_mass() {
    let p = CultureSpec::disc(6, 50, 3).sample_profile().unwrap();
    let rankings: Vec<Ranking> = p.support().cloned().collect();
    let d = distance_matrix(&rankings).unwrap();
    let e = classical_mds(&d).unwrap();
    assert!(e.stress >= 0.0);
    let total: f64 = e.eigenvalues.iter().map(|x| x.abs()).sum();
    let negative: f64 = e.eigenvalues.iter().filter(|x| **x < 0.0).map(|x| -x).sum();
    assert!((e.clamped_mass - negative).abs() <= 1e-9 * total);
}

#[test]
fn map_svg_has_markers() {
    let p = rankfair::fixtures::manipulation_before();
    let svg = map_svg(&p, &[(common::l("abc"), Marker::SquaredKemeny), (common::l("bac"), Marker::Kemeny)]).unwrap();
    assert!(svg.contains(r#"viewBox="0 0 600 600""#));
    assert_eq!(svg.matches("<circle").count(), 3);
    assert!(svg.contains("#2ca02c") && svg.contains("#d62728"));
}

fn grid_defect(cfg: &PointConfig, target: &Ranking, lo: f64, hi: f64, k: usize) -> u64 {
    let mut best = u64::MAX;
    for gx in 0..k {
        for gy in 0..k {
            let p = [lo + (hi - lo) * (gx as f64 + 0.5) / k as f64, lo + (hi - lo) * (gy as f64 + 0.5) / k as f64];
            if let Some(r) = ranking_at(&p, &cfg.alt_points) {
                best = best.min(r.swap_distance(target).unwrap());
            }
        }
    }
    best
}

#[test]
fn fit_matches_dense_grid() {
    let mut rng = seeded_rng(4);
    for trial in 0..24 {
        let m = 3 + trial % 3;
        let alts = sample_points(&PointKind::Disc, m, &mut rng).unwrap();
        let cfg = PointConfig::new(vec![[0.0, 0.0]], alts).unwrap();
        let mut order: Vec<usize> = (0..m).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let target = Ranking::new(order).unwrap();
        let fit = fit_point_for_ranking(&cfg, &target).unwrap();
        assert_eq!(ranking_at(&fit.point, &cfg.alt_points).unwrap(), fit.achieved);
        assert_eq!(fit.achieved.swap_distance(&target).unwrap(), fit.defect);
        assert_eq!(fit.defect, grid_defect(&cfg, &target, -4.0, 4.0, 512), "trial {trial}");
    }
}

#[test]
fn fit_rejects_coincident_alternatives() {
    let cfg = PointConfig::new(vec![[0.0, 0.0]], vec![[1.0, 1.0], [0.0, 1.0], [1.0, 1.0]]).unwrap();
    assert!(fit_point_for_ranking(&cfg, &common::l("abc")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mds_ignores_relabelling(seed in any::<u64>(), shift in 1usize..10) {
        let p = CultureSpec::disc(5, 30, seed).sample_profile().unwrap();
        let rankings: Vec<Ranking> = p.support().cloned().collect();
        prop_assume!(rankings.len() >= 3);
        let n = rankings.len();
        let perm: Vec<usize> = (0..n).map(|i| (i * (2 * shift + 1) + shift) % n).collect();
        prop_assume!({ let mut s = perm.clone(); s.sort(); s.dedup(); s.len() == n });
        let a = classical_mds(&distance_matrix(&rankings).unwrap()).unwrap();
        let shuffled: Vec<Ranking> = perm.iter().map(|&i| rankings[i].clone()).collect();
        let b = classical_mds(&distance_matrix(&shuffled).unwrap()).unwrap();
        let back: Vec<[f64; 2]> = perm.iter().map(|&i| a.coords[i]).collect();
        // Top-two eigenvalue ties make the plane itself ambiguous.
        prop_assume!((a.eigenvalues[1] - a.eigenvalues[2]).abs() > 1e-6);
        prop_assert!(procrustes_residual(&back, &b.coords) <= 1e-6);
    }

    #[test]
    fn fit_never_loses_to_voters(seed in any::<u64>(), m in 3usize..=7) {
        let spec = CultureSpec::disc(m, 15, seed);
        let cfg = spec.sample_points().unwrap();
        let mut order: Vec<usize> = (0..m).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut seeded_rng(seed ^ 1));
        let target = Ranking::new(order).unwrap();
        let fit = fit_point_for_ranking(&cfg, &target).unwrap();
        let best_voter = (0..15).map(|v| voter_ranking(&cfg, v).swap_distance(&target).unwrap()).min().unwrap();
        prop_assert!(fit.defect <= best_voter);
        let own = voter_ranking(&cfg, 0);
        prop_assert_eq!(fit_point_for_ranking(&cfg, &own).unwrap().defect, 0);
    }

    #[test]
    fn stress_vanishes_on_planar_inputs(seed in any::<u64>(), n in 3usize..15) {
        let pts = sample_points(&PointKind::Square, n, &mut seeded_rng(seed)).unwrap();
        let e = classical_mds(&euclidean(&pts)).unwrap();
        prop_assert!(e.stress >= 0.0 && e.stress < 1e-12);
    }
}
