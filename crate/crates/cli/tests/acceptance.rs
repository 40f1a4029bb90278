//! Acceptance criteria 1–14. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use rankfair::axioms::*;
use rankfair::bounds::{alpha_curve, group_bound, mu_alpha, single_ranking_bound, worst_profile_single_ranking};
use rankfair::embed::{classical_mds, jacobi_eigen, procrustes_residual, SymmetricMatrix};
use rankfair::mahonian::{mahonian, second_moment};
use rankfair::ranking::max_distance;
use rankfair::sampling::*;
use rankfair::solver::{approx_best_input, kemeny, solve_bnb, solve_brute_force, solve_kemeny_dp, squared_kemeny, Budget};
use rankfair::{enumerate_rankings, fixtures, CostSpec, Profile, Ranking, Rational};
use rankfair_cli::experiments::{city_ranking, group_distance, hotel_interpolation, Culture, GroupParams};

const LP_TOLERANCE: f64 = 1e-6;
const CURVE_TOLERANCE: f64 = 1e-4;
const BOUND_SLACK: f64 = 1e-9;
const PROCRUSTES_TOLERANCE: f64 = 1e-6;
const JACOBI_TOLERANCE: f64 = 1e-8;
const SWEEP_PROFILES: usize = 1000;
const RATIO_PROFILES: usize = 500;
const ORACLE_PROFILES: usize = 200;
const DISC_PROFILES: usize = 100;
const CITY_NODES: u64 = 5_000_000;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn l(s: &str) -> Ranking {
    Ranking::from_letters(s).unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn set(rs: &[Ranking]) -> BTreeSet<Ranking> {
    rs.iter().cloned().collect()
}

fn show(rs: &[Ranking]) -> String {
    rs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(",")
}

fn c1() -> Check {
    let r1 = Profile::new([(l("abc"), q(1, 3)), (l("bac"), q(5, 9)), (l("cab"), q(1, 9))]).map_err(e)?;
    let r2 = Profile::new([(l("abc"), q(1, 3)), (l("bac"), q(4, 9)), (l("cab"), q(1, 9)), (l("cba"), q(1, 9))]).map_err(e)?;
    let a = squared_kemeny(&r1).map_err(e)?;
    let b = squared_kemeny(&r2).map_err(e)?;
    ensure(a.optima == [l("abc")], format!("R1 gave {}", show(&a.optima)))?;
    ensure(b.optima == [l("bac")], format!("R2 gave {}", show(&b.optima)))?;
    Ok(format!("R1 -> abc (cost {}), R2 -> bac (cost {})", a.cost, b.cost))
}

fn extremal(profile: Profile, m: usize, expected: Rational) -> Check {
    let id = Ranking::identity(m).map_err(e)?;
    let out = squared_kemeny(&profile).map_err(e)?;
    let case = worst_profile_single_ranking(m, &id, &id.reversed()).map_err(e)?;
    let lp_ok = (case.alpha - expected.to_f64()).abs() <= LP_TOLERANCE;
    let witness_ok = case.verified_lp
        && case.exact_alpha.as_ref() == Some(&expected)
        && case.witness.as_ref().is_some_and(|w| squared_kemeny(w).is_ok_and(|r| r.optima.contains(&id.reversed())));
    let detail = format!("alpha_max {:.9}, exact {:?}, witness verified {witness_ok}, optima [{}]", case.alpha, case.exact_alpha.map(|a| a.to_string()), show(&out.optima));
    ensure(lp_ok && witness_ok, format!("LP part: {detail}"))?;
    ensure(out.optima == [id.reversed()], format!("output not unique: {detail}"))?;
    Ok(detail)
}

fn c2() -> Check {
    extremal(fixtures::extremal_m4(), 4, q(7, 40))
}

fn c3() -> Check {
    extremal(fixtures::extremal_m5(), 5, q(231, 1318))
}

fn c4() -> Check {
    let h = hotel_interpolation().map_err(e)?;
    ensure(h.distance == 10, format!("price/score distance {}", h.distance))?;
    ensure(h.rows.len() == 9, format!("{} rows", h.rows.len()))?;
    ensure(h.single_crossing, "path is not single-crossing")?;
    ensure(h.unit_steps, "consecutive outputs are not one swap apart")?;
    for row in &h.rows {
        let agree = 10 - row.to_price as i64;
        let want = (row.price_weight.to_f64() * 10.0).round() as i64;
        ensure(agree == want, format!("weight {}: agrees on {agree}, expected {want}", row.price_weight))?;
    }
    Ok(format!("9 outputs, unit steps, published path among optima: {}", h.rows.iter().all(|r| r.matches_published)))
}

fn c5() -> Check {
    let start = Ranking::identity(5).map_err(e)?;
    let seq = build_swap_path(&start, &start.reversed()).map_err(e)?.rankings;
    let w = |n| q(n, 10);
    let p = Profile::new([(seq[0].clone(), w(3)), (seq[2].clone(), w(3)), (seq[4].clone(), w(1)), (seq[10].clone(), w(3))]).map_err(e)?;
    let s = squared_kemeny(&p).map_err(e)?;
    let k = kemeny(&p).map_err(e)?;
    ensure(s.optima == [seq[4].clone()], format!("SqK gave {}", show(&s.optima)))?;
    ensure(k.optima == [seq[2].clone()], format!("Kemeny gave {}", show(&k.optima)))?;
    Ok(format!("SqK = {{{}}}, Kemeny = {{{}}}", seq[4], seq[2]))
}

fn c6() -> Check {
    let mut notes = Vec::new();
    for m in [4, 5] {
        let curve = alpha_curve(m, 50).map_err(e)?;
        ensure(curve.is_non_increasing(), format!("m={m} curve increases"))?;
        for (a, v) in &curve.points {
            let af = a.to_f64();
            let cap = ((1.0 - af) / af).sqrt().min(1.0);
            ensure(*v <= cap + BOUND_SLACK, format!("m={m}: {v} > {cap} at alpha {a}"))?;
        }
        notes.push(format!("m={m} ok"));
    }
    let curve = alpha_curve(6, 50).map_err(e)?;
    let half = curve.value_at(&q(1, 2)).ok_or("no grid point at 1/2")?;
    let high = curve.value_at(&q(49, 50)).ok_or("no grid point at 49/50")?;
    ensure((half - 8.0 / 15.0).abs() <= CURVE_TOLERANCE, format!("m=6 value {half} at 1/2"))?;
    ensure(high == 0.0, format!("m=6 value {high} at 49/50"))?;
    notes.push(format!("m=6: {half:.6} at 1/2, {high} at 49/50"));
    Ok(notes.join("; "))
}

fn c7() -> Check {
    for m in 3..=8usize {
        let c2 = Rational::from_integer(max_distance(m) as i64);
        let mi = m as i64;
        let per = &(&(&c2 * &c2) / &Rational::from_integer(4)) + &q(2 * mi * mi * mi + 3 * mi * mi - 5 * mi, 72);
        let fact: i64 = (1..=mi).product();
        let closed = &Rational::from_integer(fact) * &per;
        let got = Rational::from_integer(second_moment(m).map_err(e)? as i64);
        ensure(got == closed, format!("m={m}: {got} vs {closed}"))?;
        if m <= 7 {
            let id = Ranking::identity(m).map_err(e)?;
            let mut counts = vec![0u64; max_distance(m) as usize + 1];
            let mut total = 0u128;
            for r in enumerate_rankings(m).map_err(e)? {
                let d = id.swap_distance(&r).map_err(e)?;
                counts[d as usize] += 1;
                total += (d * d) as u128;
            }
            ensure(counts == mahonian(m).map_err(e)?, format!("m={m}: Mahonian numbers differ"))?;
            ensure(Rational::from_integer(total as i64) == closed, format!("m={m}: enumeration {total}"))?;
        }
    }
    Ok("m=3..8 exact, enumeration m<=7".into())
}

fn mixed_profile<R: Rng>(i: usize, rng: &mut R) -> Result<Profile, String> {
    let m = rng.random_range(2..=6);
    let n = rng.random_range(3..=30);
    let seed = rng.random();
    let spec = match i % 4 {
        0 => CultureSpec::new(CultureKind::ImpartialCulture, m, n, seed),
        1 => CultureSpec::new(CultureKind::Mallows { center: random_ranking(m, rng).map_err(e)?, phi: rng.random_range(0.2..0.9) }, m, n, seed),
        2 => CultureSpec::disc(m, n, seed),
        _ => CultureSpec::circle(m, n, seed),
    };
    spec.sample_profile().map_err(e)
}

fn c8() -> Check {
    let mut rng = seeded_rng(8);
    let grid: Vec<Rational> = (1..=10).map(|k| q(k, 10)).collect();
    let mut intersecting = 0;
    for i in 0..SWEEP_PROFILES {
        let p = mixed_profile(i, &mut rng)?;
        let m = p.m();
        let out = squared_kemeny(&p).map_err(e)?;
        for r in &out.optima {
            for (s, w) in p.iter() {
                let d = r.swap_distance(s).map_err(e)? as f64;
                ensure(d <= single_ranking_bound(w, m).map_err(e)? + BOUND_SLACK, format!("single-ranking bound broken on profile {i}"))?;
            }
            for a in &grid {
                let mu = mu_alpha(&p, r, a).map_err(e)?.to_f64();
                ensure(mu <= group_bound(a, m).map_err(e)? + BOUND_SLACK, format!("group bound broken on profile {i} at {a}"))?;
            }
            ensure(is_undominated(r, &p).map_err(e)?, format!("dominated output on profile {i}"))?;
        }
        let other = mixed_profile(i + 1, &mut rng)?;
        let other = if other.m() == m { other } else { CultureSpec::new(CultureKind::ImpartialCulture, m, 10, rng.random()).sample_profile().map_err(e)? };
        let lambda = q(rng.random_range(1..=9), 10);
        match check_reinforcement_instance(&p, &other, &lambda, CostSpec::SQUARED).map_err(e)? {
            Some(false) => return Err(format!("reinforcement fails on pair {i}")),
            Some(true) => intersecting += 1,
            None => {}
        }
    }
    for i in 0..SWEEP_PROFILES {
        let m = rng.random_range(2..=6);
        let p = random_two_ranking_profile(m, 20, &mut rng).map_err(e)?;
        ensure(sqk_satisfies_2rp(&p).map_err(e)?, format!("2RP fails on profile {i}"))?;
        let p = random_single_crossing_profile(m, rng.random_range(1..=6), 20, &mut rng).map_err(e)?;
        let got = set(&squared_kemeny(&p).map_err(e)?.optima);
        ensure(sc_proportional_expected_exhaustive(&p).map_err(e)? == got, format!("SCP fails on profile {i}"))?;
    }
    Ok(format!("{SWEEP_PROFILES} profiles per check, reinforcement applicable on {intersecting}"))
}

fn c9() -> Check {
    let mut rng = seeded_rng(9);
    let (mut worst_input, mut worst_kemeny) = (0.0f64, 0.0f64);
    for i in 0..RATIO_PROFILES {
        let p = mixed_profile(i, &mut rng)?;
        let opt = squared_kemeny(&p).map_err(e)?.cost;
        if opt.is_zero() {
            continue;
        }
        let a = (&p.power_cost(&approx_best_input(&p), 2).map_err(e)? / &opt).to_f64();
        ensure(a <= 4.0, format!("best-input ratio {a} on profile {i}"))?;
        worst_input = worst_input.max(a);
        for k in kemeny(&p).map_err(e)?.optima {
            let b = (&p.power_cost(&k, 2).map_err(e)? / &opt).to_f64();
            ensure(b <= 2.0, format!("Kemeny ratio {b} on profile {i}"))?;
            worst_kemeny = worst_kemeny.max(b);
        }
    }
    Ok(format!("worst ratios: best input {worst_input:.4}, Kemeny {worst_kemeny:.4}"))
}

fn c10() -> Check {
    let p = fixtures::divergence_profile(5, &q(1, 200)).map_err(e)?;
    let id = Ranking::identity(5).map_err(e)?;
    let k = kemeny(&p).map_err(e)?;
    let s = squared_kemeny(&p).map_err(e)?;
    ensure(k.optima == [id.clone()], format!("Kemeny gave {}", show(&k.optima)))?;
    for r in &s.optima {
        let d = r.swap_distance(&id).map_err(e)?;
        ensure(d == max_distance(5) - 1, format!("SqK output {r} at distance {d}"))?;
    }
    Ok(format!("Kemeny {{{id}}}, SqK {{{}}} at distance 9", show(&s.optima)))
}

fn c11() -> Check {
    let c = city_ranking(CITY_NODES).map_err(e)?;
    ensure(c.kemeny_cost == c.published_kemeny_kemeny_cost, format!("Kemeny DP {} vs published {}", c.kemeny_cost, c.published_kemeny_kemeny_cost))?;
    ensure(c.published_sqk_locally_optimal, "published SqK column is not locally optimal")?;
    ensure(c.published_sqk_cost < c.published_kemeny_sqk_cost, format!("SqK costs {} vs {}", c.published_sqk_cost, c.published_kemeny_sqk_cost))?;
    let status = match &c.sqk.proof {
        rankfair::Proof::Heuristic { lower_bound } => format!("gap [{lower_bound}, {}]", c.sqk.cost),
        p => format!("certified by {p} at {}", c.sqk.cost),
    };
    Ok(format!("Kemeny cost {}, {} tied, perturbed pick is published: {}; SqK {status}", c.kemeny_cost, c.kemeny_optima.len(), c.kemeny_selected == c.published_kemeny))
}

fn c12() -> Check {
    let r = group_distance(&GroupParams { culture: Culture::Disc, m: 8, n: 50, profiles: DISC_PROFILES, lower: false, seed: 12 }).map_err(e)?;
    for ((a, s), k) in r.alphas.iter().zip(&r.sqk).zip(&r.kemeny) {
        let af = a.to_f64();
        if af <= 0.6 {
            ensure(s <= k, format!("alpha {a}: SqK {s} above Kemeny {k}"))?;
        }
        if af >= 0.95 {
            ensure(s >= k, format!("alpha {a}: SqK {s} below Kemeny {k}"))?;
        }
    }
    Ok(format!("{DISC_PROFILES} disc profiles, direction holds"))
}

fn c13() -> Check {
    let mut rng = seeded_rng(13);
    for i in 0..ORACLE_PROFILES {
        let m = rng.random_range(2..=7);
        let support = rng.random_range(1..=8);
        let p = Profile::from_counts((0..support).map(|_| (random_ranking(m, &mut rng).unwrap(), rng.random_range(1..=10)))).map_err(e)?;
        for exp in [1, 2] {
            let spec = CostSpec::new(exp).map_err(e)?;
            let b = solve_bnb(&p, spec, Budget::unlimited()).map_err(e)?;
            let f = solve_brute_force(&p, spec).map_err(e)?;
            ensure(b.cost == f.cost && b.optima == f.optima, format!("profile {i}, p={exp}: bnb differs"))?;
            if exp == 1 {
                ensure(solve_kemeny_dp(&p).map_err(e)?.cost == f.cost, format!("profile {i}: DP cost differs"))?;
            }
        }
    }
    Ok(format!("{ORACLE_PROFILES} profiles, p in {{1,2}}"))
}

fn c14() -> Check {
    let mut rng = seeded_rng(14);
    let mut worst = 0.0f64;
    for n in [3, 8, 20, 50] {
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]).collect();
        let d = SymmetricMatrix::from_fn(n, |i, j| ((pts[i][0] - pts[j][0]).powi(2) + (pts[i][1] - pts[j][1]).powi(2)).sqrt()).map_err(e)?;
        let r = procrustes_residual(&classical_mds(&d).map_err(e)?.coords, &pts);
        ensure(r <= PROCRUSTES_TOLERANCE, format!("n={n}: residual {r}"))?;
        worst = worst.max(r);
    }
    let mut rel = 0.0f64;
    for n in [5, 30, 80] {
        let a = SymmetricMatrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0)).map_err(e)?;
        let eig = jacobi_eigen(&a).map_err(e)?;
        let mut err = 0.0;
        for i in 0..n {
            for j in 0..n {
                let rec: f64 = (0..n).map(|k| eig.values[k] * eig.vectors[k][i] * eig.vectors[k][j]).sum();
                err += (rec - a.get(i, j)).powi(2);
            }
        }
        let r = err.sqrt() / a.frobenius_norm();
        ensure(r <= JACOBI_TOLERANCE, format!("n={n}: relative error {r}"))?;
        rel = rel.max(r);
    }
    Ok(format!("Procrustes worst {worst:.2e}, Jacobi worst {rel:.2e}"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 14] = [
        ("R1/R2 fixtures", Duration::from_millis(1), c1),
        ("m=4 reverse-ranking profile", Duration::from_secs(10), c2),
        ("m=5 reverse-ranking profile", Duration::from_secs(600), c3),
        ("hotel interpolation", Duration::from_secs(1), c4),
        ("single-crossing example", Duration::from_secs(1), c5),
        ("alpha curves", Duration::from_secs(1800), c6),
        ("Mahonian second moment", Duration::from_secs(10), c7),
        ("property sweeps", Duration::from_secs(1200), c8),
        ("approximation ratios", Duration::from_secs(300), c9),
        ("Kemeny/SqK divergence", Duration::from_secs(1), c10),
        ("city reproduction", Duration::from_secs(60), c11),
        ("disc group distances", Duration::from_secs(900), c12),
        ("oracle equivalence", Duration::from_secs(600), c13),
        ("MDS self-consistency", Duration::from_secs(60), c14),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let took = start.elapsed();
        let result = match result {
            Ok(d) if took > budget => Err(format!("{d}; took {took:.2?}, budget {budget:?}")),
            r => r,
        };
        match result {
            Ok(d) => println!("PASS {id:>2} {name} ({took:.2?}): {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({took:.2?}): {d}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
