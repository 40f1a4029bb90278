//! Worst-case proportionality bounds for Squared Kemeny.
//!
//! Closed-form guarantees ([`single_ranking_bound`], [`group_bound`]), the
//! exact group statistic [`mu_alpha`], and three families of linear programs
//! over all `m!` rankings that compute the worst cases exactly for small `m`.
//! Every program fixes the focal (or output) ranking to the identity.

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::CostSpec;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, verify_solution, LinearProgram, LpSolution, LpStatus, Relation, Sense};
use crate::mahonian::mean_squared_distance;
use crate::profile::Profile;
use crate::ranking::{enumerate_rankings_with_guard, max_distance, Ranking};
use crate::rational::Rational;
use crate::solver::{solve, Budget, Method};

/// Programs over all rankings are built up to this many alternatives.
pub const LP_GUARD: usize = 6;
/// Largest denominator tried when snapping LP weights to rationals.
pub const SNAP_DENOMINATOR: u64 = 1_000_000;
const LP_TOLERANCE: f64 = 1e-8;
const SUPPORT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    SingleRankingWorst,
    GroupWorst,
    GroupLowerBound,
    TheoreticalUpper,
}

/// Normalised swap distance (`C(m,2)` maps to 1) as a function of weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaCurve {
    pub m: usize,
    pub kind: CurveKind,
    pub points: Vec<(Rational, f64)>,
}

impl AlphaCurve {
    pub fn value_at(&self, alpha: &Rational) -> Option<f64> {
        self.points.iter().find(|(a, _)| a == alpha).map(|(_, v)| *v)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,value\n");
        for (a, v) in &self.points {
            out.push_str(&format!("{},{v:.6}\n", a.to_f64()));
        }
        out
    }
}

/// `α = k/steps` for `k = 1..=steps`.
pub fn alpha_grid(steps: u32) -> Vec<Rational> {
    (1..=steps).map(|k| Rational::new(k as i64, steps as i64).expect("positive steps")).collect()
}

/// `q = k/steps` for `k = 0..=steps`.
pub fn q_grid(steps: u32) -> Vec<f64> {
    (0..=steps).map(|k| k as f64 / steps as f64).collect()
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if !alpha.is_positive() || *alpha > Rational::one() {
        return Err(Error::OutOfRange(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

/// Largest swap distance between the Squared Kemeny output and an input
/// ranking of weight `α`: `min(1, sqrt((1-α)/α)) · C(m,2)`.
pub fn single_ranking_bound(alpha: &Rational, m: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let a = alpha.to_f64();
    Ok(((1.0 - a) / a).sqrt().min(1.0) * max_distance(m) as f64)
}

/// Largest average swap distance between the output and a group of size
/// `α`: `sqrt((C(m,2)²/4 + (2m³+3m²-5m)/72) / α)`.
pub fn group_bound(alpha: &Rational, m: usize) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((mean_squared_distance(m).to_f64() / alpha.to_f64()).sqrt())
}

/// The worst average distance to `cand` over subprofiles of size `α`,
/// taking the farthest rankings first.
pub fn mu_alpha(profile: &Profile, cand: &Ranking, alpha: &Rational) -> Result<Rational> {
    check_alpha(alpha)?;
    let mut by_distance = profile
        .iter()
        .map(|(r, w)| Ok((r.swap_distance(cand)?, w)))
        .collect::<Result<Vec<_>>>()?;
    by_distance.sort_by(|a, b| b.0.cmp(&a.0));
    let mut left = alpha.clone();
    let mut total = Rational::zero();
    for (d, w) in by_distance {
        if !left.is_positive() {
            break;
        }
        let take = if *w < left { w.clone() } else { left.clone() };
        total += &(&take * &Rational::from_integer(d as i64));
        left -= &take;
    }
    Ok(&total / alpha)
}

/// Theoretical upper curves, capped at 1.
pub fn upper_curve(m: usize, group: bool, steps: u32) -> Result<AlphaCurve> {
    let c = max_distance(m) as f64;
    let points = alpha_grid(steps)
        .into_iter()
        .map(|a| {
            let v = if group { group_bound(&a, m)? } else { single_ranking_bound(&a, m)? };
            Ok((a, (v / c).min(1.0)))
        })
        .collect::<Result<_>>()?;
    Ok(AlphaCurve { m, kind: CurveKind::TheoreticalUpper, points })
}

struct Universe {
    rankings: Vec<Ranking>,
    dist: Vec<Vec<u64>>,
    identity: usize,
}

impl Universe {
    fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::OutOfRange("need at least two alternatives".into()));
        }
        let rankings: Vec<Ranking> = enumerate_rankings_with_guard(m, LP_GUARD)?.collect();
        let dist = rankings
            .iter()
            .map(|a| rankings.iter().map(|b| a.swap_distance(b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let identity = rankings.iter().position(|r| *r == Ranking::identity(m).expect("m >= 2")).expect("present");
        Ok(Universe { rankings, dist, identity })
    }

    fn len(&self) -> usize {
        self.rankings.len()
    }

    fn index(&self, r: &Ranking) -> Result<usize> {
        self.rankings
            .binary_search(r)
            .map_err(|_| Error::Dimension { expected: self.rankings[0].m(), found: r.m() })
    }

    /// Row coefficients `d(≻,▷)² − d(≻,t)²` over weight variables.
    fn optimality_row(&self, cand: usize, target: usize) -> Vec<f64> {
        (0..self.len())
            .map(|s| {
                let a = self.dist[s][cand] as f64;
                let b = self.dist[s][target] as f64;
                a * a - b * b
            })
            .collect()
    }
}

/// Result of the single-ranking program.
#[derive(Clone, Debug)]
pub struct WorstCase {
    /// The LP optimum; 0 when the target is never optimal.
    pub alpha: f64,
    /// The exact optimum, when a witness was recovered and verified.
    pub exact_alpha: Option<Rational>,
    /// A profile with the focal weight equal to `exact_alpha` on which the
    /// target is a Squared Kemeny ranking.
    pub witness: Option<Profile>,
    pub verified_lp: bool,
    /// `exact_alpha` matches an exact dual upper bound, so it is the optimum.
    pub certified: bool,
}

/// Largest weight of `focal` in a profile for which `target` is among the
/// Squared Kemeny rankings, with a verified witness profile.
pub fn worst_profile_single_ranking(m: usize, focal: &Ranking, target: &Ranking) -> Result<WorstCase> {
    let universe = Universe::new(m)?;
    // Relabel so the focal ranking becomes the identity.
    let relabel = inverse(focal.order());
    let f = universe.index(&focal.permuted(&relabel)?)?;
    let t = universe.index(&target.permuted(&relabel)?)?;
    debug_assert_eq!(f, universe.identity);
    let case = single_program(&universe, f, t, true)?;
    let witness = match case.witness {
        Some(w) => Some(w.permuted(focal.order())?),
        None => None,
    };
    Ok(WorstCase { witness, ..case })
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (i, &a) in order.iter().enumerate() {
        inv[a] = i;
    }
    inv
}

fn single_program(u: &Universe, focal: usize, target: usize, want_witness: bool) -> Result<WorstCase> {
    let n = u.len();
    let mut objective = vec![0.0; n];
    objective[focal] = 1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    lp.add(vec![1.0; n], Relation::Equal, 1.0);
    for cand in (0..n).filter(|&c| c != target) {
        lp.add(u.optimality_row(cand, target), Relation::GreaterEq, 0.0);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Ok(WorstCase { alpha: 0.0, exact_alpha: None, witness: None, verified_lp: false, certified: false });
    }
    let verified_lp = verify_solution(&lp, &sol, LP_TOLERANCE);
    let alpha = sol.objective_value.max(0.0);
    if !want_witness || alpha <= SUPPORT {
        return Ok(WorstCase { alpha, exact_alpha: None, witness: None, verified_lp, certified: false });
    }
    let witness = exact_vertex(u, &lp, &sol, target)
        .or_else(|| snapped(u, &sol.values, target))
        .filter(|p| (p.weight(&u.rankings[focal]).to_f64() - alpha).abs() <= 1e-6);
    let exact_alpha = witness.as_ref().map(|p| p.weight(&u.rankings[focal]));
    let certified = match (&exact_alpha, dual_upper_bound(u, &sol, focal, target)) {
        (Some(lo), Some(hi)) => *lo == hi,
        _ => false,
    };
    Ok(WorstCase { alpha, exact_alpha, witness, verified_lp, certified })
}

/// Solves the rows that are tight at the final basis, over the basic
/// variables, in exact arithmetic.
fn exact_vertex(u: &Universe, lp: &LinearProgram, sol: &LpSolution, target: usize) -> Option<Profile> {
    let vars = &sol.basic_vars;
    let rows: Vec<Vec<Rational>> = lp
        .constraints
        .iter()
        .enumerate()
        .filter(|(i, _)| !sol.loose_rows.contains(i))
        .map(|(_, c)| {
            let mut row: Vec<Rational> = vars.iter().map(|&i| Rational::from_integer(c.coeffs[i] as i64)).collect();
            row.push(Rational::from_integer(c.rhs as i64));
            row
        })
        .collect();
    let values = gaussian_unique(rows, vars.len())?;
    if values.iter().any(|v| v.is_negative()) {
        return None;
    }
    let profile = Profile::new(vars.iter().zip(values).map(|(&i, w)| (u.rankings[i].clone(), w))).ok()?;
    certify(profile, &u.rankings[target])
}

/// An exact upper bound on the program optimum. Multipliers for the rows
/// tight at the final basis come from the exact basis system (rounded LP
/// duals as a fallback); positive ones are dropped, and the weight-sum
/// multiplier is raised until dual feasibility holds.
fn dual_upper_bound(u: &Universe, sol: &LpSolution, focal: usize, target: usize) -> Option<Rational> {
    let cands: Vec<usize> = (0..u.len()).filter(|&c| c != target).collect();
    let coeff = |s: usize, c: usize| {
        let (a, b) = (u.dist[s][c], u.dist[s][target]);
        Rational::from_integer((a * a) as i64 - (b * b) as i64)
    };
    let tight: Vec<usize> = (1..=cands.len()).filter(|i| !sol.loose_rows.contains(i)).collect();
    let system: Vec<Vec<Rational>> = sol
        .basic_vars
        .iter()
        .map(|&s| {
            let mut row = vec![Rational::one()];
            row.extend(tight.iter().map(|&i| coeff(s, cands[i - 1])));
            row.push(if s == focal { Rational::one() } else { Rational::zero() });
            row
        })
        .collect();
    let mut y = vec![Rational::zero(); cands.len()];
    match gaussian_unique(system, tight.len() + 1) {
        Some(sol_y) => {
            for (&i, v) in tight.iter().zip(&sol_y[1..]) {
                y[i - 1] = v.clone();
            }
        }
        None => {
            for (k, yk) in y.iter_mut().enumerate() {
                *yk = Rational::approximate(sol.duals[k + 1], SNAP_DENOMINATOR).ok()?;
            }
        }
    }
    for yk in y.iter_mut() {
        if yk.is_positive() {
            *yk = Rational::zero();
        }
    }
    (0..u.len())
        .map(|s| {
            let mut v = if s == focal { Rational::one() } else { Rational::zero() };
            for (&c, yc) in cands.iter().zip(&y) {
                if !yc.is_zero() {
                    v -= &(yc * &coeff(s, c));
                }
            }
            v
        })
        .max()
}

fn snapped(u: &Universe, x: &[f64], target: usize) -> Option<Profile> {
    let entries = (0..x.len())
        .filter(|&i| x[i] > SUPPORT)
        .map(|i| Ok((u.rankings[i].clone(), Rational::approximate(x[i], SNAP_DENOMINATOR)?)))
        .collect::<Result<Vec<_>>>()
        .ok()?;
    certify(Profile::normalized(entries).ok()?, &u.rankings[target])
}

/// Keeps the profile only if the exact solver returns `target` among its optima.
fn certify(profile: Profile, target: &Ranking) -> Option<Profile> {
    let result = solve(&profile, CostSpec::SQUARED, Method::Auto, Budget::unlimited()).ok()?;
    (result.proof.is_exact() && result.optima.contains(target)).then_some(profile)
}

/// The unique solution of `rows · x = rhs` (last column), if any.
fn gaussian_unique(mut rows: Vec<Vec<Rational>>, unknowns: usize) -> Option<Vec<Rational>> {
    let mut pivot_row = 0;
    let mut pivot_cols = Vec::new();
    for col in 0..unknowns {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip().ok()?;
        for v in rows[pivot_row].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= &(&f * pv);
                }
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }
    if pivot_cols.len() < unknowns || rows[pivot_row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    Some((0..unknowns).map(|i| rows[i][unknowns].clone()).collect())
}

/// Exact certified optima are recovered up to this many alternatives.
pub const EXACT_CURVE_LIMIT: usize = 6;

/// The single-ranking program's optimum for one target.
#[derive(Clone, Debug)]
pub struct TargetBound {
    pub target: Ranking,
    /// Swap distance from the identity.
    pub distance: u64,
    pub alpha: f64,
    /// The certified exact optimum, when recovered.
    pub exact: Option<Rational>,
}

impl TargetBound {
    /// Whether the target is reachable at focal weight `alpha`.
    pub fn reaches(&self, alpha: &Rational) -> bool {
        match &self.exact {
            Some(e) => alpha <= e,
            None => self.alpha >= alpha.to_f64() - 1e-7,
        }
    }
}

/// `α_max` for every target ranking, with the identity as focal ranking.
pub fn alpha_max_by_target(m: usize) -> Result<Vec<TargetBound>> {
    let u = Universe::new(m)?;
    let exact = m <= EXACT_CURVE_LIMIT;
    (0..u.len())
        .into_par_iter()
        .map(|t| {
            let distance = u.dist[u.identity][t];
            if t == u.identity {
                return Ok(TargetBound { target: u.rankings[t].clone(), distance, alpha: 1.0, exact: Some(Rational::one()) });
            }
            let case = single_program(&u, u.identity, t, exact)?;
            let exact = if case.certified { case.exact_alpha } else { None };
            Ok(TargetBound { target: u.rankings[t].clone(), distance, alpha: case.alpha, exact })
        })
        .collect()
}

/// The worst normalised distance between Squared Kemeny and an input ranking
/// of weight `α`, on the grid `α = k/steps`.
pub fn alpha_curve(m: usize, steps: u32) -> Result<AlphaCurve> {
    let table = alpha_max_by_target(m)?;
    Ok(curve_from_table(m, &table, steps))
}

pub fn curve_from_table(m: usize, table: &[TargetBound], steps: u32) -> AlphaCurve {
    let c = max_distance(m) as f64;
    let points = alpha_grid(steps)
        .into_iter()
        .map(|alpha| {
            let v = table.iter().filter(|t| t.reaches(&alpha)).map(|t| t.distance).max().unwrap_or(0);
            (alpha, v as f64 / c)
        })
        .collect();
    AlphaCurve { m, kind: CurveKind::SingleRankingWorst, points }
}

/// Largest group size for one value of `q`.
#[derive(Clone, Debug)]
pub struct GroupPoint {
    pub q: f64,
    pub alpha: f64,
    /// The LP weights, snapped to rationals and renormalised.
    pub witness: Option<Profile>,
}

/// Largest `α` such that some profile with the identity among its Squared
/// Kemeny rankings has a subprofile of size exactly `α` at average distance
/// at least `q·C(m,2)` from the identity.
pub fn worst_group_alpha(m: usize, q: f64) -> Result<GroupPoint> {
    let u = Universe::new(m)?;
    group_program(&u, q)
}

fn group_program(u: &Universe, q: f64) -> Result<GroupPoint> {
    check_q(q)?;
    let n = u.len();
    let c = max_distance(u.rankings[0].m()) as f64;
    // Variables: weights 0..n, group n..2n.
    let mut objective = vec![0.0; 2 * n];
    objective[n..].iter_mut().for_each(|x| *x = 1.0);
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    for s in 0..n {
        lp.add_sparse(&[(n + s, 1.0), (s, -1.0)], Relation::LessEq, 0.0);
    }
    let mut dist_row = vec![0.0; 2 * n];
    for s in 0..n {
        dist_row[n + s] = u.dist[s][u.identity] as f64 - q * c;
    }
    lp.add(dist_row, Relation::GreaterEq, 0.0);
    let mut sum = vec![0.0; 2 * n];
    sum[..n].iter_mut().for_each(|x| *x = 1.0);
    lp.add(sum, Relation::Equal, 1.0);
    for cand in (0..n).filter(|&x| x != u.identity) {
        let mut row = u.optimality_row(cand, u.identity);
        row.resize(2 * n, 0.0);
        lp.add(row, Relation::GreaterEq, 0.0);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("group program at q = {q} ended {:?}", sol.status)));
    }
    let witness = snap_weights(u, &sol.values[..n]);
    Ok(GroupPoint { q, alpha: sol.objective_value.clamp(0.0, 1.0), witness })
}

/// Largest `α` such that one profile makes every output ranking bad: for
/// each ranking some subprofile of size `α` sits at average distance at
/// least `q·C(m,2)` from it. Only `m <= 5` is accepted.
pub fn lower_bound_alpha(m: usize, q: f64) -> Result<GroupPoint> {
    if m > 5 {
        return Err(Error::Capacity { what: "lower-bound program alternatives", requested: m, limit: 5 });
    }
    let u = Universe::new(m)?;
    lower_program(&u, q)
}

fn lower_program(u: &Universe, q: f64) -> Result<GroupPoint> {
    check_q(q)?;
    let n = u.len();
    let c = max_distance(u.rankings[0].m()) as f64;
    // Variables: α at 0, weights 1..=n, then group[out][s] at 1 + n + out·n + s.
    let vars = 1 + n + n * n;
    let g = |out: usize, s: usize| 1 + n + out * n + s;
    let mut objective = vec![0.0; vars];
    objective[0] = 1.0;
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    lp.add_sparse(&(1..=n).map(|i| (i, 1.0)).collect::<Vec<_>>(), Relation::Equal, 1.0);
    for out in 0..n {
        for s in 0..n {
            lp.add_sparse(&[(g(out, s), 1.0), (1 + s, -1.0)], Relation::LessEq, 0.0);
        }
        let mut size: Vec<(usize, f64)> = (0..n).map(|s| (g(out, s), 1.0)).collect();
        size.push((0, -1.0));
        lp.add_sparse(&size, Relation::Equal, 0.0);
        let far: Vec<(usize, f64)> = (0..n).map(|s| (g(out, s), u.dist[s][out] as f64 - q * c)).collect();
        lp.add_sparse(&far, Relation::GreaterEq, 0.0);
    }
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("lower-bound program at q = {q} ended {:?}", sol.status)));
    }
    let witness = snap_weights(u, &sol.values[1..=n]);
    Ok(GroupPoint { q, alpha: sol.objective_value.clamp(0.0, 1.0), witness })
}

fn check_q(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange(format!("q must lie in [0, 1], got {q}")));
    }
    Ok(())
}

fn snap_weights(u: &Universe, w: &[f64]) -> Option<Profile> {
    let entries: Vec<(Ranking, Rational)> = w
        .iter()
        .enumerate()
        .filter(|(_, x)| **x > SUPPORT)
        .filter_map(|(i, x)| Some((u.rankings[i].clone(), Rational::approximate(*x, SNAP_DENOMINATOR).ok()?)))
        .collect();
    Profile::normalized(entries).ok()
}

fn invert(m: usize, kind: CurveKind, points: &[GroupPoint], steps: u32) -> AlphaCurve {
    let curve = alpha_grid(steps)
        .into_iter()
        .map(|alpha| {
            let a = alpha.to_f64();
            let v = points.iter().filter(|p| p.alpha >= a - 1e-9).map(|p| p.q).fold(0.0, f64::max);
            (alpha, v)
        })
        .collect();
    AlphaCurve { m, kind, points: curve }
}

/// Solves the group program at every `q` and inverts to a curve over `α = k/steps`.
pub fn worst_group_curve(m: usize, qs: &[f64], steps: u32) -> Result<(AlphaCurve, Vec<GroupPoint>)> {
    if m > 5 {
        return Err(Error::Capacity { what: "group program alternatives", requested: m, limit: 5 });
    }
    let u = Universe::new(m)?;
    let points = qs.par_iter().map(|&q| group_program(&u, q)).collect::<Result<Vec<_>>>()?;
    Ok((invert(m, CurveKind::GroupWorst, &points, steps), points))
}

/// Solves the lower-bound program at every `q` and inverts to a curve.
pub fn lower_bound_curve(m: usize, qs: &[f64], steps: u32) -> Result<(AlphaCurve, Vec<GroupPoint>)> {
    if m > 5 {
        return Err(Error::Capacity { what: "lower-bound program alternatives", requested: m, limit: 5 });
    }
    let u = Universe::new(m)?;
    let points = qs.par_iter().map(|&q| lower_program(&u, q)).collect::<Result<Vec<_>>>()?;
    Ok((invert(m, CurveKind::GroupLowerBound, &points, steps), points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a, b).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(single_ranking_bound(&q(1, 2), 6).unwrap(), 15.0);
        assert_eq!(single_ranking_bound(&q(1, 1), 6).unwrap(), 0.0);
        assert!((single_ranking_bound(&q(4, 5), 6).unwrap() - 7.5).abs() < 1e-12);
        assert!(single_ranking_bound(&q(0, 1), 6).is_err());
        assert!((group_bound(&q(1, 1), 3).unwrap() - (19.0f64 / 6.0).sqrt()).abs() < 1e-12);
        assert!(group_bound(&q(1, 4), 6).unwrap() >= 15.0);
    }

    #[test]
    fn mu_alpha_on_opposites() {
        let r = Ranking::identity(4).unwrap();
        let p = Profile::new([(r.clone(), q(1, 2)), (r.reversed(), q(1, 2))]).unwrap();
        assert_eq!(mu_alpha(&p, &r, &q(1, 2)).unwrap(), Rational::from_integer(6));
        assert_eq!(mu_alpha(&p, &r, &q(1, 1)).unwrap(), Rational::from_integer(3));
        assert_eq!(mu_alpha(&p, &r, &q(1, 4)).unwrap(), Rational::from_integer(6));
    }

    #[test]
    fn single_program_small_cases() {
        let id = Ranking::identity(2).unwrap();
        let c = worst_profile_single_ranking(2, &id, &id.reversed()).unwrap();
        assert!((c.alpha - 0.5).abs() < 1e-9);
        assert_eq!(c.exact_alpha, Some(q(1, 2)));
        let id3 = Ranking::identity(3).unwrap();
        let same = worst_profile_single_ranking(3, &id3, &id3).unwrap();
        assert!((same.alpha - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_detects_rank_deficiency() {
        let r = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x)).collect::<Vec<_>>();
        assert_eq!(gaussian_unique(vec![r(&[1, 1, 3]), r(&[1, -1, 1])], 2), Some(r(&[2, 1])));
        assert_eq!(gaussian_unique(vec![r(&[1, 1, 3]), r(&[2, 2, 6])], 2), None);
        assert_eq!(gaussian_unique(vec![r(&[1, 1]), r(&[1, 2])], 1), None);
    }

    #[test]
    fn group_program_endpoints() {
        assert!((worst_group_alpha(3, 0.0).unwrap().alpha - 1.0).abs() < 1e-9);
        assert!((lower_bound_alpha(3, 0.0).unwrap().alpha - 1.0).abs() < 1e-9);
    }
}
