//! Executable proportionality and consistency axioms.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::cost::CostSpec;
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::{enumerate_rankings_with_guard, max_distance, Ranking};
use crate::rational::{round_set_u64, Rational};
use crate::solver::{solve_brute_force, SolveResult};

/// Largest `m` for which the exhaustive single-crossing expectation runs.
pub const SCP_EXHAUSTIVE_LIMIT: usize = 6;

/// A sequence in which every pair of alternatives changes order at most once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleCrossingSequence {
    pub rankings: Vec<Ranking>,
    /// Every pair crosses exactly once: `C(m,2)` adjacent swaps end to end.
    pub maximal: bool,
}

impl SingleCrossingSequence {
    pub fn new(rankings: Vec<Ranking>) -> Result<Self> {
        let first = rankings.first().ok_or_else(|| Error::InvalidRanking("empty sequence".into()))?;
        let m = first.m();
        if let Some(bad) = rankings.iter().find(|r| r.m() != m) {
            return Err(Error::Dimension { expected: m, found: bad.m() });
        }
        if !is_single_crossing(&rankings) {
            return Err(Error::Incompatible("sequence re-crosses a pair".into()));
        }
        let maximal = rankings.len() as u64 == max_distance(m) + 1
            && rankings.windows(2).all(|w| w[0].swap_distance(&w[1]).unwrap() == 1);
        Ok(SingleCrossingSequence { rankings, maximal })
    }

    /// Position of `r` in the sequence.
    pub fn location(&self, r: &Ranking) -> Option<usize> {
        self.rankings.iter().position(|x| x == r)
    }
}

/// True when each pair's relative order flips at most once along `seq`.
pub fn is_single_crossing(seq: &[Ranking]) -> bool {
    if seq.len() < 2 {
        return true;
    }
    let m = seq[0].m();
    let pos: Vec<Vec<usize>> = seq.iter().map(Ranking::positions).collect();
    for a in 0..m {
        for b in a + 1..m {
            let mut flips = 0;
            for w in pos.windows(2) {
                if (w[0][a] < w[0][b]) != (w[1][a] < w[1][b]) {
                    flips += 1;
                }
            }
            if flips > 1 {
                return false;
            }
        }
    }
    true
}

/// Walks from `r1` to `r2` by adjacent swaps, always swapping the
/// left-most adjacent pair that `r2` orders the other way. Every pair
/// changes order at most once, so the path has `swap(r1, r2) + 1` steps.
pub fn build_swap_path(r1: &Ranking, r2: &Ranking) -> Result<SingleCrossingSequence> {
    if r1.m() != r2.m() {
        return Err(Error::Dimension { expected: r1.m(), found: r2.m() });
    }
    let target = r2.positions();
    let mut current = r1.clone();
    let mut path = vec![current.clone()];
    loop {
        let order = current.order();
        let next = (0..order.len() - 1).find(|&i| target[order[i]] > target[order[i + 1]]);
        match next {
            Some(i) => {
                current = current.with_adjacent_swap(i);
                path.push(current.clone());
            }
            None => break,
        }
    }
    let maximal = path.len() as u64 == max_distance(r1.m()) + 1;
    Ok(SingleCrossingSequence { rankings: path, maximal })
}

/// The two-ranking proportional set: rankings `▷` with
/// `swap(≻ᵢ, ▷) ∈ round((1 − R(≻ᵢ))·d)` for both inputs.
pub fn two_rankings_expected(profile: &Profile) -> Result<BTreeSet<Ranking>> {
    let (r1, w1, r2, w2) = two_support(profile)?;
    let d = r1.swap_distance(&r2)?;
    let dr = Rational::from_integer(d as i64);
    let s1 = round_set_u64(&((Rational::one() - w1) * dr.clone()))?;
    let s2 = round_set_u64(&((Rational::one() - w2) * dr))?;
    let mut out = BTreeSet::new();
    for cand in enumerate_rankings_with_guard(profile.m(), 10)? {
        if s1.contains(&r1.swap_distance(&cand)?) && s2.contains(&r2.swap_distance(&cand)?) {
            out.insert(cand);
        }
    }
    Ok(out)
}

fn two_support(profile: &Profile) -> Result<(Ranking, Rational, Ranking, Rational)> {
    if profile.support_size() != 2 {
        return Err(Error::Incompatible(format!(
            "two-ranking check needs support size 2, got {}",
            profile.support_size()
        )));
    }
    let mut it = profile.iter();
    let (r1, w1) = it.next().unwrap();
    let (r2, w2) = it.next().unwrap();
    Ok((r1.clone(), w1.clone(), r2.clone(), w2.clone()))
}

/// Whether the `spec` rule's exact output set equals the two-ranking
/// proportional set.
pub fn satisfies_2rp(profile: &Profile, spec: CostSpec) -> Result<bool> {
    let expected = two_rankings_expected(profile)?;
    let got = solve_brute_force(profile, spec)?;
    Ok(got.optima.into_iter().collect::<BTreeSet<_>>() == expected)
}

pub fn sqk_satisfies_2rp(profile: &Profile) -> Result<bool> {
    satisfies_2rp(profile, CostSpec::SQUARED)
}

/// Orders the support into a single-crossing chain and extends it to a
/// maximal sequence, or returns `None` when the profile is not
/// single-crossing.
///
/// Along a single-crossing sequence the distance from the first ranking
/// strictly increases, so for each possible first ranking sorting the rest
/// by distance is the only candidate order.
pub fn find_single_crossing_order(profile: &Profile) -> Result<Option<SingleCrossingSequence>> {
    if profile.m() > 10 {
        return Err(Error::Capacity { what: "single-crossing search alternatives", requested: profile.m(), limit: 10 });
    }
    if profile.support_size() > 64 {
        return Err(Error::Capacity {
            what: "single-crossing search support",
            requested: profile.support_size(),
            limit: 64,
        });
    }
    let support: Vec<Ranking> = profile.support().cloned().collect();
    for start in &support {
        if let Some(chain) = chain_from(start, &support)? {
            return Ok(Some(extend_chain(&chain)?));
        }
    }
    Ok(None)
}

/// The support sorted by distance from `start`, if it forms a chain of
/// nested disagreement sets (each element on a geodesic to the next).
fn chain_from(start: &Ranking, items: &[Ranking]) -> Result<Option<Vec<Ranking>>> {
    let mut keyed: Vec<(u64, &Ranking)> = items.iter().map(|r| Ok((start.swap_distance(r)?, r))).collect::<Result<_>>()?;
    keyed.sort();
    keyed.dedup_by(|a, b| a.1 == b.1);
    let mut chain = vec![start.clone()];
    let mut prev_d = 0;
    for (d, r) in keyed {
        if r == start {
            continue;
        }
        let last = chain.last().unwrap();
        if d <= prev_d || prev_d + last.swap_distance(r)? != d {
            return Ok(None);
        }
        chain.push(r.clone());
        prev_d = d;
    }
    Ok(Some(chain))
}

fn extend_chain(chain: &[Ranking]) -> Result<SingleCrossingSequence> {
    let mut stops = chain.to_vec();
    stops.push(chain[0].reversed());
    let mut seq = vec![stops[0].clone()];
    for w in stops.windows(2) {
        let seg = build_swap_path(&w[0], &w[1])?;
        seq.extend(seg.rankings.into_iter().skip(1));
    }
    SingleCrossingSequence::new(seq)
}

/// Exhaustive-search reference for [`find_single_crossing_order`]: tries
/// every ordering of up to 8 support rankings.
pub fn single_crossing_order_exhaustive(profile: &Profile) -> Result<bool> {
    let support: Vec<Ranking> = profile.support().cloned().collect();
    if support.len() > 8 {
        return Err(Error::Capacity { what: "exhaustive single-crossing search", requested: support.len(), limit: 8 });
    }
    let n = support.len();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let seq: Vec<Ranking> = idx.iter().map(|&i| support[i].clone()).collect();
        if is_single_crossing(&seq) {
            return Ok(true);
        }
        if !next_perm(&mut idx) {
            return Ok(false);
        }
    }
}

fn next_perm(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Weighted mean location `μ = Σ R(≻ⱼ)·j` of the profile along `seq`.
pub fn mean_location(profile: &Profile, seq: &SingleCrossingSequence) -> Result<Rational> {
    let mut mu = Rational::zero();
    for (r, w) in profile.iter() {
        let j = seq
            .location(r)
            .ok_or_else(|| Error::Incompatible(format!("{r} is not on the sequence")))?;
        mu += &(w * &Rational::from_integer(j as i64));
    }
    Ok(mu)
}

/// `{≻ᵢ : i ∈ round(μ)}` along one maximal sequence containing the support.
pub fn sc_proportional_expected(profile: &Profile, seq: &SingleCrossingSequence) -> Result<BTreeSet<Ranking>> {
    if !seq.maximal {
        return Err(Error::Incompatible("sequence is not maximal".into()));
    }
    let mu = mean_location(profile, seq)?;
    Ok(round_set_u64(&mu)?.into_iter().map(|i| seq.rankings[i as usize].clone()).collect())
}

/// The union of [`sc_proportional_expected`] over every compatible maximal
/// sequence.
///
/// On a maximal sequence starting at `r₀` the ranking at index `i` is at
/// distance `i` from `r₀`, so `μ` depends only on `r₀`. A ranking `x` can sit
/// at index `i` of some compatible sequence exactly when the support plus
/// `x` forms a chain from `r₀`; no path enumeration is needed.
pub fn sc_proportional_expected_exhaustive(profile: &Profile) -> Result<BTreeSet<Ranking>> {
    let m = profile.m();
    if m > SCP_EXHAUSTIVE_LIMIT {
        return Err(Error::Capacity { what: "exhaustive single-crossing expectation", requested: m, limit: SCP_EXHAUSTIVE_LIMIT });
    }
    let support: Vec<Ranking> = profile.support().cloned().collect();
    let all: Vec<Ranking> = enumerate_rankings_with_guard(m, SCP_EXHAUSTIVE_LIMIT)?.collect();
    let mut out = BTreeSet::new();
    for start in &all {
        if chain_from(start, &support)?.is_none() {
            continue;
        }
        let mut mu = Rational::zero();
        for (r, w) in profile.iter() {
            mu += &(w * &Rational::from_integer(start.swap_distance(r)? as i64));
        }
        let targets = round_set_u64(&mu)?;
        let mut extended = support.clone();
        for x in &all {
            if !targets.contains(&start.swap_distance(x)?) {
                continue;
            }
            extended.push(x.clone());
            if chain_from(start, &extended)?.is_some() {
                out.insert(x.clone());
            }
            extended.pop();
        }
    }
    if out.is_empty() {
        return Err(Error::Incompatible("profile is not single-crossing".into()));
    }
    Ok(out)
}

/// `r1` is weakly closer than `r2` to every support ranking and strictly
/// closer to at least one.
pub fn dominates(r1: &Ranking, r2: &Ranking, profile: &Profile) -> Result<bool> {
    let mut strict = false;
    for r in profile.support() {
        let d1 = r.swap_distance(r1)?;
        let d2 = r.swap_distance(r2)?;
        if d1 > d2 {
            return Ok(false);
        }
        strict |= d1 < d2;
    }
    Ok(strict)
}

/// No ranking dominates `output` with respect to the profile.
pub fn is_undominated(output: &Ranking, profile: &Profile) -> Result<bool> {
    for r in enumerate_rankings_with_guard(profile.m(), 10)? {
        if dominates(&r, output, profile)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Participation on one instance: no output of `r1` dominates, with
/// respect to the joining voters `r2`, an output of the mixed profile.
pub fn check_participation_instance(r1: &Profile, r2: &Profile, lambda: &Rational) -> Result<bool> {
    participation_with(r1, r2, lambda, CostSpec::SQUARED)
}

pub fn participation_with(r1: &Profile, r2: &Profile, lambda: &Rational, spec: CostSpec) -> Result<bool> {
    if r1.m() > 6 {
        return Err(Error::Capacity { what: "participation check alternatives", requested: r1.m(), limit: 6 });
    }
    let before = solve_brute_force(r1, spec)?;
    let after = solve_brute_force(&r1.mix(r2, lambda)?, spec)?;
    for b in &before.optima {
        for a in &after.optima {
            if dominates(b, a, r2)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Reinforcement on one instance: `None` when the two output sets are
/// disjoint (the axiom says nothing), otherwise whether the mixed profile's
/// outputs are exactly their intersection.
pub fn check_reinforcement_instance(r1: &Profile, r2: &Profile, lambda: &Rational, spec: CostSpec) -> Result<Option<bool>> {
    let o1: BTreeSet<Ranking> = solve_brute_force(r1, spec)?.optima.into_iter().collect();
    let o2: BTreeSet<Ranking> = solve_brute_force(r2, spec)?.optima.into_iter().collect();
    let both: BTreeSet<Ranking> = o1.intersection(&o2).cloned().collect();
    if both.is_empty() {
        return Ok(None);
    }
    let mixed: BTreeSet<Ranking> = solve_brute_force(&r1.mix(r2, lambda)?, spec)?.optima.into_iter().collect();
    Ok(Some(mixed == both))
}

/// A voter whose true ranking is `truth` gains by switching profiles:
/// every output after the switch is strictly closer to `truth` than every
/// output before it.
pub fn is_profitable_manipulation(truthful: &SolveResult, manipulated: &SolveResult, truth: &Ranking) -> Result<bool> {
    let worst_after = manipulated
        .optima
        .iter()
        .map(|r| truth.swap_distance(r))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(u64::MAX);
    let best_before = truthful
        .optima
        .iter()
        .map(|r| truth.swap_distance(r))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .unwrap_or(0);
    Ok(worst_after < best_before)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Ranking {
        Ranking::from_letters(s).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn swap_path_lengths() {
        let r = l("abc");
        assert_eq!(build_swap_path(&r, &r).unwrap().rankings, vec![r.clone()]);
        let p = build_swap_path(&r, &r.reversed()).unwrap();
        assert_eq!(p.rankings.len(), 4);
        assert!(p.maximal);
    }

    #[test]
    fn two_ranking_sets() {
        let r = l("abc");
        let p = Profile::new([(r.clone(), q("1/2")), (r.reversed(), q("1/2"))]).unwrap();
        let e = two_rankings_expected(&p).unwrap();
        assert_eq!(e.len(), 4);
        assert!(e.iter().all(|x| [1, 2].contains(&r.swap_distance(x).unwrap())));
        let p = Profile::new([(l("abc"), q("99/100")), (l("bac"), q("1/100"))]).unwrap();
        assert_eq!(two_rankings_expected(&p).unwrap(), BTreeSet::from([l("abc")]));
        let p = Profile::new([(r.clone(), q("3/5")), (r.reversed(), q("2/5"))]).unwrap();
        assert!(!satisfies_2rp(&p, CostSpec::KEMENY).unwrap());
        assert!(sqk_satisfies_2rp(&p).unwrap());
        assert!(two_rankings_expected(&Profile::singleton(r)).is_err());
    }

    #[test]
    fn condorcet_cycle_not_single_crossing() {
        let p = Profile::new([(l("abc"), q("1/3")), (l("bca"), q("1/3")), (l("cab"), q("1/3"))]).unwrap();
        assert!(find_single_crossing_order(&p).unwrap().is_none());
        assert!(!single_crossing_order_exhaustive(&p).unwrap());
    }

    #[test]
    fn domination_basics() {
        let r = l("abc");
        let p = Profile::singleton(r.clone());
        assert!(!dominates(&r, &r, &p).unwrap());
        assert!(dominates(&r, &l("acb"), &p).unwrap());
        assert!(is_undominated(&r, &p).unwrap());
    }
}
