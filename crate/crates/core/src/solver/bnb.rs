use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use super::approx::seeded;
use super::{Proof, SolveResult};
use crate::cost::{CostSpec, Evaluator};
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::{max_distance, Ranking};

/// Alternatives are tracked in 64-bit masks.
const BNB_LIMIT: usize = 64;
/// Tie sets are tracked up to this many alternatives.
const TIE_TRACKING_LIMIT: usize = 12;

/// Search limits for [`solve_bnb`]. Exhausting either yields a
/// [`Proof::Heuristic`] result carrying a certified lower bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Self {
        Budget { max_nodes: Some(n), max_time: None }
    }

    pub fn time(d: Duration) -> Self {
        Budget { max_nodes: None, max_time: Some(d) }
    }
}

/// Depth-first branch and bound over ranking prefixes.
///
/// A node fixes the top alternatives; every pair touching a placed
/// alternative is then decided for every voter. The bound at a node is the
/// best of three convex underestimates of `Σ w·d^p`: the decided part
/// alone (tightened by the triangle inequality through the seed ranking),
/// and two tangent linearisations whose undecided pairs are charged the
/// cheaper of their two orientations.
pub fn solve_bnb(profile: &Profile, spec: CostSpec, budget: Budget) -> Result<SolveResult> {
    let m = profile.m();
    if m > BNB_LIMIT {
        return Err(Error::Capacity { what: "branch and bound", requested: m, limit: BNB_LIMIT });
    }
    let eval = Evaluator::new(profile, spec);
    let weights: Vec<i128> = eval
        .small_weights()
        .ok_or_else(|| Error::Precision("scaled weights exceed 64 bits".into()))?
        .iter()
        .map(|&w| w as i128)
        .collect();
    let p = spec.exponent();
    let dmax = max_distance(m);
    let total_weight: BigInt = weights.iter().map(|&w| BigInt::from(w)).sum();
    let worst = total_weight * BigInt::from(dmax).pow(p) * BigInt::from(2 * p as u64 + 2);
    if worst.bits() > 120 {
        return Err(Error::Precision("costs exceed the 128-bit search arithmetic".into()));
    }
    let f: Vec<i128> = (0..=dmax).map(|d| (d as i128).pow(p)).collect();
    let fp: Vec<i128> = (0..=dmax).map(|d| p as i128 * (d as i128).pow(p - 1)).collect();

    let seed = seeded(profile, spec);
    let voters = eval.rankings();
    let above: Vec<Vec<u64>> = voters.iter().map(above_masks).collect();
    let seed_above = above_masks(&seed);
    let seed_dist: Vec<u32> = voters.iter().map(|r| r.swap_distance(&seed).map(|d| d as u32)).collect::<Result<_>>()?;
    let seed_cost = cost_of(&weights, &f, &seed_dist);

    let mut search = Search {
        weights: &weights,
        f: &f,
        fp: &fp,
        above: &above,
        seed_above: &seed_above,
        seed_dist: seed_dist.clone(),
        best: seed_cost,
        best_dist: seed_dist,
        optima: BTreeSet::from([seed.order().to_vec()]),
        track_ties: m <= TIE_TRACKING_LIMIT,
        open_lb: None,
        nodes: 0,
        budget,
        start: Instant::now(),
        exhausted: false,
    };
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut prefix = Vec::with_capacity(m);
    let decided = vec![0u32; voters.len()];
    search.dfs(&mut prefix, full, &decided, 0);

    let cost = eval.to_rational(BigInt::from(search.best));
    let optima = search.optima.into_iter().map(Ranking::new).collect::<Result<Vec<_>>>()?;
    let proof = if search.exhausted {
        let lb = search.open_lb.map_or(search.best, |b| b.min(search.best)).max(0);
        Proof::Heuristic { lower_bound: eval.to_rational(BigInt::from(lb)) }
    } else {
        Proof::BranchAndBound
    };
    Ok(SolveResult { optima, cost, proof })
}

/// `masks[a]`: alternatives ranked above `a`.
fn above_masks(r: &Ranking) -> Vec<u64> {
    let mut masks = vec![0u64; r.m()];
    let mut seen = 0u64;
    for &a in r.order() {
        masks[a] = seen;
        seen |= 1 << a;
    }
    masks
}

fn cost_of(weights: &[i128], f: &[i128], dist: &[u32]) -> i128 {
    weights.iter().zip(dist).map(|(w, &d)| w * f[d as usize]).sum()
}

struct Search<'a> {
    weights: &'a [i128],
    f: &'a [i128],
    fp: &'a [i128],
    above: &'a [Vec<u64>],
    seed_above: &'a [u64],
    seed_dist: Vec<u32>,
    best: i128,
    best_dist: Vec<u32>,
    optima: BTreeSet<Vec<usize>>,
    track_ties: bool,
    open_lb: Option<i128>,
    nodes: u64,
    budget: Budget,
    start: Instant,
    exhausted: bool,
}

impl Search<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.exhausted {
            return true;
        }
        self.nodes += 1;
        if self.budget.max_nodes.is_some_and(|n| self.nodes > n) {
            self.exhausted = true;
        } else if let Some(t) = self.budget.max_time {
            if self.nodes % 1024 == 0 && self.start.elapsed() > t {
                self.exhausted = true;
            }
        }
        self.exhausted
    }

    fn pruned(&self, bound: i128) -> bool {
        if self.track_ties {
            bound > self.best
        } else {
            bound >= self.best
        }
    }

    fn dfs(&mut self, prefix: &mut Vec<usize>, unplaced: u64, decided: &[u32], seed_decided: u32) {
        if unplaced.count_ones() == 1 {
            let last = unplaced.trailing_zeros() as usize;
            let cost = cost_of(self.weights, self.f, decided);
            if cost < self.best {
                self.best = cost;
                self.best_dist = decided.to_vec();
                self.optima.clear();
            }
            if cost == self.best && (self.track_ties || self.optima.is_empty()) {
                let mut order = prefix.clone();
                order.push(last);
                self.optima.insert(order);
            }
            return;
        }
        let bound = self.bound(unplaced, decided, seed_decided);
        if self.pruned(bound) {
            return;
        }
        if self.out_of_budget() {
            self.open_lb = Some(self.open_lb.map_or(bound, |b| b.min(bound)));
            return;
        }
        let mut children: Vec<(i128, usize)> = Vec::new();
        let mut rest = unplaced;
        while rest != 0 {
            let a = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let others = unplaced & !(1 << a);
            let inc: i128 = self
                .above
                .iter()
                .zip(self.weights)
                .map(|(ab, w)| w * (others & ab[a]).count_ones() as i128)
                .sum();
            children.push((inc, a));
        }
        children.sort_unstable();
        let mut next = vec![0u32; decided.len()];
        for &(_, a) in &children {
            let others = unplaced & !(1 << a);
            for (v, ab) in self.above.iter().enumerate() {
                next[v] = decided[v] + (others & ab[a]).count_ones();
            }
            let seed_next = seed_decided + (others & self.seed_above[a]).count_ones();
            prefix.push(a);
            self.dfs(prefix, others, &next, seed_next);
            prefix.pop();
        }
    }

    fn bound(&self, unplaced: u64, decided: &[u32], seed_decided: u32) -> i128 {
        let r = unplaced.count_ones();
        let rem = r * (r - 1) / 2;
        let seed_hi = seed_decided + rem;
        let n = decided.len();
        let mut lb = vec![0u32; n];
        let mut direct = 0i128;
        for v in 0..n {
            let ds = self.seed_dist[v];
            let l = decided[v].max(ds.saturating_sub(seed_hi)).max(seed_decided.saturating_sub(ds));
            lb[v] = l;
            direct += self.weights[v] * self.f[l as usize];
        }
        let mut best = direct;
        for tangent_at_incumbent in [false, true] {
            let mut base = 0i128;
            let mut slope = vec![0i128; n];
            for v in 0..n {
                let t = if tangent_at_incumbent {
                    self.best_dist[v].clamp(lb[v], decided[v] + rem)
                } else {
                    lb[v]
                } as usize;
                base += self.weights[v] * (self.f[t] + self.fp[t] * (decided[v] as i128 - t as i128));
                slope[v] = self.weights[v] * self.fp[t];
            }
            let total = base + self.pair_minimum(unplaced, &slope);
            best = best.max(total);
        }
        best
    }

    /// `Σ` over undecided pairs of the cheaper orientation's charge.
    fn pair_minimum(&self, unplaced: u64, slope: &[i128]) -> i128 {
        let mut total = 0;
        let mut rest_a = unplaced;
        while rest_a != 0 {
            let a = rest_a.trailing_zeros() as usize;
            rest_a &= rest_a - 1;
            let mut rest_b = rest_a;
            while rest_b != 0 {
                let b = rest_b.trailing_zeros() as usize;
                rest_b &= rest_b - 1;
                let mut a_first = 0i128;
                let mut b_first = 0i128;
                for (ab, &c) in self.above.iter().zip(slope) {
                    if ab[a] & (1 << b) != 0 {
                        a_first += c;
                    } else {
                        b_first += c;
                    }
                }
                total += a_first.min(b_first);
            }
        }
        total
    }
}
