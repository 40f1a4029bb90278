use num_bigint::BigInt;

use super::{Proof, SolveResult};
use crate::cost::{CostSpec, Evaluator};
use crate::error::Result;
use crate::profile::Profile;
use crate::ranking::{enumerate_rankings_with_guard, Ranking};

pub const BRUTE_FORCE_GUARD: usize = 10;

/// Evaluates all `m!` rankings and returns every minimiser.
pub fn solve_brute_force(profile: &Profile, spec: CostSpec) -> Result<SolveResult> {
    let eval = Evaluator::new(profile, spec);
    let mut best: Option<BigInt> = None;
    let mut optima: Vec<Ranking> = Vec::new();
    for cand in enumerate_rankings_with_guard(profile.m(), BRUTE_FORCE_GUARD)? {
        let c = eval.scaled_cost(&cand)?;
        match &best {
            Some(b) if c > *b => {}
            Some(b) if c == *b => optima.push(cand),
            _ => {
                best = Some(c);
                optima.clear();
                optima.push(cand);
            }
        }
    }
    let cost = eval.to_rational(best.expect("at least two rankings exist"));
    Ok(SolveResult { optima, cost, proof: Proof::Exhaustive })
}
