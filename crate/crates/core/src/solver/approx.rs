use num_bigint::BigInt;

use super::dp::first_kemeny_ranking;
use crate::cost::{CostSpec, Evaluator};
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::Ranking;

/// The support ranking with the least Squared Kemeny cost (first in
/// canonical order on ties). At most four times the optimum.
pub fn approx_best_input(profile: &Profile) -> Ranking {
    best_input(profile, &Evaluator::new(profile, CostSpec::SQUARED))
}

fn best_input(profile: &Profile, eval: &Evaluator) -> Ranking {
    let mut best: Option<(BigInt, &Ranking)> = None;
    for r in profile.support() {
        let c = eval.scaled_cost(r).expect("support shares m");
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, r));
        }
    }
    best.expect("profiles are nonempty").1.clone()
}

/// An exact Kemeny ranking improved by Squared Kemeny local search.
/// Falls back to the best input ranking when the dynamic program is out
/// of reach.
pub fn approx_kemeny_seed(profile: &Profile) -> Ranking {
    seeded(profile, CostSpec::SQUARED)
}

pub(crate) fn seeded(profile: &Profile, spec: CostSpec) -> Ranking {
    let eval = Evaluator::new(profile, spec);
    let start = match first_kemeny_ranking(profile) {
        Ok(r) => r,
        Err(Error::Capacity { .. }) | Err(Error::Precision(_)) => best_input(profile, &eval),
        Err(e) => panic!("unexpected dynamic program failure: {e}"),
    };
    descend(&eval, start)
}

/// Hill climbing over adjacent transpositions: applies the best strictly
/// improving swap (lowest position on ties) until none is left.
pub fn local_search(profile: &Profile, start: Ranking, spec: CostSpec) -> Result<Ranking> {
    if start.m() != profile.m() {
        return Err(Error::Dimension { expected: profile.m(), found: start.m() });
    }
    Ok(descend(&Evaluator::new(profile, spec), start))
}

fn descend(eval: &Evaluator, start: Ranking) -> Ranking {
    let mut current = start;
    let mut cost = eval.scaled_cost(&current).expect("dimensions checked");
    loop {
        let mut best: Option<(BigInt, usize)> = None;
        for i in 0..current.m() - 1 {
            let c = eval.scaled_cost(&current.with_adjacent_swap(i)).expect("dimensions checked");
            if c < cost && best.as_ref().is_none_or(|(b, _)| c < *b) {
                best = Some((c, i));
            }
        }
        match best {
            Some((c, i)) => {
                current = current.with_adjacent_swap(i);
                cost = c;
            }
            None => return current,
        }
    }
}
