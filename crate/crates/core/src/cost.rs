//! Power-of-distance cost functions and an exact integer evaluator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::Ranking;
use crate::rational::{common_denominator, Rational};

/// Cost `swap^p`; `p = 1` is Kemeny, `p = 2` is Squared Kemeny.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CostSpec {
    exponent: u32,
}

impl CostSpec {
    pub const KEMENY: CostSpec = CostSpec { exponent: 1 };
    pub const SQUARED: CostSpec = CostSpec { exponent: 2 };

    pub fn new(exponent: u32) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::OutOfRange("cost exponent must be at least 1".into()));
        }
        Ok(CostSpec { exponent })
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }
}

impl fmt::Display for CostSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            1 => write!(f, "kemeny"),
            2 => write!(f, "sqk"),
            p => write!(f, "p:{p}"),
        }
    }
}

impl FromStr for CostSpec {
    type Err = Error;

    /// Accepts `kemeny`, `sqk`, or `p:<int>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kemeny" => Ok(CostSpec::KEMENY),
            "sqk" => Ok(CostSpec::SQUARED),
            _ => {
                let p = s
                    .strip_prefix("p:")
                    .and_then(|p| p.parse::<u32>().ok())
                    .ok_or_else(|| Error::OutOfRange(format!("unknown rule {s:?}; use kemeny, sqk or p:<int>")))?;
                CostSpec::new(p)
            }
        }
    }
}

/// A profile rescaled to integer weights over a common denominator, for
/// fast exact cost evaluation of many candidates.
#[derive(Clone, Debug)]
pub struct Evaluator {
    m: usize,
    exponent: u32,
    rankings: Vec<Ranking>,
    numers: Vec<BigInt>,
    small: Option<Vec<u64>>,
    denom: BigInt,
}

impl Evaluator {
    pub fn new(profile: &Profile, spec: CostSpec) -> Self {
        let denom = common_denominator(profile.iter().map(|(_, w)| w));
        let rankings: Vec<Ranking> = profile.support().cloned().collect();
        let numers: Vec<BigInt> = profile
            .iter()
            .map(|(_, w)| w.numer() * (&denom / w.denom()))
            .collect();
        let small = numers.iter().map(|n| n.to_u64()).collect::<Option<Vec<_>>>();
        Evaluator { m: profile.m(), exponent: spec.exponent, rankings, numers, small, denom }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    /// Integer weights, present when every scaled numerator fits in `u64`.
    pub fn small_weights(&self) -> Option<&[u64]> {
        self.small.as_deref()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denom
    }

    /// Swap distances from every support ranking to `cand`.
    pub fn distances(&self, cand: &Ranking) -> Result<Vec<u64>> {
        self.rankings.iter().map(|r| r.swap_distance(cand)).collect()
    }

    /// Cost times the common denominator, an exact integer.
    pub fn scaled_cost(&self, cand: &Ranking) -> Result<BigInt> {
        let d = self.distances(cand)?;
        Ok(self.scaled_cost_of_distances(&d))
    }

    pub fn scaled_cost_of_distances(&self, dists: &[u64]) -> BigInt {
        if let Some(v) = self.small_cost_of_distances(dists) {
            return BigInt::from(v);
        }
        let mut total = BigInt::zero();
        for (n, &d) in self.numers.iter().zip(dists) {
            total += n * BigInt::from(d).pow(self.exponent);
        }
        total
    }

    /// `u128` fast path; `None` on overflow or oversized weights.
    pub fn small_cost_of_distances(&self, dists: &[u64]) -> Option<u128> {
        let w = self.small.as_ref()?;
        let mut total: u128 = 0;
        for (&n, &d) in w.iter().zip(dists) {
            let term = (d as u128).checked_pow(self.exponent)?.checked_mul(n as u128)?;
            total = total.checked_add(term)?;
        }
        Some(total)
    }

    pub fn to_rational(&self, scaled: BigInt) -> Rational {
        Rational::from_bigints(scaled, self.denom.clone()).expect("denominator is positive")
    }

    pub fn cost(&self, cand: &Ranking) -> Result<Rational> {
        Ok(self.to_rational(self.scaled_cost(cand)?))
    }
}
