//! Exact and approximate minimisation of power-of-distance costs.

mod approx;
mod bnb;
mod brute;
mod dp;
pub mod ilp;

use std::fmt;

use serde::Serialize;

use crate::cost::CostSpec;
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::ranking::Ranking;
use crate::rational::Rational;

pub use approx::{approx_best_input, approx_kemeny_seed, local_search};
pub use bnb::{solve_bnb, Budget};
pub use brute::{solve_brute_force, BRUTE_FORCE_GUARD};
pub use dp::{majority_components, solve_kemeny_dp, DP_GUARD};

/// How a [`SolveResult`] was certified.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Proof {
    /// Every ranking was evaluated, or an exhaustive dynamic program ran.
    Exhaustive,
    /// Branch and bound finished: the optimum and its tie set are certified.
    BranchAndBound,
    /// Search stopped early; the true optimum lies in `[lower_bound, cost]`.
    Heuristic { lower_bound: Rational },
}

impl Proof {
    pub fn is_exact(&self) -> bool {
        !matches!(self, Proof::Heuristic { .. })
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Proof::Exhaustive => write!(f, "exhaustive"),
            Proof::BranchAndBound => write!(f, "branch-and-bound"),
            Proof::Heuristic { lower_bound } => write!(f, "heuristic (lower bound {lower_bound})"),
        }
    }
}

/// Optimal rankings in canonical order together with their exact cost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub optima: Vec<Ranking>,
    pub cost: Rational,
    pub proof: Proof,
}

impl SolveResult {
    /// The canonical first optimum.
    pub fn first(&self) -> &Ranking {
        &self.optima[0]
    }

    pub fn is_unique(&self) -> bool {
        self.optima.len() == 1
    }
}

/// Solver selection for [`solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Brute,
    BranchAndBound,
    Dp,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "brute" => Ok(Method::Brute),
            "bnb" => Ok(Method::BranchAndBound),
            "dp" => Ok(Method::Dp),
            _ => Err(Error::OutOfRange(format!("unknown method {s:?}; use auto, brute, bnb or dp"))),
        }
    }
}

/// Dispatches to a solver. `Auto` uses brute force up to 7 alternatives,
/// the dynamic program for Kemeny, and branch and bound otherwise.
pub fn solve(profile: &Profile, spec: CostSpec, method: Method, budget: Budget) -> Result<SolveResult> {
    match method {
        Method::Brute => solve_brute_force(profile, spec),
        Method::BranchAndBound => solve_bnb(profile, spec, budget),
        Method::Dp => {
            if spec != CostSpec::KEMENY {
                return Err(Error::Incompatible("the dynamic program only handles the Kemeny cost".into()));
            }
            solve_kemeny_dp(profile)
        }
        Method::Auto => {
            if profile.m() <= 7 {
                solve_brute_force(profile, spec)
            } else if spec == CostSpec::KEMENY {
                match solve_kemeny_dp(profile) {
                    Err(Error::Capacity { .. }) => solve_bnb(profile, spec, budget),
                    other => other,
                }
            } else {
                solve_bnb(profile, spec, budget)
            }
        }
    }
}

/// Shorthand for the exact Squared Kemeny tie set.
pub fn squared_kemeny(profile: &Profile) -> Result<SolveResult> {
    solve(profile, CostSpec::SQUARED, Method::Auto, Budget::unlimited())
}

/// Shorthand for the exact Kemeny tie set.
pub fn kemeny(profile: &Profile) -> Result<SolveResult> {
    solve(profile, CostSpec::KEMENY, Method::Auto, Budget::unlimited())
}
