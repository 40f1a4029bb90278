//! Proportional rank aggregation with the Squared Kemeny rule and the
//! wider family of p-Kemeny rules.

pub mod axioms;
pub mod bounds;
pub mod cost;
pub mod embed;
pub mod error;
pub mod fixtures;
pub mod lp;
pub mod mahonian;
pub mod profile;
pub mod ranking;
pub mod sampling;
pub mod solver;
pub mod rational;

pub use cost::{CostSpec, Evaluator};
pub use error::{Error, Result};
pub use profile::{Profile, Subprofile};
pub use ranking::{enumerate_rankings, Ranking};
pub use solver::{solve, Method, Proof, SolveResult};
pub use rational::{round_set, Rational};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/rankings.md")]
    mod rankings {}
    #[doc = include_str!("../../../book/src/rules.md")]
    mod rules {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    mod solvers {}
    #[doc = include_str!("../../../book/src/axioms.md")]
    mod axioms {}
    #[doc = include_str!("../../../book/src/guarantees.md")]
    mod guarantees {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/embeddings.md")]
    mod embeddings {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
