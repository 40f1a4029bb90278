//! Mahonian numbers: the distribution of swap distances from a fixed ranking.

use crate::error::{Error, Result};
use crate::rational::Rational;
use num_bigint::BigInt;

pub const MAHONIAN_LIMIT: usize = 12;

/// `M_0..=M_{C(m,2)}`, where `M_i` counts rankings at swap distance `i`
/// from any fixed ranking. Built as the product of the polynomials
/// `1 + x + ... + x^(k-1)` for `k = 1..=m`.
pub fn mahonian(m: usize) -> Result<Vec<u64>> {
    if m > MAHONIAN_LIMIT {
        return Err(Error::Capacity { what: "mahonian", requested: m, limit: MAHONIAN_LIMIT });
    }
    if m < 2 {
        return Err(Error::OutOfRange(format!("mahonian needs m >= 2, got {m}")));
    }
    let mut coeffs = vec![1u64];
    for k in 2..=m {
        let mut next = vec![0u64; coeffs.len() + k - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for slot in &mut next[i..i + k] {
                *slot += c;
            }
        }
        coeffs = next;
    }
    Ok(coeffs)
}

/// `Σ M_i · i²` computed from the numbers themselves.
pub fn second_moment(m: usize) -> Result<u128> {
    Ok(mahonian(m)?
        .iter()
        .enumerate()
        .map(|(i, &c)| c as u128 * (i * i) as u128)
        .sum())
}

/// Closed form of the average squared swap distance to a fixed ranking,
/// `C(m,2)²/4 + (2m³ + 3m² − 5m)/72`.
pub fn mean_squared_distance(m: usize) -> Rational {
    let m = m as i64;
    let dmax = m * (m - 1) / 2;
    let a = Rational::new(dmax * dmax, 4).expect("nonzero denominator");
    let b = Rational::new(2 * m * m * m + 3 * m * m - 5 * m, 72).expect("nonzero denominator");
    a + b
}

/// `m!` times [`mean_squared_distance`]; equal to [`second_moment`].
pub fn second_moment_closed_form(m: usize) -> Rational {
    let fact: BigInt = (1..=m as u64).map(BigInt::from).product();
    mean_squared_distance(m) * Rational::from(fact)
}
