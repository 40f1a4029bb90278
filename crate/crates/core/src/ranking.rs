//! Rankings (strict total orders) and the swap distance between them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling for full enumeration of the ranking space.
pub const ENUMERATION_GUARD: usize = 10;
/// Hard ceiling for full enumeration even with an explicit override.
pub const ENUMERATION_HARD_LIMIT: usize = 12;

/// A strict total order over alternatives `0..m`, stored best-first.
///
/// Ordering between rankings is lexicographic on the order vector, which
/// gives profiles and result sets a canonical, reproducible order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Ranking(Vec<usize>);

impl Ranking {
    /// Validates that `order` is a permutation of `0..m` with `m >= 2`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let m = order.len();
        if m < 2 {
            return Err(Error::InvalidRanking(format!("need at least 2 alternatives, got {m}")));
        }
        let mut seen = vec![false; m];
        for &a in &order {
            if a >= m || seen[a] {
                return Err(Error::InvalidRanking(format!("{order:?} is not a permutation of 0..{m}")));
            }
            seen[a] = true;
        }
        Ok(Ranking(order))
    }

    pub fn identity(m: usize) -> Result<Self> {
        Ranking::new((0..m).collect())
    }

    /// Parses a ranking written as letters, `"abc"` meaning a ≻ b ≻ c.
    pub fn from_letters(s: &str) -> Result<Self> {
        let order = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '>')
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(c as usize - 'a' as usize)
                } else {
                    Err(Error::InvalidRanking(format!("unexpected character {c:?} in {s:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ranking::new(order)
    }

    /// Alternatives best-first.
    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn m(&self) -> usize {
        self.0.len()
    }

    /// `positions()[a]` is the rank of alternative `a` (0 = best).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &a) in self.0.iter().enumerate() {
            pos[a] = i;
        }
        pos
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        let pos = self.positions();
        pos[a] < pos[b]
    }

    pub fn reversed(&self) -> Ranking {
        let mut order = self.0.clone();
        order.reverse();
        Ranking(order)
    }

    /// Relabels alternatives: alternative `a` becomes `tau[a]`.
    pub fn permuted(&self, tau: &[usize]) -> Result<Ranking> {
        if tau.len() != self.m() {
            return Err(Error::Dimension { expected: self.m(), found: tau.len() });
        }
        Ranking::new(tau.to_vec())?;
        Ok(Ranking(self.0.iter().map(|&a| tau[a]).collect()))
    }

    /// Swaps the alternatives at positions `i` and `i + 1`.
    pub fn with_adjacent_swap(&self, i: usize) -> Ranking {
        let mut order = self.0.clone();
        order.swap(i, i + 1);
        Ranking(order)
    }

    /// Number of unordered pairs the two rankings order differently.
    ///
    /// Runs in O(m log m): `other` is rewritten in this ranking's
    /// coordinates and its inversions are counted by merge sort.
    pub fn swap_distance(&self, other: &Ranking) -> Result<u64> {
        if self.m() != other.m() {
            return Err(Error::Dimension { expected: self.m(), found: other.m() });
        }
        let pos = self.positions();
        let mut seq: Vec<usize> = other.0.iter().map(|&a| pos[a]).collect();
        Ok(count_inversions(&mut seq))
    }

    /// Quadratic pair-by-pair count; the reference for [`Ranking::swap_distance`].
    pub fn swap_distance_naive(&self, other: &Ranking) -> Result<u64> {
        if self.m() != other.m() {
            return Err(Error::Dimension { expected: self.m(), found: other.m() });
        }
        let p = self.positions();
        let q = other.positions();
        let m = self.m();
        let mut d = 0;
        for a in 0..m {
            for b in a + 1..m {
                if (p[a] < p[b]) != (q[a] < q[b]) {
                    d += 1;
                }
            }
        }
        Ok(d)
    }

    /// Projects onto `keep` (sorted, distinct), relabelling the kept
    /// alternatives to `0..keep.len()` in increasing original index.
    pub fn restricted(&self, keep: &[usize]) -> Result<Ranking> {
        let mut new_index = vec![usize::MAX; self.m()];
        for (i, &a) in keep.iter().enumerate() {
            if a >= self.m() || new_index[a] != usize::MAX {
                return Err(Error::OutOfRange(format!("bad restriction set {keep:?}")));
            }
            new_index[a] = i;
        }
        Ranking::new(
            self.0
                .iter()
                .filter(|&&a| new_index[a] != usize::MAX)
                .map(|&a| new_index[a])
                .collect(),
        )
    }

    /// Renders using the given labels, `a > b > c` style.
    pub fn display_with(&self, labels: &[String]) -> String {
        self.0
            .iter()
            .map(|&a| labels.get(a).cloned().unwrap_or_else(|| a.to_string()))
            .collect::<Vec<_>>()
            .join(" > ")
    }
}

/// Maximum swap distance between two rankings over `m` alternatives.
pub fn max_distance(m: usize) -> u64 {
    (m * m.saturating_sub(1) / 2) as u64
}

fn count_inversions(seq: &mut [usize]) -> u64 {
    let mut buf = seq.to_vec();
    sort_count(seq, &mut buf)
}

fn sort_count(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = seq.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        sort_count(left, bl) + sort_count(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if seq[i] <= seq[j] {
            buf[k] = seq[i];
            i += 1;
        } else {
            buf[k] = seq[j];
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&seq[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&seq[j..n]);
    seq.copy_from_slice(&buf[..n]);
    inv
}

impl<'de> Deserialize<'de> for Ranking {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let order = Vec::<usize>::deserialize(d)?;
        Ranking::new(order).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Ranking {
    /// Letters for `m <= 26`, otherwise indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m() <= 26 {
            for &a in &self.0 {
                write!(f, "{}", (b'a' + a as u8) as char)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for Ranking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Lexicographic iterator over all `m!` rankings.
#[derive(Debug, Clone)]
pub struct Rankings {
    next: Option<Vec<usize>>,
}

impl Iterator for Rankings {
    type Item = Ranking;

    fn next(&mut self) -> Option<Ranking> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(Ranking(current))
    }
}

/// Every ranking over `m` alternatives, in lexicographic order.
/// Guarded at `m <= 10`; see [`enumerate_rankings_with_guard`].
pub fn enumerate_rankings(m: usize) -> Result<Rankings> {
    enumerate_rankings_with_guard(m, ENUMERATION_GUARD)
}

/// Like [`enumerate_rankings`] with a caller-chosen guard, itself capped at 12.
pub fn enumerate_rankings_with_guard(m: usize, guard: usize) -> Result<Rankings> {
    let limit = guard.min(ENUMERATION_HARD_LIMIT);
    if m > limit {
        return Err(Error::Capacity { what: "ranking enumeration", requested: m, limit });
    }
    if m < 2 {
        return Err(Error::InvalidRanking(format!("need at least 2 alternatives, got {m}")));
    }
    Ok(Rankings { next: Some((0..m).collect()) })
}

/// Advances to the lexicographically next permutation; false at the last.
fn next_permutation(v: &mut [usize]) -> bool {
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

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn l(s: &str) -> Ranking {
        Ranking::from_letters(s).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Ranking::new(vec![0]).is_err());
        assert!(Ranking::new(vec![0, 0]).is_err());
        assert!(Ranking::new(vec![0, 2]).is_err());
        assert!(Ranking::new(vec![1, 0]).is_ok());
    }

    #[test]
    fn distance_examples() {
        let r = l("abcd");
        assert_eq!(r.swap_distance(&r).unwrap(), 0);
        assert_eq!(r.swap_distance(&r.reversed()).unwrap(), 6);
        assert_eq!(l("abc").swap_distance(&l("bac")).unwrap(), 1);
        assert!(l("abc").swap_distance(&l("abcd")).is_err());
    }

    #[test]
    fn enumeration_order_and_guard() {
        let all: Vec<_> = enumerate_rankings(2).unwrap().collect();
        assert_eq!(all, vec![l("ab"), l("ba")]);
        let all: Vec<_> = enumerate_rankings(3).unwrap().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], l("abc"));
        assert_eq!(all[5], l("cba"));
        assert_eq!(enumerate_rankings(5).unwrap().count(), 120);
        assert!(enumerate_rankings(11).is_err());
        assert!(enumerate_rankings_with_guard(11, 12).is_ok());
        assert!(enumerate_rankings_with_guard(13, 100).is_err());
        let v: Vec<_> = enumerate_rankings(4).unwrap().collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn restriction() {
        let r = l("abc");
        assert_eq!(r.restricted(&[0, 2]).unwrap(), l("ab"));
        assert_eq!(l("cba").restricted(&[0, 2]).unwrap(), l("ba"));
        assert_eq!(r.restricted(&[0, 1, 2]).unwrap(), r);
    }

    fn arb_ranking(m: usize) -> impl Strategy<Value = Ranking> {
        Just((0..m).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Ranking::new(v).unwrap())
    }

    fn arb_triple() -> impl Strategy<Value = (Ranking, Ranking, Ranking)> {
        (2usize..=8).prop_flat_map(|m| (arb_ranking(m), arb_ranking(m), arb_ranking(m)))
    }

    proptest! {
        #[test]
        fn merge_sort_matches_naive((a, b, _c) in arb_triple()) {
            prop_assert_eq!(a.swap_distance(&b).unwrap(), a.swap_distance_naive(&b).unwrap());
            prop_assert_eq!(a.swap_distance(&b).unwrap(), b.swap_distance(&a).unwrap());
        }

        #[test]
        fn triangle_inequality((a, b, c) in arb_triple()) {
            let ab = a.swap_distance(&b).unwrap();
            let bc = b.swap_distance(&c).unwrap();
            let ac = a.swap_distance(&c).unwrap();
            prop_assert!(ac <= ab + bc);
        }

        #[test]
        fn reversal_identities((a, b, _c) in arb_triple()) {
            let dmax = max_distance(a.m());
            prop_assert_eq!(a.swap_distance(&a.reversed()).unwrap(), dmax);
            prop_assert_eq!(a.swap_distance(&b).unwrap() + a.swap_distance(&b.reversed()).unwrap(), dmax);
        }

        #[test]
        fn distance_is_neutral((a, b, tau) in arb_triple()) {
            let t = tau.order();
            prop_assert_eq!(
                a.permuted(t).unwrap().swap_distance(&b.permuted(t).unwrap()).unwrap(),
                a.swap_distance(&b).unwrap()
            );
        }
    }

    #[test]
    fn large_m_distance() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut v: Vec<usize> = (0..200).collect();
        v.shuffle(&mut rng);
        let a = Ranking::new(v).unwrap();
        let b = Ranking::identity(200).unwrap();
        assert_eq!(a.swap_distance(&b).unwrap(), a.swap_distance_naive(&b).unwrap());
    }
}
