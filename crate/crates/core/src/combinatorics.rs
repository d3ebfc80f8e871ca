//! Ground-set arithmetic: exact binomials, bit-encoded k-sets, colex ranking
//! and streaming enumeration of all k-subsets of `[n]`.
//!
//! Elements are named `1..=n` at every public boundary. Internally element `x`
//! lives in bit `x - 1` of a `u64`, so numeric order of the masks is exactly
//! colexicographic order of the sets.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{EmcError, Result};

/// Exact nonnegative integer used for every count in the crate.
pub type BigCount = BigUint;

/// Largest supported ground set; one machine word per k-set.
pub const MAX_N: u32 = 64;

/// The ground set `[n] = {1, ..., n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    n: u32,
}

impl GroundSet {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(EmcError::GroundSetSize(n));
        }
        Ok(GroundSet { n })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    /// Mask with one bit per element of `[n]`.
    pub fn full_mask(self) -> u64 {
        full_mask(self.n)
    }

    pub fn check_element(self, x: u32) -> Result<()> {
        if x == 0 || x > self.n {
            return Err(EmcError::ElementOutOfRange { x, n: self.n });
        }
        Ok(())
    }
}

pub(crate) fn full_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A finite set of elements of `[n]`, stored as a membership bit vector.
///
/// The cardinality is implied by the popcount; families enforce that all their
/// members share one `k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KSet(u64);

impl KSet {
    pub const EMPTY: KSet = KSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        KSet(bits)
    }

    /// Builds a set from 1-indexed element names. Repeated or out-of-range
    /// elements are rejected.
    pub fn from_elements(n: u32, elements: &[u32]) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        let mut bits = 0u64;
        for &x in elements {
            ground.check_element(x)?;
            let bit = 1u64 << (x - 1);
            if bits & bit != 0 {
                return Err(EmcError::MalformedSet(format!(
                    "element {x} repeated in {elements:?}"
                )));
            }
            bits |= bit;
        }
        Ok(KSet(bits))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, x: u32) -> bool {
        (1..=64).contains(&x) && self.0 & (1u64 << (x - 1)) != 0
    }

    pub fn is_disjoint(self, other: KSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_superset(self, other: KSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn union(self, other: KSet) -> KSet {
        KSet(self.0 | other.0)
    }

    /// Largest element, or 0 for the empty set.
    pub fn max_element(self) -> u32 {
        64 - self.0.leading_zeros()
    }

    /// 1-indexed elements in increasing order.
    pub fn elements(self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }
}

impl fmt::Debug for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Iterator over the 1-indexed elements of a [`KSet`].
pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigCount::one();
    for i in 0..k {
        // acc = C(n, i) here, so the division is exact
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Machine-word binomial for ranking. Every C(n, k) with n <= 64 fits in a u64.
pub(crate) fn binomial_u64(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// Position of `set` among all `|set|`-subsets in colex order.
pub fn colex_rank(set: KSet) -> u64 {
    set.iter()
        .enumerate()
        .map(|(i, x)| binomial_u64(x - 1, i as u32 + 1))
        .sum()
}

/// Inverse of [`colex_rank`] for k-subsets of `[n]`.
pub fn colex_unrank(rank: u64, n: u32, k: u32) -> Result<KSet> {
    GroundSet::new(n)?;
    if k > n {
        return Err(EmcError::InvalidParameters(format!(
            "k = {k} exceeds n = {n}"
        )));
    }
    let total = binomial_u64(n, k);
    if rank >= total {
        return Err(EmcError::RankOutOfRange { rank, n, k });
    }
    let mut rest = rank;
    let mut bits = 0u64;
    let mut hi = n;
    for i in (1..=k).rev() {
        // largest element e (0-indexed) with C(e, i) <= rest
        let mut e = i - 1;
        while e + 1 < hi && binomial_u64(e + 1, i) <= rest {
            e += 1;
        }
        rest -= binomial_u64(e, i);
        bits |= 1u64 << e;
        hi = e;
    }
    Ok(KSet(bits))
}

/// Streams all k-subsets of `[n]` in colex order (Gosper's hack on the masks).
#[derive(Debug, Clone)]
pub struct KSubsets {
    next: Option<u64>,
    limit: u64,
}

impl Iterator for KSubsets {
    type Item = KSet;

    fn next(&mut self) -> Option<KSet> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let (r, overflow) = cur.overflowing_add(c);
            if overflow {
                None
            } else {
                let nxt = (((r ^ cur) >> 2) / c) | r;
                (nxt & !self.limit == 0).then_some(nxt)
            }
        };
        Some(KSet(cur))
    }
}

pub fn enumerate_ksets(n: u32, k: u32) -> Result<KSubsets> {
    GroundSet::new(n)?;
    if k > n {
        return Err(EmcError::InvalidParameters(format!(
            "k = {k} exceeds n = {n}"
        )));
    }
    Ok(KSubsets {
        next: Some(full_mask(k)),
        limit: full_mask(n),
    })
}

/// Rank table for all k-subsets of `[n]`: `sets[r]` has colex rank `r`.
pub(crate) fn all_ksets(n: u32, k: u32) -> Vec<u64> {
    enumerate_ksets(n, k)
        .map(|it| it.map(KSet::bits).collect())
        .unwrap_or_default()
}

/// Serializes a count as a decimal string, so large values survive JSON.
pub(crate) fn ser_count<S: serde::Serializer>(
    c: &BigCount,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize) -> Vec<Vec<u64>> {
        let mut rows = vec![vec![1u64]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![1u64; i + 1];
            for j in 1..i {
                row[j] = prev[j - 1] + prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        let tri = pascal(30);
        for n in 0..=30u64 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), BigCount::from(tri[n as usize][k as usize]));
            }
            assert_eq!(binomial(n, n + 1), BigCount::zero());
        }
        assert_eq!(binomial(30, 15), BigCount::from(155_117_520u64));
        assert_eq!(binomial(5, 2), BigCount::from(10u32));
    }

    #[test]
    fn u64_binomial_covers_64() {
        assert_eq!(binomial_u64(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(BigCount::from(binomial_u64(64, 32)), binomial(64, 32));
    }

    #[test]
    fn colex_small_cases() {
        let s = |xs: &[u32]| KSet::from_elements(5, xs).unwrap();
        assert_eq!(colex_rank(s(&[1, 2])), 0);
        assert_eq!(colex_rank(s(&[1, 3])), 1);
        assert_eq!(colex_rank(s(&[2, 3])), 2);
        assert_eq!(colex_rank(s(&[1, 4])), 3);
        assert_eq!(colex_unrank(2, 5, 2).unwrap(), s(&[2, 3]));
        assert_eq!(colex_unrank(0, 7, 2).unwrap().elements(), vec![1, 2]);
        assert_eq!(colex_unrank(9, 5, 2).unwrap(), s(&[4, 5]));
        assert_eq!(
            colex_unrank(20, 6, 3).unwrap_err(),
            EmcError::RankOutOfRange {
                rank: 20,
                n: 6,
                k: 3
            }
        );
    }

    #[test]
    fn enumeration_small_cases() {
        let v: Vec<_> = enumerate_ksets(4, 2).unwrap().collect();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0].elements(), vec![1, 2]);
        assert_eq!(v[5].elements(), vec![3, 4]);
        let all: Vec<_> = enumerate_ksets(7, 7).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].elements(), (1..=7).collect::<Vec<_>>());
        let v: Vec<_> = enumerate_ksets(6, 3).unwrap().collect();
        assert_eq!(v.len(), 20);
        assert!(v.iter().all(|s| s.len() == 3));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(enumerate_ksets(5, 0).unwrap().count(), 1);
        assert_eq!(enumerate_ksets(64, 1).unwrap().count(), 64);
        assert_eq!(enumerate_ksets(64, 64).unwrap().count(), 1);
    }

    #[test]
    fn ground_set_cap() {
        assert!(GroundSet::new(64).is_ok());
        assert_eq!(GroundSet::new(65).unwrap_err(), EmcError::GroundSetSize(65));
        assert!(KSet::from_elements(4, &[1, 1]).is_err());
        assert!(KSet::from_elements(4, &[5]).is_err());
    }
}
