//! The named extremal families: `A_{k,s}`, `B_{n,k,s}`, stars and the
//! Kleitman family of all k-sets avoiding one point.

use crate::combinatorics::{enumerate_ksets, full_mask, GroundSet, KSet};
use crate::error::{EmcError, Result};
use crate::family::Family;

fn check_uniformity(n: u32, k: u32) -> Result<()> {
    GroundSet::new(n)?;
    if k == 0 || k > n {
        return Err(EmcError::InvalidParameters(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

fn filtered(n: u32, k: u32, keep: impl Fn(u64) -> bool) -> Result<Family> {
    let sets = enumerate_ksets(n, k)?
        .map(KSet::bits)
        .filter(|&b| keep(b))
        .collect();
    Ok(Family::from_unique_bits(n, k, sets))
}

/// `A_{k,s}`: every k-subset of `[sk - 1]`, embedded in `[n]`.
pub fn construct_a(n: u32, k: u32, s: u32) -> Result<Family> {
    check_uniformity(n, k)?;
    if s == 0 {
        return Err(EmcError::InvalidParameters("s must be at least 1".into()));
    }
    let support = (s * k).saturating_sub(1);
    if n < support {
        return Err(EmcError::InvalidParameters(format!(
            "A_{{k,s}} lives on [{support}] but n = {n}"
        )));
    }
    let mask = full_mask(support);
    filtered(n, k, |b| b & !mask == 0)
}

/// `B_{n,k,s}`: every k-set meeting `[s - 1]`.
pub fn construct_b(n: u32, k: u32, s: u32) -> Result<Family> {
    check_uniformity(n, k)?;
    if s == 0 || s - 1 > n {
        return Err(EmcError::InvalidParameters(format!(
            "s = {s} invalid for n = {n}"
        )));
    }
    let head = full_mask(s - 1);
    filtered(n, k, |b| b & head != 0)
}

/// All k-sets containing `x`.
pub fn star(n: u32, k: u32, x: u32) -> Result<Family> {
    check_uniformity(n, k)?;
    GroundSet::new(n)?.check_element(x)?;
    let bit = 1u64 << (x - 1);
    filtered(n, k, |b| b & bit != 0)
}

/// All k-subsets of `[n]` avoiding `x`, for `n = sk`. These are the unique
/// maximum families on `[sk]` without `s` pairwise disjoint members.
pub fn kleitman_extremal(n: u32, k: u32, x: u32) -> Result<Family> {
    check_uniformity(n, k)?;
    if !n.is_multiple_of(k) || n / k < 2 {
        return Err(EmcError::InvalidParameters(format!(
            "n = {n} is not sk for an integer s >= 2 with k = {k}"
        )));
    }
    GroundSet::new(n)?.check_element(x)?;
    let bit = 1u64 << (x - 1);
    filtered(n, k, |b| b & bit == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, BigCount};

    fn size(f: &Family) -> BigCount {
        BigCount::from(f.len())
    }

    #[test]
    fn a_family() {
        let a = construct_a(6, 2, 3).unwrap();
        assert_eq!(a.len(), 10);
        let a7 = construct_a(7, 2, 3).unwrap();
        assert_eq!(a7.members(), a.members());
        assert_eq!(a7.n(), 7);
        assert_eq!(construct_a(9, 2, 4).unwrap().matching_number(), 3);
        assert!(construct_a(4, 2, 3).is_err());
    }

    #[test]
    fn b_family() {
        assert_eq!(construct_b(7, 2, 3).unwrap().len(), 11);
        assert!(construct_b(7, 3, 1).unwrap().is_empty());
        assert_eq!(construct_b(6, 2, 3).unwrap().len(), 9);
        assert!(construct_b(6, 2, 3).unwrap().len() < construct_a(6, 2, 3).unwrap().len());
    }

    #[test]
    fn stars() {
        let s = star(6, 2, 1).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s.matching_number(), 1);
        let s = star(7, 3, 4).unwrap();
        for y in (1..=7).filter(|&y| y != 4) {
            assert_eq!(s.degree(y).unwrap(), 5);
        }
        assert!(star(6, 2, 7).is_err());
    }

    #[test]
    fn kleitman() {
        let f = kleitman_extremal(6, 2, 6).unwrap();
        assert_eq!(f.len(), 10);
        assert!(f.iter().all(|s| !s.contains(6)));
        assert_eq!(kleitman_extremal(8, 2, 1).unwrap().len(), 21);
        assert_eq!(kleitman_extremal(6, 3, 2).unwrap().matching_number(), 1);
        assert!(kleitman_extremal(7, 2, 1).is_err());
    }

    #[test]
    fn size_formulas_and_matching_numbers() {
        for s in 2..=4u32 {
            for k in 2..=5u32 {
                for n in [s * k - 1, s * k, s * k + 1, s * (k + 1)] {
                    if n > 16 {
                        continue;
                    }
                    let a = construct_a(n, k, s).unwrap();
                    let b = construct_b(n, k, s).unwrap();
                    assert_eq!(size(&a), binomial((s * k - 1) as u64, k as u64));
                    assert_eq!(
                        size(&b),
                        binomial(n as u64, k as u64) - binomial((n - s + 1) as u64, k as u64)
                    );
                    if n >= s * k && a.len() <= 200 && b.len() <= 200 {
                        assert_eq!(a.matching_number(), s - 1, "A n={n} k={k} s={s}");
                        assert_eq!(b.matching_number(), s - 1, "B n={n} k={k} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn a_smaller_than_b_beyond_s_times_k_plus_one() {
        for s in 2..=4u64 {
            for k in 2..=5u64 {
                for n in s * (k + 1)..=s * (k + 1) + 6 {
                    let a = binomial(s * k - 1, k);
                    let b = binomial(n, k) - binomial(n - s + 1, k);
                    assert!(a < b, "n={n} k={k} s={s}");
                }
            }
        }
    }
}
