//! Closed-form bounds: the min-degree stability coefficient, the disjoint-pair
//! supersaturation bound, and the density-gap constants for `n = sk + 1`.
//!
//! The constants `C` and `delta0` are never given defaults; callers supply
//! them. Every function is generic over [`Scalar`] and is exact when
//! instantiated with [`Rational`](crate::Rational).

use crate::combinatorics::binomial;
use crate::error::{EmcError, Result};
use crate::scalar::Scalar;

/// `s`, `k` and the real parameters `delta`, `C`, `delta0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundParams<T> {
    pub s: u32,
    pub k: u32,
    pub delta: T,
    pub c: T,
    pub delta0: T,
}

impl<T: Scalar> BoundParams<T> {
    pub fn new(s: u32, k: u32, delta: T, c: T, delta0: T) -> Result<Self> {
        let p = BoundParams {
            s,
            k,
            delta,
            c,
            delta0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s < 3 {
            return Err(EmcError::InvalidParameters(format!(
                "s = {} but s >= 3 is required",
                self.s
            )));
        }
        if self.k < 1 {
            return Err(EmcError::InvalidParameters("k must be positive".into()));
        }
        if self.c <= T::zero() {
            return Err(EmcError::InvalidParameters(format!(
                "C = {} must be positive",
                self.c
            )));
        }
        if self.delta < T::zero() || self.delta > self.delta0 {
            return Err(EmcError::InvalidParameters(format!(
                "delta = {} must satisfy 0 <= delta <= delta0 = {}",
                self.delta, self.delta0
            )));
        }
        Ok(())
    }
}

fn small<T: Scalar>(v: u32) -> T {
    T::from_u64(u64::from(v))
}

/// `(s-1)/s - (s-2) delta / (s^3 (s-1) C)`, the density coefficient that caps
/// `|F| / C(sk,k)` when `F` on `[sk]` has matching number below `s` and minimum
/// degree at least `delta * C(sk-1,k-1)`.
pub fn stab_upper_bound<T: Scalar>(p: &BoundParams<T>) -> Result<T> {
    p.validate()?;
    let s: T = small(p.s);
    let one = T::one();
    let two = one.clone() + one.clone();
    let base = (s.clone() - one.clone()) / s.clone();
    let loss = (s.clone() - two) * p.delta.clone()
        / (s.clone() * s.clone() * s.clone() * (s - one) * p.c.clone());
    Ok(base - loss)
}

/// Lower bound on disjoint pairs in a family of size `C(sk-1,k-1)` on `[sk]`
/// whose maximum degree is at most `(1 - delta) C(sk-1,k-1)`:
/// `delta (s-2) / (2 C s (s-1)) * C(sk-1,k-1) * C((s-1)k,k)`.
///
/// Requires `delta <= 1 / (200 C)`.
pub fn supersat_lower_bound<T: Scalar>(p: &BoundParams<T>) -> Result<T> {
    if p.s < 3 || p.c <= T::zero() || p.delta < T::zero() {
        return Err(EmcError::InvalidParameters(format!(
            "need s >= 3, C > 0, delta >= 0 (s = {}, C = {}, delta = {})",
            p.s, p.c, p.delta
        )));
    }
    if T::from_u64(200) * p.c.clone() * p.delta.clone() > T::one() {
        return Err(EmcError::Hypothesis(format!(
            "supersaturation bound needs delta <= 1/(200C); delta = {}, C = {}",
            p.delta, p.c
        )));
    }
    let s: T = small(p.s);
    let one = T::one();
    let two = one.clone() + one.clone();
    let sk = u64::from(p.s) * u64::from(p.k);
    let k = u64::from(p.k);
    let star = T::from_count(&binomial(sk - 1, k - 1));
    let rest = T::from_count(&binomial(sk - k, k));
    let coeff =
        p.delta.clone() * (s.clone() - two.clone()) / (two * p.c.clone() * s.clone() * (s - one));
    Ok(coeff * star * rest)
}

/// `epsilon_star = min{(s-2) delta0 / (s^3 (s-1) C), (s-1)/s - delta0}` and
/// `epsilon = epsilon_star / (s+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonPair<T> {
    pub epsilon_star: T,
    pub epsilon: T,
}

pub fn epsilon_formulas<T: Scalar>(s: u32, c: T, delta0: T) -> Result<EpsilonPair<T>> {
    let one = T::one();
    let st: T = small(s);
    if s < 3 || c <= T::zero() || delta0 <= T::zero() {
        return Err(EmcError::InvalidParameters(format!(
            "need s >= 3, C > 0, delta0 > 0 (s = {s}, C = {c}, delta0 = {delta0})"
        )));
    }
    let top = (st.clone() - one.clone()) / st.clone();
    if delta0 > top {
        return Err(EmcError::InvalidParameters(format!(
            "delta0 = {delta0} exceeds (s-1)/s = {top}"
        )));
    }
    let two = one.clone() + one.clone();
    let first = (st.clone() - two) * delta0.clone()
        / (st.clone() * st.clone() * st.clone() * (st.clone() - one.clone()) * c);
    let second = top - delta0;
    let epsilon_star = T::min_of(first, second);
    let epsilon = epsilon_star.clone() / (st + one);
    Ok(EpsilonPair {
        epsilon_star,
        epsilon,
    })
}
