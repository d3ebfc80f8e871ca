//! Scalar abstraction for the closed-form bounds.
//!
//! Exact evaluation uses [`BigRational`](num_rational::BigRational); the float
//! instances exist for display and quick sweeps. Nothing that decides a
//! verification outcome is evaluated in floating point.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar: Num + Clone + PartialOrd + fmt::Debug + fmt::Display {
    fn from_count(count: &BigUint) -> Self;

    fn from_u64(value: u64) -> Self;

    fn ratio(num: u64, den: u64) -> Self {
        Self::from_u64(num) / Self::from_u64(den)
    }

    fn to_f64(&self) -> f64;

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

impl Scalar for BigRational {
    fn from_count(count: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(count.clone()))
    }

    fn from_u64(value: u64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_count(count: &BigUint) -> Self {
                count.to_f64().unwrap_or(f64::INFINITY) as $t
            }

            fn from_u64(value: u64) -> Self {
                <$t as FromPrimitive>::from_u64(value).unwrap_or(<$t>::INFINITY)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

/// Parses `"p/q"`, an integer, or a terminating decimal into an exact
/// rational. Anything that is not an exact decimal is rejected.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {text:?}"))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {text:?}"))?;
        if q == BigInt::from(0) {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if frac.is_empty()
            || !frac.bytes().all(|b| b.is_ascii_digit())
            || !digits.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(format!("{text:?} is not an exact decimal"));
        }
        let joined: BigInt = format!("{}{}", if digits.is_empty() { "0" } else { digits }, frac)
            .parse()
            .map_err(|_| format!("{text:?} is not an exact decimal"))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let value = BigRational::new(joined, den);
        return Ok(if negative { -value } else { value });
    }
    let p: BigInt = t
        .parse()
        .map_err(|_| format!("{text:?} is not a rational number"))?;
    Ok(BigRational::from_integer(p))
}

/// `num/den` in lowest terms; integers print as `num/1`.
pub fn render_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}
