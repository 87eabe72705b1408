//! Small helpers for exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `p/q` in lowest terms; integers render without a denominator.
pub fn to_fraction_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half away from zero to `places` digits.
pub fn to_decimal_string(r: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let twice = scaled.clone() * BigRational::from_integer(BigInt::from(2));
    // round(x) = floor((2x + 1) / 2)
    let rounded = ((twice + BigRational::from_integer(BigInt::from(1)))
        / BigRational::from_integer(BigInt::from(2)))
    .floor()
    .to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = places
        )
    }
}

/// Decimal rendering rounded half to even, as published tables usually are.
pub fn to_decimal_string_half_even(r: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = r.abs() * BigRational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let twice: BigInt = rem * 2;
    let rounded = match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal if q.is_odd() => q + 1,
        _ => q,
    };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = places
        )
    }
}

pub fn floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}
