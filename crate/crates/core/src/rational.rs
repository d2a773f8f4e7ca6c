//! Arbitrary-precision rational scalars. A thin layer over `num-rational`,
//! which already keeps values reduced with a positive denominator.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `k!` as a big integer.
pub fn factorial(k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for j in 2..=k {
        acc *= BigInt::from(j);
    }
    acc
}

/// Parses `p` or `p/q` with an optional leading sign.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Renders `p/q`, omitting the denominator when it is one.
pub fn rational_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_negative(r: &Rational) -> bool {
    r.numer().is_negative()
}
