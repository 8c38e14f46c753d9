//! Arbitrary-precision rational numbers.
//!
//! Backed by [`num_rational::BigRational`], which keeps values in lowest
//! terms with a positive denominator, so equality and hashing are canonical.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator. Panics on zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"` or `"n"` (optionally signed) into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let mk_err = || Error::input(format!("malformed rational {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| mk_err())?;
        let den: BigInt = q.trim().parse().map_err(|_| mk_err())?;
        if den.is_zero() {
            return Err(Error::input(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| mk_err())?;
        Ok(Rational::from_integer(num))
    }
}

/// Formats a rational as `"p/q"`, or `"n"` when it is an integer.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Extracts an integer value, erroring when `r` is not integral.
pub fn to_integer(r: &Rational) -> Result<BigInt> {
    if r.denom().is_one() {
        Ok(r.numer().clone())
    } else {
        Err(Error::internal(format!(
            "expected integer, got {}",
            format_rational(r)
        )))
    }
}

/// Integer slope of the line through `(t0, v0)` and `(t1, v1)`.
/// Errors when the slope is not an integer fitting in `i64`.
pub fn integer_slope(
    t0: &Rational,
    v0: &Rational,
    t1: &Rational,
    v1: &Rational,
) -> Result<i64> {
    if t0 == t1 {
        return Err(Error::input("coincident breakpoints".to_string()));
    }
    let s = (v1 - v0) / (t1 - t0);
    let n = to_integer(&s).map_err(|_| {
        Error::input(format!("non-integer slope {}", format_rational(&s)))
    })?;
    i64::try_from(&n).map_err(|_| Error::input(format!("slope {n} out of range")))
}

/// Least common multiple of the denominators of `vals`, as i64.
pub fn denominator_lcm<'a>(vals: impl Iterator<Item = &'a Rational>) -> Result<i64> {
    let mut l = BigInt::one();
    for v in vals {
        l = num_integer::lcm(l, v.denom().abs());
    }
    i64::try_from(&l).map_err(|_| Error::input(format!("denominator lcm {l} too large")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-2", "1/2", "-7/4", "0"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        assert_eq!(format_rational(&parse_rational("2/4").unwrap()), "1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn slopes_must_be_integers() {
        let s = integer_slope(&rat(0), &rat(0), &rat(2), &rat(3));
        assert!(s.is_err());
        let s = integer_slope(&rat(0), &rat(1), &ratio(1, 2), &rat(0)).unwrap();
        assert_eq!(s, -2);
    }

    proptest::proptest! {
        #[test]
        fn format_parse_round_trip(p in -1000i64..1000, q in 1i64..200) {
            let r = ratio(p, q);
            proptest::prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }

        #[test]
        fn denominator_lcm_divides_all(ps in proptest::collection::vec((-60i64..60, 1i64..12), 1..6)) {
            let vals: Vec<Rational> = ps.iter().map(|(p, q)| ratio(*p, *q)).collect();
            let n = denominator_lcm(vals.iter()).unwrap();
            for v in &vals {
                let scaled = v * rat(n);
                proptest::prop_assert!(to_integer(&scaled).is_ok());
            }
        }
    }
}
