//! Exact rational arithmetic helpers.
//!
//! All probability-space computation in this crate is done over
//! arbitrary-precision rationals; floats only appear in the entropy and
//! search modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}

/// Formats as `num/den` in lowest terms, e.g. `0/1`, `-3/7`.
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den` or a bare integer `num`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|e| format!("bad numerator {s:?}: {e}"))?;
    let den: BigInt = den
        .parse()
        .map_err(|e| format!("bad denominator {s:?}: {e}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(num, den))
}

/// Exact conversion of a finite f64 into the dyadic rational it represents.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    BigRational::from_float(x)
}

pub fn is_nonnegative(x: &Rat) -> bool {
    !x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0/1", "1/2", "-3/7", "21/50"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert_eq!(parse_rat("4").unwrap(), rat_int(4));
        assert_eq!(parse_rat(" 2/6 ").unwrap(), rat(1, 3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn f64_conversion_is_exact_for_dyadics() {
        assert_eq!(rat_from_f64(0.25).unwrap(), rat(1, 4));
        assert_eq!(to_f64(&rat(1, 2)), 0.5);
    }
}
