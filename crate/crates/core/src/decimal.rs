//! Fixed-point decimal strings with a chosen rounding direction, so that a
//! printed lower bound never exceeds the value it came from (and vice versa).

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
    Nearest,
}

pub fn rational_to_decimal(value: &BigRational, digits: u32, rounding: Rounding) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = value * BigRational::from_integer(scale);
    let (q, r) = scaled.numer().div_mod_floor(scaled.denom());
    let units = match rounding {
        Rounding::Down => q,
        Rounding::Up if r.is_zero() => q,
        Rounding::Up => q + 1,
        Rounding::Nearest => {
            // ties away from zero
            let twice = r * 2;
            let above_half = if value.is_negative() {
                twice > *scaled.denom()
            } else {
                twice >= *scaled.denom()
            };
            if above_half {
                q + 1
            } else {
                q
            }
        }
    };
    fixed_point(&units, digits)
}

fn fixed_point(units: &BigInt, digits: u32) -> String {
    let sign = if units.sign() == Sign::Minus { "-" } else { "" };
    let text = units.abs().to_string();
    let digits = digits as usize;
    if digits == 0 {
        return format!("{sign}{text}");
    }
    let padded = format!("{text:0>width$}", width = digits + 1);
    let (int, frac) = padded.split_at(padded.len() - digits);
    format!("{sign}{int}.{frac}")
}

/// Exact binary value of `x`, rounded to `digits` decimals in the given direction.
pub fn f64_to_decimal(x: f64, digits: u32, rounding: Rounding) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exact = BigRational::from_float(x).expect("finite");
    rational_to_decimal(&exact, digits, rounding)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn rational_rounding() {
        assert_eq!(rational_to_decimal(&r(81, 100), 4, Rounding::Down), "0.8100");
        assert_eq!(rational_to_decimal(&r(2, 3), 3, Rounding::Down), "0.666");
        assert_eq!(rational_to_decimal(&r(2, 3), 3, Rounding::Up), "0.667");
        assert_eq!(rational_to_decimal(&r(2, 3), 3, Rounding::Nearest), "0.667");
        assert_eq!(rational_to_decimal(&r(1, 8), 2, Rounding::Nearest), "0.13");
        assert_eq!(rational_to_decimal(&r(-2, 3), 2, Rounding::Down), "-0.67");
        assert_eq!(rational_to_decimal(&r(7, 1), 0, Rounding::Down), "7");
        assert_eq!(rational_to_decimal(&r(1, 1), 3, Rounding::Up), "1.000");
    }

    #[test]
    fn float_rounding_brackets_value() {
        let x = 0.1f64; // slightly above 1/10 in binary
        assert_eq!(f64_to_decimal(x, 20, Rounding::Down), "0.10000000000000000555");
        assert_eq!(f64_to_decimal(x, 20, Rounding::Up), "0.10000000000000000556");
        assert_eq!(f64_to_decimal(205.04, 1, Rounding::Nearest), "205.0");
        assert_eq!(f64_to_decimal(f64::INFINITY, 3, Rounding::Up), "inf");
    }
}
