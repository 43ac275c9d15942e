//! Exact complex-rational scalars and the small integer combinatorics used
//! throughout (factorials, falling/rising factorials).

use std::fmt;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{Complex, One, Signed, ToPrimitive, Zero};

/// Exact complex rational coefficient.
pub type Coeff = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn real(value: BigRational) -> Coeff {
    Complex::new(value, BigRational::zero())
}

pub fn int(value: i64) -> Coeff {
    real(BigRational::from_integer(BigInt::from(value)))
}

pub fn ratio(num: i64, den: i64) -> Coeff {
    real(rat(num, den))
}

pub fn complex(re: BigRational, im: BigRational) -> Coeff {
    Complex::new(re, im)
}

/// Exact conversion of a finite `f64` (every binary float is a rational).
pub fn from_f64(value: f64) -> Option<BigRational> {
    BigRational::from_float(value)
}

pub fn rational_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn to_complex64(value: &Coeff) -> Complex64 {
    Complex64::new(rational_to_f64(&value.re), rational_to_f64(&value.im))
}

pub fn is_real(value: &Coeff) -> bool {
    value.im.is_zero()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// n (n-1) ... (n-m+1); zero when m > n.
pub fn falling_factorial(n: u64, m: u64) -> BigInt {
    if m > n {
        return BigInt::zero();
    }
    ((n - m + 1)..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// (n+1) (n+2) ... (n+m).
pub fn rising_factorial(n: u64, m: u64) -> BigInt {
    ((n + 1)..=(n + m)).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    falling_factorial(n, k) / factorial(k)
}

/// Natural log of n!, summed directly (exact enough for the block sizes in play).
pub fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Parses `3`, `-1/3`, `0.25`, `1.5e-3` exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().ok()?;
        let den: BigInt = den.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num::pow(ten, shift as usize);
    } else {
        value /= num::pow(ten, (-shift) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Human-readable complex rational, used in reports.
pub struct DisplayCoeff<'a>(pub &'a Coeff);

impl fmt::Display for DisplayCoeff<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        match (c.re.is_zero(), c.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&c.re)),
            (true, false) => write!(f, "{}i", format_rational(&c.im)),
            (false, false) => {
                let sign = if c.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "({}{}{}i)",
                    format_rational(&c.re),
                    sign,
                    format_rational(&c.im.abs())
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_and_fraction_literals() {
        assert_eq!(parse_rational("1/2"), Some(rat(1, 2)));
        assert_eq!(parse_rational("0.25"), Some(rat(1, 4)));
        assert_eq!(parse_rational("-1/3"), Some(rat(-1, 3)));
        assert_eq!(parse_rational("1.5e-3"), Some(rat(3, 2000)));
        assert_eq!(parse_rational("2E2"), Some(rat(200, 1)));
        assert_eq!(parse_rational(".5"), Some(rat(1, 2)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("-"), None);
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&rat(4, 2)), "2");
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
        assert_eq!(DisplayCoeff(&complex(rat(1, 2), rat(-1, 3))).to_string(), "(1/2-1/3i)");
    }

    #[test]
    fn factorial_family() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(1, 2), BigInt::zero());
        assert_eq!(rising_factorial(2, 3), BigInt::from(60));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert!((ln_factorial(10) - (3628800f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn float_conversion_is_exact() {
        assert_eq!(from_f64(0.5), Some(rat(1, 2)));
        assert_eq!(from_f64(f64::NAN), None);
    }
}
