//! Decimal text conversion.
//!
//! Output is scientific notation `d.ddddE±XX` (at least two exponent
//! digits). Input accepts plain decimals with an optional exponent introduced
//! by `e`, `E`, `d` or `D`, so tables printed with a Fortran-style `D+00`
//! marker parse back unchanged.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::{ratio_parts, Precision, Real, RealError};

// Decimal exponents beyond this are rejected before any big-integer work.
const MAX_DECIMAL_EXPONENT: i64 = 10_000_000;

fn pow10(n: u64) -> BigUint {
    BigUint::from(10u32).pow(n)
}

/// `num / den` rounded to the nearest integer, ties to even.
fn div_round_even(num: &BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    let twice = &r << 1u32;
    match twice.cmp(den) {
        std::cmp::Ordering::Greater => q + 1u32,
        std::cmp::Ordering::Equal if q.bit(0) => q + 1u32,
        _ => q,
    }
}

impl Real {
    /// Correctly rounded conversion from decimal text.
    pub fn parse(text: &str, prec: Precision) -> Result<Real, RealError> {
        let err = || RealError::Parse(text.to_string());
        let s = text.trim();
        let (neg, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mantissa, exponent) = match body.find(['e', 'E', 'd', 'D']) {
            Some(i) => (&body[..i], Some(&body[i + 1..])),
            None => (body, None),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((a, b)) => (a, b),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return Err(err());
        }
        let mut exp10: i64 = match exponent {
            Some(e) => {
                let digits = e.strip_prefix(['+', '-']).unwrap_or(e);
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(err());
                }
                e.parse::<i64>().map_err(|_| RealError::RangeError)?
            }
            None => 0,
        };
        exp10 -= frac_part.len() as i64;
        let digits: String = int_part.chars().chain(frac_part.chars()).collect();
        let n: BigUint = digits.parse().map_err(|_| err())?;
        if n.is_zero() {
            return Ok(Real::zero(prec));
        }
        if exp10.abs() > MAX_DECIMAL_EXPONENT {
            return Err(RealError::RangeError);
        }
        if exp10 >= 0 {
            ratio_parts(neg, n * pow10(exp10 as u64), BigUint::one(), prec)
        } else {
            ratio_parts(neg, n, pow10((-exp10) as u64), prec)
        }
    }

    /// Scientific notation with `digits` significant digits, rounded
    /// half-to-even from the exact binary value.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("{}E+00", point_after_first(&"0".repeat(digits)));
        }
        let top = self.exponent().expect("nonzero");
        let mut e10 = (top as f64 * std::f64::consts::LOG10_2).floor() as i64;
        let lower = pow10(digits as u64 - 1);
        let upper = pow10(digits as u64);
        let q = loop {
            let scale = digits as i64 - 1 - e10;
            let mut num = self.mant.clone();
            let mut den = BigUint::one();
            if self.exp >= 0 {
                num <<= self.exp as u64;
            } else {
                den <<= (-self.exp) as u64;
            }
            if scale >= 0 {
                num *= pow10(scale as u64);
            } else {
                den *= pow10((-scale) as u64);
            }
            let q = div_round_even(&num, &den);
            if q >= upper {
                e10 += 1;
            } else if q < lower {
                e10 -= 1;
            } else {
                break q;
            }
        };
        let sign = if self.neg { "-" } else { "" };
        let esign = if e10 < 0 { '-' } else { '+' };
        format!(
            "{sign}{}E{esign}{:02}",
            point_after_first(&q.to_string()),
            e10.abs()
        )
    }

    /// Fixed-point notation with `decimals` digits after the point.
    pub fn to_fixed_string(&self, decimals: usize) -> String {
        let mut num = self.mant.clone() * pow10(decimals as u64);
        let mut den = BigUint::one();
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        let q = div_round_even(&num, &den);
        let mut s = q.to_string();
        if s.len() <= decimals {
            s = format!("{}{}", "0".repeat(decimals + 1 - s.len()), s);
        }
        let split = s.len() - decimals;
        let body = if decimals == 0 {
            s
        } else {
            format!("{}.{}", &s[..split], &s[split..])
        };
        if self.neg && !q.is_zero() {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Exact value as a reduced fraction `(numerator, denominator)`.
    pub fn to_ratio(&self) -> (BigInt, BigInt) {
        let sign = if self.neg {
            num_bigint::Sign::Minus
        } else {
            num_bigint::Sign::Plus
        };
        if self.is_zero() {
            return (BigInt::zero(), BigInt::one());
        }
        if self.exp >= 0 {
            (
                BigInt::from_biguint(sign, &self.mant << self.exp as u64),
                BigInt::one(),
            )
        } else {
            let tz = self
                .mant
                .trailing_zeros()
                .unwrap_or(0)
                .min((-self.exp) as u64);
            (
                BigInt::from_biguint(sign, &self.mant >> tz),
                BigInt::one() << ((-self.exp) as u64 - tz),
            )
        }
    }
}

fn point_after_first(digits: &str) -> String {
    if digits.len() == 1 {
        format!("{digits}.")
    } else {
        format!("{}.{}", &digits[..1], &digits[1..])
    }
}

impl std::str::FromStr for Real {
    type Err = RealError;

    /// Parses at [`Precision::DEFAULT`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Real::parse(s, Precision::DEFAULT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    #[test]
    fn small_values_format() {
        assert_eq!(Real::from_i64(2, p(64)).to_sci_string(6), "2.00000E+00");
        assert_eq!(Real::from_i64(117, p(64)).to_sci_string(3), "1.17E+02");
        assert_eq!(Real::zero(p(64)).to_sci_string(4), "0.000E+00");
        assert_eq!(Real::from_i64(-5, p(64)).to_sci_string(1), "-5.E+00");
    }

    #[test]
    fn negative_exponent_format() {
        let x = Real::parse("-2.041e-4", p(113)).unwrap();
        assert_eq!(x.to_sci_string(4), "-2.041E-04");
        let y = Real::parse("-2.04066547e-4", p(113)).unwrap();
        assert_eq!(y.to_sci_string(4), "-2.041E-04");
    }

    #[test]
    fn rounding_carries_into_exponent() {
        let x = Real::parse("9.9996", p(64)).unwrap();
        assert_eq!(x.to_sci_string(4), "1.000E+01");
    }

    #[test]
    fn fortran_exponent_marker_is_accepted() {
        let a = Real::parse("5.00000000000000000000000000000000000D+00", p(113)).unwrap();
        assert_eq!(a, Real::from_i64(5, p(113)));
        let b = Real::parse("1.893d-26", p(113)).unwrap();
        assert_eq!(b, Real::parse("1.893E-26", p(113)).unwrap());
    }

    #[test]
    fn malformed_text_is_rejected() {
        for bad in [
            "", "-", ".", "1e", "1e+", "abc", "1.2.3", "--1", "1e5x", " 1 2",
        ] {
            assert!(Real::parse(bad, p(64)).is_err(), "{bad:?}");
        }
        assert!(Real::parse(".5", p(64)).is_ok());
        assert!(Real::parse("5.", p(64)).is_ok());
    }

    #[test]
    fn quad_reproduces_binary128_tenth() {
        // binary128 nearest to 0.1 printed with 36 digits.
        let x = Real::parse("0.1", Precision::QUAD).unwrap();
        assert_eq!(
            x.to_sci_string(36),
            "1.00000000000000000000000000000000005E-01"
        );
    }

    #[test]
    fn fixed_format() {
        let x = Real::parse("-0.08375", p(64)).unwrap();
        assert_eq!(x.to_fixed_string(4), "-0.0838");
        assert_eq!(
            Real::parse("1.5149", p(64)).unwrap().to_fixed_string(3),
            "1.515"
        );
        assert_eq!(
            Real::parse("0.00001", p(64)).unwrap().to_fixed_string(2),
            "0.00"
        );
        assert_eq!(
            Real::parse("-0.00001", p(64)).unwrap().to_fixed_string(2),
            "0.00"
        );
        assert_eq!(Real::from_i64(12, p(64)).to_fixed_string(0), "12");
    }

    #[test]
    fn ratio_of_quarter() {
        let (n, d) = Real::parse("-0.25", p(64)).unwrap().to_ratio();
        assert_eq!((n, d), (BigInt::from(-1), BigInt::from(4)));
    }

    proptest! {
        #[test]
        fn format_parse_round_trips(m in any::<i64>(), e in -300i64..300, bits in 8u32..300) {
            let prec = p(bits);
            let x = Real::from_i64(m, prec).mul_pow2(e).unwrap();
            let text = x.to_sci_string(prec.round_trip_digits());
            let back = Real::parse(&text, prec).unwrap();
            prop_assert_eq!(back.to_sci_string(prec.round_trip_digits()), text);
            prop_assert_eq!(back, x);
        }

        #[test]
        fn f64_display_agrees_with_std(v in any::<f64>().prop_filter("finite", |v| v.is_finite() && *v != 0.0)) {
            let x = Real::from_f64(v, p(53)).unwrap();
            let ours = x.to_sci_string(17);
            let std = format!("{:.16E}", v);
            prop_assert_eq!(ours.parse::<f64>().unwrap(), std.parse::<f64>().unwrap());
            prop_assert_eq!(x.to_f64(), v);
        }
    }
}
