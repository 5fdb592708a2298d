//! Extended-precision binary floating point.
//!
//! A [`Real`] is `±mantissa · 2^exponent` where the mantissa holds exactly
//! `precision` bits. Every operation rounds its exact result once,
//! round-to-nearest ties-to-even, to the precision shared by its operands.
//! Operands of different precision are rejected rather than silently
//! widened, so a computation runs at a single precision end to end.
//!
//! Values are immutable; all operations return new values.

mod decimal;
mod transcendental;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest magnitude of the binary exponent of the leading bit.
pub const MAX_EXPONENT: i64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("result exponent outside representable range")]
    RangeError,
    #[error("argument outside the domain of {0}")]
    DomainError(&'static str),
    #[error("precision mismatch: {0} bits vs {1} bits")]
    PrecisionMismatch(u32, u32),
    #[error("invalid precision {0} (must be in 2..={max})", max = Precision::MAX_BITS)]
    InvalidPrecision(u32),
    #[error("cannot parse {0:?} as a real number")]
    Parse(String),
}

/// Significand width in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 2;
    pub const MAX_BITS: u32 = 1 << 20;
    /// IEEE binary128 significand width.
    pub const QUAD: Precision = Precision(113);
    pub const DEFAULT: Precision = Precision(256);

    pub fn new(bits: u32) -> Result<Self, RealError> {
        if (Self::MIN_BITS..=Self::MAX_BITS).contains(&bits) {
            Ok(Precision(bits))
        } else {
            Err(RealError::InvalidPrecision(bits))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Significant decimal digits that make `format -> parse` lossless.
    pub fn round_trip_digits(self) -> usize {
        (f64::from(self.0) * std::f64::consts::LOG10_2).ceil() as usize + 2
    }

    pub(crate) fn widen(self, extra: u64) -> Precision {
        let bits = (u64::from(self.0) + extra).min(u64::from(Self::MAX_BITS) * 2);
        Precision(bits as u32)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

#[derive(Clone)]
pub struct Real {
    neg: bool,
    // Zero, or exactly `prec` bits wide.
    mant: BigUint,
    exp: i64,
    prec: Precision,
}

impl Real {
    pub fn zero(prec: Precision) -> Real {
        Real {
            neg: false,
            mant: BigUint::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: Precision) -> Real {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Real {
        let mag = BigUint::from(v.unsigned_abs());
        // An i64 always fits the exponent range.
        round_parts(v < 0, mag, 0, false, prec).expect("integer in range")
    }

    pub fn from_u64(v: u64, prec: Precision) -> Real {
        round_parts(false, BigUint::from(v), 0, false, prec).expect("integer in range")
    }

    pub fn from_bigint(v: &BigInt, prec: Precision) -> Result<Real, RealError> {
        round_parts(
            v.sign() == Sign::Minus,
            v.magnitude().clone(),
            0,
            false,
            prec,
        )
    }

    /// Correctly rounded `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: Precision) -> Result<Real, RealError> {
        if den.is_zero() {
            return Err(RealError::DivisionByZero);
        }
        let neg = (num.sign() == Sign::Minus) != (den.sign() == Sign::Minus);
        ratio_parts(neg, num.magnitude().clone(), den.magnitude().clone(), prec)
    }

    /// Exact conversion of a finite `f64`, then rounded to `prec`.
    pub fn from_f64(v: f64, prec: Precision) -> Result<Real, RealError> {
        if !v.is_finite() {
            return Err(RealError::DomainError("from_f64"));
        }
        if v == 0.0 {
            return Ok(Real::zero(prec));
        }
        let bits = v.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        round_parts(v < 0.0, BigUint::from(m), e, false, prec)
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        self.to_sci_string(20).parse().unwrap_or(f64::NAN)
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Same value rounded to another precision.
    pub fn with_precision(&self, prec: Precision) -> Real {
        if prec == self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return Real::zero(prec);
        }
        // Narrowing moves the leading bit by at most one place.
        round_parts(self.neg, self.mant.clone(), self.exp, false, prec)
            .expect("rounding cannot leave the exponent range")
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.neg
    }

    pub fn is_positive(&self) -> bool {
        !self.neg && !self.is_zero()
    }

    /// `-1`, `0` or `1`.
    pub fn signum(&self) -> i32 {
        match (self.is_zero(), self.neg) {
            (true, _) => 0,
            (false, true) => -1,
            (false, false) => 1,
        }
    }

    pub fn abs(&self) -> Real {
        let mut r = self.clone();
        r.neg = false;
        r
    }

    pub fn neg(&self) -> Real {
        let mut r = self.clone();
        if !r.is_zero() {
            r.neg = !r.neg;
        }
        r
    }

    /// `floor(log2 |x|)`, or `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64 - 1)
        }
    }

    /// Weight of the last mantissa bit. For zero this is the smallest
    /// positive value at this precision.
    pub fn ulp(&self) -> Real {
        let p = self.prec.0 as i64;
        let e = match self.exponent() {
            Some(top) => top - (p - 1),
            None => -MAX_EXPONENT + (p - 1),
        };
        Real {
            neg: false,
            mant: BigUint::one() << (p - 1) as u64,
            exp: e - (p - 1),
            prec: self.prec,
        }
    }

    /// `x · 2^n`, exact unless the exponent range is exceeded.
    pub fn mul_pow2(&self, n: i64) -> Result<Real, RealError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let mut r = self.clone();
        r.exp += n;
        check_range(&r)?;
        Ok(r)
    }

    pub fn is_integer(&self) -> bool {
        if self.is_zero() || self.exp >= 0 {
            return true;
        }
        match self.mant.trailing_zeros() {
            Some(tz) => tz as i64 >= -self.exp,
            None => true,
        }
    }

    /// The value as an integer when it is one.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if !self.is_integer() {
            return None;
        }
        let mag = if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            &self.mant >> (-self.exp) as u64
        };
        let sign = if self.neg { Sign::Minus } else { Sign::Plus };
        Some(BigInt::from_biguint(sign, mag))
    }

    /// Nearest integer, ties to even.
    pub fn round_to_bigint(&self) -> BigInt {
        if self.exp >= 0 {
            return self.to_bigint().expect("integral");
        }
        let shift = (-self.exp) as u64;
        let q = &self.mant >> shift;
        let up =
            self.mant.bit(shift - 1) && (lowest_bits_nonzero(&self.mant, shift - 1) || q.bit(0));
        let q = if up { q + 1u32 } else { q };
        let sign = if self.neg { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, q)
    }

    fn same_precision(&self, other: &Real) -> Result<Precision, RealError> {
        if self.prec == other.prec {
            Ok(self.prec)
        } else {
            Err(RealError::PrecisionMismatch(self.prec.0, other.prec.0))
        }
    }

    pub fn add(&self, other: &Real) -> Result<Real, RealError> {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &Real) -> Result<Real, RealError> {
        self.add_signed(other, true)
    }

    fn add_signed(&self, other: &Real, negate_other: bool) -> Result<Real, RealError> {
        let prec = self.same_precision(other)?;
        let other_neg = other.neg != negate_other;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            let mut r = other.clone();
            r.neg = other_neg;
            return Ok(r);
        }
        let ((big, big_neg), (small, small_neg)) = if self.exp >= other.exp {
            ((self, self.neg), (other, other_neg))
        } else {
            ((other, other_neg), (self, self.neg))
        };
        let p = prec.0 as i64;
        // |small| < ulp(big)/4 cannot move the rounded sum, even when big is
        // a power of two and the sum drops into the next binade.
        if small.exp + p <= big.exp - 2 {
            let mut r = big.clone();
            r.neg = big_neg;
            return Ok(r);
        }
        let aligned = &big.mant << (big.exp - small.exp) as u64;
        let (neg, mag) = if big_neg == small_neg {
            (big_neg, aligned + &small.mant)
        } else if aligned >= small.mant {
            (big_neg, aligned - &small.mant)
        } else {
            (small_neg, &small.mant - aligned)
        };
        round_parts(neg, mag, small.exp, false, prec)
    }

    pub fn mul(&self, other: &Real) -> Result<Real, RealError> {
        let prec = self.same_precision(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Real::zero(prec));
        }
        round_parts(
            self.neg != other.neg,
            &self.mant * &other.mant,
            self.exp + other.exp,
            false,
            prec,
        )
    }

    pub fn div(&self, other: &Real) -> Result<Real, RealError> {
        let prec = self.same_precision(other)?;
        if other.is_zero() {
            return Err(RealError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Real::zero(prec));
        }
        let shift = u64::from(prec.0) + 2;
        let (q, r) = (&self.mant << shift).div_rem(&other.mant);
        round_parts(
            self.neg != other.neg,
            q,
            self.exp - other.exp - shift as i64,
            !r.is_zero(),
            prec,
        )
    }

    pub fn sqrt(&self) -> Result<Real, RealError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.neg {
            return Err(RealError::DomainError("sqrt"));
        }
        let p = u64::from(self.prec.0);
        let mut shift = p + 4;
        if (self.exp - shift as i64).rem_euclid(2) != 0 {
            shift += 1;
        }
        let n = &self.mant << shift;
        let root = n.sqrt();
        let inexact = &root * &root != n;
        round_parts(
            false,
            root,
            (self.exp - shift as i64).div_euclid(2),
            inexact,
            self.prec,
        )
    }

    pub fn add_i64(&self, v: i64) -> Result<Real, RealError> {
        self.add(&Real::from_i64(v, self.prec))
    }

    pub fn mul_i64(&self, v: i64) -> Result<Real, RealError> {
        self.mul(&Real::from_i64(v, self.prec))
    }

    pub fn div_i64(&self, v: i64) -> Result<Real, RealError> {
        self.div(&Real::from_i64(v, self.prec))
    }

    /// `|self - other| <= n · ulp(scale)`.
    pub fn within_ulps(&self, other: &Real, n: u32, scale: &Real) -> bool {
        let wide = self.prec.max(other.prec).widen(64);
        let a = self.with_precision(wide);
        let b = other.with_precision(wide);
        let diff = a.sub(&b).expect("same precision").abs();
        let tol = scale
            .ulp()
            .with_precision(wide)
            .mul(&Real::from_u64(u64::from(n), wide))
            .expect("ulp multiple in range");
        diff <= tol
    }

    fn cmp_abs(&self, other: &Real) -> Ordering {
        match (self.exponent(), other.exponent()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(a), Some(b)) if a != b => a.cmp(&b),
            _ => {
                if self.exp >= other.exp {
                    (&self.mant << (self.exp - other.exp) as u64).cmp(&other.mant)
                } else {
                    self.mant
                        .cmp(&(&other.mant << (other.exp - self.exp) as u64))
                }
            }
        }
    }
}

fn lowest_bits_nonzero(m: &BigUint, count: u64) -> bool {
    match m.trailing_zeros() {
        Some(tz) => tz < count,
        None => false,
    }
}

fn check_range(r: &Real) -> Result<(), RealError> {
    match r.exponent() {
        Some(top) if !(-MAX_EXPONENT..=MAX_EXPONENT).contains(&top) => Err(RealError::RangeError),
        _ => Ok(()),
    }
}

/// Round `±mag · 2^exp` (plus a nonzero remainder below bit 0 when `sticky`)
/// to `prec` bits. With `sticky` set, `mag` must be wider than `prec`.
pub(crate) fn round_parts(
    neg: bool,
    mag: BigUint,
    exp: i64,
    sticky: bool,
    prec: Precision,
) -> Result<Real, RealError> {
    if mag.is_zero() {
        return Ok(Real::zero(prec));
    }
    let p = u64::from(prec.0);
    let bits = mag.bits();
    let (mant, exp) = if bits > p {
        let shift = bits - p;
        let mut q = &mag >> shift;
        let mut e = exp + shift as i64;
        let half = mag.bit(shift - 1);
        let below = sticky || lowest_bits_nonzero(&mag, shift - 1);
        if half && (below || q.bit(0)) {
            q += 1u32;
            if q.bits() > p {
                q >>= 1u32;
                e += 1;
            }
        }
        (q, e)
    } else {
        debug_assert!(!sticky, "sticky rounding needs guard bits");
        let shift = p - bits;
        (mag << shift, exp - shift as i64)
    };
    let r = Real {
        neg,
        mant,
        exp,
        prec,
    };
    check_range(&r)?;
    Ok(r)
}

/// `±num / den` rounded to `prec`.
pub(crate) fn ratio_parts(
    neg: bool,
    num: BigUint,
    den: BigUint,
    prec: Precision,
) -> Result<Real, RealError> {
    if num.is_zero() {
        return Ok(Real::zero(prec));
    }
    // Quotient gets at least prec + 2 bits.
    let shift = i64::from(prec.0) + 3 + den.bits() as i64 - num.bits() as i64;
    let (num, den) = if shift >= 0 {
        (num << shift as u64, den)
    } else {
        (num, den << (-shift) as u64)
    };
    let (q, r) = num.div_rem(&den);
    round_parts(neg, q, -shift, !r.is_zero(), prec)
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Real {}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, _) => Ordering::Equal,
            (1, _) => self.cmp_abs(other),
            _ => other.cmp_abs(self),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or_else(|| self.prec.round_trip_digits());
        f.pad(&self.to_sci_string(digits))
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({}, {})", self.to_sci_string(24), self.prec)
    }
}

impl Real {
    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        self.to_bigint().and_then(|b| b.to_i64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    fn r(v: i64, bits: u32) -> Real {
        Real::from_i64(v, p(bits))
    }

    #[test]
    fn small_integer_arithmetic_is_exact() {
        let one = r(1, 113);
        assert_eq!(one.add(&one).unwrap(), r(2, 113));
        assert_eq!(r(7, 64).mul(&r(-6, 64)).unwrap(), r(-42, 64));
        assert_eq!(r(117, 113).sub(&r(56, 113)).unwrap(), r(61, 113));
        assert_eq!(r(-12, 53).div(&r(4, 53)).unwrap(), r(-3, 53));
    }

    #[test]
    fn one_third_is_within_half_ulp() {
        let prec = p(113);
        let third = r(1, 113).div(&r(3, 113)).unwrap();
        // |third - 1/3| * 3 * 2^114 <= 1  <=>  |3*third - 1| <= 2^-114
        let wide = p(400);
        let err = third
            .with_precision(wide)
            .mul(&r(3, 400))
            .unwrap()
            .sub(&r(1, 400))
            .unwrap()
            .abs();
        let bound = r(1, 400).mul_pow2(-114).unwrap();
        assert!(err <= bound, "{err:?}");
        assert_eq!(third.precision(), prec);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            r(1, 64).div(&Real::zero(p(64))),
            Err(RealError::DivisionByZero)
        );
    }

    #[test]
    fn mixing_precisions_is_rejected() {
        assert_eq!(
            r(1, 64).add(&r(1, 65)),
            Err(RealError::PrecisionMismatch(64, 65))
        );
    }

    #[test]
    fn ties_round_to_even() {
        // 2^4 + 1 = 17 at 4 bits: halfway between 16 and 18, 16 has even mantissa.
        assert_eq!(r(17, 4), r(16, 4));
        assert_eq!(r(19, 4), r(20, 4));
        assert_eq!(r(-17, 4), r(-16, 4));
        // 9 at 3 bits: between 8 and 10, mantissa of 8 is 100 (even).
        assert_eq!(r(9, 3), r(8, 3));
        assert_eq!(r(11, 3), r(12, 3));
    }

    #[test]
    fn tiny_addend_near_power_of_two() {
        let prec = p(8);
        let big = r(256, 8);
        let tiny = Real::one(prec).mul_pow2(-20).unwrap();
        assert_eq!(big.sub(&tiny).unwrap(), big);
        assert_eq!(big.add(&tiny).unwrap(), big);
        // Just over half an ulp below 256 (ulp there is 1): rounds down to 255.
        let below = Real::from_ratio(&BigInt::from(3), &BigInt::from(5), prec).unwrap();
        assert_eq!(big.sub(&below).unwrap(), r(255, 8));
    }

    #[test]
    fn exponent_overflow_is_a_range_error() {
        let x = r(1, 64).mul_pow2(MAX_EXPONENT).unwrap();
        assert_eq!(x.mul(&r(2, 64)), Err(RealError::RangeError));
        let tiny = r(1, 64).mul_pow2(-MAX_EXPONENT).unwrap();
        assert_eq!(tiny.div(&r(2, 64)), Err(RealError::RangeError));
    }

    #[test]
    fn sqrt_two_squared() {
        let two = r(2, 256);
        let s = two.sqrt().unwrap();
        assert!(s.mul(&s).unwrap().within_ulps(&two, 2, &two));
        assert_eq!(r(49, 20).sqrt().unwrap(), r(7, 20));
        assert!(r(-1, 20).sqrt().is_err());
    }

    #[test]
    fn ordering_across_precisions() {
        assert_eq!(r(3, 10), r(3, 200));
        assert!(r(-3, 10) < r(2, 300));
        assert!(Real::from_f64(0.5, p(60)).unwrap() < r(1, 7));
    }

    #[test]
    fn integer_rounding() {
        let x = Real::from_f64(2.5, p(64)).unwrap();
        assert_eq!(x.round_to_bigint(), BigInt::from(2));
        let y = Real::from_f64(-3.5, p(64)).unwrap();
        assert_eq!(y.round_to_bigint(), BigInt::from(-4));
        let z = Real::from_f64(7.25, p(64)).unwrap();
        assert_eq!(z.round_to_bigint(), BigInt::from(7));
        assert!(!z.is_integer());
        assert_eq!(r(-40, 64).to_bigint(), Some(BigInt::from(-40)));
    }

    fn normal_f64() -> impl Strategy<Value = f64> {
        (any::<i64>(), -200i32..200).prop_map(|(m, e)| (m as f64) * 2f64.powi(e))
    }

    proptest! {
        // IEEE binary64 is correctly rounded, so 53-bit results must agree bit for bit.
        #[test]
        fn matches_binary64(a in normal_f64(), b in normal_f64()) {
            let prec = p(53);
            let ra = Real::from_f64(a, prec).unwrap();
            let rb = Real::from_f64(b, prec).unwrap();
            prop_assert_eq!(ra.add(&rb).unwrap().to_f64(), a + b);
            prop_assert_eq!(ra.sub(&rb).unwrap().to_f64(), a - b);
            prop_assert_eq!(ra.mul(&rb).unwrap().to_f64(), a * b);
            if b != 0.0 {
                prop_assert_eq!(ra.div(&rb).unwrap().to_f64(), a / b);
            }
            prop_assert_eq!(ra.abs().sqrt().unwrap().to_f64(), a.abs().sqrt());
        }

        #[test]
        fn add_and_mul_commute(a in any::<i64>(), ea in -100i64..100, b in any::<i64>(), eb in -100i64..100, bits in 2u32..200) {
            let prec = p(bits);
            let x = Real::from_i64(a, prec).mul_pow2(ea).unwrap();
            let y = Real::from_i64(b, prec).mul_pow2(eb).unwrap();
            prop_assert_eq!(x.add(&y).unwrap(), y.add(&x).unwrap());
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
        }

        // Sums and products of 32-bit integers are exact at 64+ bits, so a wider
        // precision must print the same leading digits.
        #[test]
        fn widening_keeps_exact_results(a in any::<i32>(), b in any::<i32>(), extra in 0u32..300) {
            let lo = p(66);
            let hi = p(66 + extra);
            let s_lo = Real::from_i64(a.into(), lo).add(&Real::from_i64(b.into(), lo)).unwrap();
            let s_hi = Real::from_i64(a.into(), hi).add(&Real::from_i64(b.into(), hi)).unwrap();
            prop_assert_eq!(s_lo.to_sci_string(19), s_hi.to_sci_string(19));
            let m_lo = Real::from_i64(a.into(), lo).mul(&Real::from_i64(b.into(), lo)).unwrap();
            let m_hi = Real::from_i64(a.into(), hi).mul(&Real::from_i64(b.into(), hi)).unwrap();
            prop_assert_eq!(m_lo.to_sci_string(19), m_hi.to_sci_string(19));
        }
    }

    #[test]
    fn ulp_of_zero_is_usable_as_a_scale() {
        let z = Real::zero(p(64));
        assert!(z.ulp().is_positive());
        assert!(z.within_ulps(&z, 8, &z));
        assert!(!r(1, 64).within_ulps(&z, 8, &z));
    }

    #[test]
    fn ulp_of_one() {
        let one = r(1, 113);
        assert_eq!(one.ulp(), r(1, 113).mul_pow2(-112).unwrap());
    }
}
