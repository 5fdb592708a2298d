//! exp, ln, sin, cos and pow.
//!
//! Each function evaluates at the caller's precision plus guard bits and
//! rounds once at the end. Errors stay below 2 ulp of the result.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{round_parts, Precision, Real, RealError};

const GUARD_BITS: u64 = 64;
// exp halves its reduced argument this many times before the series.
const EXP_HALVINGS: i64 = 16;

/// `atan(1/n)` scaled by `2^bits`, truncation error below `bits` units.
fn atan_inv_fixed(n: u32, bits: u64) -> BigInt {
    let n2 = BigUint::from(n) * n;
    let mut power = (BigUint::one() << bits) / n;
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = BigInt::from(&power / (2 * k + 1));
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

fn fixed_to_real(v: BigInt, bits: u64, prec: Precision) -> Real {
    // The truncated series is never the exact constant: sticky.
    let (neg, mag) = (v.is_negative(), v.magnitude().clone());
    round_parts(neg, mag << 2u32, -(bits as i64) - 2, true, prec).expect("constant in range")
}

impl Real {
    /// pi rounded to `prec`.
    pub fn pi(prec: Precision) -> Real {
        let bits = u64::from(prec.bits()) + GUARD_BITS;
        // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
        let v = atan_inv_fixed(5, bits) * 16 - atan_inv_fixed(239, bits) * 4;
        fixed_to_real(v, bits, prec)
    }

    /// ln 2 rounded to `prec`.
    pub fn ln2(prec: Precision) -> Real {
        let bits = u64::from(prec.bits()) + GUARD_BITS;
        // ln 2 = 2 atanh(1/3) = 2 sum 1 / ((2k+1) 3^(2k+1))
        let mut power = (BigUint::one() << bits) / 3u32;
        let mut sum = BigUint::zero();
        let mut k = 0u32;
        while !power.is_zero() {
            sum += &power / (2 * k + 1);
            power /= 9u32;
            k += 1;
        }
        fixed_to_real(BigInt::from(sum << 1u32), bits, prec)
    }

    /// Euler's number rounded to `prec`.
    pub fn e(prec: Precision) -> Real {
        Real::one(prec).exp().expect("exp(1) in range")
    }

    pub fn exp(&self) -> Result<Real, RealError> {
        let prec = self.prec;
        let top = match self.exponent() {
            None => return Ok(Real::one(prec)),
            Some(t) => t,
        };
        // |x| >= 2^41 over- or underflows the exponent range.
        if top > 40 {
            return Err(RealError::RangeError);
        }
        let int_bits = (top + 1).max(0) as u64;
        let wp = prec.widen(GUARD_BITS + EXP_HALVINGS as u64 + 8);
        let rp = wp.widen(int_bits);
        let x = self.with_precision(rp);
        let ln2 = Real::ln2(rp);
        let n = x.div(&ln2)?.round_to_bigint();
        let n_real = Real::from_bigint(&n, rp)?;
        let reduced = x.sub(&n_real.mul(&ln2)?)?.with_precision(wp);
        let r = reduced.mul_pow2(-EXP_HALVINGS)?;

        let mut sum = Real::one(wp);
        let mut term = Real::one(wp);
        let mut i = 1i64;
        loop {
            term = term.mul(&r)?.div_i64(i)?;
            if term.is_zero() || term.exponent().unwrap() < -(i64::from(wp.bits()) + 4) {
                break;
            }
            sum = sum.add(&term)?;
            i += 1;
        }
        for _ in 0..EXP_HALVINGS {
            sum = sum.mul(&sum)?;
        }
        let n = n.to_i64().ok_or(RealError::RangeError)?;
        Ok(sum.mul_pow2(n)?.with_precision(prec))
    }

    pub fn ln(&self) -> Result<Real, RealError> {
        if !self.is_positive() {
            return Err(RealError::DomainError("ln"));
        }
        let prec = self.prec;
        let one = Real::one(prec);
        if *self == one {
            return Ok(Real::zero(prec));
        }
        let wp = prec.widen(GUARD_BITS);
        // x = y 2^e with y in [1/sqrt2, sqrt2)
        let mut e = self.exponent().unwrap() + 1;
        let mut y = self.with_precision(wp).mul_pow2(-e)?;
        if y < Real::from_f64(std::f64::consts::FRAC_1_SQRT_2, wp)? {
            y = y.mul_pow2(1)?;
            e -= 1;
        }
        let one_w = Real::one(wp);
        let z = y.sub(&one_w)?.div(&y.add(&one_w)?)?;
        let mut series = z.clone();
        if !z.is_zero() {
            let z2 = z.mul(&z)?;
            let mut power = z.clone();
            let mut k = 1i64;
            loop {
                power = power.mul(&z2)?;
                let term = power.div_i64(2 * k + 1)?;
                if term.is_zero()
                    || term.exponent().unwrap()
                        < series.exponent().unwrap() - i64::from(wp.bits()) - 4
                {
                    break;
                }
                series = series.add(&term)?;
                k += 1;
            }
        }
        let ln_y = series.mul_pow2(1)?;
        let result = if e == 0 {
            ln_y
        } else {
            let ep = wp.widen(64);
            let scaled = Real::ln2(ep).mul(&Real::from_i64(e, ep))?;
            scaled.with_precision(wp).add(&ln_y)?
        };
        Ok(result.with_precision(prec))
    }

    /// Quadrant `k mod 4` and `x - k pi/2` at `wp`, widening until the
    /// reduced argument keeps full relative accuracy.
    fn reduce_half_pi(&self, wp: Precision) -> Result<(u8, Real), RealError> {
        let top = self.exponent().unwrap();
        if top < -1 {
            return Ok((0, self.with_precision(wp)));
        }
        let int_bits = (top + 2) as u64;
        let mut extra = 0u64;
        let mut attempt = 0;
        loop {
            let rp = wp.widen(int_bits + extra + 8);
            let x = self.with_precision(rp);
            let half_pi = Real::pi(rp).mul_pow2(-1)?;
            let k = x.div(&half_pi)?.round_to_bigint();
            let r = x.sub(&Real::from_bigint(&k, rp)?.mul(&half_pi)?)?;
            let loss = match r.exponent() {
                Some(t) => (-t).max(0) as u64,
                None => u64::from(wp.bits()),
            };
            attempt += 1;
            if loss + 8 <= extra || attempt > 6 {
                let quadrant = k.mod_floor(&BigInt::from(4)).to_u8().unwrap();
                return Ok((quadrant, r.with_precision(wp)));
            }
            extra = loss + 32;
        }
    }

    fn sin_series(r: &Real) -> Result<Real, RealError> {
        if r.is_zero() {
            return Ok(r.clone());
        }
        let wp = r.prec;
        let r2 = r.mul(r)?;
        let mut term = r.clone();
        let mut sum = r.clone();
        let mut i = 1i64;
        loop {
            term = term.mul(&r2)?.div_i64((2 * i) * (2 * i + 1))?.neg();
            if term.is_zero()
                || term.exponent().unwrap() < sum.exponent().unwrap() - i64::from(wp.bits()) - 4
            {
                return Ok(sum);
            }
            sum = sum.add(&term)?;
            i += 1;
        }
    }

    fn cos_series(r: &Real) -> Result<Real, RealError> {
        let wp = r.prec;
        let r2 = r.mul(r)?;
        let mut term = Real::one(wp);
        let mut sum = Real::one(wp);
        let mut i = 1i64;
        loop {
            term = term.mul(&r2)?.div_i64((2 * i - 1) * (2 * i))?.neg();
            if term.is_zero() || term.exponent().unwrap() < -(i64::from(wp.bits()) + 4) {
                return Ok(sum);
            }
            sum = sum.add(&term)?;
            i += 1;
        }
    }

    pub fn sin(&self) -> Result<Real, RealError> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let wp = self.prec.widen(GUARD_BITS);
        let (q, r) = self.reduce_half_pi(wp)?;
        let v = match q {
            0 => Real::sin_series(&r)?,
            1 => Real::cos_series(&r)?,
            2 => Real::sin_series(&r)?.neg(),
            _ => Real::cos_series(&r)?.neg(),
        };
        Ok(v.with_precision(self.prec))
    }

    pub fn cos(&self) -> Result<Real, RealError> {
        if self.is_zero() {
            return Ok(Real::one(self.prec));
        }
        let wp = self.prec.widen(GUARD_BITS);
        let (q, r) = self.reduce_half_pi(wp)?;
        let v = match q {
            0 => Real::cos_series(&r)?,
            1 => Real::sin_series(&r)?.neg(),
            2 => Real::cos_series(&r)?.neg(),
            _ => Real::sin_series(&r)?,
        };
        Ok(v.with_precision(self.prec))
    }

    /// `x^n` by binary powering at widened precision.
    pub fn powi(&self, n: i64) -> Result<Real, RealError> {
        let prec = self.prec;
        if n == 0 {
            return Ok(Real::one(prec));
        }
        if self.is_zero() {
            return if n < 0 {
                Err(RealError::DivisionByZero)
            } else {
                Ok(self.clone())
            };
        }
        let mag = n.unsigned_abs();
        let wp = prec.widen(2 * u64::from(64 - mag.leading_zeros()) + 16);
        let mut base = self.with_precision(wp);
        let mut acc = Real::one(wp);
        let mut e = mag;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        if n < 0 {
            acc = Real::one(wp).div(&acc)?;
        }
        Ok(acc.with_precision(prec))
    }

    /// `x^y`. Integer exponents allow any base; otherwise the base must be
    /// positive (or zero with a positive exponent).
    pub fn pow(&self, y: &Real) -> Result<Real, RealError> {
        let prec = self.same_precision(y)?;
        if y.is_zero() {
            return Ok(Real::one(prec));
        }
        if let Some(n) = y.to_i64() {
            if n.unsigned_abs() < 1 << 62 {
                return self.powi(n);
            }
        }
        if self.is_zero() {
            return if y.is_positive() {
                Ok(Real::zero(prec))
            } else {
                Err(RealError::DivisionByZero)
            };
        }
        if self.is_negative() {
            return Err(RealError::DomainError("pow"));
        }
        let y_bits = y.exponent().unwrap().max(0) as u64;
        let mut wp = prec.widen(GUARD_BITS + y_bits);
        loop {
            let t = y.with_precision(wp).mul(&self.with_precision(wp).ln()?)?;
            let t_bits = t.exponent().map_or(0, |e| e.max(0) as u64);
            let need = prec.widen(GUARD_BITS + t_bits);
            if need <= wp {
                return Ok(t.exp()?.with_precision(prec));
            }
            wp = need;
        }
    }
}
