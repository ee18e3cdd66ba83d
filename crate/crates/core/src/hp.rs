//! Multiprecision real and complex carriers.
//!
//! [`HpReal`] wraps an `astro_float::BigFloat` together with its working
//! precision in bits. Binary operations run at the larger of the two operand
//! precisions. Every value carries [`GUARD_BITS`] beyond the requested decimal
//! digits, so a result advertised at `P` digits is accurate to `10^(-P+5)`
//! after the usual short chains of operations in this crate.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Extra working bits carried on top of the requested decimal precision.
pub const GUARD_BITS: usize = 32;

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const DEFAULT: Precision = Precision(50);

    pub const fn digits(digits: u32) -> Self {
        Precision(digits)
    }

    pub const fn get(self) -> u32 {
        self.0
    }

    /// Mantissa bits used for values at this precision, guard bits included,
    /// rounded up to whole 64-bit words (astro-float division returns NaN on
    /// some single partial-word mantissas).
    pub fn bits(self) -> usize {
        let raw = (self.0 as f64 * LOG2_10).ceil() as usize + GUARD_BITS;
        raw.div_ceil(64) * 64
    }

    /// Same precision widened by `extra` digits.
    pub fn widen(self, extra: u32) -> Self {
        Precision(self.0 + extra)
    }

    /// `10^(-(P - slack))`, the tolerance the precision contract promises
    /// with `slack` digits given up.
    pub fn tolerance(self, slack: u32) -> HpReal {
        let exp = self.0.saturating_sub(slack) as i32;
        HpReal::from_i64(10, self).powi(exp).recip()
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A multiprecision real number.
#[derive(Clone)]
pub struct HpReal {
    value: BigFloat,
    bits: usize,
}

impl HpReal {
    fn wrap(value: BigFloat, bits: usize) -> Self {
        HpReal { value, bits }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        let bits = prec.bits();
        Self::wrap(BigFloat::from_i64(v, bits), bits)
    }

    pub fn from_f64(v: f64, prec: Precision) -> Self {
        let bits = prec.bits();
        Self::wrap(BigFloat::from_f64(v, bits), bits)
    }

    pub fn from_ratio(num: i64, den: i64, prec: Precision) -> Self {
        Self::from_i64(num, prec) / Self::from_i64(den, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: Precision) -> Self {
        let bits = prec.bits();
        let (sign, words) = v.to_u64_digits();
        if words.is_empty() {
            return Self::zero(prec);
        }
        let s = if sign == num_bigint::Sign::Minus {
            Sign::Neg
        } else {
            Sign::Pos
        };
        let exponent = (words.len() * 64) as i32;
        let mut value = BigFloat::from_words(&words, s, exponent);
        value
            .set_precision(bits, RM)
            .expect("precision within astro-float limits");
        Self::wrap(value, bits)
    }

    pub fn pi(prec: Precision) -> Self {
        let bits = prec.bits();
        Self::wrap(with_consts(|cc| cc.pi(bits, RM)), bits)
    }

    pub fn precision_bits(&self) -> usize {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.value.is_negative()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.value.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.bits)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.value.reciprocal(self.bits, RM), self.bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.bits, RM), self.bits)
    }

    /// `x^(3/4)` for `x >= 0`.
    pub fn pow_three_quarters(&self) -> Self {
        let r = self.sqrt();
        let q = r.sqrt();
        &r * &q
    }

    pub fn powi(&self, n: i32) -> Self {
        let v = self.value.powi(n.unsigned_abs() as usize, self.bits, RM);
        let out = Self::wrap(v, self.bits);
        if n < 0 {
            out.recip()
        } else {
            out
        }
    }

    pub fn exp(&self) -> Self {
        Self::wrap(
            with_consts(|cc| self.value.exp(self.bits, RM, cc)),
            self.bits,
        )
    }

    pub fn ln(&self) -> Self {
        Self::wrap(
            with_consts(|cc| self.value.ln(self.bits, RM, cc)),
            self.bits,
        )
    }

    pub fn cos(&self) -> Self {
        Self::wrap(
            with_consts(|cc| self.value.cos(self.bits, RM, cc)),
            self.bits,
        )
    }

    pub fn sin(&self) -> Self {
        Self::wrap(
            with_consts(|cc| self.value.sin(self.bits, RM, cc)),
            self.bits,
        )
    }

    pub fn cosh(&self) -> Self {
        Self::wrap(
            with_consts(|cc| self.value.cosh(self.bits, RM, cc)),
            self.bits,
        )
    }

    pub fn sinh(&self) -> Self {
        Self::wrap(
            with_consts(|cc| self.value.sinh(self.bits, RM, cc)),
            self.bits,
        )
    }

    /// `2^(num/den)`.
    pub fn pow2_ratio(num: i64, den: i64, prec: Precision) -> Self {
        let two = Self::from_i64(2, prec);
        if den == 1 {
            return two.powi(num as i32);
        }
        if den == 2 {
            let half = two.sqrt();
            return two.powi(num.div_euclid(2) as i32)
                * if num.rem_euclid(2) == 1 {
                    half
                } else {
                    Self::one(prec)
                };
        }
        (Self::from_ratio(num, den, prec) * two.ln()).exp()
    }

    /// `cos(2π·num/den)`; quarter turns are exact.
    pub fn cos_turns(num: i64, den: i64, prec: Precision) -> Self {
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        match (num, den) {
            (0, 1) => Self::one(prec),
            (1, 2) => Self::from_i64(-1, prec),
            (_, 4) => Self::zero(prec),
            _ => (Self::pi(prec) * Self::from_i64(2 * num, prec) / Self::from_i64(den, prec)).cos(),
        }
    }

    /// `sin(2π·num/den)`; quarter turns are exact.
    pub fn sin_turns(num: i64, den: i64, prec: Precision) -> Self {
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        match (num, den) {
            (0, 1) | (1, 2) => Self::zero(prec),
            (1, 4) => Self::one(prec),
            (3, 4) => Self::from_i64(-1, prec),
            _ => (Self::pi(prec) * Self::from_i64(2 * num, prec) / Self::from_i64(den, prec)).sin(),
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// `(mantissa, shift)` with `self = mantissa · 2^shift` exactly.
    fn to_scaled_integer(&self) -> (BigInt, i64) {
        match self.value.as_raw_parts() {
            Some((words, _, sign, exponent, _)) if !self.is_zero() => {
                let mag = BigUint::from_slice(
                    &words
                        .iter()
                        .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                        .collect::<Vec<_>>(),
                );
                let m = if sign == Sign::Neg {
                    -BigInt::from(mag)
                } else {
                    BigInt::from(mag)
                };
                (m, exponent as i64 - 64 * words.len() as i64)
            }
            _ => (BigInt::zero(), 0),
        }
    }

    /// `round(self · 10^decimals)` with ties to even, computed exactly from
    /// the binary value.
    pub fn scaled_round_half_even(&self, decimals: u32) -> BigInt {
        let (m, shift) = self.to_scaled_integer();
        let scaled = m * BigInt::from(10u32).pow(decimals);
        if shift >= 0 {
            return scaled << shift as usize;
        }
        let den = BigInt::one() << (-shift) as usize;
        round_half_even(&scaled, &den)
    }

    /// Nearest integer, ties to even.
    pub fn round_to_bigint(&self) -> BigInt {
        self.scaled_round_half_even(0)
    }

    /// Fixed-point decimal rendering with ties to even.
    pub fn to_fixed(&self, decimals: u32) -> String {
        format_fixed(&self.scaled_round_half_even(decimals), decimals)
    }

    pub fn to_f64(&self) -> f64 {
        match self.value.as_raw_parts() {
            Some((words, _, sign, exponent, _)) if !self.is_zero() => {
                let n = words.len();
                let hi = words[n - 1] as f64;
                let lo = if n > 1 { words[n - 2] as f64 } else { 0.0 };
                let mant = (hi + lo / 18446744073709551616.0) / 18446744073709551616.0;
                let v = mant * 2f64.powi(exponent.clamp(-1100, 1100));
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            _ => 0.0,
        }
    }

    fn binop(&self, rhs: &Self, op: impl FnOnce(&BigFloat, &BigFloat, usize) -> BigFloat) -> Self {
        let bits = self.bits.max(rhs.bits);
        Self::wrap(op(&self.value, &rhs.value, bits), bits)
    }
}

/// `round(num/den)`, ties to even; `den > 0`.
pub(crate) fn round_half_even(num: &BigInt, den: &BigInt) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    let twice = &r * 2u32;
    match twice.cmp(den) {
        Ordering::Less => q,
        Ordering::Greater => q + 1u32,
        Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1u32
            }
        }
    }
}

pub(crate) fn format_fixed(scaled: &BigInt, decimals: u32) -> String {
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let d = decimals as usize;
    let body = if d == 0 {
        digits
    } else if digits.len() > d {
        format!(
            "{}.{}",
            &digits[..digits.len() - d],
            &digits[digits.len() - d..]
        )
    } else {
        format!("0.{}{}", "0".repeat(d - digits.len()), digits)
    };
    if neg && scaled != &BigInt::zero() {
        format!("-{body}")
    } else {
        body
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $call:ident) => {
        impl $trait<&HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                self.binop(rhs, |a, b, p| a.$call(b, p, RM))
            }
        }
        impl $trait<HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HpReal> for HpReal {
            type Output = HpReal;
            fn $method(self, rhs: &HpReal) -> HpReal {
                (&self).$method(rhs)
            }
        }
        impl $trait<HpReal> for &HpReal {
            type Output = HpReal;
            fn $method(self, rhs: HpReal) -> HpReal {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::wrap(self.value.neg(), self.bits)
    }
}

impl Neg for &HpReal {
    type Output = HpReal;
    fn neg(self) -> HpReal {
        HpReal::wrap(self.value.clone().neg(), self.bits)
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match with_consts(|cc| self.value.format(Radix::Dec, RM, cc)) {
            Ok(s) => f.write_str(&s),
            Err(_) => write!(f, "{}", self.to_f64()),
        }
    }
}

impl fmt::Debug for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HpReal({self})")
    }
}

/// A multiprecision complex number.
#[derive(Clone, Debug, PartialEq)]
pub struct HpComplex {
    pub re: HpReal,
    pub im: HpReal,
}

impl HpComplex {
    pub fn new(re: HpReal, im: HpReal) -> Self {
        HpComplex { re, im }
    }

    pub fn from_real(re: HpReal) -> Self {
        let im = HpReal::wrap(BigFloat::from_i64(0, re.bits), re.bits);
        HpComplex { re, im }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::new(HpReal::zero(prec), HpReal::zero(prec))
    }

    pub fn one(prec: Precision) -> Self {
        Self::new(HpReal::one(prec), HpReal::zero(prec))
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        Self::new(HpReal::from_i64(v, prec), HpReal::zero(prec))
    }

    /// `e^(2πi·num/den)`.
    pub fn root_of_unity(num: i64, den: i64, prec: Precision) -> Self {
        Self::new(
            HpReal::cos_turns(num, den, prec),
            HpReal::sin_turns(num, den, prec),
        )
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> HpReal {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> HpReal {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: &HpReal) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        Self::new(&self.re / &d, -(&self.im / &d))
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        Self::new(&r * self.im.cos(), &r * self.im.sin())
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = self.abs();
        let two = HpReal::from_i64(2, Precision::digits(1));
        let re = ((&m + &self.re) / &two).sqrt();
        let im_mag = ((&m - &self.re) / &two).sqrt();
        let im = if self.im.is_negative() {
            -im_mag
        } else {
            im_mag
        };
        Self::new(re, im)
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let bits = self.re.bits.max(self.im.bits);
        let mut acc = Self::new(
            HpReal::wrap(BigFloat::from_i64(1, bits), bits),
            HpReal::wrap(BigFloat::from_i64(0, bits), bits),
        );
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add<&HpComplex> for &HpComplex {
    type Output = HpComplex;
    fn add(self, rhs: &HpComplex) -> HpComplex {
        HpComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&HpComplex> for &HpComplex {
    type Output = HpComplex;
    fn sub(self, rhs: &HpComplex) -> HpComplex {
        HpComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&HpComplex> for &HpComplex {
    type Output = HpComplex;
    fn mul(self, rhs: &HpComplex) -> HpComplex {
        HpComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&HpComplex> for &HpComplex {
    type Output = HpComplex;
    fn div(self, rhs: &HpComplex) -> HpComplex {
        self * &rhs.recip()
    }
}

impl Neg for &HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex::new(-&self.re, -&self.im)
    }
}

impl Neg for HpComplex {
    type Output = HpComplex;
    fn neg(self) -> HpComplex {
        HpComplex::new(-self.re, -self.im)
    }
}

macro_rules! complex_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<HpComplex> for HpComplex {
            type Output = HpComplex;
            fn $method(self, rhs: HpComplex) -> HpComplex {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HpComplex> for HpComplex {
            type Output = HpComplex;
            fn $method(self, rhs: &HpComplex) -> HpComplex {
                (&self).$method(rhs)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    const P: Precision = Precision::digits(40);

    #[test]
    fn integer_round_trip() {
        let v: BigInt = "-123456789012345678901234567890123".parse().unwrap();
        let x = HpReal::from_bigint(&v, P);
        assert_eq!(x.round_to_bigint(), v);
        assert_eq!(HpReal::from_i64(0, P).round_to_bigint(), BigInt::zero());
    }

    #[test]
    fn fixed_rendering_is_half_even() {
        assert_eq!(HpReal::from_ratio(5, 2, P).to_fixed(0), "2");
        assert_eq!(HpReal::from_ratio(7, 2, P).to_fixed(0), "4");
        assert_eq!(HpReal::from_ratio(-1, 8, P).to_fixed(2), "-0.12");
        assert_eq!(HpReal::from_ratio(1, 3, P).to_fixed(5), "0.33333");
        assert_eq!(HpReal::from_i64(114580, P).to_fixed(3), "114580.000");
    }

    #[test]
    fn to_f64_matches() {
        for v in [1.0, -2.5, 1e-30, 12345.678] {
            let x = HpReal::from_f64(v, P);
            assert!((x.to_f64() - v).abs() <= v.abs() * 1e-15);
        }
    }

    #[test]
    fn quarter_turns_exact() {
        assert_eq!(HpReal::cos_turns(3, 4, P), HpReal::zero(P));
        assert_eq!(HpReal::sin_turns(-1, 4, P), HpReal::from_i64(-1, P));
        assert_eq!(HpReal::cos_turns(7, 14, P), HpReal::from_i64(-1, P));
        let c = HpReal::cos_turns(1, 6, P);
        assert!((c - HpReal::from_ratio(1, 2, P)).abs() < P.tolerance(5));
    }

    #[test]
    fn complex_sqrt_and_powers() {
        let z = HpComplex::new(HpReal::from_i64(-3, P), HpReal::from_i64(4, P));
        let r = z.sqrt();
        assert!((&(&r * &r) - &z).abs() < P.tolerance(5));
        let w = z.powi(-3);
        let back = &w * &z.powi(3);
        assert!((&back - &HpComplex::one(P)).abs() < P.tolerance(5));
    }

    #[test]
    fn pow2_ratio_cases() {
        let v = HpReal::pow2_ratio(3, 2, P);
        assert!((&v * &v - HpReal::from_i64(8, P)).abs() < P.tolerance(5));
        let v = HpReal::pow2_ratio(-5, 2, P);
        assert!((&v * &v - HpReal::from_ratio(1, 32, P)).abs() < P.tolerance(5));
        let v = HpReal::pow2_ratio(1, 3, P);
        assert!((v.powi(3) - HpReal::from_i64(2, P)).abs() < P.tolerance(5));
    }
}
