use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;

use crate::hp::{HpComplex, HpReal, Precision};

/// An exact rational `q` standing for the root of unity `e^(2πi·q)`.
///
/// Stored reduced with `0 <= num < den`, so equal roots compare equal.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPhase {
    num: i64,
    den: i64,
}

impl RationalPhase {
    pub const ZERO: RationalPhase = RationalPhase { num: 0, den: 1 };
    pub const HALF: RationalPhase = RationalPhase { num: 1, den: 2 };

    /// `num/den` reduced modulo 1. Panics on `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        assert!(den != 0, "phase denominator must be nonzero");
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        RationalPhase {
            num: i64::try_from(num).expect("phase numerator fits i64"),
            den: i64::try_from(den).expect("phase denominator fits i64"),
        }
    }

    pub fn from_ratio(r: &Ratio<i128>) -> Self {
        Self::from_i128(*r.numer(), *r.denom())
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// `m·q`, i.e. the `m`-th power of the root of unity.
    pub fn times(self, m: i64) -> Self {
        Self::from_i128(self.num as i128 * m as i128, self.den as i128)
    }

    /// The represented root of unity.
    pub fn value(&self, prec: Precision) -> HpComplex {
        HpComplex::root_of_unity(self.num, self.den, prec)
    }

    /// Real part of the represented root of unity.
    pub fn cos(&self, prec: Precision) -> HpReal {
        HpReal::cos_turns(self.num, self.den, prec)
    }
}

impl Add for RationalPhase {
    type Output = RationalPhase;
    fn add(self, rhs: RationalPhase) -> RationalPhase {
        let (a, b) = (self.num as i128, self.den as i128);
        let (c, d) = (rhs.num as i128, rhs.den as i128);
        RationalPhase::from_i128(a * d + c * b, b * d)
    }
}

impl Sub for RationalPhase {
    type Output = RationalPhase;
    fn sub(self, rhs: RationalPhase) -> RationalPhase {
        self + (-rhs)
    }
}

impl Neg for RationalPhase {
    type Output = RationalPhase;
    fn neg(self) -> RationalPhase {
        RationalPhase::from_i128(-(self.num as i128), self.den as i128)
    }
}

impl fmt::Debug for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPhase({}/{})", self.num, self.den)
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_modulo_one() {
        assert_eq!(RationalPhase::new(5, 4), RationalPhase::new(1, 4));
        assert_eq!(RationalPhase::new(-1, 4), RationalPhase::new(3, 4));
        assert_eq!(RationalPhase::new(2, -6), RationalPhase::new(2, 3));
        assert_eq!(RationalPhase::new(6, 3), RationalPhase::ZERO);
    }

    #[test]
    fn arithmetic() {
        let a = RationalPhase::new(1, 6);
        let b = RationalPhase::new(1, 3);
        assert_eq!(a + b, RationalPhase::HALF);
        assert_eq!(a - b, RationalPhase::new(5, 6));
        assert_eq!(a.times(9), RationalPhase::HALF);
        assert_eq!(-RationalPhase::ZERO, RationalPhase::ZERO);
    }

    #[test]
    fn roots_of_unity() {
        let p = Precision::digits(30);
        let v = RationalPhase::HALF.value(p);
        assert_eq!(v.re, HpReal::from_i64(-1, p));
        assert!(v.im.is_zero());
        let z = RationalPhase::new(1, 7).value(p).powi(7);
        assert!((&z - &HpComplex::one(p)).abs() < p.tolerance(5));
    }
}
