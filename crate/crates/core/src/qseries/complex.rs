use num_bigint::BigInt;

use super::int::eta_factor;
use super::{RationalPhase, TruncatedSeries};
use crate::error::{Error, Result};
use crate::hp::{HpComplex, HpReal, Precision};

/// A power series with multiprecision complex coefficients, truncated after `y^order`.
#[derive(Clone, Debug)]
pub struct ComplexSeries {
    coeffs: Vec<HpComplex>,
    prec: Precision,
}

impl ComplexSeries {
    pub fn zero(order: usize, prec: Precision) -> Self {
        ComplexSeries {
            coeffs: vec![HpComplex::zero(prec); order + 1],
            prec,
        }
    }

    pub fn one(order: usize, prec: Precision) -> Self {
        let mut s = Self::zero(order, prec);
        s.coeffs[0] = HpComplex::one(prec);
        s
    }

    pub fn from_coeffs(coeffs: Vec<HpComplex>, prec: Precision) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least a constant term"
        );
        ComplexSeries { coeffs, prec }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    pub fn coeff(&self, i: usize) -> &HpComplex {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[HpComplex] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<HpComplex> {
        self.coeffs
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        let prec = self.prec.max(other.prec);
        let mut out = Self::zero(self.order(), prec);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=self.order() - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be nonzero.
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::NotInvertible("constant term is zero".into()));
        }
        let inv0 = self.coeffs[0].recip();
        let mut out = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = HpComplex::zero(self.prec);
            for j in 1..=n {
                if !self.coeffs[j].is_zero() {
                    acc = &acc + &(&self.coeffs[j] * &out[n - j]);
                }
            }
            out.push(-(&acc * &inv0));
        }
        Ok(ComplexSeries {
            coeffs: out,
            prec: self.prec,
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(self.order(), self.prec);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

impl TruncatedSeries for ComplexSeries {
    fn order(&self) -> usize {
        ComplexSeries::order(self)
    }

    fn series_mul(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }

    fn series_inverse(&self) -> Result<Self> {
        self.inverse()
    }
}

/// `F(σζ·y^step)` with `F = 1/(y; y)_∞`, `ζ = e^(2πi·phase)` and `σ = sign`.
pub fn f_series_in_y(
    step: usize,
    phase: RationalPhase,
    sign: i32,
    order: usize,
    prec: Precision,
) -> ComplexSeries {
    f_power_in_y(step, phase, sign, 1, order, prec)
}

/// `F(σζ·y^step)^e`, expanded from the exact integer coefficients of `F^e`.
pub fn f_power_in_y(
    step: usize,
    phase: RationalPhase,
    sign: i32,
    exponent: i64,
    order: usize,
    prec: Precision,
) -> ComplexSeries {
    assert!(step >= 1, "step must be positive");
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let base = eta_factor(1, -exponent, order / step).expect("unit constant term");
    spread_with_phase(base.coeffs(), step, phase, sign, order, prec)
}

/// `Σ_j c_j (σζ)^j y^{step·j}` for exact integer `c_j`.
pub(crate) fn spread_with_phase(
    coeffs: &[BigInt],
    step: usize,
    phase: RationalPhase,
    sign: i32,
    order: usize,
    prec: Precision,
) -> ComplexSeries {
    let root = if sign < 0 {
        phase + RationalPhase::HALF
    } else {
        phase
    };
    let mut out = ComplexSeries::zero(order, prec);
    for (j, c) in coeffs.iter().enumerate() {
        let e = j * step;
        if e > order {
            break;
        }
        let unit = root.times(j as i64).value(prec);
        out.coeffs[e] = unit.scale(&HpReal::from_bigint(c, prec));
    }
    out
}
