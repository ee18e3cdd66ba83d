use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::TruncatedSeries;
use crate::error::{Error, Result};

/// Below this many multiply-adds a product runs on the calling thread.
const PARALLEL_WORK: usize = 1 << 16;

/// A power series with exact integer coefficients, truncated after `x^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn zero(order: usize) -> Self {
        IntSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Series with the given coefficients; `order = coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least a constant term"
        );
        IntSeries { coeffs }
    }

    /// Series with small coefficients, zero-padded or cut to `order`.
    pub fn from_i64s(values: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (c, &v) in s.coeffs.iter_mut().zip(values) {
            *c = BigInt::from(v);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigInt {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn nonzero_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Substitutes `x -> x^step` and re-truncates at `order`.
    pub fn spread(&self, step: usize, order: usize) -> Self {
        assert!(step >= 1);
        let mut out = Self::zero(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = i * step;
            if e > order {
                break;
            }
            out.coeffs[e] = c.clone();
        }
        out
    }

    /// In place: `self *= (1 - x^k)`.
    fn mul_one_minus_xk(&mut self, k: usize) {
        let n = self.coeffs.len();
        for i in (k..n).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            let src = &lo[i - k];
            if !src.is_zero() {
                hi[0] -= src;
            }
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        // Walk the sparser factor's nonzero terms.
        let (sparse, dense) = if self.nonzero_terms() <= other.nonzero_terms() {
            (self, other)
        } else {
            (other, self)
        };
        let terms: Vec<(usize, Coeff<'_>)> = sparse
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, Coeff::classify(c)))
            .collect();
        let order = self.order();
        let cell = |k: usize| -> BigInt {
            let mut acc = BigInt::zero();
            for (i, c) in &terms {
                if *i > k {
                    break;
                }
                let b = &dense.coeffs[k - i];
                if b.is_zero() {
                    continue;
                }
                match c {
                    Coeff::PlusOne => acc += b,
                    Coeff::MinusOne => acc -= b,
                    Coeff::Other(v) => acc += *v * b,
                }
            }
            acc
        };
        let coeffs = if terms.len() * (order + 1) >= PARALLEL_WORK {
            (0..=order).into_par_iter().map(cell).collect()
        } else {
            (0..=order).map(cell).collect()
        };
        Ok(IntSeries { coeffs })
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if !(a0.is_one() || (-a0).is_one()) {
            return Err(Error::NotInvertible(format!(
                "constant term {a0} is not a unit"
            )));
        }
        let terms: Vec<(usize, &BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut out: Vec<BigInt> = Vec::with_capacity(self.coeffs.len());
        out.push(a0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = BigInt::zero();
            for &(j, a) in &terms {
                if j > n {
                    break;
                }
                acc += a * &out[n - j];
            }
            // c_n = -a0^{-1} Σ a_j c_{n-j}, and a0^{-1} = a0 for a unit.
            out.push(if a0.is_positive() { -acc } else { acc });
        }
        Ok(IntSeries { coeffs: out })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.order());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }
}

enum Coeff<'a> {
    PlusOne,
    MinusOne,
    Other(&'a BigInt),
}

impl<'a> Coeff<'a> {
    fn classify(c: &'a BigInt) -> Self {
        if c.is_one() {
            Coeff::PlusOne
        } else if (-c).is_one() {
            Coeff::MinusOne
        } else {
            Coeff::Other(c)
        }
    }
}

impl TruncatedSeries for IntSeries {
    fn order(&self) -> usize {
        IntSeries::order(self)
    }

    fn series_mul(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }

    fn series_inverse(&self) -> Result<Self> {
        self.inverse()
    }
}

/// `(Π_{k≥1} (1 − x^{ak}))^b` truncated after `x^order`.
///
/// The product is built in the compressed variable `y = x^a` by `|b|` sweeps
/// of sparse binomial multiplications, inverted for negative `b`, then
/// spread back to `x`.
pub fn eta_factor(a: usize, b: i64, order: usize) -> Result<IntSeries> {
    if a == 0 {
        return Err(Error::InvalidInput(
            "eta factor scale must be positive".into(),
        ));
    }
    if b == 0 {
        return Ok(IntSeries::one(order));
    }
    let inner = order / a;
    let mut s = IntSeries::one(inner);
    for _ in 0..b.unsigned_abs() {
        for k in 1..=inner {
            s.mul_one_minus_xk(k);
        }
    }
    if b < 0 {
        s = s.inverse()?;
    }
    Ok(if a == 1 { s } else { s.spread(a, order) })
}

/// Coefficients `A_t(0), …, A_t(order)` of
/// `Π (1 − x^{4tk})^t (1 − x^{tk})^{2t} / ((1 − x^{2tk})^{3t} (1 − x^k))`.
pub fn expand_g_t(t: usize, order: usize) -> Result<IntSeries> {
    if t < 2 {
        return Err(Error::InvalidInput(format!(
            "t must be at least 2, got {t}"
        )));
    }
    let tt = t as i64;
    let outer = eta_factor(4 * t, tt, order)?;
    let middle = eta_factor(t, 2 * tt, order)?;
    let denom = eta_factor(2 * t, 3 * tt, order)?.inverse()?;
    let partitions = eta_factor(1, 1, order)?.inverse()?;
    // Sparse factors (supported on multiples of t) first, the dense one last.
    outer.mul(&middle)?.mul(&denom)?.mul(&partitions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{parity_split_bruteforce, partition_count};

    /// Pentagonal number theorem: coefficients of Π(1 − x^k).
    fn pentagonal_oracle(order: usize) -> IntSeries {
        let mut c = vec![0i64; order + 1];
        for k in 0i64.. {
            let mut hit = false;
            for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
                if (g as usize) <= order {
                    c[g as usize] = if k % 2 == 0 { 1 } else { -1 };
                    hit = true;
                }
            }
            if !hit {
                break;
            }
        }
        IntSeries::from_i64s(&c, order)
    }

    #[test]
    fn product_examples() {
        let a = IntSeries::from_i64s(&[1, 1], 2);
        let b = IntSeries::from_i64s(&[1, -1], 2);
        assert_eq!(a.mul(&b).unwrap(), IntSeries::from_i64s(&[1, 0, -1], 2));
        let s = IntSeries::from_i64s(&[3, -4, 7, 2], 3);
        assert_eq!(s.mul(&IntSeries::one(3)).unwrap(), s);
        assert_eq!(
            a.mul(&IntSeries::one(3)).unwrap_err(),
            Error::OrderMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn euler_identity() {
        let p = IntSeries::from_coeffs((0..=20).map(partition_count).collect());
        let product = p.mul(&pentagonal_oracle(20)).unwrap();
        assert_eq!(product, IntSeries::one(20));
    }

    #[test]
    fn inverse_examples() {
        let geo = IntSeries::from_i64s(&[1, -1], 4).inverse().unwrap();
        assert_eq!(geo, IntSeries::from_i64s(&[1, 1, 1, 1, 1], 4));
        assert_eq!(IntSeries::one(3).inverse().unwrap(), IntSeries::one(3));
        let p = eta_factor(1, -1, 15).unwrap();
        assert_eq!(p.inverse().unwrap(), pentagonal_oracle(15));
        assert!(IntSeries::from_i64s(&[2, 1], 3).inverse().is_err());
        assert!(IntSeries::from_i64s(&[0, 1], 3).inverse().is_err());
        let neg = IntSeries::from_i64s(&[-1, 3, 2], 5);
        assert_eq!(neg.mul(&neg.inverse().unwrap()).unwrap(), IntSeries::one(5));
    }

    #[test]
    fn eta_factor_examples() {
        assert_eq!(
            eta_factor(1, -1, 5).unwrap(),
            IntSeries::from_i64s(&[1, 1, 2, 3, 5, 7], 5)
        );
        assert_eq!(eta_factor(2, 0, 6).unwrap(), IntSeries::one(6));
        assert_eq!(eta_factor(1, 1, 7).unwrap(), pentagonal_oracle(7));
        assert_eq!(
            eta_factor(3, 1, 40).unwrap(),
            pentagonal_oracle(13).spread(3, 40)
        );
        let cube = eta_factor(2, 3, 30).unwrap();
        assert_eq!(cube, eta_factor(2, 1, 30).unwrap().pow(3).unwrap());
    }

    #[test]
    fn g_t_low_coefficients() {
        assert_eq!(expand_g_t(3, 100).unwrap().coeff(50), &BigInt::from(114580));
        assert_eq!(
            expand_g_t(3, 100).unwrap().coeff(100),
            &BigInt::from(81486198)
        );
        for t in 2..=9 {
            assert!(expand_g_t(t, 5).unwrap().coeff(0).is_one());
        }
    }

    #[test]
    fn g_t_matches_enumeration() {
        for t in 2..=12 {
            let series = expand_g_t(t, 30).unwrap();
            for n in 0..=30 {
                let split = parity_split_bruteforce(n, t, 60).unwrap();
                assert_eq!(
                    series.coeff(n),
                    &BigInt::from(split.difference()),
                    "t = {t}, n = {n}"
                );
            }
        }
    }
}
