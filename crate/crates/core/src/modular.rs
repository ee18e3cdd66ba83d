//! Dedekind sums, eta multipliers and the per-`(t, k)` case split of the exact formula.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qseries::RationalPhase;

/// `a^{-1} mod m` in `[0, m)`; the inverse modulo 1 is 0.
pub fn mod_inverse(a: i64, m: i64) -> Result<i64> {
    if m < 1 {
        return Err(Error::InvalidInput(format!(
            "modulus must be positive, got {m}"
        )));
    }
    if m == 1 {
        return Ok(0);
    }
    let ext = (a as i128).rem_euclid(m as i128).extended_gcd(&(m as i128));
    if ext.gcd != 1 {
        return Err(Error::NotCoprime { a, m });
    }
    Ok(ext.x.rem_euclid(m as i128) as i64)
}

/// The Dedekind sum `s(u, v) = Σ_{r=1}^{v-1} ((r/v)) ((ur/v))` as an exact rational.
///
/// Evaluated by the reciprocity law along the Euclidean algorithm after
/// removing `gcd(u, v)`.
pub fn dedekind_sum(u: i64, v: i64) -> Ratio<i128> {
    assert!(v >= 1, "Dedekind sum modulus must be positive");
    let mut h = (u as i128).rem_euclid(v as i128);
    let mut k = v as i128;
    let g = h.gcd(&k);
    if g > 1 {
        h /= g;
        k /= g;
    }
    let mut acc = Ratio::<i128>::zero();
    let mut sign = 1i128;
    // s(h,k) = -s(k mod h, h) + (h/k + k/h + 1/(hk))/12 - 1/4
    while h > 0 && k > 1 {
        let step = Ratio::new(h * h + k * k + 1, 12 * h * k) - Ratio::new(1, 4);
        acc += step * sign;
        sign = -sign;
        let r = k % h;
        k = h;
        h = r;
    }
    acc
}

/// `ω_{u,v} = e^{πi·s(u,v)}`, returned as the phase `s(u,v)/2`.
pub fn omega(u: i64, v: i64) -> RationalPhase {
    RationalPhase::from_ratio(&(dedekind_sum(u, v) / 2))
}

/// Which of the three sums of the exact formula a modulus `k` feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KCase {
    /// `k0` odd; the expansion variable is `y_1`.
    K0Odd,
    /// `k0 ≡ 2 (mod 4)`; the expansion variable is `y_2`.
    K0TwiceOdd,
    /// `4 | k0`; the expansion variable is `y_3`.
    K0Div4,
}

impl KCase {
    /// Index `j` of the expansion variable `y_j`.
    pub fn index(self) -> u32 {
        match self {
            KCase::K0Odd => 1,
            KCase::K0TwiceOdd => 2,
            KCase::K0Div4 => 3,
        }
    }
}

/// Arithmetic data for one `(t, k)` pair, shared by every `h` modulo `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookCaseContext {
    pub t: i64,
    pub k: i64,
    /// `gcd(k, t)`.
    pub g: i64,
    pub k0: i64,
    pub t0: i64,
    pub case: KCase,
    /// `4t0` inverted modulo `k0`; meaningful for `K0Odd`.
    pub inv_4t0: i64,
    /// `t0` inverted modulo `k0`.
    pub inv_t0: i64,
    /// `2` inverted modulo `k0/2`; meaningful for `K0TwiceOdd`.
    pub inv_2_half: i64,
    /// `μ` with `y_j = e^{2πi·μH/k}·|y_j|`: `(4t0)*`, `2†t0*` or `t0*`.
    pub phase_multiplier: i64,
    /// Power `s0` of `y_j` in `x' = y_j^{s0}·e^{…}`: `4t0`, `2t0` or `t0`.
    pub x_prime_step: i64,
    /// Bound `U_{t,k}` on the inner `m`-sum.
    pub u_bound: usize,
}

/// Case decomposition and inverse tables for `(t, k)`.
pub fn build_context(t: i64, k: i64) -> Result<HookCaseContext> {
    if t < 2 {
        return Err(Error::InvalidContext(format!(
            "t must be at least 2, got {t}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidContext(format!(
            "k must be positive, got {k}"
        )));
    }
    let g = k.gcd(&t);
    let (k0, t0) = (k / g, t / g);
    let case = match k0 % 4 {
        1 | 3 => KCase::K0Odd,
        2 => KCase::K0TwiceOdd,
        _ => KCase::K0Div4,
    };
    let inv_t0 = mod_inverse(t0, k0)?;
    let (inv_4t0, inv_2_half) = match case {
        KCase::K0Odd => (mod_inverse(4 * t0, k0)?, 0),
        KCase::K0TwiceOdd => (0, mod_inverse(2, k0 / 2)?),
        KCase::K0Div4 => (0, 0),
    };
    let (phase_multiplier, x_prime_step, u_bound) = match case {
        KCase::K0Odd => (inv_4t0, 4 * t0, t / 24),
        KCase::K0TwiceOdd => (inv_2_half * inv_t0, 2 * t0, t0 * (1 + 3 * g * g) / 12),
        KCase::K0Div4 => (inv_t0, t0, t0 / 24),
    };
    Ok(HookCaseContext {
        t,
        k,
        g,
        k0,
        t0,
        case,
        inv_4t0,
        inv_t0,
        inv_2_half,
        phase_multiplier,
        x_prime_step,
        u_bound: u_bound as usize,
    })
}

/// `U_{t,k}`.
pub fn u_bound(ctx: &HookCaseContext) -> usize {
    ctx.u_bound
}

impl HookCaseContext {
    /// Whether the exact formula's `k`-term can be nonzero. The first sum
    /// runs over `gcd(k, 2t) = 1`, which inside the `k0`-odd case means `g = 1`.
    pub fn contributes(&self) -> bool {
        self.case != KCase::K0Odd || self.g == 1
    }

    /// `H` in `[0, k)` with `hH ≡ -1 (mod k)`; 0 when `k = 1`.
    pub fn h_inverse(&self, h: i64) -> Result<i64> {
        Ok((self.k - mod_inverse(h, self.k)?).rem_euclid(self.k))
    }

    /// Phase of `y_j` relative to its modulus: `μH/k`.
    pub fn y_phase(&self, big_h: i64) -> RationalPhase {
        RationalPhase::new(mulmod(self.phase_multiplier, big_h, self.k), self.k)
    }

    /// Phase correction in `x' = y_j^{s0}·e^{2πi·(1 − s0·μ)H/k}`.
    pub fn x_prime_phase(&self, big_h: i64) -> RationalPhase {
        let s0mu = mulmod(self.x_prime_step, self.phase_multiplier, self.k);
        RationalPhase::new(mulmod(1 - s0mu, big_h, self.k), self.k)
    }

    /// `(step, sign)` of `x_1', x_2', x_3'` as powers of `y_j`.
    pub fn factor_steps(&self) -> [(i64, i32); 3] {
        let g = self.g;
        match self.case {
            KCase::K0Odd => [(4 * g, 1), (2 * g, 1), (g, 1)],
            KCase::K0TwiceOdd => [(2 * g, -1), (4 * g, 1), (2 * g, 1)],
            KCase::K0Div4 => [(g, 1), (2 * g, 1), (4 * g, 1)],
        }
    }
}

fn mulmod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

/// Phase of `w(t,h,k) = ω_{h,k} ω^{3t}_{2t0h,k0} / (ω^{2t}_{t0h,k0} ω^t_{4t0h,k0})`.
pub fn w_factor(t: i64, h: i64, k: i64) -> Result<RationalPhase> {
    if t < 1 || k < 1 {
        return Err(Error::InvalidContext(format!(
            "need t, k ≥ 1, got t = {t}, k = {k}"
        )));
    }
    if h.gcd(&k) != 1 {
        return Err(Error::NotCoprime { a: h, m: k });
    }
    let h = h.rem_euclid(k);
    let g = k.gcd(&t);
    let (k0, t0) = (k / g, t / g);
    let d = |a: i64| dedekind_sum(a * h, k0);
    let total = dedekind_sum(h, k) + d(2 * t0) * (3 * t as i128)
        - d(t0) * (2 * t as i128)
        - d(4 * t0) * (t as i128);
    Ok(RationalPhase::from_ratio(&(total / 2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Definitional sawtooth sum.
    fn dedekind_oracle(u: i64, v: i64) -> Ratio<i128> {
        let saw = |x: Ratio<i128>| -> Ratio<i128> {
            if x.is_integer() {
                Ratio::zero()
            } else {
                x - x.floor() - Ratio::new(1, 2)
            }
        };
        (1..v)
            .map(|r| {
                saw(Ratio::new(r as i128, v as i128)) * saw(Ratio::new((u * r) as i128, v as i128))
            })
            .sum()
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(3, 8).unwrap(), 3);
        assert_eq!(mod_inverse(7, 1).unwrap(), 0);
        assert_eq!(mod_inverse(5, 12).unwrap(), 5);
        assert_eq!(mod_inverse(-1, 7).unwrap(), 6);
        assert_eq!(
            mod_inverse(4, 6).unwrap_err(),
            Error::NotCoprime { a: 4, m: 6 }
        );
    }

    #[test]
    fn dedekind_examples() {
        assert!(dedekind_sum(5, 1).is_zero());
        assert_eq!(dedekind_sum(1, 3), Ratio::new(1, 18));
        assert_eq!(dedekind_oracle(1, 3), Ratio::new(1, 18));
        assert_eq!(dedekind_sum(-1, 3), Ratio::new(-1, 18));
        assert_eq!(dedekind_sum(6, 9), dedekind_sum(2, 3));
    }

    #[test]
    fn dedekind_matches_definition() {
        for v in 1..=200 {
            for u in 0..v {
                assert_eq!(dedekind_sum(u, v), dedekind_oracle(u, v), "s({u}, {v})");
            }
        }
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(0, 1), RationalPhase::ZERO);
        assert_eq!(omega(1, 3), RationalPhase::new(1, 36));
        assert_eq!(omega(3, 9), omega(1, 3));
        assert_eq!(omega(10, 14), omega(5, 7));
    }

    #[test]
    fn context_examples() {
        let c = build_context(6, 4).unwrap();
        assert_eq!((c.g, c.k0, c.t0, c.case), (2, 2, 3, KCase::K0TwiceOdd));
        assert_eq!(u_bound(&c), 3);
        let c = build_context(3, 5).unwrap();
        assert_eq!((c.g, c.k0, c.t0, c.case), (1, 5, 3, KCase::K0Odd));
        let c = build_context(3, 8).unwrap();
        assert_eq!((c.g, c.k0, c.case), (1, 8, KCase::K0Div4));
        assert_eq!(u_bound(&build_context(3, 1).unwrap()), 0);
        assert_eq!(u_bound(&build_context(25, 1).unwrap()), 1);
        assert!(build_context(1, 3).is_err());
        assert!(build_context(3, 0).is_err());
    }

    #[test]
    fn context_consistency() {
        for t in 2..=24 {
            for k in 1..=1000 {
                let c = build_context(t, k).unwrap();
                assert_eq!(c.g * c.k0, k);
                assert_eq!(c.g * c.t0, t);
                assert_eq!(c.k0.gcd(&c.t0), 1);
                let expected = match c.k0 % 4 {
                    0 => KCase::K0Div4,
                    2 => KCase::K0TwiceOdd,
                    _ => KCase::K0Odd,
                };
                assert_eq!(c.case, expected);
            }
        }
    }

    #[test]
    fn w_examples() {
        for t in 2..10 {
            assert_eq!(w_factor(t, 0, 1).unwrap(), RationalPhase::ZERO);
        }
        // k = 2^{s+1} with t = 2^s·ℓ: w reduces to ω_{h,k}.
        for t in 2..=40i64 {
            let s = t.trailing_zeros();
            let k = 1i64 << (s + 1);
            for h in (1..k).step_by(2) {
                assert_eq!(w_factor(t, h, k).unwrap(), omega(h, k), "t = {t}, h = {h}");
            }
        }
        assert!(w_factor(3, 2, 4).is_err());
    }

    #[test]
    fn w_half_modulus_form() {
        // ω_{t0h, k0/2} in place of ω_{2t0h, k0} when 2 | k0.
        for t in 2..=16i64 {
            for k in 1..=60i64 {
                let g = k.gcd(&t);
                let (k0, t0) = (k / g, t / g);
                if k0 % 2 != 0 {
                    continue;
                }
                for h in (0..k).filter(|h| h.gcd(&k) == 1) {
                    let total = dedekind_sum(h, k) + dedekind_sum(t0 * h, k0 / 2) * (3 * t as i128)
                        - dedekind_sum(t0 * h, k0) * (2 * t as i128)
                        - dedekind_sum(4 * t0 * h, k0) * (t as i128);
                    assert_eq!(
                        RationalPhase::from_ratio(&(total / 2)),
                        w_factor(t, h, k).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn w_is_periodic_in_h() {
        for (t, k) in [(3, 7), (6, 10), (8, 12), (5, 9)] {
            for h in (0..k).filter(|h: &i64| h.gcd(&k) == 1) {
                assert_eq!(w_factor(t, h, k).unwrap(), w_factor(t, h + k, k).unwrap());
                assert_eq!(
                    w_factor(t, h, k).unwrap(),
                    w_factor(t, h - 3 * k, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn h_inverse_and_phases() {
        for t in 2..=12 {
            for k in 1..=40 {
                let c = build_context(t, k).unwrap();
                for h in (0..k).filter(|h| h.gcd(&k) == 1) {
                    let big_h = c.h_inverse(h).unwrap();
                    assert!((0..k).contains(&big_h));
                    assert_eq!((h * big_h + 1).rem_euclid(k), 0);
                    // Every phase consuming H depends only on H mod k.
                    for shift in [-2 * k, k, 5 * k] {
                        assert_eq!(c.y_phase(big_h), c.y_phase(big_h + shift));
                        assert_eq!(c.x_prime_phase(big_h), c.x_prime_phase(big_h + shift));
                    }
                }
            }
        }
    }
}
