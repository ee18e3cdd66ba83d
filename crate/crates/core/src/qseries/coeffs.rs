use num_bigint::BigInt;
use num_integer::Integer;

use super::complex::spread_with_phase;
use super::int::eta_factor;
use super::{ComplexSeries, RationalPhase};
use crate::error::{Error, Result};
use crate::hp::{HpComplex, Precision};
use crate::modular::{HookCaseContext, KCase};

/// One factor `F(σ·ζ·y^step)^exponent` of `J_{t,h,k}(x')` in the variable `y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JFactor {
    pub step: usize,
    pub sign: i32,
    pub exponent: i64,
}

/// The `h`-independent part of the `c_j(t,h,k;m)` computation for one `(t, k)`:
/// the factor layout and the exact integer coefficients of each `F^e`.
#[derive(Clone, Debug)]
pub struct CoeffPlan {
    ctx: HookCaseContext,
    order: usize,
    factors: [JFactor; 4],
    base: [Vec<BigInt>; 4],
}

impl CoeffPlan {
    /// Plan truncated at `U_{t,k}`.
    pub fn new(ctx: &HookCaseContext) -> Result<Self> {
        Self::with_order(ctx, ctx.u_bound)
    }

    /// Plan truncated at an arbitrary order.
    pub fn with_order(ctx: &HookCaseContext, order: usize) -> Result<Self> {
        if ctx.case == KCase::K0Odd && ctx.g != 1 {
            return Err(Error::InvalidContext(format!(
                "k = {} with odd k0 needs gcd(k, t) = 1 (t = {})",
                ctx.k, ctx.t
            )));
        }
        let t = ctx.t;
        let [s1, s2, s3] = ctx.factor_steps();
        let layout = [
            (ctx.x_prime_step, 1, 1),
            (s1.0, s1.1, -2 * t),
            (s2.0, s2.1, 3 * t),
            (s3.0, s3.1, -t),
        ];
        let factors = layout.map(|(step, sign, exponent)| JFactor {
            step: step as usize,
            sign,
            exponent,
        });
        let base = factors.clone().map(|f| {
            eta_factor(1, -f.exponent, order / f.step)
                .expect("unit constant term")
                .into_coeffs()
        });
        Ok(CoeffPlan {
            ctx: ctx.clone(),
            order,
            factors,
            base,
        })
    }

    pub fn context(&self) -> &HookCaseContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `F(x'), F(x_1'), F(x_2'), F(x_3')` with their exponents.
    pub fn factors(&self) -> &[JFactor; 4] {
        &self.factors
    }

    /// Root-of-unity multipliers of the four factors; only `x'` carries one.
    pub fn factor_phases(&self, big_h: i64) -> [RationalPhase; 4] {
        [
            self.ctx.x_prime_phase(big_h),
            RationalPhase::ZERO,
            RationalPhase::ZERO,
            RationalPhase::ZERO,
        ]
    }

    /// The truncated expansion of `J_{t,h,k}(x')` in `y_j`.
    pub fn j_series(&self, big_h: i64, prec: Precision) -> Result<ComplexSeries> {
        let phases = self.factor_phases(big_h);
        let mut acc = ComplexSeries::one(self.order, prec);
        for ((f, base), phase) in self.factors.iter().zip(&self.base).zip(phases) {
            if f.step > self.order {
                continue;
            }
            let s = spread_with_phase(base, f.step, phase, f.sign, self.order, prec);
            acc = acc.mul(&s)?;
        }
        Ok(acc)
    }
}

/// `c_j(t,h,k;m)` for `m = 0..=U_{t,k}`, with `j` fixed by the context's case.
pub fn compute_c_coeffs(
    ctx: &HookCaseContext,
    h: i64,
    big_h: i64,
    prec: Precision,
) -> Result<Vec<HpComplex>> {
    check_pair(ctx.k, h, big_h)?;
    let plan = CoeffPlan::new(ctx)?;
    Ok(plan.j_series(big_h, prec)?.into_coeffs())
}

pub(crate) fn check_pair(k: i64, h: i64, big_h: i64) -> Result<()> {
    if h.gcd(&k) != 1 {
        return Err(Error::NotCoprime { a: h, m: k });
    }
    if (h as i128 * big_h as i128 + 1).rem_euclid(k as i128) != 0 {
        return Err(Error::InvalidContext(format!(
            "hH ≢ -1 (mod {k}) for h = {h}, H = {big_h}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::HpReal;
    use crate::modular::{build_context, mod_inverse};

    const P: Precision = Precision::digits(40);

    /// `J` expanded directly in `|y_j|` from the transformation of each
    /// `F(x^a)` on its own: `x^a` with `g_a = gcd(a,k)` maps to
    /// `e^{2πi H_a/k_a}·|y_j|^{g_a²/(a u)}`, `H_a = -(a h/g_a)^{-1} mod k/g_a`.
    fn direct_expansion(t: i64, k: i64, h: i64, order: usize) -> Vec<HpComplex> {
        let ctx = build_context(t, k).unwrap();
        // 1/u in units of |y_j|: 4t, 2t0, t0.
        let inv_u = match ctx.case {
            KCase::K0Odd => 4 * t,
            KCase::K0TwiceOdd => 2 * ctx.t0,
            KCase::K0Div4 => ctx.t0,
        };
        let mut acc = ComplexSeries::one(order, P);
        for (a, e) in [(1, 1), (t, -2 * t), (2 * t, 3 * t), (4 * t, -t)] {
            let ga = a.gcd(&k);
            let ka = k / ga;
            let ap = a / ga;
            let ha = (ka - mod_inverse(ap * h, ka).unwrap()).rem_euclid(ka);
            assert_eq!((ga * ga * inv_u) % a, 0);
            let step = (ga * ga * inv_u / a) as usize;
            let base = eta_factor(1, -e, order / step).unwrap().into_coeffs();
            let s = spread_with_phase(&base, step, RationalPhase::new(ha, ka), 1, order, P);
            acc = acc.mul(&s).unwrap();
        }
        acc.into_coeffs()
    }

    #[test]
    fn constant_term_is_one() {
        for (t, k) in [(3, 5), (6, 4), (3, 8), (12, 24), (25, 1), (8, 16)] {
            let ctx = build_context(t, k).unwrap();
            for h in (0..k).filter(|h| h.gcd(&k) == 1) {
                let c = compute_c_coeffs(&ctx, h, ctx.h_inverse(h).unwrap(), P).unwrap();
                assert_eq!(c.len(), ctx.u_bound + 1);
                assert!((&c[0] - &HpComplex::one(P)).abs() < P.tolerance(5));
            }
        }
    }

    #[test]
    fn trivial_bound_gives_single_one() {
        for t in 2..12 {
            for k in (1..60).filter(|k: &i64| k.gcd(&(2 * t)) == 1) {
                let ctx = build_context(t, k).unwrap();
                let c = compute_c_coeffs(&ctx, 1, ctx.h_inverse(1).unwrap(), P).unwrap();
                assert_eq!(c.len(), 1);
                assert_eq!(c[0], HpComplex::one(P));
            }
        }
    }

    #[test]
    fn t25_k1() {
        let ctx = build_context(25, 1).unwrap();
        let c = compute_c_coeffs(&ctx, 0, 0, P).unwrap();
        assert_eq!(c.len(), 2);
        assert!((&c[1] - &HpComplex::from_i64(-25, P)).abs() < P.tolerance(5));
    }

    #[test]
    fn k1_coefficients_are_real() {
        for t in [2, 24, 25, 48, 60] {
            let ctx = build_context(t, 1).unwrap();
            for c in compute_c_coeffs(&ctx, 0, 0, P).unwrap() {
                assert!(c.im.abs() < P.tolerance(5));
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let ctx = build_context(6, 4).unwrap();
        assert!(compute_c_coeffs(&ctx, 2, 1, P).is_err());
        assert!(compute_c_coeffs(&ctx, 1, 1, P).is_err());
        let odd = build_context(6, 3).unwrap();
        assert_eq!(odd.case, KCase::K0Odd);
        assert!(compute_c_coeffs(&odd, 1, 2, P).is_err());
    }

    #[test]
    fn matches_per_factor_transformation() {
        // c_j(m)·e^{2πi μHm/k} is the coefficient of |y_j|^m.
        for t in 2..=30i64 {
            for k in 1..=40i64 {
                let ctx = build_context(t, k).unwrap();
                if !ctx.contributes() {
                    continue;
                }
                let order = ctx.u_bound.max(3);
                let plan = CoeffPlan::with_order(&ctx, order).unwrap();
                for h in (0..k).filter(|h| h.gcd(&k) == 1) {
                    let big_h = ctx.h_inverse(h).unwrap();
                    let c = plan.j_series(big_h, P).unwrap();
                    let direct = direct_expansion(t, k, h, order);
                    let phi = ctx.y_phase(big_h);
                    for m in 0..=order {
                        let lhs = c.coeff(m) * &phi.times(m as i64).value(P);
                        let scale = direct[m].abs().max(&HpReal::one(P));
                        assert!(
                            (&lhs - &direct[m]).abs() < &P.tolerance(8) * &scale,
                            "t = {t}, k = {k}, h = {h}, m = {m}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn stable_under_precision_increase() {
        let lo = Precision::digits(30);
        let hi = Precision::digits(60);
        for (t, k, h) in [(6, 4, 1), (12, 24, 5), (8, 16, 3), (30, 7, 2)] {
            let ctx = build_context(t, k).unwrap();
            let big_h = ctx.h_inverse(h).unwrap();
            let a = compute_c_coeffs(&ctx, h, big_h, lo).unwrap();
            let b = compute_c_coeffs(&ctx, h, big_h, hi).unwrap();
            for (x, y) in a.iter().zip(&b) {
                let scale = y.abs().max(&HpReal::one(hi));
                assert!((x - y).abs() < &lo.tolerance(5) * &scale);
            }
        }
    }
}
