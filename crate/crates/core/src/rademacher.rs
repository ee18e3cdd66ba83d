//! The convergent Rademacher-type series for `A_t(n)`.
//!
//! Each modulus `k` contributes
//! `C·(2π/k)/(24n−1)^{3/4} · Σ_h e^{-2πinh/k} w(t,h,k) Σ_m e^{2πiμHm/k} c_j(m) · R_m^{3/4} I_{3/2}(…)`
//! with the constant and radicands fixed by the `k0` case.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hp::{HpComplex, HpReal, Precision};
use crate::modular::{build_context, mod_inverse, w_factor, HookCaseContext, KCase};
use crate::qseries::{expand_g_t, CoeffPlan, RationalPhase};
use crate::special::bessel_i32;

/// Cutoff grows as `DEFAULT_CUTOFF_SCALE·√n`, never below [`DEFAULT_CUTOFF_MIN`].
pub const DEFAULT_CUTOFF_SCALE: f64 = 4.0;
pub const DEFAULT_CUTOFF_MIN: usize = 64;
/// Largest cutoff the doubling search in [`evaluate_exact`] tries.
pub const DEFAULT_MAX_CUTOFF: usize = 1 << 14;
/// Series cross-checks run for `n` up to this bound by default.
pub const DEFAULT_CROSS_CHECK_LIMIT: u64 = 2000;
/// A partial sum is accepted once it lies within this distance of an integer.
pub const ROUNDING_MARGIN: (i64, i64) = (1, 4);

/// The full contribution of one modulus `k` to the exact formula.
#[derive(Clone, Debug)]
pub struct RademacherTerm {
    pub k: u64,
    pub value: HpReal,
}

/// Partial sums `A_t(d; n)` at the requested cutoffs.
#[derive(Clone, Debug)]
pub struct PartialSumTable {
    pub t: u32,
    pub n: u64,
    pub rows: Vec<(usize, HpReal)>,
}

/// `d = max(64, ⌈4√n⌉)`.
pub fn default_cutoff(n: u64) -> usize {
    let scaled = (DEFAULT_CUTOFF_SCALE * (n as f64).sqrt()).ceil() as usize;
    scaled.max(DEFAULT_CUTOFF_MIN)
}

/// Moduli `k = 2t·j` carry radicands of size about `3t²`, so the series
/// behaves like one in `k/(2t)`; the doubling search starts at this many
/// multiples of `2t`.
pub const STRUCTURAL_MULTIPLES: usize = 8;
/// Root-sum-square of the terms in `(d/2, d]` that still counts as settled.
pub const WINDOW_ENERGY_LIMIT: (i64, i64) = (1, 8);

/// First cutoff tried by the doubling search in [`evaluate_exact`].
pub fn search_start(t: u32, n: u64) -> usize {
    default_cutoff(n).max(STRUCTURAL_MULTIPLES * 2 * t as usize)
}

/// Decimal digits of `p(n)`, rounded up, used to widen the working precision
/// so that absolute errors stay below the requested precision.
fn magnitude_digits(n: u64) -> u32 {
    let e = std::f64::consts::PI * (2.0 * n as f64 / 3.0).sqrt() / std::f64::consts::LN_10;
    e.ceil() as u32 + 2
}

/// The case constant `C` as a power of two and the shift `Δ0` in
/// `G_t(x) = C·√z·exp(π(Δ0/z − z)/(12k))·w(t,h,k)·J_{t,h,k}(x')`.
pub fn transformation_constants(ctx: &HookCaseContext) -> (Ratio<i64>, Ratio<i64>) {
    let (t, g) = (ctx.t, ctx.g);
    match ctx.case {
        KCase::K0Odd => (Ratio::new(t, 2), Ratio::new(4 - 3 * g * g, 4)),
        KCase::K0TwiceOdd => (Ratio::new(-t, 2), Ratio::from_integer(1 + 3 * g * g)),
        KCase::K0Div4 => (Ratio::from_integer(0), Ratio::from_integer(1)),
    }
}

/// Everything about a `k`-term that does not depend on `h`.
struct KPlan {
    ctx: HookCaseContext,
    coeffs: Option<CoeffPlan>,
    /// `C·(2π/k)·(R_m/…)^{3/4}·I_{3/2}(…)/(24n−1)^{3/4}` for `m = 0..=U`.
    bessel: Vec<HpReal>,
}

impl KPlan {
    fn new(t: u32, n: u64, k: u64, prec: Precision) -> Result<Option<Self>> {
        let ctx = build_context(t as i64, k as i64)?;
        if !ctx.contributes() {
            return Ok(None);
        }
        let (c_exp, delta0) = transformation_constants(&ctx);
        let u = ctx.u_bound;
        let pi = HpReal::pi(prec);
        let big_n = HpReal::from_i64(24 * n as i64 - 1, prec);
        // A summand c·√z·e^{πγ/(12kz)} yields c·(2π/k)·(γ/(24n−1))^{3/4}·I_{3/2}(π√(γ(24n−1))/(6k)).
        // The y_j^m term has γ_m = Δ0 − 24m/s0.
        let shift = Ratio::new(24, ctx.x_prime_step);
        let prefactor = &(&HpReal::pow2_ratio(*c_exp.numer(), *c_exp.denom(), prec)
            * &(&pi * &HpReal::from_i64(2, prec)))
            / &(&HpReal::from_i64(k as i64, prec) * &big_n.pow_three_quarters());
        let six_k = HpReal::from_i64(6 * k as i64, prec);
        let mut bessel = Vec::with_capacity(u + 1);
        for m in 0..=u {
            let gamma = delta0 - shift * (m as i64);
            if !gamma.is_positive() {
                bessel.push(HpReal::zero(prec));
                continue;
            }
            let gam = HpReal::from_ratio(*gamma.numer(), *gamma.denom(), prec);
            let arg = &(&pi * &(&gam * &big_n).sqrt()) / &six_k;
            let value = &(&prefactor * &gam.pow_three_quarters()) * &bessel_i32(&arg, prec)?;
            bessel.push(value);
        }
        let coeffs = if u > 0 {
            Some(CoeffPlan::new(&ctx)?)
        } else {
            None
        };
        Ok(Some(KPlan {
            ctx,
            coeffs,
            bessel,
        }))
    }

    /// The complex `h`-summand.
    fn summand(&self, t: u32, n: u64, h: i64, prec: Precision) -> Result<HpComplex> {
        let k = self.ctx.k;
        let big_h = self.ctx.h_inverse(h)?;
        let theta = w_factor(t as i64, h, k)? - RationalPhase::new(mulmod(n as i64, h, k), k);
        let Some(plan) = &self.coeffs else {
            return Ok(theta.value(prec).scale(&self.bessel[0]));
        };
        let c = plan.j_series(big_h, prec)?;
        let phi = self.ctx.y_phase(big_h);
        let mut acc = HpComplex::zero(prec);
        for (m, b) in self.bessel.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let unit = (theta + phi.times(m as i64)).value(prec);
            acc = &acc + &(&unit * c.coeff(m)).scale(b);
        }
        Ok(acc)
    }

    /// Real part of the `h`-summand.
    fn summand_re(&self, t: u32, n: u64, h: i64, prec: Precision) -> Result<HpReal> {
        if self.coeffs.is_none() {
            let k = self.ctx.k;
            let theta = w_factor(t as i64, h, k)? - RationalPhase::new(mulmod(n as i64, h, k), k);
            return Ok(&theta.cos(prec) * &self.bessel[0]);
        }
        Ok(self.summand(t, n, h, prec)?.re)
    }
}

fn mulmod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

fn check_args(t: u32, n: u64, k: u64) -> Result<()> {
    if t < 2 {
        return Err(Error::InvalidContext(format!(
            "t must be at least 2, got {t}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if k < 1 {
        return Err(Error::InvalidContext("k must be positive".into()));
    }
    Ok(())
}

/// The `k`-th term, summing `h` and `k − h` together as conjugates.
pub fn term_for_k(t: u32, n: u64, k: u64, prec: Precision) -> Result<RademacherTerm> {
    check_args(t, n, k)?;
    let work = prec.widen(magnitude_digits(n));
    let Some(plan) = KPlan::new(t, n, k, work)? else {
        return Ok(RademacherTerm {
            k,
            value: HpReal::zero(prec),
        });
    };
    let ki = k as i64;
    let mut value = HpReal::zero(work);
    if ki <= 2 {
        let h = ki - 1;
        value = plan.summand_re(t, n, h, work)?;
    } else {
        let two = HpReal::from_i64(2, work);
        for h in (1..=(ki - 1) / 2).filter(|h| h.gcd(&ki) == 1) {
            value = &value + &(&two * &plan.summand_re(t, n, h, work)?);
        }
    }
    Ok(RademacherTerm { k, value })
}

/// The `k`-th term as the unpaired complex sum over every `h`; its imaginary
/// part vanishes up to rounding.
pub fn term_for_k_full(t: u32, n: u64, k: u64, prec: Precision) -> Result<HpComplex> {
    check_args(t, n, k)?;
    let work = prec.widen(magnitude_digits(n));
    let Some(plan) = KPlan::new(t, n, k, work)? else {
        return Ok(HpComplex::zero(prec));
    };
    let ki = k as i64;
    let mut acc = HpComplex::zero(work);
    for h in (0..ki).filter(|h| h.gcd(&ki) == 1) {
        acc = &acc + &plan.summand(t, n, h, work)?;
    }
    Ok(acc)
}

/// Terms for `k = from..=to`, evaluated in parallel and returned in ascending `k`.
pub fn terms(t: u32, n: u64, from: u64, to: u64, prec: Precision) -> Result<Vec<RademacherTerm>> {
    (from..=to)
        .into_par_iter()
        .map(|k| term_for_k(t, n, k, prec))
        .collect()
}

/// `A_t(d; n) = Σ_{k ≤ d} term_k`, summed in ascending `k`.
pub fn partial_sum(t: u32, n: u64, d: usize, prec: Precision) -> Result<HpReal> {
    if d < 1 {
        return Err(Error::InvalidInput("cutoff must be at least 1".into()));
    }
    let ts = terms(t, n, 1, d as u64, prec)?;
    Ok(sum_terms(&ts, prec))
}

fn sum_terms(ts: &[RademacherTerm], prec: Precision) -> HpReal {
    ts.iter()
        .fold(HpReal::zero(prec), |acc, term| &acc + &term.value)
}

/// Partial sums at each requested cutoff, sharing the terms.
pub fn partial_sums(t: u32, n: u64, cutoffs: &[usize], prec: Precision) -> Result<PartialSumTable> {
    let mut sorted = cutoffs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.first() == Some(&0) {
        return Err(Error::InvalidInput("cutoff must be at least 1".into()));
    }
    let max = sorted.last().copied().unwrap_or(0);
    let ts = terms(t, n, 1, max as u64, prec)?;
    let mut rows = Vec::with_capacity(sorted.len());
    let mut acc = HpReal::zero(prec);
    let mut next = 0;
    for (i, term) in ts.iter().enumerate() {
        acc = &acc + &term.value;
        while next < sorted.len() && sorted[next] == i + 1 {
            rows.push((i + 1, acc.clone()));
            next += 1;
        }
    }
    // Preserve the caller's order.
    let rows = cutoffs
        .iter()
        .map(|d| {
            rows.iter()
                .find(|(c, _)| c == d)
                .cloned()
                .expect("cutoff computed")
        })
        .collect();
    Ok(PartialSumTable { t, n, rows })
}

/// Knobs for [`evaluate_exact`].
#[derive(Clone, Debug)]
pub struct ExactOptions {
    /// Fixed cutoff; `None` starts at [`search_start`] and doubles.
    pub cutoff: Option<usize>,
    pub precision: Precision,
    /// Compare against the series coefficient when `n` is at most this.
    pub cross_check_limit: u64,
    pub max_cutoff: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            cutoff: None,
            precision: Precision::DEFAULT,
            cross_check_limit: DEFAULT_CROSS_CHECK_LIMIT,
            max_cutoff: DEFAULT_MAX_CUTOFF,
        }
    }
}

/// The integer recovered from the exact formula.
#[derive(Clone, Debug)]
pub struct ExactOutcome {
    pub value: BigInt,
    pub cutoff: usize,
    pub partial_sum: HpReal,
    /// `|sum − value|`.
    pub margin: HpReal,
    pub cross_checked: bool,
}

/// `A_t(n)` from partial sums of the exact formula.
///
/// With a fixed cutoff a single attempt is made. Otherwise the cutoff starts
/// at [`search_start`] and doubles until the partial sum is within the
/// rounding margin of an integer that the sums at `d/2` and `d/4` also round
/// to, and the terms in `(d/2, d]` have root-sum-square below
/// [`WINDOW_ENERGY_LIMIT`].
pub fn evaluate_exact(t: u32, n: u64, opts: &ExactOptions) -> Result<ExactOutcome> {
    check_args(t, n, 1)?;
    let prec = opts.precision.widen(magnitude_digits(n));
    let margin_limit = HpReal::from_ratio(ROUNDING_MARGIN.0, ROUNDING_MARGIN.1, prec);
    let outcome = match opts.cutoff {
        Some(0) => return Err(Error::InvalidInput("cutoff must be at least 1".into())),
        Some(d) => {
            let sum = partial_sum(t, n, d, prec)?;
            let value = sum.round_to_bigint();
            let margin = (&sum - &HpReal::from_bigint(&value, prec)).abs();
            if margin >= margin_limit {
                return Err(non_converged(t, n, d, &sum));
            }
            ExactOutcome {
                value,
                cutoff: d,
                partial_sum: sum,
                margin,
                cross_checked: false,
            }
        }
        None => {
            let energy_limit = HpReal::from_ratio(WINDOW_ENERGY_LIMIT.0, WINDOW_ENERGY_LIMIT.1, prec);
            let energy_limit_sq = &energy_limit * &energy_limit;
            let mut d = search_start(t, n).min(opts.max_cutoff.max(1));
            let mut ts = terms(t, n, 1, d as u64, prec)?;
            loop {
                let quarter = sum_terms(&ts[..d / 4], prec);
                let half = sum_terms(&ts[..d / 2], prec);
                let sum = sum_terms(&ts, prec);
                let value = sum.round_to_bigint();
                let margin = (&sum - &HpReal::from_bigint(&value, prec)).abs();
                let energy = ts[d / 2..]
                    .iter()
                    .fold(HpReal::zero(prec), |acc, term| &acc + &(&term.value * &term.value));
                if margin < margin_limit
                    && half.round_to_bigint() == value
                    && quarter.round_to_bigint() == value
                    && energy < energy_limit_sq
                {
                    break ExactOutcome {
                        value,
                        cutoff: d,
                        partial_sum: sum,
                        margin,
                        cross_checked: false,
                    };
                }
                if d >= opts.max_cutoff {
                    return Err(non_converged(t, n, d, &sum));
                }
                let next = (2 * d).min(opts.max_cutoff);
                ts.extend(terms(t, n, d as u64 + 1, next as u64, prec)?);
                d = next;
            }
        }
    };
    if n <= opts.cross_check_limit {
        let series = expand_g_t(t as usize, n as usize)?;
        let expected = series.coeff(n as usize);
        if *expected != outcome.value {
            return Err(Error::Disagreement {
                t,
                n,
                detail: format!(
                    "exact formula gives {} at cutoff {}, series gives {}",
                    outcome.value, outcome.cutoff, expected
                ),
            });
        }
        return Ok(ExactOutcome {
            cross_checked: true,
            ..outcome
        });
    }
    Ok(outcome)
}

fn non_converged(t: u32, n: u64, cutoff: usize, sum: &HpReal) -> Error {
    Error::NonConverged {
        t,
        n,
        cutoff,
        partial_sum: sum.to_fixed(6),
    }
}

/// Largest product length [`transformation_check`] accepts.
pub const MAX_PRODUCT_TERMS: usize = 200_000;

/// `Π_{n ≤ N} (1 − q^n)^{-1}` with `N` chosen so that `|q|^N < 10^(-P-5)`.
fn f_direct(q: &HpComplex, prec: Precision) -> Result<HpComplex> {
    let r = q.abs().to_f64();
    let tail = (prec.get() as f64 + 5.0) * std::f64::consts::LN_10;
    let terms = if r == 0.0 { 1.0 } else { tail / -r.ln() };
    if !(r < 1.0) || !terms.is_finite() || terms > MAX_PRODUCT_TERMS as f64 {
        return Err(Error::DivergentProduct {
            modulus: format!("{r:.6}"),
            terms: terms.min(1e18) as usize,
        });
    }
    let one = HpComplex::one(prec);
    let mut power = q.clone();
    let mut prod = one.clone();
    for _ in 0..terms.ceil() as usize {
        prod = &prod * &(&one - &power);
        power = &power * q;
    }
    Ok(prod.recip())
}

/// Relative error `|LHS − RHS|/|LHS|` of the transformation law for `G_t`
/// at `x = e^{(2πi/k)(h + iz)}`, both sides by direct truncated products.
pub fn transformation_check(
    t: u32,
    h: i64,
    k: i64,
    z: &HpComplex,
    prec: Precision,
) -> Result<HpReal> {
    let ctx = build_context(t as i64, k)?;
    if h.gcd(&k) != 1 {
        return Err(Error::NotCoprime { a: h, m: k });
    }
    if z.re.signum() <= 0 {
        return Err(Error::InvalidInput("Re z must be positive".into()));
    }
    let h = h.rem_euclid(k);
    let ti = t as i64;
    let pi = HpReal::pi(prec);
    let two_pi = &pi * &HpReal::from_i64(2, prec);
    let kk = HpReal::from_i64(k, prec);
    let factors = [(1i64, 1i64), (ti, -2 * ti), (2 * ti, 3 * ti), (4 * ti, -ti)];

    // x = e^{2πih/k}·e^{-2πz/k}
    let x = &RationalPhase::new(h, k).value(prec) * &(-z.scale(&(&two_pi / &kk))).exp();
    let mut lhs = HpComplex::one(prec);
    for (a, e) in factors {
        lhs = &lhs * &f_direct(&x.powi(a), prec)?.powi(e);
    }

    let big_h = ctx.h_inverse(h)?;
    let zinv = z.recip();
    let points: Vec<HpComplex> = if ctx.contributes() {
        // Points through y_j: x' = y^{s0}·e^{2πi(1 − s0μ)H/k}, x_i' = σ_i·y^{step_i}.
        let s0 = HpReal::from_i64(ctx.x_prime_step, prec);
        let y = &ctx.y_phase(big_h).value(prec) * &(-zinv.scale(&(&two_pi / &(&kk * &s0)))).exp();
        let mut pts = vec![&y.powi(ctx.x_prime_step) * &ctx.x_prime_phase(big_h).value(prec)];
        for (step, sign) in ctx.factor_steps() {
            let p = y.powi(step);
            pts.push(if sign < 0 { -p } else { p });
        }
        pts
    } else {
        // Each F(x^a) transformed on its own: x^a = e^{2πi(a'h + ia'z)/k_a}.
        let mut pts = Vec::with_capacity(4);
        for (a, _) in factors {
            let ga = a.gcd(&k);
            let (ka, ap) = (k / ga, a / ga);
            let ha = (ka - mod_inverse(ap * h, ka)?).rem_euclid(ka);
            let scale = &two_pi / &HpReal::from_i64(ap * ka, prec);
            pts.push(&RationalPhase::new(ha, ka).value(prec) * &(-zinv.scale(&scale)).exp());
        }
        pts
    };
    let mut j = HpComplex::one(prec);
    for (p, (_, e)) in points.iter().zip(factors) {
        j = &j * &f_direct(p, prec)?.powi(e);
    }

    let (c_exp, delta0) = transformation_constants(&ctx);
    let c = HpReal::pow2_ratio(*c_exp.numer(), *c_exp.denom(), prec);
    let d0 = HpReal::from_ratio(*delta0.numer(), *delta0.denom(), prec);
    let expo = (&zinv.scale(&d0) - z).scale(&(&pi / &HpReal::from_i64(12 * k, prec)));
    let w = w_factor(ti, h, k)?.value(prec);
    let rhs = &(&(&z.sqrt().scale(&c) * &expo.exp()) * &w) * &j;
    Ok((&lhs - &rhs).abs() / lhs.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Precision = Precision::digits(50);

    fn close(x: &HpReal, target: f64, tol: f64) -> bool {
        (x.to_f64() - target).abs() <= tol
    }

    #[test]
    fn odd_case_with_shared_factor_vanishes() {
        for (t, k) in [(3, 3), (3, 9), (6, 3), (10, 5), (9, 15)] {
            assert!(term_for_k(t, 20, k, P).unwrap().value.is_zero());
        }
    }

    #[test]
    fn terms_are_real() {
        let tol = P.tolerance(10);
        for n in [50, 100] {
            for k in 1..=50 {
                let full = term_for_k_full(3, n, k, P).unwrap();
                assert!(
                    full.im.abs() < &tol * &full.re.abs().max(&HpReal::one(P)),
                    "n = {n}, k = {k}"
                );
                let paired = term_for_k(3, n, k, P).unwrap().value;
                assert!((&full.re - &paired).abs() < &tol * &paired.abs().max(&HpReal::one(P)));
            }
        }
        for (t, k) in [(6, 4), (8, 16), (12, 24), (5, 10)] {
            let full = term_for_k_full(t, 30, k, P).unwrap();
            assert!(full.im.abs() < &tol * &full.re.abs().max(&HpReal::one(P)));
        }
    }

    #[test]
    fn table_partial_sums() {
        let table = partial_sums(3, 50, &[10, 100], P).unwrap();
        assert!(close(&table.rows[0].1, 114580.084, 0.002));
        assert!(close(&table.rows[1].1, 114579.996, 0.002));
    }

    #[test]
    fn exact_values() {
        let out = evaluate_exact(3, 50, &ExactOptions::default()).unwrap();
        assert_eq!(out.value, BigInt::from(114580));
        assert!(out.cross_checked);
        let out = evaluate_exact(5, 30, &ExactOptions::default()).unwrap();
        assert_eq!(&out.value, expand_g_t(5, 30).unwrap().coeff(30));
    }

    #[test]
    fn fixed_cutoff_too_small_fails() {
        let opts = ExactOptions {
            cutoff: Some(1),
            ..ExactOptions::default()
        };
        match evaluate_exact(3, 50, &opts) {
            Err(Error::NonConverged { cutoff: 1, .. }) => {}
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn transformation_law_each_case() {
        let p = Precision::digits(40);
        let one = HpComplex::one(p);
        let three_halves = HpComplex::from_real(HpReal::from_ratio(3, 2, p));
        let e = transformation_check(2, 0, 1, &one, p).unwrap();
        assert!(e < HpReal::from_f64(1e-20, p), "{e}");
        let e = transformation_check(6, 1, 4, &one, p).unwrap();
        assert!(e < HpReal::from_f64(1e-15, p), "{e}");
        let e = transformation_check(3, 1, 8, &three_halves, p).unwrap();
        assert!(e < HpReal::from_f64(1e-15, p), "{e}");
    }

    #[test]
    fn transformation_law_wider_sweep() {
        let p = Precision::digits(30);
        let z = HpComplex::new(HpReal::from_ratio(6, 5, p), HpReal::from_ratio(1, 3, p));
        for t in [2u32, 3, 4, 5, 6, 8, 12] {
            for k in 1..=12i64 {
                for h in (0..k).filter(|h| h.gcd(&k) == 1).take(3) {
                    let e = transformation_check(t, h, k, &z, p).unwrap();
                    assert!(
                        e < HpReal::from_f64(1e-20, p),
                        "t = {t}, h = {h}, k = {k}: {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn divergent_product_reported() {
        let p = Precision::digits(30);
        let tiny = HpComplex::from_real(HpReal::from_ratio(1, 100_000, p));
        assert!(matches!(
            transformation_check(3, 1, 8, &tiny, p),
            Err(Error::DivergentProduct { .. })
        ));
    }
}
