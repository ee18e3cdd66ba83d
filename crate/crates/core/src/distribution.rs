//! Kloosterman sums, the dominant term, and the parity distribution statistics.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::hp::{format_fixed, round_half_even, HpComplex, HpReal, Precision};
use crate::modular::w_factor;
use crate::partitions::partition_count;
use crate::qseries::{expand_g_t, RationalPhase};
use crate::special::bessel_i32;

/// Moduli `24k` up to this bound are solved by a direct residue scan.
pub const RESIDUE_SCAN_LIMIT: u64 = 1_000_000;

/// `χ_12(x)`: `1` for `x ≡ ±1`, `-1` for `x ≡ ±5 (mod 12)`, else `0`.
fn chi12(x: u64) -> i64 {
    match x % 12 {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// Solutions of `x² ≡ a (mod m)` in `[0, m)`, sorted.
fn sqrt_mod(a: i128, m: u64, scan_limit: u64) -> Vec<u64> {
    let m128 = m as i128;
    let a = a.rem_euclid(m128) as u128;
    if m <= scan_limit {
        return (0..m)
            .filter(|&x| (x as u128 * x as u128) % m as u128 == a)
            .collect();
    }
    let mut roots = vec![0u64];
    let mut modulus = 1u64;
    for (p, e) in factorize(m) {
        let pe = p.pow(e);
        let local = sqrt_mod_prime_power(a, p, e);
        let mut combined = Vec::with_capacity(roots.len() * local.len());
        for &r in &roots {
            for &s in &local {
                combined.push(crt(r, modulus, s, pe));
            }
        }
        roots = combined;
        modulus *= pe;
    }
    roots.sort_unstable();
    roots
}

fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Roots modulo `p^e` by lifting roots modulo `p^i` one power at a time.
fn sqrt_mod_prime_power(a: u128, p: u64, e: u32) -> Vec<u64> {
    let p128 = p as u128;
    let mut pi = p128;
    let mut roots: Vec<u128> = (0..p128).filter(|&x| (x * x) % p128 == a % p128).collect();
    for _ in 1..e {
        let next = pi * p128;
        let target = a % next;
        let mut lifted = BTreeSet::new();
        for &r in &roots {
            if p != 2 && r % p128 != 0 {
                // Hensel: f'(r) = 2r is a unit, so the lift is unique.
                let f = (r * r + next - target) % next;
                let inv = crate::modular::mod_inverse(((2 * r) % next) as i64, next as i64)
                    .expect("2r is a unit") as u128;
                lifted.insert((r + next - (f * inv) % next) % next);
            } else {
                for j in 0..p128 {
                    let c = r + j * pi;
                    if (c * c) % next == target {
                        lifted.insert(c);
                    }
                }
            }
        }
        roots = lifted.into_iter().collect();
        pi = next;
    }
    roots.into_iter().map(|r| r as u64).collect()
}

/// `x ≡ r (mod m)`, `x ≡ s (mod n)` for coprime `m, n`.
fn crt(r: u64, m: u64, s: u64, n: u64) -> u64 {
    if m == 1 {
        return s % n;
    }
    let inv =
        crate::modular::mod_inverse((m % n) as i64, n as i64).expect("coprime moduli") as i128;
    let diff = (s as i128 - r as i128).rem_euclid(n as i128);
    let k = (diff * inv).rem_euclid(n as i128);
    (r as i128 + k * m as i128) as u64
}

fn kloosterman_sum_with(k: u64, n: u64, prec: Precision, scan_limit: u64) -> Result<HpComplex> {
    if k < 1 || n < 1 {
        return Err(Error::InvalidInput("Kloosterman sum needs k, n ≥ 1".into()));
    }
    let m = 24 * k;
    let roots = sqrt_mod(1 - 24 * n as i128, m, scan_limit);
    let mut acc = HpComplex::zero(prec);
    for x in roots {
        let c = chi12(x);
        if c == 0 {
            continue;
        }
        let unit = RationalPhase::new(x as i64, 12 * k as i64).value(prec);
        acc = if c > 0 { &acc + &unit } else { &acc - &unit };
    }
    // (1/2)·√(k/12)
    let scale = HpReal::from_ratio(k as i64, 12, prec).sqrt() / HpReal::from_i64(2, prec);
    Ok(acc.scale(&scale))
}

/// The full complex Kloosterman sum `S_k(n)`.
pub fn kloosterman_s_complex(k: u64, n: u64, prec: Precision) -> Result<HpComplex> {
    kloosterman_sum_with(k, n, prec, RESIDUE_SCAN_LIMIT)
}

/// `S_k(n) = (1/2)√(k/12) Σ_{x² ≡ 1−24n (mod 24k)} χ_12(x)·e^{2πix/(12k)}`; the
/// imaginary part cancels and is dropped.
pub fn kloosterman_s(k: u64, n: u64, prec: Precision) -> Result<HpReal> {
    Ok(kloosterman_s_complex(k, n, prec)?.re)
}

/// `2`-adic valuation `s` of `t = 2^s·ℓ`.
pub fn two_adic(t: u32) -> u32 {
    t.trailing_zeros()
}

/// Residual `|Σ_{h odd < 2^{s+1}} w(t,h,2^{s+1})·e^{−πinh/2^s} − S_{2^{s+1}}(n)|`.
pub fn lemma32_check(t: u32, n: u64, prec: Precision) -> Result<HpReal> {
    if t < 2 || n < 1 {
        return Err(Error::InvalidInput("need t ≥ 2 and n ≥ 1".into()));
    }
    let k = 1i64 << (two_adic(t) + 1);
    let mut acc = HpComplex::zero(prec);
    for h in (1..k).step_by(2) {
        let phase = w_factor(t as i64, h, k)?
            - RationalPhase::new(((n as i128 * h as i128) % k as i128) as i64, k);
        acc = &acc + &phase.value(prec);
    }
    let s = kloosterman_s_complex(k as u64, n, prec)?;
    Ok((&acc - &s).abs())
}

/// The `k = 2^{s+1}`, `m = 0` contribution that controls `A_t(n)` for large `n`:
/// `π/2^{s+t/2}·((1+3·4^s)/(24n−1))^{3/4}·I_{3/2}(π√((1+3·4^s)(24n−1))/(6·2^{s+1}))·S_{2^{s+1}}(n)`.
pub fn dominant_term(t: u32, n: u64, prec: Precision) -> Result<HpReal> {
    if t < 2 || n < 1 {
        return Err(Error::InvalidInput("need t ≥ 2 and n ≥ 1".into()));
    }
    let s = two_adic(t);
    let work = prec.widen(10);
    let pi = HpReal::pi(work);
    let gamma = HpReal::from_i64(1 + 3 * (1i64 << (2 * s)), work);
    let big_n = HpReal::from_i64(24 * n as i64 - 1, work);
    let k = 1i64 << (s + 1);
    let arg = &(&pi * &(&gamma * &big_n).sqrt()) / &HpReal::from_i64(6 * k, work);
    let weight = HpReal::pow2_ratio(-(2 * s as i64 + t as i64), 2, work);
    let ratio = (&gamma / &big_n).pow_three_quarters();
    let kl = kloosterman_s(k as u64, n, work)?;
    Ok(&(&(&(&pi * &weight) * &ratio) * &bessel_i32(&arg, work)?) * &kl)
}

/// The odd-`t` form `(−1)^n·π·2^{(3−t)/2}/(24n−1)^{3/4}·I_{3/2}(π√(24n−1)/6)`.
pub fn dominant_term_odd(t: u32, n: u64, prec: Precision) -> Result<HpReal> {
    if t < 3 || t % 2 == 0 || n < 1 {
        return Err(Error::InvalidInput(format!(
            "odd form needs odd t ≥ 3 and n ≥ 1, got t = {t}"
        )));
    }
    let work = prec.widen(10);
    let pi = HpReal::pi(work);
    let big_n = HpReal::from_i64(24 * n as i64 - 1, work);
    let arg = &(&pi * &big_n.sqrt()) / &HpReal::from_i64(6, work);
    let weight = HpReal::pow2_ratio(3 - t as i64, 2, work);
    let v = &(&(&pi * &weight) / &big_n.pow_three_quarters()) * &bessel_i32(&arg, work)?;
    Ok(if n % 2 == 1 { -v } else { v })
}

/// `δ_t^e(n) = p_t^e(n)/p(n)` and `δ_t^o(n) = p_t^o(n)/p(n)` as exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaValue {
    pub t: u32,
    pub n: u64,
    pub delta_e: BigRational,
    pub delta_o: BigRational,
}

impl DeltaValue {
    /// From `A_t(n)` and `p(n)`.
    pub fn from_counts(t: u32, n: u64, a: &BigInt, p: &BigInt) -> Self {
        let two_p = p * 2u32;
        let delta_e = BigRational::new(p + a, two_p.clone());
        let delta_o = BigRational::new(p - a, two_p);
        DeltaValue {
            t,
            n,
            delta_e,
            delta_o,
        }
    }

    /// `δ_e` rounded half-even to `digits` decimals.
    pub fn render_e(&self, digits: u32) -> String {
        render_rational(&self.delta_e, digits)
    }

    /// `δ_o` rounded half-even to `digits` decimals.
    pub fn render_o(&self, digits: u32) -> String {
        render_rational(&self.delta_o, digits)
    }
}

/// Half-even decimal rendering of an exact rational.
pub fn render_rational(q: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = round_half_even(&(q.numer() * &scale), q.denom());
    format_fixed(&scaled, digits)
}

/// Decimal rendering of an exact rational truncated toward zero.
pub fn render_rational_truncated(q: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (q.numer() * &scale) / q.denom();
    format_fixed(&scaled, digits)
}

/// `δ_t(n)` with `A_t(n)` from the series expansion and `p(n)` from the recurrence.
pub fn delta(t: u32, n: u64) -> Result<DeltaValue> {
    Ok(delta_many(t, &[n])?.remove(0))
}

/// `δ_t(n)` for several `n` from a single series expansion.
pub fn delta_many(t: u32, ns: &[u64]) -> Result<Vec<DeltaValue>> {
    if t < 2 {
        return Err(Error::InvalidInput(format!(
            "t must be at least 2, got {t}"
        )));
    }
    if ns.iter().any(|&n| n < 1) {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let top = ns.iter().copied().max().unwrap_or(1) as usize;
    let series = expand_g_t(t as usize, top)?;
    Ok(ns
        .iter()
        .map(|&n| {
            DeltaValue::from_counts(t, n, series.coeff(n as usize), &partition_count(n as usize))
        })
        .collect())
}

/// Parity of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// `lim δ_t^e(n)` and `lim δ_t^o(n)` along `n` of the given parity.
pub fn limit_delta(t: u32, parity: Parity) -> Result<(BigRational, BigRational)> {
    if t < 2 {
        return Err(Error::InvalidInput(format!(
            "t must be at least 2, got {t}"
        )));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if t % 2 == 0 {
        return Ok((half.clone(), half));
    }
    let bias = BigRational::new(BigInt::one(), BigInt::one() << t.div_ceil(2));
    let (hi, lo) = (&half + &bias, &half - &bias);
    Ok(match parity {
        Parity::Even => (hi, lo),
        Parity::Odd => (lo, hi),
    })
}

/// Sign symbol of `A_t(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: &BigInt) -> Self {
        if v.is_positive() {
            Sign::Positive
        } else if v.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

/// Observed signs of `A_t(n)` on a window and their minimal period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignPattern {
    pub t: u32,
    pub s: u32,
    pub n_start: u64,
    pub n_end: u64,
    pub signs: Vec<Sign>,
    /// Smallest `p` with `sign(n) = sign(n + p)` across the window, if it
    /// fits at least twice.
    pub detected_period: Option<u64>,
    pub diagnostic: Option<String>,
}

impl SignPattern {
    /// Residues `r` modulo the period with `A_t(n) > 0` for `n ≡ r`.
    pub fn positive_residues(&self) -> Option<Vec<u64>> {
        let p = self.detected_period?;
        let mut res: Vec<u64> = (0..p)
            .filter(|&i| self.signs[i as usize] == Sign::Positive)
            .map(|i| (self.n_start + i) % p)
            .collect();
        res.sort_unstable();
        Some(res)
    }

    pub fn sign_string(&self) -> String {
        self.signs.iter().map(|s| s.symbol()).collect()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.detected_period, self.positive_residues()) {
            (Some(p), Some(res)) => {
                let list: Vec<String> = res.iter().map(u64::to_string).collect();
                write!(f, "period {p}, + at n≡{} (mod {p})", list.join(","))
            }
            _ => write!(
                f,
                "no period: {}",
                self.diagnostic.as_deref().unwrap_or("none found")
            ),
        }
    }
}

/// Signs of `A_t(n)` for `n_start ≤ n ≤ n_end` and their minimal period.
pub fn sign_pattern(t: u32, n_start: u64, n_end: u64) -> Result<SignPattern> {
    if t < 2 {
        return Err(Error::InvalidInput(format!(
            "t must be at least 2, got {t}"
        )));
    }
    let s = two_adic(t);
    let needed = 4u64 << (s + 1);
    if n_end < n_start || n_end - n_start < needed {
        return Err(Error::InvalidInput(format!(
            "window [{n_start}, {n_end}] must span at least {needed}"
        )));
    }
    let series = expand_g_t(t as usize, n_end as usize)?;
    let signs: Vec<Sign> = (n_start..=n_end)
        .map(|n| Sign::of(series.coeff(n as usize)))
        .collect();
    let (detected_period, diagnostic) = if let Some(i) = signs.iter().position(|&s| s == Sign::Zero)
    {
        (None, Some(format!("A_{t}({}) = 0", n_start + i as u64)))
    } else {
        match minimal_period(&signs) {
            Some(p) => (Some(p as u64), None),
            None => (None, Some("no period fits twice in the window".into())),
        }
    };
    Ok(SignPattern {
        t,
        s,
        n_start,
        n_end,
        signs,
        detected_period,
        diagnostic,
    })
}

fn minimal_period<T: PartialEq>(xs: &[T]) -> Option<usize> {
    (1..=xs.len() / 2).find(|&p| xs.iter().zip(&xs[p..]).all(|(a, b)| a == b))
}

/// `A_t(n)/p(n)` as an exact rational.
pub fn normalized_difference(t: u32, n: u64) -> Result<BigRational> {
    let d = delta(t, n)?;
    Ok(&d.delta_e - &d.delta_o)
}
