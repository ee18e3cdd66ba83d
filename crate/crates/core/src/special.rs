//! The modified Bessel function `I_{3/2}` and the leading Hardy–Ramanujan term.

use crate::error::{Error, Result};
use crate::hp::{HpReal, Precision};

/// Below this argument `I_{3/2}` uses the ascending series.
pub const SERIES_THRESHOLD: (i64, i64) = (1, 4);

/// `I_{3/2}(z)` for `z ≥ 0`, accurate to `10^(-P+5)` relative.
pub fn bessel_i32(z: &HpReal, prec: Precision) -> Result<HpReal> {
    if z.is_negative() {
        return Err(Error::NegativeArgument(z.to_fixed(20)));
    }
    if z.is_zero() {
        return Ok(HpReal::zero(prec));
    }
    let threshold = HpReal::from_ratio(SERIES_THRESHOLD.0, SERIES_THRESHOLD.1, prec);
    if *z < threshold {
        Ok(series_unchecked(z, prec))
    } else {
        Ok(closed_unchecked(z, prec))
    }
}

/// Ascending series `Σ_m (z/2)^{3/2+2m} / (m!·Γ(m+5/2))`.
pub fn bessel_i32_series(z: &HpReal, prec: Precision) -> Result<HpReal> {
    if z.is_negative() {
        return Err(Error::NegativeArgument(z.to_fixed(20)));
    }
    if z.is_zero() {
        return Ok(HpReal::zero(prec));
    }
    Ok(series_unchecked(z, prec))
}

/// Closed form `√(2/(πz))·(cosh z − sinh z / z)`; `z` must be positive.
pub fn bessel_i32_closed(z: &HpReal, prec: Precision) -> Result<HpReal> {
    if z.is_negative() || z.is_zero() {
        return Err(Error::NegativeArgument(z.to_fixed(20)));
    }
    Ok(closed_unchecked(z, prec))
}

fn series_unchecked(z: &HpReal, prec: Precision) -> HpReal {
    let work = prec.widen(5);
    let half = z / &HpReal::from_i64(2, work);
    let sq = &half * &half;
    // Γ(5/2) = 3√π/4
    let gamma =
        &(&HpReal::from_i64(3, work) * &HpReal::pi(work).sqrt()) / &HpReal::from_i64(4, work);
    let mut term = &(&half * &half.sqrt()) / &gamma;
    let mut sum = term.clone();
    let eps = work.tolerance(0);
    let mut m = 0i64;
    loop {
        // t_{m+1} = t_m·(z/2)²/((m+1)(m+5/2))
        let denom = HpReal::from_ratio((m + 1) * (2 * m + 5), 2, work);
        term = &(&term * &sq) / &denom;
        sum = &sum + &term;
        m += 1;
        if term.abs() < &eps * &sum.abs() {
            break;
        }
    }
    sum
}

fn closed_unchecked(z: &HpReal, prec: Precision) -> HpReal {
    // Cancellation in cosh z − sinh z / z costs about log10(3/z²) digits.
    let work = prec.widen(8);
    let zw = z + &HpReal::zero(work);
    let inner = &zw.cosh() - &(&zw.sinh() / &zw);
    let scale = (&HpReal::from_i64(2, work) / &(&HpReal::pi(work) * &zw)).sqrt();
    &scale * &inner
}

/// `2π/(24n−1)^{3/4} · I_{3/2}(π√(24n−1)/6)`.
pub fn p_leading_asymptotic(n: u64, prec: Precision) -> Result<HpReal> {
    if n < 1 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let m = HpReal::from_i64(24 * n as i64 - 1, prec);
    let pi = HpReal::pi(prec);
    let arg = &(&pi * &m.sqrt()) / &HpReal::from_i64(6, prec);
    let two_pi = &pi * &HpReal::from_i64(2, prec);
    Ok(&(&two_pi / &m.pow_three_quarters()) * &bessel_i32(&arg, prec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partition_count;

    const P: Precision = Precision::digits(40);

    fn rel_diff(a: &HpReal, b: &HpReal) -> HpReal {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn zero_and_negative() {
        assert!(bessel_i32(&HpReal::zero(P), P).unwrap().is_zero());
        assert!(bessel_i32(&HpReal::from_i64(-1, P), P).is_err());
        assert!(bessel_i32_closed(&HpReal::zero(P), P).is_err());
    }

    #[test]
    fn closed_form_matches_series_at_one() {
        let z = HpReal::one(P);
        let a = bessel_i32_closed(&z, P).unwrap();
        let b = bessel_i32_series(&z, P).unwrap();
        assert!(rel_diff(&a, &b) < P.tolerance(5));
        // I_{3/2}(1) = 0.2935253263474797...
        assert!((a.to_f64() - 0.293_525_326_347_479_7).abs() < 1e-15);
    }

    #[test]
    fn large_argument_asymptotics() {
        for z in [50i64, 100] {
            let zz = HpReal::from_i64(z, P);
            let v = bessel_i32(&zz, P).unwrap();
            let two_pi_z = &HpReal::pi(P) * &HpReal::from_i64(2 * z, P);
            let ratio = &(&v * &two_pi_z.sqrt()) * &(-&zz).exp();
            let off = (&ratio - &HpReal::one(P)).abs();
            assert!(off < HpReal::from_ratio(2, 100, P), "z = {z}");
        }
    }

    #[test]
    fn log_grid_agreement_and_monotonicity() {
        let mut prev = HpReal::zero(P);
        for i in 0..=60 {
            // z = 10^{-3 + i/10}
            let z = HpReal::from_f64(10f64.powf(-3.0 + i as f64 / 10.0), P);
            let a = bessel_i32_series(&z, P).unwrap();
            let b = bessel_i32_closed(&z, P).unwrap();
            assert!(rel_diff(&a, &b) < P.tolerance(5), "z = {z}");
            let v = bessel_i32(&z, P).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn threshold_continuity() {
        let t = HpReal::from_ratio(1, 4, P.widen(10));
        let eps = P.widen(10).tolerance(0);
        let below = bessel_i32(&(&t - &eps), P).unwrap();
        let above = bessel_i32(&t, P).unwrap();
        assert!((&above - &below).abs() < P.tolerance(5));
    }

    #[test]
    fn leading_asymptotic_ratios() {
        let ratio = |n: u64| {
            let exact = HpReal::from_bigint(&partition_count(n as usize), P);
            (p_leading_asymptotic(n, P).unwrap() / exact).to_f64()
        };
        let r100 = ratio(100);
        let r1000 = ratio(1000);
        assert!((r100 - 1.0).abs() < 0.01);
        assert!((r1000 - 1.0).abs() < (r100 - 1.0).abs());
        let v1 = p_leading_asymptotic(1, P).unwrap();
        assert!(v1.signum() > 0 && v1.to_f64().is_finite());
    }
}
