//! Special functions: the hyperbolic cotangent, the Ψ kernel, the
//! generalized theta series Θ_m(q) = Σ_{t∈ℤ} q^{t^(2m)}, and the lattice
//! series U_{2m}(z) = Σ_{t∈ℤ} 1/(t^(2m) + z^(2m)).

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::options::{CertifiedValue, EvalOptions};

/// Hyperbolic cotangent for x > 0.
///
/// Computed as (2 - d)/d with d = 1 - e^(-2x) obtained from `exp_m1`, so
/// there is no cancellation anywhere on the domain: for small x the
/// denominator is ~2x to full precision, and for x ≥ 40 the result rounds
/// to exactly 1.
pub fn coth(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("coth requires x > 0, got {x}")));
    }
    let d = -f64::exp_m1(-2.0 * x);
    Ok((2.0 - d) / d)
}

/// Ψ(x) = (sin x + sinh x)/(cosh x - cos x) for x > 0.
///
/// Behaves like 2/x near zero and tends to 1 at infinity. The defining
/// expression loses roughly half its digits below x ≈ 1/2 (the denominator
/// is ~x²/2 against terms of size 1), so that regime uses the exact Taylor
/// quotient; above 30, everything is rescaled by e^(-x) so nothing
/// overflows, and from 40 on the limit 1 is exact to well below 1e-12.
pub fn psi_kernel(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("psi_kernel requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // sin x + sinh x = 2 Σ_j x^(4j+1)/(4j+1)!   (j ≥ 0)
        // cosh x - cos x = 2 Σ_j x^(4j+2)/(4j+2)!
        // Five terms leave a relative remainder below 1e-19 at x = 1/2.
        const NUM: [f64; 5] = [1.0, 120.0, 362_880.0, 6_227_020_800.0, 355_687_428_096_000.0];
        const DEN: [f64; 5] = [2.0, 720.0, 3_628_800.0, 87_178_291_200.0, 6_402_373_705_728_000.0];
        let x4 = x.powi(4);
        let mut num = 0.0;
        let mut den = 0.0;
        let mut p = 1.0;
        for j in 0..5 {
            num += p / NUM[j];
            den += p / DEN[j];
            p *= x4;
        }
        Ok(num / (x * den))
    } else if x <= 30.0 {
        Ok((x.sin() + x.sinh()) / (x.cosh() - x.cos()))
    } else if x < 40.0 {
        let e1 = (-x).exp();
        let e2 = e1 * e1;
        Ok((2.0 * x.sin() * e1 + 1.0 - e2) / (1.0 + e2 - 2.0 * x.cos() * e1))
    } else {
        // |Ψ(x) - 1| ≤ 4 e^(-x) < 2e-17 here.
        Ok(1.0)
    }
}

/// Θ_m(q) = 1 + 2 Σ_{t≥1} q^(t^(2m)) with a certified truncation bound.
///
/// `error_bound` dominates the discarded tail: the exponents t^(2m) are
/// strictly increasing integers, so the tail past t = T is at most
/// 2 q^((T+1)^(2m)) / (1 - q).
pub fn theta(m: u32, q: f64, opts: &EvalOptions) -> Result<CertifiedValue> {
    opts.validate()?;
    if m == 0 {
        return Err(Error::Domain("theta requires m >= 1".into()));
    }
    if !(0.0..1.0).contains(&q) {
        return Err(Error::Domain(format!("theta requires 0 <= q < 1, got {q}")));
    }
    if q == 0.0 {
        return Ok(CertifiedValue { value: 1.0, error_bound: 0.0, terms_used: 0 });
    }
    theta_lambda(m, -q.ln(), 1.0 - q, opts)
}

/// Core theta evaluator parametrized by λ = -ln q together with 1 - q.
///
/// Quadrature callers approach q = 1 along q = 1 - v^(2m); passing the gap
/// exactly keeps the evaluation meaningful even when `1.0 - q` would round
/// to zero in a plain f64 subtraction.
pub(crate) fn theta_lambda(
    m: u32,
    lambda: f64,
    one_minus_q: f64,
    opts: &EvalOptions,
) -> Result<CertifiedValue> {
    debug_assert!(lambda > 0.0 && one_minus_q > 0.0);
    let p = (2 * m) as i32;
    let mut value = 1.0;
    let mut t: u64 = 0;
    loop {
        let next = (t + 1) as f64;
        let tail = 2.0 * (-lambda * next.powi(p)).exp() / one_minus_q;
        if tail <= opts.abs_tol {
            return Ok(CertifiedValue { value, error_bound: tail, terms_used: t });
        }
        if t >= opts.max_terms {
            return Err(Error::Truncation {
                partial: CertifiedValue { value, error_bound: tail, terms_used: t },
            });
        }
        t += 1;
        value += 2.0 * (-lambda * (t as f64).powi(p)).exp();
    }
}

/// U_{2m}(z) by direct summation: 1/z^(2m) + 2 Σ_{t≥1} 1/(t^(2m) + z^(2m)).
///
/// The tail past t = T is below ∫_T^∞ 2 t^(-2m) dt = 2 T^(1-2m)/(2m - 1),
/// which is the reported `error_bound`.
pub fn u_direct(m: u32, z: f64, opts: &EvalOptions) -> Result<CertifiedValue> {
    if m == 0 {
        return Err(Error::Domain("u_direct requires m >= 1".into()));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("u_direct requires finite z > 0, got {z}")));
    }
    let z2m = z.powi((2 * m) as i32);
    if !(z2m > 0.0) || !z2m.is_finite() {
        return Err(Error::Domain(format!(
            "z^(2m) leaves the representable range for z = {z}, m = {m}"
        )));
    }
    u_direct_pow(m, z2m, opts)
}

/// Same summation with z^(2m) supplied directly, so callers whose natural
/// parameter is the 2m-th power (e.g. a/k) avoid the root/power round trip.
pub(crate) fn u_direct_pow(m: u32, z2m: f64, opts: &EvalOptions) -> Result<CertifiedValue> {
    opts.validate()?;
    let p = (2 * m) as i32;
    let dec = (2 * m - 1) as f64;
    // Compensated summation: at m = 1 reaching the tail bound can take
    // millions of terms, and naive accumulation would otherwise eat the
    // whole rounding headroom the error bound leaves callers.
    let mut sum = 1.0 / z2m;
    let mut comp = 0.0;
    let mut t: u64 = 0;
    loop {
        let tail = if t == 0 {
            f64::INFINITY
        } else {
            2.0 / (dec * (t as f64).powi(p - 1))
        };
        if tail <= opts.abs_tol {
            return Ok(CertifiedValue { value: sum + comp, error_bound: tail, terms_used: t });
        }
        if t >= opts.max_terms {
            return Err(Error::Truncation {
                partial: CertifiedValue { value: sum + comp, error_bound: tail, terms_used: t },
            });
        }
        t += 1;
        let term = 2.0 / ((t as f64).powi(p) + z2m);
        let next = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - next) + term } else { (term - next) + sum };
        sum = next;
    }
}

/// Closed forms for U_{2m}:
///
///   U_2(z) = (π/z) coth(πz)
///   U_4(z) = π/(√2 z³) · Ψ(√2 π z)
///
/// Other orders return [`Error::UnsupportedOrder`].
pub fn u_closed(m: u32, z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("u_closed requires finite z > 0, got {z}")));
    }
    match m {
        0 => Err(Error::Domain("u_closed requires m >= 1".into())),
        1 => Ok(PI / z * coth(PI * z)?),
        2 => Ok(PI / (SQRT_2 * z.powi(3)) * psi_kernel(SQRT_2 * PI * z)?),
        _ => Err(Error::UnsupportedOrder { m }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with 40-digit arithmetic.
    const COTH_PI: f64 = 1.003_741_873_197_321_3;
    const PI_COTH_PI: f64 = 3.153_348_094_937_162_3;
    const PSI_SQRT2_PI: f64 = 0.970_970_961_583_948_5;
    const U4_1: f64 = 2.156_955_159_334_273_7;
    const U4_2: f64 = 0.277_653_678_195_416_7;
    const U6_1: f64 = 2.034_201_468_066_432_8;
    const THETA1_HALF: f64 = 2.128_936_827_211_877;

    fn rel_close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * y.abs().max(1.0)
    }

    #[test]
    fn coth_reference_value() {
        assert!(rel_close(coth(PI).unwrap(), COTH_PI, 1e-15));
    }

    #[test]
    fn coth_small_argument_limit() {
        // x coth x -> 1 with quadratic rate.
        let x = 1e-3;
        assert!((x * coth(x).unwrap() - 1.0).abs() < 1e-6);
        let x = 1e-8;
        assert!((x * coth(x).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn coth_saturates_to_one() {
        for &x in &[40.0, 60.0, 1e3, 1e300, f64::INFINITY] {
            assert_eq!(coth(x).unwrap(), 1.0);
        }
    }

    #[test]
    fn coth_is_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..200 {
            let x = 1e-3 * 1.1f64.powi(i);
            let c = coth(x).unwrap();
            assert!(c <= prev && c >= 1.0);
            prev = c;
        }
    }

    #[test]
    fn coth_rejects_bad_arguments() {
        assert!(coth(0.0).is_err());
        assert!(coth(-1.0).is_err());
        assert!(coth(f64::NAN).is_err());
    }

    #[test]
    fn psi_reference_value() {
        assert!(rel_close(psi_kernel(SQRT_2 * PI).unwrap(), PSI_SQRT2_PI, 1e-14));
    }

    #[test]
    fn psi_pole_and_limit() {
        // x Ψ(x)/2 -> 1 as x -> 0; the 40-digit value at 1e-3 is
        // 1.000000000000005555... so the series branch must hit it.
        let x = 1e-3;
        assert!((x * psi_kernel(x).unwrap() / 2.0 - 1.0).abs() < 1e-13);
        for &x in &[40.0, 100.0, 1e6] {
            assert!((psi_kernel(x).unwrap() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn psi_branches_agree_at_seams() {
        // On either side of each branch cut the result must match the
        // defining expression, which is well conditioned near both seams.
        for &x in &[0.4999f64, 0.5001, 29.999, 30.001, 31.0, 39.9] {
            let direct = (x.sin() + x.sinh()) / (x.cosh() - x.cos());
            let got = psi_kernel(x).unwrap();
            assert!(rel_close(got, direct, 1e-11), "x = {x}: {got} vs {direct}");
        }
    }

    #[test]
    fn psi_rejects_bad_arguments() {
        assert!(psi_kernel(0.0).is_err());
        assert!(psi_kernel(-2.0).is_err());
    }

    #[test]
    fn theta_reference_value() {
        let opts = EvalOptions::default().with_tol(1e-14);
        let t = theta(1, 0.5, &opts).unwrap();
        assert!((t.value - THETA1_HALF).abs() <= 1e-14 + t.error_bound);
    }

    #[test]
    fn theta_matches_bruteforce_oracle() {
        // Independent route: sum q^(t^(2m)) over t in [-200, 200] via powf
        // (at q = 0.99 the t = 200 term is ~1e-175, far below the check).
        for m in 1..=3u32 {
            for &q in &[0.1f64, 0.5, 0.9, 0.99] {
                let mut oracle = 1.0;
                for t in 1..=200u32 {
                    oracle += 2.0 * q.powf((t as f64).powi((2 * m) as i32));
                }
                let got = theta(m, q, &EvalOptions::default().with_tol(1e-13)).unwrap();
                assert!(
                    (got.value - oracle).abs() <= got.error_bound + 1e-12,
                    "m={m} q={q}: {} vs {oracle}",
                    got.value
                );
            }
        }
    }

    #[test]
    fn theta_certificate_is_sound() {
        // A looser run's bracket must contain a much tighter run's value.
        for &q in &[0.3, 0.9, 0.999] {
            let tight = theta(2, q, &EvalOptions::default().with_tol(1e-15)).unwrap();
            let loose = theta(2, q, &EvalOptions::default().with_tol(1e-4)).unwrap();
            assert!(loose.value <= tight.value + 1e-15);
            assert!(tight.value <= loose.value + loose.error_bound + 1e-15);
        }
    }

    #[test]
    fn theta_edge_cases() {
        let opts = EvalOptions::default();
        assert_eq!(theta(1, 0.0, &opts).unwrap().value, 1.0);
        assert!(theta(1, 1.0, &opts).is_err());
        assert!(theta(1, -0.1, &opts).is_err());
        assert!(theta(0, 0.5, &opts).is_err());
        // Higher m freezes more mass at t = 0: Θ decreases in m for fixed q.
        let a = theta(1, 0.8, &opts).unwrap().value;
        let b = theta(2, 0.8, &opts).unwrap().value;
        let c = theta(3, 0.8, &opts).unwrap().value;
        assert!(a > b && b > c && c > 1.0);
    }

    #[test]
    fn theta_truncation_reports_partial() {
        let opts = EvalOptions::default().with_tol(1e-12).with_max_terms(3);
        match theta(1, 0.999, &opts) {
            Err(Error::Truncation { partial }) => {
                assert_eq!(partial.terms_used, 3);
                assert!(partial.value > 1.0);
                assert!(partial.error_bound > 1e-12);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }

    #[test]
    fn u_direct_closed_form_anchors() {
        let opts = EvalOptions::default().with_tol(1e-12).with_max_terms(100_000_000);
        let u2 = u_direct(1, 1.0, &EvalOptions::default().with_tol(1e-6).with_max_terms(3_000_000))
            .unwrap();
        assert!((u2.value - PI_COTH_PI).abs() <= u2.error_bound + 1e-13);
        let u4 = u_direct(2, 1.0, &opts).unwrap();
        assert!((u4.value - U4_1).abs() <= u4.error_bound + 1e-13);
        let u4b = u_direct(2, 2.0, &opts).unwrap();
        assert!((u4b.value - U4_2).abs() <= u4b.error_bound + 1e-13);
        let u6 = u_direct(3, 1.0, &opts).unwrap();
        assert!((u6.value - U6_1).abs() <= u6.error_bound + 1e-13);
    }

    #[test]
    fn u_closed_reference_values() {
        assert!(rel_close(u_closed(1, 1.0).unwrap(), PI_COTH_PI, 1e-14));
        assert!(rel_close(u_closed(2, 1.0).unwrap(), U4_1, 1e-14));
        assert!(rel_close(u_closed(2, 2.0).unwrap(), U4_2, 1e-14));
        assert!(matches!(u_closed(3, 1.0), Err(Error::UnsupportedOrder { m: 3 })));
        assert!(u_closed(1, 0.0).is_err());
    }

    #[test]
    fn u_closed_small_z_blowup() {
        // U_2(z) ~ 1/z² and U_4(z) ~ 1/z⁴ as z -> 0 (the t = 0 term).
        let z = 1e-4;
        assert!(rel_close(u_closed(1, z).unwrap() * z * z, 1.0, 1e-6));
        assert!(rel_close(u_closed(2, z).unwrap() * z.powi(4), 1.0, 1e-6));
    }

    #[test]
    fn u_direct_budget_exhaustion() {
        let opts = EvalOptions::default().with_tol(1e-12).with_max_terms(10);
        match u_direct(1, 1.0, &opts) {
            Err(Error::Truncation { partial }) => {
                assert_eq!(partial.terms_used, 10);
                assert!(partial.value < PI_COTH_PI);
            }
            other => panic!("expected truncation, got {other:?}"),
        }
    }
}
