//! Composite Gauss-Legendre quadrature with panel doubling, plus the
//! substituted integrands for ∫₀¹ q^(a-1) Θ_m(q)^k dq.
//!
//! The integral has two delicate ends. Near q = 0 the factor q^(a-1) is
//! singular (though integrable) whenever a < 1; substituting u = q^a turns
//! that piece into a bounded integrand. Near q = 1 the theta factor blows
//! up like (1-q)^(-k/2m); substituting q = 1 - v^(2m) makes the integrand
//! v^(2m-1-k) · (smooth in v), which is bounded and smooth for every
//! convergent pair k < 2m.

use crate::error::{Error, Result};
use crate::options::{CertifiedValue, EvalOptions};
use crate::special::theta_lambda;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// found by Newton iteration on P_n from the Chebyshev-like initial
/// guesses cos(π(i + 3/4)/(n + 1/2)).
pub(crate) fn gauss_legendre(n: u32) -> (Vec<f64>, Vec<f64>) {
    let n = n as usize;
    assert!(n >= 2);
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let pj = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = pj;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

fn composite<F>(f: &mut F, lo: f64, hi: f64, panels: u64, xs: &[f64], ws: &[f64]) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let h = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (&x, &w) in xs.iter().zip(ws) {
            acc += w * f(mid + half * x)?;
        }
        total += half * acc;
    }
    Ok(total)
}

pub(crate) struct Refined {
    pub value: f64,
    /// |last doubling delta|: a heuristic error estimate, not a certificate.
    pub estimate: f64,
    pub evals: u64,
    pub converged: bool,
}

const MAX_PANELS: u64 = 1 << 14;

/// Double the panel count until two consecutive composite rules agree to
/// within tol.
pub(crate) fn refine<F>(f: &mut F, lo: f64, hi: f64, tol: f64, quad_points: u32) -> Result<Refined>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (xs, ws) = gauss_legendre(quad_points);
    let mut prev = composite(f, lo, hi, 1, &xs, &ws)?;
    let mut evals = quad_points as u64;
    let mut panels: u64 = 2;
    loop {
        let cur = composite(f, lo, hi, panels, &xs, &ws)?;
        evals += panels * quad_points as u64;
        let delta = (cur - prev).abs();
        if delta <= tol && cur.is_finite() {
            return Ok(Refined { value: cur, estimate: delta, evals, converged: true });
        }
        if panels >= MAX_PANELS {
            return Ok(Refined { value: cur, estimate: delta, evals, converged: false });
        }
        prev = cur;
        panels *= 2;
    }
}

/// ∫₀¹ q^(a-1) Θ_m(q)^kpow dq for a > 0, kpow ≥ 1.
///
/// The reported `error_bound` adds the two pieces' doubling deltas; it is
/// a sharp heuristic rather than a rigorous certificate, and refinement
/// failure surfaces as [`Error::Unconverged`].
pub(crate) fn theta_pow_integral(
    m: u32,
    kpow: u32,
    a: f64,
    opts: &EvalOptions,
) -> Result<CertifiedValue> {
    opts.validate()?;
    debug_assert!(m >= 1 && kpow >= 1 && a > 0.0);
    let piece_tol = 0.5 * opts.abs_tol;

    // Θ(q)^kpow with the per-node tolerance tied to the target accuracy:
    // an absolute theta error ε perturbs Θ^k by ~ k Θ^(k-1) ε.
    let theta_opts = EvalOptions { abs_tol: 1e-8, max_terms: 50_000_000, quad_points: 2 };
    let theta_pow = |lambda: f64, one_minus_q: f64| -> Result<f64> {
        let coarse = theta_lambda(m, lambda, one_minus_q, &theta_opts)?;
        let need = opts.abs_tol
            / (10.0 * kpow as f64 * coarse.value.powi(kpow as i32 - 1));
        let need = need.clamp(1e-15, 1e-8);
        let value = if need < theta_opts.abs_tol {
            theta_lambda(m, lambda, one_minus_q, &theta_opts.with_tol(need))?.value
        } else {
            coarse.value
        };
        Ok(value.powi(kpow as i32))
    };

    // Piece 1: q from 0 to 1/2.
    let left = if a < 1.0 {
        // u = q^a maps [0, 1/2] to [0, 2^-a]; dq = u^(1/a - 1) du / a and
        // the weight q^(a-1) cancels: integrand = Θ(u^(1/a))^k / a.
        let hi = 0.5f64.powf(a);
        refine(
            &mut |u: f64| {
                if u <= 0.0 {
                    return Ok(1.0 / a);
                }
                let q = u.powf(1.0 / a);
                theta_pow(-q.ln(), 1.0 - q).map(|tp| tp / a)
            },
            0.0,
            hi,
            piece_tol,
            opts.quad_points,
        )?
    } else {
        refine(
            &mut |q: f64| {
                if q <= 0.0 {
                    return Ok(if a == 1.0 { 1.0 } else { 0.0 });
                }
                let tp = theta_pow(-q.ln(), 1.0 - q)?;
                Ok(tp * q.powf(a - 1.0))
            },
            0.0,
            0.5,
            piece_tol,
            opts.quad_points,
        )?
    };

    // Piece 2: q = 1 - v^(2m) for v from 0 to 2^(-1/2m). Near v = 0 the
    // integrand is v^(2m-1-k) times a smooth function, so it stays bounded
    // exactly when the series converges. The theta evaluator receives
    // λ = -ln q through ln_1p, which survives q indistinguishable from 1.
    let p = (2 * m) as i32;
    let vmax = 0.5f64.powf(1.0 / (2 * m) as f64);
    let right = refine(
        &mut |v: f64| {
            let one_minus_q = v.powi(p);
            if one_minus_q <= 0.0 {
                // Unreachable for Gauss nodes (all interior); keep it safe.
                return Ok(0.0);
            }
            let ln_q = (-one_minus_q).ln_1p();
            let tp = theta_pow(-ln_q, one_minus_q)?;
            Ok((2 * m) as f64 * v.powi(p - 1) * ((a - 1.0) * ln_q).exp() * tp)
        },
        0.0,
        vmax,
        piece_tol,
        opts.quad_points,
    )?;

    let value = left.value + right.value;
    let estimate = left.estimate + right.estimate;
    let evals = left.evals + right.evals;
    if !(left.converged && right.converged) || !value.is_finite() {
        return Err(Error::Unconverged {
            partial: CertifiedValue { value, error_bound: estimate, terms_used: evals },
        });
    }
    Ok(CertifiedValue { value, error_bound: estimate, terms_used: evals })
}
