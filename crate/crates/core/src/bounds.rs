//! Two rigorous lower bounds for S_{m,k}(a), their verification against
//! certified brackets, and the analysis of their ratio.
//!
//! Geometric bound: grouping the lattice sum by the largest coordinate
//! and applying the power-mean inequality Σ x_i^(2m) ≥ (1/k) Σ ... gives
//!
//!   S ≥ (1/k) U_{2m}((a/k)^(1/2m)) =: b_geo.
//!
//! Analytic bound: Hölder's inequality on ∫ q^(a-1) Θ^k dq relates the
//! k-th power of the one-dimensional integral to S:
//!
//!   S ≥ a^(k-1) [U_{2m}(a^(1/2m))]^k =: b_ana.
//!
//! Both are genuine lower bounds for every convergent (m, k, a); on the
//! grids exercised here their ratio b_ana/b_geo stays above 1 and grows
//! like a^((k-1)/2m), so the analytic bound dominates throughout.

use crate::error::{Error, Result};
use crate::fit::slope_of;
use crate::options::EvalOptions;
use crate::quad::theta_pow_integral;
use crate::representation::PowerParams;
use crate::series::{s_bracket, SeriesBracket};
use crate::special::{u_closed, u_direct_pow};

/// U_{2m}(z) given z^(2m): closed form where one exists, direct summation
/// at 1e-12 otherwise. Passing the 2m-th power keeps arguments like a/k
/// exact instead of round-tripping through a root.
fn u_value(m: u32, z2m: f64) -> Result<f64> {
    if !(z2m > 0.0) || !z2m.is_finite() {
        return Err(Error::Domain(format!(
            "U_2m needs a positive finite argument, got z^2m = {z2m}"
        )));
    }
    match m {
        1 => u_closed(1, z2m.sqrt()),
        2 => u_closed(2, z2m.sqrt().sqrt()),
        _ => {
            let opts = EvalOptions { abs_tol: 1e-12, max_terms: 100_000_000, quad_points: 16 };
            Ok(u_direct_pow(m, z2m, &opts)?.value)
        }
    }
}

/// Geometric lower bound (1/k) U_{2m}((a/k)^(1/2m)).
pub fn b_geo(params: &PowerParams) -> Result<f64> {
    let k = params.k() as f64;
    Ok(u_value(params.m(), params.a() / k)? / k)
}

/// Analytic lower bound a^(k-1) [U_{2m}(a^(1/2m))]^k.
///
/// Assembled in log space for k ≥ 2 so that large k or extreme a cannot
/// overflow prematurely. For k = 1 both bounds reduce to the same
/// expression U_{2m}(a^(1/2m)) and this function returns it verbatim, so
/// `b_geo` and `b_ana` agree bit for bit there.
pub fn b_ana(params: &PowerParams) -> Result<f64> {
    let u = u_value(params.m(), params.a())?;
    let k = params.k();
    if k == 1 {
        return Ok(u);
    }
    Ok(((k - 1) as f64 * params.a().ln() + k as f64 * u.ln()).exp())
}

/// Outcome of the Hölder inequality check behind the analytic bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderReport {
    pub params: PowerParams,
    /// ∫ q^(a-1) Θ dq, the one-dimensional integral.
    pub lhs: f64,
    /// (∫ q^(a-1) Θ^k dq)^(1/k) · (1/a)^((k-1)/k), which Hölder (with the
    /// weight q^(a-1) split across exponents k and k/(k-1)) says is ≥ lhs.
    pub rhs: f64,
    /// rhs - lhs ≥ 0 up to quadrature error.
    pub slack: f64,
    /// |lhs - U_{2m}(a^(1/2m))|: the identity tying the integral to the
    /// lattice series, evaluated through two unrelated code paths.
    pub left_identity_error: f64,
    /// k = 1 turns the inequality into an identity.
    pub degenerate: bool,
}

/// Checks ∫ q^(a-1) Θ dq ≤ (∫ q^(a-1) Θ^k dq)^(1/k) (1/a)^((k-1)/k) by
/// quadrature, along with the closed-form identity for the left side.
pub fn holder_check(params: &PowerParams, opts: &EvalOptions) -> Result<HolderReport> {
    if !params.series_convergent() {
        return Err(Error::Divergent { m: params.m(), k: params.k() });
    }
    let m = params.m();
    let k = params.k();
    let a = params.a();
    let lhs = theta_pow_integral(m, 1, a, opts)?.value;
    let full = theta_pow_integral(m, k, a, opts)?.value;
    let rhs = if k == 1 {
        full
    } else {
        (full.ln() / k as f64 - (k - 1) as f64 / k as f64 * a.ln()).exp()
    };
    let left_identity_error = (lhs - u_value(m, a)?).abs();
    Ok(HolderReport {
        params: *params,
        lhs,
        rhs,
        slack: rhs - lhs,
        left_identity_error,
        degenerate: k == 1,
    })
}

/// Both bounds laid against one certified bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub params: PowerParams,
    pub b_geo: f64,
    pub b_ana: f64,
    /// b_ana / b_geo.
    pub ratio: f64,
    pub bracket: SeriesBracket,
    /// Necessary condition: bound ≤ bracket.upper (with rounding slop).
    pub geo_verified: bool,
    pub ana_verified: bool,
    /// Sufficient condition: bound ≤ bracket.lower for k ≥ 2. For k = 1
    /// the bound IS the series, so "strict" degenerates to containment in
    /// the bracket; anything sharper is structurally impossible there.
    pub geo_strict: bool,
    pub ana_strict: bool,
}

fn slop(x: f64) -> f64 {
    1e-12 * x.abs().max(1.0)
}

/// Evaluates both lower bounds and tests them against a certified bracket
/// computed with `opts`.
pub fn verify_bounds(params: &PowerParams, opts: &EvalOptions) -> Result<BoundReport> {
    let bracket = s_bracket(params, opts)?;
    let geo = b_geo(params)?;
    let ana = b_ana(params)?;
    let check = |b: f64| -> (bool, bool) {
        let verified = b <= bracket.upper + slop(b);
        let strict = if params.k() == 1 {
            bracket.lower - slop(b) <= b && verified
        } else {
            b <= bracket.lower + slop(b)
        };
        (verified, strict)
    };
    let (geo_verified, geo_strict) = check(geo);
    let (ana_verified, ana_strict) = check(ana);
    Ok(BoundReport {
        params: *params,
        b_geo: geo,
        b_ana: ana,
        ratio: ana / geo,
        bracket,
        geo_verified,
        ana_verified,
        geo_strict,
        ana_strict,
    })
}

/// The ratio R(a) = b_ana/b_geo on a caller-supplied grid of shifts.
pub fn ratio_curve(params: &PowerParams, a_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if a_grid.is_empty() {
        return Err(Error::InvalidGrid("empty shift grid".into()));
    }
    for w in a_grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidGrid("shift grid must be strictly increasing".into()));
        }
    }
    let mut out = Vec::with_capacity(a_grid.len());
    for &a in a_grid {
        let p = params.with_a(a)?;
        out.push((a, b_ana(&p)? / b_geo(&p)?));
    }
    Ok(out)
}

/// Least-squares slope of ln R against ln a over a log-spaced grid.
///
/// For large a the ratio behaves like a^((k-1)/2m) times a slowly varying
/// factor, so the fitted slope should settle near (k-1)/2m; at k = 1 the
/// ratio is identically 1 and the slope is 0. Requires a decade span of
/// at least 100x so the fit has something to see.
pub fn asymptotic_slope(
    params: &PowerParams,
    a_min: f64,
    a_max: f64,
    points: usize,
) -> Result<f64> {
    if !(a_min > 0.0) || !a_min.is_finite() || !a_max.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "shift interval must be positive and finite, got [{a_min}, {a_max}]"
        )));
    }
    if a_max < 100.0 * a_min {
        return Err(Error::InvalidGrid(format!(
            "slope fit needs a_max >= 100 a_min, got [{a_min}, {a_max}]"
        )));
    }
    if points < 10 {
        return Err(Error::InvalidGrid(format!("slope fit needs >= 10 points, got {points}")));
    }
    let (l0, l1) = (a_min.ln(), a_max.ln());
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    for i in 0..points {
        let la = l0 + (l1 - l0) * i as f64 / (points - 1) as f64;
        let p = params.with_a(la.exp())?;
        xs.push(la);
        ys.push((b_ana(&p)? / b_geo(&p)?).ln());
    }
    slope_of(&xs, &ys)
}

/// Bisects for a shift where ln R changes sign, i.e. where the two bounds
/// trade places. Returns `None` when ln R has the same sign at both ends
/// (which includes the k = 1 case, where R ≡ 1 exactly).
pub fn crossover(
    params: &PowerParams,
    a_lo: f64,
    a_hi: f64,
    tol: f64,
) -> Result<Option<f64>> {
    if !(a_lo > 0.0) || !(a_hi > a_lo) || !a_hi.is_finite() {
        return Err(Error::InvalidGrid(format!(
            "crossover needs 0 < a_lo < a_hi finite, got [{a_lo}, {a_hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidGrid(format!("crossover tol must be positive, got {tol}")));
    }
    let log_ratio = |a: f64| -> Result<f64> {
        let p = params.with_a(a)?;
        Ok((b_ana(&p)? / b_geo(&p)?).ln())
    };
    let mut lo = a_lo;
    let mut hi = a_hi;
    let mut f_lo = log_ratio(lo)?;
    let f_hi = log_ratio(hi)?;
    if !(f_lo * f_hi < 0.0) {
        return Ok(None);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = log_ratio(mid)?;
        if f_mid == 0.0 {
            return Ok(Some(mid));
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Outcome of the two-stage strict verification of one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictCheck {
    pub params: PowerParams,
    pub b_geo: f64,
    pub b_ana: f64,
    /// First-stage bracket at the coarse measuring tolerance.
    pub measured: SeriesBracket,
    /// Bracket after refining to a tenth of the smaller slack.
    pub refined: SeriesBracket,
    /// measured.lower - bound: how much certified room the bound leaves.
    pub slack_geo: f64,
    pub slack_ana: f64,
    /// 0.1 × min(slack_geo, slack_ana).
    pub target_width: f64,
    pub geo_strict: bool,
    pub ana_strict: bool,
    /// Whether the refined bracket met the target width.
    pub width_ok: bool,
}

impl StrictCheck {
    pub fn passed(&self) -> bool {
        self.geo_strict && self.ana_strict && self.width_ok
    }
}

/// Default first-stage options for [`strict_check`].
pub fn standard_measure_options() -> EvalOptions {
    EvalOptions { abs_tol: 1e-3, max_terms: 10_000_000, quad_points: 16 }
}

/// Default refinement budget for [`strict_check`]. The deepest standard
/// grid point (m=3, k=5, a=100) needs N ≈ 2e11; walking that ball visits
/// about 1.6e9 points.
pub const STRICT_REFINE_CAP: u64 = 400_000_000_000;

/// Two-stage strict verification for k ≥ 2: measure the series once at
/// the coarse tolerance, read off how much slack each bound leaves, then
/// re-bracket tightly enough that the bracket width is at most a tenth of
/// the smaller slack. Both bounds must then sit below the refined lower
/// partial sum, which is a sum of exact counts against exact reciprocals.
pub fn strict_check(
    params: &PowerParams,
    measure: &EvalOptions,
    refine_cap: u64,
) -> Result<StrictCheck> {
    if params.k() < 2 {
        return Err(Error::Domain(
            "strict verification needs k >= 2; at k = 1 the bound equals the series".into(),
        ));
    }
    let measured = s_bracket(params, measure)?;
    let geo = b_geo(params)?;
    let ana = b_ana(params)?;
    let slack_geo = measured.lower - geo;
    let slack_ana = measured.lower - ana;
    let target_width = 0.1 * slack_geo.min(slack_ana);
    let refined = if target_width > 0.0 && measured.width() > target_width {
        s_bracket(
            params,
            &measure
                .with_tol(target_width)
                .with_max_terms(refine_cap.max(measured.terms)),
        )?
    } else {
        measured
    };
    Ok(StrictCheck {
        params: *params,
        b_geo: geo,
        b_ana: ana,
        measured,
        refined,
        slack_geo,
        slack_ana,
        target_width,
        geo_strict: geo <= refined.lower + slop(geo),
        ana_strict: ana <= refined.lower + slop(ana),
        width_ok: target_width > 0.0 && refined.width() <= target_width + slop(target_width),
    })
}

/// The standard verification grid: every convergent (m, k) with m ≤ 3,
/// crossed with four decades of shifts.
pub fn standard_grid() -> Vec<PowerParams> {
    let mut grid = Vec::new();
    for m in 1..=3u32 {
        for k in 1..2 * m {
            for &a in &[0.1, 1.0, 10.0, 100.0] {
                grid.push(PowerParams::new(m, k, a).unwrap());
            }
        }
    }
    grid
}
