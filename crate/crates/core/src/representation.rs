//! Exact representation counts r_{m,k}(n): the number of integer vectors
//! x ∈ ℤ^k with x_1^(2m) + ... + x_k^(2m) = n.

use crate::error::{Error, Result};
use crate::fit::slope_of;

/// Parameter triple (m, k, a) for the counting problem and the shifted
/// series S = Σ_{n≥0} r_{m,k}(n)/(n + a).
///
/// Construction enforces m ≥ 1, k ≥ 1 and finite a > 0; the fields stay
/// private so every value of this type satisfies those invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerParams {
    m: u32,
    k: u32,
    a: f64,
}

impl PowerParams {
    pub fn new(m: u32, k: u32, a: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("m must be at least 1".into()));
        }
        if m > (u32::MAX >> 1) {
            return Err(Error::Domain(format!("2m overflows u32 for m = {m}")));
        }
        if k == 0 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!("a must be positive and finite, got {a}")));
        }
        Ok(PowerParams { m, k, a })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// The exponent 2m.
    pub fn power(&self) -> u32 {
        2 * self.m
    }

    /// Same (m, k) with a different shift.
    pub fn with_a(&self, a: f64) -> Result<Self> {
        PowerParams::new(self.m, self.k, a)
    }

    /// The shifted series converges exactly when k < 2m (the cumulative
    /// count grows like n^(k/2m), so terms decay like n^(k/2m - 1)).
    pub fn series_convergent(&self) -> bool {
        (self.k as u64) < 2 * self.m as u64
    }
}

/// Representation counts r_{m,k}(0..=limit) as exact u64 values.
#[derive(Debug, Clone, PartialEq)]
pub struct RepCoefficients {
    m: u32,
    k: u32,
    counts: Vec<u64>,
}

impl RepCoefficients {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Largest n covered.
    pub fn limit(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    /// Partial sums A(n) = Σ_{j≤n} r(j), the number of lattice points in
    /// the ball Σ x_i^(2m) ≤ n. Checked, since these grow much faster
    /// than the coefficients themselves.
    pub fn cumulative(&self) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(self.counts.len());
        let mut acc: u64 = 0;
        for &c in &self.counts {
            acc = acc.checked_add(c).ok_or(Error::Overflow)?;
            out.push(acc);
        }
        Ok(out)
    }
}

/// Largest r with r^p ≤ n, exactly.
///
/// A floating seed lands within a few units of the answer; an integer
/// walk with checked powers then pins it down, so the result is exact for
/// the whole u64 range even where f64 can no longer represent n.
pub fn floor_root(n: u64, p: u32) -> u64 {
    assert!(p >= 1, "floor_root requires p >= 1");
    if p == 1 || n <= 1 {
        return n;
    }
    let le_pow = |r: u64| match r.checked_pow(p) {
        Some(v) => v <= n,
        None => false,
    };
    let mut r = ((n as f64).powf(1.0 / p as f64) as u64).saturating_add(2);
    while r > 0 && !le_pow(r) {
        r -= 1;
    }
    r
}

/// Coefficients of the one-dimensional problem: r_{m,1}(n) counts
/// solutions of t^(2m) = n over t ∈ ℤ, i.e. 1 at n = 0, 2 at each
/// positive 2m-th power, 0 elsewhere.
pub fn base_coefficients(m: u32, limit: u64) -> Result<RepCoefficients> {
    if m == 0 {
        return Err(Error::Domain("m must be at least 1".into()));
    }
    let p = 2 * m;
    let len = usize::try_from(limit)
        .ok()
        .and_then(|l| l.checked_add(1))
        .ok_or(Error::Overflow)?;
    let mut counts = vec![0u64; len];
    counts[0] = 1;
    let mut t: u64 = 1;
    while let Some(pw) = t.checked_pow(p) {
        if pw > limit {
            break;
        }
        counts[pw as usize] = 2;
        t += 1;
    }
    Ok(RepCoefficients { m, k: 1, counts })
}

/// r_{m,k}(0..=limit) by k-fold convolution of the base coefficients.
///
/// Each pass convolves with the sparse base sequence, so the cost is
/// O(k · limit^(1 + 1/2m)) and all arithmetic is checked.
pub fn r_convolution(params: &PowerParams, limit: u64) -> Result<RepCoefficients> {
    let base = base_coefficients(params.m(), limit)?;
    let p = params.power();
    let mut cur = base.counts;
    for _ in 1..params.k() {
        // Offset 0 carries base coefficient 1; every positive power carries 2.
        let mut next = cur.clone();
        let mut t: u64 = 1;
        while let Some(pw) = t.checked_pow(p) {
            if pw > limit {
                break;
            }
            let pw = pw as usize;
            for n in pw..cur.len() {
                let add = cur[n - pw].checked_mul(2).ok_or(Error::Overflow)?;
                next[n] = next[n].checked_add(add).ok_or(Error::Overflow)?;
            }
            t += 1;
        }
        cur = next;
    }
    Ok(RepCoefficients { m: params.m(), k: params.k(), counts: cur })
}

/// r_{m,k}(n) by direct enumeration of integer solutions, with pruning on
/// the remaining budget. Exponential in k and only meant as an
/// independent cross-check at desk scale.
pub fn r_bruteforce(params: &PowerParams, n: u64) -> u64 {
    fn count(coords_left: u32, budget: u64, p: u32) -> u64 {
        if coords_left == 0 {
            return u64::from(budget == 0);
        }
        let mut total = count(coords_left - 1, budget, p);
        let mut t: u64 = 1;
        while let Some(pw) = t.checked_pow(p) {
            if pw > budget {
                break;
            }
            total += 2 * count(coords_left - 1, budget - pw, p);
            t += 1;
        }
        total
    }
    count(params.k(), n, params.power())
}

/// Least-squares slope of ln A(n) against ln n over the window
/// [n_max/2, n_max], where A is the cumulative count.
///
/// For large n the ball volume gives A(n) ≍ n^(k/2m), so the fitted slope
/// estimates k/2m. Convergence in n is slow when k/2m is small: the count
/// is a step function and the window rides its plateaus, so expect a few
/// percent of bias at desk-scale n_max unless k/2m is moderate.
pub fn cumulative_growth_exponent(params: &PowerParams, n_max: u64) -> Result<f64> {
    if n_max < 4 {
        return Err(Error::InvalidGrid(format!(
            "n_max = {n_max} leaves fewer than 3 window points"
        )));
    }
    let cum = r_convolution(params, n_max)?.cumulative()?;
    let lo = (n_max / 2) as usize;
    let mut xs = Vec::with_capacity(cum.len() - lo);
    let mut ys = Vec::with_capacity(cum.len() - lo);
    for (n, &c) in cum.iter().enumerate().skip(lo) {
        xs.push((n as f64).ln());
        ys.push((c as f64).ln());
    }
    slope_of(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(PowerParams::new(1, 1, 1.0).is_ok());
        assert!(PowerParams::new(0, 1, 1.0).is_err());
        assert!(PowerParams::new(1, 0, 1.0).is_err());
        assert!(PowerParams::new(1, 1, 0.0).is_err());
        assert!(PowerParams::new(1, 1, -2.0).is_err());
        assert!(PowerParams::new(1, 1, f64::INFINITY).is_err());
        assert!(PowerParams::new(1, 1, f64::NAN).is_err());
    }

    #[test]
    fn convergence_predicate() {
        assert!(PowerParams::new(1, 1, 1.0).unwrap().series_convergent());
        assert!(!PowerParams::new(1, 2, 1.0).unwrap().series_convergent());
        assert!(PowerParams::new(2, 3, 1.0).unwrap().series_convergent());
        assert!(!PowerParams::new(2, 4, 1.0).unwrap().series_convergent());
        assert!(PowerParams::new(3, 5, 1.0).unwrap().series_convergent());
    }

    #[test]
    fn floor_root_exact_at_boundaries() {
        for p in [2u32, 4, 6, 10] {
            for t in [1u64, 2, 3, 10, 99, 1000] {
                let v = t.checked_pow(p);
                let Some(v) = v else { continue };
                assert_eq!(floor_root(v, p), t);
                assert_eq!(floor_root(v - 1, p), t - 1);
                assert_eq!(floor_root(v + 1, p), t);
            }
        }
        assert_eq!(floor_root(0, 4), 0);
        assert_eq!(floor_root(u64::MAX, 1), u64::MAX);
        // 2^64 - 1 lies between 4294967295² and 4294967296².
        assert_eq!(floor_root(u64::MAX, 2), 4_294_967_295);
    }

    #[test]
    fn base_coefficients_quartic() {
        let c = base_coefficients(2, 20).unwrap().counts;
        let mut expect = vec![0u64; 21];
        expect[0] = 1;
        expect[1] = 2;
        expect[16] = 2;
        assert_eq!(c, expect);
    }

    #[test]
    fn two_squares_at_25() {
        // 25 = 0+25 = 9+16 and reflections: 12 vectors.
        let p = PowerParams::new(1, 2, 1.0).unwrap();
        assert_eq!(r_bruteforce(&p, 25), 12);
        let c = r_convolution(&p, 25).unwrap();
        assert_eq!(c.counts()[25], 12);
    }

    #[test]
    fn convolution_matches_bruteforce() {
        for (m, k) in [(1u32, 1u32), (1, 2), (1, 3), (2, 2), (2, 3), (3, 2)] {
            let p = PowerParams::new(m, k, 1.0).unwrap();
            let c = r_convolution(&p, 80).unwrap();
            for n in 0..=80u64 {
                assert_eq!(
                    c.counts()[n as usize],
                    r_bruteforce(&p, n),
                    "mismatch at m={m} k={k} n={n}"
                );
            }
        }
    }

    #[test]
    fn counts_zero_index_is_one() {
        for (m, k) in [(1u32, 4u32), (2, 5), (3, 1)] {
            let p = PowerParams::new(m, k, 1.0).unwrap();
            assert_eq!(r_convolution(&p, 10).unwrap().counts()[0], 1);
        }
    }

    #[test]
    fn cumulative_is_monotone() {
        let p = PowerParams::new(2, 3, 1.0).unwrap();
        let cum = r_convolution(&p, 500).unwrap().cumulative().unwrap();
        for w in cum.windows(2) {
            assert!(w[0] <= w[1]);
        }
        assert_eq!(cum[0], 1);
    }

    #[test]
    fn growth_exponent_tracks_ball_dimension() {
        // A(n) ≍ n^(k/2m); generous windows keep the plateau bias small.
        let cases = [
            (1u32, 1u32, 4096u64, 0.5),
            (2, 3, 4096, 0.75),
            (2, 1, 65_536, 0.25),
        ];
        for (m, k, n_max, expect) in cases {
            let p = PowerParams::new(m, k, 1.0).unwrap();
            let slope = cumulative_growth_exponent(&p, n_max).unwrap();
            assert!(
                (slope - expect).abs() <= 0.05,
                "m={m} k={k}: slope {slope} vs {expect}"
            );
        }
    }

    #[test]
    fn growth_exponent_rejects_tiny_windows() {
        let p = PowerParams::new(1, 1, 1.0).unwrap();
        assert!(cumulative_growth_exponent(&p, 3).is_err());
    }
}
