//! Tiny least-squares helper shared by the growth and slope estimators.

use crate::error::{Error, Result};

/// Slope of the ordinary least-squares line through (xs, ys).
pub(crate) fn slope_of(xs: &[f64], ys: &[f64]) -> Result<f64> {
    debug_assert_eq!(xs.len(), ys.len());
    if xs.len() < 3 {
        return Err(Error::DegenerateFit { points: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit { points: xs.len() });
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::slope_of;

    #[test]
    fn recovers_exact_line() {
        let xs: Vec<f64> = (0..10).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x - 2.0).collect();
        assert!((slope_of(&xs, &ys).unwrap() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(slope_of(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(slope_of(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
    }
}
