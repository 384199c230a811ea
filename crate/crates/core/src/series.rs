//! Small numerical helpers for series diagnostics: least-squares power-law
//! fits and Richardson extrapolation on dyadic radii.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Result of a least-squares line fit `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual.
    pub max_residual: f64,
}

/// Ordinary least squares. Needs at least two distinct abscissae.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).abs()).fold(0.0, f64::max);
    Some(LineFit { slope, intercept, max_residual })
}

/// Exponent `p` of `|value| ~ C·index^p`, fitted on log-log axes.
/// Non-positive or non-finite values make the fit undefined.
pub fn power_law_exponent(indices: &[f64], values: &[f64]) -> Option<f64> {
    let mut lx = Vec::with_capacity(indices.len());
    let mut ly = Vec::with_capacity(values.len());
    for (i, v) in indices.iter().zip(values) {
        let a = v.abs();
        if !(a > 0.0) || !a.is_finite() || !(*i > 0.0) {
            return None;
        }
        lx.push(i.ln());
        ly.push(a.ln());
    }
    fit_line(&lx, &ly).map(|f| f.slope)
}

/// The outer half of `0..n`, i.e. `n/2..n` (at least one element when `n > 0`).
pub fn outer_half(n: usize) -> core::ops::Range<usize> {
    (n / 2).min(n.saturating_sub(1))..n
}

/// Richardson extrapolation for values at radii `r/2^k`, listed from the
/// coarsest to the finest, assuming an error expansion in powers of `1/r`.
/// Returns the extrapolated value and the one-level-lower value.
pub fn richardson(values: &[Complex64]) -> Option<(Complex64, Complex64)> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some((values[0], values[0]));
    }
    let mut row: Vec<Complex64> = values.to_vec();
    let mut previous = row[n - 1];
    let mut factor = 2.0;
    while row.len() > 1 {
        previous = row[row.len() - 1];
        row = row.windows(2).map(|w| (w[1] * factor - w[0]) / (factor - 1.0)).collect();
        factor *= 2.0;
    }
    Some((row[0], previous))
}

/// Real-valued convenience wrapper around [`richardson`].
pub fn richardson_real(values: &[f64]) -> Option<(f64, f64)> {
    let c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    richardson(&c).map(|(a, b)| (a.re, b.re))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-14);
        assert!((f.intercept - 3.0).abs() < 1e-14);
        assert!(f.max_residual < 1e-14);
    }

    #[test]
    fn degenerate_fit_is_none() {
        assert!(fit_line(&[1.0, 1.0], &[2.0, 3.0]).is_none());
        assert!(fit_line(&[1.0], &[2.0]).is_none());
    }

    #[test]
    fn power_law_exponent_of_inverse_square() {
        let ns: Vec<f64> = (10..40).map(|n| n as f64).collect();
        let vs: Vec<f64> = ns.iter().map(|n| 5.0 / (n * n)).collect();
        assert!((power_law_exponent(&ns, &vs).unwrap() + 2.0).abs() < 1e-12);
        assert!(power_law_exponent(&[1.0, 2.0], &[0.0, 1.0]).is_none());
    }

    #[test]
    fn richardson_removes_leading_inverse_radius_terms() {
        // S(r) = 1 + 3/r + 5/r^2 at r = 8, 16, 32
        let vals: Vec<f64> = [8.0, 16.0, 32.0].iter().map(|r| 1.0 + 3.0 / r + 5.0 / (r * r)).collect();
        let (best, _) = richardson_real(&vals).unwrap();
        assert!((best - 1.0).abs() < 1e-12);
    }
}
