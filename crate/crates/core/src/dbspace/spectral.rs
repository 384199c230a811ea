//! Phase, spectra of the selfadjoint extensions, spectral weights and
//! measures, and discrete Parseval sums.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{
    kernel, s_beta, s_beta_derivative, s_beta_derivative_real, s_beta_real, DbError, EntireEvaluable,
    HermiteBiehlerFunction, Kind,
};
use crate::series::{outer_half, power_law_exponent};
use crate::spectra::SpectrumSequence;

/// Largest phase step and smallest step before giving up, per unit `|x|`.
const MAX_STEP: f64 = 0.5;
const MIN_STEP: f64 = 1e-13;

/// `|sin(φ − β)|` below which a point counts as a zero of `s_β`.
const ZERO_TOL: f64 = 1e-7;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Follows `φ = −arg e` continuously from `x0` to `x1`, calling `visit`
/// with each accepted step `(xa, φa, xb, φb)`. Steps are limited by the
/// local rate `φ' = −Im(e'/e)` and rejected if the wrapped increment is
/// not small and consistent with it.
fn track(
    e: &HermiteBiehlerFunction,
    x0: f64,
    phi0: f64,
    x1: f64,
    mut visit: impl FnMut(f64, f64, f64, f64) -> Result<(), DbError>,
) -> Result<f64, DbError> {
    let ev = e.evaluable();
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let (mut x, mut phi) = (x0, phi0);
    let mut ex = ev.eval_real(x);
    while x != x1 {
        let rate = -(ev.derivative_real(x) / ex).im;
        let remaining = (x1 - x).abs();
        let mut h = remaining.min(MAX_STEP).min(PI / (4.0 * rate.abs().max(1e-300)));
        loop {
            let xn = if h >= remaining { x1 } else { x + dir * h };
            let en = ev.eval_real(xn);
            let delta = -(en / ex).arg();
            let predicted = rate * (xn - x);
            if delta.abs() < PI / 2.0 && (delta - predicted).abs() < PI / 4.0 {
                visit(x, phi, xn, phi + delta)?;
                x = xn;
                phi += delta;
                ex = en;
                break;
            }
            h *= 0.5;
            if h < MIN_STEP * x.abs().max(1.0) {
                return Err(DbError::PhaseJump(x));
            }
        }
    }
    Ok(phi)
}

/// Unwrapped phase `φ` with `e(x) = e^{−iφ(x)}|e(x)|`, anchored at the
/// principal value `−arg e(0)` and continued along the real axis.
pub fn phase(e: &HermiteBiehlerFunction, x_grid: &[f64]) -> Result<Vec<f64>, DbError> {
    if x_grid.iter().any(|x| !x.is_finite()) || x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DbError::InvalidInput("phase grid must be finite and strictly increasing"));
    }
    let Some(&first) = x_grid.first() else {
        return Ok(Vec::new());
    };
    let phi0 = -e.e_at_zero().arg();
    let mut phi = track(e, 0.0, phi0, first, |_, _, _, _| Ok(()))?;
    let mut out = Vec::with_capacity(x_grid.len());
    out.push(phi);
    for w in x_grid.windows(2) {
        phi = track(e, w[0], phi, w[1], |_, _, _, _| Ok(()))?;
        out.push(phi);
    }
    Ok(out)
}

/// Bisection on the sign of `s_β` inside a bracket.
fn refine(e: &HermiteBiehlerFunction, beta: f64, mut a: f64, mut b: f64) -> f64 {
    let mut sa = s_beta_real(e, beta, a);
    if sa == 0.0 {
        return a;
    }
    let mut sb = s_beta_real(e, beta, b);
    if sb == 0.0 {
        return b;
    }
    if (sa > 0.0) == (sb > 0.0) {
        // the crossing sits on an endpoint up to rounding
        let ra = sa.abs() / e.evaluable().eval_real(a).norm();
        let rb = sb.abs() / e.evaluable().eval_real(b).norm();
        return if ra <= rb { a } else { b };
    }
    let tol = 1e-12 * a.abs().max(b.abs()).max(1.0);
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let sm = s_beta_real(e, beta, m);
        if sm == 0.0 {
            return m;
        }
        if (sm > 0.0) == (sa > 0.0) {
            a = m;
            sa = sm;
        } else {
            b = m;
            sb = sm;
        }
    }
    // one secant step inside the final bracket
    let x = a - sa * (b - a) / (sb - sa);
    if x >= a && x <= b {
        x
    } else {
        0.5 * (a + b)
    }
}

/// Zeros of `s_β` in the open interval `(lo, hi)`: crossings of
/// `φ ≡ β (mod π)` along the tracked phase, refined by bisection to
/// `1e−12·max(1, |x|)`.
pub fn find_spectrum(e: &HermiteBiehlerFunction, beta: f64, lo: f64, hi: f64) -> Result<SpectrumSequence, DbError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(DbError::InvalidInput("interval must be finite with lo < hi"));
    }
    let mut roots = Vec::new();
    let phi_lo = -e.evaluable().eval_real(lo).arg();
    track(e, lo, phi_lo, hi, |xa, pa, xb, pb| {
        let (ka, kb) = (((pa - beta) / PI).floor(), ((pb - beta) / PI).floor());
        if kb < ka {
            return Err(DbError::UnresolvedCluster(xa));
        }
        if kb > ka {
            let r = refine(e, beta, xa, xb);
            if r > lo && r < hi && roots.last().is_none_or(|&p| r > p) {
                roots.push(r);
            }
        }
        Ok(())
    })?;
    if roots.is_empty() {
        return Err(DbError::InvalidInput("no zeros in the interval"));
    }
    SpectrumSequence::new(roots, None).map_err(|_| DbError::UnresolvedCluster(lo))
}

/// Zeros of `s_β` in `(lo, hi)` using a companion spectrum that interlaces
/// with them: one sign change per companion gap.
pub fn find_spectrum_hinted(
    e: &HermiteBiehlerFunction,
    beta: f64,
    companion: &SpectrumSequence,
    lo: f64,
    hi: f64,
) -> Result<SpectrumSequence, DbError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(DbError::InvalidInput("interval must be finite with lo < hi"));
    }
    let mut nodes = Vec::new();
    nodes.push(lo);
    nodes.extend(companion.points().iter().copied().filter(|&x| x > lo && x < hi));
    nodes.push(hi);
    let last = nodes.len() - 2;
    let mut roots = Vec::new();
    for (k, w) in nodes.windows(2).enumerate() {
        let (sa, sb) = (s_beta_real(e, beta, w[0]), s_beta_real(e, beta, w[1]));
        let end_segment = k == 0 || k == last;
        if (sa > 0.0) != (sb > 0.0) && sa != 0.0 && sb != 0.0 {
            let r = refine(e, beta, w[0], w[1]);
            if r > lo && r < hi {
                roots.push(r);
            }
        } else if !end_segment {
            return Err(DbError::UnresolvedCluster(0.5 * (w[0] + w[1])));
        }
    }
    if roots.is_empty() {
        return Err(DbError::InvalidInput("no zeros in the interval"));
    }
    SpectrumSequence::new(roots, None).map_err(|_| DbError::UnresolvedCluster(lo))
}

fn require_zero(e: &HermiteBiehlerFunction, beta: f64, x: f64) -> Result<(), DbError> {
    let s = s_beta_real(e, beta, x);
    let scale = e.evaluable().eval_real(x).norm();
    if !(s.abs() <= ZERO_TOL * scale) {
        return Err(DbError::NotAZero(x));
    }
    Ok(())
}

/// `‖k(·, x_n)‖² = −(1/π)·s_{γ+π/2}(x_n)·s'_γ(x_n)` at a zero of `s_γ`.
pub fn spectral_weight(e: &HermiteBiehlerFunction, gamma: f64, x: f64) -> Result<f64, DbError> {
    require_zero(e, gamma, x)?;
    let weight = -s_beta_real(e, gamma + PI / 2.0, x) * s_beta_derivative_real(e, gamma, x) / PI;
    if !(weight > 0.0) {
        return Err(DbError::NonPositiveWeight { x, weight });
    }
    Ok(weight)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightCheck {
    pub weight: f64,
    pub kernel_diagonal: f64,
    /// `|weight − k(x,x)| ≤ max(1e−8, 1e−6·weight)`.
    pub agrees: bool,
}

/// [`spectral_weight`] cross-checked against the kernel diagonal.
pub fn spectral_weight_checked(e: &HermiteBiehlerFunction, gamma: f64, x: f64) -> Result<WeightCheck, DbError> {
    let weight = spectral_weight(e, gamma, x)?;
    let kernel_diagonal = kernel(e, c(x), c(x)).re;
    let agrees = (weight - kernel_diagonal).abs() <= 1e-8f64.max(1e-6 * weight);
    Ok(WeightCheck { weight, kernel_diagonal, agrees })
}

/// Spectrum of one selfadjoint extension on a window with its weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    pub beta: f64,
    pub zeros: SpectrumSequence,
    pub weights: Vec<f64>,
}

impl SpectralData {
    /// `m_β(x)`: sum of `weight⁻¹` over window points `x_n ≤ x`.
    pub fn measure_at(&self, x: f64) -> f64 {
        let n = self.zeros.points().partition_point(|&p| p <= x);
        self.weights[..n].iter().map(|w| 1.0 / w).sum()
    }
}

/// Zeros of `s_β` on `(lo, hi)` with their weights.
pub fn spectral_measure(e: &HermiteBiehlerFunction, beta: f64, lo: f64, hi: f64) -> Result<SpectralData, DbError> {
    let zeros = find_spectrum(e, beta, lo, hi)?;
    spectral_measure_of(e, beta, zeros)
}

/// Weights at already known zeros of `s_β`.
pub fn spectral_measure_of(
    e: &HermiteBiehlerFunction,
    beta: f64,
    zeros: SpectrumSequence,
) -> Result<SpectralData, DbError> {
    let weights = zeros.points().iter().map(|&x| spectral_weight(e, beta, x)).collect::<Result<Vec<_>, _>>()?;
    Ok(SpectralData { beta, zeros, weights })
}

pub fn measure_at(sd: &SpectralData, x: f64) -> f64 {
    sd.measure_at(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProduct {
    pub value: Complex64,
    /// Size of the omitted tail extrapolated from the decay of the terms;
    /// infinite when they decay no faster than `1/n`.
    pub tail_estimate: f64,
}

/// `Σ_n conj f(x_n)·g(x_n)/weight_n` over the window.
pub fn discrete_inner(sd: &SpectralData, f: &EntireEvaluable, g: &EntireEvaluable) -> InnerProduct {
    let pts = sd.zeros.points();
    let mut terms: Vec<(f64, Complex64)> =
        pts.iter().zip(&sd.weights).map(|(&x, &w)| (x, f.eval(c(x)).conj() * g.eval(c(x)) / w)).collect();
    let value = terms.iter().fold(Complex64::new(0.0, 0.0), |acc, t| acc + t.1);
    terms.sort_by(|a, b| a.0.abs().total_cmp(&b.0.abs()));
    let mags: Vec<f64> = terms.iter().map(|t| t.1.norm()).collect();
    let tail_estimate = if mags.len() >= 8 {
        let range = outer_half(mags.len());
        let ns: Vec<f64> = range.clone().map(|i| (i + 1) as f64).collect();
        match power_law_exponent(&ns, &mags[range]) {
            // Σ_{n>N} C n^p ≈ N·t_N/(−p − 1)
            Some(p) if p < -1.0 => mags.len() as f64 * mags[mags.len() - 1] / (-p - 1.0),
            Some(_) => f64::INFINITY,
            None if mags[mags.len() / 2..].iter().all(|&m| m == 0.0) => 0.0,
            None => f64::INFINITY,
        }
    } else {
        f64::INFINITY
    };
    InnerProduct { value, tail_estimate }
}

/// `s_β(z)/(z − x_n)`, with value `s'_β(x_n)` at `z = x_n`.
pub fn eigenfunction(e: &HermiteBiehlerFunction, beta: f64, x_n: f64, z: Complex64) -> Result<Complex64, DbError> {
    require_zero(e, beta, x_n)?;
    Ok(eigen_value(e, beta, x_n, z))
}

fn eigen_value(e: &HermiteBiehlerFunction, beta: f64, x_n: f64, z: Complex64) -> Complex64 {
    let d = z - x_n;
    if d.norm() <= 1e-12 * x_n.abs().max(1.0) {
        s_beta_derivative(e, beta, c(x_n))
    } else {
        s_beta(e, beta, z) / d
    }
}

/// `z ↦ k(z, w)` as an evaluable.
pub fn kernel_section(e: &HermiteBiehlerFunction, w: Complex64) -> EntireEvaluable {
    let e = e.clone();
    EntireEvaluable::from_fn(Kind::ArithmeticCombination, move |z| kernel(&e, z, w))
}

/// `z ↦ s_β(z)/(z − x_n)` as an evaluable.
pub fn eigenfunction_section(e: &HermiteBiehlerFunction, beta: f64, x_n: f64) -> Result<EntireEvaluable, DbError> {
    require_zero(e, beta, x_n)?;
    let e = e.clone();
    Ok(EntireEvaluable::from_fn(Kind::ArithmeticCombination, move |z| eigen_value(&e, beta, x_n, z)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbspace::{AtanModel, ExpLinear, Polynomial};
    use alloc::vec;

    fn pw() -> HermiteBiehlerFunction {
        HermiteBiehlerFunction::new(EntireEvaluable::new(ExpLinear { a: PI }))
    }

    fn atan() -> HermiteBiehlerFunction {
        HermiteBiehlerFunction::new(EntireEvaluable::new(AtanModel))
    }

    #[test]
    fn phase_examples() {
        let grid: Vec<f64> = (0..=40).map(|k| -10.0 + 0.5 * k as f64).collect();
        let phi = phase(&pw(), &grid).unwrap();
        for (x, p) in grid.iter().zip(&phi) {
            assert!((p - PI * x).abs() < 1e-12, "{x} {p}");
        }
        let zi = HermiteBiehlerFunction::new(EntireEvaluable::new(Polynomial { coeffs: vec![Complex64::i(), c(1.0)] }));
        let phi = phase(&zi, &[-5.0, 0.0, 5.0, 1e3]).unwrap();
        assert!((phi[1] + PI / 2.0).abs() < 1e-15);
        assert!(phi.windows(2).all(|w| w[1] > w[0]));
        assert!(phi[3] < 0.0 && phi[3] > -1e-2);
        assert_eq!(phase(&pw(), &[3.0]).unwrap().len(), 1);
        assert!(phase(&pw(), &[]).unwrap().is_empty());
    }

    #[test]
    fn phase_jump_on_real_zero() {
        let bad = HermiteBiehlerFunction::new(EntireEvaluable::new(Polynomial { coeffs: vec![c(-1.0), c(1.0)] }));
        assert!(matches!(phase(&bad, &[0.0, 2.0]), Err(DbError::PhaseJump(_))));
    }

    #[test]
    fn spectrum_examples() {
        let s = find_spectrum(&pw(), 0.0, -5.5, 5.5).unwrap();
        assert_eq!(s.len(), 11);
        for (k, x) in s.points().iter().enumerate() {
            assert!((x - (k as f64 - 5.0)).abs() < 1e-11);
        }
        let s = find_spectrum(&atan(), PI / 2.0, 0.0, 3.0).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.points()[0] - 2.028_757_838_110_434_7).abs() < 1e-10);

        let a = find_spectrum(&pw(), 0.0, -3.0, 3.0).unwrap();
        let b = find_spectrum(&pw(), PI / 2.0, -3.0, 3.0).unwrap();
        assert!(crate::spectra::check_interlacing(&a, &b).interlaced);
    }

    #[test]
    fn hinted_matches_tracked() {
        let e = atan();
        let g = find_spectrum(&e, PI / 2.0, -20.0, 20.0).unwrap();
        let tracked = find_spectrum(&e, 0.0, -20.0, 20.0).unwrap();
        let hinted = find_spectrum_hinted(&e, 0.0, &g, -20.0, 20.0).unwrap();
        assert_eq!(tracked.len(), hinted.len());
        for (a, b) in tracked.points().iter().zip(hinted.points()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn weight_examples() {
        let e = pw();
        assert!((spectral_weight(&e, 0.0, 3.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((spectral_weight(&e, PI / 2.0, 0.5).unwrap() - 1.0).abs() < 1e-13);
        let chk = spectral_weight_checked(&e, 0.0, 3.0).unwrap();
        assert!(chk.agrees && (chk.kernel_diagonal - 1.0).abs() < 1e-13);
        assert_eq!(spectral_weight(&e, 0.0, 0.4), Err(DbError::NotAZero(0.4)));
    }

    #[test]
    fn atan_weights_match_kernel() {
        let e = atan();
        for beta in [0.0, PI / 2.0, 1.0] {
            for &x in find_spectrum(&e, beta, -30.0, 30.0).unwrap().points() {
                assert!(spectral_weight_checked(&e, beta, x).unwrap().agrees);
            }
        }
    }

    #[test]
    fn measure_examples() {
        let sd = spectral_measure(&pw(), 0.0, -5.5, 5.5).unwrap();
        assert!((sd.measure_at(2.5) - sd.measure_at(-0.5) - 3.0).abs() < 1e-12);
        assert_eq!(measure_at(&sd, -100.0), 0.0);
        assert!(sd.measure_at(4.0) >= sd.measure_at(1.0));
    }

    #[test]
    fn reproducing_and_orthogonality() {
        let e = pw();
        let sd = spectral_measure(&e, 0.0, -400.5, 400.5).unwrap();
        let k = |w: f64| kernel_section(&e, c(w));
        let v = discrete_inner(&sd, &k(0.5), &k(0.5));
        assert!((v.value.re - 1.0).abs() < 2e-3);
        assert!(v.tail_estimate.is_finite());
        let v = discrete_inner(&sd, &k(0.3), &k(-0.7));
        assert!(v.value.norm() < 1e-3);
        let g2 = eigenfunction_section(&e, 0.0, 2.0).unwrap();
        let g3 = eigenfunction_section(&e, 0.0, 3.0).unwrap();
        assert!(discrete_inner(&sd, &g2, &g3).value.norm() < 1e-12);
    }

    #[test]
    fn eigenfunction_examples() {
        let e = pw();
        assert!((eigenfunction(&e, 0.0, 2.0, c(2.0)).unwrap() - c(PI)).norm() < 1e-12);
        assert!(eigenfunction(&e, 0.0, 2.0, c(0.0)).unwrap().norm() < 1e-15);
        let z = Complex64::new(0.7, 0.4);
        let lhs = (z - 2.0) * eigenfunction(&e, 0.0, 2.0, z).unwrap();
        assert!((lhs - s_beta(&e, 0.0, z)).norm() < 1e-13);
        assert_eq!(eigenfunction(&e, 0.0, 2.5, z), Err(DbError::NotAZero(2.5)));
    }
}
