//! Complex log-gamma and digamma, enough to close affine tails of
//! products and harmonic-type sums in closed form.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Real part below which the recurrence is used before the Stirling series.
const STIRLING_MIN: f64 = 15.0;

/// `ln(1 + w)` without cancellation for small `|w|`.
pub fn ln_1p(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        // alternating series, |w|^7 < 1e-21
        let mut term = w;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=7 {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc += term * (sign / k as f64);
            term *= w;
        }
        acc
    } else {
        (Complex64::new(1.0, 0.0) + w).ln()
    }
}

fn stirling_series(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    // 1/(12w) - 1/(360w^3) + 1/(1260w^5) - 1/(1680w^7)
    inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// A branch of `ln Γ(w)`. Only `exp` of the result is meaningful away
/// from the positive real axis.
pub fn ln_gamma(w: Complex64) -> Complex64 {
    if w.re < 0.5 {
        // reflection: Γ(w)Γ(1-w) = π / sin(πw)
        let s = (w * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - w);
    }
    let mut shifted = w;
    let mut acc = Complex64::new(1.0, 0.0);
    while shifted.re < STIRLING_MIN {
        acc *= shifted;
        shifted += 1.0;
    }
    let stirling = (shifted - 0.5) * shifted.ln() - shifted + HALF_LN_TWO_PI + stirling_series(shifted);
    stirling - acc.ln()
}

/// `ln Γ(u) − ln Γ(v)` for nearby large arguments without the cancellation
/// of subtracting two large logarithms.
pub fn ln_gamma_ratio(u: Complex64, v: Complex64) -> Complex64 {
    let d = u - v;
    if u.re >= STIRLING_MIN && v.re >= STIRLING_MIN && d.norm() <= 0.5 * u.norm() {
        // (u-½)ln u − (v-½)ln v = d·ln u − (v−½)·ln(v/u)
        let ln_ratio = ln_1p(-d / u);
        d * u.ln() - (v - 0.5) * ln_ratio - d + stirling_series(u) - stirling_series(v)
    } else {
        ln_gamma(u) - ln_gamma(v)
    }
}

/// Digamma `ψ(w) = Γ'(w)/Γ(w)`.
pub fn digamma(w: Complex64) -> Complex64 {
    if w.re < 0.5 {
        // ψ(w) = ψ(1-w) − π cot(πw)
        let pw = w * PI;
        return digamma(Complex64::new(1.0, 0.0) - w) - pw.cos() / pw.sin() * PI;
    }
    let mut shifted = w;
    let mut acc = Complex64::new(0.0, 0.0);
    while shifted.re < STIRLING_MIN {
        acc += shifted.inv();
        shifted += 1.0;
    }
    let inv = shifted.inv();
    let inv2 = inv * inv;
    let series =
        inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    shifted.ln() - inv * 0.5 - series - acc
}

/// Real digamma.
pub fn digamma_real(x: f64) -> f64 {
    digamma(Complex64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_at_integers_and_half() {
        // Γ(5) = 24, Γ(1/2) = √π
        assert!((ln_gamma(c(5.0, 0.0)).exp().re - 24.0).abs() < 1e-12);
        assert!((ln_gamma(c(0.5, 0.0)).exp().re - PI.sqrt()).abs() < 1e-13);
        // Γ(-1/2) = -2√π
        let g = ln_gamma(c(-0.5, 0.0)).exp();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-12 && g.im.abs() < 1e-12);
    }

    #[test]
    fn gamma_recurrence_complex() {
        let w = c(0.3, 1.7);
        let lhs = ln_gamma(w + 1.0).exp();
        let rhs = ln_gamma(w).exp() * w;
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
    }

    #[test]
    fn ratio_matches_direct() {
        let u = c(10_000.5, 0.0);
        let v = c(10_000.0, -0.3);
        let direct = ln_gamma(u) - ln_gamma(v);
        let r = ln_gamma_ratio(u, v);
        assert!((direct.exp() - r.exp()).norm() < 1e-9 * r.exp().norm());
    }

    #[test]
    fn digamma_values() {
        // ψ(1) = -γ, ψ(1/2) = -γ - 2 ln 2
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma_real(1.0) + euler).abs() < 1e-14);
        assert!((digamma_real(0.5) + euler + 2.0 * 2f64.ln()).abs() < 1e-14);
        // recurrence at negative non-integer
        let x = -2.3;
        assert!((digamma_real(x + 1.0) - digamma_real(x) - 1.0 / x).abs() < 1e-12);
    }

    #[test]
    fn log1p_small_and_large() {
        let w = c(1e-5, -2e-5);
        let exact = (c(1.0, 0.0) + w).ln();
        assert!((ln_1p(w) - exact).norm() < 1e-15);
        assert!((ln_1p(c(1.0, 0.0)).re - 2f64.ln()).abs() < 1e-15);
    }
}
