//! Genus-0 canonical products over a spectrum window.
//!
//! `h(z) = lim_{r→∞} ∏_{|b|≤r} (1 − z/b)`, with a leading factor `z` when
//! `0` is one of the zeros. Factors are accumulated in order of increasing
//! modulus, so opposite-sign zeros of similar size are grouped and the
//! conditionally convergent limit stabilises. Partial products are kept as
//! mantissa and binary exponent: intermediate values overflow long before
//! the final value does.
//!
//! When the sequence carries a two-sided affine tail with equal slopes on
//! both sides, the infinite remainder `∏ (1 − z/(P + αj))(1 + z/(Q + αj))`
//! is closed with Gamma functions:
//! `Γ(A+1)Γ(B+1) / (Γ(A+1−z/α)Γ(B+1+z/α))`, `A = P/α`, `B = Q/α`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::special::{digamma, ln_gamma_ratio};
use crate::spectra::SpectrumSequence;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProductError {
    #[error("divergent product: {0}")]
    DivergentProduct(String),
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
}

/// Truncation and confidence parameters shared by products and the
/// condition checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Cutoff `|b| ≤ radius`; infinity means the whole stored window.
    pub radius: f64,
    /// Group factors across signs by modulus (the default). Unpaired mode
    /// multiplies each side separately and is only for diagnostics.
    pub pairing: bool,
    /// Close the product with the sequence's affine tail model when present.
    pub tail_correction: bool,
    /// Richardson levels over dyadic radii when no tail correction applies.
    pub richardson_levels: u8,
    /// Confidence margin on fitted exponents.
    pub delta: f64,
    /// Largest `|x_n|` entering series windows; `None` means automatic.
    pub window: Option<f64>,
    /// Largest tolerated first-order drift `|z·Σ 1/b|` over the last
    /// doubling block before a product is declared divergent.
    pub stability_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            radius: f64::INFINITY,
            pairing: true,
            tail_correction: true,
            richardson_levels: 0,
            delta: 0.2,
            window: None,
            stability_tol: 0.2,
        }
    }
}

impl TruncationPolicy {
    pub fn with_radius(self, radius: f64) -> Self {
        Self { radius, ..self }
    }

    pub fn without_tail_correction(self) -> Self {
        Self { tail_correction: false, ..self }
    }

    pub fn validate(&self) -> Result<(), ProductError> {
        if !(self.radius > 0.0) {
            return Err(ProductError::InvalidPolicy("radius must be positive".into()));
        }
        if self.richardson_levels > 4 {
            return Err(ProductError::InvalidPolicy("at most 4 Richardson levels".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(ProductError::InvalidPolicy("delta must lie in (0, 1)".into()));
        }
        if let Some(w) = self.window {
            if !(w > 0.0) {
                return Err(ProductError::InvalidPolicy("window must be positive".into()));
            }
        }
        if !(self.stability_tol > 0.0) {
            return Err(ProductError::InvalidPolicy("stability tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// A value together with a heuristic error estimate (last-doubling
/// difference or Richardson increment).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error_estimate: f64,
}

trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Div<f64, Output = Self>
{
    fn real(x: f64) -> Self;
    fn magnitude(self) -> f64;
    fn modulus(self) -> f64;
    fn complex(self) -> Complex64;
    fn from_complex(c: Complex64) -> Self;
    fn scale(self, s: f64) -> Self;
}

impl Scalar for f64 {
    fn real(x: f64) -> Self {
        x
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_complex(c: Complex64) -> Self {
        c.re
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl Scalar for Complex64 {
    fn real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.re.abs() + self.im.abs()
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn complex(self) -> Complex64 {
        self
    }
    fn from_complex(c: Complex64) -> Self {
        c
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

const RESCALE_BITS: i32 = 256;

/// Mantissa times `2^exponent`.
#[derive(Clone, Copy)]
struct Scaled<T> {
    mantissa: T,
    exponent: i32,
}

impl<T: Scalar> Scaled<T> {
    fn one() -> Self {
        Self { mantissa: T::real(1.0), exponent: 0 }
    }

    #[inline]
    fn mul(&mut self, f: T) {
        self.mantissa = self.mantissa * f;
        let a = self.mantissa.magnitude();
        if a > 1e70 {
            self.mantissa = self.mantissa.scale(2f64.powi(-RESCALE_BITS));
            self.exponent += RESCALE_BITS;
        } else if a < 1e-70 && a != 0.0 {
            self.mantissa = self.mantissa.scale(2f64.powi(RESCALE_BITS));
            self.exponent -= RESCALE_BITS;
        }
    }

    fn times(mut self, other: Self) -> Self {
        self.exponent += other.exponent;
        self.mul(other.mantissa);
        self
    }

    /// `mantissa · 2^exponent · exp(log_factor)`.
    fn finish(self, log_factor: Option<Complex64>) -> T {
        let m = self.mantissa.complex();
        if m.re == 0.0 && m.im == 0.0 {
            return T::real(0.0);
        }
        match log_factor {
            None => self.mantissa.scale(2f64.powi(self.exponent)),
            Some(l) => {
                let ln_mag = m.norm().ln() + self.exponent as f64 * core::f64::consts::LN_2 + l.re;
                let arg = m.arg() + l.im;
                T::from_complex(Complex64::from_polar(ln_mag.exp(), arg))
            }
        }
    }
}

#[derive(Clone, Copy)]
struct Snapshot<T> {
    positive: Scaled<T>,
    negative: Scaled<T>,
    log_sum: T,
    last_pos: f64,
    last_neg: f64,
    inv_sum: f64,
    inv_abs_sum: f64,
}

/// Tail closure parameters derived from the sequence's tail model.
#[derive(Clone, Copy)]
enum Tail {
    None,
    Balanced { alpha: f64, offset: f64 },
}

/// `h_β` built from one spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalProduct {
    zeros: SpectrumSequence,
    by_modulus: Vec<f64>,
    reciprocals: Vec<f64>,
}

impl CanonicalProduct {
    pub fn new(zeros: SpectrumSequence) -> Self {
        let mut by_modulus: Vec<f64> = zeros.points().iter().copied().filter(|&b| b != 0.0).collect();
        by_modulus.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(b.total_cmp(a)));
        let reciprocals = by_modulus.iter().map(|b| 1.0 / b).collect();
        Self { zeros, by_modulus, reciprocals }
    }

    pub fn zeros(&self) -> &SpectrumSequence {
        &self.zeros
    }

    /// The radius actually used: the policy cutoff clipped to the window.
    pub fn effective_radius(&self, policy: &TruncationPolicy) -> f64 {
        let stored = self.by_modulus.last().map(|b| b.abs()).unwrap_or(0.0);
        policy.radius.min(stored)
    }

    fn tail(&self, policy: &TruncationPolicy) -> Result<Tail, ProductError> {
        if !policy.tail_correction {
            return Ok(Tail::None);
        }
        let Some(model) = self.zeros.tail() else {
            return Ok(Tail::None);
        };
        match model.balanced_slope() {
            Some(alpha) => Ok(Tail::Balanced { alpha, offset: model.offset() }),
            None => Err(ProductError::DivergentProduct(match (model.alpha_pos(), model.alpha_neg()) {
                (Some(p), Some(n)) => format!("tail densities differ ({} vs {})", 1.0 / p, 1.0 / n),
                _ => "one-sided affine tail: the symmetric limit does not exist".into(),
            })),
        }
    }

    /// Index into the sorted points of an included zero within snapping
    /// distance of `z`.
    fn snapped_zero(&self, z: Complex64, radius: f64) -> Option<f64> {
        let pts = self.zeros.points();
        let i = pts.partition_point(|&p| p < z.re);
        let mut best: Option<f64> = None;
        for k in [i.wrapping_sub(1), i] {
            let Some(&b) = pts.get(k) else { continue };
            if b.abs() > radius && b != 0.0 {
                continue;
            }
            let left = if k > 0 { b - pts[k - 1] } else { f64::INFINITY };
            let right = if k + 1 < pts.len() { pts[k + 1] - b } else { f64::INFINITY };
            let mut gap = left.min(right);
            if !gap.is_finite() {
                gap = b.abs().max(1.0);
            }
            if (z - b).norm() <= 1e-12 * gap {
                best = Some(b);
            }
        }
        best
    }

    fn dyadic_radii(&self, policy: &TruncationPolicy) -> Vec<f64> {
        let r = self.effective_radius(policy);
        let levels = policy.richardson_levels.max(1) as i32;
        (0..=levels).rev().map(|k| r / 2f64.powi(k)).collect()
    }

    fn accumulate<T: Scalar>(
        &self,
        z: T,
        radii: &[f64],
        skip: Option<f64>,
        pairing: bool,
        log_sum: bool,
    ) -> Vec<Snapshot<T>> {
        let mut snaps = Vec::with_capacity(radii.len());
        let mut cur = Snapshot {
            positive: Scaled::one(),
            negative: Scaled::one(),
            log_sum: T::real(0.0),
            last_pos: 0.0,
            last_neg: 0.0,
            inv_sum: 0.0,
            inv_abs_sum: 0.0,
        };
        let mut k = 0;
        for (&b, &inv) in self.by_modulus.iter().zip(&self.reciprocals) {
            let m = b.abs();
            while k < radii.len() && m > radii[k] {
                snaps.push(cur);
                k += 1;
            }
            if k == radii.len() {
                break;
            }
            if b > 0.0 {
                cur.last_pos = b;
            } else {
                cur.last_neg = m;
            }
            cur.inv_sum += inv;
            cur.inv_abs_sum += inv.abs();
            if skip == Some(b) {
                continue;
            }
            let factor = T::real(1.0) - z.scale(inv);
            if pairing || b > 0.0 {
                cur.positive.mul(factor);
            } else {
                cur.negative.mul(factor);
            }
            if log_sum {
                cur.log_sum = cur.log_sum + T::real(1.0) / (z - T::real(b));
            }
        }
        while snaps.len() < radii.len() {
            snaps.push(cur);
        }
        snaps
    }

    fn tail_log(tail: Tail, z: Complex64, snap_pos: f64, snap_neg: f64) -> Option<Complex64> {
        match tail {
            Tail::None => None,
            Tail::Balanced { alpha, offset } => {
                let (a, b) = tail_anchors(alpha, offset, snap_pos, snap_neg);
                let zeta = z / alpha;
                let one = Complex64::new(1.0, 0.0);
                Some(
                    ln_gamma_ratio(one * (a + 1.0), -zeta + (a + 1.0))
                        + ln_gamma_ratio(one * (b + 1.0), zeta + (b + 1.0)),
                )
            }
        }
    }

    fn tail_log_derivative(tail: Tail, z: Complex64, snap_pos: f64, snap_neg: f64) -> Complex64 {
        match tail {
            Tail::None => Complex64::new(0.0, 0.0),
            Tail::Balanced { alpha, offset } => {
                let (a, b) = tail_anchors(alpha, offset, snap_pos, snap_neg);
                let zeta = z / alpha;
                (digamma(-zeta + (a + 1.0)) - digamma(zeta + (b + 1.0))) / alpha
            }
        }
    }

    fn stability_check(
        &self,
        snaps: &[Snapshot<impl Scalar>],
        z_mod: f64,
        r: f64,
        policy: &TruncationPolicy,
    ) -> Result<(), ProductError> {
        let n = snaps.len();
        if n < 2 || z_mod > r / 4.0 {
            return Ok(());
        }
        let block = snaps[n - 1].inv_sum - snaps[n - 2].inv_sum;
        let block_abs = snaps[n - 1].inv_abs_sum - snaps[n - 2].inv_abs_sum;
        let drift = z_mod * block.abs();
        if block_abs > 0.0 && drift > policy.stability_tol && block.abs() > policy.stability_tol * block_abs {
            return Err(ProductError::DivergentProduct(format!(
                "first-order drift {drift:.3e} over the last doubling exceeds {}",
                policy.stability_tol
            )));
        }
        Ok(())
    }

    fn value_from<T: Scalar>(&self, z: T, snap: &Snapshot<T>, tail: Tail) -> T {
        let prod = snap.positive.times(snap.negative);
        let log = Self::tail_log(tail, z.complex(), snap.last_pos, snap.last_neg);
        let v = prod.finish(log);
        if self.zeros.contains_zero() {
            v * z
        } else {
            v
        }
    }

    /// Deleted-product derivative at an included zero `b`.
    fn derivative_at_zero<T: Scalar>(&self, b: f64, snap: &Snapshot<T>, tail: Tail) -> T {
        let prod = snap.positive.times(snap.negative);
        let log = Self::tail_log(tail, Complex64::new(b, 0.0), snap.last_pos, snap.last_neg);
        let rest = prod.finish(log);
        if b == 0.0 {
            // h = z·∏(...), h'(0) = ∏(1 - 0) = 1 (times the tail at 0, also 1)
            return rest;
        }
        let lead = if self.zeros.contains_zero() { -1.0 } else { -1.0 / b };
        rest.scale(lead)
    }

    fn derivative_regular<T: Scalar>(&self, z: T, snap: &Snapshot<T>, tail: Tail) -> T {
        let h = self.value_from(z, snap, tail);
        let mut sum =
            snap.log_sum + T::from_complex(Self::tail_log_derivative(tail, z.complex(), snap.last_pos, snap.last_neg));
        if self.zeros.contains_zero() {
            sum = sum + T::real(1.0) / z;
        }
        h * sum
    }

    fn evaluate<T: Scalar>(
        &self,
        z: T,
        policy: &TruncationPolicy,
        with_estimate: bool,
    ) -> Result<Estimate<T>, ProductError> {
        policy.validate()?;
        let zc = z.complex();
        let r = self.effective_radius(policy);
        if self.snapped_zero(zc, r).is_some() {
            return Ok(Estimate { value: T::real(0.0), error_estimate: 0.0 });
        }
        if zc.re == 0.0 && zc.im == 0.0 && !self.zeros.contains_zero() {
            return Ok(Estimate { value: T::real(1.0), error_estimate: 0.0 });
        }
        let tail = self.tail(policy)?;
        let radii =
            if with_estimate || matches!(tail, Tail::None) { self.dyadic_radii(policy) } else { alloc::vec![r] };
        let snaps = self.accumulate(z, &radii, None, policy.pairing, false);
        if matches!(tail, Tail::None) {
            self.stability_check(&snaps, zc.norm(), r, policy)?;
        }
        let values: Vec<T> = snaps.iter().map(|s| self.value_from(z, s, tail)).collect();
        Ok(combine(&values, tail, policy))
    }

    fn evaluate_derivative<T: Scalar>(
        &self,
        z: T,
        policy: &TruncationPolicy,
        with_estimate: bool,
    ) -> Result<Estimate<T>, ProductError> {
        policy.validate()?;
        let zc = z.complex();
        let r = self.effective_radius(policy);
        let tail = self.tail(policy)?;
        let radii =
            if with_estimate || matches!(tail, Tail::None) { self.dyadic_radii(policy) } else { alloc::vec![r] };
        let values: Vec<T> = match self.snapped_zero(zc, r) {
            Some(b) => {
                let snaps = self.accumulate(T::real(b), &radii, Some(b), policy.pairing, false);
                if matches!(tail, Tail::None) {
                    self.stability_check(&snaps, b.abs(), r, policy)?;
                }
                snaps
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        // a coarser radius may not include b
                        if b.abs() <= radii[i] || b == 0.0 {
                            self.derivative_at_zero(b, s, tail)
                        } else {
                            let regular = self.accumulate(T::real(b), &radii[i..=i], None, policy.pairing, true);
                            self.derivative_regular(T::real(b), &regular[0], tail)
                        }
                    })
                    .collect()
            }
            None => {
                let snaps = self.accumulate(z, &radii, None, policy.pairing, true);
                if matches!(tail, Tail::None) {
                    self.stability_check(&snaps, zc.norm(), r, policy)?;
                }
                snaps.iter().map(|s| self.derivative_regular(z, s, tail)).collect()
            }
        };
        Ok(combine(&values, tail, policy))
    }

    /// `h(z)` with error estimate.
    pub fn eval(&self, z: Complex64, policy: &TruncationPolicy) -> Result<Estimate<Complex64>, ProductError> {
        self.evaluate(z, policy, true)
    }

    /// `h'(x)` at a real point with error estimate.
    pub fn derivative(&self, x: f64, policy: &TruncationPolicy) -> Result<Estimate<f64>, ProductError> {
        self.evaluate_derivative(x, policy, true)
    }

    /// `h(z)` at the policy radius only, no estimate.
    pub fn value(&self, z: Complex64, policy: &TruncationPolicy) -> Result<Complex64, ProductError> {
        self.evaluate(z, policy, false).map(|e| e.value)
    }

    /// `h'(z)` for complex `z`, no estimate.
    pub fn derivative_complex(&self, z: Complex64, policy: &TruncationPolicy) -> Result<Complex64, ProductError> {
        self.evaluate_derivative(z, policy, false).map(|e| e.value)
    }

    /// Real fast path for `h(x)`.
    pub fn value_real(&self, x: f64, policy: &TruncationPolicy) -> Result<f64, ProductError> {
        self.evaluate(x, policy, false).map(|e| e.value)
    }

    /// Real fast path for `h'(x)`.
    pub fn derivative_real(&self, x: f64, policy: &TruncationPolicy) -> Result<f64, ProductError> {
        self.evaluate_derivative(x, policy, false).map(|e| e.value)
    }
}

fn tail_anchors(alpha: f64, offset: f64, last_pos: f64, last_neg: f64) -> (f64, f64) {
    // no stored point on a side: the model's own rank-0 position
    let p = if last_pos > 0.0 { last_pos } else { offset.max(0.0) };
    let q = if last_neg > 0.0 { last_neg } else { offset.max(0.0) };
    (p / alpha, q / alpha)
}

fn combine<T: Scalar>(values: &[T], tail: Tail, policy: &TruncationPolicy) -> Estimate<T> {
    let n = values.len();
    let last = values[n - 1];
    if n == 1 {
        return Estimate { value: last, error_estimate: 0.0 };
    }
    let diff = (last - values[n - 2]).modulus();
    if matches!(tail, Tail::None) && policy.richardson_levels > 0 {
        let c: Vec<Complex64> = values.iter().map(|v| v.complex()).collect();
        if let Some((best, prev)) = crate::series::richardson(&c) {
            return Estimate { value: T::from_complex(best), error_estimate: (best - prev).norm() };
        }
    }
    Estimate { value: last, error_estimate: diff }
}

/// `h(z)` with error estimate.
pub fn eval_product(
    p: &CanonicalProduct,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<Estimate<Complex64>, ProductError> {
    p.eval(z, policy)
}

/// `h'(x)` with error estimate; at a stored zero the deleted product is used.
pub fn eval_derivative(p: &CanonicalProduct, x: f64, policy: &TruncationPolicy) -> Result<Estimate<f64>, ProductError> {
    p.derivative(x, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{SpectrumSequence, TailModel};
    use core::f64::consts::PI;

    fn integers(n: i64, with_zero: bool) -> CanonicalProduct {
        let pts: Vec<f64> = (-n..=n).filter(|&k| with_zero || k != 0).map(|k| k as f64).collect();
        CanonicalProduct::new(SpectrumSequence::new(pts, Some(TailModel::symmetric(1.0, 0.0).unwrap())).unwrap())
    }

    fn half_integers(n: i64) -> CanonicalProduct {
        let pts: Vec<f64> = (-n..n).map(|k| k as f64 + 0.5).collect();
        CanonicalProduct::new(SpectrumSequence::new(pts, Some(TailModel::symmetric(1.0, -0.5).unwrap())).unwrap())
    }

    fn policy() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn sine_product_at_half() {
        let v = integers(10_000, false).eval(Complex64::new(0.5, 0.0), &policy()).unwrap();
        assert!((v.value.re - 2.0 / PI).abs() < 1e-9, "{}", v.value);
        let v = integers(10_000, true).eval(Complex64::new(0.5, 0.0), &policy()).unwrap();
        assert!((v.value.re - 1.0 / PI).abs() < 1e-9);
    }

    #[test]
    fn value_at_origin_is_exactly_one() {
        let p = half_integers(50);
        let v = p.eval(Complex64::new(0.0, 0.0), &policy()).unwrap();
        assert_eq!(v.value, Complex64::new(1.0, 0.0));
        assert_eq!(v.error_estimate, 0.0);
        let odd = CanonicalProduct::new(SpectrumSequence::new(alloc::vec![0.3, 7.0], None).unwrap());
        assert_eq!(odd.value_real(0.0, &policy().without_tail_correction()).unwrap(), 1.0);
    }

    #[test]
    fn zeros_evaluate_to_zero() {
        let p = half_integers(100);
        for &b in p.zeros().points().iter().step_by(7) {
            let v = p.eval(Complex64::new(b, 0.0), &policy()).unwrap();
            assert!(v.value.norm() <= v.error_estimate);
            assert_eq!(v.value.norm(), 0.0);
        }
        // snapping
        let v = p.value_real(2.5 + 1e-14, &policy()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn derivative_examples() {
        let cos = half_integers(5_000);
        assert!(cos.derivative(0.0, &policy()).unwrap().value.abs() < 1e-12);
        let d = cos.derivative(0.5, &policy()).unwrap().value;
        assert!((d + PI).abs() < 1e-8, "{d}");

        let sinc = integers(5_000, false);
        let d = sinc.derivative(0.5, &policy()).unwrap().value;
        assert!((d + 4.0 / PI).abs() < 1e-8, "{d}");

        // with the z prefactor: h = sin(πz)/π, h'(0) = 1, h'(3) = cos(3π) = -1
        let sin = integers(5_000, true);
        assert_eq!(sin.derivative(0.0, &policy()).unwrap().value, 1.0);
        assert!((sin.derivative(3.0, &policy()).unwrap().value + 1.0).abs() < 1e-8);
    }

    #[test]
    fn conjugate_points_give_conjugate_values() {
        let p = half_integers(500);
        let z = Complex64::new(1.3, 0.7);
        let a = p.value(z, &policy()).unwrap();
        let b = p.value(z.conj(), &policy()).unwrap();
        assert!((a - b.conj()).norm() < 1e-13 * a.norm());
    }

    #[test]
    fn no_overflow_far_from_origin() {
        // |h(x)| = |cos(πx)| stays O(1) even though partial products do not
        let p = half_integers(20_000);
        let x = 15_000.25;
        let v = p.value_real(x, &policy()).unwrap();
        assert!((v - (PI * x).cos()).abs() < 1e-6, "{v}");
    }

    #[test]
    fn unbalanced_tail_is_divergent() {
        let pts: Vec<f64> = (1..200).map(|k| k as f64).chain((1..100).map(|k| -2.0 * k as f64)).collect();
        let s =
            SpectrumSequence::new(pts.clone(), Some(TailModel::affine(Some(1.0), Some(2.0), 0.0).unwrap())).unwrap();
        let r = CanonicalProduct::new(s).value_real(0.5, &policy());
        assert!(matches!(r, Err(ProductError::DivergentProduct(_))));

        let one_sided: Vec<f64> = (1..400).map(|k| k as f64).collect();
        let s = SpectrumSequence::new(one_sided, None).unwrap();
        let r = CanonicalProduct::new(s).value_real(2.5, &policy());
        assert!(matches!(r, Err(ProductError::DivergentProduct(_))), "{r:?}");
    }

    #[test]
    fn richardson_improves_plain_truncation() {
        let pts: Vec<f64> = (-2000..=2000).filter(|&k| k != 0).map(|k| k as f64).collect();
        let p = CanonicalProduct::new(SpectrumSequence::new(pts, None).unwrap());
        let plain = TruncationPolicy { tail_correction: false, ..policy() };
        let rich = TruncationPolicy { richardson_levels: 3, ..plain };
        let z = Complex64::new(1.5, 0.0);
        let exact = (PI * 1.5).sin() / (PI * 1.5);
        let e0 = (p.eval(z, &plain).unwrap().value.re - exact).abs();
        let e3 = (p.eval(z, &rich).unwrap().value.re - exact).abs();
        assert!(e3 < e0 / 10.0, "{e0} {e3}");
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy { radius: 0.0, ..policy() }.validate().is_err());
        assert!(TruncationPolicy { richardson_levels: 5, ..policy() }.validate().is_err());
        assert!(policy().validate().is_ok());
    }
}
