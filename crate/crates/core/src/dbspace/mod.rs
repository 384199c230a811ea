//! De Branges space machinery around an explicit Hermite–Biehler function
//! `e = a − ib`.
//!
//! Structure functions `s_β = (i/2)[e^{iβ}e − e^{−iβ}e#] = −a sin β + b cos β`
//! are real entire; on the real axis `s_β(x) = |e(x)| sin(φ(x) − β)` where
//! `φ` is the phase. The reproducing kernel is
//! `k(z,w) = [e#(z)e(w̄) − e(z)e#(w̄)] / (2πi(z − w̄))`.

mod evaluable;
mod spectral;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

pub use evaluable::{AtanModel, EntireEvaluable, EntireFunction, ExpLinear, Kind, Polynomial};
pub use spectral::{
    discrete_inner, eigenfunction, eigenfunction_section, find_spectrum, find_spectrum_hinted, kernel_section,
    measure_at, phase, spectral_measure, spectral_measure_of, spectral_weight, spectral_weight_checked, InnerProduct,
    SpectralData, WeightCheck,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DbError {
    #[error("{0} is not a zero of the structure function")]
    NotAZero(f64),
    #[error("non-positive spectral weight {weight} at {x}")]
    NonPositiveWeight { x: f64, weight: f64 },
    #[error("phase increments cannot be bounded near {0} (suspected real zero)")]
    PhaseJump(f64),
    #[error("sign changes near {0} cannot be separated")]
    UnresolvedCluster(f64),
    #[error("rotation angle {0} outside (0, π)")]
    GammaOutOfRange(f64),
    #[error("function failed the Hermite–Biehler check")]
    NotHermiteBiehler,
    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbStatus {
    Unchecked,
    GridVerified,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealZeroFree {
    Unknown,
    Asserted,
    GridVerified,
}

#[derive(Debug, Clone)]
pub struct HermiteBiehlerFunction {
    e: EntireEvaluable,
    hb_verified: HbStatus,
    e_at_zero: Complex64,
    real_zero_free: RealZeroFree,
}

impl HermiteBiehlerFunction {
    pub fn new(e: EntireEvaluable) -> Self {
        let e_at_zero = e.eval(Complex64::new(0.0, 0.0));
        Self { e, hb_verified: HbStatus::Unchecked, e_at_zero, real_zero_free: RealZeroFree::Unknown }
    }

    /// Record that `e` has no real zeros without checking.
    pub fn assert_real_zero_free(mut self) -> Self {
        if self.real_zero_free == RealZeroFree::Unknown {
            self.real_zero_free = RealZeroFree::Asserted;
        }
        self
    }

    pub fn evaluable(&self) -> &EntireEvaluable {
        &self.e
    }

    pub fn hb_status(&self) -> HbStatus {
        self.hb_verified
    }

    pub fn real_zero_free(&self) -> RealZeroFree {
        self.real_zero_free
    }

    pub fn e_at_zero(&self) -> Complex64 {
        self.e_at_zero
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.e.eval(z)
    }

    pub fn sharp(&self, z: Complex64) -> Complex64 {
        self.e.sharp(z)
    }

    /// `a = (e + e#)/2`.
    pub fn a(&self, z: Complex64) -> Complex64 {
        (self.e.eval(z) + self.e.sharp(z)) * 0.5
    }

    /// `b = i(e − e#)/2`.
    pub fn b(&self, z: Complex64) -> Complex64 {
        Complex64::i() * (self.e.eval(z) - self.e.sharp(z)) * 0.5
    }

    pub fn structure(&self) -> StructureSet {
        let (ea, eb) = (self.e.clone(), self.e.clone());
        StructureSet {
            a: EntireEvaluable::from_fn(Kind::ArithmeticCombination, move |z| (ea.eval(z) + ea.sharp(z)) * 0.5),
            b: EntireEvaluable::from_fn(Kind::ArithmeticCombination, move |z| {
                Complex64::i() * (eb.eval(z) - eb.sharp(z)) * 0.5
            }),
        }
    }

    /// Check on `grid` and record the outcome.
    pub fn verify(&mut self, grid: &HbGrid) -> HbReport {
        let report = verify_hb(&self.e, grid);
        self.hb_verified = if report.verified { HbStatus::GridVerified } else { HbStatus::Violated };
        if report.real_zero.is_none() && report.real_samples > 0 {
            self.real_zero_free = RealZeroFree::GridVerified;
        }
        report
    }

    /// Builder form of [`verify`](Self::verify).
    pub fn verified(mut self, grid: &HbGrid) -> (Self, HbReport) {
        let r = self.verify(grid);
        (self, r)
    }
}

/// Real entire parts of `e = a − ib`.
#[derive(Debug, Clone)]
pub struct StructureSet {
    pub a: EntireEvaluable,
    pub b: EntireEvaluable,
}

/// `s_β(z)`. Any real `β` is accepted; `s_{β+π} = −s_β`.
pub fn s_beta(e: &HermiteBiehlerFunction, beta: f64, z: Complex64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, beta);
    Complex64::i() * 0.5 * (rot * e.eval(z) - rot.conj() * e.sharp(z))
}

/// `s_β(x) = −Im(e^{iβ}e(x))` on the real axis, exactly real.
pub fn s_beta_real(e: &HermiteBiehlerFunction, beta: f64, x: f64) -> f64 {
    -(Complex64::from_polar(1.0, beta) * e.e.eval_real(x)).im
}

/// `s'_β(z)`.
pub fn s_beta_derivative(e: &HermiteBiehlerFunction, beta: f64, z: Complex64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, beta);
    Complex64::i() * 0.5 * (rot * e.e.derivative(z) - rot.conj() * e.e.sharp_derivative(z))
}

/// `s'_β(x) = −Im(e^{iβ}e'(x))`.
pub fn s_beta_derivative_real(e: &HermiteBiehlerFunction, beta: f64, x: f64) -> f64 {
    -(Complex64::from_polar(1.0, beta) * e.e.derivative_real(x)).im
}

/// Relative distance below which `z` and `w̄` are treated as equal.
const DIAGONAL_SNAP: f64 = 1e-9;

/// Reproducing kernel `k(z, w)`. On the diagonal `z = w̄` the continuous
/// limit `[e#'(w̄)e(w̄) − e'(w̄)e#(w̄)]/(2πi)` is used.
pub fn kernel(e: &HermiteBiehlerFunction, z: Complex64, w: Complex64) -> Complex64 {
    let wb = w.conj();
    let d = z - wb;
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    if d.norm() <= DIAGONAL_SNAP * z.norm().max(1.0) {
        let ev = &e.e;
        let num = ev.sharp_derivative(wb) * ev.eval(wb) - ev.derivative(wb) * ev.sharp(wb);
        return num / two_pi_i;
    }
    let num = e.sharp(z) * e.eval(wb) - e.eval(z) * e.sharp(wb);
    num / (two_pi_i * d)
}

/// Sampling grid for the Hermite–Biehler check: an `nx × ny` rectangle in
/// the closed upper half-plane plus `real_samples` points on the real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HbGrid {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub real_samples: usize,
}

impl Default for HbGrid {
    fn default() -> Self {
        Self { x_range: (-10.0, 10.0), y_range: (0.0, 5.0), nx: 41, ny: 21, real_samples: 201 }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| if n == 1 { lo } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
}

impl HbGrid {
    pub fn validate(&self) -> Result<(), DbError> {
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) || x0 > x1 || y0 > y1 {
            return Err(DbError::InvalidInput("grid ranges must be finite and ordered"));
        }
        if y0 < 0.0 {
            return Err(DbError::InvalidInput("grid must lie in the closed upper half-plane"));
        }
        if self.nx * self.ny + self.real_samples == 0 {
            return Err(DbError::InvalidInput("empty grid"));
        }
        Ok(())
    }

    pub fn plane_points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for y in linspace(self.y_range.0, self.y_range.1, self.ny) {
            for x in linspace(self.x_range.0, self.x_range.1, self.nx) {
                out.push(Complex64::new(x, y));
            }
        }
        out
    }

    pub fn real_points(&self) -> Vec<f64> {
        linspace(self.x_range.0, self.x_range.1, self.real_samples).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HbReport {
    pub verified: bool,
    /// First strictly-upper sample with `|e| ≤ |e#|`.
    pub witness: Option<Complex64>,
    /// First real sample where `e` vanishes (relative to the largest sample).
    pub real_zero: Option<f64>,
    /// Smallest `(|e| − |e#|)/|e|` over strictly-upper samples.
    pub min_margin: f64,
    pub upper_samples: usize,
    pub real_samples: usize,
}

/// Grid check of `|e(z)| > |e#(z)|` for `Im z > 0` and `e(x) ≠ 0` on the
/// real samples. A status, not a proof.
pub fn verify_hb(e: &EntireEvaluable, grid: &HbGrid) -> HbReport {
    let mut report = HbReport {
        verified: grid.validate().is_ok(),
        witness: None,
        real_zero: None,
        min_margin: f64::INFINITY,
        upper_samples: 0,
        real_samples: 0,
    };
    if !report.verified {
        return report;
    }
    for z in grid.plane_points().into_iter().filter(|z| z.im > 0.0) {
        report.upper_samples += 1;
        let (m, ms) = (e.eval(z).norm(), e.sharp(z).norm());
        let margin = if m > 0.0 { (m - ms) / m } else { f64::NEG_INFINITY };
        report.min_margin = report.min_margin.min(margin);
        if !(m > ms) && report.witness.is_none() {
            report.witness = Some(z);
        }
    }
    let reals = grid.real_points();
    let values: Vec<f64> = reals.iter().map(|&x| e.eval(Complex64::new(x, 0.0)).norm()).collect();
    let scale = values.iter().copied().fold(0.0, f64::max);
    report.real_samples = reals.len();
    report.real_zero =
        reals.iter().zip(&values).find(|(_, &v)| !(v > 1e-13 * scale) || !v.is_finite()).map(|(&x, _)| x);
    report.verified = report.witness.is_none() && report.real_zero.is_none();
    report
}

/// Constants of `ĕ = c1·e·(1 − c2·e#/e)` for the rotation by `γ`.
fn rotation_constants(gamma: f64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let c1 = (one - Complex64::from_polar(1.0, gamma + PI / 2.0)) * 0.5;
    let c1_sharp = (one - Complex64::from_polar(1.0, -(gamma - PI / 2.0))) * 0.5;
    (c1, c1_sharp / c1)
}

/// Bounds on `|ĕ/e|` in the closed upper half-plane implied by
/// `|e#/e| ≤ 1` there: `[|c1|(1 − |c2|), |c1|(1 + |c2|)]`.
pub fn rotation_bounds(gamma: f64) -> Result<(f64, f64), DbError> {
    if !(gamma > 0.0 && gamma < PI) {
        return Err(DbError::GammaOutOfRange(gamma));
    }
    let (c1, c2) = rotation_constants(gamma);
    Ok((c1.norm() * (1.0 - c2.norm()), c1.norm() * (1.0 + c2.norm())))
}

/// `ĕ = −s_γ − i s_0`, whose structure functions are `s̆_0 = s_0` and
/// `s̆_{π/2} = s_γ`.
pub fn rotate(e: &HermiteBiehlerFunction, gamma: f64) -> Result<HermiteBiehlerFunction, DbError> {
    if !(gamma > 0.0 && gamma < PI) {
        return Err(DbError::GammaOutOfRange(gamma));
    }
    if e.hb_verified == HbStatus::Violated {
        return Err(DbError::NotHermiteBiehler);
    }
    let (f, d) = (e.clone(), e.clone());
    let rotated = if e.e.has_analytic_derivative() {
        EntireEvaluable::from_fn_with_derivative(
            Kind::ArithmeticCombination,
            move |z| -s_beta(&f, gamma, z) - Complex64::i() * s_beta(&f, 0.0, z),
            move |z| -s_beta_derivative(&d, gamma, z) - Complex64::i() * s_beta_derivative(&d, 0.0, z),
        )
    } else {
        EntireEvaluable::from_fn(Kind::ArithmeticCombination, move |z| {
            -s_beta(&f, gamma, z) - Complex64::i() * s_beta(&f, 0.0, z)
        })
    };
    let mut out = HermiteBiehlerFunction::new(rotated);
    out.real_zero_free = e.real_zero_free;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pw() -> HermiteBiehlerFunction {
        HermiteBiehlerFunction::new(EntireEvaluable::new(ExpLinear { a: PI }))
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn s_beta_examples() {
        let e = pw();
        assert!((s_beta(&e, 0.0, c(0.5, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((s_beta(&e, PI / 2.0, c(0.0, 0.0)) - c(-1.0, 0.0)).norm() < 1e-15);
        for x in [-2.3, 0.1, 4.0] {
            assert!(s_beta(&e, 0.0, c(x, 0.0)).im.abs() < 1e-15);
            assert_eq!(s_beta(&e, 0.7, c(x, 0.0)).re, s_beta_real(&e, 0.7, x));
        }
    }

    #[test]
    fn structure_functions_match_s_beta() {
        let e = HermiteBiehlerFunction::new(EntireEvaluable::new(AtanModel));
        let st = e.structure();
        for z in [c(0.3, 0.0), c(-1.2, 0.5), c(4.0, 2.0)] {
            assert!((st.a.eval(z) + s_beta(&e, PI / 2.0, z)).norm() < 1e-12);
            assert!((st.b.eval(z) - s_beta(&e, 0.0, z)).norm() < 1e-12);
            assert!((e.a(z) - Complex64::i() * e.b(z) - e.eval(z)).norm() < 1e-12);
        }
        // a, b real on the real axis
        assert!(st.a.eval(c(1.7, 0.0)).im.abs() < 1e-15);
    }

    #[test]
    fn kernel_examples() {
        let e = pw();
        let k = kernel(&e, c(0.3, 0.0), c(0.3, 0.0));
        assert!((k - c(1.0, 0.0)).norm() < 1e-14, "{k}");
        let k = kernel(&e, Complex64::i(), Complex64::i());
        let expected = (2.0 * PI).sinh() / (2.0 * PI);
        assert!((k.re - expected).abs() < 1e-12 * expected && k.im.abs() < 1e-12 * expected);
        let (z, w) = (c(0.2, 0.1), c(-0.4, 0.3));
        assert!((kernel(&e, z, w) - kernel(&e, w, z).conj()).norm() < 1e-14);
        // sinc form
        let d = z - w.conj();
        let sinc = (d * PI).sin() / (d * PI);
        assert!((kernel(&e, z, w) - sinc).norm() < 1e-14);
    }

    #[test]
    fn hb_verification_examples() {
        let grid = HbGrid::default();
        assert!(verify_hb(&EntireEvaluable::new(ExpLinear { a: PI }), &grid).verified);
        let zi = Polynomial { coeffs: vec![Complex64::i(), c(1.0, 0.0)] };
        assert!(verify_hb(&EntireEvaluable::new(zi), &grid).verified);
        let bad = verify_hb(&EntireEvaluable::new(ExpLinear { a: -PI }), &grid);
        assert!(!bad.verified);
        assert!(bad.witness.unwrap().im > 0.0);

        let mut e = pw();
        assert_eq!(e.hb_status(), HbStatus::Unchecked);
        e.verify(&grid);
        assert_eq!(e.hb_status(), HbStatus::GridVerified);
        assert_eq!(e.real_zero_free(), RealZeroFree::GridVerified);
    }

    #[test]
    fn real_zero_is_reported() {
        // e = z + i shifted to vanish at x = 1: z − 1 has a real zero
        let p = Polynomial { coeffs: vec![c(-1.0, 0.0), c(1.0, 0.0)] };
        let r = verify_hb(&EntireEvaluable::new(p), &HbGrid::default());
        assert_eq!(r.real_zero, Some(1.0));
        assert!(!r.verified);
    }

    #[test]
    fn rotation_identity_and_bounds() {
        let e = pw();
        let same = rotate(&e, PI / 2.0).unwrap();
        for z in [c(0.3, 0.2), c(-2.0, 1.0)] {
            assert!((same.eval(z) - e.eval(z)).norm() < 1e-13 * e.eval(z).norm());
        }
        let g = PI / 4.0;
        let r = rotate(&e, g).unwrap();
        for x in [-3.3, 0.0, 1.25, 7.0] {
            let z = c(x, 0.0);
            assert!((s_beta(&r, 0.0, z) - s_beta(&e, 0.0, z)).norm() < 1e-12);
            assert!((s_beta(&r, PI / 2.0, z) - s_beta(&e, g, z)).norm() < 1e-12);
        }
        let (lo, hi) = rotation_bounds(g).unwrap();
        assert!(lo > 0.0);
        for z in HbGrid::default().plane_points() {
            let q = (r.eval(z) / e.eval(z)).norm();
            assert!(q >= lo * (1.0 - 1e-12) && q <= hi * (1.0 + 1e-12), "{z} {q}");
        }
        assert!(verify_hb(r.evaluable(), &HbGrid::default()).verified);
        assert_eq!(rotate(&e, 0.0).unwrap_err(), DbError::GammaOutOfRange(0.0));
        assert!(rotate(&e, PI).is_err());
    }
}
