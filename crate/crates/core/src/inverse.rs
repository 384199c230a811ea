//! Hermite–Biehler function from two interlaced spectra.
//!
//! With canonical products `h₁` (zeros `seq1`) and `h₂` (zeros `seq2`),
//! `e = −h₁ − iσh₂` where `σ = ±1` is chosen so the phase increases:
//! on the real axis `φ' = −σ·W/|e|²` with `W = h₂'h₁ − h₂h₁'`, and `W`
//! keeps one sign for interlaced zeros. Then `a = −h₁`, `b = σh₂`, so
//! `s_{π/2}` vanishes on `seq1` and `s_0` on `seq2`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::conditions::{ConditionVerdict, Status};
use crate::dbspace::{
    find_spectrum, DbError, EntireEvaluable, EntireFunction, HbGrid, HbReport, HermiteBiehlerFunction, Kind,
};
use crate::products::{CanonicalProduct, ProductError, TruncationPolicy};
use crate::spectra::{check_c0, check_interlacing, split_signed, Extent, SpectraError, SpectrumSequence};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InverseError {
    #[error("sequences are not interlaced")]
    NotInterlaced,
    #[error("C0 violated: the semibounded sequences are in the wrong order")]
    C0Violated,
    #[error("constructed function failed the Hermite–Biehler grid check")]
    HbGridViolation(HbReport),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error(transparent)]
    Root(#[from] DbError),
}

/// `−h₁ − iσh₂` evaluated through the product module.
struct ProductPair {
    h1: CanonicalProduct,
    h2: CanonicalProduct,
    sigma: f64,
    policy: TruncationPolicy,
}

fn nan() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

impl EntireFunction for ProductPair {
    fn eval(&self, z: Complex64) -> Complex64 {
        match (self.h1.value(z, &self.policy), self.h2.value(z, &self.policy)) {
            (Ok(a), Ok(b)) => -a - Complex64::i() * self.sigma * b,
            _ => nan(),
        }
    }

    fn derivative(&self, z: Complex64) -> Option<Complex64> {
        match (self.h1.derivative_complex(z, &self.policy), self.h2.derivative_complex(z, &self.policy)) {
            (Ok(a), Ok(b)) => Some(-a - Complex64::i() * self.sigma * b),
            _ => Some(nan()),
        }
    }

    fn eval_real(&self, x: f64) -> Complex64 {
        match (self.h1.value_real(x, &self.policy), self.h2.value_real(x, &self.policy)) {
            (Ok(a), Ok(b)) => Complex64::new(-a, -self.sigma * b),
            _ => nan(),
        }
    }

    fn derivative_real(&self, x: f64) -> Option<Complex64> {
        match (self.h1.derivative_real(x, &self.policy), self.h2.derivative_real(x, &self.policy)) {
            (Ok(a), Ok(b)) => Some(Complex64::new(-a, -self.sigma * b)),
            _ => Some(nan()),
        }
    }

    fn kind(&self) -> Kind {
        Kind::ProductBacked
    }

    fn describe(&self) -> &str {
        "-h1 - i sigma h2"
    }
}

/// Per-sequence recovery of the input points from the constructed `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundtripReport {
    /// Largest `|recovered − input|` over interior points of `seq1`.
    pub max_deviation_seq1: f64,
    pub max_deviation_seq2: f64,
    pub checked_seq1: usize,
    pub checked_seq2: usize,
    /// Interior input points with no recovered root, or extra roots.
    pub count_mismatch: usize,
    pub tol: f64,
    /// `max deviation < tol` and no count mismatch.
    pub pass: bool,
}

impl RoundtripReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_deviation_seq1.max(self.max_deviation_seq2)
    }
}

#[derive(Debug, Clone)]
pub struct InverseResult {
    pub e: HermiteBiehlerFunction,
    pub seq1: SpectrumSequence,
    pub seq2: SpectrumSequence,
    pub sigma: f64,
    pub policy: TruncationPolicy,
    pub c0: ConditionVerdict,
    pub hb_report: HbReport,
    pub roundtrip: Option<RoundtripReport>,
}

impl InverseResult {
    /// `h₁(z)`, `h₂(z)` as used inside `e`.
    pub fn products(&self) -> (CanonicalProduct, CanonicalProduct) {
        (CanonicalProduct::new(self.seq1.clone()), CanonicalProduct::new(self.seq2.clone()))
    }

    /// Run [`roundtrip_verify`] and keep the report.
    pub fn verify_roundtrip(&mut self, tol: f64) -> Result<&RoundtripReport, InverseError> {
        let report = roundtrip_verify(self, tol)?;
        Ok(self.roundtrip.insert(report))
    }
}

/// Orientation `σ = −sign W` at the zero of `h₂` nearest the origin.
fn orientation(h1: &CanonicalProduct, h2: &CanonicalProduct, policy: &TruncationPolicy) -> Result<f64, ProductError> {
    let x = h2.zeros().points().iter().copied().min_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap_or(0.0);
    // h₂(x) = 0, so W = h₂'(x)·h₁(x)
    let w = h2.derivative_real(x, policy)? * h1.value_real(x, policy)?;
    Ok(if w > 0.0 { -1.0 } else { 1.0 })
}

/// Build `e` from interlaced spectra and check it on the default grid.
pub fn construct_e(
    seq1: &SpectrumSequence,
    seq2: &SpectrumSequence,
    policy: &TruncationPolicy,
) -> Result<InverseResult, InverseError> {
    construct_e_on(seq1, seq2, policy, &HbGrid::default())
}

/// [`construct_e`] with an explicit verification grid.
pub fn construct_e_on(
    seq1: &SpectrumSequence,
    seq2: &SpectrumSequence,
    policy: &TruncationPolicy,
    grid: &HbGrid,
) -> Result<InverseResult, InverseError> {
    policy.validate()?;
    let inter = check_interlacing(seq1, seq2);
    if !inter.interlaced {
        return Err(InverseError::NotInterlaced);
    }
    let c0 = check_c0(seq1, seq2)?;
    if c0.status == Status::Violated {
        return Err(InverseError::C0Violated);
    }
    let h1 = CanonicalProduct::new(seq1.clone());
    let h2 = CanonicalProduct::new(seq2.clone());
    // surfaces divergent products before they turn into NaN samples
    h1.value_real(0.0, policy)?;
    h2.value_real(0.0, policy)?;
    let sigma = orientation(&h1, &h2, policy)?;
    let pair = ProductPair { h1, h2, sigma, policy: *policy };
    let (e, hb_report) = HermiteBiehlerFunction::new(EntireEvaluable::new(pair)).verified(grid);
    if !hb_report.verified {
        return Err(InverseError::HbGridViolation(hb_report));
    }
    Ok(InverseResult {
        e,
        seq1: seq1.clone(),
        seq2: seq2.clone(),
        sigma,
        policy: *policy,
        c0,
        hb_report,
        roundtrip: None,
    })
}

/// Interior of the points actually used by the product: the outer 10% of
/// each unbounded side is dropped.
fn interior(seq: &SpectrumSequence, radius: f64) -> Vec<f64> {
    let split = split_signed(seq);
    let unbounded = |pos: bool| match seq.extent() {
        Extent::Unknown | Extent::TwoSided => true,
        Extent::BoundedBelow => pos,
        Extent::BoundedAbove => !pos,
    };
    let keep = |side: &[f64], pos: bool| -> Vec<f64> {
        let used: Vec<f64> = side.iter().copied().filter(|x| x.abs() <= radius).collect();
        let drop = if unbounded(pos) { used.len().div_ceil(10) } else { 0 };
        used[..used.len() - drop].to_vec()
    };
    let mut out = keep(&split.negatives, false);
    out.reverse();
    if seq.contains_zero() {
        out.push(0.0);
    }
    out.extend(keep(&split.positives, true));
    out
}

fn recover(e: &HermiteBiehlerFunction, beta: f64, points: &[f64]) -> Result<(f64, usize), InverseError> {
    if points.is_empty() {
        return Ok((0.0, 0));
    }
    let (first, last) = (points[0], points[points.len() - 1]);
    let gap_lo = points.get(1).map_or(0.5, |p| 0.5 * (p - first));
    let gap_hi = points.len().checked_sub(2).map_or(0.5, |k| 0.5 * (last - points[k]));
    let found = find_spectrum(e, beta, first - gap_lo, last + gap_hi)?;
    let mut mismatch = found.len().abs_diff(points.len());
    let mut max_dev: f64 = 0.0;
    for &p in points {
        let f = found.points();
        let i = f.partition_point(|&r| r < p);
        let d = [i.wrapping_sub(1), i]
            .iter()
            .filter_map(|&k| f.get(k))
            .map(|r| (r - p).abs())
            .fold(f64::INFINITY, f64::min);
        if !d.is_finite() {
            mismatch += 1;
        } else {
            max_dev = max_dev.max(d);
        }
    }
    Ok((max_dev, mismatch))
}

/// Root-find `s_{π/2}` and `s_0` of the constructed `e` over the window
/// interiors and compare with the inputs.
pub fn roundtrip_verify(r: &InverseResult, tol: f64) -> Result<RoundtripReport, InverseError> {
    let (h1, h2) = r.products();
    let p1 = interior(&r.seq1, h1.effective_radius(&r.policy));
    let p2 = interior(&r.seq2, h2.effective_radius(&r.policy));
    let (d1, m1) = recover(&r.e, PI / 2.0, &p1)?;
    let (d2, m2) = recover(&r.e, 0.0, &p2)?;
    let count_mismatch = m1 + m2;
    Ok(RoundtripReport {
        max_deviation_seq1: d1,
        max_deviation_seq2: d2,
        checked_seq1: p1.len(),
        checked_seq2: p2.len(),
        count_mismatch,
        tol,
        pass: count_mismatch == 0 && d1.max(d2) < tol,
    })
}
