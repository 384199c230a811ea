//! Registry of fixtures with closed forms, known spectra and expected
//! classifications.
//!
//! | name | `e` | pair `(seq0, seq_gamma)` | expected |
//! |---|---|---|---|
//! | `paley_wiener` | `e^{−iaz}` | `(πℤ/a, π(ℤ+½)/a)` | generalized only |
//! | `atan_family` | `e^{−iz}(z+i)` | `(x tan x = 1, tan x = −x)` | entire |
//! | `lattice_pair` | `e^{−iπz}` | `(ℤ, ℤ+½)` | generalized only |
//! | `density_mismatch` | none | seq_gamma `{n} ∪ {−2n}` | not generalized |
//! | `semibounded_harmonic` | none | seq_gamma `{n ≥ 1}` | not generalized |
//! | `offset_lattice` | none | seq_gamma `{n} ∪ {−(n+½)}` | n/a |

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::conditions::Overall;
use crate::dbspace::{AtanModel, EntireEvaluable, ExpLinear, HermiteBiehlerFunction};
use crate::spectra::{SpectrumSequence, TailModel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unknown model {0:?}")]
    UnknownModel(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

pub const MODEL_NAMES: [&str; 6] =
    ["paley_wiener", "atan_family", "lattice_pair", "density_mismatch", "semibounded_harmonic", "offset_lattice"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Family {
    PaleyWiener { a: f64 },
    Atan,
    LatticePair,
    DensityMismatch,
    SemiboundedHarmonic,
    OffsetLattice,
}

#[derive(Debug, Clone)]
pub struct ModelDescriptor {
    pub name: &'static str,
    /// Resolved parameters, including defaults.
    pub params: Vec<(String, f64)>,
    /// Closed-form Hermite–Biehler function, when the model has one.
    pub e: Option<HermiteBiehlerFunction>,
    /// `None` when no classification is claimed.
    pub expected: Option<Overall>,
    /// Points per side in generated windows.
    pub per_side: usize,
    family: Family,
}

fn seq(points: Vec<f64>, tail: TailModel, label: &str) -> SpectrumSequence {
    SpectrumSequence::new(points, Some(tail)).expect("fixture points are distinct").with_label(label)
}

fn symmetric_tail(alpha: f64, offset: f64) -> TailModel {
    TailModel::symmetric(alpha, offset).expect("fixture tail slopes are positive")
}

/// Root of `f` in `[lo, hi]` given a sign change, by bisection to `1e−14`
/// relative or until the midpoint stops moving.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-14 * mid.abs().max(1.0) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Positive roots of `x cos x + sin x` (tan x = −x), one in each
/// `((n − ½)π, nπ)`.
pub fn atan_gamma_roots(count: usize) -> Vec<f64> {
    (1..=count)
        .map(|n| {
            let n = n as f64;
            bisect(|x| x * x.cos() + x.sin(), (n - 0.5) * PI, n * PI)
        })
        .collect()
}

/// Positive roots of `x sin x − cos x` (x tan x = 1), one in each
/// `((n − 1)π, (n − ½)π)`.
pub fn atan_zero_roots(count: usize) -> Vec<f64> {
    (1..=count)
        .map(|n| {
            let n = n as f64;
            bisect(|x| x * x.sin() - x.cos(), (n - 1.0) * PI, (n - 0.5) * PI)
        })
        .collect()
}

fn mirrored(pos: &[f64], with_zero: bool) -> Vec<f64> {
    let mut out: Vec<f64> = pos.iter().rev().map(|x| -x).collect();
    if with_zero {
        out.push(0.0);
    }
    out.extend_from_slice(pos);
    out
}

fn param(params: &[(&str, f64)], key: &str) -> Option<f64> {
    params.iter().rev().find(|(k, _)| *k == key).map(|&(_, v)| v)
}

/// Look up a fixture. Every model accepts `n` (points per side); the
/// Paley–Wiener model also takes `a > 0` (default `π`).
pub fn model(name: &str, params: &[(&str, f64)]) -> Result<ModelDescriptor, ModelError> {
    let (name, family, default_n): (&'static str, Family, usize) = match name {
        "paley_wiener" => {
            let a = param(params, "a").unwrap_or(PI);
            if !(a > 0.0) || !a.is_finite() {
                return Err(ModelError::BadParameters(format!("a must be positive, got {a}")));
            }
            ("paley_wiener", Family::PaleyWiener { a }, 1000)
        }
        "atan_family" => ("atan_family", Family::Atan, 200),
        "lattice_pair" => ("lattice_pair", Family::LatticePair, 1000),
        "density_mismatch" => ("density_mismatch", Family::DensityMismatch, 500),
        "semibounded_harmonic" => ("semibounded_harmonic", Family::SemiboundedHarmonic, 500),
        "offset_lattice" => ("offset_lattice", Family::OffsetLattice, 1000),
        other => return Err(ModelError::UnknownModel(other.to_string())),
    };
    for (k, _) in params {
        let known = *k == "n" || (*k == "a" && name == "paley_wiener");
        if !known {
            return Err(ModelError::BadParameters(format!("{name} takes no parameter {k:?}")));
        }
    }
    let n = param(params, "n").unwrap_or(default_n as f64);
    if !(n >= 16.0) || n.fract() != 0.0 || n > 1e7 {
        return Err(ModelError::BadParameters(format!("n must be an integer ≥ 16, got {n}")));
    }
    let per_side = n as usize;
    let e = match family {
        Family::PaleyWiener { a } => Some(EntireEvaluable::new(ExpLinear { a })),
        Family::LatticePair => Some(EntireEvaluable::new(ExpLinear { a: PI })),
        Family::Atan => Some(EntireEvaluable::new(AtanModel)),
        _ => None,
    }
    .map(|ev| HermiteBiehlerFunction::new(ev).assert_real_zero_free());
    let expected = match family {
        Family::PaleyWiener { .. } | Family::LatticePair => Some(Overall::GeneralizedEntireOnly),
        Family::Atan => Some(Overall::Entire),
        Family::DensityMismatch | Family::SemiboundedHarmonic => Some(Overall::NotGeneralizedEntire),
        Family::OffsetLattice => None,
    };
    let mut resolved = Vec::new();
    if let Family::PaleyWiener { a } = family {
        resolved.push(("a".to_string(), a));
    }
    resolved.push(("n".to_string(), n));
    Ok(ModelDescriptor { name, params: resolved, e, expected, per_side, family })
}

impl ModelDescriptor {
    /// Closed-form zeros of `s_β` for `β ∈ {0, π/2}` (models with an `e`),
    /// `per_side` points on each side.
    pub fn spectrum(&self, beta: f64) -> Result<SpectrumSequence, ModelError> {
        let n = self.per_side as i64;
        let zero = beta == 0.0;
        let half = (beta - PI / 2.0).abs() < 1e-15;
        if !(zero || half) {
            return Err(ModelError::BadParameters("closed-form spectra exist for β = 0 and β = π/2".into()));
        }
        let label = if zero { "s_0 zeros" } else { "s_pi/2 zeros" };
        let lattice_step = match self.family {
            Family::PaleyWiener { a } => Some(PI / a),
            Family::LatticePair => Some(1.0),
            _ => None,
        };
        if let Some(step) = lattice_step {
            let shift = if zero { 0.0 } else { 0.5 };
            let pts: Vec<f64> =
                (-n..=n).map(|k| (k as f64 + shift) * step).filter(|x| x.abs() <= n as f64 * step).collect();
            return Ok(seq(pts, symmetric_tail(step, -shift * step), label));
        }
        match self.family {
            Family::Atan => {
                if zero {
                    Ok(seq(mirrored(&atan_zero_roots(self.per_side), false), symmetric_tail(PI, -PI), label))
                } else {
                    Ok(seq(mirrored(&atan_gamma_roots(self.per_side), true), symmetric_tail(PI, 0.0), label))
                }
            }
            _ => Err(ModelError::BadParameters(format!("{} has no closed-form e", self.name))),
        }
    }

    /// `(seq0, seq_gamma)`: the zeros of `h_0` and the sequence `{x_n}` the
    /// conditions are tested on.
    pub fn pair(&self) -> Result<(SpectrumSequence, SpectrumSequence), ModelError> {
        let n = self.per_side;
        let ints = |f: &dyn Fn(f64) -> f64| -> Vec<f64> { (1..=n).map(|k| f(k as f64)).collect() };
        Ok(match self.family {
            Family::PaleyWiener { .. } | Family::LatticePair | Family::Atan => {
                (self.spectrum(0.0)?, self.spectrum(PI / 2.0)?)
            }
            Family::DensityMismatch => {
                let tail = TailModel::affine(Some(1.0), Some(2.0), 0.0).expect("positive slopes");
                let gamma: Vec<f64> = ints(&|k| k).into_iter().chain(ints(&|k| -2.0 * k)).collect();
                let zero: Vec<f64> =
                    ints(&|k| k + 0.5).into_iter().chain([-0.5]).chain(ints(&|k| -(2.0 * k + 1.0))).collect();
                (seq(zero, tail, "seq0"), seq(gamma, tail, "seq_gamma"))
            }
            Family::SemiboundedHarmonic => {
                let gamma = TailModel::affine(Some(1.0), None, 0.0).expect("positive slope");
                let zero = TailModel::affine(Some(1.0), None, -0.5).expect("positive slope");
                (seq(ints(&|k| k - 0.5), zero, "seq0"), seq(ints(&|k| k), gamma, "seq_gamma"))
            }
            Family::OffsetLattice => {
                let gamma: Vec<f64> = ints(&|k| k).into_iter().chain(ints(&|k| -(k + 0.5))).collect();
                let zero: Vec<f64> = ints(&|k| k + 0.5).into_iter().chain([0.0]).chain(ints(&|k| -(k + 1.0))).collect();
                (seq(zero, symmetric_tail(1.0, 0.0), "seq0"), seq(gamma, symmetric_tail(1.0, 0.0), "seq_gamma"))
            }
        })
    }
}
