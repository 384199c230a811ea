//! JSON report types. Field order is declaration order, so reports diff
//! cleanly between runs.

use debranges::{Classification, ConditionVerdict, HbReport, RoundtripReport, SpectrumSequence, TruncationPolicy};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::input::extent_name;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct RunReport<T: Serialize> {
    pub schema: u32,
    pub command: String,
    pub args: Vec<String>,
    pub inputs_digest: String,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// SHA-256 over the command, its arguments and the input file contents,
/// each followed by a zero byte.
pub fn digest(command: &str, args: &[String], inputs: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    for a in args {
        h.update(a.as_bytes());
        h.update([0]);
    }
    for bytes in inputs {
        h.update(bytes);
        h.update([0]);
    }
    hex::encode(h.finalize())
}

/// `None` for non-finite values, which JSON cannot carry.
fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Serialize)]
pub struct PolicyOut {
    /// `null` means no cutoff beyond the stored window.
    pub radius: Option<f64>,
    pub pairing: bool,
    pub tail_correction: bool,
    pub richardson_levels: u8,
    pub delta: f64,
    pub window: Option<f64>,
    pub stability_tol: f64,
}

impl From<&TruncationPolicy> for PolicyOut {
    fn from(p: &TruncationPolicy) -> Self {
        Self {
            radius: finite(p.radius),
            pairing: p.pairing,
            tail_correction: p.tail_correction,
            richardson_levels: p.richardson_levels,
            delta: p.delta,
            window: p.window,
            stability_tol: p.stability_tol,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TailOut {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub alpha_pos: Option<f64>,
    pub alpha_neg: Option<f64>,
    pub offset: f64,
}

#[derive(Debug, Serialize)]
pub struct SequenceOut {
    pub label: String,
    pub count: usize,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub extent: &'static str,
    pub tail: Option<TailOut>,
}

impl From<&SpectrumSequence> for SequenceOut {
    fn from(s: &SpectrumSequence) -> Self {
        Self {
            label: s.label().to_string(),
            count: s.len(),
            min: (!s.is_empty()).then(|| s.min()),
            max: (!s.is_empty()).then(|| s.max()),
            extent: extent_name(s.extent()),
            tail: s.tail().map(|t| TailOut {
                kind: "affine",
                alpha_pos: t.alpha_pos(),
                alpha_neg: t.alpha_neg(),
                offset: t.offset(),
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerdictOut {
    pub status: &'static str,
    pub estimate: Option<f64>,
    pub tail_exponent: Option<f64>,
    pub window_terms: usize,
    pub window_radius: Option<f64>,
    pub uncertainty: Option<f64>,
    pub partial_values: Vec<Option<f64>>,
    pub note: String,
}

impl From<&ConditionVerdict> for VerdictOut {
    fn from(v: &ConditionVerdict) -> Self {
        let d = &v.diagnostics;
        Self {
            status: v.status.as_str(),
            estimate: v.estimate.and_then(finite),
            tail_exponent: d.tail_exponent.and_then(finite),
            window_terms: d.window_terms,
            window_radius: d.window_radius.and_then(finite),
            uncertainty: d.uncertainty.and_then(finite),
            partial_values: d.partial_values.iter().map(|&x| finite(x)).collect(),
            note: d.note.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationOut {
    pub overall: &'static str,
    pub c1: VerdictOut,
    pub c2: VerdictOut,
    pub c3_membership: VerdictOut,
    pub c3_assoc: VerdictOut,
}

impl From<&Classification> for ClassificationOut {
    fn from(c: &Classification) -> Self {
        Self {
            overall: c.overall.as_str(),
            c1: (&c.c1).into(),
            c2: (&c.c2).into(),
            c3_membership: (&c.c3_membership).into(),
            c3_assoc: (&c.c3_assoc).into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckOut {
    pub seq0: SequenceOut,
    pub seq_gamma: SequenceOut,
    pub policy: PolicyOut,
    pub classification: ClassificationOut,
}

#[derive(Debug, Serialize)]
pub struct HbOut {
    pub status: &'static str,
    pub min_margin: Option<f64>,
    pub witness: Option<[f64; 2]>,
    pub real_zero: Option<f64>,
    pub upper_samples: usize,
    pub real_samples: usize,
}

impl From<&HbReport> for HbOut {
    fn from(r: &HbReport) -> Self {
        Self {
            status: if r.verified { "verified" } else { "violated" },
            min_margin: finite(r.min_margin),
            witness: r.witness.map(|z| [z.re, z.im]),
            real_zero: r.real_zero,
            upper_samples: r.upper_samples,
            real_samples: r.real_samples,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RoundtripOut {
    pub pass: bool,
    pub tol: f64,
    pub max_deviation_seq1: f64,
    pub max_deviation_seq2: f64,
    pub checked_seq1: usize,
    pub checked_seq2: usize,
    pub count_mismatch: usize,
}

impl From<&RoundtripReport> for RoundtripOut {
    fn from(r: &RoundtripReport) -> Self {
        Self {
            pass: r.pass,
            tol: r.tol,
            max_deviation_seq1: r.max_deviation_seq1,
            max_deviation_seq2: r.max_deviation_seq2,
            checked_seq1: r.checked_seq1,
            checked_seq2: r.checked_seq2,
            count_mismatch: r.count_mismatch,
        }
    }
}

/// One sample of `e` on the grid.
#[derive(Debug, Serialize)]
pub struct SampleRow {
    pub x: f64,
    pub y: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize)]
pub struct ConstructOut {
    pub seq1: SequenceOut,
    pub seq2: SequenceOut,
    pub policy: PolicyOut,
    pub sigma: f64,
    pub c0: &'static str,
    pub hb: HbOut,
    pub roundtrip: RoundtripOut,
    pub samples: Vec<SampleRow>,
}

#[derive(Debug, Serialize)]
pub struct RootsOut {
    pub beta: f64,
    pub interval: [f64; 2],
    pub count: usize,
    pub roots: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct VerifyHbOut {
    pub grid: GridOut,
    pub hb: HbOut,
}

#[derive(Debug, Serialize)]
pub struct GridOut {
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub real_samples: usize,
}

#[derive(Debug, Serialize)]
pub struct ParsevalOut {
    pub beta: f64,
    pub f: String,
    pub g: String,
    pub interval: [f64; 2],
    pub terms: usize,
    pub re: f64,
    pub im: f64,
    /// Extrapolated size of the omitted tail; `null` if the terms do not
    /// decay fast enough to estimate it.
    pub tail_estimate: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct PhaseRow {
    pub x: f64,
    pub phi: f64,
}

#[derive(Debug, Serialize)]
pub struct PhaseOut {
    pub interval: [f64; 2],
    pub rows: Vec<PhaseRow>,
}
