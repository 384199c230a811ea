//! Spectrum windows: validation, sign splits, interlacing and the
//! semibounded ordering test.
//!
//! An infinite spectrum is stored as a finite, strictly increasing window
//! plus an optional affine [`TailModel`] describing how each unbounded side
//! continues. Whether a sequence is semibounded comes from the tail model or
//! an explicit [`Extent`] declaration, never from the window itself.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::conditions::{ConditionVerdict, Diagnostics, Status};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectraError {
    #[error("rejected input: {0}")]
    RejectedInput(String),
    #[error("conflicting tail models: one sequence is semibounded and the other is not")]
    ConflictingTailModels,
}

/// Which sides of the real line a spectrum extends to infinity on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extent {
    /// Unbounded in both directions.
    TwoSided,
    /// Semibounded from below (unbounded above only).
    BoundedBelow,
    /// Semibounded from above (unbounded below only).
    BoundedAbove,
    /// Nothing known beyond the stored window.
    Unknown,
}

impl Extent {
    pub fn is_semibounded(self) -> bool {
        matches!(self, Extent::BoundedBelow | Extent::BoundedAbove)
    }

    pub fn has_positive_tail(self) -> bool {
        matches!(self, Extent::TwoSided | Extent::BoundedBelow)
    }

    pub fn has_negative_tail(self) -> bool {
        matches!(self, Extent::TwoSided | Extent::BoundedAbove)
    }
}

/// Affine asymptotics `|x_n| ≈ α·n + c` on each unbounded side, where `n`
/// is the 1-based rank by modulus within that side. A missing slope means
/// the side is bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    alpha_pos: Option<f64>,
    alpha_neg: Option<f64>,
    offset: f64,
}

impl TailModel {
    pub fn affine(alpha_pos: Option<f64>, alpha_neg: Option<f64>, offset: f64) -> Result<Self, SpectraError> {
        if alpha_pos.is_none() && alpha_neg.is_none() {
            return Err(SpectraError::RejectedInput("tail model must describe at least one unbounded side".into()));
        }
        for a in [alpha_pos, alpha_neg].into_iter().flatten() {
            if !a.is_finite() || a <= 0.0 {
                return Err(SpectraError::RejectedInput("tail slope must be finite and positive".into()));
            }
        }
        if !offset.is_finite() {
            return Err(SpectraError::RejectedInput("tail offset must be finite".into()));
        }
        // normalize −0
        Ok(Self { alpha_pos, alpha_neg, offset: offset + 0.0 })
    }

    /// Same slope on both sides.
    pub fn symmetric(alpha: f64, offset: f64) -> Result<Self, SpectraError> {
        Self::affine(Some(alpha), Some(alpha), offset)
    }

    pub fn alpha_pos(&self) -> Option<f64> {
        self.alpha_pos
    }

    pub fn alpha_neg(&self) -> Option<f64> {
        self.alpha_neg
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn extent(&self) -> Extent {
        match (self.alpha_pos, self.alpha_neg) {
            (Some(_), Some(_)) => Extent::TwoSided,
            (Some(_), None) => Extent::BoundedBelow,
            (None, Some(_)) => Extent::BoundedAbove,
            (None, None) => Extent::Unknown,
        }
    }

    /// Both sides unbounded with the same slope (relative 1e-12).
    pub fn balanced_slope(&self) -> Option<f64> {
        match (self.alpha_pos, self.alpha_neg) {
            (Some(p), Some(n)) if (p - n).abs() <= 1e-12 * p.max(n) => Some(p),
            _ => None,
        }
    }
}

/// Per-side deviation of the outer 20% of stored points from the tail model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailResiduals {
    pub positive: Option<f64>,
    pub negative: Option<f64>,
}

/// A validated spectrum window.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSequence {
    points: Vec<f64>,
    contains_zero: bool,
    tail: Option<TailModel>,
    extent: Extent,
    label: String,
}

/// Sort, check and wrap raw spectrum data.
pub fn validate_sequence(raw: &[f64], tail: Option<TailModel>) -> Result<SpectrumSequence, SpectraError> {
    SpectrumSequence::new(raw.to_vec(), tail)
}

impl SpectrumSequence {
    pub fn new(mut points: Vec<f64>, tail: Option<TailModel>) -> Result<Self, SpectraError> {
        if points.is_empty() {
            return Err(SpectraError::RejectedInput("empty sequence".into()));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(SpectraError::RejectedInput("non-finite entry".into()));
        }
        points.sort_by(f64::total_cmp);
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(SpectraError::RejectedInput("multiplicity one violated".into()));
        }
        // -0.0 and 0.0 are the same point
        for p in points.iter_mut() {
            if *p == 0.0 {
                *p = 0.0;
            }
        }
        let contains_zero = points.binary_search_by(|p| p.total_cmp(&0.0)).is_ok();
        let extent = tail.map(|t| t.extent()).unwrap_or(Extent::Unknown);
        Ok(Self { points, contains_zero, tail, extent, label: String::new() })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Declare which sides are unbounded. Must agree with the tail model
    /// when one is present.
    pub fn with_extent(mut self, extent: Extent) -> Result<Self, SpectraError> {
        if let Some(t) = self.tail {
            if t.extent() != extent {
                return Err(SpectraError::ConflictingTailModels);
            }
        }
        self.extent = extent;
        Ok(self)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_zero
    }

    pub fn tail(&self) -> Option<&TailModel> {
        self.tail.as_ref()
    }

    pub fn extent(&self) -> Extent {
        self.extent
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Largest modulus among stored points.
    pub fn max_modulus(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Same points and label with the tail model (and derived extent) dropped.
    pub fn without_tail(&self) -> Self {
        Self { tail: None, extent: Extent::Unknown, ..self.clone() }
    }

    /// Keep only points with `|x| ≤ radius`.
    pub fn truncated(&self, radius: f64) -> Result<Self, SpectraError> {
        let points: Vec<f64> = self.points.iter().copied().filter(|x| x.abs() <= radius).collect();
        let mut s = Self::new(points, self.tail)?;
        s.extent = self.extent;
        s.label = self.label.clone();
        Ok(s)
    }

    /// Multiply every point (and tail slope) by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self, SpectraError> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(SpectraError::RejectedInput("scale factor must be positive".into()));
        }
        let tail = match self.tail {
            Some(t) => Some(TailModel::affine(
                t.alpha_pos.map(|a| a * factor),
                t.alpha_neg.map(|a| a * factor),
                t.offset * factor,
            )?),
            None => None,
        };
        let mut s = Self::new(self.points.iter().map(|x| x * factor).collect(), tail)?;
        s.extent = self.extent;
        s.label = self.label.clone();
        Ok(s)
    }

    /// Diagnostic only: how far the outer 20% of each side sits from the
    /// affine model.
    pub fn tail_residuals(&self) -> Option<TailResiduals> {
        let tail = self.tail?;
        let split = split_signed(self);
        let side = |pts: &[f64], alpha: Option<f64>| -> Option<f64> {
            let alpha = alpha?;
            if pts.is_empty() {
                return None;
            }
            let from = pts.len() - (pts.len() / 5).max(1);
            pts.iter()
                .enumerate()
                .skip(from)
                .map(|(i, x)| (x.abs() - (alpha * (i + 1) as f64 + tail.offset)).abs())
                .reduce(f64::max)
        };
        Some(TailResiduals {
            positive: side(&split.positives, tail.alpha_pos),
            negative: side(&split.negatives, tail.alpha_neg),
        })
    }
}

/// Positive and negative points, each ordered by increasing modulus. Zero
/// belongs to neither list.
#[derive(Debug, Clone, PartialEq)]
pub struct SignSplit {
    pub positives: Vec<f64>,
    pub negatives: Vec<f64>,
}

impl SignSplit {
    /// Ascending union of both lists plus `0` when `with_zero`.
    pub fn merge(&self, with_zero: bool) -> Vec<f64> {
        let mut out: Vec<f64> = self.negatives.iter().rev().copied().collect();
        if with_zero {
            out.push(0.0);
        }
        out.extend_from_slice(&self.positives);
        out
    }
}

pub fn split_signed(seq: &SpectrumSequence) -> SignSplit {
    let positives = seq.points.iter().copied().filter(|&x| x > 0.0).collect();
    let negatives = seq.points.iter().rev().copied().filter(|&x| x < 0.0).collect();
    SignSplit { positives, negatives }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    First,
    Second,
}

/// A gap between consecutive points of one sequence holding the wrong number
/// of points of the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GapViolation {
    /// The sequence whose consecutive points bound the gap.
    pub sequence: Which,
    /// Indices of the bounding points within that sequence.
    pub gap: (usize, usize),
    /// Points of the other sequence found strictly inside the gap.
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingReport {
    pub interlaced: bool,
    pub disjoint: bool,
    pub first_violation: Option<GapViolation>,
    pub shared_point: Option<f64>,
    pub first_semibounded_below: bool,
    pub first_semibounded_above: bool,
    pub second_semibounded_below: bool,
    pub second_semibounded_above: bool,
}

/// Interlacing over the overlapping range of the two windows, extended by
/// one point on each side so the straddling gaps are checked too.
pub fn check_interlacing(a: &SpectrumSequence, b: &SpectrumSequence) -> InterlacingReport {
    // (value, owner, index within owner)
    let mut merged: Vec<(f64, Which, usize)> = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut shared_point = None;
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a.points[i] <= b.points[j]);
        if take_a {
            if j < b.len() && a.points[i] == b.points[j] && shared_point.is_none() {
                shared_point = Some(a.points[i]);
            }
            merged.push((a.points[i], Which::First, i));
            i += 1;
        } else {
            merged.push((b.points[j], Which::Second, j));
            j += 1;
        }
    }
    let disjoint = shared_point.is_none();

    let lo = a.min().max(b.min());
    let hi = a.max().min(b.max());
    let (start, end) = if lo <= hi {
        let first_in = merged.iter().position(|m| m.0 >= lo).unwrap_or(0);
        let last_in = merged.iter().rposition(|m| m.0 <= hi).unwrap_or(merged.len() - 1);
        (first_in.saturating_sub(1), (last_in + 1).min(merged.len() - 1))
    } else {
        (0, merged.len() - 1)
    };

    let mut first_violation = None;
    for k in start..end {
        let (_, w0, i0) = merged[k];
        let (_, w1, i1) = merged[k + 1];
        if w0 != w1 {
            continue;
        }
        first_violation = Some(match w0 {
            Which::First => GapViolation { sequence: Which::First, gap: (i0, i1), count: 0 },
            Which::Second => enclosing_first_gap(&merged, k).unwrap_or(GapViolation {
                sequence: Which::Second,
                gap: (i0, i1),
                count: 0,
            }),
        });
        break;
    }

    let ea = a.extent();
    let eb = b.extent();
    InterlacingReport {
        interlaced: disjoint && first_violation.is_none(),
        disjoint,
        first_violation,
        shared_point,
        first_semibounded_below: ea == Extent::BoundedBelow,
        first_semibounded_above: ea == Extent::BoundedAbove,
        second_semibounded_below: eb == Extent::BoundedBelow,
        second_semibounded_above: eb == Extent::BoundedAbove,
    }
}

fn enclosing_first_gap(merged: &[(f64, Which, usize)], k: usize) -> Option<GapViolation> {
    let before = merged[..=k].iter().rposition(|m| m.1 == Which::First)?;
    let after = k + 1 + merged[k + 1..].iter().position(|m| m.1 == Which::First)?;
    Some(GapViolation { sequence: Which::First, gap: (merged[before].2, merged[after].2), count: after - before - 1 })
}

/// Ordering condition for two interlaced semibounded sequences: the second
/// must start first (below) and the first must end last (above).
pub fn check_c0(seq1: &SpectrumSequence, seq2: &SpectrumSequence) -> Result<ConditionVerdict, SpectraError> {
    let (e1, e2) = (seq1.extent(), seq2.extent());
    if e1 == Extent::Unknown || e2 == Extent::Unknown {
        return Ok(ConditionVerdict::new(Status::Inconclusive, None, Diagnostics::note("extent unknown")));
    }
    if e1 != e2 {
        return Err(SpectraError::ConflictingTailModels);
    }
    let verdict = match e1 {
        Extent::TwoSided => {
            ConditionVerdict::new(Status::Satisfied, None, Diagnostics::note("not semibounded; vacuous"))
        }
        Extent::BoundedBelow => {
            let margin = seq1.min() - seq2.min();
            let status = if margin > 0.0 { Status::Satisfied } else { Status::Violated };
            ConditionVerdict::new(status, Some(margin), Diagnostics::note("min(seq2) < min(seq1)"))
        }
        Extent::BoundedAbove => {
            let margin = seq1.max() - seq2.max();
            let status = if margin > 0.0 { Status::Satisfied } else { Status::Violated };
            ConditionVerdict::new(status, Some(margin), Diagnostics::note("max(seq1) > max(seq2)"))
        }
        Extent::Unknown => unreachable!(),
    };
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn seq(points: &[f64]) -> SpectrumSequence {
        validate_sequence(points, None).unwrap()
    }

    fn lattice(n: i32, shift: f64) -> SpectrumSequence {
        let pts: Vec<f64> = (-n..=n).map(|k| k as f64 + shift).collect();
        SpectrumSequence::new(pts, Some(TailModel::symmetric(1.0, -shift).unwrap())).unwrap()
    }

    #[test]
    fn validate_examples() {
        let s = seq(&[-2.0, -1.0, 1.0, 2.0]);
        assert_eq!(s.len(), 4);
        assert!(!s.contains_zero());

        let s = seq(&[0.0, 1.0, -1.0]);
        assert_eq!(s.points(), &[-1.0, 0.0, 1.0]);
        assert!(s.contains_zero());

        assert_eq!(
            validate_sequence(&[1.0, 1.0, 2.0], None),
            Err(SpectraError::RejectedInput("multiplicity one violated".into()))
        );
        assert!(validate_sequence(&[1.0, f64::NAN], None).is_err());
        assert!(validate_sequence(&[f64::INFINITY], None).is_err());
        assert!(validate_sequence(&[], None).is_err());
    }

    #[test]
    fn negative_zero_counts_as_zero() {
        let s = seq(&[-0.0, 1.0]);
        assert!(s.contains_zero());
        assert!(validate_sequence(&[-0.0, 0.0], None).is_err());
    }

    #[test]
    fn split_examples() {
        let s = split_signed(&seq(&[-3.0, -1.0, 2.0, 4.0]));
        assert_eq!(s.positives, vec![2.0, 4.0]);
        assert_eq!(s.negatives, vec![-1.0, -3.0]);

        let s = split_signed(&seq(&[0.0, 1.0, 2.0]));
        assert_eq!(s.positives, vec![1.0, 2.0]);
        assert!(s.negatives.is_empty());

        let s = split_signed(&seq(&[-0.5, 0.5, -1.5, 1.5]));
        assert_eq!(s.positives, vec![0.5, 1.5]);
        assert_eq!(s.negatives, vec![-0.5, -1.5]);
    }

    #[test]
    fn interlacing_examples() {
        let r = check_interlacing(&lattice(10, 0.0), &lattice(10, 0.5));
        assert!(r.interlaced && r.disjoint);

        let r = check_interlacing(&seq(&[1.0, 2.0, 3.0]), &seq(&[1.1, 1.2, 5.0]));
        assert!(!r.interlaced);
        let v = r.first_violation.unwrap();
        assert_eq!(v.sequence, Which::First);
        assert_eq!(v.gap, (0, 1));
        assert_eq!(v.count, 2);

        let r = check_interlacing(&seq(&[1.0, 2.0]), &seq(&[1.0, 3.0]));
        assert!(!r.disjoint && !r.interlaced);
        assert_eq!(r.shared_point, Some(1.0));
    }

    #[test]
    fn empty_gap_is_reported() {
        let r = check_interlacing(&seq(&[0.0, 1.0, 2.0, 3.0]), &seq(&[0.5, 2.5]));
        assert!(!r.interlaced);
        let v = r.first_violation.unwrap();
        assert_eq!((v.sequence, v.gap, v.count), (Which::First, (1, 2), 0));
    }

    #[test]
    fn truncated_windows_still_interlace() {
        let a = seq(&[1.0, 2.0, 3.0]);
        let b = seq(&[1.5, 2.5, 3.5, 4.5, 5.5]);
        assert!(check_interlacing(&a, &b).interlaced);
    }

    #[test]
    fn c0_examples() {
        let below = |pts: Vec<f64>, off: f64| {
            SpectrumSequence::new(pts, Some(TailModel::affine(Some(1.0), None, off).unwrap())).unwrap()
        };
        let s1 = below((1..50).map(|n| n as f64 - 0.5).collect(), -0.5);
        let s2 = below((1..50).map(|n| n as f64 - 1.0).collect(), -1.0);
        assert_eq!(check_c0(&s1, &s2).unwrap().status, Status::Satisfied);

        let s1 = below((1..50).map(|n| n as f64).collect(), 0.0);
        let s2 = below((1..50).map(|n| n as f64 + 0.5).collect(), 0.5);
        assert_eq!(check_c0(&s1, &s2).unwrap().status, Status::Violated);

        assert_eq!(check_c0(&lattice(5, 0.0), &lattice(5, 0.5)).unwrap().status, Status::Satisfied);

        assert_eq!(check_c0(&s1, &lattice(5, 0.5)), Err(SpectraError::ConflictingTailModels));
        assert_eq!(check_c0(&seq(&[1.0]), &seq(&[2.0])).unwrap().status, Status::Inconclusive);
    }

    #[test]
    fn tail_model_validation() {
        assert!(TailModel::affine(None, None, 0.0).is_err());
        assert!(TailModel::affine(Some(-1.0), None, 0.0).is_err());
        assert_eq!(TailModel::affine(None, Some(2.0), 0.0).unwrap().extent(), Extent::BoundedAbove);
        let s = seq(&[1.0, 2.0]);
        assert!(s.clone().with_extent(Extent::BoundedBelow).is_ok());
        let tailed = SpectrumSequence::new(vec![1.0], Some(TailModel::symmetric(1.0, 0.0).unwrap())).unwrap();
        assert_eq!(tailed.with_extent(Extent::BoundedBelow), Err(SpectraError::ConflictingTailModels));
    }

    #[test]
    fn tail_residuals_vanish_on_exact_lattice() {
        let r = lattice(50, 0.5).tail_residuals().unwrap();
        assert!(r.positive.unwrap() < 1e-12 && r.negative.unwrap() < 1e-12);
        let off = SpectrumSequence::new(
            (1..=50).map(|k| k as f64).collect(),
            Some(TailModel::affine(Some(1.0), None, 1.0).unwrap()),
        )
        .unwrap();
        let r = off.tail_residuals().unwrap();
        assert!((r.positive.unwrap() - 1.0).abs() < 1e-12);
        assert!(r.negative.is_none());
    }

    fn distinct_points() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::btree_set(-10_000i32..10_000, 1..60)
            .prop_map(|s| s.into_iter().map(|k| k as f64 / 8.0).collect())
    }

    proptest! {
        #[test]
        fn split_then_merge_roundtrips(pts in distinct_points()) {
            let s = seq(&pts);
            let merged = split_signed(&s).merge(s.contains_zero());
            prop_assert_eq!(merged, s.points().to_vec());
        }

        #[test]
        fn interlaced_flag_is_symmetric(a in distinct_points(), b in distinct_points()) {
            let (a, b) = (seq(&a), seq(&b));
            prop_assert_eq!(check_interlacing(&a, &b).interlaced, check_interlacing(&b, &a).interlaced);
            prop_assert_eq!(check_interlacing(&a, &b).disjoint, check_interlacing(&b, &a).disjoint);
        }

        #[test]
        fn shifted_grids_interlace(n in 2usize..80, shift in 0.01f64..0.99) {
            let a: Vec<f64> = (0..n).map(|k| k as f64).collect();
            let b: Vec<f64> = (0..n).map(|k| k as f64 + shift).collect();
            let r = check_interlacing(&seq(&a), &seq(&b));
            prop_assert!(r.interlaced);
        }
    }
}
