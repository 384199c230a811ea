//! The symmetric-sum (C1), density (C2) and weighted-series (C3) tests on
//! windowed spectra, and the resulting operator classification.
//!
//! Finite windows cannot certify convergence, so each test returns a
//! tri-state verdict. Series tests fit the exponent `p` of `|term_n| ~ n^p`
//! over the outer half of the window and decide only when `p` clears `−1`
//! by the policy's margin `δ`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::products::{CanonicalProduct, ProductError, TruncationPolicy};
use crate::series::{fit_line, outer_half, power_law_exponent, richardson_real};
use crate::special::digamma_real;
use crate::spectra::{check_interlacing, split_signed, Extent, SpectrumSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Satisfied,
    Violated,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Satisfied => "satisfied",
            Status::Violated => "violated",
            Status::Inconclusive => "inconclusive",
        }
    }
}

/// Evidence behind a verdict.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Diagnostics {
    /// Fitted exponent of the terms (or increments, or density ratios).
    pub tail_exponent: Option<f64>,
    /// Number of points or terms used.
    pub window_terms: usize,
    /// Largest `|x|` used.
    pub window_radius: Option<f64>,
    /// Partial values at growing radii, coarsest first.
    pub partial_values: Vec<f64>,
    /// Uncertainty attached to the estimate, when one was computed.
    pub uncertainty: Option<f64>,
    pub note: String,
}

impl Diagnostics {
    pub fn note(text: &str) -> Self {
        Self { note: text.into(), ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdict {
    pub status: Status,
    pub estimate: Option<f64>,
    pub diagnostics: Diagnostics,
}

impl ConditionVerdict {
    pub fn new(status: Status, estimate: Option<f64>, diagnostics: Diagnostics) -> Self {
        Self { status, estimate, diagnostics }
    }

    fn inconclusive(note: impl Into<String>) -> Self {
        Self::new(Status::Inconclusive, None, Diagnostics { note: note.into(), ..Diagnostics::default() })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConditionError {
    #[error("sequences are not interlaced")]
    NotInterlaced,
    #[error("sequences share the point {0}")]
    ZeroOverlap(f64),
    #[error(transparent)]
    Product(#[from] ProductError),
}

/// Series weighting in the (C3) test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// `Σ |1/(h_0(x_n) h'_γ(x_n))|`: a real zero-free entire function lies
    /// in the space.
    Membership,
    /// The same terms divided by `x_n²`: one is associated to the space.
    Assoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Overall {
    Entire,
    GeneralizedEntireOnly,
    NotGeneralizedEntire,
    Inconclusive,
}

impl Overall {
    pub fn as_str(self) -> &'static str {
        match self {
            Overall::Entire => "Entire",
            Overall::GeneralizedEntireOnly => "GeneralizedEntireOnly",
            Overall::NotGeneralizedEntire => "NotGeneralizedEntire",
            Overall::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub overall: Overall,
    pub c1: ConditionVerdict,
    pub c2: ConditionVerdict,
    pub c3_membership: ConditionVerdict,
    pub c3_assoc: ConditionVerdict,
}

const MIN_LEVELS: usize = 4;
const MAX_LEVELS: usize = 16;
const MIN_SIDE_POINTS: usize = 8;
const MIN_TERMS: usize = 16;

/// Partial sums `Σ_{0<|x|≤ρ} 1/x` at every point modulus `ρ`, in order.
fn cutoff_sums(points: &[f64]) -> Vec<(f64, f64)> {
    // pair ±x before adding so exact cancellation survives
    let split_at = points.partition_point(|&x| x < 0.0);
    let (neg, pos) = points.split_at(split_at);
    let mut pos = pos.iter().copied().filter(|&x| x != 0.0).peekable();
    let mut neg = neg.iter().rev().copied().peekable();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(points.len());
    loop {
        let rho = match (pos.peek().copied(), neg.peek().copied()) {
            (Some(p), Some(n)) if p == -n => {
                acc += 1.0 / p + 1.0 / n;
                pos.next();
                neg.next();
                p
            }
            (Some(p), Some(n)) if p < -n => {
                acc += 1.0 / p;
                pos.next();
                p
            }
            (Some(p), None) => {
                acc += 1.0 / p;
                pos.next();
                p
            }
            (_, Some(n)) => {
                acc += 1.0 / n;
                neg.next();
                -n
            }
            (None, None) => break,
        };
        out.push((rho, acc));
    }
    out
}

/// Symmetric sum at radius `r`.
fn symmetric_sum(cum: &[(f64, f64)], r: f64) -> f64 {
    let k = cum.partition_point(|&(rho, _)| rho <= r);
    if k == 0 {
        0.0
    } else {
        cum[k - 1].1
    }
}

/// Mean of the partial sums over cutoffs in `(r/2, r]`; smooths out the
/// jump of an unpaired point at the boundary.
fn block_average(cum: &[(f64, f64)], r: f64) -> Option<f64> {
    let lo = cum.partition_point(|&(rho, _)| rho <= r / 2.0);
    let hi = cum.partition_point(|&(rho, _)| rho <= r);
    (hi > lo).then(|| cum[lo..hi].iter().map(|p| p.1).sum::<f64>() / (hi - lo) as f64)
}

/// (C1): the symmetric limit `lim_r Σ_{0<|x_n|≤r} 1/x_n` exists.
pub fn check_c1(seq: &SpectrumSequence, policy: &TruncationPolicy) -> ConditionVerdict {
    let pts = seq.points();
    // beyond the shorter side of a two-sided window the points are unpaired
    let split = split_signed(seq);
    let extent = match (split.positives.last(), split.negatives.last()) {
        (Some(&p), Some(&n)) => p.min(-n),
        _ => seq.max_modulus(),
    };
    let r_max = policy.radius.min(extent);
    let min_mod = pts.iter().copied().filter(|&x| x != 0.0).map(f64::abs).fold(f64::INFINITY, f64::min);
    let mut diag = Diagnostics { window_radius: Some(r_max), ..Diagnostics::default() };
    diag.window_terms = pts.iter().filter(|&&x| x != 0.0 && x.abs() <= r_max).count();
    if !min_mod.is_finite() {
        diag.note = "no nonzero points".into();
        return ConditionVerdict::new(Status::Inconclusive, None, diag);
    }

    // coarsest first
    let mut radii: Vec<f64> =
        (0..MAX_LEVELS).map(|k| r_max / 2f64.powi(k as i32)).take_while(|&r| r >= min_mod).collect();
    radii.reverse();
    let cum = cutoff_sums(pts);
    let sums: Vec<f64> = radii.iter().map(|&r| symmetric_sum(&cum, r)).collect();
    diag.partial_values = sums.clone();
    let last = *sums.last().unwrap_or(&0.0);

    if policy.tail_correction {
        if let Some(model) = seq.tail() {
            let p = split.positives.iter().copied().rfind(|&x| x <= r_max);
            let q = split.negatives.iter().copied().rfind(|&x| -x <= r_max).map(|x| -x);
            return match (model.balanced_slope(), model.extent()) {
                (Some(alpha), _) => {
                    let anchor = |v: Option<f64>| v.unwrap_or(model.offset().max(0.0)) / alpha;
                    // Σ_j 1/(P+αj) − 1/(Q+αj)
                    let tail = (digamma_real(anchor(q) + 1.0) - digamma_real(anchor(p) + 1.0)) / alpha;
                    diag.note = "balanced affine tail summed analytically".into();
                    ConditionVerdict::new(Status::Satisfied, Some(last + tail), diag)
                }
                (None, Extent::TwoSided) => {
                    diag.note = "unequal tail densities: partial sums grow like log r".into();
                    ConditionVerdict::new(Status::Violated, Some(last), diag)
                }
                _ => {
                    diag.note = "one-sided affine tail: harmonic growth".into();
                    ConditionVerdict::new(Status::Violated, Some(last), diag)
                }
            };
        }
    }

    if sums.len() < MIN_LEVELS + 1 {
        diag.note = format!("{} dyadic levels, need {}", sums.len().saturating_sub(1), MIN_LEVELS);
        return ConditionVerdict::new(Status::Inconclusive, Some(last), diag);
    }
    let averages: Vec<Option<f64>> = radii.iter().map(|&r| block_average(&cum, r)).collect();
    let increments: Vec<(f64, f64)> = averages
        .windows(2)
        .zip(&radii[1..])
        .filter_map(|(w, &r)| {
            let d = w[1]? - w[0]?;
            let scale = pts.iter().filter(|&&x| x.abs() > r / 4.0 && x.abs() <= r).map(|x| 1.0 / x.abs()).sum::<f64>();
            Some((r, if d.abs() <= 1e-13 * scale { 0.0 } else { d }))
        })
        .collect();
    if increments.iter().all(|&(_, d)| d == 0.0) {
        diag.tail_exponent = None;
        diag.note = "exact cancellation at every radius".into();
        return ConditionVerdict::new(Status::Satisfied, Some(last), diag);
    }
    let nonzero: Vec<(f64, f64)> = increments.iter().copied().filter(|&(_, d)| d != 0.0).collect();
    let rs: Vec<f64> = nonzero.iter().map(|p| p.0).collect();
    let ds: Vec<f64> = nonzero.iter().map(|p| p.1).collect();
    // small radii are pre-asymptotic: fit the outer levels only
    let fit_from = nonzero.len().saturating_sub(nonzero.len().div_ceil(2)).min(nonzero.len().saturating_sub(3));
    let abs_ds: Vec<f64> = ds[fit_from..].iter().map(|d| d.abs()).collect();
    let Some(q) = (nonzero.len() >= 3).then(|| power_law_exponent(&rs[fit_from..], &abs_ds)).flatten() else {
        diag.note = "too few nonzero increments".into();
        return ConditionVerdict::new(Status::Inconclusive, Some(last), diag);
    };
    diag.tail_exponent = Some(q);
    let outer = &ds[outer_half(ds.len())];
    let same_sign = outer.iter().all(|&d| d > 0.0) || outer.iter().all(|&d| d < 0.0);
    // an increment below the largest single term of the last block is
    // within the jitter of one unpaired boundary point
    let resolved = nonzero.last().is_some_and(|&(r, d)| {
        let largest =
            pts.iter().filter(|&&x| x.abs() > r / 2.0 && x.abs() <= r).map(|x| 1.0 / x.abs()).fold(0.0, f64::max);
        d.abs() > largest
    });
    if q < -policy.delta {
        let estimate = if policy.richardson_levels > 0 {
            let k = (policy.richardson_levels as usize + 1).min(sums.len());
            let plain_err = increments.last().map(|d| d.1.abs()).unwrap_or(0.0);
            match richardson_real(&sums[sums.len() - k..]) {
                // ragged radii can make the extrapolation worse than the last sum
                Some((b, prev)) if (b - prev).abs() < plain_err => {
                    diag.uncertainty = Some((b - prev).abs());
                    Some(b)
                }
                _ => {
                    diag.uncertainty = Some(plain_err);
                    Some(last)
                }
            }
        } else {
            diag.uncertainty = Some(increments.last().map(|d| d.1.abs()).unwrap_or(0.0));
            Some(last)
        };
        diag.note = "dyadic increments decay".into();
        ConditionVerdict::new(Status::Satisfied, estimate, diag)
    } else if q >= -policy.delta && same_sign && resolved && outer.len() >= 2 {
        diag.note = "dyadic increments do not decay: logarithmic growth".into();
        ConditionVerdict::new(Status::Violated, Some(last), diag)
    } else {
        diag.note = "increments neither decay nor keep a sign".into();
        ConditionVerdict::new(Status::Inconclusive, Some(last), diag)
    }
}

/// Limit of `n/|x_n|` on one side from the outer half of the window:
/// intercept of a line in `1/n`, with an uncertainty.
struct SideDensity {
    limit: f64,
    uncertainty: f64,
    exponent: Option<f64>,
}

fn side_density(moduli: &[f64]) -> Option<SideDensity> {
    if moduli.len() < MIN_SIDE_POINTS {
        return None;
    }
    let range = outer_half(moduli.len());
    let ns: Vec<f64> = range.clone().map(|i| (i + 1) as f64).collect();
    let ratios: Vec<f64> = range.map(|i| (i + 1) as f64 / moduli[i]).collect();
    let inv: Vec<f64> = ns.iter().map(|n| 1.0 / n).collect();
    let fit = fit_line(&inv, &ratios)?;
    let last = *ratios.last()?;
    Some(SideDensity {
        limit: fit.intercept,
        uncertainty: fit.max_residual + (fit.intercept - last).abs(),
        exponent: power_law_exponent(&ns, &ratios),
    })
}

/// (C2): `lim n/x_n⁺ = lim n/x_n⁻ < ∞`; for a semibounded sequence the
/// single limit must be `0`.
pub fn check_c2(seq: &SpectrumSequence, policy: &TruncationPolicy) -> ConditionVerdict {
    let split = split_signed(seq);
    let pos: Vec<f64> = split.positives.iter().copied().filter(|&x| x <= policy.radius).collect();
    let neg: Vec<f64> = split.negatives.iter().map(|x| -x).filter(|&x| x <= policy.radius).collect();
    let mut diag = Diagnostics {
        window_terms: pos.len() + neg.len(),
        window_radius: Some(policy.radius.min(seq.max_modulus())),
        ..Diagnostics::default()
    };

    if policy.tail_correction {
        if let Some(model) = seq.tail() {
            return match (model.alpha_pos(), model.alpha_neg()) {
                (Some(_), Some(_)) => match model.balanced_slope() {
                    Some(alpha) => {
                        diag.note = "equal tail densities".into();
                        ConditionVerdict::new(Status::Satisfied, Some(1.0 / alpha), diag)
                    }
                    None => {
                        let (p, n) = (1.0 / model.alpha_pos().unwrap_or(1.0), 1.0 / model.alpha_neg().unwrap_or(1.0));
                        diag.partial_values = alloc::vec![p, n];
                        diag.note = format!("tail densities differ: {p} vs {n}");
                        ConditionVerdict::new(Status::Violated, Some(p), diag)
                    }
                },
                (Some(a), None) | (None, Some(a)) => {
                    diag.note = "semibounded with affine tail: density is positive, not 0".into();
                    ConditionVerdict::new(Status::Violated, Some(1.0 / a), diag)
                }
                (None, None) => ConditionVerdict::inconclusive("empty tail model"),
            };
        }
    }

    // A finite window is always semibounded, so only a declared extent counts.
    let extent = seq.extent();
    if extent == Extent::Unknown && (pos.is_empty() != neg.is_empty()) {
        diag.note = "extent unknown and one side empty".into();
        return ConditionVerdict::new(Status::Inconclusive, None, diag);
    }
    match extent {
        Extent::BoundedBelow | Extent::BoundedAbove => {
            let side = if extent == Extent::BoundedBelow { &pos } else { &neg };
            let Some(d) = side_density(side) else {
                diag.note = format!("need {MIN_SIDE_POINTS} points on the unbounded side");
                return ConditionVerdict::new(Status::Inconclusive, None, diag);
            };
            diag.tail_exponent = d.exponent;
            diag.uncertainty = Some(d.uncertainty);
            let scale = side.last().map(|m| side.len() as f64 / m).unwrap_or(0.0);
            let decays = d.exponent.is_some_and(|q| q < -policy.delta);
            if decays {
                diag.note = "semibounded: n/x_n → 0".into();
                ConditionVerdict::new(Status::Satisfied, Some(0.0), diag)
            } else if d.limit > 3.0 * d.uncertainty + 1e-6 * scale && d.exponent.is_some_and(|q| q >= -policy.delta) {
                diag.note = "semibounded with positive density".into();
                ConditionVerdict::new(Status::Violated, Some(d.limit), diag)
            } else {
                diag.note = "semibounded density undecided".into();
                ConditionVerdict::new(Status::Inconclusive, Some(d.limit), diag)
            }
        }
        _ => {
            let (Some(p), Some(n)) = (side_density(&pos), side_density(&neg)) else {
                diag.note = format!("need {MIN_SIDE_POINTS} points on each side");
                return ConditionVerdict::new(Status::Inconclusive, None, diag);
            };
            let diff = (p.limit - n.limit).abs();
            let u = p.uncertainty + n.uncertainty;
            let scale = p.limit.abs().max(n.limit.abs());
            diag.partial_values = alloc::vec![p.limit, n.limit];
            diag.uncertainty = Some(u);
            if diff <= u + 1e-9 * scale {
                diag.note = "densities agree".into();
                ConditionVerdict::new(Status::Satisfied, Some(0.5 * (p.limit + n.limit)), diag)
            } else if diff > 3.0 * u + 1e-6 * scale {
                diag.note = format!("densities differ: {} vs {}", p.limit, n.limit);
                ConditionVerdict::new(Status::Violated, Some(p.limit), diag)
            } else {
                diag.note = "density difference within uncertainty".into();
                ConditionVerdict::new(Status::Inconclusive, Some(p.limit), diag)
            }
        }
    }
}

/// Radius up to which series terms are trusted: the full product radius
/// when both products close their tails analytically, half of it otherwise.
fn term_window(h0: &CanonicalProduct, hg: &CanonicalProduct, policy: &TruncationPolicy) -> f64 {
    if let Some(w) = policy.window {
        return w;
    }
    let r = h0.effective_radius(policy).min(hg.effective_radius(policy));
    let closed = |s: &SpectrumSequence| s.tail().and_then(|t| t.balanced_slope()).is_some();
    if policy.tail_correction && closed(h0.zeros()) && closed(hg.zeros()) {
        r
    } else {
        r / 2.0
    }
}

/// Series terms at the points of `seq_gamma` inside the window, ordered by
/// modulus, as `(x_n, membership term)`.
fn membership_terms(
    seq0: &SpectrumSequence,
    seq_gamma: &SpectrumSequence,
    policy: &TruncationPolicy,
) -> Result<(Vec<(f64, f64)>, f64), ProductError> {
    let h0 = CanonicalProduct::new(seq0.clone());
    let hg = CanonicalProduct::new(seq_gamma.clone());
    let w = term_window(&h0, &hg, policy);
    let mut xs: Vec<f64> = seq_gamma.points().iter().copied().filter(|x| x.abs() <= w).collect();
    xs.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(b.total_cmp(a)));
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        let v = h0.value_real(x, policy)?;
        let d = hg.derivative_real(x, policy)?;
        out.push((x, 1.0 / (v * d).abs()));
    }
    Ok((out, w))
}

fn weighted(x: f64, term: f64, weighting: Weighting) -> f64 {
    match weighting {
        // at x = 0 the z-prefactor branch already supplies the x² factor
        Weighting::Assoc if x != 0.0 => term / (x * x),
        _ => term,
    }
}

fn c3_verdict(terms: &[(f64, f64)], window: f64, weighting: Weighting, policy: &TruncationPolicy) -> ConditionVerdict {
    let values: Vec<f64> = terms.iter().map(|&(x, t)| weighted(x, t, weighting)).collect();
    let mut diag = Diagnostics { window_terms: values.len(), window_radius: Some(window), ..Diagnostics::default() };
    let sum: f64 = values.iter().sum();
    let quarter = |k: usize| values[..values.len() * k / 4].iter().sum::<f64>();
    diag.partial_values = alloc::vec![quarter(1), quarter(2), quarter(3), sum];
    if values.iter().any(|v| !v.is_finite()) {
        diag.note = "non-finite series term".into();
        return ConditionVerdict::new(Status::Inconclusive, None, diag);
    }
    if values.len() < MIN_TERMS {
        diag.note = format!("{} terms in window, need {MIN_TERMS}", values.len());
        return ConditionVerdict::new(Status::Inconclusive, Some(sum), diag);
    }
    let range = outer_half(values.len());
    let ns: Vec<f64> = range.clone().map(|i| (i + 1) as f64).collect();
    let Some(p) = power_law_exponent(&ns, &values[range]) else {
        diag.note = "term exponent undefined".into();
        return ConditionVerdict::new(Status::Inconclusive, Some(sum), diag);
    };
    diag.tail_exponent = Some(p);
    let status = if p < -1.0 - policy.delta {
        diag.note = "terms decay faster than 1/n".into();
        Status::Satisfied
    } else if p >= -1.0 + policy.delta {
        diag.note = "terms decay no faster than 1/n".into();
        Status::Violated
    } else {
        diag.note = "term exponent within δ of −1".into();
        Status::Inconclusive
    };
    ConditionVerdict::new(status, Some(sum), diag)
}

fn require_interlaced(seq0: &SpectrumSequence, seq_gamma: &SpectrumSequence) -> Result<(), ConditionError> {
    let r = check_interlacing(seq0, seq_gamma);
    if let Some(p) = r.shared_point {
        return Err(ConditionError::ZeroOverlap(p));
    }
    if !r.interlaced {
        return Err(ConditionError::NotInterlaced);
    }
    Ok(())
}

/// (C3♯) under [`Weighting::Membership`], (C3♭) under [`Weighting::Assoc`].
pub fn check_c3(
    seq0: &SpectrumSequence,
    seq_gamma: &SpectrumSequence,
    weighting: Weighting,
    policy: &TruncationPolicy,
) -> Result<ConditionVerdict, ConditionError> {
    require_interlaced(seq0, seq_gamma)?;
    Ok(match membership_terms(seq0, seq_gamma, policy) {
        Ok((terms, w)) => c3_verdict(&terms, w, weighting, policy),
        Err(e) => ConditionVerdict::inconclusive(format!("{e}")),
    })
}

/// Unweighted (C3) terms `(x_n, 1/|h_0(x_n) h'_γ(x_n)|)` in order of
/// modulus, and the window they were taken from.
pub fn c3_terms(
    seq0: &SpectrumSequence,
    seq_gamma: &SpectrumSequence,
    policy: &TruncationPolicy,
) -> Result<(Vec<(f64, f64)>, f64), ConditionError> {
    require_interlaced(seq0, seq_gamma)?;
    Ok(membership_terms(seq0, seq_gamma, policy)?)
}

/// Combine the four verdicts.
pub fn overall(c1: Status, c2: Status, membership: Status, assoc: Status) -> Overall {
    use Status::*;
    if c1 == Violated || c2 == Violated || assoc == Violated {
        Overall::NotGeneralizedEntire
    } else if c1 == Satisfied && c2 == Satisfied && membership == Satisfied {
        Overall::Entire
    } else if c1 == Satisfied && c2 == Satisfied && assoc == Satisfied && membership == Violated {
        Overall::GeneralizedEntireOnly
    } else {
        Overall::Inconclusive
    }
}

/// Run (C1) and (C2) on `seq_gamma` and (C3) in both weightings.
pub fn classify(
    seq0: &SpectrumSequence,
    seq_gamma: &SpectrumSequence,
    policy: &TruncationPolicy,
) -> Result<Classification, ConditionError> {
    require_interlaced(seq0, seq_gamma)?;
    let c1 = check_c1(seq_gamma, policy);
    let c2 = check_c2(seq_gamma, policy);
    let (c3_membership, c3_assoc) = match membership_terms(seq0, seq_gamma, policy) {
        Ok((terms, w)) => {
            (c3_verdict(&terms, w, Weighting::Membership, policy), c3_verdict(&terms, w, Weighting::Assoc, policy))
        }
        Err(e) => (ConditionVerdict::inconclusive(format!("{e}")), ConditionVerdict::inconclusive(format!("{e}"))),
    };
    Ok(Classification {
        overall: overall(c1.status, c2.status, c3_membership.status, c3_assoc.status),
        c1,
        c2,
        c3_membership,
        c3_assoc,
    })
}
