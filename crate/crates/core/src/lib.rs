//! Spectral tests for entire operators and de Branges space numerics.
//!
//! Given the spectra of two selfadjoint extensions of a simple regular
//! symmetric operator with deficiency indices (1,1), this crate decides
//! whether the operator is entire, entire only in the generalized sense,
//! or neither. The supporting objects are computed directly:
//!
//! * [`spectra`]: validated spectrum windows with optional affine tails,
//!   sign splits, interlacing and the semibounded ordering test.
//! * [`products`]: genus-0 canonical products with symmetric cutoff and
//!   analytic tail continuation.
//! * [`conditions`]: the density, symmetric-sum and weighted-series tests
//!   and the final [`conditions::classify`].
//! * [`dbspace`]: Hermite–Biehler functions, structure functions, the
//!   reproducing kernel, phase, spectra of the selfadjoint extensions,
//!   spectral weights and measures, and the rotation `−s_γ − i s_0`.
//! * [`inverse`]: the two-spectra construction `e = −h₁ − iσh₂`.
//! * [`models`]: closed-form fixtures.
//!
//! Infinite sequences are represented as finite windows plus an optional
//! tail model; every verdict is tri-state and degrades to
//! [`conditions::Status::Inconclusive`] when the window cannot decide.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod conditions;
pub mod dbspace;
pub mod inverse;
pub mod models;
pub mod products;
pub mod series;
pub mod special;
pub mod spectra;

pub use num_complex::Complex64;

pub use conditions::{
    c3_terms, check_c1, check_c2, check_c3, classify, overall, Classification, ConditionError, ConditionVerdict,
    Diagnostics, Overall, Status, Weighting,
};
pub use dbspace::{
    discrete_inner, eigenfunction, eigenfunction_section, find_spectrum, find_spectrum_hinted, kernel, kernel_section,
    measure_at, phase, rotate, rotation_bounds, s_beta, s_beta_real, spectral_measure, spectral_measure_of,
    spectral_weight, spectral_weight_checked, verify_hb, AtanModel, DbError, EntireEvaluable, EntireFunction,
    ExpLinear, HbGrid, HbReport, HermiteBiehlerFunction, InnerProduct, Kind, Polynomial, SpectralData, WeightCheck,
};
pub use inverse::{construct_e, construct_e_on, roundtrip_verify, InverseError, InverseResult, RoundtripReport};
pub use models::{model, ModelDescriptor, ModelError, MODEL_NAMES};
pub use products::{eval_derivative, eval_product, CanonicalProduct, Estimate, ProductError, TruncationPolicy};
pub use spectra::{
    check_c0, check_interlacing, split_signed, validate_sequence, Extent, InterlacingReport, SignSplit, SpectraError,
    SpectrumSequence, TailModel,
};
