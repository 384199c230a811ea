//! Sequence and function files.
//!
//! Sequences are JSON objects
//! `{"label", "points", "tail": {"type": "affine", ...} | null, "extent"?}`
//! or CSV text with one number per line (`#` starts a comment).

use std::fs;
use std::path::{Path, PathBuf};

use debranges::{
    construct_e, AtanModel, Complex64, EntireEvaluable, ExpLinear, Extent, HermiteBiehlerFunction, InverseError,
    Polynomial, SpectraError, SpectrumSequence, TailModel, TruncationPolicy,
};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}:{line}: {message}")]
    Csv { path: PathBuf, line: usize, message: String },
    #[error("{path}: {source}")]
    Spectra { path: PathBuf, source: SpectraError },
    #[error("{path}: unknown extent {value:?}")]
    Extent { path: PathBuf, value: String },
    #[error("{path}: {source}")]
    Construct { path: PathBuf, source: InverseError },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    #[serde(default)]
    pub label: Option<String>,
    pub points: Vec<f64>,
    #[serde(default)]
    pub tail: Option<TailFile>,
    #[serde(default)]
    pub extent: Option<String>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum TailFile {
    Affine { alpha_pos: Option<f64>, alpha_neg: Option<f64>, offset: f64 },
}

/// Raw bytes plus the parsed sequence; the bytes feed the report digest.
pub struct Loaded<T> {
    pub bytes: Vec<u8>,
    pub value: T,
}

fn read(path: &Path) -> Result<Vec<u8>, InputError> {
    fs::read(path).map_err(|source| InputError::Io { path: path.to_path_buf(), source })
}

pub fn parse_extent(s: &str) -> Option<Extent> {
    Some(match s {
        "two_sided" => Extent::TwoSided,
        "bounded_below" => Extent::BoundedBelow,
        "bounded_above" => Extent::BoundedAbove,
        "unknown" => Extent::Unknown,
        _ => return None,
    })
}

pub fn extent_name(e: Extent) -> &'static str {
    match e {
        Extent::TwoSided => "two_sided",
        Extent::BoundedBelow => "bounded_below",
        Extent::BoundedAbove => "bounded_above",
        Extent::Unknown => "unknown",
    }
}

impl SequenceFile {
    pub fn into_sequence(self, path: &Path) -> Result<SpectrumSequence, InputError> {
        let spectra = |source| InputError::Spectra { path: path.to_path_buf(), source };
        let tail = match self.tail {
            None => None,
            Some(TailFile::Affine { alpha_pos, alpha_neg, offset }) => {
                Some(TailModel::affine(alpha_pos, alpha_neg, offset).map_err(spectra)?)
            }
        };
        let mut seq = SpectrumSequence::new(self.points, tail).map_err(spectra)?;
        if let Some(label) = self.label {
            seq = seq.with_label(label);
        }
        if let Some(name) = self.extent {
            let extent =
                parse_extent(&name).ok_or_else(|| InputError::Extent { path: path.to_path_buf(), value: name })?;
            seq = seq.with_extent(extent).map_err(spectra)?;
        }
        Ok(seq)
    }
}

fn parse_csv(text: &str, path: &Path) -> Result<Vec<f64>, InputError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim().trim_end_matches(',');
        if line.is_empty() {
            continue;
        }
        let err = |message: String| InputError::Csv { path: path.to_path_buf(), line: i + 1, message };
        let v: f64 = line.parse().map_err(|_| err(format!("not a number: {line:?}")))?;
        if !v.is_finite() {
            return Err(err(format!("non-finite value {line:?}")));
        }
        out.push(v);
    }
    Ok(out)
}

/// Parse a sequence from text; JSON when it starts with `{`, CSV otherwise.
pub fn parse_sequence(text: &str, path: &Path) -> Result<SpectrumSequence, InputError> {
    if text.trim_start().starts_with('{') {
        let file: SequenceFile =
            serde_json::from_str(text).map_err(|source| InputError::Json { path: path.to_path_buf(), source })?;
        file.into_sequence(path)
    } else {
        let points = parse_csv(text, path)?;
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        SpectrumSequence::new(points, None)
            .map(|s| s.with_label(label))
            .map_err(|source| InputError::Spectra { path: path.to_path_buf(), source })
    }
}

pub fn load_sequence(path: &Path) -> Result<Loaded<SpectrumSequence>, InputError> {
    let bytes = read(path)?;
    let text = String::from_utf8_lossy(&bytes);
    let value = parse_sequence(&text, path)?;
    Ok(Loaded { bytes, value })
}

/// An entire function given in a file.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EFile {
    /// `Σ c_k z^k`, coefficients `[re, im]` in ascending degree.
    Polynomial { coeffs: Vec<[f64; 2]> },
    /// `e^{−iaz}`.
    ExpLinear { a: f64 },
    /// `e^{−iz}(z + i)`.
    Atan,
    /// Built from two interlaced spectra.
    TwoSpectra { seq1: SequenceFile, seq2: SequenceFile },
}

pub fn load_efile(path: &Path, policy: &TruncationPolicy) -> Result<Loaded<HermiteBiehlerFunction>, InputError> {
    let bytes = read(path)?;
    let file: EFile =
        serde_json::from_slice(&bytes).map_err(|source| InputError::Json { path: path.to_path_buf(), source })?;
    let value = match file {
        EFile::Polynomial { coeffs } => HermiteBiehlerFunction::new(EntireEvaluable::new(Polynomial {
            coeffs: coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
        })),
        EFile::ExpLinear { a } => HermiteBiehlerFunction::new(EntireEvaluable::new(ExpLinear { a })),
        EFile::Atan => HermiteBiehlerFunction::new(EntireEvaluable::new(AtanModel)),
        EFile::TwoSpectra { seq1, seq2 } => {
            let (s1, s2) = (seq1.into_sequence(path)?, seq2.into_sequence(path)?);
            construct_e(&s1, &s2, policy)
                .map_err(|source| InputError::Construct { path: path.to_path_buf(), source })?
                .e
        }
    };
    Ok(Loaded { bytes, value })
}
