//! Syndrome decoding: weights, pure errors, Viterbi, and the full, CSS and
//! two-stage block pipelines.

mod block;
mod pure;
mod viterbi;
mod weights;

pub use block::BlockDecoder;
pub use pure::{pure_error, PureErrors};
pub use viterbi::{viterbi, viterbi_with, PathResult, ViterbiOptions, Workspace};
pub use weights::{weights_from_channel, WeightTable};

use crate::code::{CodeError, Split, StabilizerCode, TrellisSpec};
use crate::pauli::{PauliError, PauliString};
use crate::trellis::Trellis;
use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("syndrome has {found} entries, expected {expected}")]
    SyndromeLength { found: usize, expected: usize },
    #[error("no pure error reproduces the syndrome; the checks are inconsistent")]
    Unsolvable,
    #[error("every path has infinite weight")]
    NoFinitePath,
    #[error("invalid weights: {0}")]
    BadWeights(String),
    #[error("trellis does not fit the code: {0}")]
    Mismatch(String),
    #[error("code does not have the required structure: {0}")]
    WrongStructure(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Success,
    LogicalFailure,
    InternalInconsistency,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub correction: PauliString,
    pub path_weight: f64,
    pub classification: Classification,
    /// One entry per logical generator, in the code's order. Against a known
    /// error these mark the logicals the residual fails to commute with;
    /// otherwise they give the logical class of the correction itself.
    pub logical_flags: Vec<bool>,
}

/// Classifies the residual `error · correction⁻¹` left after applying a
/// correction, together with its commutation flags against the logicals.
pub fn classify_residual(
    code: &StabilizerCode,
    true_error: &PauliString,
    correction: &PauliString,
) -> Result<(Classification, Vec<bool>), DecodeError> {
    let r = true_error.mul(&correction.inverse())?;
    let flags = logical_flags(code, &r)?;
    let class = if code.syndrome(&r)?.iter().any(|&v| v != 0) {
        Classification::InternalInconsistency
    } else if flags.iter().any(|&f| f) {
        Classification::LogicalFailure
    } else {
        Classification::Success
    };
    Ok((class, flags))
}

fn logical_flags(code: &StabilizerCode, p: &PauliString) -> Result<Vec<bool>, DecodeError> {
    code.logicals().iter().map(|l| Ok(l.sym_inner(p)? != 0)).collect()
}

/// Anything that turns a full syndrome into a correction.
pub trait SyndromeDecoder: Sync {
    fn code(&self) -> &StabilizerCode;
    /// A correction for the syndrome `s` over all stabilizers of the code.
    fn correct(&self, s: &[u8], ws: &mut Workspace) -> Result<PathResult, DecodeError>;

    /// Decodes `s` and checks the correction against it.
    fn decode(&self, s: &[u8]) -> Result<DecodeOutcome, DecodeError> {
        let r = self.correct(s, &mut Workspace::new())?;
        let ok = self.code().syndrome(&r.correction)? == s;
        Ok(DecodeOutcome {
            logical_flags: logical_flags(self.code(), &r.correction)?,
            correction: r.correction,
            path_weight: r.weight,
            classification: if ok { Classification::Success } else { Classification::InternalInconsistency },
        })
    }

    /// Decodes the syndrome of `error` and classifies the residual.
    fn decode_error(&self, error: &PauliString) -> Result<DecodeOutcome, DecodeError> {
        let s = self.code().syndrome(error)?;
        let r = self.correct(&s, &mut Workspace::new())?;
        let (classification, logical_flags) = classify_residual(self.code(), error, &r.correction)?;
        Ok(DecodeOutcome { correction: r.correction, path_weight: r.weight, classification, logical_flags })
    }
}

/// Viterbi decoding on one trellis of a code. For a CSS part only the
/// matching stabilizers are used, and the correction lies on that axis.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    code: Cow<'a, StabilizerCode>,
    trellis: Cow<'a, Trellis>,
    check_indices: Vec<usize>,
    pure: PureErrors,
    weights: WeightTable,
    opts: ViterbiOptions,
}

impl<'a> Decoder<'a> {
    /// `weights` is a full-label table; it is folded onto the trellis axis.
    pub fn new(
        code: &'a StabilizerCode,
        trellis: &'a Trellis,
        weights: &WeightTable,
        opts: ViterbiOptions,
    ) -> Result<Self, DecodeError> {
        Self::from_cow(Cow::Borrowed(code), Cow::Borrowed(trellis), weights, opts)
    }

    /// As [`Decoder::new`], taking ownership of the code and trellis.
    pub fn owned(
        code: StabilizerCode,
        trellis: Trellis,
        weights: &WeightTable,
        opts: ViterbiOptions,
    ) -> Result<Decoder<'static>, DecodeError> {
        Decoder::from_cow(Cow::Owned(code), Cow::Owned(trellis), weights, opts)
    }

    fn from_cow(
        code: Cow<'a, StabilizerCode>,
        trellis: Cow<'a, Trellis>,
        weights: &WeightTable,
        opts: ViterbiOptions,
    ) -> Result<Self, DecodeError> {
        let spec = TrellisSpec::new(&code, trellis.split())?;
        if trellis.n() != code.n() || trellis.p() != code.p() || trellis.check_count() != spec.checks.len() {
            return Err(DecodeError::Mismatch(format!(
                "trellis has n = {}, p = {}, {} checks; code part has n = {}, p = {}, {} checks",
                trellis.n(),
                trellis.p(),
                trellis.check_count(),
                code.n(),
                code.p(),
                spec.checks.len()
            )));
        }
        let pure = PureErrors::new(code.field(), code.n(), &spec.checks, spec.label_axis)?;
        Ok(Decoder {
            weights: weights.for_split(trellis.split()),
            code,
            trellis,
            check_indices: spec.check_indices,
            pure,
            opts,
        })
    }

    pub fn trellis(&self) -> &Trellis {
        &self.trellis
    }
    pub fn split(&self) -> Split {
        self.trellis.split()
    }
    pub fn weights(&self) -> &WeightTable {
        &self.weights
    }

    /// Decodes a syndrome given on this trellis's checks only.
    pub fn correct_part(&self, s_part: &[u8], ws: &mut Workspace) -> Result<PathResult, DecodeError> {
        self.correct_part_with(s_part, &self.weights, ws)
    }

    /// As [`Decoder::correct_part`] with a different axis-folded weight table.
    pub fn correct_part_with(
        &self,
        s_part: &[u8],
        weights: &WeightTable,
        ws: &mut Workspace,
    ) -> Result<PathResult, DecodeError> {
        let t = self.pure.for_syndrome(s_part)?;
        viterbi_with(&self.trellis.shift(&t), weights, self.opts, ws)
    }

    fn part_syndrome(&self, s: &[u8]) -> Result<Vec<u8>, DecodeError> {
        let m = self.code.stabilizers().len();
        if s.len() != m {
            return Err(DecodeError::SyndromeLength { found: s.len(), expected: m });
        }
        Ok(self.check_indices.iter().map(|&j| s[j]).collect())
    }
}

impl SyndromeDecoder for Decoder<'_> {
    fn code(&self) -> &StabilizerCode {
        &self.code
    }
    fn correct(&self, s: &[u8], ws: &mut Workspace) -> Result<PathResult, DecodeError> {
        self.correct_part(&self.part_syndrome(s)?, ws)
    }
}

/// Decodes the X-check and Z-check parts of a CSS code independently and
/// multiplies the corrections.
#[derive(Debug, Clone)]
pub struct CssDecoder<'a> {
    x: Decoder<'a>,
    z: Decoder<'a>,
}

impl<'a> CssDecoder<'a> {
    pub fn new(
        code: &'a StabilizerCode,
        x_trellis: &'a Trellis,
        z_trellis: &'a Trellis,
        weights: &WeightTable,
        opts: ViterbiOptions,
    ) -> Result<Self, DecodeError> {
        if x_trellis.split() != Split::X || z_trellis.split() != Split::Z {
            return Err(DecodeError::Mismatch("expected an X-part and a Z-part trellis".into()));
        }
        Ok(CssDecoder {
            x: Decoder::new(code, x_trellis, weights, opts)?,
            z: Decoder::new(code, z_trellis, weights, opts)?,
        })
    }
    pub fn parts(&self) -> (&Decoder<'a>, &Decoder<'a>) {
        (&self.x, &self.z)
    }
}

impl SyndromeDecoder for CssDecoder<'_> {
    fn code(&self) -> &StabilizerCode {
        self.x.code()
    }
    fn correct(&self, s: &[u8], ws: &mut Workspace) -> Result<PathResult, DecodeError> {
        let a = self.x.correct(s, ws)?;
        let b = self.z.correct(s, ws)?;
        Ok(PathResult { correction: a.correction.mul(&b.correction)?, weight: a.weight + b.weight })
    }
}

/// Full-trellis decode of syndrome `s`.
pub fn decode(
    code: &StabilizerCode,
    trellis: &Trellis,
    s: &[u8],
    weights: &WeightTable,
) -> Result<DecodeOutcome, DecodeError> {
    if trellis.split() != Split::Full {
        return Err(DecodeError::Mismatch("a CSS part trellis needs css_decode".into()));
    }
    Decoder::new(code, trellis, weights, ViterbiOptions::default())?.decode(s)
}

/// CSS split decode of syndrome `s`.
pub fn css_decode(
    code: &StabilizerCode,
    x_trellis: &Trellis,
    z_trellis: &Trellis,
    s: &[u8],
    weights: &WeightTable,
) -> Result<DecodeOutcome, DecodeError> {
    CssDecoder::new(code, x_trellis, z_trellis, weights, ViterbiOptions::default())?.decode(s)
}

/// Minimum weight over the coset `T·N` by enumerating all of `N`, where `N`
/// is spanned by `paths`. Exponential; meant as a reference for small codes.
pub fn brute_force_min(t: &PauliString, paths: &[PauliString], weights: &WeightTable) -> f64 {
    let p = t.p();
    let mut coef = vec![0u8; paths.len()];
    let mut best = f64::INFINITY;
    loop {
        let mut e = t.clone();
        for (g, &c) in paths.iter().zip(&coef) {
            if c != 0 {
                e.mul_assign_unchecked(g, c);
            }
        }
        best = best.min(weights.total(&e));
        let mut k = 0;
        loop {
            if k == coef.len() {
                return best;
            }
            coef[k] += 1;
            if (coef[k] as u32) < p {
                break;
            }
            coef[k] = 0;
            k += 1;
        }
    }
}
