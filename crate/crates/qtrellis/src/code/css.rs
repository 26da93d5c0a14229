//! Generator sets for full and CSS-split trellises.

use super::profile::{profile, TrellisProfile};
use super::tof::{to_tof, TofGenerators};
use super::{CodeError, StabilizerCode};
use crate::ffield::{Field, FpMatrix};
use crate::pauli::PauliString;
use serde::{Deserialize, Serialize};

/// Which trellis of a code to work with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    /// All stabilizers as checks; paths are the normalizer.
    Full,
    /// X-type stabilizers as checks; paths are Z-type strings.
    X,
    /// Z-type stabilizers as checks; paths are X-type strings.
    Z,
}

impl std::str::FromStr for Split {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Split::Full),
            "x" => Ok(Split::X),
            "z" => Ok(Split::Z),
            _ => Err(format!("unknown split {s:?}, expected full, x or z")),
        }
    }
}

/// Site labels that can occur on the edges of a trellis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelAxis {
    Any,
    ZOnly,
    XOnly,
}

/// Checks and path generators describing one syndrome trellis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrellisSpec {
    pub field: Field,
    pub n: usize,
    pub split: Split,
    /// Generators whose partial syndromes label the vertices.
    pub checks: Vec<PauliString>,
    /// Position of each check among the code's stabilizers.
    pub check_indices: Vec<usize>,
    /// Independent generators of the group of zero-syndrome paths.
    pub paths: Vec<PauliString>,
    pub label_axis: LabelAxis,
}

impl TrellisSpec {
    pub fn full(code: &StabilizerCode) -> Self {
        TrellisSpec {
            field: code.field(),
            n: code.n(),
            split: Split::Full,
            checks: code.stabilizers().to_vec(),
            check_indices: (0..code.stabilizers().len()).collect(),
            paths: code.normalizer().to_vec(),
            label_axis: LabelAxis::Any,
        }
    }

    pub fn new(code: &StabilizerCode, split: Split) -> Result<Self, CodeError> {
        match split {
            Split::Full => Ok(Self::full(code)),
            Split::X => Ok(css_split(code)?.0),
            Split::Z => Ok(css_split(code)?.1),
        }
    }

    /// Generators without any checks: a single path carrying the identity.
    pub fn trivial(field: Field, n: usize) -> Self {
        TrellisSpec {
            field,
            n,
            split: Split::Full,
            checks: vec![],
            check_indices: vec![],
            paths: vec![],
            label_axis: LabelAxis::Any,
        }
    }

    pub fn tof(&self) -> TofGenerators {
        to_tof(&self.paths)
    }

    /// Profile of the minimal trellis, including check dimensions.
    pub fn profile(&self) -> TrellisProfile {
        let mut prof = profile(&self.tof(), self.n, self.field.p());
        if !self.checks.is_empty() {
            let ct = to_tof(&self.checks);
            prof.check_past = Some((0..=self.n).map(|i| ct.dim_past(i)).collect());
            prof.check_future = Some((0..=self.n).map(|i| ct.dim_future(i)).collect());
        }
        prof
    }
}

impl StabilizerCode {
    pub fn profile(&self, split: Split) -> Result<TrellisProfile, CodeError> {
        Ok(TrellisSpec::new(self, split)?.profile())
    }
}

/// Splits a CSS code into its X-check and Z-check trellis specifications.
pub fn css_split(code: &StabilizerCode) -> Result<(TrellisSpec, TrellisSpec), CodeError> {
    let f = code.field();
    let n = code.n();
    let mut x_idx = Vec::new();
    let mut z_idx = Vec::new();
    for (i, s) in code.stabilizers().iter().enumerate() {
        if s.is_x_type() {
            x_idx.push(i);
        } else if s.is_z_type() {
            z_idx.push(i);
        } else {
            return Err(CodeError::NotCss(i));
        }
    }
    let part = |idx: Vec<usize>, split: Split| {
        let checks: Vec<PauliString> = idx.iter().map(|&i| code.stabilizers()[i].clone()).collect();
        let rows: Vec<Vec<u8>> = checks
            .iter()
            .map(|c| if split == Split::X { c.x_exps().to_vec() } else { c.z_exps().to_vec() })
            .collect();
        let kernel = if rows.is_empty() {
            FpMatrix::identity(f, n).row_vecs()
        } else {
            FpMatrix::from_residue_rows(f, n, &rows).kernel()
        };
        let paths = kernel
            .into_iter()
            .map(|v| {
                let zero = vec![0u8; n];
                if split == Split::X {
                    PauliString::from_exponents(f, zero, v).unwrap()
                } else {
                    PauliString::from_exponents(f, v, zero).unwrap()
                }
            })
            .collect();
        TrellisSpec {
            field: f,
            n,
            split,
            checks,
            check_indices: idx,
            paths,
            label_axis: if split == Split::X { LabelAxis::ZOnly } else { LabelAxis::XOnly },
        }
    };
    Ok((part(x_idx, Split::X), part(z_idx, Split::Z)))
}
