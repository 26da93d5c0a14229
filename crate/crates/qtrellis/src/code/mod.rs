//! Stabilizer codes: validation, normalizer and logical operators, trellis
//! oriented form, profiles, CSS splitting, built-in families and file I/O.

mod builtin;
mod css;
mod io;
mod numbering;
mod profile;
mod tof;

pub use builtin::{builtin, builtin_names, color_488, color_666, rotated_surface, steane_level2_parts};
pub use css::{css_split, LabelAxis, Split, TrellisSpec};
pub use io::{parse_code_file, parse_symplectic_rows, write_code_file};
pub use numbering::greedy_numbering;
pub use profile::{profile, SectionConfig, TrellisProfile};
pub use tof::{has_left_right_property, to_tof, TofGenerators};

use crate::ffield::{Field, FpMatrix};
use crate::pauli::{syndrome, PauliError, PauliString, SyndromeVector};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("no stabilizer generators given")]
    Empty,
    #[error("stabilizer {index} acts on {found} qudits, expected {expected}")]
    LengthMismatch { index: usize, found: usize, expected: usize },
    #[error("stabilizers {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("stabilizers are dependent: rank {rank} for {count} generators")]
    Dependent { rank: usize, count: usize },
    #[error("stabilizer {0} has fewer than two non-identity sites")]
    LowWeight(usize),
    #[error("k = 0 unsupported: the code space is one-dimensional")]
    ZeroLogical,
    #[error("invalid logical operators: {0}")]
    BadLogicals(String),
    #[error("code is not CSS: stabilizer {0} mixes X and Z exponents")]
    NotCss(usize),
    #[error("unknown built-in code {0:?}")]
    UnknownCode(String),
    #[error("invalid distance {0}: expected an odd integer at least 3")]
    InvalidDistance(usize),
    #[error("invalid qudit order: {0}")]
    BadOrder(String),
    #[error("code file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// A validated stabilizer code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerCode {
    field: Field,
    n: usize,
    k: usize,
    stabilizers: Vec<PauliString>,
    logicals: Vec<PauliString>,
    normalizer: Vec<PauliString>,
    qudit_order: Vec<usize>,
}

fn symplectic_rank(field: Field, rows: &[PauliString]) -> usize {
    let n = rows.first().map_or(0, |r| r.n());
    FpMatrix::from_residue_rows(field, 2 * n, &rows.iter().map(|r| r.to_symplectic()).collect::<Vec<_>>())
        .rank()
}

impl StabilizerCode {
    /// Validates the generators and derives the normalizer and logical operators.
    ///
    /// Logical operators, if supplied, must be `2k` strings commuting with
    /// the stabilizers and independent of them modulo the stabilizer group.
    pub fn new(stabilizers: Vec<PauliString>, logicals: Option<Vec<PauliString>>) -> Result<Self, CodeError> {
        let first = stabilizers.first().ok_or(CodeError::Empty)?;
        let field = first.field();
        let n = first.n();
        for (i, s) in stabilizers.iter().enumerate() {
            assert_eq!(s.field(), field, "stabilizers over different fields");
            if s.n() != n {
                return Err(CodeError::LengthMismatch { index: i, found: s.n(), expected: n });
            }
            if s.weight() < 2 {
                return Err(CodeError::LowWeight(i));
            }
        }
        for i in 0..stabilizers.len() {
            for j in i + 1..stabilizers.len() {
                if stabilizers[i].sym_inner(&stabilizers[j])? != 0 {
                    return Err(CodeError::NonCommuting(i, j));
                }
            }
        }
        let rank = symplectic_rank(field, &stabilizers);
        if rank != stabilizers.len() {
            return Err(CodeError::Dependent { rank, count: stabilizers.len() });
        }
        if stabilizers.len() >= n {
            return Err(CodeError::ZeroLogical);
        }
        let k = n - stabilizers.len();

        let logicals = match logicals {
            Some(l) => {
                check_logicals(field, n, k, &stabilizers, &l)?;
                l
            }
            None => extract_logicals(field, n, &stabilizers),
        };
        let mut normalizer = stabilizers.clone();
        normalizer.extend(logicals.iter().cloned());
        Ok(StabilizerCode { field, n, k, stabilizers, logicals, normalizer, qudit_order: (1..=n).collect() })
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn p(&self) -> u32 {
        self.field.p()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }
    /// A basis of S⊥: the stabilizers followed by the logical generators.
    pub fn normalizer(&self) -> &[PauliString] {
        &self.normalizer
    }
    /// Logical generators ordered `X̄_1, Z̄_1, X̄_2, Z̄_2, ...` when derived
    /// automatically; as supplied otherwise.
    pub fn logicals(&self) -> &[PauliString] {
        &self.logicals
    }
    /// Original 1-based label of the qudit at each position.
    pub fn qudit_order(&self) -> &[usize] {
        &self.qudit_order
    }

    /// True when every stabilizer is a pure X or pure Z string.
    pub fn is_css(&self) -> bool {
        self.stabilizers.iter().all(|s| s.is_x_type() || s.is_z_type())
    }

    pub fn syndrome(&self, error: &PauliString) -> Result<SyndromeVector, PauliError> {
        syndrome(&self.stabilizers, error)
    }

    /// Reorders the qudits: new position `j` (1-based) holds the qudit at
    /// current position `order[j-1]`.
    pub fn permuted(&self, order: &[usize]) -> Result<StabilizerCode, CodeError> {
        let zero_based = check_permutation(order, self.n)?;
        let perm = |v: &[PauliString]| v.iter().map(|s| s.permuted(&zero_based)).collect::<Vec<_>>();
        Ok(StabilizerCode {
            field: self.field,
            n: self.n,
            k: self.k,
            stabilizers: perm(&self.stabilizers),
            logicals: perm(&self.logicals),
            normalizer: perm(&self.normalizer),
            qudit_order: zero_based.iter().map(|&o| self.qudit_order[o]).collect(),
        })
    }
}

/// Checks a 1-based permutation of `{1..n}` and converts it to 0-based.
pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<Vec<usize>, CodeError> {
    if order.len() != n {
        return Err(CodeError::BadOrder(format!("expected {n} entries, got {}", order.len())));
    }
    let mut seen = vec![false; n];
    for &o in order {
        if o == 0 || o > n || seen[o - 1] {
            return Err(CodeError::BadOrder(format!("entry {o} is out of range or repeated")));
        }
        seen[o - 1] = true;
    }
    Ok(order.iter().map(|&o| o - 1).collect())
}

/// Basis of the symplectic complement `{v : ⟨s, v⟩ = 0 for all s}`.
pub(crate) fn symplectic_complement(field: Field, n: usize, gens: &[PauliString]) -> Vec<PauliString> {
    // ⟨s, v⟩ = Σ s.x·v.z − s.z·v.x, so the row acting on (v.x | v.z) is (−s.z | s.x).
    let rows: Vec<Vec<u8>> = gens
        .iter()
        .map(|s| {
            let mut r: Vec<u8> = s.z_exps().iter().map(|&b| field.neg(b)).collect();
            r.extend_from_slice(s.x_exps());
            r
        })
        .collect();
    FpMatrix::from_residue_rows(field, 2 * n, &rows)
        .kernel()
        .into_iter()
        .map(|v| PauliString::from_symplectic(field, &v))
        .collect()
}

fn extract_logicals(field: Field, n: usize, stabilizers: &[PauliString]) -> Vec<PauliString> {
    let kernel = symplectic_complement(field, n, stabilizers);
    // Keep kernel vectors that are new modulo the stabilizer span.
    let mut span = stabilizers.to_vec();
    let mut rank = span.len();
    let mut candidates = Vec::new();
    for v in kernel {
        span.push(v.clone());
        let r = symplectic_rank(field, &span);
        if r > rank {
            rank = r;
            candidates.push(v);
        } else {
            span.pop();
        }
    }
    // Symplectic Gram-Schmidt over the quotient S⊥/S.
    let mut out = Vec::with_capacity(candidates.len());
    while let Some(u) = candidates.first().cloned() {
        candidates.remove(0);
        let j = candidates
            .iter()
            .position(|w| u.sym_inner(w).unwrap() != 0)
            .expect("symplectic form is nondegenerate on S⊥/S");
        let w = candidates.remove(j);
        let v = w.pow(field.inv(u.sym_inner(&w).unwrap()));
        for c in candidates.iter_mut() {
            // c ← c − ⟨c,v⟩·u + ⟨c,u⟩·v makes c orthogonal to both.
            let cv = c.sym_inner(&v).unwrap();
            let cu = c.sym_inner(&u).unwrap();
            c.mul_assign_unchecked(&u, field.neg(cv));
            c.mul_assign_unchecked(&v, cu);
        }
        out.push(u);
        out.push(v);
    }
    out
}

fn check_logicals(
    field: Field,
    n: usize,
    k: usize,
    stabilizers: &[PauliString],
    logicals: &[PauliString],
) -> Result<(), CodeError> {
    if logicals.len() != 2 * k {
        return Err(CodeError::BadLogicals(format!("expected {} operators, got {}", 2 * k, logicals.len())));
    }
    for (i, l) in logicals.iter().enumerate() {
        if l.n() != n {
            return Err(CodeError::BadLogicals(format!("operator {i} has length {}", l.n())));
        }
        if let Some(j) = stabilizers.iter().position(|s| s.sym_inner(l).unwrap() != 0) {
            return Err(CodeError::BadLogicals(format!("operator {i} anticommutes with stabilizer {j}")));
        }
    }
    let mut all = stabilizers.to_vec();
    all.extend(logicals.iter().cloned());
    if symplectic_rank(field, &all) != n + k {
        return Err(CodeError::BadLogicals("operators are dependent modulo the stabilizers".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli;

    fn q(s: &str) -> PauliString {
        parse_pauli(Field::binary(), s).unwrap()
    }

    fn code(gens: &[&str]) -> Result<StabilizerCode, CodeError> {
        StabilizerCode::new(gens.iter().map(|s| q(s)).collect(), None)
    }

    #[test]
    fn five_qubit_code_parameters() {
        let c = code(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap();
        assert_eq!((c.n(), c.k()), (5, 1));
        assert_eq!(c.normalizer().len(), 6);
        assert!(!c.is_css());
        for s in c.stabilizers() {
            for g in c.normalizer() {
                assert_eq!(s.sym_inner(g).unwrap(), 0);
            }
        }
        let l = c.logicals();
        assert_eq!(l[0].sym_inner(&l[1]).unwrap(), 1);
    }

    #[test]
    fn rejects_invalid_generator_sets() {
        assert_eq!(code(&["XX", "ZZ"]), Err(CodeError::ZeroLogical));
        assert_eq!(code(&["XXI", "ZII"]), Err(CodeError::LowWeight(1)));
        assert_eq!(code(&["XXI", "ZIZ"]), Err(CodeError::NonCommuting(0, 1)));
        assert_eq!(code(&["XXII", "XXII"]), Err(CodeError::Dependent { rank: 1, count: 2 }));
        assert_eq!(StabilizerCode::new(vec![], None), Err(CodeError::Empty));
    }

    #[test]
    fn qutrit_logicals_pair_to_one() {
        let f3 = Field::new(3).unwrap();
        let gens = vec![
            parse_pauli(f3, "X1.Z0 X1.Z0 X1.Z0").unwrap(),
            parse_pauli(f3, "X0.Z1 X0.Z1 X0.Z1").unwrap(),
        ];
        let c = StabilizerCode::new(gens, None).unwrap();
        assert_eq!(c.k(), 1);
        assert_eq!(c.logicals()[0].sym_inner(&c.logicals()[1]).unwrap(), 1);
    }

    #[test]
    fn supplied_logicals_are_checked() {
        let gens: Vec<_> = ["XXI", "IXX"].iter().map(|s| q(s)).collect();
        let err = StabilizerCode::new(gens.clone(), Some(vec![q("XII"), q("IIX")])).unwrap_err();
        assert!(matches!(err, CodeError::BadLogicals(_)), "{err:?}");
        let ok = StabilizerCode::new(gens, Some(vec![q("ZZZ"), q("XII")])).unwrap();
        assert_eq!(ok.logicals().len(), 2);
    }

    #[test]
    fn permutation_tracks_original_labels() {
        let c = code(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap();
        let pc = c.permuted(&[5, 4, 3, 2, 1]).unwrap();
        assert_eq!(pc.qudit_order(), &[5, 4, 3, 2, 1]);
        assert_eq!(pc.stabilizers()[0], q("IXZZX"));
        assert!(c.permuted(&[1, 1, 2, 3, 4]).is_err());
    }
}
