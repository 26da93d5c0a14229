//! Phaseless generalized Pauli strings in symplectic form.
//!
//! A string `⊗ X^{a_i} Z^{b_i}` is stored as the exponent pair `(a | b)`.
//! Phases are dropped throughout, so products and corrections are only
//! meaningful up to a global phase.
//!
//! Qudit positions are 0-based in storage. Functions that take a depth or an
//! index set use the 1-based convention `{1..n}`, with depth 0 meaning the
//! empty prefix.

use crate::ffield::{Field, Fp2Site};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("length mismatch: {0} vs {1} qudits")]
    LengthMismatch(usize, usize),
    #[error("index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("depth {depth} outside 0..={n}")]
    DepthOutOfRange { depth: usize, n: usize },
    #[error("illegal character {0:?} in qubit Pauli string")]
    IllegalCharacter(char),
    #[error("malformed site token {0:?}, expected Xa.Zb")]
    BadToken(String),
    #[error("exponent {value} not below p = {p}")]
    ExponentOutOfRange { value: u64, p: u32 },
}

/// Phaseless Pauli string over `n` qudits of prime dimension `p`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    field: Field,
    x: Vec<u8>,
    z: Vec<u8>,
}

/// Syndrome values, one per stabilizer generator, in generator order.
pub type SyndromeVector = Vec<u8>;

impl PauliString {
    pub fn identity(field: Field, n: usize) -> Self {
        PauliString { field, x: vec![0; n], z: vec![0; n] }
    }

    /// Builds a string from exponent vectors, rejecting exponents `≥ p`.
    pub fn from_exponents(field: Field, x: Vec<u8>, z: Vec<u8>) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch(x.len(), z.len()));
        }
        if let Some(&v) = x.iter().chain(&z).find(|&&v| v as u32 >= field.p()) {
            return Err(PauliError::ExponentOutOfRange { value: v as u64, p: field.p() });
        }
        Ok(PauliString { field, x, z })
    }

    /// Builds a string from a symplectic row `(x-block | z-block)`.
    pub fn from_symplectic(field: Field, row: &[u8]) -> Self {
        assert!(row.len() % 2 == 0, "symplectic row of odd length");
        let n = row.len() / 2;
        PauliString { field, x: row[..n].to_vec(), z: row[n..].to_vec() }
    }

    pub fn from_sites(field: Field, sites: &[Fp2Site]) -> Self {
        PauliString {
            field,
            x: sites.iter().map(|s| s.x).collect(),
            z: sites.iter().map(|s| s.z).collect(),
        }
    }

    /// A single-site operator embedded at 0-based position `pos`.
    pub fn single(field: Field, n: usize, pos: usize, site: Fp2Site) -> Self {
        let mut s = Self::identity(field, n);
        s.set_site(pos, site);
        s
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn p(&self) -> u32 {
        self.field.p()
    }
    pub fn x_exps(&self) -> &[u8] {
        &self.x
    }
    pub fn z_exps(&self) -> &[u8] {
        &self.z
    }

    /// Site at 0-based position `pos`.
    #[inline]
    pub fn site(&self, pos: usize) -> Fp2Site {
        Fp2Site { x: self.x[pos], z: self.z[pos] }
    }

    #[inline]
    pub fn set_site(&mut self, pos: usize, s: Fp2Site) {
        debug_assert!((s.x as u32) < self.p() && (s.z as u32) < self.p());
        self.x[pos] = s.x;
        self.z[pos] = s.z;
    }

    pub fn sites(&self) -> impl DoubleEndedIterator<Item = Fp2Site> + ExactSizeIterator + '_ {
        self.x.iter().zip(&self.z).map(|(&x, &z)| Fp2Site { x, z })
    }

    /// Symplectic row `(x-block | z-block)`.
    pub fn to_symplectic(&self) -> Vec<u8> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.z);
        v
    }

    pub fn weight(&self) -> usize {
        self.sites().filter(|s| !s.is_identity()).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// True when every site is a power of X (no Z exponents).
    pub fn is_x_type(&self) -> bool {
        self.z.iter().all(|&v| v == 0)
    }

    /// True when every site is a power of Z (no X exponents).
    pub fn is_z_type(&self) -> bool {
        self.x.iter().all(|&v| v == 0)
    }

    /// First and last non-identity positions, 1-based. `None` for the identity.
    pub fn span(&self) -> Option<(usize, usize)> {
        let l = self.sites().position(|s| !s.is_identity())?;
        let r = self.n() - 1 - self.sites().rev().position(|s| !s.is_identity()).unwrap();
        Some((l + 1, r + 1))
    }

    fn check_len(&self, other: &PauliString) -> Result<(), PauliError> {
        assert_eq!(self.field, other.field, "mixed moduli in Pauli algebra");
        if self.n() != other.n() {
            return Err(PauliError::LengthMismatch(self.n(), other.n()));
        }
        Ok(())
    }

    /// Phaseless product: exponents add mod p.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other, 1);
        Ok(out)
    }

    /// `self ← self · other^c` without length checks.
    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliString, c: u8) {
        let f = self.field;
        for i in 0..self.x.len() {
            self.x[i] = f.add(self.x[i], f.mul(c, other.x[i]));
            self.z[i] = f.add(self.z[i], f.mul(c, other.z[i]));
        }
    }

    /// `self^c`.
    pub fn pow(&self, c: u8) -> PauliString {
        let f = self.field;
        PauliString {
            field: f,
            x: self.x.iter().map(|&v| f.mul(v, c)).collect(),
            z: self.z.iter().map(|&v| f.mul(v, c)).collect(),
        }
    }

    /// Inverse up to phase, `self^{-1} = self^{p-1}`.
    pub fn inverse(&self) -> PauliString {
        self.pow((self.p() - 1) as u8)
    }

    /// Symplectic form `Σ (a_i b'_i − b_i a'_i) mod p`; zero iff the strings commute.
    pub fn sym_inner(&self, other: &PauliString) -> Result<u8, PauliError> {
        self.check_len(other)?;
        Ok(self.sym_inner_range(other, 0, self.n()))
    }

    /// Symplectic form restricted to 0-based positions `lo..hi`.
    pub(crate) fn sym_inner_range(&self, other: &PauliString, lo: usize, hi: usize) -> u8 {
        let p = self.p() as i64;
        let (ax, az) = (&self.x[lo..hi], &self.z[lo..hi]);
        let (bx, bz) = (&other.x[lo..hi], &other.z[lo..hi]);
        if p == 2 {
            let parity = ax.iter().zip(bz).zip(az.iter().zip(bx)).fold(0u8, |acc, ((&a, &b), (&c, &d))| acc ^ (a & b) ^ (c & d));
            return parity & 1;
        }
        let acc: i64 = ax
            .iter()
            .zip(bz)
            .zip(az.iter().zip(bx))
            .map(|((&a, &b), (&c, &d))| a as i64 * b as i64 - c as i64 * d as i64)
            .sum();
        acc.rem_euclid(p) as u8
    }

    /// `π_J`: keeps the sites listed in `indices` (1-based) and replaces the rest by identity.
    pub fn project(&self, indices: &[usize]) -> Result<PauliString, PauliError> {
        let n = self.n();
        let mut out = Self::identity(self.field, n);
        for &j in indices {
            if j == 0 || j > n {
                return Err(PauliError::IndexOutOfRange { index: j, n });
            }
            out.set_site(j - 1, self.site(j - 1));
        }
        Ok(out)
    }

    /// `π_{1..i}`, the length-`i` prefix padded with identities.
    pub fn prefix(&self, depth: usize) -> Result<PauliString, PauliError> {
        let n = self.n();
        if depth > n {
            return Err(PauliError::DepthOutOfRange { depth, n });
        }
        let mut out = self.clone();
        for i in depth..n {
            out.x[i] = 0;
            out.z[i] = 0;
        }
        Ok(out)
    }

    /// Reorders sites so that new position `j` holds old position `order[j]` (0-based).
    pub fn permuted(&self, order: &[usize]) -> PauliString {
        assert_eq!(order.len(), self.n(), "permutation length mismatch");
        PauliString {
            field: self.field,
            x: order.iter().map(|&o| self.x[o]).collect(),
            z: order.iter().map(|&o| self.z[o]).collect(),
        }
    }
}

/// Partial syndrome `σ_i(P)`: the syndrome of the length-`depth` prefix of `pauli`.
pub fn partial_syndrome(
    gens: &[PauliString],
    pauli: &PauliString,
    depth: usize,
) -> Result<SyndromeVector, PauliError> {
    let n = pauli.n();
    if depth > n {
        return Err(PauliError::DepthOutOfRange { depth, n });
    }
    gens.iter()
        .map(|g| {
            g.check_len(pauli)?;
            Ok(g.sym_inner_range(pauli, 0, depth))
        })
        .collect()
}

/// Full syndrome `σ_n(P)`.
pub fn syndrome(gens: &[PauliString], pauli: &PauliString) -> Result<SyndromeVector, PauliError> {
    partial_syndrome(gens, pauli, pauli.n())
}

/// Parses a Pauli string.
///
/// For p = 2 the text is a sequence of `I`, `X`, `Y`, `Z` characters. For
/// other primes (or when a `.` is present) it is a whitespace-separated list of
/// `Xa.Zb` tokens.
pub fn parse_pauli(field: Field, text: &str) -> Result<PauliString, PauliError> {
    let text = text.trim();
    if field.p() == 2 && !text.contains('.') {
        let mut x = Vec::with_capacity(text.len());
        let mut z = Vec::with_capacity(text.len());
        for ch in text.chars() {
            let (a, b) = match ch {
                'I' => (0, 0),
                'X' => (1, 0),
                'Y' => (1, 1),
                'Z' => (0, 1),
                c => return Err(PauliError::IllegalCharacter(c)),
            };
            x.push(a);
            z.push(b);
        }
        return Ok(PauliString { field, x, z });
    }
    let mut x = Vec::new();
    let mut z = Vec::new();
    for tok in text.split_whitespace() {
        let bad = || PauliError::BadToken(tok.to_string());
        let (xs, zs) = tok.split_once('.').ok_or_else(bad)?;
        let a = xs.strip_prefix('X').ok_or_else(bad)?;
        let b = zs.strip_prefix('Z').ok_or_else(bad)?;
        let a: u64 = a.parse().map_err(|_| bad())?;
        let b: u64 = b.parse().map_err(|_| bad())?;
        for v in [a, b] {
            if v >= field.p() as u64 {
                return Err(PauliError::ExponentOutOfRange { value: v, p: field.p() });
            }
        }
        x.push(a as u8);
        z.push(b as u8);
    }
    Ok(PauliString { field, x, z })
}

/// Inverse of [`parse_pauli`].
pub fn format_pauli(pauli: &PauliString) -> String {
    if pauli.p() == 2 {
        pauli
            .sites()
            .map(|s| match (s.x, s.z) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            })
            .collect()
    } else {
        pauli.sites().map(|s| format!("X{}.Z{}", s.x, s.z)).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_pauli(self))
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli[p={}]({})", self.p(), format_pauli(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> PauliString {
        parse_pauli(Field::binary(), s).unwrap()
    }

    #[test]
    fn x_times_z_is_y() {
        assert_eq!(q("X").mul(&q("Z")).unwrap(), q("Y"));
        assert_eq!(q("XZZXI").mul(&q("IIIII")).unwrap(), q("XZZXI"));
    }

    #[test]
    fn five_qubit_stabilizer_product() {
        assert_eq!(q("XZZXI").mul(&q("XIXZZ")).unwrap(), q("IZYYZ"));
    }

    #[test]
    fn sym_inner_against_fig1_generators() {
        let ps = q("IIIZZ");
        assert_eq!(q("ZXIII").sym_inner(&ps).unwrap(), 0);
        assert_eq!(q("IXZXI").sym_inner(&ps).unwrap(), 1);
        assert_eq!(ps.sym_inner(&ps).unwrap(), 0);
    }

    #[test]
    fn qutrit_symplectic_form_is_antisymmetric() {
        let f3 = Field::new(3).unwrap();
        let x = parse_pauli(f3, "X1.Z0").unwrap();
        let z = parse_pauli(f3, "X0.Z1").unwrap();
        assert_eq!(x.sym_inner(&z).unwrap(), 1);
        assert_eq!(z.sym_inner(&x).unwrap(), 2);
    }

    #[test]
    fn projections_and_prefixes() {
        let ps = q("IIIZZ");
        assert_eq!(ps.project(&[1, 2, 3, 4, 5]).unwrap(), ps);
        assert_eq!(ps.prefix(3).unwrap(), q("IIIII"));
        assert_eq!(ps.prefix(4).unwrap(), q("IIIZI"));
        assert!(ps.project(&[6]).is_err());
        assert!(ps.prefix(6).is_err());
    }

    #[test]
    fn fig1_partial_syndromes() {
        let gens: Vec<_> = ["ZXIII", "XZXII", "IXZXI", "IIXZX"].iter().map(|s| q(s)).collect();
        let ps = q("IIIZZ");
        assert_eq!(partial_syndrome(&gens, &ps, 0).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(partial_syndrome(&gens, &ps, 4).unwrap(), vec![0, 0, 1, 0]);
        assert_eq!(partial_syndrome(&gens, &ps, 5).unwrap(), vec![0, 0, 1, 1]);
        assert!(partial_syndrome(&gens, &ps, 6).is_err());
    }

    #[test]
    fn parse_and_format() {
        let p = q("IIIZZ");
        assert_eq!(p.x_exps(), &[0, 0, 0, 0, 0]);
        assert_eq!(p.z_exps(), &[0, 0, 0, 1, 1]);
        assert_eq!(q("").n(), 0);
        let f3 = Field::new(3).unwrap();
        let t = parse_pauli(f3, "X2.Z1 X0.Z0").unwrap();
        assert_eq!(t.x_exps(), &[2, 0]);
        assert_eq!(t.z_exps(), &[1, 0]);
        assert_eq!(format_pauli(&t), "X2.Z1 X0.Z0");
        assert_eq!(parse_pauli(Field::binary(), "IXQ"), Err(PauliError::IllegalCharacter('Q')));
        assert!(matches!(parse_pauli(f3, "X3.Z0"), Err(PauliError::ExponentOutOfRange { .. })));
        assert!(matches!(parse_pauli(f3, "Y1"), Err(PauliError::BadToken(_))));
    }

    #[test]
    fn span_reports_one_based_support() {
        assert_eq!(q("IXZII").span(), Some((2, 3)));
        assert_eq!(q("III").span(), None);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert_eq!(q("XX").mul(&q("X")), Err(PauliError::LengthMismatch(2, 1)));
    }
}
