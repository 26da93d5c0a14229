//! Arithmetic and linear algebra over a prime field F_p.
//!
//! Matrices store raw residues as `u8`; the modulus lives once in the
//! [`Field`] that every matrix carries. Mixing two moduli in one operation is
//! a programming error and panics.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Largest supported prime. Residues must fit in a byte.
pub const MAX_PRIME: u32 = 251;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not a prime")]
    NotPrime(u32),
    #[error("modulus {0} exceeds the supported maximum of {MAX_PRIME}")]
    TooLarge(u32),
}

/// The prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u32,
}

impl TryFrom<u32> for Field {
    type Error = FieldError;
    fn try_from(p: u32) -> Result<Self, FieldError> {
        Field::new(p)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u32) -> Result<Self, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field { p })
    }

    /// F_2, the qubit case.
    pub fn binary() -> Self {
        Field { p: 2 }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.p) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.p - b as u32) % self.p) as u8
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.p) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        ((self.p - a as u32) % self.p) as u8
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(a as u32 % self.p != 0, "zero has no inverse in F_{}", self.p);
        let mut base = a as u32 % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc as u8
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(self, v: i64) -> u8 {
        v.rem_euclid(self.p as i64) as u8
    }

    #[inline]
    fn check(self, other: Field) {
        assert_eq!(self.p, other.p, "mixed moduli F_{} and F_{}", self.p, other.p);
    }
}

/// A single residue tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpScalar {
    pub value: u8,
    pub field: Field,
}

impl FpScalar {
    pub fn new(field: Field, value: i64) -> Self {
        FpScalar { value: field.reduce(value), field }
    }
    pub fn add(self, o: FpScalar) -> FpScalar {
        self.field.check(o.field);
        FpScalar { value: self.field.add(self.value, o.value), field: self.field }
    }
    pub fn mul(self, o: FpScalar) -> FpScalar {
        self.field.check(o.field);
        FpScalar { value: self.field.mul(self.value, o.value), field: self.field }
    }
}

/// One qudit site `X^x Z^z`, viewed as the element `x + z·ω` of F_{p²}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Fp2Site {
    pub x: u8,
    pub z: u8,
}

impl Fp2Site {
    pub const IDENTITY: Fp2Site = Fp2Site { x: 0, z: 0 };

    pub fn new(x: u8, z: u8) -> Self {
        Fp2Site { x, z }
    }

    pub fn is_identity(self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Scalar `c` with `other = c·self`, if one exists. `self` must be nonzero.
    pub fn ratio(self, other: Fp2Site, f: Field) -> Option<u8> {
        debug_assert!(!self.is_identity());
        let c = if self.x != 0 {
            f.mul(other.x, f.inv(self.x))
        } else {
            f.mul(other.z, f.inv(self.z))
        };
        (f.mul(c, self.x) == other.x && f.mul(c, self.z) == other.z).then_some(c)
    }

    /// Coefficients `(α, β)` with `target = α·u + β·v`, for independent `u`, `v`.
    pub fn decompose(target: Fp2Site, u: Fp2Site, v: Fp2Site, f: Field) -> (u8, u8) {
        // Cramer's rule on the 2×2 system with columns u, v.
        let det = f.sub(f.mul(u.x, v.z), f.mul(v.x, u.z));
        let di = f.inv(det);
        let a = f.mul(f.sub(f.mul(target.x, v.z), f.mul(v.x, target.z)), di);
        let b = f.mul(f.sub(f.mul(u.x, target.z), f.mul(target.x, u.z)), di);
        (a, b)
    }

    /// Label code `x·p + z` used for weight tables and edge storage.
    #[inline]
    pub fn code(self, p: u32) -> u16 {
        (self.x as u32 * p + self.z as u32) as u16
    }

    #[inline]
    pub fn from_code(code: u16, p: u32) -> Self {
        Fp2Site { x: (code as u32 / p) as u8, z: (code as u32 % p) as u8 }
    }
}

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix over F_{} ({}x{})", self.field.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Output of [`FpMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FpMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of integers, reducing every entry mod p.
    /// Panics if the rows have unequal lengths.
    pub fn from_rows<R: AsRef<[i64]>>(field: Field, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, field.reduce(v));
            }
        }
        m
    }

    /// Builds a matrix from already-reduced residue rows with `cols` columns.
    pub fn from_residue_rows(field: Field, cols: usize, rows: &[Vec<u8>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            debug_assert!(r.iter().all(|&v| (v as u32) < field.p));
            data.extend_from_slice(r);
        }
        FpMatrix { field, rows: rows.len(), cols, data }
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        debug_assert!((v as u32) < self.field.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Matrix-vector product `M·v`.
    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let p = self.field.p;
        (0..self.rows)
            .map(|r| {
                let s: u32 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32 % p).sum();
                (s % p) as u8
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row-echelon form. Dispatches to a bit-packed path for p = 2.
    pub fn rref(&self) -> Rref {
        if self.field.p == 2 {
            gf2::rref(self)
        } else {
            self.rref_generic()
        }
    }

    /// Reduced row-echelon form by plain Gauss-Jordan elimination, valid for
    /// every prime. Exposed so the binary fast path can be checked against it.
    pub fn rref_generic(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(r) = (pr..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            m.swap_rows(pr, r);
            let inv = f.inv(m.get(pr, c));
            for j in c..m.cols {
                let v = f.mul(m.get(pr, j), inv);
                m.set(pr, j, v);
            }
            for r2 in 0..m.rows {
                let factor = m.get(r2, c);
                if r2 == pr || factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..m.cols {
                    let v = f.add(m.get(r2, j), f.mul(nf, m.get(pr, j)));
                    m.set(r2, j, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        let rank = pivots.len();
        Rref { reduced: m, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel `{x : M·x = 0}`, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let f = self.field;
        let Rref { reduced, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u8; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(reduced.get(i, free));
                }
                v
            })
            .collect()
    }

    /// A particular solution of `M·x = b`, or `None` if `b` lies outside the
    /// column space.
    pub fn solve(&self, b: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, self.field.reduce(b[r] as i64));
        }
        let Rref { reduced, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u8; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = reduced.get(i, self.cols);
        }
        Some(x)
    }
}

/// Bit-packed elimination for F_2.
mod gf2 {
    use super::{FpMatrix, Rref};

    pub(super) fn rref(m: &FpMatrix) -> Rref {
        let words = m.cols.div_ceil(64);
        let mut rows: Vec<Vec<u64>> = (0..m.rows)
            .map(|r| {
                let mut w = vec![0u64; words];
                for (c, &v) in m.row(r).iter().enumerate() {
                    if v & 1 == 1 {
                        w[c / 64] |= 1 << (c % 64);
                    }
                }
                w
            })
            .collect();
        let bit = |row: &[u64], c: usize| (row[c / 64] >> (c % 64)) & 1 == 1;
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == rows.len() {
                break;
            }
            let Some(r) = (pr..rows.len()).find(|&r| bit(&rows[r], c)) else {
                continue;
            };
            rows.swap(pr, r);
            let pivot = rows[pr].clone();
            for (r2, row) in rows.iter_mut().enumerate() {
                if r2 != pr && bit(row, c) {
                    for (a, b) in row.iter_mut().zip(&pivot) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(c);
            pr += 1;
        }
        let mut reduced = FpMatrix::zeros(m.field, m.rows, m.cols);
        for (r, row) in rows.iter().enumerate() {
            for c in 0..m.cols {
                if bit(row, c) {
                    reduced.set(r, c, 1);
                }
            }
        }
        let rank = pivots.len();
        Rref { reduced, pivots, rank }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn rejects_composites_and_large_moduli() {
        assert_eq!(Field::new(4), Err(FieldError::NotPrime(4)));
        assert_eq!(Field::new(1), Err(FieldError::NotPrime(1)));
        assert_eq!(Field::new(257), Err(FieldError::TooLarge(257)));
        assert!(Field::new(251).is_ok());
    }

    #[test]
    fn inverses_multiply_to_one() {
        for p in [2, 3, 5, 7, 13] {
            let fp = f(p);
            for a in 1..p as u8 {
                assert_eq!(fp.mul(a, fp.inv(a)), 1);
            }
        }
    }

    #[test]
    fn identity_rref() {
        let m = FpMatrix::identity(f(2), 3);
        let r = m.rref();
        assert_eq!(r.reduced, m);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn steane_check_matrix_has_rank_three_and_hamming_kernel() {
        let h = FpMatrix::from_rows(
            f(2),
            &[[1, 1, 0, 1, 1, 0, 0], [0, 1, 1, 0, 1, 1, 0], [0, 0, 0, 1, 1, 1, 1]],
        );
        assert_eq!(h.rank(), 3);
        let ker = h.kernel();
        assert_eq!(ker.len(), 4);
        for v in &ker {
            assert!(h.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn full_rank_square_has_empty_kernel() {
        let m = FpMatrix::from_rows(f(5), &[[1, 2], [3, 4]]);
        assert!(m.kernel().is_empty());
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let m = FpMatrix::zeros(f(3), 0, 4);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel().len(), 4);
    }

    #[test]
    fn solve_identity_and_inconsistent_system() {
        let id = FpMatrix::identity(f(3), 3);
        assert_eq!(id.solve(&[2, 0, 1]), Some(vec![2, 0, 1]));
        let m = FpMatrix::from_rows(f(2), &[[1], [1]]);
        assert_eq!(m.solve(&[0, 1]), None);
    }

    #[test]
    fn decompose_recovers_coefficients() {
        let fp = f(5);
        let u = Fp2Site::new(1, 2);
        let v = Fp2Site::new(3, 2);
        for a in 0..5u8 {
            for b in 0..5u8 {
                let t = Fp2Site::new(
                    fp.add(fp.mul(a, u.x), fp.mul(b, v.x)),
                    fp.add(fp.mul(a, u.z), fp.mul(b, v.z)),
                );
                assert_eq!(Fp2Site::decompose(t, u, v, fp), (a, b));
            }
        }
    }

    #[test]
    fn ratio_detects_multiples() {
        let fp = f(3);
        let u = Fp2Site::new(1, 2);
        assert_eq!(u.ratio(Fp2Site::new(2, 1), fp), Some(2));
        assert_eq!(u.ratio(Fp2Site::new(1, 0), fp), None);
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn mixed_moduli_abort() {
        let _ = FpScalar::new(f(2), 1).add(FpScalar::new(f(3), 1));
    }
}
