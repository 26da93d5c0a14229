//! Pure errors: fixed representatives of each syndrome.

use super::DecodeError;
use crate::code::{LabelAxis, StabilizerCode};
use crate::ffield::{Field, FpMatrix};
use crate::pauli::PauliString;

/// Precomputed strings `T_j` with syndrome `e_j`, so that any syndrome `s`
/// has the pure error `Σ s_j·T_j`.
#[derive(Debug, Clone)]
pub struct PureErrors {
    field: Field,
    n: usize,
    basis: Vec<PauliString>,
}

impl PureErrors {
    /// Solves for a unit-syndrome representative of each check. The solution
    /// is restricted to the label axis, so an X-check part gets Z-type pure
    /// errors and the coset stays inside the part.
    pub fn new(field: Field, n: usize, checks: &[PauliString], axis: LabelAxis) -> Result<Self, DecodeError> {
        // ⟨g, T⟩ = Σ g.x·T.z − g.z·T.x, with unknowns (T.x | T.z).
        let rows: Vec<Vec<u8>> = checks
            .iter()
            .map(|g| {
                let mut row = Vec::with_capacity(2 * n);
                if axis != LabelAxis::ZOnly {
                    row.extend(g.z_exps().iter().map(|&v| field.neg(v)));
                }
                if axis != LabelAxis::XOnly {
                    row.extend_from_slice(g.x_exps());
                }
                row
            })
            .collect();
        let cols = if axis == LabelAxis::Any { 2 * n } else { n };
        let m = FpMatrix::from_residue_rows(field, cols, &rows);
        let mut basis = Vec::with_capacity(checks.len());
        for j in 0..checks.len() {
            let mut e = vec![0u8; checks.len()];
            e[j] = 1;
            let t = m.solve(&e).ok_or(DecodeError::Unsolvable)?;
            let (x, z) = match axis {
                LabelAxis::Any => (t[..n].to_vec(), t[n..].to_vec()),
                LabelAxis::ZOnly => (vec![0; n], t),
                LabelAxis::XOnly => (t, vec![0; n]),
            };
            basis.push(PauliString::from_exponents(field, x, z).expect("lengths agree"));
        }
        Ok(PureErrors { field, n, basis })
    }

    pub fn for_code(code: &StabilizerCode) -> Result<Self, DecodeError> {
        Self::new(code.field(), code.n(), code.stabilizers(), LabelAxis::Any)
    }

    pub fn checks(&self) -> usize {
        self.basis.len()
    }

    pub fn for_syndrome(&self, s: &[u8]) -> Result<PauliString, DecodeError> {
        if s.len() != self.basis.len() {
            return Err(DecodeError::SyndromeLength { found: s.len(), expected: self.basis.len() });
        }
        let mut t = PauliString::identity(self.field, self.n);
        for (b, &c) in self.basis.iter().zip(s) {
            let c = self.field.reduce(c as i64);
            if c != 0 {
                t.mul_assign_unchecked(b, c);
            }
        }
        Ok(t)
    }
}

/// Some string whose syndrome under the code's stabilizers is `s`.
pub fn pure_error(code: &StabilizerCode, s: &[u8]) -> Result<PauliString, DecodeError> {
    PureErrors::for_code(code)?.for_syndrome(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{builtin, css_split};
    use crate::pauli::syndrome;

    #[test]
    fn every_syndrome_is_reproduced() {
        let c = builtin("five_one_three", None).unwrap();
        let pe = PureErrors::for_code(&c).unwrap();
        for v in 0..16u8 {
            let s: Vec<u8> = (0..4).map(|j| (v >> j) & 1).collect();
            let t = pe.for_syndrome(&s).unwrap();
            assert_eq!(syndrome(c.stabilizers(), &t).unwrap(), s);
        }
        assert!(pe.for_syndrome(&[0; 4]).unwrap().is_identity());
        assert!(pe.for_syndrome(&[0; 3]).is_err());
    }

    #[test]
    fn fig1_syndrome() {
        let c = builtin("five_one_one", None).unwrap();
        let t = pure_error(&c, &[0, 0, 1, 1]).unwrap();
        assert_eq!(c.syndrome(&t).unwrap(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn css_part_errors_stay_on_axis() {
        let c = builtin("steane", None).unwrap();
        let (xs, zs) = css_split(&c).unwrap();
        let px = PureErrors::new(c.field(), 7, &xs.checks, xs.label_axis).unwrap();
        let pz = PureErrors::new(c.field(), 7, &zs.checks, zs.label_axis).unwrap();
        let t = px.for_syndrome(&[1, 0, 1]).unwrap();
        assert!(t.is_z_type());
        assert_eq!(syndrome(&xs.checks, &t).unwrap(), vec![1, 0, 1]);
        assert!(pz.for_syndrome(&[0, 1, 1]).unwrap().is_x_type());
    }

    #[test]
    fn qutrit_pure_errors() {
        let f = Field::new(3).unwrap();
        let (x, z) = ([1u8, 0, 0, 2, 0], [0u8, 1, 2, 0, 0]);
        let gens = (0..4)
            .map(|r| {
                let rot = |v: &[u8; 5]| (0..5).map(|j| v[(j + 5 - r) % 5]).collect::<Vec<_>>();
                PauliString::from_exponents(f, rot(&x), rot(&z)).unwrap()
            })
            .collect();
        let c = StabilizerCode::new(gens, None).unwrap();
        let pe = PureErrors::for_code(&c).unwrap();
        for s in [vec![2u8, 1, 0, 2], vec![1, 1, 1, 1]] {
            assert_eq!(c.syndrome(&pe.for_syndrome(&s).unwrap()).unwrap(), s);
        }
    }
}
