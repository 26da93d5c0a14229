//! Trellis-oriented form via left and right sweeps over F_{p²} symbols.

use crate::ffield::{Field, Fp2Site};
use crate::pauli::PauliString;

/// Generators in trellis-oriented form with cached 1-based spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TofGenerators {
    gens: Vec<PauliString>,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl TofGenerators {
    pub fn gens(&self) -> &[PauliString] {
        &self.gens
    }
    pub fn left(&self) -> &[usize] {
        &self.left
    }
    pub fn right(&self) -> &[usize] {
        &self.right
    }
    pub fn len(&self) -> usize {
        self.gens.len()
    }
    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }
    pub fn spans(&self) -> Vec<(usize, usize)> {
        self.left.iter().copied().zip(self.right.iter().copied()).collect()
    }
    pub fn span_length_sum(&self) -> usize {
        self.spans().iter().map(|(l, r)| r - l + 1).sum()
    }
    /// Number of generators supported on `{1..i}`.
    pub fn dim_past(&self, i: usize) -> usize {
        self.right.iter().filter(|&&r| r <= i).count()
    }
    /// Number of generators supported on `{i+1..n}`.
    pub fn dim_future(&self, i: usize) -> usize {
        self.left.iter().filter(|&&l| l > i).count()
    }
}

/// True when, at every index, the symbols of the generators starting there
/// are linearly independent over F_p, and likewise for those ending there.
pub fn has_left_right_property(gens: &[PauliString]) -> bool {
    let Some(first) = gens.first() else { return true };
    let f = first.field();
    let n = first.n();
    for end in [false, true] {
        for i in 1..=n {
            let syms: Vec<Fp2Site> = gens
                .iter()
                .filter_map(|g| {
                    let (l, r) = g.span()?;
                    let at = if end { r } else { l };
                    (at == i).then(|| g.site(i - 1))
                })
                .collect();
            if !independent(&syms, f) {
                return false;
            }
        }
    }
    true
}

fn independent(syms: &[Fp2Site], f: Field) -> bool {
    match syms {
        [] | [_] => true,
        [a, b] => a.ratio(*b, f).is_none(),
        _ => false,
    }
}

fn left(g: &PauliString) -> usize {
    g.sites().position(|s| !s.is_identity()).expect("identity generator")
}

fn right(g: &PauliString) -> usize {
    g.n() - 1 - g.sites().rev().position(|s| !s.is_identity()).expect("identity generator")
}

/// Puts an independent generator set into trellis-oriented form.
///
/// The left sweep fixes up to two pivot rows per column so that rows
/// sharing a left index carry independent symbols there. The right sweep then
/// walks columns from the right and eliminates dependent right symbols,
/// always modifying the row with the smaller left index so that no left index
/// changes.
pub fn to_tof(gens: &[PauliString]) -> TofGenerators {
    let Some(first) = gens.first() else {
        return TofGenerators { gens: vec![], left: vec![], right: vec![] };
    };
    let f = first.field();
    let n = first.n();
    let mut rows: Vec<PauliString> = gens.to_vec();
    assert!(rows.iter().all(|r| !r.is_identity()), "identity generator in TOF input");

    // Left sweep.
    let mut active: Vec<usize> = (0..rows.len()).collect();
    for c in 0..n {
        let mut pivots: Vec<usize> = Vec::new();
        for step in 0..2 {
            let Some(pos) = active.iter().position(|&r| !rows[r].site(c).is_identity()) else {
                break;
            };
            let pr = active.remove(pos);
            pivots.push(pr);
            for &r in &active {
                let s = rows[r].site(c);
                if s.is_identity() {
                    continue;
                }
                let coeffs: Option<Vec<(usize, u8)>> = if step == 0 {
                    rows[pr].site(c).ratio(s, f).map(|a| vec![(pr, a)])
                } else {
                    let (a, b) = Fp2Site::decompose(s, rows[pivots[0]].site(c), rows[pr].site(c), f);
                    Some(vec![(pivots[0], a), (pr, b)])
                };
                if let Some(cs) = coeffs {
                    for (src, a) in cs {
                        let src = rows[src].clone();
                        rows[r].mul_assign_unchecked(&src, f.neg(a));
                    }
                }
            }
        }
    }

    // Right sweep.
    for c in (0..n).rev() {
        loop {
            let mut ending: Vec<usize> = (0..rows.len()).filter(|&r| right(&rows[r]) == c).collect();
            if ending.len() <= 1 {
                break;
            }
            // Lowest row (largest left index) first.
            ending.sort_by_key(|&r| std::cmp::Reverse((left(&rows[r]), r)));
            let p1 = ending[0];
            let s1 = rows[p1].site(c);
            let mut changed = false;
            for &r in &ending[1..] {
                if let Some(a) = s1.ratio(rows[r].site(c), f) {
                    let src = rows[p1].clone();
                    rows[r].mul_assign_unchecked(&src, f.neg(a));
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            let p2 = ending[1];
            let s2 = rows[p2].site(c);
            for &r in &ending[2..] {
                let (a, b) = Fp2Site::decompose(rows[r].site(c), s1, s2, f);
                let (r1, r2) = (rows[p1].clone(), rows[p2].clone());
                rows[r].mul_assign_unchecked(&r1, f.neg(a));
                rows[r].mul_assign_unchecked(&r2, f.neg(b));
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }

    // Canonical scalar multiple and ordering.
    let encode = |g: &PauliString| g.sites().flat_map(|s| [s.x, s.z]).collect::<Vec<u8>>();
    for row in rows.iter_mut() {
        let best = (1..f.p() as u8).map(|c| row.pow(c)).min_by_key(encode).unwrap();
        *row = best;
    }
    rows.sort_by_key(|g| (left(g), right(g), encode(g)));
    let left_idx = rows.iter().map(|g| left(g) + 1).collect();
    let right_idx = rows.iter().map(|g| right(g) + 1).collect();
    TofGenerators { gens: rows, left: left_idx, right: right_idx }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli;

    fn qs(v: &[&str]) -> Vec<PauliString> {
        v.iter().map(|s| parse_pauli(Field::binary(), s).unwrap()).collect()
    }

    #[test]
    fn five_qubit_stabilizer_spans() {
        let t = to_tof(&qs(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]));
        assert_eq!(t.spans(), vec![(1, 4), (1, 4), (2, 5), (2, 5)]);
        assert!(has_left_right_property(t.gens()));
    }

    #[test]
    fn five_qubit_normalizer_spans() {
        // The TOF generators listed for the normalizer of the five-qubit code.
        let given = qs(&["XYXII", "ZXZII", "IXYXI", "IZXZI", "IIXYX", "IIZXZ"]);
        let t = to_tof(&given);
        assert_eq!(t.spans(), vec![(1, 3), (1, 3), (2, 4), (2, 4), (3, 5), (3, 5)]);
    }

    #[test]
    fn left_right_property_rejects_shared_symbols() {
        assert!(!has_left_right_property(&qs(&["XXI", "XIX"])));
        assert!(has_left_right_property(&qs(&["XXI", "ZIZ"])));
        assert!(!has_left_right_property(&qs(&["XX", "ZZ", "YY"])));
    }
}
