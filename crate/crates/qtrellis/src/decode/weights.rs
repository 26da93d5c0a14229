//! Per-site edge weights.

use super::DecodeError;
use crate::code::Split;
use crate::ffield::Fp2Site;
use crate::pauli::PauliString;
use crate::sim::{ChannelKind, ChannelSpec};
use serde::{Deserialize, Serialize};

/// Weight of every single-site label at every position, indexed by the label
/// code `x·p + z`. Weights lie in `[0, +∞]`; `+∞` forbids a label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    p: u32,
    rows: Vec<Vec<f64>>,
}

impl WeightTable {
    pub fn new(p: u32, rows: Vec<Vec<f64>>) -> Result<Self, DecodeError> {
        let q = (p * p) as usize;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != q {
                return Err(DecodeError::BadWeights(format!("position {}: {} entries, expected {q}", i + 1, row.len())));
            }
            if row.iter().any(|w| w.is_nan() || *w < 0.0) {
                return Err(DecodeError::BadWeights(format!("position {}: weights must be in [0, inf]", i + 1)));
            }
            if row.iter().all(|w| w.is_infinite()) {
                return Err(DecodeError::BadWeights(format!("position {}: no finite weight", i + 1)));
            }
        }
        Ok(WeightTable { p, rows })
    }

    /// The same row at each of `n` positions.
    pub fn uniform(p: u32, n: usize, row: Vec<f64>) -> Result<Self, DecodeError> {
        Self::new(p, vec![row; n])
    }

    /// Weight 0 for the identity and 1 for everything else.
    pub fn hamming(p: u32, n: usize) -> Self {
        let mut row = vec![1.0; (p * p) as usize];
        row[0] = 0.0;
        WeightTable { p, rows: vec![row; n] }
    }

    /// `w = −log Pr` per label; zero probabilities become `+∞`.
    pub fn from_probabilities(p: u32, probs: &[Vec<f64>]) -> Result<Self, DecodeError> {
        let mut rows = Vec::with_capacity(probs.len());
        for (i, row) in probs.iter().enumerate() {
            if row.iter().any(|&q| !(0.0..=1.0).contains(&q)) {
                return Err(DecodeError::BadWeights(format!("position {}: probability outside [0, 1]", i + 1)));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(DecodeError::BadWeights(format!("position {}: probabilities sum to {total}", i + 1)));
            }
            rows.push(row.iter().map(|&q| -q.ln()).collect());
        }
        Self::new(p, rows)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> usize {
        self.rows.len()
    }
    pub fn row(&self, pos: usize) -> &[f64] {
        &self.rows[pos]
    }
    #[inline]
    pub fn get(&self, pos: usize, site: Fp2Site) -> f64 {
        self.rows[pos][site.code(self.p) as usize]
    }

    /// The rows at the given 0-based positions, in that order.
    pub fn select(&self, positions: &[usize]) -> WeightTable {
        WeightTable { p: self.p, rows: positions.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    /// Total weight of a string, summed left to right.
    pub fn total(&self, pauli: &PauliString) -> f64 {
        pauli.sites().enumerate().fold(0.0, |acc, (i, s)| acc + self.get(i, s))
    }

    /// Weights for a CSS part trellis. The X-check part carries `Z^b` labels,
    /// which absorb every `X^a Z^b` with weight `−log Σ_a e^{−w(a,b)}`; the
    /// Z-check part is symmetric. Other labels become `+∞`.
    pub fn for_split(&self, split: Split) -> WeightTable {
        let p = self.p as usize;
        if split == Split::Full {
            return self.clone();
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = vec![f64::INFINITY; p * p];
                for k in 0..p {
                    let group: Vec<f64> = (0..p)
                        .map(|j| if split == Split::X { row[j * p + k] } else { row[k * p + j] })
                        .collect();
                    let slot = if split == Split::X { k } else { k * p };
                    out[slot] = neg_log_sum_exp(&group);
                }
                out
            })
            .collect();
        WeightTable { p: self.p, rows }
    }

    /// Parses a weight table. Each non-blank line not starting with `#` holds
    /// one row: either `p²` numbers in label-code order (`x·p + z`), or for
    /// qubits `I=.. X=.. Y=.. Z=..` in any order. A single row applies to all
    /// `n` positions; otherwise there must be exactly `n` rows. `inf` is accepted.
    pub fn parse(text: &str, p: u32, n: usize) -> Result<Self, DecodeError> {
        let bad = |m: String| DecodeError::BadWeights(m);
        let q = (p * p) as usize;
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let toks: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
            let num = |t: &str| t.parse::<f64>().map_err(|_| bad(format!("line {}: bad number {t:?}", ln + 1)));
            let mut row = vec![f64::NAN; q];
            if toks.iter().any(|t| t.contains('=')) {
                if p != 2 {
                    return Err(bad(format!("line {}: named weights need p = 2", ln + 1)));
                }
                for t in toks {
                    let (name, v) = t.split_once('=').ok_or_else(|| bad(format!("line {}: expected NAME=VALUE", ln + 1)))?;
                    let code = match name.trim() {
                        "I" => 0,
                        "Z" => 1,
                        "X" => 2,
                        "Y" => 3,
                        other => return Err(bad(format!("line {}: unknown label {other:?}", ln + 1))),
                    };
                    row[code] = num(v)?;
                }
                if row.iter().any(|w| w.is_nan()) {
                    return Err(bad(format!("line {}: all of I, X, Y, Z are required", ln + 1)));
                }
            } else {
                if toks.len() != q {
                    return Err(bad(format!("line {}: {} values, expected {q}", ln + 1, toks.len())));
                }
                for (slot, t) in row.iter_mut().zip(toks) {
                    *slot = num(t)?;
                }
            }
            rows.push(row);
        }
        match rows.len() {
            1 => Self::uniform(p, n, rows.pop().unwrap()),
            m if m == n => Self::new(p, rows),
            m => Err(bad(format!("{m} rows for {n} positions"))),
        }
    }
}

fn neg_log_sum_exp(ws: &[f64]) -> f64 {
    let m = ws.iter().cloned().fold(f64::INFINITY, f64::min);
    if m.is_infinite() {
        return f64::INFINITY;
    }
    m - ws.iter().map(|w| (m - w).exp()).sum::<f64>().ln()
}

/// Weights of a channel for the full trellis or one CSS part.
pub fn weights_from_channel(channel: &ChannelSpec, n: usize, p: u32, split: Split) -> Result<WeightTable, DecodeError> {
    let full = match &channel.kind {
        ChannelKind::Table(t) => {
            if t.p != p || t.n() != n {
                return Err(DecodeError::BadWeights(format!(
                    "table is for n = {} over F_{}, code has n = {n} over F_{p}",
                    t.n(),
                    t.p
                )));
            }
            t.clone()
        }
        _ => {
            let probs = channel.site_probabilities(p).map_err(|e| DecodeError::BadWeights(e.to_string()))?;
            WeightTable::from_probabilities(p, &vec![probs; n])?
        }
    };
    Ok(full.for_split(split))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12 || (a.is_infinite() && b.is_infinite())
    }

    #[test]
    fn depolarizing_weights() {
        let ch = ChannelSpec::new(ChannelKind::Depolarizing, 0.1).unwrap();
        let w = weights_from_channel(&ch, 1, 2, Split::Full).unwrap();
        assert!(close(w.row(0)[0], -(0.9f64).ln()));
        for c in 1..4 {
            assert!(close(w.row(0)[c], -(0.1f64 / 3.0).ln()));
        }
        let x = weights_from_channel(&ch, 1, 2, Split::X).unwrap();
        assert!(close(x.row(0)[0], -(0.9f64 + 0.1 / 3.0).ln()));
        assert!(close(x.row(0)[1], -(0.2f64 / 3.0).ln()));
        assert!(x.row(0)[2].is_infinite() && x.row(0)[3].is_infinite());
    }

    #[test]
    fn dephasing_on_the_x_part() {
        let ch = ChannelSpec::new(ChannelKind::DephasingZ, 0.05).unwrap();
        let w = weights_from_channel(&ch, 3, 2, Split::X).unwrap();
        assert!(close(w.row(2)[0], -(0.95f64).ln()));
        assert!(close(w.row(2)[1], -(0.05f64).ln()));
        // On the Z part a Z-only channel leaves only the identity.
        let z = weights_from_channel(&ch, 3, 2, Split::Z).unwrap();
        assert!(close(z.row(0)[0], 0.0) && z.row(0)[2].is_infinite());
    }

    #[test]
    fn parse_named_and_numeric() {
        let w = WeightTable::parse("# fig\nI=0 X=1 Z=1 Y=2\n", 2, 5).unwrap();
        assert_eq!(w.n(), 5);
        assert_eq!(w.row(4), &[0.0, 1.0, 1.0, 2.0]);
        let w = WeightTable::parse("0 inf 1 2\n0 1 1 1", 2, 2).unwrap();
        assert!(w.row(0)[1].is_infinite());
        assert!(WeightTable::parse("0 1 1", 2, 1).is_err());
        assert!(WeightTable::parse("I=0 X=1", 2, 1).is_err());
        assert!(WeightTable::parse("inf inf inf inf", 2, 1).is_err());
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(WeightTable::from_probabilities(2, &[vec![0.5, 0.5, 0.5, -0.5]]).is_err());
        assert!(WeightTable::from_probabilities(2, &[vec![0.5, 0.2, 0.2, 0.2]]).is_err());
        let w = WeightTable::from_probabilities(2, &[vec![1.0, 0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(w.row(0)[0], 0.0);
        assert!(w.row(0)[1].is_infinite());
    }
}
