//! Two-stage decoding of the level-2 concatenated Steane code.
//!
//! Stage 1 decodes each of the seven inner blocks on the Steane part trellis.
//! Stage 2 recomputes the outer syndrome, decodes it on the same trellis, and
//! spreads each block-level correction over all seven qubits of its block.

use super::{Decoder, DecodeError, PathResult, SyndromeDecoder, ViterbiOptions, WeightTable, Workspace};
use crate::code::{builtin, Split, StabilizerCode};
use crate::ffield::Fp2Site;
use crate::pauli::PauliString;
use crate::trellis::{Trellis, DEFAULT_EDGE_CAP};

const BLOCKS: usize = 7;
const INNER_CHECKS: usize = 3;
/// X-type (or Z-type) checks per axis: 21 inner plus 3 outer.
const AXIS_CHECKS: usize = BLOCKS * INNER_CHECKS + INNER_CHECKS;

struct Axis {
    inner: Decoder<'static>,
    offset: usize,
    /// Folded weights of each block for stage 1.
    block_weights: Vec<WeightTable>,
    /// Folded block-level weights for stage 2.
    outer_weights: WeightTable,
}

pub struct BlockDecoder {
    code: StabilizerCode,
    weights: WeightTable,
    axes: [Axis; 2],
}

impl BlockDecoder {
    /// `code` must be the built-in `steane_level2` code; `weights` is a full
    /// table over its 49 qubits.
    pub fn new(code: &StabilizerCode, weights: &WeightTable, opts: ViterbiOptions) -> Result<Self, DecodeError> {
        let reference = builtin("steane_level2", None)?;
        if code.stabilizers() != reference.stabilizers() {
            return Err(DecodeError::WrongStructure("expected the level-2 concatenated Steane code".into()));
        }
        if weights.n() != code.n() || weights.p() != 2 {
            return Err(DecodeError::BadWeights("weights must cover 49 qubits".into()));
        }
        let steane = builtin("steane", None)?;
        let axis = |split: Split, offset: usize| -> Result<Axis, DecodeError> {
            let t = Trellis::for_code(&steane, split, DEFAULT_EDGE_CAP).map_err(|e| DecodeError::Mismatch(e.to_string()))?;
            let inner = Decoder::owned(steane.clone(), t, &WeightTable::hamming(2, BLOCKS), opts)?;
            let block_weights = (0..BLOCKS)
                .map(|b| weights.select(&(BLOCKS * b..BLOCKS * (b + 1)).collect::<Vec<_>>()).for_split(split))
                .collect();
            // A block-level flip is charged like one qubit of that block.
            let reps: Vec<usize> = (0..BLOCKS).map(|b| BLOCKS * b).collect();
            let outer_weights = weights.select(&reps).for_split(split);
            Ok(Axis { inner, offset, block_weights, outer_weights })
        };
        Ok(BlockDecoder {
            code: code.clone(),
            weights: weights.clone(),
            axes: [axis(Split::X, 0)?, axis(Split::Z, AXIS_CHECKS)?],
        })
    }

    /// Edges traversed sequentially per axis: one inner decode (the seven run
    /// side by side) followed by one outer decode.
    pub fn sequential_edge_cost(&self) -> u64 {
        2 * self.axes[0].inner.trellis().total_edges()
    }

    pub fn inner_trellis(&self, split: Split) -> &Trellis {
        self.axes[if split == Split::Z { 1 } else { 0 }].inner.trellis()
    }
}

impl SyndromeDecoder for BlockDecoder {
    fn code(&self) -> &StabilizerCode {
        &self.code
    }

    fn correct(&self, s: &[u8], ws: &mut Workspace) -> Result<PathResult, DecodeError> {
        let m = self.code.stabilizers().len();
        if s.len() != m {
            return Err(DecodeError::SyndromeLength { found: s.len(), expected: m });
        }
        let n = self.code.n();
        let mut total = PauliString::identity(self.code.field(), n);
        for ax in &self.axes {
            let sx = &s[ax.offset..ax.offset + AXIS_CHECKS];
            let mut corr = PauliString::identity(self.code.field(), n);
            for b in 0..BLOCKS {
                let r = ax.inner.correct_part_with(&sx[INNER_CHECKS * b..INNER_CHECKS * (b + 1)], &ax.block_weights[b], ws)?;
                for (j, site) in r.correction.sites().enumerate() {
                    corr.set_site(BLOCKS * b + j, site);
                }
            }
            let outer = &self.code.stabilizers()[ax.offset + BLOCKS * INNER_CHECKS..ax.offset + AXIS_CHECKS];
            let mut s_out = Vec::with_capacity(INNER_CHECKS);
            for (k, g) in outer.iter().enumerate() {
                s_out.push(sx[BLOCKS * INNER_CHECKS + k] ^ g.sym_inner(&corr)?);
            }
            let r = ax.inner.correct_part_with(&s_out, &ax.outer_weights, ws)?;
            for (b, site) in r.correction.sites().enumerate() {
                if site.is_identity() {
                    continue;
                }
                for j in 0..BLOCKS {
                    let q = BLOCKS * b + j;
                    let cur = corr.site(q);
                    corr.set_site(q, Fp2Site::new(cur.x ^ site.x, cur.z ^ site.z));
                }
            }
            total = total.mul(&corr)?;
        }
        let weight = self.weights.total(&total);
        Ok(PathResult { correction: total, weight })
    }
}
