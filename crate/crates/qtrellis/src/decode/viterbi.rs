//! Minimum-weight path search on a shifted trellis.

use super::{DecodeError, WeightTable};
use crate::ffield::Fp2Site;
use crate::pauli::PauliString;
use crate::trellis::{Section, ShiftedTrellis};
use rayon::prelude::*;

/// Layers at least this wide are relaxed in parallel when allowed.
const PAR_LAYER: usize = 4096;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ViterbiOptions {
    /// Meet in the middle at the narrowest layer. Returns a path of the same
    /// minimum weight; among ties it may pick a different one.
    pub bidirectional: bool,
    /// Relax the vertices of wide layers on the thread pool. The result is
    /// identical to the sequential pass.
    pub parallel: bool,
}

/// Scratch buffers reused across decodes.
#[derive(Debug, Default, Clone)]
pub struct Workspace {
    cost: Vec<f64>,
    next: Vec<f64>,
    back: Vec<u32>,
    fwd: Vec<u32>,
    offsets: Vec<usize>,
    lut: Vec<f64>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }
}

/// A minimum-weight correction and its weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub correction: PauliString,
    pub weight: f64,
}

/// Finds a minimum-weight root-to-sink path of `st` under `weights`.
pub fn viterbi(st: &ShiftedTrellis<'_>, weights: &WeightTable) -> Result<PathResult, DecodeError> {
    viterbi_with(st, weights, ViterbiOptions::default(), &mut Workspace::new())
}

pub fn viterbi_with(
    st: &ShiftedTrellis<'_>,
    weights: &WeightTable,
    opts: ViterbiOptions,
    ws: &mut Workspace,
) -> Result<PathResult, DecodeError> {
    let t = st.base();
    let n = t.n();
    if weights.n() != n || weights.p() != t.p() {
        return Err(DecodeError::BadWeights(format!(
            "table for n = {} over F_{}, trellis has n = {n} over F_{}",
            weights.n(),
            weights.p(),
            t.p()
        )));
    }
    ws.offsets.clear();
    let mut acc = 0;
    for &v in t.layer_sizes() {
        ws.offsets.push(acc);
        acc += v as usize;
    }
    ws.back.clear();
    ws.back.resize(acc, u32::MAX);

    let split = if opts.bidirectional && n > 1 {
        (0..=n).min_by_key(|&i| (t.layer_size(i), i)).unwrap()
    } else {
        n
    };
    ws.cost.clear();
    ws.cost.push(0.0);
    for i in 1..=split {
        fill_lut(st, weights, i, &mut ws.lut);
        relax_forward(t.section(i), &ws.lut, &ws.cost, &mut ws.next, &mut ws.back[ws.offsets[i]..], opts.parallel);
        std::mem::swap(&mut ws.cost, &mut ws.next);
    }
    let p = t.p();
    let mut sites = vec![Fp2Site::default(); n];
    let label_site = |i: usize, e: usize| Fp2Site::from_code(st.edge_label(i, e), p);

    let (mut v, weight) = if split == n {
        (0, ws.cost[0])
    } else {
        // Backward costs from the sink, with forward pointers per vertex.
        ws.fwd.clear();
        ws.fwd.resize(acc, u32::MAX);
        let mut bcost = vec![0.0f64];
        for i in (split + 1..=n).rev() {
            fill_lut(st, weights, i, &mut ws.lut);
            let sec = t.section(i);
            let mut prev = vec![f64::INFINITY; t.layer_size(i - 1)];
            let fwd = &mut ws.fwd[ws.offsets[i - 1]..];
            for tg in 0..sec.targets() {
                for e in sec.incoming(tg) {
                    let s = sec.source(e);
                    let c = ws.lut[sec.label(e) as usize] + bcost[tg];
                    if c < prev[s] {
                        prev[s] = c;
                        fwd[s] = e as u32;
                    }
                }
            }
            bcost = prev;
        }
        let mut best = (f64::INFINITY, 0usize);
        for (v, (&f, &b)) in ws.cost.iter().zip(&bcost).enumerate() {
            if f + b < best.0 {
                best = (f + b, v);
            }
        }
        if best.0.is_infinite() {
            return Err(DecodeError::NoFinitePath);
        }
        // Walk forward from the meeting vertex.
        let mut u = best.1;
        for i in split + 1..=n {
            let e = ws.fwd[ws.offsets[i - 1] + u] as usize;
            sites[i - 1] = label_site(i, e);
            u = target_of(t.section(i), e);
        }
        (best.1, best.0)
    };
    if weight.is_infinite() {
        return Err(DecodeError::NoFinitePath);
    }
    for i in (1..=split).rev() {
        let e = ws.back[ws.offsets[i] + v] as usize;
        sites[i - 1] = label_site(i, e);
        v = t.section(i).source(e);
    }
    Ok(PathResult { correction: PauliString::from_sites(t.field(), &sites), weight })
}

/// `lut[ℓ] = w_i(ℓ · T_i)`: the weight of base label `ℓ` after the shift.
fn fill_lut(st: &ShiftedTrellis<'_>, weights: &WeightTable, i: usize, lut: &mut Vec<f64>) {
    let p = st.base().p();
    let f = st.base().field();
    let t = st.pure_error().site(i - 1);
    let row = weights.row(i - 1);
    lut.clear();
    for code in 0..(p * p) as u16 {
        let s = Fp2Site::from_code(code, p);
        lut.push(row[Fp2Site::new(f.add(s.x, t.x), f.add(s.z, t.z)).code(p) as usize]);
    }
}

fn target_of(sec: &Section, e: usize) -> usize {
    let mut lo = 0;
    let mut hi = sec.targets();
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if sec.incoming(mid).start <= e {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[inline(always)]
fn relax_one(sec: &Section, lut: &[f64], cost: &[f64], tg: usize) -> (f64, u32) {
    let mut best = f64::INFINITY;
    let mut arg = u32::MAX;
    // Edges are stored by (source, base label) within a target, so a strict
    // comparison keeps the smallest such pair among equal costs.
    let r = sec.incoming(tg);
    let (srcs, labels) = (&sec.sources()[r.clone()], &sec.labels()[r.clone()]);
    let labels = &labels[..srcs.len()];
    let mut pick = usize::MAX;
    for k in 0..srcs.len() {
        let c = cost[srcs[k] as usize] + lut[labels[k] as usize];
        if c < best {
            best = c;
            pick = k;
        }
    }
    if pick != usize::MAX {
        arg = (r.start + pick) as u32;
    }
    (best, arg)
}

fn relax_forward(sec: &Section, lut: &[f64], cost: &[f64], next: &mut Vec<f64>, back: &mut [u32], parallel: bool) {
    let nt = sec.targets();
    next.clear();
    next.resize(nt, f64::INFINITY);
    let back = &mut back[..nt];
    if parallel && nt >= PAR_LAYER {
        next.par_iter_mut().zip(back.par_iter_mut()).enumerate().for_each(|(tg, (c, b))| {
            (*c, *b) = relax_one(sec, lut, cost, tg);
        });
    } else {
        for ((c, b), tg) in next.iter_mut().zip(back.iter_mut()).zip(0..nt) {
            (*c, *b) = relax_one(sec, lut, cost, tg);
        }
    }
}
