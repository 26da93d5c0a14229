//! Minimal syndrome trellises.
//!
//! With the path generators in trellis-oriented form, the vertices of layer
//! `i` are the coefficient vectors of the generators whose span crosses the
//! cut after qudit `i`, and the edges of section `i` are the coefficient
//! vectors of the generators touching qudit `i`. Vertex indices are those
//! coefficient vectors read as base-p numbers, first active generator least
//! significant. Edges are stored grouped by target and sorted by
//! `(target, source, label)`.

mod census;
mod io;
mod product;
mod validate;

pub use census::{census, BlockConfig, SectionCensus};
pub use io::{deserialize, serialize, to_json, TrellisJson};
pub use product::{elementary, isomorphic, product, product_of_generators};
pub use validate::validate;

use crate::code::{LabelAxis, Split, StabilizerCode, TrellisSpec};
use crate::ffield::{Field, Fp2Site};
use crate::pauli::{partial_syndrome, PauliString, SyndromeVector};
use rayon::prelude::*;
use thiserror::Error;

/// Default limit on the total number of edges a build may allocate.
pub const DEFAULT_EDGE_CAP: u128 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrellisError {
    #[error("trellis would have {predicted} edges, above the cap of {cap}")]
    TooLarge { predicted: u128, cap: u128 },
    #[error("trellises differ in shape: {0}")]
    Mismatch(String),
    #[error("product is improper: duplicate edge in section {0}")]
    Improper(usize),
    #[error("section {section} is not a union of complete bipartite blocks: {msg}")]
    Census { section: usize, msg: String },
    #[error("trellis format error: {0}")]
    Format(String),
    #[error(transparent)]
    Code(#[from] crate::code::CodeError),
}

/// Edges of one section, grouped by target vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    /// `offsets[t]..offsets[t+1]` indexes the edges entering target `t`.
    pub(crate) offsets: Vec<u32>,
    pub(crate) sources: Vec<u32>,
    /// Site label codes `x·p + z`.
    pub(crate) labels: Vec<u16>,
}

impl Section {
    pub fn len(&self) -> usize {
        self.sources.len()
    }
    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }
    pub fn targets(&self) -> usize {
        self.offsets.len() - 1
    }
    /// Edge indices entering target `t`.
    #[inline]
    pub fn incoming(&self, t: usize) -> std::ops::Range<usize> {
        self.offsets[t] as usize..self.offsets[t + 1] as usize
    }
    #[inline]
    pub fn source(&self, e: usize) -> usize {
        self.sources[e] as usize
    }
    #[inline]
    pub fn label(&self, e: usize) -> u16 {
        self.labels[e]
    }
    pub fn sources(&self) -> &[u32] {
        &self.sources
    }
    pub fn labels(&self) -> &[u16] {
        &self.labels
    }
    /// Target of every edge, in storage order.
    pub fn edge_targets(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len());
        for t in 0..self.targets() {
            out.extend(std::iter::repeat(t as u32).take(self.incoming(t).len()));
        }
        out
    }

    /// Builds a section from unsorted `(target, source, label)` triples.
    /// Returns `None` when a triple repeats.
    pub(crate) fn from_triples(targets: usize, mut triples: Vec<(u32, u32, u16)>) -> Option<Section> {
        triples.par_sort_unstable();
        if triples.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let mut offsets = vec![0u32; targets + 1];
        for &(t, _, _) in &triples {
            offsets[t as usize + 1] += 1;
        }
        for t in 0..targets {
            offsets[t + 1] += offsets[t];
        }
        Some(Section {
            offsets,
            sources: triples.iter().map(|e| e.1).collect(),
            labels: triples.iter().map(|e| e.2).collect(),
        })
    }
}

/// Linear description of the partial-syndrome labels of one layer:
/// vertex `v` with base-p digits `c_j` has label `offset + Σ c_j·basis[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerLabels {
    pub basis: Vec<SyndromeVector>,
    pub offset: SyndromeVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trellis {
    pub(crate) field: Field,
    pub(crate) n: usize,
    pub(crate) split: Split,
    pub(crate) label_axis: LabelAxis,
    pub(crate) layer_sizes: Vec<u32>,
    pub(crate) sections: Vec<Section>,
    /// Number of checks labelling the vertices.
    pub(crate) checks: usize,
    pub(crate) labels: Option<Vec<LayerLabels>>,
}

fn pow(p: u32, e: usize) -> u64 {
    (p as u64).pow(e as u32)
}

impl Trellis {
    /// Builds the zero-syndrome trellis of a code.
    pub fn for_code(code: &StabilizerCode, split: Split, cap: u128) -> Result<Trellis, TrellisError> {
        Trellis::build(&TrellisSpec::new(code, split)?, cap)
    }

    /// Builds the minimal zero-syndrome trellis of `spec`, refusing when the
    /// predicted edge total exceeds `cap`.
    pub fn build(spec: &TrellisSpec, cap: u128) -> Result<Trellis, TrellisError> {
        let tof = spec.tof();
        let p = spec.field.p();
        let n = spec.n;
        let prof = crate::code::profile(&tof, n, p);
        let predicted = prof.total_edges();
        let widest = (0..=n).map(|i| prof.v_count(i)).max().unwrap_or(1);
        if predicted > cap || widest > u32::MAX as u128 || (1..=n).any(|i| prof.e_count(i) > u32::MAX as u128) {
            return Err(TrellisError::TooLarge { predicted, cap });
        }
        let gens = tof.gens();
        let (left, right) = (tof.left(), tof.right());
        // Generators active across the cut after qudit i.
        let active = |i: usize| -> Vec<usize> { (0..gens.len()).filter(|&g| left[g] <= i && i < right[g]).collect() };
        let layers: Vec<Vec<usize>> = (0..=n).map(active).collect();

        let sections = (1..=n)
            .into_par_iter()
            .map(|i| build_section(spec.field, gens, left, right, &layers[i - 1], &layers[i], i))
            .collect();

        let labels = (0..=n)
            .map(|i| LayerLabels {
                basis: layers[i]
                    .iter()
                    .map(|&g| partial_syndrome(&spec.checks, &gens[g], i).expect("generator length"))
                    .collect(),
                offset: vec![0; spec.checks.len()],
            })
            .collect();

        Ok(Trellis {
            field: spec.field,
            n,
            split: spec.split,
            label_axis: spec.label_axis,
            layer_sizes: layers.iter().map(|a| pow(p, a.len()) as u32).collect(),
            sections,
            checks: spec.checks.len(),
            labels: Some(labels),
        })
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
    pub fn split(&self) -> Split {
        self.split
    }
    pub fn label_axis(&self) -> LabelAxis {
        self.label_axis
    }
    /// `|V_i|` for `i = 0..=n`.
    /// Number of checks whose partial syndromes label the vertices.
    pub fn check_count(&self) -> usize {
        self.checks
    }
    pub fn layer_size(&self, i: usize) -> usize {
        self.layer_sizes[i] as usize
    }
    pub fn layer_sizes(&self) -> &[u32] {
        &self.layer_sizes
    }
    /// Section `i`, 1-based.
    pub fn section(&self, i: usize) -> &Section {
        &self.sections[i - 1]
    }
    pub fn sections(&self) -> &[Section] {
        &self.sections
    }
    pub fn total_vertices(&self) -> u64 {
        self.layer_sizes.iter().map(|&v| v as u64).sum()
    }
    pub fn total_edges(&self) -> u64 {
        self.sections.iter().map(|s| s.len() as u64).sum()
    }
    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }
    pub fn layer_labels(&self) -> Option<&[LayerLabels]> {
        self.labels.as_deref()
    }
    /// Forgets the vertex labels; decoding does not use them.
    pub fn drop_labels(&mut self) {
        self.labels = None;
    }

    /// Partial-syndrome label of vertex `v` in layer `i`.
    pub fn vertex_label(&self, i: usize, v: usize) -> Option<SyndromeVector> {
        let ll = &self.labels.as_ref()?[i];
        let f = self.field;
        let p = f.p() as usize;
        let mut out = ll.offset.clone();
        let mut rest = v;
        for b in &ll.basis {
            let c = (rest % p) as u8;
            rest /= p;
            if c != 0 {
                for (o, &x) in out.iter_mut().zip(b) {
                    *o = f.add(*o, f.mul(c, x));
                }
            }
        }
        Some(out)
    }

    /// Out-edges of every source in section `i`, as lists of edge indices.
    pub fn outgoing(&self, i: usize) -> Vec<Vec<usize>> {
        let sec = self.section(i);
        let mut out = vec![Vec::new(); self.layer_size(i - 1)];
        for e in 0..sec.len() {
            out[sec.source(e)].push(e);
        }
        out
    }

    /// Every root-to-sink path as a Pauli string. Intended for small trellises.
    pub fn enumerate_paths(&self) -> Vec<PauliString> {
        let p = self.p();
        let mut partial: Vec<(usize, Vec<Fp2Site>)> = vec![(0, Vec::new())];
        for i in 1..=self.n {
            let out = self.outgoing(i);
            let sec = self.section(i);
            let targets = sec.edge_targets();
            let mut next = Vec::new();
            for (v, path) in partial {
                for &e in &out[v] {
                    let mut q = path.clone();
                    q.push(Fp2Site::from_code(sec.label(e), p));
                    next.push((targets[e] as usize, q));
                }
            }
            partial = next;
        }
        partial.into_iter().map(|(_, s)| PauliString::from_sites(self.field, &s)).collect()
    }

    /// View of this trellis shifted onto the coset of `pure_error`.
    pub fn shift<'a>(&'a self, pure_error: &'a PauliString) -> ShiftedTrellis<'a> {
        assert_eq!(pure_error.n(), self.n, "pure error length");
        ShiftedTrellis { base: self, pure_error }
    }
}

fn build_section(
    field: Field,
    gens: &[PauliString],
    left: &[usize],
    right: &[usize],
    src_layer: &[usize],
    tgt_layer: &[usize],
    i: usize,
) -> Section {
    let p = field.p();
    let touching: Vec<usize> = (0..gens.len()).filter(|&g| left[g] <= i && i <= right[g]).collect();
    let place = |layer: &[usize], g: usize| layer.iter().position(|&a| a == g).map(|pos| pow(p, pos));
    let digits: Vec<(u64, u64, Fp2Site)> = touching
        .iter()
        .map(|&g| (place(src_layer, g).unwrap_or(0), place(tgt_layer, g).unwrap_or(0), gens[g].site(i - 1)))
        .collect();
    let count = pow(p, touching.len()) as usize;
    let mut triples = Vec::with_capacity(count);
    let mut coef = vec![0u8; digits.len()];
    for _ in 0..count {
        let (mut s, mut t, mut x, mut z) = (0u64, 0u64, 0u8, 0u8);
        for (&c, &(ws, wt, site)) in coef.iter().zip(&digits) {
            if c != 0 {
                s += c as u64 * ws;
                t += c as u64 * wt;
                x = field.add(x, field.mul(c, site.x));
                z = field.add(z, field.mul(c, site.z));
            }
        }
        triples.push((t as u32, s as u32, Fp2Site::new(x, z).code(p)));
        for c in coef.iter_mut() {
            *c += 1;
            if (*c as u32) < p {
                break;
            }
            *c = 0;
        }
    }
    Section::from_triples(pow(p, tgt_layer.len()) as usize, triples).expect("minimal trellis edges are distinct")
}

/// A trellis viewed on the coset of a pure error. Only labels change; the
/// graph structure is shared with the base trellis.
#[derive(Debug, Clone, Copy)]
pub struct ShiftedTrellis<'a> {
    base: &'a Trellis,
    pure_error: &'a PauliString,
}

impl<'a> ShiftedTrellis<'a> {
    pub fn base(&self) -> &'a Trellis {
        self.base
    }
    pub fn pure_error(&self) -> &'a PauliString {
        self.pure_error
    }

    /// Label of edge `e` in section `i`, multiplied by the pure error's site.
    pub fn edge_label(&self, i: usize, e: usize) -> u16 {
        let p = self.base.p();
        let f = self.base.field;
        let s = Fp2Site::from_code(self.base.section(i).label(e), p);
        let t = self.pure_error.site(i - 1);
        Fp2Site::new(f.add(s.x, t.x), f.add(s.z, t.z)).code(p)
    }

    /// The shifted trellis as an owned value. Vertex labels gain the partial
    /// syndrome of the pure error when `checks` are supplied; otherwise they
    /// are dropped.
    pub fn materialize(&self, checks: Option<&[PauliString]>) -> Trellis {
        let mut t = self.base.clone();
        for i in 1..=t.n {
            let labels: Vec<u16> = (0..t.sections[i - 1].len()).map(|e| self.edge_label(i, e)).collect();
            let sec = &mut t.sections[i - 1];
            // Relabelling is a bijection on each (target, source) group, so only
            // the order inside a group can change.
            sec.labels = labels;
            for tg in 0..sec.targets() {
                let r = sec.incoming(tg);
                let mut pairs: Vec<(u32, u16)> = r.clone().map(|e| (sec.sources[e], sec.labels[e])).collect();
                pairs.sort_unstable();
                for (k, e) in r.enumerate() {
                    sec.sources[e] = pairs[k].0;
                    sec.labels[e] = pairs[k].1;
                }
            }
        }
        match (checks, t.labels.as_mut()) {
            (Some(checks), Some(layers)) => {
                let f = t.field;
                for (i, ll) in layers.iter_mut().enumerate() {
                    let s = partial_syndrome(checks, self.pure_error, i).expect("pure error length");
                    for (o, x) in ll.offset.iter_mut().zip(s) {
                        *o = f.add(*o, x);
                    }
                }
            }
            _ => t.labels = None,
        }
        t
    }
}
