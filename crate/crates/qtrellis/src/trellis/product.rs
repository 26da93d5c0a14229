//! Trellis products and per-generator trellises.

use super::{LayerLabels, Section, Trellis, TrellisError};
use crate::code::{LabelAxis, Split, TrellisSpec};
use crate::ffield::{Field, Fp2Site};
use crate::pauli::{partial_syndrome, PauliString};

impl Trellis {
    /// The single-path trellis carrying the identity.
    pub fn trivial(field: Field, n: usize, checks: usize) -> Trellis {
        Trellis {
            field,
            n,
            split: Split::Full,
            label_axis: LabelAxis::Any,
            layer_sizes: vec![1; n + 1],
            sections: (0..n).map(|_| Section { offsets: vec![0, 1], sources: vec![0], labels: vec![0] }).collect(),
            checks,
            labels: Some(
                (0..=n)
                    .map(|_| LayerLabels { basis: vec![], offset: vec![0; checks] })
                    .collect(),
            ),
        }
    }
}

/// Minimal trellis of the group generated by one string: a single path
/// outside its span and `p` parallel strands `c·g` inside it.
pub fn elementary(g: &PauliString, checks: &[PauliString]) -> Trellis {
    let f = g.field();
    let p = f.p();
    let n = g.n();
    let Some((l, r)) = g.span() else {
        return Trellis::trivial(f, n, checks.len());
    };
    let inside = |i: usize| l <= i && i < r;
    let layer_sizes = (0..=n).map(|i| if inside(i) { p } else { 1 }).collect();
    let sections = (1..=n)
        .map(|i| {
            if i < l || i > r {
                return Section { offsets: vec![0, 1], sources: vec![0], labels: vec![0] };
            }
            let site = g.site(i - 1);
            let triples = (0..p as u8)
                .map(|c| {
                    let s = if inside(i - 1) { c as u32 } else { 0 };
                    let t = if inside(i) { c as u32 } else { 0 };
                    (t, s, Fp2Site::new(f.mul(c, site.x), f.mul(c, site.z)).code(p))
                })
                .collect();
            Section::from_triples(if inside(i) { p as usize } else { 1 }, triples).expect("distinct strands")
        })
        .collect();
    let labels = (0..=n)
        .map(|i| LayerLabels {
            basis: if inside(i) { vec![partial_syndrome(checks, g, i).expect("length")] } else { vec![] },
            offset: vec![0; checks.len()],
        })
        .collect();
    Trellis {
        field: f,
        n,
        split: Split::Full,
        label_axis: LabelAxis::Any,
        layer_sizes,
        sections,
        checks: checks.len(),
        labels: Some(labels),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LabelMode {
    /// Labels of the factors are placed side by side (distinct check sets).
    Concat,
    /// Labels of the factors are added (shared check set).
    Sum,
}

/// Trellis product: vertex `(v₁, v₂)` has index `v₁ + |V₁|·v₂`, and each pair
/// of edges becomes an edge labelled by the product of their labels.
pub fn product(a: &Trellis, b: &Trellis) -> Result<Trellis, TrellisError> {
    product_with(a, b, LabelMode::Concat)
}

fn product_with(a: &Trellis, b: &Trellis, mode: LabelMode) -> Result<Trellis, TrellisError> {
    if a.n != b.n || a.field != b.field {
        return Err(TrellisError::Mismatch(format!(
            "n = {} over F_{} vs n = {} over F_{}",
            a.n,
            a.p(),
            b.n,
            b.p()
        )));
    }
    if mode == LabelMode::Sum && a.checks != b.checks {
        return Err(TrellisError::Mismatch("factors use different check sets".into()));
    }
    let f = a.field;
    let p = f.p();
    let mut layer_sizes = Vec::with_capacity(a.n + 1);
    for (&x, &y) in a.layer_sizes.iter().zip(&b.layer_sizes) {
        let v = x as u64 * y as u64;
        if v > u32::MAX as u64 {
            return Err(TrellisError::TooLarge { predicted: v as u128, cap: u32::MAX as u128 });
        }
        layer_sizes.push(v as u32);
    }
    let mut sections = Vec::with_capacity(a.n);
    for i in 1..=a.n {
        let (sa, sb) = (a.section(i), b.section(i));
        let (ta, tb) = (sa.edge_targets(), sb.edge_targets());
        let (src_a, tgt_a) = (a.layer_sizes[i - 1], a.layer_sizes[i]);
        let mut triples = Vec::with_capacity(sa.len() * sb.len());
        for eb in 0..sb.len() {
            let lb = Fp2Site::from_code(sb.label(eb), p);
            for ea in 0..sa.len() {
                let la = Fp2Site::from_code(sa.label(ea), p);
                let label = Fp2Site::new(f.add(la.x, lb.x), f.add(la.z, lb.z)).code(p);
                triples.push((ta[ea] + tgt_a * tb[eb], sa.sources[ea] + src_a * sb.sources[eb], label));
            }
        }
        sections.push(Section::from_triples(layer_sizes[i] as usize, triples).ok_or(TrellisError::Improper(i))?);
    }
    let labels = match (&a.labels, &b.labels) {
        (Some(la), Some(lb)) => Some(
            la.iter()
                .zip(lb)
                .map(|(x, y)| match mode {
                    LabelMode::Concat => {
                        let pad = |v: &Vec<u8>, front: usize, back: usize| {
                            let mut out = vec![0u8; front];
                            out.extend_from_slice(v);
                            out.resize(front + v.len() + back, 0);
                            out
                        };
                        let mut basis: Vec<Vec<u8>> = x.basis.iter().map(|v| pad(v, 0, b.checks)).collect();
                        basis.extend(y.basis.iter().map(|v| pad(v, a.checks, 0)));
                        let mut offset = x.offset.clone();
                        offset.extend_from_slice(&y.offset);
                        LayerLabels { basis, offset }
                    }
                    LabelMode::Sum => LayerLabels {
                        basis: x.basis.iter().chain(&y.basis).cloned().collect(),
                        offset: x.offset.iter().zip(&y.offset).map(|(&u, &v)| f.add(u, v)).collect(),
                    },
                })
                .collect(),
        ),
        _ => None,
    };
    let split_pair = (a.split, b.split);
    let (split, label_axis) = match split_pair {
        (Split::X, Split::Z) | (Split::Z, Split::X) => (Split::Full, LabelAxis::Any),
        _ if a.label_axis == b.label_axis => (a.split, a.label_axis),
        _ => (Split::Full, LabelAxis::Any),
    };
    Ok(Trellis {
        field: f,
        n: a.n,
        split,
        label_axis,
        layer_sizes,
        sections,
        checks: if mode == LabelMode::Concat { a.checks + b.checks } else { a.checks },
        labels,
    })
}

/// Product of the elementary trellises of the trellis-oriented path
/// generators of `spec`. For a minimal generator set this reproduces the
/// directly built trellis, vertex numbering included.
pub fn product_of_generators(spec: &TrellisSpec) -> Result<Trellis, TrellisError> {
    let tof = spec.tof();
    let mut acc = Trellis::trivial(spec.field, spec.n, spec.checks.len());
    for g in tof.gens() {
        acc = product_with(&acc, &elementary(g, &spec.checks), LabelMode::Sum)?;
    }
    acc.split = spec.split;
    acc.label_axis = spec.label_axis;
    Ok(acc)
}

/// Checks that two trellises are isomorphic as edge-labelled graphs by
/// walking both from the root. Both must be label-deterministic (no vertex
/// has two out-edges with the same label), which holds for syndrome trellises.
pub fn isomorphic(a: &Trellis, b: &Trellis) -> Result<(), String> {
    if a.n != b.n || a.field != b.field {
        return Err("different length or field".into());
    }
    if a.layer_sizes != b.layer_sizes {
        return Err(format!("layer sizes {:?} vs {:?}", a.layer_sizes, b.layer_sizes));
    }
    let mut map: Vec<Option<u32>> = vec![Some(0)];
    for i in 1..=a.n {
        let (sa, sb) = (a.section(i), b.section(i));
        if sa.len() != sb.len() {
            return Err(format!("section {i}: {} vs {} edges", sa.len(), sb.len()));
        }
        let by_source = |t: &Trellis| -> Result<Vec<Vec<(u16, u32)>>, String> {
            let sec = t.section(i);
            let tg = sec.edge_targets();
            let mut out = vec![Vec::new(); t.layer_size(i - 1)];
            for e in 0..sec.len() {
                out[sec.source(e)].push((sec.label(e), tg[e]));
            }
            for o in out.iter_mut() {
                o.sort_unstable();
                if o.windows(2).any(|w| w[0].0 == w[1].0) {
                    return Err(format!("section {i} is not label-deterministic"));
                }
            }
            Ok(out)
        };
        let (oa, ob) = (by_source(a)?, by_source(b)?);
        let mut next: Vec<Option<u32>> = vec![None; a.layer_size(i)];
        let mut used = vec![false; b.layer_size(i)];
        for (va, m) in map.iter().enumerate() {
            let Some(vb) = *m else { return Err(format!("vertex {va} of layer {} unreachable", i - 1)) };
            let (ea, eb) = (&oa[va], &ob[vb as usize]);
            if ea.len() != eb.len() || ea.iter().zip(eb.iter()).any(|(x, y)| x.0 != y.0) {
                return Err(format!("section {i}: out-labels of vertex {va} differ"));
            }
            for (&(_, ta), &(_, tb)) in ea.iter().zip(eb.iter()) {
                match next[ta as usize] {
                    None if !used[tb as usize] => {
                        next[ta as usize] = Some(tb);
                        used[tb as usize] = true;
                    }
                    Some(x) if x == tb => {}
                    _ => return Err(format!("layer {i}: inconsistent vertex correspondence at {ta}")),
                }
            }
        }
        map = next;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin;
    use crate::trellis::DEFAULT_EDGE_CAP;

    #[test]
    fn product_with_trivial_is_identity() {
        let c = builtin("five_one_three", None).unwrap();
        let t = Trellis::for_code(&c, Split::Full, DEFAULT_EDGE_CAP).unwrap();
        let one = Trellis::trivial(c.field(), 5, 0);
        let pr = product(&t, &one).unwrap();
        assert_eq!(pr.sections, t.sections);
        assert_eq!(pr.layer_sizes, t.layer_sizes);
        assert!(isomorphic(&pr, &t).is_ok());
    }

    #[test]
    fn generator_product_matches_direct_build() {
        for name in ["five_one_three", "five_one_one", "steane"] {
            let c = builtin(name, None).unwrap();
            let spec = TrellisSpec::full(&c);
            let direct = Trellis::build(&spec, DEFAULT_EDGE_CAP).unwrap();
            let prod = product_of_generators(&spec).unwrap();
            assert_eq!(prod.sections, direct.sections, "{name}");
            assert_eq!(prod.labels, direct.labels, "{name}");
            isomorphic(&prod, &direct).unwrap();
        }
    }

    #[test]
    fn isomorphism_detects_a_changed_label() {
        let c = builtin("steane", None).unwrap();
        let t = Trellis::for_code(&c, Split::Full, DEFAULT_EDGE_CAP).unwrap();
        let mut u = t.clone();
        let l = u.sections[3].labels[0];
        u.sections[3].labels[0] = l ^ 1;
        assert!(isomorphic(&t, &u).is_err());
    }
}
