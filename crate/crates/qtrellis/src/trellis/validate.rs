//! Structural checks against a predicted profile.

use super::Trellis;
use crate::code::TrellisProfile;
use crate::ffield::FpMatrix;

/// Uniform block shape of a section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct BlockShape {
    pub deg_in: u64,
    pub deg_out: u64,
    pub parallel: u64,
    pub blocks: u64,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Decomposes section `i` into connected components and checks that they
/// are identical complete bipartite blocks with uniform parallel edges.
pub(crate) fn blocks(t: &Trellis, i: usize) -> Result<BlockShape, String> {
    let sec = t.section(i);
    let (ns, nt) = (t.layer_size(i - 1), t.layer_size(i));
    if sec.targets() != nt {
        return Err(format!("{} target slots for {} vertices", sec.targets(), nt));
    }
    let mut out_deg = vec![0u64; ns];
    let mut parent: Vec<u32> = (0..(ns + nt) as u32).collect();
    let mut parallel: Option<u64> = None;
    for tg in 0..nt {
        let r = sec.incoming(tg);
        if r.is_empty() {
            return Err(format!("vertex {tg} of layer {i} has no incoming edge"));
        }
        let mut run = 0u64;
        let mut prev: Option<u32> = None;
        for e in r.clone() {
            let s = sec.sources[e];
            if s as usize >= ns {
                return Err(format!("edge {e} leaves nonexistent vertex {s}"));
            }
            out_deg[s as usize] += 1;
            if prev == Some(s) {
                run += 1;
                if sec.labels[e] == sec.labels[e - 1] {
                    return Err(format!("duplicate edge ({s}, {}, {tg})", sec.labels[e]));
                }
            } else {
                if prev.is_some() {
                    if *parallel.get_or_insert(run) != run {
                        return Err("parallel multiplicity is not uniform".into());
                    }
                }
                prev = Some(s);
                run = 1;
            }
            let (a, b) = (find(&mut parent, s), find(&mut parent, (ns + tg) as u32));
            if a != b {
                parent[a as usize] = b;
            }
        }
        if *parallel.get_or_insert(run) != run {
            return Err("parallel multiplicity is not uniform".into());
        }
    }
    let deg_in = sec.incoming(0).len() as u64;
    if (0..nt).any(|tg| sec.incoming(tg).len() as u64 != deg_in) {
        return Err("in-degree is not uniform".into());
    }
    let deg_out = out_deg[0];
    if out_deg.iter().any(|&d| d != deg_out) {
        return Err("out-degree is not uniform".into());
    }
    let parallel = parallel.unwrap_or(1);
    // Count vertices per component on both sides.
    let mut left = std::collections::HashMap::new();
    let mut right = std::collections::HashMap::new();
    for s in 0..ns as u32 {
        *left.entry(find(&mut parent, s)).or_insert(0u64) += 1;
    }
    for tg in 0..nt as u32 {
        *right.entry(find(&mut parent, ns as u32 + tg)).or_insert(0u64) += 1;
    }
    let blocks = left.len() as u64;
    if right.len() as u64 != blocks {
        return Err("components do not pair up".into());
    }
    for (root, &l) in &left {
        let r = right.get(root).copied().unwrap_or(0);
        // Complete bipartite: every target sees all l sources, each `parallel` times.
        if l * parallel != deg_in || r * parallel != deg_out {
            return Err(format!("block with {l}×{r} vertices is not complete bipartite"));
        }
    }
    Ok(BlockShape { deg_in, deg_out, parallel, blocks })
}

/// Lists every way in which `t` departs from a minimal trellis with the given
/// profile. An empty list means the trellis is valid.
pub fn validate(t: &Trellis, profile: &TrellisProfile) -> Vec<String> {
    let mut bad = Vec::new();
    let n = t.n();
    if profile.n != n || profile.p != t.p() {
        bad.push(format!("profile is for n = {}, p = {}", profile.n, profile.p));
        return bad;
    }
    if t.layer_size(0) != 1 || t.layer_size(n) != 1 {
        bad.push("root and sink layers must hold one vertex".into());
    }
    for i in 0..=n {
        if t.layer_size(i) as u128 != profile.v_count(i) {
            bad.push(format!("|V_{i}| = {} but the profile predicts {}", t.layer_size(i), profile.v_count(i)));
        }
    }
    for i in 1..=n {
        let sec = t.section(i);
        if sec.len() as u128 != profile.e_count(i) {
            bad.push(format!("|E_{i}| = {} but the profile predicts {}", sec.len(), profile.e_count(i)));
        }
        match blocks(t, i) {
            Err(msg) => bad.push(format!("section {i}: {msg}")),
            Ok(shape) => {
                if Some(shape.deg_in as u128) != profile.deg_in(i) {
                    bad.push(format!("section {i}: in-degree {} differs from the profile", shape.deg_in));
                }
                if Some(shape.deg_out as u128) != profile.deg_out(i - 1) {
                    bad.push(format!("section {i}: out-degree {} differs from the profile", shape.deg_out));
                }
            }
        }
    }
    if let Some(layers) = t.layer_labels() {
        let p = t.p();
        for (i, ll) in layers.iter().enumerate() {
            if (p as u128).pow(ll.basis.len() as u32) != t.layer_size(i) as u128 {
                bad.push(format!("layer {i}: label basis of size {} for {} vertices", ll.basis.len(), t.layer_size(i)));
                continue;
            }
            if !ll.basis.is_empty() {
                let m = FpMatrix::from_residue_rows(t.field(), ll.basis[0].len(), &ll.basis);
                if m.rank() != ll.basis.len() {
                    bad.push(format!("layer {i}: vertex labels are not unique"));
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{builtin, Split, TrellisSpec};
    use crate::trellis::DEFAULT_EDGE_CAP;

    fn built(name: &str) -> (Trellis, TrellisProfile) {
        let c = builtin(name, None).unwrap();
        let spec = TrellisSpec::full(&c);
        (Trellis::build(&spec, DEFAULT_EDGE_CAP).unwrap(), spec.profile())
    }

    #[test]
    fn fresh_build_is_valid() {
        for name in ["five_one_one", "five_one_three", "steane"] {
            let (t, prof) = built(name);
            assert!(validate(&t, &prof).is_empty(), "{name}: {:?}", validate(&t, &prof));
        }
    }

    #[test]
    fn deleting_an_edge_is_reported() {
        let (mut t, prof) = built("five_one_three");
        let sec = &mut t.sections[2];
        sec.sources.remove(0);
        sec.labels.remove(0);
        for o in sec.offsets.iter_mut().skip(1) {
            *o -= 1;
        }
        let bad = validate(&t, &prof);
        assert!(bad.iter().any(|m| m.contains("section 3")), "{bad:?}");
    }

    #[test]
    fn fig1_parallel_edges_are_uniform() {
        let (t, _) = built("five_one_one");
        let shape = blocks(&t, 5).unwrap();
        assert_eq!(shape.parallel, 2);
        assert_eq!(t.split(), Split::Full);
    }
}
