//! Binary container and JSON export.
//!
//! Binary layout, all integers little-endian:
//!
//! ```text
//! magic "QTRL" | version u16 | p u32 | n u32 | split u8 | axis u8 | flags u8 | checks u32
//! |V_0| .. |V_n|            u32 each
//! |E_1| .. |E_n|            u64 each
//! per section, per edge:    source u32, label u16 (x·p+z), target u32
//! if flags & 1, per layer:  basis length u32, basis rows and offset (checks bytes each)
//! ```

use super::{LayerLabels, Section, Trellis, TrellisError};
use crate::code::{LabelAxis, Split};
use crate::ffield::{Field, Fp2Site};
use serde::{Deserialize, Serialize};

const MAGIC: &[u8; 4] = b"QTRL";
const VERSION: u16 = 1;

pub fn serialize(t: &Trellis) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + 10 * t.total_edges() as usize);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&t.p().to_le_bytes());
    out.extend_from_slice(&(t.n as u32).to_le_bytes());
    out.push(match t.split {
        Split::Full => 0,
        Split::X => 1,
        Split::Z => 2,
    });
    out.push(match t.label_axis {
        LabelAxis::Any => 0,
        LabelAxis::ZOnly => 1,
        LabelAxis::XOnly => 2,
    });
    out.push(t.labels.is_some() as u8);
    out.extend_from_slice(&(t.checks as u32).to_le_bytes());
    for &v in &t.layer_sizes {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for s in &t.sections {
        out.extend_from_slice(&(s.len() as u64).to_le_bytes());
    }
    for s in &t.sections {
        for tg in 0..s.targets() {
            for e in s.incoming(tg) {
                out.extend_from_slice(&s.sources[e].to_le_bytes());
                out.extend_from_slice(&s.labels[e].to_le_bytes());
                out.extend_from_slice(&(tg as u32).to_le_bytes());
            }
        }
    }
    if let Some(layers) = &t.labels {
        for ll in layers {
            out.extend_from_slice(&(ll.basis.len() as u32).to_le_bytes());
            for b in &ll.basis {
                out.extend_from_slice(b);
            }
            out.extend_from_slice(&ll.offset);
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize) -> Result<&'a [u8], TrellisError> {
        let end = self.pos.checked_add(k).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| TrellisError::Format(format!("truncated at byte {}", self.pos)))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> Result<u8, TrellisError> {
        Ok(self.take(1)?[0])
    }
    fn u16(&mut self) -> Result<u16, TrellisError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }
    fn u32(&mut self) -> Result<u32, TrellisError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> Result<u64, TrellisError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn deserialize(bytes: &[u8]) -> Result<Trellis, TrellisError> {
    let fmt = |m: String| TrellisError::Format(m);
    let mut r = Reader { buf: bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(fmt("not a trellis file".into()));
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(fmt(format!("unsupported version {version}")));
    }
    let field = Field::new(r.u32()?).map_err(|e| fmt(e.to_string()))?;
    let n = r.u32()? as usize;
    let split = match r.u8()? {
        0 => Split::Full,
        1 => Split::X,
        2 => Split::Z,
        v => return Err(fmt(format!("bad split tag {v}"))),
    };
    let label_axis = match r.u8()? {
        0 => LabelAxis::Any,
        1 => LabelAxis::ZOnly,
        2 => LabelAxis::XOnly,
        v => return Err(fmt(format!("bad label-axis tag {v}"))),
    };
    let has_labels = match r.u8()? {
        0 => false,
        1 => true,
        v => return Err(fmt(format!("bad flags {v}"))),
    };
    let checks = r.u32()? as usize;
    let layer_sizes = (0..=n).map(|_| r.u32()).collect::<Result<Vec<_>, _>>()?;
    let counts = (0..n).map(|_| r.u64()).collect::<Result<Vec<_>, _>>()?;
    let p = field.p();
    let mut sections = Vec::with_capacity(n);
    for (i, &m) in counts.iter().enumerate() {
        if m.saturating_mul(10) > (bytes.len() - r.pos) as u64 {
            return Err(fmt(format!("section {} claims {m} edges beyond the end of the data", i + 1)));
        }
        let mut triples = Vec::with_capacity(m as usize);
        for _ in 0..m {
            let (s, l, t) = (r.u32()?, r.u16()?, r.u32()?);
            let site = Fp2Site::from_code(l, p);
            if s >= layer_sizes[i] || t >= layer_sizes[i + 1] || site.x as u32 >= p || l as u32 >= p * p {
                return Err(fmt(format!("edge ({s}, {l}, {t}) out of range in section {}", i + 1)));
            }
            triples.push((t, s, l));
        }
        let sec = Section::from_triples(layer_sizes[i + 1] as usize, triples)
            .ok_or_else(|| fmt(format!("duplicate edge in section {}", i + 1)))?;
        sections.push(sec);
    }
    let labels = if has_labels {
        let mut layers = Vec::with_capacity(n + 1);
        for _ in 0..=n {
            let len = r.u32()? as usize;
            let basis = (0..len).map(|_| r.take(checks).map(<[u8]>::to_vec)).collect::<Result<Vec<_>, _>>()?;
            let offset = r.take(checks)?.to_vec();
            layers.push(LayerLabels { basis, offset });
        }
        Some(layers)
    } else {
        None
    };
    if r.pos != bytes.len() {
        return Err(fmt(format!("{} trailing bytes", bytes.len() - r.pos)));
    }
    Ok(Trellis { field, n, split, label_axis, layer_sizes, sections, checks, labels })
}

/// JSON view of a trellis. Each edge is `[source, x, z, target]`, where the
/// edge carries the site `X^x Z^z`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrellisJson {
    pub p: u32,
    pub n: usize,
    pub split: Split,
    pub layer_sizes: Vec<u32>,
    pub sections: Vec<Vec<[u32; 4]>>,
    /// Per layer: label basis rows and offset, when labels are kept.
    pub labels: Option<Vec<(Vec<Vec<u8>>, Vec<u8>)>>,
}

pub fn to_json(t: &Trellis) -> TrellisJson {
    let p = t.p();
    TrellisJson {
        p,
        n: t.n,
        split: t.split,
        layer_sizes: t.layer_sizes.clone(),
        sections: t
            .sections
            .iter()
            .map(|s| {
                let tg = s.edge_targets();
                (0..s.len())
                    .map(|e| {
                        let site = Fp2Site::from_code(s.labels[e], p);
                        [s.sources[e], site.x as u32, site.z as u32, tg[e]]
                    })
                    .collect()
            })
            .collect(),
        labels: t.labels.as_ref().map(|ls| ls.iter().map(|l| (l.basis.clone(), l.offset.clone())).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin;
    use crate::trellis::DEFAULT_EDGE_CAP;

    fn five_one_three() -> Trellis {
        Trellis::for_code(&builtin("five_one_three", None).unwrap(), Split::Full, DEFAULT_EDGE_CAP).unwrap()
    }

    #[test]
    fn round_trip() {
        let t = five_one_three();
        assert_eq!(deserialize(&serialize(&t)).unwrap(), t);
        let mut bare = t.clone();
        bare.drop_labels();
        assert_eq!(deserialize(&serialize(&bare)).unwrap(), bare);
    }

    #[test]
    fn truncated_stream_is_rejected() {
        let bytes = serialize(&five_one_three());
        for cut in [0, 3, 10, 40, bytes.len() - 1] {
            assert!(matches!(deserialize(&bytes[..cut]), Err(TrellisError::Format(_))), "cut {cut}");
        }
        let mut bad = bytes.clone();
        bad[4] = 9;
        assert!(matches!(deserialize(&bad), Err(TrellisError::Format(_))));
    }

    #[test]
    fn json_lists_every_edge() {
        let j = to_json(&five_one_three());
        assert_eq!(j.sections.iter().map(Vec::len).sum::<usize>(), 104);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"split\":\"full\""));
    }
}
