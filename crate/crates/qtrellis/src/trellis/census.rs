//! Section census: block configurations, mergers and expansions.

use super::{Trellis, TrellisError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Shape of the complete bipartite blocks of a section, as base-p exponents:
/// in-degree `p^d_past`, out-degree `p^d_future`, and `p^parallel` parallel
/// edges between each connected pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockConfig {
    pub d_past: u32,
    pub d_future: u32,
    pub parallel: u32,
}

impl BlockConfig {
    /// The fourteen shapes available when each degree exponent is at most 2.
    pub fn all_qudit() -> Vec<BlockConfig> {
        let mut out = Vec::new();
        for d_past in 0..=2 {
            for d_future in 0..=2 {
                for parallel in 0..=d_past.min(d_future) {
                    out.push(BlockConfig { d_past, d_future, parallel });
                }
            }
        }
        out
    }
    pub fn block_edges(&self, p: u32) -> u64 {
        (p as u64).pow(self.d_past + self.d_future - self.parallel)
    }
    pub fn block_left(&self, p: u32) -> u64 {
        (p as u64).pow(self.d_past - self.parallel)
    }
    pub fn block_right(&self, p: u32) -> u64 {
        (p as u64).pow(self.d_future - self.parallel)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionCensus {
    pub p: u32,
    /// Block shape and number of blocks for sections `1..=n`.
    pub sections: Vec<(BlockConfig, u64)>,
    /// Number of blocks of each shape over the whole trellis.
    pub counts: Vec<(BlockConfig, u64)>,
    pub total_vertices: u64,
    pub total_edges: u64,
    /// `Σ blocks · |E_b|`, which must equal `total_edges`.
    pub edges_from_blocks: u64,
    /// `Σ blocks · |R_b|`, which must equal `total_vertices − 1`.
    pub vertices_from_blocks: u64,
    /// `Σ_v (deg_in(v) − 1)` over layers `1..=n`.
    pub mergers: u64,
    /// `Σ_v (deg_out(v) − 1)` over layers `0..n`.
    pub expansions: u64,
}

impl SectionCensus {
    /// `ℰ = ℳ = |E| − |V| + 1` together with the block resolutions of `|E|` and `|V| − 1`.
    pub fn identities_hold(&self) -> bool {
        let euler = self.total_edges + 1 - self.total_vertices;
        self.mergers == euler
            && self.expansions == euler
            && self.edges_from_blocks == self.total_edges
            && self.vertices_from_blocks + 1 == self.total_vertices
    }
}

fn exponent(p: u32, mut v: u64) -> Option<u32> {
    let mut e = 0;
    while v > 1 {
        if v % p as u64 != 0 {
            return None;
        }
        v /= p as u64;
        e += 1;
    }
    (v == 1).then_some(e)
}

/// Classifies every section into complete bipartite blocks.
pub fn census(t: &Trellis) -> Result<SectionCensus, TrellisError> {
    let p = t.p();
    let mut sections = Vec::with_capacity(t.n);
    let mut counts: BTreeMap<BlockConfig, u64> = BTreeMap::new();
    let (mut mergers, mut expansions) = (0u64, 0u64);
    let (mut edges_from_blocks, mut vertices_from_blocks) = (0u64, 0u64);
    for i in 1..=t.n {
        let err = |msg: String| TrellisError::Census { section: i, msg };
        let sec = t.section(i);
        let shape = super::validate::blocks(t, i).map_err(err)?;
        let exp = |v: u64, what: &str| exponent(p, v).ok_or_else(|| err(format!("{what} {v} is not a power of {p}")));
        let cfg = BlockConfig {
            d_past: exp(shape.deg_in, "in-degree")?,
            d_future: exp(shape.deg_out, "out-degree")?,
            parallel: exp(shape.parallel, "parallel multiplicity")?,
        };
        let blocks = shape.blocks;
        if blocks * cfg.block_edges(p) != sec.len() as u64 {
            return Err(err("block edges do not add up to the section".into()));
        }
        *counts.entry(cfg).or_default() += blocks;
        edges_from_blocks += blocks * cfg.block_edges(p);
        vertices_from_blocks += blocks * cfg.block_right(p);
        mergers += t.layer_size(i) as u64 * (shape.deg_in - 1);
        expansions += t.layer_size(i - 1) as u64 * (shape.deg_out - 1);
        sections.push((cfg, blocks));
    }
    Ok(SectionCensus {
        p,
        sections,
        counts: counts.into_iter().collect(),
        total_vertices: t.total_vertices(),
        total_edges: t.total_edges(),
        edges_from_blocks,
        vertices_from_blocks,
        mergers,
        expansions,
    })
}
