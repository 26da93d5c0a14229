//! Vertex and edge counts predicted from past/future dimensions.

use super::tof::TofGenerators;
use serde::{Deserialize, Serialize};

/// Change in past and future dimension across one section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SectionConfig {
    pub d_past: usize,
    pub d_future: usize,
}

/// Structural profile of a minimal trellis.
///
/// Counts are stored as base-p exponents; the accessors turn them into
/// integers and saturate at `u128::MAX`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrellisProfile {
    pub p: u32,
    pub n: usize,
    /// Dimension of the group whose elements label the paths.
    pub dim: usize,
    pub dim_past: Vec<usize>,
    pub dim_future: Vec<usize>,
    /// Past/future dimensions of the check generators, when known.
    pub check_past: Option<Vec<usize>>,
    pub check_future: Option<Vec<usize>>,
    /// `log_p |V_i|` for `i = 0..=n`.
    pub vertex_exp: Vec<usize>,
    /// `log_p |E_i|` for sections `i = 1..=n`, stored at index `i - 1`.
    pub edge_exp: Vec<usize>,
    pub sections: Vec<SectionConfig>,
}

fn pow(p: u32, e: usize) -> u128 {
    (p as u128).checked_pow(e as u32).unwrap_or(u128::MAX)
}

impl TrellisProfile {
    pub fn v_count(&self, i: usize) -> u128 {
        pow(self.p, self.vertex_exp[i])
    }
    /// Size of section `i` (1-based).
    pub fn e_count(&self, i: usize) -> u128 {
        pow(self.p, self.edge_exp[i - 1])
    }
    /// In-degree of every vertex in layer `i ≥ 1`.
    pub fn deg_in(&self, i: usize) -> Option<u128> {
        (i >= 1 && i <= self.n).then(|| pow(self.p, self.dim_past[i] - self.dim_past[i - 1]))
    }
    /// Out-degree of every vertex in layer `i < n`.
    pub fn deg_out(&self, i: usize) -> Option<u128> {
        (i < self.n).then(|| pow(self.p, self.dim_future[i] - self.dim_future[i + 1]))
    }
    pub fn total_vertices(&self) -> u128 {
        (0..=self.n).map(|i| self.v_count(i)).fold(0u128, |a, b| a.saturating_add(b))
    }
    pub fn total_edges(&self) -> u128 {
        (1..=self.n).map(|i| self.e_count(i)).fold(0u128, |a, b| a.saturating_add(b))
    }
    pub fn max_vertex_exp(&self) -> usize {
        self.vertex_exp.iter().copied().max().unwrap_or(0)
    }
}

/// Profile of the minimal trellis whose paths form the group generated by `tof`.
pub fn profile(tof: &TofGenerators, n: usize, p: u32) -> TrellisProfile {
    let dim = tof.len();
    let dim_past: Vec<usize> = (0..=n).map(|i| tof.dim_past(i)).collect();
    let dim_future: Vec<usize> = (0..=n).map(|i| tof.dim_future(i)).collect();
    let vertex_exp = (0..=n).map(|i| dim - dim_past[i] - dim_future[i]).collect();
    let edge_exp = (1..=n).map(|i| dim - dim_past[i - 1] - dim_future[i]).collect();
    let sections = (1..=n)
        .map(|i| SectionConfig {
            d_past: dim_past[i] - dim_past[i - 1],
            d_future: dim_future[i - 1] - dim_future[i],
        })
        .collect();
    TrellisProfile {
        p,
        n,
        dim,
        dim_past,
        dim_future,
        check_past: None,
        check_future: None,
        vertex_exp,
        edge_exp,
        sections,
    }
}
