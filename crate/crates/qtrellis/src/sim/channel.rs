//! Single-site noise channels.

use super::SimError;
use crate::decode::WeightTable;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ChannelKind {
    /// Every non-identity label with probability `p/(p²−1)`.
    Depolarizing,
    /// `Z^b`, `b ≠ 0`, each with probability `p/(p−1)`.
    DephasingZ,
    /// `X^a`, `a ≠ 0`, each with probability `p/(p−1)`.
    DephasingX,
    /// Fixed weights. Usable for decoding but not for sampling.
    Table(WeightTable),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub p_phys: f64,
}

impl ChannelSpec {
    pub fn new(kind: ChannelKind, p_phys: f64) -> Result<Self, SimError> {
        if !(0.0..=1.0).contains(&p_phys) {
            return Err(SimError::Channel(format!("physical rate {p_phys} outside [0, 1]")));
        }
        Ok(ChannelSpec { kind, p_phys })
    }

    pub fn table(t: WeightTable) -> Self {
        ChannelSpec { kind: ChannelKind::Table(t), p_phys: 0.0 }
    }

    /// The same kind of channel at another rate.
    pub fn at(&self, p_phys: f64) -> Result<Self, SimError> {
        Self::new(self.kind.clone(), p_phys)
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::DephasingZ => "dephasing-z",
            ChannelKind::DephasingX => "dephasing-x",
            ChannelKind::Table(_) => "table",
        }
    }

    /// Probability of each label code `x·p + z` at one site.
    pub fn site_probabilities(&self, p: u32) -> Result<Vec<f64>, SimError> {
        let q = (p * p) as usize;
        let pp = p as usize;
        let r = self.p_phys;
        let mut probs = vec![0.0; q];
        probs[0] = 1.0 - r;
        match self.kind {
            ChannelKind::Depolarizing => probs[1..].iter_mut().for_each(|v| *v = r / (q - 1) as f64),
            ChannelKind::DephasingZ => (1..pp).for_each(|b| probs[b] = r / (pp - 1) as f64),
            ChannelKind::DephasingX => (1..pp).for_each(|a| probs[a * pp] = r / (pp - 1) as f64),
            ChannelKind::Table(_) => {
                return Err(SimError::Channel("a weight table has no probabilities".into()));
            }
        }
        Ok(probs)
    }
}

impl std::str::FromStr for ChannelSpec {
    type Err = SimError;
    /// `kind:rate`, e.g. `depolarizing:0.1` or `dephasing-z:0.05`.
    fn from_str(s: &str) -> Result<Self, SimError> {
        let (kind, rate) = s.split_once(':').unwrap_or((s, "0"));
        let kind = parse_kind(kind)?;
        let rate = rate.trim().parse::<f64>().map_err(|_| SimError::Channel(format!("bad rate {rate:?}")))?;
        Self::new(kind, rate)
    }
}

/// Parses a channel name: `depolarizing`, `dephasing-z` or `dephasing-x`
/// (underscores also accepted).
pub fn parse_kind(name: &str) -> Result<ChannelKind, SimError> {
    match name.trim().to_ascii_lowercase().replace('_', "-").as_str() {
        "depolarizing" => Ok(ChannelKind::Depolarizing),
        "dephasing-z" | "dephasing" => Ok(ChannelKind::DephasingZ),
        "dephasing-x" => Ok(ChannelKind::DephasingX),
        other => Err(SimError::Channel(format!("unknown channel {other:?}"))),
    }
}
