//! Monte Carlo logical error rates.

use super::{ChannelKind, ChannelSpec, SimError};
use crate::code::{Split, StabilizerCode};
use crate::decode::{
    classify_residual, weights_from_channel, BlockDecoder, Classification, CssDecoder, Decoder, SyndromeDecoder,
    ViterbiOptions, WeightTable, Workspace,
};
use crate::ffield::Fp2Site;
use crate::pauli::PauliString;
use crate::trellis::Trellis;
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Draws an i.i.d. error from `channel`. With `condition_nontrivial` the draw
/// is repeated until it is not the identity.
pub fn sample_error<R: Rng + ?Sized>(
    channel: &ChannelSpec,
    n: usize,
    p: u32,
    rng: &mut R,
    condition_nontrivial: bool,
) -> Result<PauliString, SimError> {
    let probs = channel.site_probabilities(p)?;
    if condition_nontrivial && probs[0] >= 1.0 {
        return Err(SimError::Channel("cannot condition on a non-identity error when Pr(I) = 1".into()));
    }
    let dist = WeightedIndex::new(&probs).map_err(|e| SimError::Channel(e.to_string()))?;
    let field = crate::ffield::Field::new(p).map_err(|e| SimError::Channel(e.to_string()))?;
    Ok(draw(&dist, field, n, rng, condition_nontrivial))
}

fn draw<R: Rng + ?Sized>(
    dist: &WeightedIndex<f64>,
    field: crate::ffield::Field,
    n: usize,
    rng: &mut R,
    condition_nontrivial: bool,
) -> PauliString {
    let p = field.p();
    let mut sites = vec![Fp2Site::default(); n];
    loop {
        let mut any = false;
        for s in sites.iter_mut() {
            let code = dist.sample(rng) as u16;
            any |= code != 0;
            *s = Fp2Site::from_code(code, p);
        }
        if any || !condition_nontrivial {
            return PauliString::from_sites(field, &sites);
        }
    }
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let (nf, ph) = (n as f64, k as f64 / n as f64);
    let denom = 1.0 + z * z / nf;
    let centre = (ph + z * z / (2.0 * nf)) / denom;
    let half = z * (ph * (1.0 - ph) / nf + z * z / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderMode {
    /// One trellis over all stabilizers.
    Full,
    /// Independent X-check and Z-check trellises.
    Css,
    /// Two-stage decoding of the level-2 concatenated Steane code.
    Block,
}

impl std::str::FromStr for DecoderMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(DecoderMode::Full),
            "css" => Ok(DecoderMode::Css),
            "block" => Ok(DecoderMode::Block),
            _ => Err(format!("unknown decoder {s:?}, expected full, css or block")),
        }
    }
}

impl DecoderMode {
    pub fn name(self) -> &'static str {
        match self {
            DecoderMode::Full => "full",
            DecoderMode::Css => "css",
            DecoderMode::Block => "block",
        }
    }
}

/// A code with the trellises one decoder mode needs.
#[derive(Debug, Clone)]
pub struct TrellisSet {
    pub code: StabilizerCode,
    pub mode: DecoderMode,
    pub trellises: Vec<Trellis>,
    pub opts: ViterbiOptions,
}

impl TrellisSet {
    pub fn build(code: StabilizerCode, mode: DecoderMode, cap: u128) -> Result<Self, SimError> {
        let trellises = match mode {
            DecoderMode::Full => vec![Trellis::for_code(&code, Split::Full, cap)?],
            DecoderMode::Css => vec![Trellis::for_code(&code, Split::X, cap)?, Trellis::for_code(&code, Split::Z, cap)?],
            DecoderMode::Block => vec![],
        };
        Ok(TrellisSet { code, mode, trellises, opts: ViterbiOptions::default() })
    }

    /// A decoder using `weights`, a full-label table over the code's qudits.
    pub fn decoder(&self, weights: &WeightTable) -> Result<Box<dyn SyndromeDecoder + '_>, SimError> {
        Ok(match self.mode {
            DecoderMode::Full => Box::new(Decoder::new(&self.code, &self.trellises[0], weights, self.opts)?),
            DecoderMode::Css => {
                Box::new(CssDecoder::new(&self.code, &self.trellises[0], &self.trellises[1], weights, self.opts)?)
            }
            DecoderMode::Block => Box::new(BlockDecoder::new(&self.code, weights, self.opts)?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    /// Samples per random stream. Streams are keyed by (seed, point, chunk),
    /// so results do not depend on the number of workers.
    pub chunk: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 10_000, seed: 1, workers: 0, chunk: 2048 }
    }
}

/// One grid point. Samples are drawn conditioned on a non-identity error;
/// the unconditional rate multiplies by `Pr(error ≠ I)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub p_phys: f64,
    pub samples: u64,
    pub failures: u64,
    pub rate_cond: f64,
    pub rate_uncond: f64,
    /// Wilson 95% interval of the conditional rate.
    pub ci_cond: (f64, f64),
    /// The same interval scaled to the unconditional rate.
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl DataPoint {
    pub fn new(p_phys: f64, samples: u64, failures: u64, p_nontrivial: f64) -> Self {
        let rate_cond = failures as f64 / samples as f64;
        let ci_cond = wilson(failures, samples);
        DataPoint {
            p_phys,
            samples,
            failures,
            rate_cond,
            rate_uncond: rate_cond * p_nontrivial,
            ci_cond,
            ci_lo: ci_cond.0 * p_nontrivial,
            ci_hi: ci_cond.1 * p_nontrivial,
        }
    }
}

/// Estimates logical error rates over a grid of physical rates.
pub fn run_montecarlo(
    set: &TrellisSet,
    kind: &ChannelKind,
    grid: &[f64],
    cfg: &McConfig,
) -> Result<Vec<DataPoint>, SimError> {
    if cfg.samples == 0 {
        return Err(SimError::NoSamples);
    }
    let pool = if cfg.workers > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .map_err(|e| SimError::Channel(e.to_string()))?,
        )
    } else {
        None
    };
    let run = || grid.iter().enumerate().map(|(i, &pp)| point(set, kind, i, pp, cfg)).collect();
    match pool {
        Some(pool) => pool.install(run),
        None => run(),
    }
}

fn point(set: &TrellisSet, kind: &ChannelKind, index: usize, p_phys: f64, cfg: &McConfig) -> Result<DataPoint, SimError> {
    let code = &set.code;
    let (n, p) = (code.n(), code.p());
    let channel = ChannelSpec::new(kind.clone(), p_phys)?;
    let probs = channel.site_probabilities(p)?;
    if probs[0] >= 1.0 {
        return Err(SimError::Channel(format!("p = {p_phys} never produces a non-identity error")));
    }
    let weights = weights_from_channel(&channel, n, p, Split::Full)?;
    let decoder = set.decoder(&weights)?;
    let dist = WeightedIndex::new(&probs).map_err(|e| SimError::Channel(e.to_string()))?;
    let chunk = cfg.chunk.max(1);
    let chunks = cfg.samples.div_ceil(chunk);
    let failures = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(((index as u64) << 40) | c);
            let mut ws = Workspace::new();
            let count = chunk.min(cfg.samples - c * chunk);
            let mut fails = 0u64;
            for _ in 0..count {
                let e = draw(&dist, code.field(), n, &mut rng, true);
                let s = code.syndrome(&e).expect("length");
                let r = decoder.correct(&s, &mut ws).map_err(|source| SimError::Decode { p: p_phys, source })?;
                match classify_residual(code, &e, &r.correction)?.0 {
                    Classification::Success => {}
                    Classification::LogicalFailure => fails += 1,
                    Classification::InternalInconsistency => return Err(SimError::Inconsistent(p_phys)),
                }
            }
            Ok(fails)
        })
        .collect::<Result<Vec<u64>, SimError>>()?
        .into_iter()
        .sum();
    let p_nontrivial = 1.0 - probs[0].powi(n as i32);
    Ok(DataPoint::new(p_phys, cfg.samples, failures, p_nontrivial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::builtin;

    #[test]
    fn zero_rate_gives_identity() {
        let ch = ChannelSpec::new(ChannelKind::Depolarizing, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(sample_error(&ch, 9, 2, &mut rng, false).unwrap().is_identity());
        }
        assert!(sample_error(&ch, 9, 2, &mut rng, true).is_err());
    }

    #[test]
    fn dephasing_marginal() {
        let p = 0.1;
        let ch = ChannelSpec::new(ChannelKind::DephasingZ, p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 100_000;
        let mut z = 0u64;
        for _ in 0..draws {
            let e = sample_error(&ch, 1, 2, &mut rng, false).unwrap();
            assert!(e.is_z_type());
            z += !e.is_identity() as u64;
        }
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((z as f64 / draws as f64 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn depolarizing_ratios() {
        let ch = ChannelSpec::new(ChannelKind::Depolarizing, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0u64; 4];
        let draws = 100_000;
        for _ in 0..draws {
            let e = sample_error(&ch, 1, 2, &mut rng, false).unwrap();
            counts[e.site(0).code(2) as usize] += 1;
        }
        let expect = 0.1 * draws as f64;
        let sigma = (draws as f64 * 0.1 * 0.9).sqrt();
        for c in &counts[1..] {
            assert!((*c as f64 - expect).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn wilson_interval_contains_estimate() {
        let (lo, hi) = wilson(30, 1000);
        assert!(lo < 0.03 && 0.03 < hi);
        assert_eq!(wilson(0, 10).0, 0.0);
    }

    #[test]
    fn results_do_not_depend_on_workers() {
        let set = TrellisSet::build(builtin("steane", None).unwrap(), DecoderMode::Css, 1 << 20).unwrap();
        let grid = [0.05, 0.15];
        let mut cfg = McConfig { samples: 3000, seed: 42, workers: 1, chunk: 256 };
        let a = run_montecarlo(&set, &ChannelKind::Depolarizing, &grid, &cfg).unwrap();
        cfg.workers = 3;
        let b = run_montecarlo(&set, &ChannelKind::Depolarizing, &grid, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a[0].failures > 0 && a[0].failures <= 3000);
        cfg.samples = 0;
        assert_eq!(run_montecarlo(&set, &ChannelKind::Depolarizing, &grid, &cfg), Err(SimError::NoSamples));
    }
}
