//! Exact logical failure probabilities of small qubit codes.

use super::{ChannelKind, ChannelSpec, SimError};
use crate::decode::{SyndromeDecoder, Workspace};
use std::collections::HashMap;

/// Largest `n` enumerated for single-axis channels (two labels per site).
pub const SINGLE_AXIS_CAP: usize = 26;
/// Largest `n` enumerated for channels with three error labels per site.
pub const FULL_CAP: usize = 10;

/// Failing error patterns of a decoder grouped by weight, independent of the
/// physical rate as long as the decoder is.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCounts {
    pub n: usize,
    /// Non-identity labels per site.
    pub labels: usize,
    /// `failing[w]`: number of weight-`w` patterns the decoder gets wrong.
    pub failing: Vec<u64>,
}

impl ExactCounts {
    /// Failure probability when each non-identity label has probability
    /// `p_phys / labels`.
    pub fn rate(&self, p_phys: f64) -> f64 {
        let q = p_phys / self.labels as f64;
        self.failing
            .iter()
            .enumerate()
            .map(|(w, &c)| c as f64 * q.powi(w as i32) * (1.0 - p_phys).powi((self.n - w) as i32))
            .sum()
    }
}

/// Enumerates every error pattern over the support of `kind`, decodes each
/// distinct syndrome once, and counts failures by weight. Qubits only.
pub fn exact_failure_counts(decoder: &dyn SyndromeDecoder, kind: &ChannelKind) -> Result<ExactCounts, SimError> {
    let code = decoder.code();
    let n = code.n();
    if code.p() != 2 {
        return Err(SimError::Cap("exact enumeration is implemented for qubits only".into()));
    }
    let support: Vec<u16> = match kind {
        ChannelKind::DephasingZ => vec![1],
        ChannelKind::DephasingX => vec![2],
        ChannelKind::Depolarizing => vec![1, 2, 3],
        ChannelKind::Table(_) => return Err(SimError::Channel("a weight table has no probabilities".into())),
    };
    let cap = if support.len() == 1 { SINGLE_AXIS_CAP } else { FULL_CAP };
    if n > cap {
        return Err(SimError::Cap(format!("n = {n} exceeds {cap} for this channel")));
    }
    let checks = code.stabilizers();
    let logicals = code.logicals();
    if checks.len() > 128 || logicals.len() > 64 {
        return Err(SimError::Cap("too many checks or logicals".into()));
    }
    // Syndrome and logical-class bitmasks contributed by each label at each site.
    let mask = |pos: usize, code_: u16| -> (u128, u64) {
        let e = crate::pauli::PauliString::single(code.field(), n, pos, crate::ffield::Fp2Site::from_code(code_, 2));
        let mut s = 0u128;
        for (j, g) in checks.iter().enumerate() {
            s |= (g.sym_inner(&e).expect("length") as u128) << j;
        }
        let mut l = 0u64;
        for (j, g) in logicals.iter().enumerate() {
            l |= (g.sym_inner(&e).expect("length") as u64) << j;
        }
        (s, l)
    };
    let m = support.len() + 1;
    let mut table = vec![(0u128, 0u64); n * m];
    for pos in 0..n {
        for (k, &c) in support.iter().enumerate() {
            table[pos * m + k + 1] = mask(pos, c);
        }
    }
    // (syndrome, class) → pattern counts by weight.
    let mut hist: HashMap<(u128, u64), Vec<u64>> = HashMap::new();
    let mut digits = vec![0usize; n];
    let (mut s, mut l, mut w) = (0u128, 0u64, 0usize);
    loop {
        hist.entry((s, l)).or_insert_with(|| vec![0; n + 1])[w] += 1;
        let mut pos = 0;
        loop {
            if pos == n {
                return finish(decoder, hist, n, support.len());
            }
            let old = table[pos * m + digits[pos]];
            let was = digits[pos];
            digits[pos] = (was + 1) % m;
            let new = table[pos * m + digits[pos]];
            s ^= old.0 ^ new.0;
            l ^= old.1 ^ new.1;
            if was == 0 {
                w += 1;
            } else if digits[pos] == 0 {
                w -= 1;
            }
            if digits[pos] != 0 {
                break;
            }
            pos += 1;
        }
    }
}

fn finish(
    decoder: &dyn SyndromeDecoder,
    hist: HashMap<(u128, u64), Vec<u64>>,
    n: usize,
    labels: usize,
) -> Result<ExactCounts, SimError> {
    let code = decoder.code();
    let mut by_syndrome: HashMap<u128, Vec<(u64, Vec<u64>)>> = HashMap::new();
    for ((s, l), counts) in hist {
        by_syndrome.entry(s).or_default().push((l, counts));
    }
    let mut failing = vec![0u64; n + 1];
    let mut ws = Workspace::new();
    let m = code.stabilizers().len();
    for (s, classes) in by_syndrome {
        let bits: Vec<u8> = (0..m).map(|j| ((s >> j) & 1) as u8).collect();
        let r = decoder.correct(&bits, &mut ws).map_err(|source| SimError::Decode { p: f64::NAN, source })?;
        let mut lc = 0u64;
        for (j, g) in code.logicals().iter().enumerate() {
            lc |= (g.sym_inner(&r.correction).expect("length") as u64) << j;
        }
        for (l, counts) in classes {
            if l != lc {
                for (f, c) in failing.iter_mut().zip(counts) {
                    *f += c;
                }
            }
        }
    }
    Ok(ExactCounts { n, labels, failing })
}

/// Exact failure probability of `decoder` under `channel`.
pub fn exact_rate(decoder: &dyn SyndromeDecoder, channel: &ChannelSpec) -> Result<f64, SimError> {
    Ok(exact_failure_counts(decoder, &channel.kind)?.rate(channel.p_phys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{builtin, Split};
    use crate::decode::{weights_from_channel, Decoder, ViterbiOptions};
    use crate::trellis::{Trellis, DEFAULT_EDGE_CAP};

    #[test]
    fn five_one_three_corrects_every_single_error() {
        let c = builtin("five_one_three", None).unwrap();
        let t = Trellis::for_code(&c, Split::Full, DEFAULT_EDGE_CAP).unwrap();
        let ch = ChannelSpec::new(ChannelKind::Depolarizing, 0.1).unwrap();
        let w = weights_from_channel(&ch, 5, 2, Split::Full).unwrap();
        let d = Decoder::new(&c, &t, &w, ViterbiOptions::default()).unwrap();
        let counts = exact_failure_counts(&d, &ch.kind).unwrap();
        assert_eq!(counts.failing[0], 0);
        assert_eq!(counts.failing[1], 0);
        assert!(counts.failing[2] > 0);
        assert_eq!(exact_rate(&d, &ch.at(0.0).unwrap()).unwrap(), 0.0);
        // Total patterns: 4^5.
        assert!(counts.failing.iter().sum::<u64>() < 1024);
    }
}
