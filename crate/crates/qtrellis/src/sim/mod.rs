//! Noise channels, sampling, exact enumeration, Monte Carlo estimation and
//! threshold fitting.

mod channel;
mod exact;
mod fit;
mod montecarlo;

pub use channel::{parse_kind, ChannelKind, ChannelSpec};
pub use exact::{exact_failure_counts, exact_rate, ExactCounts};
pub use fit::{crossing, fit_threshold, Dataset, ThresholdFit};
pub use montecarlo::{run_montecarlo, sample_error, wilson, DataPoint, DecoderMode, McConfig, TrellisSet};

use crate::code::CodeError;
use crate::decode::DecodeError;
use crate::trellis::TrellisError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid channel: {0}")]
    Channel(String),
    #[error("at least one sample is required")]
    NoSamples,
    #[error("enumeration too large: {0}")]
    Cap(String),
    #[error("degenerate fit: {0}")]
    Degenerate(String),
    #[error("not enough data to fit: {0}")]
    InsufficientData(String),
    #[error("decoder returned a correction with the wrong syndrome at p = {0}")]
    Inconsistent(f64),
    #[error("decoding failed at p = {p}: {source}")]
    Decode {
        p: f64,
        #[source]
        source: DecodeError,
    },
    #[error(transparent)]
    DecodeSetup(#[from] DecodeError),
    #[error(transparent)]
    Trellis(#[from] TrellisError),
    #[error(transparent)]
    Code(#[from] CodeError),
}
