//! Belief-propagation decoding of polar codes, optionally coupled with an
//! auxiliary LDPC code on the intermediate channels.

pub mod boxplus;
pub mod concat;
pub mod polar_graph;
pub mod tanner;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use boxplus::{boxplus_exact, boxplus_minsum, pe_update, UpdateRule};
pub use concat::{concatenated_decode, ConcatDecoder, IterationView};
pub use polar_graph::MessageState;
pub use tanner::TannerState;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodeError {
    #[error("LDPC code has {ldpc_vars} variables but the polar code has {intermediate} intermediate channels")]
    SpecMismatch { intermediate: usize, ldpc_vars: usize },
    #[error("input has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("channel LLR at index {index} is not finite")]
    NonFiniteInput { index: usize },
    #[error("invalid decoder config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoderConfig {
    /// Polar iterations, each followed by one LDPC iteration when present.
    pub max_global_iters: usize,
    pub update_rule: UpdateRule,
    /// Magnitude bound for every stored message; frozen priors sit here.
    pub clip: f64,
    /// Stop once the hard decisions are consistent with both codes.
    pub early_stop: bool,
    /// Keep LDPC edge messages across global iterations.
    pub ldpc_message_persistence: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            max_global_iters: 60,
            update_rule: UpdateRule::BoxPlus,
            clip: 30.0,
            early_stop: true,
            ldpc_message_persistence: true,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<(), DecodeError> {
        if self.max_global_iters == 0 {
            return Err(DecodeError::InvalidConfig("max_global_iters must be >= 1".into()));
        }
        if !(self.clip.is_finite() && self.clip > 0.0) {
            return Err(DecodeError::InvalidConfig(format!("clip must be positive, got {}", self.clip)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    pub u_hat: Vec<u8>,
    pub x_hat: Vec<u8>,
    /// Good-channel bits (ascending index) followed by the LDPC message bits.
    pub info_bits_hat: Vec<u8>,
    pub iterations_used: usize,
    /// Hard decisions form a polar codeword whose intermediate part
    /// satisfies every LDPC check.
    pub converged: bool,
}
