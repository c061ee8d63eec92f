//! Polar codes under belief-propagation decoding with an auxiliary LDPC
//! code on the semi-polarized bit channels, plus scattered EXIT charts for
//! choosing the LDPC check-degree profile.
//!
//! - [`polar`]: Bhattacharyya construction, channel partition, encoder.
//! - [`ldpc`]: degree-sequence realization, PEG graphs, systematic encoding.
//! - [`bp`]: polar factor-graph BP, Tanner-graph BP and the joint schedule.
//! - [`channel`] and [`sim`]: BPSK/AWGN and the seeded BER harness.
//! - [`exit`]: MI measurement, CND curves, histograms, profile matching.
//! - [`setup`]: the four reference configurations.

pub mod bp;
pub mod channel;
pub mod exit;
pub mod ldpc;
pub mod polar;
pub mod setup;
pub mod sim;

pub use bp::{concatenated_decode, ConcatDecoder, DecodeResult, DecoderConfig, UpdateRule};
pub use ldpc::LdpcCodeSpec;
pub use polar::PolarCodeSpec;
pub use setup::{CodeSet, SetupParams};
pub use sim::{run_monte_carlo, BerRecord, SimConfig};
