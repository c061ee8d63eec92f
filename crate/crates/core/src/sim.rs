//! Seeded Monte-Carlo BER/BLER simulation.
//!
//! Frame `f` of SNR point `k` draws all of its randomness from
//! [`frame_rng`]`(master_seed, k, f)`. Frames are simulated in fixed-size
//! batches and folded in frame order, so the counters do not depend on the
//! number of worker threads.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bp::{ConcatDecoder, DecodeError, DecoderConfig};
use crate::channel::{awgn_bpsk_llr, eb_from_es_db, es_from_eb_db, frame_rng};
use crate::ldpc::LdpcError;
use crate::polar::PolarError;
use crate::setup::CodeSet;

/// Frames simulated between two stopping-rule checks.
pub const BATCH_FRAMES: u64 = 32;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Ldpc(#[from] LdpcError),
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Which quantity the SNR points are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SnrAxis {
    #[default]
    EbN0,
    EsN0,
}

/// Transmitted codewords: random information or the all-zero word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodewordMode {
    #[default]
    Random,
    AllZero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub snr_points: Vec<f64>,
    pub snr_axis: SnrAxis,
    pub max_frames: u64,
    pub min_bit_errors: Option<u64>,
    pub min_frame_errors: Option<u64>,
    pub master_seed: u64,
    pub decoder: DecoderConfig,
    pub codeword: CodewordMode,
    /// Worker threads; 0 means the rayon default.
    pub jobs: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            snr_points: vec![2.0],
            snr_axis: SnrAxis::EbN0,
            max_frames: 10_000,
            min_bit_errors: Some(500),
            min_frame_errors: None,
            master_seed: 0,
            decoder: DecoderConfig::default(),
            codeword: CodewordMode::Random,
            jobs: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        self.decoder.validate()?;
        if self.snr_points.is_empty() {
            return Err(SimError::InvalidConfig("no SNR points".into()));
        }
        if let Some(s) = self.snr_points.iter().find(|s| !s.is_finite()) {
            return Err(SimError::InvalidConfig(format!("non-finite SNR point {s}")));
        }
        if self.max_frames == 0 {
            return Err(SimError::InvalidConfig("max_frames must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub setup: String,
    /// The SNR point as configured, on `snr_axis`.
    pub snr_db: f64,
    pub eb_n0_db: f64,
    pub es_n0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub bler: f64,
    pub info_bits_per_frame: usize,
    pub iterations_mean: f64,
}

impl BerRecord {
    /// Binomial standard error of the BER estimate.
    pub fn ber_std_error(&self) -> f64 {
        let n = (self.frames * self.info_bits_per_frame as u64) as f64;
        (self.ber * (1.0 - self.ber) / n).sqrt()
    }
}

/// Counters of a single frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameOutcome {
    pub bit_errors: u64,
    pub frame_error: bool,
    pub iterations: usize,
}

/// One transmitted block: information bits, the polar input `u` and the codeword `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub info: Vec<u8>,
    pub u: Vec<u8>,
    pub x: Vec<u8>,
}

/// Draw information bits, LDPC-encode the intermediate part and polar-encode.
pub fn build_frame<R: Rng>(codes: &CodeSet, mode: CodewordMode, rng: &mut R) -> Result<Frame, SimError> {
    let polar = &codes.polar;
    let partition = polar.partition();
    let mut info = vec![0u8; codes.info_bits_per_frame()];
    if mode == CodewordMode::Random {
        for b in info.iter_mut() {
            *b = rng.random::<bool>() as u8;
        }
    }
    let mut u = vec![0u8; polar.block_len()];
    let k_good = partition.k_good();
    for (&i, &b) in partition.good.iter().zip(&info[..k_good]) {
        u[i] = b;
    }
    if let Some(code) = &codes.ldpc {
        let cw = code.encode(&info[k_good..])?;
        for (&i, &b) in partition.intermediate.iter().zip(&cw) {
            u[i] = b;
        }
    }
    let x = polar.encode(&u)?;
    Ok(Frame { info, u, x })
}

/// Build, transmit and decode one frame. Errors are counted on the
/// good-channel bits and the LDPC message bits only.
pub fn simulate_frame<R: Rng>(
    codes: &CodeSet,
    decoder: &mut ConcatDecoder<'_>,
    es_n0_db: f64,
    mode: CodewordMode,
    rng: &mut R,
) -> Result<FrameOutcome, SimError> {
    let frame = build_frame(codes, mode, rng)?;
    let llr = awgn_bpsk_llr(&frame.x, es_n0_db, decoder.config().clip, rng);
    let res = decoder.decode(&llr)?;
    let bit_errors = res
        .info_bits_hat
        .iter()
        .zip(&frame.info)
        .filter(|(a, b)| a != b)
        .count() as u64;
    Ok(FrameOutcome {
        bit_errors,
        frame_error: bit_errors > 0,
        iterations: res.iterations_used,
    })
}

pub(crate) fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool, SimError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SimError::ThreadPool(e.to_string()))
}

/// Sweep every SNR point of `config` and return one record per point.
pub fn run_monte_carlo(codes: &CodeSet, config: &SimConfig) -> Result<Vec<BerRecord>, SimError> {
    config.validate()?;
    // Fail early on inconsistent specs.
    ConcatDecoder::new(&codes.polar, codes.ldpc.as_ref(), config.decoder)?;
    let pool = thread_pool(config.jobs)?;
    let rate = codes.rate_total();
    config
        .snr_points
        .iter()
        .enumerate()
        .map(|(k, &snr)| {
            let (eb, es) = match config.snr_axis {
                SnrAxis::EbN0 => (snr, es_from_eb_db(snr, rate)),
                SnrAxis::EsN0 => (eb_from_es_db(snr, rate), snr),
            };
            let mut acc = Accumulator::default();
            let mut next = 0u64;
            while next < config.max_frames && !acc.done(config) {
                let end = (next + BATCH_FRAMES).min(config.max_frames);
                let outcomes: Vec<Result<FrameOutcome, SimError>> = pool.install(|| {
                    (next..end)
                        .into_par_iter()
                        .map_init(
                            || ConcatDecoder::new(&codes.polar, codes.ldpc.as_ref(), config.decoder),
                            |dec, f| {
                                let dec = dec.as_mut().map_err(|e| SimError::from(e.clone()))?;
                                let mut rng = frame_rng(config.master_seed, k as u64, f);
                                simulate_frame(codes, dec, es, config.codeword, &mut rng)
                            },
                        )
                        .collect()
                });
                for outcome in outcomes {
                    if acc.done(config) {
                        break;
                    }
                    acc.add(outcome?);
                }
                next = end;
            }
            Ok(acc.record(codes, snr, eb, es))
        })
        .collect()
}

#[derive(Debug, Default)]
struct Accumulator {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    iterations: u64,
}

impl Accumulator {
    fn add(&mut self, o: FrameOutcome) {
        self.frames += 1;
        self.bit_errors += o.bit_errors;
        self.frame_errors += u64::from(o.frame_error);
        self.iterations += o.iterations as u64;
    }

    fn done(&self, config: &SimConfig) -> bool {
        if self.frames >= config.max_frames {
            return true;
        }
        let bits_ok = config.min_bit_errors.map(|m| self.bit_errors >= m);
        let frames_ok = config.min_frame_errors.map(|m| self.frame_errors >= m);
        match (bits_ok, frames_ok) {
            (None, None) => false,
            (a, b) => a.unwrap_or(true) && b.unwrap_or(true),
        }
    }

    fn record(&self, codes: &CodeSet, snr: f64, eb: f64, es: f64) -> BerRecord {
        let k = codes.info_bits_per_frame();
        let frames = self.frames.max(1) as f64;
        BerRecord {
            setup: codes.name.clone(),
            snr_db: snr,
            eb_n0_db: eb,
            es_n0_db: es,
            frames: self.frames,
            bit_errors: self.bit_errors,
            frame_errors: self.frame_errors,
            ber: self.bit_errors as f64 / (frames * k as f64),
            bler: self.frame_errors as f64 / frames,
            info_bits_per_frame: k,
            iterations_mean: self.iterations as f64 / frames,
        }
    }
}

/// CSV rendering of BER records with a header line.
pub fn records_to_csv(records: &[BerRecord]) -> String {
    let mut out = String::from("setup,snr_db,frames,bit_errors,frame_errors,ber,bler,iters_mean,eb_n0_db,es_n0_db\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.setup,
            r.snr_db,
            r.frames,
            r.bit_errors,
            r.frame_errors,
            r.ber,
            r.bler,
            r.iterations_mean,
            r.eb_n0_db,
            r.es_n0_db
        ));
    }
    out
}
