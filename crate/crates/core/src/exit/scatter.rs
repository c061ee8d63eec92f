//! Scattered EXIT charts: MI trajectories of the running joint decoder,
//! accumulated over many frames into 2-D histograms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bp::{ConcatDecoder, DecoderConfig};
use crate::channel::{awgn_bpsk_llr, es_from_eb_db, frame_rng};
use crate::setup::CodeSet;
use crate::sim::{build_frame, thread_pool, CodewordMode, SimError, SnrAxis};

use super::histogram::{ExitHistogram, ExitRole};
use super::mi::empirical_mi;
use super::ExitError;

/// Where the polar/VND transfer is tapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VndTap {
    /// Per-variable boundary: a-priori is the LDPC extrinsic fed back to the
    /// polar decoder, extrinsic is the polar L-message handed to the LDPC
    /// decoder.
    Boundary,
    /// Per-edge: a-priori is the check-to-variable messages of the previous
    /// iteration, extrinsic the variable-to-check messages they produce
    /// (polar decoder and LDPC variable nodes taken together). Both roles
    /// then share one pair of axes, as tunnel matching requires.
    #[default]
    Edge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterConfig {
    pub snr_db: f64,
    pub snr_axis: SnrAxis,
    pub frames: u64,
    pub seed: u64,
    pub decoder: DecoderConfig,
    pub bins: usize,
    pub vnd_tap: VndTap,
    pub jobs: usize,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        Self {
            snr_db: 2.5,
            snr_axis: SnrAxis::EbN0,
            frames: 500,
            seed: 0,
            decoder: DecoderConfig::default(),
            bins: 64,
            vnd_tap: VndTap::Edge,
            jobs: 1,
        }
    }
}

/// Per-iteration `(I_A, I_E)` points of one frame.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ExitTrajectory {
    pub vnd: Vec<(f64, f64)>,
    pub cnd: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterResult {
    pub vnd: ExitHistogram,
    pub cnd: ExitHistogram,
    pub trajectories: Vec<ExitTrajectory>,
    pub es_n0_db: f64,
    pub eb_n0_db: f64,
}

impl ScatterResult {
    /// Ensemble trajectory: at each iteration, the mean point over the
    /// frames that ran that iteration. Returns `(vnd, cnd)`.
    pub fn ensemble(&self) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
        let longest = self.trajectories.iter().map(|t| t.cnd.len()).max().unwrap_or(0);
        let mean_at = |k: usize, pick: fn(&ExitTrajectory) -> &Vec<(f64, f64)>| {
            let pts: Vec<(f64, f64)> = self.trajectories.iter().filter_map(|t| pick(t).get(k).copied()).collect();
            let n = pts.len() as f64;
            let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
            (sx / n, sy / n)
        };
        (0..longest)
            .map(|k| (mean_at(k, |t| &t.vnd), mean_at(k, |t| &t.cnd)))
            .unzip()
    }
}

fn mi(llrs: &[f64], bits: &[u8]) -> Result<f64, ExitError> {
    empirical_mi(llrs, bits)
}

/// Run `config.frames` instrumented decodes and histogram the per-iteration
/// MI points of both component roles against the transmitted LDPC bits.
pub fn record_scattered(codes: &CodeSet, config: &ScatterConfig) -> Result<ScatterResult, ExitError> {
    let Some(ldpc) = codes.ldpc.as_ref() else {
        return Err(ExitError::NoLdpcCode);
    };
    config.decoder.validate().map_err(SimError::from)?;
    let rate = codes.rate_total();
    let (eb, es) = match config.snr_axis {
        SnrAxis::EbN0 => (config.snr_db, es_from_eb_db(config.snr_db, rate)),
        SnrAxis::EsN0 => (config.snr_db - 10.0 * rate.log10(), config.snr_db),
    };
    let mut vnd = ExitHistogram::new(ExitRole::PolarVnd, config.bins)?;
    let mut cnd = ExitHistogram::new(ExitRole::Cnd, config.bins)?;
    let pool = thread_pool(config.jobs)?;
    let intermediate = &codes.polar.partition().intermediate;

    let trajectories: Vec<Result<ExitTrajectory, ExitError>> = pool.install(|| {
        (0..config.frames)
            .into_par_iter()
            .map_init(
                || ConcatDecoder::new(&codes.polar, Some(ldpc), config.decoder),
                |dec, f| {
                    let dec = dec.as_mut().map_err(|e| ExitError::from(SimError::from(e.clone())))?;
                    let mut rng = frame_rng(config.seed, 0, f);
                    let frame = build_frame(codes, CodewordMode::Random, &mut rng)?;
                    let llr = awgn_bpsk_llr(&frame.x, es, config.decoder.clip, &mut rng);
                    let var_bits: Vec<u8> = intermediate.iter().map(|&i| frame.u[i]).collect();
                    let mut edge_bits: Vec<u8> = Vec::new();
                    let mut prev_c2v: Vec<f64> = Vec::new();
                    let mut traj = ExitTrajectory::default();
                    let mut failure = None;
                    dec.decode_observed(&llr, |view| {
                        if failure.is_some() {
                            return;
                        }
                        if edge_bits.is_empty() {
                            edge_bits = view.edge_vars.iter().map(|&v| var_bits[v]).collect();
                            prev_c2v = vec![0.0; view.c2v.len()];
                        }
                        let point = || -> Result<((f64, f64), (f64, f64)), ExitError> {
                            let cnd_pt = (mi(view.v2c, &edge_bits)?, mi(view.c2v, &edge_bits)?);
                            let vnd_pt = match config.vnd_tap {
                                VndTap::Boundary => (mi(view.prior, &var_bits)?, mi(view.ldpc_input, &var_bits)?),
                                VndTap::Edge => (mi(&prev_c2v, &edge_bits)?, mi(view.v2c, &edge_bits)?),
                            };
                            Ok((vnd_pt, cnd_pt))
                        };
                        match point() {
                            Ok((v, c)) => {
                                traj.vnd.push(v);
                                traj.cnd.push(c);
                            }
                            Err(e) => failure = Some(e),
                        }
                        prev_c2v.copy_from_slice(view.c2v);
                    })
                    .map_err(SimError::from)?;
                    match failure {
                        Some(e) => Err(e),
                        None => Ok(traj),
                    }
                },
            )
            .collect()
    });
    let trajectories = trajectories.into_iter().collect::<Result<Vec<_>, _>>()?;
    for t in &trajectories {
        for &(a, e) in &t.vnd {
            vnd.add(a, e);
        }
        for &(a, e) in &t.cnd {
            cnd.add(a, e);
        }
    }
    Ok(ScatterResult {
        vnd,
        cnd,
        trajectories,
        es_n0_db: es,
        eb_n0_db: eb,
    })
}
