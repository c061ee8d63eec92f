//! Joint polar/LDPC decoding schedule.
//!
//! Each global iteration runs one polar BP iteration, hands the
//! message-side L-messages of the intermediate channels to the LDPC decoder
//! for one iteration, and writes the LDPC extrinsic back as the R-prior of
//! those channels. Intermediate channel `intermediate[j]` (ascending) maps
//! to LDPC variable `j`.

use crate::ldpc::LdpcCodeSpec;
use crate::polar::{polar_transform_in_place, ChannelRole, PolarCodeSpec};

use super::polar_graph::MessageState;
use super::tanner::TannerState;
use super::{DecodeError, DecodeResult, DecoderConfig};

/// Snapshot handed to observers after every global iteration.
#[derive(Debug)]
pub struct IterationView<'a> {
    /// 1-based global iteration index.
    pub iteration: usize,
    /// LDPC extrinsic that served as the polar prior during this iteration.
    pub prior: &'a [f64],
    /// Message-side L-messages of the intermediate channels, i.e. the LDPC input.
    pub ldpc_input: &'a [f64],
    /// LDPC extrinsic produced in this iteration.
    pub ldpc_extrinsic: &'a [f64],
    pub v2c: &'a [f64],
    pub c2v: &'a [f64],
    /// Variable index of every Tanner edge.
    pub edge_vars: &'a [usize],
}

/// Reusable decoder; holds all per-frame mutable state.
pub struct ConcatDecoder<'a> {
    polar: &'a PolarCodeSpec,
    ldpc: Option<&'a LdpcCodeSpec>,
    config: DecoderConfig,
    state: MessageState,
    tanner: Option<TannerState>,
    priors: Vec<f64>,
    ldpc_input: Vec<f64>,
    extrinsic: Vec<f64>,
    prev_extrinsic: Vec<f64>,
    scratch: Vec<u8>,
}

impl<'a> ConcatDecoder<'a> {
    pub fn new(
        polar: &'a PolarCodeSpec,
        ldpc: Option<&'a LdpcCodeSpec>,
        config: DecoderConfig,
    ) -> Result<Self, DecodeError> {
        config.validate()?;
        let intermediate = polar.partition().n_ldpc();
        let ldpc_vars = ldpc.map_or(0, LdpcCodeSpec::n_vars);
        if intermediate != ldpc_vars {
            return Err(DecodeError::SpecMismatch {
                intermediate,
                ldpc_vars,
            });
        }
        let priors = polar
            .roles()
            .iter()
            .map(|r| if *r == ChannelRole::Frozen { config.clip } else { 0.0 })
            .collect();
        Ok(Self {
            polar,
            ldpc,
            config,
            state: MessageState::new(polar.stages(), config.clip),
            tanner: ldpc.map(|c| TannerState::new(c, config.clip, config.ldpc_message_persistence)),
            priors,
            ldpc_input: vec![0.0; intermediate],
            extrinsic: vec![0.0; intermediate],
            prev_extrinsic: vec![0.0; intermediate],
            scratch: vec![0; polar.block_len()],
        })
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    pub fn state(&self) -> &MessageState {
        &self.state
    }

    pub fn decode(&mut self, channel: &[f64]) -> Result<DecodeResult, DecodeError> {
        self.decode_observed(channel, |_| {})
    }

    pub fn decode_observed(
        &mut self,
        channel: &[f64],
        mut observer: impl FnMut(&IterationView<'_>),
    ) -> Result<DecodeResult, DecodeError> {
        let n = self.polar.block_len();
        if channel.len() != n {
            return Err(DecodeError::LengthMismatch {
                got: channel.len(),
                expected: n,
            });
        }
        if let Some(index) = channel.iter().position(|v| !v.is_finite()) {
            return Err(DecodeError::NonFiniteInput { index });
        }
        self.state.reset(channel, &self.priors);
        if let Some(t) = self.tanner.as_mut() {
            t.reset();
        }
        self.extrinsic.fill(0.0);

        let rule = self.config.update_rule;
        let intermediate = &self.polar.partition().intermediate;
        let mut iterations_used = 0;
        let mut converged = false;
        for iter in 1..=self.config.max_global_iters {
            iterations_used = iter;
            self.state.iterate(rule);
            if let Some(tanner) = self.tanner.as_mut() {
                let l0 = self.state.l(0);
                for (dst, &i) in self.ldpc_input.iter_mut().zip(intermediate) {
                    *dst = l0[i];
                }
                std::mem::swap(&mut self.prev_extrinsic, &mut self.extrinsic);
                tanner.iterate(&self.ldpc_input, rule, &mut self.extrinsic)?;
                let r0 = self.state.r_mut(0);
                for (&e, &i) in self.extrinsic.iter().zip(intermediate) {
                    r0[i] = e;
                }
                observer(&IterationView {
                    iteration: iter,
                    prior: &self.prev_extrinsic,
                    ldpc_input: &self.ldpc_input,
                    ldpc_extrinsic: &self.extrinsic,
                    v2c: tanner.v2c(),
                    c2v: tanner.c2v(),
                    edge_vars: tanner.edge_vars(),
                });
            } else {
                observer(&IterationView {
                    iteration: iter,
                    prior: &[],
                    ldpc_input: &[],
                    ldpc_extrinsic: &[],
                    v2c: &[],
                    c2v: &[],
                    edge_vars: &[],
                });
            }
            if self.config.early_stop && self.consistent() {
                converged = true;
                break;
            }
        }
        if !converged {
            converged = self.consistent();
        }
        Ok(self.result(iterations_used, converged))
    }

    /// Hard decisions agree with the polar transform and the LDPC checks.
    fn consistent(&mut self) -> bool {
        let n = self.polar.block_len();
        for i in 0..n {
            self.scratch[i] = (self.state.u_llr(i) < 0.0) as u8;
        }
        if let Some(code) = self.ldpc {
            let word: Vec<u8> = self
                .polar
                .partition()
                .intermediate
                .iter()
                .map(|&i| self.scratch[i])
                .collect();
            if !code.is_codeword(&word) {
                return false;
            }
        }
        polar_transform_in_place(&mut self.scratch);
        (0..n).all(|i| self.scratch[i] == (self.state.x_llr(i) < 0.0) as u8)
    }

    fn result(&self, iterations_used: usize, converged: bool) -> DecodeResult {
        let (u_hat, x_hat) = self.state.hard_decisions();
        let partition = self.polar.partition();
        let mut info_bits_hat: Vec<u8> = partition.good.iter().map(|&i| u_hat[i]).collect();
        if let Some(code) = self.ldpc {
            info_bits_hat.extend(
                code.message_positions()
                    .iter()
                    .map(|&p| u_hat[partition.intermediate[p]]),
            );
        }
        DecodeResult {
            u_hat,
            x_hat,
            info_bits_hat,
            iterations_used,
            converged,
        }
    }
}

/// One-shot convenience wrapper around [`ConcatDecoder`].
pub fn concatenated_decode(
    channel: &[f64],
    polar: &PolarCodeSpec,
    ldpc: Option<&LdpcCodeSpec>,
    config: &DecoderConfig,
) -> Result<DecodeResult, DecodeError> {
    ConcatDecoder::new(polar, ldpc, *config)?.decode(channel)
}
