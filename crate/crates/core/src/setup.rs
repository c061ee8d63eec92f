//! Code set-ups: the four reference configurations and custom ones.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ldpc::{realize_degree_sequence, LdpcCodeSpec, LdpcError};
use crate::polar::{PolarCodeSpec, PolarError};

/// Node fractions of the irregular check profile (degrees 4, 5, 17).
pub const IRREGULAR_PROFILE: [(usize, f64); 3] = [(4, 0.3322), (5, 0.1628), (17, 0.505)];

/// Stage count of the reference polar code (N = 4096).
pub const REFERENCE_STAGES: usize = 12;

/// Design point of the reference construction, Es/N0 in dB.
pub const REFERENCE_DESIGN_SNR_DB: f64 = 0.0;

/// Seeds tried when searching for a full-rank parity-check matrix.
pub const FULL_RANK_ATTEMPTS: u64 = 200;

#[derive(Debug, Error)]
pub enum SetupError {
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Ldpc(#[from] LdpcError),
    #[error("unknown set-up {0}; expected 1-4")]
    UnknownSetup(u8),
    #[error("invalid set-up: {0}")]
    Invalid(String),
}

/// Parameters of a polar code with an optional auxiliary LDPC code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetupParams {
    pub name: String,
    pub stages: usize,
    pub design_snr_es_db: f64,
    pub k_good: usize,
    pub n_ldpc: usize,
    /// Target LDPC message length; `n_ldpc - k_ldpc` checks are built.
    pub k_ldpc: usize,
    pub var_degree: usize,
    pub check_profile: Vec<(usize, f64)>,
    pub ldpc_seed: u64,
}

impl SetupParams {
    /// One of the four reference set-ups (N = 4096, rate ≈ 1/2).
    pub fn preset(id: u8) -> Result<Self, SetupError> {
        let (k_ldpc, n_ldpc, k_good, profile): (usize, usize, usize, Vec<(usize, f64)>) = match id {
            1 => (0, 0, 2048, Vec::new()),
            2 => (62, 155, 1984, vec![(5, 1.0)]),
            3 => (112, 155, 1934, IRREGULAR_PROFILE.to_vec()),
            4 => (137, 190, 1910, IRREGULAR_PROFILE.to_vec()),
            other => return Err(SetupError::UnknownSetup(other)),
        };
        Ok(Self {
            name: format!("setup{id}"),
            stages: REFERENCE_STAGES,
            design_snr_es_db: REFERENCE_DESIGN_SNR_DB,
            k_good,
            n_ldpc,
            k_ldpc,
            var_degree: if n_ldpc > 0 { 3 } else { 0 },
            check_profile: profile,
            ldpc_seed: 1,
        })
    }

    pub fn block_len(&self) -> usize {
        1 << self.stages
    }

    pub fn n_checks(&self) -> usize {
        self.n_ldpc - self.k_ldpc
    }

    pub fn f_polar(&self) -> usize {
        self.block_len() - self.k_good - self.n_ldpc
    }

    /// Integer check-degree counts for this set-up (empty without LDPC).
    pub fn check_counts(&self) -> Result<BTreeMap<usize, usize>, SetupError> {
        if self.n_ldpc == 0 {
            return Ok(BTreeMap::new());
        }
        Ok(realize_degree_sequence(
            self.n_ldpc,
            self.var_degree,
            self.n_checks(),
            &self.check_profile,
        )?)
    }

    pub fn build(&self) -> Result<CodeSet, SetupError> {
        if self.k_ldpc > self.n_ldpc {
            return Err(SetupError::Invalid(format!(
                "k_ldpc {} exceeds n_ldpc {}",
                self.k_ldpc, self.n_ldpc
            )));
        }
        let polar = PolarCodeSpec::construct(self.stages, self.design_snr_es_db, self.k_good, self.n_ldpc)?;
        let ldpc = if self.n_ldpc > 0 {
            if self.n_checks() == 0 {
                return Err(SetupError::Invalid("LDPC code needs at least one check".into()));
            }
            let counts = self.check_counts()?;
            let code = LdpcCodeSpec::construct_full_rank(
                self.n_ldpc,
                self.var_degree,
                &counts,
                self.ldpc_seed,
                FULL_RANK_ATTEMPTS,
            )?;
            if code.k() != self.k_ldpc {
                log::warn!("LDPC dimension {} differs from configured {}", code.k(), self.k_ldpc);
            }
            Some(code)
        } else {
            None
        };
        Ok(CodeSet {
            name: self.name.clone(),
            polar,
            ldpc,
        })
    }
}

/// A polar code and its optional auxiliary LDPC code.
#[derive(Debug, Clone)]
pub struct CodeSet {
    pub name: String,
    pub polar: PolarCodeSpec,
    pub ldpc: Option<LdpcCodeSpec>,
}

impl CodeSet {
    pub fn pure_polar(name: &str, polar: PolarCodeSpec) -> Self {
        Self {
            name: name.to_string(),
            polar,
            ldpc: None,
        }
    }

    pub fn k_ldpc(&self) -> usize {
        self.ldpc.as_ref().map_or(0, LdpcCodeSpec::k)
    }

    /// `K_good + K_LDPC`.
    pub fn info_bits_per_frame(&self) -> usize {
        self.polar.partition().k_good() + self.k_ldpc()
    }

    /// `(K_good + K_LDPC) / N`.
    pub fn rate_total(&self) -> f64 {
        self.info_bits_per_frame() as f64 / self.polar.block_len() as f64
    }

    /// `(K_good + N_LDPC) / N`.
    pub fn rate_polar(&self) -> f64 {
        let p = self.polar.partition();
        (p.k_good() + p.n_ldpc()) as f64 / self.polar.block_len() as f64
    }

    pub fn rate_ldpc(&self) -> Option<f64> {
        self.ldpc.as_ref().map(LdpcCodeSpec::rate)
    }
}
