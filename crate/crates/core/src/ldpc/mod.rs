//! Short LDPC codes for the semi-polarized channels.
//!
//! Codes are variable-regular with a (possibly irregular) check-degree
//! sequence, built by progressive edge growth and encoded systematically
//! through a dense generator derived from `H` by GF(2) elimination.

pub mod alist;
pub mod degree;
pub mod gf2;
pub mod peg;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use degree::realize_degree_sequence;
pub use gf2::{systematic_form, BitMatrix, SystematicForm};
pub use peg::{peg_construct, TannerGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LdpcError {
    #[error("invalid degree profile: {0}")]
    InvalidProfile(String),
    #[error("no integer check-degree sequence with {n_checks} checks carries {edges} edges (residual {residual})")]
    NoIntegerRealization {
        edges: usize,
        n_checks: usize,
        residual: usize,
    },
    #[error("edge imbalance: variables carry {var_edges} edges, checks {check_edges}")]
    EdgeImbalance { var_edges: usize, check_edges: usize },
    #[error("PEG ran out of open checks at variable {var}")]
    PegStuck { var: usize },
    #[error("no full-rank code found after {attempts} seeds starting at {first_seed}")]
    RankDeficient { attempts: u64, first_seed: u64 },
    #[error("message has {got} bits, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("malformed alist: {0}")]
    Alist(String),
}

/// Check-degree distribution of a variable-regular LDPC code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub var_degree: usize,
    /// (check degree, node fraction) pairs.
    pub check_degrees: Vec<(usize, f64)>,
}

impl DegreeProfile {
    pub fn regular(var_degree: usize, check_degree: usize) -> Self {
        Self {
            var_degree,
            check_degrees: vec![(check_degree, 1.0)],
        }
    }

    /// Node-averaged check degree implied by the fractions.
    pub fn avg_check_degree(&self) -> f64 {
        self.check_degrees.iter().map(|&(d, f)| d as f64 * f).sum()
    }
}

/// Node-averaged check degree of a realized integer sequence.
pub fn realized_avg_check_degree(counts: &BTreeMap<usize, usize>) -> f64 {
    let checks: usize = counts.values().sum();
    let edges: usize = counts.iter().map(|(d, c)| d * c).sum();
    edges as f64 / checks as f64
}

/// A constructed LDPC code ready for encoding and decoding.
#[derive(Debug, Clone, PartialEq)]
pub struct LdpcCodeSpec {
    graph: TannerGraph,
    var_degree: usize,
    check_counts: BTreeMap<usize, usize>,
    h: BitMatrix,
    form: SystematicForm,
    girth: Option<usize>,
    seed: u64,
}

impl LdpcCodeSpec {
    /// Wrap an existing graph (e.g. parsed from alist).
    pub fn from_graph(graph: TannerGraph, seed: u64) -> Self {
        let mut h = BitMatrix::zeros(graph.n_checks(), graph.n_vars());
        for (c, vars) in graph.check_adj.iter().enumerate() {
            for &v in vars {
                h.set(c, v, true);
            }
        }
        let mut check_counts = BTreeMap::new();
        for vars in &graph.check_adj {
            *check_counts.entry(vars.len()).or_insert(0) += 1;
        }
        let var_degree = graph.var_adj.first().map_or(0, Vec::len);
        let form = systematic_form(&h);
        let girth = graph.girth();
        Self {
            graph,
            var_degree,
            check_counts,
            h,
            form,
            girth,
            seed,
        }
    }

    /// One PEG run with the given seed.
    pub fn construct(
        n_vars: usize,
        var_degree: usize,
        check_counts: &BTreeMap<usize, usize>,
        seed: u64,
    ) -> Result<Self, LdpcError> {
        let graph = peg_construct(n_vars, var_degree, check_counts, seed)?;
        Ok(Self::from_graph(graph, seed))
    }

    /// Try seeds `seed, seed + 1, …` until `H` has full row rank.
    pub fn construct_full_rank(
        n_vars: usize,
        var_degree: usize,
        check_counts: &BTreeMap<usize, usize>,
        seed: u64,
        max_attempts: u64,
    ) -> Result<Self, LdpcError> {
        for attempt in 0..max_attempts {
            let s = seed.wrapping_add(attempt);
            match Self::construct(n_vars, var_degree, check_counts, s) {
                Ok(code) if code.rank() == code.n_checks() => return Ok(code),
                Ok(code) => log::debug!("seed {s}: rank {} < {}", code.rank(), code.n_checks()),
                Err(LdpcError::PegStuck { var }) => log::debug!("seed {s}: PEG stuck at {var}"),
                Err(e) => return Err(e),
            }
        }
        Err(LdpcError::RankDeficient {
            attempts: max_attempts,
            first_seed: seed,
        })
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn n_vars(&self) -> usize {
        self.graph.n_vars()
    }

    pub fn n_checks(&self) -> usize {
        self.graph.n_checks()
    }

    pub fn n_edges(&self) -> usize {
        self.graph.n_edges()
    }

    pub fn var_degree(&self) -> usize {
        self.var_degree
    }

    pub fn check_counts(&self) -> &BTreeMap<usize, usize> {
        &self.check_counts
    }

    pub fn parity_check(&self) -> &BitMatrix {
        &self.h
    }

    pub fn rank(&self) -> usize {
        self.form.rank
    }

    /// Message length `K = N - rank(H)`.
    pub fn k(&self) -> usize {
        self.form.message_cols.len()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n_vars() as f64
    }

    pub fn girth(&self) -> Option<usize> {
        self.girth
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Codeword positions holding the message bits, ascending.
    pub fn message_positions(&self) -> &[usize] {
        &self.form.message_cols
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>, LdpcError> {
        if msg.len() != self.k() {
            return Err(LdpcError::LengthMismatch {
                got: msg.len(),
                expected: self.k(),
            });
        }
        let words = self.n_vars().div_ceil(64);
        let mut cw = vec![0u64; words];
        for (row, _) in self.form.generator.iter().zip(msg).filter(|(_, &b)| b & 1 == 1) {
            for (acc, w) in cw.iter_mut().zip(row) {
                *acc ^= w;
            }
        }
        Ok(gf2::unpack_bits(&cw, self.n_vars()))
    }

    /// Bits at the message positions of a codeword.
    pub fn extract_message(&self, codeword: &[u8]) -> Vec<u8> {
        self.form.message_cols.iter().map(|&p| codeword[p]).collect()
    }

    pub fn syndrome(&self, word: &[u8]) -> Vec<u8> {
        self.h.mul_vec(word)
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        word.len() == self.n_vars()
            && self.graph.check_adj.iter().all(|vars| {
                vars.iter().fold(0u8, |acc, &v| acc ^ (word[v] & 1)) == 0
            })
    }

    pub fn to_alist(&self) -> String {
        alist::write_alist(&self.graph)
    }

    pub fn metadata(&self) -> LdpcMetadata {
        LdpcMetadata {
            n_vars: self.n_vars(),
            n_checks: self.n_checks(),
            k: self.k(),
            rank: self.rank(),
            var_degree: self.var_degree,
            check_degree_counts: self.check_counts.clone(),
            avg_check_degree: realized_avg_check_degree(&self.check_counts),
            girth: self.girth,
            seed: self.seed,
            message_positions: self.form.message_cols.clone(),
        }
    }
}

/// JSON sidecar written next to an alist file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdpcMetadata {
    pub n_vars: usize,
    pub n_checks: usize,
    pub k: usize,
    pub rank: usize,
    pub var_degree: usize,
    pub check_degree_counts: BTreeMap<usize, usize>,
    pub avg_check_degree: f64,
    pub girth: Option<usize>,
    pub seed: u64,
    pub message_positions: Vec<usize>,
}
