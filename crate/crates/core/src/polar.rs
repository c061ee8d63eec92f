//! Polar code construction, channel partitioning and encoding.
//!
//! Bit channels are indexed in natural order for the transform
//! `x = u · F^{⊗n}` with `F = [[1, 0], [1, 1]]`. No bit-reversal permutation
//! is applied anywhere: the Bhattacharyya scores, the encoder and the
//! factor graph in [`crate::bp`] all share this order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or using a polar code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarError {
    #[error("stage count must be at least 1, got {0}")]
    InvalidStages(usize),
    #[error("stage count {0} is too large")]
    TooManyStages(usize),
    #[error("design SNR must be finite, got {0}")]
    NonFiniteSnr(f64),
    #[error("k_good ({k_good}) + n_ldpc ({n_ldpc}) exceeds block length {block_len}")]
    PartitionTooLarge {
        k_good: usize,
        n_ldpc: usize,
        block_len: usize,
    },
    #[error("input has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("invalid polar spec: {0}")]
    InvalidSpec(String),
}

/// Largest supported stage count (N = 2^24).
pub const MAX_STAGES: usize = 24;

/// Bhattacharyya parameters of all `2^n` synthesized channels.
///
/// The seed is `Z0 = exp(-Es/N0)` (linear) for BPSK over AWGN. Each
/// polarization step maps `Z` to the pair `(2Z - Z², Z²)`; the most
/// significant bit of the channel index selects the first step applied.
pub fn bhattacharyya_construct(n: usize, design_snr_es_db: f64) -> Result<Vec<f64>, PolarError> {
    if !design_snr_es_db.is_finite() {
        return Err(PolarError::NonFiniteSnr(design_snr_es_db));
    }
    let z0 = (-10f64.powf(design_snr_es_db / 10.0)).exp();
    bhattacharyya_from_seed(n, z0)
}

/// Same recursion as [`bhattacharyya_construct`] from an explicit seed `z0`.
pub fn bhattacharyya_from_seed(n: usize, z0: f64) -> Result<Vec<f64>, PolarError> {
    if n == 0 {
        return Err(PolarError::InvalidStages(n));
    }
    if n > MAX_STAGES {
        return Err(PolarError::TooManyStages(n));
    }
    let z0 = z0.clamp(0.0, 1.0);
    let mut z = vec![z0];
    for _ in 0..n {
        let mut next = Vec::with_capacity(z.len() * 2);
        for &zi in &z {
            next.push((2.0 * zi - zi * zi).clamp(0.0, 1.0));
            next.push(zi * zi);
        }
        z = next;
    }
    Ok(z)
}

/// Index sets of the three channel classes, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelPartition {
    pub good: Vec<usize>,
    pub intermediate: Vec<usize>,
    pub frozen: Vec<usize>,
}

impl ChannelPartition {
    pub fn k_good(&self) -> usize {
        self.good.len()
    }

    pub fn n_ldpc(&self) -> usize {
        self.intermediate.len()
    }

    pub fn f_polar(&self) -> usize {
        self.frozen.len()
    }
}

/// Per-index role inside a block, derived from a [`ChannelPartition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelRole {
    Good,
    Intermediate,
    Frozen,
}

/// Rank-based three-way split: the `k_good` most reliable channels (lowest
/// Z) are good, the next `n_ldpc` are intermediate, the rest are frozen.
/// Equal scores are ordered by lower index first.
pub fn partition_channels(
    z_scores: &[f64],
    k_good: usize,
    n_ldpc: usize,
) -> Result<ChannelPartition, PolarError> {
    let block_len = z_scores.len();
    if k_good + n_ldpc > block_len {
        return Err(PolarError::PartitionTooLarge {
            k_good,
            n_ldpc,
            block_len,
        });
    }
    let mut order: Vec<usize> = (0..block_len).collect();
    order.sort_by(|&a, &b| z_scores[a].total_cmp(&z_scores[b]).then(a.cmp(&b)));

    let mut good = order[..k_good].to_vec();
    let mut intermediate = order[k_good..k_good + n_ldpc].to_vec();
    let mut frozen = order[k_good + n_ldpc..].to_vec();
    good.sort_unstable();
    intermediate.sort_unstable();
    frozen.sort_unstable();
    Ok(ChannelPartition {
        good,
        intermediate,
        frozen,
    })
}

/// In-place butterfly computing `x = u · F^{⊗n}` over GF(2).
pub fn polar_transform_in_place(bits: &mut [u8]) {
    let len = bits.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                bits[i] ^= bits[i + half];
            }
        }
        half *= 2;
    }
}

/// Encode a length-N bit vector. The transform is its own inverse.
pub fn polar_encode(u: &[u8], block_len: usize) -> Result<Vec<u8>, PolarError> {
    if u.len() != block_len || !block_len.is_power_of_two() {
        return Err(PolarError::LengthMismatch {
            got: u.len(),
            expected: block_len,
        });
    }
    let mut x = u.to_vec();
    polar_transform_in_place(&mut x);
    Ok(x)
}

/// A constructed polar code with its channel partition.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCodeSpec {
    stages: usize,
    design_snr_es_db: f64,
    z_scores: Vec<f64>,
    partition: ChannelPartition,
    roles: Vec<ChannelRole>,
}

impl PolarCodeSpec {
    /// Construct at the given design point and split by rank.
    pub fn construct(
        stages: usize,
        design_snr_es_db: f64,
        k_good: usize,
        n_ldpc: usize,
    ) -> Result<Self, PolarError> {
        let z_scores = bhattacharyya_construct(stages, design_snr_es_db)?;
        let partition = partition_channels(&z_scores, k_good, n_ldpc)?;
        Self::from_parts(stages, design_snr_es_db, z_scores, partition)
    }

    /// Assemble a spec from precomputed parts, validating every invariant.
    pub fn from_parts(
        stages: usize,
        design_snr_es_db: f64,
        z_scores: Vec<f64>,
        partition: ChannelPartition,
    ) -> Result<Self, PolarError> {
        if stages == 0 {
            return Err(PolarError::InvalidStages(stages));
        }
        if stages > MAX_STAGES {
            return Err(PolarError::TooManyStages(stages));
        }
        let block_len = 1usize << stages;
        if z_scores.len() != block_len {
            return Err(PolarError::LengthMismatch {
                got: z_scores.len(),
                expected: block_len,
            });
        }
        if let Some(z) = z_scores.iter().find(|z| !(0.0..=1.0).contains(*z)) {
            return Err(PolarError::InvalidSpec(format!("z score {z} outside [0, 1]")));
        }
        let mut roles: Vec<Option<ChannelRole>> = vec![None; block_len];
        let sets = [
            (&partition.good, ChannelRole::Good),
            (&partition.intermediate, ChannelRole::Intermediate),
            (&partition.frozen, ChannelRole::Frozen),
        ];
        for (set, role) in sets {
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(PolarError::InvalidSpec(format!(
                    "{role:?} index set is not strictly ascending"
                )));
            }
            for &i in set.iter() {
                match roles.get_mut(i) {
                    Some(slot @ None) => *slot = Some(role),
                    Some(Some(_)) => {
                        return Err(PolarError::InvalidSpec(format!("index {i} assigned twice")))
                    }
                    None => {
                        return Err(PolarError::InvalidSpec(format!(
                            "index {i} outside block of length {block_len}"
                        )))
                    }
                }
            }
        }
        let roles = roles
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| PolarError::InvalidSpec(format!("index {i} unassigned"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            stages,
            design_snr_es_db,
            z_scores,
            partition,
            roles,
        })
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn block_len(&self) -> usize {
        1 << self.stages
    }

    pub fn design_snr_es_db(&self) -> f64 {
        self.design_snr_es_db
    }

    pub fn z_scores(&self) -> &[f64] {
        &self.z_scores
    }

    pub fn partition(&self) -> &ChannelPartition {
        &self.partition
    }

    pub fn role(&self, index: usize) -> ChannelRole {
        self.roles[index]
    }

    pub fn roles(&self) -> &[ChannelRole] {
        &self.roles
    }

    pub fn encode(&self, u: &[u8]) -> Result<Vec<u8>, PolarError> {
        polar_encode(u, self.block_len())
    }

    pub fn to_json(&self) -> PolarSpecJson {
        PolarSpecJson {
            n: self.stages,
            design_snr_es_db: self.design_snr_es_db,
            good: self.partition.good.clone(),
            intermediate: self.partition.intermediate.clone(),
            frozen: self.partition.frozen.clone(),
            z_scores: self.z_scores.clone(),
        }
    }

    pub fn from_json(doc: PolarSpecJson) -> Result<Self, PolarError> {
        Self::from_parts(
            doc.n,
            doc.design_snr_es_db,
            doc.z_scores,
            ChannelPartition {
                good: doc.good,
                intermediate: doc.intermediate,
                frozen: doc.frozen,
            },
        )
    }
}

/// On-disk JSON layout of a polar code spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarSpecJson {
    pub n: usize,
    pub design_snr_es_db: f64,
    pub good: Vec<usize>,
    pub intermediate: Vec<usize>,
    pub frozen: Vec<usize>,
    pub z_scores: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_seed_is_a_fixed_point() {
        for n in 1..6 {
            let z = bhattacharyya_from_seed(n, 0.0).unwrap();
            assert!(z.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn one_step_at_zero_db() {
        let z0 = (-1.0f64).exp();
        assert!((z0 - 0.367879).abs() < 1e-6);
        let z = bhattacharyya_construct(1, 0.0).unwrap();
        assert!((z[0] - 0.600423).abs() < 1e-6);
        assert!((z[1] - 0.135335).abs() < 1e-6);
    }

    #[test]
    fn two_steps_at_zero_db() {
        let z0 = (-1.0f64).exp();
        let minus = 2.0 * z0 - z0 * z0;
        let plus = z0 * z0;
        let expected = [
            2.0 * minus - minus * minus,
            minus * minus,
            2.0 * plus - plus * plus,
            plus * plus,
        ];
        let z = bhattacharyya_construct(2, 0.0).unwrap();
        for (a, b) in z.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(z[1] <= minus && z[0] >= minus);
        assert!(z[3] <= plus && z[2] >= plus);
    }

    #[test]
    fn rejects_bad_construction_inputs() {
        assert_eq!(bhattacharyya_construct(0, 0.0), Err(PolarError::InvalidStages(0)));
        assert!(matches!(
            bhattacharyya_construct(3, f64::NAN),
            Err(PolarError::NonFiniteSnr(_))
        ));
        assert!(matches!(
            bhattacharyya_construct(3, f64::INFINITY),
            Err(PolarError::NonFiniteSnr(_))
        ));
    }

    /// Genie-aided SC on the binary erasure channel: channel `i` is erased
    /// when `u_i` is not determined by the unerased outputs once
    /// `u_0..u_{i-1}` are known. For the BEC the Bhattacharyya recursion is
    /// exact, so enumerating all erasure patterns checks the index order.
    #[test]
    fn index_order_matches_bec_enumeration() {
        let n = 3;
        let len = 1usize << n;
        let eps: f64 = 0.3;
        let codewords: Vec<(u32, Vec<u8>)> = (0u32..1 << len)
            .map(|u| {
                let bits: Vec<u8> = (0..len).map(|j| ((u >> j) & 1) as u8).collect();
                (u, polar_encode(&bits, len).unwrap())
            })
            .collect();
        let mut erasure_prob = vec![0.0; len];
        for pattern in 0u32..1 << len {
            let erased = |j: usize| (pattern >> j) & 1 == 1;
            let p = (0..len)
                .map(|j| if erased(j) { eps } else { 1.0 - eps })
                .product::<f64>();
            for (i, prob) in erasure_prob.iter_mut().enumerate() {
                // By linearity, u_i is ambiguous iff some u with u_0..u_{i-1} = 0
                // and u_i = 1 encodes to zero on every unerased output.
                let ambiguous = codewords.iter().any(|(u, x)| {
                    (u & ((1 << i) - 1)) == 0
                        && (u >> i) & 1 == 1
                        && (0..len).all(|j| erased(j) || x[j] == 0)
                });
                if ambiguous {
                    *prob += p;
                }
            }
        }
        let z = bhattacharyya_from_seed(n, eps).unwrap();
        for i in 0..len {
            assert!((z[i] - erasure_prob[i]).abs() < 1e-12, "channel {i}");
        }
    }

    #[test]
    fn small_encodings() {
        assert_eq!(polar_encode(&[0, 1], 2).unwrap(), vec![1, 1]);
        assert_eq!(polar_encode(&[0, 0, 0, 1], 4).unwrap(), vec![1, 1, 1, 1]);
        assert_eq!(polar_encode(&[0; 16], 16).unwrap(), vec![0; 16]);
        assert!(matches!(
            polar_encode(&[0, 1, 1], 4),
            Err(PolarError::LengthMismatch { got: 3, expected: 4 })
        ));
    }

    #[test]
    fn encoder_matches_kronecker_matrix() {
        // G = F^{⊗3} built explicitly.
        let f = [[1u8, 0], [1, 1]];
        let len = 8;
        let g = |r: usize, c: usize| (0..3).fold(1u8, |acc, b| acc & f[(r >> b) & 1][(c >> b) & 1]);
        for u in 0u32..256 {
            let bits: Vec<u8> = (0..len).map(|j| ((u >> j) & 1) as u8).collect();
            let x = polar_encode(&bits, len).unwrap();
            for c in 0..len {
                let want = (0..len).fold(0u8, |acc, r| acc ^ (bits[r] & g(r, c)));
                assert_eq!(x[c], want);
            }
        }
    }

    #[test]
    fn degenerate_full_rate_partition() {
        let z = bhattacharyya_construct(4, 0.0).unwrap();
        let p = partition_channels(&z, 16, 0).unwrap();
        assert_eq!(p.good, (0..16).collect::<Vec<_>>());
        assert!(p.frozen.is_empty() && p.intermediate.is_empty());
        assert!(matches!(
            partition_channels(&z, 10, 7),
            Err(PolarError::PartitionTooLarge { .. })
        ));
    }

    #[test]
    fn ties_prefer_lower_index() {
        let z = vec![0.5; 8];
        let p = partition_channels(&z, 3, 2).unwrap();
        assert_eq!(p.good, vec![0, 1, 2]);
        assert_eq!(p.intermediate, vec![3, 4]);
        assert_eq!(p.frozen, vec![5, 6, 7]);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let spec = PolarCodeSpec::construct(5, 0.0, 12, 6).unwrap();
        let text = serde_json::to_string(&spec.to_json()).unwrap();
        let back = PolarCodeSpec::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(spec, back);

        let mut doc = spec.to_json();
        doc.frozen.push(doc.good[0]);
        doc.frozen.sort_unstable();
        assert!(PolarCodeSpec::from_json(doc).is_err());

        let mut doc = spec.to_json();
        doc.frozen.pop();
        assert!(PolarCodeSpec::from_json(doc).is_err());
    }

    proptest! {
        #[test]
        fn encode_is_an_involution(n in 1usize..=10, seed in any::<u64>()) {
            let len = 1usize << n;
            let mut state = seed;
            let u: Vec<u8> = (0..len)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (state >> 63) as u8
                })
                .collect();
            let x = polar_encode(&u, len).unwrap();
            prop_assert_eq!(polar_encode(&x, len).unwrap(), u);
        }

        #[test]
        fn recursion_orders_and_bounds(z0 in 0.0f64..=1.0, n in 1usize..=8) {
            let z = bhattacharyya_from_seed(n, z0).unwrap();
            prop_assert!(z.iter().all(|v| (0.0..=1.0).contains(v)));
            let one = bhattacharyya_from_seed(1, z0).unwrap();
            prop_assert!(one[1] <= z0 + 1e-15 && one[0] >= z0 - 1e-15);
        }

        #[test]
        fn partition_is_rank_based(
            scores in proptest::collection::vec(0.0f64..1.0, 32),
            k_good in 0usize..=32,
            n_ldpc in 0usize..=32,
        ) {
            prop_assume!(k_good + n_ldpc <= 32);
            let p = partition_channels(&scores, k_good, n_ldpc).unwrap();
            prop_assert_eq!(p.good.len(), k_good);
            prop_assert_eq!(p.intermediate.len(), n_ldpc);
            prop_assert_eq!(p.frozen.len(), 32 - k_good - n_ldpc);
            let mut all: Vec<usize> = p.good.iter().chain(&p.intermediate).chain(&p.frozen).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..32).collect::<Vec<_>>());
            // Sorting oracle: stable sort by score keeps lower indices first on ties.
            let mut sorted: Vec<usize> = (0..32).collect();
            sorted.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
            let mut good = sorted[..k_good].to_vec();
            good.sort_unstable();
            prop_assert_eq!(good, p.good);
        }
    }
}
