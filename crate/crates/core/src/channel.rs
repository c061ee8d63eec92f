//! BPSK over real AWGN and the seed schedule for Monte-Carlo frames.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `Es/N0 = R · Eb/N0`, in dB.
pub fn es_from_eb_db(eb_n0_db: f64, rate: f64) -> f64 {
    eb_n0_db + 10.0 * rate.log10()
}

pub fn eb_from_es_db(es_n0_db: f64, rate: f64) -> f64 {
    es_n0_db - 10.0 * rate.log10()
}

/// Per-dimension noise variance for unit-energy BPSK: `1 / (2·Es/N0)`.
pub fn noise_variance(es_n0_db: f64) -> f64 {
    1.0 / (2.0 * 10f64.powf(es_n0_db / 10.0))
}

/// Transmit `bits` as `1 - 2b`, add Gaussian noise and return the clipped
/// channel LLRs `2y/σ²`.
pub fn awgn_bpsk_llr<R: Rng + ?Sized>(bits: &[u8], es_n0_db: f64, clip: f64, rng: &mut R) -> Vec<f64> {
    let var = noise_variance(es_n0_db);
    let sigma = var.sqrt();
    bits.iter()
        .map(|&b| {
            let noise: f64 = rng.sample(StandardNormal);
            let y = 1.0 - 2.0 * f64::from(b & 1) + sigma * noise;
            (2.0 * y / var).clamp(-clip, clip)
        })
        .collect()
}

/// Independent stream for frame `frame` of SNR point `snr_index`.
pub fn frame_rng(master_seed: u64, snr_index: u64, frame: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&snr_index.to_le_bytes());
    seed[16..24].copy_from_slice(&frame.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}
