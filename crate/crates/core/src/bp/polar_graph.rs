//! Message state of the polar factor graph.
//!
//! Stages are numbered `0..=n` from the message side (`u`) to the channel
//! side (`x`). The processing elements between stage `s` and `s + 1` pair
//! index `i` with `i + 2^s`, matching [`crate::polar::polar_transform_in_place`].

use super::boxplus::UpdateRule;

/// L (right-to-left) and R (left-to-right) LLR grids, `(n + 1) × N` each.
#[derive(Debug, Clone, PartialEq)]
pub struct MessageState {
    stages: usize,
    block_len: usize,
    clip: f64,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl MessageState {
    pub fn new(stages: usize, clip: f64) -> Self {
        let block_len = 1 << stages;
        Self {
            stages,
            block_len,
            clip,
            left: vec![0.0; (stages + 1) * block_len],
            right: vec![0.0; (stages + 1) * block_len],
        }
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn clip(&self) -> f64 {
        self.clip
    }

    /// Zero every message, then load channel LLRs and message-side priors.
    pub fn reset(&mut self, channel: &[f64], priors: &[f64]) {
        assert_eq!(channel.len(), self.block_len);
        assert_eq!(priors.len(), self.block_len);
        self.left.fill(0.0);
        self.right.fill(0.0);
        let clip = self.clip;
        let n = self.stages;
        for (dst, &c) in self.l_mut(n).iter_mut().zip(channel) {
            *dst = c.clamp(-clip, clip);
        }
        for (dst, &p) in self.r_mut(0).iter_mut().zip(priors) {
            *dst = p.clamp(-clip, clip);
        }
    }

    pub fn l(&self, stage: usize) -> &[f64] {
        &self.left[stage * self.block_len..(stage + 1) * self.block_len]
    }

    pub fn r(&self, stage: usize) -> &[f64] {
        &self.right[stage * self.block_len..(stage + 1) * self.block_len]
    }

    pub fn l_mut(&mut self, stage: usize) -> &mut [f64] {
        &mut self.left[stage * self.block_len..(stage + 1) * self.block_len]
    }

    pub fn r_mut(&mut self, stage: usize) -> &mut [f64] {
        &mut self.right[stage * self.block_len..(stage + 1) * self.block_len]
    }

    /// `L + R` at the message side.
    pub fn u_llr(&self, i: usize) -> f64 {
        self.left[i] + self.right[i]
    }

    /// `L + R` at the channel side.
    pub fn x_llr(&self, i: usize) -> f64 {
        let base = self.stages * self.block_len;
        self.left[base + i] + self.right[base + i]
    }

    /// Hard decisions at both ends; an LLR sum of exactly zero gives bit 0.
    pub fn hard_decisions(&self) -> (Vec<u8>, Vec<u8>) {
        let u = (0..self.block_len).map(|i| (self.u_llr(i) < 0.0) as u8).collect();
        let x = (0..self.block_len).map(|i| (self.x_llr(i) < 0.0) as u8).collect();
        (u, x)
    }

    pub fn all_bounded(&self) -> bool {
        let c = self.clip;
        self.left.iter().chain(&self.right).all(|v| v.is_finite() && v.abs() <= c)
    }

    /// One right sweep over all stages followed by one left sweep.
    pub fn iterate(&mut self, rule: UpdateRule) {
        match rule {
            UpdateRule::BoxPlus => self.iterate_with(super::boxplus::boxplus_exact),
            UpdateRule::MinSum => self.iterate_with(super::boxplus::boxplus_minsum),
        }
        debug_assert!(self.all_bounded());
    }

    fn iterate_with(&mut self, g: impl Fn(f64, f64) -> f64 + Copy) {
        let len = self.block_len;
        let clip = self.clip;
        for s in 0..self.stages {
            let half = 1 << s;
            let (r_lo, r_hi) = self.right.split_at_mut((s + 1) * len);
            let r_left = &r_lo[s * len..];
            let r_right = &mut r_hi[..len];
            let l_right = &self.left[(s + 1) * len..(s + 2) * len];
            for block in (0..len).step_by(2 * half) {
                for i1 in block..block + half {
                    let i2 = i1 + half;
                    let (r1, r2) = (r_left[i1], r_left[i2]);
                    let (l1, l2) = (l_right[i1], l_right[i2]);
                    r_right[i1] = g(r1, l2 + r2).clamp(-clip, clip);
                    r_right[i2] = (g(r1, l1) + r2).clamp(-clip, clip);
                }
            }
        }
        for s in (0..self.stages).rev() {
            let half = 1 << s;
            let (l_lo, l_hi) = self.left.split_at_mut((s + 1) * len);
            let l_left = &mut l_lo[s * len..];
            let l_right = &l_hi[..len];
            let r_left = &self.right[s * len..(s + 1) * len];
            for block in (0..len).step_by(2 * half) {
                for i1 in block..block + half {
                    let i2 = i1 + half;
                    let (r1, r2) = (r_left[i1], r_left[i2]);
                    let (l1, l2) = (l_right[i1], l_right[i2]);
                    l_left[i1] = g(l1, l2 + r2).clamp(-clip, clip);
                    l_left[i2] = (g(r1, l1) + l2).clamp(-clip, clip);
                }
            }
        }
    }
}
