//! Flooding BP on the Tanner graph of the auxiliary LDPC code.

use crate::ldpc::LdpcCodeSpec;

use super::boxplus::UpdateRule;
use super::DecodeError;

/// Edge messages of one LDPC decoder instance. Edges are stored grouped
/// by check, in the order of each check's variable list.
#[derive(Debug, Clone)]
pub struct TannerState {
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_edges: Vec<Vec<usize>>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    scratch_fwd: Vec<f64>,
    scratch_bwd: Vec<f64>,
    clip: f64,
    persistent: bool,
}

impl TannerState {
    pub fn new(code: &LdpcCodeSpec, clip: f64, persistent: bool) -> Self {
        let graph = code.graph();
        let mut check_start = Vec::with_capacity(graph.n_checks() + 1);
        let mut edge_var = Vec::with_capacity(graph.n_edges());
        let mut var_edges = vec![Vec::new(); graph.n_vars()];
        check_start.push(0);
        for vars in &graph.check_adj {
            for &v in vars {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_start.push(edge_var.len());
        }
        let max_deg = graph.check_adj.iter().map(Vec::len).max().unwrap_or(0);
        Self {
            check_start,
            v2c: vec![0.0; edge_var.len()],
            c2v: vec![0.0; edge_var.len()],
            edge_var,
            var_edges,
            scratch_fwd: vec![0.0; max_deg],
            scratch_bwd: vec![0.0; max_deg],
            clip,
            persistent,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.var_edges.len()
    }

    pub fn reset(&mut self) {
        self.v2c.fill(0.0);
        self.c2v.fill(0.0);
    }

    /// Variable node attached to each edge.
    pub fn edge_vars(&self) -> &[usize] {
        &self.edge_var
    }

    pub fn v2c(&self) -> &[f64] {
        &self.v2c
    }

    pub fn c2v(&self) -> &[f64] {
        &self.c2v
    }

    /// One variable update followed by one check update. `channel_in` are
    /// the per-variable input LLRs; the per-variable extrinsic output (sum
    /// of incoming check messages, without `channel_in`) is written to
    /// `extrinsic`.
    pub fn iterate(
        &mut self,
        channel_in: &[f64],
        rule: UpdateRule,
        extrinsic: &mut [f64],
    ) -> Result<(), DecodeError> {
        let n = self.n_vars();
        if channel_in.len() != n || extrinsic.len() != n {
            return Err(DecodeError::LengthMismatch {
                got: channel_in.len().min(extrinsic.len()),
                expected: n,
            });
        }
        if !self.persistent {
            self.c2v.fill(0.0);
        }
        let clip = self.clip;
        for (v, edges) in self.var_edges.iter().enumerate() {
            let total: f64 = channel_in[v] + edges.iter().map(|&e| self.c2v[e]).sum::<f64>();
            for &e in edges {
                self.v2c[e] = (total - self.c2v[e]).clamp(-clip, clip);
            }
        }
        match rule {
            UpdateRule::BoxPlus => self.check_update(super::boxplus::boxplus_exact),
            UpdateRule::MinSum => self.check_update(super::boxplus::boxplus_minsum),
        }
        for (v, edges) in self.var_edges.iter().enumerate() {
            let sum: f64 = edges.iter().map(|&e| self.c2v[e]).sum();
            extrinsic[v] = sum.clamp(-clip, clip);
        }
        Ok(())
    }

    fn check_update(&mut self, g: impl Fn(f64, f64) -> f64) {
        let clip = self.clip;
        for c in 0..self.check_start.len() - 1 {
            let (start, end) = (self.check_start[c], self.check_start[c + 1]);
            let deg = end - start;
            let input = &self.v2c[start..end];
            let out = &mut self.c2v[start..end];
            if deg == 1 {
                out[0] = clip;
                continue;
            }
            let fwd = &mut self.scratch_fwd[..deg];
            let bwd = &mut self.scratch_bwd[..deg];
            fwd[0] = input[0];
            for k in 1..deg {
                fwd[k] = g(fwd[k - 1], input[k]);
            }
            bwd[deg - 1] = input[deg - 1];
            for k in (0..deg - 1).rev() {
                bwd[k] = g(bwd[k + 1], input[k]);
            }
            out[0] = bwd[1];
            out[deg - 1] = fwd[deg - 2];
            for k in 1..deg - 1 {
                out[k] = g(fwd[k - 1], bwd[k + 1]);
            }
            for o in out.iter_mut() {
                *o = o.clamp(-clip, clip);
            }
        }
    }
}
