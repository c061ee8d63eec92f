//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, VecDeque};

use polarlab::ldpc::peg::TannerGraph;
use polarlab::setup::SetupParams;

/// Box-plus evaluated in the probability domain:
/// `tanh(out/2) = tanh(a/2)·tanh(b/2)`, written with `e^{-|.|}` so it stays
/// accurate when both magnitudes are large.
pub fn boxplus_tanh(a: f64, b: f64) -> f64 {
    let ea = (-a.abs()).exp();
    let eb = (-b.abs()).exp();
    let sign = a.signum() * b.signum();
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    sign * ((1.0 + ea * eb) / (ea + eb)).ln()
}

/// Maximum-likelihood decoding by enumeration: the codeword closest to the
/// channel LLRs in correlation. Returns the information bits.
pub fn ml_decode(codebook: &[(Vec<u8>, Vec<u8>)], llr: &[f64]) -> Vec<u8> {
    let metric = |x: &[u8]| -> f64 {
        x.iter()
            .zip(llr)
            .map(|(&b, &l)| if b == 0 { l } else { -l })
            .sum()
    };
    codebook
        .iter()
        .max_by(|a, b| metric(&a.1).total_cmp(&metric(&b.1)))
        .map(|(info, _)| info.clone())
        .unwrap()
}

/// Girth by brute force: for every edge, remove it and look for the
/// shortest detour between its endpoints.
pub fn girth_by_edge_removal(g: &TannerGraph) -> Option<usize> {
    let nv = g.n_vars();
    let nodes = nv + g.n_checks();
    let mut adj = vec![Vec::new(); nodes];
    for (v, checks) in g.var_adj.iter().enumerate() {
        for &c in checks {
            adj[v].push(nv + c);
            adj[nv + c].push(v);
        }
    }
    let mut best: Option<usize> = None;
    for (v, checks) in g.var_adj.iter().enumerate() {
        for &c in checks {
            let (src, dst) = (v, nv + c);
            let mut dist = vec![usize::MAX; nodes];
            dist[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(a) = queue.pop_front() {
                for &b in &adj[a] {
                    if (a == src && b == dst) || (a == dst && b == src) {
                        continue;
                    }
                    if dist[b] == usize::MAX {
                        dist[b] = dist[a] + 1;
                        queue.push_back(b);
                    }
                }
            }
            if dist[dst] != usize::MAX {
                let cycle = dist[dst] + 1;
                best = Some(best.map_or(cycle, |b: usize| b.min(cycle)));
            }
        }
    }
    best
}

/// Exhaustive search over three-degree count vectors, written as a plain
/// triple loop. Returns the admissible vector with the smallest L1 error,
/// first found in lexicographic order on ties.
pub fn degree_oracle_3(
    n_vars: usize,
    var_degree: usize,
    n_checks: usize,
    target: [(usize, f64); 3],
) -> Option<BTreeMap<usize, usize>> {
    let edges = n_vars * var_degree;
    let mut best: Option<(f64, [usize; 3])> = None;
    for a in 0..=n_checks {
        for b in 0..=n_checks - a {
            let c = n_checks - a - b;
            if a * target[0].0 + b * target[1].0 + c * target[2].0 != edges {
                continue;
            }
            let err: f64 = [a, b, c]
                .iter()
                .zip(&target)
                .map(|(&k, &(_, f))| (k as f64 / n_checks as f64 - f).abs())
                .sum();
            if best.is_none_or(|(e, _)| err < e - 1e-12) {
                best = Some((err, [a, b, c]));
            }
        }
    }
    best.map(|(_, counts)| {
        target
            .iter()
            .zip(counts)
            .filter(|(_, k)| *k > 0)
            .map(|(&(d, _), k)| (d, k))
            .collect()
    })
}

/// A small polar + LDPC set-up (N = 64) that keeps statistical tests fast.
pub fn small_setup() -> SetupParams {
    SetupParams {
        name: "small".into(),
        stages: 6,
        design_snr_es_db: 0.0,
        k_good: 26,
        n_ldpc: 15,
        k_ldpc: 6,
        var_degree: 3,
        check_profile: vec![(5, 1.0)],
        ldpc_seed: 7,
    }
}
