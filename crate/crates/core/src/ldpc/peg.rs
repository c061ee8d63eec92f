//! Progressive edge growth Tanner graph construction.

use std::collections::{BTreeMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LdpcError;

/// Adjacency lists of a bipartite Tanner graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    /// Checks attached to each variable, ascending.
    pub var_adj: Vec<Vec<usize>>,
    /// Variables attached to each check, ascending.
    pub check_adj: Vec<Vec<usize>>,
}

impl TannerGraph {
    pub fn n_vars(&self) -> usize {
        self.var_adj.len()
    }

    pub fn n_checks(&self) -> usize {
        self.check_adj.len()
    }

    pub fn n_edges(&self) -> usize {
        self.check_adj.iter().map(Vec::len).sum()
    }

    /// Length of the shortest cycle, `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let nv = self.n_vars();
        let total = nv + self.n_checks();
        let neighbors = |node: usize| -> Box<dyn Iterator<Item = usize> + '_> {
            if node < nv {
                Box::new(self.var_adj[node].iter().map(move |&c| c + nv))
            } else {
                Box::new(self.check_adj[node - nv].iter().copied())
            }
        };
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        for root in 0..total {
            dist.fill(usize::MAX);
            parent.fill(usize::MAX);
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            'bfs: while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for w in neighbors(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                        break 'bfs;
                    }
                }
            }
        }
        best
    }
}

/// Build a graph where every variable has degree `var_degree` and check
/// degrees follow `check_counts` (degree → number of checks; checks are
/// laid out in ascending degree order).
///
/// Each new edge of a variable goes to an open check that is farthest from
/// the variable in the current graph (unreachable counts as farthest).
/// Ties prefer the check with the most open slots, then a seeded random pick.
pub fn peg_construct(
    n_vars: usize,
    var_degree: usize,
    check_counts: &BTreeMap<usize, usize>,
    seed: u64,
) -> Result<TannerGraph, LdpcError> {
    let target: Vec<usize> = check_counts
        .iter()
        .flat_map(|(&d, &c)| std::iter::repeat_n(d, c))
        .collect();
    let edges: usize = target.iter().sum();
    if edges != n_vars * var_degree {
        return Err(LdpcError::EdgeImbalance {
            var_edges: n_vars * var_degree,
            check_edges: edges,
        });
    }
    let n_checks = target.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut var_adj: Vec<Vec<usize>> = vec![Vec::with_capacity(var_degree); n_vars];
    let mut check_adj: Vec<Vec<usize>> = target.iter().map(|&d| Vec::with_capacity(d)).collect();

    let mut depth = vec![usize::MAX; n_checks];
    let mut var_seen = vec![false; n_vars];
    let mut candidates = Vec::with_capacity(n_checks);

    for v in 0..n_vars {
        for _ in 0..var_degree {
            // Depth of every check from v, counted in check layers.
            depth.fill(usize::MAX);
            var_seen.fill(false);
            var_seen[v] = true;
            let mut frontier = vec![v];
            let mut layer = 0;
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &c in &var_adj[u] {
                        if depth[c] != usize::MAX {
                            continue;
                        }
                        depth[c] = layer;
                        for &w in &check_adj[c] {
                            if !var_seen[w] {
                                var_seen[w] = true;
                                next.push(w);
                            }
                        }
                    }
                }
                frontier = next;
                layer += 1;
            }

            let open = |c: usize| check_adj[c].len() < target[c];
            let residual = |c: usize| target[c] - check_adj[c].len();
            let farthest = (0..n_checks)
                .filter(|&c| open(c) && depth[c] != 0)
                .map(|c| depth[c])
                .max()
                .ok_or(LdpcError::PegStuck { var: v })?;
            candidates.clear();
            candidates.extend((0..n_checks).filter(|&c| open(c) && depth[c] == farthest));
            let most = candidates.iter().map(|&c| residual(c)).max().unwrap_or(0);
            candidates.retain(|&c| residual(c) == most);
            let pick = candidates[rng.random_range(0..candidates.len())];
            var_adj[v].push(pick);
            check_adj[pick].push(v);
        }
    }
    for list in var_adj.iter_mut().chain(check_adj.iter_mut()) {
        list.sort_unstable();
    }
    Ok(TannerGraph { var_adj, check_adj })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_case_is_a_perfect_matching() {
        let g = peg_construct(4, 1, &BTreeMap::from([(2, 2)]), 9).unwrap();
        assert_eq!(g.n_edges(), 4);
        assert!(g.check_adj.iter().all(|c| c.len() == 2));
        assert_eq!(g.girth(), None);
    }

    #[test]
    fn imbalance_is_rejected() {
        let err = peg_construct(10, 3, &BTreeMap::from([(5, 5)]), 1).unwrap_err();
        assert!(matches!(err, LdpcError::EdgeImbalance { .. }));
    }

    #[test]
    fn girth_of_a_single_cycle() {
        // v0-c0-v1-c1-v0 is a 4-cycle.
        let g = TannerGraph {
            var_adj: vec![vec![0, 1], vec![0, 1], vec![1]],
            check_adj: vec![vec![0, 1], vec![0, 1, 2]],
        };
        assert_eq!(g.girth(), Some(4));
    }
}
