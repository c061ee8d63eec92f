//! Integer realization of fractional check-node degree profiles.

use std::collections::BTreeMap;

use super::LdpcError;

/// Node-fraction deviation allowed when checking that targets sum to one.
const FRACTION_SUM_TOL: f64 = 1e-9;

/// Turn node fractions into integer check counts.
///
/// The result satisfies `Σ c_d = n_checks` and `Σ d·c_d = n_vars·d_v`
/// exactly and minimizes `Σ_d |c_d/n_checks - f_d|`. Ties go to the
/// lexicographically smallest count vector (degrees ascending).
pub fn realize_degree_sequence(
    n_vars: usize,
    var_degree: usize,
    n_checks: usize,
    target: &[(usize, f64)],
) -> Result<BTreeMap<usize, usize>, LdpcError> {
    if target.is_empty() {
        return Err(LdpcError::InvalidProfile("empty degree profile".into()));
    }
    if n_checks == 0 {
        return Err(LdpcError::InvalidProfile("no check nodes".into()));
    }
    let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
    for &(d, f) in target {
        if d < 2 {
            return Err(LdpcError::InvalidProfile(format!("check degree {d} < 2")));
        }
        if !f.is_finite() || f < 0.0 {
            return Err(LdpcError::InvalidProfile(format!("bad fraction {f} for degree {d}")));
        }
        *merged.entry(d).or_insert(0.0) += f;
    }
    let total: f64 = merged.values().sum();
    if (total - 1.0).abs() > FRACTION_SUM_TOL {
        return Err(LdpcError::InvalidProfile(format!(
            "node fractions sum to {total}, expected 1"
        )));
    }
    let edges = n_vars * var_degree;
    if edges < 2 * n_checks {
        return Err(LdpcError::InvalidProfile(format!(
            "{edges} edges cannot give {n_checks} checks degree >= 2"
        )));
    }

    let degrees: Vec<usize> = merged.keys().copied().collect();
    let fractions: Vec<f64> = merged.values().copied().collect();
    let mut search = Search {
        degrees: &degrees,
        fractions: &fractions,
        n_checks,
        counts: vec![0; degrees.len()],
        best: None,
    };
    search.descend(0, n_checks, edges, 0.0);

    match search.best {
        Some((_, counts)) => Ok(degrees.into_iter().zip(counts).collect()),
        None => {
            let lo = degrees[0] * n_checks;
            let hi = degrees[degrees.len() - 1] * n_checks;
            let residual = if edges < lo { lo - edges } else { edges.saturating_sub(hi) };
            Err(LdpcError::NoIntegerRealization {
                edges,
                n_checks,
                residual,
            })
        }
    }
}

struct Search<'a> {
    degrees: &'a [usize],
    fractions: &'a [f64],
    n_checks: usize,
    counts: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
}

impl Search<'_> {
    // Exhaustive over count vectors in lexicographic order; a strict
    // improvement is required to replace the incumbent, which realizes the
    // lexicographic tie-break.
    fn descend(&mut self, pos: usize, checks_left: usize, edges_left: usize, cost: f64) {
        let last = pos + 1 == self.degrees.len();
        let d = self.degrees[pos];
        if last {
            if checks_left * d != edges_left {
                return;
            }
            self.counts[pos] = checks_left;
            let cost = cost + self.deviation(pos, checks_left);
            let better = match &self.best {
                None => true,
                Some((best, _)) => cost < *best - 1e-12,
            };
            if better {
                self.best = Some((cost, self.counts.clone()));
            }
            return;
        }
        let min_rest = self.degrees[pos + 1];
        let max_rest = self.degrees[self.degrees.len() - 1];
        for c in 0..=checks_left {
            if c * d > edges_left {
                break;
            }
            let rest_checks = checks_left - c;
            let rest_edges = edges_left - c * d;
            if rest_edges < rest_checks * min_rest || rest_edges > rest_checks * max_rest {
                continue;
            }
            self.counts[pos] = c;
            let partial = cost + self.deviation(pos, c);
            self.descend(pos + 1, rest_checks, rest_edges, partial);
        }
        self.counts[pos] = 0;
    }

    fn deviation(&self, pos: usize, count: usize) -> f64 {
        (count as f64 / self.n_checks as f64 - self.fractions[pos]).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_profile() {
        let c = realize_degree_sequence(155, 3, 93, &[(5, 1.0)]).unwrap();
        assert_eq!(c, BTreeMap::from([(5, 93)]));
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(realize_degree_sequence(155, 3, 93, &[(5, 0.5)]).is_err());
        assert!(realize_degree_sequence(155, 3, 93, &[(1, 1.0)]).is_err());
        assert!(realize_degree_sequence(155, 3, 93, &[]).is_err());
        // 465 edges over 93 checks of degree 4 only: infeasible.
        let err = realize_degree_sequence(155, 3, 93, &[(4, 1.0)]).unwrap_err();
        assert!(matches!(err, LdpcError::NoIntegerRealization { residual: 93, .. }));
    }

    #[test]
    fn duplicate_degrees_merge() {
        let c = realize_degree_sequence(155, 3, 93, &[(5, 0.5), (5, 0.5)]).unwrap();
        assert_eq!(c, BTreeMap::from([(5, 93)]));
    }
}
