//! Analytic check-node EXIT curves and check-profile matching.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::curve::Curve;
use super::mi::{j_function, j_inverse};
use super::ExitError;

/// Check-degree distribution with normalized node fractions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CndProfile {
    /// (degree, node fraction), ascending degree, zero weights dropped.
    degrees: Vec<(usize, f64)>,
}

impl CndProfile {
    /// Build from nonnegative weights; they are normalized to sum to one.
    pub fn new(weights: &[(usize, f64)]) -> Result<Self, ExitError> {
        let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
        for &(d, w) in weights {
            if d < 2 {
                return Err(ExitError::InvalidProfile(format!("check degree {d} < 2")));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(ExitError::InvalidProfile(format!("weight {w} for degree {d}")));
            }
            *merged.entry(d).or_insert(0.0) += w;
        }
        let total: f64 = merged.values().sum();
        if !(total > 0.0) {
            return Err(ExitError::InvalidProfile("weights sum to zero".into()));
        }
        let degrees = merged
            .into_iter()
            .filter(|&(_, w)| w > 0.0)
            .map(|(d, w)| (d, w / total))
            .collect();
        Ok(Self { degrees })
    }

    pub fn regular(degree: usize) -> Result<Self, ExitError> {
        Self::new(&[(degree, 1.0)])
    }

    pub fn node_fractions(&self) -> &[(usize, f64)] {
        &self.degrees
    }

    /// Node-averaged check degree.
    pub fn avg_check_degree(&self) -> f64 {
        self.degrees.iter().map(|&(d, f)| d as f64 * f).sum()
    }

    /// Edge fractions `ρ_d = d·f_d / Σ d·f_d`.
    pub fn edge_fractions(&self) -> Vec<(usize, f64)> {
        let avg = self.avg_check_degree();
        self.degrees.iter().map(|&(d, f)| (d, d as f64 * f / avg)).collect()
    }
}

/// `1 - J(√(d-1)·J⁻¹(1 - I_A))` for one check degree.
pub fn cnd_curve_single(ia: f64, degree: usize) -> Result<f64, ExitError> {
    if !(0.0..=1.0).contains(&ia) {
        return Err(ExitError::InvalidMi(ia));
    }
    if ia == 0.0 {
        return Ok(0.0);
    }
    let sigma = j_inverse(1.0 - ia)?;
    Ok(1.0 - j_function(((degree - 1) as f64).sqrt() * sigma)?)
}

/// Edge-fraction mixture of the single-degree curves.
pub fn cnd_curve(ia: f64, profile: &CndProfile) -> Result<f64, ExitError> {
    if !(0.0..=1.0).contains(&ia) {
        return Err(ExitError::InvalidMi(ia));
    }
    if ia == 0.0 {
        return Ok(0.0);
    }
    let sigma = j_inverse(1.0 - ia)?;
    profile
        .edge_fractions()
        .into_iter()
        .map(|(d, rho)| Ok(rho * (1.0 - j_function(((d - 1) as f64).sqrt() * sigma)?)))
        .sum()
}

/// Single-degree CND curves tabulated along a uniform grid in `σ`, where
/// `I_A = 1 - J(σ)`. Sampling in `σ` avoids one inversion of `J` per point.
#[derive(Debug, Clone)]
pub struct CndTable {
    ia: Vec<f64>,
    by_degree: BTreeMap<usize, Vec<f64>>,
}

/// Beyond this `σ` the a-priori information is below `1e-9`.
const TABLE_SIGMA_TOP: f64 = 13.0;

impl CndTable {
    pub fn new(degrees: &[usize], points: usize) -> Result<Self, ExitError> {
        if points < 2 {
            return Err(ExitError::InvalidGrid(format!("{points} table points")));
        }
        if let Some(d) = degrees.iter().find(|&&d| d < 2) {
            return Err(ExitError::InvalidProfile(format!("check degree {d} < 2")));
        }
        // Index 0 is the exact I_A = 0 end; the rest runs σ from the top down to 0.
        let sigmas: Vec<f64> = (0..points - 1)
            .map(|k| TABLE_SIGMA_TOP * (1.0 - k as f64 / (points - 2).max(1) as f64))
            .collect();
        let mut ia = vec![0.0];
        for &s in &sigmas {
            ia.push(1.0 - j_function(s)?);
        }
        let mut by_degree = BTreeMap::new();
        for &d in degrees {
            let scale = ((d - 1) as f64).sqrt();
            let mut ys = vec![0.0];
            for &s in &sigmas {
                ys.push(1.0 - j_function(scale * s)?);
            }
            by_degree.insert(d, ys);
        }
        Ok(Self { ia, by_degree })
    }

    /// A-priori information at every table point, ascending.
    pub fn ia(&self) -> &[f64] {
        &self.ia
    }

    /// Mixture curve of `profile` at every table point.
    pub fn mixture(&self, profile: &CndProfile) -> Result<Vec<f64>, ExitError> {
        let mut out = vec![0.0; self.ia.len()];
        for (d, rho) in profile.edge_fractions() {
            let ys = self
                .by_degree
                .get(&d)
                .ok_or_else(|| ExitError::InvalidProfile(format!("degree {d} not tabulated")))?;
            for (o, y) in out.iter_mut().zip(ys) {
                *o += rho * y;
            }
        }
        Ok(out)
    }

    /// Smallest I_A whose CND output reaches `x` (linear interpolation).
    pub fn inverse(&self, mixture: &[f64], x: f64) -> f64 {
        let hi = mixture.partition_point(|&y| y < x);
        if hi == 0 {
            return self.ia[0];
        }
        if hi >= mixture.len() {
            return 1.0;
        }
        let (y0, y1) = (mixture[hi - 1], mixture[hi]);
        let (a0, a1) = (self.ia[hi - 1], self.ia[hi]);
        if y1 <= y0 {
            return a1;
        }
        a0 + (x - y0) / (y1 - y0) * (a1 - a0)
    }
}

/// Open-tunnel criterion used by [`match_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunnelSpec {
    /// Required vertical gap between the VND curve and the inverted CND curve.
    pub margin: f64,
    /// Upper end of the checked a-priori range.
    pub x_max: f64,
    /// Points on `[0, x_max]` where the gap is checked.
    pub check_points: usize,
    /// Resolution of the tabulated CND curves.
    pub table_points: usize,
    /// Level at which the VND curve counts as converged. A curve read off a
    /// histogram with `B` bins never exceeds `1 - 1/(2B)`.
    pub saturation: f64,
}

impl Default for TunnelSpec {
    fn default() -> Self {
        Self {
            margin: 0.01,
            x_max: 0.999,
            check_points: 1000,
            table_points: 2001,
            saturation: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedProfile {
    pub profile: CndProfile,
    pub avg_check_degree: f64,
    /// Smallest `vnd(x) - cnd⁻¹(x)` over the checked points.
    pub min_gap: f64,
}

/// The tunnel is open when `vnd(x) >= min(saturation, cnd⁻¹(x) + margin)`
/// at every check point. The cap lets a saturated VND curve pass the corner.
/// Also returns the smallest raw gap `vnd(x) - cnd⁻¹(x)`.
fn tunnel_gap(vnd: &Curve, table: &CndTable, mixture: &[f64], spec: &TunnelSpec) -> (bool, f64) {
    let mut open = true;
    let mut min_gap = f64::INFINITY;
    for k in 0..spec.check_points {
        let x = spec.x_max * k as f64 / (spec.check_points - 1).max(1) as f64;
        let cnd_inv = table.inverse(mixture, x);
        let v = vnd.eval(x);
        min_gap = min_gap.min(v - cnd_inv);
        if v < (cnd_inv + spec.margin).min(spec.saturation) {
            open = false;
        }
    }
    (open, min_gap)
}

/// Keep the candidate profiles whose tunnel to `vnd` is open and rank them
/// by descending average check degree. Candidates are raw weights and are
/// normalized first.
pub fn rank_profiles(
    vnd: &Curve,
    candidates: &[Vec<(usize, f64)>],
    spec: &TunnelSpec,
) -> Result<Vec<RankedProfile>, ExitError> {
    if candidates.is_empty() {
        return Err(ExitError::InvalidProfile("no candidate profiles".into()));
    }
    if spec.check_points == 0 {
        return Err(ExitError::InvalidGrid("no tunnel check points".into()));
    }
    if !(spec.saturation > 0.0 && spec.saturation <= 1.0) || !(0.0..=1.0).contains(&spec.x_max) {
        return Err(ExitError::InvalidGrid("saturation and x_max must lie in [0, 1]".into()));
    }
    let profiles = candidates
        .iter()
        .map(|c| CndProfile::new(c))
        .collect::<Result<Vec<_>, _>>()?;
    let mut degrees: Vec<usize> = profiles
        .iter()
        .flat_map(|p| p.node_fractions().iter().map(|&(d, _)| d))
        .collect();
    degrees.sort_unstable();
    degrees.dedup();
    let table = CndTable::new(&degrees, spec.table_points)?;
    let mut out = Vec::new();
    for profile in profiles {
        let mixture = table.mixture(&profile)?;
        let (open, min_gap) = tunnel_gap(vnd, &table, &mixture, spec);
        if open {
            out.push(RankedProfile {
                avg_check_degree: profile.avg_check_degree(),
                profile,
                min_gap,
            });
        }
    }
    out.sort_by(|a, b| {
        b.avg_check_degree
            .total_cmp(&a.avg_check_degree)
            .then(b.min_gap.total_cmp(&a.min_gap))
    });
    Ok(out)
}

/// All node-fraction vectors over `degrees` whose entries are multiples of
/// `step` and sum to one.
pub fn fraction_grid(degrees: &[usize], step: f64) -> Result<Vec<Vec<(usize, f64)>>, ExitError> {
    if degrees.is_empty() {
        return Err(ExitError::InvalidProfile("empty candidate degree set".into()));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(ExitError::InvalidGrid(format!("step {step}")));
    }
    let units = (1.0 / step).round() as usize;
    if ((units as f64) * step - 1.0).abs() > 1e-9 {
        return Err(ExitError::InvalidGrid(format!("step {step} does not divide 1")));
    }
    let mut degrees = degrees.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    let mut out = Vec::new();
    let mut parts = vec![0usize; degrees.len()];
    fn fill(pos: usize, left: usize, parts: &mut [usize], out: &mut Vec<Vec<usize>>) {
        if pos + 1 == parts.len() {
            parts[pos] = left;
            out.push(parts.to_vec());
            return;
        }
        for c in 0..=left {
            parts[pos] = c;
            fill(pos + 1, left - c, parts, out);
        }
    }
    let mut raw = Vec::new();
    fill(0, units, &mut parts, &mut raw);
    for p in raw {
        out.push(
            degrees
                .iter()
                .zip(&p)
                .filter(|(_, &c)| c > 0)
                .map(|(&d, &c)| (d, c as f64 / units as f64))
                .collect(),
        );
    }
    Ok(out)
}

/// Grid search over check profiles built from `degrees`.
pub fn match_profile(
    vnd: &Curve,
    degrees: &[usize],
    step: f64,
    spec: &TunnelSpec,
) -> Result<Vec<RankedProfile>, ExitError> {
    rank_profiles(vnd, &fraction_grid(degrees, step)?, spec)
}
