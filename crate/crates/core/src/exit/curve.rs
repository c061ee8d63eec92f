//! Piecewise-linear transfer curves and their extraction from histograms.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::histogram::ExitHistogram;
use super::ExitError;

/// Default minimum column population for [`extract_vnd_estimate`].
pub const DEFAULT_MIN_COUNT: u64 = 20;

/// Linear interpolation between knots, flat beyond the end knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Curve {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, ExitError> {
        if points.is_empty() {
            return Err(ExitError::EmptyInput);
        }
        let mut points = points;
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(ExitError::Csv("duplicate x value in curve".into()));
        }
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(ExitError::Csv("non-finite curve point".into()));
        }
        let (xs, ys) = points.into_iter().unzip();
        Ok(Self { xs, ys })
    }

    pub fn constant(y: f64) -> Self {
        Self {
            xs: vec![0.0],
            ys: vec![y],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let hi = self.xs.partition_point(|&k| k <= x);
        let lo = hi - 1;
        let t = (x - self.xs[lo]) / (self.xs[hi] - self.xs[lo]);
        self.ys[lo] + t * (self.ys[hi] - self.ys[lo])
    }

    /// Two-column CSV with an `x,y` header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for (x, y) in self.points() {
            let _ = writeln!(out, "{x},{y}");
        }
        out
    }

    /// Parse two-column CSV; a non-numeric first line is taken as a header.
    pub fn from_csv(text: &str) -> Result<Self, ExitError> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split(',').map(str::trim);
            let (Some(a), Some(b)) = (it.next(), it.next()) else {
                return Err(ExitError::Csv(format!("line {}: expected two columns", lineno + 1)));
            };
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(y)) => points.push((x, y)),
                _ if lineno == 0 => continue,
                _ => return Err(ExitError::Csv(format!("line {}: not numeric", lineno + 1))),
            }
        }
        Self::new(points)
    }
}

/// Per-column statistic used to trace a histogram ridge.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RidgeEstimator {
    /// Center of the most populated y-bin (lowest bin on ties).
    #[default]
    Mode,
    /// Count-weighted mean of y-bin centers.
    Mean,
    /// Center of the y-bin holding the given quantile of the column, `q` in
    /// `(0, 1]`. Upper quantiles follow the settled output of the polar
    /// decoder instead of its start-up transient.
    Quantile(f64),
}

/// Ridge of a histogram: one knot per x-bin holding at least `min_count`
/// points, placed at the bin center.
pub fn extract_vnd_estimate(
    hist: &ExitHistogram,
    estimator: RidgeEstimator,
    min_count: u64,
) -> Result<Curve, ExitError> {
    if let RidgeEstimator::Quantile(q) = estimator {
        if !(q > 0.0 && q <= 1.0) {
            return Err(ExitError::InvalidGrid(format!("quantile {q} outside (0, 1]")));
        }
    }
    let mut points = Vec::new();
    for x in 0..hist.bins() {
        let col = hist.column(x);
        let total: u64 = col.iter().sum();
        if total == 0 || total < min_count {
            continue;
        }
        let y = match estimator {
            RidgeEstimator::Mode => {
                let mut best = 0;
                for (k, &c) in col.iter().enumerate() {
                    if c > col[best] {
                        best = k;
                    }
                }
                hist.bin_center(best)
            }
            RidgeEstimator::Mean => {
                col.iter()
                    .enumerate()
                    .map(|(k, &c)| hist.bin_center(k) * c as f64)
                    .sum::<f64>()
                    / total as f64
            }
            RidgeEstimator::Quantile(q) => {
                let target = ((q * total as f64).ceil() as u64).max(1);
                let mut acc = 0;
                let k = col
                    .iter()
                    .position(|&c| {
                        acc += c;
                        acc >= target
                    })
                    .unwrap_or(col.len() - 1);
                hist.bin_center(k)
            }
        };
        points.push((hist.bin_center(x), y));
    }
    if points.is_empty() {
        return Err(ExitError::SparseHistogram { min_count });
    }
    Curve::new(points)
}
