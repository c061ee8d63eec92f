//! Two-dimensional frequency counts over the EXIT plane.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ExitError;

/// Which component a histogram describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitRole {
    PolarVnd,
    Cnd,
}

/// `bins × bins` counts over `[0, 1]²`, x = a-priori MI, y = extrinsic MI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExitHistogram {
    role: ExitRole,
    bins: usize,
    counts: Vec<u64>,
    total_points: u64,
}

impl ExitHistogram {
    pub fn new(role: ExitRole, bins: usize) -> Result<Self, ExitError> {
        if bins == 0 {
            return Err(ExitError::InvalidBins(bins));
        }
        Ok(Self {
            role,
            bins,
            counts: vec![0; bins * bins],
            total_points: 0,
        })
    }

    pub fn role(&self) -> ExitRole {
        self.role
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn total_points(&self) -> u64 {
        self.total_points
    }

    /// Bin holding `v`; values are clamped to `[0, 1]` and 1 falls in the top bin.
    pub fn bin_of(&self, v: f64) -> usize {
        let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        ((v * self.bins as f64) as usize).min(self.bins - 1)
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        (k as f64 + 0.5) / self.bins as f64
    }

    pub fn add(&mut self, ia: f64, ie: f64) {
        let (x, y) = (self.bin_of(ia), self.bin_of(ie));
        self.counts[x * self.bins + y] += 1;
        self.total_points += 1;
    }

    pub fn count(&self, x_bin: usize, y_bin: usize) -> u64 {
        self.counts[x_bin * self.bins + y_bin]
    }

    /// Counts of one x-bin, indexed by y-bin.
    pub fn column(&self, x_bin: usize) -> &[u64] {
        &self.counts[x_bin * self.bins..(x_bin + 1) * self.bins]
    }

    pub fn merge(&mut self, other: &ExitHistogram) -> Result<(), ExitError> {
        if other.bins != self.bins || other.role != self.role {
            return Err(ExitError::IncompatibleHistograms);
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total_points += other.total_points;
        Ok(())
    }

    pub fn grid_sum(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Sparse CSV: one `x_bin,y_bin,count` row per nonzero cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_bin,y_bin,count\n");
        for x in 0..self.bins {
            for (y, &c) in self.column(x).iter().enumerate() {
                if c > 0 {
                    let _ = writeln!(out, "{x},{y},{c}");
                }
            }
        }
        out
    }

    pub fn from_csv(role: ExitRole, bins: usize, text: &str) -> Result<Self, ExitError> {
        let mut h = Self::new(role, bins)?;
        for (lineno, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parse = |s: &str| s.parse::<u64>().map_err(|_| ExitError::Csv(format!("line {}: {line:?}", lineno + 1)));
            if fields.len() != 3 {
                return Err(ExitError::Csv(format!("line {}: expected 3 fields", lineno + 1)));
            }
            let (x, y, c) = (parse(fields[0])? as usize, parse(fields[1])? as usize, parse(fields[2])?);
            if x >= bins || y >= bins {
                return Err(ExitError::Csv(format!("line {}: bin outside {bins}x{bins}", lineno + 1)));
            }
            h.counts[x * bins + y] += c;
            h.total_points += c;
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_and_conservation() {
        let mut h = ExitHistogram::new(ExitRole::Cnd, 4).unwrap();
        h.add(0.0, 1.0);
        h.add(0.3, 0.3);
        h.add(1.2, -0.5);
        assert_eq!(h.count(0, 3), 1);
        assert_eq!(h.count(1, 1), 1);
        assert_eq!(h.count(3, 0), 1);
        assert_eq!(h.grid_sum(), h.total_points());
        let text = h.to_csv();
        assert_eq!(ExitHistogram::from_csv(ExitRole::Cnd, 4, &text).unwrap(), h);
    }

    #[test]
    fn merge_requires_same_shape() {
        let mut a = ExitHistogram::new(ExitRole::Cnd, 4).unwrap();
        let b = ExitHistogram::new(ExitRole::Cnd, 8).unwrap();
        let c = ExitHistogram::new(ExitRole::PolarVnd, 4).unwrap();
        assert!(a.merge(&b).is_err());
        assert!(a.merge(&c).is_err());
        assert!(ExitHistogram::new(ExitRole::Cnd, 0).is_err());
    }
}
