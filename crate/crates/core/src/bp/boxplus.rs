//! Check-node combining rules in the LLR domain.

use serde::{Deserialize, Serialize};

/// Which `g(·,·)` to use at check nodes and processing elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateRule {
    /// `ln((1 + e^(a+b)) / (e^a + e^b))`.
    #[default]
    BoxPlus,
    /// `sign(a)·sign(b)·min(|a|, |b|)`.
    MinSum,
}

impl UpdateRule {
    #[inline]
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            UpdateRule::BoxPlus => boxplus_exact(a, b),
            UpdateRule::MinSum => boxplus_minsum(a, b),
        }
    }
}

/// `ln(1 + e^{-x})` for `x >= 0`.
#[inline]
fn softplus_neg(x: f64) -> f64 {
    if x > 40.0 {
        0.0
    } else {
        (-x).exp().ln_1p()
    }
}

#[inline]
fn sign_product(a: f64, b: f64) -> f64 {
    if (a < 0.0) != (b < 0.0) {
        -1.0
    } else {
        1.0
    }
}

/// Exact box-plus, evaluated as min-sum plus two bounded corrections.
#[inline]
pub fn boxplus_exact(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    let v = sign_product(a, b) * m + softplus_neg((a + b).abs()) - softplus_neg((a - b).abs());
    v.clamp(-m, m)
}

#[inline]
pub fn boxplus_minsum(a: f64, b: f64) -> f64 {
    sign_product(a, b) * a.abs().min(b.abs())
}

/// Processing element update. `l_in` are the L-messages at the right-hand
/// nodes, `r_in` the R-messages at the left-hand nodes. Returns
/// `(l_out1, l_out2, r_out1, r_out2)`: L-messages for the left nodes and
/// R-messages for the right nodes, each clipped to `±clip`.
#[inline]
pub fn pe_update(
    l_in1: f64,
    l_in2: f64,
    r_in1: f64,
    r_in2: f64,
    rule: UpdateRule,
    clip: f64,
) -> (f64, f64, f64, f64) {
    let g = |a, b| rule.apply(a, b);
    let shared = g(r_in1, l_in1);
    (
        g(l_in1, l_in2 + r_in2).clamp(-clip, clip),
        (shared + l_in2).clamp(-clip, clip),
        g(r_in1, l_in2 + r_in2).clamp(-clip, clip),
        (shared + r_in2).clamp(-clip, clip),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boxplus_examples() {
        assert_eq!(boxplus_exact(0.0, 5.0), 0.0);
        let want = ((1.0 + 2f64.exp()) / (2.0 * 1f64.exp())).ln();
        assert!((boxplus_exact(1.0, 1.0) - want).abs() < 1e-15);
        assert!((boxplus_exact(1.0, 1.0) - 0.43379).abs() < 1e-5);
        assert!((boxplus_exact(30.0, 2.5) - 2.5).abs() < 1e-10);
    }

    #[test]
    fn minsum_examples() {
        assert_eq!(boxplus_minsum(2.0, -3.0), -2.0);
        assert_eq!(boxplus_minsum(0.0, 7.0), 0.0);
        assert_eq!(boxplus_minsum(1.0, 1.0), 1.0);
        assert!(boxplus_minsum(1.0, 1.0) >= boxplus_exact(1.0, 1.0));
    }

    #[test]
    fn pe_examples() {
        for rule in [UpdateRule::BoxPlus, UpdateRule::MinSum] {
            assert_eq!(pe_update(0.0, 0.0, 0.0, 0.0, rule, 30.0), (0.0, 0.0, 0.0, 0.0));
            assert_eq!(pe_update(30.0, 0.0, 0.0, 0.0, rule, 30.0), (0.0, 0.0, 0.0, 0.0));
        }
        assert_eq!(
            pe_update(2.0, 1.0, 3.0, 0.0, UpdateRule::MinSum, 30.0),
            (1.0, 3.0, 1.0, 2.0)
        );
    }

    #[test]
    fn pe_outputs_are_clipped() {
        let (a, b, c, d) = pe_update(25.0, 25.0, 25.0, 25.0, UpdateRule::BoxPlus, 30.0);
        for v in [a, b, c, d] {
            assert!(v.abs() <= 30.0);
        }
        assert_eq!(b, 30.0);
    }
}
