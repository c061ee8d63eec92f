//! Mutual information of LLR messages and the J-function.

use std::f64::consts::{LN_2, PI};

use super::ExitError;

/// Half-width, in standard deviations, of the integration window.
const WINDOW: f64 = 12.0;
const QUAD_TOL: f64 = 1e-11;
const MAX_DEPTH: u32 = 40;
/// `J(SIGMA_MAX)` is within `1e-15` of one.
pub const SIGMA_MAX: f64 = 200.0;

/// `log2(1 + e^{-z})`, stable for any sign of `z`.
#[inline]
pub fn log2_one_plus_exp_neg(z: f64) -> f64 {
    let nat = if z > 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    };
    nat / LN_2
}

/// Time-average MI estimate `1 - mean(log2(1 + e^{-L̃}))` where `L̃` is the
/// LLR with its sign flipped for transmitted ones. Clamped to `[0, 1]`.
pub fn empirical_mi(llrs: &[f64], bits: &[u8]) -> Result<f64, ExitError> {
    if llrs.is_empty() {
        return Err(ExitError::EmptyInput);
    }
    if llrs.len() != bits.len() {
        return Err(ExitError::LengthMismatch {
            llrs: llrs.len(),
            bits: bits.len(),
        });
    }
    let loss: f64 = llrs
        .iter()
        .zip(bits)
        .map(|(&l, &b)| log2_one_plus_exp_neg(if b & 1 == 0 { l } else { -l }))
        .sum();
    Ok((1.0 - loss / llrs.len() as f64).clamp(0.0, 1.0))
}

/// Mutual information between a bit and a consistent Gaussian LLR
/// `N(σ²/2, σ²)`.
pub fn j_function(sigma: f64) -> Result<f64, ExitError> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(ExitError::InvalidSigma(sigma));
    }
    Ok(j_unchecked(sigma))
}

fn j_unchecked(sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    let mean = sigma * sigma / 2.0;
    let norm = 1.0 / (2.0 * PI).sqrt();
    let f = |t: f64| norm * (-t * t / 2.0).exp() * log2_one_plus_exp_neg(mean + sigma * t);
    // The integrand peaks near t = -sigma/2 with height about exp(-sigma^2/8);
    // split there and scale the tolerance so small losses keep their digits.
    let tol = QUAD_TOL * (-mean / 4.0).exp().max(1e-6);
    let kink = (-sigma / 2.0).clamp(-WINDOW, WINDOW);
    let loss = adaptive_simpson(&f, -WINDOW, kink, tol) + adaptive_simpson(&f, kink, WINDOW, tol);
    (1.0 - loss).clamp(0.0, 1.0)
}

/// Inverse of [`j_function`] by bisection, to better than `1e-9` in σ.
pub fn j_inverse(mi: f64) -> Result<f64, ExitError> {
    if !(0.0..1.0).contains(&mi) {
        return Err(ExitError::InvalidMi(mi));
    }
    if mi == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while j_unchecked(hi) < mi {
        lo = hi;
        hi *= 2.0;
        if hi > SIGMA_MAX {
            return Ok(SIGMA_MAX);
        }
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if j_unchecked(mid) < mi {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}
