//! Scalar information-theoretic helpers and Hamming geometry. Logs are base 2.

use statrs::function::factorial::{ln_binomial, ln_factorial};

use crate::error::{Error, Result};

/// `-x log2 x` with `0 log 0 = 0`.
#[inline]
pub fn plogp(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Binary entropy `H(p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability out of range: {p}")));
    }
    Ok(h2(p))
}

/// Unchecked binary entropy for callers that already validated `p`.
#[inline]
pub(crate) fn h2(p: f64) -> f64 {
    plogp(p) + plogp(1.0 - p)
}

/// Entropy of a probability vector. Zero entries contribute nothing.
pub fn entropy(dist: &[f64]) -> f64 {
    dist.iter().map(|&x| plogp(x)).sum()
}

/// Binary KL divergence `D(delta || p)` in bits.
///
/// Returns `+inf` when `p` is 0 or 1 and `delta != p`.
pub fn kl_binary(delta: f64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) || !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "probabilities out of range: delta = {delta}, p = {p}"
        )));
    }
    let term = |a: f64, b: f64| -> f64 {
        if a == 0.0 {
            0.0
        } else if b == 0.0 {
            f64::INFINITY
        } else {
            a * (a / b).log2()
        }
    };
    Ok(term(delta, p) + term(1.0 - delta, 1.0 - p))
}

/// Number of positions at which `a` and `b` differ.
pub fn hamming_distance(a: &[u8], b: &[u8]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// `log2` of the size of a Hamming ball, exact and bounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallLogSize {
    /// `log2 sum_{k <= floor(alpha L)} C(L, k) (q-1)^k`.
    pub exact: f64,
    /// `L * H(alpha)`; only a valid upper bound for `q = 2` and `alpha <= 1/2`.
    pub bound: f64,
    pub radius: usize,
}

pub fn hamming_ball_log_size(l: usize, alpha: f64, q: u32) -> Result<BallLogSize> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!("alpha out of range: {alpha}")));
    }
    if q < 2 {
        return Err(Error::domain("alphabet size must be at least 2"));
    }
    // tolerate alpha * L landing a hair below an integer
    let radius = ((alpha * l as f64) + 1e-9).floor() as usize;
    let radius = radius.min(l);
    let ln_q1 = ((q - 1) as f64).ln();
    let terms: Vec<f64> = (0..=radius)
        .map(|k| ln_binomial(l as u64, k as u64) + k as f64 * ln_q1)
        .collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ln_sum = max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln();
    Ok(BallLogSize {
        exact: ln_sum / std::f64::consts::LN_2,
        bound: l as f64 * h2(alpha),
        radius,
    })
}

/// `log2(n!)`.
pub fn log2_factorial(n: u64) -> f64 {
    ln_factorial(n) / std::f64::consts::LN_2
}
