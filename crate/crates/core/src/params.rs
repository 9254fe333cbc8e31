use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of a noisy shuffling channel instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Number of strings `M`.
    pub m: usize,
    pub beta: f64,
    /// String length in symbols, `round(beta * log2 M)` (half-up).
    pub l: usize,
    /// Alphabet size.
    pub q: u32,
    /// Total substitution probability per symbol.
    pub p: f64,
    /// Sampling coverage `c`; `None` disables the sampling stage.
    pub c: Option<f64>,
}

impl ChannelParams {
    pub fn new(m: usize, beta: f64, q: u32, p: f64, c: Option<f64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain(format!("M must be at least 2, got {m}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::domain(format!("beta must be positive, got {beta}")));
        }
        let l = string_length(m, beta);
        if l < 1 {
            return Err(Error::domain(format!(
                "beta * log2 M rounds to zero (beta = {beta}, M = {m})"
            )));
        }
        Self::with_length(m, beta, l, q, p, c)
    }

    /// Build parameters with an explicit string length (bypasses the `beta` rounding).
    pub fn with_length(
        m: usize,
        beta: f64,
        l: usize,
        q: u32,
        p: f64,
        c: Option<f64>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::domain(format!("M must be at least 2, got {m}")));
        }
        if l < 1 {
            return Err(Error::domain("L must be at least 1"));
        }
        if !(2..=256).contains(&q) {
            return Err(Error::domain(format!("alphabet size must be in [2, 256], got {q}")));
        }
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::domain(format!("p must be in [0, 0.5], got {p}")));
        }
        if let Some(c) = c {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::domain(format!("coverage must be positive, got {c}")));
            }
        }
        Ok(ChannelParams { m, beta, l, q, p, c })
    }

    /// Bits needed to give every string a distinct index, `ceil(log2 M)`.
    pub fn index_bits(&self) -> usize {
        index_bits(self.m)
    }
}

/// `round(beta * log2 m)` with halves rounded up.
pub fn string_length(m: usize, beta: f64) -> usize {
    let raw = beta * (m as f64).log2();
    (raw + 0.5).floor().max(0.0) as usize
}

pub fn index_bits(m: usize) -> usize {
    if m <= 1 {
        0
    } else {
        (usize::BITS - (m - 1).leading_zeros()) as usize
    }
}
