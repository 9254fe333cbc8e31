//! Systematic Reed-Solomon code over GF(2^w) with an errors-and-erasures
//! decoder. Any `e` erasures and `t` errors with `e + 2t <= n - k` are
//! corrected.
//!
//! A codeword is the coefficient vector `c_0..c_{n-1}` of a polynomial that is
//! divisible by `g(x) = prod_{j<r} (x - alpha^j)`. Coefficients `0..r` hold
//! parity and `r..n` hold the data symbols.

use std::sync::Arc;

use super::gf::Gf;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ReedSolomon {
    gf: Arc<Gf>,
    n: usize,
    k: usize,
    generator: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsFailure {
    /// More erasures than parity symbols.
    TooManyErasures,
    /// The error locator does not describe a correctable pattern.
    Uncorrectable,
}

impl ReedSolomon {
    pub fn new(gf: Arc<Gf>, n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n || n > gf.order() {
            return Err(Error::domain(format!(
                "invalid RS({n}, {k}) over GF(2^{})",
                gf.width()
            )));
        }
        let r = n - k;
        let mut generator = vec![1u32];
        for j in 0..r {
            generator = gf.poly_mul(&generator, &[gf.alpha_pow(j as i64), 1]);
        }
        Ok(ReedSolomon { gf, n, k, generator })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn field(&self) -> &Gf {
        &self.gf
    }

    /// Systematic encoding: returns `n` symbols with `data` at positions `r..n`.
    pub fn encode(&self, data: &[u32]) -> Vec<u32> {
        assert_eq!(data.len(), self.k, "RS data length");
        let r = self.redundancy();
        let mut cw = vec![0u32; self.n];
        cw[r..].copy_from_slice(data);
        if r == 0 {
            return cw;
        }
        // remainder of x^r d(x) by monic g, high degree first
        let mut rem = cw.clone();
        for i in (r..self.n).rev() {
            let coef = rem[i];
            if coef == 0 {
                continue;
            }
            for (j, &g) in self.generator.iter().enumerate() {
                rem[i - r + j] ^= self.gf.mul(coef, g);
            }
        }
        cw[..r].copy_from_slice(&rem[..r]);
        cw
    }

    pub fn syndromes(&self, word: &[u32]) -> Vec<u32> {
        (0..self.redundancy())
            .map(|j| self.gf.eval(word, self.gf.alpha_pow(j as i64)))
            .collect()
    }

    /// Correct `word` in place. `erasures` lists positions whose content is
    /// unknown. On success returns the positions (erased or not) whose value
    /// changed.
    pub fn decode(&self, word: &mut [u32], erasures: &[usize]) -> std::result::Result<Vec<usize>, RsFailure> {
        assert_eq!(word.len(), self.n, "RS word length");
        let gf = &*self.gf;
        let r = self.redundancy();
        let e = erasures.len();
        if e > r {
            return Err(RsFailure::TooManyErasures);
        }
        for &pos in erasures {
            word[pos] = 0;
        }
        let synd = self.syndromes(word);
        if synd.iter().all(|&s| s == 0) {
            return Ok(Vec::new());
        }

        let mut erasure_loc = vec![1u32];
        for &pos in erasures {
            erasure_loc = gf.poly_mul(&erasure_loc, &[1, gf.alpha_pow(pos as i64)]);
        }
        let mut modified = gf.poly_mul(&erasure_loc, &synd);
        modified.truncate(r);
        let error_loc = berlekamp_massey(gf, &modified[e..]);
        let nu = error_loc.len() - 1;
        if 2 * nu > r - e {
            return Err(RsFailure::Uncorrectable);
        }

        let mut error_pos = Vec::with_capacity(nu);
        if nu > 0 {
            for pos in 0..self.n {
                if gf.eval(&error_loc, gf.alpha_pow(-(pos as i64))) == 0 {
                    error_pos.push(pos);
                    if error_pos.len() == nu {
                        break;
                    }
                }
            }
            if error_pos.len() != nu {
                return Err(RsFailure::Uncorrectable);
            }
        }

        let locator = gf.poly_mul(&error_loc, &erasure_loc);
        let mut evaluator = gf.poly_mul(&synd, &locator);
        evaluator.truncate(r);
        // formal derivative in characteristic 2 keeps the odd terms
        let derivative: Vec<u32> = locator
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
            .collect();

        let mut changed = Vec::new();
        for &pos in erasures.iter().chain(error_pos.iter()) {
            let x = gf.alpha_pow(pos as i64);
            let x_inv = gf.inv(x);
            let denom = gf.eval(&derivative, x_inv);
            if denom == 0 {
                return Err(RsFailure::Uncorrectable);
            }
            let mag = gf.mul(x, gf.div(gf.eval(&evaluator, x_inv), denom));
            if mag != 0 {
                word[pos] ^= mag;
                changed.push(pos);
            }
        }
        if self.syndromes(word).iter().any(|&s| s != 0) {
            return Err(RsFailure::Uncorrectable);
        }
        changed.sort_unstable();
        Ok(changed)
    }
}

/// Shortest LFSR (connection polynomial, lowest degree first, constant 1)
/// generating `s`.
fn berlekamp_massey(gf: &Gf, s: &[u32]) -> Vec<u32> {
    let mut c = vec![1u32];
    let mut b = vec![1u32];
    let mut len = 0usize;
    let mut shift = 1usize;
    let mut last = 1u32;
    for n in 0..s.len() {
        let mut d = s[n];
        for i in 1..=len.min(c.len() - 1) {
            d ^= gf.mul(c[i], s[n - i]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = gf.div(d, last);
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            next[i + shift] ^= gf.mul(coef, bi);
        }
        if 2 * len <= n {
            len = n + 1 - len;
            b = c;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
        c = next;
    }
    c.truncate(len + 1);
    c.resize(len + 1, 0);
    c
}
