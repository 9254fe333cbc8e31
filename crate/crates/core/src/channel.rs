//! Channel stages: symmetric substitution noise, a general DMC, the uniform
//! shuffle and i.i.d. sampling with replacement.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::distr::weighted::WeightedIndex;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::entropy;
use crate::params::ChannelParams;
use crate::pool::Pool;

/// Hidden state of one channel use. Never handed to a decoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelTrace {
    /// `shuffle[k]` is the input string that lands at output position `k`.
    pub shuffle: Vec<usize>,
    /// Additive (mod q) error pattern, indexed like the input pool.
    #[serde(skip)]
    pub errors: Option<Pool>,
    /// Output position drawn by each sample, when sampling is active.
    pub sampled_indices: Option<Vec<usize>>,
}

impl ChannelTrace {
    /// Recompute the channel output from the input and the trace.
    pub fn reconstruct(&self, input: &Pool) -> Result<Pool> {
        let errors = self
            .errors
            .as_ref()
            .ok_or_else(|| Error::domain("trace has no additive error pattern"))?;
        let q = input.q();
        let noisy: Vec<u8> = input
            .symbols()
            .iter()
            .zip(errors.symbols())
            .map(|(&x, &z)| ((x as u32 + z as u32) % q) as u8)
            .collect();
        let noisy = Pool::from_raw(noisy, input.string_len(), q);
        let shuffled = noisy.permuted(&self.shuffle);
        Ok(match &self.sampled_indices {
            Some(idx) => shuffled.permuted(idx),
            None => shuffled,
        })
    }
}

/// Replace each symbol with probability `p` by one of the other `q - 1`
/// symbols chosen uniformly. Returns the noisy pool and the additive error
/// pattern `z` with `y = (x + z) mod q`.
pub fn corrupt_symmetric<R: Rng + ?Sized>(pool: &Pool, p: f64, rng: &mut R) -> Result<(Pool, Pool)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("crossover probability out of range: {p}")));
    }
    let q = pool.q();
    let mut noisy = pool.clone();
    let mut errors = Pool::zeros(pool.count(), pool.string_len(), q);
    if p == 0.0 {
        return Ok((noisy, errors));
    }
    let total = pool.symbols().len();
    let flip = |i: usize, rng: &mut R, noisy: &mut Pool, errors: &mut Pool| {
        let z = if q == 2 { 1 } else { rng.random_range(1..q) };
        let x = noisy.symbols()[i] as u32;
        noisy.symbols_mut()[i] = ((x + z) % q) as u8;
        errors.symbols_mut()[i] = z as u8;
    };
    if p == 1.0 {
        for i in 0..total {
            flip(i, rng, &mut noisy, &mut errors);
        }
    } else {
        // geometric gaps between flips; exact for i.i.d. Bernoulli(p)
        let gap = Geometric::new(p).map_err(|e| Error::domain(e.to_string()))?;
        let mut i = 0usize;
        loop {
            let skip = gap.sample(rng);
            i = match usize::try_from(skip).ok().and_then(|s| i.checked_add(s)) {
                Some(next) if next < total => next,
                _ => break,
            };
            flip(i, rng, &mut noisy, &mut errors);
            i += 1;
        }
    }
    Ok((noisy, errors))
}

/// Uniformly random reordering. `perm[k]` is the input index of output `k`.
pub fn shuffle<R: Rng + ?Sized>(pool: &Pool, rng: &mut R) -> (Pool, Vec<usize>) {
    let mut perm: Vec<usize> = (0..pool.count()).collect();
    perm.shuffle(rng);
    (pool.permuted(&perm), perm)
}

/// Draw `round(c * M)` strings uniformly with replacement.
pub fn sample<R: Rng + ?Sized>(pool: &Pool, c: f64, rng: &mut R) -> Result<(Pool, Vec<usize>)> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::domain(format!("coverage must be positive, got {c}")));
    }
    let m = pool.count();
    if m == 0 {
        return Err(Error::domain("cannot sample from an empty pool"));
    }
    let n = (c * m as f64).round() as usize;
    let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..m)).collect();
    Ok((pool.permuted(&idx), idx))
}

/// A discrete memoryless channel given by its row-stochastic transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DmcSpec {
    matrix: Vec<Vec<f64>>,
    symmetric: bool,
}

const STOCHASTIC_TOL: f64 = 1e-12;

impl DmcSpec {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let cols = matrix.first().map(Vec::len).unwrap_or(0);
        if matrix.is_empty() || cols == 0 {
            return Err(Error::domain("transition matrix must be non-empty"));
        }
        if matrix.len() > 256 || cols > 256 {
            return Err(Error::domain("alphabets larger than 256 are not supported"));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::LengthMismatch { left: row.len(), right: cols });
            }
            if row.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                return Err(Error::domain(format!("row {i} has an entry outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::domain(format!("row {i} sums to {sum}, not 1")));
            }
        }
        let symmetric = is_symmetric(&matrix);
        Ok(DmcSpec { matrix, symmetric })
    }

    pub fn binary_symmetric(p: f64) -> Result<Self> {
        Self::q_ary_symmetric(2, p)
    }

    /// Correct with probability `1 - p`, otherwise uniform over the other symbols.
    pub fn q_ary_symmetric(q: usize, p: f64) -> Result<Self> {
        if q < 2 || !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("invalid q-ary symmetric channel q = {q}, p = {p}")));
        }
        let off = p / (q - 1) as f64;
        let matrix = (0..q)
            .map(|i| (0..q).map(|j| if i == j { 1.0 - p } else { off }).collect())
            .collect();
        Self::new(matrix)
    }

    pub fn input_size(&self) -> usize {
        self.matrix.len()
    }

    pub fn output_size(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    /// Rows are permutations of each other and so are columns.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `log2 |Y| - H(row)`, the capacity of a symmetric channel.
    pub fn symmetric_capacity(&self) -> Result<f64> {
        if !self.symmetric {
            return Err(Error::domain("channel is not symmetric"));
        }
        Ok((self.output_size() as f64).log2() - entropy(&self.matrix[0]))
    }
}

fn sorted(v: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = v.collect();
    v.sort_by(f64::total_cmp);
    v
}

fn same_multiset(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= STOCHASTIC_TOL)
}

fn is_symmetric(matrix: &[Vec<f64>]) -> bool {
    let row0 = sorted(matrix[0].iter().cloned());
    let rows_ok = matrix.iter().all(|r| same_multiset(&row0, &sorted(r.iter().cloned())));
    let col = |j: usize| sorted(matrix.iter().map(|r| r[j]));
    let col0 = col(0);
    let cols_ok = (0..matrix[0].len()).all(|j| same_multiset(&col0, &col(j)));
    rows_ok && cols_ok
}

/// Pass every symbol independently through `dmc`.
pub fn corrupt_dmc<R: Rng + ?Sized>(pool: &Pool, dmc: &DmcSpec, rng: &mut R) -> Result<Pool> {
    if pool.q() as usize != dmc.input_size() {
        return Err(Error::domain(format!(
            "pool alphabet {} does not match channel input alphabet {}",
            pool.q(),
            dmc.input_size()
        )));
    }
    let rows = dmc
        .matrix
        .iter()
        .map(WeightedIndex::new)
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::domain(e.to_string()))?;
    let out: Vec<u8> = pool.symbols().iter().map(|&x| rows[x as usize].sample(rng) as u8).collect();
    Pool::from_flat(out, pool.string_len(), dmc.output_size() as u32)
}

/// Noise, shuffle, then optional sampling, as configured by `params`.
pub fn transmit<R: Rng + ?Sized>(pool: &Pool, params: &ChannelParams, rng: &mut R) -> Result<(Pool, ChannelTrace)> {
    let (noisy, errors) = corrupt_symmetric(pool, params.p, rng)?;
    let (shuffled, perm) = shuffle(&noisy, rng);
    let (out, sampled) = match params.c {
        Some(c) => {
            let (out, idx) = sample(&shuffled, c, rng)?;
            (out, Some(idx))
        }
        None => (shuffled, None),
    };
    Ok((out, ChannelTrace { shuffle: perm, errors: Some(errors), sampled_indices: sampled }))
}
