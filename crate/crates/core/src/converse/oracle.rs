//! Exhaustive evaluation of entropies for tiny codebooks.
//!
//! A codeword `x` is drawn uniformly, the channel picks a uniform shuffle
//! `s` and an i.i.d. Bernoulli(p) error pattern `z`, and `y_k = x_{s(k)} ^
//! z_{s(k)}`. For each output `y` the oracle walks every codeword and every
//! permutation; the error pattern is then determined, so every joint
//! outcome is visited exactly once.
//!
//! Strings are packed into integers: symbol `t` of string `j` is bit
//! `j * L + t`.

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::analysis::chernoff_error_prob;
use super::cluster::{max_compatible_set, separation_threshold};
use crate::error::{Error, Result};
use crate::info::{h2, log2_factorial, plogp};
use crate::pool::Pool;
use crate::rng::{trial_rng, Stream};
use crate::SCHEMA_VERSION;

/// Maximum `|C| * M! * 2^(ML)` the oracle will walk.
pub const ENUMERATION_LIMIT: u128 = 1 << 24;
/// Slack below which a bound counts as violated.
pub const SLACK_TOLERANCE: f64 = 1e-9;

const MAX_M: usize = 4;
const MAX_L: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct TinyInstance {
    m: usize,
    l: usize,
    p: f64,
    codebook: Vec<u32>,
}

impl TinyInstance {
    /// Codebook given as pools of `M` binary strings of length `L`.
    pub fn new(p: f64, codebook: &[Pool]) -> Result<Self> {
        let first = codebook.first().ok_or_else(|| Error::domain("codebook is empty"))?;
        let (m, l) = (first.count(), first.string_len());
        let mut packed = Vec::with_capacity(codebook.len());
        for cw in codebook {
            if cw.count() != m || cw.string_len() != l {
                return Err(Error::LengthMismatch { left: cw.count() * cw.string_len(), right: m * l });
            }
            if cw.q() != 2 {
                return Err(Error::domain("oracle instances are binary"));
            }
            packed.push(pack(cw));
        }
        Self::from_packed(m, l, p, packed)
    }

    pub fn from_packed(m: usize, l: usize, p: f64, codebook: Vec<u32>) -> Result<Self> {
        if !(2..=MAX_M).contains(&m) || !(1..=MAX_L).contains(&l) {
            return Err(Error::domain(format!(
                "tiny instances need 2 <= M <= {MAX_M} and 1 <= L <= {MAX_L}, got M = {m}, L = {l}"
            )));
        }
        if !(0.0..=0.5).contains(&p) {
            return Err(Error::domain(format!("p must lie in [0, 0.5], got {p}")));
        }
        if codebook.is_empty() {
            return Err(Error::domain("codebook is empty"));
        }
        let bits = m * l;
        if codebook.iter().any(|&c| c >> bits != 0) {
            return Err(Error::domain("codeword wider than M * L bits"));
        }
        let mut sorted = codebook.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != codebook.len() {
            return Err(Error::domain("codewords must be distinct"));
        }
        let inst = TinyInstance { m, l, p, codebook };
        let estimate = inst.enumeration_size();
        if estimate > ENUMERATION_LIMIT {
            return Err(Error::TooLarge { estimate, limit: ENUMERATION_LIMIT });
        }
        Ok(inst)
    }

    /// `size` distinct codewords drawn uniformly from `{0,1}^(ML)`.
    pub fn random<R: Rng + ?Sized>(m: usize, l: usize, p: f64, size: usize, rng: &mut R) -> Result<Self> {
        let space = 1usize << (m * l).min(30);
        if size == 0 || size > space {
            return Err(Error::domain(format!("codebook size must be in [1, {space}], got {size}")));
        }
        let codebook = sample(rng, space, size).into_iter().map(|c| c as u32).collect();
        Self::from_packed(m, l, p, codebook)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn codebook_size(&self) -> usize {
        self.codebook.len()
    }

    pub fn codeword(&self, c: usize) -> Pool {
        unpack(self.codebook[c], self.m, self.l)
    }

    /// `|C| * M! * 2^(ML)`.
    pub fn enumeration_size(&self) -> u128 {
        let fact: u128 = (1..=self.m as u128).product();
        self.codebook.len() as u128 * fact * (1u128 << (self.m * self.l))
    }
}

fn pack(pool: &Pool) -> u32 {
    let l = pool.string_len();
    pool.strings()
        .enumerate()
        .flat_map(|(j, s)| s.iter().enumerate().map(move |(t, &b)| (b as u32) << (j * l + t)))
        .fold(0, |a, b| a | b)
}

fn unpack(word: u32, m: usize, l: usize) -> Pool {
    let data = (0..m * l).map(|i| (word >> i & 1) as u8).collect();
    Pool::from_raw(data, l, 2)
}

/// Entropies (bits) that do not depend on the clustering radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEntropies {
    pub h_x: f64,
    pub h_y: f64,
    pub h_y_given_x: f64,
    pub h_x_given_y: f64,
    pub mutual_information: f64,
    pub h_s_given_xy: f64,
    /// `sum_i H(S(i) | X, Y)`, an upper bound on `H(S | X, Y)`.
    pub sum_marginal_shuffle_entropy: f64,
    /// Enumerated `H(S, Z, Y | X)`.
    pub h_szy_given_x: f64,
    /// `log2 M! + M L H(p)`.
    pub h_szy_closed_form: f64,
    /// `H(X | Y) / (ML)`, the finite-size rate loss.
    pub fano_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub m: usize,
    pub l: usize,
    pub p: f64,
    pub alpha: f64,
    pub delta: f64,
    pub codebook_size: usize,
    #[serde(flatten)]
    pub entropies: OracleEntropies,
    /// `E|T|`.
    pub e_t: f64,
    /// `E[|T| log2 |T|]`.
    pub e_t_log_t: f64,
    /// `sum_i Pr(E_i)`, enumerated.
    pub chernoff_sum: f64,
    /// `M 2^(-L D(delta || p))`.
    pub chernoff_bound_sum: f64,
    /// `M + L E|T| + (M - E|T|)(log E|T| + L H(alpha))`.
    pub b1_rhs: f64,
    /// `M + E[L|T| + (M - |T|)(log |T| + L H(alpha))]`.
    pub b1_rhs_pre_jensen: f64,
    /// `M + log M sum_i Pr(E_i) + M log M - E[|T| log |T|]`.
    pub b2_rhs: f64,
    /// `M + M log M (1 + 2^(-L D)) - E|T| log E|T|`.
    pub b2_rhs_jensen: f64,
    pub slack_b1: f64,
    pub slack_b1_pre_jensen: f64,
    pub slack_b2: f64,
    pub slack_b2_jensen: f64,
    /// Probability mass of outcomes with `i` in `T`, fewer than `delta L`
    /// errors on `y_i`, and `S(i)` outside `A_i`. Zero when the separation
    /// argument holds.
    pub a_set_violation_mass: f64,
    pub passed: bool,
}

impl BoundReport {
    pub fn min_slack(&self) -> f64 {
        [self.slack_b1, self.slack_b1_pre_jensen, self.slack_b2, self.slack_b2_jensen]
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Accum {
    h_y: f64,
    h_y_given_x: f64,
    h_xy: f64,
    h_s_given_xy: f64,
    h_szy: f64,
    sum_marg: f64,
    e_t: f64,
    e_t_log_t: f64,
    b1_pre: f64,
    chernoff: f64,
    violation: f64,
}

impl Accum {
    fn add(mut self, o: &Accum) -> Accum {
        self.h_y += o.h_y;
        self.h_y_given_x += o.h_y_given_x;
        self.h_xy += o.h_xy;
        self.h_s_given_xy += o.h_s_given_xy;
        self.h_szy += o.h_szy;
        self.sum_marg += o.sum_marg;
        self.e_t += o.e_t;
        self.e_t_log_t += o.e_t_log_t;
        self.b1_pre += o.b1_pre;
        self.chernoff += o.chernoff;
        self.violation += o.violation;
        self
    }
}

#[derive(Debug, Clone, Copy)]
struct Separation {
    /// `ceil(alpha L)`.
    cluster_threshold: usize,
    /// Errors at or above this count trigger `E_i`.
    event_threshold: usize,
    /// `L H(alpha)`.
    ball_bits: f64,
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

const CHUNK: usize = 256;

fn enumerate(inst: &TinyInstance, sep: Option<Separation>) -> Accum {
    let (m, l, p) = (inst.m, inst.l, inst.p);
    let bits = m * l;
    let mask = (1u32 << l) - 1;
    let perms = permutations(m);
    let p_s = 1.0 / perms.len() as f64;
    let p_x = 1.0 / inst.codebook.len() as f64;
    let p_z: Vec<f64> = (0..=bits as i32).map(|w| p.powi(w) * (1.0 - p).powi(bits as i32 - w)).collect();
    let n_y = 1usize << bits;

    let per_y = |y: u32| -> Accum {
        let mut acc = Accum::default();
        let ys: Vec<u32> = (0..m).map(|k| y >> (k * l) & mask).collect();
        let cluster = sep.map(|sep| {
            let compat: Vec<u32> = (0..m)
                .map(|i| {
                    (0..m)
                        .filter(|&j| j != i && (ys[i] ^ ys[j]).count_ones() as usize >= sep.cluster_threshold)
                        .fold(0u32, |a, j| a | 1 << j)
                })
                .collect();
            max_compatible_set(&compat)
        });
        let mut p_y = 0.0;
        let mut weights = vec![0.0; perms.len()];
        let mut marg = vec![0.0; m * m];
        for &x in &inst.codebook {
            let xs: Vec<u32> = (0..m).map(|j| x >> (j * l) & mask).collect();
            for (w, s) in weights.iter_mut().zip(&perms) {
                let unshuffled = s.iter().enumerate().fold(0u32, |a, (k, &src)| a | ys[k] << (src * l));
                *w = p_s * p_z[(x ^ unshuffled).count_ones() as usize];
            }
            let p_yx: f64 = weights.iter().sum();
            if p_yx == 0.0 {
                continue;
            }
            let sum_wlogw: f64 = weights.iter().map(|&w| plogp(w)).sum();
            acc.h_szy += p_x * sum_wlogw;
            acc.h_s_given_xy += p_x * (sum_wlogw - plogp(p_yx));
            acc.h_y_given_x += p_x * plogp(p_yx);
            acc.h_xy += plogp(p_x * p_yx);
            p_y += p_x * p_yx;

            marg.iter_mut().for_each(|v| *v = 0.0);
            for (w, s) in weights.iter().zip(&perms) {
                for (i, &src) in s.iter().enumerate() {
                    marg[i * m + src] += w;
                }
            }
            acc.sum_marg += p_x * marg.chunks(m).map(|row| row.iter().map(|&v| plogp(v)).sum::<f64>() - plogp(p_yx)).sum::<f64>();

            if let (Some(sep), Some(t)) = (sep, cluster) {
                // nearest in-cluster output for every input string
                let nearest: Vec<usize> = xs
                    .iter()
                    .map(|&xj| {
                        (0..m)
                            .filter(|&i| t >> i & 1 == 1)
                            .min_by_key(|&i| ((xj ^ ys[i]).count_ones(), i))
                            .expect("cluster never empty")
                    })
                    .collect();
                for (&w, s) in weights.iter().zip(&perms) {
                    if w == 0.0 {
                        continue;
                    }
                    let mut events = 0usize;
                    for (i, &src) in s.iter().enumerate() {
                        let errs = (xs[src] ^ ys[i]).count_ones() as usize;
                        if errs >= sep.event_threshold {
                            events += 1;
                        } else if t >> i & 1 == 1 && nearest[src] != i {
                            acc.violation += p_x * w;
                        }
                    }
                    acc.chernoff += p_x * w * events as f64;
                }
            }
        }
        acc.h_y += plogp(p_y);
        if let (Some(sep), Some(t)) = (sep, cluster) {
            let size = t.count_ones() as f64;
            acc.e_t += p_y * size;
            acc.e_t_log_t += p_y * size * size.log2();
            acc.b1_pre += p_y * (l as f64 * size + (m as f64 - size) * (size.log2() + sep.ball_bits));
        }
        acc
    };

    let chunks: Vec<Accum> = (0..n_y.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            (c * CHUNK..((c + 1) * CHUNK).min(n_y)).fold(Accum::default(), |a, y| a.add(&per_y(y as u32)))
        })
        .collect();
    chunks.iter().fold(Accum::default(), |a, c| a.add(c))
}

fn entropies_from(inst: &TinyInstance, acc: &Accum) -> OracleEntropies {
    let (m, l) = (inst.m, inst.l);
    let h_x = (inst.codebook.len() as f64).log2();
    let h_x_given_y = acc.h_xy - acc.h_y;
    OracleEntropies {
        h_x,
        h_y: acc.h_y,
        h_y_given_x: acc.h_y_given_x,
        h_x_given_y,
        mutual_information: acc.h_y - acc.h_y_given_x,
        h_s_given_xy: acc.h_s_given_xy,
        sum_marginal_shuffle_entropy: acc.sum_marg,
        h_szy_given_x: acc.h_szy,
        h_szy_closed_form: log2_factorial(m as u64) + (m * l) as f64 * h2(inst.p),
        fano_eps: h_x_given_y / (m * l) as f64,
    }
}

/// Exact entropies of the instance by exhaustive enumeration.
pub fn oracle_entropies(inst: &TinyInstance) -> OracleEntropies {
    entropies_from(inst, &enumerate(inst, None))
}

/// Evaluate both sides of the finite-`M` entropy bounds on `H(Y)` and `H(S | X, Y)`.
///
/// Requires `2p < alpha <= 1/2` and `p < delta <= alpha / 2`.
pub fn check_bounds(inst: &TinyInstance, alpha: f64, delta: f64) -> Result<BoundReport> {
    let (m, l, p) = (inst.m, inst.l, inst.p);
    if !(2.0 * p < alpha && alpha <= 0.5) {
        return Err(Error::domain(format!("need 2p < alpha <= 1/2, got p = {p}, alpha = {alpha}")));
    }
    if !(p < delta && delta <= alpha / 2.0 + 1e-15) {
        return Err(Error::domain(format!("need p < delta <= alpha/2, got delta = {delta}")));
    }
    let chernoff = chernoff_error_prob(l, delta, p)?;
    let sep = Separation {
        cluster_threshold: separation_threshold(alpha, l),
        event_threshold: chernoff.min_errors,
        ball_bits: l as f64 * h2(alpha),
    };
    let acc = enumerate(inst, Some(sep));
    let entropies = entropies_from(inst, &acc);

    let mf = m as f64;
    let lf = l as f64;
    let log_m = mf.log2();
    let e_t = acc.e_t;
    let b1_rhs = mf + lf * e_t + (mf - e_t) * (e_t.log2() + sep.ball_bits);
    let b1_rhs_pre_jensen = mf + acc.b1_pre;
    let b2_rhs = mf + log_m * acc.chernoff + mf * log_m - acc.e_t_log_t;
    let chernoff_bound_sum = mf * chernoff.bound;
    let b2_rhs_jensen = mf + mf * log_m * (1.0 + chernoff.bound) - e_t * e_t.log2();

    let slack_b1 = b1_rhs - entropies.h_y;
    let slack_b1_pre_jensen = b1_rhs_pre_jensen - entropies.h_y;
    let slack_b2 = b2_rhs - entropies.h_s_given_xy;
    let slack_b2_jensen = b2_rhs_jensen - entropies.h_s_given_xy;
    let chain_ok = (entropies.h_szy_given_x - entropies.h_szy_closed_form).abs() <= SLACK_TOLERANCE;
    let passed = [slack_b1, slack_b1_pre_jensen, slack_b2, slack_b2_jensen]
        .iter()
        .all(|&s| s >= -SLACK_TOLERANCE)
        && acc.violation <= SLACK_TOLERANCE
        && chain_ok;
    Ok(BoundReport {
        m,
        l,
        p,
        alpha,
        delta,
        codebook_size: inst.codebook.len(),
        entropies,
        e_t,
        e_t_log_t: acc.e_t_log_t,
        chernoff_sum: acc.chernoff,
        chernoff_bound_sum,
        b1_rhs,
        b1_rhs_pre_jensen,
        b2_rhs,
        b2_rhs_jensen,
        slack_b1,
        slack_b1_pre_jensen,
        slack_b2,
        slack_b2_jensen,
        a_set_violation_mass: acc.violation,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub m: usize,
    pub l: usize,
    pub p: f64,
    pub alpha: f64,
    /// Defaults to `alpha / 2`.
    pub delta: Option<f64>,
    pub codebooks: usize,
    /// Fixed codebook size; random in `[1, min(8, 2^(ML))]` when absent.
    pub codewords: Option<usize>,
    pub seed: u64,
    /// Margin (bits) every slack must reach; `0.0` checks the bounds as stated.
    pub min_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub config: VerifyConfig,
    pub instances: usize,
    pub failures: usize,
    pub min_slack_b1: f64,
    pub min_slack_b2: f64,
    pub max_chain_identity_error: f64,
    pub passed: bool,
    pub reports: Vec<BoundReport>,
}

/// Check the bounds on `codebooks` random instances derived from `seed`.
pub fn verify_bounds(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.codebooks == 0 {
        return Err(Error::domain("need at least one codebook"));
    }
    let delta = cfg.delta.unwrap_or(cfg.alpha / 2.0);
    let space = 1usize << (cfg.m * cfg.l).min(30);
    let reports = (0..cfg.codebooks)
        .map(|i| {
            let mut rng = trial_rng(cfg.seed, i as u64, Stream::Codebook);
            let size = cfg.codewords.unwrap_or_else(|| rng.random_range(1..=space.min(8)));
            let inst = TinyInstance::random(cfg.m, cfg.l, cfg.p, size, &mut rng)?;
            check_bounds(&inst, cfg.alpha, delta)
        })
        .collect::<Result<Vec<_>>>()?;
    let failures =
        reports.iter().filter(|r| !r.passed || r.min_slack() < cfg.min_slack - SLACK_TOLERANCE).count();
    let min_slack_b1 =
        reports.iter().map(|r| r.slack_b1.min(r.slack_b1_pre_jensen)).fold(f64::INFINITY, f64::min);
    let min_slack_b2 =
        reports.iter().map(|r| r.slack_b2.min(r.slack_b2_jensen)).fold(f64::INFINITY, f64::min);
    let max_chain_identity_error = reports
        .iter()
        .map(|r| (r.entropies.h_szy_given_x - r.entropies.h_szy_closed_form).abs())
        .fold(0.0, f64::max);
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        config: *cfg,
        instances: reports.len(),
        failures,
        min_slack_b1,
        min_slack_b2,
        max_chain_identity_error,
        passed: failures == 0,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn chain_identity_m2_l2() {
        let inst = TinyInstance::random(2, 2, 0.1, 3, &mut seeded(1)).unwrap();
        let e = oracle_entropies(&inst);
        assert!(close(e.h_szy_given_x, 2.875_982_374_357_125, 1e-9));
        assert!(close(e.h_szy_closed_form, 2.875_982_374_357_125, 1e-12));
    }

    #[test]
    fn noiseless_shuffle_extremes() {
        // all strings distinct: the shuffle is identifiable
        let distinct = TinyInstance::from_packed(3, 2, 0.0, vec![0b10_01_00, 0b01_11_10]).unwrap();
        assert!(oracle_entropies(&distinct).h_s_given_xy.abs() < 1e-12);
        // all strings identical: nothing is learned about the shuffle
        let same = TinyInstance::from_packed(3, 2, 0.0, vec![0b01_01_01, 0b11_11_11]).unwrap();
        assert!(close(oracle_entropies(&same).h_s_given_xy, 6f64.log2(), 1e-12));
    }

    #[test]
    fn data_processing_and_fano_chain() {
        let mut rng = seeded(3);
        for _ in 0..5 {
            let inst = TinyInstance::random(3, 3, 0.05, 4, &mut rng).unwrap();
            let e = oracle_entropies(&inst);
            assert!(e.mutual_information <= 9.0 * (1.0 - h2(0.05)) + 1e-9);
            assert!(close(e.h_x, e.mutual_information + e.h_x_given_y, 1e-9));
            // H(Y|X) = H(S,Z,Y|X) - H(S|X,Y)
            assert!(close(e.h_y_given_x, e.h_szy_given_x - e.h_s_given_xy, 1e-9));
            assert!(e.h_s_given_xy <= e.sum_marginal_shuffle_entropy + 1e-9);
            assert!(e.mutual_information <= e.h_x + 1e-9);
        }
    }

    #[test]
    fn chernoff_sum_matches_binomial_tail() {
        let inst = TinyInstance::random(3, 4, 0.1, 3, &mut seeded(9)).unwrap();
        let r = check_bounds(&inst, 0.5, 0.25).unwrap();
        let tail = chernoff_error_prob(4, 0.25, 0.1).unwrap().exact;
        assert!(close(r.chernoff_sum, 3.0 * tail, 1e-12));
        assert!(r.chernoff_sum <= r.chernoff_bound_sum);
    }

    #[test]
    fn bounds_hold_on_small_example() {
        let inst = TinyInstance::random(2, 4, 0.05, 2, &mut seeded(17)).unwrap();
        let r = check_bounds(&inst, 0.5, 0.25).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.slack_b1 >= 0.0 && r.slack_b2 >= 0.0);
        assert!(r.slack_b1 <= r.slack_b1_pre_jensen + 1e-12 || r.b1_rhs >= r.b1_rhs_pre_jensen - 1e-12);
        assert_eq!(r.a_set_violation_mass, 0.0);
    }

    #[test]
    fn degenerate_identical_strings() {
        // every codeword has M identical strings; p = 0 keeps outputs identical
        let inst = TinyInstance::from_packed(3, 3, 0.0, vec![0b000_000_000, 0b101_101_101]).unwrap();
        let r = check_bounds(&inst, 0.4, 0.2).unwrap();
        assert!(close(r.e_t, 1.0, 1e-12));
        let expect = 3.0 + 3.0 + 2.0 * 3.0 * h2(0.4);
        assert!(close(r.b1_rhs, expect, 1e-12));
        assert!(r.passed);
    }

    #[test]
    fn separated_codewords_low_noise() {
        // strings pairwise far apart, tiny p: shuffle nearly identifiable
        let inst = TinyInstance::from_packed(2, 5, 1e-6, vec![0b11111_00000]).unwrap();
        let r = check_bounds(&inst, 0.5, 0.25).unwrap();
        assert!(r.entropies.h_s_given_xy < 1e-3);
        assert!(close(r.e_t, 2.0, 1e-4));
        assert!(r.slack_b2 >= 2.0 * 2f64.log2() - r.e_t_log_t - 1e-9);
    }

    #[test]
    fn preconditions_and_size_limits() {
        let inst = TinyInstance::random(2, 3, 0.2, 2, &mut seeded(0)).unwrap();
        assert!(check_bounds(&inst, 0.3, 0.15).is_err()); // 2p >= alpha
        assert!(check_bounds(&inst, 0.6, 0.3).is_err());
        assert!(check_bounds(&inst, 0.5, 0.3).is_err()); // delta > alpha/2
        assert!(TinyInstance::from_packed(5, 2, 0.1, vec![0]).is_err());
        assert!(TinyInstance::from_packed(2, 6, 0.1, vec![0]).is_err());
        assert!(TinyInstance::from_packed(2, 2, 0.1, vec![1, 1]).is_err());
        assert!(TinyInstance::from_packed(2, 2, 0.1, vec![16]).is_err());
        let big: Vec<u32> = (0..20).collect();
        assert!(matches!(TinyInstance::from_packed(4, 5, 0.1, big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn pool_packing_round_trip() {
        let inst = TinyInstance::random(3, 4, 0.1, 5, &mut seeded(2)).unwrap();
        let pools: Vec<Pool> = (0..5).map(|c| inst.codeword(c)).collect();
        assert_eq!(TinyInstance::new(0.1, &pools).unwrap(), inst);
    }

    #[test]
    fn verify_is_deterministic() {
        let cfg = VerifyConfig { m: 2, l: 3, p: 0.05, alpha: 0.34, delta: None, codebooks: 5, codewords: None, seed: 7, min_slack: 0.0 };
        let a = verify_bounds(&cfg).unwrap();
        let b = verify_bounds(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.passed);
        let strict = verify_bounds(&VerifyConfig { min_slack: 1e3, ..cfg }).unwrap();
        assert!(!strict.passed);
        assert_eq!(strict.failures, 5);
    }
}
