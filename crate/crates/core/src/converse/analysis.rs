use serde::Serialize;
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::info::{h2, kl_binary};

/// Probability that a length-`L` string collects at least `delta * L`
/// substitutions, exact and Chernoff-bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChernoffBound {
    /// `2^(-L D(delta || p))`.
    pub bound: f64,
    /// `Pr(Bin(L, p) >= delta * L)`.
    pub exact: f64,
    /// Smallest error count that triggers the event.
    pub min_errors: usize,
}

/// Requires `p < delta <= 1`. With `p = 0` both values are zero.
pub fn chernoff_error_prob(l: usize, delta: f64, p: f64) -> Result<ChernoffBound> {
    if !(0.0..=1.0).contains(&p) || !(delta > p && delta <= 1.0) {
        return Err(Error::domain(format!("need 0 <= p < delta <= 1, got delta = {delta}, p = {p}")));
    }
    let d = kl_binary(delta, p)?;
    let bound = (-(l as f64) * d).exp2();
    let min_errors = ((delta * l as f64) - 1e-9).ceil().max(0.0) as usize;
    Ok(ChernoffBound { bound, exact: binomial_tail(l, p, min_errors), min_errors })
}

/// `Pr(Bin(n, p) >= k)`.
pub(crate) fn binomial_tail(n: usize, p: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if p == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        return if k <= n { 1.0 } else { 0.0 };
    }
    (k..=n)
        .map(|i| (ln_binomial(n as u64, i as u64) + i as f64 * p.ln() + (n - i) as f64 * (-p).ln_1p()).exp())
        .sum::<f64>()
        .min(1.0)
}

/// `f(x) = x * gamma * log2 M + M log2 x - 2 x log2 x` with
/// `gamma = beta (1 - H(alpha))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FCurve {
    pub m: f64,
    pub gamma: f64,
}

impl FCurve {
    pub fn new(m: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain(format!("alpha out of range: {alpha}")));
        }
        Self::from_gamma(m, beta * (1.0 - h2(alpha)))
    }

    pub fn from_gamma(m: f64, gamma: f64) -> Result<Self> {
        if !(m >= 1.0 && m.is_finite()) {
            return Err(Error::domain(format!("M must be >= 1, got {m}")));
        }
        Ok(FCurve { m, gamma })
    }

    pub fn value(&self, x: f64) -> f64 {
        x * self.gamma * self.m.log2() + self.m * x.log2() - 2.0 * x * x.log2()
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let ln2 = std::f64::consts::LN_2;
        self.gamma * self.m.log2() + self.m / (x * ln2) - 2.0 * x.log2() - 2.0 / ln2
    }

    /// `M^(gamma/2) / 2`; `f` is increasing for every `x` below it.
    pub fn threshold(&self) -> f64 {
        0.5 * self.m.powf(self.gamma / 2.0)
    }

    /// Integer maximizer of `f` on `[1, M]` (smallest on ties).
    pub fn integer_argmax(&self) -> usize {
        let top = self.m.floor() as usize;
        (1..=top)
            .map(|x| (x, self.value(x as f64)))
            .fold((1, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
            .0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerate all 2^L error patterns.
    fn tail_by_enumeration(l: usize, p: f64, k: usize) -> f64 {
        (0u32..1 << l)
            .filter(|z| z.count_ones() as usize >= k)
            .map(|z| {
                let w = z.count_ones() as i32;
                p.powi(w) * (1.0 - p).powi(l as i32 - w)
            })
            .sum()
    }

    #[test]
    fn chernoff_examples() {
        let c = chernoff_error_prob(10, 0.5, 0.1).unwrap();
        assert_eq!(c.min_errors, 5);
        assert!((c.bound - 0.006_046_617_6).abs() < 1e-12);
        assert!((c.exact - 0.001_634_937_4).abs() < 1e-12);
        assert!((c.exact - tail_by_enumeration(10, 0.1, 5)).abs() < 1e-14);
        assert!(c.exact <= c.bound);

        let c = chernoff_error_prob(20, 0.3, 0.1).unwrap();
        assert_eq!(c.min_errors, 6);
        assert!((c.exact - 0.011_253_134_164_509_003).abs() < 1e-13);
        assert!((c.exact - tail_by_enumeration(20, 0.1, 6)).abs() < 1e-12);
        assert!(c.exact <= c.bound);

        let near = chernoff_error_prob(50, 0.1 + 1e-9, 0.1).unwrap();
        assert!(near.bound > 0.999_999);
    }

    #[test]
    fn chernoff_domain() {
        assert!(chernoff_error_prob(10, 0.1, 0.1).is_err());
        assert!(chernoff_error_prob(10, 0.05, 0.1).is_err());
        let zero = chernoff_error_prob(10, 0.2, 0.0).unwrap();
        assert_eq!((zero.bound, zero.exact), (0.0, 0.0));
    }

    #[test]
    fn chernoff_dominates_exact_tail() {
        for l in 1..=24 {
            for pi in 1..10 {
                let p = pi as f64 / 20.0;
                for di in 1..=20 {
                    let delta = di as f64 / 20.0;
                    if delta <= p {
                        continue;
                    }
                    let c = chernoff_error_prob(l, delta, p).unwrap();
                    assert!(c.exact <= c.bound * (1.0 + 1e-12), "L={l} p={p} delta={delta}");
                }
            }
        }
    }

    #[test]
    fn f_at_one_and_derivative() {
        let f = FCurve::new(100.0, 0.1, 8.0).unwrap();
        assert!((f.value(1.0) - f.gamma * 100f64.log2()).abs() < 1e-12);
        for x in [1.0, 2.5, 17.0, 80.0] {
            let h = 1e-5;
            let fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
            assert!((fd - f.derivative(x)).abs() < 1e-5, "x = {x}");
        }
    }

    #[test]
    fn gamma_three_increasing_on_range() {
        let f = FCurve::from_gamma(100.0, 3.0).unwrap();
        assert!((f.threshold() - 500.0).abs() < 1e-9);
        let mut x = 1.0;
        while x <= 100.0 {
            let h = 1e-4;
            assert!((f.value(x + h) - f.value(x - h)) / (2.0 * h) > 0.0, "x = {x}");
            x += 0.25;
        }
    }

    #[test]
    fn argmax_is_m_when_gamma_large_enough() {
        for m in [10.0, 100.0, 1000.0] {
            for gamma in [3.0, 4.0] {
                assert_eq!(FCurve::from_gamma(m, gamma).unwrap().integer_argmax(), m as usize);
            }
        }
        // gamma barely above 2 needs a larger M before the maximum reaches M
        assert!(FCurve::from_gamma(10.0, 2.05).unwrap().integer_argmax() < 10);
    }
}
