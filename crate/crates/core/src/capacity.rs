//! Capacity formulas for the noisy shuffling channel and the `(p, beta)`
//! region map.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::DmcSpec;
use crate::error::{Error, Result};
use crate::info::h2;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=0.5).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("p must lie in [0, 0.5], got {p}")))
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("beta must be positive, got {beta}")))
    }
}

/// `max(0, 1 - H(p) - 1/beta)`, and zero whenever `beta <= 1`.
pub fn capacity_noisy_shuffle(p: f64, beta: f64) -> Result<f64> {
    check_p(p)?;
    check_beta(beta)?;
    if beta <= 1.0 {
        return Ok(0.0);
    }
    Ok((1.0 - h2(p) - 1.0 / beta).max(0.0))
}

/// `min(1 - H(p), 1 - 1/beta)`, floored at zero.
pub fn capacity_upper_bound(p: f64, beta: f64) -> Result<f64> {
    check_p(p)?;
    check_beta(beta)?;
    Ok((1.0 - h2(p)).min(1.0 - 1.0 / beta).max(0.0))
}

/// Noiseless shuffling with sampling at coverage `c`: `(1 - e^-c)(1 - 1/beta)`.
///
/// `c = +inf` is accepted and gives the full-coverage limit.
pub fn capacity_sampled_shuffle(c: f64, beta: f64) -> Result<f64> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::domain(format!("coverage must be positive, got {c}")));
    }
    check_beta(beta)?;
    if beta <= 1.0 {
        return Ok(0.0);
    }
    Ok((1.0 - (-c).exp()) * (1.0 - 1.0 / beta))
}

/// `C_SDMC - 1/beta` for a symmetric DMC; zero when `beta <= log2 |Y|`.
pub fn capacity_sdmc_shuffle(dmc: &DmcSpec, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let c = dmc.symmetric_capacity()?;
    if beta <= (dmc.output_size() as f64).log2() {
        return Ok(0.0);
    }
    Ok((c - 1.0 / beta).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Region {
    /// Capacity known and equal to `1 - H(p) - 1/beta`.
    Achieved,
    /// Capacity not characterized.
    Unknown,
    /// Capacity is zero (`beta <= 1`).
    Zero,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::Achieved => "ACHIEVED",
            Region::Unknown => "UNKNOWN",
            Region::Zero => "ZERO",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionClass {
    pub region: Region,
    /// `1 - H(2p) - 2/beta`, or `beta - 1` in the zero region.
    pub margin: f64,
    /// Whether `p <= 0.1 && beta >= 6.4`.
    pub in_proven_range: bool,
}

impl RegionClass {
    /// The rectangle and the margin condition disagree.
    pub fn rectangle_disagrees(&self) -> bool {
        self.in_proven_range && self.region != Region::Achieved
    }
}

/// `1 - H(2p) - 2/beta`. Only meaningful for `2p < 1/2`.
pub fn converse_margin(p: f64, beta: f64) -> f64 {
    1.0 - h2(2.0 * p) - 2.0 / beta
}

pub fn classify_region(p: f64, beta: f64) -> Result<RegionClass> {
    check_p(p)?;
    check_beta(beta)?;
    let in_proven_range = p <= 0.1 && beta >= 6.4;
    if beta <= 1.0 {
        return Ok(RegionClass { region: Region::Zero, margin: beta - 1.0, in_proven_range });
    }
    let margin = converse_margin(p, beta);
    // the separation radius alpha must satisfy 2p < alpha <= 1/2
    let region = if 2.0 * p < 0.5 && margin > 0.0 { Region::Achieved } else { Region::Unknown };
    Ok(RegionClass { region, margin, in_proven_range })
}

/// `beta*(p) = 2 / (1 - H(2p))`, the smallest beta with a positive margin.
/// Infinite once `2p >= 1/2`.
pub fn boundary_beta(p: f64) -> Result<f64> {
    check_p(p)?;
    if 2.0 * p >= 0.5 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 / (1.0 - h2(2.0 * p)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub p: f64,
    pub beta: f64,
    pub region: Region,
    pub margin: f64,
    pub boundary_beta: f64,
}

/// Axis specification for [`region_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxes {
    pub p_min: f64,
    pub p_max: f64,
    pub p_steps: usize,
    pub beta_min: f64,
    pub beta_max: f64,
    pub beta_steps: usize,
}

/// Log-uniform `p` samples.
pub fn log_space(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let (a, b) = (min.ln(), max.ln());
    (0..steps)
        .map(|i| {
            if i == steps - 1 {
                max
            } else {
                (a + (b - a) * i as f64 / (steps - 1) as f64).exp()
            }
        })
        .collect()
}

pub fn lin_space(min: f64, max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    (0..steps)
        .map(|i| if i == steps - 1 { max } else { min + (max - min) * i as f64 / (steps - 1) as f64 })
        .collect()
}

/// Region classification on a `beta`-major grid: `p` log-uniform, `beta` uniform.
pub fn region_grid(axes: &GridAxes) -> Result<Vec<GridPoint>> {
    let GridAxes { p_min, p_max, p_steps, beta_min, beta_max, beta_steps } = *axes;
    if !(p_min > 0.0 && p_min <= p_max && p_max <= 0.5) {
        return Err(Error::domain(format!("need 0 < p_min <= p_max <= 0.5, got [{p_min}, {p_max}]")));
    }
    if !(beta_min > 0.0 && beta_min <= beta_max && beta_max.is_finite()) {
        return Err(Error::domain(format!("need 0 < beta_min <= beta_max, got [{beta_min}, {beta_max}]")));
    }
    if p_steps == 0 || beta_steps == 0 {
        return Err(Error::domain("grid needs at least one step per axis"));
    }
    let ps = log_space(p_min, p_max, p_steps);
    let mut out = Vec::with_capacity(p_steps * beta_steps);
    for beta in lin_space(beta_min, beta_max, beta_steps) {
        for &p in &ps {
            let class = classify_region(p, beta)?;
            out.push(GridPoint {
                p,
                beta,
                region: class.region,
                margin: class.margin,
                boundary_beta: boundary_beta(p)?,
            });
        }
    }
    Ok(out)
}
