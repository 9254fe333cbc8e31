//! Monte Carlo frame-error simulation and parameter sweeps.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{capacity_noisy_shuffle, capacity_upper_bound};
use crate::channel::transmit;
use crate::codec::{CodeSpec, Codec};
use crate::error::{Error, Result};
use crate::params::ChannelParams;
use crate::rng::{trial_rng, Stream};
use crate::SCHEMA_VERSION;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Serialize)]
pub struct SimReport {
    pub schema_version: u32,
    pub params: ChannelParams,
    pub inner: String,
    pub outer_redundancy: usize,
    pub seed: u64,
    pub trials: usize,
    pub frame_errors: usize,
    pub fer: f64,
    pub fer_lo: f64,
    pub fer_hi: f64,
    pub achieved_rate: f64,
    pub capacity: f64,
    pub capacity_gap: f64,
    /// Seconds. Kept out of serialized output so reports stay reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Run `trials` independent frames: random payload, encode, channel, decode.
///
/// Trial `t` draws its payload and its channel from separate streams
/// derived from `(seed, t)`, so the result does not depend on thread count.
pub fn simulate(params: &ChannelParams, spec: &CodeSpec, trials: usize, seed: u64) -> Result<SimReport> {
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let capacity = capacity_noisy_shuffle(params.p, params.beta)?;
    let codec = Codec::new(spec, params)?;
    let payload_len = codec.layout().payload_len;
    let start = Instant::now();
    let frame_errors = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<usize> {
            let mut payload_rng = trial_rng(seed, t, Stream::Payload);
            let payload: Vec<u8> = (0..payload_len).map(|_| payload_rng.random_range(0..2u8)).collect();
            let sent = codec.encode(&payload)?;
            let mut channel_rng = trial_rng(seed, t, Stream::Channel);
            let (received, _) = transmit(&sent, params, &mut channel_rng)?;
            let report = codec.decode(&received)?;
            Ok(usize::from(!report.frame_ok || report.recovered_payload != payload))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let wall_time = start.elapsed().as_secs_f64();
    let achieved_rate = codec.layout().rate();
    let (fer_lo, fer_hi) = wilson_interval(frame_errors, trials);
    Ok(SimReport {
        schema_version: SCHEMA_VERSION,
        params: *params,
        inner: spec.inner.to_string(),
        outer_redundancy: spec.outer_redundancy,
        seed,
        trials,
        frame_errors,
        fer: frame_errors as f64 / trials as f64,
        fer_lo,
        fer_hi,
        achieved_rate,
        capacity,
        capacity_gap: capacity - achieved_rate,
        wall_time,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    P,
    Beta,
    R,
}

impl std::str::FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(SweepVariable::P),
            "beta" => Ok(SweepVariable::Beta),
            "r" => Ok(SweepVariable::R),
            _ => Err(Error::domain(format!("sweep variable must be p, beta or r, got {s:?}"))),
        }
    }
}

/// Column order of [`sweep_csv`].
pub const SWEEP_COLUMNS: [&str; 16] = [
    "p",
    "beta",
    "m",
    "l",
    "r",
    "inner",
    "capacity",
    "upper_bound",
    "achieved_rate",
    "capacity_gap",
    "trials",
    "frame_errors",
    "fer",
    "fer_lo",
    "fer_hi",
    "feasible",
];

/// One sweep point. Simulation fields are `None` when the code does not
/// fit the parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub beta: f64,
    pub m: usize,
    pub l: usize,
    pub r: usize,
    pub inner: String,
    pub capacity: f64,
    pub upper_bound: f64,
    pub achieved_rate: Option<f64>,
    pub capacity_gap: Option<f64>,
    pub trials: usize,
    pub frame_errors: Option<usize>,
    pub fer: Option<f64>,
    pub fer_lo: Option<f64>,
    pub fer_hi: Option<f64>,
    pub feasible: bool,
}

/// Simulate every point of `values` for one swept variable, keeping the
/// rest of `base` and `spec` fixed. All points share `seed`.
pub fn sweep(
    variable: SweepVariable,
    values: &[f64],
    base: &ChannelParams,
    spec: &CodeSpec,
    trials: usize,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    values
        .iter()
        .map(|&v| {
            let mut spec = spec.clone();
            let params = match variable {
                SweepVariable::P => ChannelParams::with_length(base.m, base.beta, base.l, base.q, v, base.c)?,
                SweepVariable::Beta => ChannelParams::new(base.m, v, base.q, base.p, base.c)?,
                SweepVariable::R => {
                    if !(v >= 0.0 && v.fract() == 0.0) {
                        return Err(Error::domain(format!("r must be a non-negative integer, got {v}")));
                    }
                    spec.outer_redundancy = v as usize;
                    *base
                }
            };
            let capacity = capacity_noisy_shuffle(params.p, params.beta)?;
            let upper_bound = capacity_upper_bound(params.p, params.beta)?;
            let mut row = SweepRow {
                p: params.p,
                beta: params.beta,
                m: params.m,
                l: params.l,
                r: spec.outer_redundancy,
                inner: spec.inner.to_string(),
                capacity,
                upper_bound,
                achieved_rate: None,
                capacity_gap: None,
                trials,
                frame_errors: None,
                fer: None,
                fer_lo: None,
                fer_hi: None,
                feasible: false,
            };
            if spec.layout(&params).is_ok() {
                let rep = simulate(&params, &spec, trials, seed)?;
                row.achieved_rate = Some(rep.achieved_rate);
                row.capacity_gap = Some(rep.capacity_gap);
                row.frame_errors = Some(rep.frame_errors);
                row.fer = Some(rep.fer);
                row.fer_lo = Some(rep.fer_lo);
                row.fer_hi = Some(rep.fer_hi);
                row.feasible = true;
            }
            Ok(row)
        })
        .collect()
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with a `# schema_version` comment line, a header of
/// [`SWEEP_COLUMNS`], and one line per row. Missing values are empty.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("# schema_version={SCHEMA_VERSION}\n{}\n", SWEEP_COLUMNS.join(","));
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.p,
            r.beta,
            r.m,
            r.l,
            r.r,
            r.inner,
            r.capacity,
            r.upper_bound,
            opt(r.achieved_rate),
            opt(r.capacity_gap),
            r.trials,
            opt(r.frame_errors),
            opt(r.fer),
            opt(r.fer_lo),
            opt(r.fer_hi),
            r.feasible
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::InnerCode;
    use crate::rng::seeded;

    #[test]
    fn wilson_reference_values() {
        // 0 of 100: upper end z^2 / (n + z^2)
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!((hi - Z95 * Z95 / (100.0 + Z95 * Z95)).abs() < 1e-15);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.403_831_4).abs() < 1e-6 && (hi - 0.596_168_6).abs() < 1e-6);
    }

    #[test]
    fn wilson_coverage_on_known_rate_stub() {
        // a stub decoder that fails each frame with probability 0.03
        let truth = 0.03;
        let mut rng = seeded(2024);
        let covered = (0..100)
            .filter(|_| {
                let fails = (0..1000).filter(|_| rng.random_bool(truth)).count();
                let (lo, hi) = wilson_interval(fails, 1000);
                lo <= truth && truth <= hi
            })
            .count();
        assert!(covered >= 93, "covered {covered}/100");
    }

    #[test]
    fn noiseless_identity_never_fails() {
        let params = ChannelParams::new(64, 4.0, 2, 0.0, None).unwrap();
        let rep = simulate(&params, &CodeSpec::new(InnerCode::Identity, 0), 200, 1).unwrap();
        assert_eq!(rep.frame_errors, 0);
        assert_eq!(rep.achieved_rate, 1.0 - 6.0 / 24.0);
        assert!(rep.fer_hi < 0.02);
    }

    #[test]
    fn infeasible_spec_is_refused() {
        let params = ChannelParams::new(256, 2.0, 2, 0.01, None).unwrap();
        assert!(simulate(&params, &CodeSpec::new(InnerCode::Repetition(3), 0), 10, 0).is_err());
        assert!(simulate(&params, &CodeSpec::new(InnerCode::Identity, 0), 0, 0).is_err());
    }

    #[test]
    fn report_ignores_thread_count() {
        let params = ChannelParams::new(128, 6.0, 2, 0.01, None).unwrap();
        let spec = CodeSpec::new(InnerCode::ExtendedHamming, 8);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate(&params, &spec, 60, 9).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.frame_errors, b.frame_errors);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn sweep_marks_infeasible_points() {
        let base = ChannelParams::new(256, 4.0, 2, 0.0, None).unwrap();
        let rows = sweep(SweepVariable::R, &[0.0, 300.0], &base, &CodeSpec::new(InnerCode::Identity, 0), 5, 0)
            .unwrap();
        assert!(rows[0].feasible && !rows[1].feasible);
        assert_eq!(rows[1].fer, None);
        let csv = sweep_csv(&rows);
        assert!(csv.lines().nth(1).unwrap().starts_with("p,beta,m,l,r,inner"));
        assert!(csv.lines().nth(3).unwrap().ends_with(",,,,,false"));
        assert!(sweep(SweepVariable::R, &[1.5], &base, &CodeSpec::new(InnerCode::Identity, 0), 5, 0).is_err());
    }
}
