use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use shufflecap::capacity::{
    boundary_beta, capacity_noisy_shuffle, capacity_sampled_shuffle, capacity_sdmc_shuffle,
    capacity_upper_bound, classify_region, region_grid, GridAxes,
};
use shufflecap::channel::transmit;
use shufflecap::codec::{bits_to_bytes, bytes_to_bits, Codec};
use shufflecap::converse::{check_bounds, oracle_entropies, verify_bounds, VerifyConfig};
use shufflecap::harness::{simulate, sweep, sweep_csv, SweepVariable};
use shufflecap::rng::{trial_rng, Stream};
use shufflecap::{ChannelParams, CodeSpec, DmcSpec, InnerCode, Pool, TinyInstance, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "shufflecap", version, about = "Noisy shuffling channel toolkit")]
struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity, converse bound and region of one operating point.
    Capacity {
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long)]
        beta: f64,
        /// Sampling coverage (noiseless sampled channel).
        #[arg(long)]
        c: Option<f64>,
        /// Alphabet size.
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Region classification over a (p, beta) grid.
    RegionGrid {
        #[arg(long, default_value_t = 1e-4)]
        p_min: f64,
        #[arg(long, default_value_t = 0.5)]
        p_max: f64,
        #[arg(long, default_value_t = 200)]
        p_steps: usize,
        #[arg(long, default_value_t = 0.5)]
        beta_min: f64,
        #[arg(long, default_value_t = 10.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 200)]
        beta_steps: usize,
    },
    /// Encode a payload file into a pool of strings.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Payload bytes, bits taken most significant first.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Decode a received pool back into payload bytes.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Received pool.
        #[arg(long = "in")]
        input: PathBuf,
        /// Where to write the decode report (JSON).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Pass a pool through noise, shuffle and optional sampling.
    Channel {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Monte Carlo frame error rate of one code.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Simulate a range of p, beta or r values.
    Sweep {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, value_parser = ["p", "beta", "r"])]
        variable: String,
        /// Comma-separated values of the swept variable.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Check the finite-M converse bounds on random tiny codebooks.
    VerifyBounds {
        #[command(flatten)]
        tiny: TinyArgs,
        #[arg(long)]
        alpha: f64,
        /// Defaults to alpha / 2.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 200)]
        codebooks: usize,
        /// Count an instance as failing when any slack is below this many bits.
        #[arg(long, default_value_t = 0.0)]
        min_slack: f64,
    },
    /// Exact entropies of one tiny codebook.
    Oracle {
        #[command(flatten)]
        tiny: TinyArgs,
        /// Codeword files in pool format. A random codebook is drawn when absent.
        #[arg(long = "codeword")]
        codewords_in: Vec<PathBuf>,
        /// Also check the bounds at this alpha.
        #[arg(long)]
        alpha: Option<f64>,
    },
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 0.0)]
    p: f64,
    #[arg(long)]
    c: Option<f64>,
    /// identity, rep<n>, ext-hamming or table:<n>,<k>.
    #[arg(long, default_value = "identity")]
    inner: String,
    /// Outer parity strings.
    #[arg(long, default_value_t = 0)]
    redundancy: usize,
}

impl CodeArgs {
    fn params(&self) -> Result<ChannelParams> {
        Ok(ChannelParams::new(self.m, self.beta, 2, self.p, self.c)?)
    }

    fn spec(&self) -> Result<CodeSpec> {
        Ok(CodeSpec::new(self.inner.parse::<InnerCode>()?, self.redundancy))
    }
}

#[derive(Args)]
struct TinyArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    l: usize,
    #[arg(long)]
    p: f64,
    /// Codebook size; random per instance when absent.
    #[arg(long)]
    codewords: Option<usize>,
}

enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Header plus one line per flat JSON object.
fn to_csv(rows: &[Value]) -> Result<String> {
    let Some(Value::Object(first)) = rows.first() else {
        return Ok(String::new());
    };
    let keys: Vec<&String> = first.keys().filter(|k| !first[*k].is_object() && !first[*k].is_array()).collect();
    let mut out = format!("# schema_version={SCHEMA_VERSION}\n");
    out += &keys.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = keys.iter().map(|k| csv_field(&row[k.as_str()])).collect();
        out += &line.join(",");
        out.push('\n');
    }
    Ok(out)
}

fn emit_single<T: Serialize>(cli: &Cli, value: &T) -> Result<()> {
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => to_json(value)?,
        Format::Csv => to_csv(&[serde_json::to_value(value)?])?,
    };
    write_out(cli.out.as_deref(), text.as_bytes())
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Capacity { p, beta, c, q } => {
            let value = capacity_query(*p, *beta, *c, *q)?;
            emit_single(cli, &value)?;
        }
        Command::RegionGrid { p_min, p_max, p_steps, beta_min, beta_max, beta_steps } => {
            let axes = GridAxes {
                p_min: *p_min,
                p_max: *p_max,
                p_steps: *p_steps,
                beta_min: *beta_min,
                beta_max: *beta_max,
                beta_steps: *beta_steps,
            };
            let grid = region_grid(&axes)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Json => to_json(&json!({ "schema_version": SCHEMA_VERSION, "points": grid }))?,
                Format::Csv => {
                    let mut out = format!("# schema_version={SCHEMA_VERSION}\np,beta,region,margin,boundary_beta\n");
                    for g in &grid {
                        out += &format!("{},{},{},{},{}\n", g.p, g.beta, g.region, g.margin, g.boundary_beta);
                    }
                    out
                }
            };
            write_out(cli.out.as_deref(), text.as_bytes())?;
        }
        Command::Encode { code, input } => {
            let params = code.params()?;
            let codec = Codec::new(&code.spec()?, &params)?;
            let bytes = fs::read(input).with_context(|| format!("reading {}", input.display()))?;
            let need = codec.layout().payload_len;
            if bytes.len() != need.div_ceil(8) {
                bail!("payload file has {} bytes, code carries {need} bits ({} bytes)", bytes.len(), need.div_ceil(8));
            }
            let mut bits = bytes_to_bits(&bytes);
            if bits[need..].iter().any(|&b| b != 0) {
                bail!("the last {} bits of the payload file are padding and must be zero", bits.len() - need);
            }
            bits.truncate(need);
            let pool = codec.encode(&bits)?;
            write_out(cli.out.as_deref(), pool.to_text()?.as_bytes())?;
        }
        Command::Decode { code, input, report } => {
            let params = code.params()?;
            let codec = Codec::new(&code.spec()?, &params)?;
            let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let rep = codec.decode(&Pool::from_text(&text)?)?;
            write_out(cli.out.as_deref(), &bits_to_bytes(&rep.recovered_payload))?;
            let summary = to_json(&rep)?;
            match report {
                Some(path) => fs::write(path, summary)?,
                None => eprint!("{summary}"),
            }
            if !rep.frame_ok {
                eprintln!("error: frame could not be recovered");
                return Ok(Outcome::Failed);
            }
        }
        Command::Channel { input, p, c } => {
            let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
            let pool = Pool::from_text(&text)?;
            let m = pool.count();
            if m < 2 {
                bail!("pool needs at least two strings");
            }
            let beta = pool.string_len() as f64 / (m as f64).log2();
            let params = ChannelParams::with_length(m, beta, pool.string_len(), pool.q(), *p, *c)?;
            let mut rng = trial_rng(cli.seed, 0, Stream::Channel);
            let (received, _) = transmit(&pool, &params, &mut rng)?;
            write_out(cli.out.as_deref(), received.to_text()?.as_bytes())?;
        }
        Command::Simulate { code, trials } => {
            let rep = simulate(&code.params()?, &code.spec()?, *trials, cli.seed)?;
            eprintln!("wall_time: {:.3} s", rep.wall_time);
            emit_single(cli, &rep)?;
        }
        Command::Sweep { code, trials, variable, values } => {
            let variable: SweepVariable = variable.parse()?;
            let rows = sweep(variable, values, &code.params()?, &code.spec()?, *trials, cli.seed)?;
            let text = match cli.format.unwrap_or(Format::Csv) {
                Format::Json => to_json(&json!({ "schema_version": SCHEMA_VERSION, "rows": rows }))?,
                Format::Csv => sweep_csv(&rows),
            };
            write_out(cli.out.as_deref(), text.as_bytes())?;
        }
        Command::VerifyBounds { tiny, alpha, delta, codebooks, min_slack } => {
            let cfg = VerifyConfig {
                m: tiny.m,
                l: tiny.l,
                p: tiny.p,
                alpha: *alpha,
                delta: *delta,
                codebooks: *codebooks,
                codewords: tiny.codewords,
                seed: cli.seed,
                min_slack: *min_slack,
            };
            let rep = verify_bounds(&cfg)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&rep)?,
                Format::Csv => {
                    let rows = rep.reports.iter().map(serde_json::to_value).collect::<serde_json::Result<Vec<_>>>()?;
                    to_csv(&rows)?
                }
            };
            write_out(cli.out.as_deref(), text.as_bytes())?;
            if !rep.passed {
                eprintln!("error: {} of {} instances violate a bound", rep.failures, rep.instances);
                return Ok(Outcome::Failed);
            }
        }
        Command::Oracle { tiny, codewords_in, alpha } => {
            let inst = if codewords_in.is_empty() {
                let mut rng = trial_rng(cli.seed, 0, Stream::Codebook);
                let size = tiny.codewords.unwrap_or(2);
                TinyInstance::random(tiny.m, tiny.l, tiny.p, size, &mut rng)?
            } else {
                let pools = codewords_in
                    .iter()
                    .map(|path| -> Result<Pool> { Ok(Pool::from_text(&fs::read_to_string(path)?)?) })
                    .collect::<Result<Vec<_>>>()?;
                let inst = TinyInstance::new(tiny.p, &pools)?;
                if inst.m() != tiny.m || inst.l() != tiny.l {
                    bail!("codeword files are {}x{}, expected {}x{}", inst.m(), inst.l(), tiny.m, tiny.l);
                }
                inst
            };
            match alpha {
                Some(alpha) => {
                    let rep = check_bounds(&inst, *alpha, alpha / 2.0)?;
                    emit_single(cli, &rep)?;
                    if !rep.passed {
                        return Ok(Outcome::Failed);
                    }
                }
                None => {
                    let e = oracle_entropies(&inst);
                    let value = json!({
                        "schema_version": SCHEMA_VERSION,
                        "m": inst.m(),
                        "l": inst.l(),
                        "p": inst.p(),
                        "codebook_size": inst.codebook_size(),
                        "entropies": e,
                    });
                    let value = match cli.format.unwrap_or(Format::Json) {
                        Format::Json => value,
                        Format::Csv => flatten(value),
                    };
                    emit_single(cli, &value)?;
                }
            }
        }
    }
    Ok(Outcome::Ok)
}

fn flatten(value: Value) -> Value {
    let mut out = serde_json::Map::new();
    if let Value::Object(map) = value {
        for (k, v) in map {
            match v {
                Value::Object(inner) => out.extend(inner),
                other => {
                    out.insert(k, other);
                }
            }
        }
    }
    Value::Object(out)
}

fn capacity_query(p: f64, beta: f64, c: Option<f64>, q: u32) -> Result<Value> {
    if q < 2 {
        bail!("alphabet size must be at least 2");
    }
    if let Some(c) = c {
        if p != 0.0 || q != 2 {
            bail!("the sampled channel is only available for binary noiseless strings (p = 0, q = 2)");
        }
        let capacity = capacity_sampled_shuffle(c, beta)?;
        return Ok(json!({
            "schema_version": SCHEMA_VERSION,
            "p": p,
            "beta": beta,
            "q": q,
            "c": c,
            "capacity": capacity,
            "upper_bound": capacity,
            "region": null,
            "margin": null,
        }));
    }
    if q > 2 {
        let capacity = capacity_sdmc_shuffle(&DmcSpec::q_ary_symmetric(q as usize, p)?, beta)?;
        return Ok(json!({
            "schema_version": SCHEMA_VERSION,
            "p": p,
            "beta": beta,
            "q": q,
            "c": null,
            "capacity": capacity,
            "upper_bound": capacity,
            "region": null,
            "margin": null,
        }));
    }
    let class = classify_region(p, beta)?;
    Ok(json!({
        "schema_version": SCHEMA_VERSION,
        "p": p,
        "beta": beta,
        "q": q,
        "c": null,
        "capacity": capacity_noisy_shuffle(p, beta)?,
        "upper_bound": capacity_upper_bound(p, beta)?,
        "region": class.region,
        "margin": class.margin,
        "boundary_beta": boundary_beta(p)?,
        "in_proven_range": class.in_proven_range,
    }))
}
