use std::collections::HashSet;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;

use clap::Args;
use pellcf_core::analysis::{height_series, pell_from_transcript, PellVerdict};
use pellcf_core::{expand, parse_rational, Poly, Rational, FORMAT_VERSION};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{emit, io_err, CliError, RunConfig, ENGINE};
use crate::{Format, InputArgs, OutputArgs};

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Radicand template with the parameter written as L, e.g. "t^6 + t + L".
    #[arg(long, allow_hyphen_values = true)]
    family: String,
    /// Parameter values: "a..b" (step 1), "a..b:s", or "v1,v2,..."; empty for none.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    /// Last record index N per instance.
    #[arg(long, short = 'n', default_value_t = crate::config::DEFAULT_STEPS)]
    steps: usize,
    /// Append-only JSON-lines store. Defaults to sweep.jsonl in the cache
    /// directory, else in the working directory.
    #[arg(long)]
    store: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "PELLCF_THREADS")]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

/// The values described by a grid string, in order.
pub fn parse_grid(grid: &str) -> Result<Vec<Rational>, CliError> {
    let grid = grid.trim();
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((lo, rest)) = grid.split_once("..") {
        let (hi, step) = match rest.split_once(':') {
            Some((hi, step)) => (hi, parse_rational(step)?),
            None => (rest, Rational::from(1)),
        };
        let (lo, hi) = (parse_rational(lo)?, parse_rational(hi)?);
        if step <= 0 {
            return Err(CliError::Usage(format!("grid step must be positive, got {step}")));
        }
        let mut out = Vec::new();
        let mut v = lo;
        while v <= hi {
            out.push(v.clone());
            v += &step;
        }
        return Ok(out);
    }
    grid.split(',').map(|s| Ok(parse_rational(s)?)).collect()
}

pub fn instantiate(family: &str, value: &Rational) -> String {
    family.replace('L', &format!("({value})"))
}

#[derive(Clone, Debug, Serialize)]
struct Instance {
    family: String,
    lambda: String,
    poly: String,
    steps: usize,
}

impl Instance {
    fn hash(&self) -> String {
        let key = serde_json::to_string(&(FORMAT_VERSION, ENGINE, self)).expect("serializable");
        hex::encode(Sha256::digest(key.as_bytes()))
    }
}

#[derive(Serialize)]
struct InstanceResult {
    radicand: Vec<String>,
    degrees: Vec<usize>,
    pell: PellVerdict,
    pell_witness: Option<usize>,
    pell_solution: Option<(Poly, Poly)>,
    /// `(n, h(q_2n) / h(q_n))`, six decimals.
    height_ratios: Vec<(usize, String)>,
}

fn run_instance(inst: &Instance) -> Result<InstanceResult, pellcf_core::Error> {
    let d = Poly::parse(&inst.poly)?;
    let tr = expand(&d, inst.steps)?;
    let pell = pell_from_transcript(&tr)?;
    let heights = height_series(&tr)?;
    Ok(InstanceResult {
        radicand: d.to_strings(),
        degrees: tr.degrees(),
        pell: pell.verdict,
        pell_witness: pell.witness_index,
        pell_solution: pell.solution,
        height_ratios: heights.doubling.iter().map(|(n, r)| (*n, format!("{r:.6}"))).collect(),
    })
}

fn record(inst: &Instance, hash: &str) -> Value {
    let mut rec = json!({
        "format_version": FORMAT_VERSION,
        "engine": ENGINE,
        "config_hash": hash,
        "config": inst,
    });
    match run_instance(inst) {
        Ok(r) => rec["result"] = serde_json::to_value(r).expect("serializable"),
        Err(e) => rec["error"] = json!({ "kind": e.kind(), "message": e.to_string() }),
    }
    rec
}

fn completed_hashes(path: &PathBuf) -> Result<HashSet<String>, CliError> {
    let mut done = HashSet::new();
    if !path.exists() {
        return Ok(done);
    }
    let f = fs::File::open(path).map_err(io_err(path))?;
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line).map_err(|e| {
            CliError::Core(pellcf_core::Error::Transcript(format!("{}:{}: {e}", path.display(), i + 1)))
        })?;
        if let Some(h) = v.get("config_hash").and_then(Value::as_str) {
            done.insert(h.to_string());
        }
    }
    Ok(done)
}

#[derive(Serialize)]
struct SweepSummary {
    store: PathBuf,
    instances: usize,
    skipped: usize,
    appended: usize,
    errors: usize,
    pellian: Vec<String>,
}

pub fn run(args: SweepArgs) -> Result<(), CliError> {
    let threads = args
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let store = match (&args.store, &args.output.cache_dir) {
        (Some(p), _) => p.clone(),
        (None, Some(dir)) => dir.join("sweep.jsonl"),
        (None, None) => PathBuf::from("sweep.jsonl"),
    };
    let input = InputArgs {
        steps: Some(args.steps),
        ..Default::default()
    };
    let mut cfg = RunConfig::new("sweep", &input, args.output.format);
    cfg.family = Some(args.family.clone());
    cfg.grid = Some(args.grid.clone());
    cfg.threads = Some(threads);
    cfg.state = Some(store.clone());

    let values = parse_grid(&args.grid)?;
    let instances: Vec<Instance> = values
        .iter()
        .map(|v| Instance {
            family: args.family.clone(),
            lambda: v.to_string(),
            poly: instantiate(&args.family, v),
            steps: args.steps,
        })
        .collect();
    let done = completed_hashes(&store)?;
    let mut seen = HashSet::new();
    let pending: Vec<(Instance, String)> = instances
        .iter()
        .map(|i| (i.clone(), i.hash()))
        .filter(|(_, h)| !done.contains(h) && seen.insert(h.clone()))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let records: Vec<Value> = pool.install(|| pending.par_iter().map(|(i, h)| record(i, h)).collect());

    if let Some(dir) = store.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut f = OpenOptions::new().create(true).append(true).open(&store).map_err(io_err(&store))?;
    for rec in &records {
        let mut line = serde_json::to_string(rec).expect("serializable");
        line.push('\n');
        f.write_all(line.as_bytes()).map_err(io_err(&store))?;
    }
    f.flush().map_err(io_err(&store))?;

    let summary = SweepSummary {
        store,
        instances: instances.len(),
        skipped: instances.len() - pending.len(),
        appended: records.len(),
        errors: records.iter().filter(|r| r.get("error").is_some()).count(),
        pellian: records
            .iter()
            .filter(|r| r["result"]["pell"] == json!({ "verdict": "Pellian" }))
            .map(|r| r["config"]["lambda"].as_str().unwrap_or_default().to_string())
            .collect(),
    };
    let text = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&cfg.envelope(&summary)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => format!(
            "{}\nstore      {}\ninstances  {}\nskipped    {}\nappended   {}\nerrors     {}\npellian    {}\n",
            cfg.header_line(),
            summary.store.display(),
            summary.instances,
            summary.skipped,
            summary.appended,
            summary.errors,
            summary.pellian.join(", ")
        ),
        other => return Err(CliError::Usage(format!("sweep prints json or table, not {other:?}"))),
    };
    emit(&args.output, &text)
}
