use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use pellcf_core::analysis::pell_from_transcript;
use pellcf_core::{verify_identities, ExpandOptions, ExpansionTranscript, Poly};
use serde::Serialize;

use crate::config::{emit, load_transcript, prepare_radicand, read_poly_text, stamp, save_transcript, CliError, RunConfig};
use crate::render::{identity_lines, join};
use crate::{Format, InputArgs, OutputArgs};

#[derive(Args, Debug)]
pub struct ExpandArgs {
    /// Radicand D(t) as text (see the grammar in --help).
    #[arg(long, short = 'p', allow_hyphen_values = true)]
    poly: Option<String>,
    /// File holding the radicand text.
    #[arg(long, conflicts_with = "poly")]
    poly_file: Option<PathBuf>,
    /// Continue the transcript in this file.
    #[arg(long, conflicts_with_all = ["poly", "poly_file"])]
    resume: Option<PathBuf>,
    /// Fresh runs: last record index N (records 0..=N). With --resume: number
    /// of records to append.
    #[arg(long, short = 'n')]
    steps: Option<usize>,
    /// Transcript file to write. Defaults to the --resume file, else
    /// transcript.jsonl.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Keep convergents only for the last W records.
    #[arg(long)]
    thin_window: Option<usize>,
    /// Record indices whose convergents are always kept.
    #[arg(long, value_delimiter = ',')]
    pin: Vec<usize>,
    /// Check the structural identities on the result (needs convergents).
    #[arg(long)]
    verify: bool,
    /// Expand the monic radicand without a t^(2d-1) term obtained by
    /// scaling and translating D; the substitution is echoed in the header.
    #[arg(long, conflicts_with = "resume")]
    normalize: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct Summary {
    radicand: Poly,
    radicand_text: String,
    last_index: Option<usize>,
    degrees: Vec<usize>,
    pell_witness: Option<usize>,
    pell_solution: Option<(Poly, Poly)>,
    state: PathBuf,
    wall_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    identities: Option<pellcf_core::IdentityReport>,
}

fn options_from(args: &ExpandArgs, base: Option<&ExpandOptions>) -> ExpandOptions {
    let mut opts = base.cloned().unwrap_or_default();
    if args.thin_window.is_some() {
        opts.thin_window = args.thin_window;
    }
    opts.pinned.extend(args.pin.iter().copied());
    opts
}

pub fn run(args: ExpandArgs) -> Result<(), CliError> {
    let input = InputArgs {
        poly: args.poly.clone(),
        poly_file: args.poly_file.clone(),
        transcript: None,
        steps: args.steps,
        normalize: args.normalize,
    };
    let mut cfg = RunConfig::new("expand", &input, args.output.format);
    let started = Instant::now();
    let (tr, state) = match &args.resume {
        Some(path) => {
            let mut tr = load_transcript(path)?;
            let opts = options_from(&args, Some(tr.options()));
            if &opts != tr.options() {
                tr.set_options(opts);
            }
            tr.extend_by(args.steps.unwrap_or(crate::config::DEFAULT_STEPS))?;
            (tr, args.state.clone().unwrap_or_else(|| path.clone()))
        }
        None => {
            let text = read_poly_text(&input)?
                .ok_or_else(|| CliError::Usage("one of --poly, --poly-file or --resume is required".into()))?;
            let d = prepare_radicand(&text, args.normalize, &mut cfg)?;
            let n = args.steps.unwrap_or(crate::config::DEFAULT_STEPS);
            let mut tr = pellcf_core::expand_with(&d, n, options_from(&args, None))?;
            stamp(&mut tr, &cfg)?;
            (tr, args.state.clone().unwrap_or_else(|| PathBuf::from("transcript.jsonl")))
        }
    };
    cfg.radicand = Some(tr.radicand().to_strings());
    cfg.thin_window = tr.options().thin_window;
    cfg.pinned = tr.options().pinned.iter().copied().collect();
    cfg.state = Some(state.clone());
    cfg.param("resume", &args.resume);
    save_transcript(&tr, &state)?;

    let identities = args.verify.then(|| verify_identities(&tr));
    let summary = summarize(&tr, state, started.elapsed().as_secs_f64(), identities);
    let text = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&cfg.envelope(&summary)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Table => format!("{}\n{}", cfg.header_line(), table(&summary)),
        other => return Err(CliError::Usage(format!("expand prints json or table, not {other:?}"))),
    };
    emit(&args.output, &text)?;
    match summary.identities {
        Some(rep) if !rep.all_pass() => Err(CliError::Core(pellcf_core::Error::Invariant(
            "structural identity failed; see the report".into(),
        ))),
        _ => Ok(()),
    }
}

fn summarize(
    tr: &ExpansionTranscript,
    state: PathBuf,
    wall_time_s: f64,
    identities: Option<pellcf_core::IdentityReport>,
) -> Summary {
    let degrees = tr.degrees();
    let d = tr.half_degree();
    let pell_witness = degrees.iter().enumerate().skip(1).find(|(_, &g)| g == d).map(|(n, _)| n);
    let pell_solution = pell_witness
        .and_then(|_| pell_from_transcript(tr).ok())
        .and_then(|r| r.solution);
    Summary {
        radicand: tr.radicand().clone(),
        radicand_text: tr.radicand().to_string(),
        last_index: tr.last_index(),
        degrees,
        pell_witness,
        pell_solution,
        state,
        wall_time_s,
        identities,
    }
}

fn table(s: &Summary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "radicand   {}", s.radicand_text);
    match s.last_index {
        Some(n) => {
            let _ = writeln!(out, "records    0..={n}");
        }
        None => {
            let _ = writeln!(out, "records    none");
        }
    }
    let _ = writeln!(out, "deg a_n    {}", join(&s.degrees, " "));
    match (s.pell_witness, &s.pell_solution) {
        (Some(n), Some((x, y))) => {
            let _ = writeln!(out, "pell       witness n = {n}: x = {x}, y = {y}");
        }
        (Some(n), None) => {
            let _ = writeln!(out, "pell       witness n = {n} (convergent not retained)");
        }
        (None, _) => {
            let _ = writeln!(out, "pell       no witness within {}", s.last_index.unwrap_or(0));
        }
    }
    let _ = writeln!(out, "state      {}", s.state.display());
    let _ = writeln!(out, "wall time  {:.3} s", s.wall_time_s);
    if let Some(rep) = &s.identities {
        identity_lines(&rep.checks, &mut out);
    }
    out
}
