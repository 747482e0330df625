use std::fmt;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use pellcf_core::{normalize_radicand, Normalization, read_transcript, write_transcript, ExpandOptions, ExpansionTranscript, Poly, FORMAT_VERSION};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{Format, InputArgs, OutputArgs};

pub const ENGINE: &str = concat!("pellcf ", env!("CARGO_PKG_VERSION"));
pub const DEFAULT_STEPS: usize = 100;

#[derive(Debug)]
pub enum CliError {
    Core(pellcf_core::Error),
    Io(String, io::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{} ({})", e, e.kind()),
            CliError::Io(path, e) => write!(f, "{path}: {e}"),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<pellcf_core::Error> for CliError {
    fn from(e: pellcf_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use pellcf_core::Error;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Parse { .. } | Error::Transcript(_)) => 2,
            CliError::Core(e) if e.is_invalid_radicand() => 3,
            CliError::Core(Error::Invariant(_)) => 4,
            CliError::Core(_) | CliError::Io(..) => 1,
        }
    }
}

pub fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Io(path.display().to_string(), e)
}

/// Everything a run depends on. Echoed into every report header.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcript: Option<PathBuf>,
    /// Canonical coefficient strings of the radicand actually used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radicand: Option<Vec<String>>,
    pub steps: Option<usize>,
    pub thin_window: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pinned: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub probes: Vec<String>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Subcommand-specific parameters.
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub params: serde_json::Map<String, Value>,
    /// Substitution applied by --normalize; echoed through `params`.
    #[serde(skip)]
    pub normalization: Option<Normalization>,
}

impl RunConfig {
    pub fn new(command: &str, input: &InputArgs, format: Format) -> Self {
        RunConfig {
            command: command.to_string(),
            poly: input.poly.clone(),
            poly_file: input.poly_file.clone(),
            transcript: input.transcript.clone(),
            steps: input.steps.or(input.transcript.is_none().then_some(DEFAULT_STEPS)),
            format,
            ..Default::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn header_line(&self) -> String {
        let cfg = serde_json::to_string(self).expect("serializable");
        format!("# {ENGINE} format {FORMAT_VERSION} config {cfg}")
    }

    /// The JSON envelope around a report.
    pub fn envelope(&self, report: &impl Serialize) -> Value {
        json!({
            "format_version": FORMAT_VERSION,
            "engine": ENGINE,
            "config": self,
            "report": report,
        })
    }
}

pub fn read_poly_text(input: &InputArgs) -> Result<Option<String>, CliError> {
    if let Some(text) = &input.poly {
        return Ok(Some(text.clone()));
    }
    if let Some(path) = &input.poly_file {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        return Ok(Some(text.trim().to_string()));
    }
    Ok(None)
}

pub fn parse_poly(text: &str) -> Result<Poly, CliError> {
    Ok(Poly::parse(text)?)
}

/// Parses the radicand and, on request, replaces it by its normal form,
/// echoing the substitution into the config.
pub fn prepare_radicand(text: &str, normalize: bool, cfg: &mut RunConfig) -> Result<Poly, CliError> {
    let d = parse_poly(text)?;
    if !normalize {
        return Ok(d);
    }
    let norm = normalize_radicand(&d)?;
    cfg.param(
        "normalization",
        json!({
            "original": d.to_strings(),
            "lead": norm.lead.to_string(),
            "shift": norm.shift.to_string(),
        }),
    );
    let d = norm.normalized.clone();
    cfg.normalization = Some(norm);
    Ok(d)
}

/// Stamps the substitution chosen by --normalize into the transcript.
pub fn stamp(tr: &mut ExpansionTranscript, cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(norm) = &cfg.normalization {
        tr.set_normalization(norm)?;
    }
    Ok(())
}

pub fn load_transcript(path: &Path) -> Result<ExpansionTranscript, CliError> {
    let f = fs::File::open(path).map_err(io_err(path))?;
    Ok(read_transcript(BufReader::new(f))?)
}

/// Writes through a temporary sibling file and renames it into place.
pub fn save_transcript(tr: &ExpansionTranscript, path: &Path) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
        let mut w = io::BufWriter::new(f);
        write_transcript(tr, &mut w)?;
        w.flush().map_err(io_err(&tmp))?;
    }
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// The radicand of an input, without expanding.
pub fn input_radicand(input: &InputArgs, cfg: &mut RunConfig) -> Result<Poly, CliError> {
    let d = match read_poly_text(input)? {
        Some(text) => prepare_radicand(&text, input.normalize, cfg)?,
        None => match &input.transcript {
            Some(path) => load_transcript(path)?.radicand().clone(),
            None => return Err(CliError::Usage("one of --poly, --poly-file or --transcript is required".into())),
        },
    };
    cfg.radicand = Some(d.to_strings());
    Ok(d)
}

pub fn steps_or_default(input: &InputArgs) -> usize {
    input.steps.unwrap_or(DEFAULT_STEPS)
}

fn cache_path(dir: &Path, d: &Poly, options: &impl Serialize) -> PathBuf {
    let key = serde_json::to_string(&(FORMAT_VERSION, d.to_strings(), options)).expect("serializable");
    let digest = hex::encode(Sha256::digest(key.as_bytes()));
    dir.join(format!("transcript-{}.jsonl", &digest[..16]))
}

/// A transcript through the requested index with the given retention,
/// read from `--transcript`, from the cache, or expanded afresh.
pub fn obtain_transcript(
    input: &InputArgs,
    output: &OutputArgs,
    options: ExpandOptions,
    cfg: &mut RunConfig,
) -> Result<ExpansionTranscript, CliError> {
    cfg.thin_window = options.thin_window;
    if let Some(path) = &input.transcript {
        let mut tr = load_transcript(path)?;
        cfg.radicand = Some(tr.radicand().to_strings());
        cfg.steps = input.steps.or(tr.last_index());
        cfg.thin_window = tr.options().thin_window;
        if let Some(n) = input.steps {
            if tr.last_index().is_some_and(|l| l >= n) {
                tr = tr.truncated(n)?;
            } else {
                tr.extend_to(n)?;
            }
        }
        return Ok(tr);
    }
    let d = input_radicand(input, cfg)?;
    let n = steps_or_default(input);
    let Some(dir) = &output.cache_dir else {
        let mut tr = pellcf_core::expand_with(&d, n, options)?;
        stamp(&mut tr, cfg)?;
        return Ok(tr);
    };
    let key_options = (&options, cfg.normalization.as_ref().map(Normalization::describe));
    let path = cache_path(dir, &d, &key_options);
    let cached = if path.exists() { load_transcript(&path).ok() } else { None };
    match cached {
        Some(tr) if tr.last_index().is_some_and(|l| l >= n) => Ok(tr.truncated(n)?),
        Some(mut tr) => {
            tr.extend_to(n)?;
            save_transcript(&tr, &path)?;
            Ok(tr)
        }
        None => {
            let mut tr = pellcf_core::expand_with(&d, n, options)?;
            stamp(&mut tr, cfg)?;
            save_transcript(&tr, &path)?;
            Ok(tr)
        }
    }
}

pub fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(io_err(path)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e))
        }
    }
}
