//! JSON-lines transcripts: one header line, one line per step record, and a
//! closing cursor line.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{validate_radicand, Cursor, ExpandOptions, ExpansionTranscript, StepRecord, CONVENTION};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::sqrt_series;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptHeader {
    pub format_version: u32,
    pub engine: String,
    pub radicand: Poly,
    pub radicand_text: String,
    pub half_degree: usize,
    pub a0: Poly,
    pub convention: String,
    /// Preprocessing applied to `D`; the engine never rescales silently.
    pub normalization: String,
    pub thin_window: Option<usize>,
    pub pinned: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Line {
    Header(TranscriptHeader),
    Step(StepRecord),
    Cursor(Cursor),
}

impl ExpansionTranscript {
    pub fn header(&self) -> TranscriptHeader {
        TranscriptHeader {
            format_version: FORMAT_VERSION,
            engine: concat!("pellcf-core ", env!("CARGO_PKG_VERSION")).to_string(),
            radicand: self.radicand.clone(),
            radicand_text: self.radicand.to_string(),
            half_degree: self.half_degree,
            a0: self.a0.clone(),
            convention: CONVENTION.to_string(),
            normalization: self.normalization().to_string(),
            thin_window: self.options.thin_window,
            pinned: self.options.pinned.iter().copied().collect(),
        }
    }

    /// The whole transcript as a JSON-lines string.
    pub fn to_jsonl(&self) -> String {
        let mut out = Vec::new();
        write_transcript(self, &mut out).expect("writing to memory");
        String::from_utf8(out).expect("JSON is UTF-8")
    }

    pub fn from_jsonl(text: &str) -> Result<ExpansionTranscript> {
        read_transcript(text.as_bytes())
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Transcript(e.to_string())
}

pub fn write_transcript<W: Write>(tr: &ExpansionTranscript, mut w: W) -> Result<()> {
    let mut line = |l: &Line| -> Result<()> {
        serde_json::to_writer(&mut w, l).map_err(|e| Error::Transcript(e.to_string()))?;
        w.write_all(b"\n").map_err(io_err)
    };
    line(&Line::Header(tr.header()))?;
    for r in tr.records() {
        line(&Line::Step(r.clone()))?;
    }
    line(&Line::Cursor(tr.cursor().clone()))
}

/// Parses and validates a transcript written by [`write_transcript`].
pub fn read_transcript<R: BufRead>(r: R) -> Result<ExpansionTranscript> {
    let mut header = None;
    let mut records = Vec::new();
    let mut cursor = None;
    for (lineno, text) in r.lines().enumerate() {
        let text = text.map_err(io_err)?;
        if text.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Transcript(format!("line {}: {msg}", lineno + 1));
        if cursor.is_some() {
            return Err(bad("content after cursor".into()));
        }
        let parsed: Line = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        match parsed {
            Line::Header(h) => {
                if header.is_some() || !records.is_empty() {
                    return Err(bad("unexpected header".into()));
                }
                if h.format_version != FORMAT_VERSION {
                    return Err(bad(format!("unsupported format version {}", h.format_version)));
                }
                header = Some(h);
            }
            Line::Step(s) => {
                if header.is_none() {
                    return Err(bad("step before header".into()));
                }
                if s.n != records.len() {
                    return Err(bad(format!("expected record {}, found {}", records.len(), s.n)));
                }
                records.push(s);
            }
            Line::Cursor(c) => {
                if header.is_none() {
                    return Err(bad("cursor before header".into()));
                }
                if c.next_index != records.len() {
                    return Err(bad("cursor index does not follow the last record".into()));
                }
                cursor = Some(c);
            }
        }
    }
    let h = header.ok_or_else(|| Error::Transcript("missing header".into()))?;
    let cursor = cursor.ok_or_else(|| Error::Transcript("missing cursor (truncated file?)".into()))?;
    let half_degree = validate_radicand(&h.radicand)?;
    let a0 = sqrt_series(&h.radicand)?.polynomial_part();
    if half_degree != h.half_degree || a0 != h.a0 {
        return Err(Error::Transcript("header disagrees with its radicand".into()));
    }
    let options = ExpandOptions {
        thin_window: h.thin_window,
        pinned: h.pinned.into_iter().collect(),
    };
    Ok(ExpansionTranscript::from_parts(
        h.radicand,
        half_degree,
        a0,
        options,
        records,
        cursor,
        h.normalization,
    ))
}
