use std::fmt::Write as _;

use clap::{Args, Subcommand};
use pellcf_core::analysis::{
    detect_degree_period, elliptic_identities, fit_degq_formula, hankel_cross_check, height_series,
    mcmullen_cross_reference, mcmullen_experiment, pell_check, pell_from_transcript, theorem12_check,
    zero_occurrences, zero_occurrences_streaming, DEFAULT_MIN_CONFIRM,
};
use pellcf_core::factor::rn_factor_ledger;
use pellcf_core::{parse_rational, sqrt_series, ExpandOptions, Rational};
use serde::Serialize;

use crate::config::{
    emit, input_radicand, load_transcript, obtain_transcript, steps_or_default, CliError, RunConfig,
};
use crate::render::{render, DegreeSequence, Render};
use crate::{InputArgs, OutputArgs};

#[derive(Args, Debug)]
pub struct Common {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCommand {
    /// Pell witness and verified solution, or NoWitnessWithin(N).
    Pell(Common),
    /// Degree sequence, preperiod, period and pattern.
    Degseq {
        #[command(flatten)]
        common: Common,
        /// Complete repeats required before a period is reported.
        #[arg(long, default_value_t = DEFAULT_MIN_CONFIRM)]
        min_confirm: usize,
    },
    /// Heights of a_n and q_n and the doubling ratios h(q_2n)/h(q_n).
    Heights {
        #[command(flatten)]
        common: Common,
        /// Column for --format gnuplot: h_a, h_aff_a, h_q or h_aff_q.
        #[arg(long, default_value = "h_q")]
        column: String,
    },
    /// Indices n with q_n(rho) = 0, for each probe rho.
    Zeros {
        #[command(flatten)]
        common: Common,
        /// Rational probe points (repeat or separate with commas).
        #[arg(long = "probe", required = true, value_delimiter = ',', allow_hyphen_values = true)]
        probes: Vec<String>,
    },
    /// Expansion of sqrt((t - rho)^2 D) and its match with zeros of q_n at rho.
    Mcmullen {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        probe: String,
        /// Only the cross-reference; allowed when D(rho) = 0.
        #[arg(long)]
        cross_reference: bool,
    },
    /// Constants c_n, z_n, gamma_n and the genus-one identities (deg D = 4).
    Elliptic(Common),
    /// Irreducible factors of the norms R_n over a window of indices.
    Rfactors {
        #[command(flatten)]
        common: Common,
        /// First index of the window.
        #[arg(long, default_value_t = 1)]
        from: usize,
        /// Last index of the window; defaults to N.
        #[arg(long)]
        to: Option<usize>,
    },
    /// { m : H_m != 0 } beside { deg q_n }; a mismatch exits with code 4.
    Hankel {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20)]
        max_m: usize,
    },
    /// Tail bound deg a_n <= d/2 and the square-divisor scan for exceptions.
    Bound(Common),
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Print coefficients down to t^(-K).
    #[arg(long, short = 'k', default_value_t = 10)]
    precision: i64,
    #[command(flatten)]
    output: OutputArgs,
}

fn probes(texts: &[String]) -> Result<Vec<Rational>, CliError> {
    texts.iter().map(|s| Ok(parse_rational(s)?)).collect()
}

fn finish<R: Render>(cfg: &RunConfig, output: &OutputArgs, report: &R, column: &str) -> Result<(), CliError> {
    emit(output, &render(cfg, report, column)?)
}

pub fn run(cmd: AnalyzeCommand) -> Result<(), CliError> {
    match cmd {
        AnalyzeCommand::Pell(c) => {
            let mut cfg = RunConfig::new("analyze pell", &c.input, c.output.format);
            let report = if c.input.transcript.is_some() && c.input.steps.is_none() {
                let tr = obtain_transcript(&c.input, &c.output, ExpandOptions::full(), &mut cfg)?;
                pell_from_transcript(&tr)?
            } else {
                let d = input_radicand(&c.input, &mut cfg)?;
                pell_check(&d, steps_or_default(&c.input))?
            };
            finish(&cfg, &c.output, &report, "")
        }
        AnalyzeCommand::Degseq { common: c, min_confirm } => {
            let mut cfg = RunConfig::new("analyze degseq", &c.input, c.output.format);
            cfg.param("min_confirm", min_confirm);
            let tr = obtain_transcript(&c.input, &c.output, ExpandOptions::thin(2), &mut cfg)?;
            let period = detect_degree_period(&tr, min_confirm);
            let degq_formula = fit_degq_formula(&period).ok();
            finish(&cfg, &c.output, &DegreeSequence { period, degq_formula }, "")
        }
        AnalyzeCommand::Heights { common: c, column } => {
            let mut cfg = RunConfig::new("analyze heights", &c.input, c.output.format);
            cfg.param("column", &column);
            let tr = obtain_transcript(&c.input, &c.output, ExpandOptions::full(), &mut cfg)?;
            finish(&cfg, &c.output, &height_series(&tr)?, &column)
        }
        AnalyzeCommand::Zeros { common: c, probes: texts } => {
            let mut cfg = RunConfig::new("analyze zeros", &c.input, c.output.format);
            cfg.probes = texts.clone();
            let ps = probes(&texts)?;
            let report = match &c.input.transcript {
                Some(_) => {
                    let tr = obtain_transcript(&c.input, &c.output, ExpandOptions::full(), &mut cfg)?;
                    zero_occurrences(&tr, &ps)?
                }
                None => {
                    let d = input_radicand(&c.input, &mut cfg)?;
                    zero_occurrences_streaming(&d, &ps, steps_or_default(&c.input))?
                }
            };
            finish(&cfg, &c.output, &report, "")
        }
        AnalyzeCommand::Mcmullen { common: c, probe, cross_reference } => {
            let mut cfg = RunConfig::new("analyze mcmullen", &c.input, c.output.format);
            cfg.probes = vec![probe.clone()];
            cfg.param("cross_reference", cross_reference);
            let rho = parse_rational(&probe)?;
            let d = input_radicand(&c.input, &mut cfg)?;
            let n = steps_or_default(&c.input);
            if cross_reference {
                finish(&cfg, &c.output, &mcmullen_cross_reference(&d, &rho, n)?, "")
            } else {
                finish(&cfg, &c.output, &mcmullen_experiment(&d, &rho, n)?, "")
            }
        }
        AnalyzeCommand::Elliptic(c) => {
            let mut cfg = RunConfig::new("analyze elliptic", &c.input, c.output.format);
            let tr = obtain_transcript(&c.input, &c.output, ExpandOptions::full(), &mut cfg)?;
            let report = elliptic_identities(&tr)?;
            finish(&cfg, &c.output, &report, "")?;
            if report.all_pass() {
                Ok(())
            } else {
                Err(CliError::Core(pellcf_core::Error::Invariant(
                    "an elliptic identity failed; see the report".into(),
                )))
            }
        }
        AnalyzeCommand::Rfactors { common: c, from, to } => {
            let mut cfg = RunConfig::new("analyze rfactors", &c.input, c.output.format);
            let tr = obtain_transcript(&c.input, &c.output, ExpandOptions::thin(2), &mut cfg)?;
            let hi = to.or(tr.last_index()).unwrap_or(0);
            cfg.param("window", (from, hi));
            finish(&cfg, &c.output, &rn_factor_ledger(&tr, from..=hi)?, "")
        }
        AnalyzeCommand::Hankel { common: c, max_m } => {
            let mut cfg = RunConfig::new("analyze hankel", &c.input, c.output.format);
            cfg.param("max_m", max_m);
            let tr = obtain_transcript(&c.input, &c.output, ExpandOptions::thin(2), &mut cfg)?;
            finish(&cfg, &c.output, &hankel_cross_check(&tr, max_m)?, "")
        }
        AnalyzeCommand::Bound(c) => {
            let mut cfg = RunConfig::new("analyze bound", &c.input, c.output.format);
            let d = input_radicand(&c.input, &mut cfg)?;
            finish(&cfg, &c.output, &theorem12_check(&d, steps_or_default(&c.input))?, "")
        }
    }
}

#[derive(Serialize)]
struct SeriesReport {
    /// Exponent of the leading term, `d`.
    lead_exponent: i64,
    /// Coefficients of `t^d, t^(d-1), ...`.
    #[serde(with = "pellcf_core::numbers::rational_strings")]
    coefficients: Vec<Rational>,
}

impl Render for SeriesReport {
    fn table(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(out, "t^{:<5} {c}", self.lead_exponent - k as i64);
        }
        out
    }

    fn csv(&self) -> Option<String> {
        let mut out = String::from("exponent,coefficient\n");
        for (k, c) in self.coefficients.iter().enumerate() {
            let _ = writeln!(out, "{},{c}", self.lead_exponent - k as i64);
        }
        Some(out)
    }
}

pub fn run_series(args: SeriesArgs) -> Result<(), CliError> {
    let mut cfg = RunConfig::new("series", &args.input, args.output.format);
    cfg.param("precision", args.precision);
    let d = match &args.input.transcript {
        Some(path) => load_transcript(path)?.radicand().clone(),
        None => input_radicand(&args.input, &mut cfg)?,
    };
    let mut s = sqrt_series(&d)?;
    let lead_exponent = s.lead_exponent();
    let coefficients = s.prefix(args.precision);
    finish(&cfg, &args.output, &SeriesReport { lead_exponent, coefficients }, "")
}
