use std::fmt::Write as _;

use pellcf_core::analysis::{
    CrossReference, DegQFit, DegreePeriodReport, EllipticIdentityReport, HankelReport, HeightSeries,
    McMullenReport, PellReport, PellVerdict, DegreeBoundReport, ZeroOccurrences,
};
use pellcf_core::factor::FactorLedger;
use serde::Serialize;

use crate::config::{CliError, RunConfig};
use crate::Format;

/// Text renderings of a report besides JSON.
pub trait Render: Serialize {
    fn table(&self) -> String;

    fn csv(&self) -> Option<String> {
        None
    }

    fn gnuplot(&self, _column: &str) -> Option<Result<String, CliError>> {
        None
    }
}

/// The report in the requested format, with the config header.
pub fn render<R: Render>(cfg: &RunConfig, report: &R, column: &str) -> Result<String, CliError> {
    let unsupported = || {
        CliError::Usage(format!(
            "format {:?} is not available for `{}`",
            cfg.format, cfg.command
        ))
    };
    let body = match cfg.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&cfg.envelope(report)).expect("serializable");
            s.push('\n');
            return Ok(s);
        }
        Format::Table => report.table(),
        Format::Csv => report.csv().ok_or_else(unsupported)?,
        Format::Gnuplot => report.gnuplot(column).ok_or_else(unsupported)??,
    };
    Ok(format!("{}\n{body}", cfg.header_line()))
}

pub fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

impl Render for PellReport {
    fn table(&self) -> String {
        let mut out = String::new();
        match (&self.verdict, self.witness_index) {
            (PellVerdict::Pellian, Some(n)) => {
                let _ = writeln!(out, "verdict   Pellian (witness n = {n})");
            }
            (PellVerdict::Pellian, None) => {
                let _ = writeln!(out, "verdict   Pellian");
            }
            (PellVerdict::NoWitnessWithin(b), _) => {
                let _ = writeln!(out, "verdict   NoWitnessWithin({b})");
            }
        }
        if let Some((x, y)) = &self.solution {
            let _ = writeln!(out, "x         {x}");
            let _ = writeln!(out, "y         {y}");
        }
        let _ = writeln!(out, "degrees   {}", join(&self.degrees, " "));
        out
    }
}

#[derive(Serialize)]
pub struct DegreeSequence {
    #[serde(flatten)]
    pub period: DegreePeriodReport,
    pub degq_formula: Option<DegQFit>,
}

impl Render for DegreeSequence {
    fn table(&self) -> String {
        let p = &self.period;
        let mut out = String::new();
        let _ = writeln!(out, "deg a_n    {}", join(&p.degrees, " "));
        let _ = writeln!(out, "deg q_n    {}", join(&p.denominator_degrees, " "));
        match (p.preperiod, p.period) {
            (Some(s), Some(pi)) => {
                let _ = writeln!(out, "preperiod  {s}");
                let _ = writeln!(out, "period     {pi}");
                let _ = writeln!(out, "pattern    {}", join(&p.pattern, ","));
                let _ = writeln!(out, "canonical  {}", join(&p.canonical_pattern, ","));
                let _ = writeln!(out, "repeats    {}", p.confirmations);
            }
            _ => {
                let _ = writeln!(
                    out,
                    "period     none with {} confirmed repeats; try more --steps",
                    p.min_confirm
                );
            }
        }
        if let Some(fit) = &self.degq_formula {
            let _ = writeln!(
                out,
                "deg q_n    {} n + r_n for n >= {}, r = [{}]",
                fit.slope,
                fit.start,
                join(&fit.residues, ", ")
            );
        }
        out
    }

    fn csv(&self) -> Option<String> {
        let mut out = String::from("n,deg_a,deg_q\n");
        for (n, d) in self.period.degrees.iter().enumerate() {
            let _ = writeln!(out, "{n},{d},{}", self.period.denominator_degrees[n]);
        }
        Some(out)
    }

    fn gnuplot(&self, _column: &str) -> Option<Result<String, CliError>> {
        let mut out = String::from("# n deg_a\n");
        for (n, d) in self.period.degrees.iter().enumerate() {
            let _ = writeln!(out, "{n} {d}");
        }
        Some(Ok(out))
    }
}

impl Render for HeightSeries {
    fn table(&self) -> String {
        let mut out = format!(
            "{:>5}  {:>6}  {:>12}  {:>12}  {:>14}  {:>14}\n",
            "n", "deg q", "h(a_n)", "h_a(a_n)", "h(q_n)", "h_a(q_n)"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>5}  {:>6}  {:>12.4}  {:>12.4}  {:>14.4}  {:>14.4}",
                r.n, r.deg_q, r.h_a_n, r.h_aff_a_n, r.h_q, r.h_aff_q
            );
        }
        out.push_str("doubling h(q_2n)/h(q_n):\n");
        for (n, ratio) in &self.doubling {
            let _ = writeln!(out, "{n:>5}  {ratio:.4}");
        }
        out
    }

    fn csv(&self) -> Option<String> {
        Some(self.to_csv())
    }

    fn gnuplot(&self, column: &str) -> Option<Result<String, CliError>> {
        Some(self.to_gnuplot(column).map_err(CliError::from))
    }
}

impl Render for ZeroOccurrences {
    fn table(&self) -> String {
        let mut out = format!("records 0..={}\n", self.last_index);
        for p in &self.probes {
            let list: Vec<String> = p
                .occurrences
                .iter()
                .map(|(n, m)| if *m == 1 { n.to_string() } else { format!("{n}^{m}") })
                .collect();
            let _ = writeln!(out, "rho = {}: n = {}", p.probe, list.join(", "));
        }
        out
    }

    fn csv(&self) -> Option<String> {
        let mut out = String::from("probe,n,multiplicity\n");
        for p in &self.probes {
            for (n, m) in &p.occurrences {
                let _ = writeln!(out, "{},{n},{m}", p.probe);
            }
        }
        Some(out)
    }
}

fn cross_reference_table(c: &CrossReference, out: &mut String) {
    let _ = writeln!(out, "zeros of q_n at {} (records 0..={}):", c.probe, c.last_index);
    for z in &c.zeros {
        let event = match (z.event_index, z.beyond_range) {
            (Some(m), _) => format!(
                "m = {m}, deg a_m = {}, denominator {}",
                z.event_degree.unwrap_or(0),
                if z.denominator_matches { "matches" } else { "differs" }
            ),
            (None, true) => "beyond range".to_string(),
            (None, false) => "no event".to_string(),
        };
        let _ = writeln!(out, "  n = {:>4} (mult {}) -> {event}", z.n, z.multiplicity);
    }
    let events: Vec<String> = c.events.iter().map(|(m, d)| format!("{m}:{d}")).collect();
    let _ = writeln!(out, "events (m:deg)  {}", events.join(" "));
    let _ = writeln!(out, "unexplained     {}", join(&c.unexplained_events, " "));
    let _ = writeln!(out, "consistent      {}", c.consistent);
}

impl Render for CrossReference {
    fn table(&self) -> String {
        let mut out = String::new();
        cross_reference_table(self, &mut out);
        out
    }
}

impl Render for McMullenReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "twisted radicand  {}", self.twisted);
        let _ = writeln!(out, "deg a_n           {}", join(&self.degrees, " "));
        let _ = writeln!(out, "max deg (n >= 1)  {}", self.max_degree);
        cross_reference_table(&self.cross_reference, &mut out);
        out
    }
}

impl Render for EllipticIdentityReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let opt = |v: &Option<pellcf_core::Rational>| v.as_ref().map_or("-".to_string(), |q| q.to_string());
        let _ = writeln!(out, "{:>4}  {:>16}  {:>16}  {:>16}", "n", "c_n", "z_n", "gamma_n");
        for n in 0..=self.last_index {
            let _ = writeln!(
                out,
                "{n:>4}  {:>16}  {:>16}  {:>16}",
                opt(&self.c[n]),
                opt(&self.z[n]),
                opt(&self.gamma[n])
            );
        }
        identity_lines(&self.checks, &mut out);
        out
    }
}

pub fn identity_lines(checks: &[pellcf_core::engine::IdentityCheck], out: &mut String) {
    use pellcf_core::engine::IdentityStatus;
    for c in checks {
        let status = match &c.status {
            IdentityStatus::Pass => "pass".to_string(),
            IdentityStatus::NotApplicable => "n/a".to_string(),
            IdentityStatus::Fail { first_index, detail } => format!("FAIL at n = {first_index}: {detail}"),
        };
        let _ = writeln!(out, "{:<12} {:>4} checked  {status}   {}", c.name, c.checked, c.statement);
    }
}

impl Render for FactorLedger {
    fn table(&self) -> String {
        self.to_table()
    }

    fn csv(&self) -> Option<String> {
        let mut out = String::from("n,deg_r,new_count,new_degree,new_multiplicity,factorization\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{},{},{},\"{}\"",
                e.n, e.r_degree, e.new_count, e.new_degree, e.new_multiplicity, e.factorization
            );
        }
        Some(out)
    }
}

impl Render for HankelReport {
    fn table(&self) -> String {
        format!(
            "m <= {}\nH_m != 0  {{{}}}\ndeg q_n   {{{}}}\nagree     {}\n",
            self.max_m,
            join(&self.nonzero, ", "),
            join(&self.denominator_degrees, ", "),
            self.agree
        )
    }
}

impl Render for DegreeBoundReport {
    fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "d = {}, records 0..={}", self.half_degree, self.bound);
        match &self.tail {
            Some(t) => {
                let _ = writeln!(
                    out,
                    "tail max deg a_n = {} against d/2 = {}: {}",
                    t.max_degree,
                    t.bound,
                    if t.pass { "within" } else { "above" }
                );
            }
            None => {
                let _ = writeln!(out, "tail: no confirmed period");
            }
        }
        for s in &self.divisors {
            let verdict = match (&s.pell, &s.error) {
                (Some(p), _) => match p.verdict {
                    PellVerdict::Pellian => format!("Pellian (n = {})", p.witness_index.unwrap_or(0)),
                    PellVerdict::NoWitnessWithin(b) => format!("NoWitnessWithin({b})"),
                },
                (None, Some(e)) => format!("error: {e}"),
                (None, None) => "-".to_string(),
            };
            let _ = writeln!(
                out,
                "r = {:<16} D* = {:<28} deg {:>2} {:<12} {verdict}",
                s.r.to_string(),
                s.reduced.to_string(),
                s.reduced_degree,
                if s.eligible { "eligible" } else { "too small" }
            );
        }
        let _ = writeln!(out, "branch {}", serde_json::to_string(&self.branch).expect("serializable"));
        out
    }
}
