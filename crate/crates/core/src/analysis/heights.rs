use std::fmt::Write as _;

use serde::Serialize;

use crate::engine::ExpansionTranscript;
use crate::error::{Error, Result};
use crate::numbers::ln_abs;
use crate::poly::Poly;
use crate::{Integer, Rational};

/// Natural-log heights at one index. `h` is projective (scaling-invariant),
/// `h_a` affine (the vector augmented by a coordinate 1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightRow {
    pub n: usize,
    pub deg_q: usize,
    pub h_a_n: f64,
    pub h_aff_a_n: f64,
    pub h_q: f64,
    pub h_aff_q: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightSeries {
    pub rows: Vec<HeightRow>,
    /// `(n, h(q_{2n}) / h(q_n))` for every `n >= 1` with both available
    /// and `h(q_n) > 0`.
    pub doubling: Vec<(usize, f64)>,
}

fn max_abs_ln(v: &[Integer]) -> f64 {
    v.iter().max_by(|a, b| a.cmp_abs(b)).map(ln_abs).unwrap_or(0.0)
}

/// `(h, h_a)` of `scalar * f` for a nonzero polynomial `f`.
fn heights_of_scaled(f: &Poly, scalar: &Rational) -> (f64, f64) {
    let (content, prim) = f.primitive_part();
    let h = max_abs_ln(&prim);
    // scalar * f = (u / v) * prim with gcd(u, v) = 1 and prim primitive, so
    // (u prim, v) is already the coprime representative.
    let uv = Rational::from(&content * scalar);
    let h_a = (ln_abs(uv.numer()) + h).max(ln_abs(uv.denom()));
    (h, h_a)
}

/// Tabulates heights of `a_n` and `q_n` for `1 <= n <= N`.
pub fn height_series(tr: &ExpansionTranscript) -> Result<HeightSeries> {
    let Some(last) = tr.last_index() else {
        return Ok(HeightSeries {
            rows: Vec::new(),
            doubling: Vec::new(),
        });
    };
    if let Some(r) = tr.records()[1.min(last)..].iter().find(|r| r.is_thin()) {
        return Err(Error::MissingData(format!(
            "q_{} was thinned; re-run expand without --thin-window",
            r.n
        )));
    }
    let scales = tr.scales(last);
    let mut rows = Vec::with_capacity(last);
    for (r, s) in tr.records().iter().zip(&scales).skip(1) {
        let q_hat = r.q_hat.as_ref().expect("checked above");
        let kappa_inv = Rational::from(s.kappa.recip_ref());
        let (h_a_n, h_aff_a_n) = heights_of_scaled(&r.a_hat, &kappa_inv);
        let (h_q, h_aff_q) = heights_of_scaled(q_hat, &s.q_factor());
        rows.push(HeightRow {
            n: r.n,
            deg_q: r.deg_q.unwrap_or(0),
            h_a_n,
            h_aff_a_n,
            h_q,
            h_aff_q,
        });
    }
    let h_q = |n: usize| rows.get(n.checked_sub(1)?).map(|r: &HeightRow| r.h_q);
    let doubling = (1..=last / 2)
        .filter_map(|n| {
            let (a, b) = (h_q(n)?, h_q(2 * n)?);
            (a > 0.0).then(|| (n, b / a))
        })
        .collect();
    Ok(HeightSeries { rows, doubling })
}

impl HeightSeries {
    pub fn ratio_at(&self, n: usize) -> Option<f64> {
        self.doubling.iter().find(|(m, _)| *m == n).map(|(_, r)| *r)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,deg_q,h_a,h_aff_a,h_q,h_aff_q\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{:.6},{:.6},{:.6},{:.6}",
                r.n, r.deg_q, r.h_a_n, r.h_aff_a_n, r.h_q, r.h_aff_q
            );
        }
        out
    }

    /// Two-column `n value` data for one of the columns `h_a`, `h_aff_a`,
    /// `h_q`, `h_aff_q`.
    pub fn to_gnuplot(&self, column: &str) -> Result<String> {
        let pick: fn(&HeightRow) -> f64 = match column {
            "h_a" => |r| r.h_a_n,
            "h_aff_a" => |r| r.h_aff_a_n,
            "h_q" => |r| r.h_q,
            "h_aff_q" => |r| r.h_aff_q,
            other => {
                return Err(Error::MissingData(format!(
                    "unknown height column {other:?}; use h_a, h_aff_a, h_q or h_aff_q"
                )))
            }
        };
        let mut out = format!("# n {column}\n");
        for r in &self.rows {
            let _ = writeln!(out, "{} {:.6}", r.n, pick(r));
        }
        Ok(out)
    }
}
