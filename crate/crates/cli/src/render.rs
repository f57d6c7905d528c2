//! Payload formatting for each subcommand.

use std::fmt::Write;

use finortho::approx::Projection;
use finortho::incomplete::Condition;
use finortho::numkernel::to_f64;
use finortho::verify::{Check, FullReport, GramReport, OracleComparison};
use finortho::{Family, LogScaled};
use serde::Serialize;

use crate::{CliError, CliResult, Format, PolyOut};

fn json<T: Serialize + ?Sized>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.to_string()))
}

fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

#[derive(Serialize)]
struct NameValue<'a> {
    name: &'a str,
    value: String,
}

fn name_values<'a>(pairs: impl IntoIterator<Item = (&'a str, String)>) -> CliResult<String> {
    csv_rows(pairs.into_iter().map(|(name, value)| NameValue { name, value }))
}

pub fn poly(p: &PolyOut, format: Format) -> CliResult<String> {
    let exact = match p {
        PolyOut::Exact(q) => q.clone(),
        PolyOut::Real(q) => q.to_rational(),
    };
    match format {
        Format::Json => serde_json::to_string(&exact.to_json()).map_err(|e| CliError::Io(e.to_string())),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                exp: u32,
                num: String,
                den: String,
                value: f64,
            }
            csv_rows(exact.terms().map(|(e, c)| Row {
                exp: e,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
                value: to_f64(c),
            }))
        }
        Format::Text => Ok(match p {
            PolyOut::Exact(q) => q.to_string(),
            PolyOut::Real(q) => q.to_string(),
        }),
    }
}

#[derive(Serialize)]
pub struct NormRow {
    n: u32,
    degree: i64,
    sign: i8,
    log10: f64,
    /// Present when the value fits in a double.
    value: Option<f64>,
}

impl NormRow {
    pub fn new(n: u32, degree: i64, v: LogScaled) -> Self {
        NormRow { n, degree, sign: v.sign, log10: v.log10_abs(), value: v.try_to_f64() }
    }
}

pub fn norms(f: &Family, rows: &[NormRow], format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                family: &'a Family,
                norms: &'a [NormRow],
            }
            json(&Out { family: f, norms: rows })
        }
        Format::Csv => csv_rows(rows),
        Format::Text => {
            let mut s = format!("{}\n{:>4} {:>6} {:>14} {:>24}\n", f.describe(), "n", "degree", "log10|N|", "N");
            for r in rows {
                let v = r.value.map(|v| format!("{v:.16e}")).unwrap_or_else(|| "out of range".into());
                let l = if r.sign < 0 { format!("-{:.6}", r.log10) } else { format!("{:.6}", r.log10) };
                let _ = writeln!(s, "{:>4} {:>6} {:>14} {:>24}", r.n, r.degree, l, v);
            }
            Ok(s)
        }
    }
}

#[derive(Serialize)]
pub struct AdmissibleReport {
    family: Family,
    bound: String,
    bound_decimal: f64,
    pub max_index: Option<u32>,
    conditions: Vec<Condition>,
    within_proven_range: bool,
    error: Option<String>,
}

impl AdmissibleReport {
    pub fn new(f: &Family) -> Self {
        let bound = f.bound();
        let (max_index, error) = match f.max_index() {
            Ok(n) => (Some(n), None),
            Err(e) => (None, Some(e.to_string())),
        };
        AdmissibleReport {
            family: f.clone(),
            bound: bound.to_string(),
            bound_decimal: to_f64(&bound),
            max_index,
            conditions: f.conditions(),
            within_proven_range: f.within_proven_range(),
            error,
        }
    }
}

pub fn admissible(r: &AdmissibleReport, format: Format) -> CliResult<String> {
    let max = r.max_index.map(|n| n.to_string()).unwrap_or_else(|| "none".into());
    match format {
        Format::Json => json(r),
        Format::Csv => {
            let mut pairs = vec![("C", r.bound.clone()), ("max_index", max)];
            for c in &r.conditions {
                pairs.push((c.name.as_str(), if c.holds { "pass".into() } else { "fail".into() }));
            }
            name_values(pairs)
        }
        Format::Text => {
            let mut s = format!("{}\nC = {} ({})\nmax index {max}\n", r.family.describe(), r.bound, r.bound_decimal);
            for c in &r.conditions {
                let status = if c.holds { "pass" } else { "fail" };
                let note = if c.enforced { "" } else { " (not enforced)" };
                let _ = writeln!(s, "  {status}  {}{note}", c.name);
            }
            if let Some(e) = &r.error {
                let _ = writeln!(s, "{e}");
            }
            Ok(s)
        }
    }
}

pub fn gram(g: &GramReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => json(g),
        Format::Csv => {
            let mut s = String::new();
            for row in &g.gram {
                let line: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
                let _ = writeln!(s, "{}", line.join(","));
            }
            Ok(s)
        }
        Format::Text => Ok(format!(
            "{} n = 0..={}\nmax normalized off-diagonal {:.3e} (tol {:e})\nmax diagonal rel error {:.3e} (tol {:e})\node residuals ok: {}\nquadrature level {}, {} evaluations\nverdict: {:?}\n",
            g.family.describe(),
            g.n_max,
            g.max_offdiag_normalized,
            g.tol_off,
            g.max_diag_relerr,
            g.tol_diag,
            g.ode_residual_ok,
            g.quad_level,
            g.evaluations,
            g.verdict
        )),
    }
}

pub fn check(c: &Check, cmp: Option<&[OracleComparison]>, format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                check: &'a Check,
                #[serde(skip_serializing_if = "Option::is_none")]
                comparisons: Option<&'a [OracleComparison]>,
            }
            json(&Out { check: c, comparisons: cmp })
        }
        Format::Csv => csv_rows([c]),
        Format::Text => Ok(format!("{:?}  {}: {}\n", c.status, c.name, c.detail)),
    }
}

pub fn full(r: &FullReport, format: Format) -> CliResult<String> {
    match format {
        Format::Json => json(r),
        Format::Csv => csv_rows(&r.checks),
        Format::Text => {
            let mut s = format!("{}\n", r.family.describe());
            for c in &r.checks {
                let _ = writeln!(s, "{:<8} {:<12} {}", format!("{:?}", c.status), c.name, c.detail);
            }
            let _ = writeln!(s, "verdict: {:?}", r.verdict);
            Ok(s)
        }
    }
}

pub fn projection(p: &Projection, format: Format) -> CliResult<String> {
    match format {
        Format::Json => json(p),
        Format::Csv => {
            let names: Vec<String> = (0..p.coefficients.len()).map(|n| format!("c{n}")).collect();
            let mut pairs: Vec<(&str, String)> =
                names.iter().zip(&p.coefficients).map(|(n, c)| (n.as_str(), format!("{c:e}"))).collect();
            pairs.push(("error", format!("{:e}", p.error)));
            pairs.push(("relative_error", format!("{:e}", p.relative_error)));
            pairs.push(("parseval_error", format!("{:e}", p.parseval_error)));
            pairs.push(("target_norm", format!("{:e}", p.target_norm)));
            name_values(pairs)
        }
        Format::Text => {
            let mut s = format!("{} n = 0..={}\n", p.family.describe(), p.n_max);
            for (n, c) in p.coefficients.iter().enumerate() {
                let _ = writeln!(s, "c{n:<3} {c:.16e}");
            }
            let _ = writeln!(s, "error {:.6e} (relative {:.3e})", p.error, p.relative_error);
            Ok(s)
        }
    }
}
