//! Weighted least-squares projection onto the span of a finite family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{halfline_vec, QuadConfig};
use crate::sturm::Support;
use crate::{Family, LogScaled, RealPoly};

/// Quadrature tolerance for projections.
pub const PROJECT_QUAD_TOL: f64 = 1e-11;
/// Sampled tables are piecewise linear, so the rule only gets this far.
pub const TABLE_QUAD_TOL: f64 = 1e-6;

/// A real function evaluated in sign/log form so targets with huge or tiny
/// values do not overflow before the weight is applied.
pub trait TargetFn {
    /// `(sign, ln|f(x)|)`; sign 0 means `f(x) = 0`.
    fn sign_ln(&self, x: f64) -> (f64, f64);

    fn lower_accuracy(&self) -> bool {
        false
    }
}

impl<G: Fn(f64) -> f64> TargetFn for G {
    fn sign_ln(&self, x: f64) -> (f64, f64) {
        let v = self(x);
        (if v == 0.0 { 0.0 } else { v.signum() }, v.abs().ln())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// `x^j`
    Monomial(u32),
    /// `x^j e^{−x²}`
    Gauss(u32),
    Poly(RealPoly),
    /// Samples `(x, f(x))` sorted by `x`, linearly interpolated and zero
    /// outside their range.
    Table(Vec<(f64, f64)>),
}

fn monomial_sign_ln(j: u32, x: f64) -> (f64, f64) {
    if j == 0 {
        return (1.0, 0.0);
    }
    if x == 0.0 {
        return (0.0, f64::NEG_INFINITY);
    }
    let sign = if x < 0.0 && j % 2 == 1 { -1.0 } else { 1.0 };
    (sign, j as f64 * x.abs().ln())
}

impl TargetFn for Target {
    fn sign_ln(&self, x: f64) -> (f64, f64) {
        match self {
            Target::Monomial(j) => monomial_sign_ln(*j, x),
            Target::Gauss(j) => {
                let (s, l) = monomial_sign_ln(*j, x);
                (s, l - x * x)
            }
            Target::Poly(p) => {
                let (mant, ls) = p.eval_scaled(x);
                (if mant == 0.0 { 0.0 } else { mant.signum() }, mant.abs().ln() + ls)
            }
            Target::Table(rows) => {
                let v = interpolate(rows, x);
                (if v == 0.0 { 0.0 } else { v.signum() }, v.abs().ln())
            }
        }
    }

    fn lower_accuracy(&self) -> bool {
        matches!(self, Target::Table(_))
    }
}

fn interpolate(rows: &[(f64, f64)], x: f64) -> f64 {
    let (Some(first), Some(last)) = (rows.first(), rows.last()) else {
        return 0.0;
    };
    if x < first.0 || x > last.0 {
        return 0.0;
    }
    let i = rows.partition_point(|r| r.0 <= x);
    if i == 0 || i >= rows.len() {
        return if i == 0 { first.1 } else { last.1 };
    }
    let (x0, y0) = rows[i - 1];
    let (x1, y1) = rows[i];
    if x1 == x0 {
        y1
    } else {
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

impl Target {
    /// `monomial:<j>`, `gauss:<j>` or `member:<n>`; tables are loaded by the
    /// caller.
    pub fn parse(text: &str, family: &Family) -> Result<Target> {
        let (kind, arg) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("target '{text}' is not of the form kind:value")))?;
        let idx = || -> Result<u32> {
            arg.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index '{arg}' in target '{text}'")))
        };
        match kind.trim() {
            "monomial" => Ok(Target::Monomial(idx()?)),
            "gauss" => Ok(Target::Gauss(idx()?)),
            "member" => Ok(Target::Poly(family.member_real(idx()?)?)),
            other => Err(Error::Parse(format!("unknown target kind '{other}'"))),
        }
    }

    /// Rows must be sorted by `x` and finite.
    pub fn table(mut rows: Vec<(f64, f64)>) -> Result<Target> {
        if rows.iter().any(|r| !r.0.is_finite() || !r.1.is_finite()) {
            return Err(Error::Parse("table contains non-finite values".into()));
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Target::Table(rows))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub family: Family,
    pub n_max: u32,
    /// `c_n` with `f ≈ Σ c_n P_n`.
    pub coefficients: Vec<f64>,
    /// `‖f − Σ c_n P_n‖_W`, integrated directly.
    pub error: f64,
    /// `error / ‖f‖_W`.
    pub relative_error: f64,
    /// `√(‖f‖² − Σ c_n² ‖P_n‖²)`, clamped at 0.
    pub parseval_error: f64,
    /// The Parseval difference came out negative.
    pub clamped: bool,
    pub target_norm: f64,
    pub lower_accuracy: bool,
}

impl Projection {
    /// `Σ c_n P_n` as a polynomial.
    pub fn reconstruction(&self) -> Result<RealPoly> {
        let mut acc = RealPoly::zero();
        for (n, c) in self.coefficients.iter().enumerate() {
            acc = &acc + &self.family.member_real(n as u32)?.scale(c);
        }
        Ok(acc)
    }
}

pub fn project(f: &impl TargetFn, family: &Family, n_max: u32) -> Result<Projection> {
    let tol = if f.lower_accuracy() { TABLE_QUAD_TOL } else { PROJECT_QUAD_TOL };
    project_with(f, family, n_max, &QuadConfig::with_tol(tol))
}

pub fn project_with(f: &impl TargetFn, family: &Family, n_max: u32, cfg: &QuadConfig) -> Result<Projection> {
    let top = family.max_index()?;
    if n_max > top {
        return Err(Error::Admissibility(format!(
            "{}: n_max = {n_max} exceeds the maximum index {top}",
            family.describe()
        )));
    }
    let polys: Vec<RealPoly> = (0..=n_max).map(|n| family.member_real(n)).collect::<Result<_>>()?;
    let norms: Vec<LogScaled> = (0..=n_max).map(|n| family.norm(n)).collect::<Result<_>>()?;
    let half_ln_norm: Vec<f64> = norms.iter().map(|v| 0.5 * v.ln_abs).collect();
    let weight = family.weight();
    let both_sides = weight.support() == Support::Line;
    let count = polys.len();

    // member values scaled by 1/‖P_n‖, in sign/log form
    let normalized = |x: f64, signs: &mut [f64], logs: &mut [f64]| {
        for (i, p) in polys.iter().enumerate() {
            let (mant, ls) = p.eval_scaled(x);
            signs[i] = if mant == 0.0 { 0.0 } else { mant.signum() };
            logs[i] = mant.abs().ln() + ls - half_ln_norm[i];
        }
    };
    let points = |x: f64| if both_sides { vec![x, -x] } else { vec![x] };

    // pass 1: ⟨f, P̂_n⟩ and ‖f‖²
    let mut signs = vec![0.0; count];
    let mut logs = vec![0.0; count];
    let first = halfline_vec(count + 1, cfg, |x: f64, ln_jac: f64, out: &mut [f64]| {
        for xs in points(x) {
            let lw = weight.ln_density(xs);
            let (sf, lf) = f.sign_ln(xs);
            if lw == f64::NEG_INFINITY || sf == 0.0 {
                continue;
            }
            normalized(xs, &mut signs, &mut logs);
            let base = lw + ln_jac + lf;
            for n in 0..count {
                if signs[n] != 0.0 {
                    out[n] += sf * signs[n] * (base + logs[n]).exp();
                }
            }
            out[count] += (base + lf).exp();
        }
    })?;
    let hat: Vec<f64> = first.value[..count].to_vec();
    let f_sq = first.value[count];
    if !f_sq.is_finite() {
        return Err(Error::Divergence("weighted norm of the target is not finite".into()));
    }
    let ln_hat: Vec<f64> = hat.iter().map(|c| c.abs().ln()).collect();

    // pass 2: ∫ W (f − Σ ĉ_n P̂_n)², evaluated with a common shift; a
    // residual that is pure rounding noise never settles relatively
    let cfg2 = QuadConfig { abs_tol: cfg.abs_tol.max(cfg.tol * f_sq), ..*cfg };
    let second = halfline_vec(1, &cfg2, |x: f64, ln_jac: f64, out: &mut [f64]| {
        for xs in points(x) {
            let lw = weight.ln_density(xs);
            if lw == f64::NEG_INFINITY {
                continue;
            }
            let (sf, lf) = f.sign_ln(xs);
            normalized(xs, &mut signs, &mut logs);
            let mut shift = if sf == 0.0 { f64::NEG_INFINITY } else { lf };
            for n in 0..count {
                if signs[n] != 0.0 && hat[n] != 0.0 {
                    shift = shift.max(ln_hat[n] + logs[n]);
                }
            }
            if shift == f64::NEG_INFINITY {
                continue;
            }
            let mut r = if sf == 0.0 { 0.0 } else { sf * (lf - shift).exp() };
            for n in 0..count {
                if signs[n] != 0.0 && hat[n] != 0.0 {
                    r -= hat[n].signum() * signs[n] * (ln_hat[n] + logs[n] - shift).exp();
                }
            }
            out[0] += r * r * (lw + ln_jac + 2.0 * shift).exp();
        }
    })?;
    let error = second.value[0].max(0.0).sqrt();
    let parseval = f_sq - hat.iter().map(|c| c * c).sum::<f64>();
    let target_norm = f_sq.sqrt();
    Ok(Projection {
        family: family.clone(),
        n_max,
        coefficients: hat.iter().zip(&half_ln_norm).map(|(c, h)| c * (-h).exp()).collect(),
        error,
        relative_error: if target_norm > 0.0 { error / target_norm } else { 0.0 },
        parseval_error: parseval.max(0.0).sqrt(),
        clamped: parseval < 0.0,
        target_norm,
        lower_accuracy: f.lower_accuracy(),
    })
}
