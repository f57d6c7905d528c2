//! Double-exponential quadrature and closed-form moment oracles.
//!
//! The half line uses the exp-sinh map `x = exp((π/2) sinh t)`, finite
//! intervals use tanh-sinh. Both rules refine by halving the step and reusing
//! every earlier node, so level `l` costs only the new odd nodes. The node set
//! depends only on the level, which keeps results reproducible.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Signed};

use crate::error::{Error, Result};
use crate::numkernel::{complex_gamma, rat, rational_gamma};
use crate::{LogScaled, Rational};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_LEVEL: u32 = 12;
pub const MAX_LEVEL_ENV: &str = "FINORTHO_MAX_QUAD_LEVEL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Target relative error, measured against `∫|f|`.
    pub tol: f64,
    pub min_level: u32,
    pub max_level: u32,
    /// Differences below this absolute size also count as converged.
    pub abs_tol: f64,
}

impl QuadConfig {
    /// Default configuration with the given tolerance. The maximum level
    /// comes from `FINORTHO_MAX_QUAD_LEVEL` when set.
    pub fn with_tol(tol: f64) -> Self {
        let max_level = std::env::var(MAX_LEVEL_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .unwrap_or(DEFAULT_MAX_LEVEL);
        QuadConfig { tol, min_level: 3.min(max_level), max_level, abs_tol: 0.0 }
    }
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig::with_tol(DEFAULT_TOL)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    /// Absolute difference from the previous level (componentwise maximum
    /// relative to `∫|f|` for vector integrands).
    pub error_estimate: f64,
    pub level: u32,
    pub evaluations: usize,
}

fn cst<F: FromPrimitive>(x: f64) -> F {
    F::from_f64(x).expect("constant representable")
}

/// Trapezoidal refinement over `t ∈ [−t_max, t_max]`. `sample(t, out)` writes
/// the transformed integrand (Jacobian included) into `out`; non-finite
/// samples are dropped.
fn refine<F, S>(t_max: F, dim: usize, cfg: &QuadConfig, mut sample: S) -> Result<QuadResult<Vec<F>>>
where
    F: Float + FromPrimitive,
    S: FnMut(F, &mut [F]),
{
    let mut sum = vec![F::zero(); dim];
    let mut abs_sum = vec![F::zero(); dim];
    let mut buf = vec![F::zero(); dim];
    let mut evaluations = 0usize;
    let mut add = |t: F, sum: &mut [F], abs_sum: &mut [F], evaluations: &mut usize| {
        buf.iter_mut().for_each(|b| *b = F::zero());
        sample(t, &mut buf);
        *evaluations += 1;
        for i in 0..dim {
            if buf[i].is_finite() {
                sum[i] = sum[i] + buf[i];
                abs_sum[i] = abs_sum[i] + buf[i].abs();
            }
        }
    };

    // level 0: integer nodes
    let k_max = t_max.floor().to_i64().unwrap_or(0);
    for k in -k_max..=k_max {
        add(cst(k as f64), &mut sum, &mut abs_sum, &mut evaluations);
    }
    let mut prev: Vec<F> = sum.clone();
    let mut last_err = f64::INFINITY;

    for level in 1..=cfg.max_level {
        let h: F = cst(0.5f64.powi(level as i32));
        let steps = (t_max / h).floor().to_i64().unwrap_or(0);
        let mut j = 1i64;
        while j <= steps {
            let t = h * cst(j as f64);
            add(t, &mut sum, &mut abs_sum, &mut evaluations);
            add(-t, &mut sum, &mut abs_sum, &mut evaluations);
            j += 2;
        }
        let cur: Vec<F> = sum.iter().map(|&s| s * h).collect();
        let mut err = 0.0f64;
        let mut ok = true;
        for i in 0..dim {
            let diff = (cur[i] - prev[i]).abs().to_f64().unwrap_or(f64::INFINITY);
            let scale = (abs_sum[i] * h).to_f64().unwrap_or(f64::INFINITY);
            let rel = if scale > 0.0 { diff / scale } else { 0.0 };
            err = err.max(rel);
            if !(diff <= cfg.tol * scale || diff <= cfg.abs_tol) {
                ok = false;
            }
        }
        last_err = err;
        prev = cur;
        if ok && level >= cfg.min_level {
            return Ok(QuadResult { value: prev, error_estimate: err, level, evaluations });
        }
    }
    let estimate = prev.first().and_then(|v| v.to_f64()).unwrap_or(f64::NAN);
    Err(Error::NonConvergence { level: cfg.max_level, estimate, error: last_err })
}

/// Vector integrand on `(0, ∞)`. `f(x, ln_jac, out)` must write
/// `exp(ln_jac)·g(x)` into `out`, where `exp(ln_jac) = dx/dt`. Passing the
/// Jacobian in log form lets callers fold it into log-domain integrands.
pub fn halfline_vec<F, G>(dim: usize, cfg: &QuadConfig, mut f: G) -> Result<QuadResult<Vec<F>>>
where
    F: Float + FloatConst + FromPrimitive,
    G: FnMut(F, F, &mut [F]),
{
    let half_pi = F::FRAC_PI_2();
    // keep x and dx/dt inside the exponent range
    let t_max = (cst::<F>(0.97) * F::max_value().ln() / half_pi).asinh();
    let ln_half_pi = half_pi.ln();
    refine(t_max, dim, cfg, |t, out| {
        let u = half_pi * t.sinh();
        let x = u.exp();
        if x == F::zero() {
            return;
        }
        let ln_jac = ln_half_pi + t.cosh().ln() + u;
        f(x, ln_jac, out);
    })
}

/// `∫₀^∞ f(x) dx` with the full result record.
pub fn halfline<F: Float + FloatConst + FromPrimitive>(f: impl Fn(F) -> F, cfg: &QuadConfig) -> Result<QuadResult<F>> {
    let r = halfline_vec(1, cfg, |x, lj, out: &mut [F]| {
        let v = f(x);
        out[0] = if v == F::zero() { v } else { v * lj.exp() };
    })?;
    Ok(QuadResult { value: r.value[0], error_estimate: r.error_estimate, level: r.level, evaluations: r.evaluations })
}

/// `∫₀^∞ f(x) dx`.
pub fn integrate_halfline<F: Float + FloatConst + FromPrimitive>(f: impl Fn(F) -> F, tol: F) -> Result<F> {
    let cfg = QuadConfig::with_tol(tol.to_f64().unwrap_or(DEFAULT_TOL));
    Ok(halfline(f, &cfg)?.value)
}

/// `∫_{−∞}^{∞} f(x) dx` for even `f`, as twice the half-line integral.
pub fn integrate_line_even<F: Float + FloatConst + FromPrimitive>(f: impl Fn(F) -> F, tol: F) -> Result<F> {
    Ok(cst::<F>(2.0) * integrate_halfline(f, tol)?)
}

/// `∫_{−∞}^{∞} f(x) dx` by folding onto the half line.
pub fn integrate_line<F: Float + FloatConst + FromPrimitive>(f: impl Fn(F) -> F, tol: F) -> Result<F> {
    integrate_halfline(|x: F| f(x) + f(-x), tol)
}

/// `∫_a^b f dx` by tanh-sinh. The integrand receives `(x, x − a, b − x)` with
/// both endpoint distances computed without cancellation.
pub fn integrate_interval<F, G>(a: F, b: F, f: G, cfg: &QuadConfig) -> Result<QuadResult<F>>
where
    F: Float + FloatConst + FromPrimitive,
    G: Fn(F, F, F) -> F,
{
    let len = b - a;
    let half = len / cst(2.0);
    let half_pi = F::FRAC_PI_2();
    let two: F = cst(2.0);
    let t_max = (cst::<F>(0.95) * F::max_value().ln() / two / half_pi).asinh();
    let r = refine(t_max, 1, cfg, |t, out| {
        let u = half_pi * t.sinh();
        let em = (-two * u.abs()).exp();
        // sech²u = 4e^{−2|u|}/(1+e^{−2|u|})²
        let sech2 = cst::<F>(4.0) * em / ((F::one() + em) * (F::one() + em));
        let (dl, dr) = if u >= F::zero() {
            (len / (F::one() + em), len * em / (F::one() + em))
        } else {
            (len * em / (F::one() + em), len / (F::one() + em))
        };
        if dl == F::zero() || dr == F::zero() {
            return;
        }
        let x = if dl <= dr { a + dl } else { b - dr };
        let w = half * half_pi * t.cosh() * sech2;
        if w == F::zero() {
            return;
        }
        out[0] = w * f(x, dl, dr);
    })?;
    Ok(QuadResult { value: r.value[0], error_estimate: r.error_estimate, level: r.level, evaluations: r.evaluations })
}

/// `∫_{−π/2}^{π/2} cos^e θ · e^{qθ} dθ`, for `e > −1`.
pub fn theta_integral(expnt: f64, q: f64, tol: f64) -> Result<f64> {
    if !(expnt > -1.0) {
        return Err(Error::Divergence(format!("cos^e integral needs e > -1, got {expnt}")));
    }
    // fold onto [0, π/2]: cos θ = sin(π/2 − θ) keeps the endpoint zero exact
    let cfg = QuadConfig::with_tol(tol);
    let r = integrate_interval(
        0.0,
        std::f64::consts::FRAC_PI_2,
        |theta: f64, _dl, dr: f64| {
            let c = dr.sin();
            let pow = if expnt == 0.0 { 1.0 } else { c.powf(expnt) };
            pow * 2.0 * (q * theta).cosh()
        },
        &cfg,
    )?;
    Ok(r.value)
}

/// `π 2^{−r} Γ(r+1) / |Γ(1 + (r + is)/2)|²`, the closed form of
/// [`theta_integral`] at integer exponent `r`.
pub fn cauchy_cos_moment(r: u32, s: f64) -> Result<f64> {
    let rf = r as f64;
    let g1 = complex_gamma(Complex::new(1.0 + rf / 2.0, s / 2.0))?;
    let g2 = complex_gamma(Complex::new(1.0 + rf / 2.0, -s / 2.0))?;
    let den = g1 * g2;
    let (_, ln_fact) = crate::numkernel::ln_gamma(rf + 1.0)?;
    Ok((std::f64::consts::PI.ln() - rf * std::f64::consts::LN_2 + ln_fact).exp() / den.re)
}

/// `B(x, y) = Γ(x)Γ(y)/Γ(x+y)` for exact positive arguments.
pub fn beta_ls(x: &Rational, y: &Rational) -> Result<LogScaled> {
    if !x.is_positive() || !y.is_positive() {
        return Err(Error::Divergence(format!("Beta({x}, {y}) needs positive arguments")));
    }
    Ok(rational_gamma(x)? * rational_gamma(y)? / rational_gamma(&(x + y))?)
}

/// `∫ |x|^{2a}(1 + x^{2m})^b x^j dx` over the real line:
/// `(1/m) B((2a+j+1)/(2m), −b − (2a+j+1)/(2m))` for even `j`, zero for odd `j`.
pub fn moment_jacobi_type(j: u32, a: &Rational, b: &Rational, m: u32) -> Result<LogScaled> {
    if j % 2 == 1 {
        return Ok(LogScaled::ZERO);
    }
    let xj = (rat(2) * a + rat(j as i64 + 1)) / rat(2 * m as i64);
    let yj = -b - &xj;
    if !xj.is_positive() || !yj.is_positive() {
        return Err(Error::Divergence(format!(
            "moment x^{j} of |x|^(2a)(1+x^(2m))^b diverges (a={a}, b={b}, m={m})"
        )));
    }
    Ok(beta_ls(&xj, &yj)? / LogScaled::from_f64(m as f64))
}

/// `∫ |x|^{2a} exp(−x^{−2m}) x^j dx` over the real line:
/// `(1/m) Γ(−(2a+j+1)/(2m))` for even `j`, zero for odd `j`.
pub fn moment_bessel_type(j: u32, a: &Rational, m: u32) -> Result<LogScaled> {
    if j % 2 == 1 {
        return Ok(LogScaled::ZERO);
    }
    let z = -(rat(2) * a + rat(j as i64 + 1)) / rat(2 * m as i64);
    if !z.is_positive() {
        return Err(Error::Divergence(format!("moment x^{j} of |x|^(2a)exp(-x^(-2m)) diverges (a={a}, m={m})")));
    }
    Ok(rational_gamma(&z)? / LogScaled::from_f64(m as f64))
}

/// `Γ(x)` for a rational argument, as a float.
pub fn gamma_value(x: &Rational) -> Result<f64> {
    Ok(rational_gamma(x)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::ratio;
    use crate::sturm::WeightSpec;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn halfline_examples() {
        assert!(close(integrate_halfline(|x: f64| (-x).exp(), 1e-12).unwrap(), 1.0, 1e-12));
        assert!(close(integrate_halfline(|x: f64| (1.0 + x).powi(-10), 1e-12).unwrap(), 1.0 / 9.0, 1e-12));
        let v = integrate_halfline(|x: f64| (-1.0 / x - 5.0 * x.ln()).exp(), 1e-12).unwrap();
        assert!(close(v, 6.0, 1e-12));
    }

    #[test]
    fn line_even_examples() {
        assert!(close(integrate_line_even(|x: f64| (-x * x).exp(), 1e-12).unwrap(), PI.sqrt(), 1e-12));
        let w = WeightSpec::JacobiType { a: rat(1), b: rat(-200), m: 1 };
        let got = integrate_line_even(|x: f64| w.density(x), 1e-12).unwrap();
        let want = beta_ls(&ratio(3, 2), &ratio(397, 2)).unwrap().to_f64();
        assert!(close(got, want, 1e-12), "{got} vs {want}");
        let w = WeightSpec::BesselType { a: rat(-49), m: 2 };
        let got = integrate_line_even(|x: f64| w.density(x), 1e-12).unwrap();
        let want = 0.5 * gamma_value(&ratio(97, 4)).unwrap();
        assert!(close(got, want, 1e-12), "{got} vs {want}");
    }

    #[test]
    fn single_precision_rule() {
        let v = integrate_halfline(|x: f32| (-x).exp(), 1e-6).unwrap();
        assert!((v - 1.0).abs() < 1e-5);
    }

    #[test]
    fn moment_examples() {
        let b = moment_jacobi_type(0, &rat(1), &rat(-200), 1).unwrap();
        assert!(b.rel_diff(&beta_ls(&ratio(3, 2), &ratio(397, 2)).unwrap()) < 1e-14);
        assert!(close(moment_jacobi_type(2, &rat(0), &rat(-3), 1).unwrap().to_f64(), PI / 8.0, 1e-13));
        assert!(moment_jacobi_type(3, &rat(0), &rat(-3), 1).unwrap().is_zero());
        let g = moment_bessel_type(0, &rat(-51), 2).unwrap();
        assert!(close(g.to_f64(), 0.5 * gamma_value(&ratio(101, 4)).unwrap(), 1e-13));
        let g = moment_bessel_type(4, &rat(-51), 2).unwrap();
        assert!(close(g.to_f64(), 0.5 * gamma_value(&ratio(97, 4)).unwrap(), 1e-13));
        assert!(matches!(moment_bessel_type(0, &rat(0), 1), Err(Error::Divergence(_))));
        assert!(matches!(moment_jacobi_type(0, &rat(0), &ratio(-1, 8), 2), Err(Error::Divergence(_))));
    }

    #[test]
    fn theta_examples() {
        assert!(close(theta_integral(1.0, 0.0, 1e-12).unwrap(), 2.0, 1e-12));
        assert!(close(theta_integral(0.0, 1.0, 1e-12).unwrap(), 2.0 * (PI / 2.0).sinh(), 1e-12));
        assert!(close(theta_integral(3.0, 1.0, 1e-12).unwrap(), cauchy_cos_moment(3, 1.0).unwrap(), 1e-10));
        assert!(matches!(theta_integral(-1.0, 0.0, 1e-12), Err(Error::Divergence(_))));
        // endpoint singularity
        let v = theta_integral(-0.5, 0.0, 1e-12).unwrap();
        let want = PI.sqrt() * gamma_value(&ratio(1, 4)).unwrap() / gamma_value(&ratio(3, 4)).unwrap();
        assert!(close(v, want, 1e-11), "{v} vs {want}");
    }

    #[test]
    fn cauchy_examples() {
        assert!(close(cauchy_cos_moment(0, 0.0).unwrap(), PI, 1e-14));
        assert!(close(cauchy_cos_moment(2, 0.0).unwrap(), PI / 2.0, 1e-14));
        assert!(close(cauchy_cos_moment(1, 0.0).unwrap(), 2.0, 1e-14));
    }

    #[test]
    fn theta_matches_cauchy_grid() {
        for r in 0..=8u32 {
            for s in [0.0, 0.5, 1.0, 2.0] {
                let t = theta_integral(r as f64, s, 1e-13).unwrap();
                let c = cauchy_cos_moment(r, s).unwrap();
                assert!(close(t, c, 1e-10), "r={r} s={s}: {t} vs {c}");
            }
        }
    }

    #[test]
    fn moments_match_quadrature() {
        let weights = [
            WeightSpec::JacobiType { a: rat(1), b: rat(-200), m: 1 },
            WeightSpec::JacobiType { a: rat(2), b: ratio(-23, 2), m: 2 },
            WeightSpec::BesselType { a: rat(-51), m: 2 },
            WeightSpec::BesselType { a: rat(-30), m: 1 },
            WeightSpec::HalfLineM { p: rat(30), q: ratio(1, 2) },
            WeightSpec::HalfLineN { p: rat(-25) },
            WeightSpec::LineI { p: rat(12) },
        ];
        for w in &weights {
            for j in 0..10u32 {
                let j = if w.is_even() { 2 * j } else { j };
                let want = match w.moment(j) {
                    Ok(v) => v.to_f64(),
                    Err(_) => continue,
                };
                let got = match w.support() {
                    crate::sturm::Support::HalfLine => {
                        integrate_halfline(|x: f64| (w.ln_density(x) + j as f64 * x.ln()).exp(), 1e-12).unwrap()
                    }
                    crate::sturm::Support::Line => integrate_line_even(
                        |x: f64| {
                            if j == 0 {
                                w.density(x)
                            } else {
                                (w.ln_density(x) + j as f64 * x.abs().ln()).exp()
                            }
                        },
                        1e-12,
                    )
                    .unwrap(),
                };
                assert!(close(got, want, 1e-10), "{w:?} j={j}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn next_level_within_error_estimate() {
        let w = WeightSpec::BesselType { a: rat(-51), m: 2 };
        let f = |x: f64| (w.ln_density(x) + 10.0 * x.abs().ln()).exp();
        let mut cfg = QuadConfig::with_tol(1e-10);
        cfg.max_level = 12;
        let r = halfline(f, &cfg).unwrap();
        let mut finer = cfg;
        finer.min_level = r.level + 1;
        let r2 = halfline(f, &finer).unwrap();
        assert!((r2.value - r.value).abs() <= r.error_estimate * r.value.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn non_convergence_reported() {
        let mut cfg = QuadConfig::with_tol(1e-15);
        cfg.max_level = 2;
        cfg.min_level = 1;
        let r = halfline(|x: f64| (x - 3.0).abs().sqrt() * (-x).exp(), &cfg);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
