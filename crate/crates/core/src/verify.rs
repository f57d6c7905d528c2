//! End-to-end checks: quadrature Gram matrices against the closed-form
//! norms, exact ODE residuals, degree and parity structure, and a
//! Gram-Schmidt oracle driven by exact moment ratios.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{pochhammer, rat, to_f64};
use crate::polycore::{Coefficient, Parity, SparsePoly};
use crate::quadrature::{halfline_vec, QuadConfig};
use crate::sturm::{residual, Support, WeightSpec};
use crate::{Family, LogScaled, Rational, RationalPoly, RealPoly};

pub const DEFAULT_GRAM_TOL: f64 = 1e-8;
/// Truncation used when no maximum index is requested and the family admits
/// more members than a desk-scale check needs.
pub const DEFAULT_TRUNCATION: u32 = 30;
pub const ORACLE_MEMBERS: u32 = 6;
pub const ORACLE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
    }

    fn skipped(name: &str, why: impl Into<String>) -> Self {
        Check { name: name.into(), status: Status::Skipped, detail: why.into() }
    }

    fn failed(name: &str, err: &Error) -> Self {
        Check::new(name, false, err.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub family: Family,
    pub n_max: u32,
    /// `∫ W P_n P_k / √(‖P_n‖² ‖P_k‖²)` with the closed-form norms, so the
    /// ideal matrix is the identity.
    pub gram: Vec<Vec<f64>>,
    pub formula_norms: Vec<LogScaled>,
    pub quadrature_norms: Vec<LogScaled>,
    pub max_offdiag_normalized: f64,
    pub max_diag_relerr: f64,
    pub ode_residual_ok: bool,
    pub verdict: Verdict,
    pub tol_off: f64,
    pub tol_diag: f64,
    pub quad_level: u32,
    pub quad_error_estimate: f64,
    pub evaluations: usize,
}

/// Pairs `(n, k)` with `n ≤ k` whose Gram entry is not zero by parity.
fn gram_pairs(family: &Family, n_max: u32) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for n in 0..=n_max as usize {
        for k in n..=n_max as usize {
            if !family.is_symmetric() || (n + k) % 2 == 0 {
                pairs.push((n, k));
            }
        }
    }
    pairs
}

/// Quadrature tolerance for a check at tolerance `tol`: three digits of
/// headroom, but never tighter than the default rule tolerance, which
/// high-degree members sit close to in floating point.
pub fn quad_tol_for(tol: f64) -> f64 {
    (tol * 1e-3).max(crate::quadrature::DEFAULT_TOL)
}

/// Quadrature Gram matrix of members `0..=n_max`.
pub fn gram_matrix(family: &Family, n_max: u32, tol: f64) -> Result<GramReport> {
    gram_matrix_with(family, n_max, tol, tol, &QuadConfig::with_tol(quad_tol_for(tol)))
}

pub fn gram_matrix_with(
    family: &Family,
    n_max: u32,
    tol_off: f64,
    tol_diag: f64,
    cfg: &QuadConfig,
) -> Result<GramReport> {
    let top = family.max_index()?;
    if n_max > top {
        return Err(Error::Admissibility(format!(
            "{}: n_max = {n_max} exceeds the maximum index {top}",
            family.describe()
        )));
    }
    let polys: Vec<RealPoly> = (0..=n_max).map(|n| family.member_real(n)).collect::<Result<_>>()?;
    let norms: Vec<LogScaled> = (0..=n_max).map(|n| family.norm(n)).collect::<Result<_>>()?;
    if let Some(n) = norms.iter().position(|v| v.sign <= 0) {
        return Err(Error::Consistency(format!("norm square of member {n} is not positive")));
    }
    let half_ln_norm: Vec<f64> = norms.iter().map(|v| 0.5 * v.ln_abs).collect();
    let pairs = gram_pairs(family, n_max);
    let weight = family.weight();
    let fold_negative = weight.support() == Support::Line && !weight.is_even();
    let dim = pairs.len();
    let count = polys.len();

    let mut logs = vec![0.0f64; count];
    let mut signs = vec![0.0f64; count];
    let r = halfline_vec(dim, cfg, |x: f64, ln_jac: f64, out: &mut [f64]| {
        let points: &[f64] = if fold_negative { &[x, -x] } else { &[x] };
        for &xs in points {
            let lw = weight.ln_density(xs);
            if lw == f64::NEG_INFINITY {
                continue;
            }
            for (i, p) in polys.iter().enumerate() {
                let (mant, ls) = p.eval_scaled(xs);
                signs[i] = mant.signum() * (mant != 0.0) as u8 as f64;
                logs[i] = mant.abs().ln() + ls - half_ln_norm[i];
            }
            let base = lw + ln_jac;
            for (slot, &(n, k)) in out.iter_mut().zip(&pairs) {
                let s = signs[n] * signs[k];
                if s != 0.0 {
                    *slot += s * (base + logs[n] + logs[k]).exp();
                }
            }
        }
    })?;

    let factor = if weight.support() == Support::Line && weight.is_even() { 2.0 } else { 1.0 };
    let mut gram = vec![vec![0.0; count]; count];
    for (&(n, k), v) in pairs.iter().zip(&r.value) {
        gram[n][k] = factor * v;
        gram[k][n] = factor * v;
    }
    let mut max_off = 0.0f64;
    let mut max_diag = 0.0f64;
    for n in 0..count {
        max_diag = max_diag.max((gram[n][n] - 1.0).abs());
        for k in 0..count {
            if k != n {
                let denom = (gram[n][n] * gram[k][k]).abs().sqrt();
                max_off = max_off.max(gram[n][k].abs() / denom);
            }
        }
    }
    let quadrature_norms = (0..count).map(|n| LogScaled::from_f64(gram[n][n]) * norms[n]).collect();
    let ode_residual_ok = check_ode(family, n_max).status == Status::Pass;
    let verdict = Verdict::from_bool(max_off < tol_off && max_diag < tol_diag && ode_residual_ok);
    Ok(GramReport {
        family: family.clone(),
        n_max,
        gram,
        formula_norms: norms,
        quadrature_norms,
        max_offdiag_normalized: max_off,
        max_diag_relerr: max_diag,
        ode_residual_ok,
        verdict,
        tol_off,
        tol_diag,
        quad_level: r.level,
        quad_error_estimate: r.error_estimate,
        evaluations: r.evaluations,
    })
}

/// Largest coefficient magnitude of a residual relative to the size of the
/// terms that produced it.
fn float_residual_ratio(eq: &crate::sturm::SLEquation<f64>, y: &RealPoly, n: u32) -> f64 {
    let r = residual(eq, y, n);
    let scale = eq.a.max_abs_coeff() * y.derivative(2).max_abs_coeff()
        + eq.b.max_abs_coeff() * y.derivative(1).max_abs_coeff()
        + (eq.lambda.at(n).abs() * eq.c.max_abs_coeff() + eq.d.abs() + eq.e.abs()) * y.max_abs_coeff();
    if scale == 0.0 {
        0.0
    } else {
        r.max_abs_coeff() / scale
    }
}

/// Every member up to `n_max` solves the family's equation: exactly for
/// rational families, to `1e−9` relative for `J`.
pub fn check_ode(family: &Family, n_max: u32) -> Check {
    let eq = family.equation();
    let mut bad = Vec::new();
    if family.has_exact_members() {
        for n in 0..=n_max {
            match family.member_exact(n) {
                Ok(y) if residual(&eq, &y, n).is_zero() => {}
                Ok(_) => bad.push(n.to_string()),
                Err(e) => return Check::failed("ode", &e),
            }
        }
        Check::new(
            "ode",
            bad.is_empty(),
            if bad.is_empty() {
                format!("exact residual is the zero polynomial for n = 0..={n_max}")
            } else {
                format!("nonzero residual for n = {}", bad.join(", "))
            },
        )
    } else {
        let eqf = eq.to_real();
        let mut worst = 0.0f64;
        for n in 0..=n_max {
            match family.member_real(n) {
                Ok(y) => {
                    let ratio = float_residual_ratio(&eqf, &y, n);
                    worst = worst.max(ratio);
                    if ratio > 1e-9 {
                        bad.push(n.to_string());
                    }
                }
                Err(e) => return Check::failed("ode", &e),
            }
        }
        Check::new("ode", bad.is_empty(), format!("largest relative float residual {worst:.3e} for n = 0..={n_max}"))
    }
}

/// Degrees follow the family's degree law.
pub fn check_degree_law(family: &Family, n_max: u32) -> Check {
    let mut bad = Vec::new();
    for n in 0..=n_max {
        match family.member_real(n) {
            Ok(y) if y.degree() == family.degree(n) => {}
            Ok(y) => bad.push(format!("n={n}: {} vs {}", y.degree(), family.degree(n))),
            Err(e) => return Check::failed("degree_law", &e),
        }
    }
    let degrees: Vec<String> = (0..=n_max).map(|n| family.degree(n).to_string()).collect();
    Check::new(
        "degree_law",
        bad.is_empty(),
        if bad.is_empty() {
            format!("degrees {}", degrees.join(","))
        } else {
            format!("mismatch {}", bad.join("; "))
        },
    )
}

/// Members of symmetric families have the parity of their index.
pub fn check_parity(family: &Family, n_max: u32) -> Check {
    if !family.is_symmetric() {
        return Check::skipped("parity", format!("{} is not a symmetric family", family.name()));
    }
    let mut bad = Vec::new();
    for n in 0..=n_max {
        match family.member_exact(n) {
            Ok(y) => {
                let want = Parity::of_index(n);
                if y.parity() != want || !y.exponents().all(|e| want.admits(e)) {
                    bad.push(n.to_string());
                }
            }
            Err(e) => return Check::failed("parity", &e),
        }
    }
    Check::new(
        "parity",
        bad.is_empty(),
        if bad.is_empty() {
            format!("every exponent has the parity of its index for n = 0..={n_max}")
        } else {
            format!("wrong parity for n = {}", bad.join(", "))
        },
    )
}

/// The first norm equals a closed-form moment: `P_0 = c x^e` so
/// `‖P_0‖² = c² μ_{2e}`.
pub fn check_first_norm(family: &Family) -> Check {
    let run = || -> Result<(f64, String)> {
        let p0 = family.member_real(0)?;
        let (e, c) = p0.terms().next().map(|(e, c)| (e, *c)).ok_or_else(|| Error::Consistency("P_0 is zero".into()))?;
        if p0.len() != 1 {
            return Err(Error::Consistency("P_0 is not a monomial".into()));
        }
        let mu = family.weight().moment(2 * e)?;
        let want = mu * LogScaled::from_f64(c * c);
        let got = family.norm(0)?;
        Ok((got.rel_diff(&want), format!("norm(0) = {got}, moment = {want}")))
    };
    match run() {
        Ok((rel, detail)) => Check::new("first_norm", rel < 1e-12, format!("{detail}, rel diff {rel:.2e}")),
        Err(Error::UnsupportedShape(why)) => Check::skipped("first_norm", why),
        Err(e) => Check::failed("first_norm", &e),
    }
}

// ---------------------------------------------------------------- oracle

/// Modified Gram-Schmidt on the basis `e_0, e_1, …` under the inner product
/// `⟨u, v⟩ = uᵀ G v`. Row `i` of the result holds the coefficients of the
/// `i`-th orthogonal vector, which has unit coefficient on `e_i`.
pub fn modified_gram_schmidt<T: Coefficient>(gram: &[Vec<T>]) -> Result<Vec<Vec<T>>> {
    let n = gram.len();
    let inner = |u: &[T], v: &[T]| -> T {
        let mut acc = T::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if !v[j].is_zero() {
                    acc = acc + u[i].clone() * gram[i][j].clone() * v[j].clone();
                }
            }
        }
        acc
    };
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(n);
    let mut sq: Vec<T> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![T::zero(); n];
        v[i] = T::one();
        for (q, qq) in basis.iter().zip(&sq) {
            let coef = inner(&v, q) / qq.clone();
            for (vj, qj) in v.iter_mut().zip(q) {
                *vj = vj.clone() - coef.clone() * qj.clone();
            }
        }
        let vv = inner(&v, &v);
        if vv.is_zero() {
            return Err(Error::Consistency(format!("Gram-Schmidt vector {i} has zero norm")));
        }
        basis.push(v);
        sq.push(vv);
    }
    Ok(basis)
}

fn exact_ratio_check(what: &str, j: u32, positive: &[&Rational]) -> Result<()> {
    if positive.iter().all(|v| v.is_positive()) {
        Ok(())
    } else {
        Err(Error::Divergence(format!("moment x^{j} of the {what} weight diverges")))
    }
}

fn lattice_step(j: u32, j0: u32, step: u32) -> Result<u32> {
    if (j - j0) % step != 0 {
        return Err(Error::Parameter(format!(
            "exponents {j0} and {j} are not commensurate with the moment recurrence step {step}"
        )));
    }
    Ok((j - j0) / step)
}

/// Exact moment ratios `μ_j / μ_{j0}` for the requested exponents, where
/// `j0` is the smallest one. Ratios of Beta and Gamma values at arguments
/// that differ by integers are Pochhammer quotients, so no rounding occurs.
pub fn scaled_moments(weight: &WeightSpec, exponents: &[u32]) -> Result<BTreeMap<u32, Rational>> {
    let mut out = BTreeMap::new();
    let Some(&j0) = exponents.iter().min() else {
        return Ok(out);
    };
    let even = weight.is_even();
    if even && j0 % 2 == 1 {
        return Err(Error::Parameter("smallest moment of a symmetric weight must be even".into()));
    }
    for &j in exponents {
        if even && j % 2 == 1 {
            out.insert(j, Rational::zero());
            continue;
        }
        let nu = match weight {
            WeightSpec::JacobiType { a, b, m } => {
                let x = |j: u32| (rat(2) * a + rat(j as i64 + 1)) / rat(2 * *m as i64);
                let (x0, xj) = (x(j0), x(j));
                let (y0, yj) = (-b - &x0, -b - &xj);
                exact_ratio_check("|x|^(2a)(1+x^(2m))^b", j, &[&x0, &y0, &xj, &yj])?;
                let d = lattice_step(j, j0, 2 * m)?;
                pochhammer(&x0, d) / pochhammer(&yj, d)
            }
            WeightSpec::BesselType { a, m } => {
                let z = |j: u32| -(rat(2) * a + rat(j as i64 + 1)) / rat(2 * *m as i64);
                let (z0, zj) = (z(j0), z(j));
                exact_ratio_check("|x|^(2a)exp(-x^(-2m))", j, &[&z0, &zj])?;
                let d = lattice_step(j, j0, 2 * m)?;
                Rational::one() / pochhammer(&zj, d)
            }
            WeightSpec::HalfLineM { p, q } => {
                let x0 = q + rat(j0 as i64 + 1);
                let yj = p - rat(j as i64 + 1);
                let y0 = p - rat(j0 as i64 + 1);
                exact_ratio_check("x^q(1+x)^-(p+q)", j, &[&x0, &y0, &yj])?;
                let d = j - j0;
                pochhammer(&x0, d) / pochhammer(&yj, d)
            }
            WeightSpec::HalfLineN { p } => {
                let z0 = -p - rat(j0 as i64 + 1);
                let zj = -p - rat(j as i64 + 1);
                exact_ratio_check("x^p e^(-1/x)", j, &[&z0, &zj])?;
                Rational::one() / pochhammer(&zj, j - j0)
            }
            WeightSpec::LineI { p } => {
                let x0 = rat(j0 as i64 + 1) / rat(2);
                let y = |j: u32| p - Rational::one() - rat(j as i64) / rat(2);
                let (y0, yj) = (y(j0), y(j));
                exact_ratio_check("(1+x^2)^-(p-1/2)", j, &[&y0, &yj])?;
                let d = (j - j0) / 2;
                pochhammer(&x0, d) / pochhammer(&yj, d)
            }
            WeightSpec::LineJ { .. } => {
                return Err(Error::UnsupportedShape("no closed-form moments for the (1+x^2)^-p exp(q atan x) weight".into()));
            }
        };
        out.insert(j, nu);
    }
    Ok(out)
}

/// Monic orthogonal polynomials on the exponent lattice, by exact
/// Gram-Schmidt over the first `count` lattice monomials with closed-form
/// moments.
pub fn gs_oracle(weight: &WeightSpec, lattice: &[u32], count: usize) -> Result<Vec<RationalPoly>> {
    let exps: Vec<u32> = lattice.iter().copied().take(count).collect();
    let mut sums: Vec<u32> = exps.iter().flat_map(|&a| exps.iter().map(move |&b| a + b)).collect();
    sums.sort_unstable();
    sums.dedup();
    let nu = scaled_moments(weight, &sums)?;
    let gram: Vec<Vec<Rational>> =
        exps.iter().map(|&a| exps.iter().map(|&b| nu[&(a + b)].clone()).collect()).collect();
    let basis = modified_gram_schmidt(&gram)?;
    Ok(basis
        .into_iter()
        .map(|row| SparsePoly::from_terms(exps.iter().copied().zip(row)))
        .collect())
}

/// Determinant by exact elimination.
pub fn det_exact(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] -= v;
            }
        }
    }
    det
}

/// Weighted distance from `x^e` to the span of `{x^l : l ∈ lattice}`, as the
/// square root of a ratio of Gram determinants over exact moment ratios.
pub fn moment_distance(weight: &WeightSpec, e: u32, lattice: &[u32]) -> Result<LogScaled> {
    let mut exps = vec![e];
    exps.extend_from_slice(lattice);
    let mut sums: Vec<u32> = exps.iter().flat_map(|&a| exps.iter().map(move |&b| a + b)).collect();
    sums.sort_unstable();
    sums.dedup();
    let nu = scaled_moments(weight, &sums)?;
    let mu0 = weight.moment(sums[0])?;
    let gram = |xs: &[u32]| -> Vec<Vec<Rational>> {
        xs.iter().map(|&a| xs.iter().map(|&b| nu[&(a + b)].clone()).collect()).collect()
    };
    let ratio = det_exact(gram(&exps)) / det_exact(gram(lattice));
    (mu0 * LogScaled::from_rational(&ratio)).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub parity: Parity,
    pub indices: Vec<u32>,
    pub lattice: Vec<u32>,
    pub exact_match: bool,
    pub max_rel_diff: f64,
}

/// Coefficient-wise relative difference, taking the larger magnitude of each
/// pair as the reference.
pub fn coeff_rel_diff(a: &RationalPoly, b: &RationalPoly) -> f64 {
    let exps: std::collections::BTreeSet<u32> = a.exponents().chain(b.exponents()).collect();
    let mut worst = 0.0f64;
    for e in exps {
        let (x, y) = (a.coeff(e), b.coeff(e));
        if x == y {
            continue;
        }
        let diff = to_f64(&(&x - &y)).abs();
        let refm = to_f64(&x).abs().max(to_f64(&y).abs());
        worst = worst.max(diff / refm);
    }
    worst
}

/// Compare the monic members of each parity chain against [`gs_oracle`].
pub fn oracle_comparisons(family: &Family, count: u32) -> Result<Vec<OracleComparison>> {
    let top = family.max_index()?;
    let weight = family.weight();
    let parities: &[Parity] = if family.is_symmetric() { &[Parity::Even, Parity::Odd] } else { &[Parity::None] };
    let mut out = Vec::new();
    for &parity in parities {
        let indices: Vec<u32> = family.chain_indices(parity, top).into_iter().take(count as usize).collect();
        if indices.is_empty() {
            continue;
        }
        let lattice = family.lattice(parity, indices.len() as u32);
        let oracle = gs_oracle(&weight, &lattice, lattice.len())?;
        let mut exact = true;
        let mut worst = 0.0f64;
        for (&n, want) in indices.iter().zip(&oracle) {
            let got = family.member_exact(n)?.monic();
            exact &= got == *want;
            worst = worst.max(coeff_rel_diff(&got, want));
        }
        out.push(OracleComparison { parity, indices, lattice, exact_match: exact, max_rel_diff: worst });
    }
    Ok(out)
}

pub fn check_oracle(family: &Family, count: u32) -> Check {
    match oracle_comparisons(family, count) {
        Ok(cmp) => {
            let worst = cmp.iter().map(|c| c.max_rel_diff).fold(0.0, f64::max);
            let exact = cmp.iter().all(|c| c.exact_match);
            let members: usize = cmp.iter().map(|c| c.indices.len()).sum();
            Check::new(
                "oracle",
                worst < ORACLE_TOL,
                format!("{members} monic members vs Gram-Schmidt oracle: max rel diff {worst:.2e}, exact match {exact}"),
            )
        }
        Err(Error::UnsupportedShape(why)) => Check::skipped("oracle", why),
        Err(e) => Check::failed("oracle", &e),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub family: Family,
    pub within_proven_range: bool,
    pub n_max: Option<u32>,
    pub checks: Vec<Check>,
    pub gram: Option<GramReport>,
    pub verdict: Verdict,
}

/// Run every check; a failed admissibility check skips the rest.
pub fn full_report(family: &Family, n_max: Option<u32>, tol: f64) -> FullReport {
    let mut checks = Vec::new();
    let names = ["degree_law", "parity", "ode", "first_norm", "gram", "oracle"];
    let admissible = match family.max_index() {
        Ok(top) => match n_max {
            Some(n) if n > top => Err(format!("n_max = {n} exceeds the maximum index {top}")),
            _ => Ok((top, n_max.unwrap_or(top.min(DEFAULT_TRUNCATION)))),
        },
        Err(e) => Err(e.to_string()),
    };
    let (top, n) = match admissible {
        Ok(v) => v,
        Err(why) => {
            checks.push(Check::new("admissibility", false, why));
            for name in names {
                checks.push(Check::skipped(name, "admissibility failed"));
            }
            return FullReport {
                family: family.clone(),
                within_proven_range: family.within_proven_range(),
                n_max,
                checks,
                gram: None,
                verdict: Verdict::Fail,
            };
        }
    };
    checks.push(Check::new("admissibility", true, format!("C = {}, max index {top}", family.bound())));
    checks.push(check_degree_law(family, n));
    checks.push(check_parity(family, n));
    checks.push(check_ode(family, n));
    checks.push(check_first_norm(family));
    let gram = match gram_matrix(family, n, tol) {
        Ok(g) => {
            checks.push(Check::new(
                "gram",
                g.verdict == Verdict::Pass,
                format!(
                    "off-diagonal {:.2e}, diagonal {:.2e} (tol {:.0e}) over n = 0..={n}",
                    g.max_offdiag_normalized, g.max_diag_relerr, tol
                ),
            ));
            Some(g)
        }
        Err(e) => {
            checks.push(Check::failed("gram", &e));
            None
        }
    };
    checks.push(check_oracle(family, ORACLE_MEMBERS));
    let ok = checks.iter().all(|c| c.status != Status::Fail);
    FullReport {
        family: family.clone(),
        within_proven_range: family.within_proven_range(),
        n_max: Some(n),
        checks,
        gram,
        verdict: Verdict::from_bool(ok),
    }
}


#[cfg(test)]
mod example_grams {
    use super::*;

    #[test]
    fn worked_examples_pass_gram_check() {
        for (f, n) in [(Family::example_psi(), 22), (Family::example_phi(), 30)] {
            let g = gram_matrix(&f, n, 1e-8).unwrap();
            assert_eq!(g.verdict, Verdict::Pass, "{}: off {} diag {}", f.describe(), g.max_offdiag_normalized, g.max_diag_relerr);
        }
    }
}
