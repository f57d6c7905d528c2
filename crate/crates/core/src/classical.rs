//! The four finite classical families `M`, `N`, `I`, `J` and the monic
//! generalized Bessel polynomials.
//!
//! Constructors accept any parameters; norms and index bounds enforce the
//! finite-orthogonality range.

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{
    factorial, gen_binomial, largest_int_below, ln_gamma, pochhammer, rat, ratio, rational_factorial, rational_gamma,
    to_f64,
};
use crate::polycore::SparsePoly;
use crate::quadrature::{cauchy_cos_moment, theta_integral};
use crate::sturm::{rational_str, EigenRule, SLEquation};
use crate::{LogScaled, Rational, RationalPoly, RealPoly};

/// Default tolerance for the imaginary residue of `J` coefficients.
pub const J_REALNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsM {
    #[serde(with = "rational_str")]
    pub p: Rational,
    #[serde(with = "rational_str")]
    pub q: Rational,
}

impl ParamsM {
    pub fn new(p: Rational, q: Rational) -> Self {
        ParamsM { p, q }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsN {
    #[serde(with = "rational_str")]
    pub p: Rational,
}

impl ParamsN {
    pub fn new(p: Rational) -> Self {
        ParamsN { p }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsI {
    #[serde(with = "rational_str")]
    pub p: Rational,
}

impl ParamsI {
    pub fn new(p: Rational) -> Self {
        ParamsI { p }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsJ {
    #[serde(with = "rational_str")]
    pub p: Rational,
    #[serde(with = "rational_str")]
    pub q: Rational,
}

impl ParamsJ {
    pub fn new(p: Rational, q: Rational) -> Self {
        ParamsJ { p, q }
    }
}

fn idx(n: u32) -> Rational {
    rat(n as i64)
}

fn sign_pow(n: u32) -> Rational {
    if n % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Largest index strictly below `bound`, or an admissibility error when
/// there is none.
fn max_below(bound: &Rational, what: &str) -> Result<u32> {
    let top = largest_int_below(bound);
    if top.is_negative() {
        return Err(Error::Admissibility(format!("{what}: bound {bound} admits no index")));
    }
    u32::try_from(top).map_err(|_| Error::Parameter(format!("{what}: bound {bound} is too large")))
}

// ---------------------------------------------------------------- M

/// `M_n^{(p,q)}(x) = (−1)^n n! Σ_k C(p−n−1, k) C(q+n, n−k) (−x)^k`.
pub fn m_poly(n: u32, prm: &ParamsM) -> RationalPoly {
    let top = &prm.p - idx(n) - Rational::one();
    let qn = &prm.q + idx(n);
    let pre = sign_pow(n) * factorial(n);
    SparsePoly::from_terms((0..=n).map(|k| {
        let c = &pre * gen_binomial(&top, k) * gen_binomial(&qn, n - k) * sign_pow(k);
        (k, c)
    }))
}

/// Largest `N` with `p > 2N + 1`; requires `q > −1`.
pub fn m_max_index(prm: &ParamsM) -> Result<u32> {
    if prm.q <= -Rational::one() {
        return Err(Error::Admissibility(format!("M family needs q > -1, got q = {}", prm.q)));
    }
    max_below(&((&prm.p - Rational::one()) / rat(2)), "M family")
}

/// `n!(p−n−1)!(q+n)! / [(p−2n−1)(p+q−n−1)!]`.
pub fn m_norm(n: u32, prm: &ParamsM) -> Result<LogScaled> {
    let ParamsM { p, q } = prm;
    let nn = idx(n);
    if *p <= rat(2) * &nn + Rational::one() || *q <= -Rational::one() {
        return Err(Error::Admissibility(format!("M norm needs p > 2n+1 and q > -1 (n={n}, p={p}, q={q})")));
    }
    let num = rational_factorial(&nn)?
        * rational_factorial(&(p - &nn - Rational::one()))?
        * rational_factorial(&(q + &nn))?;
    let den = LogScaled::from_rational(&(p - rat(2) * &nn - Rational::one()))
        * rational_factorial(&(p + q - &nn - Rational::one()))?;
    Ok(num / den)
}

/// `(x² + x) y'' + ((2−p)x + q + 1) y' − n(n+1−p) y = 0`.
pub fn m_equation(prm: &ParamsM) -> SLEquation<Rational> {
    let one = Rational::one();
    SLEquation {
        a: SparsePoly::from_terms([(2, one.clone()), (1, one.clone())]),
        b: SparsePoly::from_terms([(1, rat(2) - &prm.p), (0, &prm.q + &one)]),
        c: SparsePoly::one(),
        d: Rational::zero(),
        e: Rational::zero(),
        lambda: EigenRule::quadratic(&prm.p - &one, -one),
    }
}

// ---------------------------------------------------------------- N

/// `N_n^{(p)}(x) = (−1)^n Σ_k k! C(−p−n−1, k) C(n, n−k) (−x)^k`.
pub fn n_poly(n: u32, prm: &ParamsN) -> RationalPoly {
    let top = -&prm.p - idx(n) - Rational::one();
    let pre = sign_pow(n);
    SparsePoly::from_terms((0..=n).map(|k| {
        let c = &pre * factorial(k) * gen_binomial(&top, k) * gen_binomial(&idx(n), n - k) * sign_pow(k);
        (k, c)
    }))
}

/// Largest `N` with `p < −2N − 1`.
pub fn n_max_index(prm: &ParamsN) -> Result<u32> {
    max_below(&(-(&prm.p + Rational::one()) / rat(2)), "N family")
}

/// `n! Γ(−p−n) / (−(p+2n+1))`.
///
/// Factorials of non-integer arguments are gamma values; at `n = 0` this is
/// the moment `∫₀^∞ x^p e^{−1/x} dx = Γ(−p−1)`.
pub fn n_norm(n: u32, prm: &ParamsN) -> Result<LogScaled> {
    let nn = idx(n);
    let p = &prm.p;
    let den = -(p + rat(2) * &nn + Rational::one());
    if !den.is_positive() {
        return Err(Error::Admissibility(format!("N norm needs p < -2n-1 (n={n}, p={p})")));
    }
    let num = rational_factorial(&nn)? * rational_factorial(&(-p - &nn - Rational::one()))?;
    Ok(num / LogScaled::from_rational(&den))
}

/// `x² y'' + ((2+p)x + 1) y' − n(n+1+p) y = 0`.
pub fn n_equation(prm: &ParamsN) -> SLEquation<Rational> {
    let one = Rational::one();
    SLEquation {
        a: SparsePoly::monomial(2, one.clone()),
        b: SparsePoly::from_terms([(1, rat(2) + &prm.p), (0, one.clone())]),
        c: SparsePoly::one(),
        d: Rational::zero(),
        e: Rational::zero(),
        lambda: EigenRule::quadratic(-(&prm.p + &one), -one),
    }
}

/// Monic generalized Bessel polynomial
/// `B̄_n^{(α)}(x) = Σ_k 2^{n−k} C(n,k) x^k / (n+k+α+1)_{n−k}`.
pub fn bessel_monic(n: u32, alpha: &Rational) -> Result<RationalPoly> {
    if alpha.is_integer() && *alpha <= rat(-2) {
        return Err(Error::Parameter(format!("Bessel polynomials need alpha not in {{-2, -3, ...}}, got {alpha}")));
    }
    let mut terms = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let den = pochhammer(&(idx(n + k + 1) + alpha), n - k);
        if den.is_zero() {
            return Err(Error::Parameter(format!("Bessel coefficient {k} of degree {n} has a pole at alpha = {alpha}")));
        }
        let c = num_traits::pow(rat(2), (n - k) as usize) * gen_binomial(&idx(n), k) / den;
        terms.push((k, c));
    }
    Ok(SparsePoly::from_terms(terms))
}

/// `x² y'' + ((2+α)x + 2) y' − n(n+1+α) y = 0`.
pub fn bessel_equation(alpha: &Rational) -> SLEquation<Rational> {
    let one = Rational::one();
    SLEquation {
        a: SparsePoly::monomial(2, one.clone()),
        b: SparsePoly::from_terms([(1, rat(2) + alpha), (0, rat(2))]),
        c: SparsePoly::one(),
        d: Rational::zero(),
        e: Rational::zero(),
        lambda: EigenRule::quadratic(-(alpha + &one), -one),
    }
}

// ---------------------------------------------------------------- I

/// `I_n^{(p)}(x) = n! Σ_{k ≤ n/2} (−1)^k C(p−1, n−k) C(n−k, k) (2x)^{n−2k}`.
pub fn i_poly(n: u32, prm: &ParamsI) -> RationalPoly {
    let pm1 = &prm.p - Rational::one();
    let nf = factorial(n);
    SparsePoly::from_terms((0..=n / 2).map(|k| {
        let e = n - 2 * k;
        let c = &nf
            * sign_pow(k)
            * gen_binomial(&pm1, n - k)
            * gen_binomial(&idx(n - k), k)
            * num_traits::pow(rat(2), e as usize);
        (e, c)
    }))
}

/// Largest `N` with `N < p − 1`.
pub fn i_max_index(prm: &ParamsI) -> Result<u32> {
    max_below(&(&prm.p - Rational::one()), "I family")
}

/// `n! 2^{2n−1} √π Γ(p)² Γ(2p−2n) / [(p−n−1) Γ(p−n) Γ(p−n+1/2) Γ(2p−n−1)]`.
pub fn i_norm(n: u32, prm: &ParamsI) -> Result<LogScaled> {
    let p = &prm.p;
    let nn = idx(n);
    let pn1 = p - &nn - Rational::one();
    if !pn1.is_positive() {
        return Err(Error::Admissibility(format!("I norm needs n < p - 1 (n={n}, p={p})")));
    }
    let two_pow = LogScaled::from_ln((2.0 * n as f64 - 1.0) * std::f64::consts::LN_2);
    let sqrt_pi = LogScaled::from_ln(0.5 * std::f64::consts::PI.ln());
    let gp = rational_gamma(p)?;
    let num = rational_factorial(&nn)? * two_pow * sqrt_pi * gp * gp * rational_gamma(&(rat(2) * p - rat(2) * &nn))?;
    let den = LogScaled::from_rational(&pn1)
        * rational_gamma(&(p - &nn))?
        * rational_gamma(&(p - &nn + ratio(1, 2)))?
        * rational_gamma(&(rat(2) * p - &nn - Rational::one()))?;
    Ok(num / den)
}

/// `(1 + x²) y'' + (3 − 2p) x y' − n(n+2−2p) y = 0`.
pub fn i_equation(prm: &ParamsI) -> SLEquation<Rational> {
    let one = Rational::one();
    SLEquation {
        a: SparsePoly::from_terms([(2, one.clone()), (0, one.clone())]),
        b: SparsePoly::monomial(1, rat(3) - rat(2) * &prm.p),
        c: SparsePoly::one(),
        d: Rational::zero(),
        e: Rational::zero(),
        lambda: EigenRule::quadratic(rat(2) * &prm.p - rat(2), -one),
    }
}

// ---------------------------------------------------------------- J

/// Terminating `₂F₁(−N, b; c | z) = Σ_{k≤N} (−N)_k (b)_k / (c)_k · z^k / k!`.
pub fn hyp2f1_terminating(neg_int: u32, b: Complex<f64>, c: Complex<f64>, z: Complex<f64>) -> Result<Complex<f64>> {
    let mut term = Complex::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..neg_int {
        let kf = k as f64;
        let den = c + kf;
        if den.norm() == 0.0 {
            return Err(Error::Pole(format!("2F1 lower parameter {c} hits zero at step {k}")));
        }
        term = term * (kf - neg_int as f64) * (b + kf) / den * z / (kf + 1.0);
        sum += term;
    }
    Ok(sum)
}

/// `J_n^{(p,q)}` with the default realness tolerance.
pub fn j_poly(n: u32, prm: &ParamsJ) -> Result<RealPoly> {
    j_poly_with_tol(n, prm, J_REALNESS_TOL)
}

/// `J_n^{(p,q)}(x) = (−i)^n (n+1−2p)_n Σ_k C(n,k) ₂F₁(k−n, p−n−iq/2; 2p−2n | 2) (−ix)^k`.
///
/// Evaluated in complex arithmetic. Each coefficient's imaginary part must be
/// below `tol` relative to the largest coefficient magnitude.
pub fn j_poly_with_tol(n: u32, prm: &ParamsJ, tol: f64) -> Result<RealPoly> {
    let p = to_f64(&prm.p);
    let q = to_f64(&prm.q);
    let two_p_2n = &prm.p * rat(2) - idx(2 * n);
    let poch = to_f64(&pochhammer(&(idx(n + 1) - rat(2) * &prm.p), n));
    let b = Complex::new(p - n as f64, -q / 2.0);
    let c = Complex::new(to_f64(&two_p_2n), 0.0);
    let z = Complex::new(2.0, 0.0);
    let minus_i = Complex::new(0.0, -1.0);
    let pre = minus_i.powu(n) * poch;

    let mut coeffs = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        if n - k > 0 && two_p_2n.is_integer() && !two_p_2n.is_positive() {
            // (c)_j vanishes for some j < n − k exactly when −c < n − k.
            let neg_c: i64 = (-&two_p_2n).to_integer().try_into().unwrap_or(i64::MAX);
            if neg_c < (n - k) as i64 {
                return Err(Error::Parameter(format!("J_{n} needs 2p-2n not a nonpositive integer (2p-2n = {two_p_2n})")));
            }
        }
        let f = hyp2f1_terminating(n - k, b, c, z)?;
        let binom = to_f64(&gen_binomial(&idx(n), k));
        coeffs.push(pre * binom * f * minus_i.powu(k));
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for (k, c) in coeffs.iter().enumerate() {
        let residue = if scale > 0.0 { c.im.abs() / scale } else { 0.0 };
        if residue > tol {
            return Err(Error::Realness { exponent: k as u32, residue });
        }
    }
    Ok(SparsePoly::from_terms(coeffs.into_iter().enumerate().map(|(k, c)| (k as u32, c.re))))
}

/// Largest `N` with `N < p − 1/2`.
pub fn j_max_index(prm: &ParamsJ) -> Result<u32> {
    max_below(&(&prm.p - ratio(1, 2)), "J family")
}

/// `(n! Γ(2p−n) / Γ(2p−2n)) ∫_{−π/2}^{π/2} cos^{2p−2n−2}θ e^{qθ} dθ`.
///
/// When `2p` is an integer the integral is also evaluated by the Cauchy
/// formula and the two must agree to `1e−10`.
pub fn j_norm(n: u32, prm: &ParamsJ) -> Result<f64> {
    let p = &prm.p;
    if idx(n) >= p - ratio(1, 2) {
        return Err(Error::Admissibility(format!("J norm needs n < p - 1/2 (n={n}, p={p})")));
    }
    let two_p = to_f64(&(p * rat(2)));
    let nf = n as f64;
    let (s1, l1) = ln_gamma(two_p - nf)?;
    let (s2, l2) = ln_gamma(two_p - 2.0 * nf)?;
    let pre = LogScaled::new(s1 * s2, l1 - l2) * rational_factorial(&idx(n))?;
    let expnt = &(p * rat(2)) - idx(2 * n + 2);
    let q = to_f64(&prm.q);
    let theta = theta_integral(to_f64(&expnt), q, 1e-13)?;
    if expnt.is_integer() {
        let r: u32 = expnt.to_integer().try_into().expect("nonnegative by admissibility");
        let cauchy = cauchy_cos_moment(r, q)?;
        if ((theta - cauchy) / cauchy).abs() > 1e-10 {
            return Err(Error::Consistency(format!(
                "theta integral {theta} disagrees with Cauchy formula {cauchy} (r={r}, q={q})"
            )));
        }
    }
    Ok(pre.to_f64() * theta)
}

/// `(1 + x²) y'' + (2(1−p)x + q) y' − n(n+1−2p) y = 0`.
pub fn j_equation(prm: &ParamsJ) -> SLEquation<Rational> {
    let one = Rational::one();
    SLEquation {
        a: SparsePoly::from_terms([(2, one.clone()), (0, one.clone())]),
        b: SparsePoly::from_terms([(1, rat(2) * (&one - &prm.p)), (0, prm.q.clone())]),
        c: SparsePoly::one(),
        d: Rational::zero(),
        e: Rational::zero(),
        lambda: EigenRule::quadratic(rat(2) * &prm.p - &one, -one),
    }
}
