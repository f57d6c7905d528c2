//! Incomplete symmetric finite families `Φ_n^{(r,s)}(x; a, b, m)` and
//! `Ψ_n^{(r,s)}(x; a, m)`.
//!
//! Both are built by substituting `x^{2m}` into a finite classical family and
//! multiplying by `x^{2s}` (even `n`) or `x^{2r+1}` (odd `n`), so the exponents
//! of each member lie on the lattice `{2s + 2mk}` or `{2r+1 + 2mk}`.
//!
//! There is deliberately no incomplete analog of `I` or `J`: their interval is
//! already the whole line, and `t = x^{2m}` does not map it onto itself.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classical::{m_poly, n_poly, ParamsM, ParamsN};
use crate::error::{Error, Result};
use crate::numkernel::{largest_int_below, rat, ratio, rational_factorial};
use crate::polycore::SparsePoly;
use crate::sturm::{rational_str, EigenRule, SLEquation};
use crate::{LogScaled, Rational, RationalPoly};

/// `σ_n = (1 − (−1)^n)/2`.
pub fn sigma(n: u32) -> u32 {
    n % 2
}

fn sign_pow(n: u32) -> Rational {
    if n % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Strict mode requires `a` to be an integer (so that `(−1)^{2a} = 1`);
/// lenient mode accepts any rational `a` with an integrable weight, for
/// exploration only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Strict,
    Lenient,
}

/// One admissibility requirement with its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    /// False for conditions that the current mode does not enforce.
    pub enforced: bool,
}

impl Condition {
    fn new(name: impl Into<String>, holds: bool, enforced: bool) -> Self {
        Condition { name: name.into(), holds, enforced }
    }
}

fn check_conditions(conds: &[Condition], family: &str) -> Result<()> {
    let failed: Vec<&str> = conds.iter().filter(|c| c.enforced && !c.holds).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("{family}: violated {}", failed.join(", "))))
    }
}

fn index_below(bound: &Rational, family: &str) -> Result<u32> {
    let top = largest_int_below(bound);
    if top.is_negative() {
        return Err(Error::Admissibility(format!("{family}: bound C = {bound} admits no index")));
    }
    u32::try_from(top).map_err(|_| Error::Parameter(format!("{family}: bound C = {bound} is too large")))
}

/// `(2r − 2s − m + 1)`, the degree jump between the two parity chains.
fn chain_shift(m: u32, r: u32, s: u32) -> Rational {
    rat(2 * r as i64 - 2 * s as i64 - m as i64 + 1)
}

fn lattice_prefactor(n: u32, r: u32, s: u32) -> u32 {
    if n % 2 == 0 {
        2 * s
    } else {
        2 * r + 1
    }
}

/// `mn + 2s + (2r − 2s − m + 1)σ_n`.
fn degree_law(n: u32, m: u32, r: u32, s: u32) -> i64 {
    let (n, m, r, s) = (n as i64, m as i64, r as i64, s as i64);
    m * n + 2 * s + (2 * r - 2 * s - m + 1) * (n % 2)
}

/// The parameter-dependent part of `λ_n` for both families:
/// `−(2s+mn)(2s+mn+K) − L(2r+2s+K−m+1+2mn)σ_n`.
fn eigen_rule(k: Rational, m: u32, r: u32, s: u32) -> EigenRule<Rational> {
    let (mr, rr, sr) = (rat(m as i64), rat(r as i64), rat(s as i64));
    let two = rat(2);
    let l = chain_shift(m, r, s);
    EigenRule {
        c0: -(&two * &sr) * (&two * &sr + &k),
        c1: -(&mr * (rat(4) * &sr + &k)),
        c2: -(&mr * &mr),
        d0: -(&l * (&two * &rr + &two * &sr + &k - &mr + Rational::one())),
        d1: -(&two * &mr * &l),
    }
}

// ---------------------------------------------------------------- Φ

/// Parameters of `Φ_n^{(r,s)}(x; a, b, m)`, weight `|x|^{2a}(1 + x^{2m})^b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiParams {
    #[serde(with = "rational_str")]
    pub a: Rational,
    #[serde(with = "rational_str")]
    pub b: Rational,
    pub m: u32,
    pub r: u32,
    pub s: u32,
    #[serde(default)]
    pub mode: Mode,
}

impl PhiParams {
    pub fn new(a: Rational, b: Rational, m: u32, r: u32, s: u32) -> Self {
        assert!(m > 0, "m must be positive");
        PhiParams { a, b, m, r, s, mode: Mode::Strict }
    }

    pub fn lenient(mut self) -> Self {
        self.mode = Mode::Lenient;
        self
    }
}

/// Parameters `(u, v)` of the inner `M_{⌊n/2⌋}^{(u,v)}` factor.
pub fn phi_uv(n: u32, prm: &PhiParams) -> (Rational, Rational) {
    let PhiParams { a, b, m, r, s, .. } = prm;
    let (mr, rr, sr) = (rat(*m as i64), rat(*r as i64), rat(*s as i64));
    let sg = sign_pow(n);
    let half = ratio(1, 2);
    let u = (&mr * (Rational::one() - b) - (a + &sr + &rr + Rational::one()) + &sg * (&rr - &sr + &half)) / &mr;
    let v = (a + &sr + &rr - &mr + Rational::one() + &sg * (&sr - &rr - &half)) / &mr;
    (u, v)
}

/// `x^{2s}` or `x^{2r+1}` (by parity of `n`) times `M_{⌊n/2⌋}^{(u,v)}(x^{2m})`.
pub fn phi_poly(n: u32, prm: &PhiParams) -> RationalPoly {
    let (u, v) = phi_uv(n, prm);
    m_poly(n / 2, &ParamsM::new(u, v)).compose_power(2 * prm.m, lattice_prefactor(n, prm.r, prm.s))
}

pub fn phi_degree(n: u32, prm: &PhiParams) -> i64 {
    degree_law(n, prm.m, prm.r, prm.s)
}

/// `C = min{−(2a+4s+1)/(2m) − b, −(2a+4r+3)/(2m) − b + 1, −(a+s+r+1)/m − b + 1/2}`.
pub fn phi_bound(prm: &PhiParams) -> Rational {
    let PhiParams { a, b, m, r, s, .. } = prm;
    let mr = rat(*m as i64);
    let two_m = rat(2 * *m as i64);
    let c1 = -(rat(2) * a + rat(4 * *s as i64 + 1)) / &two_m - b;
    let c2 = -(rat(2) * a + rat(4 * *r as i64 + 3)) / &two_m - b + Rational::one();
    let c3 = -(a + rat((s + r + 1) as i64)) / &mr - b + ratio(1, 2);
    c1.min(c2).min(c3)
}

pub fn phi_conditions(prm: &PhiParams) -> Vec<Condition> {
    let PhiParams { a, b, m, r, s, mode } = prm;
    let neg_2mb = -rat(2 * *m as i64) * b;
    let e_s = rat(2) * a + rat(4 * *s as i64 + 1);
    let e_r = rat(2) * a + rat(4 * *r as i64 + 3);
    vec![
        Condition::new("b < 0", b.is_negative(), true),
        Condition::new("|2a+4s+1| < -2mb", e_s.abs() < neg_2mb, true),
        Condition::new("|2a+4r+3| < -2mb", e_r.abs() < neg_2mb, true),
        Condition::new("2a+4s+1 > 0", e_s.is_positive(), true),
        Condition::new("2a+4r+3 > 0", e_r.is_positive(), true),
        Condition::new("2a is an even integer", a.is_integer(), *mode == Mode::Strict),
    ]
}

/// Largest admissible index: the largest integer strictly below [`phi_bound`].
pub fn phi_max_index(prm: &PhiParams) -> Result<u32> {
    check_conditions(&phi_conditions(prm), "Phi family")?;
    index_below(&phi_bound(prm), "Phi family")
}

/// Both indices lie in the finite-orthogonality range.
pub fn phi_admissible(prm: &PhiParams, n: u32, k: u32) -> Result<bool> {
    let top = phi_max_index(prm)?;
    Ok(n <= top && k <= top)
}

/// Closed-form `∫ |x|^{2a}(1+x^{2m})^b Φ_n² dx`.
pub fn phi_norm(n: u32, prm: &PhiParams) -> Result<LogScaled> {
    if !phi_admissible(prm, n, n)? {
        return Err(Error::Admissibility(format!("Phi_{n} exceeds the maximum index {}", phi_max_index(prm)?)));
    }
    let PhiParams { a, b, m, r, s, .. } = prm;
    let (mr, sr) = (rat(*m as i64), rat(*s as i64));
    let sig = rat(sigma(n) as i64);
    let nn = rat(n as i64);
    let half_n = &nn / rat(2);
    let c = (rat(2) * a + rat(4) * &sr + Rational::one()) / (rat(2) * &mr);
    let shift = rat(4 * *r as i64 - 4 * *s as i64 - *m as i64 + 2) / (rat(2) * &mr) * &sig;
    let half_chain = (&nn - &sig) / rat(2);

    let f1 = rational_factorial(&half_chain)?;
    let f2 = rational_factorial(&(-(&half_n + b + &c + &shift)))?;
    let f3 = rational_factorial(&(&half_n - Rational::one() + &c + &shift))?;
    let den = -(&mr * (&nn + b) + a + rat(2) * &sr + ratio(1, 2) + chain_shift(*m, *r, *s) * &sig);
    if den.is_zero() {
        return Err(Error::Pole(format!("Phi_{n} norm denominator vanishes")));
    }
    let f4 = rational_factorial(&(-(&half_chain + b + Rational::one())))?;
    Ok(f1 * f2 * f3 / (LogScaled::from_rational(&den) * f4))
}

/// The equation `A y'' + B y' + (λ_n C + D + σ_n E) y = 0` solved by every `Φ_n`.
pub fn phi_sl_equation(prm: &PhiParams) -> SLEquation<Rational> {
    let PhiParams { a, b, m, r, s, .. } = prm;
    let (mr, rr, sr) = (rat(*m as i64), rat(*r as i64), rat(*s as i64));
    let two = rat(2);
    let one = Rational::one();
    SLEquation {
        a: SparsePoly::from_terms([(2, one.clone()), (2 * m + 2, one.clone())]),
        b: SparsePoly::from_terms([
            (2 * m + 1, &two * (a + &mr * b + &one)),
            (1, &two * (a - &mr + &one)),
        ]),
        c: SparsePoly::monomial(2 * m, one.clone()),
        d: -(&two * &sr) * (&two * (a + &sr - &mr) + &one),
        e: &two * &sr * (&two * &sr + &two * a - &two * &mr + &one)
            - &two * (&two * &rr + &one) * (&rr + a - &mr + &one),
        lambda: eigen_rule(&two * &mr * b + &two * a + &one, *m, *r, *s),
    }
}

// ---------------------------------------------------------------- Ψ

/// Parameters of `Ψ_n^{(r,s)}(x; a, m)`, weight `|x|^{2a} exp(−x^{−2m})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiParams {
    #[serde(with = "rational_str")]
    pub a: Rational,
    pub m: u32,
    pub r: u32,
    pub s: u32,
    #[serde(default)]
    pub mode: Mode,
}

impl PsiParams {
    pub fn new(a: Rational, m: u32, r: u32, s: u32) -> Self {
        assert!(m > 0, "m must be positive");
        PsiParams { a, m, r, s, mode: Mode::Strict }
    }

    pub fn lenient(mut self) -> Self {
        self.mode = Mode::Lenient;
        self
    }
}

/// Parameter of the inner `N_{⌊n/2⌋}` factor:
/// `(a + s + r + 1 + (−1)^n(s − r − 1/2))/m − 1`.
pub fn psi_p_inner(n: u32, prm: &PsiParams) -> Rational {
    let PsiParams { a, m, r, s, .. } = prm;
    let (rr, sr) = (rat(*r as i64), rat(*s as i64));
    (a + &sr + &rr + Rational::one() + sign_pow(n) * (&sr - &rr - ratio(1, 2))) / rat(*m as i64) - Rational::one()
}

/// `x^{2s}` or `x^{2r+1}` (by parity of `n`) times `N_{⌊n/2⌋}^{(p)}(x^{2m})`.
pub fn psi_poly(n: u32, prm: &PsiParams) -> RationalPoly {
    n_poly(n / 2, &ParamsN::new(psi_p_inner(n, prm))).compose_power(2 * prm.m, lattice_prefactor(n, prm.r, prm.s))
}

pub fn psi_degree(n: u32, prm: &PsiParams) -> i64 {
    degree_law(n, prm.m, prm.r, prm.s)
}

/// `C = min{−(2a+4s+1)/(2m), −(2a+4r+3)/(2m) + 1, −(a+s+r+1)/m + 1/2}`.
pub fn psi_bound(prm: &PsiParams) -> Rational {
    let PsiParams { a, m, r, s, .. } = prm;
    let two_m = rat(2 * *m as i64);
    let c1 = -(rat(2) * a + rat(4 * *s as i64 + 1)) / &two_m;
    let c2 = -(rat(2) * a + rat(4 * *r as i64 + 3)) / &two_m + Rational::one();
    let c3 = -(a + rat((s + r + 1) as i64)) / rat(*m as i64) + ratio(1, 2);
    c1.min(c2).min(c3)
}

pub fn psi_conditions(prm: &PsiParams) -> Vec<Condition> {
    let PsiParams { a, m, r, s, mode } = prm;
    let two_a = rat(2) * a;
    vec![
        Condition::new("2a+4s+1 < 0", (&two_a + rat(4 * *s as i64 + 1)).is_negative(), true),
        Condition::new("2a+4r+3 < 2m", &two_a + rat(4 * *r as i64 + 3) < rat(2 * *m as i64), true),
        Condition::new("2(a+s+r+1) < m", rat(2) * (a + rat((s + r + 1) as i64)) < rat(*m as i64), true),
        Condition::new("2a is an even integer", a.is_integer(), *mode == Mode::Strict),
    ]
}

pub fn psi_max_index(prm: &PsiParams) -> Result<u32> {
    check_conditions(&psi_conditions(prm), "Psi family")?;
    index_below(&psi_bound(prm), "Psi family")
}

pub fn psi_admissible(prm: &PsiParams, n: u32, k: u32) -> Result<bool> {
    let top = psi_max_index(prm)?;
    Ok(n <= top && k <= top)
}

/// Closed-form `∫ |x|^{2a} exp(−x^{−2m}) Ψ_n² dx`.
pub fn psi_norm(n: u32, prm: &PsiParams) -> Result<LogScaled> {
    if !psi_admissible(prm, n, n)? {
        return Err(Error::Admissibility(format!("Psi_{n} exceeds the maximum index {}", psi_max_index(prm)?)));
    }
    let PsiParams { a, m, r, s, .. } = prm;
    let (mr, sr) = (rat(*m as i64), rat(*s as i64));
    let sig = rat(sigma(n) as i64);
    let nn = rat(n as i64);
    let two_m = rat(2) * &mr;
    let f1 = rational_factorial(&((&nn - &sig) / rat(2)))?;
    let arg = -(rat(2) * a + rat(4) * &sr + &mr * &nn + Rational::one()) / &two_m
        + rat(4 * *s as i64 - 4 * *r as i64 + *m as i64 - 2) / &two_m * &sig;
    let f2 = rational_factorial(&arg)?;
    let den = -(a + rat(2) * &sr + &mr * &nn + ratio(1, 2) + chain_shift(*m, *r, *s) * &sig);
    if den.is_zero() {
        return Err(Error::Pole(format!("Psi_{n} norm denominator vanishes")));
    }
    Ok(f1 * f2 / LogScaled::from_rational(&den))
}

/// The equation `A y'' + B y' + (λ_n C + D + σ_n E) y = 0` solved by every `Ψ_n`.
pub fn psi_sl_equation(prm: &PsiParams) -> SLEquation<Rational> {
    let PsiParams { a, m, r, s, .. } = prm;
    let (mr, rr, sr) = (rat(*m as i64), rat(*r as i64), rat(*s as i64));
    let two = rat(2);
    let one = Rational::one();
    SLEquation {
        a: SparsePoly::monomial(2 * m + 2, one.clone()),
        b: SparsePoly::from_terms([(2 * m + 1, &two * (a + &one)), (1, &two * &mr)]),
        c: SparsePoly::monomial(2 * m, one.clone()),
        d: -rat(4) * &mr * &sr,
        e: &two * &mr * (&two * &sr - &two * &rr - &one),
        lambda: eigen_rule(&two * a + &one, *m, *r, *s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{moment_bessel_type, moment_jacobi_type};
    use crate::sturm::residual;
    use crate::Parity;
    use proptest::prelude::*;

    pub(crate) fn phi_sets() -> Vec<PhiParams> {
        vec![
            PhiParams::new(rat(1), rat(-200), 1, 0, 0),
            PhiParams::new(rat(0), rat(-10), 1, 0, 0),
            PhiParams::new(rat(2), ratio(-23, 2), 2, 3, 1),
            PhiParams::new(rat(-1), ratio(-15, 2), 3, 2, 2),
            PhiParams::new(rat(3), rat(-20), 1, 1, 2),
        ]
    }

    pub(crate) fn psi_sets() -> Vec<PsiParams> {
        vec![
            PsiParams::new(rat(-51), 2, 3, 1),
            PsiParams::new(rat(-30), 1, 2, 0),
            PsiParams::new(rat(-40), 3, 4, 2),
            PsiParams::new(rat(-20), 1, 0, 0),
            PsiParams::new(rat(-25), 4, 1, 3),
        ]
    }

    #[test]
    fn sigma_values() {
        assert_eq!((sigma(0), sigma(1), sigma(2)), (0, 1, 0));
    }

    #[test]
    fn uv_example() {
        let prm = PhiParams::new(rat(1), rat(-200), 1, 0, 0);
        assert_eq!(phi_uv(0, &prm), (ratio(399, 2), ratio(1, 2)));
        assert_eq!(phi_uv(1, &prm), (ratio(397, 2), ratio(3, 2)));
    }

    #[test]
    fn uv_sum_is_minus_b() {
        for prm in phi_sets() {
            for n in 0..4 {
                let (u, v) = phi_uv(n, &prm);
                assert_eq!(u + v, -prm.b.clone());
            }
        }
    }

    #[test]
    fn phi_examples() {
        let prm = PhiParams::new(rat(1), rat(-200), 1, 0, 0);
        assert_eq!(phi_poly(0, &prm), SparsePoly::one());
        assert_eq!(phi_poly(1, &prm), SparsePoly::monomial(1, rat(1)));
        assert_eq!(phi_poly(2, &prm), SparsePoly::from_terms([(2, ratio(395, 2)), (0, ratio(-3, 2))]));
        let prm = PhiParams::new(rat(2), ratio(-23, 2), 4, 2, 3);
        assert_eq!(phi_poly(0, &prm), SparsePoly::monomial(6, rat(1)));
        assert_eq!(phi_poly(1, &prm), SparsePoly::monomial(5, rat(1)));
        assert_eq!(phi_degree(0, &prm), 6);
        assert_eq!(phi_degree(1, &prm), 5);
        let prm = PhiParams::new(rat(0), rat(-10), 4, 0, 1);
        assert_eq!(phi_degree(2, &prm), 10);
    }

    #[test]
    fn phi_bounds() {
        let prm = PhiParams::new(rat(1), rat(-200), 1, 0, 0);
        assert_eq!(phi_bound(&prm), ratio(397, 2));
        assert_eq!(phi_max_index(&prm).unwrap(), 198);
        assert!(phi_admissible(&prm, 198, 0).unwrap());
        assert!(!phi_admissible(&prm, 199, 0).unwrap());
        let prm = PhiParams::new(rat(0), rat(-10), 1, 0, 0);
        assert_eq!(phi_bound(&prm), ratio(19, 2));
        assert_eq!(phi_max_index(&prm).unwrap(), 9);
        for b in [rat(0), rat(1), ratio(1, 2)] {
            let prm = PhiParams::new(rat(1), b, 1, 0, 0);
            assert!(matches!(phi_max_index(&prm), Err(Error::Parameter(_))));
        }
    }

    #[test]
    fn strict_mode_requires_integer_a() {
        let prm = PhiParams::new(ratio(1, 2), rat(-30), 1, 0, 0);
        assert!(matches!(phi_max_index(&prm), Err(Error::Parameter(_))));
        assert!(phi_max_index(&prm.clone().lenient()).is_ok());
        let prm = PsiParams::new(ratio(-101, 2), 2, 3, 1);
        assert!(matches!(psi_max_index(&prm), Err(Error::Parameter(_))));
        assert!(psi_max_index(&prm.lenient()).is_ok());
    }

    #[test]
    fn phi_norm_example() {
        let prm = PhiParams::new(rat(1), rat(-200), 1, 0, 0);
        let want = moment_jacobi_type(0, &rat(1), &rat(-200), 1).unwrap();
        assert!(phi_norm(0, &prm).unwrap().rel_diff(&want) < 1e-12);
        assert!(matches!(phi_norm(199, &prm), Err(Error::Admissibility(_))));
    }

    #[test]
    fn psi_examples() {
        let prm = PsiParams::new(rat(-51), 2, 3, 1);
        assert_eq!(psi_p_inner(0, &prm), ratio(-101, 4));
        assert_eq!(psi_p_inner(1, &prm), ratio(-91, 4));
        let same = PsiParams::new(rat(-51), 2, 2, 2);
        assert_eq!(psi_p_inner(0, &same), (rat(-51) + rat(5) - ratio(1, 2)) / rat(2) - rat(1));
        assert_eq!(psi_poly(0, &prm), SparsePoly::monomial(2, rat(1)));
        assert_eq!(psi_poly(2, &prm), SparsePoly::from_terms([(6, ratio(93, 4)), (2, rat(-1))]));
        assert_eq!(psi_poly(3, &prm).degree(), 11);
        let degrees: Vec<i64> = (0..6).map(|n| psi_degree(n, &prm)).collect();
        assert_eq!(degrees, vec![2, 7, 6, 11, 10, 15]);
    }

    #[test]
    fn psi_bounds() {
        let prm = PsiParams::new(rat(-51), 2, 3, 1);
        assert_eq!(psi_bound(&prm), ratio(91, 4));
        assert_eq!(psi_max_index(&prm).unwrap(), 22);
        assert!(!psi_admissible(&prm, 23, 0).unwrap());
        assert!(matches!(psi_max_index(&PsiParams::new(rat(0), 2, 3, 0)), Err(Error::Parameter(_))));
        assert!(matches!(psi_norm(23, &prm), Err(Error::Admissibility(_))));
    }

    #[test]
    fn psi_norm_example() {
        let prm = PsiParams::new(rat(-51), 2, 3, 1);
        let want = crate::numkernel::rational_gamma(&ratio(97, 4)).unwrap() / LogScaled::from_f64(2.0);
        assert!(psi_norm(0, &prm).unwrap().rel_diff(&want) < 1e-12);
    }

    #[test]
    fn sl_equation_shapes() {
        let prm = PhiParams::new(rat(1), rat(-200), 3, 0, 0);
        let eq = phi_sl_equation(&prm);
        assert_eq!(eq.a.exponents().collect::<Vec<_>>(), vec![2, 8]);
        assert!(eq.d.is_zero());
        let eq = psi_sl_equation(&PsiParams::new(rat(-7), 1, 2, 0));
        assert!(eq.d.is_zero());
        let eq = psi_sl_equation(&PsiParams::new(rat(-7), 1, 2, 2));
        assert_eq!(eq.e, rat(-2));
    }

    #[test]
    fn exact_ode_suites() {
        for prm in phi_sets() {
            let eq = phi_sl_equation(&prm);
            for n in 0..=12 {
                assert!(residual(&eq, &phi_poly(n, &prm), n).is_zero(), "Phi n={n} {prm:?}");
            }
        }
        for prm in psi_sets() {
            let eq = psi_sl_equation(&prm);
            for n in 0..=12 {
                assert!(residual(&eq, &psi_poly(n, &prm), n).is_zero(), "Psi n={n} {prm:?}");
            }
        }
    }

    #[test]
    fn parity_and_degree_law() {
        for prm in phi_sets() {
            for n in 0..=phi_max_index(&prm).unwrap().min(40) {
                let y = phi_poly(n, &prm);
                assert_eq!(y.parity(), Parity::of_index(n));
                assert_eq!(y.degree(), phi_degree(n, &prm), "Phi n={n} {prm:?}");
                let base = lattice_prefactor(n, prm.r, prm.s);
                assert!(y.exponents().all(|e| e >= base && (e - base) % (2 * prm.m) == 0));
            }
        }
        for prm in psi_sets() {
            for n in 0..=psi_max_index(&prm).unwrap() {
                let y = psi_poly(n, &prm);
                assert_eq!(y.parity(), Parity::of_index(n));
                assert_eq!(y.degree(), psi_degree(n, &prm), "Psi n={n} {prm:?}");
            }
        }
    }

    #[test]
    fn example_degree_multiset() {
        let prm = PsiParams::new(rat(-51), 2, 3, 1);
        let got: Vec<i64> = (0..=22).map(|n| psi_poly(n, &prm).degree()).collect();
        let want: Vec<i64> = (0..=22).map(|n| if n % 2 == 0 { 2 * n + 2 } else { 2 * n + 5 }).collect();
        assert_eq!(got, want);
        assert_eq!(got[..4], [2, 7, 6, 11]);
        assert_eq!(got[21..], [47, 46]);
        for missing in [0, 1, 3, 4, 5] {
            assert!(!got.contains(&missing));
        }
    }

    #[test]
    fn norms_positive_and_start_at_moments() {
        for prm in phi_sets() {
            let top = phi_max_index(&prm).unwrap();
            for n in 0..=top {
                assert_eq!(phi_norm(n, &prm).unwrap().sign, 1, "Phi n={n} {prm:?}");
            }
            let m0 = moment_jacobi_type(4 * prm.s, &prm.a, &prm.b, prm.m).unwrap();
            assert!(phi_norm(0, &prm).unwrap().rel_diff(&m0) < 1e-12, "{prm:?}");
        }
        for prm in psi_sets() {
            let top = psi_max_index(&prm).unwrap();
            for n in 0..=top {
                assert_eq!(psi_norm(n, &prm).unwrap().sign, 1, "Psi n={n} {prm:?}");
            }
            let m0 = moment_bessel_type(4 * prm.s, &prm.a, prm.m).unwrap();
            assert!(psi_norm(0, &prm).unwrap().rel_diff(&m0) < 1e-12, "{prm:?}");
        }
    }

    fn phi_strategy() -> impl Strategy<Value = PhiParams> {
        (0i64..4, 1u32..4, 0u32..4, 0u32..4, 1i64..4).prop_map(|(a, m, r, s, den)| {
            // b comfortably below every bound
            let worst = 2 * a + 4 * s.max(r) as i64 + 3 + 6 * m as i64;
            let b = ratio(-(worst * den + 1), den * m as i64);
            PhiParams::new(rat(a), b, m, r, s)
        })
    }

    fn psi_strategy() -> impl Strategy<Value = PsiParams> {
        (1u32..4, 0u32..4, 0u32..4, 5i64..40)
            .prop_map(|(m, r, s, depth)| PsiParams::new(rat(-(depth + 2 * (r + s) as i64 + m as i64)), m, r, s))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn phi_random_structure(prm in phi_strategy()) {
            let top = phi_max_index(&prm).unwrap();
            let eq = phi_sl_equation(&prm);
            for n in 0..=top.min(8) {
                let y = phi_poly(n, &prm);
                prop_assert_eq!(y.parity(), Parity::of_index(n));
                prop_assert!(residual(&eq, &y, n).is_zero());
                prop_assert_eq!(phi_norm(n, &prm).unwrap().sign, 1);
            }
        }

        #[test]
        fn psi_random_structure(prm in psi_strategy()) {
            let top = psi_max_index(&prm).unwrap();
            let eq = psi_sl_equation(&prm);
            for n in 0..=top.min(8) {
                let y = psi_poly(n, &prm);
                prop_assert_eq!(y.parity(), Parity::of_index(n));
                prop_assert!(residual(&eq, &y, n).is_zero());
                prop_assert_eq!(psi_norm(n, &prm).unwrap().sign, 1);
            }
        }
    }
}
