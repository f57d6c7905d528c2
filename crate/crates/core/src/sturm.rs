//! Generalized symmetric Sturm-Liouville equations
//! `A y'' + B y' + (λ_n C + D + σ_n E) y = 0`.
//!
//! Provides the exact residual of a candidate solution, recovery of the weight
//! function `W = (C/A)·exp(∫B/A)` for the two coefficient shapes used by the
//! incomplete families, and the boundary-decay test that replaces the
//! `A(v)K(v) = 0` endpoint condition on the whole real line.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::incomplete::{sigma, PhiParams, PsiParams};
use crate::numkernel::{rat, to_f64};
use crate::polycore::{Coefficient, Parity, SparsePoly};
use crate::{LogScaled, Rational};

/// `λ_n = c0 + c1·n + c2·n² + σ_n·(d0 + d1·n)`.
///
/// Every eigenvalue sequence in this crate has this shape.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenRule<T> {
    pub c0: T,
    pub c1: T,
    pub c2: T,
    pub d0: T,
    pub d1: T,
}

impl<T: Coefficient> EigenRule<T> {
    /// `λ_n = c2·n² + c1·n` with no parity term.
    pub fn quadratic(c1: T, c2: T) -> Self {
        EigenRule { c0: T::zero(), c1, c2, d0: T::zero(), d1: T::zero() }
    }

    pub fn at(&self, n: u32) -> T {
        let nn = T::from_u32(n).expect("index fits");
        let base = self.c0.clone() + self.c1.clone() * nn.clone() + self.c2.clone() * nn.clone() * nn.clone();
        if n % 2 == 1 {
            base + self.d0.clone() + self.d1.clone() * nn
        } else {
            base
        }
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> EigenRule<U> {
        EigenRule { c0: f(&self.c0), c1: f(&self.c1), c2: f(&self.c2), d0: f(&self.d0), d1: f(&self.d1) }
    }
}

/// Coefficients of `A y'' + B y' + (λ_n C + D + σ_n E) y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SLEquation<T> {
    pub a: SparsePoly<T>,
    pub b: SparsePoly<T>,
    pub c: SparsePoly<T>,
    pub d: T,
    pub e: T,
    pub lambda: EigenRule<T>,
}

impl<T: Coefficient> SLEquation<T> {
    /// `A, C` even and `B` odd, the hypotheses that make odd and even
    /// solutions mutually orthogonal. `D` and `E` are constants here.
    pub fn is_symmetric_form(&self) -> bool {
        self.a.parity() == Parity::Even && self.c.parity() == Parity::Even && self.b.parity() == Parity::Odd
    }

    pub fn map_coeffs<U: Coefficient>(&self, f: impl Fn(&T) -> U + Copy) -> SLEquation<U> {
        SLEquation {
            a: self.a.map_coeffs(f),
            b: self.b.map_coeffs(f),
            c: self.c.map_coeffs(f),
            d: f(&self.d),
            e: f(&self.e),
            lambda: self.lambda.map(f),
        }
    }
}

impl SLEquation<Rational> {
    pub fn to_real(&self) -> SLEquation<f64> {
        self.map_coeffs(to_f64)
    }
}

/// `A y'' + B y' + (λ_n C + D + σ_n E) y`, exactly in the coefficient ring.
pub fn residual<T: Coefficient>(eq: &SLEquation<T>, y: &SparsePoly<T>, n: u32) -> SparsePoly<T> {
    let mut constant = eq.d.clone();
    if sigma(n) == 1 {
        constant = constant + eq.e.clone();
    }
    let zeroth = &eq.c.scale(&eq.lambda.at(n)) + &SparsePoly::constant(constant);
    let r = &(&eq.a * &y.derivative(2)) + &(&eq.b * &y.derivative(1));
    &r + &(&zeroth * y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// `[0, ∞)`
    HalfLine,
    /// `(−∞, ∞)`
    Line,
}

/// Weight functions of every family in scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightSpec {
    /// `|x|^{2a} (1 + x^{2m})^b` on the real line.
    JacobiType {
        #[serde(with = "rational_str")]
        a: Rational,
        #[serde(with = "rational_str")]
        b: Rational,
        m: u32,
    },
    /// `|x|^{2a} exp(−x^{−2m})` on the real line.
    BesselType {
        #[serde(with = "rational_str")]
        a: Rational,
        m: u32,
    },
    /// `x^q (1 + x)^{−(p+q)}` on `[0, ∞)`.
    HalfLineM {
        #[serde(with = "rational_str")]
        p: Rational,
        #[serde(with = "rational_str")]
        q: Rational,
    },
    /// `x^p e^{−1/x}` on `[0, ∞)`.
    HalfLineN {
        #[serde(with = "rational_str")]
        p: Rational,
    },
    /// `(1 + x²)^{−(p − 1/2)}` on the real line.
    LineI {
        #[serde(with = "rational_str")]
        p: Rational,
    },
    /// `(1 + x²)^{−p} exp(q·arctan x)` on the real line.
    LineJ {
        #[serde(with = "rational_str")]
        p: Rational,
        #[serde(with = "rational_str")]
        q: Rational,
    },
}

/// `ln(1 + x^k)` without overflow for large `|x|`.
fn ln1p_pow(x: f64, k: u32) -> f64 {
    let ax = x.abs();
    if ax <= 1.0 {
        ax.powi(k as i32).ln_1p()
    } else {
        k as f64 * ax.ln() + ax.powi(-(k as i32)).ln_1p()
    }
}

/// `c·ln|x|`, with `0·ln 0 = 0`.
fn c_ln(c: f64, x: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * x.abs().ln()
    }
}

impl WeightSpec {
    pub fn support(&self) -> Support {
        match self {
            WeightSpec::HalfLineM { .. } | WeightSpec::HalfLineN { .. } => Support::HalfLine,
            _ => Support::Line,
        }
    }

    pub fn is_even(&self) -> bool {
        matches!(self, WeightSpec::JacobiType { .. } | WeightSpec::BesselType { .. } | WeightSpec::LineI { .. })
    }

    /// `ln W(x)`; `−∞` where the weight vanishes.
    pub fn ln_density(&self, x: f64) -> f64 {
        match self {
            WeightSpec::JacobiType { a, b, m } => c_ln(2.0 * to_f64(a), x) + to_f64(b) * ln1p_pow(x, 2 * m),
            WeightSpec::BesselType { a, m } => {
                if x == 0.0 {
                    return f64::NEG_INFINITY;
                }
                let inv = (-(2.0 * *m as f64) * x.abs().ln()).exp();
                if !inv.is_finite() {
                    return f64::NEG_INFINITY;
                }
                c_ln(2.0 * to_f64(a), x) - inv
            }
            WeightSpec::HalfLineM { p, q } => {
                if x < 0.0 {
                    return f64::NEG_INFINITY;
                }
                c_ln(to_f64(q), x) - to_f64(&(p + q)) * x.ln_1p()
            }
            WeightSpec::HalfLineN { p } => {
                if x <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                c_ln(to_f64(p), x) - 1.0 / x
            }
            WeightSpec::LineI { p } => -(to_f64(p) - 0.5) * ln1p_pow(x, 2),
            WeightSpec::LineJ { p, q } => -to_f64(p) * ln1p_pow(x, 2) + to_f64(q) * x.atan(),
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        self.ln_density(x).exp()
    }

    /// Closed-form moment `∫ W(x) x^j dx` over the support.
    pub fn moment(&self, j: u32) -> Result<LogScaled> {
        use crate::quadrature::{beta_ls, moment_bessel_type, moment_jacobi_type};
        match self {
            WeightSpec::JacobiType { a, b, m } => moment_jacobi_type(j, a, b, *m),
            WeightSpec::BesselType { a, m } => moment_bessel_type(j, a, *m),
            WeightSpec::HalfLineM { p, q } => {
                let x = q + rat(j as i64 + 1);
                let y = p - rat(j as i64 + 1);
                if !x.is_positive() || !y.is_positive() {
                    return Err(Error::Divergence(format!("moment {j} of x^q(1+x)^-(p+q) with p={p}, q={q}")));
                }
                beta_ls(&x, &y)
            }
            WeightSpec::HalfLineN { p } => {
                let z = -p - rat(j as i64 + 1);
                if !z.is_positive() {
                    return Err(Error::Divergence(format!("moment {j} of x^p e^(-1/x) with p={p}")));
                }
                crate::numkernel::rational_factorial(&(z - Rational::one()))
            }
            WeightSpec::LineI { p } => {
                if j % 2 == 1 {
                    return Ok(LogScaled::ZERO);
                }
                let x = crate::numkernel::ratio(j as i64 + 1, 2);
                let y = p - Rational::one() - crate::numkernel::ratio(j as i64, 2);
                if !y.is_positive() {
                    return Err(Error::Divergence(format!("moment {j} of (1+x^2)^-(p-1/2) with p={p}")));
                }
                beta_ls(&x, &y)
            }
            WeightSpec::LineJ { .. } => {
                Err(Error::UnsupportedShape("no closed-form moments for the (1+x^2)^-p exp(q atan x) weight".into()))
            }
        }
    }
}

/// Recover the weight of an equation with one of the two supported shapes:
///
/// * `A = x²(1 + x^{2m})`, `B = 2x((a+mb+1)x^{2m} + a−m+1)` gives
///   `|x|^{2a}(1 + x^{2m})^b`;
/// * `A = x^{2m+2}`, `B = 2x((a+1)x^{2m} + m)` gives `|x|^{2a} exp(−x^{−2m})`.
///
/// In both cases `C = x^{2m}` and the normalization constant is 1.
pub fn weight_of(eq: &SLEquation<Rational>) -> Result<WeightSpec> {
    let unsupported = |why: &str| Error::UnsupportedShape(format!("{why}; A = {}", eq.a));
    let a_terms: Vec<(u32, &Rational)> = eq.a.terms().collect();
    let one = Rational::one();
    let two = rat(2);
    let only = |p: &SparsePoly<Rational>, allowed: &[u32]| p.exponents().all(|e| allowed.contains(&e));

    match a_terms.as_slice() {
        [(2, c2), (k, ck)] if **c2 == one && **ck == one && *k >= 4 && k % 2 == 0 => {
            let m = (k - 2) / 2;
            if eq.c != SparsePoly::monomial(2 * m, one.clone()) {
                return Err(unsupported("C must be x^{2m}"));
            }
            if !only(&eq.b, &[1, 2 * m + 1]) {
                return Err(unsupported("B must be spanned by x and x^{2m+1}"));
            }
            // B_1 = 2(a − m + 1), B_{2m+1} = 2(a + mb + 1)
            let a = eq.b.coeff(1) / &two + rat(m as i64) - &one;
            let b = (eq.b.coeff(2 * m + 1) / &two - &a - &one) / rat(m as i64);
            Ok(WeightSpec::JacobiType { a, b, m })
        }
        [(k, ck)] if **ck == one && *k >= 4 && k % 2 == 0 => {
            let m = (k - 2) / 2;
            if eq.c != SparsePoly::monomial(2 * m, one.clone()) {
                return Err(unsupported("C must be x^{2m}"));
            }
            if !only(&eq.b, &[1, 2 * m + 1]) || eq.b.coeff(1) != rat(2 * m as i64) {
                return Err(unsupported("B must be 2x((a+1)x^{2m} + m)"));
            }
            let a = eq.b.coeff(2 * m + 1) / &two - &one;
            Ok(WeightSpec::BesselType { a, m })
        }
        _ => Err(unsupported("only x^2(1+x^{2m}) and x^{2m+2} leading coefficients are supported")),
    }
}

/// Parameters of either incomplete family, for the boundary-decay test.
#[derive(Debug, Clone, Copy)]
pub enum DecayParams<'a> {
    Phi(&'a PhiParams),
    Psi(&'a PsiParams),
}

impl<'a> From<&'a PhiParams> for DecayParams<'a> {
    fn from(p: &'a PhiParams) -> Self {
        DecayParams::Phi(p)
    }
}

impl<'a> From<&'a PsiParams> for DecayParams<'a> {
    fn from(p: &'a PsiParams) -> Self {
        DecayParams::Psi(p)
    }
}

/// The bracket term of the self-adjoint identity vanishes at ±∞ for the pair
/// `(n, k)`:
/// `2mN + 2a + 2mb + 4s + 1 + (2r − 2s − m + 1)(σ_n + σ_k) < 0` with
/// `N = max(n, k)` (the `2mb` term is absent for `Ψ`).
pub fn boundary_decay_ok<'a>(prm: impl Into<DecayParams<'a>>, n: u32, k: u32) -> bool {
    let nmax = rat(n.max(k) as i64);
    let sig = rat((sigma(n) + sigma(k)) as i64);
    let (a, mb, m, r, s) = match prm.into() {
        DecayParams::Phi(p) => (&p.a, rat(p.m as i64) * &p.b, p.m, p.r, p.s),
        DecayParams::Psi(p) => (&p.a, Rational::zero(), p.m, p.r, p.s),
    };
    let m_r = rat(m as i64);
    let lhs = rat(2) * &m_r * nmax + rat(2) * a + rat(2) * mb + rat(4 * s as i64 + 1)
        + rat(2 * r as i64 - 2 * s as i64 - m as i64 + 1) * sig;
    lhs.is_negative()
}

pub(crate) mod rational_str {
    use crate::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        crate::numkernel::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{m_equation, ParamsM};
    use crate::incomplete::{phi_poly, phi_sl_equation, psi_poly, psi_sl_equation};
    use crate::numkernel::ratio;

    fn ex33() -> PhiParams {
        PhiParams::new(rat(1), rat(-200), 1, 0, 0)
    }

    fn ex36() -> PsiParams {
        PsiParams::new(rat(-51), 2, 3, 1)
    }

    #[test]
    fn residual_certifies_solutions() {
        let eq = phi_sl_equation(&ex33());
        for n in 0..6 {
            assert!(residual(&eq, &phi_poly(n, &ex33()), n).is_zero(), "phi n={n}");
        }
        let eq = psi_sl_equation(&ex36());
        for n in 0..6 {
            assert!(residual(&eq, &psi_poly(n, &ex36()), n).is_zero(), "psi n={n}");
        }
    }

    #[test]
    fn residual_rejects_wrong_candidate() {
        let prm = ex33();
        let eq = phi_sl_equation(&prm);
        let wrong = SparsePoly::monomial(2 * prm.s + 2, Rational::one());
        assert!(!residual(&eq, &wrong, 0).is_zero());
    }

    #[test]
    fn symmetric_form_detection() {
        assert!(phi_sl_equation(&ex33()).is_symmetric_form());
        assert!(psi_sl_equation(&ex36()).is_symmetric_form());
        assert!(!m_equation(&ParamsM::new(rat(10), rat(0))).is_symmetric_form());
    }

    #[test]
    fn weight_of_examples() {
        assert_eq!(
            weight_of(&phi_sl_equation(&ex33())).unwrap(),
            WeightSpec::JacobiType { a: rat(1), b: rat(-200), m: 1 }
        );
        assert_eq!(weight_of(&psi_sl_equation(&ex36())).unwrap(), WeightSpec::BesselType { a: rat(-51), m: 2 });
        let mut eq = phi_sl_equation(&ex33());
        eq.a = SparsePoly::monomial(3, Rational::one());
        assert!(matches!(weight_of(&eq), Err(Error::UnsupportedShape(_))));
        let eq = m_equation(&ParamsM::new(rat(10), rat(0)));
        assert!(matches!(weight_of(&eq), Err(Error::UnsupportedShape(_))));
    }

    #[test]
    fn weight_of_rational_parameters() {
        let prm = PhiParams::new(ratio(3, 2), ratio(-37, 3), 3, 2, 1).lenient();
        assert_eq!(
            weight_of(&phi_sl_equation(&prm)).unwrap(),
            WeightSpec::JacobiType { a: ratio(3, 2), b: ratio(-37, 3), m: 3 }
        );
    }

    /// `(A·K)' = B·K` with `K = W/C`, checked exactly through log-derivatives
    /// at rational points: `A'/A + K'/K = B/A`.
    #[test]
    fn recovered_weight_is_self_adjoint() {
        let points = [ratio(1, 3), ratio(7, 5), rat(2), ratio(-5, 4)];
        for (a, b, m) in [(rat(1), rat(-200), 1u32), (rat(-2), ratio(-9, 2), 2), (rat(0), rat(-7), 3)] {
            let prm = PhiParams::new(a.clone(), b.clone(), m, 1, 0);
            let eq = phi_sl_equation(&prm);
            let WeightSpec::JacobiType { a, b, m } = weight_of(&eq).unwrap() else { panic!() };
            let mr = rat(m as i64);
            for x in &points {
                let x2m = num_traits::pow(x.clone(), 2 * m as usize);
                // K = |x|^{2a−2m}(1+x^{2m})^b
                let k_log_der = (rat(2) * &a - rat(2) * &mr) / x + &b * rat(2) * &mr * &x2m / (x * (Rational::one() + &x2m));
                let a_val = eq.a.eval(x);
                let lhs = eq.a.derivative(1).eval(x) / &a_val + k_log_der;
                assert_eq!(lhs, eq.b.eval(x) / a_val);
            }
        }
        for (a, m) in [(rat(-51), 2u32), (rat(-7), 1), (rat(-20), 3)] {
            let eq = psi_sl_equation(&PsiParams::new(a.clone(), m, 0, 0));
            let WeightSpec::BesselType { a, m } = weight_of(&eq).unwrap() else { panic!() };
            let mr = rat(m as i64);
            for x in &points {
                // K = |x|^{2a−2m} exp(−x^{−2m})
                let k_log_der = (rat(2) * &a - rat(2) * &mr) / x
                    + rat(2) * &mr / num_traits::pow(x.clone(), 2 * m as usize + 1);
                let a_val = eq.a.eval(x);
                let lhs = eq.a.derivative(1).eval(x) / &a_val + k_log_der;
                assert_eq!(lhs, eq.b.eval(x) / a_val);
            }
        }
    }

    #[test]
    fn weight_is_index_independent() {
        // Equations carry no index; the eigenvalue rule is the only n-dependence.
        let prm = ex33();
        let w = weight_of(&phi_sl_equation(&prm)).unwrap();
        for n in 0..5 {
            let eq = phi_sl_equation(&prm);
            assert!(residual(&eq, &phi_poly(n, &prm), n).is_zero());
            assert_eq!(weight_of(&eq).unwrap(), w);
        }
    }

    #[test]
    fn boundary_decay_examples() {
        assert!(boundary_decay_ok(&ex33(), 198, 198));
        assert!(!boundary_decay_ok(&ex33(), 199, 199));
        assert!(boundary_decay_ok(&ex36(), 22, 21));
        assert!(!boundary_decay_ok(&ex36(), 23, 23));
    }

    #[test]
    fn boundary_decay_symmetric_and_implied_by_admissibility() {
        let phis = [ex33(), PhiParams::new(rat(0), rat(-10), 1, 0, 0), PhiParams::new(rat(2), ratio(-23, 2), 2, 3, 1)];
        for prm in &phis {
            let top = crate::incomplete::phi_max_index(prm).unwrap();
            for n in 0..=top.min(40) {
                for k in 0..=top.min(40) {
                    assert_eq!(boundary_decay_ok(prm, n, k), boundary_decay_ok(prm, k, n));
                    assert!(boundary_decay_ok(prm, n, k), "{prm:?} n={n} k={k}");
                }
            }
        }
        let psis = [ex36(), PsiParams::new(rat(-30), 1, 2, 0), PsiParams::new(rat(-40), 3, 4, 2)];
        for prm in &psis {
            let top = crate::incomplete::psi_max_index(prm).unwrap();
            for n in 0..=top {
                for k in 0..=top {
                    assert_eq!(boundary_decay_ok(prm, n, k), boundary_decay_ok(prm, k, n));
                    assert!(boundary_decay_ok(prm, n, k), "{prm:?} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn residual_is_linear() {
        let prm = PhiParams::new(rat(2), ratio(-23, 2), 2, 3, 1);
        let eq = phi_sl_equation(&prm);
        let y1 = phi_poly(4, &prm);
        let y2 = SparsePoly::from_terms([(3, ratio(2, 7)), (0, rat(5)), (8, ratio(-1, 3))]);
        for n in [0, 1, 4, 7] {
            let lhs = residual(&eq, &(&y1 + &y2), n);
            let rhs = &residual(&eq, &y1, n) + &residual(&eq, &y2, n);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn densities_are_finite_at_extremes() {
        let ws = [
            WeightSpec::JacobiType { a: rat(1), b: rat(-200), m: 1 },
            WeightSpec::JacobiType { a: rat(0), b: rat(-3), m: 1 },
            WeightSpec::BesselType { a: rat(-51), m: 2 },
        ];
        for w in &ws {
            for x in [1e-200, 1e-5, 0.3, 1.0, 17.0, 1e200] {
                let v = w.ln_density(x);
                assert!(!v.is_nan(), "{w:?} at {x}");
                assert_eq!(v, w.ln_density(-x));
            }
        }
        assert_eq!(WeightSpec::BesselType { a: rat(-51), m: 2 }.density(1e-3), 0.0);
        assert_eq!(WeightSpec::JacobiType { a: rat(0), b: rat(-3), m: 1 }.density(0.0), 1.0);
    }
}
