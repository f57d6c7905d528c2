//! A single handle over every orthogonal family in scope.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::classical::{self, ParamsI, ParamsJ, ParamsM, ParamsN};
use crate::error::{Error, Result};
use crate::incomplete::{self, Condition, Mode, PhiParams, PsiParams};
use crate::numkernel::{rat, ratio};
use crate::polycore::Parity;
use crate::sturm::{SLEquation, WeightSpec};
use crate::{LogScaled, Rational, RationalPoly, RealPoly};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    M(ParamsM),
    N(ParamsN),
    I(ParamsI),
    J(ParamsJ),
    Phi(PhiParams),
    Psi(PsiParams),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::M(_) => "M",
            Family::N(_) => "N",
            Family::I(_) => "I",
            Family::J(_) => "J",
            Family::Phi(_) => "phi",
            Family::Psi(_) => "psi",
        }
    }

    /// Members have the parity of their index.
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Family::I(_) | Family::Phi(_) | Family::Psi(_))
    }

    pub fn is_incomplete(&self) -> bool {
        matches!(self, Family::Phi(_) | Family::Psi(_))
    }

    /// Exact members; `J` only exists in floating point.
    pub fn has_exact_members(&self) -> bool {
        !matches!(self, Family::J(_))
    }

    /// The bound `C`: admissible indices are the integers strictly below it.
    pub fn bound(&self) -> Rational {
        match self {
            Family::M(p) => (&p.p - Rational::one()) / rat(2),
            Family::N(p) => -(&p.p + Rational::one()) / rat(2),
            Family::I(p) => &p.p - Rational::one(),
            Family::J(p) => &p.p - ratio(1, 2),
            Family::Phi(p) => incomplete::phi_bound(p),
            Family::Psi(p) => incomplete::psi_bound(p),
        }
    }

    /// Parameter requirements beyond the bound itself.
    pub fn conditions(&self) -> Vec<Condition> {
        match self {
            Family::M(p) => vec![Condition {
                name: "q > -1".into(),
                holds: p.q > -Rational::one(),
                enforced: true,
            }],
            Family::N(_) | Family::I(_) | Family::J(_) => Vec::new(),
            Family::Phi(p) => incomplete::phi_conditions(p),
            Family::Psi(p) => incomplete::psi_conditions(p),
        }
    }

    /// False for lenient-mode parameters that only pass because integrality
    /// of `2a` is not enforced.
    pub fn within_proven_range(&self) -> bool {
        self.conditions().iter().all(|c| c.holds)
    }

    pub fn max_index(&self) -> Result<u32> {
        match self {
            Family::M(p) => classical::m_max_index(p),
            Family::N(p) => classical::n_max_index(p),
            Family::I(p) => classical::i_max_index(p),
            Family::J(p) => classical::j_max_index(p),
            Family::Phi(p) => incomplete::phi_max_index(p),
            Family::Psi(p) => incomplete::psi_max_index(p),
        }
    }

    pub fn member_exact(&self, n: u32) -> Result<RationalPoly> {
        Ok(match self {
            Family::M(p) => classical::m_poly(n, p),
            Family::N(p) => classical::n_poly(n, p),
            Family::I(p) => classical::i_poly(n, p),
            Family::J(_) => {
                return Err(Error::Parameter("J members are computed in floating point only".into()));
            }
            Family::Phi(p) => incomplete::phi_poly(n, p),
            Family::Psi(p) => incomplete::psi_poly(n, p),
        })
    }

    pub fn member_real(&self, n: u32) -> Result<RealPoly> {
        match self {
            Family::J(p) => classical::j_poly(n, p),
            _ => Ok(self.member_exact(n)?.to_real()),
        }
    }

    /// Closed-form norm square.
    pub fn norm(&self, n: u32) -> Result<LogScaled> {
        match self {
            Family::M(p) => classical::m_norm(n, p),
            Family::N(p) => classical::n_norm(n, p),
            Family::I(p) => classical::i_norm(n, p),
            Family::J(p) => Ok(LogScaled::from_f64(classical::j_norm(n, p)?)),
            Family::Phi(p) => incomplete::phi_norm(n, p),
            Family::Psi(p) => incomplete::psi_norm(n, p),
        }
    }

    /// Predicted degree of member `n`.
    pub fn degree(&self, n: u32) -> i64 {
        match self {
            Family::Phi(p) => incomplete::phi_degree(n, p),
            Family::Psi(p) => incomplete::psi_degree(n, p),
            _ => n as i64,
        }
    }

    pub fn weight(&self) -> WeightSpec {
        match self {
            Family::M(p) => WeightSpec::HalfLineM { p: p.p.clone(), q: p.q.clone() },
            Family::N(p) => WeightSpec::HalfLineN { p: p.p.clone() },
            Family::I(p) => WeightSpec::LineI { p: p.p.clone() },
            Family::J(p) => WeightSpec::LineJ { p: p.p.clone(), q: p.q.clone() },
            Family::Phi(p) => WeightSpec::JacobiType { a: p.a.clone(), b: p.b.clone(), m: p.m },
            Family::Psi(p) => WeightSpec::BesselType { a: p.a.clone(), m: p.m },
        }
    }

    pub fn equation(&self) -> SLEquation<Rational> {
        match self {
            Family::M(p) => classical::m_equation(p),
            Family::N(p) => classical::n_equation(p),
            Family::I(p) => classical::i_equation(p),
            Family::J(p) => classical::j_equation(p),
            Family::Phi(p) => incomplete::phi_sl_equation(p),
            Family::Psi(p) => incomplete::psi_sl_equation(p),
        }
    }

    /// The first `count` exponents spanned by the chain of the given parity:
    /// `{2s + 2mk}` / `{2r+1 + 2mk}` for the incomplete families, every
    /// exponent of that parity for `I`, and all exponents otherwise.
    pub fn lattice(&self, parity: Parity, count: u32) -> Vec<u32> {
        let (start, step) = match (self, parity) {
            (Family::Phi(PhiParams { m, r, s, .. }), p) | (Family::Psi(PsiParams { m, r, s, .. }), p) => {
                if p == Parity::Odd {
                    (2 * r + 1, 2 * m)
                } else {
                    (2 * s, 2 * m)
                }
            }
            (Family::I(_), Parity::Odd) => (1, 2),
            (Family::I(_), _) => (0, 2),
            _ => (0, 1),
        };
        (0..count).map(|k| start + step * k).collect()
    }

    /// Indices of the members whose exponents lie on the chain of `parity`.
    pub fn chain_indices(&self, parity: Parity, upto: u32) -> Vec<u32> {
        if !self.is_symmetric() {
            return (0..=upto).collect();
        }
        let first = if parity == Parity::Odd { 1 } else { 0 };
        (first..=upto).step_by(2).collect()
    }

    pub fn mode(&self) -> Mode {
        match self {
            Family::Phi(p) => p.mode,
            Family::Psi(p) => p.mode,
            _ => Mode::Strict,
        }
    }

    /// Parameters rendered as `name=value` pairs.
    pub fn describe(&self) -> String {
        match self {
            Family::M(p) => format!("M(p={}, q={})", p.p, p.q),
            Family::N(p) => format!("N(p={})", p.p),
            Family::I(p) => format!("I(p={})", p.p),
            Family::J(p) => format!("J(p={}, q={})", p.p, p.q),
            Family::Phi(p) => format!("phi(a={}, b={}, m={}, r={}, s={})", p.a, p.b, p.m, p.r, p.s),
            Family::Psi(p) => format!("psi(a={}, m={}, r={}, s={})", p.a, p.m, p.r, p.s),
        }
    }

    /// `Φ` at `(a, b, m, r, s) = (1, −200, 1, 0, 0)`.
    pub fn example_phi() -> Family {
        Family::Phi(PhiParams::new(rat(1), rat(-200), 1, 0, 0))
    }

    /// `Ψ` at `(a, m, r, s) = (−51, 2, 3, 1)`.
    pub fn example_psi() -> Family {
        Family::Psi(PsiParams::new(rat(-51), 2, 3, 1))
    }
}
