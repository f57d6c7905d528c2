//! Sparse one-variable polynomials with parity tracking.
//!
//! Coefficients live in any ring implementing [`Coefficient`]; the crate uses
//! exact [`Rational`] for construction and residual checks and `f64` at
//! evaluation time. Zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Float, FromPrimitive, Num, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::to_f64;
use crate::Rational;

/// Coefficient ring for [`SparsePoly`].
pub trait Coefficient: Clone + fmt::Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive {}

impl<T> Coefficient for T where T: Clone + fmt::Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    pub fn of_exponent(e: u32) -> Parity {
        if e % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn of_index(n: u32) -> Parity {
        Self::of_exponent(n)
    }

    /// Parity of a product.
    pub fn combine(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::None, _) | (_, Parity::None) => Parity::None,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::None => Parity::None,
        }
    }

    pub fn admits(self, e: u32) -> bool {
        match self {
            Parity::None => true,
            p => Parity::of_exponent(e) == p,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        })
    }
}

/// Polynomial stored as exponent → nonzero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly<T> {
    terms: BTreeMap<u32, T>,
    parity: Parity,
}

fn inferred_parity<T>(terms: &BTreeMap<u32, T>, hint: Parity) -> Parity {
    let mut it = terms.keys();
    match it.next() {
        None => hint,
        Some(&first) => {
            let p = Parity::of_exponent(first);
            if it.all(|&e| Parity::of_exponent(e) == p) {
                p
            } else {
                Parity::None
            }
        }
    }
}

impl<T: Coefficient> SparsePoly<T> {
    fn normalized(mut terms: BTreeMap<u32, T>, hint: Parity) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let parity = inferred_parity(&terms, hint);
        SparsePoly { terms, parity }
    }

    pub fn zero() -> Self {
        SparsePoly { terms: BTreeMap::new(), parity: Parity::Even }
    }

    pub fn one() -> Self {
        Self::monomial(0, T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(0, c)
    }

    /// `c·x^e`.
    pub fn monomial(e: u32, c: T) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(e, c);
        Self::normalized(terms, Parity::of_exponent(e))
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I: IntoIterator<Item = (u32, T)>>(items: I) -> Self {
        let mut terms: BTreeMap<u32, T> = BTreeMap::new();
        for (e, c) in items {
            match terms.get_mut(&e) {
                Some(slot) => *slot = slot.clone() + c,
                None => {
                    terms.insert(e, c);
                }
            }
        }
        Self::normalized(terms, Parity::Even)
    }

    /// Re-declare the parity, checking every stored exponent against it.
    pub fn with_parity(mut self, parity: Parity) -> Result<Self> {
        if let Some(&bad) = self.terms.keys().find(|&&e| !parity.admits(e)) {
            return Err(Error::Parameter(format!("exponent {bad} contradicts declared {parity} parity")));
        }
        self.parity = parity;
        Ok(self)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest stored exponent, −1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().next_back().map_or(-1, |&e| e as i64)
    }

    pub fn lowest_exponent(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&T> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, e: u32) -> T {
        self.terms.get(&e).cloned().unwrap_or_else(T::zero)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &T)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact evaluation in the coefficient ring.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        let mut power = T::one();
        let mut at = 0u32;
        for (&e, c) in &self.terms {
            power = power * num_traits::pow(x.clone(), (e - at) as usize);
            at = e;
            acc = acc + c.clone() * power.clone();
        }
        acc
    }

    /// `d^order/dx^order`.
    pub fn derivative(&self, order: u32) -> Self {
        let mut hint = self.parity;
        let mut terms = self.terms.clone();
        for _ in 0..order {
            terms = terms
                .into_iter()
                .filter(|&(e, _)| e > 0)
                .map(|(e, c)| (e - 1, c * T::from_u32(e).expect("exponent fits coefficient ring")))
                .collect();
            hint = hint.flip();
        }
        Self::normalized(terms, hint)
    }

    pub fn scale(&self, k: &T) -> Self {
        let terms = self.terms.iter().map(|(&e, c)| (e, c.clone() * k.clone())).collect();
        Self::normalized(terms, self.parity)
    }

    /// `x^prefactor · base(x^inner)`.
    pub fn compose_power(&self, inner: u32, prefactor: u32) -> Self {
        assert!(inner > 0, "inner exponent must be positive");
        let terms = self.terms.iter().map(|(&e, c)| (prefactor + inner * e, c.clone())).collect();
        let hint = if inner % 2 == 0 {
            Parity::of_exponent(prefactor)
        } else {
            Parity::of_exponent(prefactor).combine(self.parity)
        };
        Self::normalized(terms, hint)
    }

    /// Divide through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lead) => {
                let inv = T::one() / lead.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn map_coeffs<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> SparsePoly<U> {
        let terms = self.terms.iter().map(|(&e, c)| (e, f(c))).collect();
        SparsePoly::normalized(terms, self.parity)
    }

    fn merge(&self, rhs: &Self, negate: bool) -> Self {
        let mut terms = self.terms.clone();
        for (&e, c) in &rhs.terms {
            let c = if negate { -c.clone() } else { c.clone() };
            match terms.get_mut(&e) {
                Some(slot) => *slot = slot.clone() + c,
                None => {
                    terms.insert(e, c);
                }
            }
        }
        let hint = if self.parity == rhs.parity { self.parity } else { Parity::None };
        Self::normalized(terms, hint)
    }
}

impl<T: Coefficient> Add for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn add(self, rhs: &SparsePoly<T>) -> SparsePoly<T> {
        self.merge(rhs, false)
    }
}

impl<T: Coefficient> Sub for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn sub(self, rhs: &SparsePoly<T>) -> SparsePoly<T> {
        self.merge(rhs, true)
    }
}

impl<T: Coefficient> Mul for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn mul(self, rhs: &SparsePoly<T>) -> SparsePoly<T> {
        let mut terms: BTreeMap<u32, T> = BTreeMap::new();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                let c = c1.clone() * c2.clone();
                match terms.get_mut(&(e1 + e2)) {
                    Some(slot) => *slot = slot.clone() + c,
                    None => {
                        terms.insert(e1 + e2, c);
                    }
                }
            }
        }
        SparsePoly::normalized(terms, self.parity.combine(rhs.parity))
    }
}

impl<T: Coefficient> Neg for &SparsePoly<T> {
    type Output = SparsePoly<T>;
    fn neg(self) -> SparsePoly<T> {
        self.scale(&-T::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Coefficient> $tr for SparsePoly<T> {
            type Output = SparsePoly<T>;
            fn $m(self, rhs: SparsePoly<T>) -> SparsePoly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Float + Coefficient> SparsePoly<F> {
    /// Floating evaluation at a point.
    pub fn eval_real(&self, x: F) -> F {
        let Some(lo) = self.terms.keys().next().copied() else {
            return F::zero();
        };
        let mut acc = F::zero();
        let mut prev = lo;
        for (&e, &c) in self.terms.iter().rev() {
            if acc != F::zero() {
                acc = acc * x.powi((prev - e) as i32);
            }
            acc = acc + c;
            prev = e;
        }
        acc * x.powi(lo as i32)
    }

    /// Overflow-safe evaluation: `p(x) = mantissa · exp(ln_scale)`.
    ///
    /// For `|x| > 1` the degree power is factored out, otherwise the lowest
    /// power, so the mantissa is a sum of coefficients times powers `≤ 1`.
    pub fn eval_scaled(&self, x: F) -> (F, F) {
        let (Some(lo), Some(hi)) = (self.terms.keys().next().copied(), self.terms.keys().next_back().copied()) else {
            return (F::zero(), F::zero());
        };
        if x == F::zero() {
            return (if lo == 0 { self.terms[&0] } else { F::zero() }, F::zero());
        }
        let ax = x.abs();
        let (mantissa, pivot) = if ax > F::one() {
            let y = F::one() / x;
            let mut acc = F::zero();
            let mut prev = lo;
            for (&e, &c) in &self.terms {
                acc = acc * y.powi((e - prev) as i32) + c;
                prev = e;
            }
            (acc, hi)
        } else {
            let mut acc = F::zero();
            let mut prev = hi;
            for (&e, &c) in self.terms.iter().rev() {
                acc = acc * x.powi((prev - e) as i32) + c;
                prev = e;
            }
            (acc, lo)
        };
        if pivot == 0 {
            return (mantissa, F::zero());
        }
        let sign = if x < F::zero() && pivot % 2 == 1 { -F::one() } else { F::one() };
        (sign * mantissa, F::from_u32(pivot).unwrap() * ax.ln())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> F {
        self.terms.values().fold(F::zero(), |m, c| m.max(c.abs()))
    }
}

impl SparsePoly<Rational> {
    /// Round every coefficient to the nearest `f64`.
    pub fn to_real(&self) -> SparsePoly<f64> {
        self.map_coeffs(to_f64)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            parity: self.parity,
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| TermJson { exp: e, num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let mut last: Option<u32> = None;
        let mut terms = BTreeMap::new();
        for t in &j.terms {
            if last.is_some_and(|l| t.exp <= l) {
                return Err(Error::Parse("exponents must be strictly increasing".into()));
            }
            last = Some(t.exp);
            let num: BigInt = t.num.parse().map_err(|_| Error::Parse(format!("bad numerator {:?}", t.num)))?;
            let den: BigInt = t.den.parse().map_err(|_| Error::Parse(format!("bad denominator {:?}", t.den)))?;
            if !den.is_positive() {
                return Err(Error::Parse(format!("denominator must be positive, got {den}")));
            }
            let c = Rational::new(num, den);
            if c.is_zero() {
                return Err(Error::Parse(format!("zero coefficient stored for x^{}", t.exp)));
            }
            terms.insert(t.exp, c);
        }
        SparsePoly::normalized(terms, j.parity).with_parity(j.parity)
    }
}

impl SparsePoly<f64> {
    /// Exact binary expansion of each coefficient.
    pub fn to_rational(&self) -> SparsePoly<Rational> {
        let mut out = self.map_coeffs(|c| Rational::from_float(*c).expect("finite coefficient"));
        out.parity = self.parity;
        out
    }
}

/// JSON shape of a polynomial:
/// `{"parity": "even|odd|none", "terms": [{"exp": e, "num": "…", "den": "…"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub parity: Parity,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: u32,
    pub num: String,
    pub den: String,
}

impl Serialize for SparsePoly<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        SparsePoly::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl<T: Coefficient + fmt::Display + Signed> fmt::Display for SparsePoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                _ if unit => {}
                _ => write!(f, "{mag}*")?,
            }
            match e {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}
