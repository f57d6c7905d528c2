//! Exact rational helpers and gamma-family special functions.
//!
//! Rational arithmetic is `num_rational::BigRational`. Gamma values are
//! produced through a Lanczos approximation (g = 7, nine terms) in log form so
//! that ratios such as `Γ(199.5)/Γ(200)` never pass through overflowing
//! intermediates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `num/den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Generalized binomial coefficient `(1/k!)·∏_{i<k}(a − i)`.
pub fn gen_binomial(a: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= a - rat(i as i64);
        acc /= rat(i as i64 + 1);
    }
    acc
}

/// Rising factorial `a(a+1)…(a+k−1)`.
pub fn pochhammer(a: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..k {
        acc *= a + rat(i as i64);
    }
    acc
}

pub fn factorial(k: u32) -> Rational {
    pochhammer(&Rational::one(), k)
}

/// Largest integer strictly below `c`.
pub fn largest_int_below(c: &Rational) -> BigInt {
    c.ceil().to_integer() - BigInt::one()
}

pub fn is_integer(x: &Rational) -> bool {
    x.is_integer()
}

/// Nearest binary64 value of a rational. Very large or tiny values saturate.
pub fn to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() && (v != 0.0 || x.is_zero()) {
            return v;
        }
    }
    // Fall back to log-magnitude arithmetic on the numerator and denominator.
    let ln = ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom());
    let mag = ln.exp();
    if x.is_negative() {
        -mag
    } else {
        mag
    }
}

fn ln_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n.abs() >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Parse `"-51"`, `"1/2"`, `"-0.5"`, `"2.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = Rational::from_integer(all);
    match scale.cmp(&0) {
        Ordering::Greater => value *= Rational::from_integer(num_traits::pow(ten, scale as usize)),
        Ordering::Less => value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize)),
        Ordering::Equal => {}
    }
    Ok(if neg { -value } else { value })
}

/// A real number stored as sign and natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScaled {
    /// −1, 0 or +1.
    pub sign: i8,
    /// `ln |value|`; meaningless when `sign == 0`.
    pub ln_abs: f64,
}

impl LogScaled {
    pub const ZERO: LogScaled = LogScaled { sign: 0, ln_abs: 0.0 };
    pub const ONE: LogScaled = LogScaled { sign: 1, ln_abs: 0.0 };

    pub fn new(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            LogScaled { sign: sign.signum(), ln_abs }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogScaled { sign: if x > 0.0 { 1 } else { -1 }, ln_abs: x.abs().ln() }
        }
    }

    pub fn from_rational(x: &Rational) -> Self {
        if x.is_zero() {
            return Self::ZERO;
        }
        let ln = ln_abs_bigint(x.numer()) - ln_abs_bigint(x.denom());
        LogScaled { sign: if x.is_negative() { -1 } else { 1 }, ln_abs: ln }
    }

    /// `exp(ln)`, always positive.
    pub fn from_ln(ln: f64) -> Self {
        LogScaled { sign: 1, ln_abs: ln }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Plain value; saturates to ±∞ or 0 outside the binary64 range.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => s as f64 * self.ln_abs.exp(),
        }
    }

    /// Plain value if it is finite and nonzero (or exactly zero).
    pub fn try_to_f64(&self) -> Option<f64> {
        let v = self.to_f64();
        if self.sign == 0 || (v.is_finite() && v != 0.0) {
            Some(v)
        } else {
            None
        }
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs / std::f64::consts::LN_10
    }

    pub fn recip(&self) -> Self {
        LogScaled { sign: self.sign, ln_abs: -self.ln_abs }
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.sign < 0 {
            return Err(Error::Parameter("square root of a negative value".into()));
        }
        Ok(LogScaled { sign: self.sign, ln_abs: 0.5 * self.ln_abs })
    }

    pub fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        let sign = if k % 2 == 0 { self.sign.abs() } else { self.sign };
        LogScaled::new(sign, self.ln_abs * k as f64)
    }

    /// `|self/other − 1|`, computed without leaving log form.
    pub fn rel_diff(&self, other: &LogScaled) -> f64 {
        if self.sign == 0 && other.sign == 0 {
            return 0.0;
        }
        if self.sign != other.sign {
            return f64::INFINITY;
        }
        (self.ln_abs - other.ln_abs).exp_m1().abs()
    }
}

impl Mul for LogScaled {
    type Output = LogScaled;
    fn mul(self, rhs: LogScaled) -> LogScaled {
        LogScaled::new(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl Div for LogScaled {
    type Output = LogScaled;
    fn div(self, rhs: LogScaled) -> LogScaled {
        assert!(rhs.sign != 0, "LogScaled division by zero");
        LogScaled::new(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
    }
}

impl fmt::Display for LogScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.try_to_f64() {
            Some(v) => write!(f, "{v:e}"),
            None => {
                let l10 = self.log10_abs();
                let e = l10.floor();
                let sign = if self.sign < 0 { "-" } else { "" };
                write!(f, "{sign}{}e{}", 10f64.powf(l10 - e), e as i64)
            }
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_P: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn c<F: FromPrimitive>(x: f64) -> F {
    F::from_f64(x).expect("constant representable")
}

/// `sin(πx)` with exact argument reduction.
pub fn sin_pi<F: Float + FloatConst + FromPrimitive>(x: F) -> F {
    let two: F = c(2.0);
    let r = x - two * (x / two).round();
    if r == F::zero() || r.abs() == F::one() {
        return F::zero();
    }
    (F::PI() * r).sin()
}

fn lanczos_ln_gamma<F: Float + FloatConst + FromPrimitive>(x: F) -> F {
    // x >= 1/2
    let z = x - F::one();
    let mut a: F = c(LANCZOS_P[0]);
    for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
        a = a + c::<F>(*p) / (z + F::from_usize(i).unwrap());
    }
    let t = z + c(LANCZOS_G + 0.5);
    let half_ln_two_pi: F = c(0.918_938_533_204_672_7);
    half_ln_two_pi + (z + c(0.5)) * t.ln() - t + a.ln()
}

/// Sign and natural log of `|Γ(x)|`.
pub fn ln_gamma<F: Float + FloatConst + FromPrimitive>(x: F) -> Result<(i8, F)> {
    if x.is_nan() {
        return Err(Error::Parameter("gamma of NaN".into()));
    }
    if x <= F::zero() && x == x.floor() {
        return Err(Error::Pole(format!("Gamma has a pole at {}", x.to_f64().unwrap_or(f64::NAN))));
    }
    let half: F = c(0.5);
    if x >= half {
        return Ok((1, lanczos_ln_gamma(x)));
    }
    // Γ(x)Γ(1−x) = π / sin(πx)
    let s = sin_pi(x);
    let (_, ln_reflected) = ln_gamma(F::one() - x)?;
    let sign = if s < F::zero() { -1 } else { 1 };
    Ok((sign, F::PI().ln() - s.abs().ln() - ln_reflected))
}

/// `Γ(x)` as a [`LogScaled`].
pub fn gamma_ls(x: f64) -> Result<LogScaled> {
    let (s, l) = ln_gamma(x)?;
    Ok(LogScaled::new(s, l))
}

/// `z! = Γ(z + 1)` for real `z`, as a [`LogScaled`].
pub fn real_factorial(z: f64) -> Result<LogScaled> {
    gamma_ls(z + 1.0).map_err(|_| Error::Pole(format!("factorial has a pole at z = {z}")))
}

/// Same as [`real_factorial`] with an exact argument; integer arguments avoid
/// any rounding of the pole test.
pub fn rational_factorial(z: &Rational) -> Result<LogScaled> {
    let arg = z + Rational::one();
    if arg.is_integer() && !arg.is_positive() {
        return Err(Error::Pole(format!("factorial has a pole at z = {z}")));
    }
    real_factorial(to_f64(z))
}

/// `Γ(x)` with an exact argument.
pub fn rational_gamma(x: &Rational) -> Result<LogScaled> {
    rational_factorial(&(x - Rational::one()))
}

/// Principal-branch-free `ln Γ(z)` for complex `z` (imaginary part defined
/// modulo 2π, which is all [`complex_gamma`] needs).
pub fn complex_ln_gamma<F: Float + FloatConst + FromPrimitive>(z: Complex<F>) -> Result<Complex<F>> {
    if z.im == F::zero() && z.re <= F::zero() && z.re == z.re.floor() {
        return Err(Error::Pole(format!(
            "Gamma has a pole at {}",
            z.re.to_f64().unwrap_or(f64::NAN)
        )));
    }
    let half: F = c(0.5);
    if z.re < half {
        let pi = Complex::new(F::PI(), F::zero());
        let one = Complex::new(F::one(), F::zero());
        let s = (pi * z).sin();
        return Ok(pi.ln() - s.ln() - complex_ln_gamma(one - z)?);
    }
    let zm = z - F::one();
    let mut a = Complex::new(c::<F>(LANCZOS_P[0]), F::zero());
    for (i, p) in LANCZOS_P.iter().enumerate().skip(1) {
        a = a + Complex::new(c::<F>(*p), F::zero()) / (zm + F::from_usize(i).unwrap());
    }
    let t = zm + c::<F>(LANCZOS_G + 0.5);
    let half_ln_two_pi: F = c(0.918_938_533_204_672_7);
    Ok((zm + half) * t.ln() - t + a.ln() + half_ln_two_pi)
}

/// `Γ(z)` for complex `z`.
pub fn complex_gamma<F: Float + FloatConst + FromPrimitive>(z: Complex<F>) -> Result<Complex<F>> {
    Ok(complex_ln_gamma(z)?.exp())
}
