//! Exact phase labels measured in units of the cube root of unity.
//!
//! A label `a` stands for the complex number `ω^a = exp(2πi·a/3)`, so
//! labels live modulo 3 and a phase pair is Clifford iff both entries are
//! integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational used for every phase exponent.
pub type Rational = BigRational;

/// Shorthand for building a rational from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Reduce `r` into `[0, m)`.
pub fn modulo(r: &Rational, m: i64) -> Rational {
    let m = int(m);
    let q = (r / &m).floor();
    r - q * m
}

/// Reduce into `[0, 3)`.
pub fn mod3(r: &Rational) -> Rational {
    modulo(r, 3)
}

/// Parse `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Short textual form: `"3"` for integers, `"1/3"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Always-fractional textual form used by the JSON schema.
pub fn format_rational_strict(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `ω^r` as a floating point complex number. The exponent is reduced exactly
/// before conversion so large labels do not lose precision.
pub fn omega_pow(r: &Rational) -> Complex64 {
    let reduced = mod3(r);
    let x = reduced.to_f64().unwrap_or(0.0);
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x / 3.0)
}

/// A pair of phase labels `(a, b)`: the diagonal `diag(1, ω^a, ω^b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phase {
    a: Rational,
    b: Rational,
}

impl Phase {
    pub fn new(a: Rational, b: Rational) -> Self {
        Phase { a: mod3(&a), b: mod3(&b) }
    }

    pub fn zero() -> Self {
        Phase::new(Rational::zero(), Rational::zero())
    }

    pub fn ints(a: i64, b: i64) -> Self {
        Phase::new(int(a), int(b))
    }

    /// `(a_num/a_den, b_num/b_den)`.
    pub fn ratios(a: (i64, i64), b: (i64, i64)) -> Self {
        Phase::new(rat(a.0, a.1), rat(b.0, b.1))
    }

    pub fn parse(a: &str, b: &str) -> Result<Self> {
        Ok(Phase::new(parse_rational(a)?, parse_rational(b)?))
    }

    /// The qutrit T gate phase `(1/3, -1/3)`.
    pub fn t() -> Self {
        Phase::ratios((1, 3), (-1, 3))
    }

    pub fn tdg() -> Self {
        -Phase::t()
    }

    /// `S = diag(1, 1, ω)`.
    pub fn s() -> Self {
        Phase::ints(0, 1)
    }

    /// The reflection `R = diag(1, 1, -1)`.
    pub fn r() -> Self {
        Phase::ratios((0, 1), (3, 2))
    }

    /// `Z(x, 2x)`, i.e. the Pauli power `Z^x`.
    pub fn pauli(x: i64) -> Self {
        Phase::ints(x, 2 * x)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Exponent applied to basis state `|j⟩` (index taken mod 3).
    pub fn component(&self, j: i64) -> Rational {
        match j.rem_euclid(3) {
            0 => Rational::zero(),
            1 => self.a.clone(),
            _ => self.b.clone(),
        }
    }

    /// Build a phase from a full exponent vector, dividing out the `|0⟩`
    /// component. Returns the phase and the removed global exponent.
    pub fn from_components(c0: Rational, c1: Rational, c2: Rational) -> (Self, Rational) {
        (Phase::new(&c1 - &c0, &c2 - &c0), mod3(&c0))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_clifford(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// `Some(x)` when this is `Z(x, 2x)` for an integer `x`.
    pub fn pauli_power(&self) -> Option<i64> {
        (0..3).find(|&x| *self == Phase::pauli(x))
    }

    pub fn swapped(&self) -> Self {
        Phase { a: self.b.clone(), b: self.a.clone() }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Phase::new(&self.a * k, &self.b * k)
    }

    /// Diagonal entries `(1, ω^a, ω^b)`.
    pub fn diagonal(&self) -> [Complex64; 3] {
        [Complex64::one(), omega_pow(&self.a), omega_pow(&self.b)]
    }

    /// True when both labels have a denominator dividing `d`.
    pub fn has_denominator_dividing(&self, d: i64) -> bool {
        let d = BigInt::from(d);
        [&self.a, &self.b]
            .iter()
            .all(|r| d.is_multiple_of(r.denom()))
    }

    pub fn max_abs_label(&self) -> Rational {
        if self.a.abs() > self.b.abs() {
            self.a.abs()
        } else {
            self.b.abs()
        }
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::zero()
    }
}

impl Add for &Phase {
    type Output = Phase;
    fn add(self, rhs: &Phase) -> Phase {
        Phase::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        &self + &rhs
    }
}

impl Sub for &Phase {
    type Output = Phase;
    fn sub(self, rhs: &Phase) -> Phase {
        Phase::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        &self - &rhs
    }
}

impl Neg for &Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-&self.a, -&self.b)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        -&self
    }
}

/// Componentwise addition modulo 3. Diagonal matrix multiplication forces
/// `Z(a,b)·Z(c,d) = Z(a+c, b+d)`.
pub fn phase_add(p: &Phase, q: &Phase) -> Phase {
    p + q
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", format_rational(&self.a), format_rational(&self.b))
    }
}

/// Serialized as `["a", "b"]` with `"num/den"` strings.
impl serde::Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [format_rational_strict(&self.a), format_rational_strict(&self.b)].serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Phase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        Phase::parse(&a, &b).map_err(serde::de::Error::custom)
    }
}
