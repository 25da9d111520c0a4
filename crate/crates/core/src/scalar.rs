//! Exact global scalars of the form `ω^r · (√3)^k · (−1)^m`.

use std::fmt;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use num_traits::Zero;

use crate::phase::{mod3, omega_pow, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    omega: Rational,
    sqrt3: i32,
    negative: bool,
}

impl Scalar {
    /// Canonical form keeps the ω exponent in `[0, 3/2)`; the half turn is
    /// carried by the sign bit.
    pub fn new(omega: Rational, sqrt3: i32, negative: bool) -> Self {
        let mut omega = mod3(&omega);
        let mut negative = negative;
        let half = rat(3, 2);
        if omega >= half {
            omega -= half;
            negative = !negative;
        }
        Scalar { omega, sqrt3, negative }
    }

    pub fn one() -> Self {
        Scalar::new(Rational::zero(), 0, false)
    }

    pub fn omega(r: Rational) -> Self {
        Scalar::new(r, 0, false)
    }

    pub fn sqrt3(k: i32) -> Self {
        Scalar::new(Rational::zero(), k, false)
    }

    pub fn minus_one() -> Self {
        Scalar::new(Rational::zero(), 0, true)
    }

    pub fn omega_exp(&self) -> &Rational {
        &self.omega
    }

    pub fn sqrt3_exp(&self) -> i32 {
        self.sqrt3
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one()
    }

    pub fn inverse(&self) -> Self {
        Scalar::new(-&self.omega, -self.sqrt3, self.negative)
    }

    pub fn conj(&self) -> Self {
        Scalar::new(-&self.omega, self.sqrt3, self.negative)
    }

    pub fn to_complex(&self) -> Complex64 {
        let sign = if self.negative { -1.0 } else { 1.0 };
        omega_pow(&self.omega) * 3f64.sqrt().powi(self.sqrt3) * sign
    }

    /// Sign folded into the ω exponent: the scalar equals `ω^r (√3)^k`.
    pub fn total_omega(&self) -> Rational {
        if self.negative {
            mod3(&(&self.omega + rat(3, 2)))
        } else {
            self.omega.clone()
        }
    }

    pub fn pow3_free(&self) -> bool {
        self.sqrt3 == 0
    }

    pub fn times_omega(&self, r: &Rational) -> Self {
        Scalar::new(&self.omega + r, self.sqrt3, self.negative)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::one()
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.omega + &rhs.omega,
            self.sqrt3 + rhs.sqrt3,
            self.negative ^ rhs.negative,
        )
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inverse()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { "-" } else { "" };
        write!(
            f,
            "{sign}ω^({})·√3^({})",
            crate::phase::format_rational(&self.omega),
            self.sqrt3
        )
    }
}

/// `-1 = ω^{3/2}` is folded into the sign bit, `i = ω^{3/4}`.
pub fn imaginary_unit() -> Scalar {
    Scalar::omega(rat(3, 4))
}

pub fn three() -> Scalar {
    Scalar::sqrt3(2)
}
