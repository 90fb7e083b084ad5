//! q-numbers and exact integer polynomials in the deformation parameter.
//!
//! The bracket used throughout is the asymmetric one,
//! `[N] = (1 - q^N) / (1 - q) = 1 + q + ... + q^(N-1)`, always evaluated in
//! its geometric-sum form so that `q = 1` needs no special case.

mod charpoly;
mod poly;

pub use charpoly::{charpoly, linear_factors, LinearFactor, XPoly};
pub use poly::QPoly;

use std::fmt;

use num_traits::One;

use crate::error::{QuonError, Result};

/// The quon deformation parameter, restricted to `-1 <= q <= 1`.
///
/// `q = 1` is the bosonic limit and `q = -1` the fermionic one.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DeformationParameter(f64);

impl DeformationParameter {
    pub const BOSONIC: Self = Self(1.0);
    pub const FERMIONIC: Self = Self(-1.0);

    pub fn new(q: f64) -> Result<Self> {
        if q.is_finite() && (-1.0..=1.0).contains(&q) {
            Ok(Self(q))
        } else {
            Err(QuonError::InvalidParameter(format!(
                "deformation parameter q = {q} outside [-1, 1]"
            )))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for DeformationParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<f64> for DeformationParameter {
    type Error = QuonError;

    fn try_from(q: f64) -> Result<Self> {
        Self::new(q)
    }
}

/// `[n] = 1 + q + ... + q^(n-1)`; `[0] = 0`.
///
/// Takes a plain `f64` so it can also be evaluated outside the physical
/// interval (the exact-factor search evaluates at integer `q`).
pub fn q_bracket(n: u32, q: f64) -> f64 {
    // Horner on the all-ones polynomial.
    (0..n).fold(0.0, |acc, _| acc * q + 1.0)
}

/// `[n]! = [n][n-1]...[1]`, with `[0]! = 1`.
pub fn q_factorial(n: u32, q: f64) -> f64 {
    (1..=n).map(|k| q_bracket(k, q)).product()
}

/// Exact `1 + q + ... + q^(n-1)`; the zero polynomial for `n = 0`.
pub fn q_bracket_poly(n: u32) -> QPoly {
    QPoly::from_i64(&vec![1; n as usize])
}

/// Exact `[n]!` as a polynomial in `q`.
pub fn q_factorial_poly(n: u32) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, k| &acc * &q_bracket_poly(k))
}
