use std::fmt::Debug;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use crate::qnum::QPoly;

/// Scalar regime for Fock-space coefficients.
///
/// [`Exact`] keeps every coefficient as an integer polynomial in `q`;
/// [`Numeric`] evaluates eagerly at a fixed `q` in double precision. All
/// kernel operations are generic over the regime and behave identically.
pub trait Regime: Sync {
    type Scalar: Clone
        + Debug
        + PartialEq
        + Send
        + Sync
        + Zero
        + One
        + Add<Output = Self::Scalar>
        + Mul<Output = Self::Scalar>;

    /// `q^k` in this regime.
    fn q_pow(&self, k: usize) -> Self::Scalar;

    fn int(&self, n: i64) -> Self::Scalar;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Exact;

impl Regime for Exact {
    type Scalar = QPoly;

    fn q_pow(&self, k: usize) -> QPoly {
        QPoly::monomial(k)
    }

    fn int(&self, n: i64) -> QPoly {
        QPoly::constant(n)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Numeric {
    pub q: f64,
}

impl Numeric {
    pub fn new(q: f64) -> Self {
        Self { q }
    }
}

impl Regime for Numeric {
    type Scalar = f64;

    fn q_pow(&self, k: usize) -> f64 {
        self.q.powi(k as i32)
    }

    fn int(&self, n: i64) -> f64 {
        n as f64
    }
}
