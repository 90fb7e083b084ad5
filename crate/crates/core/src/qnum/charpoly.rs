//! Exact characteristic polynomials over `Z[q]` and extraction of their
//! linear factors `x - p(q)`.

use std::ops::{Add, Mul, Neg};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::QPoly;

/// Polynomial in `x` whose coefficients are polynomials in `q`.
/// `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XPoly {
    pub coeffs: Vec<QPoly>,
}

impl XPoly {
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// `x - root`.
    pub fn linear(root: &QPoly) -> Self {
        Self {
            coeffs: vec![-root, QPoly::one()],
        }
    }

    pub fn mul(&self, rhs: &XPoly) -> XPoly {
        let mut coeffs = vec![QPoly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        let mut out = XPoly { coeffs };
        out.trim();
        out
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Divide by `x - root`, returning the quotient when the division is exact.
    pub fn div_linear(&self, root: &QPoly) -> Option<XPoly> {
        let n = self.degree()?;
        if n == 0 {
            return None;
        }
        let mut quotient = vec![QPoly::zero(); n];
        let mut carry = QPoly::zero();
        for k in (1..=n).rev() {
            carry = &self.coeffs[k] + &(root * &carry);
            quotient[k - 1] = carry.clone();
        }
        let remainder = &self.coeffs[0] + &(root * &carry);
        remainder.is_zero().then_some(XPoly { coeffs: quotient })
    }

    /// Exact evaluation of every coefficient at an integer `q`.
    pub fn eval_q_int(&self, q: &BigInt) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.eval_int(q)).collect()
    }
}

/// Division-free Berkowitz algorithm for `det(x I - A)` over a commutative ring.
/// Returns coefficients in ascending powers of `x`.
fn berkowitz<T>(a: &[Vec<T>]) -> Vec<T>
where
    T: Clone + Zero + One + Neg<Output = T>,
    for<'x> &'x T: Add<&'x T, Output = T> + Mul<&'x T, Output = T>,
{
    let n = a.len();
    // Descending coefficients of the charpoly of the leading r x r block.
    let mut p: Vec<T> = vec![T::one()];
    for r in 0..n {
        // Toeplitz column: 1, -a_rr, -R C, -R A C, ..., -R A^(r-1) C
        let mut col = Vec::with_capacity(r + 2);
        col.push(T::one());
        col.push(-a[r][r].clone());
        let mut v: Vec<T> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let rc = (0..r).fold(T::zero(), |acc, j| &acc + &(&a[r][j] * &v[j]));
            col.push(-rc);
            v = (0..r)
                .map(|i| (0..r).fold(T::zero(), |acc, j| &acc + &(&a[i][j] * &v[j])))
                .collect();
        }
        let next: Vec<T> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .filter(|&j| i - j < col.len())
                    .fold(T::zero(), |acc, j| &acc + &(&col[i - j] * &p[j]))
            })
            .collect();
        p = next;
    }
    p.reverse();
    p
}

/// Exact characteristic polynomial `det(x I - M)` of a square matrix over `Z[q]`.
pub fn charpoly(matrix: &[Vec<QPoly>]) -> XPoly {
    XPoly {
        coeffs: berkowitz(matrix),
    }
}

fn integer_charpoly(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    berkowitz(matrix)
}

fn eval_ascending(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// A root `p(q)` of a characteristic polynomial together with its exact
/// multiplicity as a factor `(x - p(q))^m` over `Z[q]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFactor {
    pub root: QPoly,
    pub multiplicity: usize,
}

const KRONECKER_BASE: i64 = 64;

fn balanced_digits(mut r: BigInt, base: i64) -> QPoly {
    let b = BigInt::from(base);
    let half = BigInt::from(base / 2);
    let mut digits = Vec::new();
    while !r.is_zero() {
        let mut d = ((&r % &b) + &b) % &b;
        if d > half {
            d -= &b;
        }
        r = (r - &d) / &b;
        digits.push(d);
    }
    QPoly::new(digits)
}

/// Linear factors of the characteristic polynomial of a symmetric matrix over
/// `Z[q]` whose roots have integer coefficients of magnitude below 32.
///
/// Candidates come from Kronecker substitution at `q = 64`: the integer
/// eigenvalues of the specialized matrix are located numerically, confirmed as
/// exact integer roots, decoded digit by digit, and finally confirmed by exact
/// division over `Z[q][x]`. Irrational or non-polynomial eigenvalues yield no
/// factor.
pub fn linear_factors(matrix: &[Vec<QPoly>]) -> Vec<LinearFactor> {
    let n = matrix.len();
    if n == 0 {
        return Vec::new();
    }
    let chi = charpoly(matrix);
    let base = BigInt::from(KRONECKER_BASE);
    let specialized: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| row.iter().map(|p| p.eval_int(&base)).collect())
        .collect();
    let chi_base = integer_charpoly(&specialized);

    let dense = DMatrix::from_fn(n, n, |i, j| specialized[i][j].to_f64().unwrap_or(f64::NAN));
    let mut approx: Vec<f64> = dense.symmetric_eigenvalues().iter().copied().collect();
    approx.sort_by(|a, b| b.total_cmp(a));

    let mut found: Vec<LinearFactor> = Vec::new();
    for lambda in approx {
        if !lambda.is_finite() {
            continue;
        }
        let center = BigInt::from(lambda.round() as i128);
        for delta in -4i64..=4 {
            let r = &center + delta;
            if !eval_ascending(&chi_base, &r).is_zero() {
                continue;
            }
            let root = balanced_digits(r, KRONECKER_BASE);
            if found.iter().any(|f| f.root == root) {
                continue;
            }
            let mut multiplicity = 0;
            let mut rest = chi.clone();
            while let Some(next) = rest.div_linear(&root) {
                multiplicity += 1;
                rest = next;
            }
            if multiplicity > 0 {
                found.push(LinearFactor { root, multiplicity });
            }
        }
    }
    found
}
