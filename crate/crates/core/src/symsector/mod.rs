//! Permutation-symmetry structure of many-quon states.
//!
//! A product `a†_i^{n_i} a†_j^{n_j} ... |0>` spans, through all its distinct
//! orderings, a non-orthonormal word basis. Diagonalizing the Gram matrix of
//! that basis separates symmetric, antisymmetric and mixed-symmetry sectors;
//! the symmetric sector also has a closed form (see [`symmetric_state`]).

mod classify;
mod occupancy;
mod symmetric;

pub use classify::{
    classify_occupancy, classify_sectors, exact_gram_charpoly, ClassifyOptions, GramSpectrum,
    SectorCluster, SectorKind, SectorLabel,
};
pub use occupancy::OccupancyVector;
pub use symmetric::{
    lower_symmetric, lowered_symmetrizer, raise_symmetric_matrix_element, symmetric_matrix_element,
    symmetric_matrix_element_bruteforce, symmetric_norm_squared, symmetric_state, symmetrizer,
};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{QuonError, Result};
use crate::fock::{vev_qpermanent, CreationWord, Exact, Numeric, Regime};
use crate::qnum::QPoly;

/// Size guards for word enumeration (factorial growth).
#[derive(Debug, Clone, Copy)]
pub struct EnumerationLimits {
    pub max_quanta: usize,
    pub max_words: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_quanta: 8,
            max_words: 1680,
        }
    }
}

/// All distinct orderings of the occupancy, in lexicographic order.
pub fn enumerate_permutation_words(
    occ: &OccupancyVector,
    limits: &EnumerationLimits,
) -> Result<Vec<CreationWord>> {
    let n = occ.quanta();
    if n == 0 {
        return Err(QuonError::InvalidParameter(
            "occupancy must hold at least one quon".into(),
        ));
    }
    if n > limits.max_quanta {
        return Err(QuonError::CapExceeded {
            what: "quanta",
            requested: n,
            limit: limits.max_quanta,
        });
    }
    let count = occ.word_count();
    if count > limits.max_words as u128 {
        return Err(QuonError::CapExceeded {
            what: "permutation words",
            requested: usize::try_from(count).unwrap_or(usize::MAX),
            limit: limits.max_words,
        });
    }

    let mut current = occ.sorted_modes();
    let mut words = Vec::with_capacity(count as usize);
    loop {
        words.push(CreationWord::new(current.clone()));
        if !next_permutation(&mut current) {
            break;
        }
    }
    Ok(words)
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v
        .iter()
        .rposition(|x| *x > v[i])
        .expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Overlap matrix `<w_a|w_b>` in any scalar regime. Rows fill in parallel.
pub fn gram_matrix<R: Regime>(words: &[CreationWord], regime: &R) -> Vec<Vec<R::Scalar>> {
    words
        .par_iter()
        .map(|a| words.iter().map(|b| vev_qpermanent(a, b, regime)).collect())
        .collect()
}

pub fn gram_matrix_exact(words: &[CreationWord]) -> Vec<Vec<QPoly>> {
    gram_matrix(words, &Exact)
}

pub fn gram_matrix_numeric(words: &[CreationWord], q: f64) -> DMatrix<f64> {
    let rows = gram_matrix(words, &Numeric::new(q));
    let n = words.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}
