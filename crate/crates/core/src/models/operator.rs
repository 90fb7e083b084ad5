use crate::fock::MixedWord;
use crate::qnum::DeformationParameter;
use crate::symsector::{symmetric_matrix_element, OccupancyVector};

/// Real linear combination of operator strings.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorSum {
    pub terms: Vec<(f64, MixedWord)>,
}

impl OperatorSum {
    pub fn word(word: MixedWord) -> Self {
        Self {
            terms: vec![(1.0, word)],
        }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            terms: self.terms.iter().map(|(c, w)| (k * c, w.clone())).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Self { terms }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(-1.0))
    }

    /// Operator product `self * rhs`; words concatenate.
    pub fn mul(&self, rhs: &Self) -> Self {
        let terms = self
            .terms
            .iter()
            .flat_map(|(a, u)| rhs.terms.iter().map(move |(b, v)| (a * b, u.then(v))))
            .collect();
        Self { terms }
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// `<bra; S| self |ket; S>` between normalized symmetric states.
    pub fn symmetric_element(
        &self,
        bra: &OccupancyVector,
        ket: &OccupancyVector,
        q: DeformationParameter,
    ) -> f64 {
        self.terms
            .iter()
            .map(|(c, w)| c * symmetric_matrix_element(bra, w, ket, q))
            .sum()
    }
}
