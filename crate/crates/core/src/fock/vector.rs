use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::regime::Regime;
use super::word::{CreationWord, MixedWord, Mode, OpKind};
use crate::error::{QuonError, Result};

/// Homogeneous superposition of creation words with a fixed quon number.
///
/// Terms are kept in word order so that floating sums are reproducible.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<S> {
    quanta: usize,
    terms: BTreeMap<CreationWord, S>,
}

impl<S> FockVector<S>
where
    S: Clone + Zero + One + std::ops::Add<Output = S> + std::ops::Mul<Output = S>,
{
    /// The zero vector in the `quanta`-quon sector.
    pub fn zero(quanta: usize) -> Self {
        Self {
            quanta,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum() -> Self {
        Self::basis(CreationWord::vacuum())
    }

    pub fn basis(word: CreationWord) -> Self {
        let mut v = Self::zero(word.len());
        v.terms.insert(word, S::one());
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (CreationWord, S)>) -> Result<Self> {
        let mut terms = terms.into_iter().peekable();
        let quanta = terms.peek().map_or(0, |(w, _)| w.len());
        let mut v = Self::zero(quanta);
        for (w, c) in terms {
            v.add_term(w, c)?;
        }
        Ok(v)
    }

    pub fn quanta(&self) -> usize {
        self.quanta
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CreationWord, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &CreationWord) -> S {
        self.terms.get(word).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, word: CreationWord, coeff: S) -> Result<()> {
        if word.len() != self.quanta {
            return Err(QuonError::InvalidParameter(format!(
                "word {word} has {} quanta, vector has {}",
                word.len(),
                self.quanta
            )));
        }
        self.accumulate(word, coeff);
        Ok(())
    }

    fn accumulate(&mut self, word: CreationWord, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&word) {
            Some(old) => {
                let sum = old + coeff;
                if !sum.is_zero() {
                    self.terms.insert(word, sum);
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Self::zero(self.quanta);
        for (w, c) in &self.terms {
            out.accumulate(w.clone(), c.clone() * k.clone());
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if !rhs.is_empty() && !self.is_empty() && rhs.quanta != self.quanta {
            return Err(QuonError::InvalidParameter(
                "adding vectors of different quon number".into(),
            ));
        }
        let mut out = if self.is_empty() {
            Self::zero(rhs.quanta)
        } else {
            self.clone()
        };
        for (w, c) in &rhs.terms {
            out.accumulate(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn create(&self, mode: Mode) -> Self {
        let mut out = Self::zero(self.quanta + 1);
        for (w, c) in &self.terms {
            out.accumulate(w.prepend(mode), c.clone());
        }
        out
    }

    /// `a_mode` applied to this vector by repeated use of
    /// `a_i a†_j = δ_ij + q a†_j a_i`, ending on `a_i |0> = 0`.
    pub fn annihilate<R: Regime<Scalar = S>>(&self, mode: Mode, regime: &R) -> Self {
        let mut out = Self::zero(self.quanta.saturating_sub(1));
        for (w, c) in &self.terms {
            for (rest, weight) in annihilate_word(mode, w.modes(), regime) {
                out.accumulate(CreationWord::new(rest), c.clone() * weight);
            }
        }
        out
    }

    /// Applies an operator string, rightmost operator first.
    pub fn apply<R: Regime<Scalar = S>>(&self, word: &MixedWord, regime: &R) -> Self {
        word.ops()
            .iter()
            .rev()
            .fold(self.clone(), |v, op| match op.kind {
                OpKind::Create => v.create(op.mode),
                OpKind::Annihilate => v.annihilate(op.mode, regime),
            })
    }

    pub fn map<T, F: Fn(&S) -> T>(&self, f: F) -> FockVector<T>
    where
        T: Clone + Zero + One + std::ops::Add<Output = T> + std::ops::Mul<Output = T>,
    {
        let mut out = FockVector::zero(self.quanta);
        for (w, c) in &self.terms {
            out.accumulate(w.clone(), f(c));
        }
        out
    }
}

/// `a_i a†_{w0} a†_{w1} ... |0>`: the δ term removes `w0` when it matches,
/// the exchange term carries a factor `q` and moves `a_i` one place right.
fn annihilate_word<R: Regime>(
    mode: Mode,
    word: &[Mode],
    regime: &R,
) -> Vec<(Vec<Mode>, R::Scalar)> {
    let Some((&head, rest)) = word.split_first() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if head == mode {
        out.push((rest.to_vec(), R::Scalar::one()));
    }
    let q = regime.q_pow(1);
    for (tail, c) in annihilate_word(mode, rest, regime) {
        let mut w = Vec::with_capacity(tail.len() + 1);
        w.push(head);
        w.extend(tail);
        out.push((w, q.clone() * c));
    }
    out
}
