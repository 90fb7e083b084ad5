use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::regime::Regime;
use super::vector::FockVector;
use super::word::{CreationWord, MixedWord};

/// `<0| word |0>` by exhaustive rewriting with the q-mutation relation.
///
/// This is the reference evaluator: it knows nothing but
/// `a_i a†_j = δ_ij + q a†_j a_i`, `a_i |0> = 0` and `<0| a†_j = 0`.
pub fn vev_rewrite<R: Regime>(word: &MixedWord, regime: &R) -> R::Scalar {
    FockVector::<R::Scalar>::vacuum()
        .apply(word, regime)
        .coefficient(&CreationWord::vacuum())
}

/// `<bra|ket>` for two creation words, as a sum over mode-preserving pairings.
///
/// Pairing bra position `s` with ket position `π(s)`, each pairing is
/// weighted by `q^inv(π)`, the number of crossing pairing lines. The sum is
/// accumulated one bra position at a time over subsets of used ket positions.
pub fn vev_qpermanent<R: Regime>(bra: &CreationWord, ket: &CreationWord, regime: &R) -> R::Scalar {
    let n = bra.len();
    if n != ket.len() {
        return R::Scalar::zero();
    }
    assert!(n <= 64, "words longer than 64 modes are not supported");
    let q_pows: Vec<R::Scalar> = (0..n.max(1)).map(|k| regime.q_pow(k)).collect();

    let mut layer: BTreeMap<u64, R::Scalar> = BTreeMap::new();
    layer.insert(0, R::Scalar::one());
    for &mode in bra.modes() {
        let mut next: BTreeMap<u64, R::Scalar> = BTreeMap::new();
        for (&used, coeff) in &layer {
            for (t, &m) in ket.modes().iter().enumerate() {
                if m != mode || used & (1 << t) != 0 {
                    continue;
                }
                // Earlier bra positions already paired to later ket positions cross this line.
                let crossings = (used >> t >> 1).count_ones() as usize;
                let term = coeff.clone() * q_pows[crossings].clone();
                let slot = next.entry(used | (1 << t)).or_insert_with(R::Scalar::zero);
                *slot = slot.clone() + term;
            }
        }
        if next.is_empty() {
            return R::Scalar::zero();
        }
        layer = next;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    layer.remove(&full).unwrap_or_else(R::Scalar::zero)
}

/// Bilinear extension of [`vev_qpermanent`]. Coefficients are real, so no
/// conjugation is applied.
pub fn inner_product<R: Regime>(
    u: &FockVector<R::Scalar>,
    v: &FockVector<R::Scalar>,
    regime: &R,
) -> R::Scalar {
    if u.quanta() != v.quanta() {
        return R::Scalar::zero();
    }
    let mut acc = R::Scalar::zero();
    for (wu, cu) in u.iter() {
        for (wv, cv) in v.iter() {
            let overlap = vev_qpermanent(wu, wv, regime);
            if !overlap.is_zero() {
                acc = acc + cu.clone() * cv.clone() * overlap;
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{Exact, Mode, Numeric, Op};
    use crate::qnum::QPoly;
    use proptest::prelude::*;

    fn parse(s: &str) -> MixedWord {
        s.parse().unwrap()
    }

    #[test]
    fn rewrite_examples() {
        assert_eq!(vev_rewrite(&parse("a1 ad1"), &Exact), QPoly::one());
        assert_eq!(vev_rewrite(&parse("a1 a2 ad2 ad1"), &Exact), QPoly::one());
        assert_eq!(
            vev_rewrite(&parse("a2 a1 ad2 ad1"), &Exact),
            QPoly::monomial(1)
        );
        assert_eq!(vev_rewrite(&parse("a1 ad2"), &Exact), QPoly::zero());
        assert_eq!(vev_rewrite(&parse("ad1 a1"), &Exact), QPoly::zero());
        assert_eq!(vev_rewrite(&parse(""), &Exact), QPoly::one());
    }

    #[test]
    fn rewrite_handles_interleaved_words() {
        // <0| a1 ad1 a1 ad1 |0> = 1 and <0| a1 a1 ad1 ad1 |0> = 1 + q
        assert_eq!(vev_rewrite(&parse("a1 ad1 a1 ad1"), &Exact), QPoly::one());
        assert_eq!(
            vev_rewrite(&parse("a1 a1 ad1 ad1"), &Exact),
            QPoly::from_i64(&[1, 1])
        );
    }

    #[test]
    fn qpermanent_examples() {
        let w12 = CreationWord::from_indices(&[1, 2]);
        let w21 = CreationWord::from_indices(&[2, 1]);
        let w11 = CreationWord::from_indices(&[1, 1]);
        assert_eq!(vev_qpermanent(&w12, &w12, &Exact), QPoly::one());
        assert_eq!(vev_qpermanent(&w12, &w21, &Exact), QPoly::monomial(1));
        assert_eq!(vev_qpermanent(&w11, &w11, &Exact), QPoly::from_i64(&[1, 1]));
        assert!(vev_qpermanent(&w11, &w12, &Exact).is_zero());
        assert!(vev_qpermanent(&w11, &CreationWord::from_indices(&[1]), &Exact).is_zero());
    }

    #[test]
    fn phi_s_and_phi_a_are_orthonormal() {
        for q in [-0.9, -0.3, 0.0, 0.4, 0.95] {
            let r = Numeric::new(q);
            let w12 = CreationWord::from_indices(&[1, 2]);
            let w21 = CreationWord::from_indices(&[2, 1]);
            let ns = 1.0 / (2.0 * (1.0 + q)).sqrt();
            let na = 1.0 / (2.0 * (1.0 - q)).sqrt();
            let phi_s = FockVector::from_terms([(w12.clone(), ns), (w21.clone(), ns)]).unwrap();
            let phi_a = FockVector::from_terms([(w12, na), (w21, -na)]).unwrap();
            assert!((inner_product(&phi_s, &phi_s, &r) - 1.0).abs() < 1e-12);
            assert!((inner_product(&phi_a, &phi_a, &r) - 1.0).abs() < 1e-12);
            assert!(inner_product(&phi_s, &phi_a, &r).abs() < 1e-12);
        }
    }

    #[test]
    fn q_zero_counts_only_identical_words() {
        let r = Numeric::new(0.0);
        let a = CreationWord::from_indices(&[1, 1, 2]);
        let b = CreationWord::from_indices(&[1, 2, 1]);
        assert_eq!(vev_qpermanent(&a, &a, &r), 1.0);
        assert_eq!(vev_qpermanent(&a, &b, &r), 0.0);
    }

    #[test]
    fn bosonic_limit_is_the_permanent() {
        // Mode-match matrix of [1,1,2] against itself has permanent 2! * 1! = 2.
        let a = CreationWord::from_indices(&[1, 1, 2]);
        let b = CreationWord::from_indices(&[2, 1, 1]);
        assert_eq!(vev_qpermanent(&a, &b, &Numeric::new(1.0)), 2.0);
    }

    fn arb_word(max_len: usize) -> impl Strategy<Value = CreationWord> {
        prop::collection::vec(0u16..3, 0..=max_len).prop_map(|v| CreationWord::from_indices(&v))
    }

    fn arb_vector() -> impl Strategy<Value = FockVector<f64>> {
        (1usize..=4).prop_flat_map(|n| {
            prop::collection::vec((prop::collection::vec(0u16..3, n), -2.0f64..2.0), 1..6).prop_map(
                move |terms| {
                    FockVector::from_terms(
                        terms
                            .into_iter()
                            .map(|(w, c)| (CreationWord::from_indices(&w), c)),
                    )
                    .unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn qpermanent_matches_rewrite(bra in arb_word(4), ket in arb_word(4)) {
            let word = MixedWord::sandwich(&bra, &MixedWord::default(), &ket);
            prop_assert_eq!(vev_qpermanent(&bra, &ket, &Exact), vev_rewrite(&word, &Exact));
        }

        #[test]
        fn number_conservation(bra in arb_word(4), ket in arb_word(4)) {
            let mut a: Vec<_> = bra.modes().to_vec();
            let mut b: Vec<_> = ket.modes().to_vec();
            a.sort();
            b.sort();
            if a != b {
                prop_assert!(vev_qpermanent(&bra, &ket, &Exact).is_zero());
            }
        }

        #[test]
        fn gram_positivity(v in arb_vector(), q in -0.999f64..0.999) {
            prop_assert!(inner_product(&v, &v, &Numeric::new(q)) >= -1e-12);
        }

        #[test]
        fn hermiticity(u in arb_vector(), v in arb_vector(), q in -1.0f64..=1.0) {
            let r = Numeric::new(q);
            let a = inner_product(&u, &v, &r);
            let b = inner_product(&v, &u, &r);
            prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0));
        }
    }

    #[test]
    fn ket_action_matches_sandwich() {
        // <0| a1 (a1 a2 ad2) ad1 |0>, applied to the ket directly
        let op = MixedWord::new(vec![Op::annihilate(Mode(2)), Op::create(Mode(2))]);
        let ket = CreationWord::from_indices(&[1]);
        let full = MixedWord::sandwich(&ket, &op, &ket);
        let direct: FockVector<QPoly> = FockVector::basis(ket.clone()).apply(&op, &Exact);
        assert_eq!(
            vev_rewrite(&full, &Exact),
            inner_product(&FockVector::basis(ket), &direct, &Exact)
        );
    }
}
