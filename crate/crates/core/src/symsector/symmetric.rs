use num_bigint::BigInt;
use num_traits::One;

use super::{enumerate_permutation_words, EnumerationLimits, OccupancyVector};
use crate::error::{QuonError, Result};
use crate::fock::{inner_product, normal_order, FockVector, MixedWord, Mode, Numeric, Regime};
use crate::qnum::{q_bracket, q_factorial, q_factorial_poly, DeformationParameter, QPoly};

/// Un-normalized symmetrized product: every distinct ordering with unit weight.
///
/// Summing over all `N!` permutations and dividing by `prod n_m!` leaves each
/// distinct word exactly once.
pub fn symmetrizer<S>(occ: &OccupancyVector, limits: &EnumerationLimits) -> Result<FockVector<S>>
where
    S: Clone + num_traits::Zero + One + std::ops::Add<Output = S> + std::ops::Mul<Output = S>,
{
    if occ.quanta() == 0 {
        return Ok(FockVector::vacuum());
    }
    let words = enumerate_permutation_words(occ, limits)?;
    FockVector::from_terms(words.into_iter().map(|w| (w, S::one())))
}

/// `<S|S>` of the un-normalized symmetrizer: `N! [N]! / prod n_m!`.
pub fn symmetric_norm_squared(occ: &OccupancyVector) -> QPoly {
    let words = BigInt::from(occ.word_count());
    q_factorial_poly(occ.quanta() as u32).scale(&words)
}

/// Normalized symmetric state `|n_i n_j ...; S>`.
///
/// Each distinct word carries the amplitude `sqrt(prod n_m! / (N! [N]!))`.
/// At `q = -1` every state with two or more quons is null and is rejected.
pub fn symmetric_state(
    occ: &OccupancyVector,
    q: DeformationParameter,
    limits: &EnumerationLimits,
) -> Result<FockVector<f64>> {
    let n = occ.quanta() as u32;
    let qf = q_factorial(n, q.value());
    if qf <= 0.0 {
        return Err(QuonError::NullState(format!(
            "symmetric state {occ} has zero norm at q = {q}"
        )));
    }
    let n_fact: f64 = (1..=n).map(f64::from).product();
    let amplitude = (occ.factorial_product() / (n_fact * qf)).sqrt();
    Ok(symmetrizer::<f64>(occ, limits)?.scale(&amplitude))
}

/// `a_i |occ; S> = sqrt([N]/N) sqrt(n_i) |occ - e_i; S>`.
///
/// Annihilating an empty mode returns a zero coefficient and the occupancy
/// unchanged.
pub fn lower_symmetric(
    occ: &OccupancyVector,
    mode: Mode,
    q: DeformationParameter,
) -> (f64, OccupancyVector) {
    match occ.lowered(mode) {
        None => (0.0, occ.clone()),
        Some(next) => {
            let n = occ.quanta() as u32;
            let coeff =
                (q_bracket(n, q.value()) / f64::from(n)).sqrt() * f64::from(occ.count(mode)).sqrt();
            (coeff, next)
        }
    }
}

/// `<occ + e_i; S| a†_i |occ; S>`, the transpose of [`lower_symmetric`].
///
/// Only a matrix element: `a†_i` acting on a symmetric state leaves the
/// symmetric sector.
pub fn raise_symmetric_matrix_element(
    occ: &OccupancyVector,
    mode: Mode,
    q: DeformationParameter,
) -> f64 {
    let n = occ.quanta() as u32 + 1;
    (q_bracket(n, q.value()) / f64::from(n)).sqrt() * f64::from(occ.count(mode) + 1).sqrt()
}

fn lower_chain<'a>(
    occ: &OccupancyVector,
    modes: impl Iterator<Item = &'a Mode>,
    q: DeformationParameter,
) -> (f64, OccupancyVector) {
    let mut coeff = 1.0;
    let mut current = occ.clone();
    for &m in modes {
        let (c, next) = lower_symmetric(&current, m, q);
        if c == 0.0 {
            return (0.0, current);
        }
        coeff *= c;
        current = next;
    }
    (coeff, current)
}

/// `<bra; S| op |ket; S>` for any operator string, without building states.
///
/// The operator is normal ordered with the q-mutation relation; each normal
/// word `a†_{c1}..a†_{ck} a_{d1}..a_{dm}` then reduces to lowering chains on
/// both sides, `<a_{ck}..a_{c1} bra | a_{d1}..a_{dm} ket>`, and symmetric
/// states with different occupancies are orthogonal.
pub fn symmetric_matrix_element(
    bra: &OccupancyVector,
    op: &MixedWord,
    ket: &OccupancyVector,
    q: DeformationParameter,
) -> f64 {
    let regime = Numeric::new(q.value());
    normal_order(op, &regime)
        .into_iter()
        .map(|(word, c)| {
            let (ck, occ_k) = lower_chain(ket, word.annihilators.iter().rev(), q);
            if ck == 0.0 {
                return 0.0;
            }
            let (cb, occ_b) = lower_chain(bra, word.creators.iter(), q);
            if cb == 0.0 || occ_b != occ_k {
                return 0.0;
            }
            c * ck * cb
        })
        .sum()
}

/// Same matrix element computed by building both states in the word basis,
/// applying the operator through the rewrite kernel, and taking the overlap.
pub fn symmetric_matrix_element_bruteforce(
    bra: &OccupancyVector,
    op: &MixedWord,
    ket: &OccupancyVector,
    q: DeformationParameter,
    limits: &EnumerationLimits,
) -> Result<f64> {
    let regime = Numeric::new(q.value());
    let b = symmetric_state(bra, q, limits)?;
    let k = symmetric_state(ket, q, limits)?.apply(op, &regime);
    if b.quanta() != k.quanta() {
        return Ok(0.0);
    }
    Ok(inner_product(&b, &k, &regime))
}

/// Regime-generic `a_i` on the un-normalized symmetrizer, for the exact
/// induction check `a_i S_N = [N] S_{N-1}`.
pub fn lowered_symmetrizer<R: Regime>(
    occ: &OccupancyVector,
    mode: Mode,
    regime: &R,
    limits: &EnumerationLimits,
) -> Result<FockVector<R::Scalar>> {
    Ok(symmetrizer::<R::Scalar>(occ, limits)?.annihilate(mode, regime))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{CreationWord, Exact};
    use crate::qnum::q_bracket_poly;

    fn occ(occ_str: &str) -> OccupancyVector {
        occ_str.parse().unwrap()
    }

    fn dq(q: f64) -> DeformationParameter {
        DeformationParameter::new(q).unwrap()
    }

    fn limits() -> EnumerationLimits {
        EnumerationLimits::default()
    }

    #[test]
    fn single_quon_state() {
        let s = symmetric_state(&occ("1:1"), dq(0.3), &limits()).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.coefficient(&CreationWord::from_indices(&[1])) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_quon_symmetric_state_is_phi_s() {
        let q = 0.45;
        let s = symmetric_state(&occ("1:1 2:1"), dq(q), &limits()).unwrap();
        let expected = 1.0 / (2.0 * (1.0 + q)).sqrt();
        for w in [[1, 2], [2, 1]] {
            assert!((s.coefficient(&CreationWord::from_indices(&w)) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn three_quon_symmetric_amplitude() {
        let q = -0.2;
        let s = symmetric_state(&occ("1:1 2:1 3:1"), dq(q), &limits()).unwrap();
        let expected = 1.0 / (6.0 * (1.0 + 2.0 * q + 2.0 * q * q + q * q * q)).sqrt();
        assert_eq!(s.len(), 6);
        for (_, c) in s.iter() {
            assert!((c - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn unit_norm() {
        for occ_str in ["1:1", "1:2", "1:1 2:1", "1:2 2:1", "1:1 2:2 3:1", "1:3 2:2"] {
            for q in [-0.9, -0.5, 0.0, 0.5, 0.99, 1.0] {
                let s = symmetric_state(&occ(occ_str), dq(q), &limits()).unwrap();
                let norm = inner_product(&s, &s, &Numeric::new(q));
                assert!((norm - 1.0).abs() < 1e-10, "{occ_str} q={q}: {norm}");
            }
        }
    }

    #[test]
    fn fermionic_point_is_null() {
        let err = symmetric_state(&occ("1:1 2:1"), dq(-1.0), &limits()).unwrap_err();
        assert!(matches!(err, QuonError::NullState(_)));
        assert!(symmetric_state(&occ("1:1"), dq(-1.0), &limits()).is_ok());
    }

    #[test]
    fn exact_unnormalized_norm() {
        for occ_str in ["1:2", "1:1 2:1 3:1", "1:2 2:1"] {
            let o = occ(occ_str);
            let s: FockVector<QPoly> = symmetrizer(&o, &limits()).unwrap();
            assert_eq!(
                inner_product(&s, &s, &Exact),
                symmetric_norm_squared(&o),
                "{occ_str}"
            );
        }
    }

    #[test]
    fn lowering_examples() {
        let (c, next) = lower_symmetric(&occ("1:1"), Mode(1), dq(0.7));
        assert!((c - 1.0).abs() < 1e-15);
        assert_eq!(next, OccupancyVector::vacuum());

        let q = 0.35;
        let (c, next) = lower_symmetric(&occ("1:2"), Mode(1), dq(q));
        assert!((c - (1.0 + q).sqrt()).abs() < 1e-15);
        assert_eq!(next, occ("1:1"));

        let (c, next) = lower_symmetric(&occ("1:5"), Mode(1), dq(1.0));
        assert!((c - 5f64.sqrt()).abs() < 1e-14);
        assert_eq!(next, occ("1:4"));

        let (c, next) = lower_symmetric(&occ("1:2"), Mode(2), dq(q));
        assert_eq!(c, 0.0);
        assert_eq!(next, occ("1:2"));
    }

    #[test]
    fn lowering_by_direct_expansion() {
        // a_1 (a†_1)^2 |0> = (1 + q) a†_1 |0>, so a_1 |2;S> = sqrt(1 + q) |1;S>.
        let v: FockVector<QPoly> = FockVector::basis(CreationWord::from_indices(&[1, 1]));
        let lowered = v.annihilate(Mode(1), &Exact);
        assert_eq!(
            lowered.coefficient(&CreationWord::from_indices(&[1])),
            q_bracket_poly(2)
        );
    }

    #[test]
    fn raising_examples() {
        assert!(
            (raise_symmetric_matrix_element(&OccupancyVector::vacuum(), Mode(1), dq(0.2)) - 1.0)
                .abs()
                < 1e-15
        );
        let q = 0.6;
        let r = raise_symmetric_matrix_element(&occ("1:1"), Mode(1), dq(q));
        assert!((r - (1.0 + q).sqrt()).abs() < 1e-15);
        let r = raise_symmetric_matrix_element(&occ("1:3 2:1"), Mode(1), dq(1.0));
        assert!((r - 2.0).abs() < 1e-15);
    }

    #[test]
    fn raising_matches_bruteforce() {
        let op: MixedWord = "ad1".parse().unwrap();
        for q in [0.6, -0.4] {
            for occ_str in ["1:1", "1:1 2:1", "1:2 3:1"] {
                let ket = occ(occ_str);
                let bra = ket.raised(Mode(1));
                let brute =
                    symmetric_matrix_element_bruteforce(&bra, &op, &ket, dq(q), &limits()).unwrap();
                let closed = raise_symmetric_matrix_element(&ket, Mode(1), dq(q));
                assert!((brute - closed).abs() < 1e-12, "{occ_str} q={q}");
            }
        }
    }

    #[test]
    fn chained_elements_match_bruteforce() {
        let ops = [
            "ad1 a2",
            "ad2 a1 ad1 a2",
            "a1 ad1",
            "ad1 a1 ad2 a2",
            "ad1 ad2 a2 a1",
        ];
        let pairs = [
            ("1:2 2:1", "1:1 2:2"),
            ("1:2 2:1", "1:2 2:1"),
            ("1:1 2:2", "1:1 2:2"),
        ];
        for q in [0.3, 0.9] {
            for op in ops {
                let op: MixedWord = op.parse().unwrap();
                for (b, k) in pairs {
                    let (b, k) = (occ(b), occ(k));
                    let fast = symmetric_matrix_element(&b, &op, &k, dq(q));
                    let brute =
                        symmetric_matrix_element_bruteforce(&b, &op, &k, dq(q), &limits()).unwrap();
                    assert!(
                        (fast - brute).abs() < 1e-12,
                        "{op} <{b}|..|{k}> q={q}: {fast} vs {brute}"
                    );
                }
            }
        }
    }

    #[test]
    fn induction_step_exact() {
        for occ_str in ["1:2 2:1", "1:1 2:1 3:1", "1:3", "1:2 2:2"] {
            let o = occ(occ_str);
            let n = o.quanta() as u32;
            for (m, _) in o.iter() {
                let lhs = lowered_symmetrizer(&o, m, &Exact, &limits()).unwrap();
                let rhs: FockVector<QPoly> =
                    symmetrizer(&o.lowered(m).unwrap(), &limits()).unwrap();
                assert_eq!(lhs, rhs.scale(&q_bracket_poly(n)), "{occ_str} mode {m}");
            }
        }
    }
}
