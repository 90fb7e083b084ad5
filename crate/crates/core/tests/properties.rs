use proptest::prelude::*;

use quon::fock::{MixedWord, Mode, Op};
use quon::models::{
    oscillator_energy, oscillator_full_solve, rotor_energy, OscillatorConfig, RotorConfig,
};
use quon::qnum::DeformationParameter;
use quon::symsector::{
    classify_occupancy, symmetric_matrix_element, symmetric_matrix_element_bruteforce,
    ClassifyOptions, EnumerationLimits, OccupancyVector,
};

fn dq(q: f64) -> DeformationParameter {
    DeformationParameter::new(q).unwrap()
}

fn op_strategy() -> impl Strategy<Value = MixedWord> {
    prop::collection::vec((1u16..=2, any::<bool>()), 0..=4).prop_map(|ops| {
        MixedWord::new(
            ops.into_iter()
                .map(|(m, c)| {
                    if c {
                        Op::create(Mode(m))
                    } else {
                        Op::annihilate(Mode(m))
                    }
                })
                .collect(),
        )
    })
}

fn occ(a: u32, b: u32) -> OccupancyVector {
    OccupancyVector::new([(Mode(1), a), (Mode(2), b)])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_elements_agree_with_explicit_states(
        op in op_strategy(),
        ket in (0u32..=3, 0u32..=3),
        shift in -1i32..=1,
        q in -0.95f64..1.0,
    ) {
        let ket_occ = occ(ket.0, ket.1);
        prop_assume!(ket_occ.quanta() > 0);
        let creators = op.ops().iter().filter(|o| o.kind == quon::fock::OpKind::Create).count() as i32;
        let target = ket_occ.quanta() as i32 + 2 * creators - op.len() as i32;
        prop_assume!(target > 0);
        let first = (ket.0 as i32 + shift).clamp(0, target) as u32;
        let bra_occ = occ(first, target as u32 - first);
        let fast = symmetric_matrix_element(&bra_occ, &op, &ket_occ, dq(q));
        let brute = symmetric_matrix_element_bruteforce(&bra_occ, &op, &ket_occ, dq(q), &EnumerationLimits::default()).unwrap();
        prop_assert!((fast - brute).abs() < 1e-9, "{op}: {fast} vs {brute}");
    }

    #[test]
    fn oscillator_symmetric_level_is_closed_form(q in 0.05f64..0.95, n in 1u32..=3) {
        let cfg = OscillatorConfig::new(1.0, dq(q)).unwrap();
        let report = oscillator_full_solve(n, &cfg, &Default::default()).unwrap();
        let s = report.symmetric().unwrap();
        prop_assert!((s.energy - oscillator_energy(n, &cfg)).abs() < 1e-9 * s.energy);
    }

    #[test]
    fn gram_spectrum_is_positive_inside_interval(q in -0.99f64..0.99, a in 1u32..=2, b in 0u32..=2, c in 0u32..=1) {
        let o = OccupancyVector::new([(Mode(1), a), (Mode(2), b), (Mode(3), c)]);
        let s = classify_occupancy(&o, q, false, &ClassifyOptions::default(), &EnumerationLimits::default()).unwrap();
        let total: usize = s.clusters.iter().map(|c| c.multiplicity).sum();
        prop_assert_eq!(total, s.words.len());
        prop_assert!(s.eigenvalues.iter().all(|&e| e > -1e-12));
    }

    #[test]
    fn rotor_energy_is_non_decreasing_in_l(q in 0.01f64..=1.0, l in 0u32..30) {
        let cfg = RotorConfig::new(1.0, dq(q)).unwrap();
        prop_assert!(rotor_energy(l + 1, &cfg) >= rotor_energy(l, &cfg));
    }
}
