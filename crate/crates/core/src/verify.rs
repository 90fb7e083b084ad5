//! Cross-module consistency suites, shared by `quon verify` and the
//! acceptance runner.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{QuonError, Result};
use crate::fock::{vev_qpermanent, vev_rewrite, CreationWord, Exact, MixedWord, Mode, Numeric};
use crate::models::{
    oscillator_degeneracy, oscillator_energy, oscillator_full_solve, rotor_matrix_elements,
    OscillatorConfig, OSC_MODES,
};
use crate::qnum::{q_bracket_poly, DeformationParameter, QPoly, XPoly};
use crate::symsector::{
    classify_occupancy, exact_gram_charpoly, lower_symmetric, lowered_symmetrizer,
    symmetric_matrix_element_bruteforce, symmetric_state, symmetrizer, ClassifyOptions,
    EnumerationLimits, OccupancyVector, SectorKind,
};

/// Largest size any suite accepts.
pub const MAX_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Induction,
    Norm,
    Gram,
    Oscillator,
    Rotor,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Oracle,
        Suite::Induction,
        Suite::Norm,
        Suite::Gram,
        Suite::Oscillator,
        Suite::Rotor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Induction => "induction",
            Suite::Norm => "norm",
            Suite::Gram => "gram",
            Suite::Oscillator => "oscillator",
            Suite::Rotor => "rotor",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = QuonError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| QuonError::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    /// Descriptions of the first few failing checks.
    pub failures: Vec<String>,
    pub failed: usize,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

const MAX_RECORDED_FAILURES: usize = 8;

struct Tally {
    checks: usize,
    failed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    fn finish(self, suite: Suite, start: Instant) -> SuiteReport {
        SuiteReport {
            suite,
            checks: self.checks,
            failures: self.failures,
            failed: self.failed,
            elapsed: start.elapsed(),
        }
    }
}

fn dq(q: f64) -> DeformationParameter {
    DeformationParameter::new(q).expect("suite q values lie in [-1, 1]")
}

/// Every word of the given length over modes `1..=modes`.
pub fn all_words(modes: u16, len: usize) -> Vec<CreationWord> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u16>| {
                (1..=modes).map(move |m| {
                    let mut next = w.clone();
                    next.push(m);
                    next
                })
            })
            .collect();
    }
    out.iter().map(|w| CreationWord::from_indices(w)).collect()
}

/// Every occupancy of `n` quanta over modes `1..=3`.
pub fn three_mode_occupancies(n: u32) -> Vec<OccupancyVector> {
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for b in (0..=n - a).rev() {
            out.push(OccupancyVector::new([
                (Mode(1), a),
                (Mode(2), b),
                (Mode(3), n - a - b),
            ]));
        }
    }
    out
}

fn oracle_agrees(bra: &CreationWord, ket: &CreationWord) -> bool {
    let word = MixedWord::sandwich(bra, &MixedWord::new(Vec::new()), ket);
    vev_qpermanent(bra, ket, &Exact) == vev_rewrite(&word, &Exact)
}

/// Exact agreement of the two vacuum-expectation engines on every pair of
/// words over three modes up to `max_len`, plus `random_pairs` pairs of
/// length `random_len` (the ket a random reordering of the bra).
pub fn oracle_suite(
    max_len: usize,
    random_len: usize,
    random_pairs: usize,
    seed: u64,
) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::new();
    for len in 1..=max_len {
        let words = all_words(3, len);
        let bad: Vec<(usize, usize)> = (0..words.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let words = &words;
                (0..words.len())
                    .filter(move |&j| !oracle_agrees(&words[i], &words[j]))
                    .map(move |j| (i, j))
            })
            .collect();
        tally.checks += words.len() * words.len() - bad.len();
        for (i, j) in bad {
            tally.check(false, || format!("<{}|{}> differs", words[i], words[j]));
        }
    }
    if random_pairs > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs: Vec<(CreationWord, CreationWord)> = (0..random_pairs)
            .map(|_| {
                let bra: Vec<u16> = (0..random_len).map(|_| rng.gen_range(1..=3)).collect();
                let mut ket = bra.clone();
                ket.shuffle(&mut rng);
                (
                    CreationWord::from_indices(&bra),
                    CreationWord::from_indices(&ket),
                )
            })
            .collect();
        let results: Vec<bool> = pairs.par_iter().map(|(b, k)| oracle_agrees(b, k)).collect();
        for ((b, k), ok) in pairs.iter().zip(results) {
            tally.check(ok, || format!("<{b}|{k}> differs"));
        }
    }
    tally.finish(Suite::Oracle, start)
}

/// `a_i S(occ) = [N] S(occ - e_i)` exactly, for the un-normalized
/// symmetrizer, every occupancy of `N <= max_n` over three modes and every
/// occupied mode.
pub fn induction_suite(max_n: u32) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut tally = Tally::new();
    let limits = EnumerationLimits::default();
    for n in 1..=max_n {
        let bracket = q_bracket_poly(n);
        for occ in three_mode_occupancies(n) {
            for (m, _) in occ.iter() {
                let lhs = lowered_symmetrizer(&occ, m, &Exact, &limits)?;
                let lowered = occ.lowered(m).expect("mode is occupied");
                let rhs = symmetrizer::<QPoly>(&lowered, &limits)?.scale(&bracket);
                tally.check(lhs == rhs, || format!("a_{m} on {occ}"));
            }
        }
    }
    Ok(tally.finish(Suite::Induction, start))
}

pub const NORM_Q: [f64; 6] = [-0.9, -0.5, 0.0, 0.5, 0.9, 0.99];

/// Unit norm of the closed-form symmetric state, and the lowering
/// coefficient against a brute-force projection, at the sampled `q`.
pub fn norm_suite(max_n: u32, qs: &[f64], tol: f64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut tally = Tally::new();
    let limits = EnumerationLimits::default();
    for &qv in qs {
        let q = dq(qv);
        let regime = Numeric::new(qv);
        for n in 1..=max_n {
            for occ in three_mode_occupancies(n) {
                let s = symmetric_state(&occ, q, &limits)?;
                let norm = crate::fock::inner_product(&s, &s, &regime);
                tally.check((norm - 1.0).abs() <= tol, || {
                    format!("|{occ}; S|^2 = {norm} at q = {qv}")
                });
                for (m, _) in occ.iter() {
                    let (closed, lowered) = lower_symmetric(&occ, m, q);
                    let op = MixedWord::new(vec![crate::fock::Op::annihilate(m)]);
                    let brute =
                        symmetric_matrix_element_bruteforce(&lowered, &op, &occ, q, &limits)?;
                    tally.check((closed - brute).abs() <= tol, || {
                        format!("a_{m} on {occ} at q = {qv}: {closed} vs {brute}")
                    });
                    // a_i |S> has no component outside the lowered symmetric state
                    let image = s.annihilate(m, &regime);
                    let image_norm = crate::fock::inner_product(&image, &image, &regime);
                    tally.check((image_norm - closed * closed).abs() <= tol, || {
                        format!("a_{m} on {occ} at q = {qv} leaves the symmetric sector")
                    });
                }
            }
        }
    }
    Ok(tally.finish(Suite::Norm, start))
}

fn product_of_linear(factors: &[(&[i64], usize)]) -> XPoly {
    let mut out = XPoly {
        coeffs: vec![QPoly::constant(1)],
    };
    for (root, mult) in factors {
        for _ in 0..*mult {
            out = out.mul(&XPoly::linear(&QPoly::from_i64(root)));
        }
    }
    out
}

/// Expected exact factorization of the distinct-mode Gram characteristic
/// polynomials for two and three quons.
pub fn expected_gram_charpolys() -> Vec<(OccupancyVector, XPoly)> {
    let two = OccupancyVector::new([(Mode(1), 1), (Mode(2), 1)]);
    let three = OccupancyVector::new([(Mode(1), 1), (Mode(2), 1), (Mode(3), 1)]);
    vec![
        (two, product_of_linear(&[(&[1, 1], 1), (&[1, -1], 1)])),
        (
            three,
            product_of_linear(&[
                (&[1, 2, 2, 1], 1),
                (&[1, -2, 2, -1], 1),
                (&[1, 1, -1, -1], 2),
                (&[1, -1, -1, 1], 2),
            ]),
        ),
    ]
}

/// Exact Gram characteristic polynomials and sector labels for distinct modes.
pub fn gram_suite(max_n: u32) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut tally = Tally::new();
    let limits = EnumerationLimits::default();
    for (occ, expected) in expected_gram_charpolys() {
        if occ.quanta() as u32 > max_n {
            continue;
        }
        let chi = exact_gram_charpoly(&occ, &limits)?;
        tally.check(chi == expected, || {
            format!("characteristic polynomial for {occ}")
        });

        let spectrum = classify_occupancy(&occ, 0.5, true, &ClassifyOptions::default(), &limits)?;
        let sym = spectrum.symmetric();
        tally.check(
            sym.exact_poly.as_ref() == Some(&crate::qnum::q_factorial_poly(occ.quanta() as u32)),
            || format!("symmetric eigenvalue polynomial for {occ}"),
        );
        let anti: Vec<_> = spectrum.cluster(SectorKind::Antisymmetric).collect();
        tally.check(anti.len() == 1 && anti[0].multiplicity == 1, || {
            format!("antisymmetric sector for {occ}")
        });
        let total: usize = spectrum.clusters.iter().map(|c| c.multiplicity).sum();
        tally.check(total == spectrum.words.len(), || {
            format!("multiplicities for {occ}")
        });
        tally.check(
            spectrum.clusters.iter().all(|c| c.exact_poly.is_some()),
            || format!("missing exact eigenvalue for {occ}"),
        );
    }
    Ok(tally.finish(Suite::Gram, start))
}

pub const OSC_Q: [f64; 3] = [0.5, 0.9, 0.99];

/// Generalized-eigenproblem oscillator energies against the closed form.
pub fn oscillator_suite(max_n: u32, qs: &[f64], rel_tol: f64) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut tally = Tally::new();
    let opts = Default::default();
    for n in 1..=max_n {
        for &qv in qs {
            let cfg = OscillatorConfig::new(1.0, dq(qv))?;
            let report = oscillator_full_solve(n, &cfg, &opts)?;
            let expected = oscillator_energy(n, &cfg);
            match report.symmetric() {
                Some(s) => {
                    tally.check((s.energy - expected).abs() <= rel_tol * expected, || {
                        format!("N = {n}, q = {qv}: {} vs {expected}", s.energy)
                    });
                    tally.check(s.multiplicity as u64 == oscillator_degeneracy(n), || {
                        format!("N = {n}, q = {qv}: multiplicity {}", s.multiplicity)
                    });
                }
                None => tally.check(false, || format!("N = {n}, q = {qv}: no symmetric level")),
            }
        }
        let bosonic = oscillator_full_solve(n, &OscillatorConfig::default(), &opts)?;
        let words = OSC_MODES.len().pow(n);
        tally.check(
            bosonic.levels.len() == 1
                && bosonic.levels[0].kind == SectorKind::Symmetric
                && (bosonic.levels[0].energy - (f64::from(n) + 1.5)).abs()
                    <= rel_tol * (f64::from(n) + 1.5),
            || format!("N = {n}, q = 1: spectrum did not collapse"),
        );
        tally.check(
            bosonic.null_directions as u64 == words as u64 - oscillator_degeneracy(n),
            || {
                format!(
                    "N = {n}, q = 1: {} null directions",
                    bosonic.null_directions
                )
            },
        );
    }
    Ok(tally.finish(Suite::Oscillator, start))
}

pub const ROTOR_Q: [f64; 4] = [0.5, 0.9, 0.99478, 1.0];

/// Angular-momentum identities for the two-mode rotor in the symmetric sector.
pub fn rotor_suite(max_n: u32, qs: &[f64], tol: f64) -> SuiteReport {
    let start = Instant::now();
    let mut tally = Tally::new();
    for &qv in qs {
        for n in 1..=max_n {
            for p in 0..=n {
                let e = rotor_matrix_elements(p, n - p, dq(qv));
                let at = || format!("|{p}, {}> at q = {qv}", n - p);
                let two_l0 = e.expected_two_l_zero(qv);
                tally.check((e.comm_plus_minus - two_l0).abs() <= tol, || {
                    format!("[L+, L-] on {}", at())
                });
                tally.check((2.0 * e.l_zero - two_l0).abs() <= tol, || {
                    format!("2 L0 on {}", at())
                });
                tally.check((e.comm_zero_plus - e.l_plus).abs() <= tol, || {
                    format!("[L0, L+] on {}", at())
                });
                tally.check((e.comm_zero_minus + e.l_minus).abs() <= tol, || {
                    format!("[L0, L-] on {}", at())
                });
                tally.check(
                    (e.l_squared - e.expected_l_squared(qv)).abs() <= tol,
                    || format!("L^2 on {}", at()),
                );
                tally.check(e.l_squared_off_diagonal <= tol, || {
                    format!("L^2 off-diagonal on {}", at())
                });
            }
        }
    }
    tally.finish(Suite::Rotor, start)
}

/// Runs one suite at the `verify` subcommand's sizes.
///
/// `max_n` bounds every suite; the exhaustive oracle stops at 5 quanta and
/// the oscillator solve at 3, beyond which they only grow slower.
pub fn run_suite(suite: Suite, max_n: usize) -> Result<SuiteReport> {
    if max_n == 0 || max_n > MAX_N {
        return Err(QuonError::CapExceeded {
            what: "verify size",
            requested: max_n,
            limit: MAX_N,
        });
    }
    let n = max_n as u32;
    match suite {
        Suite::Oracle => Ok(oracle_suite(
            max_n.min(5),
            6,
            if max_n >= 6 { 500 } else { 0 },
            0x5eed,
        )),
        Suite::Induction => induction_suite(n),
        Suite::Norm => norm_suite(n.min(6), &NORM_Q, 1e-10),
        Suite::Gram => gram_suite(n),
        Suite::Oscillator => oscillator_suite(n.min(3), &OSC_Q, 1e-9),
        Suite::Rotor => Ok(rotor_suite(n, &ROTOR_Q, 1e-10)),
    }
}
