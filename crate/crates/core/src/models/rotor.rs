use super::{EnergyLevel, OperatorSum};
use crate::error::{QuonError, Result};
use crate::fock::{MixedWord, Mode, Op};
use crate::qnum::{q_bracket, DeformationParameter};
use crate::symsector::OccupancyVector;

pub const PLUS: Mode = Mode(0);
pub const MINUS: Mode = Mode(1);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorConfig {
    inertia_a: f64,
    q: DeformationParameter,
}

impl RotorConfig {
    pub fn new(inertia_a: f64, q: DeformationParameter) -> Result<Self> {
        if !(inertia_a.is_finite() && inertia_a > 0.0) {
            return Err(QuonError::InvalidParameter(format!(
                "inertia constant must be positive, got {inertia_a}"
            )));
        }
        Ok(Self { inertia_a, q })
    }

    pub fn inertia_a(&self) -> f64 {
        self.inertia_a
    }

    pub fn q(&self) -> DeformationParameter {
        self.q
    }
}

impl Default for RotorConfig {
    fn default() -> Self {
        Self {
            inertia_a: 1.0,
            q: DeformationParameter::BOSONIC,
        }
    }
}

/// Reduced rotor energy `([2l]/2)([2l]/2 + 1)`, i.e. the energy at `A = 1`.
pub fn rotor_profile(l: u32, q: f64) -> f64 {
    let half = 0.5 * q_bracket(2 * l, q);
    half * (half + 1.0)
}

/// `E_l = A ([2l]/2)([2l]/2 + 1)`.
pub fn rotor_energy(l: u32, cfg: &RotorConfig) -> f64 {
    cfg.inertia_a * rotor_profile(l, cfg.q.value())
}

/// Levels `0..=l_max`, or only even `l` when `even_only`.
pub fn rotor_spectrum(l_max: u32, even_only: bool, cfg: &RotorConfig) -> Vec<EnergyLevel> {
    (0..=l_max)
        .filter(|l| !even_only || l % 2 == 0)
        .map(|l| EnergyLevel {
            quantum: l,
            energy: rotor_energy(l, cfg),
            degeneracy: 2 * u64::from(l) + 1,
        })
        .collect()
}

/// Schwinger realization on the two modes `+` and `-`.
#[derive(Debug, Clone)]
pub struct RotorOperators {
    pub l_plus: OperatorSum,
    pub l_minus: OperatorSum,
    pub l_zero: OperatorSum,
    pub l_squared: OperatorSum,
}

fn bilinear(c: Mode, a: Mode) -> OperatorSum {
    OperatorSum::word(MixedWord::new(vec![Op::create(c), Op::annihilate(a)]))
}

pub fn rotor_operators() -> RotorOperators {
    let l_plus = bilinear(PLUS, MINUS);
    let l_minus = bilinear(MINUS, PLUS);
    let l_zero = bilinear(PLUS, PLUS).sub(&bilinear(MINUS, MINUS)).scale(0.5);
    let l_squared = l_zero
        .mul(&l_zero)
        .add(&l_plus.mul(&l_minus).add(&l_minus.mul(&l_plus)).scale(0.5));
    RotorOperators {
        l_plus,
        l_minus,
        l_zero,
        l_squared,
    }
}

/// Matrix elements around the symmetric state `|n+, n-; S>`.
///
/// Raising elements use the bra `|n+ + 1, n- - 1>` and lowering elements the
/// bra `|n+ - 1, n- + 1>`; they are zero where that bra does not exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorElements {
    pub n_plus: u32,
    pub n_minus: u32,
    pub l_plus: f64,
    pub l_minus: f64,
    pub l_zero: f64,
    pub l_squared: f64,
    /// `<..|[L+, L-]|..>`, diagonal.
    pub comm_plus_minus: f64,
    /// `<raised|[L0, L+]|..>`.
    pub comm_zero_plus: f64,
    /// `<lowered|[L0, L-]|..>`.
    pub comm_zero_minus: f64,
    /// Largest `|<n+', n-'|L^2|n+, n->|` with `(n+', n-') != (n+, n-)` at the same `N`.
    pub l_squared_off_diagonal: f64,
}

impl RotorElements {
    /// `([N]/N)(n+ - n-)`, the closed form of `2 L0` and `[L+, L-]`.
    pub fn expected_two_l_zero(&self, q: f64) -> f64 {
        let n = self.n_plus + self.n_minus;
        if n == 0 {
            return 0.0;
        }
        q_bracket(n, q) / f64::from(n) * (f64::from(self.n_plus) - f64::from(self.n_minus))
    }

    /// `([N]/2)([N]/2 + 1)`.
    pub fn expected_l_squared(&self, q: f64) -> f64 {
        let half = 0.5 * q_bracket(self.n_plus + self.n_minus, q);
        half * (half + 1.0)
    }
}

/// Rotor matrix elements for the symmetric state `|n+, n-; S>`.
///
/// Every operator product is taken in the full quon space and only then
/// sandwiched between symmetric states.
pub fn rotor_matrix_elements(n_plus: u32, n_minus: u32, q: DeformationParameter) -> RotorElements {
    let ops = rotor_operators();
    let occ = |p: u32, m: u32| OccupancyVector::new([(PLUS, p), (MINUS, m)]);
    let ket = occ(n_plus, n_minus);
    let raised = (n_minus > 0).then(|| occ(n_plus + 1, n_minus - 1));
    let lowered = (n_plus > 0).then(|| occ(n_plus - 1, n_minus + 1));

    let on = |op: &OperatorSum, bra: &Option<OccupancyVector>| {
        bra.as_ref()
            .map_or(0.0, |b| op.symmetric_element(b, &ket, q))
    };
    let n = n_plus + n_minus;
    let l_squared_off_diagonal = (0..=n)
        .filter(|&p| p != n_plus)
        .map(|p| {
            ops.l_squared
                .symmetric_element(&occ(p, n - p), &ket, q)
                .abs()
        })
        .fold(0.0, f64::max);

    RotorElements {
        n_plus,
        n_minus,
        l_plus: on(&ops.l_plus, &raised),
        l_minus: on(&ops.l_minus, &lowered),
        l_zero: ops.l_zero.symmetric_element(&ket, &ket, q),
        l_squared: ops.l_squared.symmetric_element(&ket, &ket, q),
        comm_plus_minus: ops
            .l_plus
            .commutator(&ops.l_minus)
            .symmetric_element(&ket, &ket, q),
        comm_zero_plus: on(&ops.l_zero.commutator(&ops.l_plus), &raised),
        comm_zero_minus: on(&ops.l_zero.commutator(&ops.l_minus), &lowered),
        l_squared_off_diagonal,
    }
}
