//! Physical applications: the three-dimensional quonic oscillator and the
//! two-mode (Schwinger) quonic rotor.

mod operator;
mod oscillator;
mod rotor;

pub use operator::OperatorSum;
pub use oscillator::{
    oscillator_degeneracy, oscillator_energy, oscillator_full_solve, oscillator_spectrum,
    FullSolveOptions, FullSolveReport, OscillatorConfig, SectorEnergy, OSC_MODES,
};
pub use rotor::{
    rotor_energy, rotor_matrix_elements, rotor_operators, rotor_profile, rotor_spectrum,
    RotorConfig, RotorElements, RotorOperators, MINUS, PLUS,
};

/// One level of a model spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    /// `N` for the oscillator, `l` for the rotor.
    pub quantum: u32,
    pub energy: f64,
    pub degeneracy: u64,
}
