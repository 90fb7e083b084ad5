use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use super::EnergyLevel;
use crate::error::{QuonError, Result};
use crate::fock::{inner_product, FockVector, Mode, Numeric};
use crate::qnum::{q_bracket, DeformationParameter};
use crate::symsector::{
    classify_sectors, enumerate_permutation_words, gram_matrix_numeric, ClassifyOptions,
    EnumerationLimits, OccupancyVector, SectorKind,
};

/// Cartesian-spherical modes `+`, `-`, `0`.
pub const OSC_MODES: [Mode; 3] = [Mode(0), Mode(1), Mode(2)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorConfig {
    hbar_omega: f64,
    q: DeformationParameter,
}

impl OscillatorConfig {
    pub fn new(hbar_omega: f64, q: DeformationParameter) -> Result<Self> {
        if !(hbar_omega.is_finite() && hbar_omega > 0.0) {
            return Err(QuonError::InvalidParameter(format!(
                "hbar_omega must be positive, got {hbar_omega}"
            )));
        }
        Ok(Self { hbar_omega, q })
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar_omega
    }

    pub fn q(&self) -> DeformationParameter {
        self.q
    }
}

impl Default for OscillatorConfig {
    fn default() -> Self {
        Self {
            hbar_omega: 1.0,
            q: DeformationParameter::BOSONIC,
        }
    }
}

/// `E_N = (hbar omega / 2) ([N] (1 + q) + 3)`.
pub fn oscillator_energy(n: u32, cfg: &OscillatorConfig) -> f64 {
    let q = cfg.q.value();
    0.5 * cfg.hbar_omega * (q_bracket(n, q) * (1.0 + q) + 3.0)
}

/// Number of occupancies `(n+, n-, n0)` with total `N`.
pub fn oscillator_degeneracy(n: u32) -> u64 {
    let n = u64::from(n);
    (n + 1) * (n + 2) / 2
}

pub fn oscillator_spectrum(n_max: u32, cfg: &OscillatorConfig) -> Vec<EnergyLevel> {
    (0..=n_max)
        .map(|n| EnergyLevel {
            quantum: n,
            energy: oscillator_energy(n, cfg),
            degeneracy: oscillator_degeneracy(n),
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct FullSolveOptions {
    pub max_quanta: u32,
    /// Overlap eigenvalues below this fraction of the largest are dropped.
    pub null_rel_threshold: f64,
    /// Energies within this relative distance share a level.
    pub cluster_rel_tol: f64,
    /// Distance from `|q| = 1` inside which the projection must be clean.
    pub near_unit_guard: f64,
    /// Smallest kept overlap eigenvalue, relative, accepted near `|q| = 1`.
    pub min_kept_rel: f64,
}

impl Default for FullSolveOptions {
    fn default() -> Self {
        Self {
            max_quanta: 6,
            null_rel_threshold: 1e-10,
            cluster_rel_tol: 1e-9,
            near_unit_guard: 1e-6,
            min_kept_rel: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorEnergy {
    pub kind: SectorKind,
    pub energy: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone)]
pub struct FullSolveReport {
    pub quanta: u32,
    /// Grouped by sector kind, ascending energy within a kind.
    pub levels: Vec<SectorEnergy>,
    /// Largest ratio of kept overlap eigenvalues over all occupancy blocks.
    pub condition_number: f64,
    pub null_directions: usize,
    /// Largest Hamiltonian element between different sector kinds, in the
    /// orthonormalized basis; zero when the problem is block diagonal.
    pub max_sector_coupling: f64,
}

impl FullSolveReport {
    pub fn sector(&self, kind: SectorKind) -> impl Iterator<Item = &SectorEnergy> {
        self.levels.iter().filter(move |l| l.kind == kind)
    }

    pub fn symmetric(&self) -> Option<&SectorEnergy> {
        self.sector(SectorKind::Symmetric).next()
    }
}

fn occupancies(n: u32) -> Vec<OccupancyVector> {
    let mut out = Vec::new();
    for a in (0..=n).rev() {
        for b in (0..=n - a).rev() {
            out.push(OccupancyVector::new([
                (OSC_MODES[0], a),
                (OSC_MODES[1], b),
                (OSC_MODES[2], n - a - b),
            ]));
        }
    }
    out
}

struct BlockResult {
    energies: Vec<(SectorKind, f64)>,
    condition: f64,
    nulls: usize,
    coupling: f64,
    smallest_kept_rel: f64,
}

fn solve_block(
    occ: &OccupancyVector,
    cfg: &OscillatorConfig,
    opts: &FullSolveOptions,
) -> Result<BlockResult> {
    let q = cfg.q.value();
    let regime = Numeric::new(q);
    let limits = EnumerationLimits {
        max_quanta: opts.max_quanta as usize,
        max_words: usize::MAX,
    };
    let words = enumerate_permutation_words(occ, &limits)?;
    let s = gram_matrix_numeric(&words, q);
    let classify_opts = ClassifyOptions {
        null_rel_threshold: opts.null_rel_threshold,
        ..ClassifyOptions::default()
    };
    let spectrum = classify_sectors(&words, &s, &classify_opts)?;

    // <w_i| a†_m a_m |w_j> = <a_m w_i | a_m w_j>
    let lowered: Vec<Vec<FockVector<f64>>> = words
        .iter()
        .map(|w| {
            let v = FockVector::basis(w.clone());
            OSC_MODES
                .iter()
                .map(|&m| v.annihilate(m, &regime))
                .collect()
        })
        .collect();
    let n = words.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..OSC_MODES.len())
                        .map(|m| inner_product(&lowered[i][m], &lowered[j][m], &regime))
                        .sum()
                })
                .collect()
        })
        .collect();
    let t = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    let h = (t * (1.0 + q) + &s * 3.0) * (0.5 * cfg.hbar_omega);

    let largest = spectrum.largest_eigenvalue();
    let mut nulls = 0;
    let mut smallest_kept = f64::INFINITY;
    let mut blocks: Vec<(SectorKind, DMatrix<f64>)> = Vec::new();
    for kind in [
        SectorKind::Symmetric,
        SectorKind::Antisymmetric,
        SectorKind::Mixed,
    ] {
        let mut cols: Vec<DVector<f64>> = Vec::new();
        for cluster in spectrum.cluster(kind) {
            if cluster.is_null {
                nulls += cluster.multiplicity;
                continue;
            }
            for v in cluster.eigenvectors.column_iter() {
                let lambda = v.dot(&(&s * v));
                smallest_kept = smallest_kept.min(lambda);
                cols.push(v / lambda.sqrt());
            }
        }
        if !cols.is_empty() {
            blocks.push((kind, DMatrix::from_columns(&cols)));
        }
    }

    let mut coupling: f64 = 0.0;
    for (a, (_, xa)) in blocks.iter().enumerate() {
        for (_, xb) in &blocks[a + 1..] {
            let cross = xa.transpose() * &h * xb;
            coupling = coupling.max(cross.amax());
        }
    }

    let mut energies = Vec::new();
    for (kind, x) in &blocks {
        let hp = x.transpose() * &h * x;
        let hp = (&hp + hp.transpose()) * 0.5;
        energies.extend(
            SymmetricEigen::new(hp)
                .eigenvalues
                .iter()
                .map(|&e| (*kind, e)),
        );
    }

    Ok(BlockResult {
        energies,
        condition: largest / smallest_kept,
        nulls,
        coupling,
        smallest_kept_rel: smallest_kept / largest,
    })
}

/// Solves `H c = E S c` over every ordering of `N` quanta in the three modes.
///
/// The Hamiltonian conserves each mode's occupation, so the word space splits
/// into one block per occupancy. In each block the overlap matrix is
/// diagonalized first and split by symmetry kind; null directions are dropped
/// and the Hamiltonian is diagonalized in the orthonormalized remainder of
/// each kind.
pub fn oscillator_full_solve(
    n: u32,
    cfg: &OscillatorConfig,
    opts: &FullSolveOptions,
) -> Result<FullSolveReport> {
    if n == 0 {
        return Err(QuonError::InvalidParameter(
            "full solve needs at least one quantum".into(),
        ));
    }
    if n > opts.max_quanta {
        return Err(QuonError::CapExceeded {
            what: "oscillator quanta",
            requested: n as usize,
            limit: opts.max_quanta as usize,
        });
    }
    let blocks: Vec<BlockResult> = occupancies(n)
        .par_iter()
        .map(|occ| solve_block(occ, cfg, opts))
        .collect::<Result<_>>()?;

    let q = cfg.q.value();
    let near_unit = (1.0 - q.abs()) < opts.near_unit_guard;
    let smallest_rel = blocks
        .iter()
        .map(|b| b.smallest_kept_rel)
        .fold(f64::INFINITY, f64::min);
    if near_unit && smallest_rel < opts.min_kept_rel {
        return Err(QuonError::IllConditioned(format!(
            "q = {q} is within {} of |q| = 1 and the overlap matrix has no clean null space \
             (smallest kept eigenvalue {smallest_rel:.3e} relative)",
            opts.near_unit_guard
        )));
    }

    let mut levels = Vec::new();
    for kind in [
        SectorKind::Symmetric,
        SectorKind::Antisymmetric,
        SectorKind::Mixed,
    ] {
        let mut es: Vec<f64> = blocks
            .iter()
            .flat_map(|b| b.energies.iter())
            .filter(|(k, _)| *k == kind)
            .map(|(_, e)| *e)
            .collect();
        es.sort_by(f64::total_cmp);
        let mut grouped: Vec<SectorEnergy> = Vec::new();
        for e in es {
            match grouped.last_mut() {
                Some(g)
                    if (e - g.energy).abs() <= opts.cluster_rel_tol * g.energy.abs().max(1.0) =>
                {
                    g.multiplicity += 1;
                }
                _ => grouped.push(SectorEnergy {
                    kind,
                    energy: e,
                    multiplicity: 1,
                }),
            }
        }
        levels.extend(grouped);
    }

    Ok(FullSolveReport {
        quanta: n,
        levels,
        condition_number: blocks.iter().map(|b| b.condition).fold(1.0, f64::max),
        null_directions: blocks.iter().map(|b| b.nulls).sum(),
        max_sector_coupling: blocks.iter().map(|b| b.coupling).fold(0.0, f64::max),
    })
}
