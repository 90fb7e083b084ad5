//! Two-parameter fit of the quon rotor `E_l = A ([2l]/2)([2l]/2 + 1)` to a
//! rotational band.
//!
//! `A` enters linearly, so it is solved in closed form at each `q` and the
//! search is one-dimensional: a fixed grid followed by golden-section
//! refinement around the best grid point.

use std::io::Read;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{QuonError, Result};
use crate::models::rotor_profile;
use crate::qnum::DeformationParameter;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandLevel {
    pub l: u32,
    /// keV
    pub energy: f64,
    pub weight: f64,
}

/// Levels of one band, `l` even and strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct BandData {
    levels: Vec<BandLevel>,
}

impl BandData {
    pub fn new(levels: Vec<BandLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(QuonError::InsufficientData("band has no levels".into()));
        }
        for (k, lv) in levels.iter().enumerate() {
            if lv.l % 2 != 0 {
                return Err(QuonError::InvalidParameter(format!(
                    "l = {} is odd; bands are indexed by even l",
                    lv.l
                )));
            }
            if !lv.energy.is_finite() {
                return Err(QuonError::InvalidParameter(format!(
                    "energy at l = {} is not finite",
                    lv.l
                )));
            }
            if !(lv.weight.is_finite() && lv.weight > 0.0) {
                return Err(QuonError::InvalidParameter(format!(
                    "weight at l = {} must be positive",
                    lv.l
                )));
            }
            if lv.l == 0 && lv.energy != 0.0 {
                return Err(QuonError::InvalidParameter(
                    "the l = 0 band head must sit at energy 0".into(),
                ));
            }
            if k > 0 && lv.l <= levels[k - 1].l {
                return Err(QuonError::InvalidParameter(format!(
                    "l values must be strictly increasing ({} after {})",
                    lv.l,
                    levels[k - 1].l
                )));
            }
        }
        Ok(Self { levels })
    }

    /// Unit-weight band from `(l, energy)` pairs.
    pub fn from_pairs(pairs: &[(u32, f64)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(l, energy)| BandLevel {
                    l,
                    energy,
                    weight: 1.0,
                })
                .collect(),
        )
    }

    /// Noiseless band `E_l = A f_l(q)`.
    pub fn synthetic(
        a: f64,
        q: DeformationParameter,
        ls: impl IntoIterator<Item = u32>,
    ) -> Result<Self> {
        let pairs: Vec<(u32, f64)> = ls
            .into_iter()
            .map(|l| (l, a * rotor_profile(l, q.value())))
            .collect();
        Self::from_pairs(&pairs)
    }

    /// CSV with header `l,energy_kev[,weight]` (`energy` is accepted for
    /// `energy_kev`); lines starting with `#` are skipped.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let find = |names: &[&str]| headers.iter().position(|h| names.contains(&h));
        let l_col =
            find(&["l"]).ok_or_else(|| QuonError::Parse("band CSV needs an `l` column".into()))?;
        let e_col = find(&["energy_kev", "energy"])
            .ok_or_else(|| QuonError::Parse("band CSV needs an `energy_kev` column".into()))?;
        let w_col = find(&["weight"]);

        let mut levels = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            let field = |col: usize| {
                record.get(col).ok_or_else(|| {
                    QuonError::Parse(format!("row {}: missing column {}", row + 1, col + 1))
                })
            };
            let l_text = field(l_col)?;
            let l: u32 = l_text.parse().map_err(|_| {
                QuonError::Parse(format!(
                    "row {}: l must be a non-negative integer, got `{l_text}`",
                    row + 1
                ))
            })?;
            let e_text = field(e_col)?;
            let energy: f64 = e_text
                .parse()
                .map_err(|_| QuonError::Parse(format!("row {}: bad energy `{e_text}`", row + 1)))?;
            let weight = match w_col {
                Some(c) => {
                    let w = field(c)?;
                    w.parse().map_err(|_| {
                        QuonError::Parse(format!("row {}: bad weight `{w}`", row + 1))
                    })?
                }
                None => 1.0,
            };
            levels.push(BandLevel { l, energy, weight });
        }
        Self::new(levels)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    pub fn levels(&self) -> &[BandLevel] {
        &self.levels
    }

    /// Levels with `l > 0`.
    pub fn excited(&self) -> impl Iterator<Item = &BandLevel> {
        self.levels.iter().filter(|lv| lv.l > 0)
    }

    /// Multiplies every energy by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            levels: self
                .levels
                .iter()
                .map(|lv| BandLevel {
                    energy: lv.energy * c,
                    ..*lv
                })
                .collect(),
        }
    }
}

/// Closed-form best `A` at fixed `q`, and the weighted sum of squared errors.
pub fn optimal_a_given_q(band: &BandData, q: f64) -> Result<(f64, f64)> {
    let (mut ff, mut fe) = (0.0, 0.0);
    for lv in band.levels() {
        let f = rotor_profile(lv.l, q);
        ff += lv.weight * f * f;
        fe += lv.weight * f * lv.energy;
    }
    if ff == 0.0 {
        return Err(QuonError::InsufficientData(
            "no level with l > 0 constrains the inertia constant".into(),
        ));
    }
    let a = fe / ff;
    let sse = band
        .levels()
        .iter()
        .map(|lv| {
            let r = a * rotor_profile(lv.l, q) - lv.energy;
            lv.weight * r * r
        })
        .sum();
    Ok((a, sse))
}

#[derive(Debug, Clone, Copy)]
pub struct FitOptions {
    pub q_min: f64,
    pub q_max: f64,
    pub grid_step: f64,
    pub tolerance: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            q_min: 0.0,
            q_max: 1.0,
            grid_step: 1e-3,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// keV
    pub a: f64,
    pub q: DeformationParameter,
    pub sse: f64,
    /// Weighted root-mean-square residual over the `l > 0` levels, keV.
    pub rms_residual: f64,
    /// `energy_exp - energy_fit` for every level, keV.
    pub per_level_residuals: Vec<f64>,
    pub evaluations: usize,
    /// The minimizer sits on an end of the search interval.
    pub at_boundary: bool,
}

impl FitResult {
    pub fn fitted_energy(&self, l: u32) -> f64 {
        self.a * rotor_profile(l, self.q.value())
    }
}

fn golden_section(
    band: &BandData,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    evaluations: &mut usize,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut sse = |q: f64| -> Result<f64> {
        *evaluations += 1;
        Ok(optimal_a_given_q(band, q)?.1)
    };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (sse(x1)?, sse(x2)?);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = sse(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = sse(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Least-squares `(A, q)` for a band.
///
/// The grid argmin breaks ties toward lower `q`, and the parallel grid fill
/// writes into a fixed order, so the result does not depend on thread count.
pub fn fit_band(band: &BandData, opts: &FitOptions) -> Result<FitResult> {
    if band.excited().count() < 2 {
        return Err(QuonError::InsufficientData(
            "a two-parameter fit needs at least two levels with l > 0".into(),
        ));
    }
    let valid_bound = |x: f64| x.is_finite() && (-1.0..=1.0).contains(&x);
    if !(valid_bound(opts.q_min) && valid_bound(opts.q_max) && opts.q_min < opts.q_max) {
        return Err(QuonError::InvalidParameter(format!(
            "search interval [{}, {}] must lie inside [-1, 1] and be non-empty",
            opts.q_min, opts.q_max
        )));
    }
    if !(opts.grid_step > 0.0 && opts.tolerance > 0.0) {
        return Err(QuonError::InvalidParameter(
            "grid step and tolerance must be positive".into(),
        ));
    }

    let span = opts.q_max - opts.q_min;
    let cells = (span / opts.grid_step).ceil().max(1.0) as usize;
    let grid: Vec<f64> = (0..=cells)
        .map(|k| {
            if k == cells {
                opts.q_max
            } else {
                opts.q_min + span * k as f64 / cells as f64
            }
        })
        .collect();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&q| optimal_a_given_q(band, q).map(|(_, sse)| sse))
        .collect::<Result<_>>()?;
    let mut evaluations = grid.len();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (k, v)| if *v < values[best] { k } else { best });

    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(cells)];
    let (q_refined, sse_refined) = golden_section(band, lo, hi, opts.tolerance, &mut evaluations)?;
    let q = if sse_refined < values[best] {
        q_refined
    } else {
        grid[best]
    };

    let (a, sse) = optimal_a_given_q(band, q)?;
    let per_level_residuals: Vec<f64> = band
        .levels()
        .iter()
        .map(|lv| lv.energy - a * rotor_profile(lv.l, q))
        .collect();
    let (wr, w) = band
        .levels()
        .iter()
        .zip(&per_level_residuals)
        .filter(|(lv, _)| lv.l > 0)
        .fold((0.0, 0.0), |(wr, w), (lv, r)| {
            (wr + lv.weight * r * r, w + lv.weight)
        });
    let edge = 2.0 * opts.tolerance;
    Ok(FitResult {
        a,
        q: DeformationParameter::new(q)?,
        sse,
        rms_residual: (wr / w).sqrt(),
        per_level_residuals,
        evaluations,
        at_boundary: q - opts.q_min <= edge || opts.q_max - q <= edge,
    })
}
