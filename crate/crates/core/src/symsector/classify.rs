use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{
    enumerate_permutation_words, gram_matrix_exact, gram_matrix_numeric, EnumerationLimits,
    OccupancyVector,
};
use crate::error::{QuonError, Result};
use crate::fock::CreationWord;
use crate::qnum::{charpoly, linear_factors, QPoly, XPoly};

type EigenPairs = Vec<(f64, DVector<f64>)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SectorKind {
    Symmetric,
    Antisymmetric,
    Mixed,
}

impl fmt::Display for SectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SectorKind::Symmetric => "symmetric",
            SectorKind::Antisymmetric => "antisymmetric",
            SectorKind::Mixed => "mixed",
        })
    }
}

/// Sector label; mixed clusters carry a 1-based ordinal by descending eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectorLabel {
    pub kind: SectorKind,
    pub ordinal: usize,
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SectorKind::Mixed => write!(f, "mixed({})", self.ordinal),
            kind => kind.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Eigenvalues closer than this (relative to the largest) form one cluster.
    pub cluster_rel_tol: f64,
    /// Eigenvalues below this fraction of the largest are null.
    pub null_rel_threshold: f64,
    /// Minimum squared projection for the symmetric/antisymmetric directions
    /// to count as eigenvectors of the overlap matrix.
    pub projection_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            cluster_rel_tol: 1e-9,
            null_rel_threshold: 1e-10,
            projection_threshold: 1.0 - 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SectorCluster {
    pub label: SectorLabel,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub is_null: bool,
    /// Orthonormal columns in the word basis.
    pub eigenvectors: DMatrix<f64>,
    pub exact_poly: Option<QPoly>,
}

#[derive(Debug, Clone)]
pub struct GramSpectrum {
    pub words: Vec<CreationWord>,
    /// All eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Symmetric first, then antisymmetric, then mixed clusters by ordinal.
    pub clusters: Vec<SectorCluster>,
}

impl GramSpectrum {
    pub fn cluster(&self, kind: SectorKind) -> impl Iterator<Item = &SectorCluster> {
        self.clusters.iter().filter(move |c| c.label.kind == kind)
    }

    pub fn symmetric(&self) -> &SectorCluster {
        self.cluster(SectorKind::Symmetric)
            .next()
            .expect("every spectrum has a symmetric cluster")
    }

    pub fn largest_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Sign of the permutation that sorts `word`; only meaningful for distinct modes.
fn permutation_sign(word: &CreationWord) -> f64 {
    let m = word.modes();
    let inversions = (0..m.len())
        .flat_map(|i| (i + 1..m.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| m[i] > m[j])
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn distinct_modes(word: &CreationWord) -> bool {
    let mut m = word.modes().to_vec();
    m.sort();
    m.windows(2).all(|w| w[0] != w[1])
}

/// Orthonormal basis (columns) of the complement of `taken` in `R^n`.
fn complement_basis(n: usize, taken: &[DVector<f64>]) -> DMatrix<f64> {
    let mut projector = DMatrix::<f64>::identity(n, n);
    for v in taken {
        projector -= v * v.transpose();
    }
    let eig = SymmetricEigen::new(projector);
    let cols: Vec<DVector<f64>> = (0..n)
        .filter(|&k| eig.eigenvalues[k] > 0.5)
        .map(|k| eig.eigenvectors.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Eigenpairs of `G` restricted to span(basis), descending.
fn restricted_eigen(gram: &DMatrix<f64>, basis: &DMatrix<f64>) -> EigenPairs {
    if basis.ncols() == 0 {
        return Vec::new();
    }
    let block = basis.transpose() * gram * basis;
    let block = (&block + block.transpose()) * 0.5;
    let eig = SymmetricEigen::new(block);
    let mut pairs: Vec<(f64, DVector<f64>)> = (0..basis.ncols())
        .map(|k| (eig.eigenvalues[k], basis * eig.eigenvectors.column(k)))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs
}

fn group(pairs: Vec<(f64, DVector<f64>)>, tol: f64) -> Vec<Vec<(f64, DVector<f64>)>> {
    let mut groups: Vec<Vec<(f64, DVector<f64>)>> = Vec::new();
    for pair in pairs {
        match groups.last_mut() {
            Some(g) if (g[0].0 - pair.0).abs() <= tol => g.push(pair),
            _ => groups.push(vec![pair]),
        }
    }
    groups
}

/// Splits the overlap matrix of a permutation-word basis into symmetry sectors.
///
/// The uniform vector (sum of all words) and, for distinct modes, the
/// sign-weighted vector are eigenvectors of any such Gram matrix; they span
/// the symmetric and antisymmetric sectors. The Euclidean complement is the
/// mixed-symmetry part. Each part is diagonalized separately and its
/// eigenvalues clustered, so degeneracies between sectors (for instance at
/// `q = 0`) do not blur the labels.
pub fn classify_sectors(
    words: &[CreationWord],
    gram: &DMatrix<f64>,
    opts: &ClassifyOptions,
) -> Result<GramSpectrum> {
    let n = words.len();
    if n == 0 || gram.nrows() != n || gram.ncols() != n {
        return Err(QuonError::InvalidParameter(format!(
            "gram matrix is {}x{} for {n} words",
            gram.nrows(),
            gram.ncols()
        )));
    }
    let quanta = words[0].len();
    let scale = gram
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(f64::MIN_POSITIVE);

    let uniform = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut directions = vec![(SectorKind::Symmetric, uniform)];
    if quanta >= 2 && distinct_modes(&words[0]) {
        let sign =
            DVector::from_iterator(n, words.iter().map(permutation_sign)) / (n as f64).sqrt();
        directions.push((SectorKind::Antisymmetric, sign));
    }
    for (kind, v) in &directions {
        let gv = gram * v;
        let rayleigh = v.dot(&gv);
        let proj = if gv.norm() > 0.0 {
            (rayleigh / gv.norm()).powi(2)
        } else {
            1.0
        };
        if proj < opts.projection_threshold && (gv - v * rayleigh).norm() > 1e-8 * scale {
            return Err(QuonError::InvalidParameter(format!(
                "{kind} direction is not an eigenvector; the matrix is not a permutation-word Gram matrix"
            )));
        }
    }

    let mut parts: Vec<(SectorKind, EigenPairs)> = directions
        .iter()
        .map(|(kind, v)| (*kind, vec![(v.dot(&(gram * v)), v.clone())]))
        .collect();
    let taken: Vec<DVector<f64>> = directions.into_iter().map(|(_, v)| v).collect();
    let mixed_basis = complement_basis(n, &taken);
    parts.push((SectorKind::Mixed, restricted_eigen(gram, &mixed_basis)));

    let mut eigenvalues: Vec<f64> = parts
        .iter()
        .flat_map(|(_, p)| p.iter().map(|x| x.0))
        .collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let largest = eigenvalues[0].abs().max(f64::MIN_POSITIVE);
    let tol = opts.cluster_rel_tol * largest;
    let null_below = opts.null_rel_threshold * largest;

    let mut clusters = Vec::new();
    for (kind, pairs) in parts {
        for (k, g) in group(pairs, tol).into_iter().enumerate() {
            let eigenvalue = g.iter().map(|p| p.0).sum::<f64>() / g.len() as f64;
            let cols: Vec<DVector<f64>> = g.into_iter().map(|p| p.1).collect();
            clusters.push(SectorCluster {
                label: SectorLabel {
                    kind,
                    ordinal: if kind == SectorKind::Mixed { k + 1 } else { 0 },
                },
                eigenvalue,
                multiplicity: cols.len(),
                is_null: eigenvalue < null_below,
                eigenvectors: DMatrix::from_columns(&cols),
                exact_poly: None,
            });
        }
    }

    Ok(GramSpectrum {
        words: words.to_vec(),
        eigenvalues,
        clusters,
    })
}

/// Exact `det(x I - G)` for the permutation words of an occupancy.
pub fn exact_gram_charpoly(occ: &OccupancyVector, limits: &EnumerationLimits) -> Result<XPoly> {
    let words = enumerate_permutation_words(occ, limits)?;
    Ok(charpoly(&gram_matrix_exact(&words)))
}

/// Largest occupancy for which exact eigenvalue polynomials are attached.
const EXACT_MAX_QUANTA: usize = 4;
const EXACT_MAX_WORDS: usize = 24;

/// Enumerates, fills and classifies the Gram matrix of an occupancy at `q`.
///
/// With `exact`, clusters also receive their eigenvalue as a polynomial in
/// `q` when `N <= 4` and that eigenvalue is a polynomial at all. The
/// symmetric and antisymmetric values come straight from exact row sums; the
/// mixed ones from the linear factors of the exact characteristic polynomial.
pub fn classify_occupancy(
    occ: &OccupancyVector,
    q: f64,
    exact: bool,
    opts: &ClassifyOptions,
    limits: &EnumerationLimits,
) -> Result<GramSpectrum> {
    let words = enumerate_permutation_words(occ, limits)?;
    let gram = gram_matrix_numeric(&words, q);
    let mut spectrum = classify_sectors(&words, &gram, opts)?;
    if exact && occ.quanta() <= EXACT_MAX_QUANTA && words.len() <= EXACT_MAX_WORDS {
        attach_exact_polys(&mut spectrum, q);
    }
    Ok(spectrum)
}

fn attach_exact_polys(spectrum: &mut GramSpectrum, q: f64) {
    let words = &spectrum.words;
    let exact = gram_matrix_exact(words);
    let sym_poly = exact[0].iter().fold(QPoly::default(), |acc, p| &acc + p);
    let anti_poly = (spectrum.cluster(SectorKind::Antisymmetric).next().is_some()).then(|| {
        let s0 = permutation_sign(&words[0]);
        exact[0]
            .iter()
            .zip(words)
            .fold(QPoly::default(), |acc, (p, w)| {
                if permutation_sign(w) == s0 {
                    &acc + p
                } else {
                    &acc - p
                }
            })
    });

    let mut factors = linear_factors(&exact);
    let mut consume = |root: &QPoly| {
        if let Some(f) = factors.iter_mut().find(|f| &f.root == root) {
            f.multiplicity = f.multiplicity.saturating_sub(1);
        }
    };
    consume(&sym_poly);
    if let Some(p) = &anti_poly {
        consume(p);
    }
    let tol = 1e-8 * spectrum.largest_eigenvalue().abs().max(1.0);

    for cluster in &mut spectrum.clusters {
        cluster.exact_poly = match cluster.label.kind {
            SectorKind::Symmetric => Some(sym_poly.clone()),
            SectorKind::Antisymmetric => anti_poly.clone(),
            SectorKind::Mixed => {
                let candidates: Vec<&QPoly> = factors
                    .iter()
                    .filter(|f| f.multiplicity >= cluster.multiplicity)
                    .filter(|f| (f.root.eval(q) - cluster.eigenvalue).abs() <= tol)
                    .map(|f| &f.root)
                    .collect();
                match candidates.as_slice() {
                    [one] => Some((*one).clone()),
                    _ => None,
                }
            }
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnum::q_factorial_poly;

    fn classify(spec: &str, q: f64, exact: bool) -> GramSpectrum {
        let occ: OccupancyVector = spec.parse().unwrap();
        classify_occupancy(&occ, q, exact, &Default::default(), &Default::default()).unwrap()
    }

    #[test]
    fn two_distinct_modes() {
        let q = 0.3;
        let s = classify("1:1 2:1", q, true);
        assert_eq!(s.clusters.len(), 2);
        let sym = s.symmetric();
        assert!((sym.eigenvalue - (1.0 + q)).abs() < 1e-14);
        assert_eq!(sym.exact_poly, Some(QPoly::from_i64(&[1, 1])));
        let anti = s.cluster(SectorKind::Antisymmetric).next().unwrap();
        assert!((anti.eigenvalue - (1.0 - q)).abs() < 1e-14);
        assert_eq!(anti.exact_poly, Some(QPoly::from_i64(&[1, -1])));
    }

    #[test]
    fn three_distinct_modes_match_normalization_polynomials() {
        let q = 0.5;
        let s = classify("1:1 2:1 3:1", q, true);
        let labels: Vec<String> = s.clusters.iter().map(|c| c.label.to_string()).collect();
        assert_eq!(
            labels,
            ["symmetric", "antisymmetric", "mixed(1)", "mixed(2)"]
        );
        let mult: Vec<usize> = s.clusters.iter().map(|c| c.multiplicity).collect();
        assert_eq!(mult, [1, 1, 2, 2]);
        let polys: Vec<QPoly> = s
            .clusters
            .iter()
            .map(|c| c.exact_poly.clone().unwrap())
            .collect();
        assert_eq!(
            polys,
            [
                QPoly::from_i64(&[1, 2, 2, 1]),
                QPoly::from_i64(&[1, -2, 2, -1]),
                QPoly::from_i64(&[1, 1, -1, -1]),
                QPoly::from_i64(&[1, -1, -1, 1]),
            ]
        );
        for c in &s.clusters {
            let p = c.exact_poly.as_ref().unwrap().eval(q);
            assert!((p - c.eigenvalue).abs() < 1e-12);
        }
    }

    #[test]
    fn bosonic_limit_kills_non_symmetric_sectors() {
        let s = classify("1:1 2:1 3:1", 1.0, false);
        assert!((s.symmetric().eigenvalue - 6.0).abs() < 1e-12);
        assert!(!s.symmetric().is_null);
        for c in s
            .clusters
            .iter()
            .filter(|c| c.label.kind != SectorKind::Symmetric)
        {
            assert!(c.is_null, "{} should be null", c.label);
        }
        let nonzero = s.eigenvalues.iter().filter(|e| e.abs() > 1e-10).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn q_zero_degeneracy_still_labels_sectors() {
        let s = classify("1:1 2:1 3:1", 0.0, false);
        assert_eq!(s.clusters.len(), 3);
        assert_eq!(s.symmetric().multiplicity, 1);
        assert_eq!(s.cluster(SectorKind::Mixed).next().unwrap().multiplicity, 4);
    }

    #[test]
    fn repeated_modes() {
        let s = classify("1:2", 0.5, true);
        assert_eq!(s.clusters.len(), 1);
        assert!((s.symmetric().eigenvalue - 1.5).abs() < 1e-14);

        // Symmetric eigenvalue is [N]! for every occupancy.
        let s = classify("1:2 2:1", 0.4, true);
        assert_eq!(s.symmetric().exact_poly, Some(q_factorial_poly(3)));
        assert!(s.cluster(SectorKind::Antisymmetric).next().is_none());
        let total: usize = s.clusters.iter().map(|c| c.multiplicity).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn sectors_are_orthogonal_and_sum_to_word_count() {
        for spec in ["1:1 2:1 3:1", "1:2 2:1 3:1", "1:1 2:1 3:1 4:1"] {
            let s = classify(spec, 0.7, false);
            let total: usize = s.clusters.iter().map(|c| c.multiplicity).sum();
            assert_eq!(total, s.words.len());
            let all = DMatrix::from_columns(
                &s.clusters
                    .iter()
                    .flat_map(|c| c.eigenvectors.column_iter().map(|v| v.into_owned()))
                    .collect::<Vec<_>>(),
            );
            let overlap = all.transpose() * &all;
            let eye = DMatrix::<f64>::identity(s.words.len(), s.words.len());
            assert!((overlap - eye).amax() < 1e-10, "{spec}");
        }
    }

    #[test]
    fn positivity_inside_open_interval() {
        for q in [-0.95, -0.5, 0.2, 0.9] {
            let s = classify("1:2 2:1 3:1", q, false);
            assert!(s.eigenvalues.iter().all(|&e| e > -1e-12), "q = {q}");
        }
    }

    #[test]
    fn rejects_non_gram_matrix() {
        let words =
            enumerate_permutation_words(&"1:1 2:1 3:1".parse().unwrap(), &Default::default())
                .unwrap();
        let mut g = gram_matrix_numeric(&words, 0.5);
        g[(0, 1)] += 0.3;
        g[(1, 0)] += 0.3;
        assert!(classify_sectors(&words, &g, &Default::default()).is_err());
    }
}
