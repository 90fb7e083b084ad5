use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::QuonError;
use crate::fock::Mode;

/// Mode occupation numbers `|n_i n_j ...>`; zero counts are never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OccupancyVector {
    counts: BTreeMap<Mode, u32>,
}

impl OccupancyVector {
    pub fn new(pairs: impl IntoIterator<Item = (Mode, u32)>) -> Self {
        let mut counts = BTreeMap::new();
        for (m, c) in pairs {
            *counts.entry(m).or_insert(0) += c;
        }
        counts.retain(|_, c| *c > 0);
        Self { counts }
    }

    pub fn vacuum() -> Self {
        Self::default()
    }

    pub fn quanta(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn count(&self, mode: Mode) -> u32 {
        self.counts.get(&mode).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mode, u32)> + '_ {
        self.counts.iter().map(|(&m, &c)| (m, c))
    }

    /// Number of occupied modes.
    pub fn distinct_modes(&self) -> usize {
        self.counts.len()
    }

    /// True when no mode holds more than one quon.
    pub fn all_distinct(&self) -> bool {
        self.counts.values().all(|&c| c == 1)
    }

    /// `None` when the mode is empty.
    pub fn lowered(&self, mode: Mode) -> Option<Self> {
        let n = self.count(mode);
        (n > 0).then(|| {
            let mut out = self.clone();
            if n == 1 {
                out.counts.remove(&mode);
            } else {
                out.counts.insert(mode, n - 1);
            }
            out
        })
    }

    pub fn raised(&self, mode: Mode) -> Self {
        let mut out = self.clone();
        *out.counts.entry(mode).or_insert(0) += 1;
        out
    }

    /// Modes repeated by count, ascending.
    pub fn sorted_modes(&self) -> Vec<Mode> {
        self.counts
            .iter()
            .flat_map(|(&m, &c)| std::iter::repeat_n(m, c as usize))
            .collect()
    }

    /// `N! / prod n_m!`, the number of distinct orderings.
    pub fn word_count(&self) -> u128 {
        let mut total: u128 = 1;
        let mut placed: u128 = 0;
        for &c in self.counts.values() {
            // running binomial product keeps intermediates exact
            for k in 1..=u128::from(c) {
                placed += 1;
                total = total * placed / k;
            }
        }
        total
    }

    /// `prod n_m!` as a float.
    pub fn factorial_product(&self) -> f64 {
        self.counts
            .values()
            .map(|&c| (1..=c).map(f64::from).product::<f64>())
            .product()
    }
}

impl fmt::Display for OccupancyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return f.write_str("vacuum");
        }
        for (k, (m, c)) in self.counts.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}:{c}")?;
        }
        Ok(())
    }
}

/// Whitespace-separated `mode:count` pairs, e.g. `"1:1 2:1 3:1"`.
impl FromStr for OccupancyVector {
    type Err = QuonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut pairs = Vec::new();
        for tok in s.split_whitespace() {
            let (m, c) = tok
                .split_once(':')
                .ok_or_else(|| QuonError::Parse(format!("expected mode:count, got `{tok}`")))?;
            let mode: u16 = m
                .parse()
                .map_err(|_| QuonError::Parse(format!("bad mode in `{tok}`")))?;
            let count: u32 = c
                .parse()
                .map_err(|_| QuonError::Parse(format!("bad count in `{tok}`")))?;
            if pairs.iter().any(|(pm, _): &(Mode, u32)| pm.0 == mode) {
                return Err(QuonError::Parse(format!("mode {mode} given twice")));
            }
            pairs.push((Mode(mode), count));
        }
        Ok(Self::new(pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_counts() {
        let occ: OccupancyVector = "1:2 3:1 5:0".parse().unwrap();
        assert_eq!(occ.quanta(), 3);
        assert_eq!(occ.distinct_modes(), 2);
        assert_eq!(occ.count(Mode(5)), 0);
        assert_eq!(occ.to_string(), "1:2 3:1");
        assert_eq!(occ.word_count(), 3);
        assert!(!occ.all_distinct());
    }

    #[test]
    fn parse_errors() {
        assert!("1".parse::<OccupancyVector>().is_err());
        assert!("1:x".parse::<OccupancyVector>().is_err());
        assert!("1:1 1:2".parse::<OccupancyVector>().is_err());
    }

    #[test]
    fn lowering_and_raising() {
        let occ: OccupancyVector = "1:1 2:2".parse().unwrap();
        assert_eq!(occ.lowered(Mode(1)).unwrap().to_string(), "2:2");
        assert!(occ.lowered(Mode(7)).is_none());
        assert_eq!(occ.raised(Mode(1)).count(Mode(1)), 2);
    }

    #[test]
    fn word_count_multinomial() {
        let occ: OccupancyVector = "1:2 2:3 3:3".parse().unwrap();
        assert_eq!(occ.word_count(), 560);
        let occ: OccupancyVector = "1:1 2:1 3:1 4:1 5:1 6:1 7:1 8:1".parse().unwrap();
        assert_eq!(occ.word_count(), 40320);
    }
}
