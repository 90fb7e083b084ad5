use std::fmt;
use std::str::FromStr;

use crate::error::QuonError;

/// Single-particle mode index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode(pub u16);

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `a†_{m0} a†_{m1} ... |0>`, leftmost operator first. Order is significant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CreationWord(Vec<Mode>);

impl CreationWord {
    pub fn new(modes: Vec<Mode>) -> Self {
        Self(modes)
    }

    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    pub fn from_indices(indices: &[u16]) -> Self {
        Self(indices.iter().map(|&i| Mode(i)).collect())
    }

    pub fn modes(&self) -> &[Mode] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a†_mode` applied on the left.
    pub fn prepend(&self, mode: Mode) -> Self {
        let mut modes = Vec::with_capacity(self.0.len() + 1);
        modes.push(mode);
        modes.extend_from_slice(&self.0);
        Self(modes)
    }

    /// The creators of this ket as an operator string.
    pub fn as_creators(&self) -> MixedWord {
        MixedWord(self.0.iter().map(|&m| Op::create(m)).collect())
    }

    /// The bra `<0| a_{mN} ... a_{m1}` dual to this ket.
    pub fn as_bra(&self) -> MixedWord {
        MixedWord(self.0.iter().rev().map(|&m| Op::annihilate(m)).collect())
    }
}

impl fmt::Display for CreationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (k, m) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(">")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Op {
    pub mode: Mode,
    pub kind: OpKind,
}

impl Op {
    pub fn create(mode: Mode) -> Self {
        Self {
            mode,
            kind: OpKind::Create,
        }
    }

    pub fn annihilate(mode: Mode) -> Self {
        Self {
            mode,
            kind: OpKind::Annihilate,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OpKind::Create => write!(f, "ad{}", self.mode),
            OpKind::Annihilate => write!(f, "a{}", self.mode),
        }
    }
}

/// Product of creation and annihilation operators, written left to right as
/// in bra-ket order (the rightmost operator acts first).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MixedWord(pub Vec<Op>);

impl MixedWord {
    pub fn new(ops: Vec<Op>) -> Self {
        Self(ops)
    }

    pub fn ops(&self) -> &[Op] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn then(&self, rhs: &MixedWord) -> MixedWord {
        let mut ops = self.0.clone();
        ops.extend_from_slice(&rhs.0);
        MixedWord(ops)
    }

    /// `<0| bra^† * op * ket |0>` as one operator string.
    pub fn sandwich(bra: &CreationWord, op: &MixedWord, ket: &CreationWord) -> MixedWord {
        bra.as_bra().then(op).then(&ket.as_creators())
    }
}

impl fmt::Display for MixedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, op) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// Parses whitespace-separated `a<i>` / `ad<i>` tokens, e.g. `"a2 a1 ad2 ad1"`.
impl FromStr for MixedWord {
    type Err = QuonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(|tok| {
                let (kind, digits) = if let Some(rest) = tok.strip_prefix("ad") {
                    (OpKind::Create, rest)
                } else if let Some(rest) = tok.strip_prefix('a') {
                    (OpKind::Annihilate, rest)
                } else {
                    return Err(QuonError::Parse(format!("bad operator token `{tok}`")));
                };
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(QuonError::Parse(format!("bad mode index in `{tok}`")));
                }
                let mode = digits
                    .parse::<u16>()
                    .map_err(|e| QuonError::Parse(format!("mode index in `{tok}`: {e}")))?;
                Ok(Op {
                    mode: Mode(mode),
                    kind,
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(MixedWord)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let w: MixedWord = "a2 a1 ad2 ad1".parse().unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.ops()[0], Op::annihilate(Mode(2)));
        assert_eq!(w.ops()[3], Op::create(Mode(1)));
        assert_eq!(w.to_string(), "a2 a1 ad2 ad1");
    }

    #[test]
    fn parse_rejects_malformed_tokens() {
        for bad in ["b1", "a", "ad", "a-1", "adx", "a1x", "a99999"] {
            assert!(bad.parse::<MixedWord>().is_err(), "{bad}");
        }
        assert!("".parse::<MixedWord>().unwrap().is_empty());
    }

    #[test]
    fn bra_reverses_order() {
        let ket = CreationWord::from_indices(&[1, 2]);
        assert_eq!(ket.as_bra().to_string(), "a2 a1");
        assert_eq!(ket.as_creators().to_string(), "ad1 ad2");
        assert_eq!(ket.prepend(Mode(3)), CreationWord::from_indices(&[3, 1, 2]));
    }
}
