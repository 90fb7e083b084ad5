use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::regime::Regime;
use super::word::{MixedWord, Mode, Op, OpKind};

/// A word with every creator to the left of every annihilator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalOrdered {
    /// Left to right, as written.
    pub creators: Vec<Mode>,
    /// Left to right, as written; the last one acts first.
    pub annihilators: Vec<Mode>,
}

impl NormalOrdered {
    fn from_word(word: &MixedWord) -> Self {
        let split = word
            .ops()
            .iter()
            .position(|op| op.kind == OpKind::Annihilate)
            .unwrap_or(word.len());
        Self {
            creators: word.ops()[..split].iter().map(|op| op.mode).collect(),
            annihilators: word.ops()[split..].iter().map(|op| op.mode).collect(),
        }
    }

    pub fn to_word(&self) -> MixedWord {
        MixedWord::new(
            self.creators
                .iter()
                .map(|&m| Op::create(m))
                .chain(self.annihilators.iter().map(|&m| Op::annihilate(m)))
                .collect(),
        )
    }
}

/// Rewrites an operator string into a sum of normal-ordered words using only
/// `a_i a†_j = δ_ij + q a†_j a_i`.
pub fn normal_order<R: Regime>(word: &MixedWord, regime: &R) -> BTreeMap<NormalOrdered, R::Scalar> {
    let mut memo = HashMap::new();
    normal_order_memo(word, regime, &mut memo)
}

fn normal_order_memo<R: Regime>(
    word: &MixedWord,
    regime: &R,
    memo: &mut HashMap<MixedWord, BTreeMap<NormalOrdered, R::Scalar>>,
) -> BTreeMap<NormalOrdered, R::Scalar> {
    if let Some(hit) = memo.get(word) {
        return hit.clone();
    }
    let ops = word.ops();
    let pair = ops
        .windows(2)
        .position(|w| w[0].kind == OpKind::Annihilate && w[1].kind == OpKind::Create);

    let result = match pair {
        None => BTreeMap::from([(NormalOrdered::from_word(word), R::Scalar::one())]),
        Some(k) => {
            let mut out: BTreeMap<NormalOrdered, R::Scalar> = BTreeMap::new();
            let mut add = |terms: BTreeMap<NormalOrdered, R::Scalar>, weight: &R::Scalar| {
                for (nw, c) in terms {
                    let slot = out.entry(nw).or_insert_with(R::Scalar::zero);
                    *slot = slot.clone() + weight.clone() * c;
                }
            };
            if ops[k].mode == ops[k + 1].mode {
                let mut contracted = ops[..k].to_vec();
                contracted.extend_from_slice(&ops[k + 2..]);
                let terms = normal_order_memo(&MixedWord::new(contracted), regime, memo);
                add(terms, &R::Scalar::one());
            }
            let mut swapped = ops.to_vec();
            swapped.swap(k, k + 1);
            let terms = normal_order_memo(&MixedWord::new(swapped), regime, memo);
            add(terms, &regime.q_pow(1));
            out.retain(|_, c| !c.is_zero());
            out
        }
    };
    memo.insert(word.clone(), result.clone());
    result
}
