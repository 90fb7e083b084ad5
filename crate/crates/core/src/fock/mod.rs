//! Quon Fock-space kernel.
//!
//! States are superpositions of creation words `a†_{i1} ... a†_{iN} |0>`. For
//! `|q| < 1` no exchange rule relates two creators, so every ordering is a
//! separate basis ket. Vacuum expectation values are computed two ways: by
//! rewriting with `a_i a†_j = δ_ij + q a†_j a_i` and `a_i |0> = 0`
//! ([`vev_rewrite`]), and as a crossing-weighted sum over pairings
//! ([`vev_qpermanent`]). The rewrite engine is the reference.

mod normal;
mod regime;
mod vector;
mod vev;
mod word;

pub use normal::{normal_order, NormalOrdered};
pub use regime::{Exact, Numeric, Regime};
pub use vector::FockVector;
pub use vev::{inner_product, vev_qpermanent, vev_rewrite};
pub use word::{CreationWord, MixedWord, Mode, Op, OpKind};
