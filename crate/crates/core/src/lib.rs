//! Weisfeiler-Leman iteration numbers on relational structures.
//!
//! The crate is organised around the objects that show up when bounding
//! how long k-WL takes to stabilize:
//!
//! * [`structure`], [`atomic`], [`coloring`] and [`refine`]: relational
//!   structures, atomic types and the k-WL refinement engine with exact
//!   round counting and cross-structure comparison.
//! * [`xorcsp`] and [`games`]: XOR constraint systems, their translation
//!   into structure pairs, closure operators and an exact solver for the
//!   r-round k-pebble game.
//! * [`generators`]: right-regular bipartite expanders, layered expanders,
//!   hard XOR instances, bounded-intersection set families and chains of
//!   k-stable colorings.
//! * [`algebra`]: the tensor algebra on value maps over `V^k` whose
//!   subalgebra chains bound the number of refinement rounds.
//! * [`binarize`]: the translation of arity-k structures into binary
//!   structures over `V^l` and the pulled-back k-stable coloring.

pub mod algebra;
pub mod atomic;
pub mod binarize;
pub mod coloring;
pub mod error;
pub mod games;
pub mod generators;
pub mod rational;
pub mod refine;
pub mod structure;
pub mod xorcsp;

pub use error::{Error, Result};
