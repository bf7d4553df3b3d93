//! Instance generators: random right-regular bipartite graphs and their
//! expansion checks, layered expanders, hard XOR instances, set families
//! with bounded intersections and the chains of stable colorings built
//! from them.
//!
//! All randomness comes from ChaCha8 seeded with a `u64`, so instances are
//! reproducible across platforms.

pub mod bipartite;
pub mod family;
pub mod hard;
pub mod layered;

pub use bipartite::{
    check_expansion, constraints_from_graph, neighbor_sets, random_right_regular,
    BipartiteGraph, ExpansionMode, ExpansionVerdict,
};
pub use family::{
    family_coloring, greedy_set_family, polynomial_set_family, stable_chain, FamilyColoring,
    SetFamily,
};
pub use hard::{dummy_pad, hard_instance, HardInstance, HardParams};
pub use layered::{build_layered, check_layered_expansion, LayeredGraph};
