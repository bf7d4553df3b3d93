//! Atomic types: the isomorphism type of the ordered substructure induced
//! by a tuple.

use std::fmt::Write as _;

use crate::coloring::{TupleColoring, TupleSpace};
use crate::error::{Error, Result};
use crate::structure::{RelationalStructure, Vocabulary};

/// Canonical atomic type of a tuple.
///
/// The equality pattern labels each position by the index of its block in
/// order of first occurrence, so `(5, 2, 5)` has pattern `[0, 1, 0]`.
/// Membership bits are stored only for position maps into the block
/// representatives (the first position of each block), which makes them
/// consistent with the pattern by construction. Maps are enumerated per
/// relation in vocabulary order, lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicType {
    pattern: Vec<u8>,
    membership: Vec<bool>,
}

impl AtomicType {
    pub fn pattern(&self) -> &[u8] {
        &self.pattern
    }

    pub fn membership_bits(&self) -> &[bool] {
        &self.membership
    }

    pub fn blocks(&self) -> usize {
        self.pattern.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    /// Whether positions `i` and `j` carry equal entries.
    pub fn equal_positions(&self, i: usize, j: usize) -> bool {
        self.pattern[i] == self.pattern[j]
    }

    /// Whether the tuple `(v_{positions[0]}, ..)` lies in relation `rel`.
    pub fn holds(&self, vocabulary: &Vocabulary, rel: usize, positions: &[usize]) -> bool {
        let b = self.blocks();
        let mut offset = 0;
        for symbol in &vocabulary.relations()[..rel] {
            offset += b.pow(symbol.arity as u32);
        }
        let mut code = 0;
        for &p in positions {
            code = code * b + self.pattern[p] as usize;
        }
        self.membership[offset + code]
    }

    /// A whitespace-free token that determines the type uniquely among the
    /// types over a fixed vocabulary and tuple length.
    pub fn encode(&self) -> String {
        let mut out = String::from("t");
        for (i, p) in self.pattern.iter().enumerate() {
            if i > 0 {
                out.push('.');
            }
            let _ = write!(out, "{p}");
        }
        out.push('_');
        for chunk in self.membership.chunks(4) {
            let nibble = chunk
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &bit)| acc | (u32::from(bit) << (3 - i)));
            out.push(char::from_digit(nibble, 16).unwrap());
        }
        out
    }
}

pub(crate) fn equality_pattern(v: &[usize]) -> Vec<u8> {
    let mut reps: Vec<usize> = Vec::with_capacity(v.len());
    v.iter()
        .map(|x| match reps.iter().position(|r| r == x) {
            Some(i) => i as u8,
            None => {
                reps.push(*x);
                (reps.len() - 1) as u8
            }
        })
        .collect()
}

/// Atomic type without the arity precondition. Relations of arity above
/// `v.len()` are still evaluated on every map into the blocks.
pub(crate) fn atomic_type_unchecked(a: &RelationalStructure, v: &[usize]) -> AtomicType {
    let pattern = equality_pattern(v);
    let mut reps: Vec<usize> = Vec::new();
    for (i, &p) in pattern.iter().enumerate() {
        if p as usize == reps.len() {
            reps.push(v[i]);
        }
    }
    let b = reps.len();
    let mut membership = Vec::new();
    let mut image = Vec::new();
    for (rel, symbol) in a.vocabulary().relations().iter().enumerate() {
        let j = symbol.arity;
        for code in 0..b.pow(j as u32) {
            image.clear();
            image.resize(j, 0);
            let mut rest = code;
            for slot in image.iter_mut().rev() {
                *slot = reps[rest % b];
                rest /= b;
            }
            membership.push(a.contains(rel, &image));
        }
    }
    AtomicType {
        pattern,
        membership,
    }
}

fn check_tuple(a: &RelationalStructure, v: &[usize]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidArgument("tuple length must be positive".into()));
    }
    if v.len() < a.max_arity() {
        return Err(Error::ArityTooLarge {
            k: v.len(),
            arity: a.max_arity(),
        });
    }
    if let Some(&index) = v.iter().find(|&&x| x >= a.universe_size()) {
        return Err(Error::IndexOutOfRange {
            index,
            size: a.universe_size(),
        });
    }
    Ok(())
}

/// The atomic type of `v` in `a`; requires `v.len()` at least the arity.
pub fn atomic_type(a: &RelationalStructure, v: &[usize]) -> Result<AtomicType> {
    check_tuple(a, v)?;
    Ok(atomic_type_unchecked(a, v))
}

/// Atomic types of all tuples in `V^k`, in index order.
pub(crate) fn all_types(a: &RelationalStructure, space: &TupleSpace) -> Vec<AtomicType> {
    use rayon::prelude::*;
    (0..space.len())
        .into_par_iter()
        .map_init(
            || vec![0; space.k()],
            |buf, idx| {
                space.decode_into(idx, buf);
                atomic_type_unchecked(a, buf)
            },
        )
        .collect()
}

/// Raw initial colors of several structures over one shared dictionary:
/// ids follow the sorted order of all realized types.
pub(crate) fn shared_initial_colors(
    structures: &[&RelationalStructure],
    k: usize,
) -> Result<Vec<Vec<u32>>> {
    let mut per_structure = Vec::with_capacity(structures.len());
    for a in structures {
        let space = TupleSpace::new(a.universe_size(), k)?;
        per_structure.push(all_types(a, &space));
    }
    let mut dictionary: Vec<&AtomicType> = per_structure.iter().flatten().collect();
    dictionary.sort_unstable();
    dictionary.dedup();
    Ok(per_structure
        .iter()
        .map(|types| {
            types
                .iter()
                .map(|t| dictionary.binary_search(&t).unwrap() as u32)
                .collect()
        })
        .collect())
}

/// The coloring of `V^k` by atomic types, with ids in sorted type order.
pub fn initial_coloring(a: &RelationalStructure, k: usize) -> Result<TupleColoring> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if a.max_arity() > k {
        return Err(Error::ArityTooLarge {
            k,
            arity: a.max_arity(),
        });
    }
    let raw = shared_initial_colors(&[a], k)?;
    Ok(TupleColoring::from_raw(k, a.universe_size(), &raw[0]))
}
