//! Binary structures over `ℓ`-tuples whose edge relations record atomic
//! types of `2ℓ`-tuples, and the pullback of their stable 2-WL coloring to a
//! `(2ℓ-1)`-stable coloring of the base structure.

use rayon::prelude::*;
use serde::Serialize;

use crate::atomic::{atomic_type_unchecked, AtomicType};
use crate::coloring::{TupleColoring, TupleSpace};
use crate::error::{Error, Result};
use crate::refine::{joint_distinguish, record_bound_check, stabilize, BoundCheck};
use crate::structure::{RelationSymbol, RelationalStructure, Vocabulary};

/// `Bin(A)`: universe `V^ℓ` (element index = row-major index of the
/// `ℓ`-tuple) and one binary relation per atomic type of `2ℓ`-tuples, named
/// by the type's encoding.
#[derive(Clone, Debug)]
pub struct BinStructure {
    ell: usize,
    base_n: usize,
    types: Vec<AtomicType>,
    structure: RelationalStructure,
}

impl BinStructure {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn base_universe_size(&self) -> usize {
        self.base_n
    }

    pub fn structure(&self) -> &RelationalStructure {
        &self.structure
    }

    pub fn into_structure(self) -> RelationalStructure {
        self.structure
    }

    /// The atomic type behind each relation, in vocabulary order.
    pub fn relation_types(&self) -> &[AtomicType] {
        &self.types
    }

    /// Element of `Bin(A)` representing an `ℓ`-tuple.
    pub fn element(&self, tuple: &[usize]) -> Result<usize> {
        let space = TupleSpace::new(self.base_n, self.ell)?;
        if tuple.len() != self.ell {
            return Err(Error::ShapeMismatch(format!(
                "tuple of length {} for ell = {}",
                tuple.len(),
                self.ell
            )));
        }
        if let Some(&x) = tuple.iter().find(|&&x| x >= self.base_n) {
            return Err(Error::IndexOutOfRange { index: x, size: self.base_n });
        }
        Ok(space.encode(tuple))
    }

    pub fn tuple(&self, element: usize) -> Result<Vec<usize>> {
        let space = TupleSpace::new(self.base_n, self.ell)?;
        if element >= space.len() {
            return Err(Error::IndexOutOfRange { index: element, size: space.len() });
        }
        Ok(space.decode(element))
    }
}

fn check_params(a: &RelationalStructure, ell: usize) -> Result<()> {
    if ell == 0 {
        return Err(Error::InvalidArgument("ell must be at least 1".into()));
    }
    if a.max_arity() > 2 * ell {
        return Err(Error::ArityTooLarge {
            k: 2 * ell,
            arity: a.max_arity(),
        });
    }
    Ok(())
}

/// Atomic type of every pair `(x, y)` of `ℓ`-tuples, indexed `x·n^ℓ + y`.
fn pair_types(a: &RelationalStructure, ell: usize) -> Result<Vec<AtomicType>> {
    let space = TupleSpace::new(a.universe_size(), 2 * ell)?;
    Ok((0..space.len())
        .into_par_iter()
        .map_init(
            || vec![0; 2 * ell],
            |buf, idx| {
                space.decode_into(idx, buf);
                atomic_type_unchecked(a, buf)
            },
        )
        .collect())
}

fn assemble(
    a: &RelationalStructure,
    ell: usize,
    pairs: &[AtomicType],
    dictionary: &[AtomicType],
) -> Result<BinStructure> {
    let vocabulary = Vocabulary::new(
        dictionary
            .iter()
            .map(|t| RelationSymbol::new(t.encode(), 2))
            .collect(),
    )?;
    let size = TupleSpace::new(a.universe_size(), ell)?.len();
    let mut structure = RelationalStructure::new(format!("bin{ell}_{}", a.name()), vocabulary, size);
    for (index, t) in pairs.iter().enumerate() {
        let rel = dictionary.binary_search(t).expect("dictionary covers realized types");
        structure.add_tuple(rel, vec![index / size, index % size])?;
    }
    Ok(BinStructure {
        ell,
        base_n: a.universe_size(),
        types: dictionary.to_vec(),
        structure,
    })
}

/// Builds `Bin(A)` with one relation per type realized in `A`, in sorted
/// type order.
pub fn bin_structure(a: &RelationalStructure, ell: usize) -> Result<BinStructure> {
    check_params(a, ell)?;
    let pairs = pair_types(a, ell)?;
    let mut dictionary = pairs.clone();
    dictionary.sort_unstable();
    dictionary.dedup();
    assemble(a, ell, &pairs, &dictionary)
}

/// `Bin(A)` and `Bin(B)` over the union of their realized types, so that
/// both share one vocabulary.
pub fn bin_pair(
    a: &RelationalStructure,
    b: &RelationalStructure,
    ell: usize,
) -> Result<(BinStructure, BinStructure)> {
    if a.vocabulary() != b.vocabulary() {
        return Err(Error::VocabularyMismatch);
    }
    check_params(a, ell)?;
    let pa = pair_types(a, ell)?;
    let pb = pair_types(b, ell)?;
    let mut dictionary: Vec<AtomicType> = pa.iter().chain(&pb).cloned().collect();
    dictionary.sort_unstable();
    dictionary.dedup();
    Ok((assemble(a, ell, &pa, &dictionary)?, assemble(b, ell, &pb, &dictionary)?))
}

/// For odd `k = 2ℓ - 1`: the stable 2-WL coloring `χ₂` of `Bin(A)` pulled
/// back by `χ(v_1..v_k) = χ₂((v_1..v_ℓ), (v_{ℓ+1}..v_k, v_k))`.
pub fn derived_coloring(a: &RelationalStructure, k: usize) -> Result<TupleColoring> {
    if k.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "k must be odd, got {k}; use k + 1 instead"
        )));
    }
    if a.max_arity() > k {
        return Err(Error::ArityTooLarge {
            k,
            arity: a.max_arity(),
        });
    }
    let ell = k.div_ceil(2);
    let bin = bin_structure(a, ell)?;
    let trace = stabilize(bin.structure(), 2, None)?;
    let chi2 = trace.stable_coloring().expect("default cap always suffices");
    let n = a.universe_size();
    let space = TupleSpace::new(n, k)?;
    let size = TupleSpace::new(n, ell)?;
    let pair_space = chi2.space();
    let mut tuple = vec![0; k];
    let mut right = vec![0; ell];
    let labels: Vec<u32> = (0..space.len())
        .map(|index| {
            space.decode_into(index, &mut tuple);
            right[..ell - 1].copy_from_slice(&tuple[ell..]);
            right[ell - 1] = tuple[k - 1];
            let x = size.encode(&tuple[..ell]);
            let y = size.encode(&right);
            chi2.color(pair_space.encode(&[x, y]))
        })
        .collect();
    TupleColoring::from_labels(k, n, &labels)
}

/// Joint k-WL on `(A, B)` next to joint 2-WL on `(Bin(A), Bin(B))` with
/// `ℓ = ⌊k/2⌋ + 1` (even `k` is treated as `k + 1`).
#[derive(Clone, Debug, Serialize)]
pub struct TradeoffReport {
    pub k: usize,
    pub ell: usize,
    pub n: usize,
    pub bin_n: usize,
    /// First round whose k-WL histograms on `A`, `B` differ.
    pub base_round: Option<usize>,
    pub base_settled: bool,
    /// First round whose 2-WL histograms on `Bin(A)`, `Bin(B)` differ.
    pub bin_round: Option<usize>,
    pub bin_settled: bool,
    /// Per `Bin` structure, its stabilization round checked against the
    /// k = 2 bounds.
    pub bin_bounds: Vec<Option<BoundCheck>>,
}

impl TradeoffReport {
    /// Separation by k-WL implies separation of the binary structures.
    pub fn consistent(&self) -> bool {
        self.base_round.is_none() || self.bin_round.is_some()
    }
}

pub fn tradeoff(
    a: &RelationalStructure,
    b: &RelationalStructure,
    k: usize,
    max_rounds: Option<usize>,
) -> Result<TradeoffReport> {
    let ell = k / 2 + 1;
    let base = joint_distinguish(a, b, k, max_rounds)?;
    let (ba, bb) = bin_pair(a, b, ell)?;
    let bin = joint_distinguish(ba.structure(), bb.structure(), 2, max_rounds)?;
    let bin_n = ba.structure().universe_size();
    let bin_bounds = [ba.structure(), bb.structure()]
        .iter()
        .map(|s| {
            stabilize(s, 2, None).map(|t| t.r_infinity.map(|r| record_bound_check(bin_n, 2, r)))
        })
        .collect::<Result<_>>()?;
    Ok(TradeoffReport {
        k,
        ell,
        n: a.universe_size().max(b.universe_size()),
        bin_n,
        base_round: base.round,
        base_settled: base.settled,
        bin_round: bin.round,
        bin_settled: bin.settled,
        bin_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::initial_coloring;
    use crate::coloring::coloring_refines;
    use crate::refine::is_k_stable;
    use crate::structure::graphs;

    #[test]
    fn relations_partition_all_pairs() {
        let bin = bin_structure(&graphs::path(3), 2).unwrap();
        let s = bin.structure();
        assert_eq!(s.universe_size(), 9);
        let total: usize = (0..s.vocabulary().len()).map(|r| s.tuples(r).len()).sum();
        assert_eq!(total, 81);
        assert_eq!(bin.element(&[2, 1]).unwrap(), 7);
        assert_eq!(bin.tuple(7).unwrap(), vec![2, 1]);
    }

    #[test]
    fn derived_coloring_is_stable_and_refines_types() {
        let a = graphs::path(4);
        let chi = derived_coloring(&a, 3).unwrap();
        assert!(is_k_stable(&chi));
        assert!(coloring_refines(&chi, &initial_coloring(&a, 3).unwrap()).unwrap());
        assert!(derived_coloring(&a, 2).is_err());
    }

    #[test]
    fn shared_vocabulary() {
        let (a, b) = bin_pair(&graphs::cycle(6), &graphs::disjoint_cycles(2, 3), 2).unwrap();
        assert_eq!(a.structure().vocabulary(), b.structure().vocabulary());
        assert!(bin_structure(&graphs::path(3), 0).is_err());
    }
}
