//! The k-WL refinement engine: single refinement steps, stabilization with
//! exact round counting, and cross-structure distinguishing over a shared
//! color dictionary.
//!
//! For `k >= 2` a round maps `χ(v)` to `χ(v)` together with the multiset
//! over `w` of `(χ(v[w/1]), .., χ(v[w/k]))`. At `k = 1` that multiset is
//! the same for every `v`, so runs on structures use color refinement
//! instead: the multiset over `w` of `(atp(v, w), χ(w))`, which is how
//! 1-WL is read on structures of arity at most 2.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::atomic::shared_initial_colors;
use crate::coloring::{TupleColoring, TupleSpace};
use crate::error::{Error, Result};
use crate::structure::RelationalStructure;

static RUNS_CHECKED: AtomicUsize = AtomicUsize::new(0);
static BOUND_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// `n^k - 1`, saturating at 0.
pub fn trivial_bound(n: usize, k: usize) -> u128 {
    (n as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX)
        .saturating_sub(1)
}

/// `⌈k log₂ n⌉`, computed exactly as the least `c` with `2^c >= n^k`.
pub fn ceil_k_log2_n(n: usize, k: usize) -> u32 {
    if n <= 1 {
        return 0;
    }
    let target = (n as u128).checked_pow(k as u32);
    match target {
        Some(t) => 128 - (t - 1).leading_zeros(),
        None => {
            // Only reachable far outside desk scale.
            (k as f64 * (n as f64).log2()).ceil() as u32
        }
    }
}

/// `2 n^{k-1} (⌈k log₂ n⌉ + 1)`, saturating.
pub fn upper_bound(n: usize, k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let base = (n as u128).checked_pow(k as u32 - 1).unwrap_or(u128::MAX);
    base.saturating_mul(2)
        .saturating_mul(u128::from(ceil_k_log2_n(n, k)) + 1)
}

/// Round-count bounds evaluated for one run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub n: usize,
    pub k: usize,
    pub rounds: usize,
    pub trivial_bound: u128,
    /// Only checked for `k >= 2`.
    pub upper_bound: Option<u128>,
    pub ceil_k_log2_n: u32,
    pub ok: bool,
}

impl BoundCheck {
    pub fn evaluate(n: usize, k: usize, rounds: usize) -> Self {
        let trivial = trivial_bound(n, k);
        let upper = (k >= 2).then(|| upper_bound(n, k));
        let r = rounds as u128;
        let ok = r <= trivial && upper.is_none_or(|u| r <= u);
        BoundCheck {
            n,
            k,
            rounds,
            trivial_bound: trivial,
            upper_bound: upper,
            ceil_k_log2_n: ceil_k_log2_n(n, k),
            ok,
        }
    }
}

/// Checks a stabilization round count against both bounds and records the
/// outcome in the process-wide counters.
pub fn record_bound_check(n: usize, k: usize, rounds: usize) -> BoundCheck {
    let check = BoundCheck::evaluate(n, k, rounds);
    RUNS_CHECKED.fetch_add(1, Ordering::Relaxed);
    if !check.ok {
        BOUND_VIOLATIONS.fetch_add(1, Ordering::Relaxed);
    }
    check
}

/// Number of stabilization round counts checked so far in this process.
pub fn runs_checked() -> usize {
    RUNS_CHECKED.load(Ordering::Relaxed)
}

/// Number of checked runs that exceeded a bound.
pub fn bound_violations() -> usize {
    BOUND_VIOLATIONS.load(Ordering::Relaxed)
}

fn signature(space: &TupleSpace, colors: &[u32], pairs: Option<&[u32]>, index: usize) -> Vec<u32> {
    let n = space.n();
    let (width, rows) = match pairs {
        None => {
            let k = space.k();
            let tuple = space.decode(index);
            let mut rows = Vec::with_capacity(n * k);
            for w in 0..n {
                for (i, &old) in tuple.iter().enumerate() {
                    rows.push(colors[space.substitute(index, i, old, w)]);
                }
            }
            (k, rows)
        }
        Some(pair_types) => {
            let mut rows = Vec::with_capacity(2 * n);
            for w in 0..n {
                rows.push(pair_types[index * n + w]);
                rows.push(colors[w]);
            }
            (2, rows)
        }
    };
    let mut chunks: Vec<&[u32]> = rows.chunks(width).collect();
    chunks.sort_unstable();
    let mut sig = Vec::with_capacity(1 + rows.len());
    sig.push(colors[index]);
    for c in chunks {
        sig.extend_from_slice(c);
    }
    sig
}

/// Assigns ids to signatures in sorted signature order across all inputs.
fn intern(signatures: Vec<Vec<Vec<u32>>>) -> (Vec<Vec<u32>>, usize) {
    let mut dictionary: Vec<&Vec<u32>> = signatures.iter().flatten().collect();
    dictionary.par_sort_unstable();
    dictionary.dedup();
    let ids = signatures
        .iter()
        .map(|sigs| {
            sigs.par_iter()
                .map(|s| dictionary.binary_search(&s).unwrap() as u32)
                .collect()
        })
        .collect();
    (ids, dictionary.len())
}

/// One k-WL round by the literal definition, for any `k >= 1`.
pub fn refine_step(chi: &TupleColoring) -> TupleColoring {
    let space = chi.space();
    let sigs: Vec<Vec<u32>> = (0..space.len())
        .into_par_iter()
        .map(|i| signature(&space, chi.colors(), None, i))
        .collect();
    let (mut ids, _) = intern(vec![sigs]);
    TupleColoring::from_raw(chi.k(), chi.n(), &ids.pop().unwrap())
}

/// Whether one refinement round leaves the partition unchanged.
pub fn is_k_stable(chi: &TupleColoring) -> bool {
    refine_step(chi).num_colors() == chi.num_colors()
}

fn check_dimension(a: &RelationalStructure, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let arity = a.max_arity();
    let limit = if k == 1 { 2 } else { k };
    if arity > limit {
        return Err(Error::ArityTooLarge { k, arity });
    }
    Ok(())
}

/// Refinement state for several structures sharing one color dictionary.
struct Engine {
    spaces: Vec<TupleSpace>,
    pair_types: Option<Vec<Vec<u32>>>,
    colors: Vec<Vec<u32>>,
    joint_colors: usize,
}

impl Engine {
    fn new(structures: &[&RelationalStructure], k: usize) -> Result<Self> {
        for a in structures {
            check_dimension(a, k)?;
        }
        let spaces = structures
            .iter()
            .map(|a| TupleSpace::new(a.universe_size(), k))
            .collect::<Result<Vec<_>>>()?;
        let pair_types = if k == 1 {
            Some(shared_initial_colors(structures, 2)?)
        } else {
            None
        };
        let colors = shared_initial_colors(structures, k)?;
        let joint_colors = distinct(colors.iter().flatten().copied());
        Ok(Engine {
            spaces,
            pair_types,
            colors,
            joint_colors,
        })
    }

    fn step(&mut self) {
        let sigs: Vec<Vec<Vec<u32>>> = self
            .spaces
            .iter()
            .enumerate()
            .map(|(s, space)| {
                let colors = &self.colors[s];
                let pairs = self.pair_types.as_ref().map(|p| p[s].as_slice());
                (0..space.len())
                    .into_par_iter()
                    .map(|i| signature(space, colors, pairs, i))
                    .collect()
            })
            .collect();
        let (ids, joint) = intern(sigs);
        self.colors = ids;
        self.joint_colors = joint;
    }

    fn own_counts(&self) -> Vec<usize> {
        self.colors
            .iter()
            .map(|c| distinct(c.iter().copied()))
            .collect()
    }

    fn histogram(&self, s: usize) -> Vec<usize> {
        let mut h = vec![0; self.joint_colors];
        for &c in &self.colors[s] {
            h[c as usize] += 1;
        }
        h
    }

    fn coloring(&self, s: usize) -> TupleColoring {
        TupleColoring::from_raw(self.spaces[s].k(), self.spaces[s].n(), &self.colors[s])
    }
}

fn distinct(values: impl Iterator<Item = u32>) -> usize {
    let mut v: Vec<u32> = values.collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn default_cap(n: usize, k: usize) -> usize {
    (n as u128)
        .checked_pow(k as u32)
        .map_or(usize::MAX, |x| x.min(usize::MAX as u128) as usize)
}

/// The sequence of k-WL colorings of one structure.
#[derive(Clone, Debug)]
pub struct RefinementTrace {
    pub k: usize,
    pub n: usize,
    /// `χ_0, .., χ_R` where `R = r_infinity` when stabilized, else the cap.
    pub colorings: Vec<TupleColoring>,
    pub class_counts: Vec<usize>,
    /// Least `r` with `χ_r ≡ χ_{r+1}`; `None` if the round cap was hit.
    pub r_infinity: Option<usize>,
    pub bounds: Option<BoundCheck>,
}

impl RefinementTrace {
    pub fn stabilized(&self) -> bool {
        self.r_infinity.is_some()
    }

    /// The stable coloring, if reached.
    pub fn stable_coloring(&self) -> Option<&TupleColoring> {
        self.r_infinity.map(|r| &self.colorings[r])
    }

    pub fn last(&self) -> &TupleColoring {
        self.colorings.last().expect("trace holds χ_0")
    }
}

/// Runs k-WL on `a` until stable or until `max_rounds` refinement steps
/// (default `n^k`, which always suffices) have been taken.
pub fn stabilize(
    a: &RelationalStructure,
    k: usize,
    max_rounds: Option<usize>,
) -> Result<RefinementTrace> {
    let n = a.universe_size();
    let cap = max_rounds.unwrap_or_else(|| default_cap(n, k));
    let mut engine = Engine::new(&[a], k)?;
    let mut colorings = vec![engine.coloring(0)];
    let mut class_counts = vec![engine.own_counts()[0]];
    let mut r_infinity = None;
    for round in 0..cap {
        engine.step();
        let count = engine.own_counts()[0];
        if count == class_counts[round] {
            r_infinity = Some(round);
            break;
        }
        colorings.push(engine.coloring(0));
        class_counts.push(count);
    }
    let bounds = r_infinity.map(|r| record_bound_check(n, k, r));
    Ok(RefinementTrace {
        k,
        n,
        colorings,
        class_counts,
        r_infinity,
        bounds,
    })
}

/// Outcome of refining several structures over a shared dictionary.
#[derive(Clone, Debug)]
pub struct Distinguishing {
    /// Least round whose color histograms differ.
    pub round: Option<usize>,
    /// False when the round cap stopped the run before a verdict.
    pub settled: bool,
    /// Rounds `0..=rounds_computed` were evaluated.
    pub rounds_computed: usize,
    /// Per structure, class counts per evaluated round.
    pub class_counts: Vec<Vec<usize>>,
    /// Number of shared-dictionary colors per evaluated round.
    pub joint_classes: Vec<usize>,
    /// Per structure stabilization round, when it was reached.
    pub r_infinity: Vec<Option<usize>>,
    /// Per structure coloring at the last evaluated round.
    pub final_colorings: Vec<TupleColoring>,
    pub bounds: Vec<Option<BoundCheck>>,
}

impl Distinguishing {
    pub fn distinguished(&self) -> bool {
        self.round.is_some()
    }
}

/// Refines all `structures` with k-WL over one color dictionary and
/// reports the first round whose color histograms differ.
pub fn distinguish_all(
    structures: &[&RelationalStructure],
    k: usize,
    max_rounds: Option<usize>,
) -> Result<Distinguishing> {
    if let Some(first) = structures.first() {
        if structures
            .iter()
            .any(|s| s.vocabulary() != first.vocabulary())
        {
            return Err(Error::VocabularyMismatch);
        }
    }
    let n = structures.iter().map(|s| s.universe_size()).max().unwrap_or(0);
    let cap = max_rounds.unwrap_or_else(|| default_cap(n, k));
    let mut engine = Engine::new(structures, k)?;
    let m = structures.len();
    let mut class_counts: Vec<Vec<usize>> = engine.own_counts().into_iter().map(|c| vec![c]).collect();
    let mut joint_classes = vec![engine.joint_colors];
    let mut r_infinity = vec![None; m];
    let mut round = 0;
    let (verdict, settled) = loop {
        if round > 0 {
            for s in 0..m {
                let counts = &class_counts[s];
                if r_infinity[s].is_none() && counts[round] == counts[round - 1] {
                    r_infinity[s] = Some(round - 1);
                }
            }
        }
        let first = engine.histogram(0);
        if (1..m).any(|s| engine.histogram(s) != first) {
            break (Some(round), true);
        }
        if round > 0 && joint_classes[round] == joint_classes[round - 1] {
            break (None, true);
        }
        if round == cap {
            break (None, false);
        }
        engine.step();
        round += 1;
        for (s, c) in engine.own_counts().into_iter().enumerate() {
            class_counts[s].push(c);
        }
        joint_classes.push(engine.joint_colors);
    };
    let bounds = structures
        .iter()
        .zip(&r_infinity)
        .map(|(a, r)| r.map(|r| record_bound_check(a.universe_size(), k, r)))
        .collect();
    Ok(Distinguishing {
        round: verdict,
        settled,
        rounds_computed: round,
        class_counts,
        joint_classes,
        r_infinity,
        final_colorings: (0..m).map(|s| engine.coloring(s)).collect(),
        bounds,
    })
}

/// [`distinguish_all`] for a pair of structures.
pub fn joint_distinguish(
    a: &RelationalStructure,
    b: &RelationalStructure,
    k: usize,
    max_rounds: Option<usize>,
) -> Result<Distinguishing> {
    distinguish_all(&[a, b], k, max_rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::initial_coloring;
    use crate::coloring::coloring_refines;
    use crate::structure::graphs;

    #[test]
    fn log_and_bounds() {
        assert_eq!(ceil_k_log2_n(4, 2), 4);
        assert_eq!(ceil_k_log2_n(5, 2), 5);
        assert_eq!(ceil_k_log2_n(1, 3), 0);
        assert_eq!(ceil_k_log2_n(2, 1), 1);
        assert_eq!(upper_bound(4, 2), 2 * 4 * 5);
        assert_eq!(trivial_bound(3, 2), 8);
        assert_eq!(trivial_bound(0, 2), 0);
        assert!(BoundCheck::evaluate(4, 2, 15).ok);
        assert!(!BoundCheck::evaluate(4, 2, 16).ok);
    }

    #[test]
    fn small_graph_rounds() {
        assert_eq!(stabilize(&graphs::complete(5), 2, None).unwrap().r_infinity, Some(0));
        let p4 = stabilize(&graphs::path(4), 1, None).unwrap();
        assert_eq!(p4.r_infinity, Some(1));
        assert_eq!(p4.stable_coloring().unwrap().colors(), &[0, 1, 1, 0]);
        assert_eq!(stabilize(&graphs::path(6), 1, None).unwrap().r_infinity, Some(2));
    }

    #[test]
    fn cycles_versus_triangles() {
        let c6 = graphs::cycle(6);
        let two_triangles = graphs::disjoint_cycles(2, 3);
        let one = joint_distinguish(&c6, &two_triangles, 1, None).unwrap();
        assert_eq!(one.round, None);
        assert!(one.settled);
        let two = joint_distinguish(&c6, &two_triangles, 2, None).unwrap();
        assert_eq!(two.round, Some(1));
    }

    #[test]
    fn round_cap_leaves_trace_unstabilized() {
        let t = stabilize(&graphs::path(6), 1, Some(1)).unwrap();
        assert_eq!(t.r_infinity, None);
        assert_eq!(t.colorings.len(), 2);
    }

    #[test]
    fn refine_step_refines_and_fixes_stable_colorings() {
        let chi = initial_coloring(&graphs::path(5), 2).unwrap();
        let next = refine_step(&chi);
        assert!(coloring_refines(&next, &chi).unwrap());
        let stable = stabilize(&graphs::path(5), 2, None).unwrap();
        assert!(is_k_stable(stable.stable_coloring().unwrap()));
    }

    #[test]
    fn vocabulary_and_arity_errors() {
        let g = graphs::path(3);
        let mut other = crate::structure::RelationalStructure::new(
            "x",
            crate::structure::Vocabulary::new(vec![crate::structure::RelationSymbol::new("F", 2)])
                .unwrap(),
            3,
        );
        other.add_tuple(0, vec![0, 1]).unwrap();
        assert_eq!(
            joint_distinguish(&g, &other, 2, None).unwrap_err(),
            Error::VocabularyMismatch
        );
        assert!(stabilize(&g, 0, None).is_err());
    }
}
