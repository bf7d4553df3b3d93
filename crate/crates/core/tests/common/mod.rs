//! Brute-force reference implementations and random instance generators
//! shared by the integration tests. Nothing here calls into the optimized
//! code paths it is compared against.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wl_core::structure::{RelationSymbol, RelationalStructure, Vocabulary};
use wl_core::xorcsp::{XorConstraint, XorSystem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A structure with `relations` random relations of arity in
/// `1..=max_arity`, each tuple present with probability `density`.
pub fn random_structure(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_arity: usize,
    relations: usize,
    density: f64,
) -> RelationalStructure {
    let symbols: Vec<RelationSymbol> = (0..relations)
        .map(|i| RelationSymbol::new(format!("R{i}"), rng.gen_range(1..=max_arity)))
        .collect();
    let vocabulary = Vocabulary::new(symbols).unwrap();
    let mut a = RelationalStructure::new("random", vocabulary.clone(), n);
    for (rel, symbol) in vocabulary.relations().iter().enumerate() {
        for tuple in all_tuples(n, symbol.arity) {
            if rng.gen_bool(density) {
                a.add_tuple(rel, tuple).unwrap();
            }
        }
    }
    a
}

/// Every tuple of `0..n` of length `k`, first position most significant.
pub fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Whether two colorings of the same index set induce the same partition.
pub fn same_partition(a: &[u32], b: &[u32]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut forward: HashMap<u32, u32> = HashMap::new();
    let mut backward: HashMap<u32, u32> = HashMap::new();
    a.iter().zip(b).all(|(&x, &y)| {
        *forward.entry(x).or_insert(y) == y && *backward.entry(y).or_insert(x) == x
    })
}

fn intern<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    intern_many(&[keys.to_vec()]).pop().unwrap()
}

/// Ids in sorted key order over the union of all key lists.
fn intern_many<K: Ord + Clone>(lists: &[Vec<K>]) -> Vec<Vec<u32>> {
    let mut sorted: Vec<&K> = lists.iter().flatten().collect();
    sorted.sort();
    sorted.dedup();
    lists
        .iter()
        .map(|keys| {
            keys.iter()
                .map(|k| sorted.binary_search(&k).unwrap() as u32)
                .collect()
        })
        .collect()
}

/// Equality matrix plus every relation fact over every map from relation
/// positions to tuple positions.
pub fn naive_type_key(a: &RelationalStructure, v: &[usize]) -> Vec<bool> {
    let mut key = Vec::new();
    for x in v {
        for y in v {
            key.push(x == y);
        }
    }
    for (rel, symbol) in a.vocabulary().relations().iter().enumerate() {
        for positions in all_tuples(v.len(), symbol.arity) {
            let image: Vec<usize> = positions.iter().map(|&p| v[p]).collect();
            key.push(a.contains(rel, &image));
        }
    }
    key
}

fn initial_keys(a: &RelationalStructure, k: usize) -> Vec<Vec<bool>> {
    all_tuples(a.universe_size(), k)
        .iter()
        .map(|v| naive_type_key(a, v))
        .collect()
}

pub fn naive_initial(a: &RelationalStructure, k: usize) -> Vec<u32> {
    intern(&initial_keys(a, k))
}

type WlKey = (u32, Vec<Vec<u32>>);

fn wl_keys(colors: &[u32], n: usize, k: usize) -> Vec<WlKey> {
    let tuples = all_tuples(n, k);
    let index: HashMap<&Vec<usize>, usize> = tuples.iter().enumerate().map(|(i, t)| (t, i)).collect();
    tuples
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut multiset: Vec<Vec<u32>> = (0..n)
                .map(|w| {
                    (0..k)
                        .map(|p| {
                            let mut u = v.clone();
                            u[p] = w;
                            colors[index[&u]]
                        })
                        .collect()
                })
                .collect();
            multiset.sort();
            (colors[i], multiset)
        })
        .collect()
}

/// One k-WL step from the definition: old color plus the multiset over `w`
/// of the colors of the `k` substituted tuples.
pub fn naive_wl_step(colors: &[u32], n: usize, k: usize) -> Vec<u32> {
    intern(&wl_keys(colors, n, k))
}

type CrKey = (u32, Vec<(Vec<bool>, u32)>);

fn cr_keys(a: &RelationalStructure, colors: &[u32]) -> Vec<CrKey> {
    let n = a.universe_size();
    (0..n)
        .map(|v| {
            let mut multiset: Vec<(Vec<bool>, u32)> =
                (0..n).map(|w| (naive_type_key(a, &[v, w]), colors[w])).collect();
            multiset.sort();
            (colors[v], multiset)
        })
        .collect()
}

/// Color refinement on a structure of arity at most 2: old color plus the
/// multiset over `w` of (type of the pair `(v, w)`, color of `w`).
pub fn naive_cr_step(a: &RelationalStructure, colors: &[u32]) -> Vec<u32> {
    intern(&cr_keys(a, colors))
}

fn class_count(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn joint_step(structures: &[&RelationalStructure], k: usize, colors: &[Vec<u32>]) -> Vec<Vec<u32>> {
    if k == 1 {
        let keys: Vec<Vec<CrKey>> = structures.iter().zip(colors).map(|(a, c)| cr_keys(a, c)).collect();
        intern_many(&keys)
    } else {
        let keys: Vec<Vec<WlKey>> = structures
            .iter()
            .zip(colors)
            .map(|(a, c)| wl_keys(c, a.universe_size(), k))
            .collect();
        intern_many(&keys)
    }
}

/// `χ_0, χ_1, ..` up to and including the first stable coloring.
pub fn naive_trace(a: &RelationalStructure, k: usize) -> Vec<Vec<u32>> {
    let mut trace = vec![naive_initial(a, k)];
    loop {
        let next = joint_step(&[a], k, &trace[trace.len() - 1..]).pop().unwrap();
        if class_count(&next) == class_count(trace.last().unwrap()) {
            return trace;
        }
        trace.push(next);
    }
}

/// Least round `r_∞` from the naive trace.
pub fn naive_r_infinity(a: &RelationalStructure, k: usize) -> usize {
    naive_trace(a, k).len() - 1
}

fn histogram(colors: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

/// First round whose histograms differ when all structures are refined over
/// one dictionary; `None` once the joint class count stops growing.
pub fn naive_joint_round(structures: &[&RelationalStructure], k: usize) -> Option<usize> {
    let keys: Vec<Vec<Vec<bool>>> = structures.iter().map(|a| initial_keys(a, k)).collect();
    let mut colors = intern_many(&keys);
    let joint = |colors: &[Vec<u32>]| class_count(&colors.concat());
    let mut round = 0;
    loop {
        let first = histogram(&colors[0]);
        if colors[1..].iter().any(|c| histogram(c) != first) {
            return Some(round);
        }
        let next = joint_step(structures, k, &colors);
        if joint(&next) == joint(&colors) {
            return None;
        }
        colors = next;
        round += 1;
    }
}

pub type Position = BTreeMap<u32, bool>;

fn violated(s: &XorSystem, beta: &Position) -> bool {
    s.constraints().any(|c| {
        c.support().iter().all(|x| beta.contains_key(x))
            && c.support().iter().filter(|x| beta[x]).count() % 2 != usize::from(c.parity())
    })
}

/// Minimax evaluation of the r-round k-pebble game.
pub struct NaiveGame<'a> {
    pub system: &'a XorSystem,
    pub k: usize,
    memo: HashMap<(Vec<(u32, bool)>, usize), bool>,
}

impl<'a> NaiveGame<'a> {
    pub fn new(system: &'a XorSystem, k: usize) -> Self {
        NaiveGame {
            system,
            k,
            memo: HashMap::new(),
        }
    }

    pub fn wins(&mut self, beta: &Position, r: usize) -> bool {
        let key = (beta.iter().map(|(&x, &b)| (x, b)).collect::<Vec<_>>(), r);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let result = self.evaluate(beta, r);
        self.memo.insert(key, result);
        result
    }

    fn evaluate(&mut self, beta: &Position, r: usize) -> bool {
        if violated(self.system, beta) {
            return true;
        }
        if r == 0 {
            return false;
        }
        let dom: Vec<u32> = beta.keys().copied().collect();
        let n = self.system.num_variables() as u32;
        for mask in 0u32..(1 << dom.len()) {
            if mask.count_ones() as usize > self.k - 1 {
                continue;
            }
            let kept: Position = dom
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| (x, beta[&x]))
                .collect();
            for x in 0..n {
                if kept.contains_key(&x) {
                    continue;
                }
                let both = [false, true].iter().all(|&b| {
                    let mut next = kept.clone();
                    next.insert(x, b);
                    self.wins(&next, r - 1)
                });
                if both {
                    return true;
                }
            }
        }
        false
    }

    pub fn min_rounds(&mut self, beta: &Position, r_max: usize) -> Option<usize> {
        (0..=r_max).find(|&r| self.wins(beta, r))
    }
}

/// A system over `n` variables with `m` random constraints of support size
/// in `1..=max_arity`.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, m: usize, max_arity: usize) -> XorSystem {
    let mut s = XorSystem::with_variables(n);
    for _ in 0..m {
        let size = rng.gen_range(1..=max_arity.min(n));
        let support = rand::seq::index::sample(rng, n, size).into_iter().map(|x| x as u32);
        s.add(XorConstraint::new(support, rng.gen_bool(0.5))).unwrap();
    }
    s
}

/// Whether some total assignment satisfies every constraint.
pub fn brute_force_satisfiable(s: &XorSystem) -> bool {
    let n = s.num_variables();
    (0u64..1 << n).any(|bits| {
        s.constraints().all(|c| {
            c.support().iter().filter(|&&x| bits >> x & 1 == 1).count() % 2 == usize::from(c.parity())
        })
    })
}
