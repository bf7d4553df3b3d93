//! Library routines against brute-force reference implementations.

mod common;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use common::{naive_initial, naive_joint_round, same_partition, NaiveGame, Position};
use wl_core::algebra::{algebra_dim, distinguishing_monomial, tensor_mul, KTensor};
use wl_core::atomic::initial_coloring;
use wl_core::binarize::{bin_pair, derived_coloring};
use wl_core::coloring::TupleColoring;
use wl_core::games::solve;
use wl_core::generators::{check_expansion, random_right_regular, ExpansionMode};
use wl_core::rational::Rational;
use wl_core::refine::{joint_distinguish, stabilize};
use wl_core::structure::graphs;
use wl_core::xorcsp::{
    closure, closure_bounded, gauss_satisfiable, satisfies, PartialAssignment, XorConstraint,
    XorSystem,
};

#[test]
fn initial_coloring_matches_atomic_types() {
    let mut rng = common::rng(1);
    for i in 0..120 {
        let k = 1 + i % 3;
        let n = rng.gen_range(1..=5);
        let relations = rng.gen_range(1..=3);
        let a = common::random_structure(&mut rng, n, k, relations, 0.3);
        let chi = initial_coloring(&a, k).unwrap();
        assert!(same_partition(chi.colors(), &naive_initial(&a, k)), "structure {i}");
    }
}

#[test]
fn joint_rounds_match_reference() {
    let mut rng = common::rng(2);
    let mut separated = 0;
    for i in 0..90 {
        let k = 1 + i % 3;
        let n = rng.gen_range(2..=if k == 3 { 4 } else { 6 });
        let max_arity = if k == 1 { 2 } else { k };
        let a = common::random_structure(&mut rng, n, max_arity, 1, 0.4);
        let b = if rng.gen_bool(0.5) {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            a.permuted(&perm).unwrap()
        } else {
            let mut b = wl_core::structure::RelationalStructure::new("b", a.vocabulary().clone(), n);
            let arity = a.vocabulary().relations()[0].arity;
            for t in common::all_tuples(n, arity) {
                if rng.gen_bool(0.4) {
                    b.add_tuple(0, t).unwrap();
                }
            }
            b
        };
        let d = joint_distinguish(&a, &b, k, None).unwrap();
        assert!(d.settled);
        assert_eq!(d.round, naive_joint_round(&[&a, &b], k), "pair {i}, k = {k}");
        separated += usize::from(d.round.is_some());
    }
    assert!(separated > 10);
}

fn positions(n: usize, k: usize) -> Vec<Position> {
    let mut out = Vec::new();
    for dom in 0u32..(1 << n) {
        if dom.count_ones() as usize > k {
            continue;
        }
        let vars: Vec<u32> = (0..n as u32).filter(|x| dom >> x & 1 == 1).collect();
        for bits in 0u32..(1 << vars.len()) {
            out.push(vars.iter().enumerate().map(|(i, &x)| (x, bits >> i & 1 == 1)).collect());
        }
    }
    out
}

#[test]
fn game_solver_matches_minimax() {
    let mut rng = common::rng(3);
    let r_max = 6;
    let mut finite = 0;
    for i in 0..60 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=5);
        let s = common::random_system(&mut rng, n, m, 3);
        let sol = solve(&s, k, None, None).unwrap();
        let mut naive = NaiveGame::new(&s, k.min(n));
        for beta in positions(n, k.min(n)) {
            let pa = PartialAssignment::from_pairs(beta.iter().map(|(&x, &b)| (x, b)));
            let level = sol.level(&pa).unwrap().filter(|&l| l <= r_max);
            assert_eq!(level, naive.min_rounds(&beta, r_max), "system {i}, k = {k}, {beta:?}");
            finite += usize::from(level.is_some_and(|l| l > 0));
        }
    }
    assert!(finite > 0);
}

#[test]
fn chain_needs_two_rounds_with_two_pebbles() {
    // x0 = 1, x0 + x1 = 0, x1 + x2 = 0, x2 = 0
    let mut s = XorSystem::with_variables(3);
    for (vars, parity) in [(&[0u32][..], true), (&[0, 1], false), (&[1, 2], false), (&[2], false)] {
        s.add(XorConstraint::new(vars.iter().copied(), parity)).unwrap();
    }
    let level = solve(&s, 2, None, None).unwrap().level(&PartialAssignment::new()).unwrap();
    assert_eq!(level, Some(2));
    assert_eq!(NaiveGame::new(&s, 2).min_rounds(&Position::new(), 5), Some(2));
    assert_eq!(NaiveGame::new(&s, 1).min_rounds(&Position::new(), 5), None);
}

#[test]
fn gauss_matches_exhaustive_search() {
    let mut rng = common::rng(4);
    let mut sat = 0;
    for _ in 0..400 {
        let n = rng.gen_range(1..=10);
        let m = rng.gen_range(1..=12);
        let s = common::random_system(&mut rng, n, m, 4);
        let found = gauss_satisfiable(&s);
        assert_eq!(found.is_some(), common::brute_force_satisfiable(&s));
        if let Some(x) = found {
            assert!(satisfies(&s, &x));
            sat += 1;
        }
    }
    assert!(sat > 50 && sat < 350);
}

type Constraint = (BTreeSet<u32>, bool);

fn as_set(s: &XorSystem) -> BTreeSet<Constraint> {
    s.constraints()
        .map(|c| (c.support().iter().copied().collect(), c.parity()))
        .collect()
}

fn naive_attractor(set: &BTreeSet<Constraint>, k: usize) -> BTreeSet<Constraint> {
    let mut out = set.clone();
    for (s1, p1) in set {
        for (s2, p2) in set {
            let support: BTreeSet<u32> = s1.symmetric_difference(s2).copied().collect();
            if support.len() <= k {
                out.insert((support, p1 ^ p2));
            }
        }
    }
    out
}

#[test]
fn closure_matches_iterated_pair_sums() {
    let mut rng = common::rng(5);
    for i in 0..150 {
        let k = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=7);
        let m = rng.gen_range(1..=6);
        let s = common::random_system(&mut rng, n, m, k);
        let mut levels = vec![as_set(&s)];
        loop {
            let next = naive_attractor(levels.last().unwrap(), k);
            if next == *levels.last().unwrap() {
                break;
            }
            levels.push(next);
        }
        for (r, expected) in levels.iter().enumerate() {
            assert_eq!(as_set(&closure_bounded(&s, k, r)), *expected, "system {i}, r = {r}");
        }
        let (full, steps) = closure(&s, k);
        assert_eq!(as_set(&full), *levels.last().unwrap(), "system {i}");
        assert_eq!(steps, levels.len() - 1, "system {i}");
    }
}

#[test]
fn expansion_check_matches_subset_enumeration() {
    let alpha = Rational::new(3, 2);
    let gamma = Rational::new(1, 4);
    let mut both = [0usize; 2];
    for seed in 0..40 {
        let n = 6 + seed as usize % 7;
        let g = random_right_regular(n, 3, seed).unwrap();
        let verdict = check_expansion(&g, alpha, gamma, ExpansionMode::Exhaustive { budget: 1 << 20 }).unwrap();
        let cap = n / 4;
        let (mut plain, mut single) = (true, true);
        for mask in 1u32..(1 << n) {
            let size = mask.count_ones() as i64;
            if size as usize > cap {
                continue;
            }
            let mut hits = vec![0; n];
            for w in (0..n).filter(|w| mask >> w & 1 == 1) {
                for &v in g.neighbors(w) {
                    hits[v as usize] += 1;
                }
            }
            let covered = hits.iter().filter(|&&h| h > 0).count() as i64;
            let once = hits.iter().filter(|&&h| h == 1).count() as i64;
            plain &= Rational::from_integer(covered) >= alpha * size;
            single &= Rational::from_integer(once) >= alpha * size;
        }
        assert_eq!((verdict.plain, verdict.single_neighbor), (plain, single), "seed {seed}");
        both[usize::from(single)] += 1;
    }
    assert!(both[0] > 0 && both[1] > 0, "{both:?}");
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn tuple_index(n: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * n + x)
}

/// The product straight from its defining sum.
fn naive_product(a: &[BigRational], b: &[BigRational], n: usize, k: usize) -> Vec<BigRational> {
    common::all_tuples(n, k)
        .iter()
        .map(|t| {
            let mut acc = BigRational::zero();
            for v in 0..n {
                let mut left = t[..k - 1].to_vec();
                left.push(v);
                let mut right = t[..k - 2].to_vec();
                right.push(v);
                right.push(t[k - 1]);
                acc += &a[tuple_index(n, &left)] * &b[tuple_index(n, &right)];
            }
            acc
        })
        .collect()
}

/// Rank by Gaussian elimination over the rationals.
fn rank(vectors: &[Vec<BigRational>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = vectors.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for row in rows.iter_mut().skip(r + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Keeps multiplying everything collected so far until the rank stops
/// growing.
fn naive_algebra_dim(chi: &TupleColoring) -> usize {
    let (n, k) = (chi.n(), chi.k());
    let mut vectors: Vec<Vec<BigRational>> = (0..chi.num_colors() as u32)
        .map(|c| chi.colors().iter().map(|&x| if x == c { rat(1) } else { rat(0) }).collect())
        .collect();
    let mut current = rank(&vectors);
    loop {
        let mut grown = vectors.clone();
        for a in &vectors {
            for b in &vectors {
                let p = naive_product(a, b, n, k);
                let mut candidate = grown.clone();
                candidate.push(p.clone());
                if rank(&candidate) > rank(&grown) {
                    grown.push(p);
                }
            }
        }
        let next = rank(&grown);
        if next == current {
            return current;
        }
        vectors = grown;
        current = next;
    }
}

#[test]
fn tensor_product_matches_defining_sum() {
    let mut rng = common::rng(6);
    for _ in 0..60 {
        let k = rng.gen_range(2..=4);
        let n: usize = rng.gen_range(1..=3);
        let len = n.pow(k as u32);
        let a: Vec<i64> = (0..len).map(|_| rng.gen_range(-3..=3)).collect();
        let b: Vec<i64> = (0..len).map(|_| rng.gen_range(-3..=3)).collect();
        let ta = KTensor::from_integers(n, k, &a).unwrap();
        let tb = KTensor::from_integers(n, k, &b).unwrap();
        let expected = naive_product(&ta.to_dense(), &tb.to_dense(), n, k);
        assert_eq!(tensor_mul(&ta, &tb).unwrap().to_dense(), expected);
    }
}

#[test]
fn algebra_dimension_matches_naive_closure() {
    let mut rng = common::rng(7);
    let mut cases = vec![
        initial_coloring(&graphs::path(4), 2).unwrap(),
        initial_coloring(&graphs::cycle(5), 2).unwrap(),
        initial_coloring(&graphs::path(3), 3).unwrap(),
        TupleColoring::discrete(3, 2).unwrap(),
        TupleColoring::uniform(3, 3).unwrap(),
    ];
    for _ in 0..10 {
        let n = rng.gen_range(2..=4);
        let labels: Vec<u8> = (0..n * n).map(|_| rng.gen_range(0..3)).collect();
        cases.push(TupleColoring::from_labels(2, n, &labels).unwrap());
    }
    for _ in 0..4 {
        let n = rng.gen_range(2..=3);
        let labels: Vec<u8> = (0..n * n * n).map(|_| rng.gen_range(0..2)).collect();
        cases.push(TupleColoring::from_labels(3, n, &labels).unwrap());
    }
    for (i, chi) in cases.iter().enumerate() {
        let dim = algebra_dim(chi, None).unwrap();
        assert!(dim.saturated);
        assert_eq!(dim.dimension, naive_algebra_dim(chi), "case {i}");
    }
}

#[test]
fn stable_two_dimensional_partitions_span_their_algebra() {
    let mut rng = common::rng(8);
    let mut structures = vec![graphs::complete(4), graphs::cycle(6), graphs::path(5), graphs::disjoint_cycles(2, 3)];
    for _ in 0..8 {
        let n = rng.gen_range(2..=6);
        structures.push(common::random_structure(&mut rng, n, 2, 2, 0.4));
    }
    for a in &structures {
        let trace = stabilize(a, 2, None).unwrap();
        let chi = trace.stable_coloring().unwrap();
        let dim = algebra_dim(chi, None).unwrap();
        assert_eq!(dim.dimension, chi.num_colors(), "{}", a.name());
        assert!(dim.contains_unit);
    }
    assert_eq!(algebra_dim(stabilize(&graphs::complete(5), 2, None).unwrap().last(), None).unwrap().dimension, 2);
}

#[test]
fn distinguishing_monomials_are_short_and_followed_by_refinement() {
    // Endpoint versus inner vertex of a path, from the initial partition.
    let p4 = graphs::path(4);
    let chi = initial_coloring(&p4, 2).unwrap();
    let word = distinguishing_monomial(&chi, &[0, 0], &[1, 1], 3, None).unwrap().unwrap();
    assert!(word.len() <= 3);

    let mut rng = common::rng(9);
    let mut found = 0;
    let mut structures = vec![p4, graphs::path(6), graphs::cycle(5)];
    for _ in 0..8 {
        let n = rng.gen_range(3..=5);
        structures.push(common::random_structure(&mut rng, n, 2, 1, 0.4));
    }
    for a in &structures {
        let n = a.universe_size();
        let trace = stabilize(a, 2, None).unwrap();
        let chi = &trace.colorings[0];
        let tuples = common::all_tuples(n, 2);
        for v in &tuples {
            for w in &tuples {
                if v >= w || chi.color_of(v).unwrap() != chi.color_of(w).unwrap() {
                    continue;
                }
                let Some(word) = distinguishing_monomial(chi, v, w, 4, None).unwrap() else {
                    continue;
                };
                found += 1;
                let s = word.len();
                let rounds = (usize::BITS - (s - 1).leading_zeros()) as usize + 1;
                let at = trace.colorings.get(rounds).unwrap_or(trace.last());
                assert_ne!(at.color_of(v).unwrap(), at.color_of(w).unwrap(), "{} {v:?} {w:?} word {word:?}", a.name());
            }
        }
    }
    assert!(found > 20);
}

#[test]
fn binary_structures_respect_isomorphism() {
    let mut rng = common::rng(10);
    for i in 0..25 {
        let n = rng.gen_range(2..=4);
        let a = common::random_structure(&mut rng, n, 3, 2, 0.3);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let b = a.permuted(&perm).unwrap();
        let (ba, bb) = bin_pair(&a, &b, 2).unwrap();
        assert_eq!(joint_distinguish(ba.structure(), bb.structure(), 2, None).unwrap().round, None, "pair {i}");
        let (ca, cb) = (derived_coloring(&a, 3).unwrap(), derived_coloring(&b, 3).unwrap());
        for t in common::all_tuples(n, 3) {
            let image: Vec<usize> = t.iter().map(|&x| perm[x]).collect();
            assert_eq!(ca.color_of(&t).unwrap(), cb.color_of(&image).unwrap(), "pair {i}");
        }
    }
}

#[test]
fn unit_tensor_is_neutral_for_integer_tensors() {
    let one = KTensor::characteristic(2, 3, [0, 3, 4, 7]).unwrap();
    let a = KTensor::from_integers(2, 3, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
    assert_eq!(tensor_mul(&one, &a).unwrap(), a);
    assert_eq!(a.get(7), BigRational::one() * rat(8));
}
