//! The existential k-pebble game on XOR systems.
//!
//! A position is a partial assignment with at most `k` variables. In each
//! round Falsifier keeps some `X' ⊆ dom β` with `|X'| <= k - 1` and asks a
//! fresh variable `x`; Verifier answers with a bit. Falsifier wins once a
//! position violates a constraint.
//!
//! [`solve`] computes for every position the least number of rounds in
//! which Falsifier forces a win. It runs the fixpoint level by level:
//! Falsifier-won sets are closed under extension, so a position is won in
//! `t + 1` rounds iff it extends some `τ` with a variable `x ∉ dom β` for
//! which both `τ + x↦0` and `τ + x↦1` are won in `t` rounds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::layered::LayeredGraph;
use crate::xorcsp::{closure_bounded, PartialAssignment, XorConstraint, XorSystem};

/// Default cap on the number of game positions.
pub const GAME_BUDGET: u128 = 10_000_000;

const UNSET: u32 = u32::MAX;

fn binomial_table(n: usize, k: usize) -> Vec<Vec<u128>> {
    let mut table = vec![vec![0u128; k + 2]; n + 1];
    for i in 0..=n {
        table[i][0] = 1;
        if i > 0 {
            for j in 1..=k + 1 {
                table[i][j] = table[i - 1][j - 1] + table[i - 1][j];
            }
        }
    }
    table
}

/// `Σ_{s <= k} C(n, s) 2^s`.
pub fn position_count(n: usize, k: usize) -> u128 {
    let table = binomial_table(n, k);
    (0..=k.min(n))
        .map(|s| table[n][s].saturating_mul(1u128 << s.min(127)))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Least Falsifier-winning round counts for every position of one game.
#[derive(Clone, Debug)]
pub struct GameSolution {
    n: usize,
    k: usize,
    binom: Vec<Vec<u128>>,
    offsets: Vec<usize>,
    levels: Vec<u32>,
    /// Levels above this were not computed.
    horizon: Option<usize>,
}

impl GameSolution {
    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn pebbles(&self) -> usize {
        self.k
    }

    pub fn positions(&self) -> usize {
        self.levels.len()
    }

    fn index(&self, dom: u64, vals: u64) -> usize {
        let s = dom.count_ones() as usize;
        let mut rank: u128 = 0;
        let mut bits = 0usize;
        let mut rest = dom;
        let mut i = 0;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rank += self.binom[v][i + 1];
            bits |= (((vals >> v) & 1) as usize) << i;
            rest &= rest - 1;
            i += 1;
        }
        self.offsets[s] + ((rank as usize) << s) + bits
    }

    fn encode(&self, beta: &PartialAssignment) -> Result<(u64, u64)> {
        if beta.len() > self.k {
            return Err(Error::InvalidArgument(format!(
                "position assigns {} variables, only {} pebbles",
                beta.len(),
                self.k
            )));
        }
        let mut dom = 0u64;
        let mut vals = 0u64;
        for (v, b) in beta.iter() {
            if v as usize >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: v as usize,
                    size: self.n,
                });
            }
            dom |= 1 << v;
            if b {
                vals |= 1 << v;
            }
        }
        Ok((dom, vals))
    }

    fn level_raw(&self, dom: u64, vals: u64) -> Option<usize> {
        let l = self.levels[self.index(dom, vals & dom)];
        (l != UNSET).then_some(l as usize)
    }

    /// Least `r` such that Falsifier wins the `r`-round game from `beta`;
    /// `None` if Falsifier never wins (or not within the solved horizon).
    pub fn level(&self, beta: &PartialAssignment) -> Result<Option<usize>> {
        let (dom, vals) = self.encode(beta)?;
        Ok(self.level_raw(dom, vals))
    }

    /// Whether Falsifier wins the `r`-round game from `beta`.
    pub fn falsifier_wins(&self, beta: &PartialAssignment, r: usize) -> Result<bool> {
        if let Some(h) = self.horizon {
            if r > h {
                return Err(Error::InvalidArgument(format!(
                    "solved up to {h} rounds, asked about {r}"
                )));
            }
        }
        Ok(self.level(beta)?.is_some_and(|l| l <= r))
    }

    /// The reply that delays Falsifier longest after the move `(x, keep)`.
    pub fn best_reply(&self, beta: &PartialAssignment, x: u32, keep: &[u32]) -> Result<bool> {
        let mut next = beta.restrict(keep);
        let mut score = |b: bool| -> Result<usize> {
            next.set(x, b);
            Ok(self.level(&next)?.unwrap_or(usize::MAX))
        };
        let zero = score(false)?;
        let one = score(true)?;
        Ok(one > zero)
    }
}

struct Solver<'a> {
    sol: GameSolution,
    good: Vec<u64>,
    system: &'a XorSystem,
}

impl Solver<'_> {
    /// Marks `dom/vals` and its extensions by variables outside `exclude`
    /// with `level` where unset. Subtrees rooted at positions of level
    /// below `level` are skipped: those are already closed under extension.
    fn mark_extensions(
        &mut self,
        dom: u64,
        vals: u64,
        exclude: u64,
        level: u32,
        prune: bool,
        out: &mut Vec<(u64, u64)>,
    ) {
        let n = self.sol.n;
        let k = self.sol.k;
        let mut stack: Vec<(u64, u64, usize)> = vec![(dom, vals, 0)];
        while let Some((d, v, start)) = stack.pop() {
            let idx = self.sol.index(d, v);
            let current = self.sol.levels[idx];
            if current == UNSET {
                self.sol.levels[idx] = level;
                out.push((d, v));
            } else if prune && current < level {
                continue;
            }
            if d.count_ones() as usize == k {
                continue;
            }
            for y in start..n {
                let bit = 1u64 << y;
                if (d | exclude) & bit != 0 {
                    continue;
                }
                stack.push((d | bit, v, y + 1));
                stack.push((d | bit, v | bit, y + 1));
            }
        }
    }

    fn base_level(&mut self) -> Vec<(u64, u64)> {
        let mut frontier = Vec::new();
        let constraints: Vec<XorConstraint> = self.system.constraints().cloned().collect();
        for c in constraints {
            let j = c.len();
            if j > self.sol.k {
                continue;
            }
            let mut dom = 0u64;
            for &x in c.support() {
                dom |= 1 << x;
            }
            for pattern in 0u64..(1 << j) {
                if (pattern.count_ones() % 2 == 1) == c.parity() {
                    continue;
                }
                let mut vals = 0u64;
                for (p, &x) in c.support().iter().enumerate() {
                    if (pattern >> p) & 1 == 1 {
                        vals |= 1 << x;
                    }
                }
                self.mark_extensions(dom, vals, 0, 0, false, &mut frontier);
            }
        }
        frontier
    }

    fn run(mut self, max_rounds: Option<usize>) -> GameSolution {
        let mut frontier = self.base_level();
        let mut t: u32 = 0;
        while !frontier.is_empty() {
            if max_rounds.is_some_and(|m| t as usize >= m) {
                self.sol.horizon = max_rounds;
                break;
            }
            let mut next = Vec::new();
            for &(dom, vals) in &frontier {
                let mut rest = dom;
                while rest != 0 {
                    let x = rest.trailing_zeros();
                    rest &= rest - 1;
                    let bit = 1u64 << x;
                    let tau_dom = dom & !bit;
                    let tau_vals = vals & !bit;
                    let tau = self.sol.index(tau_dom, tau_vals);
                    if self.good[tau] & bit != 0 {
                        continue;
                    }
                    let sibling = self.sol.index(dom, vals ^ bit);
                    let l = self.sol.levels[sibling];
                    if l == UNSET || l > t {
                        continue;
                    }
                    self.good[tau] |= bit;
                    self.mark_extensions(tau_dom, tau_vals, bit, t + 1, true, &mut next);
                }
            }
            frontier = next;
            t += 1;
        }
        self.sol
    }
}

/// Solves the k-pebble game on `s` for all positions. `max_rounds` stops
/// the fixpoint early; `budget` caps the number of positions.
pub fn solve(
    s: &XorSystem,
    k: usize,
    max_rounds: Option<usize>,
    budget: Option<u128>,
) -> Result<GameSolution> {
    let n = s.num_variables();
    if k == 0 {
        return Err(Error::InvalidArgument("at least one pebble is needed".into()));
    }
    if n > 64 {
        return Err(Error::InvalidArgument(format!(
            "the solver handles at most 64 variables, got {n}"
        )));
    }
    let k = k.min(n.max(1));
    let needed = position_count(n, k);
    let budget = budget.unwrap_or(GAME_BUDGET);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "game positions",
            needed,
            budget,
        });
    }
    let binom = binomial_table(n, k);
    let mut offsets = Vec::with_capacity(k + 2);
    let mut total = 0usize;
    for size in 0..=k + 1 {
        offsets.push(total);
        if size <= n {
            total += (binom[n][size] as usize) << size;
        }
    }
    let positions = offsets[k.min(n) + 1];
    let small = offsets[k];
    let solver = Solver {
        sol: GameSolution {
            n,
            k,
            binom,
            offsets,
            levels: vec![UNSET; positions],
            horizon: None,
        },
        good: vec![0; small],
        system: s,
    };
    Ok(solver.run(max_rounds))
}

/// Whether Falsifier wins the `r`-round k-pebble game from `beta0`.
pub fn falsifier_wins(s: &XorSystem, beta0: &PartialAssignment, k: usize, r: usize) -> Result<bool> {
    solve(s, k, Some(r), None)?.falsifier_wins(beta0, r)
}

/// Least `r <= r_max` for which Falsifier wins from `beta0`.
pub fn min_falsifier_rounds(
    s: &XorSystem,
    beta0: &PartialAssignment,
    k: usize,
    r_max: usize,
) -> Result<Option<usize>> {
    let sol = solve(s, k, Some(r_max), None)?;
    Ok(sol.level(beta0)?.filter(|&l| l <= r_max))
}

/// True when `beta` violates nothing derivable in `r` attractor steps,
/// which guarantees that Verifier survives `r` rounds. False says nothing.
pub fn verifier_survival_certificate(
    s: &XorSystem,
    beta: &PartialAssignment,
    k: usize,
    r: usize,
) -> Result<bool> {
    if beta.len() > k {
        return Err(Error::InvalidArgument(format!(
            "position assigns {} variables, only {k} pebbles",
            beta.len()
        )));
    }
    Ok(closure_bounded(s, k, r).violated_by(beta).is_none())
}

/// Supplies Verifier's answers during a play.
pub trait Verifier {
    /// The bit for `x` when Falsifier keeps `keep` out of `position`.
    fn reply(&mut self, position: &PartialAssignment, x: u32, keep: &[u32]) -> bool;
}

/// Plays the answers that delay Falsifier longest according to a solution.
pub struct OptimalVerifier<'a> {
    pub solution: &'a GameSolution,
}

impl Verifier for OptimalVerifier<'_> {
    fn reply(&mut self, position: &PartialAssignment, x: u32, keep: &[u32]) -> bool {
        self.solution
            .best_reply(position, x, keep)
            .expect("play stays within the solved game")
    }
}

/// Replays a fixed sequence of answers, then answers `false`.
pub struct ScriptedVerifier {
    pub answers: Vec<bool>,
    pub used: usize,
}

impl ScriptedVerifier {
    pub fn new(answers: Vec<bool>) -> Self {
        ScriptedVerifier { answers, used: 0 }
    }
}

impl Verifier for ScriptedVerifier {
    fn reply(&mut self, _: &PartialAssignment, _: u32, _: &[u32]) -> bool {
        let b = self.answers.get(self.used).copied().unwrap_or(false);
        self.used += 1;
        b
    }
}

/// One round of a play.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlayMove {
    pub variable: u32,
    pub kept: Vec<u32>,
    pub reply: bool,
    pub position: Vec<(u32, bool)>,
}

/// A complete play from a start position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlayTranscript {
    pub pebbles: usize,
    pub start: Vec<(u32, bool)>,
    pub moves: Vec<PlayMove>,
    pub falsifier_won: bool,
    /// Index of the violated constraint in the system's sorted order.
    pub violated_constraint: Option<usize>,
    pub violated_support: Option<Vec<u32>>,
}

impl PlayTranscript {
    pub fn rounds(&self) -> usize {
        self.moves.len()
    }

    /// Checks move legality and that the claimed outcome matches the final
    /// position.
    pub fn is_consistent(&self, s: &XorSystem) -> bool {
        let mut position = PartialAssignment::from_pairs(self.start.iter().copied());
        if position.len() > self.pebbles {
            return false;
        }
        for m in &self.moves {
            if position.get(m.variable).is_some()
                || m.kept.iter().any(|v| position.get(*v).is_none())
                || m.kept.len() + 1 > self.pebbles
            {
                return false;
            }
            position = position.restrict(&m.kept);
            position.set(m.variable, m.reply);
            if position.iter().collect::<Vec<_>>() != m.position {
                return false;
            }
        }
        let violated = s.violated_by(&position);
        self.falsifier_won == violated.is_some()
            && self.violated_support.as_deref() == violated.map(|c| c.support())
    }
}

/// The constraint set `C_G ∪ {({x}, 0) : x ∈ V_0}` of a layered graph.
pub fn layered_game_system(layered: &LayeredGraph) -> XorSystem {
    let mut s = crate::generators::bipartite::constraints_from_graph(layered.graph());
    for x in layered.layer(0) {
        s.add(XorConstraint::new([x], false))
            .expect("layer vertices are variables");
    }
    s
}

/// Falsifier's descent strategy on a layered graph, starting from
/// `x_ell ↦ 1` in the top layer and playing against `verifier`.
///
/// From a variable `h ↦ 1` in layer `i`, Falsifier pebbles the rest of
/// `N(w)` for the right vertex `w ∈ W_i` matched to `h`, one variable per
/// round while keeping the others. Unless a constraint breaks on the way,
/// some variable of layer `i - 1` in `N(w)` ends up with value 1 and the
/// descent continues from it; a 1 in layer 0 violates its singleton
/// constraint. Each layer costs `deg(w) - 1` rounds.
pub fn layered_falsifier_play(
    layered: &LayeredGraph,
    x_ell: u32,
    k: usize,
    verifier: &mut dyn Verifier,
) -> Result<PlayTranscript> {
    let graph = layered.graph();
    let max_degree = graph.max_right_degree();
    if max_degree > k {
        return Err(Error::InvalidArgument(format!(
            "right degree {max_degree} exceeds {k} pebbles"
        )));
    }
    let top = layered.layers();
    if layered.layer_of_variable(x_ell) != Some(top) {
        return Err(Error::InvalidArgument(format!(
            "variable {x_ell} is not in the top layer"
        )));
    }
    let system = layered_game_system(layered);
    let sorted: Vec<&XorConstraint> = system.constraints().collect();
    let mut position = PartialAssignment::from_pairs([(x_ell, true)]);
    let mut transcript = PlayTranscript {
        pebbles: k,
        start: position.iter().collect(),
        moves: Vec::new(),
        falsifier_won: false,
        violated_constraint: None,
        violated_support: None,
    };
    let finish = |transcript: &mut PlayTranscript, position: &PartialAssignment| -> bool {
        match system.violated_by(position) {
            Some(c) => {
                transcript.falsifier_won = true;
                transcript.violated_constraint = sorted.iter().position(|d| *d == c);
                transcript.violated_support = Some(c.support().to_vec());
                true
            }
            None => false,
        }
    };
    let mut hot = x_ell;
    loop {
        if finish(&mut transcript, &position) {
            return Ok(transcript);
        }
        let layer = layered.layer_of_variable(hot).expect("variables lie in layers");
        if layer == 0 {
            // A 1 in layer 0 always violates its singleton constraint.
            unreachable!("layer-0 ones are caught above");
        }
        let w = layered.matched_right(hot);
        let targets: Vec<u32> = graph
            .neighbors(w)
            .iter()
            .copied()
            .filter(|&v| v != hot)
            .collect();
        let mut kept = vec![hot];
        position = position.restrict(&kept);
        for &x in &targets {
            let reply = verifier.reply(&position, x, &kept);
            position = position.restrict(&kept);
            position.set(x, reply);
            transcript.moves.push(PlayMove {
                variable: x,
                kept: kept.clone(),
                reply,
                position: position.iter().collect(),
            });
            if finish(&mut transcript, &position) {
                return Ok(transcript);
            }
            kept.push(x);
        }
        hot = targets
            .iter()
            .copied()
            .find(|&v| position.get(v) == Some(true))
            .expect("an even constraint with one 1 holds another 1");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(n: usize, cs: &[(&[u32], bool)]) -> XorSystem {
        let mut s = XorSystem::with_variables(n);
        for (vars, p) in cs {
            s.add(XorConstraint::new(vars.iter().copied(), *p)).unwrap();
        }
        s
    }

    #[test]
    fn contradictory_singletons() {
        let s = system(1, &[(&[0], false), (&[0], true)]);
        let empty = PartialAssignment::new();
        assert!(falsifier_wins(&s, &empty, 1, 1).unwrap());
        assert!(!falsifier_wins(&s, &empty, 1, 0).unwrap());
        assert_eq!(min_falsifier_rounds(&s, &empty, 1, 5).unwrap(), Some(1));
    }

    #[test]
    fn chain_needs_several_rounds() {
        let s = system(3, &[(&[0, 1], false), (&[1, 2], false), (&[0], false), (&[2], true)]);
        let r = min_falsifier_rounds(&s, &PartialAssignment::new(), 2, 10).unwrap();
        assert_eq!(r, Some(2));
    }

    #[test]
    fn violating_start_is_round_zero() {
        let s = system(2, &[(&[0, 1], true)]);
        let beta = PartialAssignment::from_pairs([(0, false), (1, false)]);
        assert_eq!(min_falsifier_rounds(&s, &beta, 2, 3).unwrap(), Some(0));
    }

    #[test]
    fn satisfiable_systems_are_never_won() {
        let s = system(3, &[(&[0, 1], true), (&[1, 2], false)]);
        let sol = solve(&s, 3, None, None).unwrap();
        assert_eq!(sol.level(&PartialAssignment::new()).unwrap(), None);
    }

    #[test]
    fn position_indexing_is_a_bijection() {
        let s = XorSystem::with_variables(5);
        let sol = solve(&s, 3, None, None).unwrap();
        assert_eq!(sol.positions() as u128, position_count(5, 3));
        let mut seen = vec![false; sol.positions()];
        for dom in 0u64..32 {
            if dom.count_ones() > 3 {
                continue;
            }
            for vals in 0u64..32 {
                if vals & !dom != 0 {
                    continue;
                }
                let idx = sol.index(dom, vals);
                assert!(!seen[idx]);
                seen[idx] = true;
            }
        }
        assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn budget_guard() {
        let s = XorSystem::with_variables(40);
        assert!(matches!(
            solve(&s, 6, None, None),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn certificate_examples() {
        let s = system(2, &[(&[0, 1], true)]);
        let bad = PartialAssignment::from_pairs([(0, true), (1, true)]);
        assert!(!verifier_survival_certificate(&s, &bad, 2, 0).unwrap());
        let good = PartialAssignment::from_pairs([(0, true), (1, false)]);
        assert!(verifier_survival_certificate(&s, &good, 2, 5).unwrap());
    }
}
