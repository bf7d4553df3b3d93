//! Bipartite graphs `(V, W, E)` stored as right-to-left adjacency, and
//! plain and single-neighbor expansion checks.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{at_least, floor_nonneg, Rational};
use crate::xorcsp::{XorConstraint, XorSystem};

/// A bipartite graph with left side `0..left` and right side `0..right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteGraph {
    left: usize,
    adjacency: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    /// `adjacency[w]` lists the left neighbors of `w`.
    pub fn new(left: usize, adjacency: Vec<Vec<u32>>) -> Result<Self> {
        let mut adjacency = adjacency;
        for list in &mut adjacency {
            list.sort_unstable();
            if list.windows(2).any(|p| p[0] == p[1]) {
                return Err(Error::InvalidArgument("repeated neighbor".into()));
            }
            if let Some(&v) = list.iter().find(|&&v| v as usize >= left) {
                return Err(Error::IndexOutOfRange {
                    index: v as usize,
                    size: left,
                });
            }
        }
        Ok(BipartiteGraph { left, adjacency })
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.adjacency.len()
    }

    /// Sorted left neighbors of the right vertex `w`.
    pub fn neighbors(&self, w: usize) -> &[u32] {
        &self.adjacency[w]
    }

    pub fn right_degree(&self, w: usize) -> usize {
        self.adjacency[w].len()
    }

    pub fn max_right_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.left];
        for list in &self.adjacency {
            for &v in list {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }
}

/// `|V| = |W| = n`; each right vertex picks `r` distinct left neighbors
/// uniformly at random.
pub fn random_right_regular(n: usize, r: usize, seed: u64) -> Result<BipartiteGraph> {
    if r > n {
        return Err(Error::InvalidArgument(format!(
            "degree {r} exceeds left side size {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let adjacency = (0..n)
        .map(|_| {
            sample(&mut rng, n, r)
                .into_iter()
                .map(|v| v as u32)
                .collect()
        })
        .collect();
    BipartiteGraph::new(n, adjacency)
}

/// `(N(Y), N*(Y))` where `N*(Y)` holds the vertices with exactly one
/// neighbor in `Y`. Both are sorted.
pub fn neighbor_sets(g: &BipartiteGraph, y: &[usize]) -> Result<(Vec<u32>, Vec<u32>)> {
    let mut count = vec![0u32; g.left];
    for &w in y {
        if w >= g.right_size() {
            return Err(Error::IndexOutOfRange {
                index: w,
                size: g.right_size(),
            });
        }
        for &v in &g.adjacency[w] {
            count[v as usize] += 1;
        }
    }
    let all = (0..g.left as u32).filter(|&v| count[v as usize] > 0).collect();
    let single = (0..g.left as u32).filter(|&v| count[v as usize] == 1).collect();
    Ok((all, single))
}

/// The constraint set `{(N(w), 0) : w ∈ W}` over variables `V`.
pub fn constraints_from_graph(g: &BipartiteGraph) -> XorSystem {
    let mut s = XorSystem::with_variables(g.left);
    for list in &g.adjacency {
        s.add(XorConstraint::new(list.iter().copied(), false))
            .expect("neighbors are left vertices");
    }
    s
}

/// How expansion is verified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExpansionMode {
    /// Every set up to the size cap, refusing above `budget` sets.
    Exhaustive { budget: u128 },
    /// Random sets of random size up to the cap.
    Sampled { samples: usize, seed: u64 },
}

impl Default for ExpansionMode {
    fn default() -> Self {
        ExpansionMode::Exhaustive { budget: 10_000_000 }
    }
}

/// Result of an expansion check on all `Y ⊆ W` with `1 <= |Y| <= max_size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionVerdict {
    pub max_size: usize,
    /// No nonempty set is small enough; both properties hold vacuously.
    pub vacuous: bool,
    pub exhaustive: bool,
    pub sets_checked: u128,
    /// `|N(Y)| >= α|Y|` on every checked set.
    pub plain: bool,
    /// `|N*(Y)| >= α|Y|` on every checked set.
    pub single_neighbor: bool,
    pub plain_counterexample: Option<Vec<usize>>,
    pub single_neighbor_counterexample: Option<Vec<usize>>,
}

fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

struct Tracker<'a> {
    g: &'a BipartiteGraph,
    count: Vec<u32>,
    covered: usize,
    single: usize,
}

impl Tracker<'_> {
    fn add(&mut self, w: usize) {
        for &v in &self.g.adjacency[w] {
            let c = &mut self.count[v as usize];
            match *c {
                0 => {
                    self.covered += 1;
                    self.single += 1;
                }
                1 => self.single -= 1,
                _ => {}
            }
            *c += 1;
        }
    }

    fn remove(&mut self, w: usize) {
        for &v in &self.g.adjacency[w] {
            let c = &mut self.count[v as usize];
            *c -= 1;
            match *c {
                0 => {
                    self.covered -= 1;
                    self.single -= 1;
                }
                1 => self.single += 1,
                _ => {}
            }
        }
    }
}

fn record(verdict: &mut ExpansionVerdict, t: &Tracker, alpha: Rational, y: &[usize]) {
    verdict.sets_checked += 1;
    if verdict.plain && !at_least(t.covered, alpha, y.len()) {
        verdict.plain = false;
        verdict.plain_counterexample = Some(y.to_vec());
    }
    if verdict.single_neighbor && !at_least(t.single, alpha, y.len()) {
        verdict.single_neighbor = false;
        verdict.single_neighbor_counterexample = Some(y.to_vec());
    }
}

/// Checks both expansion properties on right sets of size `1..=max_size`.
pub fn check_expansion_up_to(
    g: &BipartiteGraph,
    alpha: Rational,
    max_size: usize,
    mode: ExpansionMode,
) -> Result<ExpansionVerdict> {
    let right = g.right_size();
    let max_size = max_size.min(right);
    let mut verdict = ExpansionVerdict {
        max_size,
        vacuous: max_size == 0,
        exhaustive: matches!(mode, ExpansionMode::Exhaustive { .. }),
        sets_checked: 0,
        plain: true,
        single_neighbor: true,
        plain_counterexample: None,
        single_neighbor_counterexample: None,
    };
    if max_size == 0 {
        return Ok(verdict);
    }
    let mut t = Tracker {
        g,
        count: vec![0; g.left],
        covered: 0,
        single: 0,
    };
    match mode {
        ExpansionMode::Exhaustive { budget } => {
            let needed = (1..=max_size)
                .map(|s| binomial(right as u128, s as u128))
                .fold(0u128, |a, b| a.saturating_add(b));
            if needed > budget {
                return Err(Error::BudgetExceeded {
                    what: "expansion subsets",
                    needed,
                    budget,
                });
            }
            // Depth-first over increasing index sequences.
            let mut y: Vec<usize> = Vec::with_capacity(max_size);
            let mut next = 0usize;
            loop {
                if next < right && y.len() < max_size {
                    y.push(next);
                    t.add(next);
                    record(&mut verdict, &t, alpha, &y);
                    next += 1;
                    continue;
                }
                match y.pop() {
                    Some(last) => {
                        t.remove(last);
                        next = last + 1;
                    }
                    None => break,
                }
            }
        }
        ExpansionMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let size = rng.gen_range(1..=max_size);
                let mut y: Vec<usize> = sample(&mut rng, right, size).into_vec();
                y.sort_unstable();
                for &w in &y {
                    t.add(w);
                }
                record(&mut verdict, &t, alpha, &y);
                for &w in &y {
                    t.remove(w);
                }
            }
        }
    }
    Ok(verdict)
}

/// Checks `(α, γ)` plain and single-neighbor expansion: sets of size at
/// most `⌊γ|W|⌋`.
pub fn check_expansion(
    g: &BipartiteGraph,
    alpha: Rational,
    gamma: Rational,
    mode: ExpansionMode,
) -> Result<ExpansionVerdict> {
    let max_size = floor_nonneg(gamma * Rational::from_integer(g.right_size() as i64));
    check_expansion_up_to(g, alpha, max_size, mode)
}
