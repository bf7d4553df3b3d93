//! `(ℓ × m)`-layered graphs: left layers `V_0..V_ℓ`, right layers
//! `W_1..W_ℓ`, each of width `m`. Left vertex `v_{i,j}` has index
//! `i*m + j` and right vertex `w_{i,j}` has index `(i-1)*m + j`.

use std::ops::Range;

use serde::Serialize;

use super::bipartite::{check_expansion_up_to, BipartiteGraph, ExpansionMode, ExpansionVerdict};
use crate::error::{Error, Result};
use crate::rational::{floor_nonneg, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayeredGraph {
    ell: usize,
    m: usize,
    graph: BipartiteGraph,
    /// For left vertices in layers `1..=ℓ`, the matched right vertex.
    matched: Vec<Option<u32>>,
}

impl LayeredGraph {
    /// Validates the layered conditions: `N(W_i) ⊆ V_{i-1} ∪ V_i` and
    /// `G[V_i ∪ W_i]` is a perfect matching.
    pub fn new(ell: usize, m: usize, graph: BipartiteGraph) -> Result<Self> {
        if graph.left_size() != (ell + 1) * m || graph.right_size() != ell * m {
            return Err(Error::ShapeMismatch(format!(
                "expected {} left and {} right vertices, got {} and {}",
                (ell + 1) * m,
                ell * m,
                graph.left_size(),
                graph.right_size()
            )));
        }
        let mut matched = vec![None; (ell + 1) * m];
        for w in 0..graph.right_size() {
            let i = w / m + 1;
            let mut own = Vec::new();
            for &v in graph.neighbors(w) {
                let layer = v as usize / m;
                if layer + 1 == i {
                    continue;
                }
                if layer != i {
                    return Err(Error::InvalidArgument(format!(
                        "right vertex {w} of layer {i} reaches left layer {layer}"
                    )));
                }
                own.push(v);
            }
            if own.len() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "right vertex {w} has {} neighbors in its own layer",
                    own.len()
                )));
            }
            let slot = &mut matched[own[0] as usize];
            if slot.is_some() {
                return Err(Error::InvalidArgument(format!(
                    "left vertex {} is matched twice",
                    own[0]
                )));
            }
            *slot = Some(w as u32);
        }
        if matched[m..].iter().any(Option::is_none) {
            return Err(Error::InvalidArgument("layer matching is not perfect".into()));
        }
        Ok(LayeredGraph {
            ell,
            m,
            graph,
            matched,
        })
    }

    /// Number of right layers `ℓ`.
    pub fn layers(&self) -> usize {
        self.ell
    }

    pub fn width(&self) -> usize {
        self.m
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    /// Left vertices of layer `i`.
    pub fn layer(&self, i: usize) -> Range<u32> {
        (i * self.m) as u32..((i + 1) * self.m) as u32
    }

    /// Right vertices of layer `i >= 1`.
    pub fn right_layer(&self, i: usize) -> Range<usize> {
        (i - 1) * self.m..i * self.m
    }

    pub fn layer_of_variable(&self, v: u32) -> Option<usize> {
        let layer = v as usize / self.m.max(1);
        (layer <= self.ell && self.m > 0).then_some(layer)
    }

    /// The right vertex matched to `v`; `v` must lie in a layer `>= 1`.
    pub fn matched_right(&self, v: u32) -> usize {
        self.matched[v as usize].expect("vertex outside layer 0") as usize
    }

    /// Variable names `v{i}_{j}`.
    pub fn variable_names(&self) -> Vec<String> {
        (0..=self.ell)
            .flat_map(|i| (0..self.m).map(move |j| format!("v{i}_{j}")))
            .collect()
    }
}

/// Stacks `ℓ` copies of a square bipartite graph: `v_{i-1,j} w_{i,k}` for
/// each edge `v'_j w'_k`, plus the matchings `v_{i,j} w_{i,j}`.
pub fn build_layered(gp: &BipartiteGraph, ell: usize) -> Result<LayeredGraph> {
    let m = gp.left_size();
    if gp.right_size() != m {
        return Err(Error::ShapeMismatch(format!(
            "base graph must be square, got {} x {}",
            m,
            gp.right_size()
        )));
    }
    if ell == 0 {
        return Err(Error::InvalidArgument("at least one layer is needed".into()));
    }
    let mut adjacency = Vec::with_capacity(ell * m);
    for i in 1..=ell {
        for k in 0..m {
            let mut list: Vec<u32> = gp
                .neighbors(k)
                .iter()
                .map(|&j| ((i - 1) * m + j as usize) as u32)
                .collect();
            list.push((i * m + k) as u32);
            adjacency.push(list);
        }
    }
    LayeredGraph::new(ell, m, BipartiteGraph::new((ell + 1) * m, adjacency)?)
}

/// `(α, γ)` single-neighbor layered expansion: right sets of size at most
/// `⌊γm⌋`.
pub fn check_layered_expansion(
    layered: &LayeredGraph,
    alpha: Rational,
    gamma: Rational,
    mode: ExpansionMode,
) -> Result<ExpansionVerdict> {
    let max_size = floor_nonneg(gamma * Rational::from_integer(layered.width() as i64));
    check_expansion_up_to(layered.graph(), alpha, max_size, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::bipartite::random_right_regular;

    #[test]
    fn single_layer() {
        let gp = random_right_regular(4, 2, 5).unwrap();
        let l = build_layered(&gp, 1).unwrap();
        assert_eq!(l.graph().left_size(), 8);
        assert_eq!(l.graph().right_size(), 4);
        for w in 0..4 {
            assert_eq!(l.graph().right_degree(w), 3);
            assert!(l.graph().neighbors(w).contains(&((4 + w) as u32)));
        }
        assert_eq!(l.matched_right(5), 1);
    }

    #[test]
    fn neighborhoods_stay_between_adjacent_layers() {
        let gp = random_right_regular(5, 2, 9).unwrap();
        let l = build_layered(&gp, 3).unwrap();
        for i in 1..=3 {
            for w in l.right_layer(i) {
                for &v in l.graph().neighbors(w) {
                    let layer = l.layer_of_variable(v).unwrap();
                    assert!(layer == i || layer + 1 == i);
                }
            }
        }
    }

    #[test]
    fn rejects_non_layered_graphs() {
        let bad = BipartiteGraph::new(4, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(LayeredGraph::new(1, 2, bad).is_err());
        let rect = BipartiteGraph::new(3, vec![vec![0]]).unwrap();
        assert!(build_layered(&rect, 1).is_err());
    }
}
