//! Uniform set families with bounded pairwise intersections and the
//! colorings of `(U × {0,1})^k` they induce.

use std::collections::HashSet;

use serde::Serialize;

use crate::atomic::equality_pattern;
use crate::coloring::{TupleColoring, TupleSpace};
use crate::error::{Error, Result};

/// A family of `k`-subsets of `0..universe`, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetFamily {
    universe: usize,
    k: usize,
    members: Vec<Vec<u32>>,
}

impl SetFamily {
    pub fn new(universe: usize, k: usize, members: Vec<Vec<u32>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut sorted = Vec::with_capacity(members.len());
        for mut set in members {
            set.sort_unstable();
            set.dedup();
            if set.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "member {set:?} does not have {k} elements"
                )));
            }
            if let Some(&u) = set.iter().find(|&&u| u as usize >= universe) {
                return Err(Error::IndexOutOfRange {
                    index: u as usize,
                    size: universe,
                });
            }
            if !seen.insert(set.clone()) {
                return Err(Error::InvalidArgument(format!("repeated member {set:?}")));
            }
            sorted.push(set);
        }
        Ok(SetFamily {
            universe,
            k,
            members: sorted,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The first `t` members.
    pub fn prefix(&self, t: usize) -> SetFamily {
        SetFamily {
            universe: self.universe,
            k: self.k,
            members: self.members[..t.min(self.len())].to_vec(),
        }
    }

    /// The same members over a larger universe.
    pub fn with_universe(&self, universe: usize) -> Result<SetFamily> {
        if universe < self.universe {
            return Err(Error::InvalidArgument("universe can only grow".into()));
        }
        Ok(SetFamily {
            universe,
            ..self.clone()
        })
    }

    /// Largest intersection of two distinct members.
    pub fn max_pairwise_intersection(&self) -> Option<usize> {
        let mut best = None;
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                let common = a.iter().filter(|x| b.binary_search(x).is_ok()).count();
                best = Some(best.map_or(common, |c: usize| c.max(common)));
            }
        }
        best
    }
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

/// Graphs of polynomials over `F_q`: the universe is `[k] × F_q` with point
/// `(i, y)` at index `i*q + y`, and each polynomial `p` of degree at most
/// `k - 2` gives the set `{(i, p(i)) : i ∈ [k]}`. Two distinct polynomials
/// agree on at most `k - 2` points, so intersections are at most `k - 2`.
/// Members are listed by coefficient vector `(c_0, .., c_{k-2})` in
/// lexicographic order.
pub fn polynomial_set_family(q: usize, k: usize) -> Result<SetFamily> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("{q} is not prime")));
    }
    if q < k {
        return Err(Error::InvalidArgument(format!("need q >= k, got q = {q}, k = {k}")));
    }
    let count = q.pow((k - 1) as u32);
    let mut members = Vec::with_capacity(count);
    let mut coeffs = vec![0usize; k - 1];
    for code in 0..count {
        let mut rest = code;
        for c in coeffs.iter_mut().rev() {
            *c = rest % q;
            rest /= q;
        }
        let set = (0..k)
            .map(|i| {
                let y = coeffs.iter().rev().fold(0usize, |acc, &c| (acc * i + c) % q);
                (i * q + y) as u32
            })
            .collect();
        members.push(set);
    }
    SetFamily::new(k * q, k, members)
}

/// Scans `k`-subsets of `0..universe` in lexicographic order and keeps
/// each one meeting every kept set in at most `max_intersection` points.
pub fn greedy_set_family(
    universe: usize,
    k: usize,
    max_intersection: usize,
    limit: Option<usize>,
) -> Result<SetFamily> {
    if k == 0 || k > universe {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= universe, got k = {k}"
        )));
    }
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut set: Vec<u32> = (0..k as u32).collect();
    loop {
        if limit.is_some_and(|l| members.len() >= l) {
            break;
        }
        let fits = members.iter().all(|m| {
            m.iter().filter(|x| set.binary_search(x).is_ok()).count() <= max_intersection
        });
        if fits {
            members.push(set.clone());
        }
        // Next combination in lexicographic order.
        let mut i = k;
        while i > 0 && set[i - 1] as usize == universe - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        set[i - 1] += 1;
        for j in i..k {
            set[j] = set[j - 1] + 1;
        }
    }
    SetFamily::new(universe, k, members)
}

/// The coloring of `V^k`, `V = U × {0,1}` with `(u, a)` at index `2u + a`,
/// in which two tuples share a color iff they have the same base points,
/// the same equality pattern and, when their base points form a member of
/// the family, the same bit parity.
#[derive(Clone, Debug)]
pub struct FamilyColoring {
    pub family: SetFamily,
    pub coloring: TupleColoring,
}

pub fn family_coloring(family: &SetFamily, k: usize) -> Result<FamilyColoring> {
    if family.k() != k {
        return Err(Error::InvalidArgument(format!(
            "family is {}-uniform, coloring asked for k = {k}",
            family.k()
        )));
    }
    let n = 2 * family.universe();
    let space = TupleSpace::new(n, k)?;
    let members: HashSet<&[u32]> = family.members().iter().map(Vec::as_slice).collect();
    let mut tuple = vec![0usize; k];
    let labels: Vec<(Vec<u32>, Vec<u8>, Option<bool>)> = (0..space.len())
        .map(|index| {
            space.decode_into(index, &mut tuple);
            let base: Vec<u32> = tuple.iter().map(|&e| (e / 2) as u32).collect();
            let mut set = base.clone();
            set.sort_unstable();
            set.dedup();
            let parity = members
                .contains(set.as_slice())
                .then(|| tuple.iter().filter(|&&e| e % 2 == 1).count() % 2 == 1);
            (base, equality_pattern(&tuple), parity)
        })
        .collect();
    Ok(FamilyColoring {
        family: family.clone(),
        coloring: TupleColoring::from_labels(k, n, &labels)?,
    })
}

/// The colorings of all prefixes `F_0 ⊂ F_1 ⊂ .. ⊂ F_ℓ` of the family.
pub fn stable_chain(family: &SetFamily, k: usize) -> Result<Vec<FamilyColoring>> {
    (0..=family.len())
        .map(|t| family_coloring(&family.prefix(t), k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_polynomials_give_disjoint_pairs() {
        let f = polynomial_set_family(3, 2).unwrap();
        assert_eq!(f.members(), &[vec![0, 3], vec![1, 4], vec![2, 5]]);
        assert_eq!(f.max_pairwise_intersection(), Some(0));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(polynomial_set_family(4, 2).is_err());
        assert!(polynomial_set_family(2, 3).is_err());
        assert!(polynomial_set_family(5, 1).is_err());
    }

    #[test]
    fn greedy_family_respects_bound() {
        let f = greedy_set_family(7, 3, 1, None).unwrap();
        assert_eq!(f.max_pairwise_intersection(), Some(1));
        // The lines of the Fano plane.
        assert_eq!(f.len(), 7);
        assert_eq!(f.members()[..3], [vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6]]);
    }

    #[test]
    fn member_parity_splits_colors() {
        let f = SetFamily::new(3, 2, vec![vec![0, 1]]).unwrap();
        let chi = family_coloring(&f, 2).unwrap().coloring;
        // (0,0),(1,0) versus (0,1),(1,0): same base, pattern, odd parity.
        assert_ne!(chi.color_of(&[0, 2]).unwrap(), chi.color_of(&[1, 2]).unwrap());
        let plain = family_coloring(&f.prefix(0), 2).unwrap().coloring;
        assert_eq!(plain.color_of(&[0, 2]).unwrap(), plain.color_of(&[1, 2]).unwrap());
    }
}
