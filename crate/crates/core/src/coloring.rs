//! Colorings of `V^k` stored as flat arrays over a row-major mixed-radix
//! tuple index (the first position is most significant).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::atomic::equality_pattern;
use crate::error::{Error, Result};

/// Largest tuple space we index; color ids are `u32`.
pub const MAX_TUPLES: u128 = 1 << 31;

/// The index space `V^k` with `|V| = n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSpace {
    n: usize,
    k: usize,
    len: usize,
    strides: Vec<usize>,
}

impl TupleSpace {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        let needed = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if needed > MAX_TUPLES {
            return Err(Error::BudgetExceeded {
                what: "tuple space",
                needed,
                budget: MAX_TUPLES,
            });
        }
        let len = needed as usize;
        let strides = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
        Ok(TupleSpace { n, k, len, strides })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn stride(&self, position: usize) -> usize {
        self.strides[position]
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().zip(&self.strides).map(|(v, s)| v * s).sum()
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = index % self.n;
            index /= self.n;
        }
    }

    pub fn decode(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.k];
        self.decode_into(index, &mut out);
        out
    }

    /// Index of `v[w/position]` given the index of `v` and `v[position]`.
    #[inline]
    pub fn substitute(&self, index: usize, position: usize, old: usize, w: usize) -> usize {
        index + w * self.strides[position] - old * self.strides[position]
    }
}

/// A total coloring of `V^k` with dense color ids `0..num_colors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleColoring {
    k: usize,
    n: usize,
    colors: Vec<u32>,
    num_colors: usize,
}

impl TupleColoring {
    /// Builds a coloring from arbitrary labels; ids follow the sorted label
    /// order.
    pub fn from_labels<T: Ord + Clone>(k: usize, n: usize, labels: &[T]) -> Result<Self> {
        let space = TupleSpace::new(n, k)?;
        if labels.len() != space.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels for {} tuples",
                labels.len(),
                space.len()
            )));
        }
        let mut sorted: Vec<&T> = labels.iter().collect();
        sorted.sort();
        sorted.dedup();
        let colors = labels
            .iter()
            .map(|l| sorted.binary_search(&l).unwrap() as u32)
            .collect();
        Ok(TupleColoring {
            k,
            n,
            colors,
            num_colors: sorted.len(),
        })
    }

    /// Renumbers raw ids densely, preserving their order.
    pub(crate) fn from_raw(k: usize, n: usize, raw: &[u32]) -> Self {
        let mut used: Vec<u32> = raw.to_vec();
        used.sort_unstable();
        used.dedup();
        let colors = raw
            .iter()
            .map(|c| used.binary_search(c).unwrap() as u32)
            .collect();
        TupleColoring {
            k,
            n,
            colors,
            num_colors: used.len(),
        }
    }

    /// Every tuple in one class.
    pub fn uniform(n: usize, k: usize) -> Result<Self> {
        let space = TupleSpace::new(n, k)?;
        Ok(TupleColoring {
            k,
            n,
            colors: vec![0; space.len()],
            num_colors: usize::from(!space.is_empty()),
        })
    }

    /// Every tuple in its own class.
    pub fn discrete(n: usize, k: usize) -> Result<Self> {
        let space = TupleSpace::new(n, k)?;
        Ok(TupleColoring {
            k,
            n,
            colors: (0..space.len() as u32).collect(),
            num_colors: space.len(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> TupleSpace {
        TupleSpace::new(self.n, self.k).expect("validated on construction")
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn color(&self, index: usize) -> u32 {
        self.colors[index]
    }

    pub fn color_of(&self, tuple: &[usize]) -> Result<u32> {
        if tuple.len() != self.k {
            return Err(Error::ShapeMismatch(format!(
                "tuple of length {} for k = {}",
                tuple.len(),
                self.k
            )));
        }
        if let Some(&index) = tuple.iter().find(|&&v| v >= self.n) {
            return Err(Error::IndexOutOfRange { index, size: self.n });
        }
        Ok(self.colors[self.space().encode(tuple)])
    }

    /// Number of tuples per color id.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_colors];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Class sizes sorted decreasingly; invariant under relabeling.
    pub fn size_profile(&self) -> Vec<usize> {
        let mut sizes = self.class_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.k != other.k || self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "colorings over ({}, {}) and ({}, {})",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }
}

/// `finer ⪯ coarser`: equal `finer` colors imply equal `coarser` colors.
pub fn coloring_refines(finer: &TupleColoring, coarser: &TupleColoring) -> Result<bool> {
    finer.same_shape(coarser)?;
    let mut image = vec![u32::MAX; finer.num_colors];
    for (&f, &c) in finer.colors.iter().zip(&coarser.colors) {
        let slot = &mut image[f as usize];
        if *slot == u32::MAX {
            *slot = c;
        } else if *slot != c {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn colorings_equivalent(a: &TupleColoring, b: &TupleColoring) -> Result<bool> {
    Ok(a.num_colors == b.num_colors && coloring_refines(a, b)?)
}

/// Whether `a ≺ b`.
pub fn strictly_refines(a: &TupleColoring, b: &TupleColoring) -> Result<bool> {
    Ok(coloring_refines(a, b)? && a.num_colors > b.num_colors)
}

/// Tuples in one class share their equality pattern.
pub fn is_equality_compatible(chi: &TupleColoring) -> bool {
    let space = chi.space();
    let mut seen: HashMap<u32, Vec<u8>> = HashMap::new();
    let mut buf = vec![0; chi.k];
    for (index, &c) in chi.colors.iter().enumerate() {
        space.decode_into(index, &mut buf);
        let pattern = equality_pattern(&buf);
        match seen.get(&c) {
            Some(p) if *p != pattern => return false,
            Some(_) => {}
            None => {
                seen.insert(c, pattern);
            }
        }
    }
    true
}

/// For every map `π: [k] -> [k]`, equal colors of `v`, `w` imply equal
/// colors of `v∘π`, `w∘π`.
pub fn is_shufflable(chi: &TupleColoring) -> bool {
    let space = chi.space();
    let k = chi.k;
    let maps = k.pow(k as u32);
    let mut buf = vec![0; k];
    let mut shuffled = vec![0; k];
    let mut pi = vec![0; k];
    for code in 0..maps {
        let mut rest = code;
        for slot in pi.iter_mut().rev() {
            *slot = rest % k;
            rest /= k;
        }
        let mut image = vec![u32::MAX; chi.num_colors];
        for (index, &c) in chi.colors.iter().enumerate() {
            space.decode_into(index, &mut buf);
            for (s, &p) in shuffled.iter_mut().zip(&pi) {
                *s = buf[p];
            }
            let target = chi.colors[space.encode(&shuffled)];
            let slot = &mut image[c as usize];
            if *slot == u32::MAX {
                *slot = target;
            } else if *slot != target {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_space_round_trip() {
        let s = TupleSpace::new(3, 3).unwrap();
        assert_eq!(s.len(), 27);
        for i in 0..27 {
            assert_eq!(s.encode(&s.decode(i)), i);
        }
        assert_eq!(s.encode(&[1, 0, 2]), 11);
        assert_eq!(s.substitute(11, 1, 0, 2), s.encode(&[1, 2, 2]));
        assert!(TupleSpace::new(1 << 20, 3).is_err());
    }

    #[test]
    fn refinement_relation() {
        let d = TupleColoring::discrete(3, 2).unwrap();
        let u = TupleColoring::uniform(3, 2).unwrap();
        assert!(coloring_refines(&d, &u).unwrap());
        assert!(!coloring_refines(&u, &d).unwrap());
        assert!(colorings_equivalent(&d, &d).unwrap());
        assert!(strictly_refines(&d, &u).unwrap());
        let other = TupleColoring::uniform(3, 3).unwrap();
        assert!(coloring_refines(&d, &other).is_err());
    }

    #[test]
    fn labels_are_densified_in_sorted_order() {
        let c = TupleColoring::from_labels(1, 3, &["z", "a", "z"]).unwrap();
        assert_eq!(c.colors(), &[1, 0, 1]);
        assert_eq!(c.num_colors(), 2);
        assert!(TupleColoring::from_labels(1, 3, &[1, 2]).is_err());
    }

    #[test]
    fn shufflable_and_equality_checks() {
        let d = TupleColoring::discrete(3, 2).unwrap();
        assert!(is_shufflable(&d));
        assert!(is_equality_compatible(&d));
        let u = TupleColoring::uniform(3, 2).unwrap();
        assert!(is_shufflable(&u));
        assert!(!is_equality_compatible(&u));
        // Diagonal vs off-diagonal, then split off the pair (0, 1) alone.
        let space = TupleSpace::new(3, 2).unwrap();
        let labels: Vec<u8> = (0..9)
            .map(|i| {
                let t = space.decode(i);
                if t[0] == t[1] {
                    0
                } else if t == [0, 1] {
                    2
                } else {
                    1
                }
            })
            .collect();
        let split = TupleColoring::from_labels(2, 3, &labels).unwrap();
        assert!(is_equality_compatible(&split));
        assert!(!is_shufflable(&split));
    }
}
