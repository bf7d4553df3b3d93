//! The algebra of rational-valued maps on `V^k` under the product
//! `(a·b)(v_1..v_k) = Σ_v a(v_1..v_{k-1}, v) · b(v_1..v_{k-2}, v, v_k)`,
//! its matrix embedding, and the subalgebras generated by partitions of
//! `V^k`.
//!
//! With tuples indexed row-major, a tensor is a stack of `n^{k-2}` square
//! `n × n` blocks (one per prefix `v_1..v_{k-2}`) and the product is the
//! blockwise matrix product.

use std::collections::{BTreeMap, HashSet};
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coloring::{TupleColoring, TupleSpace};
use crate::error::{Error, Result};
use crate::refine::{ceil_k_log2_n, stabilize};
use crate::structure::RelationalStructure;

/// Product budget used when the caller does not pass one.
pub const ALGEBRA_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug)]
enum Storage {
    Dense(Vec<BigRational>),
    Sparse(BTreeMap<usize, BigRational>),
}

/// An exact rational value for every tuple of `V^k`. Stored sparsely when
/// fewer than a tenth of the entries are nonzero.
#[derive(Clone, Debug)]
pub struct KTensor {
    n: usize,
    k: usize,
    len: usize,
    storage: Storage,
}

impl KTensor {
    fn build(n: usize, k: usize, len: usize, entries: BTreeMap<usize, BigRational>) -> Self {
        let storage = if entries.len() * 10 < len {
            Storage::Sparse(entries)
        } else {
            let mut dense = vec![BigRational::zero(); len];
            for (i, x) in entries {
                dense[i] = x;
            }
            Storage::Dense(dense)
        };
        KTensor { n, k, len, storage }
    }

    fn from_map(n: usize, k: usize, mut entries: BTreeMap<usize, BigRational>) -> Result<Self> {
        let len = TupleSpace::new(n, k)?.len();
        entries.retain(|_, x| !x.is_zero());
        if let Some((&i, _)) = entries.range(len..).next() {
            return Err(Error::IndexOutOfRange { index: i, size: len });
        }
        Ok(Self::build(n, k, len, entries))
    }

    pub fn zeros(n: usize, k: usize) -> Result<Self> {
        Self::from_map(n, k, BTreeMap::new())
    }

    /// Values listed in row-major tuple order.
    pub fn from_values(n: usize, k: usize, values: Vec<BigRational>) -> Result<Self> {
        let len = TupleSpace::new(n, k)?.len();
        if values.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "{} values for {len} tuples",
                values.len()
            )));
        }
        Self::from_map(n, k, values.into_iter().enumerate().collect())
    }

    pub fn from_integers(n: usize, k: usize, values: &[i64]) -> Result<Self> {
        Self::from_values(
            n,
            k,
            values.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        )
    }

    /// The 0/1 indicator of a set of tuple indices.
    pub fn characteristic(n: usize, k: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        Self::from_map(n, k, members.into_iter().map(|i| (i, BigRational::one())).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `n^k`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.iter().filter(|x| !x.is_zero()).count(),
            Storage::Sparse(m) => m.len(),
        }
    }

    fn entry(&self, index: usize) -> Option<&BigRational> {
        match &self.storage {
            Storage::Dense(v) => v.get(index).filter(|x| !x.is_zero()),
            Storage::Sparse(m) => m.get(&index),
        }
    }

    /// Value at a tuple index.
    pub fn get(&self, index: usize) -> BigRational {
        self.entry(index).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn value(&self, tuple: &[usize]) -> Result<BigRational> {
        let space = TupleSpace::new(self.n, self.k)?;
        if tuple.len() != self.k {
            return Err(Error::ShapeMismatch(format!(
                "tuple of length {} for k = {}",
                tuple.len(),
                self.k
            )));
        }
        if let Some(&x) = tuple.iter().find(|&&x| x >= self.n) {
            return Err(Error::IndexOutOfRange { index: x, size: self.n });
        }
        Ok(self.get(space.encode(tuple)))
    }

    /// Nonzero entries in index order.
    pub fn nonzeros(&self) -> Vec<(usize, &BigRational)> {
        match &self.storage {
            Storage::Dense(v) => v.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect(),
            Storage::Sparse(m) => m.iter().map(|(&i, x)| (i, x)).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<BigRational> {
        match &self.storage {
            Storage::Dense(v) => v.clone(),
            Storage::Sparse(m) => {
                let mut out = vec![BigRational::zero(); self.len];
                for (&i, x) in m {
                    out[i] = x.clone();
                }
                out
            }
        }
    }

    fn check_shape(&self, other: &KTensor) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::ShapeMismatch(format!(
                "tensors over n = {}, k = {} and n = {}, k = {}",
                self.n, self.k, other.n, other.k
            )));
        }
        Ok(())
    }

    fn entry_map(&self) -> BTreeMap<usize, BigRational> {
        self.nonzeros().into_iter().map(|(i, x)| (i, x.clone())).collect()
    }

    pub fn add(&self, other: &KTensor) -> Result<KTensor> {
        self.check_shape(other)?;
        let mut map = self.entry_map();
        for (i, x) in other.nonzeros() {
            *map.entry(i).or_insert_with(BigRational::zero) += x;
        }
        Self::from_map(self.n, self.k, map)
    }

    pub fn sub(&self, other: &KTensor) -> Result<KTensor> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, factor: &BigRational) -> KTensor {
        let map = self.nonzeros().into_iter().map(|(i, x)| (i, x * factor)).collect();
        Self::from_map(self.n, self.k, map).expect("same shape")
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &KTensor) -> Result<KTensor> {
        self.check_shape(other)?;
        let map = self
            .nonzeros()
            .into_iter()
            .filter_map(|(i, x)| other.entry(i).map(|y| (i, x * y)))
            .collect();
        Self::from_map(self.n, self.k, map)
    }
}

impl PartialEq for KTensor {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.nonzeros() == other.nonzeros()
    }
}

impl Eq for KTensor {}

impl Hash for KTensor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.k.hash(state);
        self.nonzeros().hash(state);
    }
}

fn require_k2(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("the product needs k >= 2, got {k}")));
    }
    Ok(())
}

/// `(a·b)(v_1..v_k) = Σ_v a(v_1..v_{k-1}, v) · b(v_1..v_{k-2}, v, v_k)`.
pub fn tensor_mul(a: &KTensor, b: &KTensor) -> Result<KTensor> {
    a.check_shape(b)?;
    require_k2(a.k)?;
    let n = a.n;
    let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (i, x) in a.nonzeros() {
        let block = i - i % (n * n);
        let row = (i / n) % n;
        let mid = i % n;
        for col in 0..n {
            if let Some(y) = b.entry(block + mid * n + col) {
                *out.entry(block + row * n + col).or_insert_with(BigRational::zero) += x * y;
            }
        }
    }
    KTensor::from_map(n, a.k, out)
}

/// The unit: `1` where the last two coordinates agree.
pub fn unit_tensor(n: usize, k: usize) -> Result<KTensor> {
    require_k2(k)?;
    let space = TupleSpace::new(n, k)?;
    let members = (0..space.len()).filter(|&i| (i / n) % n == i % n);
    KTensor::characteristic(n, k, members)
}

/// Swaps the last two coordinates (conjugation is trivial on rationals).
pub fn star(a: &KTensor) -> Result<KTensor> {
    require_k2(a.k)?;
    let n = a.n;
    let map = a
        .nonzeros()
        .into_iter()
        .map(|(i, x)| {
            let block = i - i % (n * n);
            (block + (i % n) * n + (i / n) % n, x.clone())
        })
        .collect();
    KTensor::from_map(n, a.k, map)
}

/// Dense exact rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.entries[i * size + i] = BigRational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &BigRational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigRational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let x = self.get(i, l);
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let y = other.get(l, j);
                    if !y.is_zero() {
                        out.entries[i * other.cols + j] += x * y;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }
}

/// The `n^{k-1} × n^{k-1}` matrix with entry `a(v_1..v_{k-1}, w_{k-1})` at
/// `((v_1..v_{k-1}), (w_1..w_{k-1}))` when the first `k-2` coordinates
/// agree, and zero otherwise.
pub fn matrix_embed(a: &KTensor) -> Result<QMatrix> {
    require_k2(a.k)?;
    let size = TupleSpace::new(a.n, a.k - 1)?.len();
    let n = a.n;
    let mut m = QMatrix::zeros(size, size);
    for (i, x) in a.nonzeros() {
        let prefix = i / (n * n);
        m.set(prefix * n + (i / n) % n, prefix * n + i % n, x.clone());
    }
    Ok(m)
}

/// One indicator tensor per color class, in color order.
pub fn partition_vectors(chi: &TupleColoring) -> Vec<KTensor> {
    let mut classes = vec![Vec::new(); chi.num_colors()];
    for (i, &c) in chi.colors().iter().enumerate() {
        classes[c as usize].push(i);
    }
    classes
        .into_iter()
        .map(|members| KTensor::characteristic(chi.n(), chi.k(), members).expect("valid indices"))
        .collect()
}

fn integer_row(t: &KTensor) -> Vec<BigInt> {
    let lcm = t
        .nonzeros()
        .iter()
        .fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let mut row = vec![BigInt::zero(); t.len()];
    for (i, x) in t.nonzeros() {
        row[i] = x.numer() * (&lcm / x.denom());
    }
    row
}

fn normalize_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// `row := p·row - q·other`, with `p`, `q` the entries at `pivot`.
fn eliminate(row: &mut [BigInt], other: &[BigInt], pivot: usize) {
    let q = row[pivot].clone();
    if q.is_zero() {
        return;
    }
    let p = other[pivot].clone();
    for (x, y) in row.iter_mut().zip(other) {
        if !y.is_zero() {
            *x = &*x * &p - &q * y;
        } else if !x.is_zero() {
            *x *= &p;
        }
    }
    normalize_content(row);
}

/// A linearly independent set of tensors with an exact membership test.
///
/// The inserted tensors are kept as given; alongside them the span is held
/// in reduced echelon form as primitive integer rows, computed by
/// fraction-free elimination.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    n: usize,
    k: usize,
    vectors: Vec<KTensor>,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl SpanBasis {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        TupleSpace::new(n, k)?;
        Ok(SpanBasis {
            n,
            k,
            vectors: Vec::new(),
            rows: Vec::new(),
        })
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// The accepted tensors in insertion order.
    pub fn vectors(&self) -> &[KTensor] {
        &self.vectors
    }

    /// The reduced echelon basis, each row scaled to pivot 1.
    pub fn echelon(&self) -> Vec<KTensor> {
        self.rows
            .iter()
            .map(|(p, row)| {
                let values = row
                    .iter()
                    .map(|x| BigRational::new(x.clone(), row[*p].clone()))
                    .collect();
                KTensor::from_values(self.n, self.k, values).expect("row has full length")
            })
            .collect()
    }

    fn check(&self, t: &KTensor) -> Result<()> {
        if t.n != self.n || t.k != self.k {
            return Err(Error::ShapeMismatch(format!(
                "tensor over n = {}, k = {} for a span over n = {}, k = {}",
                t.n, t.k, self.n, self.k
            )));
        }
        Ok(())
    }

    fn reduce(&self, t: &KTensor) -> Vec<BigInt> {
        let mut row = integer_row(t);
        for (p, basis_row) in &self.rows {
            eliminate(&mut row, basis_row, *p);
        }
        row
    }

    pub fn contains(&self, t: &KTensor) -> Result<bool> {
        self.check(t)?;
        Ok(self.reduce(t).iter().all(Zero::is_zero))
    }

    /// Adds `t` if it is outside the span; returns whether it was added.
    pub fn insert(&mut self, t: KTensor) -> Result<bool> {
        self.check(&t)?;
        let mut row = self.reduce(&t);
        let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        if row[pivot].is_negative() {
            for x in row.iter_mut() {
                *x = -&*x;
            }
        }
        for (_, other) in self.rows.iter_mut() {
            eliminate(other, &row, pivot);
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, row));
        self.vectors.push(t);
        Ok(true)
    }
}

/// Result of closing a span under the product.
#[derive(Clone, Debug)]
pub struct AlgebraClosure {
    pub basis: SpanBasis,
    /// False when the product budget ran out before a fixpoint.
    pub saturated: bool,
    pub products: usize,
}

/// Closes `span(generators)` under the product. Every ordered pair of
/// accepted basis tensors is multiplied once; the span of those products is
/// the span of all products by bilinearity.
pub fn algebra_closure(
    n: usize,
    k: usize,
    generators: &[KTensor],
    budget: Option<usize>,
) -> Result<AlgebraClosure> {
    require_k2(k)?;
    let budget = budget.unwrap_or(ALGEBRA_BUDGET);
    let mut basis = SpanBasis::new(n, k)?;
    for g in generators {
        basis.insert(g.clone())?;
    }
    let mut products = 0usize;
    let mut frontier = 0;
    while frontier < basis.rank() {
        let needed = 2 * frontier + 1;
        if products + needed > budget {
            return Ok(AlgebraClosure {
                basis,
                saturated: false,
                products,
            });
        }
        let current = &basis.vectors()[frontier];
        let candidates: Vec<KTensor> = (0..=frontier)
            .into_par_iter()
            .flat_map_iter(|j| {
                let other = &basis.vectors()[j];
                let mut out = vec![tensor_mul(current, other).expect("shapes agree")];
                if j != frontier {
                    out.push(tensor_mul(other, current).expect("shapes agree"));
                }
                out
            })
            .collect();
        products += needed;
        for c in candidates {
            if !c.is_zero() {
                basis.insert(c)?;
            }
        }
        frontier += 1;
    }
    Ok(AlgebraClosure {
        basis,
        saturated: true,
        products,
    })
}

/// Dimension of the algebra generated by the class indicators of a
/// partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraDimension {
    pub dimension: usize,
    pub saturated: bool,
    pub products: usize,
    pub contains_unit: bool,
}

pub fn algebra_dim(chi: &TupleColoring, budget: Option<usize>) -> Result<AlgebraDimension> {
    let closure = algebra_closure(chi.n(), chi.k(), &partition_vectors(chi), budget)?;
    let contains_unit = closure.basis.contains(&unit_tensor(chi.n(), chi.k())?)?;
    Ok(AlgebraDimension {
        dimension: closure.basis.rank(),
        saturated: closure.saturated,
        products: closure.products,
        contains_unit,
    })
}

/// One k-WL round in an algebra-dimension chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainRound {
    pub round: usize,
    pub classes: usize,
    pub dimension: usize,
    pub saturated: bool,
    /// Dimension grew over the previous round.
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraChain {
    pub n: usize,
    pub k: usize,
    pub rounds: Vec<ChainRound>,
    pub r_infinity: Option<usize>,
    pub weakly_increasing: bool,
    pub strict_increases: usize,
    /// `2 n^{k-1}`.
    pub increase_bound: u128,
    /// `⌈k log₂ n⌉ + 1`.
    pub window: usize,
    /// Every span of `window` strictly refining rounds raised the dimension.
    pub window_holds: bool,
}

/// Runs k-WL on `a` and computes the algebra dimension of every round's
/// partition.
pub fn wl_algebra_chain(a: &RelationalStructure, k: usize, budget: Option<usize>) -> Result<AlgebraChain> {
    require_k2(k)?;
    let n = a.universe_size();
    let trace = stabilize(a, k, None)?;
    let mut rounds: Vec<ChainRound> = Vec::with_capacity(trace.colorings.len());
    for (round, chi) in trace.colorings.iter().enumerate() {
        let dim = algebra_dim(chi, budget)?;
        let strict = rounds.last().is_some_and(|prev| dim.dimension > prev.dimension);
        rounds.push(ChainRound {
            round,
            classes: chi.num_colors(),
            dimension: dim.dimension,
            saturated: dim.saturated,
            strict,
        });
    }
    let weakly_increasing = rounds.windows(2).all(|w| w[0].dimension <= w[1].dimension);
    let strict_increases = rounds.iter().filter(|r| r.strict).count();
    let window = ceil_k_log2_n(n, k) as usize + 1;
    // Consecutive recorded colorings strictly refine each other.
    let window_holds = rounds
        .iter()
        .zip(rounds.iter().skip(window))
        .all(|(early, late)| late.dimension > early.dimension);
    Ok(AlgebraChain {
        n,
        k,
        increase_bound: 2 * (n as u128).pow(k as u32 - 1),
        r_infinity: trace.r_infinity,
        weakly_increasing,
        strict_increases,
        window,
        window_holds,
        rounds,
    })
}

/// Searches products `c_{i_1} ··· c_{i_s}` of class indicators, shortest
/// first and `s <= s_max`, for one whose values at `v` and `w` differ.
/// Products that coincide as tensors are explored once. Errors when more
/// than `budget` products would be needed.
pub fn distinguishing_monomial(
    chi: &TupleColoring,
    v: &[usize],
    w: &[usize],
    s_max: usize,
    budget: Option<usize>,
) -> Result<Option<Vec<usize>>> {
    require_k2(chi.k())?;
    let budget = budget.unwrap_or(ALGEBRA_BUDGET);
    let gens = partition_vectors(chi);
    let separates = |t: &KTensor| -> Result<bool> { Ok(t.value(v)? != t.value(w)?) };
    let mut seen: HashSet<KTensor> = HashSet::new();
    let mut level: Vec<(KTensor, Vec<usize>)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if s_max == 0 {
            break;
        }
        if separates(g)? {
            return Ok(Some(vec![i]));
        }
        if seen.insert(g.clone()) {
            level.push((g.clone(), vec![i]));
        }
    }
    let mut products = 0usize;
    for _ in 2..=s_max {
        let mut next = Vec::new();
        for (t, word) in &level {
            for (i, g) in gens.iter().enumerate() {
                products += 1;
                if products > budget {
                    return Err(Error::BudgetExceeded {
                        what: "monomial search products",
                        needed: products as u128,
                        budget: budget as u128,
                    });
                }
                let p = tensor_mul(t, g)?;
                let mut longer = word.clone();
                longer.push(i);
                if separates(&p)? {
                    return Ok(Some(longer));
                }
                if !p.is_zero() && seen.insert(p.clone()) {
                    next.push((p, longer));
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::initial_coloring;
    use crate::structure::graphs;

    fn ints(n: usize, k: usize, v: &[i64]) -> KTensor {
        KTensor::from_integers(n, k, v).unwrap()
    }

    #[test]
    fn k2_product_is_matrix_product() {
        let a = ints(2, 2, &[1, 2, 3, 4]);
        let b = ints(2, 2, &[0, 1, 1, 0]);
        assert_eq!(tensor_mul(&a, &b).unwrap(), ints(2, 2, &[2, 1, 4, 3]));
        assert_eq!(star(&a).unwrap(), ints(2, 2, &[1, 3, 2, 4]));
    }

    #[test]
    fn storage_switches_with_density() {
        assert!(KTensor::characteristic(4, 3, [5]).unwrap().is_sparse());
        assert!(!unit_tensor(3, 2).unwrap().is_sparse());
        let u = unit_tensor(3, 3).unwrap();
        assert_eq!(u.nnz(), 9);
        assert_eq!(matrix_embed(&u).unwrap(), QMatrix::identity(9));
    }

    #[test]
    fn span_membership_is_exact() {
        let mut s = SpanBasis::new(2, 2).unwrap();
        assert!(s.insert(ints(2, 2, &[1, 1, 0, 0])).unwrap());
        assert!(s.insert(ints(2, 2, &[0, 1, 1, 0])).unwrap());
        assert!(!s.insert(ints(2, 2, &[2, 0, -2, 0])).unwrap());
        assert!(s.contains(&ints(2, 2, &[1, 3, 2, 0])).unwrap());
        assert!(!s.contains(&ints(2, 2, &[0, 0, 0, 1])).unwrap());
        let half = KTensor::from_values(
            2,
            2,
            vec![
                BigRational::new(1.into(), 2.into()),
                BigRational::zero(),
                BigRational::new((-1).into(), 2.into()),
                BigRational::zero(),
            ],
        )
        .unwrap();
        assert!(s.contains(&half).unwrap());
        assert_eq!(s.echelon()[0].get(0), BigRational::one());
    }

    #[test]
    fn complete_graph_algebra_is_two_dimensional() {
        let chi = initial_coloring(&graphs::complete(4), 2).unwrap();
        let d = algebra_dim(&chi, None).unwrap();
        assert_eq!(d.dimension, 2);
        assert!(d.saturated && d.contains_unit);
    }

    #[test]
    fn path_endpoints_need_a_square() {
        let chi = initial_coloring(&graphs::path(4), 2).unwrap();
        let word = distinguishing_monomial(&chi, &[0, 0], &[1, 1], 3, None)
            .unwrap()
            .unwrap();
        assert_eq!(word.len(), 2);
    }

    #[test]
    fn budget_marks_unsaturated() {
        let chi = initial_coloring(&graphs::path(5), 2).unwrap();
        let d = algebra_dim(&chi, Some(3)).unwrap();
        assert!(!d.saturated);
    }
}
