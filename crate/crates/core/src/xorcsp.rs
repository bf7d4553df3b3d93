//! XOR constraint systems over `{0,1}`-variables: the translation into a
//! pair of relational structures, the attractor and closure operators, and
//! a GF(2) satisfiability oracle.
//!
//! Text format:
//!
//! ```text
//! vars x y z
//! constraint 1 x y
//! constraint 0 y z
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{floor_div, Rational};
use crate::structure::{RelationSymbol, RelationalStructure, Vocabulary};

/// `Σ_{x ∈ support} x ≡ parity (mod 2)`. The support is sorted and free of
/// duplicates; it may be empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct XorConstraint {
    support: Vec<u32>,
    parity: bool,
}

impl XorConstraint {
    /// Builds a constraint; repeated variables cancel in pairs.
    pub fn new(vars: impl IntoIterator<Item = u32>, parity: bool) -> Self {
        let mut support: Vec<u32> = vars.into_iter().collect();
        support.sort_unstable();
        let mut reduced: Vec<u32> = Vec::with_capacity(support.len());
        for v in support {
            if reduced.last() == Some(&v) {
                reduced.pop();
            } else {
                reduced.push(v);
            }
        }
        XorConstraint {
            support: reduced,
            parity,
        }
    }

    pub fn support(&self) -> &[u32] {
        &self.support
    }

    pub fn parity(&self) -> bool {
        self.parity
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// The parity sum of two constraints.
    pub fn sum(&self, other: &XorConstraint) -> XorConstraint {
        XorConstraint {
            support: symmetric_difference(&self.support, &other.support),
            parity: self.parity ^ other.parity,
        }
    }
}

fn symmetric_difference(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn symmetric_difference_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// A partial map from variable ids to bits.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartialAssignment {
    values: BTreeMap<u32, bool>,
}

impl PartialAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, bool)>) -> Self {
        PartialAssignment {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.values.insert(var, value);
    }

    pub fn remove(&mut self, var: u32) -> Option<bool> {
        self.values.remove(&var)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = u32> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.values.iter().map(|(&v, &b)| (v, b))
    }

    /// Restriction to the variables in `keep`.
    pub fn restrict(&self, keep: &[u32]) -> Self {
        PartialAssignment {
            values: self
                .values
                .iter()
                .filter(|(v, _)| keep.contains(v))
                .map(|(&v, &b)| (v, b))
                .collect(),
        }
    }
}

/// True iff the support is assigned and its bit sum differs from the parity.
pub fn violates(beta: &PartialAssignment, c: &XorConstraint) -> bool {
    let mut sum = false;
    for &x in &c.support {
        match beta.get(x) {
            Some(b) => sum ^= b,
            None => return false,
        }
    }
    sum != c.parity
}

/// A set of XOR constraints over named variables `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorSystem {
    variables: Vec<String>,
    constraints: BTreeSet<XorConstraint>,
}

impl XorSystem {
    /// Variables named `x1 .. xn`.
    pub fn with_variables(n: usize) -> Self {
        XorSystem {
            variables: (1..=n).map(|i| format!("x{i}")).collect(),
            constraints: BTreeSet::new(),
        }
    }

    pub fn with_names(names: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in &names {
            if name.is_empty() || name.contains(char::is_whitespace) || name.contains('#') {
                return Err(Error::InvalidArgument(format!("bad variable name {name:?}")));
            }
            if !seen.insert(name) {
                return Err(Error::InvalidArgument(format!("duplicate variable {name}")));
            }
        }
        Ok(XorSystem {
            variables: names,
            constraints: BTreeSet::new(),
        })
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn variable_names(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<u32> {
        self.variables.iter().position(|v| v == name).map(|i| i as u32)
    }

    /// Adds a constraint; returns `false` if it was already present.
    pub fn add(&mut self, c: XorConstraint) -> Result<bool> {
        if let Some(&v) = c.support.iter().find(|&&v| v as usize >= self.variables.len()) {
            return Err(Error::IndexOutOfRange {
                index: v as usize,
                size: self.variables.len(),
            });
        }
        Ok(self.constraints.insert(c))
    }

    pub fn add_variable(&mut self, name: impl Into<String>) -> Result<u32> {
        let name = name.into();
        if self.variables.contains(&name) {
            return Err(Error::InvalidArgument(format!("duplicate variable {name}")));
        }
        self.variables.push(name);
        Ok(self.variables.len() as u32 - 1)
    }

    pub fn constraints(&self) -> impl Iterator<Item = &XorConstraint> {
        self.constraints.iter()
    }

    pub fn contains(&self, c: &XorConstraint) -> bool {
        self.constraints.contains(c)
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Maximum support size, 0 for an empty system.
    pub fn arity(&self) -> usize {
        self.constraints.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn is_subset(&self, other: &XorSystem) -> bool {
        self.constraints.is_subset(&other.constraints)
    }

    /// A constraint violated by `beta`, if any.
    pub fn violated_by(&self, beta: &PartialAssignment) -> Option<&XorConstraint> {
        self.constraints.iter().find(|c| violates(beta, c))
    }

    fn with_constraints(&self, constraints: BTreeSet<XorConstraint>) -> XorSystem {
        XorSystem {
            variables: self.variables.clone(),
            constraints,
        }
    }

    /// Deterministic text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::from("vars");
        for v in &self.variables {
            out.push(' ');
            out.push_str(v);
        }
        out.push('\n');
        for c in &self.constraints {
            let _ = write!(out, "constraint {}", u8::from(c.parity));
            for &x in &c.support {
                let _ = write!(out, " {}", self.variables[x as usize]);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut system: Option<XorSystem> = None;
        let mut index: HashMap<String, u32> = HashMap::new();
        for (number, raw) in text.lines().enumerate() {
            let line_no = number + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            match words.next().unwrap() {
                "vars" => {
                    if system.is_some() {
                        return Err(Error::parse(line_no, "repeated `vars` line"));
                    }
                    let names: Vec<String> = words.map(str::to_string).collect();
                    let s = XorSystem::with_names(names)
                        .map_err(|e| Error::parse(line_no, e.to_string()))?;
                    index = s
                        .variables
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (v.clone(), i as u32))
                        .collect();
                    system = Some(s);
                }
                "constraint" => {
                    let s = system
                        .as_mut()
                        .ok_or_else(|| Error::parse(line_no, "`constraint` before `vars`"))?;
                    let parity = match words.next() {
                        Some("0") => false,
                        Some("1") => true,
                        _ => return Err(Error::parse(line_no, "parity must be 0 or 1")),
                    };
                    let mut vars = Vec::new();
                    for w in words {
                        let v = index
                            .get(w)
                            .ok_or_else(|| Error::parse(line_no, format!("unknown variable {w}")))?;
                        if vars.contains(v) {
                            return Err(Error::parse(line_no, format!("repeated variable {w}")));
                        }
                        vars.push(*v);
                    }
                    s.add(XorConstraint::new(vars, parity))?;
                }
                other => {
                    return Err(Error::parse(line_no, format!("unexpected `{other}`")));
                }
            }
        }
        system.ok_or_else(|| Error::parse(0, "missing `vars` line"))
    }
}

/// The structure pair for a system without empty supports. Element
/// `2i + b` stands for variable `i` carrying bit `b`. Both structures have
/// unary relations `X{i}` and one relation `R{a}_{i1}_..` per constraint;
/// the first structure holds the tuples of even bit sum, the second those
/// with bit sum `a`.
pub fn to_structures(s: &XorSystem) -> Result<(RelationalStructure, RelationalStructure)> {
    if s.constraints.iter().any(|c| c.is_empty()) {
        return Err(Error::InvalidArgument(
            "constraints with empty support have no structure encoding".into(),
        ));
    }
    let n = s.num_variables();
    let mut symbols: Vec<RelationSymbol> = (0..n).map(|i| RelationSymbol::new(format!("X{i}"), 1)).collect();
    for c in &s.constraints {
        let mut name = format!("R{}", u8::from(c.parity));
        for x in &c.support {
            let _ = write!(name, "_{x}");
        }
        symbols.push(RelationSymbol::new(name, c.len()));
    }
    let vocabulary = Vocabulary::new(symbols)?;
    let mut a = RelationalStructure::new("even", vocabulary.clone(), 2 * n);
    let mut b = RelationalStructure::new("odd", vocabulary, 2 * n);
    for i in 0..n {
        for structure in [&mut a, &mut b] {
            structure.add_tuple(i, vec![2 * i])?;
            structure.add_tuple(i, vec![2 * i + 1])?;
        }
    }
    for (offset, c) in s.constraints.iter().enumerate() {
        let rel = n + offset;
        let j = c.len();
        for bits in 0u64..(1 << j) {
            let tuple: Vec<usize> = c
                .support
                .iter()
                .enumerate()
                .map(|(p, &x)| 2 * x as usize + ((bits >> (j - 1 - p)) & 1) as usize)
                .collect();
            let odd = bits.count_ones() % 2 == 1;
            if !odd {
                a.add_tuple(rel, tuple.clone())?;
            }
            if odd == c.parity {
                b.add_tuple(rel, tuple)?;
            }
        }
    }
    Ok((a, b))
}

/// The map `(x, b) -> (x, b ⊕ s(x))` on elements of the translated pair.
pub fn shift_map(solution: &[bool]) -> Vec<usize> {
    (0..2 * solution.len())
        .map(|e| e ^ usize::from(solution[e / 2]))
        .collect()
}

/// `S` together with all pair sums whose support has at most `k` elements.
/// Pairing a constraint with itself contributes `(∅, 0)`.
pub fn attractor(s: &XorSystem, k: usize) -> XorSystem {
    let list: Vec<&XorConstraint> = s.constraints.iter().collect();
    let mut out = s.constraints.clone();
    for (i, c1) in list.iter().enumerate() {
        for c2 in &list[i..] {
            if symmetric_difference_len(&c1.support, &c2.support) <= k {
                out.insert(c1.sum(c2));
            }
        }
    }
    s.with_constraints(out)
}

/// Iterates the attractor to its fixpoint. Returns the closure and the
/// least `r` with one more attractor step changing nothing.
pub fn closure(s: &XorSystem, k: usize) -> (XorSystem, usize) {
    let mut all: Vec<XorConstraint> = s.constraints.iter().cloned().collect();
    let mut known: BTreeSet<XorConstraint> = s.constraints.clone();
    // Everything in `all[..old]` has been paired with everything else in it.
    let mut old = 0;
    let mut steps = 0;
    loop {
        let end = all.len();
        let mut added = Vec::new();
        for i in old..end {
            for j in 0..=i {
                let (c1, c2) = (&all[i], &all[j]);
                if symmetric_difference_len(&c1.support, &c2.support) <= k {
                    let c = c1.sum(c2);
                    if !known.contains(&c) {
                        known.insert(c.clone());
                        added.push(c);
                    }
                }
            }
        }
        if added.is_empty() {
            return (s.with_constraints(known), steps);
        }
        steps += 1;
        old = end;
        all.extend(added);
    }
}

/// `r` attractor steps.
pub fn closure_bounded(s: &XorSystem, k: usize, r: usize) -> XorSystem {
    let mut current = s.clone();
    for _ in 0..r {
        let next = attractor(&current, k);
        if next.len() == current.len() {
            break;
        }
        current = next;
    }
    current
}

/// Default cap on the number of subsets enumerated by [`star_closure`].
pub const STAR_CLOSURE_BUDGET: u128 = 10_000_000;

fn binomial(n: u128, r: u128) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Sums of at most `⌊k/α⌋` constraints of `cg` whose support has at most
/// `k` elements, including the empty sum `(∅, 0)`.
pub fn star_closure(
    cg: &XorSystem,
    k: usize,
    alpha: Rational,
    budget: Option<u128>,
) -> Result<XorSystem> {
    let cap = floor_div(k, alpha)?;
    let list: Vec<&XorConstraint> = cg.constraints.iter().collect();
    let m = list.len();
    let needed: u128 = (0..=cap.min(m))
        .map(|i| binomial(m as u128, i as u128))
        .fold(0u128, |a, b| a.saturating_add(b));
    let budget = budget.unwrap_or(STAR_CLOSURE_BUDGET);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "star closure subsets",
            needed,
            budget,
        });
    }
    let mut out = BTreeSet::new();
    // Depth-first over index-increasing subsets with a running sum.
    let mut stack: Vec<(usize, usize, XorConstraint)> = vec![(0, 0, XorConstraint::new([], false))];
    while let Some((next, size, sum)) = stack.pop() {
        if sum.len() <= k {
            out.insert(sum.clone());
        }
        if size == cap {
            continue;
        }
        for i in next..m {
            stack.push((i + 1, size + 1, sum.sum(list[i])));
        }
    }
    Ok(cg.with_constraints(out))
}

/// A satisfying total assignment found by Gaussian elimination over GF(2).
pub fn gauss_satisfiable(s: &XorSystem) -> Option<Vec<bool>> {
    let n = s.num_variables();
    let words = n / 64 + 1;
    let rhs_bit = n;
    let mut rows: Vec<Vec<u64>> = s
        .constraints
        .iter()
        .map(|c| {
            let mut row = vec![0u64; words];
            for &x in &c.support {
                row[x as usize / 64] |= 1 << (x % 64);
            }
            if c.parity {
                row[rhs_bit / 64] |= 1 << (rhs_bit % 64);
            }
            row
        })
        .collect();
    let bit = |row: &[u64], i: usize| (row[i / 64] >> (i % 64)) & 1 == 1;
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row, col) {
                for (w, pw) in row.iter_mut().zip(&pivot) {
                    *w ^= pw;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|row| bit(row, rhs_bit)) {
        return None;
    }
    let mut solution = vec![false; n];
    for (r, &col) in pivots.iter().enumerate() {
        solution[col] = bit(&rows[r], rhs_bit);
    }
    Some(solution)
}

/// Whether a total assignment satisfies every constraint.
pub fn satisfies(s: &XorSystem, assignment: &[bool]) -> bool {
    s.constraints.iter().all(|c| {
        c.support
            .iter()
            .fold(false, |acc, &x| acc ^ assignment[x as usize])
            == c.parity
    })
}
