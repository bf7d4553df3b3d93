//! Relational structures over a finite universe `{0, .., n-1}` and their
//! line-oriented text format.
//!
//! ```text
//! # a path on three vertices
//! structure p3
//! universe 3
//! relation E 2
//! 0 1
//! 1 0
//! 1 2
//! 2 1
//! end
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A relation symbol with a fixed positive arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

impl RelationSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        RelationSymbol {
            name: name.into(),
            arity,
        }
    }
}

/// An ordered list of relation symbols with unique names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vocabulary {
    relations: Vec<RelationSymbol>,
}

fn is_token(name: &str) -> bool {
    !name.is_empty() && !name.contains(char::is_whitespace) && !name.contains('#')
}

impl Vocabulary {
    pub fn new(relations: Vec<RelationSymbol>) -> Result<Self> {
        let mut seen = HashSet::new();
        for symbol in &relations {
            if !is_token(&symbol.name) {
                return Err(Error::InvalidVocabulary(format!(
                    "relation name {:?} is not a single token",
                    symbol.name
                )));
            }
            if symbol.arity == 0 {
                return Err(Error::InvalidVocabulary(format!(
                    "relation {} has arity 0",
                    symbol.name
                )));
            }
            if !seen.insert(symbol.name.as_str()) {
                return Err(Error::InvalidVocabulary(format!(
                    "duplicate relation name {}",
                    symbol.name
                )));
            }
        }
        Ok(Vocabulary { relations })
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Maximum arity, 0 for the empty vocabulary.
    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity).max().unwrap_or(0)
    }

    pub fn has_arity_at_most(&self, k: usize) -> bool {
        self.max_arity() <= k
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }
}

#[derive(Clone, Debug, Default)]
struct Relation {
    tuples: Vec<Vec<usize>>,
    index: HashSet<Vec<usize>>,
}

/// A finite relational structure. Tuples keep their insertion order so
/// that printing reproduces the input layout.
#[derive(Clone, Debug)]
pub struct RelationalStructure {
    name: String,
    vocabulary: Vocabulary,
    universe_size: usize,
    relations: Vec<Relation>,
}

impl PartialEq for RelationalStructure {
    /// Equality as mathematical structures (relation contents compared as
    /// sets); the name is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.vocabulary == other.vocabulary
            && self.universe_size == other.universe_size
            && self
                .relations
                .iter()
                .zip(&other.relations)
                .all(|(a, b)| a.index == b.index)
    }
}

impl Eq for RelationalStructure {}

impl RelationalStructure {
    /// An empty structure (all relations empty).
    pub fn new(name: impl Into<String>, vocabulary: Vocabulary, universe_size: usize) -> Self {
        let relations = vec![Relation::default(); vocabulary.len()];
        RelationalStructure {
            name: name.into(),
            vocabulary,
            universe_size,
            relations,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn max_arity(&self) -> usize {
        self.vocabulary.max_arity()
    }

    /// Adds a tuple to relation `rel`. Returns `false` if it was present.
    pub fn add_tuple(&mut self, rel: usize, tuple: Vec<usize>) -> Result<bool> {
        let symbol = self.vocabulary.relations.get(rel).ok_or_else(|| {
            Error::InvalidArgument(format!("relation index {rel} out of range"))
        })?;
        if tuple.len() != symbol.arity {
            return Err(Error::ShapeMismatch(format!(
                "relation {} has arity {}, got tuple of length {}",
                symbol.name,
                symbol.arity,
                tuple.len()
            )));
        }
        if let Some(&index) = tuple.iter().find(|&&v| v >= self.universe_size) {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.universe_size,
            });
        }
        let relation = &mut self.relations[rel];
        if !relation.index.insert(tuple.clone()) {
            return Ok(false);
        }
        relation.tuples.push(tuple);
        Ok(true)
    }

    /// Adds a tuple to the relation called `name`.
    pub fn add_named(&mut self, name: &str, tuple: Vec<usize>) -> Result<bool> {
        let rel = self
            .vocabulary
            .index_of(name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown relation {name}")))?;
        self.add_tuple(rel, tuple)
    }

    #[inline]
    pub fn contains(&self, rel: usize, tuple: &[usize]) -> bool {
        self.relations[rel].index.contains(tuple)
    }

    /// Tuples of relation `rel` in insertion order.
    pub fn tuples(&self, rel: usize) -> &[Vec<usize>] {
        &self.relations[rel].tuples
    }

    /// Total number of tuples over all relations.
    pub fn size(&self) -> usize {
        self.relations.iter().map(|r| r.tuples.len()).sum()
    }

    /// The image under the universe permutation `perm` (`v -> perm[v]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.universe_size {
            return Err(Error::ShapeMismatch(format!(
                "permutation of length {} for universe of size {}",
                perm.len(),
                self.universe_size
            )));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        let mut out = RelationalStructure::new(
            self.name.clone(),
            self.vocabulary.clone(),
            self.universe_size,
        );
        for (rel, relation) in self.relations.iter().enumerate() {
            for tuple in &relation.tuples {
                out.add_tuple(rel, tuple.iter().map(|&v| perm[v]).collect())?;
            }
        }
        Ok(out)
    }

    /// Re-expresses the structure over a larger vocabulary; relations that
    /// are new to `vocabulary` stay empty.
    pub fn with_vocabulary(&self, vocabulary: &Vocabulary) -> Result<Self> {
        let mut out =
            RelationalStructure::new(self.name.clone(), vocabulary.clone(), self.universe_size);
        for (rel, symbol) in self.vocabulary.relations.iter().enumerate() {
            let target = vocabulary
                .index_of(&symbol.name)
                .filter(|&t| vocabulary.relations[t].arity == symbol.arity)
                .ok_or(Error::VocabularyMismatch)?;
            for tuple in &self.relations[rel].tuples {
                out.add_tuple(target, tuple.clone())?;
            }
        }
        Ok(out)
    }

    /// Renders the structure in the text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "structure {}", self.name);
        let _ = writeln!(out, "universe {}", self.universe_size);
        for (symbol, relation) in self.vocabulary.relations.iter().zip(&self.relations) {
            let _ = writeln!(out, "relation {} {}", symbol.name, symbol.arity);
            for tuple in &relation.tuples {
                let line: Vec<String> = tuple.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out.push_str("end\n");
        out
    }

    /// Parses exactly one structure.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut all = parse_structures(text)?;
        match all.len() {
            1 => Ok(all.pop().unwrap()),
            0 => Err(Error::parse(0, "no structure found")),
            n => Err(Error::parse(0, format!("expected one structure, found {n}"))),
        }
    }
}

/// Parses every structure in `text`, in order.
pub fn parse_structures(text: &str) -> Result<Vec<RelationalStructure>> {
    struct Pending {
        name: String,
        universe: Option<usize>,
        symbols: Vec<RelationSymbol>,
        tuples: Vec<Vec<Vec<usize>>>,
    }

    let mut done = Vec::new();
    let mut pending: Option<Pending> = None;

    for (number, raw) in text.lines().enumerate() {
        let line_no = number + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let head = words.next().unwrap();
        match head {
            "structure" => {
                if pending.is_some() {
                    return Err(Error::parse(line_no, "missing `end` before new structure"));
                }
                let name = words
                    .next()
                    .ok_or_else(|| Error::parse(line_no, "structure needs a name"))?;
                if words.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens after name"));
                }
                pending = Some(Pending {
                    name: name.to_string(),
                    universe: None,
                    symbols: Vec::new(),
                    tuples: Vec::new(),
                });
            }
            "universe" => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| Error::parse(line_no, "`universe` outside a structure"))?;
                if p.universe.is_some() || !p.symbols.is_empty() {
                    return Err(Error::parse(line_no, "`universe` must appear once, first"));
                }
                let n = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| Error::parse(line_no, "universe needs a size"))?;
                if words.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens after size"));
                }
                p.universe = Some(n);
            }
            "relation" => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| Error::parse(line_no, "`relation` outside a structure"))?;
                if p.universe.is_none() {
                    return Err(Error::parse(line_no, "`universe` must precede relations"));
                }
                let name = words
                    .next()
                    .ok_or_else(|| Error::parse(line_no, "relation needs a name"))?;
                let arity: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| Error::parse(line_no, "relation needs an arity"))?;
                if words.next().is_some() {
                    return Err(Error::parse(line_no, "trailing tokens after arity"));
                }
                p.symbols.push(RelationSymbol::new(name, arity));
                p.tuples.push(Vec::new());
            }
            "end" => {
                let p = pending
                    .take()
                    .ok_or_else(|| Error::parse(line_no, "`end` outside a structure"))?;
                let universe = p
                    .universe
                    .ok_or_else(|| Error::parse(line_no, "structure without `universe`"))?;
                let vocabulary = Vocabulary::new(p.symbols)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                let mut structure = RelationalStructure::new(p.name, vocabulary, universe);
                for (rel, tuples) in p.tuples.into_iter().enumerate() {
                    for tuple in tuples {
                        structure.add_tuple(rel, tuple)?;
                    }
                }
                done.push(structure);
            }
            _ => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| Error::parse(line_no, format!("unexpected `{head}`")))?;
                let arity = p
                    .symbols
                    .last()
                    .map(|s| s.arity)
                    .ok_or_else(|| Error::parse(line_no, "tuple before any relation"))?;
                let universe = p.universe.unwrap_or(0);
                let tuple: Vec<usize> = line
                    .split_whitespace()
                    .map(|w| w.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::parse(line_no, "tuple entries must be integers"))?;
                if tuple.len() != arity {
                    return Err(Error::parse(
                        line_no,
                        format!("expected {arity} entries, found {}", tuple.len()),
                    ));
                }
                if let Some(v) = tuple.iter().find(|&&v| v >= universe) {
                    return Err(Error::parse(
                        line_no,
                        format!("index {v} out of range for universe {universe}"),
                    ));
                }
                let current = p.tuples.last_mut().unwrap();
                if current.contains(&tuple) {
                    return Err(Error::parse(line_no, "duplicate tuple"));
                }
                current.push(tuple);
            }
        }
    }
    if pending.is_some() {
        return Err(Error::parse(text.lines().count(), "missing `end`"));
    }
    Ok(done)
}

/// Builds an undirected simple graph as a structure with one symmetric
/// binary relation `E`.
pub fn graph_structure(
    name: impl Into<String>,
    n: usize,
    edges: &[(usize, usize)],
) -> Result<RelationalStructure> {
    let vocabulary = Vocabulary::new(vec![RelationSymbol::new("E", 2)])?;
    let mut structure = RelationalStructure::new(name, vocabulary, n);
    for &(a, b) in edges {
        if a == b {
            return Err(Error::InvalidArgument(format!("loop at vertex {a}")));
        }
        structure.add_tuple(0, vec![a, b])?;
        structure.add_tuple(0, vec![b, a])?;
    }
    Ok(structure)
}

/// Common graphs used throughout tests and examples.
pub mod graphs {
    use super::*;

    pub fn complete(n: usize) -> RelationalStructure {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        graph_structure(format!("K{n}"), n, &edges).expect("valid graph")
    }

    pub fn path(n: usize) -> RelationalStructure {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        graph_structure(format!("P{n}"), n, &edges).expect("valid graph")
    }

    pub fn cycle(n: usize) -> RelationalStructure {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph_structure(format!("C{n}"), n, &edges).expect("valid graph")
    }

    /// `copies` disjoint cycles of length `len`.
    pub fn disjoint_cycles(copies: usize, len: usize) -> RelationalStructure {
        let mut edges = Vec::new();
        for c in 0..copies {
            let base = c * len;
            for i in 0..len {
                edges.push((base + i, base + (i + 1) % len));
            }
        }
        graph_structure(format!("{copies}xC{len}"), copies * len, &edges).expect("valid graph")
    }

    pub fn edgeless(n: usize) -> RelationalStructure {
        graph_structure(format!("E{n}"), n, &[]).expect("valid graph")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
structure p3
universe 3
relation E 2
0 1
1 0
1 2
2 1
relation U 1
2
end
";

    #[test]
    fn round_trip_is_byte_identical() {
        let s = RelationalStructure::from_text(SAMPLE).unwrap();
        assert_eq!(s.to_text(), SAMPLE);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let commented = "# header\nstructure p3\n\nuniverse 3 # size\nrelation E 2\n0 1\n1 0\n1 2\n2 1\nrelation U 1\n2\nend\n";
        let s = RelationalStructure::from_text(commented).unwrap();
        assert_eq!(s.to_text(), SAMPLE);
    }

    #[test]
    fn rejects_malformed_input() {
        let cases = [
            "structure x\nuniverse 2\nrelation E 2\n0 2\nend\n",
            "structure x\nuniverse 2\nrelation E 2\n0\nend\n",
            "structure x\nuniverse 2\nrelation E 2\n0 1\n0 1\nend\n",
            "structure x\nuniverse 2\nrelation E 0\nend\n",
            "structure x\nuniverse 2\nrelation E 1\nrelation E 1\nend\n",
            "structure x\nuniverse 2\n",
            "universe 2\nend\n",
            "structure x\n0 1\nend\n",
        ];
        for case in cases {
            assert!(RelationalStructure::from_text(case).is_err(), "{case}");
        }
    }

    #[test]
    fn parses_several_structures() {
        let text = format!("{SAMPLE}{}", graphs::cycle(4).to_text());
        let all = parse_structures(&text).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[1].name(), "C4");
        assert!(RelationalStructure::from_text(&text).is_err());
    }

    #[test]
    fn add_tuple_validates() {
        let mut s = graphs::edgeless(3);
        assert!(s.add_tuple(0, vec![0, 1]).unwrap());
        assert!(!s.add_tuple(0, vec![0, 1]).unwrap());
        assert!(matches!(
            s.add_tuple(0, vec![0, 3]),
            Err(Error::IndexOutOfRange { index: 3, size: 3 })
        ));
        assert!(s.add_tuple(0, vec![0]).is_err());
    }

    #[test]
    fn permutation_preserves_structure_size() {
        let c = graphs::cycle(5);
        let p = c.permuted(&[4, 3, 2, 1, 0]).unwrap();
        assert_eq!(p.size(), c.size());
        assert!(p.contains(0, &[4, 3]));
        assert!(c.permuted(&[0, 0, 1, 2, 3]).is_err());
    }

    #[test]
    fn vocabulary_invariants() {
        assert!(Vocabulary::new(vec![RelationSymbol::new("a b", 1)]).is_err());
        let v = Vocabulary::new(vec![RelationSymbol::new("E", 2), RelationSymbol::new("T", 3)])
            .unwrap();
        assert_eq!(v.max_arity(), 3);
        assert!(v.has_arity_at_most(3));
        assert!(!v.has_arity_at_most(2));
        assert_eq!(v.index_of("T"), Some(1));
    }
}
