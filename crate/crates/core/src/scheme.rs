//! Enumeration schemes: discovery, validation, the constructive scheme for
//! consecutive and single-tail patterns, and the complement transform.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deletion::Session;
use crate::error::{Error, Result};
use crate::gap::{GapBasis, GapVector};
use crate::pattern::{PatternSet, VincularPattern};
use crate::perm::{order_isomorphic, Permutation};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeTriple {
    pub prefix: Permutation,
    pub gap_basis: GapBasis,
    pub rd: Vec<usize>,
}

impl SchemeTriple {
    pub fn new(prefix: Permutation, gap_basis: GapBasis, mut rd: Vec<usize>) -> Result<Self> {
        rd.sort_unstable();
        rd.dedup();
        let k = prefix.len();
        if let Some(&r) = rd.iter().find(|&&r| r == 0 || r > k) {
            return Err(Error::IndexOutOfRange { index: r, len: k });
        }
        if let Some(v) = gap_basis.vectors().iter().find(|v| v.len() != k + 1) {
            return Err(Error::LengthMismatch {
                expected: k + 1,
                found: v.len(),
            });
        }
        Ok(SchemeTriple {
            prefix,
            gap_basis,
            rd,
        })
    }

    fn epsilon() -> Self {
        SchemeTriple {
            prefix: Permutation::empty(),
            gap_basis: GapBasis::empty(),
            rd: Vec::new(),
        }
    }

    /// Neither a zero gap vector nor a deletion: the triple needs its children.
    pub fn expands(&self) -> bool {
        self.rd.is_empty() && !self.gap_basis.contains_zero()
    }
}

impl fmt::Display for SchemeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis = if self.gap_basis.is_empty() {
            "∅".to_string()
        } else {
            self.gap_basis.to_string()
        };
        let rd = if self.rd.is_empty() {
            "∅".to_string()
        } else {
            format!("{{{}}}", self.rd.iter().join(","))
        };
        write!(f, "({}, {basis}, {rd})", self.prefix)
    }
}

impl fmt::Debug for SchemeTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Length first, then lexicographic.
fn prefix_order(a: &Permutation, b: &Permutation) -> std::cmp::Ordering {
    (a.len(), a).cmp(&(b.len(), b))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Scheme {
    patterns: PatternSet,
    max_gap_norm: u32,
    triples: BTreeMap<Permutation, SchemeTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingEpsilon,
    MissingChild { prefix: Permutation, child: Permutation },
    MissingReduction { prefix: Permutation, target: Permutation },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingEpsilon => write!(f, "no triple for the empty prefix"),
            Violation::MissingChild { prefix, child } => {
                write!(f, "prefix {prefix} expands but child {child} is missing")
            }
            Violation::MissingReduction { prefix, target } => {
                write!(f, "prefix {prefix} deletes to {target}, which is missing")
            }
        }
    }
}

impl Scheme {
    pub fn new(
        patterns: PatternSet,
        max_gap_norm: u32,
        triples: impl IntoIterator<Item = SchemeTriple>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for t in triples {
            let t = SchemeTriple::new(t.prefix, t.gap_basis, t.rd)?;
            if let Some(prev) = map.insert(t.prefix.clone(), t) {
                return Err(Error::InvalidScheme(format!("duplicate prefix {}", prev.prefix)));
            }
        }
        Ok(Scheme {
            patterns,
            max_gap_norm,
            triples: map,
        })
    }

    pub fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    pub fn max_gap_norm(&self) -> u32 {
        self.max_gap_norm
    }

    pub fn get(&self, prefix: &Permutation) -> Option<&SchemeTriple> {
        self.triples.get(prefix)
    }

    /// Triples ordered by prefix length, then lexicographically.
    pub fn triples(&self) -> Vec<&SchemeTriple> {
        let mut v: Vec<&SchemeTriple> = self.triples.values().collect();
        v.sort_by(|a, b| prefix_order(&a.prefix, &b.prefix));
        v
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Length of the longest prefix.
    pub fn depth(&self) -> usize {
        self.triples.keys().map(|p| p.len()).max().unwrap_or(0)
    }

    /// Every violated closure condition, in prefix order.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.triples.contains_key(&Permutation::empty()) {
            out.push(Violation::MissingEpsilon);
        }
        for t in self.triples() {
            if !t.rd.is_empty() {
                let target = t.prefix.delete(&t.rd).expect("rd checked on construction");
                if !self.triples.contains_key(&target) {
                    out.push(Violation::MissingReduction {
                        prefix: t.prefix.clone(),
                        target,
                    });
                }
            } else if !t.gap_basis.contains_zero() {
                for child in t.prefix.children() {
                    if !self.triples.contains_key(&child) {
                        out.push(Violation::MissingChild {
                            prefix: t.prefix.clone(),
                            child,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidScheme(v.to_string())),
        }
    }

    /// Scheme for the complemented patterns: prefixes complemented, gap
    /// vectors reversed, deletion sets kept.
    pub fn complement(&self) -> Scheme {
        Scheme {
            patterns: self.patterns.complement(),
            max_gap_norm: self.max_gap_norm,
            triples: self
                .triples
                .values()
                .map(|t| {
                    let p = t.prefix.complement();
                    let triple = SchemeTriple {
                        prefix: p.clone(),
                        gap_basis: t.gap_basis.reversed(),
                        rd: t.rd.clone(),
                    };
                    (p, triple)
                })
                .collect(),
        }
    }

    /// Copy with every gap basis reduced to its minimal elements.
    pub fn minimized(&self) -> Scheme {
        let mut s = self.clone();
        for t in s.triples.values_mut() {
            t.gap_basis = t.gap_basis.minimized();
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SchemeDoc::from(self)).expect("scheme serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SchemeDoc = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        let scheme = Scheme::new(doc.patterns, doc.max_gap_norm, doc.triples)?;
        if !scheme.triples.contains_key(&Permutation::empty()) {
            return Err(Error::InvalidScheme(Violation::MissingEpsilon.to_string()));
        }
        Ok(scheme)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.triples().iter().join(", "))
    }
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scheme[{}] {self}", self.patterns)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeDoc {
    patterns: PatternSet,
    max_gap_norm: u32,
    triples: Vec<SchemeTriple>,
}

impl From<&Scheme> for SchemeDoc {
    fn from(s: &Scheme) -> Self {
        SchemeDoc {
            patterns: s.patterns.clone(),
            max_gap_norm: s.max_gap_norm,
            triples: s.triples().into_iter().cloned().collect(),
        }
    }
}

impl Serialize for Scheme {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SchemeDoc::from(self).serialize(serializer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscoveryParams {
    pub max_depth: usize,
    pub max_gap_norm: u32,
}

impl Default for DiscoveryParams {
    fn default() -> Self {
        DiscoveryParams {
            max_depth: 5,
            max_gap_norm: 2,
        }
    }
}

impl DiscoveryParams {
    pub fn new(max_depth: usize, max_gap_norm: u32) -> Self {
        DiscoveryParams {
            max_depth,
            max_gap_norm,
        }
    }
}

/// Discovery ran out of depth: these prefixes sit at the depth bound with
/// neither a zero gap vector nor a deletion set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoScheme {
    pub patterns: PatternSet,
    pub params: DiscoveryParams,
    pub blocking: Vec<Permutation>,
}

impl fmt::Display for NoScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no scheme for {} at depth {} and gap norm {}; blocked at {}",
            self.patterns,
            self.params.max_depth,
            self.params.max_gap_norm,
            self.blocking.iter().join(", ")
        )
    }
}

impl std::error::Error for NoScheme {}

/// Breadth-first search for a scheme, one prefix length at a time with
/// prefixes in lexicographic order.
pub fn discover(patterns: &PatternSet, params: DiscoveryParams) -> std::result::Result<Scheme, NoScheme> {
    let session = Session::new(patterns.clone(), params.max_gap_norm);
    let mut triples = BTreeMap::new();
    triples.insert(Permutation::empty(), SchemeTriple::epsilon());
    let mut pending: BTreeSet<(usize, Permutation)> = BTreeSet::new();
    pending.insert((1, Permutation::identity(1)));
    let mut blocking = Vec::new();

    while let Some(&(len, _)) = pending.first() {
        let level: Vec<Permutation> = pending
            .iter()
            .take_while(|(l, _)| *l == len)
            .map(|(_, p)| p.clone())
            .collect();
        for p in &level {
            pending.remove(&(len, p.clone()));
        }
        let solved: Vec<SchemeTriple> = level
            .par_iter()
            .map(|p| {
                let basis = session.basis(p);
                let rd = if basis.contains_zero() {
                    Vec::new()
                } else {
                    session.find_rd_set(p).unwrap_or_default()
                };
                SchemeTriple {
                    prefix: p.clone(),
                    gap_basis: basis,
                    rd,
                }
            })
            .collect();
        for t in solved {
            let mut enqueue = |q: Permutation| {
                if !triples.contains_key(&q) {
                    pending.insert((q.len(), q));
                }
            };
            if !t.rd.is_empty() {
                enqueue(t.prefix.delete(&t.rd).expect("rd within prefix"));
            } else if t.expands() {
                if len >= params.max_depth {
                    blocking.push(t.prefix.clone());
                } else {
                    t.prefix.children().into_iter().for_each(&mut enqueue);
                }
            }
            triples.insert(t.prefix.clone(), t);
        }
    }

    if !blocking.is_empty() {
        blocking.sort_by(prefix_order);
        return Err(NoScheme {
            patterns: patterns.clone(),
            params,
            blocking,
        });
    }
    Ok(Scheme {
        patterns: patterns.clone(),
        max_gap_norm: params.max_gap_norm,
        triples,
    })
}

/// Which symmetric image of the pattern set a scheme was found for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Original,
    Reverse,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Original => "original",
            Variant::Reverse => "reverse",
        })
    }
}

/// Try the set itself, then its reverse (which has the same counts).
pub fn discover_with_reverse(
    patterns: &PatternSet,
    params: DiscoveryParams,
) -> std::result::Result<(Variant, Scheme), NoScheme> {
    match discover(patterns, params) {
        Ok(s) => Ok((Variant::Original, s)),
        Err(first) => discover(&patterns.reverse(), params)
            .map(|s| (Variant::Reverse, s))
            .map_err(|_| first),
    }
}

enum Shape {
    Consecutive,
    Tail,
}

fn shape(pat: &VincularPattern) -> Result<Shape> {
    if pat.is_consecutive() {
        Ok(Shape::Consecutive)
    } else if pat.is_single_tail() {
        Ok(Shape::Tail)
    } else {
        Err(Error::Unsupported(pat.to_string()))
    }
}

fn starts_with(p: &Permutation, sigma: &Permutation, m: usize) -> bool {
    let m = m.min(p.len());
    order_isomorphic(&p.letters()[..m], &sigma.letters()[..m])
}

/// Gap basis and whether `{1}` deletes, for one pattern at one prefix.
fn pattern_triple(p: &Permutation, pat: &VincularPattern, shape: &Shape) -> (GapBasis, bool) {
    let k = p.len();
    let t = pat.len();
    let sigma = pat.perm();
    if pat.occurs_in(p.letters()) {
        return (GapBasis::zero(k + 1), !starts_with(p, sigma, t));
    }
    match shape {
        Shape::Consecutive => (GapBasis::empty(), !starts_with(p, sigma, t)),
        Shape::Tail => {
            if k >= t - 1 && starts_with(p, sigma, t - 1) {
                let last = sigma.at(t);
                let j = if last == 1 {
                    1
                } else {
                    let a = (1..t).find(|&i| sigma.at(i) == last - 1).unwrap();
                    p.at(a) as usize + 1
                };
                (GapBasis::new(vec![GapVector::unit(k + 1, j)]), true)
            } else {
                (GapBasis::empty(), !starts_with(p, sigma, t - 1))
            }
        }
    }
}

/// The constructive scheme for sets of consecutive patterns and patterns
/// with a single dash before the last letter. Covers every prefix up to
/// length `t` for consecutive and `t - 1` for tail patterns; gap bases are
/// unions of the per-pattern bases and are not minimized.
pub fn guaranteed_scheme(patterns: &PatternSet) -> Result<Scheme> {
    let shapes: Vec<(&VincularPattern, Shape)> = patterns
        .iter()
        .map(|pat| shape(pat).map(|s| (pat, s)))
        .collect::<Result<_>>()?;
    let depth = shapes
        .iter()
        .map(|(pat, s)| match s {
            Shape::Consecutive => pat.len(),
            Shape::Tail => pat.len() - 1,
        })
        .max()
        .unwrap_or(0);
    let mut triples = vec![SchemeTriple::epsilon()];
    let mut max_norm = 0;
    for k in 1..=depth {
        for p in Permutation::all(k) {
            let mut basis = GapBasis::empty();
            let mut delete_first = true;
            for (pat, s) in &shapes {
                let (g, one) = pattern_triple(&p, pat, s);
                basis = basis.union(&g);
                delete_first &= one;
            }
            max_norm = max_norm.max(basis.max_norm());
            let rd = if delete_first { vec![1] } else { Vec::new() };
            triples.push(SchemeTriple {
                prefix: p,
                gap_basis: basis,
                rd,
            });
        }
    }
    Scheme::new(patterns.clone(), max_norm, triples)
}
