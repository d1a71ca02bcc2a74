//! Spacing vectors, gap vectors, and minimal gap-vector bases.
//!
//! For a prefix word `w` of length `k` over `[n]` with sorted letters
//! `c_1 < … < c_k`, component `i` of the spacing vector is the number of
//! values strictly between `c_{i-1}` and `c_i` (with `c_0 = 0` and
//! `c_{k+1} = n + 1`), i.e. how many letters after the prefix fall in that
//! gap. A gap vector `v` certifies that no avoider has a prefix whose
//! spacing dominates `v`.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::{PatternSet, NULL};
use crate::perm::Permutation;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GapVector(Vec<u32>);

impl GapVector {
    pub fn new(components: Vec<u32>) -> Self {
        GapVector(components)
    }

    pub fn zero(len: usize) -> Self {
        GapVector(vec![0; len])
    }

    /// Unit vector with a 1 at 1-indexed component `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = vec![0; len];
        v[i - 1] = 1;
        GapVector(v)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &GapVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn reversed(&self) -> GapVector {
        GapVector(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for GapVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.0.iter().join(","))
    }
}

impl fmt::Debug for GapVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Spacing vector of a prefix word with distinct letters drawn from `[n]`.
/// Null markers in the word are ignored.
pub fn spacing_vector(n: usize, word: &[u8]) -> Result<GapVector> {
    let mut letters: Vec<usize> = word.iter().filter(|&&l| l != NULL).map(|&l| l as usize).collect();
    letters.sort_unstable();
    if letters.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidWord(format!("{word:?} repeats a letter")));
    }
    if letters.last().is_some_and(|&l| l > n) {
        return Err(Error::InvalidWord(format!("{word:?} exceeds n = {n}")));
    }
    let mut gaps = Vec::with_capacity(letters.len() + 1);
    let mut prev = 0;
    for &c in letters.iter().chain(std::iter::once(&(n + 1))) {
        gaps.push((c - prev - 1) as u32);
        prev = c;
    }
    Ok(GapVector(gaps))
}

/// A finite antichain of gap vectors of one length.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GapBasis(Vec<GapVector>);

impl GapBasis {
    pub fn empty() -> Self {
        GapBasis(Vec::new())
    }

    pub fn new(mut vectors: Vec<GapVector>) -> Self {
        vectors.sort();
        vectors.dedup();
        GapBasis(vectors)
    }

    pub fn zero(len: usize) -> Self {
        GapBasis(vec![GapVector::zero(len)])
    }

    pub fn vectors(&self) -> &[GapVector] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_zero(&self) -> bool {
        self.0.iter().any(|v| v.is_zero())
    }

    pub fn max_norm(&self) -> u32 {
        self.0.iter().map(|v| v.norm()).max().unwrap_or(0)
    }

    /// True iff `spacing` dominates some basis vector.
    pub fn is_satisfied_by(&self, spacing: &GapVector) -> bool {
        self.0.iter().any(|v| spacing.dominates(v))
    }

    /// Same as [`GapBasis::is_satisfied_by`] on raw components.
    pub(crate) fn is_satisfied_by_raw(&self, spacing: &[u32]) -> bool {
        self.0
            .iter()
            .any(|v| v.0.iter().zip(spacing).all(|(a, b)| b >= a))
    }

    pub fn is_antichain(&self) -> bool {
        self.0.iter().enumerate().all(|(i, a)| {
            self.0
                .iter()
                .enumerate()
                .all(|(j, b)| i == j || !a.dominates(b))
        })
    }

    /// Drop every vector that dominates another one.
    pub fn minimized(&self) -> GapBasis {
        let keep = self
            .0
            .iter()
            .filter(|a| !self.0.iter().any(|b| b != *a && a.dominates(b)))
            .cloned()
            .collect();
        GapBasis::new(keep)
    }

    pub fn reversed(&self) -> GapBasis {
        GapBasis::new(self.0.iter().map(|v| v.reversed()).collect())
    }

    pub fn union(&self, other: &GapBasis) -> GapBasis {
        GapBasis::new(self.0.iter().chain(&other.0).cloned().collect())
    }
}

impl fmt::Display for GapBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(", "))
    }
}

impl fmt::Debug for GapBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether the prefix word `w` over `[n]` satisfies some criterion of `basis`.
pub fn satisfies_criterion(n: usize, word: &[u8], basis: &GapBasis) -> Result<bool> {
    let g = spacing_vector(n, word)?;
    if let Some(v) = basis.vectors().iter().find(|v| v.len() != g.len()) {
        return Err(Error::LengthMismatch {
            expected: g.len(),
            found: v.len(),
        });
    }
    Ok(basis.is_satisfied_by(&g))
}

/// All permutations of length `|p| + |v|` whose first `|p|` letters reduce
/// to `p` and have spacing vector exactly `v`. There are `|v|!` of them.
pub fn build_a(prefix: &Permutation, v: &GapVector) -> Vec<Permutation> {
    let k = prefix.len();
    assert_eq!(v.len(), k + 1, "gap vector length must be |p| + 1");
    let total = k + v.norm() as usize;
    let mut by_rank = Vec::with_capacity(k);
    let mut c = 0u8;
    for &g in &v.0[..k] {
        c += g as u8 + 1;
        by_rank.push(c);
    }
    let head: Vec<u8> = prefix.letters().iter().map(|&r| by_rank[r as usize - 1]).collect();
    let rest: Vec<u8> = (1..=total as u8).filter(|l| !by_rank.contains(l)).collect();
    rest.iter()
        .copied()
        .permutations(rest.len())
        .map(|tail| {
            let mut w = head.clone();
            w.extend(tail);
            Permutation::from_reduced(w)
        })
        .collect()
}

/// Sufficient test: every member of `A(p, v)` holds a copy of some pattern
/// whose head lies inside the prefix.
pub fn is_gap_vector(prefix: &Permutation, v: &GapVector, patterns: &PatternSet) -> bool {
    let k = prefix.len();
    build_a(prefix, v).iter().all(|pi| {
        patterns
            .iter()
            .any(|pat| pat.occurs_with_head_in_prefix(pi.letters(), k))
    })
}

/// Vectors of length `len` and the given norm, in lexicographic order.
pub(crate) fn compositions(len: usize, norm: u32) -> Vec<GapVector> {
    fn rec(len: usize, norm: u32, cur: &mut Vec<u32>, out: &mut Vec<GapVector>) {
        if cur.len() + 1 == len {
            cur.push(norm);
            out.push(GapVector(cur.clone()));
            cur.pop();
            return;
        }
        for first in 0..=norm {
            cur.push(first);
            rec(len, norm - first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if len > 0 {
        rec(len, norm, &mut Vec::with_capacity(len), &mut out);
    }
    out
}

/// Minimal gap vectors of norm at most `max_norm`, searched by increasing
/// norm and skipping candidates that dominate an accepted vector.
pub fn gap_basis(prefix: &Permutation, patterns: &PatternSet, max_norm: u32) -> GapBasis {
    let len = prefix.len() + 1;
    if !patterns.avoided_by(prefix) {
        return GapBasis::zero(len);
    }
    let mut accepted: Vec<GapVector> = Vec::new();
    for norm in 0..=max_norm {
        let found: Vec<GapVector> = compositions(len, norm)
            .into_iter()
            .filter(|v| !accepted.iter().any(|a| v.dominates(a)))
            .filter(|v| is_gap_vector(prefix, v, patterns))
            .collect();
        accepted.extend(found);
    }
    GapBasis::new(accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;
    use crate::perm::reduce;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    fn gv(c: &[u32]) -> GapVector {
        GapVector::new(c.to_vec())
    }

    #[test]
    fn spacing_examples() {
        assert_eq!(spacing_vector(5, &[5, 3]).unwrap(), gv(&[2, 1, 0]));
        assert_eq!(spacing_vector(4, &[1]).unwrap(), gv(&[0, 3]));
        assert_eq!(spacing_vector(4, &[3, 1, 4, 2]).unwrap(), gv(&[0, 0, 0, 0, 0]));
        assert!(spacing_vector(3, &[4]).is_err());
        assert!(spacing_vector(3, &[2, 2]).is_err());
        for n in 0..=6u8 {
            for k in 0..=n.min(3) {
                for w in (1..=n).permutations(k as usize) {
                    assert_eq!(spacing_vector(n as usize, &w).unwrap().norm(), (n - k) as u32);
                }
            }
        }
    }

    #[test]
    fn criterion_examples() {
        let b = GapBasis::new(vec![gv(&[1, 0, 0])]);
        assert!(satisfies_criterion(4, &[2, 3], &b).unwrap());
        assert!(!satisfies_criterion(4, &[1, 2], &b).unwrap());
        assert!(!satisfies_criterion(4, &[2, 3], &GapBasis::empty()).unwrap());
        assert!(satisfies_criterion(4, &[2], &b).is_err());
    }

    #[test]
    fn build_a_examples() {
        let strs = |v: &[u32]| -> Vec<String> {
            build_a(&perm("12"), &gv(v)).iter().map(|p| p.to_string()).collect()
        };
        assert_eq!(strs(&[1, 0, 0]), vec!["231"]);
        assert_eq!(strs(&[2, 0, 0]), vec!["3412", "3421"]);
        assert_eq!(strs(&[1, 1, 0]), vec!["2413", "2431"]);
        assert_eq!(build_a(&perm("312"), &GapVector::zero(4)), vec![perm("312")]);
    }

    #[test]
    fn build_a_sizes_and_shape() {
        let fact = [1, 1, 2, 6];
        for k in 0..=4 {
            for p in Permutation::all(k) {
                for norm in 0..=3 {
                    for v in compositions(k + 1, norm) {
                        let a = build_a(&p, &v);
                        assert_eq!(a.len(), fact[norm as usize]);
                        for pi in a {
                            assert_eq!(pi.prefix(k), p);
                            assert_eq!(spacing_vector(pi.len(), &pi.letters()[..k]).unwrap(), v);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gap_test_examples() {
        let b = set("23-1");
        assert!(is_gap_vector(&perm("12"), &gv(&[1, 0, 0]), &b));
        assert!(!is_gap_vector(&perm("12"), &gv(&[0, 1, 0]), &b));
        assert!(!is_gap_vector(&perm("123"), &gv(&[0, 0, 0, 2]), &set("124-3, 123-4-5")));
    }

    #[test]
    fn basis_examples() {
        assert_eq!(gap_basis(&perm("12"), &set("23-1"), 2), GapBasis::new(vec![gv(&[1, 0, 0])]));
        assert_eq!(gap_basis(&perm("21"), &set("23-1"), 2), GapBasis::empty());
        assert_eq!(gap_basis(&perm("12"), &set("12"), 3), GapBasis::zero(3));
        assert_eq!(gap_basis(&perm("21"), &set("3-21, 32-1"), 2), GapBasis::new(vec![gv(&[1, 0, 0])]));
    }

    #[test]
    fn compositions_are_lexicographic() {
        let c: Vec<String> = compositions(3, 2).iter().map(|v| v.to_string()).collect();
        assert_eq!(c, vec!["⟨0,0,2⟩", "⟨0,1,1⟩", "⟨0,2,0⟩", "⟨1,0,1⟩", "⟨1,1,0⟩", "⟨2,0,0⟩"]);
        assert_eq!(compositions(4, 3).len(), 20);
    }

    const CORPUS: &[&str] = &[
        "23-1", "1-32", "1-2-3", "2-3-1", "123-4", "124-3", "1-24-3", "12-34", "12-3", "3-21, 32-1",
        "124-3, 123-4-5", "21-3, 321",
    ];

    #[test]
    fn bases_are_antichains_and_monotone() {
        for b in CORPUS {
            let b = set(b);
            for k in 1..=3 {
                for p in Permutation::all(k) {
                    let basis = gap_basis(&p, &b, 2);
                    assert!(basis.is_antichain(), "{b:?} {p}");
                    for v in basis.vectors() {
                        assert!(v.norm() <= 2);
                        for norm in v.norm()..=2 {
                            for u in compositions(k + 1, norm).iter().filter(|u| u.dominates(v)) {
                                assert!(is_gap_vector(&p, u, &b), "{b:?} {p} {v} {u}");
                            }
                        }
                    }
                }
            }
        }
    }

    /// No prefix word with spacing above a discovered gap vector admits an
    /// avoider, checked by brute force.
    #[test]
    fn discovered_gap_vectors_are_sound() {
        let oracle = Oracle::default();
        for b in CORPUS {
            let b = set(b);
            for k in 1..=3 {
                for p in Permutation::all(k) {
                    let basis = gap_basis(&p, &b, 2);
                    for n in k..=(k + 4).min(7) {
                        for w in (1..=n as u8).permutations(k) {
                            if reduce(&w) != p.letters() {
                                continue;
                            }
                            let g = spacing_vector(n, &w).unwrap();
                            if basis.is_satisfied_by(&g) {
                                assert_eq!(oracle.count_with_prefix(&b, n, &w).unwrap(), 0, "{b:?} {p} {w:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn complement_duality() {
        for b in CORPUS {
            let b = set(b);
            let bc = b.complement();
            for k in 0..=3 {
                for p in Permutation::all(k) {
                    assert_eq!(gap_basis(&p, &b, 2).reversed(), gap_basis(&p.complement(), &bc, 2));
                }
            }
        }
    }
}
