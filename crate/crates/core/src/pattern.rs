//! Vincular patterns, pattern sets, the dash grammar, and containment.
//!
//! A pattern `(σ, X)` is written with a dash between `σ_j` and `σ_{j+1}`
//! whenever `j ∉ X`, so `1-24-3` is `(1243, {2})`. Containment here works
//! on words that may hold the null marker `0`: a null never takes part in a
//! copy and breaks any adjacency across it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub const MAX_PATTERN_LEN: usize = 9;

/// Null marker inside scenario words.
pub const NULL: u8 = 0;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VincularPattern {
    perm: Permutation,
    /// Bit `x` set iff `x ∈ X` (positions `x` and `x + 1` must be adjacent).
    adjacencies: u16,
}

impl VincularPattern {
    pub fn new(perm: Permutation, adjacencies: &[usize]) -> Result<Self> {
        let k = perm.len();
        if k == 0 || k > MAX_PATTERN_LEN {
            return Err(Error::Pattern(
                perm.to_string(),
                format!("length must be 1..={MAX_PATTERN_LEN}"),
            ));
        }
        let mut mask = 0u16;
        for &x in adjacencies {
            if x == 0 || x >= k {
                return Err(Error::Pattern(
                    perm.to_string(),
                    format!("adjacency {x} outside 1..{k}"),
                ));
            }
            mask |= 1 << x;
        }
        Ok(VincularPattern {
            perm,
            adjacencies: mask,
        })
    }

    pub fn classical(perm: Permutation) -> Self {
        VincularPattern {
            perm,
            adjacencies: 0,
        }
    }

    pub fn consecutive(perm: Permutation) -> Self {
        let k = perm.len();
        VincularPattern {
            adjacencies: (1..k).fold(0, |m, x| m | (1 << x)),
            perm,
        }
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Whether `σ_x` and `σ_{x+1}` must be adjacent (1-indexed `x`).
    pub fn is_adjacent(&self, x: usize) -> bool {
        x < 16 && self.adjacencies & (1 << x) != 0
    }

    pub fn adjacencies(&self) -> Vec<usize> {
        (1..self.len()).filter(|&x| self.is_adjacent(x)).collect()
    }

    pub fn is_classical(&self) -> bool {
        self.adjacencies == 0
    }

    pub fn is_consecutive(&self) -> bool {
        (1..self.len()).all(|x| self.is_adjacent(x))
    }

    /// Consecutive except for one dash before the last letter, `(σ, [k-2])`.
    pub fn is_single_tail(&self) -> bool {
        let k = self.len();
        k >= 2 && (1..k - 1).all(|x| self.is_adjacent(x)) && !self.is_adjacent(k - 1)
    }

    /// Sizes of the maximal dash-free blocks, e.g. `12-35-467` gives `[2, 2, 3]`.
    pub fn block_type(&self) -> Vec<usize> {
        let mut blocks = vec![1];
        for x in 1..self.len() {
            if self.is_adjacent(x) {
                *blocks.last_mut().unwrap() += 1;
            } else {
                blocks.push(1);
            }
        }
        blocks
    }

    /// Number of letters in the head, `max X + 1` (1 for a classical pattern).
    pub fn head_len(&self) -> usize {
        self.adjacencies().last().copied().unwrap_or(0) + 1
    }

    /// The initial segment through the last adjacency. For a classical
    /// pattern this is the single letter `1`.
    pub fn head(&self) -> VincularPattern {
        let l = self.head_len();
        VincularPattern {
            perm: self.perm.prefix(l),
            adjacencies: self.adjacencies & ((1u16 << l) - 1),
        }
    }

    pub fn reverse(&self) -> VincularPattern {
        let k = self.len();
        let adj: Vec<usize> = self.adjacencies().iter().map(|x| k - x).collect();
        VincularPattern::new(self.perm.reverse(), &adj).unwrap()
    }

    pub fn complement(&self) -> VincularPattern {
        VincularPattern {
            perm: self.perm.complement(),
            adjacencies: self.adjacencies,
        }
    }

    /// Whether the word (nulls allowed) contains a copy of this pattern.
    pub fn occurs_in(&self, word: &[u8]) -> bool {
        self.find_copy(word, |_, _| true)
    }

    /// Whether the word has a copy whose head letters all sit in the first
    /// `prefix_len` positions.
    pub fn occurs_with_head_in_prefix(&self, word: &[u8], prefix_len: usize) -> bool {
        let head = self.head_len();
        self.find_copy(word, |j, pos| j >= head || pos < prefix_len)
    }

    /// Backtracking search for a copy; `allowed(j, pos)` may veto placing
    /// pattern letter `j` (0-indexed) at word position `pos` (0-indexed).
    fn find_copy(&self, word: &[u8], allowed: impl Fn(usize, usize) -> bool) -> bool {
        let k = self.len();
        if k > word.len() {
            return false;
        }
        let mut pos = vec![0usize; k];
        self.extend(word, &allowed, &mut pos, 0)
    }

    fn extend(
        &self,
        word: &[u8],
        allowed: &impl Fn(usize, usize) -> bool,
        pos: &mut [usize],
        j: usize,
    ) -> bool {
        let k = self.len();
        if j == k {
            return true;
        }
        let sigma = self.perm.letters();
        let last = word.len() - (k - j);
        let range = if j == 0 {
            0..=last
        } else if self.is_adjacent(j) {
            let p = pos[j - 1] + 1;
            if p > last {
                return false;
            }
            p..=p
        } else {
            pos[j - 1] + 1..=last
        };
        for p in range {
            let letter = word[p];
            if letter == NULL || !allowed(j, p) {
                continue;
            }
            let consistent =
                (0..j).all(|i| word[pos[i]].cmp(&letter) == sigma[i].cmp(&sigma[j]));
            if consistent {
                pos[j] = p;
                if self.extend(word, allowed, pos, j + 1) {
                    return true;
                }
            }
        }
        false
    }
}

impl PartialOrd for VincularPattern {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by length, then by the dash notation.
impl Ord for VincularPattern {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }
}

impl fmt::Display for VincularPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, l) in self.perm.letters().iter().enumerate() {
            if j > 0 && !self.is_adjacent(j) {
                f.write_str("-")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VincularPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VincularPattern {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_ascii_whitespace()).collect();
        let err = |msg: &str| Error::Pattern(text.to_string(), msg.to_string());
        if compact.is_empty() {
            return Err(err("empty pattern"));
        }
        let mut letters = Vec::new();
        let mut adjacencies = Vec::new();
        for block in compact.split('-') {
            if block.is_empty() {
                return Err(err("empty block"));
            }
            for (i, c) in block.chars().enumerate() {
                let d = c
                    .to_digit(10)
                    .filter(|&d| d >= 1)
                    .ok_or_else(|| err("letters must be digits 1-9"))?;
                if i > 0 {
                    adjacencies.push(letters.len());
                }
                letters.push(d as u8);
            }
        }
        if letters.len() > MAX_PATTERN_LEN {
            return Err(err("longer than 9 letters"));
        }
        let mut seen = [false; 10];
        for &l in &letters {
            if seen[l as usize] {
                return Err(err("repeated letter"));
            }
            seen[l as usize] = true;
        }
        let perm =
            Permutation::new(letters).map_err(|_| err("letters must form 1..k"))?;
        VincularPattern::new(perm, &adjacencies)
    }
}

impl Serialize for VincularPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VincularPattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite set of vincular patterns, kept sorted and free of duplicates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PatternSet(BTreeSet<VincularPattern>);

impl PatternSet {
    pub fn new(patterns: impl IntoIterator<Item = VincularPattern>) -> Self {
        PatternSet(patterns.into_iter().collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &VincularPattern> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.iter().map(|p| p.len()).max().unwrap_or(0)
    }

    /// True iff the word (nulls allowed) contains some pattern of the set.
    pub fn occurs_in(&self, word: &[u8]) -> bool {
        self.iter().any(|p| p.occurs_in(word))
    }

    pub fn avoided_by(&self, perm: &Permutation) -> bool {
        !self.occurs_in(perm.letters())
    }

    pub fn reverse(&self) -> PatternSet {
        PatternSet::new(self.iter().map(|p| p.reverse()))
    }

    pub fn complement(&self) -> PatternSet {
        PatternSet::new(self.iter().map(|p| p.complement()))
    }
}

impl FromStr for PatternSet {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::EmptyPatternSet);
        }
        text.split(',')
            .map(|t| t.parse::<VincularPattern>())
            .collect::<Result<BTreeSet<_>>>()
            .map(PatternSet)
    }
}

impl fmt::Display for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

/// Every vincular pattern of length `k`, in dash-notation order.
pub fn all_patterns(k: usize) -> Vec<VincularPattern> {
    let mut out = Vec::new();
    for perm in Permutation::all(k) {
        for mask in 0u16..(1 << k.saturating_sub(1)) {
            let adj: Vec<usize> = (1..k).filter(|x| mask & (1 << (x - 1)) != 0).collect();
            out.push(VincularPattern::new(perm.clone(), &adj).unwrap());
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use crate::perm::reduce;

    fn pat(s: &str) -> VincularPattern {
        s.parse().unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    /// Containment by enumerating every k-subset of positions.
    fn naive_contains(pi: &Permutation, pat: &VincularPattern) -> bool {
        let sigma = pat.perm().letters();
        (0..pi.len()).combinations(pat.len()).any(|idx| {
            let sub: Vec<u8> = idx.iter().map(|&i| pi.letters()[i]).collect();
            reduce(&sub) == sigma
                && pat.adjacencies().iter().all(|&x| idx[x] == idx[x - 1] + 1)
        })
    }

    #[test]
    fn parse_and_format() {
        let p = pat("124-3");
        assert_eq!(p.perm(), &perm("1243"));
        assert_eq!(p.adjacencies(), vec![1, 2]);
        assert_eq!(pat("12-34").adjacencies(), vec![1, 3]);
        assert_eq!(pat("1-24-3").adjacencies(), vec![2]);
        assert_eq!(pat(" 1 - 2 4-3 ").to_string(), "1-24-3");
        let set: PatternSet = "23-1, 3-21".parse().unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.to_string(), "23-1, 3-21");
        let dup: PatternSet = "23-1,23-1".parse().unwrap();
        assert_eq!(dup.len(), 1);
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "1--2", "-12", "12-", "1-1", "13", "0-1", "1a", "1234567891", "12,"] {
            assert!(bad.parse::<PatternSet>().is_err(), "{bad:?} should fail");
        }
    }

    #[test]
    fn containment_examples() {
        assert!(pat("1-2-43").occurs_in(perm("162534").letters()));
        assert!(!pat("1-2-43").occurs_in(perm("162345").letters()));
        assert!(!pat("23-1").occurs_in(perm("3142").letters()));
        assert!(pat("23-1").occurs_in(perm("231").letters()));
        let p = perm("34512");
        assert!(PatternSet::new([pat("1-3-2")]).avoided_by(&p));
        assert!(!PatternSet::new([pat("2-3-1")]).avoided_by(&p));
        assert!(PatternSet::new([pat("1")]).avoided_by(&Permutation::empty()));
    }

    #[test]
    fn nulls_break_adjacency() {
        assert!(pat("124-3").occurs_in(&[1, 2, 3, 5, NULL, 4]));
        assert!(!pat("124-3").occurs_in(&[1, 3, NULL, 2]));
        assert!(!pat("23-1").occurs_in(&[2, NULL, 3, 1]));
        assert!(pat("2-3-1").occurs_in(&[2, NULL, 3, NULL, 1]));
    }

    #[test]
    fn head_examples() {
        assert_eq!(pat("2-41-6-5-3").head(), pat("2-31"));
        assert_eq!(pat("1234").head(), pat("1234"));
        assert_eq!(pat("1-2-3").head(), pat("1"));
        assert_eq!(pat("12-3-4-5").head(), pat("12"));
    }

    #[test]
    fn head_in_prefix_examples() {
        let b = pat("124-3");
        assert!(!b.occurs_with_head_in_prefix(perm("12354").letters(), 3));
        assert!(b.occurs_in(perm("12354").letters()));
        assert!(pat("23-1").occurs_with_head_in_prefix(perm("2413").letters(), 2));
        for q in Permutation::all(5) {
            assert_eq!(b.occurs_with_head_in_prefix(q.letters(), 5), b.occurs_in(q.letters()));
        }
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(pat("23-1").reverse(), pat("1-32"));
        assert_eq!(pat("23-1").complement(), pat("21-3"));
        for k in 1..=4 {
            for p in all_patterns(k) {
                assert_eq!(p.complement().complement(), p);
                assert_eq!(p.reverse().reverse(), p);
            }
        }
    }

    #[test]
    fn block_types() {
        assert_eq!(pat("12-35-467").block_type(), vec![2, 2, 3]);
        assert_eq!(pat("1-2-3").block_type(), vec![1, 1, 1]);
        assert_eq!(all_patterns(3).len(), 24);
        assert_eq!(all_patterns(4).len(), 192);
        assert!(pat("123-4").is_single_tail());
        assert!(pat("1-2").is_single_tail());
        assert!(!pat("12-3-4").is_single_tail());
        assert!(pat("312").is_consecutive());
    }

    #[test]
    fn matches_naive_containment() {
        let pats: Vec<VincularPattern> = (1..=3).flat_map(all_patterns).collect();
        for n in 0..=6 {
            for pi in Permutation::all(n) {
                for p in &pats {
                    assert_eq!(p.occurs_in(pi.letters()), naive_contains(&pi, p), "{pi} {p}");
                }
            }
        }
    }

    #[test]
    fn containment_respects_symmetries() {
        let pats: Vec<VincularPattern> = (1..=4).flat_map(all_patterns).collect();
        for n in 0..=6 {
            for pi in Permutation::all(n) {
                let (r, c) = (pi.reverse(), pi.complement());
                for p in &pats {
                    let here = p.occurs_in(pi.letters());
                    assert_eq!(here, p.reverse().occurs_in(r.letters()));
                    assert_eq!(here, p.complement().occurs_in(c.letters()));
                }
            }
        }
    }
}
