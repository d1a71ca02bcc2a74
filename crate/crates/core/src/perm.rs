//! Permutations and words over `1..=n`.
//!
//! Positions and letters are 1-indexed in every public interface: the letter
//! `3` means the third smallest value, and index sets such as deletion sets
//! name positions starting from 1.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Replace the i-th smallest letter(s) of `word` with `i`.
///
/// Repeated letters map to equal ranks, so the result is a permutation only
/// when the input letters are distinct.
pub fn reduce(word: &[u8]) -> Vec<u8> {
    let mut sorted: Vec<u8> = word.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    word.iter()
        .map(|w| sorted.binary_search(w).unwrap() as u8 + 1)
        .collect()
}

pub fn order_isomorphic(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..i).all(|j| a[j].cmp(&a[i]) == b[j].cmp(&b[i])))
}

/// Delete the positions in `positions` (1-indexed) from a word with distinct
/// letters and subtract from each survivor the number of deleted letters
/// below it.
pub fn delete_word(word: &[u8], positions: &[usize]) -> Result<Vec<u8>> {
    for &r in positions {
        if r == 0 || r > word.len() {
            return Err(Error::IndexOutOfRange {
                index: r,
                len: word.len(),
            });
        }
    }
    let removed: Vec<u8> = positions.iter().map(|&r| word[r - 1]).collect();
    Ok(word
        .iter()
        .enumerate()
        .filter(|(i, _)| !positions.contains(&(i + 1)))
        .map(|(_, &w)| w - removed.iter().filter(|&&d| d < w).count() as u8)
        .collect())
}

/// A permutation of `1..=n`, stored as its one-line notation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u8).collect())
    }

    /// Build from one-line notation; the letters must be exactly `1..=n`.
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        let n = letters.len();
        let mut seen = vec![false; n + 1];
        for &l in &letters {
            let l = l as usize;
            if l == 0 || l > n || seen[l] {
                return Err(Error::InvalidWord(format!(
                    "{letters:?} is not a permutation of 1..={n}"
                )));
            }
            seen[l] = true;
        }
        Ok(Permutation(letters))
    }

    /// The reduction of a word with distinct letters.
    pub fn from_word(word: &[u8]) -> Result<Self> {
        let r = reduce(word);
        let mut check = r.clone();
        check.sort_unstable();
        check.dedup();
        if check.len() != word.len() {
            return Err(Error::InvalidWord(format!("{word:?} has repeated letters")));
        }
        Ok(Permutation(r))
    }

    pub(crate) fn from_reduced(letters: Vec<u8>) -> Self {
        debug_assert!(Permutation::new(letters.clone()).is_ok());
        Permutation(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Letter at 1-indexed position `i`.
    pub fn at(&self, i: usize) -> u8 {
        self.0[i - 1]
    }

    pub fn reverse(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Self {
        let n = self.len() as u8 + 1;
        Permutation(self.0.iter().map(|&l| n - l).collect())
    }

    pub fn inversions(&self) -> usize {
        let w = &self.0;
        (0..w.len())
            .map(|j| (0..j).filter(|&i| w[i] > w[j]).count())
            .sum()
    }

    /// `d_R`: delete the given 1-indexed positions and reduce.
    pub fn delete(&self, positions: &[usize]) -> Result<Self> {
        delete_word(&self.0, positions).map(Permutation)
    }

    /// The `n + 1` permutations whose first `n` letters reduce to `self`,
    /// ordered by the value of the appended letter.
    pub fn children(&self) -> Vec<Permutation> {
        (1..=self.len() as u8 + 1).map(|v| self.child(v)).collect()
    }

    /// The child obtained by appending a letter of rank `value` among the
    /// `n + 1` letters.
    pub fn child(&self, value: u8) -> Permutation {
        let mut letters: Vec<u8> = self
            .0
            .iter()
            .map(|&l| if l >= value { l + 1 } else { l })
            .collect();
        letters.push(value);
        Permutation(letters)
    }

    /// Reduction of the first `k` letters.
    pub fn prefix(&self, k: usize) -> Permutation {
        Permutation(reduce(&self.0[..k]))
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some(Permutation::identity(n));
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let mut w = cur.0.clone();
            if next_permutation(&mut w) {
                next = Some(Permutation(w));
            }
            Some(cur)
        })
    }
}

fn next_permutation(w: &mut [u8]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

impl TryFrom<Vec<u8>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<u8> {
    fn from(p: Permutation) -> Vec<u8> {
        p.0
    }
}

impl std::str::FromStr for Permutation {
    type Err = Error;

    /// Accepts `"312"` for single-digit letters or a comma/space separated list.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "ε" {
            return Ok(Permutation::empty());
        }
        let letters: Option<Vec<u8>> = if s.contains([',', ' ']) {
            s.split([',', ' '])
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u8>().ok())
                .collect()
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect()
        };
        let letters = letters.ok_or_else(|| Error::InvalidWord(s.to_string()))?;
        Permutation::new(letters)
    }
}

/// Renders a word, concatenating digits when every letter is below 10.
pub(crate) fn fmt_word(f: &mut fmt::Formatter<'_>, word: &[u8]) -> fmt::Result {
    if word.is_empty() {
        return write!(f, "ε");
    }
    let sep = if word.iter().all(|&l| l < 10) { "" } else { "," };
    for (i, l) in word.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_word(f, &self.0)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
