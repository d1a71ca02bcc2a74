//! Brute-force enumeration of pattern avoiders.
//!
//! This is the reference every scheme is checked against, so it keeps its
//! own containment test: a depth-first walk that appends one letter at a
//! time and rejects a branch as soon as some copy ends at the new letter,
//! found by trying every subset of earlier positions.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::pattern::{PatternSet, VincularPattern};
use crate::perm::{reduce, Permutation};
use crate::qpoly::QPolynomial;

pub const DEFAULT_ORACLE_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    limit: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            limit: DEFAULT_ORACLE_LIMIT,
        }
    }
}

impl Oracle {
    pub fn new(limit: usize) -> Self {
        Oracle { limit }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.limit {
            return Err(Error::OracleLimit {
                n,
                limit: self.limit,
            });
        }
        Ok(())
    }

    /// `S_n(B)` in lexicographic order.
    pub fn avoiders(&self, patterns: &PatternSet, n: usize) -> Result<Vec<Permutation>> {
        self.avoiders_with_prefix(patterns, n, &[])
    }

    /// Avoiders of length `n` whose first letters are exactly `prefix`.
    pub fn avoiders_with_prefix(
        &self,
        patterns: &PatternSet,
        n: usize,
        prefix: &[u8],
    ) -> Result<Vec<Permutation>> {
        self.check(n)?;
        let mut out = Vec::new();
        walk(patterns, n, prefix, &mut |w, _| {
            out.push(Permutation::from_reduced(w.to_vec()))
        });
        Ok(out)
    }

    pub fn count(&self, patterns: &PatternSet, n: usize) -> Result<u64> {
        self.count_with_prefix(patterns, n, &[])
    }

    pub fn count_with_prefix(&self, patterns: &PatternSet, n: usize, prefix: &[u8]) -> Result<u64> {
        self.check(n)?;
        let mut count = 0u64;
        walk(patterns, n, prefix, &mut |_, _| count += 1);
        Ok(count)
    }

    pub fn sequence(&self, patterns: &PatternSet, n_max: usize) -> Result<Vec<u64>> {
        (1..=n_max).map(|n| self.count(patterns, n)).collect()
    }

    /// Coefficient `k` counts avoiders of length `n` with `k` inversions.
    pub fn count_by_inversions(&self, patterns: &PatternSet, n: usize) -> Result<QPolynomial> {
        self.check(n)?;
        let mut poly = QPolynomial::zero();
        walk(patterns, n, &[], &mut |_, inv| poly.add_at(inv, 1));
        Ok(poly)
    }
}

/// Visit every avoider of length `n` starting with `prefix`, in
/// lexicographic order, along with its inversion number.
fn walk(patterns: &PatternSet, n: usize, prefix: &[u8], visit: &mut impl FnMut(&[u8], usize)) {
    let pats: Vec<&VincularPattern> = patterns.iter().collect();
    if prefix.len() > n || prefix.iter().any(|&l| l == 0 || l as usize > n) {
        return;
    }
    let mut used = vec![false; n + 1];
    let mut word = Vec::with_capacity(n);
    let mut inv = 0;
    for &l in prefix {
        if used[l as usize] {
            return;
        }
        inv += word.iter().filter(|&&w| w > l).count();
        used[l as usize] = true;
        word.push(l);
        if copy_ends_at_last(&pats, &word) {
            return;
        }
    }
    descend(&pats, n, &mut word, &mut used, inv, visit);
}

fn descend(
    pats: &[&VincularPattern],
    n: usize,
    word: &mut Vec<u8>,
    used: &mut [bool],
    inv: usize,
    visit: &mut impl FnMut(&[u8], usize),
) {
    if word.len() == n {
        visit(word, inv);
        return;
    }
    for v in 1..=n as u8 {
        if used[v as usize] {
            continue;
        }
        let added = word.iter().filter(|&&w| w > v).count();
        word.push(v);
        if !copy_ends_at_last(pats, word) {
            used[v as usize] = true;
            descend(pats, n, word, used, inv + added, visit);
            used[v as usize] = false;
        }
        word.pop();
    }
}

fn copy_ends_at_last(pats: &[&VincularPattern], word: &[u8]) -> bool {
    let last = word.len() - 1;
    pats.iter().any(|pat| {
        let k = pat.len();
        let sigma = pat.perm().letters();
        let adj = pat.adjacencies();
        k <= word.len()
            && (0..last).combinations(k - 1).any(|mut idx| {
                idx.push(last);
                adj.iter().all(|&x| idx[x] == idx[x - 1] + 1)
                    && reduce(&idx.iter().map(|&i| word[i]).collect::<Vec<_>>()) == sigma
            })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_filtered_avoiders() {
        let got: Vec<String> = Oracle::default()
            .avoiders_with_prefix(&set("1-2-3"), 5, &[5, 3])
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(got, vec!["53142", "53214", "53241", "53412", "53421"]);
    }

    #[test]
    fn small_cases() {
        let o = Oracle::default();
        assert_eq!(o.avoiders(&set("12"), 0).unwrap(), vec![Permutation::empty()]);
        assert_eq!(o.count(&set("23-1"), 4).unwrap(), 15);
        assert_eq!(o.sequence(&set("1-2-3"), 6).unwrap(), vec![1, 2, 5, 14, 42, 132]);
        assert_eq!(o.sequence(&set("123"), 6).unwrap(), vec![1, 2, 5, 17, 70, 349]);
        assert!(o.count(&set("12"), 11).is_err());
        let all = o.avoiders(&set("2-3-1"), 5).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn agrees_with_filtering_every_permutation() {
        let o = Oracle::default();
        for b in ["1-32", "23-1", "12-3, 3-21", "1-24-3", "2413"] {
            let b = set(b);
            for n in 0..=6 {
                let expect: Vec<Permutation> =
                    Permutation::all(n).filter(|p| b.avoided_by(p)).collect();
                assert_eq!(o.avoiders(&b, n).unwrap(), expect);
            }
        }
    }

    #[test]
    fn inversion_counts() {
        let o = Oracle::default();
        let b = set("1-32");
        assert_eq!(o.count_by_inversions(&b, 4).unwrap(), QPolynomial::from_coefficients([1, 1, 2, 4, 3, 3, 1]));
        assert_eq!(
            o.count_by_inversions(&b, 5).unwrap(),
            QPolynomial::from_coefficients([1, 1, 2, 4, 7, 8, 9, 9, 6, 4, 1])
        );
        assert_eq!(o.count_by_inversions(&set("12"), 1).unwrap(), QPolynomial::one());
    }

    #[test]
    fn prefix_counts_partition() {
        let o = Oracle::default();
        let b = set("124-3, 21-3");
        for n in 3..=6 {
            for p in Permutation::all(2) {
                for w in (1..=n as u8).permutations(2).filter(|w| reduce(w) == p.letters()) {
                    let here = o.count_with_prefix(&b, n, &w).unwrap();
                    let split: u64 = (1..=n as u8)
                        .filter(|v| !w.contains(v))
                        .map(|v| o.count_with_prefix(&b, n, &[w[0], w[1], v]).unwrap())
                        .sum();
                    assert_eq!(here, split);
                }
            }
        }
    }
}
