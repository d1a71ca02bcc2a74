//! Counting with a scheme.
//!
//! A state is a prefix pattern together with the spacing vector of its
//! prefix word. Three rules apply in order: a spacing vector above a basis
//! vector counts zero, a deletion set moves to the reduced prefix with the
//! affected spacing components merged, and otherwise the next letter is
//! inserted into every non-empty gap.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::perm::{delete_word, Permutation};
use crate::qpoly::QPolynomial;
use crate::scheme::{Scheme, SchemeTriple, Variant};

/// Counts carried through the recurrence; `shift(k)` multiplies by `q^k`.
trait Weight: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&mut self, other: &Self);
    fn shift(&self, k: usize) -> Self;
}

impl Weight for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&mut self, other: &Self) {
        *self += other;
    }
    fn shift(&self, _: usize) -> Self {
        self.clone()
    }
}

impl Weight for QPolynomial {
    fn zero() -> Self {
        QPolynomial::zero()
    }
    fn one() -> Self {
        QPolynomial::one()
    }
    fn add(&mut self, other: &Self) {
        *self += other;
    }
    fn shift(&self, k: usize) -> Self {
        self.shifted(k)
    }
}

struct Evaluator<'a, W> {
    scheme: &'a Scheme,
    memo: HashMap<(Permutation, Vec<u32>), W>,
}

impl<'a, W: Weight> Evaluator<'a, W> {
    fn new(scheme: &'a Scheme) -> Result<Self> {
        scheme.validate()?;
        Ok(Evaluator {
            scheme,
            memo: HashMap::new(),
        })
    }

    fn triple(&self, p: &Permutation) -> Result<&'a SchemeTriple> {
        self.scheme
            .get(p)
            .ok_or_else(|| Error::InvalidScheme(format!("no triple for reachable prefix {p}")))
    }

    fn total(&mut self, n: usize) -> Result<W> {
        self.state(&Permutation::empty(), vec![n as u32])
    }

    /// Weighted count of avoiders whose prefix word has pattern `p` and
    /// spacing `g`; the exponent tracks inversions not inside the prefix.
    fn state(&mut self, p: &Permutation, g: Vec<u32>) -> Result<W> {
        let key = (p.clone(), g);
        if let Some(w) = self.memo.get(&key) {
            return Ok(w.clone());
        }
        let (p, g) = (&key.0, &key.1);
        let value = if g.iter().all(|&c| c == 0) {
            if self.scheme.patterns().avoided_by(p) {
                W::one()
            } else {
                W::zero()
            }
        } else {
            let t = self.triple(p)?;
            if t.gap_basis.is_satisfied_by_raw(g) {
                W::zero()
            } else if !t.rd.is_empty() {
                let q = p.delete(&t.rd)?;
                let mut ranks: Vec<usize> = t.rd.iter().map(|&r| p.at(r) as usize).collect();
                let below: usize = ranks
                    .iter()
                    .map(|&rho| g[..rho].iter().sum::<u32>() as usize)
                    .sum();
                ranks.sort_unstable_by(|a, b| b.cmp(a));
                let mut merged = g.clone();
                for rho in ranks {
                    let right = merged.remove(rho);
                    merged[rho - 1] += right;
                }
                self.state(&q, merged)?.shift(below)
            } else {
                let k = p.len();
                let mut sum = W::zero();
                for i in 0..=k {
                    if g[i] == 0 {
                        continue;
                    }
                    let child = p.child(i as u8 + 1);
                    for a in 0..g[i] {
                        let mut h = Vec::with_capacity(k + 2);
                        h.extend_from_slice(&g[..i]);
                        h.push(a);
                        h.push(g[i] - 1 - a);
                        h.extend_from_slice(&g[i + 1..]);
                        let w = self.state(&child, h)?;
                        sum.add(&w.shift(k - i));
                    }
                }
                sum
            }
        };
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

/// `s_n(B)` for the scheme's pattern set.
pub fn count(scheme: &Scheme, n: usize) -> Result<BigUint> {
    Evaluator::<BigUint>::new(scheme)?.total(n)
}

/// `s_1(B), …, s_{n_max}(B)` sharing one memo table.
pub fn sequence(scheme: &Scheme, n_max: usize) -> Result<Vec<BigUint>> {
    let mut ev = Evaluator::<BigUint>::new(scheme)?;
    (1..=n_max).map(|n| ev.total(n)).collect()
}

/// Avoiders of length `n` counted by inversion number.
pub fn count_by_inversions(scheme: &Scheme, n: usize) -> Result<QPolynomial> {
    Evaluator::<QPolynomial>::new(scheme)?.total(n)
}

/// Rows `n = 1..=n_max` of the inversion triangle.
pub fn inversion_triangle(scheme: &Scheme, n_max: usize) -> Result<Vec<QPolynomial>> {
    let mut ev = Evaluator::<QPolynomial>::new(scheme)?;
    (1..=n_max).map(|n| ev.total(n)).collect()
}

/// Inversion polynomials for the set a scheme of the given variant was
/// requested for; a scheme for `B^r` counts non-inversions of `B`-avoiders.
pub fn inversion_triangle_as(scheme: &Scheme, variant: Variant, n_max: usize) -> Result<Vec<QPolynomial>> {
    let rows = inversion_triangle(scheme, n_max)?;
    Ok(match variant {
        Variant::Original => rows,
        Variant::Reverse => rows
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.reflected((i + 1) * i / 2))
            .collect(),
    })
}

/// `inv(π) − inv(d_R(π))` for any `π ∈ S_n` starting with the word `w`.
pub fn inversion_increment(w: &[u8], n: usize, positions: &[usize]) -> Result<usize> {
    crate::gap::spacing_vector(n, w)?;
    if let Some(&r) = positions.iter().find(|&&r| r == 0 || r > w.len()) {
        return Err(Error::IndexOutOfRange { index: r, len: w.len() });
    }
    let deleted = |i: usize| positions.contains(&(i + 1));
    let mut inside = 0;
    for j in 0..w.len() {
        for i in 0..j {
            if (deleted(i) || deleted(j)) && w[i] > w[j] {
                inside += 1;
            }
        }
    }
    let suffix: usize = positions
        .iter()
        .map(|&r| {
            let x = w[r - 1];
            (x as usize - 1) - w.iter().filter(|&&y| y < x).count()
        })
        .sum();
    Ok(inside + suffix)
}

/// The same recurrence keyed by `(n, prefix word)` instead of spacing
/// vectors. Slower; kept as a cross-check.
pub fn count_by_words(scheme: &Scheme, n: usize) -> Result<BigUint> {
    scheme.validate()?;
    let mut memo = HashMap::new();
    word_state(scheme, n, Vec::new(), &mut memo)
}

fn word_state(
    scheme: &Scheme,
    n: usize,
    w: Vec<u8>,
    memo: &mut HashMap<(usize, Vec<u8>), BigUint>,
) -> Result<BigUint> {
    if let Some(v) = memo.get(&(n, w.clone())) {
        return Ok(v.clone());
    }
    let p = Permutation::from_word(&w)?;
    let value = if w.len() == n {
        if scheme.patterns().avoided_by(&p) {
            <BigUint as One>::one()
        } else {
            <BigUint as Zero>::zero()
        }
    } else {
        let t = scheme
            .get(&p)
            .ok_or_else(|| Error::InvalidScheme(format!("no triple for reachable prefix {p}")))?;
        if t.gap_basis.is_satisfied_by(&crate::gap::spacing_vector(n, &w)?) {
            <BigUint as Zero>::zero()
        } else if !t.rd.is_empty() {
            word_state(scheme, n - t.rd.len(), delete_word(&w, &t.rd)?, memo)?
        } else {
            let mut sum = <BigUint as Zero>::zero();
            for v in 1..=n as u8 {
                if !w.contains(&v) {
                    let mut next = w.clone();
                    next.push(v);
                    sum += word_state(scheme, n, next, memo)?;
                }
            }
            sum
        }
    };
    memo.insert((n, w), value.clone());
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Oracle;
    use crate::pattern::PatternSet;
    use crate::perm::reduce;
    use crate::scheme::{discover, guaranteed_scheme, DiscoveryParams};
    use itertools::Itertools;

    fn set(s: &str) -> PatternSet {
        s.parse().unwrap()
    }

    fn scheme(s: &str) -> Scheme {
        discover(&set(s), DiscoveryParams::default()).unwrap()
    }

    fn nums(v: Vec<BigUint>) -> Vec<u64> {
        v.into_iter().map(|x| u64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn bell_numbers() {
        let s = scheme("23-1");
        assert_eq!(nums(sequence(&s, 10).unwrap()), [1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]);
        assert_eq!(count(&s, 0).unwrap(), <BigUint as One>::one());
    }

    #[test]
    fn short_sequences() {
        assert_eq!(nums(sequence(&scheme("123-4"), 7).unwrap()), [1, 2, 6, 23, 108, 598, 3815]);
        assert_eq!(nums(sequence(&scheme("1-24-3"), 7).unwrap()), [1, 2, 6, 23, 104, 532, 3004]);
        assert_eq!(nums(sequence(&scheme("12"), 1).unwrap()), [1]);
    }

    #[test]
    fn inversion_rows() {
        let s = scheme("1-32");
        assert_eq!(count_by_inversions(&s, 4).unwrap(), QPolynomial::from_coefficients([1, 1, 2, 4, 3, 3, 1]));
        assert_eq!(
            count_by_inversions(&s, 5).unwrap(),
            QPolynomial::from_coefficients([1, 1, 2, 4, 7, 8, 9, 9, 6, 4, 1])
        );
        let limits: Vec<u64> = (0..10)
            .map(|k| u64::try_from(count_by_inversions(&s, k + 1).unwrap().coefficient(k)).unwrap())
            .collect();
        assert_eq!(limits, [1, 1, 2, 4, 7, 13, 22, 38, 63, 105]);
    }

    #[test]
    fn coefficients_stagnate() {
        let rows = inversion_triangle(&scheme("1-32"), 10).unwrap();
        for k in 0..=6 {
            let stable = rows[k].coefficient(k);
            for n in k + 1..=10 {
                assert_eq!(rows[n - 1].coefficient(k), stable, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn increment_examples() {
        assert_eq!(inversion_increment(&[3, 1], 4, &[1]).unwrap(), 2);
        assert_eq!(inversion_increment(&[3, 1], 4, &[]).unwrap(), 0);
        assert_eq!(inversion_increment(&[1, 2], 6, &[1]).unwrap(), 0);
        assert!(inversion_increment(&[3, 1], 4, &[3]).is_err());
        assert!(inversion_increment(&[5, 1], 4, &[1]).is_err());
    }

    #[test]
    fn increment_matches_brute_force() {
        for n in 1..=6 {
            for pi in Permutation::all(n) {
                for k in 0..=n.min(3) {
                    let w = &pi.letters()[..k];
                    for r in (1..=k).powerset() {
                        let d = Permutation::from_word(&delete_word(pi.letters(), &r).unwrap()).unwrap();
                        assert_eq!(inversion_increment(w, n, &r).unwrap(), pi.inversions() - d.inversions());
                    }
                }
            }
        }
    }

    const CORPUS: &[&str] = &[
        "23-1", "1-32", "1-2-3", "123", "132-4", "2-41-3", "12-34", "3-21, 32-1", "21-3, 321", "124-3, 123-4-5",
        "1-23-4", "12-3-4", "214-3",
    ];

    #[test]
    fn matches_the_oracle() {
        let oracle = Oracle::default();
        for b in CORPUS {
            let bs = set(b);
            let Ok(s) = discover(&bs, DiscoveryParams::default()) else {
                continue;
            };
            for n in 0..=8 {
                assert_eq!(count(&s, n).unwrap(), BigUint::from(oracle.count(&bs, n).unwrap()), "{b} n={n}");
                assert_eq!(count_by_words(&s, n).unwrap(), count(&s, n).unwrap(), "{b} n={n}");
            }
            for n in 0..=7 {
                assert_eq!(count_by_inversions(&s, n).unwrap(), oracle.count_by_inversions(&bs, n).unwrap(), "{b}");
            }
        }
    }

    #[test]
    fn reverse_schemes_reflect_inversions() {
        let b = set("2-3-1");
        let (variant, s) = crate::scheme::discover_with_reverse(&b, DiscoveryParams::default()).unwrap();
        assert_eq!(variant, Variant::Reverse);
        let rows = inversion_triangle_as(&s, variant, 7).unwrap();
        for n in 1..=7 {
            assert_eq!(rows[n - 1], Oracle::default().count_by_inversions(&b, n).unwrap());
        }
    }

    #[test]
    fn q_at_one_is_the_count() {
        for b in ["1-32", "23-1", "12-34"] {
            let s = scheme(b);
            let rows = inversion_triangle(&s, 10).unwrap();
            let plain = sequence(&s, 10).unwrap();
            for (row, c) in rows.iter().zip(plain) {
                assert_eq!(row.eval_one(), c);
            }
        }
    }

    #[test]
    fn guaranteed_schemes_count_correctly() {
        let oracle = Oracle::default();
        for b in ["12-3", "123", "21-3, 321", "132-4"] {
            let bs = set(b);
            let s = guaranteed_scheme(&bs).unwrap();
            for n in 0..=8 {
                assert_eq!(count(&s, n).unwrap(), BigUint::from(oracle.count(&bs, n).unwrap()), "{b} n={n}");
            }
        }
    }

    /// Prefix words with the same pattern and spacing vector have the same
    /// number of avoiders.
    #[test]
    fn spacing_determines_counts() {
        let oracle = Oracle::default();
        for b in CORPUS {
            let b = set(b);
            for k in 1..=3 {
                for n in k..=7 {
                    let mut seen: HashMap<(Vec<u8>, Vec<u32>), u64> = HashMap::new();
                    for w in (1..=n as u8).permutations(k) {
                        let g = crate::gap::spacing_vector(n, &w).unwrap();
                        let c = oracle.count_with_prefix(&b, n, &w).unwrap();
                        let prev = *seen.entry((reduce(&w), g.components().to_vec())).or_insert(c);
                        assert_eq!(prev, c, "{b} {w:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_scheme_diverges() {
        let s = scheme("23-1");
        let mut doc: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        doc["triples"][2]["gap_basis"] = serde_json::json!([]);
        let bad = Scheme::from_json(&doc.to_string()).unwrap();
        assert!(bad.is_valid());
        assert_ne!(nums(sequence(&bad, 5).unwrap()), [1, 2, 5, 15, 52]);
        let mut doc: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        doc["triples"].as_array_mut().unwrap().remove(3);
        let broken = Scheme::from_json(&doc.to_string()).unwrap();
        assert!(count(&broken, 3).is_err());
    }
}
