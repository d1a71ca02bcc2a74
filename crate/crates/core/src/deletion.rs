//! Containment scenarios and reversibly deletable index sets.
//!
//! A scenario is a prefix followed by just enough extra letters to complete
//! a forbidden copy that uses at least one prefix letter. A null symbol
//! (`0`, printed `◊`) marks a place where further letters may sit; it never
//! takes part in a copy and it breaks adjacency.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gap::{gap_basis, spacing_vector, GapBasis};
use crate::pattern::{PatternSet, VincularPattern, NULL};
use crate::perm::{reduce, Permutation};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScenarioWord {
    symbols: Vec<u8>,
    prefix_len: usize,
}

impl ScenarioWord {
    /// Non-null letters must be distinct and form `1..=n`; the first
    /// `prefix_len` symbols must be letters.
    pub fn new(symbols: Vec<u8>, prefix_len: usize) -> Result<Self> {
        if prefix_len > symbols.len() || symbols[..prefix_len].contains(&NULL) {
            return Err(Error::InvalidWord(format!(
                "{symbols:?} has no null-free prefix of length {prefix_len}"
            )));
        }
        let letters: Vec<u8> = symbols.iter().copied().filter(|&s| s != NULL).collect();
        if Permutation::new(letters).is_err() {
            return Err(Error::InvalidWord(format!("{symbols:?} letters are not 1..=n")));
        }
        Ok(ScenarioWord {
            symbols,
            prefix_len,
        })
    }

    /// Parse digits with `◊` (or `0`, `*`) for the null symbol.
    pub fn parse(s: &str, prefix_len: usize) -> Result<Self> {
        let symbols: Option<Vec<u8>> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '◊' | '*' => Some(NULL),
                c => c.to_digit(10).map(|d| d as u8),
            })
            .collect();
        let symbols = symbols.ok_or_else(|| Error::InvalidWord(s.to_string()))?;
        ScenarioWord::new(symbols, prefix_len)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn prefix(&self) -> &[u8] {
        &self.symbols[..self.prefix_len]
    }

    /// Number of non-null symbols.
    pub fn ambient(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != NULL).count()
    }

    fn fails_criteria(&self, basis: &GapBasis) -> bool {
        let g = spacing_vector(self.ambient(), self.prefix()).expect("scenario prefix is valid");
        !basis.is_satisfied_by(&g)
    }
}

impl fmt::Display for ScenarioWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.symbols.iter().any(|&s| s >= 10);
        for (i, &s) in self.symbols.iter().enumerate() {
            if wide && i > 0 {
                f.write_str(",")?;
            }
            if s == NULL {
                f.write_str("◊")?;
            } else {
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ScenarioWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Index sets `i_1 < … < i_t` (1-indexed, `t ≥ 1`) of `p` that respect the
/// adjacencies of `pat` and reduce to `σ_1 … σ_t`.
pub fn partial_matches(p: &Permutation, pat: &VincularPattern) -> Vec<Vec<usize>> {
    let sigma = pat.perm().letters();
    let mut out = Vec::new();
    for t in 1..=p.len().min(pat.len()) {
        let head = reduce(&sigma[..t]);
        for idx in (1..=p.len()).combinations(t) {
            let adjacent = (1..t).all(|x| !pat.is_adjacent(x) || idx[x] == idx[x - 1] + 1);
            if adjacent && reduce(&idx.iter().map(|&i| p.at(i)).collect_vec()) == head {
                out.push(idx);
            }
        }
    }
    out
}

/// Scenario words for one pattern and one partial match, before gap filtering.
fn complete_match(p: &Permutation, pat: &VincularPattern, m: &[usize], out: &mut BTreeSet<ScenarioWord>) {
    let k = p.len();
    let ell = pat.len();
    let t = m.len();
    if t < ell && pat.is_adjacent(t) && m[t - 1] != k {
        return;
    }
    let sigma = pat.perm().letters();
    let appended = &sigma[t..];
    let r = appended.len();
    let mut by_value: Vec<usize> = (0..r).collect();
    by_value.sort_by_key(|&i| appended[i]);
    // `below[q]` counts prefix letters under the q-th smallest appended letter.
    for below in (0..=k).combinations_with_replacement(r) {
        let prefix_vals: Vec<u8> = p
            .letters()
            .iter()
            .map(|&rho| rho + below.iter().filter(|&&b| b < rho as usize).count() as u8)
            .collect();
        let mut app_vals = vec![0u8; r];
        for (q, &i) in by_value.iter().enumerate() {
            app_vals[i] = (q + 1 + below[q]) as u8;
        }
        let copy: Vec<u8> = m.iter().map(|&i| prefix_vals[i - 1]).chain(app_vals.iter().copied()).collect();
        if reduce(&copy) != sigma {
            continue;
        }
        let mut symbols = prefix_vals;
        if t < ell && !pat.is_adjacent(t) {
            symbols.push(NULL);
        }
        for (i, &v) in app_vals.iter().enumerate() {
            symbols.push(v);
            let j = t + i + 1;
            if j < ell && !pat.is_adjacent(j) {
                symbols.push(NULL);
            }
        }
        out.insert(ScenarioWord {
            symbols,
            prefix_len: k,
        });
    }
}

/// Containment scenarios of `p`, dropping those whose prefix satisfies a
/// criterion of `basis`. Sorted and free of duplicates.
pub fn scenarios(p: &Permutation, patterns: &PatternSet, basis: &GapBasis) -> Vec<ScenarioWord> {
    all_scenarios(p, patterns)
        .into_iter()
        .filter(|w| w.fails_criteria(basis))
        .collect()
}

fn all_scenarios(p: &Permutation, patterns: &PatternSet) -> Vec<ScenarioWord> {
    let mut all = BTreeSet::new();
    for pat in patterns.iter() {
        for m in partial_matches(p, pat) {
            complete_match(p, pat, &m, &mut all);
        }
    }
    all.into_iter().collect()
}

/// `d_R` on a scenario word: drop prefix positions in `R`, renumber the
/// remaining letters, keep nulls in place.
pub fn scenario_delete(w: &ScenarioWord, positions: &[usize]) -> Result<ScenarioWord> {
    if let Some(&r) = positions.iter().find(|&&r| r == 0 || r > w.prefix_len) {
        return Err(Error::IndexOutOfRange {
            index: r,
            len: w.prefix_len,
        });
    }
    let removed: Vec<u8> = positions.iter().map(|&r| w.symbols[r - 1]).collect();
    let symbols = w
        .symbols
        .iter()
        .enumerate()
        .filter(|(i, _)| !positions.contains(&(i + 1)))
        .map(|(_, &s)| {
            if s == NULL {
                NULL
            } else {
                s - removed.iter().filter(|&&d| d < s).count() as u8
            }
        })
        .collect();
    let dropped = positions.iter().collect::<BTreeSet<_>>().len();
    Ok(ScenarioWord {
        symbols,
        prefix_len: w.prefix_len - dropped,
    })
}

pub fn scenario_contains(w: &ScenarioWord, patterns: &PatternSet) -> bool {
    patterns.occurs_in(&w.symbols)
}

/// Words `w` with prefix reducing to `p` and nulls where `s` has them such
/// that deleting positions `R` from `w` gives `s`. One word per value pattern.
pub fn preimages(s: &ScenarioWord, p: &Permutation, positions: &[usize]) -> Vec<ScenarioWord> {
    let k = p.len();
    let deleted: BTreeSet<usize> = positions.iter().copied().collect();
    if deleted.iter().any(|&r| r == 0 || r > k) || s.prefix_len + deleted.len() != k {
        return Vec::new();
    }
    let kept: Vec<usize> = (1..=k).filter(|i| !deleted.contains(i)).collect();
    if reduce(s.prefix()) != reduce(&kept.iter().map(|&i| p.at(i)).collect_vec()) {
        return Vec::new();
    }
    let mut suffix: Vec<u8> = s.symbols[s.prefix_len..].iter().copied().filter(|&x| x != NULL).collect();
    suffix.sort_unstable();
    let total = suffix.len();

    // fixed[ρ] = number of suffix letters below the prefix letter of rank ρ.
    let mut fixed: Vec<Option<usize>> = vec![None; k + 1];
    for (j, &i) in kept.iter().enumerate() {
        let letter = s.symbols[j];
        fixed[p.at(i) as usize] = Some(suffix.iter().filter(|&&x| x < letter).count());
    }

    let mut out = Vec::new();
    let mut below = vec![0usize; k + 1];
    fill_below(1, 0, k, total, &fixed, &mut below, &mut |below| {
        let value = |rho: u8| rho + below[rho as usize] as u8;
        let mut symbols: Vec<u8> = p.letters().iter().map(|&rho| value(rho)).collect();
        for &x in &s.symbols[s.prefix_len..] {
            if x == NULL {
                symbols.push(NULL);
            } else {
                let j = suffix.binary_search(&x).unwrap() + 1;
                let under = (1..=k).filter(|&rho| below[rho] < j).count();
                symbols.push((j + under) as u8);
            }
        }
        out.push(ScenarioWord {
            symbols,
            prefix_len: k,
        });
    });
    out
}

fn fill_below(
    rho: usize,
    floor: usize,
    k: usize,
    total: usize,
    fixed: &[Option<usize>],
    below: &mut [usize],
    emit: &mut impl FnMut(&[usize]),
) {
    if rho > k {
        emit(below);
        return;
    }
    match fixed[rho] {
        Some(b) => {
            if b >= floor {
                below[rho] = b;
                fill_below(rho + 1, b, k, total, fixed, below, emit);
            }
        }
        None => {
            for b in floor..=total {
                below[rho] = b;
                fill_below(rho + 1, b, k, total, fixed, below, emit);
            }
        }
    }
}

/// Shared state for one discovery run over a fixed pattern set and norm
/// bound: caches gap bases and scenario sets by prefix.
pub struct Session {
    patterns: PatternSet,
    max_norm: u32,
    bases: Mutex<HashMap<Permutation, GapBasis>>,
    scenarios: Mutex<HashMap<Permutation, Arc<Vec<ScenarioWord>>>>,
    unfiltered: Mutex<HashMap<Permutation, Arc<Vec<ScenarioWord>>>>,
}

impl Session {
    pub fn new(patterns: PatternSet, max_norm: u32) -> Self {
        Session {
            patterns,
            max_norm,
            bases: Mutex::default(),
            scenarios: Mutex::default(),
            unfiltered: Mutex::default(),
        }
    }

    pub fn patterns(&self) -> &PatternSet {
        &self.patterns
    }

    pub fn max_norm(&self) -> u32 {
        self.max_norm
    }

    pub fn basis(&self, p: &Permutation) -> GapBasis {
        if let Some(b) = self.bases.lock().unwrap().get(p) {
            return b.clone();
        }
        let b = gap_basis(p, &self.patterns, self.max_norm);
        self.bases.lock().unwrap().insert(p.clone(), b.clone());
        b
    }

    pub fn scenarios(&self, p: &Permutation) -> Arc<Vec<ScenarioWord>> {
        if let Some(s) = self.scenarios.lock().unwrap().get(p) {
            return s.clone();
        }
        let basis = self.basis(p);
        let s: Vec<ScenarioWord> = self
            .unfiltered_scenarios(p)
            .iter()
            .filter(|w| w.fails_criteria(&basis))
            .cloned()
            .collect();
        let s = Arc::new(s);
        self.scenarios.lock().unwrap().insert(p.clone(), s.clone());
        s
    }

    /// Scenarios of `p` with no gap filtering.
    pub fn unfiltered_scenarios(&self, p: &Permutation) -> Arc<Vec<ScenarioWord>> {
        if let Some(s) = self.unfiltered.lock().unwrap().get(p) {
            return s.clone();
        }
        let s = Arc::new(all_scenarios(p, &self.patterns));
        self.unfiltered.lock().unwrap().insert(p.clone(), s.clone());
        s
    }

    /// Both scenario tests for deleting positions `R` from prefix `p`.
    pub fn is_reversibly_deletable(&self, p: &Permutation, positions: &[usize]) -> bool {
        let Ok(q) = p.delete(positions) else {
            return false;
        };
        let b = &self.patterns;
        let first = self.scenarios(p).iter().all(|w| {
            scenario_delete(w, positions).is_ok_and(|d| scenario_contains(&d, b))
        });
        if !first {
            return false;
        }
        let basis = self.basis(p);
        self.unfiltered_scenarios(&q).iter().all(|s| {
            preimages(s, p, positions)
                .iter()
                .all(|w| !w.fails_criteria(&basis) || scenario_contains(w, b))
        })
    }

    /// Largest reversibly deletable set, ties broken lexicographically.
    pub fn find_rd_set(&self, p: &Permutation) -> Option<Vec<usize>> {
        let k = p.len();
        (1..=k)
            .rev()
            .flat_map(|size| (1..=k).combinations(size))
            .find(|r| self.is_reversibly_deletable(p, r))
    }
}

/// One-off form of [`Session::is_reversibly_deletable`]; `basis` must be the
/// gap basis of `p` at norm bound `max_norm`.
pub fn is_reversibly_deletable(
    positions: &[usize],
    p: &Permutation,
    patterns: &PatternSet,
    basis: &GapBasis,
    max_norm: u32,
) -> bool {
    let session = Session::new(patterns.clone(), max_norm);
    session.bases.lock().unwrap().insert(p.clone(), basis.clone());
    session.is_reversibly_deletable(p, positions)
}

pub fn find_rd_set(p: &Permutation, patterns: &PatternSet, basis: &GapBasis, max_norm: u32) -> Option<Vec<usize>> {
    let session = Session::new(patterns.clone(), max_norm);
    session.bases.lock().unwrap().insert(p.clone(), basis.clone());
    session.find_rd_set(p)
}
