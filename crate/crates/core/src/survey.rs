//! Symmetry-class surveys of scheme discovery and empirical Wilf classes.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::eval;
use crate::pattern::{all_patterns, PatternSet, VincularPattern, NULL};
use crate::perm::Permutation;
use crate::scheme::{discover_with_reverse, DiscoveryParams, Variant};

/// Set types surveyed without the slow flag.
pub const DEFAULT_SET_TYPES: [&[usize]; 6] = [&[2], &[2, 2], &[2, 3], &[3], &[3, 3], &[4]];

pub const DEFAULT_CLASSIFY_N: usize = 15;

/// `B`, `B^r`, `B^c` and `B^rc`.
pub fn orbit(patterns: &PatternSet) -> [PatternSet; 4] {
    let r = patterns.reverse();
    let c = patterns.complement();
    let rc = r.complement();
    [patterns.clone(), r, c, rc]
}

/// The member of the orbit with the least pattern string.
pub fn representative(patterns: &PatternSet) -> PatternSet {
    orbit(patterns)
        .into_iter()
        .min_by_key(|b| b.to_string())
        .unwrap()
}

/// Block type up to reversal: the larger of the two readings.
pub fn canonical_block_type(pattern: &VincularPattern) -> Vec<usize> {
    let bt = pattern.block_type();
    let rev: Vec<usize> = bt.iter().rev().copied().collect();
    bt.max(rev)
}

/// The pattern's letters with a NULL at each dash.
fn dashed_word(pattern: &VincularPattern) -> Vec<u8> {
    let letters = pattern.perm().letters();
    let mut word = Vec::with_capacity(2 * letters.len());
    for (j, &l) in letters.iter().enumerate() {
        if j > 0 && !pattern.is_adjacent(j) {
            word.push(NULL);
        }
        word.push(l);
    }
    word
}

/// Longest permutations inspected when deciding implication.
pub const IMPLICATION_HORIZON: usize = 8;

/// Containment tables for a fixed list of patterns over all permutations
/// of length at most `horizon`.
struct Containment {
    patterns: Vec<VincularPattern>,
    table: Vec<Vec<bool>>,
}

impl Containment {
    fn new(patterns: Vec<VincularPattern>, horizon: usize) -> Self {
        let perms: Vec<Permutation> = (1..=horizon).flat_map(Permutation::all).collect();
        let table = patterns
            .par_iter()
            .map(|p| perms.iter().map(|pi| p.occurs_in(pi.letters())).collect())
            .collect();
        Containment { patterns, table }
    }

    fn index(&self, p: &VincularPattern) -> usize {
        self.patterns.iter().position(|q| q == p).unwrap()
    }

    /// Every inspected permutation containing `tau` also contains `sigma`.
    fn implies(&self, sigma: &VincularPattern, tau: &VincularPattern) -> bool {
        let (s, t) = (&self.table[self.index(sigma)], &self.table[self.index(tau)]);
        s.iter().zip(t).all(|(&a, &b)| a || !b)
    }
}

/// True if every copy of `sigma` already contains a copy of `tau`.
pub fn implies(sigma: &VincularPattern, tau: &VincularPattern) -> bool {
    tau.occurs_in(&dashed_word(sigma))
}

/// True if avoiding `sigma` forces avoiding `tau` on every permutation of
/// length at most `horizon`.
pub fn implies_upto(sigma: &VincularPattern, tau: &VincularPattern, horizon: usize) -> bool {
    implies(sigma, tau)
        || Containment::new(vec![sigma.clone(), tau.clone()], horizon).implies(sigma, tau)
}

/// No member is implied by another: by a copy of it for any two members,
/// and on permutations of length at most `horizon` for members of equal length.
pub fn is_irredundant(patterns: &PatternSet, horizon: usize) -> bool {
    let v: Vec<&VincularPattern> = patterns.iter().collect();
    v.iter().enumerate().all(|(i, a)| {
        v.iter().enumerate().all(|(j, b)| {
            i == j
                || !(implies(b, a) || (a.len() == b.len() && implies_upto(b, a, horizon)))
        })
    })
}

fn horizon(set_type: &[usize]) -> usize {
    (2 * set_type.iter().max().copied().unwrap_or(0)).min(IMPLICATION_HORIZON)
}

/// Symmetry-class representatives of irredundant sets of the given set type.
pub fn set_classes(set_type: &[usize]) -> Vec<PatternSet> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &k in set_type {
        *counts.entry(k).or_default() += 1;
    }
    let all: Vec<VincularPattern> = counts
        .iter()
        .filter(|&(_, &m)| m > 1)
        .flat_map(|(&k, _)| all_patterns(k))
        .collect();
    let table = Containment::new(all, horizon(set_type));
    let choices: Vec<Vec<Vec<VincularPattern>>> = counts
        .iter()
        .map(|(&k, &m)| all_patterns(k).into_iter().combinations(m).collect())
        .collect();
    let mut reps = BTreeSet::new();
    for pick in choices.into_iter().multi_cartesian_product() {
        let v: Vec<VincularPattern> = pick.into_iter().flatten().collect();
        let redundant = v.iter().enumerate().any(|(i, a)| {
            v.iter()
                .enumerate()
                .any(|(j, b)| i != j && (implies(b, a) || (a.len() == b.len() && table.implies(b, a))))
        });
        if !redundant {
            reps.insert(Keyed(representative(&PatternSet::new(v))));
        }
    }
    reps.into_iter().map(|k| k.0).collect()
}

/// Orders sets by their pattern string.
#[derive(PartialEq, Eq)]
struct Keyed(PatternSet);

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.to_string().cmp(&other.0.to_string())
    }
}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn serialize_set<S: Serializer>(set: &PatternSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&set.to_string())
}

fn serialize_sets<S: Serializer>(sets: &[PatternSet], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(sets.iter().map(|b| b.to_string()))
}

fn serialize_counts<S: Serializer>(seq: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(seq.iter().map(|c| c.to_string()))
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassOutcome {
    #[serde(serialize_with = "serialize_set")]
    pub representative: PatternSet,
    /// `None` when neither the set nor its reverse has a scheme.
    pub variant: Option<Variant>,
    pub depth: Option<usize>,
}

impl ClassOutcome {
    pub fn succeeded(&self) -> bool {
        self.variant.is_some()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyRow {
    pub descriptor: String,
    pub classes_total: usize,
    pub classes_successful: usize,
    pub outcomes: Vec<ClassOutcome>,
}

impl SurveyRow {
    fn from_outcomes(descriptor: String, outcomes: Vec<ClassOutcome>) -> Self {
        SurveyRow {
            descriptor,
            classes_total: outcomes.len(),
            classes_successful: outcomes.iter().filter(|o| o.succeeded()).count(),
            outcomes,
        }
    }

    pub fn percentage(&self) -> f64 {
        if self.classes_total == 0 {
            return 0.0;
        }
        100.0 * self.classes_successful as f64 / self.classes_total as f64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub max_depth: usize,
    pub max_gap_norm: u32,
    pub rows: Vec<SurveyRow>,
}

impl SurveyReport {
    pub fn row(&self, descriptor: &str) -> Option<&SurveyRow> {
        self.rows.iter().find(|r| r.descriptor == descriptor)
    }
}

impl fmt::Display for SurveyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "({},{})-SC", self.max_depth, self.max_gap_norm)?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<12} {:>6} {:>6} {:>6.1}%",
                r.descriptor,
                r.classes_total,
                r.classes_successful,
                r.percentage()
            )?;
        }
        Ok(())
    }
}

fn run_classes(classes: Vec<PatternSet>, params: DiscoveryParams) -> Vec<ClassOutcome> {
    classes
        .into_par_iter()
        .map(|b| match discover_with_reverse(&b, params) {
            Ok((variant, scheme)) => ClassOutcome {
                depth: Some(scheme.depth()),
                variant: Some(variant),
                representative: b,
            },
            Err(_) => ClassOutcome {
                representative: b,
                variant: None,
                depth: None,
            },
        })
        .collect()
}

fn tuple(v: &[usize]) -> String {
    format!("({})", v.iter().join(","))
}

/// One row per block type (up to reversal) of the single patterns of length `k`.
pub fn survey_patterns(k: usize, params: DiscoveryParams) -> Result<SurveyReport> {
    if !(1..=4).contains(&k) {
        return Err(Error::Budget(format!("single-pattern survey supports lengths 1 to 4, got {k}")));
    }
    let mut by_type: BTreeMap<Reverse<Vec<usize>>, BTreeSet<Keyed>> = BTreeMap::new();
    for p in all_patterns(k) {
        by_type
            .entry(Reverse(canonical_block_type(&p)))
            .or_default()
            .insert(Keyed(representative(&PatternSet::new([p]))));
    }
    let rows = by_type
        .into_iter()
        .map(|(Reverse(bt), reps)| {
            let classes = reps.into_iter().map(|k| k.0).collect();
            SurveyRow::from_outcomes(tuple(&bt), run_classes(classes, params))
        })
        .collect();
    Ok(SurveyReport {
        max_depth: params.max_depth,
        max_gap_norm: params.max_gap_norm,
        rows,
    })
}

/// One row for the sets of the given set type; larger types need `slow`.
pub fn survey_sets(set_type: &[usize], params: DiscoveryParams, slow: bool) -> Result<SurveyReport> {
    let mut set_type = set_type.to_vec();
    set_type.sort_unstable();
    if set_type.is_empty() || set_type.iter().any(|&k| k == 0 || k > 9) {
        return Err(Error::Budget(format!("unsupported set type {}", tuple(&set_type))));
    }
    if !slow && !DEFAULT_SET_TYPES.contains(&set_type.as_slice()) {
        return Err(Error::Budget(format!(
            "set type {{{}}} is long-running; enable the slow mode",
            set_type.iter().join(",")
        )));
    }
    let outcomes = run_classes(set_classes(&set_type), params);
    Ok(SurveyReport {
        max_depth: params.max_depth,
        max_gap_norm: params.max_gap_norm,
        rows: vec![SurveyRow::from_outcomes(
            format!("{{{}}}", set_type.iter().join(",")),
            outcomes,
        )],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WilfGroup {
    #[serde(serialize_with = "serialize_sets")]
    pub members: Vec<PatternSet>,
    #[serde(serialize_with = "serialize_counts")]
    pub sequence: Vec<BigUint>,
}

/// First `n` at which two groups' counts differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub first: usize,
    pub second: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct WilfClassReport {
    pub n_max: usize,
    pub groups: Vec<WilfGroup>,
    pub witnesses: Vec<Witness>,
    #[serde(serialize_with = "serialize_sets")]
    pub unclassifiable: Vec<PatternSet>,
}

impl WilfClassReport {
    pub fn group_of(&self, patterns: &PatternSet) -> Option<usize> {
        self.groups.iter().position(|g| g.members.contains(patterns))
    }

    pub fn witness(&self, a: usize, b: usize) -> Option<usize> {
        let (first, second) = (a.min(b), a.max(b));
        self.witnesses
            .iter()
            .find(|w| w.first == first && w.second == second)
            .map(|w| w.n)
    }

    pub fn max_witness(&self) -> Option<usize> {
        self.witnesses.iter().map(|w| w.n).max()
    }
}

impl fmt::Display for WilfClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.groups.iter().enumerate() {
            writeln!(
                f,
                "[{i}] {}: {}",
                g.members.iter().join(" | "),
                g.sequence.iter().join(",")
            )?;
        }
        for w in &self.witnesses {
            writeln!(f, "[{}] vs [{}]: n = {}", w.first, w.second, w.n)?;
        }
        if !self.unclassifiable.is_empty() {
            writeln!(f, "unclassifiable: {}", self.unclassifiable.iter().join(" | "))?;
        }
        Ok(())
    }
}

/// Partition the inputs by their counting sequences for `n = 1..=n_max`.
pub fn classify(patterns: &[PatternSet], params: DiscoveryParams, n_max: usize) -> WilfClassReport {
    let sequences: Vec<Option<Vec<BigUint>>> = patterns
        .par_iter()
        .map(|b| {
            let (_, scheme) = discover_with_reverse(b, params).ok()?;
            eval::sequence(&scheme, n_max).ok()
        })
        .collect();
    let mut groups: Vec<WilfGroup> = Vec::new();
    let mut unclassifiable = Vec::new();
    for (b, seq) in patterns.iter().zip(sequences) {
        match seq {
            None => unclassifiable.push(b.clone()),
            Some(seq) => match groups.iter_mut().find(|g| g.sequence == seq) {
                Some(g) => {
                    if !g.members.contains(b) {
                        g.members.push(b.clone())
                    }
                }
                None => groups.push(WilfGroup {
                    members: vec![b.clone()],
                    sequence: seq,
                }),
            },
        }
    }
    let witnesses = (0..groups.len())
        .tuple_combinations()
        .map(|(a, b)| {
            let i = groups[a]
                .sequence
                .iter()
                .zip(&groups[b].sequence)
                .position(|(x, y)| x != y)
                .unwrap();
            Witness {
                first: a,
                second: b,
                n: i + 1,
            }
        })
        .collect();
    WilfClassReport {
        n_max,
        groups,
        witnesses,
        unclassifiable,
    }
}
