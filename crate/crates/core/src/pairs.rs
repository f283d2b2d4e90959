//! Patterns and indistinguishable asymptotic pairs.
//!
//! Two biinfinite sequences form an asymptotic pair when they differ on a finite
//! difference set. The pair is indistinguishable when every finite pattern
//! gains as many occurrences as it loses when passing from one to the other.
//!
//! Occurrence counts are exact: a pattern with support `S` can only change
//! status at shifts `n` with `(n + S) ∩ F ≠ ∅`, a finite set.
//!
//! [`is_indistinguishable_up_to`] checks contiguous patterns only. Counts over an
//! arbitrary finite support are sums of counts of the contiguous patterns on its
//! convex hull, so contiguous supports suffice. [`is_indistinguishable_exhaustive`]
//! enumerates arbitrary supports for cross-validation at small radius.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::{BalancedSpec, SpecSequence};
use crate::words::{BinaryWord, Letter};

/// A finite partial assignment `S → {a, b}` with `S ⊂ ℤ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pattern {
    assignment: BTreeMap<i64, Letter>,
}

impl Pattern {
    pub fn empty() -> Self {
        Pattern::default()
    }

    pub fn from_assignment(assignment: BTreeMap<i64, Letter>) -> Self {
        Pattern { assignment }
    }

    /// `word` laid out contiguously from `offset`.
    pub fn contiguous(offset: i64, word: &BinaryWord) -> Self {
        Pattern {
            assignment: word
                .letters()
                .iter()
                .enumerate()
                .map(|(i, &l)| (offset + i as i64, l))
                .collect(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.assignment.keys().copied()
    }

    pub fn assignment(&self) -> &BTreeMap<i64, Letter> {
        &self.assignment
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn shifted(&self, k: i64) -> Self {
        Pattern {
            assignment: self.assignment.iter().map(|(&i, &l)| (i + k, l)).collect(),
        }
    }

    /// Whether `seq` restricted to `n + S` equals the pattern.
    pub fn occurs_at(&self, seq: &Sequence, n: i64) -> bool {
        self.assignment
            .iter()
            .all(|(&i, &l)| seq.letter_at(n + i) == l)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .assignment
            .iter()
            .map(|(i, l)| format!("{i}:{}", l.glyph(crate::words::Glyphs::Letters)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// A spec-backed sequence, translated and with finitely many letters flipped:
/// `seq(i) = base(i − shift)`, complemented when `i ∈ flips`.
#[derive(Debug, Clone)]
pub struct Sequence {
    base: Arc<SpecSequence>,
    shift: i64,
    flips: BTreeSet<i64>,
}

impl Sequence {
    pub fn new(spec: BalancedSpec) -> Self {
        Sequence {
            base: Arc::new(SpecSequence::new(spec)),
            shift: 0,
            flips: BTreeSet::new(),
        }
    }

    pub fn spec(&self) -> &BalancedSpec {
        self.base.spec()
    }

    pub fn letter_at(&self, i: i64) -> Letter {
        let letter = self.base.letter_at(i - self.shift);
        if self.flips.contains(&i) {
            letter.other()
        } else {
            letter
        }
    }

    pub fn window(&self, lo: i64, hi: i64) -> BinaryWord {
        (lo..hi).map(|i| self.letter_at(i)).collect()
    }

    /// `i ↦ seq(i − k)`
    pub fn shifted(&self, k: i64) -> Self {
        Sequence {
            base: Arc::clone(&self.base),
            shift: self.shift + k,
            flips: self.flips.iter().map(|i| i + k).collect(),
        }
    }

    pub fn with_flips(&self, positions: impl IntoIterator<Item = i64>) -> Self {
        let mut flips = self.flips.clone();
        for p in positions {
            if !flips.remove(&p) {
                flips.insert(p);
            }
        }
        Sequence {
            base: Arc::clone(&self.base),
            shift: self.shift,
            flips,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AsymptoticPair {
    pub s: Sequence,
    pub t: Sequence,
    pub difference_set: BTreeSet<i64>,
}

impl AsymptoticPair {
    pub fn new(s: Sequence, t: Sequence, difference_set: BTreeSet<i64>) -> Self {
        AsymptoticPair {
            s,
            t,
            difference_set,
        }
    }

    pub fn swapped(&self) -> Self {
        AsymptoticPair {
            s: self.t.clone(),
            t: self.s.clone(),
            difference_set: self.difference_set.clone(),
        }
    }

    pub fn shifted(&self, k: i64) -> Self {
        AsymptoticPair {
            s: self.s.shifted(k),
            t: self.t.shifted(k),
            difference_set: self.difference_set.iter().map(|i| i + k).collect(),
        }
    }

    /// Whether `s` and `t` differ exactly on the difference set within `margin`
    /// of it.
    pub fn difference_set_holds(&self, margin: i64) -> bool {
        let (Some(&lo), Some(&hi)) = (self.difference_set.first(), self.difference_set.last())
        else {
            return true;
        };
        (lo - margin..=hi + margin).all(|i| {
            (self.s.letter_at(i) != self.t.letter_at(i)) == self.difference_set.contains(&i)
        })
    }
}

/// The pair `(p̃·x.y·p, p̃·y.x·p)` with difference set `{n0 − 1, n0}`.
pub fn build_pair(spec: &BalancedSpec, n0: i64) -> Result<AsymptoticPair> {
    let offset = spec.central_offset().ok_or(Error::NoCentralFactorization)?;
    let s = Sequence::new(spec.clone()).shifted(n0 - offset);
    let t = s.with_flips([n0 - 1, n0]);
    Ok(AsymptoticPair::new(s, t, BTreeSet::from([n0 - 1, n0])))
}

/// The sequence of `spec` against itself with the letter at `position` flipped.
pub fn single_flip_pair(spec: &BalancedSpec, position: i64) -> AsymptoticPair {
    let s = Sequence::new(spec.clone());
    let t = s.with_flips([position]);
    AsymptoticPair::new(s, t, BTreeSet::from([position]))
}

/// `(#(occ_p(s) ∖ occ_p(t)), #(occ_p(t) ∖ occ_p(s)))`
pub fn occ_diff(pair: &AsymptoticPair, pattern: &Pattern) -> (usize, usize) {
    let shifts: BTreeSet<i64> = pair
        .difference_set
        .iter()
        .flat_map(|&d| pattern.support().map(move |i| d - i))
        .collect();
    shifts.into_iter().fold((0, 0), |(s_only, t_only), n| {
        match (pattern.occurs_at(&pair.s, n), pattern.occurs_at(&pair.t, n)) {
            (true, false) => (s_only + 1, t_only),
            (false, true) => (s_only, t_only + 1),
            _ => (s_only, t_only),
        }
    })
}

/// A pattern with its counts `(#(occ(s) ∖ occ(t)), #(occ(t) ∖ occ(s)))`.
pub type Witness = (String, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndistinguishabilityReport {
    pub radius: usize,
    pub patterns_checked: usize,
    pub passed: bool,
    /// First unbalanced pattern with its two counts.
    pub witness: Option<Witness>,
}

impl fmt::Display for IndistinguishabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "radius: {}", self.radius)?;
        writeln!(f, "patterns checked: {}", self.patterns_checked)?;
        if let Some((pattern, s_only, t_only)) = &self.witness {
            writeln!(f, "witness: {pattern} gains {s_only}, loses {t_only}")?;
        }
        write!(f, "result: {}", if self.passed { "pass" } else { "fail" })
    }
}

/// Patterns with support `offsets` read off `s` or `t` at shifts touching the
/// difference set.
fn touching_patterns(pair: &AsymptoticPair, offsets: &[i64]) -> BTreeSet<Pattern> {
    let shifts: BTreeSet<i64> = pair
        .difference_set
        .iter()
        .flat_map(|&d| offsets.iter().map(move |&i| d - i))
        .collect();
    shifts
        .into_iter()
        .flat_map(|n| {
            [&pair.s, &pair.t].map(|seq| {
                Pattern::from_assignment(
                    offsets.iter().map(|&i| (i, seq.letter_at(n + i))).collect(),
                )
            })
        })
        .collect()
}

fn check_supports(
    pair: &AsymptoticPair,
    radius: usize,
    supports: Vec<Vec<i64>>,
) -> IndistinguishabilityReport {
    let per_support: Vec<(usize, Option<Witness>)> = supports
        .par_iter()
        .map(|offsets| {
            let patterns = touching_patterns(pair, offsets);
            let witness = patterns.iter().find_map(|p| {
                let (s_only, t_only) = occ_diff(pair, p);
                (s_only != t_only).then(|| (p.to_string(), s_only, t_only))
            });
            (patterns.len(), witness)
        })
        .collect();
    let patterns_checked = per_support.iter().map(|(n, _)| n).sum();
    let witness = per_support.into_iter().find_map(|(_, w)| w);
    IndistinguishabilityReport {
        radius,
        patterns_checked,
        passed: witness.is_none(),
        witness,
    }
}

/// Contiguous supports of width `1..=radius`, plus the full window `[−radius, radius]`.
pub fn indistinguishability_report(
    pair: &AsymptoticPair,
    radius: usize,
) -> Result<IndistinguishabilityReport> {
    if radius == 0 {
        return Err(Error::InvalidArgument("radius must be >= 1".into()));
    }
    let r = radius as i64;
    let mut supports: Vec<Vec<i64>> = (1..=r).map(|width| (0..width).collect()).collect();
    supports.push((-r..=r).collect());
    Ok(check_supports(pair, radius, supports))
}

pub fn is_indistinguishable_up_to(pair: &AsymptoticPair, radius: usize) -> Result<bool> {
    Ok(indistinguishability_report(pair, radius)?.passed)
}

/// Every nonempty support inside `[−radius, radius]`, up to translation.
pub fn exhaustive_report(
    pair: &AsymptoticPair,
    radius: usize,
) -> Result<IndistinguishabilityReport> {
    if radius == 0 || radius > 6 {
        return Err(Error::InvalidArgument(
            "exhaustive check takes 1 <= radius <= 6".into(),
        ));
    }
    let width = 2 * radius + 1;
    let supports = (1u32..1 << width)
        .filter(|mask| mask & 1 == 1)
        .map(|mask| (0..width as i64).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    Ok(check_supports(pair, radius, supports))
}

pub fn is_indistinguishable_exhaustive(pair: &AsymptoticPair, radius: usize) -> Result<bool> {
    Ok(exhaustive_report(pair, radius)?.passed)
}
