//! Finite words over the two-letter alphabet `{a, b}`.
//!
//! Internally `a` is `0` and `b` is `1`; both glyph sets are accepted when
//! parsing and either can be chosen when rendering.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

/// Glyph set used when rendering words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Glyphs {
    #[default]
    Letters,
    Digits,
}

impl Letter {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a' | '0' => Ok(Letter::A),
            'b' | '1' => Ok(Letter::B),
            other => Err(Error::InvalidLetter(other)),
        }
    }

    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Letter::A
        } else {
            Letter::B
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn glyph(self, glyphs: Glyphs) -> char {
        match (self, glyphs) {
            (Letter::A, Glyphs::Letters) => 'a',
            (Letter::B, Glyphs::Letters) => 'b',
            (Letter::A, Glyphs::Digits) => '0',
            (Letter::B, Glyphs::Digits) => '1',
        }
    }
}

/// A finite word over `{a, b}`, possibly empty.
///
/// The derived `Ord` is the lexicographic order with `a < b` in which a proper
/// prefix is smaller, i.e. the same order as [`lex_cmp`].
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinaryWord(Vec<Letter>);

impl BinaryWord {
    pub fn empty() -> Self {
        BinaryWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        BinaryWord(letters)
    }

    /// Word with `count` copies of `letter`.
    pub fn power(letter: Letter, count: usize) -> Self {
        BinaryWord(vec![letter; count])
    }

    /// The `index`-th word of length `len` in lexicographic order.
    pub fn from_index(index: u64, len: usize) -> Self {
        BinaryWord(
            (0..len)
                .map(|i| Letter::from_bit(((index >> (len - 1 - i)) & 1) as u8))
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn count_a(&self) -> usize {
        self.count(Letter::A)
    }

    pub fn count_b(&self) -> usize {
        self.count(Letter::B)
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &BinaryWord) -> BinaryWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        BinaryWord(letters)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn with_prefix(&self, letter: Letter) -> BinaryWord {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(letter);
        letters.extend_from_slice(&self.0);
        BinaryWord(letters)
    }

    pub fn with_suffix(&self, letter: Letter) -> BinaryWord {
        let mut w = self.clone();
        w.push(letter);
        w
    }

    pub fn slice(&self, start: usize, end: usize) -> BinaryWord {
        BinaryWord(self.0[start..end].to_vec())
    }

    pub fn prefix(&self, len: usize) -> BinaryWord {
        self.slice(0, len)
    }

    pub fn is_prefix_of(&self, other: &BinaryWord) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn reversal(&self) -> BinaryWord {
        reversal(self)
    }

    pub fn render(&self, glyphs: Glyphs) -> String {
        self.0.iter().map(|l| l.glyph(glyphs)).collect()
    }

    /// Letter at cyclic position `i` of the periodic sequence `^∞w^∞`.
    pub fn cyclic_at(&self, i: i64) -> Letter {
        let p = self.len() as i64;
        self.0[i.rem_euclid(p) as usize]
    }
}

impl From<Vec<Letter>> for BinaryWord {
    fn from(letters: Vec<Letter>) -> Self {
        BinaryWord(letters)
    }
}

impl FromIterator<Letter> for BinaryWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        BinaryWord(iter.into_iter().collect())
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    /// Accepts `a`/`b` and `0`/`1` (mixed is fine). `ε`, `e` and `-` denote the
    /// empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" || s == "e" || s == "-" {
            return Ok(BinaryWord::empty());
        }
        s.chars().map(Letter::from_char).collect()
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        f.write_str(&self.render(Glyphs::Letters))
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.render(Glyphs::Letters))
    }
}

/// All words of length `len`, in lexicographic order.
pub fn all_words(len: usize) -> impl Iterator<Item = BinaryWord> {
    (0..(1u64 << len)).map(move |i| BinaryWord::from_index(i, len))
}

/// All words of length at most `max_len`, in radix order.
pub fn all_words_up_to(max_len: usize) -> impl Iterator<Item = BinaryWord> {
    (0..=max_len).flat_map(all_words)
}

pub fn reversal(w: &BinaryWord) -> BinaryWord {
    BinaryWord(w.0.iter().rev().copied().collect())
}

pub fn lex_cmp(u: &BinaryWord, v: &BinaryWord) -> Ordering {
    u.0.cmp(&v.0)
}

/// Shorter words first, then lexicographic.
pub fn radix_cmp(u: &BinaryWord, v: &BinaryWord) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| lex_cmp(u, v))
}

/// Length-`n` factors of `w`, lex-sorted.
pub fn factors(w: &BinaryWord, n: usize) -> BTreeSet<BinaryWord> {
    if n > w.len() {
        return BTreeSet::new();
    }
    (0..=w.len() - n).map(|i| w.slice(i, i + n)).collect()
}

/// Length-`n` factors of the periodic sequence `^∞w^∞`.
pub fn cyclic_factors(w: &BinaryWord, n: usize) -> BTreeSet<BinaryWord> {
    (0..w.len() as i64)
        .map(|start| (0..n as i64).map(|k| w.cyclic_at(start + k)).collect())
        .collect()
}

/// True iff the `letter`-counts over the family differ by at most one.
pub fn is_balanced_family<'a, I>(family: I, letter: Letter) -> Result<bool>
where
    I: IntoIterator<Item = &'a BinaryWord>,
{
    let mut len = None;
    let mut lo = usize::MAX;
    let mut hi = 0;
    for w in family {
        match len {
            None => len = Some(w.len()),
            Some(l) if l != w.len() => return Err(Error::HeterogeneousLengths),
            Some(_) => {}
        }
        let c = w.count(letter);
        lo = lo.min(c);
        hi = hi.max(c);
    }
    Ok(len.is_none() || hi - lo <= 1)
}

/// Counts of `a` in every cyclic window of length `n` of `^∞w^∞`.
fn cyclic_window_counts(w: &BinaryWord, n: usize) -> impl Iterator<Item = usize> + '_ {
    let p = w.len();
    let mut prefix = vec![0usize; p * (n / p + 2) + 1];
    for i in 0..prefix.len() - 1 {
        prefix[i + 1] = prefix[i] + usize::from(w.0[i % p] == Letter::A);
    }
    (0..p).map(move |start| prefix[start + n] - prefix[start])
}

/// Whether `^∞w^∞` is balanced up to factor length `max_n`.
pub fn is_balanced_periodic_up_to(w: &BinaryWord, max_n: usize) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    // b-counts are n minus a-counts, so checking `a` covers both letters
    Ok((1..=max_n).all(|n| {
        let (lo, hi) =
            cyclic_window_counts(w, n).fold((usize::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
        hi - lo <= 1
    }))
}

/// Whether the periodic sequence `^∞w^∞` is balanced.
///
/// Factor lengths up to `|w|` are checked.
pub fn is_balanced_periodic(w: &BinaryWord) -> Result<bool> {
    is_balanced_periodic_up_to(w, w.len())
}

/// Whether `^∞w^∞` has the Markoff property.
///
/// For each occurrence of `xy` with `x != y` at positions `(i, i+1)`, the letters
/// at mirrored positions `i-1-j` and `i+2+j` are compared outward. Either they
/// never differ (the two sides are mirror images), or at the first mismatch the
/// left letter is `y` and the right letter is `x`. The mirrored pair sequence
/// is `|w|`-periodic in `j`, so the scan stays inside a window of `4|w|` letters.
pub fn has_markoff_property_periodic(w: &BinaryWord) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let p = w.len() as i64;
    for i in 0..p {
        let x = w.cyclic_at(i);
        let y = w.cyclic_at(i + 1);
        if x == y {
            continue;
        }
        for j in 0..2 * p - 1 {
            let left = w.cyclic_at(i - 1 - j);
            let right = w.cyclic_at(i + 2 + j);
            if left != right {
                if left != y || right != x {
                    return Ok(false);
                }
                break;
            }
        }
    }
    Ok(true)
}

/// The lower Christoffel word with `a_count` letters `a` and `b_count` letters `b`.
///
/// Returns `None` unless the counts are coprime (the single letters `a` and `b`
/// count as Christoffel words).
pub fn lower_christoffel(a_count: usize, b_count: usize) -> Option<BinaryWord> {
    let n = a_count + b_count;
    if n == 0 || num_integer::gcd(a_count, b_count) != 1 {
        return None;
    }
    Some(
        (0..n)
            .map(|k| Letter::from_bit(((k + 1) * b_count / n - k * b_count / n) as u8))
            .collect(),
    )
}

pub fn is_christoffel(w: &BinaryWord) -> bool {
    lower_christoffel(w.count_a(), w.count_b()).as_ref() == Some(w)
}

/// All lower Christoffel words of length `1..=max_len`, in radix order.
pub fn christoffel_words_up_to(max_len: usize) -> Vec<BinaryWord> {
    let mut out: Vec<BinaryWord> = (1..=max_len)
        .flat_map(|n| (0..=n).filter_map(move |b| lower_christoffel(n - b, b)))
        .collect();
    out.sort_by(radix_cmp);
    out
}
