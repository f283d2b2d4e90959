//! Finite descriptions of biinfinite balanced sequences and their factor
//! languages.
//!
//! Every [`BalancedSpec`] can be sampled at any integer position. Specs that admit a
//! central factorization `p̃·x.y·p` place it with `x` at position `-1` and `y` at
//! position `0`:
//!
//! - `Characteristic(d)`: `c̃·a.b·c` where `c` is the characteristic word of the directive
//! - `Skew(ε, Isolated, xy)`: `⋯xx.yxx⋯`
//! - `Skew(m, Blocks, xy)`: `⋯(ymx)(ymx)(ymy).(xmy)(xmy)⋯`, centered `y.x`
//!
//! Periodic and mechanical specs have no central factorization.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::q_markoff;
use crate::qpoly::IntPolynomial;
use crate::words::{
    cyclic_factors, factors, is_balanced_periodic, is_christoffel, radix_cmp, BinaryWord, Glyphs,
    Letter,
};

/// Window radius used by [`classify`].
pub const CLASSIFY_RADIUS: i64 = 64;

/// Parses `P/Q`, a decimal such as `0.01`, or an integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    s.parse::<BigInt>()
        .map(BigRational::from_integer)
        .map_err(|_| bad())
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MechanicalKind {
    Lower,
    Upper,
}

/// Slope and intercept of a mechanical sequence; `rho` is kept in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MechanicalSpec {
    alpha: BigRational,
    rho: BigRational,
    kind: MechanicalKind,
}

impl MechanicalSpec {
    pub fn new(alpha: BigRational, rho: BigRational, kind: MechanicalKind) -> Result<Self> {
        if alpha.is_negative() || alpha > BigRational::one() {
            return Err(Error::InvalidSpec(format!(
                "slope {} outside [0, 1]",
                render_rational(&alpha)
            )));
        }
        let rho = &rho - rho.floor();
        Ok(MechanicalSpec { alpha, rho, kind })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn rho(&self) -> &BigRational {
        &self.rho
    }

    pub fn kind(&self) -> MechanicalKind {
        self.kind
    }

    /// Period of the sequence, the reduced denominator of the slope.
    pub fn period(&self) -> usize {
        self.alpha.denom().to_usize().unwrap_or(usize::MAX)
    }
}

/// Letter at `pos`: `⌊α(n+1)+ρ⌋ − ⌊αn+ρ⌋` (lower) or the ceiling analog (upper).
pub fn mechanical_letter(spec: &MechanicalSpec, pos: i64) -> Letter {
    let n = BigRational::from_integer(pos.into());
    let here = &spec.alpha * &n + &spec.rho;
    let next = &here + &spec.alpha;
    let step = match spec.kind {
        MechanicalKind::Lower => next.floor() - here.floor(),
        MechanicalKind::Upper => next.ceil() - here.ceil(),
    };
    if step.is_zero() {
        Letter::A
    } else {
        Letter::B
    }
}

pub fn mechanical_window(spec: &MechanicalSpec, lo: i64, hi: i64) -> BinaryWord {
    (lo..hi).map(|i| mechanical_letter(spec, i)).collect()
}

/// Prefix of length `len` of the characteristic word driven by `directive`.
///
/// Standard words `s₋₁ = b`, `s₀ = a`, `s_k = s_{k−1}^{d_k} s_{k−2}`, with the
/// directive repeated cyclically. The all-ones directive yields the Fibonacci
/// word `abaababaab…`; in general the density of `b` is `[0; d₁+1, d₂, d₃, …]`.
pub fn characteristic_word(directive: &[u32], len: usize) -> Result<BinaryWord> {
    validate_directive(directive)?;
    let mut older = vec![Letter::B];
    let mut newer = vec![Letter::A];
    let mut k = 0;
    while newer.len() < len {
        let d = directive[k % directive.len()] as usize;
        let mut next = Vec::with_capacity(newer.len() * d + older.len());
        for _ in 0..d {
            next.extend_from_slice(&newer);
        }
        next.extend_from_slice(&older);
        older = std::mem::replace(&mut newer, next);
        k += 1;
    }
    newer.truncate(len);
    Ok(BinaryWord::from_letters(newer))
}

fn validate_directive(directive: &[u32]) -> Result<()> {
    if directive.is_empty() || directive.contains(&0) {
        return Err(Error::InvalidSpec(
            "directive must be a nonempty list of positive integers".into(),
        ));
    }
    Ok(())
}

/// The rational `[0; d₁+1, d₂, …, d_terms]` approximating the slope of a
/// characteristic word.
pub fn directive_slope(directive: &[u32], terms: usize) -> Result<BigRational> {
    validate_directive(directive)?;
    let quotients: Vec<BigInt> = (0..terms.max(1))
        .map(|k| {
            let d = directive[k % directive.len()];
            BigInt::from(if k == 0 { d + 1 } else { d })
        })
        .collect();
    let mut value = BigRational::zero();
    for a in quotients.iter().rev() {
        value = (BigRational::from_integer(a.clone()) + value).recip();
    }
    Ok(value)
}

/// `(w̃·ab·w, w̃·ba·w)`
pub fn compact_representations(prefix: &BinaryWord) -> (BinaryWord, BinaryWord) {
    let left = prefix.reversal();
    let ab = BinaryWord::from_letters(vec![Letter::A, Letter::B]);
    let ba = BinaryWord::from_letters(vec![Letter::B, Letter::A]);
    (
        left.concat(&ab).concat(prefix),
        left.concat(&ba).concat(prefix),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkewForm {
    /// `⋯xxyxx⋯`
    Isolated,
    /// `⋯(ymx)(ymx)(ymy)(xmy)(xmy)⋯`
    Blocks,
}

/// Finite description of a biinfinite balanced sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BalancedSpec {
    Periodic {
        word: BinaryWord,
    },
    Characteristic {
        directive: Vec<u32>,
    },
    Skew {
        m: BinaryWord,
        form: SkewForm,
        x: Letter,
    },
    Mechanical(MechanicalSpec),
}

/// Prefix length of the characteristic word kept for position sampling.
const CHARACTERISTIC_CACHE: usize = 1 << 12;

impl BalancedSpec {
    pub fn periodic(word: BinaryWord) -> Result<Self> {
        if !is_balanced_periodic(&word)? {
            return Err(Error::InvalidSpec(format!(
                "periodic word {word} is not balanced"
            )));
        }
        Ok(BalancedSpec::Periodic { word })
    }

    pub fn characteristic(directive: Vec<u32>) -> Result<Self> {
        validate_directive(&directive)?;
        Ok(BalancedSpec::Characteristic { directive })
    }

    pub fn fibonacci() -> Self {
        BalancedSpec::Characteristic { directive: vec![1] }
    }

    /// Skew sequence; `x` is the first letter of the `xy` orientation.
    pub fn skew(m: BinaryWord, form: SkewForm, x: Letter) -> Result<Self> {
        let amb = m.with_prefix(Letter::A).with_suffix(Letter::B);
        if !is_christoffel(&amb) {
            return Err(Error::InvalidSpec(format!(
                "a·m·b = {amb} is not a Christoffel word"
            )));
        }
        if form == SkewForm::Isolated && !m.is_empty() {
            return Err(Error::InvalidSpec("form xxyxx takes m = ε".into()));
        }
        Ok(BalancedSpec::Skew { m, form, x })
    }

    pub fn mechanical(spec: MechanicalSpec) -> Self {
        BalancedSpec::Mechanical(spec)
    }

    /// Period of the two tails, `None` for aperiodic sequences.
    pub fn period(&self) -> Option<usize> {
        match self {
            BalancedSpec::Periodic { word } => Some(word.len()),
            BalancedSpec::Characteristic { .. } => None,
            BalancedSpec::Skew {
                m,
                form: SkewForm::Blocks,
                ..
            } => Some(m.len() + 2),
            BalancedSpec::Skew {
                form: SkewForm::Isolated,
                ..
            } => Some(1),
            BalancedSpec::Mechanical(spec) => Some(spec.period()),
        }
    }

    /// Position `n0` such that the sequence reads `p̃·x.y·p` with `x` at `n0 − 1`.
    pub fn central_offset(&self) -> Option<i64> {
        match self {
            BalancedSpec::Characteristic { .. } | BalancedSpec::Skew { .. } => Some(0),
            BalancedSpec::Periodic { .. } | BalancedSpec::Mechanical(_) => None,
        }
    }

    /// The right half `p` of the central factorization, truncated to `len`.
    pub fn central_prefix(&self, len: usize) -> Result<BinaryWord> {
        let offset = self.central_offset().ok_or(Error::NoCentralFactorization)?;
        Ok(self.window(offset + 1, offset + 1 + len as i64))
    }

    /// Letters at positions `lo..hi`.
    pub fn window(&self, lo: i64, hi: i64) -> BinaryWord {
        if hi <= lo {
            return BinaryWord::empty();
        }
        let reach = lo.unsigned_abs().max(hi.unsigned_abs()) as usize + 2;
        let sampler = SpecSequence::with_reach(self.clone(), reach);
        (lo..hi).map(|i| sampler.letter_at(i)).collect()
    }

    pub fn letter_at(&self, i: i64) -> Letter {
        SpecSequence::with_reach(self.clone(), i.unsigned_abs() as usize + 2).letter_at(i)
    }
}

impl fmt::Display for BalancedSpec {
    /// Renders the spec in the same grammar [`FromStr`] accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BalancedSpec::Periodic { word } => write!(f, "periodic:{word}"),
            BalancedSpec::Characteristic { directive } if directive == &[1] => {
                f.write_str("fibonacci")
            }
            BalancedSpec::Characteristic { directive } => {
                let parts: Vec<String> = directive.iter().map(u32::to_string).collect();
                write!(f, "characteristic:{}", parts.join(","))
            }
            BalancedSpec::Skew { m, form, x } => {
                let form = match form {
                    SkewForm::Isolated => "xxyxx",
                    SkewForm::Blocks => "blocks",
                };
                let xy = match x {
                    Letter::A => "ab",
                    Letter::B => "ba",
                };
                write!(
                    f,
                    "skew:m={},form={form},xy={xy}",
                    m.render(Glyphs::Letters)
                )
            }
            BalancedSpec::Mechanical(spec) => {
                let kind = match spec.kind {
                    MechanicalKind::Lower => "lower",
                    MechanicalKind::Upper => "upper",
                };
                write!(
                    f,
                    "mechanical:alpha={},rho={},kind={kind}",
                    render_rational(&spec.alpha),
                    render_rational(&spec.rho)
                )
            }
        }
    }
}

fn parse_fields(body: &str) -> Result<Vec<(&str, &str)>> {
    body.split(',')
        .map(|field| {
            field
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::InvalidSpec(format!("expected key=value, got {field:?}")))
        })
        .collect()
}

impl FromStr for BalancedSpec {
    type Err = Error;

    /// Grammar: `periodic:WORD`, `fibonacci`, `characteristic:a1,a2,...`,
    /// `skew:m=WORD,form=xxyxx|blocks,xy=ab|ba`,
    /// `mechanical:alpha=P/Q,rho=P/Q,kind=lower|upper`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, body) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "fibonacci" if body.is_empty() => Ok(BalancedSpec::fibonacci()),
            "periodic" => BalancedSpec::periodic(body.parse()?),
            "characteristic" => {
                let directive = body
                    .split(',')
                    .map(|d| {
                        d.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::InvalidSpec(format!("bad directive entry {d:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                BalancedSpec::characteristic(directive)
            }
            "skew" => {
                let mut m = BinaryWord::empty();
                let mut form = SkewForm::Isolated;
                let mut x = Letter::A;
                for (key, value) in parse_fields(body)? {
                    match key {
                        "m" => m = value.parse()?,
                        "form" => {
                            form = match value {
                                "xxyxx" => SkewForm::Isolated,
                                "blocks" => SkewForm::Blocks,
                                other => {
                                    return Err(Error::InvalidSpec(format!(
                                        "unknown form {other:?}"
                                    )))
                                }
                            }
                        }
                        "xy" => {
                            x = match value {
                                "ab" | "01" => Letter::A,
                                "ba" | "10" => Letter::B,
                                other => {
                                    return Err(Error::InvalidSpec(format!("unknown xy {other:?}")))
                                }
                            }
                        }
                        other => {
                            return Err(Error::InvalidSpec(format!("unknown skew field {other:?}")))
                        }
                    }
                }
                BalancedSpec::skew(m, form, x)
            }
            "mechanical" => {
                let mut alpha = None;
                let mut rho = BigRational::zero();
                let mut kind = MechanicalKind::Lower;
                for (key, value) in parse_fields(body)? {
                    match key {
                        "alpha" => alpha = Some(parse_rational(value)?),
                        "rho" => rho = parse_rational(value)?,
                        "kind" => {
                            kind = match value {
                                "lower" => MechanicalKind::Lower,
                                "upper" => MechanicalKind::Upper,
                                other => {
                                    return Err(Error::InvalidSpec(format!(
                                        "unknown kind {other:?}"
                                    )))
                                }
                            }
                        }
                        other => {
                            return Err(Error::InvalidSpec(format!(
                                "unknown mechanical field {other:?}"
                            )))
                        }
                    }
                }
                let alpha = alpha
                    .ok_or_else(|| Error::InvalidSpec("mechanical spec needs alpha".into()))?;
                Ok(BalancedSpec::Mechanical(MechanicalSpec::new(
                    alpha, rho, kind,
                )?))
            }
            _ => Err(Error::InvalidSpec(format!("unknown spec {s:?}"))),
        }
    }
}

/// Position sampler for a spec, with the characteristic word precomputed.
#[derive(Debug, Clone)]
pub struct SpecSequence {
    spec: BalancedSpec,
    characteristic: Option<BinaryWord>,
}

impl SpecSequence {
    pub fn new(spec: BalancedSpec) -> Self {
        Self::with_reach(spec, CHARACTERISTIC_CACHE)
    }

    fn with_reach(spec: BalancedSpec, reach: usize) -> Self {
        let characteristic = match &spec {
            BalancedSpec::Characteristic { directive } => Some(
                characteristic_word(directive, reach).expect("directive validated at construction"),
            ),
            _ => None,
        };
        SpecSequence {
            spec,
            characteristic,
        }
    }

    pub fn spec(&self) -> &BalancedSpec {
        &self.spec
    }

    pub fn letter_at(&self, i: i64) -> Letter {
        match &self.spec {
            BalancedSpec::Periodic { word } => word.cyclic_at(i),
            BalancedSpec::Characteristic { directive } => {
                let index = match i {
                    -1 => return Letter::A,
                    0 => return Letter::B,
                    i if i > 0 => (i - 1) as usize,
                    i => (-i - 2) as usize,
                };
                let cached = self.characteristic.as_ref().expect("characteristic cache");
                if index < cached.len() {
                    cached.letters()[index]
                } else {
                    characteristic_word(directive, index + 1)
                        .expect("directive validated at construction")
                        .letters()[index]
                }
            }
            BalancedSpec::Skew { m, form, x } => {
                let (x, y) = (*x, x.other());
                match form {
                    SkewForm::Isolated => {
                        if i == 0 {
                            y
                        } else {
                            x
                        }
                    }
                    SkewForm::Blocks => {
                        let len = m.len() as i64 + 2;
                        let (block, offset) = (i.div_euclid(len), i.rem_euclid(len) as usize);
                        let (first, last) = match block {
                            -1 => (y, y),
                            b if b >= 0 => (x, y),
                            _ => (y, x),
                        };
                        match offset {
                            0 => first,
                            o if o == m.len() + 1 => last,
                            o => m.letters()[o - 1],
                        }
                    }
                }
            }
            BalancedSpec::Mechanical(spec) => mechanical_letter(spec, i),
        }
    }
}

/// Length-`n` factors of a spec, lex-sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorLanguage {
    pub n: usize,
    pub factors: Vec<BinaryWord>,
}

pub fn enumerate_factors(spec: &BalancedSpec, n: usize) -> Result<FactorLanguage> {
    if n == 0 {
        return Ok(FactorLanguage {
            n,
            factors: vec![BinaryWord::empty()],
        });
    }
    let set = match spec {
        BalancedSpec::Characteristic { .. } => {
            let w = spec.central_prefix(n - 1)?;
            let (ab, ba) = compact_representations(&w);
            let from_ab = factors(&ab, n);
            let from_ba = factors(&ba, n);
            if from_ab != from_ba {
                return Err(Error::ClassMismatch(format!(
                    "compact representations of length {} disagree",
                    2 * n
                )));
            }
            from_ab
        }
        BalancedSpec::Periodic { word } => cyclic_factors(word, n),
        BalancedSpec::Skew { .. } | BalancedSpec::Mechanical(_) => {
            let period = spec.period().unwrap_or(0) as i64;
            let radius = 2 * n as i64 + period;
            factors(&spec.window(-radius, radius), n)
        }
    };
    Ok(FactorLanguage {
        n,
        factors: set.into_iter().collect(),
    })
}

/// One of the local changes between consecutive factors in radix order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChangeKind {
    /// `ũ·ab·v → ũ·ba·v`
    FlipAbBa { u: BinaryWord, v: BinaryWord },
    /// `w·a → w·b`
    LastLetter,
    /// `b·w → a·w·a`
    WrapAwa,
    /// `b·w → a·w·b`
    WrapAwb,
}

impl fmt::Display for ChangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChangeKind::FlipAbBa { u, v } => write!(f, "flip_ab_ba(u={u},v={v})"),
            ChangeKind::LastLetter => f.write_str("last_letter"),
            ChangeKind::WrapAwa => f.write_str("bw_to_awa"),
            ChangeKind::WrapAwb => f.write_str("bw_to_awb"),
        }
    }
}

/// Recognizes which local change, if any, turns `from` into `to`.
pub fn classify_change(from: &BinaryWord, to: &BinaryWord) -> Option<ChangeKind> {
    let (f, t) = (from.letters(), to.letters());
    if t.len() == f.len() + 1 {
        let (first, rest) = f.split_first()?;
        if *first != Letter::B || t[0] != Letter::A || &t[1..f.len()] != rest {
            return None;
        }
        return Some(match t[f.len()] {
            Letter::A => ChangeKind::WrapAwa,
            Letter::B => ChangeKind::WrapAwb,
        });
    }
    if t.len() != f.len() || f.is_empty() {
        return None;
    }
    let diff: Vec<usize> = (0..f.len()).filter(|&i| f[i] != t[i]).collect();
    match diff.as_slice() {
        [i] if *i == f.len() - 1 && f[*i] == Letter::A => Some(ChangeKind::LastLetter),
        [i, j] if *j == i + 1 && f[*i] == Letter::A && f[*j] == Letter::B => {
            Some(ChangeKind::FlipAbBa {
                u: from.prefix(*i).reversal(),
                v: from.slice(i + 2, f.len()),
            })
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Change {
    pub from: BinaryWord,
    pub to: BinaryWord,
    #[serde(flatten)]
    pub kind: ChangeKind,
}

/// The lex-sorted factors `u₀ < … < u_n` of length `n` linked by their local
/// changes: one `w̃a → w̃b`, the rest `x̃·ab·y → x̃·ba·y` with `x`, `y` prefixes of
/// `w`, where `u₀ = a·w` and `u_n = b·w`.
pub fn flip_permutation(spec: &BalancedSpec, n: usize) -> Result<Vec<Change>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "flip permutation needs n >= 1".into(),
        ));
    }
    let language = enumerate_factors(spec, n)?;
    let words = &language.factors;
    if words.len() != n + 1 {
        return Err(Error::Complexity {
            n,
            expected: n + 1,
            found: words.len(),
        });
    }
    let structure_error = |from: &BinaryWord, to: &BinaryWord| Error::ChangeStructure {
        from: from.clone(),
        to: to.clone(),
    };
    let w = words[0].slice(1, n);
    let (first, last) = (&words[0], &words[n]);
    if first.first() != Some(Letter::A) || *last != w.with_prefix(Letter::B) {
        return Err(structure_error(first, last));
    }
    let w_rev = w.reversal();
    let mut changes = Vec::with_capacity(n);
    let mut last_letter_changes = 0;
    for pair in words.windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        let kind = classify_change(from, to).ok_or_else(|| structure_error(from, to))?;
        match &kind {
            ChangeKind::LastLetter => {
                if *from != w_rev.with_suffix(Letter::A) {
                    return Err(structure_error(from, to));
                }
                last_letter_changes += 1;
            }
            ChangeKind::FlipAbBa { u, v } => {
                if !u.is_prefix_of(&w) || !v.is_prefix_of(&w) {
                    return Err(structure_error(from, to));
                }
            }
            ChangeKind::WrapAwa | ChangeKind::WrapAwb => return Err(structure_error(from, to)),
        }
        changes.push(Change {
            from: from.clone(),
            to: to.clone(),
            kind,
        });
    }
    if last_letter_changes != 1 {
        return Err(structure_error(first, last));
    }
    Ok(changes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub from: BinaryWord,
    pub to: BinaryWord,
    pub kind: Option<ChangeKind>,
    pub difference: IntPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub spec: String,
    pub max_n: usize,
    /// All factors of length `0..=max_n` in radix order, starting with `ε`.
    pub factors: Vec<BinaryWord>,
    pub links: Vec<ChainLink>,
}

/// `q_markoff(to) - q_markoff(from)`, required to be nonzero with nonnegative coefficients.
pub fn check_link(from: &BinaryWord, to: &BinaryWord) -> Result<IntPolynomial> {
    let difference = q_markoff(to) - q_markoff(from);
    if !difference.is_nonneg_nonzero() {
        return Err(Error::NotIncreasing {
            from: from.clone(),
            to: to.clone(),
            difference: difference.to_string(),
        });
    }
    Ok(difference)
}

/// All factors of lengths `0..=max_n`, in radix order.
pub fn radix_sorted_factors(spec: &BalancedSpec, max_n: usize) -> Result<Vec<BinaryWord>> {
    let per_length = (0..=max_n)
        .into_par_iter()
        .map(|n| enumerate_factors(spec, n).map(|l| l.factors))
        .collect::<Result<Vec<_>>>()?;
    let mut all: Vec<BinaryWord> = per_length.into_iter().flatten().collect();
    all.sort_by(radix_cmp);
    Ok(all)
}

/// Walks the maximal radix chain through every factor of length `0..=max_n` and
/// checks that each consecutive `q_markoff` difference is a nonzero polynomial
/// with nonnegative coefficients.
pub fn radix_chain_check(spec: &BalancedSpec, max_n: usize) -> Result<ChainReport> {
    if max_n == 0 {
        return Err(Error::InvalidArgument("max_n must be >= 1".into()));
    }
    let factors = radix_sorted_factors(spec, max_n)?;
    let values: Vec<IntPolynomial> = factors.par_iter().map(q_markoff).collect();
    let links = (1..factors.len())
        .map(|i| {
            let (from, to) = (&factors[i - 1], &factors[i]);
            let difference = &values[i] - &values[i - 1];
            if !difference.is_nonneg_nonzero() {
                return Err(Error::NotIncreasing {
                    from: from.clone(),
                    to: to.clone(),
                    difference: difference.to_string(),
                });
            }
            Ok(ChainLink {
                from: from.clone(),
                to: to.clone(),
                kind: classify_change(from, to),
                difference,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainReport {
        spec: spec.to_string(),
        max_n,
        factors,
        links,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MarkoffClass {
    M1,
    M2,
    M3,
    M4,
}

impl fmt::Display for MarkoffClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Positions `n0` in `[-radius/2, radius/2]` where the window around `n0` reads
/// `p̃·x.y·p` with `|p| = radius`.
pub fn mirror_centers(spec: &BalancedSpec, radius: i64) -> Vec<i64> {
    let half = radius / 2;
    let lo = -half - radius - 1;
    let window = spec.window(lo, half + radius + 1);
    let at = |i: i64| window.letters()[(i - lo) as usize];
    (-half..=half)
        .filter(|&n0| at(n0 - 1) != at(n0) && (1..=radius).all(|k| at(n0 - 1 - k) == at(n0 + k)))
        .collect()
}

/// Class of the declared variant, checked for consistency on a window of
/// radius [`CLASSIFY_RADIUS`].
pub fn classify(spec: &BalancedSpec) -> Result<MarkoffClass> {
    let centers = mirror_centers(spec, CLASSIFY_RADIUS);
    let mismatch = |what: &str| Err(Error::ClassMismatch(format!("{spec}: {what}")));
    match spec {
        BalancedSpec::Periodic { .. } => {
            if centers.is_empty() {
                Ok(MarkoffClass::M1)
            } else {
                mismatch("periodic sequence shows a central factorization")
            }
        }
        BalancedSpec::Characteristic { .. } => {
            if centers.contains(&0) {
                Ok(MarkoffClass::M3)
            } else {
                mismatch("no central factorization at the origin")
            }
        }
        BalancedSpec::Skew { .. } => {
            if centers.len() >= 2 {
                Ok(MarkoffClass::M4)
            } else {
                mismatch("fewer than two central factorizations")
            }
        }
        BalancedSpec::Mechanical(mech) => {
            let visibly_periodic = (mech.period() as i64) <= CLASSIFY_RADIUS;
            match (visibly_periodic, centers.is_empty()) {
                (true, true) => Ok(MarkoffClass::M1),
                (true, false) => mismatch("periodic sequence shows a central factorization"),
                (false, true) => Ok(MarkoffClass::M2),
                (false, false) => Ok(MarkoffClass::M3),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveRow {
    pub word: BinaryWord,
    pub gamma: BigRational,
    pub value: BigRational,
}

/// `(w, γ, q_markoff(w)|_{q=γ})` for every factor with `|w| <= max_len`, grouped by
/// `γ` and in radix order within a group. Values are exact.
pub fn curves_export(
    spec: &BalancedSpec,
    max_len: usize,
    gammas: &[BigRational],
) -> Result<Vec<CurveRow>> {
    if let Some(bad) = gammas.iter().find(|g| !g.is_positive()) {
        return Err(Error::PositivityDomain(bad.to_f64().unwrap_or(f64::NAN)));
    }
    let factors = radix_sorted_factors(spec, max_len)?;
    let polys: Vec<IntPolynomial> = factors.par_iter().map(q_markoff).collect();
    Ok(gammas
        .iter()
        .flat_map(|gamma| {
            factors
                .iter()
                .zip(&polys)
                .map(move |(word, poly)| CurveRow {
                    word: word.clone(),
                    gamma: gamma.clone(),
                    value: poly.eval_rational(gamma),
                })
        })
        .collect())
}

/// Whether values strictly increase along each `γ` group of [`curves_export`].
pub fn curves_strictly_increasing(rows: &[CurveRow]) -> bool {
    rows.windows(2)
        .filter(|pair| pair[0].gamma == pair[1].gamma)
        .all(|pair| pair[0].value < pair[1].value)
}

fn format_float(x: f64) -> String {
    if x != 0.0 && !(1e-4..1e15).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// CSV with header `word,gamma,value`; words in `{0,1}`.
pub fn curves_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("word,gamma,value\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{}\n",
            row.word.render(Glyphs::Digits),
            format_float(row.gamma.to_f64().unwrap_or(f64::NAN)),
            format_float(row.value.to_f64().unwrap_or(f64::NAN)),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{is_balanced_family, lower_christoffel};

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn words(list: &[&str]) -> Vec<BinaryWord> {
        list.iter().map(|s| w(s)).collect()
    }

    fn rat(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn mechanical_letter_examples() {
        let zero = MechanicalSpec::new(rat("0"), rat("0"), MechanicalKind::Lower).unwrap();
        let one = MechanicalSpec::new(rat("1"), rat("1/3"), MechanicalKind::Upper).unwrap();
        for pos in -5..5 {
            assert_eq!(mechanical_letter(&zero, pos), Letter::A);
            assert_eq!(mechanical_letter(&one, pos), Letter::B);
        }
        let half = MechanicalSpec::new(rat("1/2"), rat("0"), MechanicalKind::Lower).unwrap();
        assert_eq!(mechanical_window(&half, 0, 4), w("abab"));
        assert!(MechanicalSpec::new(rat("3/2"), rat("0"), MechanicalKind::Lower).is_err());
        let shifted = MechanicalSpec::new(rat("2/5"), rat("7/3"), MechanicalKind::Lower).unwrap();
        assert_eq!(shifted.rho(), &rat("1/3"));
    }

    #[test]
    fn mechanical_period_is_christoffel_conjugate() {
        let spec = MechanicalSpec::new(rat("2/5"), rat("0"), MechanicalKind::Lower).unwrap();
        assert_eq!(
            mechanical_window(&spec, 0, 5),
            lower_christoffel(3, 2).unwrap()
        );
        assert_eq!(mechanical_window(&spec, 5, 10), w("aabab"));
    }

    #[test]
    fn characteristic_word_examples() {
        assert_eq!(
            characteristic_word(&[1], 20).unwrap(),
            w("abaababaabaababaabab")
        );
        assert_eq!(
            characteristic_word(&[1, 1, 1, 1, 1, 1, 1, 1], 20).unwrap(),
            w("abaababaabaababaabab")
        );
        assert_eq!(
            characteristic_word(&[2, 1], 0).unwrap(),
            BinaryWord::empty()
        );
        assert!(characteristic_word(&[], 3).is_err());
        assert!(characteristic_word(&[1, 0], 3).is_err());
    }

    #[test]
    fn characteristic_word_matches_mechanical_convergent() {
        for directive in [vec![1], vec![2, 1], vec![2, 1, 1], vec![1, 3, 2]] {
            let alpha = directive_slope(&directive, 24).unwrap();
            let spec = MechanicalSpec::new(alpha, rat("0"), MechanicalKind::Lower).unwrap();
            let prefix = characteristic_word(&directive, 200).unwrap();
            assert_eq!(mechanical_window(&spec, 1, 201), prefix, "{directive:?}");
        }
    }

    #[test]
    fn compact_representation_examples() {
        let w7 = characteristic_word(&[1], 7).unwrap();
        assert_eq!(w7, w("abaabab"));
        let (ab, ba) = compact_representations(&w7);
        assert_eq!(ab.render(Glyphs::Digits), "1010010010100101");
        assert_eq!(ba.render(Glyphs::Digits), "1010010100100101");
        assert_eq!(
            compact_representations(&BinaryWord::empty()),
            (w("ab"), w("ba"))
        );
        for word in crate::words::all_words_up_to(5) {
            let (x, y) = compact_representations(&word);
            assert_eq!(
                (x.len(), y.len()),
                (2 * (word.len() + 1), 2 * (word.len() + 1))
            );
        }
    }

    #[test]
    fn fibonacci_table_rows() {
        let fib = BalancedSpec::fibonacci();
        let rows: [&[&str]; 6] = [
            &["a", "b"],
            &["aa", "ab", "ba"],
            &["aab", "aba", "baa", "bab"],
            &["aaba", "abaa", "abab", "baab", "baba"],
            &["aabaa", "aabab", "abaab", "ababa", "baaba", "babaa"],
            &[
                "aabaab", "aababa", "abaaba", "ababaa", "baabaa", "baabab", "babaab",
            ],
        ];
        for (n, row) in rows.iter().enumerate() {
            assert_eq!(enumerate_factors(&fib, n + 1).unwrap().factors, words(row));
        }
        let eight = enumerate_factors(&fib, 8).unwrap().factors;
        assert_eq!(eight.len(), 9);
        assert_eq!(eight[0], w("00100101"));
        assert_eq!(eight[8], w("10100101"));
        assert_eq!(
            enumerate_factors(&fib, 0).unwrap().factors,
            vec![BinaryWord::empty()]
        );
    }

    #[test]
    fn fibonacci_sequence_sides() {
        let fib = BalancedSpec::fibonacci();
        assert_eq!(fib.window(-8, 8).render(Glyphs::Digits), "1010010010100101");
        assert_eq!(fib.central_prefix(7).unwrap(), w("abaabab"));
    }

    #[test]
    fn complexity_and_balance_of_languages() {
        let specs = [
            BalancedSpec::fibonacci(),
            BalancedSpec::characteristic(vec![2, 1]).unwrap(),
            BalancedSpec::characteristic(vec![1, 3]).unwrap(),
            BalancedSpec::skew(BinaryWord::empty(), SkewForm::Isolated, Letter::A).unwrap(),
            BalancedSpec::skew(BinaryWord::empty(), SkewForm::Isolated, Letter::B).unwrap(),
            BalancedSpec::skew(w("aba"), SkewForm::Blocks, Letter::A).unwrap(),
            BalancedSpec::skew(w("a"), SkewForm::Blocks, Letter::B).unwrap(),
            BalancedSpec::skew(BinaryWord::empty(), SkewForm::Blocks, Letter::A).unwrap(),
        ];
        for spec in &specs {
            for n in 1..=12 {
                let lang = enumerate_factors(spec, n).unwrap();
                assert_eq!(lang.factors.len(), n + 1, "{spec} n={n}");
                assert!(
                    is_balanced_family(&lang.factors, Letter::A).unwrap(),
                    "{spec} n={n}"
                );
                assert!(
                    is_balanced_family(&lang.factors, Letter::B).unwrap(),
                    "{spec} n={n}"
                );
            }
        }
    }

    #[test]
    fn double_representation_matches_wide_window() {
        let fib = BalancedSpec::fibonacci();
        for n in 1..=12 {
            let wide = factors(&fib.window(-200, 200), n);
            let lang: std::collections::BTreeSet<_> = enumerate_factors(&fib, n)
                .unwrap()
                .factors
                .into_iter()
                .collect();
            assert_eq!(lang, wide, "n={n}");
        }
    }

    #[test]
    fn flip_permutation_fibonacci_three() {
        let changes = flip_permutation(&BalancedSpec::fibonacci(), 3).unwrap();
        let chain: Vec<_> = changes
            .iter()
            .map(|c| (c.from.to_string(), c.to.to_string()))
            .collect();
        assert_eq!(
            chain,
            [("aab", "aba"), ("aba", "baa"), ("baa", "bab")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
        );
        assert_eq!(
            changes[0].kind,
            ChangeKind::FlipAbBa {
                u: w("a"),
                v: BinaryWord::empty()
            }
        );
        assert_eq!(
            changes[1].kind,
            ChangeKind::FlipAbBa {
                u: BinaryWord::empty(),
                v: w("a")
            }
        );
        assert_eq!(changes[2].kind, ChangeKind::LastLetter);
    }

    #[test]
    fn flip_permutation_length_one() {
        let changes = flip_permutation(&BalancedSpec::fibonacci(), 1).unwrap();
        assert_eq!(changes.len(), 1);
        assert_eq!(
            (changes[0].from.clone(), changes[0].to.clone()),
            (w("a"), w("b"))
        );
        assert_eq!(changes[0].kind, ChangeKind::LastLetter);
    }

    #[test]
    fn flip_permutation_fibonacci_eight_listing() {
        // middle column of the length-8 listing, underlined 01 flipped to 10
        let expected = [
            "00100101", "00101001", "01001001", "01001010", "01010010", "10010010", "10010100",
            "10100100",
        ];
        let changes = flip_permutation(&BalancedSpec::fibonacci(), 8).unwrap();
        let froms: Vec<String> = changes
            .iter()
            .map(|c| c.from.render(Glyphs::Digits))
            .collect();
        assert_eq!(froms, expected);
        assert_eq!(changes[7].to.render(Glyphs::Digits), "10100101");
        let last_letter: Vec<_> = changes
            .iter()
            .filter(|c| c.kind == ChangeKind::LastLetter)
            .collect();
        assert_eq!(last_letter.len(), 1);
        assert_eq!(last_letter[0].from.render(Glyphs::Digits), "10100100");
    }

    #[test]
    fn flip_permutation_structure_up_to_twelve() {
        for spec in [
            BalancedSpec::fibonacci(),
            BalancedSpec::characteristic(vec![2, 1, 2, 1]).unwrap(),
            BalancedSpec::skew(w("aba"), SkewForm::Blocks, Letter::A).unwrap(),
        ] {
            for n in 1..=12 {
                let changes = flip_permutation(&spec, n).unwrap();
                assert_eq!(changes.len(), n);
                let w = spec_prefix_for(&spec, n);
                assert_eq!(changes[0].from, w.with_prefix(Letter::A), "{spec} n={n}");
                assert_eq!(changes[n - 1].to, w.with_prefix(Letter::B), "{spec} n={n}");
            }
        }
    }

    fn spec_prefix_for(spec: &BalancedSpec, n: usize) -> BinaryWord {
        enumerate_factors(spec, n).unwrap().factors[0].slice(1, n)
    }

    #[test]
    fn flip_permutation_rejects_wrong_complexity() {
        let spec = BalancedSpec::periodic(w("ab")).unwrap();
        assert_eq!(
            flip_permutation(&spec, 3),
            Err(Error::Complexity {
                n: 3,
                expected: 4,
                found: 2
            })
        );
        // below the period the periodic language still has n+1 factors
        let spec = BalancedSpec::periodic(w("aabab")).unwrap();
        assert_eq!(flip_permutation(&spec, 4).unwrap().len(), 4);
    }

    #[test]
    fn change_recognition() {
        assert_eq!(
            classify_change(&w("ba"), &w("aaa")),
            Some(ChangeKind::WrapAwa)
        );
        assert_eq!(
            classify_change(&w("ba"), &w("aab")),
            Some(ChangeKind::WrapAwb)
        );
        assert_eq!(
            classify_change(&w("aba"), &w("abb")),
            Some(ChangeKind::LastLetter)
        );
        assert_eq!(
            classify_change(&w("aabb"), &w("abab")),
            Some(ChangeKind::FlipAbBa {
                u: w("a"),
                v: w("b")
            })
        );
        assert_eq!(classify_change(&w("aa"), &w("bb")), None);
        assert_eq!(classify_change(&BinaryWord::empty(), &w("a")), None);
    }

    #[test]
    fn radix_chain_examples() {
        let report = radix_chain_check(&BalancedSpec::fibonacci(), 9).unwrap();
        assert_eq!(report.factors.len(), 55);
        assert_eq!(report.links.len(), 54);
        assert!(radix_chain_check(&BalancedSpec::periodic(w("ab")).unwrap(), 6).is_ok());
        let err = check_link(&w("abb"), &w("baa")).unwrap_err();
        assert_eq!(
            err,
            Error::NotIncreasing {
                from: w("abb"),
                to: w("baa"),
                difference: "q - q^2 - 2*q^3 - 2*q^4 - 3*q^5 - 2*q^6 - q^7".into()
            }
        );
    }

    #[test]
    fn chain_links_across_lengths_are_wraps() {
        let report = radix_chain_check(&BalancedSpec::fibonacci(), 10).unwrap();
        for link in report
            .links
            .iter()
            .filter(|l| l.to.len() == l.from.len() + 1 && !l.from.is_empty())
        {
            assert!(
                matches!(link.kind, Some(ChangeKind::WrapAwa | ChangeKind::WrapAwb)),
                "{link:?}"
            );
        }
        let seven_to_eight = report
            .links
            .iter()
            .find(|l| l.from.render(Glyphs::Digits) == "1010010")
            .unwrap();
        assert_eq!(seven_to_eight.to.render(Glyphs::Digits), "00100101");
        let eight_to_nine = report
            .links
            .iter()
            .find(|l| l.from.render(Glyphs::Digits) == "10100101")
            .unwrap();
        assert_eq!(eight_to_nine.to.render(Glyphs::Digits), "001001010");
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&BalancedSpec::periodic(w("aabab")).unwrap()),
            Ok(MarkoffClass::M1)
        );
        let skew = BalancedSpec::skew(BinaryWord::empty(), SkewForm::Isolated, Letter::A).unwrap();
        assert_eq!(skew.window(-2, 3), w("aabaa"));
        assert_eq!(classify(&skew), Ok(MarkoffClass::M4));
        assert_eq!(classify(&BalancedSpec::fibonacci()), Ok(MarkoffClass::M3));
        let blocks = BalancedSpec::skew(w("aba"), SkewForm::Blocks, Letter::A).unwrap();
        assert_eq!(classify(&blocks), Ok(MarkoffClass::M4));
        let periodic_mech = "mechanical:alpha=2/5,rho=1/7,kind=upper".parse().unwrap();
        assert_eq!(classify(&periodic_mech), Ok(MarkoffClass::M1));
        // slope 55/144 approximates the Fibonacci slope; period exceeds the window
        let generic: BalancedSpec = "mechanical:alpha=55/144,rho=1/3".parse().unwrap();
        assert_eq!(classify(&generic), Ok(MarkoffClass::M2));
        let symmetric: BalancedSpec = "mechanical:alpha=55/144,rho=0".parse().unwrap();
        assert_eq!(classify(&symmetric), Ok(MarkoffClass::M3));
    }

    #[test]
    fn mechanical_limit_from_above_stabilizes_to_skew() {
        // target slope 2/5, Christoffel word aabab = a·aba·b
        let target = rat("2/5");
        let skew = BalancedSpec::skew(w("aba"), SkewForm::Blocks, Letter::A).unwrap();
        let k = 12;
        let expected = skew.window(-k, k);
        for denominator in [1000, 10_000, 100_000] {
            let alpha = &target + BigRational::new(1.into(), BigInt::from(denominator));
            let spec = MechanicalSpec::new(alpha, rat("0"), MechanicalKind::Lower).unwrap();
            assert_eq!(mechanical_window(&spec, -k, k), expected, "{denominator}");
        }
        // the limit reads p̃·ba·p around the origin
        assert_eq!(expected.slice(k as usize - 1, k as usize + 1), w("ba"));
    }

    #[test]
    fn spec_grammar_round_trip() {
        for s in [
            "fibonacci",
            "periodic:aabab",
            "characteristic:2,1,2,1",
            "skew:m=,form=xxyxx,xy=ab",
            "skew:m=aba,form=blocks,xy=ba",
            "mechanical:alpha=2/5,rho=1/3,kind=upper",
        ] {
            let spec: BalancedSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("periodic:aabb".parse::<BalancedSpec>().is_err());
        assert!("skew:m=ab,form=blocks,xy=ab"
            .parse::<BalancedSpec>()
            .is_err());
        assert!("nonsense".parse::<BalancedSpec>().is_err());
        assert_eq!(
            "characteristic:1".parse::<BalancedSpec>().unwrap(),
            BalancedSpec::fibonacci()
        );
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(rat("0.01"), BigRational::new(1.into(), 100.into()));
        assert_eq!(rat("3"), BigRational::from_integer(3.into()));
        assert_eq!(rat("-1.5"), BigRational::new((-3).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn curves_examples() {
        let fib = BalancedSpec::fibonacci();
        let gammas = [rat("1")];
        let rows = curves_export(&fib, 9, &gammas).unwrap();
        assert_eq!(rows.len(), 55);
        for row in &rows {
            let classical = crate::morphism::markoff_number(&row.word);
            let expected = if row.word.is_empty() {
                BigInt::zero()
            } else {
                classical
            };
            assert_eq!(row.value, BigRational::from_integer(expected));
        }
        assert!(curves_strictly_increasing(&rows));
        assert!(matches!(
            curves_export(&fib, 3, &[rat("0")]),
            Err(Error::PositivityDomain(_))
        ));
        let csv = curves_csv(&curves_export(&fib, 1, &[rat("1/2")]).unwrap());
        assert_eq!(csv, "word,gamma,value\n,0.5,0\n0,0.5,1\n1,0.5,1.5\n");
    }
}
