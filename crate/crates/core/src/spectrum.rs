//! Continued fractions and Markoff suprema of periodic sequences over `{1, 2}`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::markoff_number;
use crate::words::{is_christoffel, BinaryWord, Letter};

/// Default number of partial quotients per tail.
pub const DEFAULT_DEPTH: usize = 64;

/// `a ↦ 11`, `b ↦ 22`
pub fn sigma_subst(w: &BinaryWord) -> Vec<u32> {
    w.letters()
        .iter()
        .flat_map(|l| match l {
            Letter::A => [1, 1],
            Letter::B => [2, 2],
        })
        .collect()
}

/// A biinfinite sequence of partial quotients repeating `period`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicCF {
    period: Vec<u32>,
}

impl PeriodicCF {
    pub fn new(period: Vec<u32>) -> Result<Self> {
        if period.is_empty() || period.contains(&0) {
            return Err(Error::InvalidArgument(
                "period must be a nonempty list of positive integers".into(),
            ));
        }
        Ok(PeriodicCF { period })
    }

    /// `σ(w)` repeated in both directions.
    pub fn from_word(w: &BinaryWord) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        PeriodicCF::new(sigma_subst(w))
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn at(&self, i: i64) -> u32 {
        self.period[i.rem_euclid(self.period.len() as i64) as usize]
    }
}

/// Two consecutive convergents, `lower <= upper`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl Bracket {
    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }
}

fn convergent_bracket(seq: &PeriodicCF, start: i64, step: i64, depth: usize) -> Bracket {
    // [0; c_1, c_2, …] via p_k = c_k p_{k−1} + p_{k−2}
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut previous = BigRational::zero();
    let mut current = BigRational::zero();
    for k in 0..depth.max(2) {
        let c = BigInt::from(seq.at(start + step * k as i64));
        let p_next = &c * &p + &p_prev;
        let q_next = &c * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        previous = std::mem::replace(&mut current, BigRational::new(p.clone(), q.clone()));
    }
    if previous <= current {
        Bracket {
            lower: previous,
            upper: current,
        }
    } else {
        Bracket {
            lower: current,
            upper: previous,
        }
    }
}

/// Brackets `[0; a_start, a_start+1, …]` by its convergents of orders `depth − 1`
/// and `depth`.
pub fn cf_tail(seq: &PeriodicCF, start: i64, depth: usize) -> Bracket {
    convergent_bracket(seq, start, 1, depth)
}

/// Brackets `[0; a_start, a_start−1, …]`.
pub fn cf_tail_backward(seq: &PeriodicCF, start: i64, depth: usize) -> Bracket {
    convergent_bracket(seq, start, -1, depth)
}

/// A real number certified to lie in `[lower, upper]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumValue {
    pub lower: BigRational,
    pub upper: BigRational,
}

impl SpectrumValue {
    /// Midpoint of the bracket.
    pub fn value(&self) -> f64 {
        ((&self.lower + &self.upper) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Width of the bracket.
    pub fn error_bound(&self) -> f64 {
        (&self.upper - &self.lower)
            .to_f64()
            .unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for SpectrumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.15} ± {:.3e}", self.value(), self.error_bound())
    }
}

/// `a_i + [0; a_{i+1}, a_{i+2}, …] + [0; a_{i−1}, a_{i−2}, …]`
pub fn lambda_i(seq: &PeriodicCF, i: i64, depth: usize) -> SpectrumValue {
    let a = BigRational::from_integer(seq.at(i).into());
    let forward = cf_tail(seq, i + 1, depth);
    let backward = cf_tail_backward(seq, i - 1, depth);
    SpectrumValue {
        lower: &a + &forward.lower + &backward.lower,
        upper: a + forward.upper + backward.upper,
    }
}

/// `sup_i λ_i`, a maximum over one period.
pub fn markoff_supremum(seq: &PeriodicCF, depth: usize) -> SpectrumValue {
    let values: Vec<SpectrumValue> = (0..seq.period.len() as i64)
        .into_par_iter()
        .map(|i| lambda_i(seq, i, depth))
        .collect();
    let lower = values
        .iter()
        .map(|v| &v.lower)
        .max()
        .expect("nonempty period")
        .clone();
    let upper = values
        .iter()
        .map(|v| &v.upper)
        .max()
        .expect("nonempty period")
        .clone();
    SpectrumValue { lower, upper }
}

/// `√(9 − 4/m²)`, evaluated as `√((9m² − 4)/m²)`.
pub fn closed_form(m: &BigInt) -> f64 {
    let m2 = m * m;
    let ratio = BigRational::new(BigInt::from(9) * &m2 - 4, m2);
    ratio.to_f64().unwrap_or(f64::NAN).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupremumCheck {
    pub word: BinaryWord,
    pub m: String,
    pub supremum: f64,
    pub error_bound: f64,
    pub closed_form: f64,
    pub residual: f64,
}

impl fmt::Display for SupremumCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "word: {}", self.word)?;
        writeln!(f, "m: {}", self.m)?;
        writeln!(
            f,
            "supremum: {:.15} (error bound {:.3e})",
            self.supremum, self.error_bound
        )?;
        writeln!(f, "closed form: {:.15}", self.closed_form)?;
        write!(f, "residual: {:.3e}", self.residual)
    }
}

/// Compares `M(σ(^∞w^∞))` with `√(9 − 4/m²)`, `m = mu(w)₁₂`, for a Christoffel word `w`.
pub fn supremum_check(w: &BinaryWord, depth: usize) -> Result<SupremumCheck> {
    if !is_christoffel(w) {
        return Err(Error::NotChristoffel(w.clone()));
    }
    let m = markoff_number(w);
    let sup = markoff_supremum(&PeriodicCF::from_word(w)?, depth);
    let closed = closed_form(&m);
    Ok(SupremumCheck {
        word: w.clone(),
        m: m.to_string(),
        supremum: sup.value(),
        error_bound: sup.error_bound(),
        closed_form: closed,
        residual: (sup.value() - closed).abs(),
    })
}

/// `|M(σ(^∞w^∞)) − √(9 − 4/m²)|`
pub fn supremum_residual(w: &BinaryWord, depth: usize) -> Result<f64> {
    supremum_check(w, depth).map(|c| c.residual)
}
