//! Dense polynomials in `q` with arbitrary-precision integer coefficients, and
//! 2×2 matrices over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Polynomial in `q`; `coeffs[i]` is the coefficient of `q^i`.
///
/// The highest stored coefficient is never zero; the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: i64) -> Self {
        Self::from_coeffs([c])
    }

    /// `c * q^power`
    pub fn monomial(c: i64, power: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); power + 1];
        coeffs[power] = BigInt::from(c);
        Self::from_big_coeffs(coeffs)
    }

    pub fn from_coeffs<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::from_big_coeffs(coeffs.into_iter().map(BigInt::from).collect())
    }

    pub fn from_big_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    pub fn has_negative_coefficient(&self) -> bool {
        self.coeffs.iter().any(Signed::is_negative)
    }

    /// Nonzero with every coefficient `>= 0`.
    pub fn is_nonneg_nonzero(&self) -> bool {
        !self.is_zero() && !self.has_negative_coefficient()
    }

    /// The strict partial order `f ≺ g`: `g - f` is nonzero with nonnegative coefficients.
    pub fn precedes(&self, other: &IntPolynomial) -> bool {
        (other - self).is_nonneg_nonzero()
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Sum of the coefficients, i.e. the value at `q = 1`.
    pub fn at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }
}

/// Exact ring arithmetic selector, mirroring the three binary operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(f: &IntPolynomial, g: &IntPolynomial, kind: ArithKind) -> IntPolynomial {
    match kind {
        ArithKind::Add => f + g,
        ArithKind::Sub => f - g,
        ArithKind::Mul => f * g,
    }
}

pub fn poly_is_nonneg_nonzero(f: &IntPolynomial) -> bool {
    f.is_nonneg_nonzero()
}

pub fn poly_precede(f: &IntPolynomial, g: &IntPolynomial) -> bool {
    f.precedes(g)
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::from_big_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::from_big_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::from_big_coeffs(coeffs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&IntPolynomial> for IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: &IntPolynomial) -> IntPolynomial {
                (&self).$method(rhs)
            }
        }
        impl $trait<IntPolynomial> for &IntPolynomial {
            type Output = IntPolynomial;
            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        -&self
    }
}

impl fmt::Display for IntPolynomial {
    /// Ascending powers: `1 + 4*q + 10*q^2`, `q - q^2`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let power = match i {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{i}"),
            };
            if i == 0 {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                f.write_str(&power)?;
            } else {
                write!(f, "{magnitude}*{power}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Parses sums of terms such as `1 + 4*q + 10*q^2 - q^3`. The `*` is
    /// optional and terms may come in any order.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("malformed polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut current = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !current.ends_with('^') {
                terms.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        terms.push(current);

        let mut acc = IntPolynomial::zero();
        for term in terms {
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, term.strip_prefix('+').unwrap_or(&term)),
            };
            let (coeff_str, power) = match body.find('q') {
                None => (body, 0usize),
                Some(pos) => {
                    let exp = &body[pos + 1..];
                    let power = if exp.is_empty() {
                        1
                    } else {
                        exp.strip_prefix('^')
                            .and_then(|e| e.parse().ok())
                            .ok_or_else(bad)?
                    };
                    (body[..pos].trim_end_matches('*'), power)
                }
            };
            let coeff: BigInt = if coeff_str.is_empty() {
                BigInt::one()
            } else {
                coeff_str.parse().map_err(|_| bad())?
            };
            let mut coeffs = vec![BigInt::zero(); power + 1];
            coeffs[power] = coeff * sign;
            acc = acc + IntPolynomial::from_big_coeffs(coeffs);
        }
        Ok(acc)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// 2×2 matrix with entries in `Z[q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    pub e11: IntPolynomial,
    pub e12: IntPolynomial,
    pub e21: IntPolynomial,
    pub e22: IntPolynomial,
}

impl QMatrix {
    pub fn new(
        e11: IntPolynomial,
        e12: IntPolynomial,
        e21: IntPolynomial,
        e22: IntPolynomial,
    ) -> Self {
        QMatrix { e11, e12, e21, e22 }
    }

    pub fn identity() -> Self {
        Self::new(
            IntPolynomial::one(),
            IntPolynomial::zero(),
            IntPolynomial::zero(),
            IntPolynomial::one(),
        )
    }

    pub fn zero() -> Self {
        Self::new(
            IntPolynomial::zero(),
            IntPolynomial::zero(),
            IntPolynomial::zero(),
            IntPolynomial::zero(),
        )
    }

    pub fn det(&self) -> IntPolynomial {
        &self.e11 * &self.e22 - &self.e12 * &self.e21
    }

    pub fn scale(&self, c: &IntPolynomial) -> QMatrix {
        QMatrix::new(c * &self.e11, c * &self.e12, c * &self.e21, c * &self.e22)
    }

    pub fn entries(&self) -> [&IntPolynomial; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }

    pub fn map<F: Fn(&IntPolynomial) -> T, T>(&self, f: F) -> [[T; 2]; 2] {
        [[f(&self.e11), f(&self.e12)], [f(&self.e21), f(&self.e22)]]
    }
}

pub fn qmat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    QMatrix::new(
        &a.e11 * &b.e11 + &a.e12 * &b.e21,
        &a.e11 * &b.e12 + &a.e12 * &b.e22,
        &a.e21 * &b.e11 + &a.e22 * &b.e21,
        &a.e21 * &b.e12 + &a.e22 * &b.e22,
    )
}

pub fn qmat_sub(a: &QMatrix, b: &QMatrix) -> QMatrix {
    QMatrix::new(
        &a.e11 - &b.e11,
        &a.e12 - &b.e12,
        &a.e21 - &b.e21,
        &a.e22 - &b.e22,
    )
}

pub fn qmat_add(a: &QMatrix, b: &QMatrix) -> QMatrix {
    QMatrix::new(
        &a.e11 + &b.e11,
        &a.e12 + &b.e12,
        &a.e21 + &b.e21,
        &a.e22 + &b.e22,
    )
}

impl Mul for &QMatrix {
    type Output = QMatrix;

    fn mul(self, rhs: &QMatrix) -> QMatrix {
        qmat_mul(self, rhs)
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;

    fn sub(self, rhs: &QMatrix) -> QMatrix {
        qmat_sub(self, rhs)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.e11, self.e12, self.e21, self.e22
        )
    }
}
