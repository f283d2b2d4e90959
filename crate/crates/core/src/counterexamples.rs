//! Pairs of words on which `w ↦ q_markoff(w)` fails to increase across
//! different balanced languages, and collisions of the maps at `q = 1` and in `q`.

use std::fmt;

use serde::Serialize;

use crate::morphism::{markoff_number, q_markoff};
use crate::qpoly::IntPolynomial;
use crate::words::{is_christoffel, radix_cmp, BinaryWord, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadixCounterexample {
    pub earlier: BinaryWord,
    pub later: BinaryWord,
    pub christoffel: bool,
    /// `q_markoff(later) − q_markoff(earlier)`
    pub difference: IntPolynomial,
    pub printed: Option<IntPolynomial>,
}

impl RadixCounterexample {
    fn new(earlier: BinaryWord, later: BinaryWord, printed: Option<&str>) -> Self {
        assert_eq!(radix_cmp(&earlier, &later), std::cmp::Ordering::Less);
        let difference = q_markoff(&later) - q_markoff(&earlier);
        RadixCounterexample {
            christoffel: is_christoffel(&earlier) && is_christoffel(&later),
            earlier,
            later,
            difference,
            printed: printed.map(|s| s.parse().expect("well-formed polynomial")),
        }
    }

    pub fn matches_printed(&self) -> Option<bool> {
        self.printed.as_ref().map(|p| p == &self.difference)
    }

    pub fn has_negative_coefficient(&self) -> bool {
        self.difference.has_negative_coefficient()
    }

    /// The difference has a negative coefficient and agrees with the printed one, if any.
    pub fn verified(&self) -> bool {
        self.has_negative_coefficient() && self.matches_printed() != Some(false)
    }
}

impl fmt::Display for RadixCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} <radix {}{}",
            self.earlier,
            self.later,
            if self.christoffel {
                " (Christoffel words)"
            } else {
                ""
            }
        )?;
        writeln!(f, "  difference: {}", self.difference)?;
        if let Some(printed) = &self.printed {
            let agreement = if self.matches_printed() == Some(true) {
                "matches"
            } else {
                "differs from"
            };
            writeln!(f, "  {agreement} printed: {printed}")?;
        }
        write!(
            f,
            "  verdict: {}",
            if self.verified() {
                "negative coefficient, not increasing"
            } else {
                "FAILED"
            }
        )
    }
}

fn w(s: &str) -> BinaryWord {
    s.parse().expect("well-formed word")
}

/// Radix-ordered pairs whose `q_markoff` difference has a negative coefficient.
pub fn radix_counterexamples() -> Vec<RadixCounterexample> {
    vec![
        RadixCounterexample::new(w("abb"), w("baa"), Some("q - q^2 - 2q^3 - 2q^4 - 3q^5 - 2q^6 - q^7")),
        RadixCounterexample::new(
            w("abbbab"),
            w("bababb"),
            Some(
                "q + 3q^2 + 7q^3 + 12q^4 + 17q^5 + 20q^6 + 21q^7 + 19q^8 + 14q^9 + 9q^10 + 4q^11 + q^12 - q^13 - q^14",
            ),
        ),
        RadixCounterexample::new(
            w("abbb"),
            w("aaaab"),
            Some("q - q^2 - 3q^3 - 8q^4 - 12q^5 - 15q^6 - 15q^7 - 13q^8 - 9q^9 - 4q^10 - q^11"),
        ),
        RadixCounterexample::new(
            BinaryWord::power(Letter::B, 7).with_prefix(Letter::A),
            BinaryWord::power(Letter::A, 12).with_suffix(Letter::B),
            None,
        ),
    ]
}

/// Two distinct words with equal `q_markoff`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolynomialCollision {
    pub u: BinaryWord,
    pub v: BinaryWord,
    pub u_value: IntPolynomial,
    pub v_value: IntPolynomial,
    pub printed: IntPolynomial,
}

impl PolynomialCollision {
    pub fn verified(&self) -> bool {
        self.u != self.v && self.u_value == self.v_value && self.u_value == self.printed
    }
}

impl fmt::Display for PolynomialCollision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q_markoff({}) = {}", self.u, self.u_value)?;
        writeln!(f, "q_markoff({}) = {}", self.v, self.v_value)?;
        write!(
            f,
            "  verdict: {}",
            if self.verified() {
                "equal, matches printed"
            } else {
                "FAILED"
            }
        )
    }
}

pub fn polynomial_collision() -> PolynomialCollision {
    let (u, v) = (w("aaabbb"), w("abbaab"));
    PolynomialCollision {
        u_value: q_markoff(&u),
        v_value: q_markoff(&v),
        printed: "1 + 5q + 16q^2 + 38q^3 + 70q^4 + 109q^5 + 145q^6 + 168q^7 + 171q^8 + 152q^9 + 118q^10 + 79q^11 + 44q^12 + 19q^13 + 6q^14 + q^15"
            .parse()
            .expect("well-formed polynomial"),
        u,
        v,
    }
}

/// Two distinct words with equal classical entry `mu(w)₁₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalCollision {
    pub u: BinaryWord,
    pub v: BinaryWord,
    pub u_number: String,
    pub v_number: String,
    pub u_value: IntPolynomial,
    pub v_value: IntPolynomial,
}

impl ClassicalCollision {
    /// The two classical entries agree.
    pub fn verified(&self) -> bool {
        self.u != self.v && self.u_number == self.v_number
    }

    pub fn q_values_differ(&self) -> bool {
        self.u_value != self.v_value
    }
}

impl fmt::Display for ClassicalCollision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "mu({})_12 = {} = mu({})_12",
            self.u, self.u_number, self.v
        )?;
        writeln!(f, "q_markoff({}) = {}", self.u, self.u_value)?;
        writeln!(f, "q_markoff({}) = {}", self.v, self.v_value)?;
        let in_q = if self.q_values_differ() {
            "distinct in q"
        } else {
            "also equal in q"
        };
        write!(
            f,
            "  verdict: {}",
            if self.verified() {
                format!("equal at q = 1, {in_q}")
            } else {
                "FAILED".into()
            }
        )
    }
}

pub fn classical_collision() -> ClassicalCollision {
    let (u, v) = (w("aabb"), w("abab"));
    ClassicalCollision {
        u_number: markoff_number(&u).to_string(),
        v_number: markoff_number(&v).to_string(),
        u_value: q_markoff(&u),
        v_value: q_markoff(&v),
        u,
        v,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub radix: Vec<RadixCounterexample>,
    pub polynomial_collision: PolynomialCollision,
    pub classical_collision: ClassicalCollision,
}

impl CounterexampleReport {
    pub fn compute() -> Self {
        CounterexampleReport {
            radix: radix_counterexamples(),
            polynomial_collision: polynomial_collision(),
            classical_collision: classical_collision(),
        }
    }

    pub fn all_verified(&self) -> bool {
        self.radix.iter().all(RadixCounterexample::verified)
            && self.polynomial_collision.verified()
            && self.classical_collision.verified()
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for case in &self.radix {
            writeln!(f, "{case}")?;
        }
        writeln!(f, "{}", self.polynomial_collision)?;
        write!(f, "{}", self.classical_collision)
    }
}
