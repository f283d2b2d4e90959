//! Exact arithmetic for the q-deformed Markoff morphism over binary words.
//!
//! The crate is organised bottom-up:
//! - [`words`]: finite words over `{a, b}`, orders, factors, balance and the Markoff property
//! - [`qpoly`]: dense integer polynomials in `q` and 2×2 matrices over them
//! - [`morphism`]: the classical morphism `mu`, its q-deformation `mu_q`, the flip matrix
//!   and the twin trees of Christoffel words and Markoff triples
//! - [`language`]: finite descriptions of biinfinite balanced sequences, their factor
//!   languages and the radix-chain monotonicity harness
//! - [`pairs`]: patterns and indistinguishable asymptotic pairs
//! - [`spectrum`]: continued fractions and Markoff suprema of periodic sequences
//! - [`counterexamples`]: pairs on which the q-deformed map fails to increase, and collisions
//! - [`cli`]: the command-line front end

pub mod cli;
pub mod counterexamples;
pub mod error;
pub mod language;
pub mod morphism;
pub mod pairs;
pub mod qpoly;
pub mod spectrum;
pub mod words;

pub use error::{Error, Result};
pub use language::{BalancedSpec, ChangeKind, MechanicalKind, MechanicalSpec, SkewForm};
pub use morphism::{mu, mu_q, q_markoff, IntMatrix, MarkoffTriple, TreePath};
pub use qpoly::{IntPolynomial, QMatrix};
pub use words::{BinaryWord, Letter};
