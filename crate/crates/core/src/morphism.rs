//! The morphism `mu` into `SL2(Z)`, its q-deformation `mu_q`, the flip matrix
//! `D_q`, and the twin binary trees of Christoffel words and Markoff triples.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qpoly::{qmat_mul, qmat_sub, IntPolynomial, QMatrix};
use crate::words::{BinaryWord, Letter};

/// 2×2 integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix(pub [[BigInt; 2]; 2]);

impl IntMatrix {
    pub fn from_i64(rows: [[i64; 2]; 2]) -> Self {
        IntMatrix(rows.map(|r| r.map(BigInt::from)))
    }

    pub fn identity() -> Self {
        Self::from_i64([[1, 0], [0, 1]])
    }

    pub fn entry(&self, row: usize, col: usize) -> &BigInt {
        &self.0[row][col]
    }

    pub fn det(&self) -> BigInt {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let cell = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        IntMatrix([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]])
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

fn mu_letter(letter: Letter) -> IntMatrix {
    match letter {
        Letter::A => IntMatrix::from_i64([[2, 1], [1, 1]]),
        Letter::B => IntMatrix::from_i64([[5, 2], [2, 1]]),
    }
}

pub fn mu(w: &BinaryWord) -> IntMatrix {
    w.letters()
        .iter()
        .fold(IntMatrix::identity(), |acc, &l| acc.mul(&mu_letter(l)))
}

/// `mu_q(a) = [[q + q^2, 1], [q, 1]]`, `mu_q(b) = [[q + 2q^2 + q^3 + q^4, 1 + q], [q + q^2, 1]]`.
pub fn mu_q_letter(letter: Letter) -> QMatrix {
    let p = |c: &[i64]| IntPolynomial::from_coeffs(c.iter().copied());
    match letter {
        Letter::A => QMatrix::new(p(&[0, 1, 1]), p(&[1]), p(&[0, 1]), p(&[1])),
        Letter::B => QMatrix::new(p(&[0, 1, 2, 1, 1]), p(&[1, 1]), p(&[0, 1, 1]), p(&[1])),
    }
}

pub fn mu_q(w: &BinaryWord) -> QMatrix {
    w.letters().iter().fold(QMatrix::identity(), |acc, &l| {
        qmat_mul(&acc, &mu_q_letter(l))
    })
}

/// Entry `(1,2)` of `mu_q(w)`: the q-analog of the Markoff number of `w`.
pub fn q_markoff(w: &BinaryWord) -> IntPolynomial {
    mu_q(w).e12
}

/// `q^(2|w|_a + 4|w|_b)`, the determinant of `mu_q(w)`.
pub fn det_mu_q(w: &BinaryWord) -> IntPolynomial {
    IntPolynomial::monomial(1, det_exponent(w))
}

fn det_exponent(w: &BinaryWord) -> usize {
    2 * w.count_a() + 4 * w.count_b()
}

/// `D_q = mu_q(ba) - mu_q(ab) = [[0, q + q^4], [-q^2 - q^5, 0]]`.
pub fn d_q() -> QMatrix {
    QMatrix::new(
        IntPolynomial::zero(),
        IntPolynomial::from_coeffs([0, 1, 0, 0, 1]),
        IntPolynomial::from_coeffs([0, 0, -1, 0, 0, -1]),
        IntPolynomial::zero(),
    )
}

fn ab() -> BinaryWord {
    BinaryWord::from_letters(vec![Letter::A, Letter::B])
}

fn ba() -> BinaryWord {
    BinaryWord::from_letters(vec![Letter::B, Letter::A])
}

/// `mu_q(ũ·ba·u) - mu_q(ũ·ab·u)`, computed from the two products and checked
/// against `q^n D_q` with `n = 2|u|_a + 4|u|_b`.
pub fn flip_delta(u: &BinaryWord) -> Result<QMatrix> {
    let left = u.reversal();
    let with_ba = mu_q(&left.concat(&ba()).concat(u));
    let with_ab = mu_q(&left.concat(&ab()).concat(u));
    let delta = qmat_sub(&with_ba, &with_ab);
    if delta != d_q().scale(&det_mu_q(u)) {
        return Err(Error::FlipIdentity(u.clone()));
    }
    Ok(delta)
}

/// Entries `m, n, o, p` of `mu_q(w)` and the two derived combinations
/// `q m - q^2 n + o` and `(q + q^2) m - (q^2 + q^3 + q^4) n + o - q p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub m: IntPolynomial,
    pub n: IntPolynomial,
    pub o: IntPolynomial,
    pub p: IntPolynomial,
    pub inner_combination: IntPolynomial,
    pub wrap_combination: IntPolynomial,
}

impl PositivityReport {
    /// `m`, `p` and both combinations are nonzero with nonnegative
    /// coefficients; `n` and `o` are too, except that both vanish for the empty word.
    pub fn holds(&self, word_is_empty: bool) -> bool {
        let core = [
            &self.m,
            &self.p,
            &self.inner_combination,
            &self.wrap_combination,
        ]
        .iter()
        .all(|f| f.is_nonneg_nonzero());
        let off_diagonal = if word_is_empty {
            self.n.is_zero() && self.o.is_zero()
        } else {
            self.n.is_nonneg_nonzero() && self.o.is_nonneg_nonzero()
        };
        core && off_diagonal
    }
}

pub fn positivity_report(w: &BinaryWord) -> PositivityReport {
    let QMatrix {
        e11: m,
        e12: n,
        e21: o,
        e22: p,
    } = mu_q(w);
    let poly = |c: &[i64]| IntPolynomial::from_coeffs(c.iter().copied());
    let inner_combination = &poly(&[0, 1]) * &m - &poly(&[0, 0, 1]) * &n + &o;
    let wrap_combination =
        &poly(&[0, 1, 1]) * &m - &poly(&[0, 0, 1, 1, 1]) * &n + &o - &poly(&[0, 1]) * &p;
    PositivityReport {
        m,
        n,
        o,
        p,
        inner_combination,
        wrap_combination,
    }
}

/// `q_markoff(w·b) - q_markoff(w·a)`; equals `q` times entry `(1,1)` of `mu_q(w)`.
pub fn delta_last_letter(w: &BinaryWord) -> IntPolynomial {
    q_markoff(&w.with_suffix(Letter::B)) - q_markoff(&w.with_suffix(Letter::A))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WrapDelta {
    /// `q_markoff(a·w·a) - q_markoff(b·w)`
    pub awa_minus_bw: IntPolynomial,
    /// `q_markoff(a·w·b) - q_markoff(a·w·a)`
    pub awb_minus_awa: IntPolynomial,
}

pub fn delta_wrap(w: &BinaryWord) -> WrapDelta {
    let aw = w.with_prefix(Letter::A);
    let awa = q_markoff(&aw.with_suffix(Letter::A));
    let awb = q_markoff(&aw.with_suffix(Letter::B));
    let bw = q_markoff(&w.with_prefix(Letter::B));
    WrapDelta {
        awa_minus_bw: &awa - &bw,
        awb_minus_awa: &awb - &awa,
    }
}

/// `q_markoff(ũ·ba·v) - q_markoff(ũ·ab·v)` for `u`, `v` comparable under the
/// prefix order.
pub fn flip_prefix_delta(u: &BinaryWord, v: &BinaryWord) -> Result<IntPolynomial> {
    if !u.is_prefix_of(v) && !v.is_prefix_of(u) {
        return Err(Error::PrefixPrecondition(u.clone(), v.clone()));
    }
    let left = u.reversal();
    Ok(q_markoff(&left.concat(&ba()).concat(v)) - q_markoff(&left.concat(&ab()).concat(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Step {
    Left,
    Right,
}

/// Path from the root of the Christoffel/Markoff tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TreePath(pub Vec<Step>);

impl TreePath {
    pub fn root() -> Self {
        TreePath(Vec::new())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn child(&self, step: Step) -> TreePath {
        let mut steps = self.0.clone();
        steps.push(step);
        TreePath(steps)
    }

    /// All `2^depth` paths of the given depth, left-to-right.
    pub fn all_of_depth(depth: usize) -> impl Iterator<Item = TreePath> {
        (0..1u64 << depth).map(move |i| {
            TreePath(
                (0..depth)
                    .map(|k| {
                        if (i >> (depth - 1 - k)) & 1 == 0 {
                            Step::Left
                        } else {
                            Step::Right
                        }
                    })
                    .collect(),
            )
        })
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::Left => "L",
                Step::Right => "R",
            })?;
        }
        Ok(())
    }
}

impl FromStr for TreePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'L' | 'l' => Ok(Step::Left),
                'R' | 'r' => Ok(Step::Right),
                other => Err(Error::InvalidArgument(format!("bad path step {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(TreePath)
    }
}

impl Serialize for TreePath {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Node `u.v` of the Christoffel tree; `word = u·v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChristoffelNode {
    pub u: BinaryWord,
    pub v: BinaryWord,
    pub word: BinaryWord,
}

pub fn christoffel_node(path: &TreePath) -> ChristoffelNode {
    let mut u = BinaryWord::from_letters(vec![Letter::A]);
    let mut v = BinaryWord::from_letters(vec![Letter::B]);
    for step in &path.0 {
        let uv = u.concat(&v);
        match step {
            Step::Left => v = uv,
            Step::Right => u = uv,
        }
    }
    let word = u.concat(&v);
    ChristoffelNode { u, v, word }
}

/// Positive solution of `x^2 + y^2 + z^2 = 3xyz`, in tree orientation (largest in the middle).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkoffTriple {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl MarkoffTriple {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        MarkoffTriple {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }

    pub fn satisfies_equation(&self) -> bool {
        let (x, y, z) = (&self.x, &self.y, &self.z);
        x * x + y * y + z * z == BigInt::from(3) * x * y * z
    }

    pub fn is_proper(&self) -> bool {
        self.x != self.y && self.y != self.z && self.x != self.z
    }

    /// `(x, 3xy - z, y)`
    pub fn left(&self) -> Self {
        let y = BigInt::from(3) * &self.x * &self.y - &self.z;
        MarkoffTriple {
            x: self.x.clone(),
            y,
            z: self.y.clone(),
        }
    }

    /// `(y, 3yz - x, z)`
    pub fn right(&self) -> Self {
        let y = BigInt::from(3) * &self.y * &self.z - &self.x;
        MarkoffTriple {
            x: self.y.clone(),
            y,
            z: self.z.clone(),
        }
    }
}

impl fmt::Display for MarkoffTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

impl Serialize for MarkoffTriple {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string(), self.z.to_string()].serialize(serializer)
    }
}

pub fn markoff_triple(path: &TreePath) -> MarkoffTriple {
    let root = MarkoffTriple::new(1, 5, 2);
    path.0.iter().fold(root, |t, step| match step {
        Step::Left => t.left(),
        Step::Right => t.right(),
    })
}

/// One node of the twin trees, as emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub path: TreePath,
    pub word: BinaryWord,
    pub split: String,
    pub triple: MarkoffTriple,
    pub q_markoff: IntPolynomial,
}

pub fn tree_node(path: &TreePath) -> TreeNode {
    let node = christoffel_node(path);
    TreeNode {
        path: path.clone(),
        split: format!("{}.{}", node.u, node.v),
        q_markoff: q_markoff(&node.word),
        word: node.word,
        triple: markoff_triple(path),
    }
}

/// Every node down to `depth`, breadth-first and left-to-right.
pub fn tree_nodes(depth: usize) -> Vec<TreeNode> {
    let paths: Vec<TreePath> = (0..=depth).flat_map(TreePath::all_of_depth).collect();
    paths.par_iter().map(tree_node).collect()
}

/// Convenience: `mu(w)` entry `(1,2)`.
pub fn markoff_number(w: &BinaryWord) -> BigInt {
    mu(w).entry(0, 1).clone()
}

/// Whether every entry of `mu_q(w)` specializes at `q = 1` to the entry of `mu(w)`.
pub fn specializes_to_mu(w: &BinaryWord) -> bool {
    let classical = mu(w);
    let deformed = mu_q(w).map(IntPolynomial::at_one);
    (0..2).all(|i| (0..2).all(|j| &deformed[i][j] == classical.entry(i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::all_words_up_to;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    fn path(s: &str) -> TreePath {
        s.parse().unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(
            mu(&w("aabab")),
            IntMatrix::from_i64([[463, 194], [284, 119]])
        );
        assert_eq!(mu(&BinaryWord::empty()), IntMatrix::identity());
        // [[2,1],[1,1]]·[[5,2],[2,1]] by hand
        assert_eq!(mu(&w("ab")), IntMatrix::from_i64([[12, 5], [7, 3]]));
    }

    #[test]
    fn mu_q_examples() {
        assert_eq!(
            mu_q(&w("a")),
            QMatrix::new(p("q + q^2"), p("1"), p("q"), p("1"))
        );
        assert_eq!(
            mu_q(&w("b")),
            QMatrix::new(p("q + 2q^2 + q^3 + q^4"), p("1 + q"), p("q + q^2"), p("1"))
        );
        assert_eq!(
            q_markoff(&w("aabab")),
            p("1 + 4q + 10q^2 + 18q^3 + 27q^4 + 33q^5 + 33q^6 + 29q^7 + 21q^8 + 12q^9 + 5q^10 + q^11")
        );
        assert_eq!(mu_q(&BinaryWord::empty()), QMatrix::identity());
    }

    #[test]
    fn q_markoff_examples() {
        assert_eq!(q_markoff(&w("ab")), p("1 + q + 2q^2 + q^3"));
        assert_eq!(
            q_markoff(&w("abb")),
            p("1 + 2q + 5q^2 + 6q^3 + 6q^4 + 5q^5 + 3q^6 + q^7")
        );
        assert!(q_markoff(&BinaryWord::empty()).is_zero());
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_mu_q(&w("a")), p("q^2"));
        assert_eq!(det_mu_q(&w("b")), p("q^4"));
        assert_eq!(det_mu_q(&BinaryWord::empty()), IntPolynomial::one());
    }

    #[test]
    fn d_q_examples() {
        assert_eq!(d_q().e12, p("q + q^4"));
        assert_eq!(d_q().e21, p("-q^2 - q^5"));
        assert_eq!(d_q(), qmat_sub(&mu_q(&w("ba")), &mu_q(&w("ab"))));
    }

    #[test]
    fn flip_delta_examples() {
        assert_eq!(flip_delta(&BinaryWord::empty()).unwrap(), d_q());
        assert_eq!(flip_delta(&w("a")).unwrap(), d_q().scale(&p("q^2")));
        assert_eq!(flip_delta(&w("ab")).unwrap(), d_q().scale(&p("q^6")));
    }

    #[test]
    fn conjugation_identities() {
        let a = mu_q_letter(Letter::A);
        let b = mu_q_letter(Letter::B);
        assert_eq!(qmat_mul(&qmat_mul(&a, &d_q()), &a), d_q().scale(&p("q^2")));
        assert_eq!(qmat_mul(&qmat_mul(&b, &d_q()), &b), d_q().scale(&p("q^4")));
    }

    #[test]
    fn positivity_report_examples() {
        let empty = positivity_report(&BinaryWord::empty());
        assert_eq!(empty.inner_combination, p("q"));
        assert_eq!(empty.wrap_combination, p("q^2"));
        assert!(empty.holds(true));
        // one-letter step multiplies the inner combination of the empty word by q^2
        assert_eq!(positivity_report(&w("a")).wrap_combination, p("q^3"));
        let b = positivity_report(&w("b"));
        for f in [
            &b.m,
            &b.n,
            &b.o,
            &b.p,
            &b.inner_combination,
            &b.wrap_combination,
        ] {
            assert!(f.is_nonneg_nonzero());
        }
    }

    #[test]
    fn delta_last_letter_examples() {
        assert_eq!(delta_last_letter(&BinaryWord::empty()), p("q"));
        assert_eq!(delta_last_letter(&w("a")), p("q^2 + q^3"));
        assert_eq!(delta_last_letter(&w("ab")), mu_q(&w("ab")).e11.shift(1));
    }

    #[test]
    fn delta_wrap_examples() {
        let e = delta_wrap(&BinaryWord::empty());
        assert_eq!(e.awa_minus_bw, p("q^2"));
        let a = delta_wrap(&w("a"));
        assert!(a.awa_minus_bw.is_nonneg_nonzero());
        assert!(a.awb_minus_awa.is_nonneg_nonzero());
        assert_eq!(
            delta_wrap(&w("ba")).awa_minus_bw,
            positivity_report(&w("ba")).wrap_combination
        );
    }

    #[test]
    fn flip_prefix_delta_examples() {
        let e = BinaryWord::empty();
        assert_eq!(flip_prefix_delta(&e, &e).unwrap(), p("q + q^4"));
        // row vector (0, q + q^4) times mu_q(a) times (0, 1)^T
        let a = mu_q(&w("a"));
        let expected = p("q + q^4") * &a.e22;
        assert_eq!(flip_prefix_delta(&e, &w("a")).unwrap(), expected);
        assert!(flip_prefix_delta(&w("a"), &w("ab"))
            .unwrap()
            .is_nonneg_nonzero());
        assert_eq!(
            flip_prefix_delta(&w("ab"), &w("ba")),
            Err(Error::PrefixPrecondition(w("ab"), w("ba")))
        );
    }

    #[test]
    fn christoffel_node_examples() {
        assert_eq!(christoffel_node(&TreePath::root()).word, w("ab"));
        assert_eq!(christoffel_node(&path("L")).word, w("aab"));
        let n = christoffel_node(&path("LR"));
        assert_eq!(
            (n.u.clone(), n.v.clone(), n.word),
            (w("aab"), w("ab"), w("aabab"))
        );
    }

    #[test]
    fn markoff_triple_examples() {
        assert_eq!(
            markoff_triple(&TreePath::root()),
            MarkoffTriple::new(1, 5, 2)
        );
        assert_eq!(markoff_triple(&path("L")), MarkoffTriple::new(1, 13, 5));
        assert_eq!(markoff_triple(&path("LR")), MarkoffTriple::new(13, 194, 5));
    }

    #[test]
    fn morphism_law_exhaustive() {
        let words: Vec<_> = all_words_up_to(6).collect();
        let images: Vec<_> = words.iter().map(mu_q).collect();
        for (u, mu_u) in words.iter().zip(&images) {
            for (v, mu_v) in words.iter().zip(&images) {
                assert_eq!(mu_q(&u.concat(v)), qmat_mul(mu_u, mu_v));
            }
        }
    }

    #[test]
    fn specialization_and_determinant() {
        for word in all_words_up_to(10) {
            assert!(specializes_to_mu(&word), "{word}");
            assert_eq!(mu_q(&word).det(), det_mu_q(&word), "{word}");
        }
    }

    #[test]
    fn triples_match_words_to_depth_eight() {
        for depth in 0..=8 {
            for path in TreePath::all_of_depth(depth) {
                let t = markoff_triple(&path);
                assert!(t.satisfies_equation());
                assert!(t.is_proper());
                assert!(t.y > t.x && t.y > t.z);
                assert_eq!(t.y, markoff_number(&christoffel_node(&path).word));
            }
        }
    }

    #[test]
    fn tree_node_json_shape() {
        let nodes = tree_nodes(1);
        assert_eq!(nodes.len(), 3);
        let json = serde_json::to_string(&nodes[0]).unwrap();
        assert_eq!(
            json,
            r#"{"path":"","word":"ab","split":"a.b","triple":["1","5","2"],"q_markoff":"1 + q + 2*q^2 + q^3"}"#
        );
    }
}
