//! The FI^op-modules Ξ(ℓ).
//!
//! A basis word of Ξ(ℓ)_n arranges the numbered letters `1, …, ℓ` and the
//! real letters `x_1, …, x_{n−ℓ}`, each exactly once. An injection `f: [m] → [n]`
//! acts by reading the letters at positions `f(1), …, f(m)`; the result is zero
//! if a numbered letter is lost, and otherwise the surviving real letters are
//! relabeled by their relative order.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinatorics::{delta, GroupRingElement, Injection, Permutation};
use crate::formal::{parse_signed_sum, write_signed_sum, FormalSum};
use crate::linalg::{kernel_saturated, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XiError {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("cannot parse {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

pub type Result<T, E = XiError> = std::result::Result<T, E>;

/// A letter of a Ξ-word. Numbered letters sort before real ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Fixed(usize),
    Real(usize),
}

impl Letter {
    /// Position of the letter in the alphabet `1 < … < ℓ < x_1 < x_2 < …`.
    pub fn value(self, ell: usize) -> usize {
        match self {
            Letter::Fixed(j) => j,
            Letter::Real(i) => ell + i,
        }
    }

    pub fn from_value(v: usize, ell: usize) -> Letter {
        if v <= ell {
            Letter::Fixed(v)
        } else {
            Letter::Real(v - ell)
        }
    }
}

fn write_index(f: &mut fmt::Formatter<'_>, i: usize) -> fmt::Result {
    if i < 10 {
        write!(f, "{i}")
    } else {
        write!(f, "({i})")
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Letter::Fixed(j) => write_index(f, j),
            Letter::Real(i) => {
                write!(f, "x")?;
                write_index(f, i)
            }
        }
    }
}

/// Parses a run of letters such as `2x11x2` or `(10)x(12)`.
pub(crate) fn parse_letters(text: &str) -> Result<Vec<Letter>> {
    let err = |reason: &str| XiError::Parse { text: text.to_string(), reason: reason.to_string() };
    if text.trim() == "()" {
        return Ok(Vec::new());
    }
    let chars: Vec<char> = text.trim().chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let read_index = |i: &mut usize| -> Result<usize> {
        match chars.get(*i) {
            Some('(') => {
                let close = chars[*i..].iter().position(|&c| c == ')').ok_or_else(|| err("unclosed parenthesis"))?;
                let inner: String = chars[*i + 1..*i + close].iter().collect();
                *i += close + 1;
                inner.trim().parse().map_err(|_| err("bad letter index"))
            }
            Some(c) if c.is_ascii_digit() => {
                *i += 1;
                Ok(c.to_digit(10).unwrap() as usize)
            }
            _ => Err(err("expected a letter index")),
        }
    };
    while i < chars.len() {
        if chars[i] == 'x' {
            i += 1;
            out.push(Letter::Real(read_index(&mut i)?));
        } else {
            out.push(Letter::Fixed(read_index(&mut i)?));
        }
    }
    Ok(out)
}

/// A basis word of Ξ(ℓ)_n.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XiWord {
    ell: usize,
    letters: Vec<Letter>,
}

impl XiWord {
    pub fn new(ell: usize, letters: Vec<Letter>) -> Result<Self> {
        let n = letters.len();
        if n < ell {
            return Err(XiError::InvalidWord(format!("{n} letters cannot hold {ell} numbered letters")));
        }
        let mut seen = vec![false; n + 1];
        for l in &letters {
            let ok = match *l {
                Letter::Fixed(j) => (1..=ell).contains(&j),
                Letter::Real(i) => (1..=n - ell).contains(&i),
            };
            let v = l.value(ell);
            if !ok || seen[v] {
                return Err(XiError::InvalidWord(format!("letter {l} is out of range or repeated")));
            }
            seen[v] = true;
        }
        Ok(Self { ell, letters })
    }

    /// The distinguished word `ξ_{n,ℓ} = 1 … ℓ x_1 … x_{n−ℓ}`.
    pub fn xi(n: usize, ell: usize) -> Result<Self> {
        if n < ell {
            return Err(XiError::SizeMismatch { expected: ell, found: n });
        }
        Ok(Self::from_permutation(ell, &Permutation::identity(n)))
    }

    /// The word `σ·ξ_{n,ℓ}`, whose `i`-th letter is the `σ(i)`-th letter of the alphabet.
    pub fn from_permutation(ell: usize, sigma: &Permutation) -> Self {
        debug_assert!(sigma.size() >= ell);
        Self { ell, letters: sigma.images().iter().map(|&v| Letter::from_value(v, ell)).collect() }
    }

    /// Parses a word; `ℓ` is the number of numbered letters present.
    pub fn parse(text: &str) -> Result<Self> {
        let letters = parse_letters(text)?;
        let ell = letters.iter().filter(|l| matches!(l, Letter::Fixed(_))).count();
        Self::new(ell, letters).map_err(|e| XiError::Parse { text: text.to_string(), reason: e.to_string() })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn to_permutation(&self) -> Permutation {
        Permutation::new(self.letters.iter().map(|l| l.value(self.ell)).collect())
            .expect("words are bijections onto the alphabet")
    }

    /// Position of the word in [`xi_basis`] order.
    pub fn basis_index(&self) -> usize {
        let vals: Vec<usize> = self.letters.iter().map(|l| l.value(self.ell)).collect();
        let n = vals.len();
        let mut idx = 0;
        for i in 0..n {
            let smaller = vals[i + 1..].iter().filter(|&&v| v < vals[i]).count();
            idx = idx * (n - i) + smaller;
        }
        idx
    }

    /// The action of `f: [m] → [n]`, or `None` when a numbered letter is lost.
    pub fn act(&self, f: &Injection) -> Result<Option<XiWord>> {
        if f.codomain_size() != self.n() {
            return Err(XiError::SizeMismatch { expected: self.n(), found: f.codomain_size() });
        }
        let picked: Vec<Letter> = f.images().iter().map(|&p| self.letters[p - 1]).collect();
        Ok(standardize(self.ell, picked))
    }

    /// Appends `x_{k+1} … x_{k+r}` where `k` is the current number of real letters.
    pub fn extend_to(&self, n: usize) -> Result<XiWord> {
        let cur = self.n();
        if n < cur {
            return Err(XiError::SizeMismatch { expected: cur, found: n });
        }
        let reals = cur - self.ell;
        let mut letters = self.letters.clone();
        letters.extend((reals + 1..=reals + n - cur).map(Letter::Real));
        Ok(Self { ell: self.ell, letters })
    }
}

/// Relabels real letters by rank; `None` if some numbered letter is missing.
pub(crate) fn standardize(ell: usize, picked: Vec<Letter>) -> Option<XiWord> {
    let fixed = picked.iter().filter(|l| matches!(l, Letter::Fixed(_))).count();
    if fixed < ell {
        return None;
    }
    let mut reals: Vec<usize> = picked
        .iter()
        .filter_map(|l| match l {
            Letter::Real(i) => Some(*i),
            Letter::Fixed(_) => None,
        })
        .collect();
    reals.sort_unstable();
    let letters = picked
        .into_iter()
        .map(|l| match l {
            Letter::Real(i) => Letter::Real(reals.binary_search(&i).unwrap() + 1),
            fixed => fixed,
        })
        .collect();
    Some(XiWord { ell, letters })
}

impl fmt::Display for XiWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "()");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The basis of Ξ(ℓ)_n in lexicographic order; empty when `n < ℓ`.
pub fn xi_basis(ell: usize, n: usize) -> Vec<XiWord> {
    if n < ell {
        return Vec::new();
    }
    Permutation::all(n).iter().map(|p| XiWord::from_permutation(ell, p)).collect()
}

/// An element of Ξ(ℓ)_n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct XiVector {
    ell: usize,
    n: usize,
    terms: FormalSum<XiWord>,
}

impl XiVector {
    pub fn zero(ell: usize, n: usize) -> Self {
        Self { ell, n, terms: FormalSum::new() }
    }

    pub fn from_word(w: XiWord) -> Self {
        Self { ell: w.ell, n: w.n(), terms: FormalSum::singleton(w) }
    }

    /// `ξ_{n,ℓ}` as a vector.
    pub fn xi(n: usize, ell: usize) -> Result<Self> {
        XiWord::xi(n, ell).map(Self::from_word)
    }

    pub fn from_terms(ell: usize, n: usize, terms: FormalSum<XiWord>) -> Result<Self> {
        for w in terms.keys() {
            if w.ell != ell || w.n() != n {
                return Err(XiError::InvalidWord(format!("word {w} does not lie in Ξ({ell})_{n}")));
            }
        }
        Ok(Self { ell, n, terms })
    }

    /// `e·ξ_{n,ℓ}` for `e ∈ ℤ𝔖_n`.
    pub fn from_group_ring(ell: usize, e: &GroupRingElement) -> Result<Self> {
        if e.size() < ell {
            return Err(XiError::SizeMismatch { expected: ell, found: e.size() });
        }
        let terms = e.terms().map_keys(|p| Some(XiWord::from_permutation(ell, p)));
        Ok(Self { ell, n: e.size(), terms })
    }

    /// Coordinates in [`xi_basis`] order.
    pub fn from_dense(ell: usize, n: usize, coords: &[BigInt]) -> Result<Self> {
        let basis = xi_basis(ell, n);
        if coords.len() != basis.len() {
            return Err(XiError::SizeMismatch { expected: basis.len(), found: coords.len() });
        }
        let terms = basis.into_iter().zip(coords.iter().cloned()).collect();
        Ok(Self { ell, n, terms })
    }

    /// Parses a signed sum of words in Ξ(ℓ)_n, e.g. `x1x2 - x2x1`.
    pub fn parse(ell: usize, n: usize, text: &str) -> Result<Self> {
        let err = |reason: String| XiError::Parse { text: text.to_string(), reason };
        let parsed = parse_signed_sum(text, XiWord::parse).map_err(err)?;
        let terms = parsed.into_iter().map(|(c, w)| (w, c)).collect();
        Self::from_terms(ell, n, terms)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &FormalSum<XiWord> {
        &self.terms
    }

    pub fn coeff(&self, w: &XiWord) -> BigInt {
        self.terms.coeff(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    fn check_same_space(&self, other: &Self) {
        assert_eq!((self.ell, self.n), (other.ell, other.n), "vectors lie in different spaces");
    }

    pub fn plus(&self, other: &Self) -> Self {
        self.check_same_space(other);
        Self { ell: self.ell, n: self.n, terms: self.terms.plus(&other.terms) }
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.check_same_space(other);
        Self { ell: self.ell, n: self.n, terms: self.terms.minus(&other.terms) }
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        Self { ell: self.ell, n: self.n, terms: self.terms.scaled(c) }
    }

    /// The action of `f: [m] → [n]`, landing in Ξ(ℓ)_m.
    pub fn act(&self, f: &Injection) -> Result<XiVector> {
        if f.codomain_size() != self.n {
            return Err(XiError::SizeMismatch { expected: self.n, found: f.codomain_size() });
        }
        let m = f.domain_size();
        let terms = self.terms.map_keys(|w| w.act(f).expect("sizes checked"));
        Ok(Self { ell: self.ell, n: m, terms })
    }

    /// The unique `e ∈ ℤ𝔖_n` with `e·ξ_{n,ℓ} = self`.
    pub fn group_ring_coords(&self) -> GroupRingElement {
        let terms = self.terms.map_keys(|w| Some(w.to_permutation()));
        GroupRingElement::from_terms(self.n, terms).expect("all words have length n")
    }

    /// Extends every word by trailing real letters up to length `n`.
    pub fn extend_to(&self, n: usize) -> Result<XiVector> {
        if n < self.n {
            return Err(XiError::SizeMismatch { expected: self.n, found: n });
        }
        let terms = self.terms.map_keys(|w| Some(w.extend_to(n).expect("length checked")));
        Ok(Self { ell: self.ell, n, terms })
    }

    /// Coordinates in [`xi_basis`] order.
    pub fn to_dense(&self) -> Vec<BigInt> {
        let len = if self.n >= self.ell { (1..=self.n).product() } else { 0 };
        let mut out = vec![BigInt::zero(); len];
        for (w, c) in &self.terms {
            out[w.basis_index()] = c.clone();
        }
        out
    }
}

impl fmt::Display for XiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_sum(f, &self.terms, |f, w| write!(f, "{w}"))
    }
}

impl fmt::Debug for XiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XiVector(ℓ={}, n={}: {self})", self.ell, self.n)
    }
}

/// The matrix of `f^*: Ξ(ℓ)_n → Ξ(ℓ)_m` with rows `xi_basis(ℓ, m)` and columns `xi_basis(ℓ, n)`.
pub fn action_matrix(f: &Injection, ell: usize) -> IntMatrix {
    let (m, n) = (f.domain_size(), f.codomain_size());
    let rows = xi_basis(ell, m).len();
    let cols = xi_basis(ell, n);
    let mut mat = IntMatrix::zeros(rows, cols.len());
    for (j, w) in cols.iter().enumerate() {
        if let Some(img) = w.act(f).expect("sizes agree") {
            mat.add_to(img.basis_index(), j, &BigInt::one());
        }
    }
    mat
}

/// A basis of the derangement kernel `D_n ⊂ Ξ(0)_n`: the vectors killed by every `δ_i`.
pub fn d_kernel(n: usize) -> Vec<XiVector> {
    let cols = xi_basis(0, n).len();
    let mut stacked = IntMatrix::zeros(0, cols);
    for i in 1..=n {
        stacked = stacked.vstack(&action_matrix(&delta(i, n).expect("i in range"), 0));
    }
    kernel_saturated(&stacked)
        .into_iter()
        .map(|v| XiVector::from_dense(0, n, &v).expect("kernel vectors have the right length"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{
        bracket_basis, compose, derangements, enumerate_injections, expand_bracket_product, Bracket,
    };
    use crate::linalg::{lattice_contains, rank};
    use proptest::prelude::*;

    fn w(s: &str) -> XiWord {
        XiWord::parse(s).unwrap()
    }

    #[test]
    fn basis_listing_and_counts() {
        let b: Vec<String> = xi_basis(2, 3).iter().map(|w| w.to_string()).collect();
        assert_eq!(b, ["12x1", "1x12", "21x1", "2x11", "x112", "x121"]);
        assert!(xi_basis(4, 3).is_empty());
        assert_eq!(xi_basis(0, 3).len(), 6);
        for ell in 0..=5 {
            for n in 0..=7 {
                let expected = if n >= ell { (1..=n).product::<usize>() } else { 0 };
                assert_eq!(xi_basis(ell, n).len(), expected);
            }
        }
    }

    #[test]
    fn basis_index_matches_position() {
        for ell in 0..=3 {
            for (i, w) in xi_basis(ell, 4).iter().enumerate() {
                assert_eq!(w.basis_index(), i);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for s in ["12x1", "2x11x2", "()", "x21x1"] {
            let word = w(s);
            assert_eq!(word.to_string(), s);
        }
        assert_eq!(w("2x11x2").ell(), 2);
        assert!(XiWord::parse("11").is_err());
        assert!(XiWord::parse("x2").is_err());
        let v = XiVector::parse(0, 2, "x1x2 - 2*x2x1").unwrap();
        assert_eq!(v.to_string(), "x1x2 - 2*x2x1");
    }

    #[test]
    fn action_examples() {
        let f = Injection::new(vec![2, 3], 3).unwrap();
        assert_eq!(w("12x1").act(&f).unwrap(), None);
        let f = Injection::new(vec![3, 1], 3).unwrap();
        assert_eq!(w("x1x2x3").act(&f).unwrap(), Some(w("x2x1")));
        let id = Injection::identity(3);
        for word in xi_basis(1, 3) {
            assert_eq!(word.act(&id).unwrap(), Some(word.clone()));
        }
    }

    #[test]
    fn coords_examples() {
        assert_eq!(XiVector::xi(3, 1).unwrap().group_ring_coords(), GroupRingElement::identity(3));
        let coords = XiVector::from_word(w("x11")).group_ring_coords();
        assert_eq!(coords.to_string(), "21");
        let e = GroupRingElement::from_words(2, [(1, vec![1, 2]), (-1, vec![2, 1])]).unwrap();
        let v = XiVector::from_group_ring(0, &e).unwrap();
        assert_eq!(v.group_ring_coords().terms().len(), 2);
    }

    #[test]
    fn derangement_kernel_ranks() {
        let expected = [1, 0, 1, 2, 9, 44];
        for (n, &r) in expected.iter().enumerate() {
            assert_eq!(d_kernel(n).len(), r, "n = {n}");
        }
    }

    #[test]
    fn bracket_elements_lie_in_kernel() {
        let e = GroupRingElement::from_words(
            3,
            [(1, vec![1, 2, 3]), (-1, vec![2, 1, 3]), (-1, vec![2, 3, 1]), (1, vec![3, 2, 1])],
        )
        .unwrap();
        let v = XiVector::from_group_ring(0, &e).unwrap();
        for i in 1..=3 {
            assert!(v.act(&delta(i, 3).unwrap()).unwrap().is_zero());
        }
        for n in 2..=5 {
            let kernel: Vec<Vec<BigInt>> = d_kernel(n).iter().map(|v| v.to_dense()).collect();
            let gens = IntMatrix::from_columns(&kernel, (1..=n).product());
            let letters: Vec<usize> = (1..=n).collect();
            let basis = bracket_basis(&letters);
            assert_eq!(basis.len(), derangements(n).to_string().parse::<usize>().unwrap());
            let cols: Vec<Vec<BigInt>> = basis
                .iter()
                .map(|blocks: &Vec<Bracket>| {
                    let e = expand_bracket_product(blocks).unwrap().invert();
                    XiVector::from_group_ring(0, &e).unwrap().to_dense()
                })
                .collect();
            let vecs = IntMatrix::from_columns(&cols, gens.rows());
            assert_eq!(rank(&vecs), basis.len());
            assert!(lattice_contains(&gens, &vecs));
        }
    }

    fn arb_vector(ell: usize, n: usize) -> impl Strategy<Value = XiVector> {
        let len = xi_basis(ell, n).len();
        prop::collection::vec(-3i64..=3, len).prop_map(move |cs| {
            let cs: Vec<BigInt> = cs.into_iter().map(BigInt::from).collect();
            XiVector::from_dense(ell, n, &cs).unwrap()
        })
    }

    fn arb_injection(k: usize, n: usize) -> impl Strategy<Value = Injection> {
        let all = enumerate_injections(k, n);
        (0..all.len()).prop_map(move |i| all[i].clone())
    }

    proptest! {
        #[test]
        fn act_is_contravariant(
            (ell, k, m, n) in (0usize..=3).prop_flat_map(|ell| (Just(ell), ell..=4))
                .prop_flat_map(|(ell, k)| (Just(ell), Just(k), k..=5))
                .prop_flat_map(|(ell, k, m)| (Just(ell), Just(k), Just(m), m..=6)),
            seed in any::<u64>(),
        ) {
            let fs = enumerate_injections(k, m);
            let gs = enumerate_injections(m, n);
            let f = &fs[(seed as usize) % fs.len()];
            let g = &gs[((seed >> 20) as usize) % gs.len()];
            let word = &xi_basis(ell, n)[((seed >> 40) as usize) % xi_basis(ell, n).len()];
            let v = XiVector::from_word(word.clone());
            let lhs = v.act(g).unwrap().act(f).unwrap();
            let rhs = v.act(&compose(f, g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn coords_round_trip(v in (0usize..=3).prop_flat_map(|ell| (Just(ell), ell.max(1)..=5))
            .prop_flat_map(|(ell, n)| arb_vector(ell, n))) {
            let e = v.group_ring_coords();
            prop_assert_eq!(XiVector::from_group_ring(v.ell(), &e).unwrap(), v);
        }

        #[test]
        fn action_matrix_agrees_with_act(v in arb_vector(1, 4), f in arb_injection(3, 4)) {
            let mat = action_matrix(&f, 1);
            let lhs = mat.mul_vec(&v.to_dense());
            prop_assert_eq!(lhs, v.act(&f).unwrap().to_dense());
        }
    }
}
