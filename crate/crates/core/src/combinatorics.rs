//! Injections, permutations, the integral group ring of 𝔖_n, shuffles and
//! left-nested Lie brackets.
//!
//! All maps are written on 1-based sets `[n] = {1, …, n}` and stored as
//! dense image tuples.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::formal::{parse_signed_sum, write_signed_sum, FormalSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatoricsError {
    #[error("invalid injection {images:?} into [{codomain}]: {reason}")]
    InvalidInjection { images: Vec<usize>, codomain: usize, reason: &'static str },
    #[error("cannot compose: codomain {left} does not match domain {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("index {index} out of range 1..={bound}")]
    OutOfRange { index: usize, bound: usize },
    #[error("shuffle factors share letters")]
    SharedLetters,
    #[error("malformed bracket product: {0}")]
    MalformedBracket(String),
    #[error("cannot parse injection {0:?}")]
    Parse(String),
}

pub type Result<T, E = CombinatoricsError> = std::result::Result<T, E>;

/// Writes a letter of one-line notation, parenthesizing multi-digit values.
pub(crate) fn write_letter(f: &mut fmt::Formatter<'_>, v: usize) -> fmt::Result {
    if v < 10 {
        write!(f, "{v}")
    } else {
        write!(f, "({v})")
    }
}

/// A morphism `[k] → [n]` of FI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Injection {
    codomain: usize,
    images: Vec<usize>,
}

impl Injection {
    pub fn new(images: Vec<usize>, codomain: usize) -> Result<Self> {
        let invalid = |reason| CombinatoricsError::InvalidInjection { images: images.clone(), codomain, reason };
        if images.iter().any(|&v| v == 0 || v > codomain) {
            return Err(invalid("image outside codomain"));
        }
        let distinct: BTreeSet<_> = images.iter().collect();
        if distinct.len() != images.len() {
            return Err(invalid("repeated image"));
        }
        Ok(Self { codomain, images })
    }

    pub(crate) fn new_unchecked(images: Vec<usize>, codomain: usize) -> Self {
        debug_assert!(Self::new(images.clone(), codomain).is_ok());
        Self { codomain, images }
    }

    pub fn identity(n: usize) -> Self {
        Self::new_unchecked((1..=n).collect(), n)
    }

    /// The inclusion `[k] ⊆ [n]`.
    pub fn inclusion(k: usize, n: usize) -> Result<Self> {
        Self::new((1..=k).collect(), n)
    }

    /// Parses the bracketed form `[3,1]`; the codomain is not part of the text.
    pub fn parse(text: &str, codomain: usize) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| CombinatoricsError::Parse(text.to_string()))?;
        let images = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| CombinatoricsError::Parse(text.to_string()))?
        };
        Self::new(images, codomain)
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `f(i)` for `1 ≤ i ≤ k`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_monotone(&self) -> bool {
        self.images.windows(2).all(|w| w[0] < w[1])
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &Injection) -> Result<Injection> {
        compose(self, g)
    }

    /// Position of `self` in [`enumerate_injections`] order.
    pub fn lex_index(&self) -> usize {
        let (k, n) = (self.images.len(), self.codomain);
        let mut used = vec![false; n + 1];
        let mut idx = 0;
        for (i, &v) in self.images.iter().enumerate() {
            let smaller = (1..v).filter(|&u| !used[u]).count();
            let tail: usize = (n - k + 1..n - i).product();
            idx += smaller * tail;
            used[v] = true;
        }
        idx
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        (self.domain_size() == self.codomain).then(|| Permutation(self.images.clone()))
    }
}

impl fmt::Display for Injection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Ordinary composition `g ∘ f` of `f: [a] → [b]` and `g: [b] → [c]`.
pub fn compose(f: &Injection, g: &Injection) -> Result<Injection> {
    if f.codomain != g.domain_size() {
        return Err(CombinatoricsError::SizeMismatch { left: f.codomain, right: g.domain_size() });
    }
    Ok(Injection { codomain: g.codomain, images: f.images.iter().map(|&v| g.apply(v)).collect() })
}

/// The monotone injection `[n−1] → [n]` that skips `i`.
pub fn delta(i: usize, n: usize) -> Result<Injection> {
    if i == 0 || i > n {
        return Err(CombinatoricsError::OutOfRange { index: i, bound: n });
    }
    Ok(Injection::new_unchecked((1..=n).filter(|&v| v != i).collect(), n))
}

/// Writes `f = h ∘ σ` with `σ` a permutation of the domain and `h` monotone.
pub fn oi_decompose(f: &Injection) -> (Permutation, Injection) {
    let mut sorted = f.images.clone();
    sorted.sort_unstable();
    let sigma = f.images.iter().map(|v| sorted.binary_search(v).expect("image present") + 1).collect();
    (Permutation(sigma), Injection::new_unchecked(sorted, f.codomain))
}

/// All injections `[k] → [n]`, lexicographic in their image tuples.
pub fn enumerate_injections(k: usize, n: usize) -> Vec<Injection> {
    fn rec(k: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Injection>) {
        if cur.len() == k {
            out.push(Injection::new_unchecked(cur.clone(), n));
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(k, n, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(k, n, &mut vec![false; n + 1], &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// A bijection of `[n]` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        Injection::new(images, n).map(|f| Permutation(f.images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// Parses one-line notation such as `312` or `(10)21…`; `()` is empty.
    pub fn parse(text: &str) -> Result<Self> {
        let err = || CombinatoricsError::Parse(text.to_string());
        let text = text.trim();
        if text == "()" {
            return Ok(Permutation(Vec::new()));
        }
        let mut images = Vec::new();
        let mut chars = text.chars();
        while let Some(c) = chars.next() {
            if c == '(' {
                let inner: String = chars.by_ref().take_while(|&c| c != ')').collect();
                images.push(inner.trim().parse().map_err(|_| err())?);
            } else {
                images.push(c.to_digit(10).ok_or_else(err)? as usize);
            }
        }
        Permutation::new(images)
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.size(), other.size(), "permutation sizes differ");
        Permutation(other.0.iter().map(|&v| self.apply(v)).collect())
    }

    pub fn is_derangement(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| v != i + 1)
    }

    pub fn to_injection(&self) -> Injection {
        Injection::new_unchecked(self.0.clone(), self.0.len())
    }

    pub fn all(n: usize) -> Vec<Permutation> {
        enumerate_injections(n, n).into_iter().map(|f| Permutation(f.images)).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        for &v in &self.0 {
            write_letter(f, v)?;
        }
        Ok(())
    }
}

/// An element of the integral group ring ℤ𝔖_n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    size: usize,
    terms: FormalSum<Permutation>,
}

impl GroupRingElement {
    pub fn zero(size: usize) -> Self {
        Self { size, terms: FormalSum::new() }
    }

    pub fn identity(size: usize) -> Self {
        Self::from_permutation(Permutation::identity(size))
    }

    pub fn from_permutation(p: Permutation) -> Self {
        Self { size: p.size(), terms: FormalSum::singleton(p) }
    }

    pub fn from_terms(size: usize, terms: FormalSum<Permutation>) -> Result<Self> {
        if let Some(p) = terms.keys().find(|p| p.size() != size) {
            return Err(CombinatoricsError::SizeMismatch { left: size, right: p.size() });
        }
        Ok(Self { size, terms })
    }

    /// Parses a signed sum of one-line permutations, e.g. `12 - 21`.
    pub fn parse(size: usize, text: &str) -> Result<Self> {
        let parsed =
            parse_signed_sum(text, Permutation::parse).map_err(|_| CombinatoricsError::Parse(text.to_string()))?;
        let mut terms = FormalSum::new();
        for (c, p) in parsed {
            if p.size() != size {
                return Err(CombinatoricsError::SizeMismatch { left: size, right: p.size() });
            }
            terms.add_term(p, c);
        }
        Ok(Self { size, terms })
    }

    /// Builds an element from signed one-line words, e.g. `[(1, [1,2,3]), (-1, [2,1,3])]`.
    pub fn from_words<I>(size: usize, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Vec<usize>)>,
    {
        let mut terms = FormalSum::new();
        for (c, w) in words {
            let p = Permutation::new(w)?;
            if p.size() != size {
                return Err(CombinatoricsError::SizeMismatch { left: size, right: p.size() });
            }
            terms.add_term(p, BigInt::from(c));
        }
        Ok(Self { size, terms })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn terms(&self) -> &FormalSum<Permutation> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn coeff(&self, p: &Permutation) -> BigInt {
        self.terms.coeff(p)
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        Self { size: self.size, terms: self.terms.plus(&other.terms) }
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        Self { size: self.size, terms: self.terms.minus(&other.terms) }
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        Self { size: self.size, terms: self.terms.scaled(c) }
    }

    /// The bilinear extension of `(σ, τ) ↦ σ ∘ τ`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "group ring sizes differ");
        let mut terms = FormalSum::new();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                terms.add_term(s.compose(t), a * b);
            }
        }
        Self { size: self.size, terms }
    }

    /// The linear map sending every permutation to its inverse.
    pub fn invert(&self) -> Self {
        Self { size: self.size, terms: self.terms.map_keys(|p| Some(p.inverse())) }
    }

    /// Coordinates in the basis `Permutation::all(size)`.
    pub fn to_dense(&self) -> Vec<BigInt> {
        Permutation::all(self.size).iter().map(|p| self.terms.coeff(p)).collect()
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_sum(f, &self.terms, |f, p| write!(f, "{p}"))
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement[{}]({self})", self.size)
    }
}

/// All interleavings of `w1` and `w2` that keep the internal order of each.
pub fn shuffle<T: Clone + Ord>(w1: &[T], w2: &[T]) -> Result<FormalSum<Vec<T>>> {
    let left: BTreeSet<&T> = w1.iter().collect();
    if w2.iter().any(|t| left.contains(t)) {
        return Err(CombinatoricsError::SharedLetters);
    }
    Ok(shuffle_words(w1, w2).into_iter().map(|w| (w, BigInt::one())).collect())
}

/// Interleavings in lexicographic order of the positions taken by `w1`.
pub(crate) fn shuffle_words<T: Clone>(w1: &[T], w2: &[T]) -> Vec<Vec<T>> {
    fn rec<T: Clone>(w1: &[T], w2: &[T], cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if w1.is_empty() && w2.is_empty() {
            out.push(cur.clone());
            return;
        }
        if let Some((h, rest)) = w1.split_first() {
            cur.push(h.clone());
            rec(rest, w2, cur, out);
            cur.pop();
        }
        if let Some((h, rest)) = w2.split_first() {
            cur.push(h.clone());
            rec(w1, rest, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w1, w2, &mut Vec::with_capacity(w1.len() + w2.len()), &mut out);
    out
}

/// The left-nested bracket `[[…[s1, s2], …], sr]`, stored as `s1 … sr`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bracket(Vec<usize>);

impl Bracket {
    /// Requires at least two distinct letters with the smallest one first.
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.len() < 2 {
            return Err(CombinatoricsError::MalformedBracket(format!(
                "bracket {letters:?} has fewer than two letters"
            )));
        }
        let distinct: BTreeSet<_> = letters.iter().collect();
        if distinct.len() != letters.len() {
            return Err(CombinatoricsError::MalformedBracket(format!("bracket {letters:?} repeats a letter")));
        }
        if letters[0] != **distinct.iter().next().unwrap() {
            return Err(CombinatoricsError::MalformedBracket(format!(
                "bracket {letters:?} does not start with its minimum"
            )));
        }
        Ok(Bracket(letters))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// The first, and smallest, letter.
    pub fn min_letter(&self) -> usize {
        self.0[0]
    }

    /// The `2^(r−1)` signed words of the expanded commutator.
    pub fn expand(&self) -> FormalSum<Vec<usize>> {
        let mut acc = FormalSum::singleton(vec![self.0[0]]);
        for &s in &self.0[1..] {
            let mut next = FormalSum::new();
            for (w, c) in &acc {
                let mut ws = w.clone();
                ws.push(s);
                next.add_term(ws, c.clone());
                let mut sw = Vec::with_capacity(w.len() + 1);
                sw.push(s);
                sw.extend_from_slice(w);
                next.add_term(sw, -c.clone());
            }
            acc = next;
        }
        acc
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Checks that brackets are disjoint and sorted by their minima.
pub(crate) fn check_bracket_blocks(blocks: &[Bracket]) -> Result<BTreeSet<usize>> {
    let mut seen = BTreeSet::new();
    for b in blocks {
        for &s in &b.0 {
            if !seen.insert(s) {
                return Err(CombinatoricsError::MalformedBracket(format!("letter {s} appears in two blocks")));
            }
        }
    }
    if blocks.windows(2).any(|w| w[0].min_letter() >= w[1].min_letter()) {
        return Err(CombinatoricsError::MalformedBracket("blocks are not sorted by their minima".into()));
    }
    Ok(seen)
}

/// `prefix · B1 · B2 ⋯ Bk` expanded into signed words (concatenation product).
pub(crate) fn expand_product_words(prefix: &[usize], blocks: &[Bracket]) -> FormalSum<Vec<usize>> {
    let mut acc = FormalSum::singleton(prefix.to_vec());
    for b in blocks {
        let e = b.expand();
        let mut next = FormalSum::new();
        for (w, c) in &acc {
            for (v, d) in &e {
                let mut wv = w.clone();
                wv.extend_from_slice(v);
                next.add_term(wv, c * d);
            }
        }
        acc = next;
    }
    acc
}

/// Expands a product of brackets partitioning `[n]` into an element of ℤ𝔖_n.
pub fn expand_bracket_product(blocks: &[Bracket]) -> Result<GroupRingElement> {
    let letters = check_bracket_blocks(blocks)?;
    let n = letters.len();
    if letters.iter().copied().ne(1..=n) {
        return Err(CombinatoricsError::MalformedBracket(format!("blocks do not cover [{n}] exactly")));
    }
    let terms = expand_product_words(&[], blocks).map_keys(|w| Some(Permutation(w.clone())));
    Ok(GroupRingElement { size: n, terms })
}

/// Products of brackets `L(S_1)⋯L(S_k)` over set partitions of `letters` into
/// blocks of size ≥ 2, sorted by block count and then by the flattened word.
pub fn bracket_basis(letters: &[usize]) -> Vec<Vec<Bracket>> {
    fn orderings(rest: &[usize]) -> Vec<Vec<usize>> {
        if rest.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (i, &x) in rest.iter().enumerate() {
            let mut others = rest.to_vec();
            others.remove(i);
            for mut tail in orderings(&others) {
                tail.insert(0, x);
                out.push(tail);
            }
        }
        out
    }
    fn rec(remaining: &[usize], cur: &mut Vec<Bracket>, out: &mut Vec<Vec<Bracket>>) {
        let Some((&first, others)) = remaining.split_first() else {
            out.push(cur.clone());
            return;
        };
        let m = others.len();
        for mask in 1u64..(1u64 << m) {
            let chosen: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| others[b]).collect();
            let left: Vec<usize> = (0..m).filter(|b| mask >> b & 1 == 0).map(|b| others[b]).collect();
            for ord in orderings(&chosen) {
                let mut letters = vec![first];
                letters.extend(ord);
                cur.push(Bracket(letters));
                rec(&left, cur, out);
                cur.pop();
            }
        }
    }
    let mut sorted = letters.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = Vec::new();
    rec(&sorted, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        let flat = |p: &Vec<Bracket>| p.iter().flat_map(|b| b.0.clone()).collect::<Vec<_>>();
        a.len().cmp(&b.len()).then_with(|| flat(a).cmp(&flat(b)))
    });
    out
}

/// Number of fixed-point-free permutations of `[n]`.
pub fn derangements(n: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::one(), BigUint::zero());
    if n == 0 {
        return prev;
    }
    for k in 2..=n {
        let next = BigUint::from(k - 1) * (&cur + &prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `n! / (n−k)!`, zero when `k > n`.
pub fn falling_factorial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    ((n - k + 1)..=n).fold(BigUint::one(), |acc, v| acc * BigUint::from(v))
}

/// `C(n, k)` for integer `k`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: usize, k: i64) -> BigUint {
    if k < 0 || k as usize > n {
        return BigUint::zero();
    }
    let k = k as usize;
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// The ballot number `C(n, ℓ) − C(n, ℓ−1)`, possibly negative.
pub fn ballot(n: usize, ell: usize) -> BigInt {
    BigInt::from(binomial(n, ell as i64)) - BigInt::from(binomial(n, ell as i64 - 1))
}
