//! The Catalan basis of ℤFI(k, n) and its matching pairing with injections.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::combinatorics::{enumerate_injections, Injection};
use crate::formal::FormalSum;
use crate::linalg::{determinant, unimodular_inverse, IntMatrix};
use crate::xi::{parse_letters, xi_basis, Letter, XiWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalanError {
    #[error("invalid Catalan function {values:?} into [{n}]")]
    InvalidFunction { values: Vec<usize>, n: usize },
    #[error("invalid Catalan basis element: {0}")]
    InvalidElement(String),
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("χ^-1 needs n ≥ 2k−1, got k = {k}, n = {n}")]
    OutsideStableRange { k: usize, n: usize },
    #[error("pairing matrix for k = {k}, n = {n} is not unimodular")]
    NotUnimodular { k: usize, n: usize },
}

pub type Result<T, E = CatalanError> = std::result::Result<T, E>;

/// A strictly increasing `c: [ℓ] → [n]` with `c(i) ≥ 2i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CatalanFunction {
    ell: usize,
    n: usize,
    values: Vec<usize>,
}

impl CatalanFunction {
    pub fn new(values: Vec<usize>, n: usize) -> Result<Self> {
        let ok = values.windows(2).all(|w| w[0] < w[1])
            && values.iter().enumerate().all(|(i, &v)| v >= 2 * (i + 1) && v <= n);
        if !ok {
            return Err(CatalanError::InvalidFunction { values, n });
        }
        Ok(Self { ell: values.len(), n, values })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `c(j)` for `1 ≤ j ≤ ℓ`.
    pub fn apply(&self, j: usize) -> usize {
        self.values[j - 1]
    }
}

/// All Catalan functions `[ℓ] → [n]`, lexicographic in their values.
pub fn catalan_set(ell: usize, n: usize) -> Vec<CatalanFunction> {
    fn rec(ell: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<CatalanFunction>) {
        let i = cur.len();
        if i == ell {
            out.push(CatalanFunction { ell, n, values: cur.clone() });
            return;
        }
        let lo = (2 * (i + 1)).max(cur.last().map_or(0, |v| v + 1));
        for v in lo..=n {
            cur.push(v);
            rec(ell, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(ell, n, &mut Vec::with_capacity(ell), &mut out);
    out
}

/// An element of CB^c_ℓ(k, n), stored as its Ξ(ℓ)_k word with numbered letter
/// `j` standing for `c(j)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CBElement {
    c: CatalanFunction,
    word: XiWord,
}

impl CBElement {
    pub fn new(c: CatalanFunction, word: XiWord) -> Result<Self> {
        if word.ell() != c.ell {
            return Err(CatalanError::InvalidElement(format!(
                "word {word} has {} numbered letters but c has {}",
                word.ell(),
                c.ell
            )));
        }
        Ok(Self { c, word })
    }

    /// Parses the printed form, e.g. `x152x2` in CB(4, 5).
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let bad = |reason: String| CatalanError::InvalidElement(format!("{text:?}: {reason}"));
        let letters = parse_letters(text).map_err(|e| bad(e.to_string()))?;
        let mut values: Vec<usize> = letters
            .iter()
            .filter_map(|l| match l {
                Letter::Fixed(v) => Some(*v),
                Letter::Real(_) => None,
            })
            .collect();
        values.sort_unstable();
        let c = CatalanFunction::new(values, n)?;
        let relabeled = letters
            .into_iter()
            .map(|l| match l {
                Letter::Fixed(v) => Letter::Fixed(c.values.binary_search(&v).unwrap() + 1),
                real => real,
            })
            .collect();
        let word = XiWord::new(c.ell, relabeled).map_err(|e| bad(e.to_string()))?;
        Ok(Self { c, word })
    }

    pub fn catalan_function(&self) -> &CatalanFunction {
        &self.c
    }

    pub fn word(&self) -> &XiWord {
        &self.word
    }

    pub fn ell(&self) -> usize {
        self.c.ell
    }

    pub fn k(&self) -> usize {
        self.word.n()
    }

    pub fn n(&self) -> usize {
        self.c.n
    }

    /// The action of `g: [k'] → [k]`; `None` when a value of `c` is lost.
    pub fn act(&self, g: &Injection) -> Result<Option<CBElement>> {
        let img = self
            .word
            .act(g)
            .map_err(|_| CatalanError::SizeMismatch { expected: self.k(), found: g.codomain_size() })?;
        Ok(img.map(|word| CBElement { c: self.c.clone(), word }))
    }
}

impl fmt::Display for CBElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.n() == 0 {
            return write!(f, "()");
        }
        for l in self.word.letters() {
            match *l {
                Letter::Fixed(j) => write!(f, "{}", Letter::Fixed(self.c.apply(j)))?,
                real => write!(f, "{real}")?,
            }
        }
        Ok(())
    }
}

fn basis_up_to(k: usize, n: usize, max_ell: usize) -> Vec<CBElement> {
    let mut out = Vec::new();
    for ell in 0..=max_ell.min(k) {
        let words = xi_basis(ell, k);
        for c in catalan_set(ell, n) {
            for w in &words {
                out.push(CBElement { c: c.clone(), word: w.clone() });
            }
        }
    }
    out
}

/// CB(k, n), ordered by ℓ, then `c`, then word.
pub fn cb_basis(k: usize, n: usize) -> Vec<CBElement> {
    basis_up_to(k, n, k)
}

/// CB'(k, n): the part of CB(k, n) with `ℓ ≤ min(k, n − k)`.
pub fn cb_prime_basis(k: usize, n: usize) -> Vec<CBElement> {
    if k > n {
        return Vec::new();
    }
    basis_up_to(k, n, n - k)
}

/// Whether `f` agrees with `π` on numbered positions and with the order of
/// its real letters elsewhere.
pub fn matches(f: &Injection, pi: &CBElement) -> bool {
    if f.domain_size() != pi.k() || f.codomain_size() != pi.n() {
        return false;
    }
    let mut reals: Vec<(usize, usize)> = Vec::new();
    for (pos, l) in pi.word.letters().iter().enumerate() {
        let v = f.images()[pos];
        match *l {
            Letter::Fixed(j) => {
                if v != pi.c.apply(j) {
                    return false;
                }
            }
            Letter::Real(i) => reals.push((i, v)),
        }
    }
    reals.sort_unstable();
    reals.windows(2).all(|w| w[0].1 < w[1].1)
}

fn chi_over(f: &Injection, basis: &[CBElement]) -> FormalSum<CBElement> {
    basis.iter().filter(|pi| matches(f, pi)).map(|pi| (pi.clone(), BigInt::one())).collect()
}

/// `χ(f)`: the sum of the CB'(k, n) elements matched by `f`.
pub fn chi(f: &Injection) -> FormalSum<CBElement> {
    chi_over(f, &cb_prime_basis(f.domain_size(), f.codomain_size()))
}

/// The same sum taken over all of CB(k, n).
pub fn chi_full(f: &Injection) -> FormalSum<CBElement> {
    chi_over(f, &cb_basis(f.domain_size(), f.codomain_size()))
}

/// The matching matrix between FI(k, n) (rows) and CB'(k, n) (columns).
#[derive(Debug)]
pub struct Pairing {
    k: usize,
    n: usize,
    injections: Vec<Injection>,
    basis: Vec<CBElement>,
    matrix: IntMatrix,
    inverse: OnceLock<Option<IntMatrix>>,
}

impl Pairing {
    pub fn new(k: usize, n: usize) -> Self {
        let injections = enumerate_injections(k, n);
        let basis = cb_prime_basis(k, n);
        let mut matrix = IntMatrix::zeros(injections.len(), basis.len());
        for (i, f) in injections.iter().enumerate() {
            for (j, pi) in basis.iter().enumerate() {
                if matches(f, pi) {
                    matrix.set(i, j, BigInt::one());
                }
            }
        }
        Self { k, n, injections, basis, matrix, inverse: OnceLock::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn injections(&self) -> &[Injection] {
        &self.injections
    }

    pub fn basis(&self) -> &[CBElement] {
        &self.basis
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_square(&self) -> bool {
        self.matrix.rows() == self.matrix.cols()
    }

    pub fn determinant(&self) -> Option<BigInt> {
        self.is_square().then(|| determinant(&self.matrix))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_some_and(|d| d.magnitude().is_one())
    }

    fn inverse(&self) -> Option<&IntMatrix> {
        self.inverse.get_or_init(|| unimodular_inverse(&self.matrix)).as_ref()
    }

    /// `χ^{-1}(π)` as a combination of injections.
    pub fn chi_inverse_column(&self, pi: &CBElement) -> Result<FormalSum<Injection>> {
        if self.n + 1 < 2 * self.k {
            return Err(CatalanError::OutsideStableRange { k: self.k, n: self.n });
        }
        let j = self
            .basis
            .binary_search(pi)
            .map_err(|_| CatalanError::InvalidElement(format!("{pi} is not in CB'({}, {})", self.k, self.n)))?;
        let inv = self.inverse().ok_or(CatalanError::NotUnimodular { k: self.k, n: self.n })?;
        Ok(self
            .injections
            .iter()
            .zip(inv.row(j))
            .filter(|(_, c)| !c.is_zero())
            .map(|(f, c)| (f.clone(), c.clone()))
            .collect())
    }
}

/// `χ^{-1}(π)` for `π ∈ CB(k, n)` with `n ≥ 2k − 1`.
pub fn chi_inverse_column(pi: &CBElement) -> Result<FormalSum<Injection>> {
    Pairing::new(pi.k(), pi.n()).chi_inverse_column(pi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{binomial, compose, falling_factorial};
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn values(v: &[CatalanFunction]) -> Vec<Vec<usize>> {
        v.iter().map(|c| c.values().to_vec()).collect()
    }

    #[test]
    fn catalan_sets() {
        assert_eq!(catalan_set(0, 5).len(), 1);
        assert_eq!(values(&catalan_set(1, 4)), [[2], [3], [4]]);
        assert_eq!(values(&catalan_set(2, 4)), [[2, 4], [3, 4]]);
        for n in 0..=9 {
            for ell in 0..=n {
                let expected = BigInt::from(binomial(n, ell as i64)) - BigInt::from(binomial(n, ell as i64 - 1));
                let expected = if expected < BigInt::zero() { BigInt::zero() } else { expected };
                assert_eq!(BigInt::from(catalan_set(ell, n).len()), expected, "ell={ell} n={n}");
            }
        }
    }

    #[test]
    fn cb_sizes() {
        for k in 0..=5 {
            for n in 0..=9 {
                assert_eq!(BigUint::from(cb_prime_basis(k, n).len()), falling_factorial(n, k), "k={k} n={n}");
                if n + 1 >= 2 * k {
                    assert_eq!(cb_basis(k, n), cb_prime_basis(k, n));
                }
            }
        }
        assert!(catalan_set(3, 5).is_empty());
        assert_eq!(cb_prime_basis(2, 3).len(), 6);
    }

    #[test]
    fn matching_examples() {
        let pi = CBElement::parse("x152x2", 5).unwrap();
        assert_eq!(pi.ell(), 2);
        assert_eq!(pi.to_string(), "x152x2");
        let matchers: Vec<String> = enumerate_injections(4, 5)
            .into_iter()
            .filter(|f| matches(f, &pi))
            .map(|f| f.images().iter().map(|v| v.to_string()).collect())
            .collect();
        assert_eq!(matchers, ["1523", "1524", "3524"]);
        assert!(matches(&Injection::new(vec![1, 5, 2, 3], 5).unwrap(), &pi));
        assert!(!matches(&Injection::new(vec![4, 5, 2, 3], 5).unwrap(), &pi));
    }

    #[test]
    fn small_pairings_are_unimodular() {
        let p = Pairing::new(0, 4);
        assert_eq!(p.matrix(), &IntMatrix::identity(1));
        for k in 0..=3 {
            for n in k..=6 {
                let p = Pairing::new(k, n);
                assert!(p.is_square());
                assert!(p.is_unimodular(), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn chi_inverse_pairs_dually() {
        let p = Pairing::new(2, 4);
        for pi in p.basis() {
            let inv = p.chi_inverse_column(pi).unwrap();
            let mut image = FormalSum::new();
            for (f, c) in &inv {
                image.add_assign_scaled(&chi(f), c);
            }
            assert_eq!(image, FormalSum::singleton(pi.clone()));
        }
        let p = Pairing::new(3, 4);
        assert!(matches!(p.chi_inverse_column(&p.basis()[0]), Err(CatalanError::OutsideStableRange { .. })));
    }

    #[test]
    fn chi_is_natural_exhaustively() {
        for k in 0..=3 {
            for n in k..=6 {
                for kp in 0..=k {
                    let gs = enumerate_injections(kp, k);
                    for f in enumerate_injections(k, n) {
                        let chif = chi_full(&f);
                        for g in &gs {
                            let lhs = chi_full(&compose(g, &f).unwrap());
                            let rhs: FormalSum<CBElement> =
                                chif.iter().filter_map(|(pi, c)| pi.act(g).unwrap().map(|p| (p, c.clone()))).collect();
                            assert_eq!(lhs, rhs, "k={k} n={n} f={f} g={g}");
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn chi_then_inverse_is_identity(coeffs in prop::collection::vec(-5i64..=5, 20)) {
            let p = Pairing::new(2, 5);
            let mut image = FormalSum::new();
            for (f, c) in p.injections().iter().zip(&coeffs) {
                image.add_assign_scaled(&chi(f), &BigInt::from(*c));
            }
            let mut back = FormalSum::new();
            for (pi, c) in &image {
                back.add_assign_scaled(&p.chi_inverse_column(pi).unwrap(), c);
            }
            let expected: FormalSum<Injection> = p
                .injections()
                .iter()
                .zip(&coeffs)
                .map(|(f, c)| (f.clone(), BigInt::from(*c)))
                .collect();
            prop_assert_eq!(back, expected);
        }
    }
}
