//! Hom-spaces of FJ through the Lie-bracket basis.
//!
//! A basis element of FJ(ℓ, m) at level `d` is an injection `f: [m] → [d]`
//! together with a product of left-nested brackets on `[d] \ im f`. Its value
//! on `ξ_{n,ℓ}` is computed from the inverted expansion of the word
//! `f(1)…f(m)·B_1⋯B_k`, extended by trailing real letters and precomposed with
//! the shuffle map `u_{ℓ,d}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::combinatorics::{
    bracket_basis, check_bracket_blocks, enumerate_injections, expand_product_words, Bracket, GroupRingElement,
    Injection, Permutation,
};
use crate::formal::FormalSum;
use crate::linalg::{solve, IntMatrix};
use crate::xi::{Letter, XiVector, XiWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FjError {
    #[error("invalid basis element: {0}")]
    InvalidElement(String),
    #[error("degree {n} is below the level {level}")]
    BelowLevel { n: usize, level: usize },
    #[error("need ℓ ≤ d ≤ n, got ℓ = {ell}, d = {d}, n = {n}")]
    Range { ell: usize, d: usize, n: usize },
    #[error("morphisms do not compose: target {left} vs source {right}")]
    Mismatch { left: usize, right: usize },
    #[error("cannot parse basis element {0:?}")]
    Parse(String),
}

pub type Result<T, E = FjError> = std::result::Result<T, E>;

/// A basis morphism `ℓ → m` of FJ at level `d`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FJBasisElement {
    source: usize,
    target: usize,
    level: usize,
    f: Injection,
    blocks: Vec<Bracket>,
}

impl FJBasisElement {
    pub fn new(source: usize, f: Injection, blocks: Vec<Bracket>) -> Result<Self> {
        let bad = |msg: String| FjError::InvalidElement(msg);
        let (target, level) = (f.domain_size(), f.codomain_size());
        if level < source {
            return Err(bad(format!("level {level} is below the source {source}")));
        }
        let letters = check_bracket_blocks(&blocks).map_err(|e| bad(e.to_string()))?;
        let mut expected: Vec<usize> = (1..=level).filter(|v| !f.images().contains(v)).collect();
        expected.sort_unstable();
        if letters.iter().copied().ne(expected.iter().copied()) {
            return Err(bad(format!("blocks do not partition the complement {expected:?} of im f")));
        }
        Ok(Self { source, target, level, f, blocks })
    }

    /// The identity of `ℓ`.
    pub fn identity(ell: usize) -> Self {
        Self { source: ell, target: ell, level: ell, f: Injection::identity(ell), blocks: Vec::new() }
    }

    /// Parses `d=4 f=[3,1] blocks=[[2,4]]`; the source is not part of the text.
    pub fn parse(text: &str, source: usize) -> Result<Self> {
        let err = || FjError::Parse(text.to_string());
        let mut level = None;
        let mut f_text = None;
        let mut blocks_text = None;
        for field in text.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(err)?;
            match key {
                "d" => level = Some(value.parse::<usize>().map_err(|_| err())?),
                "f" => f_text = Some(value),
                "blocks" => blocks_text = Some(value),
                _ => return Err(err()),
            }
        }
        let (level, f_text, blocks_text) =
            (level.ok_or_else(err)?, f_text.ok_or_else(err)?, blocks_text.ok_or_else(err)?);
        let f = Injection::parse(f_text, level).map_err(|_| err())?;
        let inner = blocks_text.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(err)?;
        let mut blocks = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('[').ok_or_else(err)?;
            let close = body.find(']').ok_or_else(err)?;
            let letters = body[..close]
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| err())?;
            blocks.push(Bracket::new(letters).map_err(|_| err())?);
            rest = body[close + 1..].trim_start_matches(',').trim();
        }
        Self::new(source, f, blocks)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn injection(&self) -> &Injection {
        &self.f
    }

    pub fn blocks(&self) -> &[Bracket] {
        &self.blocks
    }

    /// The element of ℤ𝔖_d whose action on `ξ_{d,m}` is the value on `ξ_{d,ℓ}`.
    pub fn top_coords(&self) -> GroupRingElement {
        let words = expand_product_words(self.f.images(), &self.blocks);
        let terms = words.map_keys(|w| Some(Permutation::new(w.clone()).expect("a permutation word").inverse()));
        GroupRingElement::from_terms(self.level, terms).expect("words have length d")
    }

    /// The image of `ξ_{n,ℓ}` in Ξ(m)_n.
    pub fn evaluate_at_level(&self, n: usize) -> Result<XiVector> {
        if n < self.level {
            return Err(FjError::BelowLevel { n, level: self.level });
        }
        let top = XiVector::from_group_ring(self.target, &self.top_coords()).expect("d ≥ m");
        let ext = top.extend_to(n).expect("n ≥ d");
        if self.source == self.level {
            return Ok(ext);
        }
        let u = u_map(self.source, self.level, n)?;
        let mut out = XiVector::zero(self.target, n);
        for (w, c) in u.terms() {
            let moved = ext.act(&w.to_permutation().to_injection()).expect("sizes agree");
            out = out.plus(&moved.scaled(c));
        }
        Ok(out)
    }
}

impl fmt::Display for FJBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} f={} blocks=[", self.level, self.f)?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

/// Basis elements of FJ(ℓ, m) of level at most `max_level`, by level, then
/// injection, then bracket product.
pub fn fj_basis(ell: usize, m: usize, max_level: usize) -> Vec<FJBasisElement> {
    let mut out = Vec::new();
    for d in ell.max(m)..=max_level {
        out.extend(fj_basis_at_level(ell, m, d));
    }
    out
}

fn fj_basis_at_level(ell: usize, m: usize, d: usize) -> Vec<FJBasisElement> {
    let mut out = Vec::new();
    for f in enumerate_injections(m, d) {
        let complement: Vec<usize> = (1..=d).filter(|v| !f.images().contains(v)).collect();
        for blocks in bracket_basis(&complement) {
            out.push(FJBasisElement { source: ell, target: m, level: d, f: f.clone(), blocks });
        }
    }
    out
}

/// The terms of `u_{ℓ,d}(ξ_{n,ℓ}) = 1…ℓ · ((ℓ+1)…d ⧢ x_1…x_{n−d})`, ordered by
/// the positions of the letters `d, d−1, …, ℓ+1` in turn.
pub fn u_map_words(ell: usize, d: usize, n: usize) -> Result<Vec<XiWord>> {
    if !(ell <= d && d <= n) {
        return Err(FjError::Range { ell, d, n });
    }
    let slots = n - ell;
    let inserted = d - ell;
    let mut choices: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::with_capacity(inserted);
    fn rec(start: usize, slots: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in start..=slots - left {
            cur.push(p);
            rec(p + 1, slots, left - 1, cur, out);
            cur.pop();
        }
    }
    rec(0, slots, inserted, &mut cur, &mut choices);
    choices.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    Ok(choices
        .into_iter()
        .map(|pos| {
            let mut letters: Vec<Letter> = (1..=ell).map(Letter::Fixed).collect();
            let (mut next_fixed, mut next_real) = (ell + 1, 1);
            for slot in 0..slots {
                if pos.contains(&slot) {
                    letters.push(Letter::Fixed(next_fixed));
                    next_fixed += 1;
                } else {
                    letters.push(Letter::Real(next_real));
                    next_real += 1;
                }
            }
            XiWord::new(d, letters).expect("a valid shuffle word")
        })
        .collect())
}

/// `u_{ℓ,d}(ξ_{n,ℓ})` as an element of Ξ(d)_n.
pub fn u_map(ell: usize, d: usize, n: usize) -> Result<XiVector> {
    let terms: FormalSum<XiWord> = u_map_words(ell, d, n)?.into_iter().map(|w| (w, BigInt::from(1))).collect();
    Ok(XiVector::from_terms(d, n, terms).expect("words lie in Ξ(d)_n"))
}

/// A finite ℤ-combination of basis elements `ℓ → m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FJMorphism {
    source: usize,
    target: usize,
    terms: FormalSum<FJBasisElement>,
}

impl FJMorphism {
    pub fn new(source: usize, target: usize, terms: FormalSum<FJBasisElement>) -> Result<Self> {
        if let Some(b) = terms.keys().find(|b| b.source != source || b.target != target) {
            return Err(FjError::InvalidElement(format!("{b} is not a morphism {source} → {target}")));
        }
        Ok(Self { source, target, terms })
    }

    pub fn from_element(b: FJBasisElement) -> Self {
        Self { source: b.source, target: b.target, terms: FormalSum::singleton(b) }
    }

    pub fn identity(ell: usize) -> Self {
        Self::from_element(FJBasisElement::identity(ell))
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn terms(&self) -> &FormalSum<FJBasisElement> {
        &self.terms
    }

    /// Largest level among the terms.
    pub fn level(&self) -> usize {
        self.terms.keys().map(|b| b.level).max().unwrap_or(0)
    }

    /// The image of `ξ_{n,ℓ}`.
    pub fn evaluate_at_level(&self, n: usize) -> Result<XiVector> {
        let mut out = XiVector::zero(self.target, n);
        for (b, c) in &self.terms {
            out = out.plus(&b.evaluate_at_level(n)?.scaled(c));
        }
        Ok(out)
    }

    /// Coordinates at degree `n` with respect to `ξ_{n,m}`.
    pub fn coords_at(&self, n: usize) -> Result<GroupRingElement> {
        Ok(self.evaluate_at_level(n)?.group_ring_coords())
    }

    /// The map Ξ(ℓ)_n → Ξ(m)_n, extended from `ξ_{n,ℓ}` by equivariance.
    pub fn apply(&self, v: &XiVector) -> Result<XiVector> {
        if v.ell() != self.source {
            return Err(FjError::Mismatch { left: v.ell(), right: self.source });
        }
        let image = self.evaluate_at_level(v.n())?;
        let mut out = XiVector::zero(self.target, v.n());
        for (w, c) in v.terms() {
            let moved = image.act(&w.to_permutation().to_injection()).expect("sizes agree");
            out = out.plus(&moved.scaled(c));
        }
        Ok(out)
    }
}

/// Degree-`n` coordinates of `g ∘ f` for `f: ℓ → m` and `g: m → p`.
///
/// Writing `f ↦ Σ a_s s` and `g ↦ Σ b_t t`, the composite is `Σ a_s b_t (t ∘ s)`,
/// the group-ring product `coords(g) · coords(f)`.
pub fn compose(g: &FJMorphism, f: &FJMorphism, n: usize) -> Result<GroupRingElement> {
    if f.target != g.source {
        return Err(FjError::Mismatch { left: f.target, right: g.source });
    }
    Ok(g.coords_at(n)?.mul(&f.coords_at(n)?))
}

/// Structure constants of one block of products: `[i][j]` holds coordinates.
pub type ProductTable = Vec<Vec<Vec<BigInt>>>;

/// FJ_{≤d}(ℓ, m) as a lattice inside ℤ𝔖_d.
#[derive(Debug, Clone)]
pub struct TruncatedHomSpace {
    pub ell: usize,
    pub m: usize,
    pub d: usize,
    pub elements: Vec<FJBasisElement>,
    pub lattice: Vec<GroupRingElement>,
}

impl TruncatedHomSpace {
    pub fn rank(&self) -> usize {
        self.lattice.len()
    }

    /// Generators as columns, rows indexed by `Permutation::all(d)`.
    pub fn matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.lattice.iter().map(|e| e.to_dense()).collect();
        IntMatrix::from_columns(&cols, (1..=self.d).product())
    }
}

/// FJ_{≤d}(ℓ, m); empty when `d < max(ℓ, m)`.
pub fn truncated_hom(ell: usize, m: usize, d: usize) -> TruncatedHomSpace {
    let elements = fj_basis(ell, m, d);
    let lattice = elements.par_iter().map(|b| b.evaluate_at_level(d).expect("level ≤ d").group_ring_coords()).collect();
    TruncatedHomSpace { ell, m, d, elements, lattice }
}

/// The ring Q_d: entry `(ℓ, m)` is FJ_{≤d}(ℓ, m), with structure constants for
/// products of generators.
#[derive(Debug, Clone)]
pub struct QRing {
    pub d: usize,
    /// Indexed `[ℓ][m]`, row = source, column = target.
    pub entries: Vec<Vec<TruncatedHomSpace>>,
    /// `products[(ℓ, m, p)][i][j]`: coordinates of `b_j ∘ a_i` in the generators
    /// of entry `(ℓ, p)`, for `a_i` in entry `(ℓ, m)` and `b_j` in entry `(m, p)`.
    pub products: BTreeMap<(usize, usize, usize), ProductTable>,
}

impl QRing {
    pub fn total_rank(&self) -> usize {
        self.entries.iter().flatten().map(|e| e.rank()).sum()
    }

    pub fn entry(&self, ell: usize, m: usize) -> &TruncatedHomSpace {
        &self.entries[ell][m]
    }
}

pub fn q_ring(d: usize) -> QRing {
    let entries: Vec<Vec<TruncatedHomSpace>> =
        (0..=d).map(|ell| (0..=d).map(|m| truncated_hom(ell, m, d)).collect()).collect();
    let mut products = BTreeMap::new();
    for ell in 0..=d {
        for m in 0..=d {
            for p in 0..=d {
                let (a, b, target) = (&entries[ell][m], &entries[m][p], &entries[ell][p]);
                let basis = target.matrix();
                let table: ProductTable = a
                    .lattice
                    .iter()
                    .map(|x| {
                        b.lattice
                            .iter()
                            .map(|y| {
                                let prod = y.mul(x).to_dense();
                                if target.rank() == 0 {
                                    assert!(prod.iter().all(Zero::is_zero), "composite outside Q_d");
                                    return Vec::new();
                                }
                                solve(&basis, &prod).expect("Q_d is closed under composition")
                            })
                            .collect()
                    })
                    .collect();
                products.insert((ell, m, p), table);
            }
        }
    }
    QRing { d, entries, products }
}
