//! Finitely supported ℤ-linear combinations over an ordered basis.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A formal ℤ-combination `Σ c_k · k` with no stored zero coefficients.
///
/// Terms iterate in the `Ord` order of the keys, which keeps every printed
/// form and every matrix assembled from a sum deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, BigInt>,
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Ord> FormalSum<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(key: K) -> Self {
        let mut s = Self::new();
        s.add_term(key, BigInt::one());
        s
    }

    pub fn add_term(&mut self, key: K, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Self, scale: &BigInt)
    where
        K: Clone,
    {
        if scale.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    pub fn coeff(&self, key: &K) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of basis elements with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, BigInt> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, BigInt> {
        self.terms.keys()
    }

    pub fn scaled(&self, scale: &BigInt) -> Self
    where
        K: Clone,
    {
        let mut out = Self::new();
        out.add_assign_scaled(self, scale);
        out
    }

    pub fn neg(&self) -> Self
    where
        K: Clone,
    {
        self.scaled(&-BigInt::one())
    }

    pub fn plus(&self, other: &Self) -> Self
    where
        K: Clone,
    {
        let mut out = self.clone();
        out.add_assign_scaled(other, &BigInt::one());
        out
    }

    pub fn minus(&self, other: &Self) -> Self
    where
        K: Clone,
    {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-BigInt::one());
        out
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<L: Ord + Clone, F>(&self, mut f: F) -> FormalSum<L>
    where
        F: FnMut(&K) -> FormalSum<L>,
    {
        let mut out = FormalSum::new();
        for (k, c) in &self.terms {
            out.add_assign_scaled(&f(k), c);
        }
        out
    }

    /// Relabels basis elements; keys mapped to `None` are dropped.
    pub fn map_keys<L: Ord, F>(&self, mut f: F) -> FormalSum<L>
    where
        F: FnMut(&K) -> Option<L>,
    {
        let mut out = FormalSum::new();
        for (k, c) in &self.terms {
            if let Some(l) = f(k) {
                out.add_term(l, c.clone());
            }
        }
        out
    }
}

impl<K: Ord> FromIterator<(K, BigInt)> for FormalSum<K> {
    fn from_iter<I: IntoIterator<Item = (K, BigInt)>>(iter: I) -> Self {
        let mut s = Self::new();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl<K: Ord> IntoIterator for FormalSum<K> {
    type Item = (K, BigInt);
    type IntoIter = btree_map::IntoIter<K, BigInt>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, K: Ord> IntoIterator for &'a FormalSum<K> {
    type Item = (&'a K, &'a BigInt);
    type IntoIter = btree_map::Iter<'a, K, BigInt>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

/// Writes `c1*k1 + c2*k2 - ...`, omitting unit coefficients; `0` when empty.
pub(crate) fn write_signed_sum<K: Ord, F>(
    f: &mut fmt::Formatter<'_>,
    sum: &FormalSum<K>,
    mut write_key: F,
) -> fmt::Result
where
    F: FnMut(&mut fmt::Formatter<'_>, &K) -> fmt::Result,
{
    if sum.is_zero() {
        return write!(f, "0");
    }
    for (i, (k, c)) in sum.iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if !mag.is_one() {
            write!(f, "{mag}*")?;
        }
        write_key(f, k)?;
    }
    Ok(())
}

/// Parses the output of [`write_signed_sum`]: terms separated by ` + ` or
/// ` - `, each optionally prefixed by `c*`. A lone `0` is the empty sum.
pub(crate) fn parse_signed_sum<K, E, F>(text: &str, mut parse_key: F) -> Result<Vec<(BigInt, K)>, String>
where
    F: FnMut(&str) -> Result<K, E>,
    E: fmt::Display,
{
    let compact: String = text.split_whitespace().collect::<Vec<_>>().join(" ");
    if compact == "0" {
        return Ok(Vec::new());
    }
    if compact.is_empty() {
        return Err("empty sum".into());
    }
    let mut out = Vec::new();
    let mut rest = compact.as_str();
    let mut negative = false;
    let mut first = true;
    loop {
        if first {
            if let Some(r) = rest.strip_prefix('-') {
                negative = true;
                rest = r.trim_start();
            } else if let Some(r) = rest.strip_prefix('+') {
                rest = r.trim_start();
            }
        }
        let end = rest.find(" + ").into_iter().chain(rest.find(" - ")).min().unwrap_or(rest.len());
        let term = &rest[..end];
        let (coeff, key_text) = match term.split_once('*') {
            Some((c, k)) => (c.trim().parse::<BigInt>().map_err(|_| format!("bad coefficient {c:?}"))?, k.trim()),
            None => (BigInt::one(), term.trim()),
        };
        if key_text.is_empty() {
            return Err(format!("missing term after coefficient in {term:?}"));
        }
        let key = parse_key(key_text).map_err(|e| e.to_string())?;
        out.push((if negative { -coeff } else { coeff }, key));
        if end == rest.len() {
            break;
        }
        negative = rest[end..].starts_with(" - ");
        rest = &rest[end + 3..];
        first = false;
    }
    Ok(out)
}

impl<K: Ord + fmt::Display> fmt::Display for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_sum(f, self, |f, k| write!(f, "{k}"))
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
