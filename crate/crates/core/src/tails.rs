//! Tail invariants `A_ℓ = coker Ξ(ℓ)_Z` and the stable decomposition
//! `M_n ≅ ⨁_ℓ A_ℓ^{C(n,ℓ) − C(n,ℓ−1)}` for `n ≥ 2d − 1`.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::combinatorics::ballot;
use crate::linalg::{cokernel, AbelianGroup};
use crate::presentation::FIPresentation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TailError {
    #[error("n = {n} is below the stable range n ≥ {stable_from}")]
    BelowStableRange { n: usize, stable_from: usize },
    #[error("degree-{n} matrix has {rows}×{cols} = {cells} cells, above the cap of {cap}")]
    TooLarge { n: usize, rows: BigUint, cols: BigUint, cells: BigUint, cap: u64 },
}

pub type Result<T, E = TailError> = std::result::Result<T, E>;

/// Default cap on the number of cells of an oracle matrix.
pub const DEFAULT_MAX_MATRIX_CELLS: u64 = 2_000_000;

/// The tail invariants `A_0, …, A_d` of a presentation of degree `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailProfile {
    pub degree: usize,
    pub invariants: Vec<AbelianGroup>,
    pub stable_from: usize,
}

impl TailProfile {
    /// `A_ℓ`, zero beyond the stored range.
    pub fn invariant(&self, ell: usize) -> AbelianGroup {
        self.invariants.get(ell).cloned().unwrap_or_default()
    }
}

pub fn stable_from(degree: usize) -> usize {
    (2 * degree).saturating_sub(1)
}

pub fn tail_invariants(z: &FIPresentation) -> TailProfile {
    let d = z.degree();
    let invariants = (0..=d).into_par_iter().map(|ell| cokernel(&z.evaluate_xi(ell))).collect();
    TailProfile { degree: d, invariants, stable_from: stable_from(d) }
}

fn decomposition(profile: &TailProfile, n: usize) -> Option<AbelianGroup> {
    let mut parts = Vec::with_capacity(profile.invariants.len());
    for (ell, a) in profile.invariants.iter().enumerate() {
        let mult = ballot(n, ell);
        if mult.is_negative() {
            if a.is_zero() {
                continue;
            }
            return None;
        }
        parts.push((a, mult.to_usize().expect("multiplicity fits in usize")));
    }
    Some(AbelianGroup::sum_with_multiplicities(parts))
}

/// `M_n` predicted from the tail invariants; only valid in the stable range.
pub fn evaluate_tail(profile: &TailProfile, n: usize) -> Result<AbelianGroup> {
    if n < profile.stable_from {
        return Err(TailError::BelowStableRange { n, stable_from: profile.stable_from });
    }
    Ok(decomposition(profile, n).expect("multiplicities are nonnegative in the stable range"))
}

/// Result of comparing the tail formula with a direct computation of `M_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub n: usize,
    pub stable_from: usize,
    /// The formula's value; below the stable range it is still reported when
    /// every multiplicity of a nonzero `A_ℓ` is nonnegative.
    pub predicted: Option<AbelianGroup>,
    pub actual: AbelianGroup,
    /// `Some(predicted == actual)` in the stable range, `None` below it.
    pub equal: Option<bool>,
}

impl OracleReport {
    pub fn in_stable_range(&self) -> bool {
        self.n >= self.stable_from
    }

    /// Whether the report contains an asserted mismatch.
    pub fn failed(&self) -> bool {
        self.equal == Some(false)
    }
}

/// Computes `M_n` as the cokernel of the degree-`n` presentation matrix and
/// compares it with the tail formula.
pub fn oracle_check(z: &FIPresentation, n: usize, max_cells: u64) -> Result<OracleReport> {
    let (rows, cols) = z.matrix_shape_at(n);
    let cells = &rows * &cols;
    if cells > BigUint::from(max_cells) {
        return Err(TailError::TooLarge { n, rows, cols, cells, cap: max_cells });
    }
    let profile = tail_invariants(z);
    let actual = cokernel(&z.presentation_matrix_at(n));
    let predicted = decomposition(&profile, n);
    let equal = (n >= profile.stable_from).then(|| predicted.as_ref() == Some(&actual));
    Ok(OracleReport { n, stable_from: profile.stable_from, predicted, actual, equal })
}

/// The largest `ℓ` with `A_ℓ ≠ 0`, or −1 when every invariant vanishes.
pub fn effective_poly_degree(profile: &TailProfile) -> i64 {
    profile.invariants.iter().rposition(|a| !a.is_zero()).map_or(-1, |ell| ell as i64)
}

/// Rank of `M_n` in the stable range: `Σ_ℓ rank(A_ℓ)·(C(n,ℓ) − C(n,ℓ−1))`.
pub fn stable_rank(profile: &TailProfile, n: usize) -> Result<BigInt> {
    if n < profile.stable_from {
        return Err(TailError::BelowStableRange { n, stable_from: profile.stable_from });
    }
    Ok(profile
        .invariants
        .iter()
        .enumerate()
        .map(|(ell, a)| BigInt::from(a.free_rank()) * ballot(n, ell))
        .fold(BigInt::zero(), |acc, x| acc + x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan::catalan_set;

    const FIRST: &str = "generators: 2\nrelations: 3\nentry 1 1: +1*[1,2] +1*[2,3] +1*[3,1]\n";

    fn group(free: usize, orders: &[(u32, usize)]) -> AbelianGroup {
        let orders = orders.iter().flat_map(|&(o, m)| std::iter::repeat_n(BigInt::from(o), m));
        AbelianGroup::from_cyclic_orders(free, orders)
    }

    #[test]
    fn first_example_profile() {
        let p = tail_invariants(&FIPresentation::parse(FIRST).unwrap());
        assert_eq!(p.degree, 3);
        assert_eq!(p.stable_from, 5);
        assert_eq!(p.invariants, [group(0, &[(3, 1)]), group(1, &[]), AbelianGroup::zero(), AbelianGroup::zero()]);
        for n in 5..=8 {
            assert_eq!(evaluate_tail(&p, n).unwrap(), group(n - 1, &[(3, 1)]));
        }
        assert_eq!(evaluate_tail(&p, 4), Err(TailError::BelowStableRange { n: 4, stable_from: 5 }));
        assert_eq!(effective_poly_degree(&p), 1);
        assert_eq!(stable_rank(&p, 7).unwrap(), BigInt::from(6));
    }

    #[test]
    fn trivial_profiles() {
        let p = tail_invariants(&FIPresentation::free(vec![0, 0]));
        assert_eq!(p.invariants, [AbelianGroup::free(2)]);
        assert_eq!(p.stable_from, 0);
        assert_eq!(evaluate_tail(&p, 3).unwrap(), AbelianGroup::free(2));
        let zero = TailProfile { degree: 2, invariants: vec![AbelianGroup::zero(); 3], stable_from: 3 };
        assert!(evaluate_tail(&zero, 5).unwrap().is_zero());
        assert_eq!(effective_poly_degree(&zero), -1);
        let torsion = TailProfile {
            degree: 2,
            invariants: vec![AbelianGroup::zero(), AbelianGroup::cyclic(2), AbelianGroup::zero()],
            stable_from: 3,
        };
        assert_eq!(effective_poly_degree(&torsion), 1);
    }

    #[test]
    fn oracle_on_first_example() {
        let z = FIPresentation::parse(FIRST).unwrap();
        for n in [5, 6] {
            let r = oracle_check(&z, n, DEFAULT_MAX_MATRIX_CELLS).unwrap();
            assert_eq!(r.equal, Some(true));
            assert_eq!(r.actual, group(n - 1, &[(3, 1)]));
        }
        let below = oracle_check(&z, 3, DEFAULT_MAX_MATRIX_CELLS).unwrap();
        assert_eq!(below.equal, None);
        assert!(!below.failed());
        assert!(matches!(oracle_check(&z, 6, 100), Err(TailError::TooLarge { .. })));
    }

    #[test]
    fn oracle_on_free_modules() {
        let z = FIPresentation::free(vec![1, 2]);
        for n in 3..=5 {
            assert_eq!(oracle_check(&z, n, DEFAULT_MAX_MATRIX_CELLS).unwrap().equal, Some(true));
        }
    }

    #[test]
    fn multiplicities_match_catalan_counts() {
        for n in 0..=10 {
            for ell in 0..=n / 2 {
                assert_eq!(ballot(n, ell), BigInt::from(catalan_set(ell, n).len()));
            }
        }
    }
}
