//! Exact computation of the eventual structure of finitely presented FI-modules
//! over ℤ.
//!
//! The crate is organized bottom-up:
//!
//! * [`combinatorics`]: injections, permutations, ℤ𝔖_n, shuffles, Lie brackets
//! * [`xi`]: the FI^op-modules Ξ(ℓ) and the derangement kernel D
//! * [`catalan`]: the Catalan basis, the matching pairing and χ
//! * [`fj`]: hom-spaces of FJ via bracket bases, truncations and the rings Q_d
//! * [`linalg`]: Smith normal form, cokernels and saturated kernels over ℤ
//! * [`presentation`]: FI-matrices, their text format and evaluations
//! * [`tails`]: tail invariants, the stable decomposition of M_n and the oracle

pub mod catalan;
pub mod combinatorics;
pub mod fj;
pub mod formal;
pub mod linalg;
pub mod presentation;
pub mod tails;
pub mod xi;

pub use combinatorics::{GroupRingElement, Injection, Permutation};
pub use formal::FormalSum;
pub use linalg::{AbelianGroup, IntMatrix};
pub use presentation::FIPresentation;
pub use tails::TailProfile;
pub use xi::{XiVector, XiWord};
