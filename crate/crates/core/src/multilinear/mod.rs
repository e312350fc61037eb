//! Orthonormal bases for exterior, symmetric and traceless symmetric powers of
//! ℝⁿ, and the matrices of the infinitesimal rotation action on them.
//!
//! Basis order is lexicographic throughout; see `docs/bases.md`.

mod index;
mod polynomial;
mod space;

pub use index::{sort_with_sign, MultiIndex, WedgeIndex};
pub use polynomial::Polynomial;
pub use space::{
    build_exterior, build_symmetric, build_traceless, harmonic_projection, pair_index, pairs, r_squared_multiplication,
    rep_dimension, BasisLabels, RepKind, RepSpace,
};
