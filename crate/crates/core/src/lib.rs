//! Weitzenböck curvature terms of algebraic curvature operators.
//!
//! The crate builds orthonormal realizations of `∧ᵖℝⁿ`, `Symᵖℝⁿ` and
//! `Symᵖ₀ℝⁿ` ([`multilinear`]), assembles `K(R,ρ)` on them ([`weitzenbock`]),
//! evaluates the Kulkarni–Nomizu closed forms ([`closedform`]) and certifies
//! sectional-curvature bounds ([`certify`]).

pub mod certify;
pub mod closedform;
pub mod curvature;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod knalgebra;
pub mod linalg;
pub mod littlewood;
pub mod multilinear;
pub mod spherical;
pub mod weitzenbock;

pub use certify::{Certificate, CertifyOptions, Direction, HodgeStar, Method, Verdict};
pub use curvature::{decompose, ricci, scalar, sec, CurvatureDecomposition, CurvatureOperator, TwoPlane};
pub use error::{Error, Result};
pub use fixtures::Fixture;
pub use knalgebra::{KNAlgebra, KNElement};
pub use littlewood::{LemmaTable, Partition};
pub use multilinear::{MultiIndex, Polynomial, RepKind, RepSpace, WedgeIndex};
pub use weitzenbock::{curvature_term, SymmetricEndomorphism};

/// Seed used by every randomized routine unless the caller overrides it.
pub const DEFAULT_SEED: u64 = 0xC04A7;
