//! Exact combinatorics of rooted and free trees, the Grossman-Larson algebra
//! and its tree module, and tree-formula inversion of polynomial maps of
//! symmetric homogeneous type.
//!
//! The crate is organized around five submodules:
//!
//! * [`trees`]: canonical forms, enumeration, automorphism counting and
//!   structural predicates (naked chains, vertex degrees) for rooted and
//!   free trees;
//! * [`gl`]: the Grossman-Larson product on rooted trees and its grafting
//!   action on free trees, with exact rational coefficients;
//! * [`quotient`]: graded submodules of the tree module, exact ranks of the
//!   quotients, and membership certificates for the vectors `nu_m`;
//! * [`poly`]: sparse multivariate polynomials over the Gaussian rationals,
//!   with differentiation, Hessians, nilpotency tests and truncated
//!   composition;
//! * [`inverse`]: the tree formulas and Zhao's recursion for the formal
//!   inverse of `X - grad P`, the associated differential-operator calculus,
//!   and the gap-theorem inverter.
//!
//! All arithmetic is exact: `BigInt`/`BigRational` coefficients throughout,
//! and ranks are computed by fraction-free integer elimination. Every
//! computation is deterministic, independent of thread count.
//!
//! ```
//! use gltrees::gl;
//! use gltrees::quotient::{self, DegreeBound, QuotientParams, RankOptions};
//! use gltrees::trees::{FreeTree, RootedTree};
//!
//! // The rooted 2-chain acting on the free 3-chain: S * T = 2 T1 + T2.
//! let s = RootedTree::parse("(())")?;
//! let t = FreeTree::parse("1-2,2-3")?;
//! let action = gl::gl_act_basis(&s, &t)?;
//! assert_eq!(action.support_len(), 2);
//!
//! // Exact rank of N(4,3) in degree 5: the quotient piece vanishes.
//! let report = quotient::graded_rank(
//!     QuotientParams::new(4, DegreeBound::Finite(3), 5)?,
//!     &RankOptions::default(),
//! )?;
//! assert_eq!(report.dim_quotient, 0);
//! # Ok::<(), gltrees::Error>(())
//! ```

pub mod error;
pub mod gl;
pub mod inverse;
pub mod linalg;
pub mod poly;
pub mod quotient;
pub mod trees;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
