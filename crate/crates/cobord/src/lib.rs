//! Exact-arithmetic toolkit for double-point algebraic cobordism.
//!
//! Everything is computed over exact rationals; there is no floating point
//! anywhere in the crate. The main pieces:
//!
//! - [`series`]: sparse truncated multivariate power series over `BigRational`,
//!   the substrate for all series manipulation.
//! - [`fgl`]: formal group laws over `Q[p1..pD]` (`p_i` standing for the class
//!   of `i`-dimensional projective space), built from the logarithm
//!   `l(t) = t + sum p_i t^{i+1}/(i+1)`, with axiom and identity checkers.
//! - [`chern`]: symbolic cohomology rings for towers of projective bundles,
//!   products, hypersurfaces and point blow-ups; Chern numbers and the
//!   degree-0 Donaldson-Thomas exponents.
//! - [`cobordism`]: the rational cobordism ring in the basis of products of
//!   projective spaces; decomposition by Chern-number matching; double point
//!   and blow-up relation checks; formal-group-law coefficients from Milnor
//!   hypersurfaces.
//! - [`dt`]: MacMahon series and degree-0 Donaldson-Thomas partition
//!   functions, with degeneration-formula consistency checks.
//! - [`vertex`]: independent brute-force oracle computing degree-0 equivariant
//!   Donaldson-Thomas invariants of toric 3-folds by localization over
//!   monomial ideals.
//! - [`parse`]: the space-expression grammar used by the CLI and the C API.
//! - [`verify`]: the acceptance suite run by `cobord verify-all`.

pub mod chern;
pub mod cli;
pub mod cobordism;
pub mod dt;
pub mod fgl;
pub mod parse;
pub mod partition;
pub mod rat;
pub mod series;
pub mod verify;
pub mod vertex;

pub use rat::Q;
