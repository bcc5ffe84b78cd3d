//! Exact computations around Chebyshev bias in Chebotarev prime races.
//!
//! The crate checks group-theoretic bias criteria exactly, searches symmetric
//! groups for new instances, and races Frobenius classes of prime ideals of a
//! subfield `K = L^G` of a Galois number field `L/ℚ`, computing each Frobenius
//! element from modular polynomial arithmetic.
//!
//! - [`permgroup`]: permutation groups, conjugacy classes, cycle notation.
//! - [`classfn`]: class functions, root counts `r_m`, induction, characters.
//! - [`criteria`]: bias certificates, the subgroup criterion, instance search.
//! - [`transfer`]: splitting of a rational prime in `K` from its Frobenius in `G⁺`.
//! - [`fieldarith`]: number-field data files and the per-prime Frobenius oracle.
//! - [`counter`]: sieving, counting functions, `R(x)`, densities, CSV output.
//! - [`cli`]: the `chebias` command-line front end.

pub mod classfn;
pub mod cli;
pub mod counter;
pub mod criteria;
pub mod embedding;
pub mod fieldarith;
pub mod permgroup;
pub mod scalar;
pub mod transfer;

use num_complex::Complex;
use num_rational::BigRational;

pub use classfn::ClassFunction;
pub use embedding::SubgroupEmbedding;
pub use permgroup::{Permutation, PermutationGroup};
pub use scalar::ClassValue;

/// Exact values `a + b·i` with `a, b ∈ ℚ`.
pub type GaussianRational = Complex<BigRational>;

/// Class functions with exact Gaussian-rational values.
pub type ExactClassFunction = ClassFunction<GaussianRational>;

/// Class functions with rational values in machine integers.
pub type SmallRationalClassFunction = ClassFunction<num_rational::Rational64>;

/// Class functions with floating-point values.
pub type RealClassFunction = ClassFunction<f64>;
