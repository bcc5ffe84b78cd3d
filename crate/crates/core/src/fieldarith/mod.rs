//! Number-field data and the per-prime Frobenius oracle.
//!
//! Frobenius at `p` is found by matching `x^p mod (f, p)` against the
//! automorphism polynomials of the field, which pins down the element of `G⁺`
//! and not just its cycle type.

pub mod cyclotomic;
pub mod field;
pub mod modpoly;
pub mod poly;

use std::sync::Arc;

use thiserror::Error;

pub use cyclotomic::{cyclotomic_field_data, cyclotomic_field_data_with, CyclotomicClosedForm, CyclotomicSpec};
pub use field::{FieldFile, NumberFieldData, ValidationReport};
pub use poly::{IntPoly, RatPoly};

use crate::embedding::EmbeddingError;
use crate::permgroup::{GroupError, Permutation, PermutationGroup};
use modpoly::{Modulus, QuotientRing};

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed field file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed field data: {0}")]
    Format(String),
    #[error("invalid field data: {0}")]
    Invalid(String),
    #[error("polynomial checksum mismatch: file says {expected}, coefficients hash to {actual}")]
    Checksum { expected: String, actual: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// Not a failure: the prime is ramified or otherwise skipped.
    #[error("prime {0} is excluded")]
    Excluded(u64),
    #[error("prime {0} is beyond the 32-bit modular arithmetic range")]
    OutOfRange(u64),
    #[error("f is not squarefree mod {0}, which should have been excluded")]
    NotSquarefree(u64),
    #[error("an automorphism denominator vanishes mod {0}, which should have been excluded")]
    DenominatorDivisible(u64),
    #[error("no automorphism matches x^{0} mod (f, {0}): corrupt field data")]
    NoMatch(u64),
}

/// A source of Frobenius elements `σ_p ∈ G⁺`, up to conjugacy.
pub trait FrobeniusOracle: Sync {
    fn ambient(&self) -> &Arc<PermutationGroup>;

    fn is_excluded(&self, p: u64) -> bool;

    /// Known excluded primes (always including 2), for logging.
    fn excluded_primes(&self) -> Vec<u64>;

    /// Ambient element index of a Frobenius element at `p`.
    fn frobenius(&self, p: u64) -> Result<usize, OracleError>;
}

/// `x^p mod (f, p)` with coefficients in `[0, p)`.
pub fn modpoly_pow_x_p(f: &IntPoly, p: u64) -> Result<Vec<u64>, OracleError> {
    if p < 3 || p % 2 == 0 {
        return Err(OracleError::Excluded(p));
    }
    if p >= 1 << 32 {
        return Err(OracleError::OutOfRange(p));
    }
    let md = Modulus::new(p);
    let ring = QuotientRing::new(md, f.reduce_mod(&md));
    if !ring.modulus_is_squarefree() {
        return Err(OracleError::NotSquarefree(p));
    }
    Ok(ring.pow_x(p))
}

/// Frobenius at `p` as a permutation in `G⁺`.
pub fn identify_frobenius(fd: &NumberFieldData, p: u64) -> Result<Permutation, OracleError> {
    let idx = fd.frobenius(p)?;
    Ok(fd.ambient().element(idx).clone())
}
