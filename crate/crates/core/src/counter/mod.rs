//! Prime sieving and the counting functions of a Chebotarev prime race.
//!
//! For every unramified rational prime `p ≤ X` the oracle supplies `σ_p`, the
//! splitting pattern of `p` in `K` follows from its class, and each prime
//! ideal `𝔭 | p` of norm `p^f` feeds `π`, `θ` and `ψ`. Per-prime Frobenius work
//! runs in parallel blocks; everything downstream is one ordered pass, so the
//! output does not depend on the thread count.

pub mod density;
pub mod output;
pub mod rnorm;
pub mod series;
pub mod sieve;

use thiserror::Error;

use crate::fieldarith::OracleError;

pub use density::PositivityIntegrator;
pub use output::{emit_figure, emit_series, write_series, SERIES_HEADER};
pub use rnorm::{r_norm, r_norm_with_error};
pub use series::{
    accumulate, accumulate_from_table, density_estimates, mobius_check, psi_cancellation_check, BiasSeries,
    CancellationReport, Checkpoints, DensityEstimate, FrobeniusTable, MobiusReport, SeriesRow,
};
pub use sieve::sieve_primes;

#[derive(Debug, Error)]
pub enum CounterError {
    #[error("sieve limit {limit} exceeds the cap {cap}")]
    SieveCap { limit: u64, cap: u64 },
    #[error("R(x) needs x ≥ 2, got {0}")]
    RDomain(f64),
    #[error("oracle failed at p = {p}: {source}")]
    Oracle { p: u64, source: OracleError },
    #[error("{0}")]
    Config(String),
    #[error("malformed series: {0}")]
    Format(String),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
}
