//! Monte Carlo estimation of normalized Betti numbers of simplicial complexes.
//!
//! The k-th Betti number β_k of a simplicial complex counts its k-dimensional
//! holes and equals the nullity of the combinatorial Laplacian Δ_k. Rather
//! than diagonalizing Δ_k, the estimators here sample a random walk on the
//! k-simplices whose path functional has expectation tr(H^ℓ)/|S_k| for
//! H = I − Δ_k/n, a quantity that converges to β_k/|S_k| as the path length ℓ
//! grows. Two estimators are provided: a fixed-sample-count baseline (`cbne`)
//! and a variance-adaptive variant (`cbne_var`) that first probes the column
//! norms of H to size the path budget.
//!
//! Module map:
//! - [`complex`]: graphs, simplices, clique and explicit complexes.
//! - [`laplacian`]: exact Laplacian entries, boundary matrices, dense assembly.
//! - [`walk`]: the transition kernel and path sampling.
//! - [`estimators`]: the two Monte Carlo estimators.
//! - [`oracle`]: exact small-instance references (Betti numbers, traces,
//!   second moments, spectra) used to validate the samplers.
//! - [`randgraphs`]: random ensembles and distributional diagnostics.
//! - [`cli`]: the `cbne` command-line front end.

pub mod cli;
pub mod complex;
pub mod estimators;
pub mod laplacian;
pub mod oracle;
pub mod randgraphs;
pub mod stats;
pub mod walk;

use thiserror::Error;

/// Errors shared by every module. The CLI maps the variants onto distinct
/// exit codes (input → 2, resource → 3, numeric → 4).
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: out-of-range vertices, simplices missing from the
    /// complex, invalid probabilities, empty simplex sets, and the like.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A structured failure while reading one of the text file formats.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A requested computation exceeds a configured size or sample budget.
    #[error("{what} ({requested}) exceeds the configured limit ({limit})")]
    Resource {
        what: String,
        requested: u128,
        limit: u128,
    },

    /// Numeric failure: an iterative solver did not converge, or exact
    /// integer arithmetic overflowed where no fallback is available.
    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Formats a float with 17 significant digits, enough to round-trip any f64.
/// Used by every CSV writer so that exported decimals are loss-free.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.16e}")
}
