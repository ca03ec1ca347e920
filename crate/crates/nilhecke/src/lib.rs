//! Exact computer-algebra kernel for cyclotomic nilHecke algebras.
//!
//! The algebra `H(ℓ,n)` is generated by `ψ_1 … ψ_{n-1}` (degree −2) and
//! `y_1 … y_n` (degree +2) subject to
//!
//! ```text
//! ψ_r² = 0                ψ_r ψ_k = ψ_k ψ_r   (|r−k| > 1)
//! ψ_r ψ_{r+1} ψ_r = ψ_{r+1} ψ_r ψ_{r+1}
//! y_r y_s = y_s y_r       ψ_r y_s = y_s ψ_r   (s ∉ {r, r+1})
//! ψ_r y_{r+1} = y_r ψ_r + 1
//! y_{r+1} ψ_r = ψ_r y_r + 1
//! y_1^ℓ = 0   (two-sided ideal)
//! ```
//!
//! over the rationals. Everything is computed exactly: elements are sparse
//! rational combinations of the monomial basis `{ψ_w y^a : w ∈ Sym_n,
//! a_i ≤ ℓ−i}`, and every structural claim (graded cellular basis, center,
//! primitive idempotents, matrix-algebra decomposition, symmetrizing forms)
//! is rebuilt from that basis and checked by exact linear algebra.
//!
//! Module map:
//! - [`scalar`], [`linalg`]: exact rational arithmetic and dense elimination;
//! - [`perm`]: permutations, reduced words, weak prefix order;
//! - [`affine`]: the (unbounded) nilHecke algebra in ψ-left normal form;
//! - [`cyclotomic`]: the quotient by `y_1^ℓ`, monomial basis, products;
//! - [`cellular`]: box labels, graded cellular basis, graded dimensions;
//! - [`center`]: symmetric-polynomial center and the matrix-unit family;
//! - [`traces`]: the two symmetrizing forms and their comparison;
//! - [`verify`]: named verification suites shared by the CLI and the tests.

pub mod affine;
pub mod cellular;
pub mod center;
pub mod cyclotomic;
pub mod json;
pub mod linalg;
pub mod perm;
pub mod scalar;
pub mod traces;
pub mod verify;

use thiserror::Error;

/// Errors surfaced through the public API. Internal invariant violations
/// (mixing elements of different contexts, malformed indices) panic instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A linear system that should have been consistent is not.
    #[error("linear system has no solution{}", fmt_ctx(.0))]
    NoSolution(String),
    /// A linear system that should have been determined has a free variable.
    #[error("linear system is underdetermined{}", fmt_ctx(.0))]
    NotUnique(String),
    /// The candidate basis matrix failed to be invertible.
    #[error("change-of-basis matrix is singular: {0}")]
    SingularBasis(String),
    /// A machine-checked identity failed; the payload names the witness.
    #[error("verification failed: {0}")]
    VerificationFailure(String),
    /// No scalar satisfies the defining congruence of `c_μ`.
    #[error("no scalar satisfies the defining congruence: {0}")]
    NotFound(String),
    /// A pairing that must be nonzero vanished.
    #[error("pairing vanished unexpectedly: {0}")]
    NonvanishingFailure(String),
    /// Input could not be parsed as an element.
    #[error("invalid element: {0}")]
    InvalidElement(String),
}

fn fmt_ctx(s: &str) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!(" ({s})")
    }
}

pub type Result<T> = std::result::Result<T, Error>;
