//! Orthogonal polynomials of hypergeometric type with respect to Newtonian
//! bases, in exact rational arithmetic.
//!
//! An instance is given by eigenvalues `λ_n`, off-diagonal coefficients `τ_n`
//! and grid nodes `a_n`, defining `L φ_n = λ_n φ_n + τ_n φ_{n-1}` on
//! `φ_n(x) = (x - a_0)···(x - a_{n-1})`. The eigenpolynomials of `L` are
//! orthogonal exactly when the moment conditions in [`ortho`] hold.

pub mod classify;
pub mod construct;
pub mod data;
pub mod error;
pub mod grids;
pub mod linalg;
pub mod newton;
pub mod ortho;
pub mod scalar;

pub use construct::{
    apply_l, build_p, build_p_hyplike, dual_system, duality_check, expansion_matrix,
    recurrence_coeffs, recurrence_residuals, DualSystem, ExpansionMatrix, Normalization,
    RecurrenceData,
};
pub use data::{HyperData, Regime, SeqRole, SeqSpec, ValidationIssue, ValidationReport};
pub use error::{Error, Result};
pub use grids::{Family, GridParams};
pub use newton::{Grid, MonomialPoly, NewtonPoly, Poly};
pub use scalar::{rat, Rational};
