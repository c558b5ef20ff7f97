//! Core algebraic types: variable spaces, exponent vectors, monomial orders,
//! and the Elliott-rational function representation.
//!
//! All functions handled by the engine live in the working ring
//! `C[Lambda, Lambda^{-1}][[x]]`: Laurent polynomials in the auxiliary
//! variables `l_1..l_r` whose coefficients are formal power series in
//! `x_1..x_n`.  An *Elliott-rational* function is a finite sum of terms
//!
//! ```text
//!   coefficient * monomial / prod_j (1 - monomial_j)^{mult_j}
//! ```
//!
//! with exact rational coefficients and integer exponent vectors.  This shape
//! is closed under the Elliott reduction step, which is what makes iterated
//! constant-term extraction possible without ever leaving exact arithmetic.

mod elliott;
mod exponent;
mod order;
mod space;

pub use elliott::{
    binomial, negative_binomial_weight, qint, qrat, ElliottFactor, ElliottRational, ElliottTerm,
    LaurentPoly,
};
pub use exponent::ExponentVector;
pub use order::{FactorClass, OrderKind, OrderSpec};
pub use space::VariableSpace;

use thiserror::Error;

/// Errors raised by the algebra layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    /// Two values built over different `VariableSpace`s were combined.
    #[error("variable spaces do not match: {0} vs {1}")]
    MismatchedSpace(String, String),
    /// An exponent vector has the wrong length for its space.
    #[error("exponent vector has length {got}, space has dimension {want}")]
    BadVectorLength { got: usize, want: usize },
    /// A monomial-order matrix was singular.
    #[error("order matrix is singular")]
    SingularOrderMatrix,
    /// A denominator factor `1 - M` had `M = 1` (zero exponent vector).
    #[error("denominator factor has the unit monomial")]
    InvalidFactor,
    /// A lambda index was out of range for the space.
    #[error("lambda index {0} out of range (r = {1})")]
    LambdaOutOfRange(usize, usize),
    /// `series_truncate` was applied to a function that is not a power
    /// series in the x variables (lambda-dependent or non-positive-degree
    /// denominator monomials).
    #[error("function is not expandable as a power series in x: {0}")]
    NotPowerSeriesExpandable(String),
}
