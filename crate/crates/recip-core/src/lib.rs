//! Exact-arithmetic engine for linear Diophantine systems via constant-term
//! extraction on rational generating functions.
//!
//! A system `A alpha = b` over nonnegative integers is encoded as the crude
//! generating function
//!
//! ```text
//!   E(x; b) = CT_Lambda  Lambda^{-b} / prod_i (1 - Lambda^{C_i} x_i)
//! ```
//!
//! where `C_i` is the i-th column of `A` and `CT_Lambda` takes the constant
//! term in the auxiliary variables `l_1, ..., l_r` inside a Malcev-Neumann
//! series field selected by a monomial order.  The engine eliminates one
//! lambda at a time by Elliott reduction, entirely in exact rational
//! arithmetic, and layers three families of checks on top:
//!
//! * reciprocity (the R property) relating `E(x; b)` to the companion series
//!   over strictly positive solutions,
//! * the vanishing-invariant condition (the I property) tested with the
//!   `I = CT_{lambda=0} + CT_{lambda=infinity}` operator, and
//! * a sufficient matrix criterion that reduces an `r`-row system to a family
//!   of single-equation tests along contribution sequences.
//!
//! Every generating-function computation can be cross-checked against the
//! brute-force enumeration oracle in [`oracle`].

pub mod algebra;
pub mod ctengine;
pub mod display;
pub mod ldsystem;
pub mod oracle;
pub mod reciprocity;
pub mod selfcheck;
pub mod serialize;
pub mod sweep;

pub use algebra::{
    ElliottFactor, ElliottRational, ElliottTerm, ExponentVector, FactorClass, OrderKind, OrderSpec,
    VariableSpace,
};
pub use ldsystem::{LDSystem, MatrixForm};
