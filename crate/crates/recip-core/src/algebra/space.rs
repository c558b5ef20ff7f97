use serde::{Deserialize, Serialize};
use std::fmt;

/// Ambient variable space: `r` auxiliary lambda variables followed by `n`
/// series variables.
///
/// Exponent vectors are indexed with the lambdas first, so coordinate `i`
/// for `i < r` is `l_{i+1}` and coordinate `r + j` is `x_{j+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VariableSpace {
    /// Number of lambda (constant-term) variables.
    pub lambdas: usize,
    /// Number of x (series) variables.
    pub xs: usize,
}

impl VariableSpace {
    pub fn new(lambdas: usize, xs: usize) -> Self {
        VariableSpace { lambdas, xs }
    }

    /// Total coordinate count `r + n`.
    pub fn dim(&self) -> usize {
        self.lambdas + self.xs
    }

    /// Coordinate index of `l_{i+1}` (0-based lambda index).
    pub fn lambda_index(&self, i: usize) -> usize {
        assert!(i < self.lambdas, "lambda index {i} out of range");
        i
    }

    /// Coordinate index of `x_{j+1}` (0-based x index).
    pub fn x_index(&self, j: usize) -> usize {
        assert!(j < self.xs, "x index {j} out of range");
        self.lambdas + j
    }

    /// Human-readable name of a coordinate: `l1..lr`, then `x1..xn`.
    pub fn var_name(&self, coord: usize) -> String {
        if coord < self.lambdas {
            format!("l{}", coord + 1)
        } else {
            format!("x{}", coord - self.lambdas + 1)
        }
    }
}

impl fmt::Display for VariableSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, n={})", self.lambdas, self.xs)
    }
}
