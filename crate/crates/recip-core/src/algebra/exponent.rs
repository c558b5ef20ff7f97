use super::space::VariableSpace;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Integer exponent vector over a [`VariableSpace`], lambda coordinates
/// first.  The vector for the monomial `l1^3 l2^-1 x1` in a `(r=2, n=3)`
/// space is `[3, -1, 1, 0, 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentVector(pub Vec<i64>);

impl ExponentVector {
    pub fn zero(space: VariableSpace) -> Self {
        ExponentVector(vec![0; space.dim()])
    }

    /// Unit vector for a single coordinate.
    pub fn unit(space: VariableSpace, coord: usize) -> Self {
        let mut v = vec![0; space.dim()];
        v[coord] = 1;
        ExponentVector(v)
    }

    pub fn from_slice(entries: &[i64]) -> Self {
        ExponentVector(entries.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn get(&self, coord: usize) -> i64 {
        self.0[coord]
    }

    pub fn set(&mut self, coord: usize, value: i64) {
        self.0[coord] = value;
    }

    /// Exponent of the 0-based lambda variable `i`.
    pub fn lambda_exp(&self, space: VariableSpace, i: usize) -> i64 {
        self.0[space.lambda_index(i)]
    }

    /// Sum of the x-coordinate entries (the total x-degree).
    pub fn total_x_degree(&self, space: VariableSpace) -> i64 {
        self.0[space.lambdas..].iter().sum()
    }

    /// Scalar multiple of the vector.
    pub fn scaled(&self, k: i64) -> Self {
        ExponentVector(self.0.iter().map(|e| e * k).collect())
    }

    /// Copy with the given coordinates negated (used for variable inversion).
    pub fn inverted_at(&self, coords: &[usize]) -> Self {
        let mut v = self.0.clone();
        for &c in coords {
            v[c] = -v[c];
        }
        ExponentVector(v)
    }

    /// Copy with one coordinate forced to zero.
    pub fn with_coord_zeroed(&self, coord: usize) -> Self {
        let mut v = self.0.clone();
        v[coord] = 0;
        ExponentVector(v)
    }
}

impl Add for &ExponentVector {
    type Output = ExponentVector;
    fn add(self, rhs: &ExponentVector) -> ExponentVector {
        assert_eq!(self.len(), rhs.len(), "exponent vector length mismatch");
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ExponentVector {
    type Output = ExponentVector;
    fn sub(self, rhs: &ExponentVector) -> ExponentVector {
        assert_eq!(self.len(), rhs.len(), "exponent vector length mismatch");
        ExponentVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ExponentVector {
    type Output = ExponentVector;
    fn neg(self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|e| -e).collect())
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
