//! Monomial orders selecting the series field in which constant terms are
//! taken.
//!
//! A full order makes the working ring a Malcev-Neumann series field: every
//! rational function has a unique expansion whose support is well-ordered,
//! so `CT_lambda` is well defined.  Comparison is always "last dominant
//! coordinate": `a < b` iff the highest-index nonzero coordinate of `b - a`
//! (after an order-specific linear image) is positive.  With the lambdas
//! listed first this makes `x_n >> ... >> x_1 >> l_r >> ... >> l_1`, which
//! matches the iterated-Laurent expansion `1/(x - y) = sum y^k / x^{k+1}`
//! when `y` is listed after `x`.
//!
//! The lambda-adic entries are *preorders* that only look at one lambda
//! coordinate; they select the plain Laurent expansions at `lambda = 0` or
//! `lambda = infinity` used by the invariant operator.

use super::exponent::ExponentVector;
use super::space::VariableSpace;
use super::AlgebraError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Expansion behaviour of one denominator factor `1/(1 - M)` with respect to
/// a chosen lambda.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorClass {
    /// Expansion has only nonnegative powers of the lambda.
    PT,
    /// Expansion has only negative powers of the lambda.
    NT,
    /// The monomial does not involve the lambda at all.
    LambdaFree,
}

/// The order family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderKind {
    /// Identity image: compare `b - a` directly, last coordinate dominant.
    Case1Identity,
    /// Total-degree image: append the total x-degree as the most dominant
    /// coordinate and reverse the lambda block, so monomials of larger
    /// x-degree dominate everything else.
    Case2TotalDegree,
    /// General injective linear image given by an integer matrix acting on
    /// exponent vectors; compared with the same last-dominant rule.
    Matrix(Vec<Vec<i64>>),
    /// Laurent expansion order at `lambda = 0` (or `infinity`): a preorder
    /// comparing a single lambda coordinate.
    LambdaAdic { lambda: usize, at_infinity: bool },
}

/// A monomial order: a kind plus an optional global reversal.  Reversal
/// swaps `Less` and `Greater` and models the "bar" order used on the other
/// side of reciprocity identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSpec {
    pub kind: OrderKind,
    pub reversed: bool,
}

impl OrderSpec {
    pub fn case1() -> Self {
        OrderSpec { kind: OrderKind::Case1Identity, reversed: false }
    }

    pub fn case2() -> Self {
        OrderSpec { kind: OrderKind::Case2TotalDegree, reversed: false }
    }

    /// Build a matrix order, rejecting singular matrices up front.
    pub fn matrix(m: Vec<Vec<i64>>) -> Result<Self, AlgebraError> {
        let dim = m.len();
        if m.iter().any(|row| row.len() != dim) {
            return Err(AlgebraError::SingularOrderMatrix);
        }
        if int_matrix_det(&m).is_zero() {
            return Err(AlgebraError::SingularOrderMatrix);
        }
        Ok(OrderSpec { kind: OrderKind::Matrix(m), reversed: false })
    }

    pub fn lambda_adic_zero(lambda: usize) -> Self {
        OrderSpec { kind: OrderKind::LambdaAdic { lambda, at_infinity: false }, reversed: false }
    }

    pub fn lambda_adic_infinity(lambda: usize) -> Self {
        OrderSpec { kind: OrderKind::LambdaAdic { lambda, at_infinity: true }, reversed: false }
    }

    /// The same order with the comparison flipped.
    pub fn reversed(&self) -> Self {
        OrderSpec { kind: self.kind.clone(), reversed: !self.reversed }
    }

    fn apply_reversal(&self, ord: Ordering) -> Ordering {
        if self.reversed {
            ord.reverse()
        } else {
            ord
        }
    }

    /// Compare two exponent vectors.  For the lambda-adic kinds this is a
    /// preorder: distinct monomials with equal designated coordinate compare
    /// `Equal`.
    pub fn compare(
        &self,
        space: VariableSpace,
        a: &ExponentVector,
        b: &ExponentVector,
    ) -> Result<Ordering, AlgebraError> {
        let dim = space.dim();
        if a.len() != dim {
            return Err(AlgebraError::BadVectorLength { got: a.len(), want: dim });
        }
        if b.len() != dim {
            return Err(AlgebraError::BadVectorLength { got: b.len(), want: dim });
        }
        let d: Vec<i64> = b.0.iter().zip(&a.0).map(|(x, y)| x - y).collect();
        let raw = match &self.kind {
            OrderKind::Case1Identity => last_dominant(&d),
            OrderKind::Case2TotalDegree => last_dominant(&case2_image_int(space, &d)),
            OrderKind::Matrix(m) => {
                if m.len() != dim {
                    return Err(AlgebraError::BadVectorLength { got: m.len(), want: dim });
                }
                last_dominant(&matrix_image_int(m, &d))
            }
            OrderKind::LambdaAdic { lambda, at_infinity } => {
                if *lambda >= space.lambdas {
                    return Err(AlgebraError::LambdaOutOfRange(*lambda, space.lambdas));
                }
                let mut c = d[space.lambda_index(*lambda)];
                if *at_infinity {
                    c = -c;
                }
                // Positive difference means the first argument is smaller,
                // exactly as in `last_dominant`.
                0.cmp(&c)
            }
        };
        Ok(self.apply_reversal(raw))
    }

    /// Compare two rational exponent vectors.  Needed for the fractional
    /// exponents that appear in matrix-form top rows after column
    /// elimination; follows exactly the integer rule.
    pub fn compare_rational(
        &self,
        space: VariableSpace,
        a: &[BigRational],
        b: &[BigRational],
    ) -> Result<Ordering, AlgebraError> {
        let dim = space.dim();
        if a.len() != dim {
            return Err(AlgebraError::BadVectorLength { got: a.len(), want: dim });
        }
        if b.len() != dim {
            return Err(AlgebraError::BadVectorLength { got: b.len(), want: dim });
        }
        let d: Vec<BigRational> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        let raw = match &self.kind {
            OrderKind::Case1Identity => last_dominant_rat(&d),
            OrderKind::Case2TotalDegree => last_dominant_rat(&case2_image_rat(space, &d)),
            OrderKind::Matrix(m) => {
                if m.len() != dim {
                    return Err(AlgebraError::BadVectorLength { got: m.len(), want: dim });
                }
                last_dominant_rat(&matrix_image_rat(m, &d))
            }
            OrderKind::LambdaAdic { lambda, at_infinity } => {
                if *lambda >= space.lambdas {
                    return Err(AlgebraError::LambdaOutOfRange(*lambda, space.lambdas));
                }
                let c = &d[space.lambda_index(*lambda)];
                let raw = BigRational::zero().cmp(c);
                if *at_infinity {
                    raw.reverse()
                } else {
                    raw
                }
            }
        };
        Ok(self.apply_reversal(raw))
    }

    /// Does `m > 1` hold under this order?
    pub fn succeeds_one(
        &self,
        space: VariableSpace,
        m: &ExponentVector,
    ) -> Result<bool, AlgebraError> {
        Ok(self.compare(space, &ExponentVector::zero(space), m)? == Ordering::Less)
    }

    /// Classify a denominator monomial with respect to one lambda: the sign
    /// of the lambda powers in the expansion of `1/(1 - M)`.
    ///
    /// If `M > 1` the factor expands as `sum_k M^k` and the lambda powers
    /// carry the sign of the lambda exponent `a`; if `M < 1` the factor is
    /// first rewritten as `-M^{-1}/(1 - M^{-1})` and the sign flips.  `a = 0`
    /// is `LambdaFree` regardless of orientation.
    pub fn classify_factor(
        &self,
        space: VariableSpace,
        monomial: &ExponentVector,
        lambda: usize,
    ) -> Result<FactorClass, AlgebraError> {
        if lambda >= space.lambdas {
            return Err(AlgebraError::LambdaOutOfRange(lambda, space.lambdas));
        }
        if monomial.is_zero() {
            return Err(AlgebraError::InvalidFactor);
        }
        let a = monomial.lambda_exp(space, lambda);
        if a == 0 {
            return Ok(FactorClass::LambdaFree);
        }
        let effective = match self.compare(space, &ExponentVector::zero(space), monomial)? {
            Ordering::Less => a,
            Ordering::Greater => -a,
            // Only the lambda-adic preorders can tie, and they tie exactly
            // when a = 0, which was handled above.
            Ordering::Equal => return Err(AlgebraError::InvalidFactor),
        };
        Ok(if effective > 0 { FactorClass::PT } else { FactorClass::NT })
    }

    /// True when the order is one of the families for which the contribution
    /// machinery is justified: the identity and total-degree orders, or a
    /// matrix order that maps the lambda block and the x block into
    /// themselves (monomial images of lambdas stay in the lambdas, likewise
    /// for x).  Reversal is harmless.
    pub fn supports_contribution(&self, space: VariableSpace) -> bool {
        match &self.kind {
            OrderKind::Case1Identity | OrderKind::Case2TotalDegree => true,
            OrderKind::Matrix(m) => {
                let r = space.lambdas;
                let dim = space.dim();
                if m.len() != dim {
                    return false;
                }
                // Column j of the matrix is the image of basis vector j.
                for j in 0..r {
                    for row in r..dim {
                        if m[row][j] != 0 {
                            return false;
                        }
                    }
                }
                for j in r..dim {
                    for row in 0..r {
                        if m[row][j] != 0 {
                            return false;
                        }
                    }
                }
                true
            }
            OrderKind::LambdaAdic { .. } => false,
        }
    }
}

/// Last-dominant comparison of a difference vector against zero: positive
/// highest-index nonzero coordinate means `Less` (the first argument is the
/// smaller monomial).
fn last_dominant(d: &[i64]) -> Ordering {
    for &c in d.iter().rev() {
        if c != 0 {
            return if c > 0 { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

fn last_dominant_rat(d: &[BigRational]) -> Ordering {
    for c in d.iter().rev() {
        if !c.is_zero() {
            return if c.is_positive() { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

/// Image of a difference vector under the total-degree order: target space
/// `(l_1', ..., l_r', x_1, ..., x_n, t)` with the lambda block reversed
/// (`l_j'` carries the original `l_{r-j+1}`) and `t` the total x-degree.
fn case2_image_int(space: VariableSpace, d: &[i64]) -> Vec<i64> {
    let r = space.lambdas;
    let n = space.xs;
    let mut img = Vec::with_capacity(r + n + 1);
    for j in 0..r {
        img.push(d[r - 1 - j]);
    }
    img.extend_from_slice(&d[r..]);
    img.push(d[r..].iter().sum());
    img
}

fn case2_image_rat(space: VariableSpace, d: &[BigRational]) -> Vec<BigRational> {
    let r = space.lambdas;
    let n = space.xs;
    let mut img = Vec::with_capacity(r + n + 1);
    for j in 0..r {
        img.push(d[r - 1 - j].clone());
    }
    img.extend_from_slice(&d[r..]);
    let mut t = BigRational::zero();
    for c in &d[r..] {
        t += c;
    }
    img.push(t);
    img
}

fn matrix_image_int(m: &[Vec<i64>], d: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(d).map(|(a, b)| a * b).sum())
        .collect()
}

fn matrix_image_rat(m: &[Vec<i64>], d: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            let mut acc = BigRational::zero();
            for (a, b) in row.iter().zip(d) {
                acc += BigRational::from(BigInt::from(*a)) * b;
            }
            acc
        })
        .collect()
}

/// Exact determinant of an integer matrix via fraction-free rational
/// elimination; used only to reject singular order matrices.
fn int_matrix_det(m: &[Vec<i64>]) -> BigRational {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&v| BigRational::from(BigInt::from(v))).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&row| !a[row][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return BigRational::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for row in col + 1..n {
            if a[row][col].is_zero() {
                continue;
            }
            let f = &a[row][col] / &a[col][col];
            for k in col..n {
                let sub = &f * &a[col][k];
                a[row][k] -= sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(entries: &[i64]) -> ExponentVector {
        ExponentVector::from_slice(entries)
    }

    #[test]
    fn case1_x_dominates_lambda() {
        // Space (x, y) with no lambdas: y is listed last, so y dominates and
        // y/x > 1, matching the expansion 1/(x - y) = sum y^k / x^{k+1}.
        let sp = VariableSpace::new(0, 2);
        let ord = OrderSpec::case1();
        assert_eq!(ord.compare(sp, &ev(&[0, 1]), &ev(&[1, 0])).unwrap(), Ordering::Greater);
        assert!(ord.succeeds_one(sp, &ev(&[-1, 1])).unwrap());

        // 0 vs x1 x2^{-2}: dominant coordinate is x2 with exponent -2.
        assert_eq!(
            ord.compare(sp, &ev(&[0, 0]), &ev(&[1, -2])).unwrap(),
            Ordering::Greater
        );

        let sp2 = VariableSpace::new(1, 1);
        // l1 vs x1: any x dominates any lambda.
        assert_eq!(ord.compare(sp2, &ev(&[1, 0]), &ev(&[0, 1])).unwrap(), Ordering::Less);
        // Infinite separation: x1 exceeds every power of l1.
        assert_eq!(ord.compare(sp2, &ev(&[100, 0]), &ev(&[0, 1])).unwrap(), Ordering::Less);
    }

    #[test]
    fn reversal_flips_strict_comparisons() {
        let sp = VariableSpace::new(1, 1);
        let ord = OrderSpec::case1();
        let rev = ord.reversed();
        let a = ev(&[1, 0]);
        let b = ev(&[0, 1]);
        assert_eq!(ord.compare(sp, &a, &b).unwrap(), Ordering::Less);
        assert_eq!(rev.compare(sp, &a, &b).unwrap(), Ordering::Greater);
        assert_eq!(rev.compare(sp, &a, &a).unwrap(), Ordering::Equal);
    }

    #[test]
    fn case2_total_degree_dominates() {
        let sp = VariableSpace::new(2, 2);
        let ord = OrderSpec::case2();
        // x1 x2^{-1} has total degree 0, so the tie falls to the x block:
        // its dominant x coordinate is x2 = -1, hence y < 1 < l1.
        let y = ev(&[0, 0, 1, -1]);
        let l1 = ev(&[1, 0, 0, 0]);
        assert_eq!(ord.compare(sp, &y, &l1).unwrap(), Ordering::Less);
        assert_eq!(ord.compare(sp, &y, &ExponentVector::zero(sp)).unwrap(), Ordering::Less);
        // Positive total degree dominates everything.
        let x1 = ev(&[0, 0, 1, 0]);
        assert_eq!(ord.compare(sp, &l1, &x1).unwrap(), Ordering::Less);
        assert_eq!(ord.compare(sp, &ev(&[50, 0, 0, 0]), &x1).unwrap(), Ordering::Less);
    }

    #[test]
    fn lambda_adic_is_a_preorder() {
        let sp = VariableSpace::new(1, 2);
        let zero = OrderSpec::lambda_adic_zero(0);
        let inf = OrderSpec::lambda_adic_infinity(0);
        let m = ev(&[1, 3, 0]); // l1 x1^3
        let one = ExponentVector::zero(sp);
        assert_eq!(zero.compare(sp, &one, &m).unwrap(), Ordering::Less);
        assert_eq!(inf.compare(sp, &one, &m).unwrap(), Ordering::Greater);
        // Ties on the lambda coordinate compare Equal even for distinct
        // monomials.
        assert_eq!(zero.compare(sp, &ev(&[1, 0, 0]), &ev(&[1, 5, 5])).unwrap(), Ordering::Equal);
    }

    #[test]
    fn classification_examples() {
        let sp = VariableSpace::new(2, 3);
        let ord = OrderSpec::case1();
        // 1 - l1^3 l2^{-1} x1 with respect to l1: oriented as-is, positive
        // exponent.
        let m1 = ev(&[3, -1, 1, 0, 0]);
        assert_eq!(ord.classify_factor(sp, &m1, 0).unwrap(), FactorClass::PT);
        // 1 - l1^{-2} l2^{-1} x3 with respect to l1: negative exponent.
        let m3 = ev(&[-2, -1, 0, 0, 1]);
        assert_eq!(ord.classify_factor(sp, &m3, 0).unwrap(), FactorClass::NT);
        // Same factor with respect to l2 under the at-zero preorder: the
        // orientation flips, so the expansion has positive l2 powers.
        let adic = OrderSpec::lambda_adic_zero(1);
        assert_eq!(adic.classify_factor(sp, &m3, 1).unwrap(), FactorClass::PT);
        // At infinity everything lambda-dependent classifies NT.
        let adic_inf = OrderSpec::lambda_adic_infinity(1);
        assert_eq!(adic_inf.classify_factor(sp, &m3, 1).unwrap(), FactorClass::NT);
        // Lambda-free.
        let free = ev(&[0, 0, 1, 1, 0]);
        assert_eq!(ord.classify_factor(sp, &free, 0).unwrap(), FactorClass::LambdaFree);
    }

    #[test]
    fn matrix_order_matches_case1_for_identity() {
        let sp = VariableSpace::new(1, 2);
        let id = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let ord = OrderSpec::matrix(id).unwrap();
        let base = OrderSpec::case1();
        let vs = [ev(&[0, 0, 0]), ev(&[1, 0, 0]), ev(&[-2, 1, 0]), ev(&[3, -1, 2])];
        for a in &vs {
            for b in &vs {
                assert_eq!(
                    ord.compare(sp, a, b).unwrap(),
                    base.compare(sp, a, b).unwrap()
                );
            }
        }
        assert!(ord.supports_contribution(sp));
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = vec![vec![1, 1], vec![2, 2]];
        assert_eq!(OrderSpec::matrix(m).unwrap_err(), AlgebraError::SingularOrderMatrix);
    }

    #[test]
    fn mixed_block_matrix_not_contribution_safe() {
        let sp = VariableSpace::new(1, 1);
        // Sends x1 to l1 x1: injective but mixes the blocks.
        let ord = OrderSpec::matrix(vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert!(!ord.supports_contribution(sp));
        assert!(!OrderSpec::lambda_adic_zero(0).supports_contribution(sp));
        assert!(OrderSpec::case2().reversed().supports_contribution(sp));
    }
}
