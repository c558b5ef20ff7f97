//! Elliott-rational functions: finite sums of `coef * monomial / prod (1 - monomial)^mult`.
//!
//! The representation is deliberately redundant — no cancellation between
//! terms, no factor simplification — because every operation the engine
//! needs (Elliott steps, constant-term extraction, reciprocity checks)
//! preserves the shape, and equality is decided exactly by clearing
//! denominators and comparing Laurent polynomials.

use super::exponent::ExponentVector;
use super::order::{OrderKind, OrderSpec};
use super::space::VariableSpace;
use super::AlgebraError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;

/// Exact Laurent polynomial: monomial -> coefficient, zero coefficients
/// never stored.
pub type LaurentPoly = BTreeMap<ExponentVector, BigRational>;

/// Convenience: the integer `n` as an exact rational.
pub fn qint(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Convenience: the exact rational `p/q`.
pub fn qrat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// One denominator factor `(1 - monomial)^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElliottFactor {
    pub monomial: ExponentVector,
    pub multiplicity: u32,
}

impl ElliottFactor {
    pub fn new(monomial: ExponentVector, multiplicity: u32) -> Self {
        assert!(!monomial.is_zero(), "denominator factor with unit monomial");
        assert!(multiplicity > 0, "denominator factor with zero multiplicity");
        ElliottFactor { monomial, multiplicity }
    }
}

/// One term `coefficient * x^numerator / prod_j (1 - x^{m_j})^{mult_j}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ElliottTerm {
    pub coefficient: BigRational,
    pub numerator: ExponentVector,
    /// Pairwise-distinct monomials, kept sorted; like factors are merged by
    /// adding multiplicities.
    pub denominator: Vec<ElliottFactor>,
}

impl ElliottTerm {
    /// Build a term, merging duplicate factor monomials and sorting the
    /// denominator into canonical order.
    pub fn new(
        coefficient: BigRational,
        numerator: ExponentVector,
        denominator: Vec<ElliottFactor>,
    ) -> Self {
        let mut merged: BTreeMap<ExponentVector, u32> = BTreeMap::new();
        for f in denominator {
            assert!(!f.monomial.is_zero(), "denominator factor with unit monomial");
            *merged.entry(f.monomial).or_insert(0) += f.multiplicity;
        }
        let denominator = merged
            .into_iter()
            .filter(|&(_, m)| m > 0)
            .map(|(monomial, multiplicity)| ElliottFactor { monomial, multiplicity })
            .collect();
        ElliottTerm { coefficient, numerator, denominator }
    }

    /// Total multiplicity-weighted absolute lambda exponent of the
    /// denominator: the termination measure of Elliott reduction.
    pub fn lambda_measure(&self, space: VariableSpace, lambda: usize) -> i64 {
        self.denominator
            .iter()
            .map(|f| f.monomial.lambda_exp(space, lambda).abs() * i64::from(f.multiplicity))
            .sum()
    }

    /// Key identifying "like" terms for merging.
    fn merge_key(&self) -> (ExponentVector, Vec<ElliottFactor>) {
        (self.numerator.clone(), self.denominator.clone())
    }
}

/// A finite sum of Elliott terms over a fixed variable space.  The zero
/// function is the empty sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElliottRational {
    pub space: VariableSpace,
    pub terms: Vec<ElliottTerm>,
}

impl ElliottRational {
    pub fn zero(space: VariableSpace) -> Self {
        ElliottRational { space, terms: Vec::new() }
    }

    pub fn one(space: VariableSpace) -> Self {
        Self::monomial(space, BigRational::one(), ExponentVector::zero(space))
    }

    /// A single monomial `coef * x^num` with empty denominator.
    pub fn monomial(space: VariableSpace, coefficient: BigRational, numerator: ExponentVector) -> Self {
        if coefficient.is_zero() {
            return Self::zero(space);
        }
        ElliottRational {
            space,
            terms: vec![ElliottTerm::new(coefficient, numerator, Vec::new())],
        }
    }

    pub fn from_terms(space: VariableSpace, terms: Vec<ElliottTerm>) -> Self {
        for t in &terms {
            assert_eq!(t.numerator.len(), space.dim(), "numerator length mismatch");
            for f in &t.denominator {
                assert_eq!(f.monomial.len(), space.dim(), "factor length mismatch");
            }
        }
        ElliottRational { space, terms }
    }

    fn check_space(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.space != other.space {
            return Err(AlgebraError::MismatchedSpace(
                self.space.to_string(),
                other.space.to_string(),
            ));
        }
        Ok(())
    }

    /// Term-list concatenation; no cancellation is attempted.
    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_space(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(ElliottRational { space: self.space, terms })
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| ElliottTerm {
                coefficient: -t.coefficient.clone(),
                numerator: t.numerator.clone(),
                denominator: t.denominator.clone(),
            })
            .collect();
        ElliottRational { space: self.space, terms }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.space);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| ElliottTerm {
                coefficient: &t.coefficient * c,
                numerator: t.numerator.clone(),
                denominator: t.denominator.clone(),
            })
            .collect();
        ElliottRational { space: self.space, terms }
    }

    /// Pairwise product of terms: numerators add, denominators take the
    /// multiset union.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_space(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut den = a.denominator.clone();
                den.extend(b.denominator.iter().cloned());
                terms.push(ElliottTerm::new(
                    &a.coefficient * &b.coefficient,
                    &a.numerator + &b.numerator,
                    den,
                ));
            }
        }
        Ok(ElliottRational { space: self.space, terms })
    }

    /// Merge like terms (same numerator and denominator multiset), drop
    /// zero coefficients, and sort canonically.  This is the normal form
    /// used for deterministic output.
    pub fn merged(&self) -> Self {
        let mut acc: BTreeMap<(ExponentVector, Vec<ElliottFactor>), BigRational> = BTreeMap::new();
        for t in &self.terms {
            let entry = acc.entry(t.merge_key()).or_insert_with(BigRational::zero);
            *entry += &t.coefficient;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((numerator, denominator), coefficient)| ElliottTerm {
                coefficient,
                numerator,
                denominator,
            })
            .collect();
        ElliottRational { space: self.space, terms }
    }

    /// Invert the given coordinates throughout (numerators and denominator
    /// monomials).  Passing the x block computes `F(x -> x^{-1})`.
    pub fn substitute_inverse(&self, coords: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                ElliottTerm::new(
                    t.coefficient.clone(),
                    t.numerator.inverted_at(coords),
                    t.denominator
                        .iter()
                        .map(|f| ElliottFactor::new(f.monomial.inverted_at(coords), f.multiplicity))
                        .collect(),
                )
            })
            .collect();
        ElliottRational { space: self.space, terms }
    }

    /// All x coordinates of the space, for the common `F(x^{-1})` case.
    pub fn substitute_inverse_all_x(&self) -> Self {
        let coords: Vec<usize> = (0..self.space.xs).map(|j| self.space.x_index(j)).collect();
        self.substitute_inverse(&coords)
    }

    /// Rewrite every denominator factor so its monomial exceeds 1 under the
    /// order, using `1/(1-M)^m = (-1)^m M^{-m} / (1-M^{-1})^m`.  Under the
    /// lambda-adic preorders, factors free of the designated lambda tie with
    /// 1 and are left untouched.
    pub fn orient(&self, ord: &OrderSpec) -> Result<Self, AlgebraError> {
        let space = self.space;
        let one_vec = ExponentVector::zero(space);
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut coefficient = t.coefficient.clone();
            let mut numerator = t.numerator.clone();
            let mut den = Vec::with_capacity(t.denominator.len());
            for f in &t.denominator {
                match ord.compare(space, &one_vec, &f.monomial)? {
                    Ordering::Less => den.push(f.clone()),
                    Ordering::Greater => {
                        let inv = -&f.monomial;
                        numerator = &numerator - &f.monomial.scaled(i64::from(f.multiplicity));
                        if f.multiplicity % 2 == 1 {
                            coefficient = -coefficient;
                        }
                        den.push(ElliottFactor::new(inv, f.multiplicity));
                    }
                    Ordering::Equal => match ord.kind {
                        OrderKind::LambdaAdic { .. } => den.push(f.clone()),
                        _ => return Err(AlgebraError::InvalidFactor),
                    },
                }
            }
            out.push(ElliottTerm::new(coefficient, numerator, den));
        }
        Ok(ElliottRational { space, terms: out })
    }

    /// Exact zero test: clear all terms over the least common denominator
    /// (per-monomial maximum multiplicity), expand the resulting Laurent
    /// polynomial, and check that every coefficient cancels.
    pub fn is_zero(&self) -> bool {
        // Least common denominator of all terms.
        let mut join: BTreeMap<ExponentVector, u32> = BTreeMap::new();
        for t in &self.terms {
            for f in &t.denominator {
                let e = join.entry(f.monomial.clone()).or_insert(0);
                *e = (*e).max(f.multiplicity);
            }
        }
        let mut sum: LaurentPoly = BTreeMap::new();
        for t in &self.terms {
            let mut poly: LaurentPoly = BTreeMap::new();
            poly.insert(t.numerator.clone(), t.coefficient.clone());
            for (monomial, &join_mult) in &join {
                let own = t
                    .denominator
                    .iter()
                    .find(|f| &f.monomial == monomial)
                    .map_or(0, |f| f.multiplicity);
                for _ in own..join_mult {
                    poly = mul_by_one_minus(&poly, monomial);
                }
            }
            for (mono, coef) in poly {
                let entry = sum.entry(mono).or_insert_with(BigRational::zero);
                *entry += coef;
            }
        }
        sum.values().all(|c| c.is_zero())
    }

    /// Exact equality as rational functions.
    pub fn equals(&self, other: &Self) -> Result<bool, AlgebraError> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Power-series expansion in the x variables up to total degree
    /// `max_degree`: requires every denominator monomial to be lambda-free
    /// with componentwise nonnegative x-exponents of positive total degree.
    /// Numerators may be arbitrary Laurent monomials; their lambda part is
    /// carried into the keys unchanged.
    pub fn series_truncate(&self, max_degree: i64) -> Result<LaurentPoly, AlgebraError> {
        let space = self.space;
        for t in &self.terms {
            for f in &t.denominator {
                let m = &f.monomial;
                let lambda_free = m.0[..space.lambdas].iter().all(|&e| e == 0);
                let nonneg = m.0[space.lambdas..].iter().all(|&e| e >= 0);
                let degree = m.total_x_degree(space);
                if !lambda_free || !nonneg || degree <= 0 {
                    return Err(AlgebraError::NotPowerSeriesExpandable(format!(
                        "denominator monomial {m}"
                    )));
                }
            }
        }
        let mut out: LaurentPoly = BTreeMap::new();
        for t in &self.terms {
            expand_term(space, t, max_degree, &mut out);
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }
}

/// Multiply a Laurent polynomial by `(1 - monomial)`.
fn mul_by_one_minus(poly: &LaurentPoly, monomial: &ExponentVector) -> LaurentPoly {
    let mut out = poly.clone();
    for (mono, coef) in poly {
        let shifted = mono + monomial;
        let entry = out.entry(shifted).or_insert_with(BigRational::zero);
        *entry -= coef;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `C(n, k)` as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Negative-binomial weight: coefficient of `M^k` in `1/(1-M)^mult`.
pub fn negative_binomial_weight(multiplicity: u32, k: u64) -> BigInt {
    binomial(u64::from(multiplicity) - 1 + k, k)
}

fn expand_term(space: VariableSpace, t: &ElliottTerm, max_degree: i64, out: &mut LaurentPoly) {
    // Depth-first over factor powers, pruning on the accumulated x-degree.
    fn rec(
        space: VariableSpace,
        factors: &[ElliottFactor],
        idx: usize,
        acc_mono: ExponentVector,
        acc_coef: BigRational,
        budget: i64,
        out: &mut LaurentPoly,
    ) {
        if idx == factors.len() {
            let entry = out.entry(acc_mono).or_insert_with(BigRational::zero);
            *entry += acc_coef;
            return;
        }
        let f = &factors[idx];
        let deg = f.monomial.total_x_degree(space);
        debug_assert!(deg > 0);
        let mut k: i64 = 0;
        loop {
            let used = k * deg;
            if used > budget {
                break;
            }
            let weight = negative_binomial_weight(f.multiplicity, k as u64);
            let coef = &acc_coef * BigRational::from(weight);
            let mono = &acc_mono + &f.monomial.scaled(k);
            rec(space, factors, idx + 1, mono, coef, budget - used, out);
            k += 1;
        }
    }

    let start_degree = t.numerator.total_x_degree(space);
    let budget = max_degree - start_degree;
    if t.denominator.is_empty() {
        if start_degree <= max_degree {
            let entry = out.entry(t.numerator.clone()).or_insert_with(BigRational::zero);
            *entry += &t.coefficient;
        }
        return;
    }
    if budget < 0 {
        return;
    }
    rec(
        space,
        &t.denominator,
        0,
        t.numerator.clone(),
        t.coefficient.clone(),
        budget,
        out,
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(entries: &[i64]) -> ExponentVector {
        ExponentVector::from_slice(entries)
    }

    fn sp01() -> VariableSpace {
        VariableSpace::new(0, 1)
    }

    #[test]
    fn orientation_rewrites_small_monomials() {
        // 1/(1 - x^{-1}) = -x/(1 - x) in the field where x > 1.
        let sp = sp01();
        let f = ElliottRational::from_terms(
            sp,
            vec![ElliottTerm::new(
                BigRational::one(),
                ev(&[0]),
                vec![ElliottFactor::new(ev(&[-1]), 1)],
            )],
        );
        let oriented = f.orient(&OrderSpec::case1()).unwrap();
        let expected = ElliottRational::from_terms(
            sp,
            vec![ElliottTerm::new(
                qint(-1),
                ev(&[1]),
                vec![ElliottFactor::new(ev(&[1]), 1)],
            )],
        );
        assert_eq!(oriented, expected);
        // Orientation preserves the function exactly.
        assert!(f.equals(&oriented).unwrap());
    }

    #[test]
    fn orientation_merges_mutually_inverse_factors() {
        // 1/((1-x)(1-x^{-1})) orients to -x/(1-x)^2: a single factor of
        // multiplicity two, so no mixed pair survives.
        let sp = sp01();
        let f = ElliottRational::from_terms(
            sp,
            vec![ElliottTerm::new(
                BigRational::one(),
                ev(&[0]),
                vec![ElliottFactor::new(ev(&[1]), 1), ElliottFactor::new(ev(&[-1]), 1)],
            )],
        );
        let oriented = f.orient(&OrderSpec::case1()).unwrap();
        assert_eq!(oriented.terms.len(), 1);
        assert_eq!(oriented.terms[0].denominator.len(), 1);
        assert_eq!(oriented.terms[0].denominator[0].multiplicity, 2);
        assert!(f.equals(&oriented).unwrap());
    }

    #[test]
    fn series_of_squared_geometric() {
        // 1/(1-x)^2 = 1 + 2x + 3x^2 + 4x^3 + ...
        let sp = sp01();
        let f = ElliottRational::from_terms(
            sp,
            vec![ElliottTerm::new(
                BigRational::one(),
                ev(&[0]),
                vec![ElliottFactor::new(ev(&[1]), 2)],
            )],
        );
        let series = f.series_truncate(3).unwrap();
        assert_eq!(series.len(), 4);
        for k in 0..=3i64 {
            assert_eq!(series[&ev(&[k])], qint(k + 1));
        }
    }

    #[test]
    fn series_rejects_lambda_and_negative_monomials() {
        let sp = VariableSpace::new(1, 1);
        let bad = ElliottRational::from_terms(
            sp,
            vec![ElliottTerm::new(
                BigRational::one(),
                ev(&[0, 0]),
                vec![ElliottFactor::new(ev(&[1, 1]), 1)],
            )],
        );
        assert!(matches!(
            bad.series_truncate(3),
            Err(AlgebraError::NotPowerSeriesExpandable(_))
        ));
        let sp2 = VariableSpace::new(0, 2);
        let bad2 = ElliottRational::from_terms(
            sp2,
            vec![ElliottTerm::new(
                BigRational::one(),
                ev(&[0, 0]),
                vec![ElliottFactor::new(ev(&[2, -1]), 1)],
            )],
        );
        assert!(bad2.series_truncate(3).is_err());
    }

    #[test]
    fn zero_test_detects_cancellation() {
        // x/(1-x) + 1/(1-x) - 1/(1-x) - x/(1-x) with shuffled shapes.
        let sp = sp01();
        let t = |c: i64, num: i64| {
            ElliottTerm::new(qint(c), ev(&[num]), vec![ElliottFactor::new(ev(&[1]), 1)])
        };
        let f = ElliottRational::from_terms(sp, vec![t(1, 1), t(1, 0), t(-1, 0), t(-1, 1)]);
        assert!(f.is_zero());
        let g = ElliottRational::from_terms(sp, vec![t(1, 1), t(1, 0), t(-1, 1)]);
        assert!(!g.is_zero());
    }

    #[test]
    fn zero_test_across_different_denominators() {
        // 1/(1-x) - (1+x)/(1-x^2)  ==  0, written with monomial numerators:
        // 1/(1-x) - 1/(1-x^2) - x/(1-x^2).
        let sp = sp01();
        let f = ElliottRational::from_terms(
            sp,
            vec![
                ElliottTerm::new(qint(1), ev(&[0]), vec![ElliottFactor::new(ev(&[1]), 1)]),
                ElliottTerm::new(qint(-1), ev(&[0]), vec![ElliottFactor::new(ev(&[2]), 1)]),
                ElliottTerm::new(qint(-1), ev(&[1]), vec![ElliottFactor::new(ev(&[2]), 1)]),
            ],
        );
        assert!(f.is_zero());
    }

    #[test]
    fn inversion_is_an_involution() {
        let sp = VariableSpace::new(1, 2);
        let f = ElliottRational::from_terms(
            sp,
            vec![ElliottTerm::new(
                qrat(2, 3),
                ev(&[1, -2, 0]),
                vec![ElliottFactor::new(ev(&[0, 1, 1]), 2), ElliottFactor::new(ev(&[-1, 0, 3]), 1)],
            )],
        );
        let coords = [sp.x_index(0), sp.x_index(1)];
        assert_eq!(f.substitute_inverse(&coords).substitute_inverse(&coords), f);
    }

    #[test]
    fn merge_combines_like_terms() {
        let sp = sp01();
        let t = |c: i64| {
            ElliottTerm::new(qint(c), ev(&[1]), vec![ElliottFactor::new(ev(&[1]), 1)])
        };
        let f = ElliottRational::from_terms(sp, vec![t(2), t(3), t(-5)]);
        assert!(f.merged().terms.is_empty());
        let g = ElliottRational::from_terms(sp, vec![t(2), t(3)]);
        assert_eq!(g.merged().terms.len(), 1);
        assert_eq!(g.merged().terms[0].coefficient, qint(5));
    }

    #[test]
    fn binomial_helpers() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(negative_binomial_weight(2, 3), BigInt::from(4));
        assert_eq!(negative_binomial_weight(1, 7), BigInt::one());
    }
}
