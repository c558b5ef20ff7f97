//! Iterated constant-term extraction in the lambda variables.
//!
//! Extraction of `CT_lambda` proceeds in three stages.  First every
//! denominator factor is oriented so that its monomial exceeds 1 in the
//! chosen monomial order, which fixes a single valid series expansion
//! for each factor.  Second, any term whose factors carry lambda
//! exponents of both signs is rewritten with a power-lifted partial
//! fraction step
//!
//! ```text
//!   1/(1-L)(1-S)  =  (1 + S + ... + S^{k-1}) / (1-L)(1-S^k)
//!                 =  ... (1-L*S^k) appears, lambda exponents shrink
//! ```
//!
//! where `k = floor(|exp L| / |exp S|)`; every output term has strictly
//! smaller total lambda measure, so the rewriting terminates.  Third,
//! once each term's surviving factors carry lambda exponents of one sign
//! only, the constant term is read off by enumerating the finitely many
//! exponent combinations that cancel the numerator's lambda power.
//!
//! The same loop serves the full orders and the lambda-adic orders used
//! for the at-zero/at-infinity constant terms (where orientation alone
//! already removes all mixed terms), so `CT`, `CT` at zero/infinity, the
//! two-sided invariant operator, and Hadamard products all share one
//! engine.

use crate::algebra::{
    negative_binomial_weight, AlgebraError, ElliottFactor, ElliottRational, ElliottTerm,
    ExponentVector, FactorClass, OrderSpec, VariableSpace,
};
use crate::ldsystem::{LDSystem, SolutionGF};
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CtError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("term budget of {budget} live terms exceeded")]
    TermBudgetExceeded { budget: usize },
    #[error("term is not oriented for the given order")]
    NotOriented,
    #[error("term has no factor pair with opposite lambda exponents")]
    NoMixedPair,
    #[error("hadamard product expects functions of a single variable")]
    HadamardSpace,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Tunable limits for the extraction loop.
#[derive(Clone, Copy, Debug)]
pub struct CtOptions {
    /// Maximum number of live terms after merging in any round.
    pub term_budget: usize,
}

impl Default for CtOptions {
    fn default() -> Self {
        CtOptions { term_budget: 200_000 }
    }
}

fn factor_lambda_exps(space: VariableSpace, term: &ElliottTerm, lambda: usize) -> Vec<i64> {
    term.denominator.iter().map(|f| f.monomial.lambda_exp(space, lambda)).collect()
}

/// Chooses the factor pair with opposite lambda exponents minimizing
/// `|a| + |b|`, ties broken by position; `None` when no such pair exists.
fn mixed_pair(space: VariableSpace, term: &ElliottTerm, lambda: usize) -> Option<(usize, usize)> {
    let exps = factor_lambda_exps(space, term, lambda);
    let mut best: Option<(i64, usize, usize)> = None;
    for i in 0..exps.len() {
        for j in i + 1..exps.len() {
            if exps[i] == 0 || exps[j] == 0 || (exps[i] > 0) == (exps[j] > 0) {
                continue;
            }
            let cost = exps[i].abs() + exps[j].abs();
            if best.map_or(true, |(c, _, _)| cost < c) {
                best = Some((cost, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Applies the power-lifted partial fraction identity to one copy each of
/// the factors at positions `i` and `j` (opposite lambda exponents),
/// producing at most `3k` replacement terms of strictly smaller lambda
/// measure.
fn power_lifted_step(
    space: VariableSpace,
    term: &ElliottTerm,
    i: usize,
    j: usize,
    lambda: usize,
) -> Vec<ElliottTerm> {
    let exps = factor_lambda_exps(space, term, lambda);
    // L carries the larger magnitude, S the smaller.
    let (li, si) = if exps[i].abs() >= exps[j].abs() { (i, j) } else { (j, i) };
    let h = exps[si].abs();
    let big = exps[li].abs();
    debug_assert!(h > 0 && big > 0 && (exps[li] > 0) != (exps[si] > 0));
    let k = big / h;
    let m_l = term.denominator[li].monomial.clone();
    let m_s = term.denominator[si].monomial.clone();
    let ab = &m_l + &m_s.scaled(k);
    let s_k = m_s.scaled(k);

    let mut rest: Vec<ElliottFactor> = Vec::with_capacity(term.denominator.len());
    for (pos, f) in term.denominator.iter().enumerate() {
        let mult = if pos == li || pos == si { f.multiplicity - 1 } else { f.multiplicity };
        if mult > 0 {
            rest.push(ElliottFactor::new(f.monomial.clone(), mult));
        }
    }

    let mut out = Vec::with_capacity(3 * k as usize);
    for step in 0..k {
        let num = &term.numerator + &m_s.scaled(step);
        for piece in 0..3 {
            let mut den = rest.clone();
            den.push(ElliottFactor::new(ab.clone(), 1));
            let mut coef = term.coefficient.clone();
            match piece {
                0 => den.push(ElliottFactor::new(m_l.clone(), 1)),
                1 => den.push(ElliottFactor::new(s_k.clone(), 1)),
                _ => coef = -coef,
            }
            let produced = ElliottTerm::new(coef, num.clone(), den);
            debug_assert!(
                produced.lambda_measure(space, lambda) < term.lambda_measure(space, lambda)
            );
            out.push(produced);
        }
    }
    out
}

/// One public partial-fraction step on an oriented term: pairs the first
/// factor with positive lambda exponent against the first with negative.
pub fn elliott_step(
    space: VariableSpace,
    term: &ElliottTerm,
    lambda: usize,
    ord: &OrderSpec,
) -> Result<Vec<ElliottTerm>, CtError> {
    for f in &term.denominator {
        if ord.classify_factor(space, &f.monomial, lambda)? != FactorClass::LambdaFree
            && !ord.succeeds_one(space, &f.monomial)?
        {
            return Err(CtError::NotOriented);
        }
    }
    let exps = factor_lambda_exps(space, term, lambda);
    let pos = exps.iter().position(|&a| a > 0);
    let neg = exps.iter().position(|&a| a < 0);
    match (pos, neg) {
        (Some(i), Some(j)) => Ok(power_lifted_step(space, term, i.min(j), i.max(j), lambda)),
        _ => Err(CtError::NoMixedPair),
    }
}

fn total_measure(f: &ElliottRational, lambda: usize) -> i128 {
    f.terms.iter().map(|t| i128::from(t.lambda_measure(f.space, lambda))).sum()
}

/// Reads off the lambda constant term of a single-signed term: enumerates
/// the exponent tuples of the lambda-carrying factors whose total lambda
/// power cancels the numerator's, keeping the lambda-free factors as the
/// resulting denominator.
fn extract_single_sign(
    space: VariableSpace,
    term: &ElliottTerm,
    lambda: usize,
) -> Result<Vec<ElliottTerm>, CtError> {
    let c = term.numerator.lambda_exp(space, lambda);
    let mut dependent: Vec<(&ElliottFactor, i64)> = Vec::new();
    let mut free: Vec<ElliottFactor> = Vec::new();
    for f in &term.denominator {
        let a = f.monomial.lambda_exp(space, lambda);
        if a == 0 {
            free.push(f.clone());
        } else {
            dependent.push((f, a));
        }
    }
    if dependent.is_empty() {
        return Ok(if c == 0 { vec![term.clone()] } else { vec![] });
    }
    let positive = dependent[0].1 > 0;
    if dependent.iter().any(|&(_, a)| (a > 0) != positive) {
        return Err(CtError::Internal(
            "mixed lambda signs survived the reduction loop".to_string(),
        ));
    }
    // Solve sum a_j k_j = -c with k_j >= 0; normalize to positive steps.
    let target = if positive { -c } else { c };
    if target < 0 {
        return Ok(vec![]);
    }
    let steps: Vec<i64> = dependent.iter().map(|&(_, a)| a.abs()).collect();
    let mut out = Vec::new();
    let mut ks = vec![0i64; dependent.len()];
    enumerate_cancellations(&mut ks, 0, target, &steps, &mut |ks| {
        let mut coef = term.coefficient.clone();
        let mut num = term.numerator.clone();
        for (idx, &(f, _)) in dependent.iter().enumerate() {
            coef *= BigRational::from(negative_binomial_weight(f.multiplicity, ks[idx] as u64));
            num = &num + &f.monomial.scaled(ks[idx]);
        }
        debug_assert_eq!(num.lambda_exp(space, lambda), 0);
        out.push(ElliottTerm::new(coef, num, free.clone()));
    });
    Ok(out)
}

fn enumerate_cancellations(
    ks: &mut [i64],
    idx: usize,
    remaining: i64,
    steps: &[i64],
    emit: &mut impl FnMut(&[i64]),
) {
    if idx == steps.len() {
        if remaining == 0 {
            emit(ks);
        }
        return;
    }
    if idx == steps.len() - 1 {
        if remaining % steps[idx] == 0 {
            ks[idx] = remaining / steps[idx];
            emit(ks);
        }
        return;
    }
    let mut k = 0;
    while k * steps[idx] <= remaining {
        ks[idx] = k;
        enumerate_cancellations(ks, idx + 1, remaining - k * steps[idx], steps, emit);
        k += 1;
    }
}

/// Constant term in one lambda variable under `ord`, with per-round
/// diagnostics appended to `trace`.
pub fn ct_lambda_traced(
    f: &ElliottRational,
    lambda: usize,
    ord: &OrderSpec,
    opts: &CtOptions,
    trace: &mut Vec<String>,
) -> Result<ElliottRational, CtError> {
    let space = f.space;
    if lambda >= space.lambdas {
        return Err(AlgebraError::LambdaOutOfRange(lambda, space.lambdas).into());
    }
    let mut work = f.orient(ord)?.merged();
    let mut round = 0usize;
    loop {
        if work.terms.len() > opts.term_budget {
            return Err(CtError::TermBudgetExceeded { budget: opts.term_budget });
        }
        let mut next = Vec::new();
        let mut reduced = false;
        for term in &work.terms {
            match mixed_pair(space, term, lambda) {
                Some((i, j)) => {
                    reduced = true;
                    next.extend(power_lifted_step(space, term, i, j, lambda));
                }
                None => next.push(term.clone()),
            }
        }
        if !reduced {
            break;
        }
        round += 1;
        work = ElliottRational::from_terms(space, next).merged();
        trace.push(format!(
            "lambda {}: round {}: {} live terms, measure {}",
            lambda + 1,
            round,
            work.terms.len(),
            total_measure(&work, lambda)
        ));
    }
    let mut out = Vec::new();
    for term in &work.terms {
        out.extend(extract_single_sign(space, term, lambda)?);
    }
    Ok(ElliottRational::from_terms(space, out).merged())
}

pub fn ct_lambda(
    f: &ElliottRational,
    lambda: usize,
    ord: &OrderSpec,
    opts: &CtOptions,
) -> Result<ElliottRational, CtError> {
    ct_lambda_traced(f, lambda, ord, opts, &mut Vec::new())
}

/// Iterated constant term over all lambdas, innermost first.
pub fn ct_all_traced(
    f: &ElliottRational,
    ord: &OrderSpec,
    opts: &CtOptions,
    trace: &mut Vec<String>,
) -> Result<ElliottRational, CtError> {
    let mut cur = f.clone();
    for lambda in 0..f.space.lambdas {
        cur = ct_lambda_traced(&cur, lambda, ord, opts, trace)?;
    }
    Ok(cur)
}

pub fn ct_all(
    f: &ElliottRational,
    ord: &OrderSpec,
    opts: &CtOptions,
) -> Result<ElliottRational, CtError> {
    ct_all_traced(f, ord, opts, &mut Vec::new())
}

/// Constant term as the lambda variable tends to zero: every factor is
/// classified by its bare lambda exponent, small powers expanding
/// directly.
pub fn ct_at_zero(
    f: &ElliottRational,
    lambda: usize,
    opts: &CtOptions,
) -> Result<ElliottRational, CtError> {
    ct_lambda(f, lambda, &OrderSpec::lambda_adic_zero(lambda), opts)
}

/// Constant term as the lambda variable tends to infinity.
pub fn ct_at_infinity(
    f: &ElliottRational,
    lambda: usize,
    opts: &CtOptions,
) -> Result<ElliottRational, CtError> {
    ct_lambda(f, lambda, &OrderSpec::lambda_adic_infinity(lambda), opts)
}

/// Two-sided invariant operator: the sum of the at-zero and at-infinity
/// constant terms in one lambda.
pub fn i_operator(
    f: &ElliottRational,
    lambda: usize,
    opts: &CtOptions,
) -> Result<ElliottRational, CtError> {
    Ok(ct_at_zero(f, lambda, opts)?.add(&ct_at_infinity(f, lambda, opts)?)?.merged())
}

/// Splits a term's denominator factors by their role for one lambda:
/// (expanding-small, expanding-large, lambda-free).
pub fn rho_factorization(
    space: VariableSpace,
    term: &ElliottTerm,
    lambda: usize,
    ord: &OrderSpec,
) -> Result<(Vec<ElliottFactor>, Vec<ElliottFactor>, Vec<ElliottFactor>), CtError> {
    let mut pt = Vec::new();
    let mut nt = Vec::new();
    let mut free = Vec::new();
    for f in &term.denominator {
        match ord.classify_factor(space, &f.monomial, lambda)? {
            FactorClass::PT => pt.push(f.clone()),
            FactorClass::NT => nt.push(f.clone()),
            FactorClass::LambdaFree => free.push(f.clone()),
        }
    }
    Ok((pt, nt, free))
}

/// Solves a system: the generating function of its nonnegative solutions
/// and of the strictly positive solutions of the sign-flipped system.
pub fn solution_gfs(
    sys: &LDSystem,
    ord: &OrderSpec,
    opts: &CtOptions,
) -> Result<SolutionGF, CtError> {
    Ok(SolutionGF {
        e: ct_all(&sys.crude_e(), ord, opts)?,
        ebar: ct_all(&sys.crude_ebar(), ord, opts)?,
    })
}

fn map_into_space(
    f: &ElliottRational,
    space: VariableSpace,
    map: impl Fn(&ExponentVector) -> ExponentVector,
) -> ElliottRational {
    let terms = f
        .terms
        .iter()
        .map(|t| {
            ElliottTerm::new(
                t.coefficient.clone(),
                map(&t.numerator),
                t.denominator
                    .iter()
                    .map(|fac| ElliottFactor::new(map(&fac.monomial), fac.multiplicity))
                    .collect(),
            )
        })
        .collect();
    ElliottRational::from_terms(space, terms)
}

/// Coefficientwise (Hadamard) product of two one-variable series given as
/// rational functions: the diagonal `CT_lambda f(lambda) g(x/lambda)`.
pub fn hadamard_product(
    f: &ElliottRational,
    g: &ElliottRational,
    opts: &CtOptions,
) -> Result<ElliottRational, CtError> {
    let outer = VariableSpace::new(0, 1);
    if f.space != outer || g.space != outer {
        return Err(CtError::HadamardSpace);
    }
    let inner = VariableSpace::new(1, 1);
    let fe = map_into_space(f, inner, |e| ExponentVector(vec![e.0[0], 0]));
    let ge = map_into_space(g, inner, |e| ExponentVector(vec![-e.0[0], e.0[0]]));
    let ct = ct_lambda(&fe.mul(&ge)?, 0, &OrderSpec::case1(), opts)?;
    for t in &ct.terms {
        if t.numerator.0[0] != 0 || t.denominator.iter().any(|fac| fac.monomial.0[0] != 0) {
            return Err(CtError::Internal("lambda survived the diagonal".to_string()));
        }
    }
    Ok(map_into_space(&ct, outer, |e| ExponentVector(vec![e.0[1]])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qint;
    use num_bigint::BigInt;

    fn opts() -> CtOptions {
        CtOptions::default()
    }

    fn one_term(
        space: VariableSpace,
        coef: i64,
        num: Vec<i64>,
        den: Vec<(Vec<i64>, u32)>,
    ) -> ElliottRational {
        ElliottRational::from_terms(
            space,
            vec![ElliottTerm::new(
                BigRational::from(BigInt::from(coef)),
                ExponentVector(num),
                den.into_iter().map(|(m, k)| ElliottFactor::new(ExponentVector(m), k)).collect(),
            )],
        )
    }

    #[test]
    fn geometric_pair_collapses_to_diagonal() {
        // CT_l 1/((1-l*x)(1-y/l)) = 1/(1-xy).
        let space = VariableSpace::new(1, 2);
        let f = one_term(space, 1, vec![0, 0, 0], vec![(vec![1, 1, 0], 1), (vec![-1, 0, 1], 1)]);
        let expected = one_term(space, 1, vec![0, 0, 0], vec![(vec![0, 1, 1], 1)]);
        let got = ct_lambda(&f, 0, &OrderSpec::case1(), &opts()).unwrap();
        assert!(got.equals(&expected).unwrap());
    }

    #[test]
    fn monomial_numerators_shift_the_constant_term() {
        let space = VariableSpace::new(1, 1);
        let ord = OrderSpec::case1();
        // CT_l l^{-1}/(1-l*x) = x.
        let f = one_term(space, 1, vec![-1, 0], vec![(vec![1, 1], 1)]);
        let expected = one_term(space, 1, vec![0, 1], vec![]);
        assert!(ct_lambda(&f, 0, &ord, &opts()).unwrap().equals(&expected).unwrap());
        // CT_l l/(1-l*x) = 0.
        let g = one_term(space, 1, vec![1, 0], vec![(vec![1, 1], 1)]);
        assert!(ct_lambda(&g, 0, &ord, &opts()).unwrap().is_zero());
        // A lambda-free function passes through unchanged.
        let h = one_term(space, 3, vec![0, 2], vec![(vec![0, 1], 2)]);
        assert!(ct_lambda(&h, 0, &ord, &opts()).unwrap().equals(&h).unwrap());
    }

    #[test]
    fn at_zero_and_at_infinity_examples() {
        let space = VariableSpace::new(1, 1);
        let f = one_term(space, 1, vec![0, 0], vec![(vec![1, 1], 1)]);
        // CT at zero of 1/(1-l*x) is 1; at infinity it is 0.
        assert!(ct_at_zero(&f, 0, &opts()).unwrap().equals(&ElliottRational::one(space)).unwrap());
        assert!(ct_at_infinity(&f, 0, &opts()).unwrap().is_zero());
        // CT at infinity of l/(1-l*x) is -1/x; at zero it is 0.
        let g = one_term(space, 1, vec![1, 0], vec![(vec![1, 1], 1)]);
        assert!(ct_at_zero(&g, 0, &opts()).unwrap().is_zero());
        let expected = one_term(space, -1, vec![0, -1], vec![]);
        assert!(ct_at_infinity(&g, 0, &opts()).unwrap().equals(&expected).unwrap());
    }

    #[test]
    fn invariant_operator_matches_both_field_constant_terms() {
        let space = VariableSpace::new(1, 1);
        let ord = OrderSpec::case1();
        for (c, xpow) in [(0i64, 0i64), (1, 0), (-1, 1), (2, -1)] {
            let f = one_term(space, 1, vec![c, xpow], vec![(vec![1, 1], 1), (vec![-1, 2], 1)]);
            let lhs = ct_all(&f, &ord, &opts())
                .unwrap()
                .add(&ct_all(&f, &ord.reversed(), &opts()).unwrap())
                .unwrap();
            let rhs = i_operator(&f, 0, &opts()).unwrap();
            assert!(lhs.equals(&rhs).unwrap(), "invariant failed for c={c}");
        }
    }

    #[test]
    fn power_lift_preserves_value_and_shrinks_measure() {
        let space = VariableSpace::new(1, 2);
        let f = one_term(space, 1, vec![0, 0, 0], vec![(vec![5, 1, 0], 1), (vec![-1, 0, 1], 1)]);
        let term = &f.terms[0];
        let outs = elliott_step(space, term, 0, &OrderSpec::case1()).unwrap();
        assert!(outs.len() <= 15);
        let before = term.lambda_measure(space, 0);
        for t in &outs {
            assert!(t.lambda_measure(space, 0) < before);
        }
        let sum = ElliottRational::from_terms(space, outs);
        assert!(sum.equals(&f).unwrap());
    }

    #[test]
    fn step_errors_on_unoriented_or_single_signed_terms() {
        let space = VariableSpace::new(1, 1);
        let ord = OrderSpec::case1();
        // 1/(1 - l^{-1}x^{-1}) is not oriented for the standard order.
        let bad = one_term(space, 1, vec![0, 0], vec![(vec![-1, -1], 1)]);
        assert!(matches!(elliott_step(space, &bad.terms[0], 0, &ord), Err(CtError::NotOriented)));
        let single = one_term(space, 1, vec![0, 0], vec![(vec![1, 1], 1)]);
        assert!(matches!(
            elliott_step(space, &single.terms[0], 0, &ord),
            Err(CtError::NoMixedPair)
        ));
    }

    #[test]
    fn demo_system_solution_is_a_single_ray() {
        let sys = LDSystem::demo(0, 0);
        let space = sys.space();
        let got = ct_all(&sys.crude_e(), &OrderSpec::case1(), &opts()).unwrap();
        let expected = one_term(space, 1, vec![0; 5], vec![(vec![0, 0, 3, 5, 2], 1)]);
        assert!(got.equals(&expected).unwrap());
    }

    #[test]
    fn strict_solutions_from_both_routes() {
        // Ebar of the homogeneous demo system: x^(3,5,2)/(1 - x^(3,5,2)),
        // both directly and through the reversed-order constant term.
        let sys = LDSystem::demo(0, 0);
        let space = sys.space();
        let ord = OrderSpec::case1();
        let expected =
            one_term(space, 1, vec![0, 0, 3, 5, 2], vec![(vec![0, 0, 3, 5, 2], 1)]);
        let direct = ct_all(&sys.crude_ebar(), &ord, &opts()).unwrap();
        assert!(direct.equals(&expected).unwrap());
        let reversed = ct_all(&sys.crude_e(), &ord.reversed(), &opts()).unwrap();
        let via_reciprocal = reversed.substitute_inverse_all_x().scale(&-qint(1));
        assert!(via_reciprocal.equals(&expected).unwrap());
    }

    #[test]
    fn factor_roles_for_the_standard_order() {
        let space = VariableSpace::new(2, 3);
        let sys = LDSystem::demo(0, 0);
        let term = sys.crude_e().terms[0].clone();
        let ord = OrderSpec::case1();
        let (pt, nt, free) = rho_factorization(space, &term, 0, &ord).unwrap();
        // Every column monomial carries a positive dominant x coordinate, so
        // all three factors stay as-is and the lambda1 exponents 3, -1, -2
        // classify them directly.
        assert_eq!((pt.len(), nt.len(), free.len()), (1, 2, 0));
        // Reversal flips every orientation, so the lambda2 exponents
        // -1, 1, -1 act with opposite signs.
        let (pt2, nt2, free2) = rho_factorization(space, &term, 1, &ord.reversed()).unwrap();
        assert_eq!((pt2.len(), nt2.len(), free2.len()), (2, 1, 0));
    }

    #[test]
    fn hadamard_identities() {
        let space = VariableSpace::new(0, 1);
        let geo = one_term(space, 1, vec![0], vec![(vec![1], 1)]);
        let got = hadamard_product(&geo, &geo, &opts()).unwrap();
        assert!(got.equals(&geo).unwrap());

        let sq = one_term(space, 1, vec![0], vec![(vec![1], 2)]);
        let got2 = hadamard_product(&sq, &sq, &opts()).unwrap();
        let expected = one_term(space, 1, vec![0], vec![(vec![1], 3)])
            .add(&one_term(space, 1, vec![1], vec![(vec![1], 3)]))
            .unwrap();
        assert!(got2.equals(&expected).unwrap());
        // Coefficients of (1+x)/(1-x)^3 are the squares (n+1)^2.
        let series = got2.series_truncate(3).unwrap();
        for n in 0..=3i64 {
            assert_eq!(series[&ExponentVector(vec![n])], qint((n + 1) * (n + 1)));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let sys = LDSystem::demo(0, 0);
        let tight = CtOptions { term_budget: 2 };
        assert!(matches!(
            ct_all(&sys.crude_e(), &OrderSpec::case1(), &tight),
            Err(CtError::TermBudgetExceeded { budget: 2 })
        ));
    }

    #[test]
    fn trace_records_reduction_rounds() {
        let sys = LDSystem::demo(0, 0);
        let mut trace = Vec::new();
        ct_all_traced(&sys.crude_e(), &OrderSpec::case1(), &opts(), &mut trace).unwrap();
        assert!(!trace.is_empty());
        assert!(trace[0].starts_with("lambda 1: round 1:"));
    }
}
