//! Brute-force ground truth: direct enumeration of lattice points and an
//! exact rational feasibility test.
//!
//! Everything here is deliberately independent of the constant-term engine.
//! The enumerator walks candidate vectors coordinate by coordinate with
//! interval pruning; the feasibility test runs Fourier-Motzkin elimination
//! over exact rationals.  Both are slow and simple on purpose: they are the
//! reference that the symbolic pipeline is checked against.

use crate::algebra::{ExponentVector, LaurentPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Lower bound imposed on every coordinate of a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strictness {
    /// alpha_i >= 0 for all i.
    Nonnegative,
    /// alpha_i >= 1 for all i.
    Strict,
}

impl Strictness {
    fn floor(self) -> i64 {
        match self {
            Strictness::Nonnegative => 0,
            Strictness::Strict => 1,
        }
    }
}

/// All integer vectors `alpha` with `A * alpha = rhs`, coordinates bounded
/// below per `strictness`, and total degree `sum(alpha) <= max_total`.
/// Results are in lexicographic order.
///
/// `a` must be rectangular; rows may be empty (no equations).
pub fn enumerate_solutions(
    a: &[Vec<i64>],
    rhs: &[i64],
    strictness: Strictness,
    max_total: i64,
) -> Vec<Vec<i64>> {
    assert_eq!(a.len(), rhs.len(), "matrix/rhs row count mismatch");
    let n = a.first().map_or(0, Vec::len);
    for row in a {
        assert_eq!(row.len(), n, "ragged matrix");
    }
    let floor = strictness.floor();
    let mut out = Vec::new();
    if n == 0 {
        if rhs.iter().all(|&v| v == 0) && max_total >= 0 {
            out.push(Vec::new());
        }
        return out;
    }
    // Per-row residual reachability bounds: with `budget` units of total
    // degree left to distribute over columns `from..n`, the remaining
    // contribution to row `r` lies within budget * [min(0, min a), max(0, max a)]
    // plus the mandatory floor contribution of each remaining column.
    let mut alpha = vec![floor; n];
    let mut residual: Vec<i64> = (0..a.len())
        .map(|r| rhs[r] - a[r].iter().map(|&c| c * floor).sum::<i64>())
        .collect();
    let base_budget = max_total - floor * n as i64;
    if base_budget < 0 {
        return out;
    }
    search(a, floor, &mut alpha, &mut residual, 0, base_budget, &mut out);
    out
}

fn search(
    a: &[Vec<i64>],
    floor: i64,
    alpha: &mut Vec<i64>,
    residual: &mut Vec<i64>,
    col: usize,
    budget: i64,
    out: &mut Vec<Vec<i64>>,
) {
    let n = alpha.len();
    if !reachable(a, residual, col, budget) {
        return;
    }
    if col == n {
        if residual.iter().all(|&v| v == 0) {
            out.push(alpha.clone());
        }
        return;
    }
    // alpha[col] = floor + extra, extra in 0..=budget.
    for extra in 0..=budget {
        if extra > 0 {
            alpha[col] += 1;
            for r in 0..a.len() {
                residual[r] -= a[r][col];
            }
        }
        search(a, floor, alpha, residual, col + 1, budget - extra, out);
    }
    // Restore state for the caller.
    let taken = alpha[col] - floor;
    for r in 0..a.len() {
        residual[r] += a[r][col] * taken;
    }
    alpha[col] = floor;
}

/// Can columns `from..n`, with at most `budget` extra units total, still
/// bring every row residual to zero?
fn reachable(a: &[Vec<i64>], residual: &[i64], from: usize, budget: i64) -> bool {
    for (r, row) in a.iter().enumerate() {
        let tail = &row[from..];
        let lo = tail.iter().copied().min().unwrap_or(0).min(0);
        let hi = tail.iter().copied().max().unwrap_or(0).max(0);
        if residual[r] < budget * lo || residual[r] > budget * hi {
            return false;
        }
    }
    true
}

/// The enumeration of `A * alpha = rhs` as an exact Laurent polynomial in
/// the x variables, embedded in a space with `lambdas` leading lambda
/// coordinates (all zero).  This is the series the constant-term engine
/// must reproduce.
pub fn indicator_series(
    lambdas: usize,
    a: &[Vec<i64>],
    rhs: &[i64],
    strictness: Strictness,
    max_total: i64,
) -> LaurentPoly {
    let mut out = LaurentPoly::new();
    for alpha in enumerate_solutions(a, rhs, strictness, max_total) {
        let mut exps = vec![0i64; lambdas];
        exps.extend(alpha);
        out.insert(ExponentVector(exps), BigRational::one());
    }
    out
}

/// One linear inequality `coef . alpha >= rhs` over exact rationals.
#[derive(Clone, Debug)]
struct Inequality {
    coef: Vec<BigRational>,
    rhs: BigRational,
}

/// Decide whether `A * alpha = 0` has a real solution with every
/// coordinate >= 1, by Fourier-Motzkin elimination.  Returns an integer
/// witness (every coordinate >= 1) when feasible.  For homogeneous systems
/// rational feasibility coincides with integer feasibility because any
/// rational solution scales to an integer one.
pub fn positive_kernel_witness(a: &[Vec<i64>]) -> Option<Vec<BigInt>> {
    let n = a.first().map_or(0, Vec::len);
    for row in a {
        assert_eq!(row.len(), n, "ragged matrix");
    }
    if n == 0 {
        return Some(Vec::new());
    }

    let mut system: Vec<Inequality> = Vec::new();
    for row in a {
        let coef: Vec<BigRational> = row.iter().map(|&c| BigRational::from(BigInt::from(c))).collect();
        let neg: Vec<BigRational> = coef.iter().map(|c| -c.clone()).collect();
        system.push(Inequality { coef: coef.clone(), rhs: BigRational::zero() });
        system.push(Inequality { coef: neg, rhs: BigRational::zero() });
    }
    for i in 0..n {
        let mut coef = vec![BigRational::zero(); n];
        coef[i] = BigRational::one();
        system.push(Inequality { coef, rhs: BigRational::one() });
    }

    // Eliminate variables from last to first, remembering the constraints
    // that mention each variable for back-substitution.
    let mut steps: Vec<(usize, Vec<Inequality>)> = Vec::new();
    for v in (0..n).rev() {
        let mentioning: Vec<Inequality> = system
            .iter()
            .filter(|q| !q.coef[v].is_zero())
            .cloned()
            .collect();
        let mut next: Vec<Inequality> = system
            .iter()
            .filter(|q| q.coef[v].is_zero())
            .cloned()
            .collect();
        let lower: Vec<&Inequality> =
            mentioning.iter().filter(|q| q.coef[v].is_positive()).collect();
        let upper: Vec<&Inequality> =
            mentioning.iter().filter(|q| q.coef[v].is_negative()).collect();
        for p in &lower {
            for q in &upper {
                // e*p + a*q with a = p.coef[v] > 0, e = -q.coef[v] > 0
                // cancels variable v.
                let a_ = p.coef[v].clone();
                let e = -q.coef[v].clone();
                let coef: Vec<BigRational> = (0..n)
                    .map(|j| &e * &p.coef[j] + &a_ * &q.coef[j])
                    .collect();
                let rhs = &e * &p.rhs + &a_ * &q.rhs;
                next.push(Inequality { coef, rhs });
            }
        }
        steps.push((v, mentioning));
        system = next;
    }

    // Only variable-free constraints remain: 0 >= rhs must hold.
    if system.iter().any(|q| q.rhs.is_positive()) {
        return None;
    }

    // Back-substitute, always taking the tightest lower bound (the
    // constraint alpha_v >= 1 guarantees one exists).
    let mut value: Vec<Option<BigRational>> = vec![None; n];
    for (v, mentioning) in steps.iter().rev() {
        let mut lower: Option<BigRational> = None;
        let mut upper: Option<BigRational> = None;
        for q in mentioning {
            let mut rest = q.rhs.clone();
            for j in 0..n {
                if j != *v && !q.coef[j].is_zero() {
                    rest -= &q.coef[j] * value[j].as_ref().expect("eliminated later, already fixed");
                }
            }
            let bound = rest / &q.coef[*v];
            if q.coef[*v].is_positive() {
                lower = Some(match lower {
                    Some(b) => b.max(bound),
                    None => bound,
                });
            } else {
                upper = Some(match upper {
                    Some(b) => b.min(bound),
                    None => bound,
                });
            }
        }
        let lo = lower.expect("every variable carries an explicit lower bound");
        if let Some(hi) = &upper {
            debug_assert!(lo <= *hi, "back-substitution outside feasible interval");
        }
        value[*v] = Some(lo);
    }

    // Scale to integers: the system is homogeneous apart from the >= 1
    // floors, so multiplying by a positive integer preserves feasibility.
    let values: Vec<BigRational> = value.into_iter().map(Option::unwrap).collect();
    let mut scale = BigInt::one();
    for val in &values {
        scale = num_integer::lcm(scale, val.denom().clone());
    }
    let witness: Vec<BigInt> = values
        .iter()
        .map(|val| (val * BigRational::from(scale.clone())).to_integer())
        .collect();
    debug_assert!(witness.iter().all(|w| w >= &BigInt::one()));
    for row in a {
        let dot: BigInt = row
            .iter()
            .zip(&witness)
            .map(|(&c, w)| BigInt::from(c) * w)
            .sum();
        debug_assert!(dot.is_zero(), "witness fails homogeneous system");
    }
    Some(witness)
}
