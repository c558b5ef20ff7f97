//! Reciprocity and invariance tests for solution generating functions.
//!
//! For a full order `rho` on monomials, write `CT` for the iterated
//! lambda constant term under `rho` and `CT-bar` for the same under the
//! reversed order.  The module decides:
//!
//! * the **R property** — `CT F = (-1)^d CT-bar F`, the constant-term
//!   form of the reciprocity law relating the solution series of a
//!   system to the strict-solution series of its sign-flip;
//! * the **I property** — at every stage of the iterated extraction the
//!   two-sided invariant operator annihilates the current function,
//!   which is a sufficient (strictly stronger) condition for R;
//! * the **composite criterion** — a finite family of single
//!   Diophantine equations harvested from pivot sequences of the
//!   augmented matrix form; if every harvested equation has the
//!   single-equation R property, the full system does;
//! * the **error-term decomposition** — the exact correction terms that
//!   turn the naive sign flip into an identity for any input;
//! * **homogeneous reciprocity** — `E(x) = (-1)^{n-r} Ebar(1/x)` for
//!   full-rank homogeneous systems with a strictly positive solution.

use crate::algebra::{AlgebraError, ElliottRational, OrderSpec};
use crate::ctengine::{
    ct_all, ct_at_infinity, ct_at_zero, ct_lambda, i_operator, CtError, CtOptions,
};
use crate::ldsystem::{LDSystem, MatrixForm, SequenceOp, SystemError};
use crate::oracle::positive_kernel_witness;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReciprocityError {
    #[error(transparent)]
    Ct(#[from] CtError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("matrix has rank {rank}, expected full rank {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("system has no strictly positive solution")]
    NoPositiveSolution,
    #[error("system must be homogeneous")]
    NotHomogeneous,
    #[error("identity violation: {0}")]
    IdentityViolation(String),
}

fn sign_pow(k: i64) -> BigRational {
    if k.rem_euclid(2) == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Whether `n` is a nonnegative-integer combination of `gens`.
fn representable(n: i64, gens: &[i64]) -> bool {
    if n < 0 {
        return false;
    }
    let n = n as usize;
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for v in 1..=n {
        reach[v] = gens.iter().any(|&g| {
            let g = g as usize;
            g > 0 && g <= v && reach[v - g]
        });
    }
    reach[n]
}

/// Decides the R property of the single equation `sum_e a_e t_e = b` by
/// the semigroup criterion: reciprocity fails exactly when the shifted
/// target on either side is a nonnegative combination of the |a_e|.
pub fn single_equation_r(a: &[i64], b: i64) -> bool {
    let gens: Vec<i64> = a.iter().filter(|&&v| v != 0).map(|&v| v.abs()).collect();
    let pos_sum: i64 = a.iter().filter(|&&v| v > 0).sum();
    let neg_sum: i64 = a.iter().filter(|&&v| v < 0).map(|&v| -v).sum();
    let fails = representable(-b - pos_sum, &gens) || representable(b - neg_sum, &gens);
    !fails
}

/// The same decision through the engine: the single equation has the R
/// property iff its crude generating function is annihilated by both
/// one-sided constant terms.
pub fn single_equation_r_via_invariant(
    a: &[i64],
    b: i64,
    opts: &CtOptions,
) -> Result<bool, ReciprocityError> {
    let sys = LDSystem::new(vec![a.to_vec()], vec![b])?;
    let f = sys.crude_e();
    Ok(ct_at_zero(&f, 0, opts)?.is_zero() && ct_at_infinity(&f, 0, opts)?.is_zero())
}

/// Verdict and witnesses of the R property.
#[derive(Clone, Debug)]
pub struct RReport {
    pub holds: bool,
    /// Exponent of the sign `(-1)^degree`; defaults to the number of
    /// lambda variables.
    pub degree: i64,
    pub ct: ElliottRational,
    pub ct_reversed: ElliottRational,
}

pub fn r_property(
    f: &ElliottRational,
    ord: &OrderSpec,
    degree: Option<i64>,
    opts: &CtOptions,
) -> Result<RReport, ReciprocityError> {
    let degree = degree.unwrap_or(f.space.lambdas as i64);
    let ct = ct_all(f, ord, opts)?;
    let ct_reversed = ct_all(f, &ord.reversed(), opts)?;
    let holds = ct.equals(&ct_reversed.scale(&sign_pow(degree)))?;
    Ok(RReport { holds, degree, ct, ct_reversed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IMode {
    /// The invariant operator must kill the full sum at every stage.
    Sum,
    /// The invariant operator must kill every term separately (stronger).
    PerTerm,
}

/// Verdict of the staged invariance test.
#[derive(Clone, Debug)]
pub struct IReport {
    pub holds: bool,
    pub mode: IMode,
    /// Lambda index of the first failing stage.
    pub failed_stage: Option<usize>,
    /// Index of the failing term within the stage (per-term mode).
    pub failed_term: Option<usize>,
}

pub fn i_property(
    f: &ElliottRational,
    ord: &OrderSpec,
    mode: IMode,
    opts: &CtOptions,
) -> Result<IReport, ReciprocityError> {
    let mut cur = f.clone();
    for p in 0..f.space.lambdas {
        match mode {
            IMode::Sum => {
                if !i_operator(&cur, p, opts)?.is_zero() {
                    return Ok(IReport {
                        holds: false,
                        mode,
                        failed_stage: Some(p),
                        failed_term: None,
                    });
                }
            }
            IMode::PerTerm => {
                for (idx, term) in cur.terms.iter().enumerate() {
                    let single =
                        ElliottRational::from_terms(cur.space, vec![term.clone()]);
                    if !i_operator(&single, p, opts)?.is_zero() {
                        return Ok(IReport {
                            holds: false,
                            mode,
                            failed_stage: Some(p),
                            failed_term: Some(idx),
                        });
                    }
                }
            }
        }
        cur = ct_lambda(&cur, p, ord, opts)?;
    }
    Ok(IReport { holds: true, mode, failed_stage: None, failed_term: None })
}

/// One harvested single equation together with its R verdict.
#[derive(Clone, Debug)]
pub struct CompositeRow {
    /// Pivot columns (original indices) of the sequence that produced it.
    pub sequence: Vec<usize>,
    pub coeffs: Vec<i64>,
    pub rhs: i64,
    pub r_holds: bool,
}

/// Result of the composite sufficient criterion.
#[derive(Clone, Debug)]
pub struct CompositeReport {
    /// True when every harvested equation passes: the system then has
    /// the R property.  False is inconclusive for the system.
    pub established: bool,
    pub rows: Vec<CompositeRow>,
    pub first_failure: Option<usize>,
    /// Zero-pivot columns skipped during sequence enumeration.
    pub trace: Vec<String>,
}

fn rational_rank(body: &[Vec<BigRational>]) -> usize {
    use num_traits::Zero;
    if body.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<BigRational>> = body.to_vec();
    let (rows, cols) = (m.len(), m[0].len());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&rr| !m[rr][col].is_zero()) else { continue };
        m.swap(rank, p);
        for rr in rank + 1..rows {
            if m[rr][col].is_zero() {
                continue;
            }
            let t = &m[rr][col] / &m[rank][col];
            for cc in col..cols {
                let sub = &t * &m[rank][cc];
                m[rr][cc] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

/// Sufficient criterion for the R property of a full system: harvests,
/// for every contribution sequence shorter than the number of equations,
/// the pivot row left after row-eliminating and deleting along the
/// sequence, and tests each cleared integer row as a single equation.
pub fn composite_criterion(
    t: &MatrixForm,
    ord: &OrderSpec,
) -> Result<CompositeReport, ReciprocityError> {
    let rows = t.body().len();
    let rank = rational_rank(t.body());
    if rank != rows {
        return Err(ReciprocityError::RankDeficient { rank, rows });
    }
    let mut trace = Vec::new();
    let sequences = t.contribution_sequences_traced(ord, Some(rows.saturating_sub(1)), &mut trace)?;
    let mut out_rows = Vec::with_capacity(sequences.len());
    let mut first_failure = None;
    for seq in &sequences {
        let mut reduced = t.clone();
        reduced.sequence_ops(SequenceOp::RD, &seq.indices)?;
        let (coeffs, rhs) = reduced.clear_pivot_row()?;
        let r_holds = single_equation_r(&coeffs, rhs);
        if !r_holds && first_failure.is_none() {
            first_failure = Some(out_rows.len());
        }
        out_rows.push(CompositeRow { sequence: seq.indices.clone(), coeffs, rhs, r_holds });
    }
    Ok(CompositeReport {
        established: first_failure.is_none(),
        rows: out_rows,
        first_failure,
        trace,
    })
}

/// The exact correction terms `E_0 .. E_{r-1}` in
/// `CT-bar F = (-1)^r CT F + sum_i E_i`, each
/// `E_i = (-1)^i CT-bar_{later lambdas} I_{lambda_{i+1}} CT_{earlier} F`.
#[derive(Clone, Debug)]
pub struct ErrorTermReport {
    pub ct: ElliottRational,
    pub ct_reversed: ElliottRational,
    pub terms: Vec<ElliottRational>,
}

pub fn error_terms(
    f: &ElliottRational,
    ord: &OrderSpec,
    opts: &CtOptions,
) -> Result<ErrorTermReport, ReciprocityError> {
    let r = f.space.lambdas;
    let rev = ord.reversed();
    // partial[i] = the first i lambda constant terms of F under ord.
    let mut partial = Vec::with_capacity(r + 1);
    partial.push(f.clone());
    for p in 0..r {
        let next = ct_lambda(&partial[p], p, ord, opts)?;
        partial.push(next);
    }
    let mut terms = Vec::with_capacity(r);
    for i in 0..r {
        let mut e = i_operator(&partial[i], i, opts)?;
        for q in i + 1..r {
            e = ct_lambda(&e, q, &rev, opts)?;
        }
        terms.push(e.scale(&sign_pow(i as i64)));
    }
    let ct = partial[r].clone();
    let ct_reversed = ct_all(f, &rev, opts)?;
    let mut rhs = ct.scale(&sign_pow(r as i64));
    for e in &terms {
        rhs = rhs.add(e)?;
    }
    if !ct_reversed.equals(&rhs)? {
        return Err(ReciprocityError::IdentityViolation(
            "reversed constant term does not match the signed constant term plus error terms"
                .to_string(),
        ));
    }
    Ok(ErrorTermReport { ct, ct_reversed, terms })
}

/// Reciprocity for homogeneous systems.
#[derive(Clone, Debug)]
pub struct HomogeneousReport {
    pub e: ElliottRational,
    pub ebar: ElliottRational,
    /// A strictly positive integer solution certifying nonemptiness.
    pub witness: Vec<BigInt>,
}

/// Verifies `E(x) = (-1)^{n-r} Ebar(1/x)` for a full-rank homogeneous
/// system with at least one strictly positive solution.
pub fn homogeneous_reciprocity(
    sys: &LDSystem,
    opts: &CtOptions,
) -> Result<HomogeneousReport, ReciprocityError> {
    if !sys.is_homogeneous() {
        return Err(ReciprocityError::NotHomogeneous);
    }
    let rank = sys.rank();
    if rank != sys.rows() {
        return Err(ReciprocityError::RankDeficient { rank, rows: sys.rows() });
    }
    let witness =
        positive_kernel_witness(sys.matrix()).ok_or(ReciprocityError::NoPositiveSolution)?;
    let ord = OrderSpec::case1();
    let e = ct_all(&sys.crude_e(), &ord, opts)?;
    let ebar = ct_all(&sys.crude_ebar(), &ord, opts)?;
    let sign = sign_pow((sys.cols() - sys.rows()) as i64);
    let flipped = ebar.substitute_inverse_all_x().scale(&sign);
    if !e.equals(&flipped)? {
        return Err(ReciprocityError::IdentityViolation(
            "homogeneous reciprocity failed: E(x) != (-1)^(n-r) Ebar(1/x)".to_string(),
        ));
    }
    Ok(HomogeneousReport { e, ebar, witness })
}

/// Verdict of the vanishing-pattern criterion for homogeneous systems.
#[derive(Clone, Debug)]
pub struct RecDomainReport {
    pub r_holds: bool,
    pub ct_zero: bool,
    pub ct_reversed_zero: bool,
}

/// For a full-rank homogeneous system the R property holds iff the two
/// constant terms vanish together or are nonzero together; verifies the
/// biconditional and reports both sides.
pub fn rec_domain_check(
    sys: &LDSystem,
    ord: &OrderSpec,
    opts: &CtOptions,
) -> Result<RecDomainReport, ReciprocityError> {
    if !sys.is_homogeneous() {
        return Err(ReciprocityError::NotHomogeneous);
    }
    let rank = sys.rank();
    if rank != sys.rows() {
        return Err(ReciprocityError::RankDeficient { rank, rows: sys.rows() });
    }
    let report = r_property(&sys.crude_e(), ord, None, opts)?;
    let ct_zero = report.ct.is_zero();
    let ct_reversed_zero = report.ct_reversed.is_zero();
    if report.holds != (ct_zero == ct_reversed_zero) {
        return Err(ReciprocityError::IdentityViolation(
            "vanishing pattern disagrees with the R property on a homogeneous system".to_string(),
        ));
    }
    Ok(RecDomainReport { r_holds: report.holds, ct_zero, ct_reversed_zero })
}
