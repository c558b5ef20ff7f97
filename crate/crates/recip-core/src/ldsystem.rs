//! Linear Diophantine systems `A*alpha = b`, their crude generating
//! functions, and the augmented matrix-form calculus.
//!
//! The crude generating function of a system is the single-term rational
//! function `Lambda^{-b} / prod_i (1 - Lambda^{C_i} x_i)` whose constant
//! term in the lambda variables is the solution generating function.  The
//! matrix form re-encodes that function as an augmented matrix
//!
//! ```text
//!   [ y_1 ... y_n | y_{n+1} ]      row of monomials in the x's
//!   [ C_1 ... C_n |    b    ]      integer (then rational) body rows
//! ```
//!
//! supporting Gaussian column elimination `C<i>` (multiplicative on the
//! top row), row elimination `R<i>` below the pivot row, and deletion
//! `D<i>` of the pivot row and a column.  Contribution sequences — the
//! pivot columns whose sign condition marks an actual pole contribution
//! during iterated constant-term extraction — are enumerated here by
//! depth-first search over `CD` steps.

use crate::algebra::{
    AlgebraError, ElliottFactor, ElliottRational, ElliottTerm, ExponentVector, OrderSpec,
    VariableSpace,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("system must have at least one row and one column")]
    EmptySystem,
    #[error("matrix rows have unequal lengths")]
    RaggedMatrix,
    #[error("right-hand side has length {got}, expected {want}")]
    RhsLength { got: usize, want: usize },
    #[error("zero pivot at body row {row}, original column {column}")]
    ZeroPivot { row: usize, column: usize },
    #[error("column {0} is not present in the matrix form")]
    UnknownColumn(usize),
    #[error("no pivot row remains")]
    NoPivotRow,
    #[error("order does not guarantee the contribution condition")]
    UnsupportedOrder,
    #[error("matrix form entry is not an integer")]
    NonIntegerEntry,
    #[error("entry too large to clear into machine integers")]
    IntegerOverflow,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A linear Diophantine system `A*alpha = b` with `r >= 1` equations and
/// `n >= 1` unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LDSystem {
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
}

impl LDSystem {
    pub fn new(a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self, SystemError> {
        if a.is_empty() || a[0].is_empty() {
            return Err(SystemError::EmptySystem);
        }
        let n = a[0].len();
        if a.iter().any(|row| row.len() != n) {
            return Err(SystemError::RaggedMatrix);
        }
        if b.len() != a.len() {
            return Err(SystemError::RhsLength { got: b.len(), want: a.len() });
        }
        Ok(LDSystem { a, b })
    }

    /// The system from the worked two-equation example:
    /// `3a1 - a2 - 2a3 = b`, `-a1 + a2 - a3 = c`.
    pub fn demo(b: i64, c: i64) -> Self {
        LDSystem::new(vec![vec![3, -1, -2], vec![-1, 1, -1]], vec![b, c]).unwrap()
    }

    pub fn rows(&self) -> usize {
        self.a.len()
    }

    pub fn cols(&self) -> usize {
        self.a[0].len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn rhs(&self) -> &[i64] {
        &self.b
    }

    pub fn space(&self) -> VariableSpace {
        VariableSpace::new(self.rows(), self.cols())
    }

    pub fn column(&self, i: usize) -> Vec<i64> {
        self.a.iter().map(|row| row[i]).collect()
    }

    /// Exact rank of `A` over the rationals.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigRational>> = self
            .a
            .iter()
            .map(|row| row.iter().map(|&v| BigRational::from(BigInt::from(v))).collect())
            .collect();
        let (rows, cols) = (self.rows(), self.cols());
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&rr| !m[rr][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
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

    pub fn is_homogeneous(&self) -> bool {
        self.b.iter().all(|&v| v == 0)
    }

    /// Crude generating function `Lambda^{-b} / prod_i (1 - Lambda^{C_i} x_i)`
    /// whose lambda constant term enumerates nonnegative solutions.
    pub fn crude_e(&self) -> ElliottRational {
        let space = self.space();
        let mut num = vec![0i64; space.dim()];
        for (i, &bi) in self.b.iter().enumerate() {
            num[space.lambda_index(i)] = -bi;
        }
        let den = (0..self.cols()).map(|i| self.factor_monomial(i)).collect();
        ElliottRational::from_terms(
            space,
            vec![ElliottTerm::new(BigRational::one(), ExponentVector(num), den)],
        )
    }

    /// Crude form `Lambda^{b} prod_i Lambda^{C_i} x_i / prod_i (1 - Lambda^{C_i} x_i)`
    /// whose lambda constant term enumerates strictly positive solutions of
    /// `A*alpha = -b`.
    pub fn crude_ebar(&self) -> ElliottRational {
        let space = self.space();
        let mut num = vec![0i64; space.dim()];
        for (i, &bi) in self.b.iter().enumerate() {
            let row_sum: i64 = self.a[i].iter().sum();
            num[space.lambda_index(i)] = bi + row_sum;
        }
        for j in 0..self.cols() {
            num[space.x_index(j)] = 1;
        }
        let den = (0..self.cols()).map(|i| self.factor_monomial(i)).collect();
        ElliottRational::from_terms(
            space,
            vec![ElliottTerm::new(BigRational::one(), ExponentVector(num), den)],
        )
    }

    fn factor_monomial(&self, i: usize) -> ElliottFactor {
        let space = self.space();
        let mut exps = vec![0i64; space.dim()];
        for (k, row) in self.a.iter().enumerate() {
            exps[space.lambda_index(k)] = row[i];
        }
        exps[space.x_index(i)] = 1;
        ElliottFactor::new(ExponentVector(exps), 1)
    }
}

/// The solved generating functions of a system, free of all lambdas.
#[derive(Clone, Debug)]
pub struct SolutionGF {
    /// Nonnegative solutions of `A*alpha = b`.
    pub e: ElliottRational,
    /// Strictly positive solutions of `A*alpha = -b`.
    pub ebar: ElliottRational,
}

/// Composite operation kinds for pivot sequences.  Within a sequence the
/// pivot row advances for kinds without deletion and stays at the front
/// for kinds ending in `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceOp {
    R,
    RC,
    CR,
    CD,
    RD,
}

/// A contribution sequence: the chosen original column indices together
/// with the successive pivot values `a'_{s,i_s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionSequence {
    pub indices: Vec<usize>,
    pub pivots: Vec<BigRational>,
}

/// Augmented-matrix encoding of a monomial-numerator Elliott-rational
/// function over the x variables of `space`, with rational exponents in
/// the top row and rational body entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixForm {
    space: VariableSpace,
    /// Exponent vectors (over x_1..x_n of the original space) of the
    /// current column monomials y_j.
    tops: Vec<Vec<BigRational>>,
    /// Exponent vector of the numerator monomial y_{n+1}.
    numerator: Vec<BigRational>,
    scalar: BigRational,
    body: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    original_columns: Vec<usize>,
    /// Leading lambda rows consumed by deletions; the current first body
    /// row is indexed by lambda_{consumed+1}.
    consumed: usize,
    /// Body rows already used as pivots without deletion.
    cursor: usize,
}

impl MatrixForm {
    pub fn from_system(sys: &LDSystem) -> Self {
        let space = sys.space();
        let n = sys.cols();
        let tops = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| if k == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        MatrixForm {
            space,
            tops,
            numerator: vec![BigRational::zero(); n],
            scalar: BigRational::one(),
            body: sys
                .matrix()
                .iter()
                .map(|row| row.iter().map(|&v| BigRational::from(BigInt::from(v))).collect())
                .collect(),
            rhs: sys.rhs().iter().map(|&v| BigRational::from(BigInt::from(v))).collect(),
            original_columns: (0..n).collect(),
            consumed: 0,
            cursor: 0,
        }
    }

    pub fn space(&self) -> VariableSpace {
        self.space
    }

    pub fn tops(&self) -> &[Vec<BigRational>] {
        &self.tops
    }

    pub fn numerator(&self) -> &[BigRational] {
        &self.numerator
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn body(&self) -> &[Vec<BigRational>] {
        &self.body
    }

    pub fn rhs_column(&self) -> &[BigRational] {
        &self.rhs
    }

    pub fn original_columns(&self) -> &[usize] {
        &self.original_columns
    }

    /// Index (into the original lambda listing) of the current pivot row.
    pub fn pivot_lambda(&self) -> usize {
        self.consumed + self.cursor
    }

    fn position_of(&self, original: usize) -> Result<usize, SystemError> {
        self.original_columns
            .iter()
            .position(|&c| c == original)
            .ok_or(SystemError::UnknownColumn(original))
    }

    fn pivot_at(&self, pos: usize) -> Result<BigRational, SystemError> {
        let row = self.body.get(self.cursor).ok_or(SystemError::NoPivotRow)?;
        let p = row[pos].clone();
        if p.is_zero() {
            return Err(SystemError::ZeroPivot {
                row: self.pivot_lambda(),
                column: self.original_columns[pos],
            });
        }
        Ok(p)
    }

    /// Gaussian column elimination with the pivot-row entry in original
    /// column `i` as pivot: adds `-a_{1,j}/a_{1,i}` times column i to every
    /// other column, acting multiplicatively on the top row and treating
    /// the right-hand side as an extra column (which updates the numerator
    /// monomial).
    pub fn col_eliminate(&mut self, i: usize) -> Result<(), SystemError> {
        let pos = self.position_of(i)?;
        let p = self.pivot_at(pos)?;
        let cur = self.cursor;
        for k in 0..self.body[cur].len() {
            if k == pos {
                continue;
            }
            let t = &self.body[cur][k] / &p;
            if t.is_zero() {
                continue;
            }
            for rr in 0..self.body.len() {
                let sub = &t * &self.body[rr][pos];
                self.body[rr][k] -= sub;
            }
            for e in 0..self.space.xs {
                let sub = &t * &self.tops[pos][e];
                self.tops[k][e] -= sub;
            }
        }
        let t_rhs = &self.rhs[cur] / &p;
        if !t_rhs.is_zero() {
            for rr in 0..self.body.len() {
                let sub = &t_rhs * &self.body[rr][pos];
                self.rhs[rr] -= sub;
            }
            for e in 0..self.space.xs {
                let sub = &t_rhs * &self.tops[pos][e];
                self.numerator[e] -= sub;
            }
        }
        Ok(())
    }

    /// Gaussian row elimination below the pivot row, clearing original
    /// column `i` in every lower row.
    pub fn row_eliminate(&mut self, i: usize) -> Result<(), SystemError> {
        let pos = self.position_of(i)?;
        let p = self.pivot_at(pos)?;
        let cur = self.cursor;
        for rr in cur + 1..self.body.len() {
            let t = &self.body[rr][pos] / &p;
            if t.is_zero() {
                continue;
            }
            for k in 0..self.body[rr].len() {
                let sub = &t * &self.body[cur][k];
                self.body[rr][k] -= sub;
            }
            let sub = &t * &self.rhs[cur];
            self.rhs[rr] -= sub;
        }
        Ok(())
    }

    /// Deletes the pivot row and original column `i`.
    pub fn delete(&mut self, i: usize) -> Result<(), SystemError> {
        let pos = self.position_of(i)?;
        if self.cursor >= self.body.len() {
            return Err(SystemError::NoPivotRow);
        }
        debug_assert_eq!(self.cursor, 0, "deletion assumes a front pivot row");
        self.body.remove(self.cursor);
        self.rhs.remove(self.cursor);
        for row in &mut self.body {
            row.remove(pos);
        }
        self.tops.remove(pos);
        self.original_columns.remove(pos);
        self.consumed += 1;
        Ok(())
    }

    /// Applies the composite operation once per index, pivoting on
    /// successive body rows; returns the pivot values encountered.
    pub fn sequence_ops(
        &mut self,
        kind: SequenceOp,
        indices: &[usize],
    ) -> Result<Vec<BigRational>, SystemError> {
        let mut pivots = Vec::with_capacity(indices.len());
        for &i in indices {
            let pos = self.position_of(i)?;
            pivots.push(self.pivot_at(pos)?);
            match kind {
                SequenceOp::R => {
                    self.row_eliminate(i)?;
                    self.cursor += 1;
                }
                SequenceOp::RC => {
                    self.row_eliminate(i)?;
                    self.col_eliminate(i)?;
                    self.cursor += 1;
                }
                SequenceOp::CR => {
                    self.col_eliminate(i)?;
                    self.row_eliminate(i)?;
                    self.cursor += 1;
                }
                SequenceOp::CD => {
                    self.col_eliminate(i)?;
                    self.delete(i)?;
                }
                SequenceOp::RD => {
                    self.row_eliminate(i)?;
                    self.delete(i)?;
                }
            }
        }
        Ok(pivots)
    }

    /// The current pivot row as an integer equation over the original
    /// columns (zeros where columns were deleted), cleared by the positive
    /// least common multiple of all denominators.
    pub fn clear_pivot_row(&self) -> Result<(Vec<i64>, i64), SystemError> {
        let row = self.body.get(self.cursor).ok_or(SystemError::NoPivotRow)?;
        let rhs = &self.rhs[self.cursor];
        let mut lcm = BigInt::one();
        for v in row.iter().chain(std::iter::once(rhs)) {
            lcm = lcm.lcm(v.denom());
        }
        let lcm = BigRational::from(lcm.abs());
        let to_i64 = |v: &BigRational| -> Result<i64, SystemError> {
            let cleared = v * &lcm;
            debug_assert!(cleared.is_integer());
            i64::try_from(&cleared.to_integer()).map_err(|_| SystemError::IntegerOverflow)
        };
        let mut coeffs = vec![0i64; self.space.xs];
        for (pos, v) in row.iter().enumerate() {
            coeffs[self.original_columns[pos]] = to_i64(v)?;
        }
        Ok((coeffs, to_i64(rhs)?))
    }

    /// Reconstructs the rational function the form encodes, in the
    /// original variable space (deleted lambdas simply no longer occur).
    /// Fails unless every surviving exponent and body entry is an integer.
    pub fn to_function(&self) -> Result<ElliottRational, SystemError> {
        let dim = self.space.dim();
        let as_int = |v: &BigRational| -> Result<i64, SystemError> {
            if !v.is_integer() {
                return Err(SystemError::NonIntegerEntry);
            }
            i64::try_from(&v.to_integer()).map_err(|_| SystemError::IntegerOverflow)
        };
        let mut num = vec![0i64; dim];
        for (k, v) in self.rhs.iter().enumerate() {
            num[self.space.lambda_index(self.consumed + k)] = -as_int(v)?;
        }
        for (e, v) in self.numerator.iter().enumerate() {
            num[self.space.x_index(e)] = as_int(v)?;
        }
        let mut den = Vec::with_capacity(self.tops.len());
        for (pos, top) in self.tops.iter().enumerate() {
            let mut exps = vec![0i64; dim];
            for (k, row) in self.body.iter().enumerate() {
                exps[self.space.lambda_index(self.consumed + k)] = as_int(&row[pos])?;
            }
            for (e, v) in top.iter().enumerate() {
                exps[self.space.x_index(e)] = as_int(v)?;
            }
            den.push(ElliottFactor::new(ExponentVector(exps), 1));
        }
        Ok(ElliottRational::from_terms(
            self.space,
            vec![ElliottTerm::new(self.scalar.clone(), ExponentVector(num), den)],
        ))
    }

    /// Depth-first enumeration of all contribution sequences of length at
    /// most `max_len` (and at most the number of remaining body rows).
    /// At step s, an unused column with nonzero pivot is included iff
    /// `y^{sign(-pivot)} < lambda_s` under `ord`, evaluated on the exact
    /// rational top-row exponents; columns with zero pivot are recorded in
    /// `trace` and excluded.
    pub fn contribution_sequences(
        &self,
        ord: &OrderSpec,
        max_len: Option<usize>,
    ) -> Result<Vec<ContributionSequence>, SystemError> {
        let mut trace = Vec::new();
        self.contribution_sequences_traced(ord, max_len, &mut trace)
    }

    pub fn contribution_sequences_traced(
        &self,
        ord: &OrderSpec,
        max_len: Option<usize>,
        trace: &mut Vec<String>,
    ) -> Result<Vec<ContributionSequence>, SystemError> {
        if !ord.supports_contribution(self.space) {
            return Err(SystemError::UnsupportedOrder);
        }
        let depth = max_len.unwrap_or(self.body.len()).min(self.body.len());
        let mut out = Vec::new();
        let mut state = self.clone();
        let mut prefix = ContributionSequence { indices: Vec::new(), pivots: Vec::new() };
        self.dfs(&mut state, ord, depth, &mut prefix, &mut out, trace)?;
        Ok(out)
    }

    fn dfs(
        &self,
        state: &mut MatrixForm,
        ord: &OrderSpec,
        depth: usize,
        prefix: &mut ContributionSequence,
        out: &mut Vec<ContributionSequence>,
        trace: &mut Vec<String>,
    ) -> Result<(), SystemError> {
        out.push(prefix.clone());
        if prefix.indices.len() == depth || state.body.is_empty() {
            return Ok(());
        }
        let s = state.pivot_lambda();
        let mut lambda_unit = vec![BigRational::zero(); state.space.dim()];
        lambda_unit[state.space.lambda_index(s)] = BigRational::one();
        for pos in 0..state.original_columns.len() {
            let original = state.original_columns[pos];
            let pivot = state.body[state.cursor][pos].clone();
            if pivot.is_zero() {
                trace.push(format!(
                    "step {}: column {} skipped (zero pivot)",
                    prefix.indices.len() + 1,
                    original + 1
                ));
                continue;
            }
            // Embed y^{sign(-pivot)} into the full space (lambda part zero).
            let sign = if pivot.is_positive() { -BigRational::one() } else { BigRational::one() };
            let mut image = vec![BigRational::zero(); state.space.dim()];
            for e in 0..state.space.xs {
                image[state.space.x_index(e)] = &sign * &state.tops[pos][e];
            }
            if ord.compare_rational(state.space, &image, &lambda_unit)? != Ordering::Less {
                continue;
            }
            let mut child = state.clone();
            child.sequence_ops(SequenceOp::CD, &[original])?;
            prefix.indices.push(original);
            prefix.pivots.push(pivot);
            self.dfs(&mut child, ord, depth, prefix, out, trace)?;
            prefix.indices.pop();
            prefix.pivots.pop();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qrat;

    fn q(v: i64) -> BigRational {
        BigRational::from(BigInt::from(v))
    }

    #[test]
    fn crude_forms_of_the_demo_system() {
        let sys = LDSystem::demo(1, 0);
        let e = sys.crude_e();
        assert_eq!(e.terms.len(), 1);
        let t = &e.terms[0];
        assert_eq!(t.coefficient, BigRational::one());
        assert_eq!(t.numerator.0, vec![-1, 0, 0, 0, 0]);
        let monos: Vec<Vec<i64>> = t.denominator.iter().map(|f| f.monomial.0.clone()).collect();
        assert!(monos.contains(&vec![3, -1, 1, 0, 0]));
        assert!(monos.contains(&vec![-1, 1, 0, 1, 0]));
        assert!(monos.contains(&vec![-2, -1, 0, 0, 1]));

        let ebar = sys.crude_ebar();
        let tb = &ebar.terms[0];
        // Row sums are 0 and -1, so the numerator is lambda1^b lambda2^{c-1} x1x2x3.
        assert_eq!(tb.numerator.0, vec![1, -1, 1, 1, 1]);
    }

    #[test]
    fn ebar_inversion_identity() {
        // Ebar-crude at inverted Lambda and x equals (-1)^n times E-crude.
        let sys = LDSystem::demo(2, -1);
        let space = sys.space();
        let all: Vec<usize> = (0..space.dim()).collect();
        let lhs = sys.crude_ebar().substitute_inverse(&all);
        let rhs = sys.crude_e().scale(&q(-1));
        assert!(lhs.equals(&rhs).unwrap());
    }

    #[test]
    fn column_elimination_matches_worked_display() {
        let sys = LDSystem::demo(3, -1);
        let mut t = MatrixForm::from_system(&sys);
        t.col_eliminate(0).unwrap();
        // Top row: x1, x2*x1^{1/3}, x3*x1^{2/3}; numerator x1^{-b/3} = x1^{-1}.
        assert_eq!(t.tops()[0], vec![q(1), q(0), q(0)]);
        assert_eq!(t.tops()[1], vec![qrat(1, 3), q(1), q(0)]);
        assert_eq!(t.tops()[2], vec![qrat(2, 3), q(0), q(1)]);
        assert_eq!(t.numerator(), vec![q(-1), q(0), q(0)]);
        assert_eq!(t.body()[0], vec![q(3), q(0), q(0)]);
        assert_eq!(t.rhs_column()[0], q(0));
        // Second body row (-1, 2/3, -5/3 | c + b/3) = (-1, 2/3, -5/3 | 0).
        assert_eq!(t.body()[1], vec![q(-1), qrat(2, 3), qrat(-5, 3)]);
        assert_eq!(t.rhs_column()[1], q(0));
    }

    #[test]
    fn row_elimination_matches_worked_display() {
        let sys = LDSystem::demo(3, -1);
        let mut t = MatrixForm::from_system(&sys);
        t.row_eliminate(0).unwrap();
        assert_eq!(t.body()[0], vec![q(3), q(-1), q(-2)]);
        assert_eq!(t.rhs_column()[0], q(3));
        assert_eq!(t.body()[1], vec![q(0), qrat(2, 3), qrat(-5, 3)]);
        assert_eq!(t.rhs_column()[1], q(0));
        // Row operations leave the top row alone.
        assert_eq!(t.tops()[1], vec![q(0), q(1), q(0)]);
    }

    #[test]
    fn deletion_and_equivalences() {
        let sys = LDSystem::demo(-6, 2);
        let mut cd = MatrixForm::from_system(&sys);
        cd.sequence_ops(SequenceOp::CD, &[0]).unwrap();
        assert_eq!(cd.original_columns(), &[1, 2]);
        assert_eq!(cd.body().len(), 1);
        assert_eq!(cd.body()[0], vec![qrat(2, 3), qrat(-5, 3)]);
        // c + b/3 = 2 - 2 = 0.
        assert_eq!(cd.rhs_column()[0], q(0));
        assert_eq!(cd.tops()[0], vec![qrat(1, 3), q(1), q(0)]);

        // CRD<i> = CD<i> exactly.
        let mut crd = MatrixForm::from_system(&sys);
        crd.col_eliminate(0).unwrap();
        crd.row_eliminate(0).unwrap();
        crd.delete(0).unwrap();
        assert_eq!(crd, cd);

        // RC<i> = CR<i> on everything.
        let mut rc = MatrixForm::from_system(&sys);
        rc.sequence_ops(SequenceOp::RC, &[0]).unwrap();
        let mut cr = MatrixForm::from_system(&sys);
        cr.sequence_ops(SequenceOp::CR, &[0]).unwrap();
        assert_eq!(rc, cr);
    }

    #[test]
    fn pivot_products_are_leading_minors() {
        let sys = LDSystem::demo(5, 7);
        let mut t = MatrixForm::from_system(&sys);
        let pivots = t.sequence_ops(SequenceOp::RC, &[0, 1]).unwrap();
        assert_eq!(pivots, vec![q(3), qrat(2, 3)]);
        // det [[3,-1],[-1,1]] = 2 = 3 * 2/3.
        assert_eq!(pivots.iter().product::<BigRational>(), q(2));
    }

    #[test]
    fn cleared_pivot_row_of_rd_reduction() {
        let sys = LDSystem::demo(4, -2);
        let mut t = MatrixForm::from_system(&sys);
        t.sequence_ops(SequenceOp::RD, &[0]).unwrap();
        let (row, rhs) = t.clear_pivot_row().unwrap();
        // (0, 2/3, -5/3 | c + b/3) clears to (0, 2, -5 | 3c + b).
        assert_eq!(row, vec![0, 2, -5]);
        assert_eq!(rhs, 3 * (-2) + 4);
    }

    #[test]
    fn swapped_system_rd_rows() {
        // Equivalent system with the equations negated/swapped:
        // a1 - a2 + a3 = -c, 3a1 - a2 - 2a3 = b at (b, c) = (1, 2).
        let (b, c) = (1, 2);
        let sys = LDSystem::new(vec![vec![1, -1, 1], vec![3, -1, -2]], vec![-c, b]).unwrap();
        let mut t1 = MatrixForm::from_system(&sys);
        t1.sequence_ops(SequenceOp::RD, &[0]).unwrap();
        assert_eq!(t1.clear_pivot_row().unwrap(), (vec![0, 2, -5], b + 3 * c));
        let mut t3 = MatrixForm::from_system(&sys);
        t3.sequence_ops(SequenceOp::RD, &[2]).unwrap();
        assert_eq!(t3.clear_pivot_row().unwrap(), (vec![5, -3, 0], b - 2 * c));
    }

    #[test]
    fn contribution_sequences_of_the_demo_system() {
        let sys = LDSystem::demo(0, 0);
        let t = MatrixForm::from_system(&sys);
        let ord = OrderSpec::case1();
        let seqs = t.contribution_sequences(&ord, None).unwrap();
        let indices: Vec<Vec<usize>> = seqs.iter().map(|s| s.indices.clone()).collect();
        assert_eq!(indices, vec![vec![], vec![0], vec![0, 1]]);
        assert_eq!(seqs[1].pivots, vec![q(3)]);
        assert_eq!(seqs[2].pivots, vec![q(3), qrat(2, 3)]);

        let short = t.contribution_sequences(&ord, Some(1)).unwrap();
        let short_idx: Vec<Vec<usize>> = short.iter().map(|s| s.indices.clone()).collect();
        assert_eq!(short_idx, vec![vec![], vec![0]]);
    }

    #[test]
    fn contribution_sequences_of_the_swapped_system() {
        let sys = LDSystem::new(vec![vec![1, -1, 1], vec![3, -1, -2]], vec![0, 0]).unwrap();
        let t = MatrixForm::from_system(&sys);
        let seqs = t.contribution_sequences(&OrderSpec::case1(), Some(1)).unwrap();
        let indices: Vec<Vec<usize>> = seqs.iter().map(|s| s.indices.clone()).collect();
        assert_eq!(indices, vec![vec![], vec![0], vec![2]]);
    }

    #[test]
    fn function_round_trip() {
        let sys = LDSystem::demo(1, -2);
        let t = MatrixForm::from_system(&sys);
        assert!(t.to_function().unwrap().equals(&sys.crude_e()).unwrap());
        // After a fractional elimination the form is no longer integral.
        let mut u = t.clone();
        u.col_eliminate(0).unwrap();
        assert!(matches!(u.to_function(), Err(SystemError::NonIntegerEntry)));
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(LDSystem::new(vec![], vec![]), Err(SystemError::EmptySystem)));
        assert!(matches!(
            LDSystem::new(vec![vec![1, 2], vec![3]], vec![0, 0]),
            Err(SystemError::RaggedMatrix)
        ));
        assert!(matches!(
            LDSystem::new(vec![vec![1, 2]], vec![0, 0]),
            Err(SystemError::RhsLength { got: 2, want: 1 })
        ));
        let sys = LDSystem::new(vec![vec![0, 1], vec![1, 0]], vec![0, 0]).unwrap();
        let mut t = MatrixForm::from_system(&sys);
        assert!(matches!(
            t.col_eliminate(0),
            Err(SystemError::ZeroPivot { row: 0, column: 0 })
        ));
        assert!(matches!(t.delete(5), Err(SystemError::UnknownColumn(5))));
    }

    #[test]
    fn rank_and_homogeneity() {
        assert_eq!(LDSystem::demo(0, 0).rank(), 2);
        let deficient = LDSystem::new(vec![vec![1, -1], vec![2, -2]], vec![0, 0]).unwrap();
        assert_eq!(deficient.rank(), 1);
        assert!(deficient.is_homogeneous());
        assert!(!LDSystem::demo(1, 0).is_homogeneous());
    }
}
