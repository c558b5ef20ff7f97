//! Parallel sweeps of the reciprocity criteria over grids of right-hand
//! sides.
//!
//! A sweep fixes an integer matrix and walks every right-hand side in the
//! Cartesian product of per-coordinate intervals.  Each grid point is an
//! independent computation: build the system, test the R property (full
//! reversal of the expansion order), test staged invariance, and run the
//! composite sufficient criterion on the matrix form.  Workers claim
//! points from a shared atomic counter, so the decomposition is dynamic,
//! yet the report is assembled in grid order afterwards and its rendering
//! is byte-identical for any worker count.
//!
//! Failures at individual points (for example a term budget blown during
//! reduction) are recorded on the point and do not abort the sweep.  The
//! report also collects containment violations — points where invariance
//! or the composite criterion holds but the R property does not — since
//! both are proven to imply R and any counterexample means an engine bug.

use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

use crate::algebra::OrderSpec;
use crate::ctengine::CtOptions;
use crate::ldsystem::{LDSystem, MatrixForm};
use crate::reciprocity::{composite_criterion, i_property, r_property, IMode};

/// Hard cap on grid size, to fail fast on misread ranges.
const MAX_POINTS: usize = 1 << 22;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("grid has no coordinates")]
    EmptyGrid,
    #[error("grid of {0} points exceeds the sweep limit of {1}")]
    TooLarge(u128, usize),
}

/// Verdicts at a single right-hand side.
#[derive(Clone, Debug)]
pub struct GridPoint {
    pub rhs: Vec<i64>,
    pub r: bool,
    pub i: bool,
    pub monster: bool,
    /// Failure description when the engine could not decide this point;
    /// the three verdicts are meaningless in that case.
    pub error: Option<String>,
}

/// Tallies over all grid points.
#[derive(Clone, Copy, Debug, Default)]
pub struct GridCounts {
    pub total: usize,
    pub r: usize,
    pub i: usize,
    pub monster: usize,
    pub errors: usize,
}

#[derive(Clone, Debug)]
pub struct GridReport {
    /// Number of right-hand-side coordinates (grid dimensions).
    pub coords: usize,
    /// Points in grid order (first coordinate varies slowest).
    pub points: Vec<GridPoint>,
    pub counts: GridCounts,
    /// Containment failures: descriptions of points where invariance or
    /// the composite criterion holds but the R property fails.
    pub violations: Vec<String>,
}

/// Decodes a linear index into a right-hand side, first coordinate
/// varying slowest.
fn decode(mut idx: usize, ranges: &[(i64, i64)]) -> Vec<i64> {
    let mut rhs = vec![0i64; ranges.len()];
    for (k, &(lo, hi)) in ranges.iter().enumerate().rev() {
        let size = (hi - lo + 1) as usize;
        rhs[k] = lo + (idx % size) as i64;
        idx /= size;
    }
    rhs
}

fn evaluate(
    matrix: &[Vec<i64>],
    rhs: &[i64],
    ord: &OrderSpec,
    mode: IMode,
    opts: &CtOptions,
) -> Result<(bool, bool, bool), String> {
    let sys = LDSystem::new(matrix.to_vec(), rhs.to_vec()).map_err(|e| e.to_string())?;
    let f = sys.crude_e();
    let r = r_property(&f, ord, None, opts).map_err(|e| e.to_string())?.holds;
    let i = i_property(&f, ord, mode, opts).map_err(|e| e.to_string())?.holds;
    let form = MatrixForm::from_system(&sys);
    let monster = composite_criterion(&form, ord).map_err(|e| e.to_string())?.established;
    Ok((r, i, monster))
}

fn fmt_rhs(rhs: &[i64]) -> String {
    let inner: Vec<String> = rhs.iter().map(|v| v.to_string()).collect();
    format!("({})", inner.join(", "))
}

/// Evaluates every grid point with `jobs` worker threads and returns the
/// assembled report.
pub fn run_grid(
    matrix: &[Vec<i64>],
    ranges: &[(i64, i64)],
    ord: &OrderSpec,
    mode: IMode,
    opts: &CtOptions,
    jobs: usize,
) -> Result<GridReport, SweepError> {
    if ranges.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    // A reversed bound is an empty range, and an empty range makes the
    // whole grid empty: the report then carries headers and zero counts.
    let mut size: u128 = 1;
    for &(lo, hi) in ranges {
        if hi < lo {
            size = 0;
        } else {
            size *= (hi - lo + 1) as u128;
        }
    }
    if size > MAX_POINTS as u128 {
        return Err(SweepError::TooLarge(size, MAX_POINTS));
    }
    let total = size as usize;
    let jobs = jobs.max(1).min(total);

    let next = AtomicUsize::new(0);
    let mut collected: Vec<(usize, GridPoint)> = Vec::with_capacity(total);
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(jobs);
        for _ in 0..jobs {
            let next = &next;
            handles.push(scope.spawn(move || {
                let mut mine = Vec::new();
                loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= total {
                        break;
                    }
                    let rhs = decode(idx, ranges);
                    let point = match evaluate(matrix, &rhs, ord, mode, opts) {
                        Ok((r, i, monster)) => GridPoint { rhs, r, i, monster, error: None },
                        Err(msg) => GridPoint {
                            rhs,
                            r: false,
                            i: false,
                            monster: false,
                            error: Some(msg),
                        },
                    };
                    mine.push((idx, point));
                }
                mine
            }));
        }
        for h in handles {
            collected.extend(h.join().expect("sweep worker panicked"));
        }
    });
    collected.sort_by_key(|(idx, _)| *idx);
    let points: Vec<GridPoint> = collected.into_iter().map(|(_, p)| p).collect();

    let mut counts = GridCounts { total, ..GridCounts::default() };
    let mut violations = Vec::new();
    for p in &points {
        if p.error.is_some() {
            counts.errors += 1;
            continue;
        }
        counts.r += usize::from(p.r);
        counts.i += usize::from(p.i);
        counts.monster += usize::from(p.monster);
        if p.i && !p.r {
            violations
                .push(format!("invariance holds but reciprocity fails at {}", fmt_rhs(&p.rhs)));
        }
        if p.monster && !p.r {
            violations.push(format!(
                "composite criterion holds but reciprocity fails at {}",
                fmt_rhs(&p.rhs)
            ));
        }
    }
    Ok(GridReport { coords: ranges.len(), points, counts, violations })
}

/// Renders the report as tab-separated verdict rows followed by `#`
/// summary lines.  Verdict cells are `1`/`0`, or `-` when the point
/// errored.  The output is deterministic byte for byte.
pub fn render_tsv(report: &GridReport) -> String {
    let mut out = String::new();
    let r = report.coords;
    let mut header: Vec<String> = if r == 2 {
        vec!["b".to_string(), "c".to_string()]
    } else {
        (1..=r).map(|k| format!("b{k}")).collect()
    };
    header.extend(["R".to_string(), "I".to_string(), "monster".to_string()]);
    out.push_str(&header.join("\t"));
    out.push('\n');
    for p in &report.points {
        let mut cells: Vec<String> = p.rhs.iter().map(|v| v.to_string()).collect();
        if p.error.is_some() {
            cells.extend(["-".to_string(), "-".to_string(), "-".to_string()]);
        } else {
            for flag in [p.r, p.i, p.monster] {
                cells.push(if flag { "1" } else { "0" }.to_string());
            }
        }
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    let c = &report.counts;
    out.push_str(&format!("# total\t{}\n", c.total));
    out.push_str(&format!("# R\t{}\n", c.r));
    out.push_str(&format!("# I\t{}\n", c.i));
    out.push_str(&format!("# monster\t{}\n", c.monster));
    out.push_str(&format!("# errors\t{}\n", c.errors));
    for v in &report.violations {
        out.push_str(&format!("# violation\t{v}\n"));
    }
    out
}
