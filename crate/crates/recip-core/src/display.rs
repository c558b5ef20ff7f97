//! Plain-text rendering of functions, series, and matrix forms.
//!
//! Everything here is presentation only: exponents print inline
//! (`l1^3 l2^-1 x1`), denominator factors print as `(1 - m)^mult`, and a
//! matrix form prints as its numerator, its live column monomials, and an
//! aligned body with the right-hand side behind a `|` separator.  Output
//! is deterministic, so tests and the command line can compare it byte
//! for byte.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{ElliottRational, ElliottTerm, ExponentVector, LaurentPoly, VariableSpace};
use crate::ldsystem::MatrixForm;

/// `x^m` with named variables, `1` for the zero vector.
pub fn format_monomial(space: VariableSpace, m: &ExponentVector) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = space.var_name(i);
        if e == 1 {
            parts.push(name);
        } else {
            parts.push(format!("{name}^{e}"));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

/// A monomial with rational exponents over the x block only.
fn format_rational_monomial(space: VariableSpace, exps: &[BigRational]) -> String {
    let mut parts = Vec::new();
    for (e, v) in exps.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let name = space.var_name(space.x_index(e));
        if v.is_one() {
            parts.push(name);
        } else {
            parts.push(format!("{name}^({v})"));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

fn format_scaled_monomial(coefficient: &BigRational, monomial: String) -> String {
    if coefficient.is_one() {
        monomial
    } else if (-coefficient).is_one() {
        format!("-{monomial}")
    } else if monomial == "1" {
        format!("{coefficient}")
    } else {
        format!("{coefficient} {monomial}")
    }
}

fn format_term(space: VariableSpace, t: &ElliottTerm) -> String {
    let head = format_scaled_monomial(&t.coefficient, format_monomial(space, &t.numerator));
    if t.denominator.is_empty() {
        return head;
    }
    let dens: Vec<String> = t
        .denominator
        .iter()
        .map(|f| {
            let base = format!("(1 - {})", format_monomial(space, &f.monomial));
            if f.multiplicity == 1 {
                base
            } else {
                format!("{base}^{}", f.multiplicity)
            }
        })
        .collect();
    format!("{head} / [{}]", dens.join(" "))
}

/// Renders a sum of Elliott-rational terms, one per line after the first.
pub fn format_function(f: &ElliottRational) -> String {
    if f.terms.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> = f.terms.iter().map(|t| format_term(f.space, t)).collect();
    parts.join("\n  + ")
}

/// Renders a Laurent polynomial in the key order of its map.
pub fn format_series(space: VariableSpace, p: &LaurentPoly) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let parts: Vec<String> =
        p.iter().map(|(m, c)| format_scaled_monomial(c, format_monomial(space, m))).collect();
    parts.join(" + ")
}

/// Renders a matrix form: numerator line, one `y = monomial` line per
/// live column, then the aligned body rows labelled by their lambdas,
/// with the right-hand side behind `|`.
pub fn format_matrix_form(t: &MatrixForm) -> String {
    let space = t.space();
    let mut out = String::new();
    out.push_str(&format!(
        "numerator: {}\n",
        format_scaled_monomial(t.scalar(), format_rational_monomial(space, t.numerator()))
    ));
    for (pos, top) in t.tops().iter().enumerate() {
        out.push_str(&format!(
            "y{} = {}\n",
            t.original_columns()[pos] + 1,
            format_rational_monomial(space, top)
        ));
    }
    let consumed = space.lambdas - t.body().len();
    let cells: Vec<Vec<String>> = t
        .body()
        .iter()
        .map(|row| row.iter().map(|v| v.to_string()).collect())
        .collect();
    let rhs: Vec<String> = t.rhs_column().iter().map(|v| v.to_string()).collect();
    let cols = cells.first().map_or(0, |row| row.len());
    let mut widths = vec![0usize; cols];
    for row in &cells {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let rhs_width = rhs.iter().map(|cell| cell.len()).max().unwrap_or(0);
    for (k, row) in cells.iter().enumerate() {
        let label = space.var_name(space.lambda_index(consumed + k));
        let body_part: Vec<String> =
            row.iter().zip(&widths).map(|(cell, w)| format!("{cell:>w$}")).collect();
        out.push_str(&format!(
            "{label} [ {} | {:>rw$} ]\n",
            body_part.join("  "),
            rhs[k],
            rw = rhs_width
        ));
    }
    out
}
