//! Tiny expression language for entering rational functions on the
//! command line, e.g. `1/(1-x)^2` or `(1 - x*y) / ((1-x)(1-y))`.
//!
//! Grammar (whitespace-insensitive; the Unicode minus sign is accepted):
//!
//! ```text
//!   expression := term (('+' | '-') term)*
//!   term       := factor (('*' | '/' | factor)* )      adjacency multiplies
//!   factor     := '-' factor | primary ('^' '-'? integer)?
//!   primary    := integer | variable | '(' expression ')'
//! ```
//!
//! Variables are the canonical coordinate names (`l1`, `x1`, ...) plus the
//! shorthands `x`, `y`, `z` for the first three x-coordinates and `l` or
//! `lambda` for the first lambda.
//!
//! Addition, subtraction and multiplication are unrestricted.  Division and
//! negative powers are restricted to divisors that factor as a nonzero
//! rational times a monomial times a product of `(1 - monomial)` factors,
//! which is exactly the denominator shape the engine's terms carry.  A
//! difference of two scaled monomials with equal coefficients is recognized
//! as such a factor: `x - y` divides as `x * (1 - x^-1 y)`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use recip_core::algebra::{
    qint, AlgebraError, ElliottFactor, ElliottRational, ElliottTerm, ExponentVector, VariableSpace,
};
use thiserror::Error;

/// Largest exponent accepted by `^` (keeps expansion sizes sane).
const MAX_POW: i64 = 32;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("unexpected character {0:?} at byte {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of expression")]
    UnexpectedEnd,
    #[error("expected {0}, found {1}")]
    Expected(&'static str, String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("integer literal out of range")]
    BadInteger,
    #[error("exponent {0} exceeds the supported range +-{MAX_POW}")]
    ExponentRange(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot divide by {0}: divisors must be rational multiples of monomials times (1 - monomial) factors")]
    NotAProduct(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>, ExprError> {
    let mut toks = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(pos, ch)) = chars.peek() {
        match ch {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                chars.next();
                toks.push(Tok::Plus);
            }
            '-' | '\u{2212}' => {
                chars.next();
                toks.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                toks.push(Tok::Star);
            }
            '/' => {
                chars.next();
                toks.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut value: i64 = 0;
                while let Some(&(_, d)) = chars.peek() {
                    if let Some(digit) = d.to_digit(10) {
                        value = value
                            .checked_mul(10)
                            .and_then(|v| v.checked_add(i64::from(digit)))
                            .ok_or(ExprError::BadInteger)?;
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Int(value));
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Ident(name));
            }
            other => return Err(ExprError::UnexpectedChar(other, pos)),
        }
    }
    Ok(toks)
}

#[derive(Clone, Debug)]
enum Ast {
    Int(i64),
    Var(usize),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    space: VariableSpace,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn resolve(&self, name: &str) -> Result<usize, ExprError> {
        let space = self.space;
        for coord in 0..space.dim() {
            if space.var_name(coord) == name {
                return Ok(coord);
            }
        }
        let alias = match name {
            "l" | "lambda" if space.lambdas >= 1 => Some(0),
            "x" if space.xs >= 1 => Some(space.lambdas),
            "y" if space.xs >= 2 => Some(space.lambdas + 1),
            "z" if space.xs >= 3 => Some(space.lambdas + 2),
            _ => None,
        };
        alias.ok_or_else(|| ExprError::UnknownVariable(name.to_string()))
    }

    fn expression(&mut self) -> Result<Ast, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Ast::Add(lhs.into(), self.term()?.into());
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Ast::Sub(lhs.into(), self.term()?.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Ast::Mul(lhs.into(), self.factor()?.into());
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Ast::Div(lhs.into(), self.factor()?.into());
                }
                // Adjacent primaries multiply: "(1-x)(1-y)", "2x".
                Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen) => {
                    lhs = Ast::Mul(lhs.into(), self.factor()?.into());
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Ast, ExprError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Ast::Neg(self.factor()?.into()));
        }
        let base = self.primary()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let negative = if matches!(self.peek(), Some(Tok::Minus)) {
                self.bump();
                true
            } else {
                false
            };
            match self.bump() {
                Some(Tok::Int(k)) => {
                    let k = if negative { -k } else { k };
                    if k.abs() > MAX_POW {
                        return Err(ExprError::ExponentRange(k));
                    }
                    return Ok(Ast::Pow(base.into(), k));
                }
                Some(other) => return Err(ExprError::Expected("integer exponent", format!("{other:?}"))),
                None => return Err(ExprError::UnexpectedEnd),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast, ExprError> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Ast::Int(n)),
            Some(Tok::Ident(name)) => Ok(Ast::Var(self.resolve(&name)?)),
            Some(Tok::LParen) => {
                let inner = self.expression()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(other) => Err(ExprError::Expected(")", format!("{other:?}"))),
                    None => Err(ExprError::UnexpectedEnd),
                }
            }
            Some(other) => Err(ExprError::Expected("a value", format!("{other:?}"))),
            None => Err(ExprError::UnexpectedEnd),
        }
    }
}

/// A divisor in factored shape: `coef * x^mono * prod (1 - x^M)^mult`
/// with signed multiplicities.
#[derive(Clone, Debug)]
struct ProductForm {
    coef: BigRational,
    mono: Vec<i64>,
    factors: Vec<(Vec<i64>, i64)>,
}

impl ProductForm {
    fn constant(space: VariableSpace, coef: BigRational) -> Self {
        ProductForm { coef, mono: vec![0; space.dim()], factors: Vec::new() }
    }

    fn push_factor(&mut self, mono: Vec<i64>, mult: i64) {
        for f in &mut self.factors {
            if f.0 == mono {
                f.1 += mult;
                return;
            }
        }
        self.factors.push((mono, mult));
    }

    fn mul(mut self, other: ProductForm) -> ProductForm {
        self.coef *= other.coef;
        for (m, o) in self.mono.iter_mut().zip(&other.mono) {
            *m += o;
        }
        for (mono, mult) in other.factors {
            self.push_factor(mono, mult);
        }
        self
    }

    fn pow(mut self, k: i64) -> Result<ProductForm, ExprError> {
        let mut coef = BigRational::one();
        for _ in 0..k.unsigned_abs() {
            coef *= &self.coef;
        }
        if k < 0 {
            if coef.is_zero() {
                return Err(ExprError::DivisionByZero);
            }
            coef = coef.recip();
        }
        self.coef = coef;
        for m in &mut self.mono {
            *m *= k;
        }
        for f in &mut self.factors {
            f.1 = f.1.checked_mul(k).ok_or(ExprError::ExponentRange(k))?;
        }
        Ok(self)
    }

    fn invert(self) -> Result<ProductForm, ExprError> {
        self.pow(-1)
    }
}

fn scaled_monomial(pf: &ProductForm) -> Option<(BigRational, Vec<i64>)> {
    if pf.factors.is_empty() {
        Some((pf.coef.clone(), pf.mono.clone()))
    } else {
        None
    }
}

/// Interprets `ast` as a product of monomials and `(1 - monomial)` factors.
fn product_form(ast: &Ast, space: VariableSpace) -> Result<ProductForm, ExprError> {
    match ast {
        Ast::Int(n) => Ok(ProductForm::constant(space, qint(*n))),
        Ast::Var(coord) => {
            let mut mono = vec![0; space.dim()];
            mono[*coord] = 1;
            Ok(ProductForm { coef: BigRational::one(), mono, factors: Vec::new() })
        }
        Ast::Neg(a) => {
            let mut pf = product_form(a, space)?;
            pf.coef = -pf.coef;
            Ok(pf)
        }
        Ast::Mul(a, b) => Ok(product_form(a, space)?.mul(product_form(b, space)?)),
        Ast::Div(a, b) => Ok(product_form(a, space)?.mul(product_form(b, space)?.invert()?)),
        Ast::Pow(a, k) => product_form(a, space)?.pow(*k),
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let pa = product_form(a, space)?;
            let mut pb = product_form(b, space)?;
            if matches!(ast, Ast::Add(..)) {
                pb.coef = -pb.coef;
            }
            // Both sides must now be scaled monomials of the difference
            // c_a x^A - c_b x^B; with c_a = c_b this is c_a x^A (1 - x^{B-A}).
            let (ca, ma) = scaled_monomial(&pa).ok_or_else(|| not_a_product(ast))?;
            let (cb, mb) = scaled_monomial(&pb).ok_or_else(|| not_a_product(ast))?;
            if ca.is_zero() {
                return Err(not_a_product(ast));
            }
            if ma == mb {
                let coef = &ca - &cb;
                if coef.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                return Ok(ProductForm { coef, mono: ma, factors: Vec::new() });
            }
            if ca != cb {
                return Err(not_a_product(ast));
            }
            let diff: Vec<i64> = mb.iter().zip(&ma).map(|(b, a)| b - a).collect();
            Ok(ProductForm { coef: ca, mono: ma, factors: vec![(diff, 1)] })
        }
    }
}

fn not_a_product(ast: &Ast) -> ExprError {
    ExprError::NotAProduct(format!("{ast:?}"))
}

/// Expands the reciprocal of a factored divisor into an engine function.
fn reciprocal(pf: ProductForm, space: VariableSpace) -> Result<ElliottRational, ExprError> {
    if pf.coef.is_zero() {
        return Err(ExprError::DivisionByZero);
    }
    let mut denominator = Vec::new();
    let mut numerator_factors: Vec<(Vec<i64>, u64)> = Vec::new();
    for (mono, mult) in pf.factors {
        if mono.iter().all(|&e| e == 0) {
            // (1 - 1) = 0 somewhere in the divisor.
            return Err(ExprError::DivisionByZero);
        }
        if mult.unsigned_abs() > MAX_POW as u64 {
            return Err(ExprError::ExponentRange(mult));
        }
        if mult > 0 {
            denominator.push(ElliottFactor::new(ExponentVector(mono), mult as u32));
        } else if mult < 0 {
            numerator_factors.push((mono, mult.unsigned_abs()));
        }
    }
    let head = ElliottRational::from_terms(
        space,
        vec![ElliottTerm::new(
            pf.coef.recip(),
            ExponentVector(pf.mono.iter().map(|e| -e).collect()),
            denominator,
        )],
    );
    let mut value = head;
    for (mono, count) in numerator_factors {
        let one_minus = ElliottRational::one(space)
            .sub(&ElliottRational::monomial(space, BigRational::one(), ExponentVector(mono)))?;
        for _ in 0..count {
            value = value.mul(&one_minus)?;
        }
    }
    Ok(value)
}

fn eval(ast: &Ast, space: VariableSpace) -> Result<ElliottRational, ExprError> {
    match ast {
        Ast::Int(0) => Ok(ElliottRational::zero(space)),
        Ast::Int(n) => Ok(ElliottRational::monomial(
            space,
            qint(*n),
            ExponentVector(vec![0; space.dim()]),
        )),
        Ast::Var(coord) => {
            let mut mono = vec![0; space.dim()];
            mono[*coord] = 1;
            Ok(ElliottRational::monomial(space, BigRational::one(), ExponentVector(mono)))
        }
        Ast::Neg(a) => Ok(eval(a, space)?.neg()),
        Ast::Add(a, b) => Ok(eval(a, space)?.add(&eval(b, space)?)?),
        Ast::Sub(a, b) => Ok(eval(a, space)?.sub(&eval(b, space)?)?),
        Ast::Mul(a, b) => Ok(eval(a, space)?.mul(&eval(b, space)?)?),
        Ast::Div(a, b) => {
            let divisor = reciprocal(product_form(b, space)?, space)?;
            Ok(eval(a, space)?.mul(&divisor)?)
        }
        Ast::Pow(a, k) if *k >= 0 => {
            let base = eval(a, space)?;
            let mut value = ElliottRational::one(space);
            for _ in 0..*k {
                value = value.mul(&base)?;
            }
            Ok(value)
        }
        Ast::Pow(a, k) => reciprocal(product_form(a, space)?.pow(-k)?, space),
    }
}

/// Parses `src` into a rational function over `space`.
pub fn parse_function(src: &str, space: VariableSpace) -> Result<ElliottRational, ExprError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(ExprError::UnexpectedEnd);
    }
    let mut parser = Parser { toks, pos: 0, space };
    let ast = parser.expression()?;
    if let Some(extra) = parser.peek() {
        return Err(ExprError::Expected("end of expression", format!("{extra:?}")));
    }
    eval(&ast, space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use recip_core::display::format_function;

    fn one_var() -> VariableSpace {
        VariableSpace::new(0, 1)
    }

    #[test]
    fn geometric_series_round_trips() {
        let f = parse_function("1/(1-x)^2", one_var()).unwrap();
        assert_eq!(format_function(&f), "1 / [(1 - x1)^2]");
        let g = parse_function("1/(1\u{2212}x)", one_var()).unwrap();
        assert_eq!(format_function(&g), "1 / [(1 - x1)]");
    }

    #[test]
    fn differences_of_monomials_divide() {
        let space = VariableSpace::new(0, 2);
        let f = parse_function("(x - y)/(x - y)", space).unwrap();
        assert!(f.equals(&ElliottRational::one(space)).unwrap());
        let g = parse_function("1/(2 - x)", space);
        assert!(matches!(g, Err(ExprError::NotAProduct(_))));
    }

    #[test]
    fn adjacency_multiplies_and_nested_reciprocals_flatten() {
        let space = VariableSpace::new(0, 2);
        let f = parse_function("1/((1-x)(1-y))", space).unwrap();
        assert_eq!(format_function(&f), "1 / [(1 - x2) (1 - x1)]");
        let g = parse_function("1/(1/(1-x))", space).unwrap();
        let direct = parse_function("1 - x", space).unwrap();
        assert!(g.equals(&direct).unwrap());
    }

    #[test]
    fn division_by_zero_is_caught() {
        assert!(matches!(
            parse_function("1/(x - x)", one_var()),
            Err(ExprError::DivisionByZero)
        ));
        assert!(matches!(parse_function("1/0", one_var()), Err(ExprError::DivisionByZero)));
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!(
            parse_function("1/(1-q)", one_var()),
            Err(ExprError::UnknownVariable(_))
        ));
    }
}
