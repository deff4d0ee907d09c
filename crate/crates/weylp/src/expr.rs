//! Expression parsing and evaluation for the three value kinds.
//!
//! Grammar (LL(1), one token of lookahead, explicit `*` everywhere):
//!
//! ```text
//! expr    := neg (('+' | '-') neg)*
//! neg     := '-' neg | prod
//! prod    := pow ('*' pow)*
//! pow     := primary ('^' INT)?
//! primary := atom | INT | '(' expr ')'
//! atom    := x<k> | d<k> | y<k> | finv
//! ```
//!
//! Precedence is `^` over `*` over unary minus over binary `+`/`-`; products
//! associate to the left and evaluation never reorders factors, so the
//! written order of noncommuting operators is preserved. Modes restrict the
//! atom set: operator expressions have no `y`, symbol expressions no `d`,
//! function expressions neither.

use crate::center::SymbolPolynomial;
use crate::chart::Chart;
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::localized::LocalizedFunction;
use crate::poly::Polynomial;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Operator,
    Symbol,
    Function,
}

impl Mode {
    fn describe(self) -> &'static str {
        match self {
            Mode::Operator => "operator",
            Mode::Symbol => "symbol",
            Mode::Function => "function",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Atom {
    /// Coordinate x_k, index as written (1-based).
    X(usize),
    /// Partial derivative d_k.
    D(usize),
    /// Fiber coordinate y_k.
    Y(usize),
    /// Inverse of the chart denominator.
    FInv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Atom { atom: Atom, line: usize, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Int(i64),
    Ident(String),
    Eof,
}

impl std::fmt::Display for Token {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Token::Plus => write!(out, "'+'"),
            Token::Minus => write!(out, "'-'"),
            Token::Star => write!(out, "'*'"),
            Token::Caret => write!(out, "'^'"),
            Token::LParen => write!(out, "'('"),
            Token::RParen => write!(out, "')'"),
            Token::Int(v) => write!(out, "integer {v}"),
            Token::Ident(s) => write!(out, "'{s}'"),
            Token::Eof => write!(out, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize, usize)>> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' | '-' | '*' | '^' | '(' | ')' => {
                chars.next();
                col += 1;
                tokens.push((
                    match ch {
                        '+' => Token::Plus,
                        '-' => Token::Minus,
                        '*' => Token::Star,
                        '^' => Token::Caret,
                        '(' => Token::LParen,
                        _ => Token::RParen,
                    },
                    tline,
                    tcol,
                ));
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let value = digits.parse::<i64>().map_err(|_| {
                    Error::expr(
                        tline,
                        tcol,
                        format!("integer literal '{digits}' out of range"),
                    )
                })?;
                tokens.push((Token::Int(value), tline, tcol));
            }
            c if c.is_ascii_alphabetic() => {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        ident.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(ident), tline, tcol));
            }
            other => {
                return Err(Error::expr(
                    tline,
                    tcol,
                    format!("unexpected character '{other}'"),
                ));
            }
        }
    }
    tokens.push((Token::Eof, line, col));
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> &(Token, usize, usize) {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> (Token, usize, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        let (tok, line, col) = self.advance();
        if tok == want {
            Ok(())
        } else {
            Err(Error::expr(
                line,
                col,
                format!("expected {want}, found {tok}"),
            ))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.neg()?;
        loop {
            match self.peek().0 {
                Token::Plus => {
                    self.advance();
                    acc = Expr::Add(Box::new(acc), Box::new(self.neg()?));
                }
                Token::Minus => {
                    self.advance();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.neg()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn neg(&mut self) -> Result<Expr> {
        if self.peek().0 == Token::Minus {
            self.advance();
            return Ok(Expr::Neg(Box::new(self.neg()?)));
        }
        self.prod()
    }

    fn prod(&mut self) -> Result<Expr> {
        let mut acc = self.pow()?;
        while self.peek().0 == Token::Star {
            self.advance();
            acc = Expr::Mul(Box::new(acc), Box::new(self.pow()?));
        }
        Ok(acc)
    }

    fn pow(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek().0 != Token::Caret {
            return Ok(base);
        }
        self.advance();
        let (tok, line, col) = self.advance();
        match tok {
            Token::Int(v) if v >= 0 && v <= u32::MAX as i64 => {
                Ok(Expr::Pow(Box::new(base), v as u32))
            }
            other => Err(Error::expr(
                line,
                col,
                format!("exponent must be a nonnegative integer literal, found {other}"),
            )),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let (tok, line, col) = self.advance();
        match tok {
            Token::Int(v) => Ok(Expr::Int(v)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::Ident(name) => {
                let atom = self.atom(&name, line, col)?;
                Ok(Expr::Atom { atom, line, col })
            }
            other => Err(Error::expr(
                line,
                col,
                format!("expected an atom, integer or '(', found {other}"),
            )),
        }
    }

    fn atom(&self, name: &str, line: usize, col: usize) -> Result<Atom> {
        if name == "finv" {
            return Ok(Atom::FInv);
        }
        let (head, rest) = name.split_at(1);
        let index: usize = match rest.parse() {
            Ok(k) if k >= 1 => k,
            _ => {
                return Err(Error::expr(
                    line,
                    col,
                    format!("unknown atom '{name}' (expected x<k>, d<k>, y<k> or finv)"),
                ))
            }
        };
        match head {
            "x" => Ok(Atom::X(index)),
            "d" => {
                if self.mode == Mode::Operator {
                    Ok(Atom::D(index))
                } else {
                    Err(Error::expr(
                        line,
                        col,
                        format!("'{name}' is not allowed in {} mode", self.mode.describe()),
                    ))
                }
            }
            "y" => {
                if self.mode == Mode::Symbol {
                    Ok(Atom::Y(index))
                } else {
                    Err(Error::expr(
                        line,
                        col,
                        format!("'{name}' is not allowed in {} mode", self.mode.describe()),
                    ))
                }
            }
            _ => Err(Error::expr(
                line,
                col,
                format!("unknown atom '{name}' (expected x<k>, d<k>, y<k> or finv)"),
            )),
        }
    }
}

/// Parse an expression in the given mode. Illegal atoms for the mode are
/// parse errors carrying their position.
pub fn parse(text: &str, mode: Mode) -> Result<Expr> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        mode,
    };
    let ast = parser.expr()?;
    let (tok, line, col) = parser.advance();
    if tok != Token::Eof {
        return Err(Error::expr(line, col, format!("unexpected {tok}")));
    }
    Ok(ast)
}

/// Everything an expression can evaluate into.
trait Algebra: Sized {
    fn constant(chart: &Chart, v: i64) -> Self;
    fn atom(chart: &Chart, atom: Atom, line: usize, col: usize) -> Result<Self>;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn pow(&self, k: u32) -> Self;
}

fn check_index(chart: &Chart, k: usize, line: usize, col: usize, letter: char) -> Result<usize> {
    if k >= 1 && k <= chart.num_vars() {
        Ok(k - 1)
    } else {
        Err(Error::expr(
            line,
            col,
            format!(
                "index of {letter}{k} out of range: the chart has n = {} coordinates",
                chart.num_vars()
            ),
        ))
    }
}

fn check_finv(chart: &Chart, line: usize, col: usize) -> Result<()> {
    if chart.is_affine() {
        Err(Error::expr(
            line,
            col,
            "finv is only available on localized charts (f != 1)".to_string(),
        ))
    } else {
        Ok(())
    }
}

impl Algebra for DiffOperator {
    fn constant(chart: &Chart, v: i64) -> Self {
        DiffOperator::constant(chart, v)
    }

    fn atom(chart: &Chart, atom: Atom, line: usize, col: usize) -> Result<Self> {
        match atom {
            Atom::X(k) => Ok(DiffOperator::coordinate(
                chart,
                check_index(chart, k, line, col, 'x')?,
            )),
            Atom::D(k) => Ok(DiffOperator::partial_op(
                chart,
                check_index(chart, k, line, col, 'd')?,
            )),
            Atom::FInv => {
                check_finv(chart, line, col)?;
                Ok(DiffOperator::scalar(LocalizedFunction::finv_pow(chart, 1)))
            }
            Atom::Y(_) => unreachable!("parser rejects y atoms in operator mode"),
        }
    }

    fn add(&self, other: &Self) -> Result<Self> {
        DiffOperator::add(self, other)
    }

    fn sub(&self, other: &Self) -> Result<Self> {
        DiffOperator::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        DiffOperator::mul(self, other)
    }

    fn neg(&self) -> Self {
        DiffOperator::neg(self)
    }

    fn pow(&self, k: u32) -> Self {
        self.power(k)
    }
}

impl Algebra for SymbolPolynomial {
    fn constant(chart: &Chart, v: i64) -> Self {
        SymbolPolynomial::constant(chart, v)
    }

    fn atom(chart: &Chart, atom: Atom, line: usize, col: usize) -> Result<Self> {
        match atom {
            Atom::X(k) => Ok(SymbolPolynomial::var_x(
                chart,
                check_index(chart, k, line, col, 'x')?,
            )),
            Atom::Y(k) => Ok(SymbolPolynomial::var_y(
                chart,
                check_index(chart, k, line, col, 'y')?,
            )),
            Atom::FInv => {
                check_finv(chart, line, col)?;
                Ok(SymbolPolynomial::scalar(LocalizedFunction::finv_pow(
                    chart, 1,
                )))
            }
            Atom::D(_) => unreachable!("parser rejects d atoms in symbol mode"),
        }
    }

    fn add(&self, other: &Self) -> Result<Self> {
        SymbolPolynomial::add(self, other)
    }

    fn sub(&self, other: &Self) -> Result<Self> {
        SymbolPolynomial::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        SymbolPolynomial::mul(self, other)
    }

    fn neg(&self) -> Self {
        SymbolPolynomial::neg(self)
    }

    fn pow(&self, k: u32) -> Self {
        SymbolPolynomial::pow(self, k)
    }
}

impl Algebra for LocalizedFunction {
    fn constant(chart: &Chart, v: i64) -> Self {
        LocalizedFunction::constant_i64(chart, v)
    }

    fn atom(chart: &Chart, atom: Atom, line: usize, col: usize) -> Result<Self> {
        match atom {
            Atom::X(k) => Ok(LocalizedFunction::var(
                chart,
                check_index(chart, k, line, col, 'x')?,
            )),
            Atom::FInv => {
                check_finv(chart, line, col)?;
                Ok(LocalizedFunction::finv_pow(chart, 1))
            }
            Atom::D(_) | Atom::Y(_) => {
                unreachable!("parser rejects d and y atoms in function mode")
            }
        }
    }

    fn add(&self, other: &Self) -> Result<Self> {
        LocalizedFunction::add(self, other)
    }

    fn sub(&self, other: &Self) -> Result<Self> {
        LocalizedFunction::sub(self, other)
    }

    fn mul(&self, other: &Self) -> Result<Self> {
        LocalizedFunction::mul(self, other)
    }

    fn neg(&self) -> Self {
        LocalizedFunction::neg(self)
    }

    fn pow(&self, k: u32) -> Self {
        LocalizedFunction::pow(self, k)
    }
}

fn eval<T: Algebra>(ast: &Expr, chart: &Chart) -> Result<T> {
    match ast {
        Expr::Int(v) => Ok(T::constant(chart, *v)),
        Expr::Atom { atom, line, col } => T::atom(chart, *atom, *line, *col),
        Expr::Neg(inner) => Ok(eval::<T>(inner, chart)?.neg()),
        Expr::Add(a, b) => eval::<T>(a, chart)?.add(&eval::<T>(b, chart)?),
        Expr::Sub(a, b) => eval::<T>(a, chart)?.sub(&eval::<T>(b, chart)?),
        Expr::Mul(a, b) => eval::<T>(a, chart)?.mul(&eval::<T>(b, chart)?),
        Expr::Pow(base, k) => Ok(eval::<T>(base, chart)?.pow(*k)),
    }
}

pub fn eval_operator(ast: &Expr, chart: &Chart) -> Result<DiffOperator> {
    eval(ast, chart)
}

pub fn eval_symbol(ast: &Expr, chart: &Chart) -> Result<SymbolPolynomial> {
    eval(ast, chart)
}

pub fn eval_function(ast: &Expr, chart: &Chart) -> Result<LocalizedFunction> {
    eval(ast, chart)
}

/// Parse and evaluate an operator expression in one step.
pub fn operator_from_text(chart: &Chart, text: &str) -> Result<DiffOperator> {
    eval_operator(&parse(text, Mode::Operator)?, chart)
}

pub fn symbol_from_text(chart: &Chart, text: &str) -> Result<SymbolPolynomial> {
    eval_symbol(&parse(text, Mode::Symbol)?, chart)
}

pub fn function_from_text(chart: &Chart, text: &str) -> Result<LocalizedFunction> {
    eval_function(&parse(text, Mode::Function)?, chart)
}

/// Parse a chart denominator: a function expression over affine space (no
/// finv), returned as a plain polynomial.
pub fn chart_polynomial(p: u64, e: u8, n: usize, text: &str) -> Result<Polynomial> {
    let ambient = Chart::affine(p, e, n)?;
    let value = function_from_text(&ambient, text)?;
    debug_assert_eq!(value.denom_pow(), 0);
    Ok(value.numerator().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn affine(p: u64, n: usize) -> Chart {
        Chart::affine(p, 1, n).unwrap()
    }

    #[test]
    fn product_order_is_preserved() {
        let c = affine(3, 1);
        // d1*x1 normalizes, x1*d1 stays
        assert_eq!(
            operator_from_text(&c, "d1*x1").unwrap().to_string(),
            "x1*d1 + 1"
        );
        assert_eq!(
            operator_from_text(&c, "x1*d1").unwrap().to_string(),
            "x1*d1"
        );
    }

    #[test]
    fn symbol_mode() {
        let c = affine(3, 1);
        let s = symbol_from_text(&c, "y1^2 + x1").unwrap();
        assert_eq!(s.to_string(), "y1^2 + x1");
    }

    #[test]
    fn mode_errors_carry_positions() {
        let err = parse("y1", Mode::Operator).unwrap_err();
        match err {
            Error::Expr { line, col, msg } => {
                assert_eq!((line, col), (1, 1));
                assert!(msg.contains("operator mode"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse("d1", Mode::Symbol).is_err());
        assert!(parse("x1 + z3", Mode::Operator).is_err());
        assert!(parse("x1 @", Mode::Operator).is_err());
    }

    #[test]
    fn index_and_finv_checks_happen_at_eval() {
        let c = affine(3, 2);
        let err = operator_from_text(&c, "x3").unwrap_err();
        assert!(matches!(err, Error::Expr { .. }));
        assert!(operator_from_text(&c, "finv").is_err());

        let ring = c.ring();
        let loc = Chart::localized(3, 1, 2, Polynomial::var(ring, 2, 0)).unwrap();
        assert!(operator_from_text(&loc, "finv").is_ok());
    }

    #[test]
    fn precedence_and_parentheses() {
        let c = affine(5, 1);
        // ^ binds tighter than *, unary minus weaker than *
        let a = operator_from_text(&c, "-x1*d1^2").unwrap();
        let b = operator_from_text(&c, "-(x1*(d1^2))").unwrap();
        assert_eq!(a, b);
        let s = operator_from_text(&c, "(x1 + 1)^2").unwrap();
        assert_eq!(s.to_string(), "x1^2 + 2*x1 + 1");
        // 4 - 1 = 3
        assert_eq!(operator_from_text(&c, "4 - 1").unwrap().to_string(), "3");
    }

    #[test]
    fn finv_cancels_f() {
        let ring = crate::chart::CoeffRing::new(3, 1).unwrap();
        let loc = Chart::localized(3, 1, 1, Polynomial::var(ring, 1, 0)).unwrap();
        assert_eq!(
            operator_from_text(&loc, "finv*x1").unwrap().to_string(),
            "1"
        );
    }

    #[test]
    fn render_parse_round_trip() {
        let c = affine(7, 2);
        for text in [
            "x1^2*d1^2 + 4*x1*d1 + 2",
            "x1*x2 + 3*d2",
            "(x1 + 2)*d1^3",
            "0",
            "6",
        ] {
            let v = operator_from_text(&c, text).unwrap();
            let again = operator_from_text(&c, &v.to_string()).unwrap();
            assert_eq!(v, again, "{text}");
        }
    }

    #[test]
    fn chart_polynomial_parsing() {
        let f = chart_polynomial(3, 1, 2, "x1*x2 + 1").unwrap();
        assert_eq!(f.to_string(), "x1*x2 + 1");
        assert!(chart_polynomial(3, 1, 2, "finv").is_err());
        assert!(chart_polynomial(3, 1, 2, "y1").is_err());
    }
}
