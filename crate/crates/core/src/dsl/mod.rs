//! A small expression language for Finsler functions and conformal factors.
//!
//! Expressions are written over the coordinates `x1, x2, y1, y2`, numeric
//! literals, named parameters and `let` bindings, the binary operators
//! `+ - * / ^` and the functions `sqrt exp ln sin cos abs`. The grammar is
//! documented in the workspace README.

mod eval;
mod lexer;
mod metric;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::jet::Coord;
pub use eval::FieldDef;
pub use lexer::CmpOp;
pub use metric::{Constraint, MetricDef, MetricFile, SampleBox};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                *offset
            }
        }
    }

    /// Multi-line diagnostic pointing at the offending byte of `source`.
    pub fn render(&self, source: &str) -> String {
        let offset = self.offset().min(source.len());
        let col = source[..offset].chars().count();
        format!("{self}\n  {source}\n  {}^", " ".repeat(col))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Ln,
    Sin,
    Cos,
    Abs,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sqrt, Func::Exp, Func::Ln, Func::Sin, Func::Cos, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Trees built by the parser only hold finite,
/// non-negative literals (a leading minus is [`Expr::Neg`]).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Coord),
    /// Parameter, `let` binding or the constant `pi`.
    Sym(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Names that can never be rebound.
pub fn is_reserved(name: &str) -> bool {
    Func::from_name(name).is_some()
        || Coord::ALL.iter().any(|c| c.name() == name)
        || name == "pi"
}

/// Parse an expression, accepting any free identifier as a symbol.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    parse_with(source, None)
}

/// Parse an expression; identifiers other than coordinates, functions and
/// `pi` must satisfy `known`.
pub fn parse_scoped(source: &str, known: &dyn Fn(&str) -> bool) -> Result<Expr, ParseError> {
    parse_with(source, Some(known))
}

fn parse_with(source: &str, known: Option<&dyn Fn(&str) -> bool>) -> Result<Expr, ParseError> {
    let wrapped = move |name: &str| name == "pi" || known.map_or(true, |k| k(name));
    let mut p = parser::Parser::new(source, Some(&wrapped))?;
    let e = p.expr(0)?;
    p.expect_end()?;
    Ok(e)
}

pub(crate) fn parse_constraint(
    source: &str,
    known: &dyn Fn(&str) -> bool,
) -> Result<(Expr, CmpOp, Expr), ParseError> {
    let wrapped = move |name: &str| name == "pi" || known(name);
    let mut p = parser::Parser::new(source, Some(&wrapped))?;
    let lhs = p.expr(0)?;
    let op = p.comparison()?;
    let rhs = p.expr(0)?;
    p.expect_end()?;
    Ok((lhs, op, rhs))
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn var(c: Coord) -> Expr {
        Expr::Var(c)
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Sym(name.to_string())
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    /// Free symbols (parameters and bindings) in first-use order.
    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<String>) {
        match self {
            Expr::Sym(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_symbols(out),
            Expr::Bin(_, a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
            Expr::Num(_) | Expr::Var(_) => {}
        }
    }

    pub fn depends_on(&self, c: Coord) -> bool {
        match self {
            Expr::Var(v) => *v == c,
            Expr::Neg(a) | Expr::Call(_, a) => a.depends_on(c),
            Expr::Bin(_, a, b) => a.depends_on(c) || b.depends_on(c),
            Expr::Num(_) | Expr::Sym(_) => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 3,
            Expr::Neg(_) => 5,
            Expr::Bin(BinOp::Pow, ..) => 7,
            Expr::Num(_) | Expr::Var(_) | Expr::Sym(_) | Expr::Call(..) => 9,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Canonical form with the fewest parentheses that re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(c) => write!(f, "{c}"),
            Expr::Sym(s) => f.write_str(s),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, a.precedence() < 5)
            }
            Expr::Bin(BinOp::Pow, a, b) => {
                write_child(f, a, a.precedence() < 9)?;
                f.write_str("^")?;
                write_child(f, b, b.precedence() < 5)
            }
            Expr::Bin(op, a, b) => {
                let p = self.precedence();
                write_child(f, a, a.precedence() < p)?;
                write!(f, " {} ", op.symbol())?;
                write_child(f, b, b.precedence() <= p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Coord::*;

    fn v(c: Coord) -> Expr {
        Expr::var(c)
    }

    #[test]
    fn sqrt_of_sum_of_squares() {
        let e = parse("sqrt(y1^2 + y2^2)").unwrap();
        let sq = |c| Expr::bin(BinOp::Pow, v(c), Expr::num(2.0));
        assert_eq!(
            e,
            Expr::call(Func::Sqrt, Expr::bin(BinOp::Add, sq(Y1), sq(Y2)))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("a + b * c").unwrap();
        assert_eq!(
            e,
            Expr::bin(
                BinOp::Add,
                Expr::sym("a"),
                Expr::bin(BinOp::Mul, Expr::sym("b"), Expr::sym("c"))
            )
        );
        // left-assoc
        assert_eq!(parse("a - b - c").unwrap(), parse("(a - b) - c").unwrap());
        assert_eq!(parse("a / b / c").unwrap(), parse("(a / b) / c").unwrap());
        // right-assoc power, binding tighter than unary minus
        assert_eq!(parse("a^b^c").unwrap(), parse("a^(b^c)").unwrap());
        assert_eq!(parse("-a^2").unwrap(), parse("-(a^2)").unwrap());
        assert_eq!(parse("-a*b").unwrap(), parse("(-a)*b").unwrap());
        assert_eq!(parse("a^-2").unwrap(), parse("a^(-2)").unwrap());
    }

    #[test]
    fn berwald_rund_metric_parses() {
        let e = parse("(1/x2)*sqrt(2*y1*y2*x2^2 + c*y2^2)").unwrap();
        match &e {
            Expr::Bin(BinOp::Mul, a, b) => {
                assert_eq!(**a, Expr::bin(BinOp::Div, Expr::num(1.0), v(X2)));
                assert!(matches!(**b, Expr::Call(Func::Sqrt, _)));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(e.symbols(), vec!["c".to_string()]);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("x1 + * x2") {
            Err(ParseError::Syntax { offset, expected, .. }) => {
                assert_eq!(offset, 5);
                assert!(!expected.is_empty());
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("sqrt x1"), Err(ParseError::Syntax { offset: 5, .. })));
        assert!(matches!(parse("(x1"), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(matches!(parse("x1 x2"), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(parse("").is_err());
    }

    #[test]
    fn unknown_identifiers() {
        let known = |s: &str| s == "a";
        assert!(parse_scoped("a*y1 + pi", &known).is_ok());
        assert_eq!(
            parse_scoped("a*y1 + bogus", &known),
            Err(ParseError::UnknownIdentifier {
                name: "bogus".into(),
                offset: 7
            })
        );
    }

    #[test]
    fn printing_is_minimal_and_reparses() {
        for src in [
            "-a * b",
            "a - (b - c)",
            "(a + b)^2",
            "x1^-2",
            "-(x1 * x2)",
            "a^b^c",
            "(a^b)^c",
            "(-a)^2",
            "a - -b",
            "sqrt(y1^2 + y2^2) / (1 + x1)",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(printed, src);
            assert_eq!(parse(&printed).unwrap(), e);
        }
    }

    #[test]
    fn render_points_at_the_error() {
        let src = "x1 + * x2";
        let err = parse(src).unwrap_err();
        let text = err.render(src);
        assert!(text.ends_with("\n       ^"), "{text}");
    }
}
