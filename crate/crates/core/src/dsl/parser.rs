//! Pratt parser for metric expressions.
//!
//! Binding powers, loosest first: `+ -` (left), `* /` (left), prefix `-`,
//! `^` (right). Function calls and parentheses are atoms.

use super::lexer::{tokenize, CmpOp, Tok};
use super::{BinOp, Expr, Func, ParseError};
use crate::jet::Coord;

const NEG_BP: u8 = 5;

fn infix_bp(tok: &Tok) -> Option<(BinOp, u8, u8)> {
    Some(match tok {
        Tok::Plus => (BinOp::Add, 1, 2),
        Tok::Minus => (BinOp::Sub, 1, 2),
        Tok::Star => (BinOp::Mul, 3, 4),
        Tok::Slash => (BinOp::Div, 3, 4),
        Tok::Caret => (BinOp::Pow, 7, 6),
        _ => return None,
    })
}

pub(crate) struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    known: Option<&'a dyn Fn(&str) -> bool>,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, known: Option<&'a dyn Fn(&str) -> bool>) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            known,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(&["an operator", "end of input"]))
        }
    }

    pub fn comparison(&mut self) -> Result<CmpOp, ParseError> {
        match self.peek().clone() {
            Tok::Cmp(op) => {
                self.bump();
                Ok(op)
            }
            _ => Err(self.error(&["`<`", "`<=`", "`>`", "`>=`"])),
        }
    }

    pub fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.prefix()?;
        while let Some((op, lbp, rbp)) = infix_bp(self.peek()) {
            if lbp < min_bp {
                break;
            }
            self.bump();
            let rhs = self.expr(rbp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let save = self.pos;
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Minus => Ok(Expr::Neg(Box::new(self.expr(NEG_BP)?))),
            Tok::LParen => {
                let inner = self.expr(0)?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["`)`"]));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => {
                if let Some(func) = Func::from_name(&name) {
                    if *self.peek() != Tok::LParen {
                        return Err(self.error(&["`(` after function name"]));
                    }
                    self.bump();
                    let arg = self.expr(0)?;
                    if *self.peek() != Tok::RParen {
                        return Err(self.error(&["`)`"]));
                    }
                    self.bump();
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if let Some(c) = Coord::ALL.into_iter().find(|c| c.name() == name) {
                    return Ok(Expr::Var(c));
                }
                if let Some(known) = self.known {
                    if !known(&name) {
                        return Err(ParseError::UnknownIdentifier { name, offset });
                    }
                }
                Ok(Expr::Sym(name))
            }
            _ => {
                self.pos = save;
                Err(self.error(&["a number", "an identifier", "`(`", "`-`"]))
            }
        }
    }
}
