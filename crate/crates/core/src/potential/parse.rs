//! Recursive-descent parser for radial potentials in the variable `S`.
//!
//! ```text
//! expr   := term (("+"|"-") term)* ;
//! term   := factor (("*"|"/") factor)* ;
//! factor := unary ("^" factor)? ;
//! unary  := "-" unary | atom ;
//! atom   := NUMBER | "S" | "pi" | "e" | FUNC "(" expr ")" | "(" expr ")" ;
//! FUNC   := "exp" | "log" | "sqrt" | "sin" | "cos" ;
//! ```
//!
//! `pow(a, b)` is also accepted and produces the same node as `a ^ b`.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
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
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }
}

/// Fully parenthesized rendering; parsing it back yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::Var => f.write_str("S"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn digits(&mut self) -> usize {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.pos - start
    }

    /// Returns the token and the byte offset where it starts.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == b'.' {
            let int = self.digits();
            let mut frac = 0;
            if self.src.get(self.pos) == Some(&b'.') {
                self.pos += 1;
                frac = self.digits();
            }
            if int + frac == 0 {
                return Err(Error::Syntax {
                    position: start,
                    expected: "digits".into(),
                });
            }
            if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
                let mark = self.pos;
                self.pos += 1;
                if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                    self.pos += 1;
                }
                if self.digits() == 0 {
                    // `2e` or `2*e` style: leave the `e` for the identifier lexer
                    self.pos = mark;
                }
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let value: f64 = text.parse().map_err(|_| Error::Syntax {
                position: start,
                expected: "number".into(),
            })?;
            if !value.is_finite() {
                return Err(Error::Overflow(format!("literal {text}")));
            }
            return Ok((Tok::Num(value), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return Ok((Tok::Ident(text.to_string()), start));
        }
        if b"+-*/^(),".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Sym(c as char), start));
        }
        // Report the char, not the byte, so non-ascii input gives a sensible message.
        let ch = std::str::from_utf8(&self.src[start..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?');
        Err(Error::Syntax {
            position: start,
            expected: format!("a number, identifier or operator, found `{ch}`"),
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Result<Self> {
        let mut lexer = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let (tok, at) = lexer.next()?;
        Ok(Self { lexer, tok, at })
    }

    fn bump(&mut self) -> Result<Tok> {
        let (next, at) = self.lexer.next()?;
        self.at = at;
        Ok(std::mem::replace(&mut self.tok, next))
    }

    fn syntax<T>(&self, expected: &str) -> Result<T> {
        let expected = match &self.tok {
            Tok::End => format!("{expected}, found end of input"),
            _ => expected.to_string(),
        };
        Err(Error::Syntax {
            position: self.at,
            expected,
        })
    }

    fn expect(&mut self, sym: char) -> Result<()> {
        if self.tok == Tok::Sym(sym) {
            self.bump()?;
            Ok(())
        } else {
            self.syntax(&format!("`{sym}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.tok {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = Expr::binary(op, lhs, self.factor()?);
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if self.tok == Tok::Sym('^') {
            self.bump()?;
            return Ok(Expr::binary(BinOp::Pow, base, self.factor()?));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Sym('-') {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tok.clone() {
            Tok::Num(x) => {
                self.bump()?;
                Ok(Expr::Num(x))
            }
            Tok::Sym('(') => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let position = self.at;
                self.bump()?;
                match name.as_str() {
                    "S" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    "e" => Ok(Expr::Num(std::f64::consts::E)),
                    "pow" => {
                        self.expect('(')?;
                        let base = self.expr()?;
                        self.expect(',')?;
                        let exponent = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::binary(BinOp::Pow, base, exponent))
                    }
                    _ => match Func::from_name(&name) {
                        Some(func) => {
                            self.expect('(')?;
                            let arg = self.expr()?;
                            self.expect(')')?;
                            Ok(Expr::Call(func, Box::new(arg)))
                        }
                        None => Err(Error::UnknownIdentifier { name, position }),
                    },
                }
            }
            _ => self.syntax("a number, `S`, a function call or `(`"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax {
            position: 0,
            expected: "an expression, found empty input".into(),
        });
    }
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.syntax("an operator or end of input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(x: f64) -> Expr {
        Expr::Num(x)
    }

    #[test]
    fn identity() {
        assert_eq!(parse("S").unwrap(), Expr::Var);
    }

    #[test]
    fn grammar_exercise() {
        let want = Expr::binary(
            BinOp::Add,
            Expr::Var,
            Expr::binary(
                BinOp::Mul,
                num(0.5),
                Expr::binary(BinOp::Pow, Expr::Var, num(2.0)),
            ),
        );
        assert_eq!(parse("S + 0.5*S^2").unwrap(), want);
    }

    #[test]
    fn incomplete_expression() {
        match parse("S + ") {
            Err(Error::Syntax { position, expected }) => {
                assert_eq!(position, 4);
                assert!(expected.contains("end of input"), "{expected}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn power_is_right_associative() {
        let want = Expr::binary(
            BinOp::Pow,
            num(2.0),
            Expr::binary(BinOp::Pow, num(3.0), num(2.0)),
        );
        assert_eq!(parse("2^3^2").unwrap(), want);
    }

    #[test]
    fn unary_minus_binds_tighter_than_power() {
        let want = Expr::binary(BinOp::Pow, Expr::Neg(Box::new(Expr::Var)), num(2.0));
        assert_eq!(parse("-S^2").unwrap(), want);
        assert_eq!(
            parse("2^-1").unwrap(),
            Expr::binary(BinOp::Pow, num(2.0), Expr::Neg(Box::new(num(1.0))))
        );
    }

    #[test]
    fn constants_and_exponent_literals() {
        assert_eq!(parse("pi").unwrap(), num(std::f64::consts::PI));
        assert_eq!(parse("2*e").unwrap(), Expr::binary(BinOp::Mul, num(2.0), num(std::f64::consts::E)));
        assert_eq!(parse("1.5e-3").unwrap(), num(1.5e-3));
        assert_eq!(parse(".25").unwrap(), num(0.25));
    }

    #[test]
    fn pow_call_is_caret() {
        assert_eq!(parse("pow(S, 2)").unwrap(), parse("S^2").unwrap());
    }

    #[test]
    fn unknown_identifiers() {
        assert!(matches!(
            parse("x + 1"),
            Err(Error::UnknownIdentifier { ref name, position: 0 }) if name == "x"
        ));
        assert!(matches!(
            parse("S + tan(S)"),
            Err(Error::UnknownIdentifier { ref name, position: 4 }) if name == "tan"
        ));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "   ", "(S", "S)", "log S", "S ** 2", "1 $ 2", "exp()"] {
            assert!(matches!(parse(bad), Err(Error::Syntax { .. })), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for text in ["S + 0.5*S^2", "-log(1+S)", "exp(-S)/(1+S)^3", "sqrt(S+1)*cos(pi*S)", "1e-10*S"] {
            let e = parse(text).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}
