//! Infix parser for polynomial expressions.
//!
//! ```text
//! expr    = term , { ("+" | "-") , term } ;
//! term    = unary , { ("*" | "/") , unary } ;
//! unary   = "-" , unary | "+" , unary | power ;
//! power   = primary , [ "^" , integer ] ;
//! primary = number | coordinate | "(" , expr , ")" ;
//! number  = digits , [ "." , digits ] ;
//! ```
//!
//! Division is only allowed by a nonzero constant, so `p/q` literals and
//! `-y/2` both parse to exact rational coefficients.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, Rational};
use crate::symexpr::Expr;

/// Ordered coordinate names of a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinates {
    names: Vec<String>,
}

impl Coordinates {
    pub fn new(names: Vec<String>) -> Result<Self> {
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Spec(format!("invalid coordinate name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Spec(format!("duplicate coordinate name `{n}`")));
            }
        }
        Ok(Coordinates { names })
    }

    /// `x1, …, xd`.
    pub fn numbered(dim: usize) -> Self {
        Coordinates { names: (1..=dim).map(|i| format!("x{i}")).collect() }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        let tokens = tokenize(text)?;
        let mut p = Parser { coords: self, tokens, pos: 0, end: text.len() };
        let e = p.expr()?;
        match p.peek() {
            None => Ok(e),
            Some(t) => Err(Error::Syntax {
                position: t.pos,
                message: format!("unexpected `{}`", t.kind.text()),
            }),
        }
    }

    pub fn print(&self, e: &Expr) -> String {
        e.display(&self.names).to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Number(String),
    Ident(String),
    Op(char),
}

impl Kind {
    fn text(&self) -> String {
        match self {
            Kind::Number(s) | Kind::Ident(s) => s.clone(),
            Kind::Op(c) => c.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            out.push(Token { kind: Kind::Number(text[start..i].to_string()), pos: start });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { kind: Kind::Ident(text[start..i].to_string()), pos: start });
        } else if "+-*/^()".contains(c) {
            out.push(Token { kind: Kind::Op(c), pos: i });
            i += 1;
        } else {
            return Err(Error::Syntax { position: i, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    coords: &'a Coordinates,
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if matches!(self.peek(), Some(Token { kind: Kind::Op(c), .. }) if *c == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat_op('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat_op('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_op('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat_op('/') {
                let at = self.here();
                let divisor = self.unary()?;
                match divisor.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::from_integer(1.into()) / c)),
                    Some(_) => {
                        return Err(Error::Syntax { position: at, message: "division by zero".into() })
                    }
                    None => {
                        return Err(Error::Syntax {
                            position: at,
                            message: "division by a non-constant expression".into(),
                        })
                    }
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let at = self.here();
        match self.peek().cloned() {
            Some(Token { kind: Kind::Number(s), .. }) => {
                let k: u32 = s.parse().map_err(|_| Error::Syntax {
                    position: at,
                    message: format!("exponent `{s}` is not a nonnegative integer"),
                })?;
                self.pos += 1;
                Ok(base.pow(k))
            }
            _ => Err(Error::Syntax { position: at, message: "expected integer exponent".into() }),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let n = self.coords.dim();
        let at = self.here();
        let tok = self.peek().cloned().ok_or(Error::Syntax {
            position: at,
            message: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        match tok.kind {
            Kind::Number(s) => {
                let q = parse_rational(&s).ok_or(Error::Syntax {
                    position: tok.pos,
                    message: format!("malformed number `{s}`"),
                })?;
                Ok(Expr::constant(n, q))
            }
            Kind::Ident(name) => match self.coords.index_of(&name) {
                Some(i) => Ok(Expr::var(n, i)),
                None => Err(Error::UnknownVariable { name, position: tok.pos }),
            },
            Kind::Op('(') => {
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Syntax { position: self.here(), message: "expected `)`".into() });
                }
                Ok(e)
            }
            Kind::Op(c) => Err(Error::Syntax { position: tok.pos, message: format!("unexpected `{c}`") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::symexpr::Monomial;

    fn xyz() -> Coordinates {
        Coordinates::new(vec!["x".into(), "y".into(), "z".into()]).unwrap()
    }

    #[test]
    fn parses_zero_and_cancellation() {
        let c = xyz();
        assert!(c.parse("0").unwrap().is_zero());
        assert!(c.parse("x*y - y*x").unwrap().is_zero());
    }

    #[test]
    fn rational_coefficient() {
        let e = xyz().parse("-y/2").unwrap();
        assert_eq!(e.num_terms(), 1);
        assert_eq!(e.coefficient(&Monomial::var(3, 1)), rat(-1, 2));
    }

    #[test]
    fn precedence_and_powers() {
        let c = xyz();
        assert_eq!(c.parse("-x^2").unwrap(), c.parse("-(x*x)").unwrap());
        assert_eq!(c.parse("2*(x+1)^2").unwrap(), c.parse("2*x^2 + 4*x + 2").unwrap());
        assert_eq!(c.parse("1/3 + 0.5").unwrap().as_constant(), Some(rat(5, 6)));
        assert_eq!(c.parse("x^0").unwrap().as_constant(), Some(int(1)));
    }

    #[test]
    fn reports_positions() {
        let c = xyz();
        assert_eq!(
            c.parse("x + w"),
            Err(Error::UnknownVariable { name: "w".into(), position: 4 })
        );
        assert!(matches!(c.parse("x + * y"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(c.parse("(x + y"), Err(Error::Syntax { position: 6, .. })));
        assert!(matches!(c.parse("x / y"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(c.parse("x ^ y"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(c.parse("x $"), Err(Error::Syntax { position: 2, .. })));
    }

    #[test]
    fn print_round_trip() {
        let c = xyz();
        let e = c.parse("-y/2 + 3*x^2*z - 7/4 + x").unwrap();
        let printed = c.print(&e);
        assert_eq!(c.parse(&printed).unwrap(), e);
        assert_eq!(printed, "3*x^2*z + x - 1/2*y - 7/4");
    }

    #[test]
    fn rejects_bad_names() {
        assert!(Coordinates::new(vec!["x".into(), "x".into()]).is_err());
        assert!(Coordinates::new(vec!["1x".into()]).is_err());
    }
}
