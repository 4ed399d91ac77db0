//! Recursive-descent parser for the ASCII expression grammar.
//!
//! ```text
//! sum     := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | symbol | call | '(' sum ')'
//! call    := builtin '(' sum ')' | opaque ('[' orders ']')? '(' sum (',' sum)* ')'
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::expr::{Applied, Expr, Func, Node, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown function `{name}` at byte {position}")]
    UnknownFunction { name: String, position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { position, .. } | ParseError::UnknownFunction { position, .. } => *position,
        }
    }
}

/// Parser configuration: which opaque function names are admitted.
#[derive(Debug, Clone, Default)]
pub struct Parser {
    functions: BTreeSet<String>,
}

impl Parser {
    pub fn new() -> Parser {
        Parser::default()
    }

    /// Admit `name(...)` as an opaque, unspecified function.
    pub fn with_function(mut self, name: &str) -> Parser {
        self.functions.insert(name.to_string());
        self
    }

    pub fn with_functions<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Parser {
        self.functions.extend(names.into_iter().map(str::to_string));
        self
    }

    pub fn parse(&self, text: &str) -> Result<Expr, ParseError> {
        let mut cursor = Cursor {
            src: text.as_bytes(),
            pos: 0,
            functions: &self.functions,
        };
        let e = cursor.sum()?;
        cursor.skip_ws();
        if cursor.pos < cursor.src.len() {
            return Err(cursor.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

/// Parse with builtins only; any other `name(...)` is an unknown function.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    Parser::new().parse(text)
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    functions: &'a BTreeSet<String>,
}

impl Cursor<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = vec![self.unary()?];
        loop {
            if self.eat(b'*') {
                acc.push(self.unary()?);
            } else if self.eat(b'/') {
                let den = self.unary()?;
                let num = Expr::mul(std::mem::take(&mut acc));
                acc.push(Expr::div(num, den));
            } else {
                break;
            }
        }
        Ok(Expr::mul(acc))
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let exponent = self.unary()?;
            Ok(Expr::pow(base, exponent))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let mut int_part = String::new();
        let mut frac_part = String::new();
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            int_part.push(self.src[self.pos] as char);
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                frac_part.push(self.src[self.pos] as char);
                self.pos += 1;
            }
        }
        if int_part.is_empty() && frac_part.is_empty() {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        let mut exponent: i64 = 0;
        if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
            // exponent only if digits follow; otherwise `e` is left for the caller
            let save = self.pos;
            self.pos += 1;
            let mut negative = false;
            if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                negative = self.src[self.pos] == b'-';
                self.pos += 1;
            }
            let digits_start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits_start {
                self.pos = save;
            } else {
                let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
                exponent = text.parse::<i64>().map_err(|_| self.error("exponent out of range"))?;
                if negative {
                    exponent = -exponent;
                }
            }
        }
        if self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphabetic() || self.src[self.pos] == b'_') {
            return Err(self.error("identifier may not start with a digit"));
        }
        let digits = format!("{int_part}{frac_part}");
        let mantissa: BigInt = digits.parse().unwrap_or_else(|_| BigInt::zero());
        let scale = exponent - frac_part.len() as i64;
        if scale.unsigned_abs() > 400 {
            return Err(self.error("exponent out of range"));
        }
        let ten = BigInt::from(10);
        let q = if scale >= 0 {
            Rational::from_integer(mantissa * ten.pow(scale as u32))
        } else {
            Rational::new(mantissa, ten.pow((-scale) as u32))
        };
        Ok(Expr::rational(q))
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match self.peek() {
            Some(b'(') => {
                if let Some(f) = Func::from_name(name) {
                    self.pos += 1;
                    let arg = self.sum()?;
                    self.expect(b')')?;
                    return Ok(Expr::func(f, arg));
                }
                self.opaque_call(name, start, None)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut orders = Vec::new();
                loop {
                    self.skip_ws();
                    let digits_start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if digits_start == self.pos {
                        return Err(self.error("expected derivative order"));
                    }
                    let text = std::str::from_utf8(&self.src[digits_start..self.pos]).unwrap();
                    orders.push(
                        text.parse::<u32>()
                            .map_err(|_| self.error("derivative order out of range"))?,
                    );
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.expect(b']')?;
                if self.peek() != Some(b'(') {
                    return Err(self.error("expected `(` after derivative orders"));
                }
                self.opaque_call(name, start, Some(orders))
            }
            _ => {
                if Func::from_name(name).is_some() {
                    return Err(ParseError::Syntax {
                        position: start,
                        message: format!("function `{name}` requires an argument"),
                    });
                }
                Ok(Expr::sym(name))
            }
        }
    }

    fn opaque_call(&mut self, name: &str, start: usize, orders: Option<Vec<u32>>) -> Result<Expr, ParseError> {
        if !self.functions.contains(name) {
            return Err(ParseError::UnknownFunction {
                name: name.to_string(),
                position: start,
            });
        }
        self.expect(b'(')?;
        let mut args = vec![self.sum()?];
        while self.eat(b',') {
            args.push(self.sum()?);
        }
        self.expect(b')')?;
        let orders = match orders {
            Some(o) if o.len() != args.len() => {
                return Err(ParseError::Syntax {
                    position: start,
                    message: format!(
                        "`{name}` has {} derivative orders for {} arguments",
                        o.len(),
                        args.len()
                    ),
                })
            }
            Some(o) => o,
            None => vec![0; args.len()],
        };
        Ok(Expr::from_node(Node::Apply(Applied {
            name: name.into(),
            orders,
            args,
        })))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ricca_factor_parses_to_sum_of_product() {
        let e = parse_expr("1 - kappa*r*cos(theta)").unwrap();
        match e.node() {
            Node::Add(terms) => {
                assert_eq!(terms.len(), 2);
                assert!(terms[0].is_one());
                assert!(matches!(terms[1].node(), Node::Mul(_)));
            }
            other => panic!("expected sum, got {other:?}"),
        }
        let syms: Vec<_> = e.free_symbols().into_iter().collect();
        assert_eq!(syms, ["kappa", "r", "theta"]);
    }

    #[test]
    fn zero_literal() {
        assert!(parse_expr("0").unwrap().is_zero());
    }

    #[test]
    fn quotient_node() {
        let e = parse_expr("Omega0/r").unwrap();
        assert!(matches!(e.node(), Node::Div(..)));
    }

    #[test]
    fn decimals_are_exact() {
        let e = parse_expr("0.1").unwrap();
        assert_eq!(e, Expr::ratio(1, 10));
        assert_eq!(parse_expr("1e-3").unwrap(), Expr::ratio(1, 1000));
        assert_eq!(parse_expr("2.5E2").unwrap(), Expr::int(250));
    }

    #[test]
    fn power_is_right_associative_and_binds_tighter_than_unary_minus() {
        let e = parse_expr("-2^2").unwrap();
        assert_eq!(e, -Expr::pow(Expr::int(2), Expr::int(2)));
        let e = parse_expr("a^b^c").unwrap();
        assert_eq!(e, Expr::pow(Expr::sym("a"), Expr::pow(Expr::sym("b"), Expr::sym("c"))));
        assert_eq!(parse_expr("r^-2").unwrap(), Expr::sym("r").powi(-2));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_expr("1 + * r").unwrap_err();
        assert_eq!(err.position(), 4);
        let err = parse_expr("(r + 1").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 6, .. }));
        assert!(parse_expr("r )").is_err());
        assert!(parse_expr("").is_err());
        assert!(parse_expr("2r").is_err());
    }

    #[test]
    fn unknown_function_is_rejected() {
        let err = parse_expr("tan(r)").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownFunction {
                name: "tan".into(),
                position: 0
            }
        );
    }

    #[test]
    fn opaque_functions_and_derivatives() {
        let p = Parser::new().with_function("Omega");
        let e = p.parse("Omega(r, s)^2").unwrap();
        assert_eq!(e, Expr::pow(Expr::function_of("Omega", &["r", "s"]), Expr::int(2)));
        let d = p.parse("Omega[1,0](r, s)").unwrap();
        assert_eq!(d, Expr::function_of("Omega", &["r", "s"]).differentiate("r"));
        assert!(p.parse("Omega[1](r, s)").is_err());
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse_expr(" kappa *\tr ").unwrap(), parse_expr("kappa*r").unwrap());
    }
}
