use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, CycField, CycRat};

use super::MultiPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push((col, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((col, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse { column: col, message: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
    names: &'a [String],
    params: &'a HashMap<String, CycRat>,
    field: &'a Arc<CycField>,
}

impl Parser<'_> {
    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn peek_op(&self) -> Option<char> {
        match self.toks.get(self.pos) {
            Some((_, Tok::Op(c))) => Some(*c),
            _ => None,
        }
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { column: self.col(), message: message.into() })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let col = self.col();
            let rhs = self.unary()?;
            if op == '*' {
                acc = &acc * &rhs;
            } else {
                if !rhs.is_constant() || rhs.is_zero() {
                    return Err(Error::Parse { column: col, message: "divisor must be a nonzero constant".into() });
                }
                acc = acc.scale(&rhs.constant_term().inv()?);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.toks.get(self.pos).cloned() {
            Some((col, Tok::Num(s))) => {
                self.pos += 1;
                let e: u32 = s.parse().map_err(|_| Error::Parse {
                    column: col,
                    message: format!("exponent `{s}` is not a non-negative integer"),
                })?;
                Ok(base.pow(e))
            }
            _ => self.err("expected integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let Some((col, tok)) = self.toks.get(self.pos).cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Num(s) => {
                let r = parse_rational(&s)
                    .ok_or(Error::Parse { column: col, message: format!("bad number `{s}`") })?;
                Ok(MultiPoly::constant(self.field.from_rational(r), self.nvars()))
            }
            Tok::Ident(name) => {
                if let Some(v) = self.names.iter().position(|n| *n == name) {
                    Ok(MultiPoly::var(self.field, self.nvars(), v))
                } else if let Some(c) = self.params.get(&name) {
                    Ok(MultiPoly::constant(c.clone(), self.nvars()))
                } else if name == "z" {
                    Ok(MultiPoly::constant(self.field.zeta_pow(1), self.nvars()))
                } else {
                    Err(Error::Parse { column: col, message: format!("unknown identifier `{name}`") })
                }
            }
            Tok::Op('(') => {
                let inner = self.expr()?;
                if self.peek_op() != Some(')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Tok::Op(c) => Err(Error::Parse { column: col, message: format!("unexpected `{c}`") }),
        }
    }
}

/// Parse an ASCII polynomial expression.
///
/// Accepts `+ - * / ^`, parentheses, integer and rational literals
/// (`3`, `-2/5`, `0.25`), the variable names in `names` (their position is
/// the variable index), the parameters in `params`, and `z` for the
/// primitive root of unity. Division is only allowed by nonzero constants.
/// Variable names shadow parameters, which shadow `z`.
pub fn parse_poly(
    src: &str,
    names: &[String],
    params: &HashMap<String, CycRat>,
    field: &Arc<CycField>,
) -> Result<MultiPoly> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1, names, params, field };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x1".into(), "x2".into(), "x3".into()]
    }

    #[test]
    fn parses_with_parameters() {
        let k = CycField::new(6);
        let mut params = HashMap::new();
        params.insert("q".to_string(), k.from_int(2));
        let w = parse_poly("q^6*x1^2 - q*x1*x2*x3", &names(), &params, &k).unwrap();
        let direct = parse_poly("64*x1^2 - 2*x1*x2*x3", &names(), &HashMap::new(), &k).unwrap();
        assert_eq!(w, direct);
    }

    #[test]
    fn rational_and_root_literals() {
        let k = CycField::new(3);
        let a = parse_poly("x1/2 + (z^3 - 1)*x2", &names(), &HashMap::new(), &k).unwrap();
        let b = parse_poly("0.5*x1", &names(), &HashMap::new(), &k).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_columns() {
        let k = CycField::new(2);
        let e = parse_poly("x1 + w", &names(), &HashMap::new(), &k).unwrap_err();
        assert!(matches!(e, Error::Parse { column: 6, .. }), "{e}");
        let e = parse_poly("x1 $", &names(), &HashMap::new(), &k).unwrap_err();
        assert!(matches!(e, Error::Parse { column: 4, .. }));
        let e = parse_poly("(x1", &names(), &HashMap::new(), &k).unwrap_err();
        assert!(matches!(e, Error::Parse { column: 4, .. }));
        let e = parse_poly("x1/x2", &names(), &HashMap::new(), &k).unwrap_err();
        assert!(matches!(e, Error::Parse { column: 4, .. }));
    }
}
