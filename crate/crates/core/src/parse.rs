//! Text syntax for scalars, solver polynomials and algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | ident | '(' expr ')' | '(' expr expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! `(A B)` and `[A, B]` are algebra products; `*` between two elements is
//! accepted as a product as well.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::freealg::Element;
use crate::scalars::{Indeterminate, ParamPoly, RatPoly, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(text.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()[],".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(BigInt),
    Ident(usize, String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Star(Box<Ast>, Box<Ast>),
    Div(usize, Box<Ast>, Box<Ast>),
    Pow(usize, Box<Ast>, u32),
    Product(Box<Ast>, Box<Ast>),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            let at = self.offset();
            if self.eat('*') {
                lhs = Ast::Star(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Ast::Div(at, Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat('-') {
            Ok(Ast::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        let at = self.offset();
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| Error::Parse {
                        pos: at,
                        msg: "exponent too large".into(),
                    })?;
                    Ok(Ast::Pow(at, Box::new(base), e))
                }
                _ => self.err("expected an integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Ast> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Ast::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Ast::Ident(at, s))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let a = self.expr()?;
                if self.eat(')') {
                    return Ok(a);
                }
                let b = self.expr()?;
                self.expect(')')?;
                Ok(Ast::Product(Box::new(a), Box::new(b)))
            }
            Some(Tok::Sym('[')) => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(Ast::Product(Box::new(a), Box::new(b)))
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_ast(s: &str) -> Result<Ast> {
    let toks = tokenize(s)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: s.len(),
    };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(ast)
}

/// Index of `t<i>` (1-based in text, 0-based result).
fn transcendental_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('t')?;
    let i: usize = digits.parse().ok()?;
    (i >= 1 && !digits.starts_with('0')).then(|| i - 1)
}

fn generator_index(name: &str, prefix: char) -> Option<usize> {
    let digits = name.strip_prefix(prefix)?;
    let i: usize = digits.parse().ok()?;
    (i >= 1 && !digits.starts_with('0')).then(|| i - 1)
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

fn int_scalar(n: &BigInt) -> Scalar {
    Scalar::from_rational(BigRational::from_integer(n.clone()))
}

fn eval_scalar(ast: &Ast) -> Result<Scalar> {
    Ok(match ast {
        Ast::Num(n) => int_scalar(n),
        Ast::Ident(pos, name) => match transcendental_index(name) {
            Some(i) => Scalar::from_poly(RatPoly::var(i)),
            None => return perr(*pos, format!("unknown symbol `{name}` in a scalar")),
        },
        Ast::Neg(a) => -eval_scalar(a)?,
        Ast::Add(a, b) => eval_scalar(a)? + eval_scalar(b)?,
        Ast::Sub(a, b) => eval_scalar(a)? - eval_scalar(b)?,
        Ast::Star(a, b) => eval_scalar(a)? * eval_scalar(b)?,
        Ast::Div(pos, a, b) => {
            let d = eval_scalar(b)?;
            if d.is_zero() {
                return perr(*pos, "division by zero");
            }
            eval_scalar(a)?.div(&d)?
        }
        Ast::Pow(_, a, e) => eval_scalar(a)?.pow(*e as i32)?,
        Ast::Product(..) => return perr(0, "algebra product in a scalar"),
    })
}

/// Parses a Scalar such as `(t1*t2 - 1)/(t1 + 1)`.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    eval_scalar(&parse_ast(s)?)
}

fn eval_param(ast: &Ast) -> Result<ParamPoly> {
    Ok(match ast {
        Ast::Num(n) => ParamPoly::constant(int_scalar(n)),
        Ast::Ident(_, name) => match transcendental_index(name) {
            Some(i) => ParamPoly::constant(Scalar::from_poly(RatPoly::var(i))),
            None => ParamPoly::var(&Indeterminate::new(name)),
        },
        Ast::Neg(a) => eval_param(a)?.neg(),
        Ast::Add(a, b) => eval_param(a)?.add(&eval_param(b)?),
        Ast::Sub(a, b) => eval_param(a)?.sub(&eval_param(b)?),
        Ast::Star(a, b) | Ast::Product(a, b) => eval_param(a)?.mul(&eval_param(b)?),
        Ast::Div(pos, a, b) => match eval_param(b)?.as_constant() {
            Some(d) if !d.is_zero() => eval_param(a)?.scale(&d.inv()?),
            Some(_) => return perr(*pos, "division by zero"),
            None => return perr(*pos, "division by a non-constant polynomial"),
        },
        Ast::Pow(_, a, e) => eval_param(a)?.pow(*e),
    })
}

/// Parses a polynomial in solver indeterminates with coefficients in `k`,
/// e.g. `(t2 + 1)*a11*a12 - t1*rho`. Names `t<i>` denote transcendentals.
pub fn parse_param_poly(s: &str) -> Result<ParamPoly> {
    eval_param(&parse_ast(s)?)
}

enum Val {
    S(Scalar),
    E(Element<Scalar>),
}

impl Val {
    fn into_elem(self, pos: usize) -> Result<Element<Scalar>> {
        match self {
            Val::E(e) => Ok(e),
            Val::S(s) if s.is_zero() => Ok(Element::zero()),
            Val::S(_) => perr(pos, "scalar where an algebra element is expected"),
        }
    }
}

fn eval_elem(ast: &Ast, prefix: char) -> Result<Val> {
    Ok(match ast {
        Ast::Num(n) => Val::S(int_scalar(n)),
        Ast::Ident(pos, name) => {
            if let Some(i) = transcendental_index(name) {
                Val::S(Scalar::from_poly(RatPoly::var(i)))
            } else if let Some(g) = generator_index(name, prefix) {
                Val::E(Element::generator(g))
            } else {
                return perr(*pos, format!("unknown symbol `{name}`"));
            }
        }
        Ast::Neg(a) => match eval_elem(a, prefix)? {
            Val::S(s) => Val::S(-s),
            Val::E(e) => Val::E(e.neg()),
        },
        Ast::Add(a, b) | Ast::Sub(a, b) => {
            let sub = matches!(ast, Ast::Sub(..));
            match (eval_elem(a, prefix)?, eval_elem(b, prefix)?) {
                (Val::S(x), Val::S(y)) => Val::S(if sub { x - y } else { x + y }),
                (x, y) => {
                    let (x, y) = (x.into_elem(0)?, y.into_elem(0)?);
                    Val::E(if sub { x.sub(&y) } else { x.add(&y) })
                }
            }
        }
        Ast::Star(a, b) => match (eval_elem(a, prefix)?, eval_elem(b, prefix)?) {
            (Val::S(x), Val::S(y)) => Val::S(x * y),
            (Val::S(x), Val::E(e)) | (Val::E(e), Val::S(x)) => Val::E(e.scale(&x)),
            (Val::E(x), Val::E(y)) => Val::E(x.mul(&y)),
        },
        Ast::Product(a, b) => {
            let x = eval_elem(a, prefix)?;
            let y = eval_elem(b, prefix)?;
            match (x, y) {
                (Val::E(x), Val::E(y)) => Val::E(x.mul(&y)),
                (Val::S(x), Val::E(e)) | (Val::E(e), Val::S(x)) => Val::E(e.scale(&x)),
                (Val::S(x), Val::S(y)) => Val::S(x * y),
            }
        }
        Ast::Div(pos, a, b) => {
            let d = match eval_elem(b, prefix)? {
                Val::S(d) if !d.is_zero() => d.inv()?,
                Val::S(_) => return perr(*pos, "division by zero"),
                Val::E(_) => return perr(*pos, "division by an algebra element"),
            };
            match eval_elem(a, prefix)? {
                Val::S(s) => Val::S(s * d),
                Val::E(e) => Val::E(e.scale(&d)),
            }
        }
        Ast::Pow(pos, a, e) => match eval_elem(a, prefix)? {
            Val::S(s) => Val::S(s.pow(*e as i32)?),
            Val::E(_) => return perr(*pos, "powers of algebra elements are ambiguous; write the tree"),
        },
    })
}

fn parse_element_with(s: &str, prefix: char) -> Result<Element<Scalar>> {
    eval_elem(&parse_ast(s)?, prefix)?.into_elem(0)
}

/// Parses an element over generators `x1, x2, ...`, e.g. `t1 * (x1 x2) + (x2 x1)`.
pub fn parse_element(s: &str) -> Result<Element<Scalar>> {
    parse_element_with(s, 'x')
}

/// Parses an identity over variables `y1, y2, ...` (indices become 0-based
/// generator slots).
pub fn parse_identity(s: &str) -> Result<Element<Scalar>> {
    parse_element_with(s, 'y')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("1/t1").unwrap().to_string(), "1/t1");
        assert_eq!(
            parse_scalar("(t1*t2 - 1)/(t1 + 1)").unwrap().to_string(),
            "(t1*t2 - 1)/(t1 + 1)"
        );
        assert_eq!(parse_scalar("-3/6").unwrap().to_string(), "-1/2");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x1").is_err());
    }

    #[test]
    fn elements() {
        let e = parse_element("t1 * (x1 x2) + (x2 x1)").unwrap();
        assert_eq!(e.to_string(), "t1 * (x1 x2) + (x2 x1)");
        let b = parse_element("[x1, [x1, x2]]").unwrap();
        assert_eq!(b.to_string(), "(x1 (x1 x2))");
        assert_eq!(parse_element("0").unwrap(), Element::zero());
        assert!(parse_element("x1 + 1").is_err());
        assert!(parse_element("(x1 x2").is_err());
    }

    #[test]
    fn element_round_trip() {
        let e = parse_element("-2 * ((x1 x2) x1) + (t1 + 1)/t2 * (x2 (x2 x2)) - x1").unwrap();
        assert_eq!(parse_element(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn param_polys() {
        let p = parse_param_poly("(t2 + 1)*a11*a12").unwrap();
        assert_eq!(p.to_string(), "(t2 + 1)*a11*a12");
        assert!(parse_param_poly("rho/a11").is_err());
    }
}
