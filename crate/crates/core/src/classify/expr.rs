//! Text syntax for scalars, polynomials, rational functions and maps.
//!
//! Expressions use `+ - * / ^`, parentheses, integer literals, variables and
//! `zeta(N)` for the primitive root `exp(2 pi i / N)`. Maps are written
//! `(x:y:z) -> (F0 : F1 : F2)`, `((x1:x2),(y1:y2)) -> ((A : B), (C : D))`
//! or, for de Jonquieres elements in affine form, `(x,y) -> (A, B)`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polys::{MultiPoly, RatFunc, UniPoly};
use crate::scalars::{CycNumber, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Int(BigInt),
    Var(String),
    Zeta(u32),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Arrow,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = chars[st..i].iter().collect();
            out.push(Tok::Int(t.parse().map_err(|_| perr("bad integer"))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[st..i].iter().collect()));
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Tok::Arrow);
            i += 2;
        } else if "+-*/^(),:".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(perr(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
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
            Err(perr(format!("expected '{c}' at token {}", self.pos)))
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
            if self.eat('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.bump() {
                Some(Tok::Int(n)) => i64::try_from(n).map_err(|_| perr("exponent too large"))?,
                _ => return Err(perr("expected integer exponent")),
            };
            return Ok(Ast::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Ast::Int(n)),
            Some(Tok::Ident(name)) => {
                if name == "zeta" {
                    self.expect('(')?;
                    let n = match self.bump() {
                        Some(Tok::Int(n)) => u32::try_from(n).map_err(|_| perr("zeta order too large"))?,
                        _ => return Err(perr("expected integer in zeta(N)")),
                    };
                    if n == 0 {
                        return Err(perr("zeta(0) is undefined"));
                    }
                    self.expect(')')?;
                    Ok(Ast::Zeta(n))
                } else {
                    Ok(Ast::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            other => Err(perr(format!("unexpected token {other:?}"))),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(perr(format!("trailing input at token {}", self.pos)))
        }
    }
}

pub fn parse_ast(s: &str) -> Result<Ast> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    let e = p.expr()?;
    p.done()?;
    Ok(e)
}

fn to_poly(a: &Ast) -> Result<MultiPoly> {
    Ok(match a {
        Ast::Int(n) => MultiPoly::constant(CycNumber::from_rational(&Rational::from_integer(n.clone()))),
        Ast::Var(v) => MultiPoly::var(v),
        Ast::Zeta(n) => MultiPoly::constant(CycNumber::root_of_unity(*n, 1)),
        Ast::Neg(x) => -to_poly(x)?,
        Ast::Add(x, y) => &to_poly(x)? + &to_poly(y)?,
        Ast::Sub(x, y) => &to_poly(x)? - &to_poly(y)?,
        Ast::Mul(x, y) => &to_poly(x)? * &to_poly(y)?,
        Ast::Div(x, y) => {
            let d = to_poly(y)?;
            match d.constant_value() {
                Some(c) if !c.is_zero() => to_poly(x)?.scale(&c.inv()?),
                Some(_) => return Err(perr("division by zero")),
                None => return Err(perr("division by a non-constant polynomial")),
            }
        }
        Ast::Pow(x, e) => {
            let b = to_poly(x)?;
            if *e >= 0 {
                b.pow(*e as u32)
            } else {
                match b.constant_value() {
                    Some(c) if !c.is_zero() => MultiPoly::constant(c.pow(*e)),
                    _ => return Err(perr("negative power of a non-constant")),
                }
            }
        }
    })
}

fn to_ratfunc(a: &Ast, var: &str) -> Result<RatFunc> {
    Ok(match a {
        Ast::Int(n) => RatFunc::constant(CycNumber::from_rational(&Rational::from_integer(n.clone()))),
        Ast::Var(v) if v == var => RatFunc::x(),
        Ast::Var(v) => return Err(perr(format!("unexpected variable {v}"))),
        Ast::Zeta(n) => RatFunc::constant(CycNumber::root_of_unity(*n, 1)),
        Ast::Neg(x) => -to_ratfunc(x, var)?,
        Ast::Add(x, y) => &to_ratfunc(x, var)? + &to_ratfunc(y, var)?,
        Ast::Sub(x, y) => &to_ratfunc(x, var)? - &to_ratfunc(y, var)?,
        Ast::Mul(x, y) => &to_ratfunc(x, var)? * &to_ratfunc(y, var)?,
        Ast::Div(x, y) => {
            let d = to_ratfunc(y, var)?;
            if d.is_zero() {
                return Err(perr("division by zero"));
            }
            &to_ratfunc(x, var)? / &d
        }
        Ast::Pow(x, e) => to_ratfunc(x, var)?.pow(*e).map_err(|_| perr("negative power of zero"))?,
    })
}

/// A fraction of multivariate polynomials, not reduced.
#[derive(Clone, Debug)]
pub struct Frac {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

fn to_frac(a: &Ast) -> Result<Frac> {
    let one = MultiPoly::one();
    Ok(match a {
        Ast::Div(x, y) => {
            let p = to_frac(x)?;
            let q = to_frac(y)?;
            if q.num.is_zero() {
                return Err(perr("division by zero"));
            }
            Frac {
                num: &p.num * &q.den,
                den: &p.den * &q.num,
            }
        }
        Ast::Add(x, y) | Ast::Sub(x, y) => {
            let p = to_frac(x)?;
            let q = to_frac(y)?;
            let l = &p.num * &q.den;
            let r = &q.num * &p.den;
            Frac {
                num: if matches!(a, Ast::Add(..)) { &l + &r } else { &l - &r },
                den: &p.den * &q.den,
            }
        }
        Ast::Mul(x, y) => {
            let p = to_frac(x)?;
            let q = to_frac(y)?;
            Frac {
                num: &p.num * &q.num,
                den: &p.den * &q.den,
            }
        }
        Ast::Neg(x) => {
            let p = to_frac(x)?;
            Frac { num: -p.num, den: p.den }
        }
        Ast::Pow(x, e) => {
            let p = to_frac(x)?;
            if *e >= 0 {
                Frac {
                    num: p.num.pow(*e as u32),
                    den: p.den.pow(*e as u32),
                }
            } else {
                if p.num.is_zero() {
                    return Err(perr("negative power of zero"));
                }
                Frac {
                    num: p.den.pow((-e) as u32),
                    den: p.num.pow((-e) as u32),
                }
            }
        }
        other => Frac {
            num: to_poly(other)?,
            den: one,
        },
    })
}

pub fn parse_poly(s: &str) -> Result<MultiPoly> {
    to_poly(&parse_ast(s)?)
}

pub fn parse_scalar(s: &str) -> Result<CycNumber> {
    let p = parse_poly(s)?;
    p.constant_value()
        .ok_or_else(|| perr(format!("expected a scalar, found variables in '{s}'")))
}

/// Rational function in `x`.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    to_ratfunc(&parse_ast(s)?, "x")
}

pub fn parse_unipoly(s: &str) -> Result<UniPoly> {
    parse_poly(s)?
        .to_unipoly("x")
        .map_err(|_| perr(format!("expected a polynomial in x: '{s}'")))
}

pub fn parse_frac(s: &str) -> Result<Frac> {
    to_frac(&parse_ast(s)?)
}

/// Raw parse of a map: source variable groups and target component groups.
#[derive(Clone, Debug)]
pub struct RawMap {
    pub source: Vec<Vec<String>>,
    pub target: Vec<Vec<Ast>>,
    /// Written with commas (affine form) rather than colons.
    pub affine: bool,
}

impl Parser {
    // '(' a ':' b ... ')' or '(' '(' .. ')' ',' '(' .. ')' ')' or '(' a ',' b ')'
    fn tuple_of_exprs(&mut self) -> Result<(Vec<Vec<Ast>>, bool)> {
        self.expect('(')?;
        // nested form: starts with '(' and the group ends before ','
        let save = self.pos;
        if self.peek() == Some(&Tok::Sym('(')) {
            if let Ok(g1) = self.colon_group() {
                if self.eat(',') {
                    let g2 = self.colon_group()?;
                    self.expect(')')?;
                    return Ok((vec![g1, g2], false));
                }
            }
            self.pos = save;
        }
        let first = self.expr()?;
        if self.eat(',') {
            let second = self.expr()?;
            self.expect(')')?;
            return Ok((vec![vec![first], vec![second]], true));
        }
        let mut g = vec![first];
        while self.eat(':') {
            g.push(self.expr()?);
        }
        self.expect(')')?;
        Ok((vec![g], false))
    }

    fn colon_group(&mut self) -> Result<Vec<Ast>> {
        self.expect('(')?;
        let mut g = vec![self.expr()?];
        while self.eat(':') {
            g.push(self.expr()?);
        }
        self.expect(')')?;
        if g.len() < 2 {
            return Err(perr("projective group needs at least two entries"));
        }
        Ok(g)
    }
}

pub fn parse_map_raw(s: &str) -> Result<RawMap> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    let (src, affine_src) = p.tuple_of_exprs()?;
    if p.bump() != Some(Tok::Arrow) {
        return Err(perr("expected '->'"));
    }
    let (tgt, affine_tgt) = p.tuple_of_exprs()?;
    p.done()?;
    if affine_src != affine_tgt {
        return Err(perr("source and target use different notation"));
    }
    let source = src
        .into_iter()
        .map(|g| {
            g.into_iter()
                .map(|a| match a {
                    Ast::Var(v) => Ok(v),
                    _ => Err(perr("source must list variables")),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if source.len() != tgt.len() || source.iter().zip(tgt.iter()).any(|(a, b)| a.len() != b.len()) {
        return Err(perr("source and target shapes differ"));
    }
    Ok(RawMap {
        source,
        target: tgt,
        affine: affine_src,
    })
}

/// Evaluate a target component as a polynomial after renaming variables.
pub fn ast_poly(a: &Ast, rename: &[(&str, &str)]) -> Result<MultiPoly> {
    let p = to_poly(a)?;
    for v in p.vars() {
        if !rename.iter().any(|(src, _)| src == v) {
            return Err(perr(format!("unknown variable {v}")));
        }
    }
    Ok(rename_via_temp(&p, rename))
}

pub fn ast_frac(a: &Ast, rename: &[(&str, &str)]) -> Result<Frac> {
    let f = to_frac(a)?;
    for v in f.num.vars().iter().chain(f.den.vars().iter()) {
        if !rename.iter().any(|(src, _)| src == v) {
            return Err(perr(format!("unknown variable {v}")));
        }
    }
    Ok(Frac {
        num: rename_via_temp(&f.num, rename),
        den: rename_via_temp(&f.den, rename),
    })
}

fn rename_via_temp(p: &MultiPoly, rename: &[(&str, &str)]) -> MultiPoly {
    // two steps so that swaps like x<->y are safe
    let tmp: Vec<(String, String)> = rename
        .iter()
        .enumerate()
        .map(|(i, (a, _))| (a.to_string(), format!("tmp_{i}")))
        .collect();
    let tmp_refs: Vec<(&str, &str)> = tmp.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let q = p.rename(&tmp_refs);
    let back: Vec<(String, String)> = rename
        .iter()
        .enumerate()
        .map(|(i, (_, b))| (format!("tmp_{i}"), b.to_string()))
        .collect();
    let back_refs: Vec<(&str, &str)> = back.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    q.rename(&back_refs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        for s in ["zeta(5)^2 - 3/2", "zeta(12)^5", "(1 + zeta(3))^2", "-7/3", "zeta(8) + zeta(8)^-1"] {
            let v = parse_scalar(s).unwrap();
            let w = parse_scalar(&v.to_string()).unwrap();
            assert_eq!(v, w, "{s}");
        }
    }

    #[test]
    fn poly_round_trip() {
        let p = parse_poly("x^2*y - 3*z + zeta(3)*x*y*z - (1 + zeta(4))*w").unwrap();
        assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn errors() {
        assert!(parse_poly("x +").is_err());
        assert!(parse_poly("x / y").is_err());
        assert!(parse_scalar("x").is_err());
        assert!(parse_poly("zeta(0)").is_err());
        assert!(parse_poly("x $ y").is_err());
    }

    #[test]
    fn maps() {
        let m = parse_map_raw("(x:y:z) -> (y*z : x*z : x*y)").unwrap();
        assert_eq!(m.source, vec![vec!["x", "y", "z"]]);
        let m = parse_map_raw("((x1:x2),(y1:y2)) -> ((x1:x2),(y2:y1))").unwrap();
        assert_eq!(m.target.len(), 2);
        let m = parse_map_raw("(x,y) -> (zeta(4)*x, (x*y + 1)/(y + x))").unwrap();
        assert!(m.affine);
    }

    #[test]
    fn ratfunc_parse() {
        let r = parse_ratfunc("(x^2 - 1)/(x - 1)").unwrap();
        assert_eq!(r, parse_ratfunc("x + 1").unwrap());
    }
}
