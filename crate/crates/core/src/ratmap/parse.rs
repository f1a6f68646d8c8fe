//! Recursive-descent parser for map expressions.
//!
//! Grammar (whitespace ignored, juxtaposition multiplies):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? int)?
//! atom   := int | ident | '(' expr ')'
//! ```
//!
//! Identifiers: `z` (the affine coordinate), `w` (the field generator), and in
//! homogeneous mode `x`, `y`, `u1`, `u2`.

use std::collections::BTreeMap;

use super::hompoly::HomPoly;
use super::map::RatMap;
use crate::error::{Error, Result};
use crate::ff::{upoly, Fe, Field, FieldCtx, UPoly};
use crate::invariant::fundamental_sl2_invariants;

#[derive(Clone, Debug, PartialEq)]
enum Ast {
    Int(u64),
    Var(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i64),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(c) if c == b'(' || c.is_ascii_alphanumeric()) {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat(b'-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            self.skip();
            let n = self.int()?;
            let e = i64::try_from(n).or_else(|_| self.err("exponent too large"))?;
            return Ok(Ast::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer too large"))
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Ast::Int(self.int()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                // identifiers are one letter, optionally followed by digits
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                Ok(Ast::Var(name.to_string()))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_ast(src: &str) -> Result<Ast> {
    let mut p = Parser {
        s: src.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

// rational function n/d in z
type Frac = (UPoly, UPoly);

fn frac_eval(f: &FieldCtx, a: &Ast) -> Result<Frac> {
    let one = vec![Fe::ONE];
    Ok(match a {
        Ast::Int(n) => (upoly::trimmed(vec![int_mod(f, *n)]), one),
        Ast::Var(v) => match v.as_str() {
            "z" => (upoly::x(), one),
            "w" => (upoly::trimmed(vec![f.basis_gen()]), one),
            _ => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown variable '{v}'"),
                })
            }
        },
        Ast::Neg(x) => {
            let (n, d) = frac_eval(f, x)?;
            (upoly::scale(f, &n, f.neg(Fe::ONE)), d)
        }
        Ast::Add(x, y) | Ast::Sub(x, y) => {
            let (n1, d1) = frac_eval(f, x)?;
            let (n2, d2) = frac_eval(f, y)?;
            let l = upoly::mul(f, &n1, &d2);
            let r = upoly::mul(f, &n2, &d1);
            let n = if matches!(a, Ast::Add(..)) {
                upoly::add(f, &l, &r)
            } else {
                upoly::sub(f, &l, &r)
            };
            reduce(f, n, upoly::mul(f, &d1, &d2))
        }
        Ast::Mul(x, y) => {
            let (n1, d1) = frac_eval(f, x)?;
            let (n2, d2) = frac_eval(f, y)?;
            reduce(f, upoly::mul(f, &n1, &n2), upoly::mul(f, &d1, &d2))
        }
        Ast::Div(x, y) => {
            let (n1, d1) = frac_eval(f, x)?;
            let (n2, d2) = frac_eval(f, y)?;
            if n2.is_empty() {
                return Err(Error::Invalid("division by zero".into()));
            }
            reduce(f, upoly::mul(f, &n1, &d2), upoly::mul(f, &d1, &n2))
        }
        Ast::Pow(x, e) => {
            let (n, d) = frac_eval(f, x)?;
            let (n, d) = if *e < 0 {
                if n.is_empty() {
                    return Err(Error::Invalid("division by zero".into()));
                }
                (d, n)
            } else {
                (n, d)
            };
            let e = e.unsigned_abs();
            (upoly::pow(f, &n, e), upoly::pow(f, &d, e))
        }
    })
}

fn int_mod(f: &FieldCtx, n: u64) -> Fe {
    Fe((n % f.p() as u64) as u32)
}

fn reduce(f: &FieldCtx, n: UPoly, d: UPoly) -> Frac {
    if n.is_empty() {
        return (n, vec![Fe::ONE]);
    }
    let g = upoly::gcd(f, &n, &d);
    let n = upoly::divrem(f, &n, &g).expect("nonzero gcd").0;
    let d = upoly::divrem(f, &d, &g).expect("nonzero gcd").0;
    let lc = *d.last().expect("nonzero denominator");
    let s = f.inv(lc).expect("nonzero");
    (upoly::scale(f, &n, s), upoly::scale(f, &d, s))
}

/// Parses a rational expression in `z` into a normalized map.
pub fn parse_map(field: &Field, src: &str) -> Result<RatMap> {
    let (n, d) = frac_eval(field, &parse_ast(src)?)?;
    RatMap::from_upolys(field, &n, &d)
}

/// Parses a rational expression in `z` into `(numerator, denominator)`.
pub fn parse_rational(field: &Field, src: &str) -> Result<(UPoly, UPoly)> {
    frac_eval(field, &parse_ast(src)?)
}

// bivariate polynomial as exponent pair (i of x, j of y) -> coefficient
type Biv = BTreeMap<(usize, usize), Fe>;

fn biv_add(f: &FieldCtx, a: &Biv, b: &Biv, sign: Fe) -> Biv {
    let mut r = a.clone();
    for (&k, &c) in b {
        let v = f.add(r.get(&k).copied().unwrap_or(Fe::ZERO), f.mul(c, sign));
        if v.is_zero() {
            r.remove(&k);
        } else {
            r.insert(k, v);
        }
    }
    r
}

fn biv_mul(f: &FieldCtx, a: &Biv, b: &Biv) -> Biv {
    let mut r = Biv::new();
    for (&(i1, j1), &c1) in a {
        for (&(i2, j2), &c2) in b {
            let k = (i1 + i2, j1 + j2);
            let v = f.add(r.get(&k).copied().unwrap_or(Fe::ZERO), f.mul(c1, c2));
            if v.is_zero() {
                r.remove(&k);
            } else {
                r.insert(k, v);
            }
        }
    }
    r
}

fn from_hom(h: &HomPoly) -> Biv {
    let d = h.degree();
    h.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, &c)| ((i, d - i), c))
        .collect()
}

fn biv_eval(f: &Field, a: &Ast, q: Option<u64>) -> Result<Biv> {
    let konst = |c: Fe| -> Biv {
        if c.is_zero() {
            Biv::new()
        } else {
            [((0, 0), c)].into_iter().collect()
        }
    };
    let bad = |m: String| Error::Parse { pos: 0, msg: m };
    Ok(match a {
        Ast::Int(n) => konst(int_mod(f, *n)),
        Ast::Var(v) => match v.as_str() {
            "x" => [((1, 0), Fe::ONE)].into_iter().collect(),
            "y" => [((0, 1), Fe::ONE)].into_iter().collect(),
            "w" => konst(f.basis_gen()),
            "u1" | "u2" => {
                let q = q.ok_or_else(|| bad(format!("'{v}' needs q")))?;
                let (u1, u2) = fundamental_sl2_invariants(f, q)?;
                from_hom(if v == "u1" { &u1 } else { &u2 })
            }
            _ => return Err(bad(format!("unknown variable '{v}'"))),
        },
        Ast::Neg(x) => biv_add(f, &Biv::new(), &biv_eval(f, x, q)?, f.neg(Fe::ONE)),
        Ast::Add(x, y) => biv_add(f, &biv_eval(f, x, q)?, &biv_eval(f, y, q)?, Fe::ONE),
        Ast::Sub(x, y) => biv_add(
            f,
            &biv_eval(f, x, q)?,
            &biv_eval(f, y, q)?,
            f.neg(Fe::ONE),
        ),
        Ast::Mul(x, y) => biv_mul(f, &biv_eval(f, x, q)?, &biv_eval(f, y, q)?),
        Ast::Div(x, y) => {
            let d = biv_eval(f, y, q)?;
            let c = match d.iter().next() {
                Some((&(0, 0), &c)) if d.len() == 1 => c,
                _ => return Err(bad("only division by nonzero constants".into())),
            };
            let s = f.inv(c)?;
            biv_add(f, &Biv::new(), &biv_eval(f, x, q)?, s)
        }
        Ast::Pow(x, e) => {
            if *e < 0 {
                return Err(bad("negative exponent in polynomial".into()));
            }
            let b = biv_eval(f, x, q)?;
            let mut r = konst(Fe::ONE);
            for _ in 0..*e {
                r = biv_mul(f, &r, &b);
            }
            r
        }
    })
}

/// Parses a homogeneous polynomial in `x, y` (with `u1`, `u2` the
/// fundamental invariants for `q` when given). The zero polynomial takes
/// degree `zero_degree`.
pub fn parse_hom(field: &Field, src: &str, q: Option<u64>, zero_degree: usize) -> Result<HomPoly> {
    let b = biv_eval(field, &parse_ast(src)?, q)?;
    let mut degs = b.keys().map(|&(i, j)| i + j);
    let Some(d) = degs.next() else {
        return Ok(HomPoly::zero(field, zero_degree));
    };
    if degs.any(|e| e != d) {
        return Err(Error::Invalid("polynomial is not homogeneous".into()));
    }
    let mut h = HomPoly::zero(field, d);
    for (&(i, _), &c) in &b {
        h.coeffs[i] = c;
    }
    Ok(h)
}
