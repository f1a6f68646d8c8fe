use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ff::{upoly, Embedding, Fe, Field, FieldCtx, UPoly};
use crate::projline::ProjPoint;

/// Homogeneous polynomial in `x, y` of a declared degree `d`;
/// `coeffs[i]` is the coefficient of `x^i y^(d-i)`.
#[derive(Clone, Debug)]
pub struct HomPoly {
    pub field: Field,
    pub coeffs: Vec<Fe>,
}

impl PartialEq for HomPoly {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.coeffs == o.coeffs
    }
}
impl Eq for HomPoly {}

impl HomPoly {
    pub fn zero(field: &Field, d: usize) -> HomPoly {
        HomPoly {
            field: field.clone(),
            coeffs: vec![Fe::ZERO; d + 1],
        }
    }

    pub fn new(field: &Field, coeffs: Vec<Fe>) -> HomPoly {
        assert!(!coeffs.is_empty(), "degree must be declared");
        HomPoly {
            field: field.clone(),
            coeffs,
        }
    }

    /// `c x^i y^(d-i)`.
    pub fn monomial(field: &Field, d: usize, i: usize, c: Fe) -> HomPoly {
        let mut h = Self::zero(field, d);
        h.coeffs[i] = c;
        h
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> HomPoly {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    /// Homogenization of `a(z)` in degree `d >= deg a`.
    pub fn from_upoly(field: &Field, a: &[Fe], d: usize) -> HomPoly {
        let mut h = Self::zero(field, d);
        for (i, &c) in a.iter().enumerate() {
            if !c.is_zero() {
                assert!(i <= d, "polynomial degree exceeds homogenization degree");
                h.coeffs[i] = c;
            }
        }
        h
    }

    /// The linear form `a x + b y`.
    pub fn linear(field: &Field, a: Fe, b: Fe) -> HomPoly {
        Self::new(field, vec![b, a])
    }

    pub fn x(field: &Field) -> HomPoly {
        Self::linear(field, Fe::ONE, Fe::ZERO)
    }

    pub fn y(field: &Field) -> HomPoly {
        Self::linear(field, Fe::ZERO, Fe::ONE)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn f(&self) -> &FieldCtx {
        &self.field
    }

    /// Dehomogenization at `y = 1`.
    pub fn to_upoly(&self) -> UPoly {
        upoly::trimmed(self.coeffs.clone())
    }

    pub fn add(&self, o: &HomPoly) -> HomPoly {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree(), o.degree(), "adding polynomials of different degree");
        let f = self.f();
        HomPoly::new(
            &self.field,
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        )
    }

    pub fn neg(&self) -> HomPoly {
        let f = self.f();
        HomPoly::new(&self.field, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn sub(&self, o: &HomPoly) -> HomPoly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: Fe) -> HomPoly {
        let f = self.f();
        HomPoly::new(&self.field, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, o: &HomPoly) -> HomPoly {
        let f = self.f();
        let mut r = vec![Fe::ZERO; self.degree() + o.degree() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] = f.add(r[i + j], f.mul(a, b));
                }
            }
        }
        HomPoly::new(&self.field, r)
    }

    pub fn pow(&self, mut e: u64) -> HomPoly {
        let mut r = HomPoly::new(&self.field, vec![Fe::ONE]);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        r
    }

    /// Product with `a x + b y`, in O(d).
    pub fn mul_linear(&self, a: Fe, b: Fe) -> HomPoly {
        let f = self.f();
        let d = self.degree();
        let mut r = vec![Fe::ZERO; d + 2];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            r[i + 1] = f.add(r[i + 1], f.mul(c, a));
            r[i] = f.add(r[i], f.mul(c, b));
        }
        HomPoly::new(&self.field, r)
    }

    pub fn dx(&self) -> HomPoly {
        let f = self.f();
        let d = self.degree();
        if d == 0 {
            return HomPoly::zero(&self.field, 0);
        }
        HomPoly::new(
            &self.field,
            (1..=d)
                .map(|i| f.mul(f.from_i64(i as i64), self.coeffs[i]))
                .collect(),
        )
    }

    pub fn dy(&self) -> HomPoly {
        let f = self.f();
        let d = self.degree();
        if d == 0 {
            return HomPoly::zero(&self.field, 0);
        }
        HomPoly::new(
            &self.field,
            (0..d)
                .map(|i| f.mul(f.from_i64((d - i) as i64), self.coeffs[i]))
                .collect(),
        )
    }

    pub fn eval(&self, x: Fe, y: Fe) -> Fe {
        let f = self.f();
        // homogeneous Horner in x with y-powers
        let mut acc = Fe::ZERO;
        let mut ypow = Fe::ONE;
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), f.mul(c, ypow));
            ypow = f.mul(ypow, y);
        }
        // acc = sum c_i x^i y^(d-i) since y-power grows as the x-power shrinks
        acc
    }

    pub fn eval_point(&self, p: ProjPoint) -> Fe {
        let (x, y) = p.coords();
        self.eval(x, y)
    }

    /// `F(a x + b y, c x + d y)` for `m = [a, b, c, d]`.
    pub fn substitute(&self, m: [Fe; 4]) -> HomPoly {
        let d = self.degree();
        let [a, b, c, dd] = m;
        let mut r = HomPoly::new(&self.field, vec![self.coeffs[d]]);
        let mut ypow = HomPoly::new(&self.field, vec![Fe::ONE]);
        for j in (0..d).rev() {
            ypow = ypow.mul_linear(c, dd);
            r = r.mul_linear(a, b).add(&ypow.scale(self.coeffs[j]));
        }
        r
    }

    /// `F(P, Q)` for homogeneous `P, Q` of equal degree.
    pub fn compose_pair(&self, p: &HomPoly, q: &HomPoly) -> HomPoly {
        assert_eq!(p.degree(), q.degree());
        let d = self.degree();
        let mut r = HomPoly::new(&self.field, vec![self.coeffs[d]]);
        let mut qpow = HomPoly::new(&self.field, vec![Fe::ONE]);
        for j in (0..d).rev() {
            qpow = qpow.mul(q);
            r = r.mul(p).add_padded(&qpow.scale(self.coeffs[j]));
        }
        r
    }

    // add where either side may be the degree-0 zero placeholder
    fn add_padded(&self, o: &HomPoly) -> HomPoly {
        if self.degree() == o.degree() {
            return self.add(o);
        }
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        panic!("adding polynomials of different degree")
    }

    pub fn embed(&self, e: &Embedding) -> HomPoly {
        HomPoly::new(e.dst(), e.apply_all(&self.coeffs))
    }

    /// Exact division by `y^e * g(x, y)` where `g` is the homogenization of a
    /// univariate divisor of the dehomogenization.
    pub fn div_factor(&self, e: usize, g: &[Fe]) -> Result<HomPoly> {
        let dg = upoly::deg(g).unwrap_or(0);
        let d = self.degree();
        if e + dg > d {
            return Err(Error::Internal("factor degree exceeds polynomial degree".into()));
        }
        let (qt, r) = upoly::divrem(self.f(), &self.to_upoly(), g)?;
        if !r.is_empty() {
            return Err(Error::Internal("inexact division".into()));
        }
        Ok(HomPoly::from_upoly(&self.field, &qt, d - e - dg))
    }

    pub fn format(&self) -> String {
        let f = self.f();
        let d = self.degree();
        let mut s = String::new();
        for i in (0..=d).rev() {
            let c = self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            if !s.is_empty() {
                s.push_str(" + ");
            }
            let mon = match (i, d - i) {
                (0, 0) => String::new(),
                (a, 0) => pw("x", a),
                (0, b) => pw("y", b),
                (a, b) => format!("{}*{}", pw("x", a), pw("y", b)),
            };
            let cs = f.format(c);
            if mon.is_empty() {
                let _ = write!(s, "{cs}");
            } else if c == Fe::ONE {
                s.push_str(&mon);
            } else if cs.contains('+') {
                let _ = write!(s, "({cs})*{mon}");
            } else {
                let _ = write!(s, "{cs}*{mon}");
            }
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

fn pw(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

/// Univariate polynomial in `z` as text.
pub fn format_upoly(f: &FieldCtx, a: &[Fe]) -> String {
    let mut s = String::new();
    for i in (0..a.len()).rev() {
        let c = a[i];
        if c.is_zero() {
            continue;
        }
        if !s.is_empty() {
            s.push_str(" + ");
        }
        let cs = f.format(c);
        let mon = match i {
            0 => String::new(),
            1 => "z".to_string(),
            _ => format!("z^{i}"),
        };
        if mon.is_empty() {
            s.push_str(&cs);
        } else if c == Fe::ONE {
            s.push_str(&mon);
        } else if cs.contains('+') {
            let _ = write!(s, "({cs})*{mon}");
        } else {
            let _ = write!(s, "{cs}*{mon}");
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}
