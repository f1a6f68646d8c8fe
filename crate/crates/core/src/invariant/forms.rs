use crate::error::{Error, Result};
use crate::ff::{Fe, Field};
use crate::ratmap::{HomPoly, RatMap};

/// A homogeneous polynomial differential form in `x, y`. `One` is
/// `e1 dx + e2 dy` with `deg e1 = deg e2`; `Two` is `h dx∧dy`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyForm {
    One { e1: HomPoly, e2: HomPoly },
    Two { h: HomPoly },
}

/// A 2×2 matrix `[a, b, c, d]` acting by `(x, y) -> (a x + b y, c x + d y)`.
pub type Mat2 = [Fe; 4];

impl PolyForm {
    pub fn one(e1: HomPoly, e2: HomPoly) -> Result<PolyForm> {
        if e1.degree() != e2.degree() && !e1.is_zero() && !e2.is_zero() {
            return Err(Error::DegreeMismatch("1-form coefficients".into()));
        }
        let d = e1.degree().max(e2.degree());
        let pad = |h: HomPoly| if h.degree() == d { h } else { HomPoly::zero(&h.field, d) };
        Ok(PolyForm::One {
            e1: pad(e1),
            e2: pad(e2),
        })
    }

    /// `λ = y dx - x dy`.
    pub fn lambda(field: &Field) -> PolyForm {
        PolyForm::One {
            e1: HomPoly::y(field),
            e2: HomPoly::x(field).neg(),
        }
    }

    /// The exact form `dG`.
    pub fn exact(g: &HomPoly) -> PolyForm {
        PolyForm::One {
            e1: g.dx(),
            e2: g.dy(),
        }
    }

    /// Polynomial degree of the coefficients.
    pub fn degree(&self) -> usize {
        match self {
            PolyForm::One { e1, .. } => e1.degree(),
            PolyForm::Two { h } => h.degree(),
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            PolyForm::One { e1, .. } => &e1.field,
            PolyForm::Two { h } => &h.field,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            PolyForm::One { e1, e2 } => e1.is_zero() && e2.is_zero(),
            PolyForm::Two { h } => h.is_zero(),
        }
    }

    /// Exterior derivative; `d` of a 2-form in two variables is zero.
    pub fn d(&self) -> PolyForm {
        match self {
            PolyForm::One { e1, e2 } => PolyForm::Two {
                h: e2.dx().add(&e1.dy().neg()),
            },
            PolyForm::Two { h } => PolyForm::Two {
                h: HomPoly::zero(&h.field, h.degree().saturating_sub(1)),
            },
        }
    }

    pub fn add(&self, o: &PolyForm) -> Result<PolyForm> {
        match (self, o) {
            (PolyForm::One { e1, e2 }, PolyForm::One { e1: f1, e2: f2 }) => {
                PolyForm::one(e1.add(f1), e2.add(f2))
            }
            (PolyForm::Two { h }, PolyForm::Two { h: g }) => Ok(PolyForm::Two { h: h.add(g) }),
            _ => Err(Error::Invalid("adding forms of different rank".into())),
        }
    }

    /// Product with a homogeneous polynomial.
    pub fn mul_poly(&self, g: &HomPoly) -> PolyForm {
        match self {
            PolyForm::One { e1, e2 } => PolyForm::One {
                e1: e1.mul(g),
                e2: e2.mul(g),
            },
            PolyForm::Two { h } => PolyForm::Two { h: h.mul(g) },
        }
    }

    /// `M^* ω`.
    pub fn pullback(&self, m: &Mat2) -> PolyForm {
        let f = self.field();
        let [a, b, c, d] = *m;
        match self {
            PolyForm::One { e1, e2 } => {
                let s1 = e1.substitute(*m);
                let s2 = e2.substitute(*m);
                PolyForm::One {
                    e1: s1.scale(a).add(&s2.scale(c)),
                    e2: s1.scale(b).add(&s2.scale(d)),
                }
            }
            PolyForm::Two { h } => PolyForm::Two {
                h: h.substitute(*m).scale(f.sub(f.mul(a, d), f.mul(b, c))),
            },
        }
    }

    /// Flat coefficient vector, for proportionality tests.
    pub fn coeff_vec(&self) -> Vec<Fe> {
        match self {
            PolyForm::One { e1, e2 } => e1.coeffs.iter().chain(&e2.coeffs).copied().collect(),
            PolyForm::Two { h } => h.coeffs.clone(),
        }
    }

    pub fn format(&self) -> String {
        match self {
            PolyForm::One { e1, e2 } => format!("({}) dx + ({}) dy", e1.format(), e2.format()),
            PolyForm::Two { h } => format!("({}) dx^dy", h.format()),
        }
    }
}

/// `F λ + dG`.
pub fn assemble_form(f: &HomPoly, g: &HomPoly) -> Result<PolyForm> {
    let lam = PolyForm::lambda(&g.field).mul_poly(f);
    lam.add(&PolyForm::exact(g))
}

/// Splits a 1-form `θ` of degree `n` as `F λ + dG` with
/// `F = -h / (n+1)` where `dθ = h dx∧dy`, and `G = (x η1 + y η2) / (n+1)`
/// for the closed remainder `η = θ - F λ`. Requires `n ≢ -1 (mod p)`.
pub fn decompose_form(theta: &PolyForm) -> Result<(HomPoly, HomPoly)> {
    let PolyForm::One { e1, .. } = theta else {
        return Err(Error::Invalid("decompose_form expects a 1-form".into()));
    };
    let fld = e1.field.clone();
    let n = theta.degree();
    let p = fld.p() as usize;
    if (n + 1) % p == 0 {
        return Err(Error::DegreeMinusOne { n, p: p as u32 });
    }
    let inv = fld.inv(fld.from_i64(n as i64 + 1))?;
    let PolyForm::Two { h } = theta.d() else {
        unreachable!()
    };
    let big_f = h.scale(fld.neg(inv));
    let big_f = if n == 0 { HomPoly::zero(&fld, 0) } else { big_f };
    let lam = PolyForm::lambda(&fld).mul_poly(&big_f);
    let eta = theta.add(&PolyForm::One {
        e1: lam_coeff(&lam, 0).neg(),
        e2: lam_coeff(&lam, 1).neg(),
    })?;
    let PolyForm::One { e1: n1, e2: n2 } = &eta else {
        unreachable!()
    };
    let g = n1
        .mul_linear(Fe::ONE, Fe::ZERO)
        .add(&n2.mul_linear(Fe::ZERO, Fe::ONE))
        .scale(inv);
    let g = if g.is_zero() { HomPoly::zero(&fld, n + 1) } else { g };
    let back = assemble_form(&big_f, &g)?;
    if back.coeff_vec() != theta.coeff_vec() {
        return Err(Error::Internal("decomposition does not reconstruct the form".into()));
    }
    Ok((big_f, g))
}

fn lam_coeff(l: &PolyForm, i: usize) -> HomPoly {
    match l {
        PolyForm::One { e1, e2 } => {
            if i == 0 {
                e1.clone()
            } else {
                e2.clone()
            }
        }
        PolyForm::Two { .. } => unreachable!(),
    }
}

/// `ω_Φ = Φ2 dx - Φ1 dy` for the lift `Φ = (num, den)`.
pub fn form_from_map(f: &RatMap) -> PolyForm {
    PolyForm::One {
        e1: f.den.clone(),
        e2: f.num.neg(),
    }
}

/// `r(ω) = [-f2 : f1]` for `ω = f1 dx + f2 dy`.
pub fn map_from_form(w: &PolyForm) -> Result<RatMap> {
    match w {
        PolyForm::One { e1, e2 } => {
            if e1.is_zero() && e2.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            RatMap::normalize(&e2.neg(), e1)
        }
        PolyForm::Two { .. } => Err(Error::Invalid("expected a 1-form".into())),
    }
}

/// `[x F + ∂G/∂y : y F - ∂G/∂x]`, before removing common factors.
pub fn dm_pair(f: &HomPoly, g: &HomPoly) -> Result<(HomPoly, HomPoly)> {
    if !f.is_zero() && f.degree() + 2 != g.degree() {
        return Err(Error::DegreeMismatch(format!(
            "deg F + 2 = {} but deg G = {}",
            f.degree() + 2,
            g.degree()
        )));
    }
    if g.degree() == 0 {
        return Err(Error::DegreeMismatch("deg G must be at least 1".into()));
    }
    let xf = f.mul_linear(Fe::ONE, Fe::ZERO);
    let yf = f.mul_linear(Fe::ZERO, Fe::ONE);
    let n = xf.add(&g.dy());
    let d = yf.add(&g.dx().neg());
    Ok((n, d))
}

/// The Doyle-McMullen map of the pair `(F, G)`, normalized. Its degree may
/// fall below `deg G - 1` when the coordinates share a factor.
pub fn dm_map(f: &HomPoly, g: &HomPoly) -> Result<RatMap> {
    let (n, d) = dm_pair(f, g)?;
    if n.is_zero() || d.is_zero() {
        return Err(Error::Invalid("coordinate vanishes identically".into()));
    }
    RatMap::normalize(&n, &d)
}
