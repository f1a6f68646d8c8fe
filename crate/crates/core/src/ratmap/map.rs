use serde_json::{json, Value};

use super::hompoly::{format_upoly, HomPoly};
use crate::error::{Error, Result};
use crate::ff::{upoly, Embedding, Fe, Field, FieldCtx, UPoly};
use crate::projline::{Mobius, ProjPoint};

/// An endomorphism of P^1: coprime homogeneous `[num : den]` of equal degree
/// `d >= 1`, scaled so the first nonzero coefficient of `num` then `den`,
/// read from high to low, is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMap {
    pub num: HomPoly,
    pub den: HomPoly,
}

/// Points with multiplicities.
pub type PointMults = Vec<(ProjPoint, u32)>;

impl RatMap {
    /// Removes the common factor and rescales.
    pub fn normalize(num: &HomPoly, den: &HomPoly) -> Result<RatMap> {
        if num.field != den.field {
            return Err(Error::FieldMismatch("numerator and denominator".into()));
        }
        if num.degree() != den.degree() {
            return Err(Error::DegreeMismatch(format!(
                "numerator degree {} != denominator degree {}",
                num.degree(),
                den.degree()
            )));
        }
        if num.is_zero() && den.is_zero() {
            return Err(Error::Invalid("zero pair".into()));
        }
        let f = &num.field;
        let d = num.degree();
        let n = num.to_upoly();
        let m = den.to_upoly();
        // shared power of y: y^(d - deg) divides each
        let ey = |p: &UPoly| upoly::deg(p).map(|dp| d - dp).unwrap_or(usize::MAX);
        let e = ey(&n).min(ey(&m));
        let g = upoly::gcd(f, &n, &m);
        let dg = upoly::deg(&g).unwrap_or(0);
        let nd = d as i64 - e as i64 - dg as i64;
        if nd < 1 {
            return Err(Error::DegenerateMap(nd));
        }
        let num2 = num.div_factor(e, &g)?;
        let den2 = den.div_factor(e, &g)?;
        Ok(Self::scaled(num2, den2))
    }

    fn scaled(num: HomPoly, den: HomPoly) -> RatMap {
        let lead = num
            .coeffs
            .iter()
            .rev()
            .chain(den.coeffs.iter().rev())
            .copied()
            .find(|c| !c.is_zero())
            .expect("nonzero pair");
        if lead == Fe::ONE {
            return RatMap { num, den };
        }
        let s = num.field.inv(lead).expect("nonzero");
        RatMap {
            num: num.scale(s),
            den: den.scale(s),
        }
    }

    /// `n(z) / d(z)` homogenized at degree `max(deg n, deg d)`.
    pub fn from_upolys(field: &Field, n: &[Fe], d: &[Fe]) -> Result<RatMap> {
        let dn = upoly::deg(n);
        let dd = upoly::deg(d).ok_or_else(|| Error::Invalid("zero denominator".into()))?;
        let deg = dn.unwrap_or(0).max(dd);
        Self::normalize(
            &HomPoly::from_upoly(field, n, deg),
            &HomPoly::from_upoly(field, d, deg),
        )
    }

    /// Integer coefficients, low-to-high.
    pub fn from_ints(field: &Field, n: &[i64], d: &[i64]) -> Result<RatMap> {
        let cv = |v: &[i64]| upoly::trimmed(v.iter().map(|&c| field.from_i64(c)).collect());
        Self::from_upolys(field, &cv(n), &cv(d))
    }

    pub fn field(&self) -> &Field {
        &self.num.field
    }

    pub fn degree(&self) -> usize {
        self.num.degree()
    }

    pub fn coords(&self) -> (&HomPoly, &HomPoly) {
        (&self.num, &self.den)
    }

    pub fn apply(&self, p: ProjPoint) -> ProjPoint {
        let (x, y) = p.coords();
        ProjPoint::from_coords(self.field(), self.num.eval(x, y), self.den.eval(x, y))
            .expect("morphism has no base points")
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &RatMap) -> Result<RatMap> {
        let n = self.num.compose_pair(&g.num, &g.den);
        let d = self.den.compose_pair(&g.num, &g.den);
        Self::normalize(&n, &d)
    }

    /// Unnormalized `self ∘ g`; coprime whenever both inputs are morphisms.
    pub fn compose_raw(&self, g: &RatMap) -> (HomPoly, HomPoly) {
        (
            self.num.compose_pair(&g.num, &g.den),
            self.den.compose_pair(&g.num, &g.den),
        )
    }

    pub fn iterate(&self, n: usize) -> Result<RatMap> {
        let mut r = self.clone();
        for _ in 1..n {
            r = r.compose(self)?;
        }
        Ok(r)
    }

    /// `(N∘α, D∘α)`.
    fn precompose(&self, m: &Mobius) -> (HomPoly, HomPoly) {
        (self.num.substitute(m.matrix()), self.den.substitute(m.matrix()))
    }

    /// `f^α = α^-1 ∘ f ∘ α`.
    pub fn conjugate(&self, alpha: &Mobius) -> RatMap {
        let f = self.field();
        let (n, d) = self.precompose(alpha);
        // adjugate of alpha acting on the left
        let n2 = n.scale(alpha.d).sub(&d.scale(alpha.b));
        let d2 = d.scale(alpha.a).sub(&n.scale(alpha.c));
        let _ = f;
        Self::scaled(n2, d2)
    }

    /// True when `α^-1 ∘ f ∘ α = f`, checked as proportionality of
    /// `(N∘α, D∘α)` and `(aN + bD, cN + dD)`.
    pub fn is_automorphism(&self, alpha: &Mobius) -> bool {
        let f = self.field();
        let (n1, d1) = self.precompose(alpha);
        let n2 = self.num.scale(alpha.a).add(&self.den.scale(alpha.b));
        let d2 = self.num.scale(alpha.c).add(&self.den.scale(alpha.d));
        proportional(f, &[&n1, &d1], &[&n2, &d2])
    }

    /// True when `self^α = g`.
    pub fn conjugates_to(&self, alpha: &Mobius, g: &RatMap) -> bool {
        // f ∘ α = α ∘ g
        let f = self.field();
        let (n1, d1) = self.precompose(alpha);
        let n2 = g.num.scale(alpha.a).add(&g.den.scale(alpha.b));
        let d2 = g.num.scale(alpha.c).add(&g.den.scale(alpha.d));
        proportional(f, &[&n1, &d1], &[&n2, &d2])
    }

    pub fn base_change(&self, target: &Field) -> Result<RatMap> {
        if self.field() == target {
            return Ok(self.clone());
        }
        let e = Embedding::new(self.field(), target)?;
        Ok(RatMap {
            num: self.num.embed(&e),
            den: self.den.embed(&e),
        })
    }

    /// `y N - x D`, whose roots are the fixed points.
    pub fn fixed_point_form(&self) -> HomPoly {
        let f = self.field();
        self.num
            .mul_linear(Fe::ZERO, Fe::ONE)
            .sub(&self.den.mul_linear(Fe::ONE, Fe::ZERO))
            .scale(f.one())
    }

    /// Fixed points in `search` with multiplicities.
    pub fn fixed_points(&self, search: &Field) -> Result<PointMults> {
        hom_roots(&self.fixed_point_form(), search)
    }

    /// Fixed points of the `n`-th iterate, `n` in `{1, 2}`.
    pub fn periodic_points(&self, n: usize, search: &Field) -> Result<PointMults> {
        match n {
            1 => self.fixed_points(search),
            2 => self.iterate(2)?.fixed_points(search),
            _ => Err(Error::Invalid("period must be 1 or 2".into())),
        }
    }

    /// Solutions of `f(Q) = P` in `search` with ramification multiplicities.
    pub fn preimages(&self, p: ProjPoint, search: &Field) -> Result<PointMults> {
        let m = self.base_change(search)?;
        let e = Embedding::new(self.field(), search)?;
        let _ = e;
        let (u, v) = p.coords();
        let form = m.num.scale(v).sub(&m.den.scale(u));
        hom_roots(&form, search)
    }

    /// Multiplier at a fixed point lying in the map's field.
    pub fn multiplier(&self, p: ProjPoint) -> Result<Fe> {
        if self.apply(p) != p {
            return Err(Error::NotFixed);
        }
        let f = self.field();
        let beta = match p {
            ProjPoint::Finite(t) => Mobius::translation(t),
            ProjPoint::Infinity => Mobius::reciprocal(),
        };
        let g = self.conjugate(&beta);
        // g(0) = 0, so g = (n1 z + ...)/(d0 + ...) near 0 and g'(0) = n1/d0
        let n1 = g.num.coeffs.get(1).copied().unwrap_or(Fe::ZERO);
        let d0 = g.den.coeffs[0];
        f.div(n1, d0)
    }

    /// Multipliers at every fixed point in `search`, one per unit of
    /// multiplicity.
    pub fn multiplier_spectrum(&self, search: &Field) -> Result<Vec<Fe>> {
        let g = self.base_change(search)?;
        let mut out = Vec::new();
        for (pt, m) in g.fixed_points(search)? {
            let l = g.multiplier(pt)?;
            for _ in 0..m {
                out.push(l);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Dehomogenized `(num(z), den(z))`.
    pub fn to_upolys(&self) -> (UPoly, UPoly) {
        (self.num.to_upoly(), self.den.to_upoly())
    }

    pub fn format(&self) -> String {
        let f = self.field();
        let (n, d) = self.to_upolys();
        let ns = format_upoly(f, &n);
        if d == vec![Fe::ONE] {
            return ns;
        }
        format!("({ns})/({})", format_upoly(f, &d))
    }

    pub fn to_json(&self) -> Value {
        let f = self.field();
        json!({
            "degree": self.degree(),
            "num": self.num.coeffs.iter().map(|c| c.0).collect::<Vec<_>>(),
            "den": self.den.coeffs.iter().map(|c| c.0).collect::<Vec<_>>(),
            "field": field_json(f),
            "expression": self.format(),
        })
    }
}

pub fn field_json(f: &FieldCtx) -> Value {
    json!({"p": f.p(), "k": f.k(), "modulus": f.modulus()})
}

/// True when the vectors `a` and `b` (concatenated) are nonzero multiples of
/// each other.
pub fn proportional(f: &FieldCtx, a: &[&HomPoly], b: &[&HomPoly]) -> bool {
    let av: Vec<Fe> = a.iter().flat_map(|h| h.coeffs.iter().copied()).collect();
    let bv: Vec<Fe> = b.iter().flat_map(|h| h.coeffs.iter().copied()).collect();
    if av.len() != bv.len() {
        return false;
    }
    let Some(i) = av.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    if bv[i].is_zero() {
        return false;
    }
    let s = f.div(bv[i], av[i]).expect("nonzero");
    av.iter().zip(&bv).all(|(&x, &y)| f.mul(x, s) == y)
}

/// Projective roots of a nonzero homogeneous form in `search`.
pub fn hom_roots(h: &HomPoly, search: &Field) -> Result<PointMults> {
    let h = if &h.field == search {
        h.clone()
    } else {
        h.embed(&Embedding::new(&h.field, search)?)
    };
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = h.to_upoly();
    let dp = upoly::deg(&p).unwrap_or(0);
    let mut out: PointMults = upoly::roots(search, &p)?
        .into_iter()
        .map(|(r, m)| (ProjPoint::Finite(r), m))
        .collect();
    let inf = h.degree() - dp;
    if inf > 0 {
        out.push((ProjPoint::Infinity, inf as u32));
    }
    Ok(out)
}

/// `ψ(z^q - z) + z` for `ψ = a/b`.
pub fn psi_map(field: &Field, a: &[Fe], b: &[Fe], q: u64) -> Result<RatMap> {
    let f: &FieldCtx = field;
    if upoly::deg(b).is_none() {
        return Err(Error::Invalid("psi denominator is zero".into()));
    }
    let mut w = vec![Fe::ZERO; q as usize + 1];
    w[1] = f.neg(Fe::ONE);
    w[q as usize] = f.add(w[q as usize], Fe::ONE);
    let w = upoly::trimmed(w);
    let aw = upoly::compose(f, a, &w);
    let bw = upoly::compose(f, b, &w);
    let num = upoly::add(f, &aw, &upoly::mul(f, &upoly::x(), &bw));
    RatMap::from_upolys(field, &num, &bw)
}
