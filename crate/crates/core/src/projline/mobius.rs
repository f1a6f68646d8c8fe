use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Embedding, Fe, FieldCtx};

/// A point of P^1. `Finite(x)` is `[x : 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum ProjPoint {
    Finite(Fe),
    Infinity,
}

impl ProjPoint {
    /// Canonical point for homogeneous coordinates `[x : y]`.
    pub fn from_coords(f: &FieldCtx, x: Fe, y: Fe) -> Result<ProjPoint> {
        if y.is_zero() {
            if x.is_zero() {
                return Err(Error::Invalid("[0 : 0] is not a point".into()));
            }
            return Ok(ProjPoint::Infinity);
        }
        Ok(ProjPoint::Finite(f.div(x, y)?))
    }

    pub fn coords(self) -> (Fe, Fe) {
        match self {
            ProjPoint::Finite(x) => (x, Fe::ONE),
            ProjPoint::Infinity => (Fe::ONE, Fe::ZERO),
        }
    }

    pub fn embed(self, e: &Embedding) -> ProjPoint {
        match self {
            ProjPoint::Finite(x) => ProjPoint::Finite(e.apply(x)),
            ProjPoint::Infinity => ProjPoint::Infinity,
        }
    }

    pub fn format(self, f: &FieldCtx) -> String {
        match self {
            ProjPoint::Finite(x) => f.format(x),
            ProjPoint::Infinity => "inf".into(),
        }
    }
}

/// An element of PGL2, `z -> (a z + b) / (c z + d)`, scaled so that the first
/// nonzero entry of `(a, b, c, d)` is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Mobius {
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?} {:?}; {:?} {:?}]", self.a, self.b, self.c, self.d)
    }
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: Fe::ONE,
        b: Fe::ZERO,
        c: Fe::ZERO,
        d: Fe::ONE,
    };

    pub fn new(f: &FieldCtx, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<Mobius> {
        if f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self::canonical(f, [a, b, c, d]))
    }

    /// Canonical form of a matrix known to be invertible.
    pub fn canonical(f: &FieldCtx, m: [Fe; 4]) -> Mobius {
        let lead = m.iter().copied().find(|x| !x.is_zero()).expect("nonzero matrix");
        let s = f.inv(lead).expect("nonzero");
        Mobius {
            a: f.mul(m[0], s),
            b: f.mul(m[1], s),
            c: f.mul(m[2], s),
            d: f.mul(m[3], s),
        }
    }

    pub fn from_ints(f: &FieldCtx, a: i64, b: i64, c: i64, d: i64) -> Result<Mobius> {
        Self::new(f, f.from_i64(a), f.from_i64(b), f.from_i64(c), f.from_i64(d))
    }

    pub fn matrix(&self) -> [Fe; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self, f: &FieldCtx) -> Fe {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// `[a x + b y : c x + d y]`.
    pub fn apply(&self, f: &FieldCtx, p: ProjPoint) -> ProjPoint {
        let (x, y) = p.coords();
        let nx = f.add(f.mul(self.a, x), f.mul(self.b, y));
        let ny = f.add(f.mul(self.c, x), f.mul(self.d, y));
        ProjPoint::from_coords(f, nx, ny).expect("invertible matrix")
    }

    /// `self ∘ other`.
    pub fn compose(&self, f: &FieldCtx, o: &Mobius) -> Mobius {
        let m = [
            f.add(f.mul(self.a, o.a), f.mul(self.b, o.c)),
            f.add(f.mul(self.a, o.b), f.mul(self.b, o.d)),
            f.add(f.mul(self.c, o.a), f.mul(self.d, o.c)),
            f.add(f.mul(self.c, o.b), f.mul(self.d, o.d)),
        ];
        Self::canonical(f, m)
    }

    pub fn inverse(&self, f: &FieldCtx) -> Mobius {
        Self::canonical(f, [self.d, f.neg(self.b), f.neg(self.c), self.a])
    }

    /// `g^-1 ∘ self ∘ g`.
    pub fn conjugate_by(&self, f: &FieldCtx, g: &Mobius) -> Mobius {
        g.inverse(f).compose(f, &self.compose(f, g))
    }

    /// Order in PGL2 (elements of finite groups always have finite order).
    pub fn order(&self, f: &FieldCtx) -> u64 {
        let mut cur = *self;
        let mut n = 1;
        while !cur.is_identity() {
            cur = cur.compose(f, self);
            n += 1;
            if n > 4 * f.q() as u64 * f.q() as u64 + 8 {
                panic!("element of infinite order");
            }
        }
        n
    }

    /// Fixed points lying in the field.
    pub fn fixed_points(&self, f: &FieldCtx) -> Vec<ProjPoint> {
        // c z^2 + (d - a) z - b = 0, plus infinity when c = 0
        let mut out = Vec::new();
        if self.c.is_zero() {
            out.push(ProjPoint::Infinity);
        }
        let poly = crate::ff::upoly::trimmed(vec![f.neg(self.b), f.sub(self.d, self.a), self.c]);
        if poly.is_empty() {
            // identity: everything is fixed, report none
            return Vec::new();
        }
        if let Ok(rs) = crate::ff::upoly::distinct_roots(f, &poly) {
            out.extend(rs.into_iter().map(ProjPoint::Finite));
        }
        out.sort();
        out
    }

    pub fn embed(&self, e: &Embedding) -> Mobius {
        let f = e.dst();
        Self::canonical(
            f,
            [e.apply(self.a), e.apply(self.b), e.apply(self.c), e.apply(self.d)],
        )
    }

    /// Entries when every entry lies in the subfield GF(p^j).
    pub fn in_subfield(&self, f: &FieldCtx, j: u32) -> bool {
        self.matrix().iter().all(|&x| f.in_subfield(x, j))
    }

    pub fn translation(b: Fe) -> Mobius {
        Mobius {
            a: Fe::ONE,
            b,
            c: Fe::ZERO,
            d: Fe::ONE,
        }
    }

    pub fn scaling(f: &FieldCtx, a: Fe) -> Mobius {
        Self::canonical(f, [a, Fe::ZERO, Fe::ZERO, Fe::ONE])
    }

    pub fn affine(f: &FieldCtx, a: Fe, b: Fe) -> Mobius {
        Self::canonical(f, [a, b, Fe::ZERO, Fe::ONE])
    }

    pub fn reciprocal() -> Mobius {
        Mobius {
            a: Fe::ZERO,
            b: Fe::ONE,
            c: Fe::ONE,
            d: Fe::ZERO,
        }
    }

    pub fn format(&self, f: &FieldCtx) -> String {
        format!(
            "[{} {}; {} {}]",
            f.format(self.a),
            f.format(self.b),
            f.format(self.c),
            f.format(self.d)
        )
    }
}

// Sends (p1, p2, p3) to (0, 1, inf).
fn to_standard(f: &FieldCtx, p: [ProjPoint; 3]) -> Result<Mobius> {
    // column form: z -> [(z - p1)(p2 - p3) : (z - p3)(p2 - p1)] in coordinates
    let (x1, y1) = p[0].coords();
    let (x2, y2) = p[1].coords();
    let (x3, y3) = p[2].coords();
    // linear forms vanishing at p1 and p3: L1(z) = y1 x - x1 y, L3(z) = y3 x - x3 y
    let l1_at_2 = f.sub(f.mul(y1, x2), f.mul(x1, y2));
    let l3_at_2 = f.sub(f.mul(y3, x2), f.mul(x3, y2));
    // M = [l3(p2) * L1 ; l1(p2) * L3]
    let m = [
        f.mul(l3_at_2, y1),
        f.neg(f.mul(l3_at_2, x1)),
        f.mul(l1_at_2, y3),
        f.neg(f.mul(l1_at_2, x3)),
    ];
    Mobius::new(f, m[0], m[1], m[2], m[3])
}

/// The unique element sending `src[i]` to `dst[i]`.
pub fn mobius_from_three_points(
    f: &FieldCtx,
    src: [ProjPoint; 3],
    dst: [ProjPoint; 3],
) -> Result<Mobius> {
    for t in [&src, &dst] {
        if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] {
            return Err(Error::RepeatedPoint);
        }
    }
    let a = to_standard(f, src)?;
    let b = to_standard(f, dst)?;
    Ok(b.inverse(f).compose(f, &a))
}
