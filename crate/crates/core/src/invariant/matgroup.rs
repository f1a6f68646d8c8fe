use std::collections::{BTreeSet, VecDeque};

use super::forms::Mat2;
use crate::error::{Error, Result};
use crate::ff::{gf_q, Fe, Field, FieldCtx};
use crate::projline::GroupDesc;

pub fn mat_mul(f: &FieldCtx, x: &Mat2, y: &Mat2) -> Mat2 {
    [
        f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
        f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
        f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
        f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
    ]
}

pub fn mat_det(f: &FieldCtx, m: &Mat2) -> Fe {
    f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
}

const IDENT: Mat2 = [Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ONE];

/// A finite group of invertible 2×2 matrices (not modulo scalars), kept as
/// generators plus the full element list.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub field: Field,
    pub gens: Vec<Mat2>,
    pub elements: Vec<Mat2>,
}

impl MatrixGroup {
    pub fn from_gens(field: &Field, gens: Vec<Mat2>, cap: usize) -> Result<MatrixGroup> {
        for g in &gens {
            if mat_det(field, g).is_zero() {
                return Err(Error::Singular);
            }
        }
        let mut seen: BTreeSet<Mat2> = BTreeSet::from([IDENT]);
        let mut queue = VecDeque::from([IDENT]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = mat_mul(field, &x, g);
                if seen.insert(y) {
                    if seen.len() > cap {
                        return Err(Error::ClosureCap(cap));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(MatrixGroup {
            field: field.clone(),
            gens,
            elements: seen.into_iter().collect(),
        })
    }

    /// SL2(F_q) over `GF(q)`.
    pub fn sl2(q: u64) -> Result<MatrixGroup> {
        let f = gf_q(q)?;
        let gens = sl2_gens(&f);
        Self::from_gens(&f, gens, 1 << 20)
    }

    /// GL2(F_q) over `GF(q)`.
    pub fn gl2(q: u64) -> Result<MatrixGroup> {
        let f = gf_q(q)?;
        let mut gens = sl2_gens(&f);
        gens.push([f.primitive(), Fe::ZERO, Fe::ZERO, Fe::ONE]);
        Self::from_gens(&f, gens, 1 << 20)
    }

    /// Preimage in SL2 of a subgroup of PGL2: each generator is rescaled to
    /// determinant 1, and `-I` is adjoined. Fails when a determinant is not
    /// a square in the group's field.
    pub fn lift_to_sl2(g: &GroupDesc) -> Result<MatrixGroup> {
        let f = &g.field;
        let mut gens = vec![[f.neg(Fe::ONE), Fe::ZERO, Fe::ZERO, f.neg(Fe::ONE)]];
        for m in &g.elements {
            let det = m.det(f);
            let roots = crate::ff::sqrt_all(f, det);
            let r = *roots
                .first()
                .ok_or_else(|| Error::Invalid("determinant is not a square".into()))?;
            let s = f.inv(r)?;
            gens.push(m.matrix().map(|x| f.mul(x, s)));
        }
        Self::from_gens(f, gens, 1 << 20)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_closed(&self) -> bool {
        let set: BTreeSet<&Mat2> = self.elements.iter().collect();
        self.elements.iter().all(|x| {
            self.elements
                .iter()
                .all(|y| set.contains(&mat_mul(&self.field, x, y)))
        })
    }
}

fn sl2_gens(f: &FieldCtx) -> Vec<Mat2> {
    let mut gens = Vec::new();
    // unipotents over an F_p-basis of F_q
    let mut t = Fe::ONE;
    for _ in 0..f.k() {
        gens.push([Fe::ONE, t, Fe::ZERO, Fe::ONE]);
        t = f.mul(t, f.basis_gen());
    }
    gens.push([Fe::ZERO, f.neg(Fe::ONE), Fe::ONE, Fe::ZERO]);
    let g = f.primitive();
    gens.push([g, Fe::ZERO, Fe::ZERO, f.inv(g).expect("nonzero")]);
    gens
}

/// A one-dimensional character, given by its values on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Character {
    Trivial,
    /// `h -> det(h)^k`.
    DetPow(i64),
    /// Value on each generator, in generator order.
    GenValues(Vec<Fe>),
}

impl Character {
    pub fn on_gen(&self, g: &MatrixGroup, i: usize) -> Result<Fe> {
        let f = &g.field;
        Ok(match self {
            Character::Trivial => Fe::ONE,
            Character::DetPow(k) => f.pow_i(mat_det(f, &g.gens[i]), *k)?,
            Character::GenValues(v) => *v
                .get(i)
                .ok_or_else(|| Error::Invalid("character has too few values".into()))?,
        })
    }

    /// The simplest description among trivial and `det^k` matching the
    /// generator values, else the values themselves.
    pub fn simplify(g: &MatrixGroup, vals: Vec<Fe>) -> Character {
        let f = &g.field;
        if vals.iter().all(|&v| v == Fe::ONE) {
            return Character::Trivial;
        }
        for k in 1..(f.q() as i64 - 1) {
            let ok = g
                .gens
                .iter()
                .zip(&vals)
                .all(|(m, &v)| f.pow_i(mat_det(f, m), k).ok() == Some(v));
            if ok {
                return Character::DetPow(k);
            }
        }
        Character::GenValues(vals)
    }
}
