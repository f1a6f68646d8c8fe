//! Relative invariants of finite matrix groups in two variables,
//! polynomial differential forms, and the Doyle-McMullen construction.

mod forms;
mod matgroup;

pub use forms::{
    assemble_form, decompose_form, dm_map, dm_pair, form_from_map, map_from_form, Mat2, PolyForm,
};
pub use matgroup::{mat_det, mat_mul, Character, MatrixGroup};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ff::{linalg, prime_power, Fe, Field, FieldCtx};
use crate::ratmap::HomPoly;

/// Objects with a right action of 2×2 matrices by pullback.
pub trait Pullback: Clone {
    fn pullback_by(&self, m: &Mat2) -> Self;
    fn coeff_vec(&self) -> Vec<Fe>;
}

impl Pullback for HomPoly {
    fn pullback_by(&self, m: &Mat2) -> Self {
        self.substitute(*m)
    }
    fn coeff_vec(&self) -> Vec<Fe> {
        self.coeffs.clone()
    }
}

impl Pullback for PolyForm {
    fn pullback_by(&self, m: &Mat2) -> Self {
        self.pullback(m)
    }
    fn coeff_vec(&self) -> Vec<Fe> {
        PolyForm::coeff_vec(self)
    }
}

/// Basis of `{F of degree d : F∘h = χ(h) F for all h in G}`, in reduced
/// echelon order. Built from generators only.
pub fn invariants_of_degree(g: &MatrixGroup, d: usize, chi: &Character) -> Result<Vec<HomPoly>> {
    let f = &g.field;
    let n = d + 1;
    let mut rows: Vec<Vec<Fe>> = Vec::new();
    for (gi, m) in g.gens.iter().enumerate() {
        let c = chi.on_gen(g, gi)?;
        // column j holds the image of the j-th monomial
        let cols: Vec<Vec<Fe>> = (0..n)
            .map(|j| {
                let mut img = HomPoly::monomial(f, d, j, Fe::ONE).substitute(*m).coeffs;
                img[j] = f.sub(img[j], c);
                img
            })
            .collect();
        for r in 0..n {
            rows.push((0..n).map(|j| cols[j][r]).collect());
        }
    }
    let mut basis: Vec<Vec<Fe>> = linalg::nullspace(f, &rows, n);
    // echelonize the basis itself for a canonical answer
    linalg::rref(f, &mut basis, n);
    Ok(basis.into_iter().map(|v| HomPoly::new(f, v)).collect())
}

fn scalar_ratio(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Option<Fe> {
    // s with b = s a, a nonzero
    let i = a.iter().position(|c| !c.is_zero())?;
    let s = f.div(b[i], a[i]).ok()?;
    a.iter()
        .zip(b)
        .all(|(&x, &y)| f.mul(x, s) == y)
        .then_some(s)
}

/// The character `χ` with `h^* F = χ(h) F` when one exists. Generator
/// values are read off directly, then checked on 20 random words.
pub fn is_relative_invariant<T: Pullback>(obj: &T, g: &MatrixGroup) -> Option<Character> {
    let f = &g.field;
    let base = obj.coeff_vec();
    if base.iter().all(|c| c.is_zero()) {
        return None;
    }
    let mut vals = Vec::with_capacity(g.gens.len());
    for m in &g.gens {
        vals.push(scalar_ratio(f, &base, &obj.pullback_by(m).coeff_vec())?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7_1c3);
    for _ in 0..20 {
        let len = rng.gen_range(1..=6);
        let mut cur = obj.clone();
        let mut val = Fe::ONE;
        for _ in 0..len {
            let i = rng.gen_range(0..g.gens.len());
            cur = cur.pullback_by(&g.gens[i]);
            val = f.mul(val, vals[i]);
        }
        let expect: Vec<Fe> = base.iter().map(|&c| f.mul(c, val)).collect();
        if cur.coeff_vec() != expect {
            return None;
        }
    }
    Some(Character::simplify(g, vals))
}

/// `u1 = x^q y - x y^q` and `u2 = Σ_{n=0}^{q} x^((q-1)(q-n)) y^((q-1)n)`.
pub fn fundamental_sl2_invariants(field: &Field, q: u64) -> Result<(HomPoly, HomPoly)> {
    match prime_power(q) {
        Some((p, _)) if p == field.p() => {}
        _ => return Err(Error::Invalid(format!("q = {q} is not a power of the characteristic"))),
    }
    let q = q as usize;
    let mut u1 = HomPoly::zero(field, q + 1);
    u1.coeffs[q] = Fe::ONE;
    u1.coeffs[1] = field.neg(Fe::ONE);
    let mut u2 = HomPoly::zero(field, q * (q - 1));
    for n in 0..=q {
        let i = (q - 1) * (q - n);
        u2.coeffs[i] = field.add(u2.coeffs[i], Fe::ONE);
    }
    Ok((u1, u2))
}

/// Least degree of a map with automorphism group PSL2(F_q):
/// `(q^3 - 2q^2 + q + 2) / 2`, for odd `q`.
pub fn psl2_min_degree(q: u64) -> Result<u64> {
    if q % 2 == 0 || prime_power(q).is_none() {
        return Err(Error::Invalid(format!("q = {q} must be an odd prime power")));
    }
    Ok((q * q * q - 2 * q * q + q + 2) / 2)
}

/// One invariant pair visited by [`dm_scan`].
#[derive(Clone, Debug)]
pub struct ScanEntry {
    /// Nominal map degree `d`, with `deg F = d - 1` and `deg G = d + 1`.
    pub target_degree: usize,
    pub f: HomPoly,
    pub g: HomPoly,
    /// Degree after cancelling common factors; `None` when a coordinate
    /// vanishes.
    pub map_degree: Option<usize>,
    pub aut_order: Option<usize>,
    /// `Aut` of the map equals the target group.
    pub equals_target: bool,
}

fn all_vectors(f: &FieldCtx, n: usize) -> Vec<Vec<Fe>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                f.elements().map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

fn combine(f: &Field, basis: &[HomPoly], c: &[Fe], deg: usize) -> HomPoly {
    basis
        .iter()
        .zip(c)
        .fold(HomPoly::zero(f, deg), |acc, (b, &k)| acc.add(&b.scale(k)))
}

/// Runs the Doyle-McMullen construction on every pair `(F, G)` of
/// `χ`-invariants of `g` with `deg F = d - 1`, `deg G = d + 1`, for each
/// `d` in `degrees`, up to a common scalar. Fails when more than `cap`
/// pairs would be visited.
pub fn dm_scan(
    g: &MatrixGroup,
    target: &crate::projline::GroupDesc,
    degrees: std::ops::RangeInclusive<usize>,
    chi: &Character,
    cap: usize,
) -> Result<Vec<ScanEntry>> {
    use rayon::prelude::*;
    let f = &g.field;
    let mut jobs = Vec::new();
    for d in degrees {
        if d < 1 {
            continue;
        }
        let fb = invariants_of_degree(g, d - 1, chi)?;
        let gb = invariants_of_degree(g, d + 1, chi)?;
        for v in all_vectors(f, fb.len() + gb.len()) {
            // one representative per line: first nonzero coordinate is 1
            if v.iter().find(|c| !c.is_zero()) != Some(&Fe::ONE) {
                continue;
            }
            jobs.push((d, combine(f, &fb, &v[..fb.len()], d - 1), combine(f, &gb, &v[fb.len()..], d + 1)));
            if jobs.len() > cap {
                return Err(Error::BoundExceeded(format!("more than {cap} invariant pairs")));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(d, fp, gp)| {
            let mut e = ScanEntry {
                target_degree: d,
                f: fp,
                g: gp,
                map_degree: None,
                aut_order: None,
                equals_target: false,
            };
            let Ok(map) = dm_map(&e.f, &e.g) else {
                return Ok(e);
            };
            e.map_degree = Some(map.degree());
            if map.degree() >= 2 {
                let aut = crate::autgrp::aut_group_auto(
                    &map,
                    crate::autgrp::AutOptions {
                        ext_hint: Some(target.field.k()),
                        ext_cap: None,
                    },
                )?;
                let t = target.embed(&aut.search_field)?;
                e.aut_order = Some(aut.order());
                e.equals_target = t.elements == aut.group.elements;
            }
            Ok(e)
        })
        .collect()
}
