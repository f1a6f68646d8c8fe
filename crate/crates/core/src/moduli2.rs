//! The moduli space of quadratic maps in `(σ1, σ2)` coordinates, its
//! automorphism locus in each characteristic, and an exhaustive census.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::autgrp::{aut_group, aut_group_auto, aut_group_bruteforce, AutOptions};
use crate::error::{Error, Result};
use crate::ff::{gf, gf_q, upoly, Embedding, Fe, Field, FieldCtx, UPoly};
use crate::projline::{Mobius, ProjPoint};
use crate::ratmap::RatMap;

/// A point `(σ1, σ2)` of the moduli space of degree-2 maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliPoint {
    pub field: Field,
    pub sigma1: Fe,
    pub sigma2: Fe,
    /// Product of the multipliers, when computed from a map.
    pub sigma3: Option<Fe>,
}

impl ModuliPoint {
    pub fn new(field: &Field, sigma1: Fe, sigma2: Fe) -> ModuliPoint {
        ModuliPoint {
            field: field.clone(),
            sigma1,
            sigma2,
            sigma3: None,
        }
    }

    /// Reduces an integer point into `field`.
    pub fn from_ints(field: &Field, s1: i64, s2: i64) -> ModuliPoint {
        Self::new(field, field.from_i64(s1), field.from_i64(s2))
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        json!({
            "sigma1": f.format(self.sigma1),
            "sigma2": f.format(self.sigma2),
            "sigma3": self.sigma3.map(|s| f.format(s)),
        })
    }
}

fn symmetric(f: &FieldCtx, l: &[Fe]) -> Result<(Fe, Fe, Fe)> {
    let [a, b, c] = l else {
        return Err(Error::Internal(format!("expected 3 multipliers, got {}", l.len())));
    };
    let s1 = f.sum([*a, *b, *c]);
    let s2 = f.sum([f.mul(*a, *b), f.mul(*a, *c), f.mul(*b, *c)]);
    let s3 = f.product([*a, *b, *c]);
    Ok((s1, s2, s3))
}

/// `(σ1, σ2, σ3)` of a degree-2 map, from its multipliers over `ext`,
/// which must split the fixed points. Returns the point over the map's
/// field and the multipliers over `ext`.
pub fn sigma_invariants_in(f: &RatMap, ext: &Field) -> Result<(ModuliPoint, Vec<Fe>)> {
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch(format!(
            "sigma invariants need degree 2, got {}",
            f.degree()
        )));
    }
    let base = f.field();
    let mults = f.multiplier_spectrum(ext)?;
    if mults.len() != 3 {
        return Err(Error::Invalid(format!(
            "fixed points do not split over GF({}^{})",
            ext.p(),
            ext.k()
        )));
    }
    let (s1, s2, s3) = symmetric(ext, &mults)?;
    if s1 != ext.add(s3, ext.from_i64(2)) {
        return Err(Error::Internal("sigma1 = sigma3 + 2 fails".into()));
    }
    let emb = Embedding::new(base, ext)?;
    let down = |x: Fe| {
        emb.restrict(x)
            .ok_or_else(|| Error::Internal("symmetric function not in the base field".into()))
    };
    let pt = ModuliPoint {
        field: base.clone(),
        sigma1: down(s1)?,
        sigma2: down(s2)?,
        sigma3: Some(down(s3)?),
    };
    Ok((pt, mults))
}

/// `(σ1, σ2)` of a degree-2 map, computed over the splitting field of its
/// fixed points.
pub fn sigma_invariants(f: &RatMap) -> Result<ModuliPoint> {
    let base = f.field();
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch(format!(
            "sigma invariants need degree 2, got {}",
            f.degree()
        )));
    }
    let e = upoly::splitting_degree(base, &f.fixed_point_form().to_upoly());
    let ext = gf(base.p(), base.k() * e)?;
    Ok(sigma_invariants_in(f, &ext)?.0)
}

/// `x^3 - σ1 x^2 + σ2 x - σ1 + 2`, low-to-high.
pub fn multiplier_polynomial(pt: &ModuliPoint) -> UPoly {
    let f = &pt.field;
    vec![
        f.sub(f.from_i64(2), pt.sigma1),
        pt.sigma2,
        f.neg(pt.sigma1),
        Fe::ONE,
    ]
}

/// Distinguished points of the locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Special {
    None,
    /// Singular point of the cubic.
    Cusp,
    /// `(0, 1)` in characteristic 2.
    Char2AlphaTwoPoint,
    /// All three multipliers equal 1, away from the cusp.
    TripleOne,
}

impl fmt::Display for Special {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Special::None => "none",
            Special::Cusp => "cusp",
            Special::Char2AlphaTwoPoint => "char2-alpha2",
            Special::TripleOne => "triple-one",
        };
        f.write_str(s)
    }
}

/// Automorphism group predicted over the algebraic closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PredictedAut {
    Trivial,
    C2,
    S3,
}

impl PredictedAut {
    pub fn order(self) -> usize {
        match self {
            PredictedAut::Trivial => 1,
            PredictedAut::C2 => 2,
            PredictedAut::S3 => 6,
        }
    }
}

impl fmt::Display for PredictedAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PredictedAut::Trivial => "trivial",
            PredictedAut::C2 => "C2",
            PredictedAut::S3 => "S3",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocusVerdict {
    /// On the cubic component of the discriminant.
    pub on_s: bool,
    /// Some fixed point has multiplier 1.
    pub on_per11: bool,
    pub special: Special,
    pub predicted: PredictedAut,
}

impl LocusVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "on_S": self.on_s,
            "on_Per11": self.on_per11,
            "special": self.special.to_string(),
            "predicted_aut": self.predicted.to_string(),
            "predicted_order": self.predicted.order(),
        })
    }
}

/// Integer terms `(i, j, c)` of `c σ1^i σ2^j` for the cubic factor of the
/// discriminant.
const CUBIC_TERMS: [(u32, u32, i64); 8] = [
    (3, 0, 2),
    (2, 1, 1),
    (2, 0, -1),
    (0, 2, -4),
    (1, 1, -8),
    (1, 0, 12),
    (0, 1, 12),
    (0, 0, -36),
];

/// The cubic `2σ1³ + σ1²σ2 - σ1² - 4σ2² - 8σ1σ2 + 12σ1 + 12σ2 - 36` over `f`.
pub fn cubic_s(f: &Field) -> Poly2 {
    Poly2::from_int_terms(f, &CUBIC_TERMS)
}

/// `σ2 - 2σ1 + 3`.
pub fn per11_line(f: &Field) -> Poly2 {
    Poly2::from_int_terms(f, &[(0, 1, 1), (1, 0, -2), (0, 0, 3)])
}

/// Verdict for `pt`, a pure function of `(p, σ1, σ2)`.
pub fn locus_verdict(p: u32, pt: &ModuliPoint) -> Result<LocusVerdict> {
    let f = &pt.field;
    if f.p() != p {
        return Err(Error::FieldMismatch(format!("point is over characteristic {}, not {p}", f.p())));
    }
    let (s1, s2) = (pt.sigma1, pt.sigma2);
    let on_s = cubic_s(f).eval(s1, s2).is_zero();
    let on_per11 = per11_line(f).eval(s1, s2).is_zero();
    let at = |a: i64, b: i64| s1 == f.from_i64(a) && s2 == f.from_i64(b);
    let (special, predicted) = match p {
        2 => {
            if at(0, 1) {
                (Special::Char2AlphaTwoPoint, PredictedAut::Trivial)
            } else if at(1, 1) {
                (Special::TripleOne, PredictedAut::Trivial)
            } else if s1.is_zero() {
                let g = if s2.is_zero() { PredictedAut::S3 } else { PredictedAut::C2 };
                (Special::None, g)
            } else {
                (Special::None, PredictedAut::Trivial)
            }
        }
        3 => {
            let special = if at(0, 0) { Special::Cusp } else { Special::None };
            let g = if on_s { PredictedAut::C2 } else { PredictedAut::Trivial };
            (special, g)
        }
        _ => {
            if at(-6, 12) {
                (Special::Cusp, PredictedAut::S3)
            } else if at(3, 3) {
                (Special::TripleOne, PredictedAut::C2)
            } else if on_s {
                (Special::None, PredictedAut::C2)
            } else {
                (Special::None, PredictedAut::Trivial)
            }
        }
    };
    Ok(LocusVerdict {
        on_s,
        on_per11,
        special,
        predicted,
    })
}

/// The singular point of the cubic and its tangent cone.
#[derive(Clone, Debug)]
pub struct CuspData {
    pub point: ModuliPoint,
    /// Both partial derivatives vanish at `point`.
    pub partials_vanish: bool,
    /// No other point of `GF(p)^2` is singular.
    pub unique_over_fp: bool,
    /// `(a, b)` with tangent cone `-(a σ1' + b σ2')²` in shifted coordinates.
    pub tangent: (Fe, Fe),
    /// The quadratic part of the shifted cubic equals `-(a σ1' + b σ2')²`.
    pub tangent_matches: bool,
    /// The tangent line divides the cubic (it must not).
    pub tangent_divides: bool,
}

impl CuspData {
    pub fn is_cusp(&self) -> bool {
        self.partials_vanish && self.unique_over_fp && self.tangent_matches && !self.tangent_divides
    }

    pub fn to_json(&self) -> Value {
        let f = &self.point.field;
        json!({
            "point": self.point.to_json(),
            "partials_vanish": self.partials_vanish,
            "unique_over_fp": self.unique_over_fp,
            "tangent": format!("-({} s1' + {} s2')^2", f.format(self.tangent.0), f.format(self.tangent.1)),
            "tangent_matches": self.tangent_matches,
            "tangent_divides": self.tangent_divides,
        })
    }
}

/// Cusp of the automorphism locus mod `p`, for `p > 2`.
pub fn cusp_point(p: u32) -> Result<CuspData> {
    if p == 2 {
        return Err(Error::Invalid(
            "in characteristic 2 the locus is a union of lines".into(),
        ));
    }
    let f = gf(p, 1)?;
    let c = cubic_s(&f);
    let (pt, tangent) = if p == 3 {
        (ModuliPoint::from_ints(&f, 0, 0), (Fe::ONE, Fe::ONE))
    } else {
        (ModuliPoint::from_ints(&f, -6, 12), (f.from_i64(5), f.from_i64(2)))
    };
    let (d1, d2) = (c.d1(), c.d2());
    let singular = |a: Fe, b: Fe| {
        c.eval(a, b).is_zero() && d1.eval(a, b).is_zero() && d2.eval(a, b).is_zero()
    };
    let partials_vanish = singular(pt.sigma1, pt.sigma2);
    let unique_over_fp = f.elements().all(|a| {
        f.elements()
            .all(|b| !singular(a, b) || (a == pt.sigma1 && b == pt.sigma2))
    });
    let shifted = c.shift(pt.sigma1, pt.sigma2);
    let (a, b) = tangent;
    let line = Poly2::from_terms(&f, &[(1, 0, a), (0, 1, b)]);
    let cone = line.mul(&line).neg();
    let tangent_matches = shifted.homogeneous_part(2) == cone && shifted.homogeneous_part(1).is_zero();
    // the line a s1 + b s2 = 0 is parametrized by (b t, -a t)
    let tangent_divides = shifted.restrict_to_line(b, f.neg(a)).iter().all(|x| x.is_zero());
    Ok(CuspData {
        point: pt,
        partials_vanish,
        unique_over_fp,
        tangent,
        tangent_matches,
        tangent_divides,
    })
}

/// `(z² + λz)/(λz + 1)`: fixed points 0 and ∞ with multiplier λ, swapped by
/// `1/z`.
pub fn normal_form_map(field: &Field, lambda: Fe) -> Result<RatMap> {
    let f = field;
    if f.mul(lambda, lambda) == Fe::ONE {
        return Err(Error::Invalid("normal form needs lambda^2 != 1".into()));
    }
    RatMap::from_upolys(f, &[Fe::ZERO, lambda, Fe::ONE], &[Fe::ONE, lambda])
}

/// `z² + cz` in characteristic 2 with its automorphism `z + c - 1`.
#[derive(Clone, Debug)]
pub struct Char2Family {
    pub map: RatMap,
    pub point: ModuliPoint,
    pub witness: Mobius,
    pub witness_is_identity: bool,
    pub witness_is_automorphism: bool,
}

pub fn char2_family(field: &Field, c: Fe) -> Result<Char2Family> {
    let f = field;
    if f.p() != 2 {
        return Err(Error::Invalid("char2_family needs characteristic 2".into()));
    }
    let map = RatMap::from_upolys(f, &[Fe::ZERO, c, Fe::ONE], &[Fe::ONE])?;
    let point = sigma_invariants(&map)?;
    let witness = Mobius::translation(f.sub(c, Fe::ONE));
    Ok(Char2Family {
        witness_is_identity: witness.is_identity(),
        witness_is_automorphism: map.is_automorphism(&witness),
        map,
        point,
        witness,
    })
}

/// Census settings.
#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    /// Relative extension degree of the search field.
    pub ext_degree: u32,
    /// Brute-force cross-check over `GF(q)` when `q` is at most this.
    pub oracle_bound: u32,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            ext_degree: 6,
            oracle_bound: 5,
            jobs: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub sigma1: String,
    pub sigma2: String,
    pub count: usize,
    pub max_aut_order: usize,
    pub min_aut_order: usize,
    pub on_s: bool,
    pub on_per11: bool,
    pub special: Special,
    pub predicted: PredictedAut,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusTable {
    pub q: u64,
    pub ext_degree: u32,
    /// Maps enumerated, one per projective coefficient tuple.
    pub maps: usize,
    pub rows: Vec<CensusRow>,
    pub oracle_checks: usize,
    pub oracle_mismatches: usize,
    /// Maps where `σ1 = σ3 + 2` failed.
    pub sigma_identity_failures: usize,
    /// Maps with two distinct fixed points of equal multiplier.
    pub swap_checks: usize,
    /// Of those, maps with no automorphism exchanging the pair.
    pub swap_failures: usize,
    /// Points whose representatives disagree on the Aut order.
    pub discrepancies: Vec<String>,
    /// Maps whose search needed a larger field.
    pub retries: usize,
}

pub const CENSUS_COLUMNS: [&str; 9] = [
    "sigma1",
    "sigma2",
    "count",
    "max_aut_order",
    "on_S",
    "on_Per11",
    "special",
    "predicted",
    "agrees",
];

impl CensusTable {
    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agrees)
    }

    pub fn row(&self, s1: &str, s2: &str) -> Option<&CensusRow> {
        self.rows.iter().find(|r| r.sigma1 == s1 && r.sigma2 == s2)
    }

    pub fn to_csv(&self) -> String {
        let mut out = CENSUS_COLUMNS.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.sigma1,
                r.sigma2,
                r.count,
                r.max_aut_order,
                r.on_s,
                r.on_per11,
                r.special,
                r.predicted,
                r.agrees
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("census serializes")
    }
}

struct MapStats {
    s1: Fe,
    s2: Fe,
    order: usize,
    oracle: Option<bool>,
    sigma_ok: bool,
    swap: Option<bool>,
    retried: bool,
}

fn decode(q: u64, mut idx: u64) -> [Fe; 6] {
    let mut out = [Fe::ZERO; 6];
    for o in out.iter_mut() {
        *o = Fe((idx % q) as u32);
        idx /= q;
    }
    out
}

/// Coefficients `[a0, a1, a2, b0, b1, b2]` of `(a2 z² + a1 z + a0)/(b2 z² +
/// b1 z + b0)`, kept when normalized and of exact degree 2.
fn admissible(f: &FieldCtx, c: &[Fe; 6]) -> bool {
    // first nonzero of (a2, a1, a0, b2, b1, b0) is 1
    let lead = [c[2], c[1], c[0], c[5], c[4], c[3]]
        .into_iter()
        .find(|x| !x.is_zero());
    if lead != Some(Fe::ONE) {
        return false;
    }
    if c[2].is_zero() && c[5].is_zero() {
        return false;
    }
    let g = upoly::gcd(f, &upoly::trimmed(c[0..3].to_vec()), &upoly::trimmed(c[3..6].to_vec()));
    upoly::deg(&g) == Some(0)
}

fn rational_part(base: &Field, emb: &Embedding, g: &[Mobius]) -> Vec<Mobius> {
    let mut out: Vec<Mobius> = g
        .iter()
        .filter_map(|m| {
            let v: Option<Vec<Fe>> = m.matrix().iter().map(|&x| emb.restrict(x)).collect();
            let v = v?;
            Some(Mobius::canonical(base, [v[0], v[1], v[2], v[3]]))
        })
        .collect();
    out.sort();
    out
}

fn census_one(
    base: &Field,
    ext: &Field,
    emb: &Embedding,
    map: &RatMap,
    opts: &CensusOptions,
) -> Result<MapStats> {
    let (pt, _) = sigma_invariants_in(map, ext)?;
    let g = map.base_change(ext)?;
    let mut aut = aut_group(map, ext)?;
    let mut retried = false;
    if !aut.certified_complete {
        let alt = aut_group_auto(map, AutOptions {
            ext_hint: Some(ext.k()),
            ext_cap: None,
        })?;
        retried = true;
        if alt.order() > aut.order() {
            aut = alt;
        }
    }
    let s3 = pt.sigma3.expect("computed from a map");
    let sigma_ok = pt.sigma1 == base.add(s3, base.from_i64(2));
    let oracle = if base.q() <= opts.oracle_bound {
        let brute = aut_group_bruteforce(map, base, opts.oracle_bound)?;
        let rat = if aut.search_field.k() == ext.k() {
            rational_part(base, emb, &aut.group.elements)
        } else {
            let e2 = Embedding::new(base, &aut.search_field)?;
            rational_part(base, &e2, &aut.group.elements)
        };
        let mut b = brute.group.elements.clone();
        b.sort();
        Some(b == rat)
    } else {
        None
    };
    // two distinct simple fixed points with one multiplier must be swapped
    let fps = g.fixed_points(ext)?;
    let mut swap = None;
    let simple: Vec<(ProjPoint, Fe)> = fps
        .iter()
        .filter(|(_, m)| *m == 1)
        .map(|(pt, _)| Ok((*pt, g.multiplier(*pt)?)))
        .collect::<Result<_>>()?;
    'outer: for i in 0..simple.len() {
        for j in i + 1..simple.len() {
            if simple[i].1 == simple[j].1 {
                let sf = &aut.search_field;
                let e = Embedding::new(ext, sf)?;
                let (a, b) = (simple[i].0.embed(&e), simple[j].0.embed(&e));
                let ok = aut.group.elements.iter().any(|m| m.apply(sf, a) == b);
                swap = Some(ok);
                break 'outer;
            }
        }
    }
    Ok(MapStats {
        s1: pt.sigma1,
        s2: pt.sigma2,
        order: aut.order(),
        oracle,
        sigma_ok,
        swap,
        retried,
    })
}

/// Every degree-2 map over GF(q), grouped by moduli point.
pub fn census(q: u64, opts: CensusOptions) -> Result<CensusTable> {
    let base = gf_q(q)?;
    if q > 16 {
        return Err(Error::BoundExceeded(format!("census over GF({q}) is too large")));
    }
    let ext = gf(base.p(), base.k() * opts.ext_degree)?;
    let emb = Embedding::new(&base, &ext)?;
    let total = q.pow(6);
    let maps: Vec<RatMap> = (0..total)
        .map(|i| decode(q, i))
        .filter(|c| admissible(&base, c))
        .map(|c| RatMap::from_upolys(&base, &c[0..3], &c[3..6]))
        .collect::<Result<_>>()?;
    let work = || -> Result<Vec<MapStats>> {
        maps.par_iter()
            .map(|m| census_one(&base, &ext, &emb, m, &opts))
            .collect()
    };
    let stats = if opts.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(work)?
    } else {
        work()?
    };
    let mut by_point: BTreeMap<(Fe, Fe), (usize, usize, usize)> = BTreeMap::new();
    let mut table = CensusTable {
        q,
        ext_degree: opts.ext_degree,
        maps: stats.len(),
        rows: Vec::new(),
        oracle_checks: 0,
        oracle_mismatches: 0,
        sigma_identity_failures: 0,
        swap_checks: 0,
        swap_failures: 0,
        discrepancies: Vec::new(),
        retries: 0,
    };
    for s in &stats {
        let e = by_point.entry((s.s1, s.s2)).or_insert((0, 0, usize::MAX));
        e.0 += 1;
        e.1 = e.1.max(s.order);
        e.2 = e.2.min(s.order);
        if let Some(ok) = s.oracle {
            table.oracle_checks += 1;
            table.oracle_mismatches += !ok as usize;
        }
        table.sigma_identity_failures += !s.sigma_ok as usize;
        if let Some(ok) = s.swap {
            table.swap_checks += 1;
            table.swap_failures += !ok as usize;
        }
        table.retries += s.retried as usize;
    }
    for ((s1, s2), (count, max, min)) in by_point {
        let pt = ModuliPoint::new(&base, s1, s2);
        let v = locus_verdict(base.p(), &pt)?;
        let (f1, f2) = (base.format(s1), base.format(s2));
        if max != min {
            table
                .discrepancies
                .push(format!("({f1},{f2}): orders {min}..{max}"));
        }
        table.rows.push(CensusRow {
            sigma1: f1,
            sigma2: f2,
            count,
            max_aut_order: max,
            min_aut_order: min,
            on_s: v.on_s,
            on_per11: v.on_per11,
            special: v.special,
            predicted: v.predicted,
            agrees: max == v.predicted.order(),
        });
    }
    Ok(table)
}

/// Polynomials in `σ1, σ2` over a finite field, as exponent-pair maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly2 {
    pub field: Field,
    pub terms: BTreeMap<(u32, u32), Fe>,
}

impl Poly2 {
    pub fn from_terms(f: &Field, t: &[(u32, u32, Fe)]) -> Poly2 {
        let mut p = Poly2 {
            field: f.clone(),
            terms: BTreeMap::new(),
        };
        for &(i, j, c) in t {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn from_int_terms(f: &Field, t: &[(u32, u32, i64)]) -> Poly2 {
        let v: Vec<_> = t.iter().map(|&(i, j, c)| (i, j, f.from_i64(c))).collect();
        Self::from_terms(f, &v)
    }

    pub fn constant(f: &Field, c: i64) -> Poly2 {
        Self::from_int_terms(f, &[(0, 0, c)])
    }

    fn add_term(&mut self, i: u32, j: u32, c: Fe) {
        let f = self.field.clone();
        let e = self.terms.entry((i, j)).or_insert(Fe::ZERO);
        *e = f.add(*e, c);
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Poly2) -> Poly2 {
        let mut r = self.clone();
        for (&(i, j), &c) in &o.terms {
            r.add_term(i, j, c);
        }
        r
    }

    pub fn neg(&self) -> Poly2 {
        let f = &self.field;
        Poly2 {
            field: f.clone(),
            terms: self.terms.iter().map(|(&k, &c)| (k, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, o: &Poly2) -> Poly2 {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly2) -> Poly2 {
        let f = &self.field;
        let mut r = Poly2::from_terms(f, &[]);
        for (&(i, j), &c) in &self.terms {
            for (&(k, l), &d) in &o.terms {
                r.add_term(i + k, j + l, f.mul(c, d));
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly2 {
        let mut r = Poly2::constant(&self.field, 1);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn eval(&self, a: Fe, b: Fe) -> Fe {
        let f = &self.field;
        f.sum(self
            .terms
            .iter()
            .map(|(&(i, j), &c)| f.mul(c, f.mul(f.pow(a, i as u64), f.pow(b, j as u64)))))
    }

    /// `∂/∂σ1`.
    pub fn d1(&self) -> Poly2 {
        let f = &self.field;
        let t: Vec<_> = self
            .terms
            .iter()
            .filter(|(&(i, _), _)| i > 0)
            .map(|(&(i, j), &c)| (i - 1, j, f.mul(c, f.from_i64(i as i64))))
            .collect();
        Poly2::from_terms(f, &t)
    }

    /// `∂/∂σ2`.
    pub fn d2(&self) -> Poly2 {
        let f = &self.field;
        let t: Vec<_> = self
            .terms
            .iter()
            .filter(|(&(_, j), _)| j > 0)
            .map(|(&(i, j), &c)| (i, j - 1, f.mul(c, f.from_i64(j as i64))))
            .collect();
        Poly2::from_terms(f, &t)
    }

    /// `P(σ1 + a, σ2 + b)`.
    pub fn shift(&self, a: Fe, b: Fe) -> Poly2 {
        let f = &self.field;
        let x = Poly2::from_terms(f, &[(1, 0, Fe::ONE), (0, 0, a)]);
        let y = Poly2::from_terms(f, &[(0, 1, Fe::ONE), (0, 0, b)]);
        let mut r = Poly2::from_terms(f, &[]);
        for (&(i, j), &c) in &self.terms {
            let t = x.pow(i).mul(&y.pow(j));
            r = r.add(&t.mul(&Poly2::from_terms(f, &[(0, 0, c)])));
        }
        r
    }

    pub fn homogeneous_part(&self, d: u32) -> Poly2 {
        Poly2 {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == d)
                .map(|(&k, &c)| (k, c))
                .collect(),
        }
    }

    /// Coefficients in `t` of `P(a t, b t)`, low-to-high.
    pub fn restrict_to_line(&self, a: Fe, b: Fe) -> UPoly {
        let f = &self.field;
        let mut out = Vec::new();
        for (&(i, j), &c) in &self.terms {
            let d = (i + j) as usize;
            if out.len() <= d {
                out.resize(d + 1, Fe::ZERO);
            }
            let v = f.mul(c, f.mul(f.pow(a, i as u64), f.pow(b, j as u64)));
            out[d] = f.add(out[d], v);
        }
        upoly::trimmed(out)
    }

    pub fn format(&self) -> String {
        let f = &self.field;
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (&(i, j), &c) in self.terms.iter().rev() {
            let mut m = Vec::new();
            if c != Fe::ONE || i + j == 0 {
                m.push(f.format(c));
            }
            match i {
                0 => {}
                1 => m.push("s1".into()),
                _ => m.push(format!("s1^{i}")),
            }
            match j {
                0 => {}
                1 => m.push("s2".into()),
                _ => m.push(format!("s2^{j}")),
            }
            parts.push(m.join("*"));
        }
        parts.join(" + ")
    }
}

/// Discriminant of `x³ + a x² + b x + c`.
pub fn cubic_discriminant(a: &Poly2, b: &Poly2, c: &Poly2) -> Poly2 {
    let f = &a.field;
    let k = |n: i64| Poly2::constant(f, n);
    k(18).mul(a).mul(b).mul(c)
        .sub(&k(4).mul(&a.pow(3)).mul(c))
        .add(&a.pow(2).mul(&b.pow(2)))
        .sub(&k(4).mul(&b.pow(3)))
        .sub(&k(27).mul(&c.pow(2)))
}

/// Named polynomial identities of the locus over GF(p), each with whether
/// it holds.
pub fn symbolic_identities(p: u32) -> Result<Vec<(String, bool)>> {
    let f = gf(p, 1)?;
    let s1 = Poly2::from_int_terms(&f, &[(1, 0, 1)]);
    let s2 = Poly2::from_int_terms(&f, &[(0, 1, 1)]);
    let disc = cubic_discriminant(
        &s1.neg(),
        &s2,
        &Poly2::constant(&f, 2).sub(&s1),
    );
    let product = per11_line(&f).mul(&cubic_s(&f));
    let mut out = vec![(
        "discriminant of the multiplier cubic equals (s2 - 2 s1 + 3) * S".to_string(),
        disc == product,
    )];
    // x = 1 is a root iff s2 - 2 s1 + 3 = 0
    let at_one = Poly2::constant(&f, 1)
        .sub(&s1)
        .add(&s2)
        .sub(&s1)
        .add(&Poly2::constant(&f, 2));
    out.push(("multiplier cubic at x = 1 is s2 - 2 s1 + 3".into(), at_one == per11_line(&f)));
    let triple = upoly::trimmed(vec![f.from_i64(2), f.from_i64(-3), Fe::ZERO, Fe::ONE]);
    match p {
        3 => {
            let reduced = Poly2::from_int_terms(
                &f,
                &[(3, 0, 2), (2, 1, 1), (2, 0, -1), (0, 2, -1), (1, 1, -2)],
            );
            out.push(("S reduces to 2s1^3 + s1^2 s2 - s1^2 - s2^2 - 2 s1 s2".into(), cubic_s(&f) == reduced));
            out.push((
                "Per_1(1) reduces to s2 - 2 s1".into(),
                per11_line(&f) == Poly2::from_int_terms(&f, &[(0, 1, 1), (1, 0, -2)]),
            ));
            let cube = upoly::pow(&f, &[f.from_i64(-1), Fe::ONE], 3);
            out.push(("x^3 - 3x + 2 reduces to (x - 1)^3".into(), triple == cube));
        }
        2 => {
            let reduced = Poly2::from_int_terms(&f, &[(2, 1, 1), (2, 0, -1)]);
            let factored = s1.pow(2).mul(&s2.sub(&Poly2::constant(&f, 1)));
            out.push((
                "S reduces to s1^2 s2 - s1^2 = s1^2 (s2 - 1)".into(),
                cubic_s(&f) == reduced && reduced == factored,
            ));
            out.push((
                "Per_1(1) reduces to s2 - 1".into(),
                per11_line(&f) == s2.sub(&Poly2::constant(&f, 1)),
            ));
            let xm1 = [f.from_i64(-1), Fe::ONE];
            let target = upoly::mul(&f, &upoly::x(), &upoly::pow(&f, &xm1, 2));
            out.push(("x^3 - 3x + 2 reduces to x (x - 1)^2".into(), triple == target));
        }
        _ => {
            let target = upoly::mul(
                &f,
                &[f.from_i64(2), Fe::ONE],
                &upoly::pow(&f, &[f.from_i64(-1), Fe::ONE], 2),
            );
            out.push(("x^3 - 3x + 2 = (x + 2)(x - 1)^2".into(), triple == target));
        }
    }
    Ok(out)
}
