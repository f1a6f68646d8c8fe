//! Automorphism groups and conjugating sets of rational maps.
//!
//! The main method works with distinguished points: roots of forms whose
//! root sets every automorphism must permute. An automorphism is fixed by
//! the images of three points, so matching a base triple against points with
//! the same invariants produces a finite candidate list, each checked
//! exactly.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ff::{create_field, lcm_u64, upoly, Fe, Field, DEFAULT_SIZE_BOUND};
use crate::projline::{
    enumerate_pgl2, mobius_from_three_points, GroupDesc, Mobius, ProjPoint, EXT_CAP,
};
use crate::ratmap::{field_json, hom_roots, HomPoly, RatMap};

/// Default bound on `|search|` for the brute-force oracle.
pub const BRUTE_FORCE_BOUND: u32 = 9;
/// Forms above this degree are not used as distinguished-point sources.
pub const LEVEL_DEGREE_CAP: usize = 6000;
/// Candidate lists above this size are verified in parallel.
const PAR_THRESHOLD: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AutMethod {
    InvariantSet,
    BruteForce,
}

#[derive(Clone, Debug)]
pub struct AutResult {
    pub group: GroupDesc,
    pub search_field: Field,
    pub method: AutMethod,
    /// All of Aut over the algebraic closure lies in the search field.
    pub certified_complete: bool,
    pub notes: Vec<String>,
}

impl AutResult {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn to_json(&self) -> Value {
        let f = &self.search_field;
        json!({
            "label": self.group.label().to_string(),
            "labels": self.group.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            "order": self.group.order(),
            "elements": self.group.elements.iter().map(|m| m.format(f)).collect::<Vec<_>>(),
            "search_field": field_json(f),
            "method": self.method,
            "certified_complete": self.certified_complete,
            "notes": self.notes,
        })
    }
}

/// Distinguished forms of increasing cost. Level 1 is the fixed-point form,
/// level 2 the period-2 form, level 3 cuts out preimages of fixed points and
/// level 4 preimages of period-2 points.
fn level_form(f: &RatMap, level: usize, cache: &mut Vec<(HomPoly, HomPoly)>) -> Option<HomPoly> {
    let d = f.degree();
    let deg = match level {
        1 => d + 1,
        2 => d * d + 1,
        3 => d * d + d,
        4 => d * d * d + d,
        _ => return None,
    };
    if deg > LEVEL_DEGREE_CAP {
        return None;
    }
    // cache[i] holds the raw (i+1)-th iterate
    let iter = |n: usize, cache: &mut Vec<(HomPoly, HomPoly)>| -> (HomPoly, HomPoly) {
        if cache.is_empty() {
            cache.push((f.num.clone(), f.den.clone()));
        }
        while cache.len() < n {
            let (pn, pd) = cache.last().unwrap().clone();
            cache.push((f.num.compose_pair(&pn, &pd), f.den.compose_pair(&pn, &pd)));
        }
        cache[n - 1].clone()
    };
    let x = |h: &HomPoly| h.mul_linear(Fe::ONE, Fe::ZERO);
    let y = |h: &HomPoly| h.mul_linear(Fe::ZERO, Fe::ONE);
    Some(match level {
        1 => y(&f.num).sub(&x(&f.den)),
        2 => {
            let (n2, d2) = iter(2, cache);
            y(&n2).sub(&x(&d2))
        }
        3 => {
            let (n2, d2) = iter(2, cache);
            f.den.mul(&n2).sub(&f.num.mul(&d2))
        }
        _ => {
            let (n3, d3) = iter(3, cache);
            f.den.mul(&n3).sub(&f.num.mul(&d3))
        }
    })
}

/// Automorphism-invariant data attached to a distinguished point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct PointKey {
    mults: Vec<u32>,
    fixed_multiplier: Option<Fe>,
}

struct Distinguished {
    level: usize,
    points: Vec<(ProjPoint, PointKey)>,
    split: bool,
}

/// Rational distinguished points of `f` (already over `search`) at the
/// first level with at least three of them.
fn distinguished(f: &RatMap, search: &Field, force_level: Option<usize>) -> Result<Option<Distinguished>> {
    let mut cache = Vec::new();
    let mut per_level: Vec<HashMap<ProjPoint, u32>> = Vec::new();
    for level in 1..=4 {
        let Some(form) = level_form(f, level, &mut cache) else {
            break;
        };
        if form.is_zero() {
            // only for degree-1 identities; never for d >= 2
            return Err(Error::Internal("distinguished form vanishes".into()));
        }
        let roots = hom_roots(&form, search)?;
        let total: u32 = roots.iter().map(|r| r.1).sum();
        let split = total as usize == form.degree();
        per_level.push(roots.iter().copied().collect());
        let enough = roots.len() >= 3;
        let take = match force_level {
            Some(l) => l == level,
            None => enough,
        };
        if take {
            if !enough {
                return Ok(None);
            }
            let mut points = Vec::with_capacity(roots.len());
            for (pt, _) in &roots {
                let mults = per_level
                    .iter()
                    .map(|m| m.get(pt).copied().unwrap_or(0))
                    .collect();
                let fixed_multiplier = if per_level[0].contains_key(pt) {
                    Some(f.multiplier(*pt)?)
                } else {
                    None
                };
                points.push((
                    *pt,
                    PointKey {
                        mults,
                        fixed_multiplier,
                    },
                ));
            }
            points.sort();
            return Ok(Some(Distinguished {
                level,
                points,
                split,
            }));
        }
    }
    Ok(None)
}

/// Candidate maps sending the distinguished points of `src` onto those of
/// `dst` key-for-key, fixed by a base triple of `src`.
fn candidates(search: &Field, src: &Distinguished, dst: &Distinguished) -> Vec<Mobius> {
    let mut buckets: BTreeMap<&PointKey, Vec<ProjPoint>> = BTreeMap::new();
    for (pt, k) in &dst.points {
        buckets.entry(k).or_default().push(*pt);
    }
    let size = |k: &PointKey| buckets.get(k).map_or(0, |v| v.len());
    // base triple: three source points with the smallest target buckets
    let mut order: Vec<&(ProjPoint, PointKey)> = src.points.iter().collect();
    order.sort_by_key(|(pt, k)| (size(k), *pt));
    let base: Vec<&(ProjPoint, PointKey)> = order.into_iter().take(3).collect();
    if base.len() < 3 || base.iter().any(|(_, k)| size(k) == 0) {
        return Vec::new();
    }
    let dst_map: HashMap<ProjPoint, &PointKey> = dst.points.iter().map(|(p, k)| (*p, k)).collect();
    let src_pts = [base[0].0, base[1].0, base[2].0];
    let b0 = &buckets[&base[0].1];
    let b1 = &buckets[&base[1].1];
    let b2 = &buckets[&base[2].1];
    let mut out = Vec::new();
    for &q0 in b0 {
        for &q1 in b1 {
            if q1 == q0 {
                continue;
            }
            for &q2 in b2 {
                if q2 == q0 || q2 == q1 {
                    continue;
                }
                let Ok(m) = mobius_from_three_points(search, src_pts, [q0, q1, q2]) else {
                    continue;
                };
                // must carry every keyed point to a point with the same key
                let ok = src.points.iter().all(|(pt, k)| {
                    dst_map.get(&m.apply(search, *pt)).is_some_and(|k2| *k2 == k)
                });
                if ok {
                    out.push(m);
                }
            }
        }
    }
    out
}

fn verify_all<F: Fn(&Mobius) -> bool + Sync>(cands: Vec<Mobius>, ok: F) -> Vec<Mobius> {
    if cands.len() > PAR_THRESHOLD {
        cands.into_par_iter().filter(|m| ok(m)).collect()
    } else {
        cands.into_iter().filter(|m| ok(m)).collect()
    }
}

/// Automorphisms of `f` defined over `search`, by the distinguished-point
/// method, with a brute-force fallback on small fields.
pub fn aut_group(f: &RatMap, search: &Field) -> Result<AutResult> {
    if f.degree() < 2 {
        return Err(Error::Invalid("automorphism groups need degree >= 2".into()));
    }
    let g = f.base_change(search)?;
    let Some(dist) = distinguished(&g, search, None)? else {
        if search.q() <= crate::projline::PGL2_ENUM_BOUND {
            let mut r = aut_group_bruteforce(f, search, crate::projline::PGL2_ENUM_BOUND)?;
            r.notes
                .push("fewer than three rational distinguished points; used brute force".into());
            return Ok(r);
        }
        return Ok(AutResult {
            group: GroupDesc::from_elements(search, vec![Mobius::IDENTITY]),
            search_field: search.clone(),
            method: AutMethod::InvariantSet,
            certified_complete: false,
            notes: vec!["fewer than three rational distinguished points; result partial".into()],
        });
    };
    let cands = candidates(search, &dist, &dist);
    let els = verify_all(cands, |m| g.is_automorphism(m));
    let group = GroupDesc::from_elements(search, els);
    Ok(AutResult {
        group,
        search_field: search.clone(),
        method: AutMethod::InvariantSet,
        certified_complete: dist.split,
        notes: vec![format!(
            "distinguished level {} with {} points",
            dist.level,
            dist.points.len()
        )],
    })
}

/// Every element of PGL2(search) fixing `f` under conjugation.
pub fn aut_group_bruteforce(f: &RatMap, search: &Field, bound: u32) -> Result<AutResult> {
    let g = f.base_change(search)?;
    let all = enumerate_pgl2(search, bound)?;
    let els = verify_all(all.elements, |m| g.is_automorphism(m));
    Ok(AutResult {
        group: GroupDesc::from_elements(search, els),
        search_field: search.clone(),
        method: AutMethod::BruteForce,
        certified_complete: false,
        notes: vec![format!("all {} elements of PGL2 tested", all_len(search))],
    })
}

fn all_len(f: &Field) -> u64 {
    let q = f.q() as u64;
    q * q * q - q
}

/// Options for [`aut_group_auto`].
#[derive(Clone, Copy, Debug, Default)]
pub struct AutOptions {
    /// Extension degree (over GF(p)) the search field must contain.
    pub ext_hint: Option<u32>,
    /// Cap on the relative extension degree; defaults to [`EXT_CAP`].
    pub ext_cap: Option<u32>,
}

/// Chooses a search field in which some distinguished level splits
/// completely, then runs [`aut_group`] there.
pub fn aut_group_auto(f: &RatMap, opts: AutOptions) -> Result<AutResult> {
    let base = f.field();
    let p = base.p();
    let k = base.k() as u64;
    let cap = opts.ext_cap.unwrap_or(EXT_CAP) as u64;
    let hint = opts.ext_hint.unwrap_or(1) as u64;
    let mut cache = Vec::new();
    let mut chosen: Option<u64> = None;
    let mut capped = false;
    for level in 1..=4 {
        let Some(form) = level_form(f, level, &mut cache) else {
            break;
        };
        let poly = form.to_upoly();
        let dp = upoly::deg(&poly).unwrap_or(0);
        let inf = form.degree() > dp;
        let fd = upoly::factor_degrees(base, &poly);
        let distinct = fd.iter().map(|&d| d as usize).sum::<usize>() + inf as usize;
        if distinct < 3 {
            continue;
        }
        let e = fd.iter().fold(1u64, |a, &d| lcm_u64(a, d as u64));
        if e > cap {
            capped = true;
            continue;
        }
        chosen = Some(e);
        break;
    }
    let e = chosen.unwrap_or(1);
    let mut deg = lcm_u64(lcm_u64(k, hint), k * e);
    let mut notes = Vec::new();
    if chosen.is_none() {
        notes.push(if capped {
            format!("no distinguished level splits within extension cap {cap}")
        } else {
            "no distinguished level has three points".into()
        });
    }
    // stay inside the supported field size
    while (p as u128).pow(deg as u32) > DEFAULT_SIZE_BOUND as u128 && deg > k {
        notes.push(format!("extension degree {deg} exceeds the field size bound"));
        deg = lcm_u64(k, hint);
        if (p as u128).pow(deg as u32) > DEFAULT_SIZE_BOUND as u128 {
            deg = k;
        }
    }
    let search = create_field(p, deg as u32, DEFAULT_SIZE_BOUND)?;
    let mut r = aut_group(f, &search)?;
    r.notes.extend(notes);
    Ok(r)
}

/// All `α` over `search` with `f^α = g`. Uses brute force when
/// `|search| <= bound`, distinguished points otherwise.
pub fn conj_set(f: &RatMap, g: &RatMap, search: &Field, bound: u32) -> Result<Vec<Mobius>> {
    if f.degree() != g.degree() {
        return Err(Error::DegreeMismatch("conj_set needs equal degrees".into()));
    }
    let fs = f.base_change(search)?;
    let gs = g.base_change(search)?;
    if search.q() <= bound {
        let all = enumerate_pgl2(search, bound)?;
        let mut out = verify_all(all.elements, |m| fs.conjugates_to(m, &gs));
        out.sort();
        return Ok(out);
    }
    let Some(dg) = distinguished(&gs, search, None)? else {
        return Err(Error::BoundExceeded(
            "too few distinguished points for the triple method".into(),
        ));
    };
    let Some(df) = distinguished(&fs, search, Some(dg.level))? else {
        return Ok(Vec::new());
    };
    // α carries points of g onto points of f
    let mut out = verify_all(candidates(search, &dg, &df), |m| fs.conjugates_to(m, &gs));
    out.sort();
    Ok(out)
}

/// The claim that `group ⊆ Aut(f)`, checked element by element.
pub fn fixes_all(f: &RatMap, group: &GroupDesc) -> Result<bool> {
    let g = f.base_change(&group.field)?;
    Ok(group.elements.iter().all(|m| g.is_automorphism(m)))
}
