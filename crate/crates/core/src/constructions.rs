//! Explicit maps realizing prescribed automorphism groups, each paired with
//! the group it is claimed to have.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::autgrp::{aut_group_auto, aut_group_bruteforce, AutOptions, AutResult};
use crate::error::{Error, Result};
use crate::ff::{
    gf, gf_q, lcm_u64, poly_roots, prime_power, primitive_root_of_unity, unity_extension_degree,
    upoly, Embedding, Fe, Field, FieldCtx, UPoly,
};
use crate::invariant::{dm_map, fundamental_sl2_invariants, psl2_min_degree};
use crate::projline::{
    enumerate_pgl2, group_closure, semi_elementary_subgroup, standard_subgroup, GroupDesc,
    GroupKind, Mobius, CLOSURE_CAP, EXT_CAP,
};
use crate::ratmap::{field_json, psi_map, RatMap};

/// A map together with the automorphism group it is claimed to have.
#[derive(Clone, Debug)]
pub struct ConstructionRecord {
    pub name: String,
    pub parameters: BTreeMap<String, String>,
    pub map: RatMap,
    /// Claimed `Aut(map)`, over the field it is defined on.
    pub claimed_group: GroupDesc,
    /// The claim, in words.
    pub statement: String,
    /// Named side conditions and whether they hold.
    pub witnesses: Vec<(String, bool)>,
    /// Sorted fixed-point multipliers over a splitting field, when recorded.
    pub spectrum: Option<(Field, Vec<Fe>)>,
}

/// Outcome of checking a record.
#[derive(Clone, Debug)]
pub struct Verification {
    pub aut: AutResult,
    pub claimed_order: usize,
    /// Computed group equals the claimed group elementwise.
    pub agrees: bool,
}

impl Verification {
    pub fn to_json(&self) -> Value {
        json!({
            "aut": self.aut.to_json(),
            "claimed_order": self.claimed_order,
            "agrees": self.agrees,
        })
    }
}

impl ConstructionRecord {
    fn new(name: &str, map: RatMap, claimed: GroupDesc, statement: String) -> Self {
        ConstructionRecord {
            name: name.into(),
            parameters: BTreeMap::new(),
            map,
            claimed_group: claimed,
            statement,
            witnesses: Vec::new(),
            spectrum: None,
        }
    }

    fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.parameters.insert(k.into(), v.to_string());
        self
    }

    /// The map over the claimed group's field. All comparisons start here so
    /// that the map and the group pass through the same embeddings.
    pub fn map_on_group_field(&self) -> Result<RatMap> {
        self.map.base_change(&self.claimed_group.field)
    }

    /// Computes Aut by the distinguished-point method and compares.
    pub fn verify(&self) -> Result<Verification> {
        let f = self.map_on_group_field()?;
        let aut = aut_group_auto(&f, AutOptions::default())?;
        self.compare(aut)
    }

    /// Computes Aut by brute force over `field`, which must extend the
    /// claimed group's field.
    pub fn verify_bruteforce(&self, field: &Field, bound: u32) -> Result<Verification> {
        let f = self.map_on_group_field()?;
        let aut = aut_group_bruteforce(&f, field, bound)?;
        self.compare(aut)
    }

    fn compare(&self, aut: AutResult) -> Result<Verification> {
        let claimed = self.claimed_group.embed(&aut.search_field)?;
        let agrees = claimed.elements == aut.group.elements;
        Ok(Verification {
            claimed_order: self.claimed_group.order(),
            agrees,
            aut,
        })
    }

    /// Every side condition holds.
    pub fn witnesses_hold(&self) -> bool {
        self.witnesses.iter().all(|w| w.1)
    }

    pub fn to_json(&self) -> Value {
        let g = &self.claimed_group;
        let gf_ = &g.field;
        json!({
            "name": self.name,
            "parameters": self.parameters,
            "statement": self.statement,
            "map": self.map.to_json(),
            "claimed_group": {
                "label": g.label().to_string(),
                "labels": g.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
                "order": g.order(),
                "field": field_json(gf_),
                "elements": g.elements.iter().map(|m| m.format(gf_)).collect::<Vec<_>>(),
            },
            "witnesses": self.witnesses.iter().map(|(k, v)| json!({"check": k, "holds": v})).collect::<Vec<_>>(),
            "spectrum": self.spectrum.as_ref().map(|(f, s)| json!({
                "field": field_json(f),
                "multipliers": s.iter().map(|&x| f.format(x)).collect::<Vec<_>>(),
            })),
        })
    }
}

/// The smallest extension of `f` over which `poly` splits, and its roots
/// there with multiplicity.
pub fn split_over(f: &Field, poly: &[Fe]) -> Result<(Field, Vec<(Fe, u32)>)> {
    let e = upoly::splitting_degree(f, poly);
    let ext = gf(f.p(), f.k() * e)?;
    let roots = poly_roots(f, poly, &ext)?;
    Ok((ext, roots))
}

fn borel(f: &Field) -> GroupDesc {
    let mut els = Vec::new();
    for u in f.elements().filter(|u| !u.is_zero()) {
        for v in f.elements() {
            els.push(Mobius::affine(f, u, v));
        }
    }
    GroupDesc::from_elements(f, els)
}

/// `ψ(z^q - z) + z` with `ψ(z) = a z`, i.e. `a z^q + (1 - a) z`, over GF(q).
/// Claimed group: PGL2(F_q) when `a = 1`, the Borel group B(F_q) otherwise.
pub fn power_map(q: u64, a: Fe) -> Result<ConstructionRecord> {
    let f = gf_q(q)?;
    affine_core("power_map", &f, q, a, Fe::ZERO)
}

/// `a z^q + (1 - a) z + b` over GF(q). Claimed group: the conjugate of the
/// `b = 0` group by `z -> z + c`, `c` a root of `a z^q - a z + b`.
pub fn affine_psi_map(q: u64, a: Fe, b: Fe) -> Result<ConstructionRecord> {
    let f = gf_q(q)?;
    affine_core("affine_psi_map", &f, q, a, b)
}

fn affine_core(name: &str, f: &Field, q: u64, a: Fe, b: Fe) -> Result<ConstructionRecord> {
    if a.is_zero() {
        return Err(Error::Invalid("a must be nonzero".into()));
    }
    let qs = q as usize;
    let mut n = vec![Fe::ZERO; qs + 1];
    n[0] = b;
    n[1] = f.sub(Fe::ONE, a);
    n[qs] = f.add(n[qs], a);
    let map = RatMap::from_upolys(f, &upoly::trimmed(n), &[Fe::ONE])?;
    let base_group = if a == Fe::ONE {
        enumerate_pgl2(f, f.q())?
    } else {
        borel(f)
    };
    let (group, conj) = if b.is_zero() {
        (base_group, None)
    } else {
        // a c^q - a c + b = 0
        let mut poly = vec![Fe::ZERO; qs + 1];
        poly[0] = b;
        poly[1] = f.neg(a);
        poly[qs] = a;
        let (ext, roots) = split_over(f, &upoly::trimmed(poly))?;
        let c = roots[0].0;
        let tau = Mobius::translation(c);
        // Aut(f) = τ Aut(f^τ) τ^-1
        let g = base_group.embed(&ext)?.conjugate_by(&tau.inverse(&ext));
        (g, Some((ext, tau)))
    };
    let statement = if a == Fe::ONE {
        format!("Aut(f) is PGL2(F_{q})")
    } else {
        format!("Aut(f) is B(F_{q}), of order {}", q * (q - 1))
    } + if b.is_zero() {
        ", defined over F_q"
    } else {
        ", conjugate to the b = 0 case over an extension"
    };
    let mut rec = ConstructionRecord::new(name, map, group, statement)
        .param("q", q)
        .param("a", f.format(a))
        .param("b", f.format(b));
    if let Some((ext, tau)) = conj {
        rec.parameters.insert("conjugator".into(), tau.format(&ext));
        // f^τ must be the b = 0 representative
        let base = affine_core(name, f, q, a, Fe::ZERO)?.map.base_change(&ext)?;
        let fe = rec.map.base_change(&ext)?;
        rec.witnesses.push(("f conjugated by z+c is the b = 0 map".into(), fe.conjugate(&tau) == base));
    }
    Ok(rec)
}

/// `ψ(z^q - z) + z` with `ψ = (a z + b)/(c z + d)`, `c ≠ 0`, `ad - bc ≠ 0`.
/// Claimed group: translations by F_q, together with `z -> -z + 2t + β`
/// when `a = 0` and `p > 2`, where `t` is a root of `z^q - z + d/c`.
pub fn fractional_psi_map(q: u64, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<ConstructionRecord> {
    let f = gf_q(q)?;
    if c.is_zero() {
        return Err(Error::Invalid("c must be nonzero".into()));
    }
    if f.sub(f.mul(a, d), f.mul(b, c)).is_zero() {
        return Err(Error::Invalid("psi is degenerate (ad - bc = 0)".into()));
    }
    let map = psi_map(&f, &upoly::trimmed(vec![b, a]), &upoly::trimmed(vec![d, c]), q)?;
    let dn = f.div(d, c)?;
    let p = f.p();
    let dihedral = a.is_zero() && p > 2;
    let (gfield, t) = if dihedral && !dn.is_zero() {
        let qs = q as usize;
        let mut poly = vec![Fe::ZERO; qs + 1];
        poly[0] = dn;
        poly[1] = f.neg(Fe::ONE);
        poly[qs] = Fe::ONE;
        let (ext, roots) = split_over(&f, &poly)?;
        let t = roots[0].0;
        (ext, t)
    } else {
        (f.clone(), Fe::ZERO)
    };
    let emb = Embedding::new(&f, &gfield)?;
    let mut els = Vec::new();
    for beta in f.elements() {
        let be = emb.apply(beta);
        els.push(Mobius::translation(be));
        if dihedral {
            let two_t = gfield.add(t, t);
            els.push(Mobius::affine(&gfield, gfield.neg(Fe::ONE), gfield.add(two_t, be)));
        }
    }
    let group = GroupDesc::from_elements(&gfield, els);
    let statement = if dihedral {
        format!("Aut(f) is dihedral of order {}", 2 * q)
    } else {
        format!("Aut(f) is cyclic of order {q}")
    };
    let rec = ConstructionRecord::new("fractional_psi_map", map, group, statement)
        .param("q", q)
        .param("a", f.format(a))
        .param("b", f.format(b))
        .param("c", f.format(c))
        .param("d", f.format(d));
    Ok(rec)
}

/// `∏_{λ ∈ Λ} (z - λ)^(n+1) + z` where `Λ` is the GF(p)-span of `basis` in
/// `field`. Claimed group: `{a z + b : a ∈ μ_n, b ∈ Λ}`.
pub fn semi_elementary_map(field: &Field, basis: &[Fe], n: u64) -> Result<ConstructionRecord> {
    let p = field.p() as u64;
    if n == 0 || (n > 1 && n % p == 0) {
        return Err(Error::CharDivides(n));
    }
    let lambda = crate::projline::additive_span(field, basis);
    let prod = upoly::from_roots(field, &lambda);
    let mut poly = upoly::pow(field, &prod, n + 1);
    poly = upoly::add(field, &poly, &upoly::x());
    let map = RatMap::from_upolys(field, &poly, &[Fe::ONE])?;
    // μ_n may need an extension
    let e = unity_extension_degree(field, n);
    if e > EXT_CAP {
        return Err(Error::NoRootsOfUnity(n));
    }
    let gfield = gf(field.p(), field.k() * e)?;
    let emb = Embedding::new(field, &gfield)?;
    let group = semi_elementary_subgroup(&gfield, &emb.apply_all(basis), n)?;
    let statement = format!(
        "Aut(f) is the semi-elementary group of order {}",
        lambda.len() as u64 * n
    );
    Ok(ConstructionRecord::new("semi_elementary_map", map, group, statement)
        .param("field", format!("GF({}^{})", field.p(), field.k()))
        .param(
            "basis",
            basis.iter().map(|&b| field.format(b)).collect::<Vec<_>>().join(","),
        )
        .param("n", n))
}

fn least_nonsquare(f: &FieldCtx) -> Fe {
    f.elements()
        .find(|&x| !x.is_zero() && !f.is_square(x))
        .expect("odd field has non-squares")
}

/// Doyle-McMullen map of `(u2^b, u1^a)` with `a = (q(q-3)+4)/2`,
/// `b = (q-1)/2`, over GF(q), `q` odd. Claimed group: PSL2(F_q).
pub fn psl2_map(q: u64) -> Result<ConstructionRecord> {
    if q % 2 == 0 {
        return Err(Error::Invalid("q must be odd".into()));
    }
    let f = gf_q(q)?;
    let (u1, u2) = fundamental_sl2_invariants(&f, q)?;
    let a = (q * (q - 3) + 4) / 2;
    let b = (q - 1) / 2;
    let map = dm_map(&u2.pow(b), &u1.pow(a))?;
    let group = standard_subgroup(&f, GroupKind::PSL2(q))?;
    let min = psl2_min_degree(q)?;
    let alpha = least_nonsquare(&f);
    let tau = Mobius::scaling(&f, alpha);
    let mut rec = ConstructionRecord::new(
        "psl2_map",
        map,
        group,
        format!("Aut(f) is PSL2(F_{q}), in the least possible degree {min}"),
    )
    .param("q", q)
    .param("a", a)
    .param("b", b);
    let deg = rec.map.degree() as u64;
    rec.witnesses.push((format!("degree {deg} equals {min}"), deg == min));
    rec.witnesses.push((
        format!("[{} x : y] is not an automorphism", f.format(alpha)),
        !rec.map.is_automorphism(&tau),
    ));
    Ok(rec)
}

/// `ψ(z^p - z) + z` with `ψ = c z^m / ((z^(p-1) + 1)^((p-1)/2) + c z^(m-1))`,
/// `m = (p^2 - 3p + 4)/2`. Claimed group: PSL2(F_p). Records the fixed-point
/// multiplier spectrum.
pub fn psl2_prime_map(p: u64, c: Fe) -> Result<ConstructionRecord> {
    if p % 2 == 0 || prime_power(p).is_none_or(|(_, k)| k != 1) {
        return Err(Error::Invalid("p must be an odd prime".into()));
    }
    let f = gf(p as u32, 1)?;
    if c.is_zero() {
        return Err(Error::Invalid("c must be nonzero".into()));
    }
    let m = ((p * p - 3 * p + 4) / 2) as usize;
    let mut num = vec![Fe::ZERO; m + 1];
    num[m] = c;
    let mut zp1 = vec![Fe::ZERO; p as usize];
    zp1[0] = Fe::ONE;
    zp1[p as usize - 1] = f.add(zp1[p as usize - 1], Fe::ONE);
    let mut den = upoly::pow(&f, &zp1, (p - 1) / 2);
    let mut czm1 = vec![Fe::ZERO; m];
    czm1[m - 1] = c;
    den = upoly::add(&f, &den, &czm1);
    let map = psi_map(&f, &num, &den, p)?;
    let group = standard_subgroup(&f, GroupKind::PSL2(p))?;
    let mut rec = ConstructionRecord::new(
        "psl2_prime_map",
        map,
        group,
        format!("Aut(f) is PSL2(F_{p})"),
    )
    .param("p", p)
    .param("c", f.format(c))
    .param("m", m);
    rec.spectrum = Some(multiplier_spectrum(&rec.map)?);
    Ok(rec)
}

/// Sorted fixed-point multipliers with multiplicity, over the splitting field
/// of the fixed-point form.
pub fn multiplier_spectrum(f: &RatMap) -> Result<(Field, Vec<Fe>)> {
    let form = f.fixed_point_form();
    let e = upoly::splitting_degree(f.field(), &form.to_upoly());
    let ext = gf(f.field().p(), f.field().k() * e)?;
    let s = f.multiplier_spectrum(&ext)?;
    Ok((ext, s))
}

/// `1/z^(n-1) + z`. Claimed group: `<z -> ζ_n z>`.
pub fn cyclic_map(n: u64, p: u32) -> Result<ConstructionRecord> {
    let f = gf(p, 1)?;
    if n < 2 {
        return Err(Error::Invalid("n must be at least 2".into()));
    }
    if n % p as u64 == 0 {
        return Err(Error::CharDivides(n));
    }
    let n_us = n as usize;
    let mut num = vec![Fe::ZERO; n_us + 1];
    num[0] = Fe::ONE;
    num[n_us] = Fe::ONE;
    let mut den = vec![Fe::ZERO; n_us];
    den[n_us - 1] = Fe::ONE;
    let map = RatMap::from_upolys(&f, &num, &den)?;
    let group = standard_subgroup(&f, GroupKind::Cyclic(n))?;
    Ok(ConstructionRecord::new(
        "cyclic_map",
        map,
        group,
        format!("Aut(f) is cyclic of order {n}"),
    )
    .param("n", n)
    .param("p", p))
}

/// Which of the three dihedral constructions to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DihedralBranch {
    /// `z^(n+1)`, needs `n ≢ -1 (mod p)`.
    Power,
    /// `1/z^(n-1)`, needs `n ≢ 1 (mod p)` and `n > 2`.
    InversePower,
    /// `z (z^2 + a)/(a z^2 + 1)` for `n = 2`.
    Cubic,
}

impl std::str::FromStr for DihedralBranch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Self::Power),
            "inverse-power" => Ok(Self::InversePower),
            "cubic" => Ok(Self::Cubic),
            _ => Err(Error::Invalid(format!("unknown dihedral branch {s}"))),
        }
    }
}

/// First dihedral branch whose hypotheses hold.
pub fn default_dihedral_branch(n: u64, p: u64) -> Option<DihedralBranch> {
    if (n + 1) % p != 0 {
        Some(DihedralBranch::Power)
    } else if n % p != 1 && n > 2 {
        Some(DihedralBranch::InversePower)
    } else if n == 2 {
        Some(DihedralBranch::Cubic)
    } else {
        None
    }
}

/// A map with automorphism group `D_2n`. Claimed group: `<ζ_n z, 1/z>`.
pub fn dihedral_map(n: u64, p: u32, branch: Option<DihedralBranch>) -> Result<ConstructionRecord> {
    let pu = p as u64;
    if p == 2 {
        return Err(Error::Invalid("dihedral constructions need p > 2".into()));
    }
    if n < 2 {
        return Err(Error::Invalid("n must be at least 2".into()));
    }
    if n % pu == 0 {
        return Err(Error::CharDivides(n));
    }
    let branch = match branch {
        Some(b) => b,
        None => default_dihedral_branch(n, pu)
            .ok_or_else(|| Error::Internal("no dihedral branch applies".into()))?,
    };
    let base = gf(p, 1)?;
    let n_us = n as usize;
    let (field, map, a_used) = match branch {
        DihedralBranch::Power => {
            if (n + 1) % pu == 0 {
                return Err(Error::Invalid("power branch needs n != -1 mod p".into()));
            }
            let mut num = vec![Fe::ZERO; n_us + 2];
            num[n_us + 1] = Fe::ONE;
            (base.clone(), RatMap::from_upolys(&base, &num, &[Fe::ONE])?, None)
        }
        DihedralBranch::InversePower => {
            if n % pu == 1 || n <= 2 {
                return Err(Error::Invalid(
                    "inverse-power branch needs n != 1 mod p and n > 2".into(),
                ));
            }
            let mut den = vec![Fe::ZERO; n_us];
            den[n_us - 1] = Fe::ONE;
            (base.clone(), RatMap::from_upolys(&base, &[Fe::ONE], &den)?, None)
        }
        DihedralBranch::Cubic => {
            if n != 2 {
                return Err(Error::Invalid("cubic branch needs n = 2".into()));
            }
            // least a outside {-3, -1, 0, 1}, in GF(p) or else GF(p^2)
            let bad = |f: &FieldCtx, a: Fe| {
                [-3i64, -1, 0, 1].iter().any(|&e| f.from_i64(e) == a)
            };
            let field = if base.elements().any(|a| !bad(&base, a)) {
                base.clone()
            } else {
                gf(p, 2)?
            };
            let a = field.elements().find(|&a| !bad(&field, a)).expect("exists");
            let num = vec![Fe::ZERO, a, Fe::ZERO, Fe::ONE];
            let den = vec![Fe::ONE, Fe::ZERO, a];
            (field.clone(), RatMap::from_upolys(&field, &num, &den)?, Some(a))
        }
    };
    let group = standard_subgroup(&field, GroupKind::Dihedral(n))?;
    let mut rec = ConstructionRecord::new(
        "dihedral_map",
        map,
        group,
        format!("Aut(f) is dihedral of order {}", 2 * n),
    )
    .param("n", n)
    .param("p", p)
    .param("branch", format!("{branch:?}"));
    if let Some(a) = a_used {
        rec.parameters.insert("a".into(), field.format(a));
    }
    Ok(rec)
}

/// Platonic groups realized by reducing characteristic-zero maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Platonic {
    A4,
    S4,
    A5,
}

impl std::str::FromStr for Platonic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a4" => Ok(Self::A4),
            "s4" => Ok(Self::S4),
            "a5" => Ok(Self::A5),
            _ => Err(Error::Invalid(format!("unknown platonic group {s}"))),
        }
    }
}

/// Integer coefficients `(numerator, denominator)`, low-to-high.
pub type IntMap = (Vec<i64>, Vec<i64>);

fn sparse(terms: &[(usize, i64)]) -> Vec<i64> {
    let d = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut v = vec![0; d + 1];
    for &(e, c) in terms {
        v[e] += c;
    }
    v
}

/// The primary and fallback integer maps for S4 and A5.
pub fn platonic_integer_maps(kind: Platonic) -> Option<(IntMap, IntMap)> {
    match kind {
        Platonic::S4 => Some((
            (sparse(&[(5, -1), (1, 5)]), sparse(&[(4, 5), (0, -1)])),
            (sparse(&[(4, -7), (0, -1)]), sparse(&[(7, 1), (3, 7)])),
        )),
        Platonic::A5 => Some((
            (
                sparse(&[(11, 1), (6, 66), (1, -11)]),
                sparse(&[(10, -11), (5, -66), (0, 1)]),
            ),
            (
                sparse(&[(15, -57), (10, 247), (5, 171), (0, 1)]),
                sparse(&[(19, -1), (14, 171), (9, -247), (4, -57)]),
            ),
        )),
        Platonic::A4 => None,
    }
}

/// Resultant of two integer polynomials (low-to-high) as the determinant of
/// their Sylvester matrix, by fraction-free elimination.
pub fn int_resultant(a: &[i64], b: &[i64]) -> BigInt {
    let trim = |v: &[i64]| {
        let mut v = v.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (a, b) = (trim(a), trim(b));
    if a.is_empty() || b.is_empty() {
        return BigInt::zero();
    }
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    // rows of shifted a (high-to-low), then shifted b
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = BigInt::from(*c);
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = BigInt::from(*c);
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Prime factorization of a nonzero integer as `(sign, [(prime, exponent)])`.
pub fn factor_bigint(n: &BigInt) -> (i32, Vec<(u64, u32)>) {
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while m > BigInt::one() && p < 100_000 {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    (sign, out)
}

fn reduce_int(f: &FieldCtx, v: &[i64]) -> UPoly {
    upoly::trimmed(v.iter().map(|&c| f.from_i64(c)).collect())
}

/// A map with automorphism group A4, S4 or A5, for `p` not dividing the
/// group order. Claimed group: the standard representation.
pub fn platonic_map(kind: Platonic, p: u32) -> Result<ConstructionRecord> {
    let order = match kind {
        Platonic::A4 => 12,
        Platonic::S4 => 24,
        Platonic::A5 => 60,
    };
    if order % p as u64 == 0 {
        return Err(Error::CharDivides(order));
    }
    let base = gf(p, 1)?;
    match kind {
        Platonic::A4 => a4_map(&base),
        _ => {
            let (primary, fallback) = platonic_integer_maps(kind).expect("S4 and A5 have maps");
            let pb = BigInt::from(p);
            let bad = |m: &IntMap| {
                let deg = (m.0.len().max(m.1.len()) - 1) as u64;
                let r = int_resultant(&m.0, &m.1);
                let pm = deg % p as u64;
                (r % &pb).is_zero() || pm == 0 || pm == 1 || pm + 1 == p as u64
            };
            let (choice, which) = if bad(&primary) {
                (fallback, "fallback")
            } else {
                (primary, "primary")
            };
            if bad(&choice) && which == "fallback" {
                // the fallback is only vetted for its own prime; still report
                // the resultant condition
                let r = int_resultant(&choice.0, &choice.1);
                if (r % &pb).is_zero() {
                    return Err(Error::Invalid(format!(
                        "both maps degenerate modulo {p}"
                    )));
                }
            }
            let gk = if kind == Platonic::S4 { GroupKind::S4 } else { GroupKind::A5 };
            let group = standard_subgroup(&base, gk)?;
            let field = group.field.clone();
            let map = RatMap::from_upolys(
                &field,
                &reduce_int(&field, &choice.0),
                &reduce_int(&field, &choice.1),
            )?;
            let res = int_resultant(&choice.0, &choice.1);
            let mut rec = ConstructionRecord::new(
                "platonic_map",
                map,
                group,
                format!("Aut(f) is {kind:?}, of order {order}"),
            )
            .param("kind", format!("{kind:?}"))
            .param("p", p)
            .param("variant", which)
            .param("resultant", res.to_string());
            rec.witnesses.push((
                format!("resultant {res} is nonzero mod {p}"),
                !(res % &pb).is_zero(),
            ));
            Ok(rec)
        }
    }
}

fn a4_map(base: &Field) -> Result<ConstructionRecord> {
    let p = base.p();
    // need i and a square root of -3
    let e_i = unity_extension_degree(base, 4) as u64;
    let m3 = base.from_i64(-3);
    let e_s = if base.is_square(m3) { 1 } else { 2 };
    let field = gf(p, lcm_u64(e_i, e_s) as u32)?;
    let group = standard_subgroup(&field, GroupKind::A4)?;
    let g = &group.field;
    let roots = crate::ff::sqrt_all(g, g.from_i64(-3));
    // (s z^2 - 1)/(z^3 - s z), with the root s for which the group acts
    let mut chosen = None;
    for &s in &roots {
        let num = vec![g.neg(Fe::ONE), Fe::ZERO, s];
        let den = vec![Fe::ZERO, g.neg(s), Fe::ZERO, Fe::ONE];
        let map = RatMap::from_upolys(g, &num, &den)?;
        if group.elements.iter().all(|m| map.is_automorphism(m)) {
            chosen = Some((s, map));
            break;
        }
    }
    let (s, map) = chosen.ok_or_else(|| {
        Error::Internal("no square root of -3 makes the tetrahedral group act".into())
    })?;
    let i = primitive_root_of_unity(g, 4).expect("field contains i");
    let t = Mobius::scaling(g, i);
    let mut rec = ConstructionRecord::new(
        "platonic_map",
        map,
        group.clone(),
        "Aut(f) is A4, of order 12".into(),
    )
    .param("kind", "A4")
    .param("p", p)
    .param("sqrt_minus_3", g.format(s));
    rec.witnesses.push((
        "z -> i z (completing A4 to S4) is not an automorphism".into(),
        !rec.map.is_automorphism(&t),
    ));
    Ok(rec)
}

/// Closure of explicit generators as a claimed group, for ad hoc records.
pub fn claimed_from_gens(field: &Field, gens: &[Mobius]) -> Result<GroupDesc> {
    group_closure(field, gens, CLOSURE_CAP)
}
