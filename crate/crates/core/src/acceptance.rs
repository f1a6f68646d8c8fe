//! The acceptance suite: one verdict per numbered criterion.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::autgrp::{aut_group_bruteforce, conj_set};
use crate::constructions::{
    affine_psi_map, default_dihedral_branch, dihedral_map, factor_bigint, fractional_psi_map,
    int_resultant, platonic_integer_maps, platonic_map, power_map, psl2_map, psl2_prime_map,
    cyclic_map, semi_elementary_map, ConstructionRecord, Platonic,
};
use crate::error::Result;
use crate::ff::{gf, gf_q, upoly, Fe};
use crate::invariant::{
    assemble_form, decompose_form, dm_scan, fundamental_sl2_invariants, psl2_min_degree,
    Character, MatrixGroup, PolyForm,
};
use crate::moduli2::{census, symbolic_identities, CensusOptions, CensusTable};
use crate::projline::{standard_subgroup, GroupKind, GroupLabel};
use crate::ratmap::{HomPoly, RatMap};
use crate::sample::{random_hom, random_map, random_mobius};

/// Criteria that cannot hold as stated; their failures are reported but
/// do not fail the test harness.
pub const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[(
    5,
    "at p = 3 the two members c = 1, 2 of the prime family are conjugate, so their spectra coincide",
)];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub known_unattainable: bool,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let tag = match (self.passed, self.known_unattainable) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        format!(
            "[{tag}] criterion {}: {} ({:.1}s) {}",
            self.id, self.title, self.seconds, self.detail
        )
    }
}

/// Accumulates sub-checks of one criterion.
struct Check {
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Check {
        Check {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(what.into());
        }
    }

    fn attempt<T>(&mut self, r: Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.ok = false;
                self.notes.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

fn run_one(id: u32, title: &str, body: impl FnOnce(&mut Check) -> String) -> CriterionResult {
    let t = Instant::now();
    let mut c = Check::new();
    let summary = body(&mut c);
    let detail = if c.notes.is_empty() {
        summary
    } else {
        format!("{summary}; failures: {}", c.notes.join("; "))
    };
    CriterionResult {
        id,
        title: title.into(),
        passed: c.ok,
        detail,
        known_unattainable: KNOWN_UNATTAINABLE.iter().any(|k| k.0 == id),
        seconds: t.elapsed().as_secs_f64(),
    }
}

/// Brute force over `field` and agreement with the claim.
fn bruteforce_matches(
    c: &mut Check,
    rec: &ConstructionRecord,
    field: &crate::ff::Field,
    order: usize,
    label: Option<GroupLabel>,
) {
    let name = format!("{} {:?}", rec.name, rec.parameters);
    let Some(v) = c.attempt(rec.verify_bruteforce(field, 1000), &name) else {
        return;
    };
    c.expect(v.aut.order() == order, format!("{name}: order {} != {order}", v.aut.order()));
    c.expect(v.agrees, format!("{name}: group differs from claim"));
    if let Some(l) = label {
        c.expect(v.aut.group.has_label(l), format!("{name}: not labelled {l}"));
    }
}

fn auto_matches(c: &mut Check, rec: &ConstructionRecord, order: usize) {
    let name = format!("{} {:?}", rec.name, rec.parameters);
    let Some(v) = c.attempt(rec.verify(), &name) else {
        return;
    };
    c.expect(v.aut.order() == order, format!("{name}: order {} != {order}", v.aut.order()));
    c.expect(v.agrees, format!("{name}: group differs from claim"));
}

pub fn criterion_1() -> CriterionResult {
    run_one(1, "Aut(z^q) = PGL2(F_q), q in {2,3,4,5}", |c| {
        for q in [2u64, 3, 4, 5] {
            let Some(rec) = c.attempt(power_map(q, Fe::ONE), "power_map") else {
                continue;
            };
            let f = gf_q(q).expect("valid q");
            let n = ((q + 1) * q * (q - 1)) as usize;
            bruteforce_matches(c, &rec, &f, n, Some(GroupLabel::PGL2(q)));
            auto_matches(c, &rec, n);
        }
        "orders 6, 24, 60, 120 by brute force over GF(q) and over the closure".into()
    })
}

pub fn criterion_2() -> CriterionResult {
    run_one(2, "Aut(a z^q + (1-a) z) = B(F_q) for a != 1, q in {3,4,5}", |c| {
        let mut n = 0;
        for q in [3u64, 4, 5] {
            let f = gf_q(q).expect("valid q");
            for a in f.elements().filter(|&a| !a.is_zero() && a != Fe::ONE) {
                let Some(rec) = c.attempt(power_map(q, a), "power_map") else {
                    continue;
                };
                let order = (q * (q - 1)) as usize;
                bruteforce_matches(c, &rec, &f, order, Some(GroupLabel::Borel(q)));
                auto_matches(c, &rec, order);
                n += 1;
            }
            // affine variant, conjugate over an extension
            let b = Fe::ONE;
            let a = f.primitive();
            if a != Fe::ONE {
                if let Some(rec) = c.attempt(affine_psi_map(q, a, b), "affine_psi_map") {
                    auto_matches(c, &rec, (q * (q - 1)) as usize);
                    c.expect(rec.witnesses_hold(), "affine conjugator witness");
                }
            }
        }
        format!("{n} values of a, each Borel of order q(q-1)")
    })
}

pub fn criterion_3() -> CriterionResult {
    run_one(3, "fractional psi maps: C_q, or D_2q when a = 0 and p > 2", |c| {
        let mut brute = 0;
        let mut auto = 0;
        for q in [2u64, 3, 5] {
            let f = gf_q(q).expect("valid q");
            let f2 = gf(f.p(), 2 * f.k()).expect("quadratic extension");
            let els: Vec<Fe> = f.elements().collect();
            let mut tuples = Vec::new();
            for &a in &els {
                for &b in &els {
                    for &d in &els {
                        if !f.sub(f.mul(a, d), b).is_zero() {
                            tuples.push((a, b, d));
                        }
                    }
                }
            }
            if q == 5 {
                // a spread of the 100 admissible tuples
                tuples = tuples.into_iter().step_by(9).collect();
            }
            for (a, b, d) in tuples {
                let Some(rec) = c.attempt(fractional_psi_map(q, a, b, Fe::ONE, d), "fractional_psi_map")
                else {
                    continue;
                };
                let dihedral = a.is_zero() && f.p() > 2;
                let (order, label) = if dihedral {
                    (2 * q as usize, GroupLabel::Dihedral(q))
                } else {
                    (q as usize, GroupLabel::Cyclic(q))
                };
                if rec.claimed_group.field.k() <= f2.k() && f2.k() % rec.claimed_group.field.k() == 0 {
                    bruteforce_matches(c, &rec, &f2, order, Some(label));
                    brute += 1;
                } else {
                    auto_matches(c, &rec, order);
                    auto += 1;
                }
            }
        }
        format!("{brute} maps by brute force over GF(q^2), {auto} with the conjugating root outside GF(q^2) over the closure")
    })
}

pub fn criterion_4() -> CriterionResult {
    run_one(4, "semi-elementary maps have exactly the constructed group", |c| {
        let cases: [(u32, u32, Vec<Fe>, u64); 4] = [
            (2, 1, vec![Fe::ONE], 1),
            (3, 1, vec![Fe::ONE], 1),
            (2, 2, vec![Fe::ONE, Fe(2)], 3),
            (3, 2, vec![Fe::ONE], 2),
        ];
        for (p, k, basis, n) in cases {
            let f = gf(p, k).expect("field");
            let Some(rec) = c.attempt(semi_elementary_map(&f, &basis, n), "semi_elementary_map") else {
                continue;
            };
            let order = rec.claimed_group.order();
            bruteforce_matches(c, &rec, &rec.claimed_group.field.clone(), order, None);
            auto_matches(c, &rec, order);
        }
        "(F2,1), (F3,1), (F4,3), (F3 in F9,2) equal elementwise".into()
    })
}

pub fn criterion_5() -> CriterionResult {
    run_one(5, "PSL2(F_3) in minimal degree 7; prime family spectra", |c| {
        let mut summary = Vec::new();
        if let Some(rec) = c.attempt(psl2_map(3), "psl2_map") {
            let min = psl2_min_degree(3).unwrap_or(0);
            c.expect(rec.map.degree() as u64 == min && min == 7, format!("degree {}", rec.map.degree()));
            c.expect(rec.witnesses_hold(), "non-square scaling is an automorphism");
            let f = gf(3, 1).expect("GF(3)");
            bruteforce_matches(c, &rec, &f, 12, Some(GroupLabel::PSL2(3)));
            auto_matches(c, &rec, 12);
            summary.push(format!("psl2_map(3) degree {}", rec.map.degree()));
        }
        let mut spectra = Vec::new();
        for cval in [1u32, 2] {
            if let Some(rec) = c.attempt(psl2_prime_map(3, Fe(cval)), "psl2_prime_map") {
                auto_matches(c, &rec, 12);
                if let Some((f, s)) = &rec.spectrum {
                    let shown: Vec<String> = s.iter().map(|&x| f.format(x)).collect();
                    summary.push(format!("c={cval} spectrum [{}]", shown.join(",")));
                    spectra.push((f.clone(), s.clone()));
                }
            }
        }
        if spectra.len() == 2 {
            let same = spectra[0].0.k() == spectra[1].0.k() && spectra[0].1 == spectra[1].1;
            c.expect(!same, "c = 1 and c = 2 have the same multiplier spectrum");
        }
        summary.join(", ")
    })
}

pub fn criterion_6() -> CriterionResult {
    run_one(6, "invariant-pair scan at q = 3: PSL2 first attained in degree 7", |c| {
        let Some(g) = c.attempt(MatrixGroup::sl2(3), "SL2(3)") else {
            return String::new();
        };
        let f = g.field.clone();
        let Some(target) = c.attempt(standard_subgroup(&f, GroupKind::PSL2(3)), "PSL2(3)") else {
            return String::new();
        };
        let Some(rows) = c.attempt(dm_scan(&g, &target, 2..=7, &Character::Trivial, 1_000_000), "scan")
        else {
            return String::new();
        };
        let low = rows.iter().filter(|r| r.target_degree <= 6).count();
        let low_hits = rows.iter().filter(|r| r.target_degree <= 6 && r.equals_target).count();
        let hits7 = rows.iter().filter(|r| r.target_degree == 7 && r.equals_target).count();
        c.expect(low_hits == 0, format!("{low_hits} pairs below degree 7 reach PSL2(3)"));
        c.expect(hits7 > 0, "no degree-7 pair reaches PSL2(3)");
        format!("{low} pairs in degrees 2..6 with no hit, {hits7} degree-7 pairs with Aut = PSL2(3)")
    })
}

pub fn criterion_7() -> CriterionResult {
    run_one(7, "cyclic and dihedral families", |c| {
        let mut n_cyc = 0;
        for p in [7u32, 11] {
            for n in 2u64..=6 {
                if let Some(rec) = c.attempt(cyclic_map(n, p), "cyclic_map") {
                    auto_matches(c, &rec, n as usize);
                    n_cyc += 1;
                }
            }
        }
        let mut n_dih = 0;
        for p in [3u32, 5, 7] {
            for n in 2u64..=6 {
                if n % p as u64 == 0 {
                    continue;
                }
                c.expect(default_dihedral_branch(n, p as u64).is_some(), format!("no branch for n={n}, p={p}"));
                if let Some(rec) = c.attempt(dihedral_map(n, p, None), "dihedral_map") {
                    auto_matches(c, &rec, 2 * n as usize);
                    n_dih += 1;
                }
            }
        }
        format!("{n_cyc} cyclic and {n_dih} dihedral cases")
    })
}

pub fn criterion_8() -> CriterionResult {
    run_one(8, "platonic groups, with fallbacks at p = 5 (S4) and p = 11 (A5)", |c| {
        let cases = [
            (Platonic::A4, 5u32, 12usize, ""),
            (Platonic::A4, 7, 12, ""),
            (Platonic::S4, 5, 24, "fallback"),
            (Platonic::S4, 7, 24, "primary"),
            (Platonic::S4, 11, 24, "primary"),
            (Platonic::A5, 7, 60, "primary"),
            (Platonic::A5, 11, 60, "fallback"),
            (Platonic::A5, 13, 60, "primary"),
        ];
        for (kind, p, order, variant) in cases {
            let Some(rec) = c.attempt(platonic_map(kind, p), "platonic_map") else {
                continue;
            };
            auto_matches(c, &rec, order);
            c.expect(rec.witnesses_hold(), format!("{kind:?} p={p} witness"));
            if !variant.is_empty() {
                c.expect(
                    rec.parameters.get("variant").map(String::as_str) == Some(variant),
                    format!("{kind:?} p={p} should use the {variant} map"),
                );
            }
        }
        let (s4p, s4f) = platonic_integer_maps(Platonic::S4).expect("S4 maps");
        let r1 = int_resultant(&s4p.0, &s4p.1);
        let r2 = int_resultant(&s4f.0, &s4f.1);
        let want1 = -(BigInt::from(2).pow(12) * BigInt::from(3).pow(4));
        let want2 = -(BigInt::from(2).pow(16) * BigInt::from(3).pow(4));
        c.expect(r1 == want1, format!("S4 primary resultant {r1}"));
        c.expect(r2 == want2, format!("S4 fallback resultant {r2}"));
        c.expect(factor_bigint(&r1) == (-1, vec![(2, 12), (3, 4)]), "S4 primary factorization");
        c.expect(factor_bigint(&r2) == (-1, vec![(2, 16), (3, 4)]), "S4 fallback factorization");
        let (a5p, a5f) = platonic_integer_maps(Platonic::A5).expect("A5 maps");
        let ra = factor_bigint(&int_resultant(&a5p.0, &a5p.1));
        c.expect(ra.1.iter().all(|&(q, _)| q <= 5), "A5 primary resultant has a prime above 5");
        let rb = int_resultant(&a5f.0, &a5f.1);
        c.expect(!(rb % BigInt::from(11)).is_zero(), "11 divides the A5 fallback resultant");
        format!("S4 resultants {r1} and {r2}")
    })
}

fn census_checks(c: &mut Check, tables: &[CensusTable]) -> String {
    let mut notes = Vec::new();
    for t in tables {
        c.expect(t.all_agree(), format!("q={} census disagrees with the verdict", t.q));
        c.expect(t.oracle_mismatches == 0, format!("q={} brute-force oracle mismatches", t.q));
        c.expect(t.discrepancies.is_empty(), format!("q={} discrepancies {:?}", t.q, t.discrepancies));
        let nontrivial = t.rows.iter().filter(|r| r.max_aut_order > 1).count();
        notes.push(format!("q={}: {} maps, {} points, {} nontrivial", t.q, t.maps, t.rows.len(), nontrivial));
        match t.q {
            2 => {
                let r00 = t.row("0", "0").map(|r| r.max_aut_order);
                let r01 = t.row("0", "1").map(|r| r.max_aut_order);
                c.expect(r00 == Some(6), format!("q=2 (0,0) order {r00:?}"));
                c.expect(r01 == Some(1), format!("q=2 (0,1) order {r01:?}"));
            }
            3 => {
                c.expect(t.rows.iter().all(|r| r.max_aut_order != 6), "order 6 in characteristic 3");
            }
            5 => {
                let cusp = t.row("4", "2").map(|r| r.max_aut_order);
                c.expect(cusp == Some(6), format!("q=5 cusp order {cusp:?}"));
            }
            _ => {}
        }
    }
    notes.join(", ")
}

pub fn criterion_9(tables: &[CensusTable]) -> CriterionResult {
    run_one(9, "census of quadratic maps matches the locus verdicts, q in {2,3,5}", |c| {
        census_checks(c, tables)
    })
}

pub fn criterion_10() -> CriterionResult {
    run_one(10, "symbolic identities over GF(p) and u2 u1 = x^(q^2) y - x y^(q^2)", |c| {
        let mut n = 0;
        for p in [2u32, 3, 5, 7, 11] {
            if let Some(ids) = c.attempt(symbolic_identities(p), "identities") {
                for (name, ok) in ids {
                    c.expect(ok, format!("p={p}: {name}"));
                    n += 1;
                }
            }
        }
        for q in [2u64, 3, 4, 5] {
            let f = gf_q(q).expect("valid q");
            if let Some((u1, u2)) = c.attempt(fundamental_sl2_invariants(&f, q), "invariants") {
                let qq = (q * q) as usize;
                let mut w = HomPoly::zero(&f, qq + 1);
                w.coeffs[qq] = Fe::ONE;
                w.coeffs[1] = f.neg(Fe::ONE);
                c.expect(u2.mul(&u1) == w, format!("q={q}: u2 u1 identity"));
                n += 1;
            }
        }
        format!("{n} identities")
    })
}

pub fn criterion_11(tables: &[CensusTable]) -> CriterionResult {
    run_one(11, "property suites", |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // decomposition round trip
        let mut forms = 0;
        for p in [3u32, 5, 7] {
            let f = gf(p, 1).expect("prime field");
            let mut done = 0;
            while done < 100 {
                let n = 1 + (done % 7);
                if (n + 1) % p as usize == 0 {
                    done += 1;
                    continue;
                }
                let theta = PolyForm::One {
                    e1: random_hom(&f, n, &mut rng),
                    e2: random_hom(&f, n, &mut rng),
                };
                if let Some((bf, bg)) = c.attempt(decompose_form(&theta), "decompose_form") {
                    let back = assemble_form(&bf, &bg);
                    c.expect(
                        back.map(|b| b.coeff_vec() == theta.coeff_vec()).unwrap_or(false),
                        format!("p={p}: round trip"),
                    );
                }
                done += 1;
                forms += 1;
            }
            let mut fix = HomPoly::zero(&f, p as usize - 1);
            fix.coeffs[0] = Fe::ONE;
            let bad = PolyForm::One {
                e1: fix,
                e2: HomPoly::zero(&f, p as usize - 1),
            };
            c.expect(decompose_form(&bad).is_err(), format!("p={p}: y^(p-1) dx accepted"));
        }
        // coset law
        let mut pairs = 0;
        while pairs < 50 {
            let q = [3u64, 4, 5, 7][pairs % 4];
            let f = gf_q(q).expect("valid q");
            let d = 2 + pairs % 2;
            let m = random_map(&f, d, &mut rng);
            let a = random_mobius(&f, &mut rng);
            let g = m.conjugate(&a);
            let aut = c.attempt(aut_group_bruteforce(&m, &f, 1000), "aut");
            let set = c.attempt(conj_set(&m, &g, &f, 1000), "conj_set");
            if let (Some(aut), Some(set)) = (aut, set) {
                let mut coset: Vec<_> = aut.group.elements.iter().map(|b| b.compose(&f, &a)).collect();
                coset.sort();
                c.expect(set == coset, format!("coset law fails for {} over GF({q})", m.format()));
            }
            pairs += 1;
        }
        // spectrum invariance
        for i in 0..100 {
            let q = [3u64, 5, 7, 4][i % 4];
            let f = gf_q(q).expect("valid q");
            let m = random_map(&f, 2 + i % 2, &mut rng);
            let a = random_mobius(&f, &mut rng);
            let e = upoly::splitting_degree(&f, &m.fixed_point_form().to_upoly());
            let ext = gf(f.p(), f.k() * e).expect("splitting field");
            let s1 = m.multiplier_spectrum(&ext);
            let s2 = m.conjugate(&a).multiplier_spectrum(&ext);
            c.expect(s1.is_ok() && s1.ok() == s2.ok(), format!("spectrum changes under conjugation: {}", m.format()));
        }
        // sigma identity on census maps
        let maps: usize = tables.iter().map(|t| t.maps).sum();
        let fails: usize = tables.iter().map(|t| t.sigma_identity_failures).sum();
        c.expect(maps > 0 && fails == 0, format!("{fails} census maps violate s1 = s3 + 2"));
        // quadratic twist
        for q in [2u64, 3, 5] {
            let f = gf_q(q).expect("valid q");
            let f2 = gf(f.p(), 2 * f.k()).expect("extension");
            let qs = q as usize;
            let mut zq = vec![Fe::ZERO; qs + 1];
            zq[qs] = Fe::ONE;
            let a = RatMap::from_upolys(&f, &zq, &[Fe::ONE]).expect("z^q");
            let b = RatMap::from_upolys(&f, &[Fe::ONE], &zq).expect("1/z^q");
            let over_f2 = c.attempt(conj_set(&a, &b, &f2, 1000), "conj_set");
            let over_f = c.attempt(conj_set(&a, &b, &f, 1000), "conj_set");
            let expect = (q * q * q - q) as usize;
            if let (Some(x), Some(y)) = (over_f2, over_f) {
                c.expect(x.len() == expect, format!("q={q}: {} conjugators over GF(q^2)", x.len()));
                c.expect(y.is_empty(), format!("q={q}: conjugate over GF(q)"));
            }
        }
        format!("{forms} forms, 50 coset pairs, 100 spectra, {maps} census maps, 3 twists")
    })
}

/// The three census tables used by criteria 9 and 11.
pub fn census_tables() -> Result<Vec<CensusTable>> {
    [2u64, 3, 5]
        .into_iter()
        .map(|q| {
            census(
                q,
                CensusOptions {
                    oracle_bound: 5,
                    ..CensusOptions::default()
                },
            )
        })
        .collect()
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionResult> {
    let t = Instant::now();
    let tables = census_tables();
    let census_secs = t.elapsed().as_secs_f64();
    let mut out = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    match tables {
        Ok(t) => {
            let mut r9 = criterion_9(&t);
            r9.seconds += census_secs;
            out.push(r9);
            out.push(criterion_10());
            out.push(criterion_11(&t));
        }
        Err(e) => {
            for (id, title) in [(9, "census"), (11, "property suites")] {
                out.push(CriterionResult {
                    id,
                    title: title.into(),
                    passed: false,
                    detail: format!("census failed: {e}"),
                    known_unattainable: false,
                    seconds: census_secs,
                });
            }
            out.push(criterion_10());
            out.sort_by_key(|r| r.id);
        }
    }
    out
}
