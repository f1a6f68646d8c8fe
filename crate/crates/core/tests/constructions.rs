use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use p1dyn::autgrp::{aut_group_auto, conj_set, AutOptions};
use p1dyn::constructions::*;
use p1dyn::ff::*;
use p1dyn::invariant::psl2_min_degree;
use p1dyn::projline::*;
use p1dyn::ratmap::*;
use p1dyn::Error;

fn agrees(rec: &ConstructionRecord) -> usize {
    let v = rec.verify().unwrap();
    assert!(v.agrees, "{} {:?}: got order {}", rec.name, rec.parameters, v.aut.order());
    assert!(rec.witnesses_hold(), "{} {:?}", rec.name, rec.witnesses);
    v.aut.order()
}

fn agrees_brute(rec: &ConstructionRecord, field: &Field) -> usize {
    let v = rec.verify_bruteforce(field, 49).unwrap();
    assert!(v.agrees, "{} {:?}: brute force order {}", rec.name, rec.parameters, v.aut.order());
    v.aut.order()
}

#[test]
fn power_maps() {
    assert_eq!(agrees(&power_map(3, Fe(1)).unwrap()), 24);
    let rec = power_map(3, Fe(2)).unwrap();
    assert_eq!(agrees(&rec), 6);
    assert!(rec.claimed_group.has_label(GroupLabel::Borel(3)));
    let rec = power_map(4, Fe(1)).unwrap();
    assert_eq!(rec.map.degree(), 4);
    assert_eq!(agrees_brute(&rec, &gf(2, 2).unwrap()), 60);
    assert_eq!(agrees_brute(&rec, &gf(2, 4).unwrap()), 60);
    assert!(power_map(3, Fe(0)).is_err());
}

#[test]
fn affine_psi_maps() {
    let rec = affine_psi_map(3, Fe(1), Fe(1)).unwrap();
    assert!(rec.witnesses_hold());
    assert_eq!(agrees(&rec), 24);
    let f27 = gf(3, 3).unwrap();
    let z3 = parse_map(&f27, "z^3").unwrap();
    let c = conj_set(&rec.map.base_change(&f27).unwrap(), &z3, &f27, 0).unwrap();
    assert_eq!(c.len(), 24);
    let f3 = gf(3, 1).unwrap();
    let c = conj_set(&rec.map, &parse_map(&f3, "z^3").unwrap(), &f3, 25).unwrap();
    assert!(c.is_empty());

    assert_eq!(agrees(&affine_psi_map(3, Fe(2), Fe(1)).unwrap()), 6);
    let rec = affine_psi_map(2, Fe(1), Fe(0)).unwrap();
    assert_eq!(agrees_brute(&rec, &gf(2, 1).unwrap()), 6);
}

#[test]
fn fractional_psi_maps() {
    let rec = fractional_psi_map(3, Fe(0), Fe(1), Fe(1), Fe(0)).unwrap();
    assert_eq!(rec.map.degree(), 4);
    assert_eq!(agrees(&rec), 6);
    assert!(rec.claimed_group.has_label(GroupLabel::Dihedral(3)));
    let rec = fractional_psi_map(3, Fe(1), Fe(0), Fe(1), Fe(1)).unwrap();
    assert_eq!(agrees(&rec), 3);
    let rec = fractional_psi_map(2, Fe(0), Fe(1), Fe(1), Fe(0)).unwrap();
    assert_eq!(agrees(&rec), 2);
    assert_eq!(agrees_brute(&rec, &gf(2, 2).unwrap()), 2);
    assert!(fractional_psi_map(3, Fe(1), Fe(1), Fe(1), Fe(1)).is_err());
    assert!(fractional_psi_map(3, Fe(1), Fe(1), Fe(0), Fe(1)).is_err());
}

#[test]
fn fractional_psi_degree_and_poles() {
    for q in [2u64, 3, 4, 5, 7] {
        let f = gf_q(q).unwrap();
        for (a, b, c, d) in [(0, 1, 1, 0), (1, 0, 1, 1), (1, 1, 1, 0), (0, 1, 1, 1)] {
            let (a, b, c, d) = (f.from_i64(a), f.from_i64(b), f.from_i64(c), f.from_i64(d));
            let Ok(rec) = fractional_psi_map(q, a, b, c, d) else { continue };
            assert_eq!(rec.map.degree() as u64, q + 1);
            let den = rec.map.coords().1.to_upoly();
            let (ext, _) = split_over(&f, &den).unwrap();
            let pre = rec.map.preimages(ProjPoint::Infinity, &ext).unwrap();
            // infinity is fixed, with q further simple preimages
            assert_eq!(pre.len() as u64, q + 1);
            assert!(pre.iter().any(|&(pt, m)| pt == ProjPoint::Infinity && m == 1));
        }
    }
}

#[test]
fn semi_elementary_maps() {
    let f3 = gf(3, 1).unwrap();
    let rec = semi_elementary_map(&f3, &[Fe(1)], 1).unwrap();
    assert_eq!(rec.map, parse_map(&f3, "(z^3 - z)^2 + z").unwrap());
    assert_eq!(agrees(&rec), 3);
    let f2 = gf(2, 1).unwrap();
    let rec = semi_elementary_map(&f2, &[Fe(1)], 1).unwrap();
    assert_eq!(rec.map.degree(), 4);
    assert_eq!(agrees_brute(&rec, &gf(2, 2).unwrap()), 2);
    let f4 = gf(2, 2).unwrap();
    let rec = semi_elementary_map(&f4, &[Fe(1), f4.basis_gen()], 3).unwrap();
    assert_eq!(rec.map.degree(), 16);
    assert_eq!(agrees(&rec), 12);
    let f9 = gf(3, 2).unwrap();
    assert!(semi_elementary_map(&f9, &[Fe(1)], 4).is_err());
}

#[test]
fn psl2_maps() {
    let rec = psl2_map(3).unwrap();
    assert_eq!(rec.map.degree() as u64, psl2_min_degree(3).unwrap());
    assert_eq!(agrees(&rec), 12);
    assert_eq!(agrees_brute(&rec, &gf(3, 2).unwrap()), 12);
    let rec = psl2_map(5).unwrap();
    assert_eq!(rec.map.degree() as u64, psl2_min_degree(5).unwrap());
    assert_eq!(rec.map.degree(), 41);
    assert_eq!(agrees(&rec), 60);
    assert!(psl2_map(2).is_err());
    assert!(psl2_map(4).is_err());
}

#[test]
fn psl2_prime_family() {
    let rec = psl2_prime_map(3, Fe(1)).unwrap();
    assert_eq!(rec.parameters["m"], "2");
    assert_eq!(rec.map.degree(), 7);
    assert_eq!(agrees(&rec), 12);
    assert_eq!(agrees_brute(&rec, &gf(3, 2).unwrap()), 12);
    let rec = psl2_prime_map(5, Fe(1)).unwrap();
    assert_eq!(rec.parameters["m"], "7");
    assert_eq!(agrees(&rec), 60);
    assert!(psl2_prime_map(3, Fe(0)).is_err());
    assert!(psl2_prime_map(9, Fe(1)).is_err());
}

/// At p = 3 the two members c = 1 and c = 2 are conjugate, so the family
/// collapses to a point and the spectra agree.
#[test]
fn psl2_prime_family_at_three_is_a_single_class() {
    let a = psl2_prime_map(3, Fe(1)).unwrap();
    let b = psl2_prime_map(3, Fe(2)).unwrap();
    assert_eq!(a.spectrum, b.spectrum);
    let f9 = gf(3, 2).unwrap();
    let c = conj_set(&a.map.base_change(&f9).unwrap(), &b.map.base_change(&f9).unwrap(), &f9, 9).unwrap();
    assert_eq!(c.len(), 12);
}

/// Over GF(5) every fixed point of every member is parabolic, so the
/// spectrum does not separate the family there either.
#[test]
fn psl2_prime_family_at_five_is_parabolic() {
    for c in 1..5 {
        let rec = psl2_prime_map(5, Fe(c)).unwrap();
        let (ext, s) = rec.spectrum.clone().unwrap();
        assert_eq!(s.len(), 42);
        assert!(s.iter().all(|&m| m == Fe::ONE));
        let (ext2, s2) = multiplier_spectrum(&rec.map).unwrap();
        assert_eq!((ext.q(), s), (ext2.q(), s2));
    }
}

#[test]
fn cyclic_maps() {
    let rec = cyclic_map(4, 7).unwrap();
    assert_eq!(rec.claimed_group.field.q(), 49);
    assert_eq!(agrees(&rec), 4);
    assert_eq!(agrees_brute(&rec, &gf(7, 2).unwrap()), 4);
    let rec = cyclic_map(2, 5).unwrap();
    let f5 = gf(5, 1).unwrap();
    assert_eq!(agrees_brute(&rec, &f5), 2);
    assert!(rec.claimed_group.contains(&Mobius::scaling(&f5, f5.from_i64(-1))));
    assert!(matches!(cyclic_map(3, 3), Err(Error::CharDivides(3))));
    for p in [5u32, 7, 11] {
        for n in 2..=6u64 {
            if n % p as u64 != 0 {
                assert_eq!(agrees(&cyclic_map(n, p).unwrap()), n as usize);
            }
        }
    }
}

#[test]
fn dihedral_maps() {
    let f5 = gf(5, 1).unwrap();
    let rec = dihedral_map(3, 5, None).unwrap();
    assert_eq!(rec.map, parse_map(&f5, "z^4").unwrap());
    assert_eq!(agrees(&rec), 6);
    let f3 = gf(3, 1).unwrap();
    let rec = dihedral_map(4, 3, None).unwrap();
    assert_eq!(rec.map, parse_map(&f3, "z^5").unwrap());
    assert_eq!(agrees(&rec), 8);
    let rec = dihedral_map(2, 5, Some(DihedralBranch::Cubic)).unwrap();
    assert_eq!(rec.parameters["a"], "3");
    assert_eq!(rec.map, parse_map(&f5, "z*(z^2 + 3)/(3*z^2 + 1)").unwrap());
    assert_eq!(agrees_brute(&rec, &f5), 4);
    assert_eq!(default_dihedral_branch(2, 3), Some(DihedralBranch::Cubic));
    let rec = dihedral_map(2, 3, None).unwrap();
    assert_eq!(rec.claimed_group.field.q(), 9);
    assert_eq!(agrees(&rec), 4);
    assert_eq!(default_dihedral_branch(4, 5), Some(DihedralBranch::InversePower));
    assert!(dihedral_map(3, 2, None).is_err());
    for p in [3u32, 5, 7] {
        for n in 2..=7u64 {
            if n % p as u64 != 0 {
                assert_eq!(agrees(&dihedral_map(n, p, None).unwrap()), 2 * n as usize, "n={n} p={p}");
            }
        }
    }
}

#[test]
fn platonic_maps() {
    let rec = platonic_map(Platonic::S4, 7).unwrap();
    assert_eq!(rec.map.degree(), 5);
    assert_eq!(rec.parameters["variant"], "primary");
    assert_eq!(agrees(&rec), 24);
    let rec = platonic_map(Platonic::S4, 5).unwrap();
    assert_eq!(rec.map.degree(), 7);
    assert_eq!(rec.parameters["variant"], "fallback");
    assert_eq!(agrees(&rec), 24);
    let rec = platonic_map(Platonic::A5, 11).unwrap();
    assert_eq!(rec.parameters["variant"], "fallback");
    assert_eq!(rec.map.degree(), 19);
    assert_eq!(agrees(&rec), 60);
    let rec = platonic_map(Platonic::A5, 7).unwrap();
    assert_eq!(rec.map.degree(), 11);
    assert_eq!(agrees(&rec), 60);
    for p in [5u32, 7, 11, 13] {
        assert_eq!(agrees(&platonic_map(Platonic::A4, p).unwrap()), 12);
    }
    assert!(platonic_map(Platonic::A5, 5).is_err());
    assert!(platonic_map(Platonic::S4, 3).is_err());
    assert!(platonic_map(Platonic::A4, 2).is_err());
}

#[test]
fn platonic_resultants() {
    let (s4, s4b) = platonic_integer_maps(Platonic::S4).unwrap();
    let r = int_resultant(&s4.0, &s4.1);
    assert_eq!(r, BigInt::from(-331776));
    assert_eq!(factor_bigint(&r), (-1, vec![(2, 12), (3, 4)]));
    let r = int_resultant(&s4b.0, &s4b.1);
    assert_eq!(factor_bigint(&r), (-1, vec![(2, 16), (3, 4)]));
    let (a5, a5b) = platonic_integer_maps(Platonic::A5).unwrap();
    for m in [a5, a5b] {
        let (_, fs) = factor_bigint(&int_resultant(&m.0, &m.1));
        assert!(fs.iter().all(|&(p, _)| p <= 5), "{fs:?}");
    }
}

/// `Res(a, b) = lc(a)^deg(b) · ∏ b(α)` over the roots of `a`, computed in
/// a splitting field; compared with the integer determinant mod p.
fn resultant_mod_p(a: &[i64], b: &[i64], p: u32) -> Option<Fe> {
    let f = gf(p, 1).unwrap();
    let red = |v: &[i64]| upoly::trimmed(v.iter().map(|&c| f.from_i64(c)).collect::<Vec<_>>());
    let (ra, rb) = (red(a), red(b));
    let (da, db) = (upoly::deg(&ra)?, upoly::deg(&rb)?);
    if da + 1 != a.len() || db + 1 != b.len() {
        return None;
    }
    let (ext, roots) = split_over(&f, &ra).ok()?;
    let e = Embedding::new(&f, &ext).unwrap();
    let eb = e.apply_all(&rb);
    let lc = e.apply(*ra.last().unwrap());
    let mut acc = ext.pow(lc, db as u64);
    for (r, m) in roots {
        acc = ext.mul(acc, ext.pow(upoly::eval(&ext, &eb, r), m as u64));
    }
    e.restrict(acc)
}

#[test]
fn integer_resultants_agree_with_root_products() {
    let (s4, s4b) = platonic_integer_maps(Platonic::S4).unwrap();
    let (a5, a5b) = platonic_integer_maps(Platonic::A5).unwrap();
    let extra: (Vec<i64>, Vec<i64>) = (vec![1, 2, 0, 3], vec![-4, 0, 5]);
    let mut checked = 0;
    for m in [s4, s4b, a5, a5b, extra] {
        let r = int_resultant(&m.0, &m.1);
        for p in [7u32, 11, 13, 17, 19, 23] {
            let Some(want) = resultant_mod_p(&m.0, &m.1, p) else { continue };
            let pb = BigInt::from(p);
            let mut red = r.clone() % &pb;
            if red.is_negative() {
                red += &pb;
            }
            assert_eq!(Fe(red.to_u32().unwrap()), want, "p = {p}");
            checked += 1;
        }
    }
    assert!(checked >= 12, "only {checked} reductions checked");
    assert!(int_resultant(&[1, 1], &[1, 1]).is_zero());
}

#[test]
fn one_over_power_maps_have_an_extra_involution() {
    for p in [5u32, 7] {
        let f = gf(p, 1).unwrap();
        for n in 3..=4usize {
            for a in 1..p {
                let mut den = vec![Fe::ZERO; n];
                den[n - 1] = Fe::ONE;
                let g = RatMap::from_upolys(&f, &[Fe(a)], &den).unwrap();
                let r = aut_group_auto(&g, AutOptions::default()).unwrap();
                let fx = &r.search_field;
                let swaps = r.group.elements.iter().any(|m| {
                    m.apply(fx, ProjPoint::Finite(Fe::ZERO)) == ProjPoint::Infinity
                });
                assert!(swaps, "a={a} n={n} p={p}");
                assert!(r.order() > n - 1);
            }
        }
    }
}

#[test]
fn records_serialize() {
    let rec = power_map(3, Fe(1)).unwrap();
    let j = rec.to_json();
    assert_eq!(j["claimed_group"]["order"], 24);
    assert_eq!(j["name"], "power_map");
    assert_eq!(j["map"]["degree"], 3);
    let v = rec.verify().unwrap().to_json();
    assert_eq!(v["agrees"], true);
}
