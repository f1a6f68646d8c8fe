use p1dyn::autgrp::*;
use p1dyn::constructions::*;
use p1dyn::ff::*;
use p1dyn::projline::*;
use p1dyn::ratmap::*;
use p1dyn::sample::{random_map, random_mobius};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn map(f: &Field, s: &str) -> RatMap {
    parse_map(f, s).unwrap()
}

fn brute(f: &RatMap, search: &Field) -> AutResult {
    aut_group_bruteforce(f, search, PGL2_ENUM_BOUND).unwrap()
}

#[test]
fn power_map_groups() {
    let f3 = gf(3, 1).unwrap();
    let r = aut_group(&map(&f3, "z^3"), &f3).unwrap();
    assert_eq!(r.order(), 24);
    assert!(r.group.has_label(GroupLabel::PGL2(3)));
    assert!(r.certified_complete);

    let borel = map(&f3, "2*z^3 - z");
    let r = aut_group(&borel, &f3).unwrap();
    assert_eq!(r.order(), 6);
    assert!(r.group.has_label(GroupLabel::Borel(3)));
    assert_eq!(r.group.elements, brute(&borel, &f3).group.elements);
}

#[test]
fn cyclic_example_against_brute_force() {
    let f5 = gf(5, 1).unwrap();
    let g = map(&f5, "z^3 + z");
    let r = aut_group(&g, &f5).unwrap();
    let b = brute(&g, &f5);
    assert_eq!(r.group.elements, b.group.elements);
    assert_eq!(r.order(), 2);
    let neg = Mobius::scaling(&f5, f5.from_i64(-1));
    assert!(r.group.contains(&neg));
}

#[test]
fn brute_force_examples() {
    let f7 = gf(7, 1).unwrap();
    let r = brute(&map(&f7, "1/z^2"), &f7);
    assert_eq!(r.order(), 6);
    assert!(r.group.has_label(GroupLabel::Dihedral(3)));

    let f2 = gf(2, 1).unwrap();
    assert_eq!(brute(&map(&f2, "z^2 + z"), &f2).order(), 1);

    let f4 = gf(2, 2).unwrap();
    let r = brute(&map(&f4, "(z^2 - z)^2 + z"), &f4);
    assert_eq!(r.order(), 2);
    assert!(r.group.contains(&Mobius::translation(Fe::ONE)));

    assert!(aut_group_bruteforce(&map(&f7, "z^2"), &gf(3, 3).unwrap(), 9).is_err());
}

#[test]
fn conj_set_examples() {
    let f5 = gf(5, 1).unwrap();
    let g = map(&f5, "z^2 + 2");
    let aut = brute(&g, &f5);
    assert_eq!(conj_set(&g, &g, &f5, 25).unwrap(), aut.group.elements);

    let f9 = gf(3, 2).unwrap();
    let c = conj_set(&map(&f9, "z^3"), &map(&f9, "1/z^3"), &f9, 25).unwrap();
    assert_eq!(c.len(), 24);

    // z^2 sits at (2, 0); z^2 + 1 at (2, 2) over GF(5): different moduli points.
    let c = conj_set(&map(&f5, "z^2"), &map(&f5, "z^2 + 1"), &f5, 25).unwrap();
    assert!(c.is_empty());
    assert!(conj_set(&map(&f5, "z^2"), &map(&f5, "z^3"), &f5, 25).is_err());
}

#[test]
fn triple_method_matches_brute_force_for_conjugacy() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for q in [5u64, 7, 9] {
        let f = gf_q(q).unwrap();
        for _ in 0..10 {
            let g = random_map(&f, 3, &mut rng);
            let s = random_mobius(&f, &mut rng);
            let h = g.conjugate(&s);
            let by_brute = conj_set(&g, &h, &f, 25).unwrap();
            assert!(by_brute.contains(&s));
            match conj_set(&g, &h, &f, 0) {
                Ok(by_triples) => assert_eq!(by_triples, by_brute),
                Err(e) => assert!(matches!(e, p1dyn::Error::BoundExceeded(_))),
            }
        }
    }
}

/// Every construction whose group lives over a field with at most nine
/// elements: the invariant-set method and brute force give identical sets.
#[test]
fn catalog_agrees_with_brute_force() {
    let mut recs = Vec::new();
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = gf_q(q).unwrap();
        recs.push(power_map(q, Fe::ONE).unwrap());
        if q > 2 {
            recs.push(power_map(q, f.primitive()).unwrap());
        }
        if q <= 5 {
            recs.push(fractional_psi_map(q, Fe::ZERO, Fe::ONE, Fe::ONE, Fe::ZERO).unwrap());
            recs.push(fractional_psi_map(q, Fe::ONE, Fe::ZERO, Fe::ONE, Fe::ONE).unwrap());
        }
    }
    let f2 = gf(2, 1).unwrap();
    recs.push(semi_elementary_map(&f2, &[Fe::ONE], 1).unwrap());
    let f3 = gf(3, 1).unwrap();
    recs.push(semi_elementary_map(&f3, &[Fe::ONE], 1).unwrap());
    recs.push(psl2_map(3).unwrap());
    recs.push(psl2_prime_map(3, Fe(1)).unwrap());
    recs.push(cyclic_map(2, 5).unwrap());
    recs.push(cyclic_map(2, 3).unwrap());
    recs.push(cyclic_map(4, 5).unwrap());
    recs.push(dihedral_map(3, 7, None).unwrap());
    recs.push(dihedral_map(2, 5, None).unwrap());
    let mut checked = 0;
    for rec in &recs {
        let field = rec.claimed_group.field.clone();
        if field.q() > 9 {
            continue;
        }
        let g = rec.map_on_group_field().unwrap();
        let a = aut_group(&g, &field).unwrap();
        let b = brute(&g, &field);
        assert_eq!(a.group.elements, b.group.elements, "{}", rec.name);
        assert_eq!(b.group.elements, rec.claimed_group.elements, "{}", rec.name);
        checked += 1;
    }
    assert!(checked >= 20, "only {checked} records were small enough");
}

#[test]
fn auto_search_field_contains_the_full_group() {
    let f3 = gf(3, 1).unwrap();
    let r = aut_group_auto(&map(&f3, "z^3"), AutOptions::default()).unwrap();
    assert_eq!(r.order(), 24);
    let f7 = gf(7, 1).unwrap();
    // The rotation z -> zeta_3 z needs GF(49).
    let r = aut_group_auto(&map(&f7, "1/z^2"), AutOptions::default()).unwrap();
    assert_eq!(r.order(), 6);
    let f5 = gf(5, 1).unwrap();
    let r = aut_group_auto(&map(&f5, "1/z^2"), AutOptions::default()).unwrap();
    assert_eq!(r.order(), 6);
    assert!(r.search_field.q() >= 25);
}

fn small_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7]).prop_map(|q| gf_q(q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn every_reported_automorphism_commutes(f in small_field(), seed in any::<u64>(), d in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_map(&f, d, &mut rng);
        let r = aut_group(&g, &f).unwrap();
        for m in &r.group.elements {
            prop_assert_eq!(g.conjugate(m), g.clone());
        }
        prop_assert_eq!(&r.group.elements, &brute(&g, &f).group.elements);
    }

    #[test]
    fn conjugacy_sets_are_cosets(f in small_field(), seed in any::<u64>(), d in 2usize..4, related in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_map(&f, d, &mut rng);
        let h = if related {
            g.conjugate(&random_mobius(&f, &mut rng))
        } else {
            random_map(&f, d, &mut rng)
        };
        let aut = brute(&g, &f);
        let c = conj_set(&g, &h, &f, 25).unwrap();
        prop_assert!(c.is_empty() || c.len() == aut.order());
        if related {
            prop_assert!(!c.is_empty());
        }
        if let Some(a0) = c.first() {
            // Every element is aut * a0.
            for m in &aut.group.elements {
                prop_assert!(c.contains(&m.compose(&f, a0)));
            }
        }
    }

    #[test]
    fn aut_transforms_by_conjugation(f in small_field(), seed in any::<u64>(), d in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_map(&f, d, &mut rng);
        let s = random_mobius(&f, &mut rng);
        let a = brute(&g, &f).group;
        let b = brute(&g.conjugate(&s), &f).group;
        prop_assert_eq!(a.conjugate_by(&s).elements, b.elements);
    }

    #[test]
    fn order_p_automorphisms_force_degree_congruence(p in prop::sample::select(vec![2u32, 3, 5]), seed in any::<u64>(), d in 2usize..8) {
        let f = gf(p, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Bias toward maps with a translation symmetry: psi(z^p - z) + z.
        let g = if rng.gen_bool(0.5) && d > p as usize {
            let n = d / p as usize;
            let num: Vec<Fe> = (0..=n).map(|i| if i == n { Fe::ONE } else { p1dyn::sample::random_fe(&f, &mut rng) }).collect();
            match psi_map(&f, &num, &[Fe::ONE], p as u64) {
                Ok(m) if m.degree() >= 2 => m,
                _ => random_map(&f, d, &mut rng),
            }
        } else {
            random_map(&f, d, &mut rng)
        };
        let r = brute(&g, &f);
        if r.group.elements.iter().any(|m| m.order(&f) == p as u64) {
            let r = g.degree() as u32 % p;
            prop_assert!(r == 0 || r == 1 || r == p - 1);
        }
    }
}
