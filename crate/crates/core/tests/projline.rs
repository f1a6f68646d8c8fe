use std::collections::BTreeMap;

use p1dyn::ff::*;
use p1dyn::projline::*;
use p1dyn::sample::{random_fe, random_mobius};
use p1dyn::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pt(x: u32) -> ProjPoint {
    ProjPoint::Finite(Fe(x))
}

/// Element orders computed by repeated composition, independent of the
/// library's recognizer.
fn histogram(f: &FieldCtx, els: &[Mobius]) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for m in els {
        let mut acc = *m;
        let mut n = 1u64;
        while !acc.is_identity() {
            acc = acc.compose(f, m);
            n += 1;
        }
        *h.entry(n).or_insert(0) += 1;
    }
    h
}

#[test]
fn apply_examples() {
    let f3 = gf(3, 1).unwrap();
    let f = &f3;
    for x in f.elements() {
        assert_eq!(Mobius::IDENTITY.apply(f, pt(x.0)), pt(x.0));
    }
    assert_eq!(Mobius::reciprocal().apply(f, ProjPoint::Infinity), pt(0));
    assert_eq!(Mobius::translation(Fe(1)).apply(f, pt(2)), pt(0));
}

#[test]
fn three_point_examples() {
    let f = gf(7, 1).unwrap();
    let std = [pt(0), pt(1), ProjPoint::Infinity];
    let id = mobius_from_three_points(&f, std, std).unwrap();
    assert!(id.is_identity());
    let flip = [ProjPoint::Infinity, pt(1), pt(0)];
    let m = mobius_from_three_points(&f, std, flip).unwrap();
    assert_eq!(m, Mobius::reciprocal());
    for i in 0..3 {
        assert_eq!(m.apply(&f, std[i]), flip[i]);
    }
    assert!(matches!(
        mobius_from_three_points(&f, [pt(0), pt(0), pt(1)], std),
        Err(Error::RepeatedPoint)
    ));
}

#[test]
fn pgl2_sizes() {
    for (p, k) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let f = gf(p, k).unwrap();
        let q = f.q() as usize;
        let g = enumerate_pgl2(&f, PGL2_ENUM_BOUND).unwrap();
        assert_eq!(g.order(), q * q * q - q);
        assert!(g.is_closed());
        assert!(g.has_label(GroupLabel::PGL2(q as u64)));
    }
    let f = gf(29, 1).unwrap();
    assert!(matches!(enumerate_pgl2(&f, PGL2_ENUM_BOUND), Err(Error::BoundExceeded(_))));
}

#[test]
fn pgl2_of_three_is_labelled_both_ways() {
    let f = gf(3, 1).unwrap();
    let g = enumerate_pgl2(&f, PGL2_ENUM_BOUND).unwrap();
    assert!(g.has_label(GroupLabel::PGL2(3)));
    assert!(g.has_label(GroupLabel::S4));
    let h = histogram(&f, &g.elements);
    assert_eq!(h.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3, 4]);
}

#[test]
fn closure_examples() {
    let f5 = gf(5, 1).unwrap();
    let g = group_closure(&f5, &[Mobius::translation(Fe(1))], CLOSURE_CAP).unwrap();
    assert_eq!(g.order(), 5);
    assert!(g.has_label(GroupLabel::Cyclic(5)));

    let f7 = gf(7, 1).unwrap();
    let neg = Mobius::scaling(&f7, f7.from_i64(-1));
    let g = group_closure(&f7, &[neg, Mobius::reciprocal()], CLOSURE_CAP).unwrap();
    assert_eq!(g.order(), 4);
    assert!(g.has_label(GroupLabel::Dihedral(2)));
    assert_eq!(histogram(&f7, &g.elements), BTreeMap::from([(1, 1), (2, 3)]));

    let gens = [Mobius::translation(Fe(1)), Mobius::scaling(&f5, Fe(2))];
    let g = group_closure(&f5, &gens, CLOSURE_CAP).unwrap();
    assert_eq!(g.order(), 20);
    assert!(g.has_label(GroupLabel::Borel(5)));
    assert!(g.has_label(GroupLabel::SemiElementary(5, 4)));
    assert!(g.elements.iter().all(|m| m.apply(&f5, ProjPoint::Infinity) == ProjPoint::Infinity));

    let g = group_closure(&f5, &[Mobius::IDENTITY], CLOSURE_CAP).unwrap();
    assert!(g.has_label(GroupLabel::Cyclic(1)));
}

#[test]
fn octahedral_generators_over_gf5() {
    let f = gf(5, 1).unwrap();
    // 2 is a square root of -1 mod 5.
    let i = Fe(2);
    let s = Mobius::new(&f, i, i, Fe(1), f.from_i64(-1)).unwrap();
    let t = Mobius::new(&f, i, Fe(0), Fe(0), Fe(1)).unwrap();
    let u = Mobius::new(&f, Fe(0), Fe(1), Fe(1), Fe(0)).unwrap();
    let g = group_closure(&f, &[s, t, u], CLOSURE_CAP).unwrap();
    assert_eq!(g.order(), 24);
    assert!(g.has_label(GroupLabel::S4));
    assert_eq!(
        histogram(&f, &g.elements),
        BTreeMap::from([(1, 1), (2, 9), (3, 8), (4, 6)])
    );
}

#[test]
fn closure_cap_is_enforced() {
    let f = gf(7, 1).unwrap();
    let gens = [Mobius::translation(Fe(1)), Mobius::reciprocal()];
    assert!(matches!(group_closure(&f, &gens, 10), Err(Error::ClosureCap(10))));
}

#[test]
fn semi_elementary_examples() {
    let f3 = gf(3, 1).unwrap();
    let g = semi_elementary_subgroup(&f3, &[Fe(1)], 1).unwrap();
    assert_eq!(g.order(), 3);

    let f4 = gf(2, 2).unwrap();
    let basis = [Fe(1), f4.basis_gen()];
    let g = semi_elementary_subgroup(&f4, &basis, 3).unwrap();
    assert_eq!(g.order(), 12);
    assert!(g.is_closed());

    let f9 = gf(3, 2).unwrap();
    assert!(matches!(
        semi_elementary_subgroup(&f9, &[Fe(1)], 4),
        Err(Error::InvalidSubgroup(_))
    ));
    assert!(matches!(
        semi_elementary_subgroup(&f9, &[Fe(1)], 3),
        Err(Error::CharDivides(3))
    ));
}

#[test]
fn standard_subgroup_examples() {
    let f5 = gf(5, 1).unwrap();
    let g = standard_subgroup(&f5, GroupKind::Cyclic(4)).unwrap();
    assert_eq!(g.order(), 4);
    assert!(g.elements.iter().all(|m| m.b.is_zero() && m.c.is_zero()));

    let f11 = gf(11, 1).unwrap();
    let g = standard_subgroup(&f11, GroupKind::A5).unwrap();
    assert_eq!(g.order(), 60);
    assert_eq!(g.field.q(), 11);
    assert_eq!(
        histogram(&g.field, &g.elements),
        BTreeMap::from([(1, 1), (2, 15), (3, 20), (5, 24)])
    );
    assert!(matches!(standard_subgroup(&f5, GroupKind::A5), Err(Error::CharDivides(60))));

    let f7 = gf(7, 1).unwrap();
    let g = standard_subgroup(&f7, GroupKind::A4).unwrap();
    assert_eq!(g.order(), 12);
    assert_eq!(g.field.q(), 49);
    assert!(g.has_label(GroupLabel::A4));
    let g = standard_subgroup(&f7, GroupKind::S4).unwrap();
    assert!(g.has_label(GroupLabel::S4));
    let g = standard_subgroup(&f7, GroupKind::PSL2(7)).unwrap();
    assert_eq!(g.order(), 168);
}

#[test]
fn dihedral_structure() {
    for p in [3u32, 5, 7, 11] {
        let f = gf(p, 1).unwrap();
        for n in 2..=12u64 {
            if n % p as u64 == 0 {
                continue;
            }
            let g = standard_subgroup(&f, GroupKind::Dihedral(n)).unwrap();
            let fx = &g.field;
            let rot: Vec<_> = g
                .elements
                .iter()
                .filter(|m| n % m.order(fx) == 0 && m.c.is_zero() && m.b.is_zero())
                .collect();
            let inv: Vec<_> = g.elements.iter().filter(|m| !(m.c.is_zero() && m.b.is_zero())).collect();
            assert_eq!(rot.len() as u64, n);
            assert_eq!(inv.len() as u64, n);
            assert!(inv.iter().all(|m| m.order(fx) == 2));
            assert!(rot.iter().any(|m| m.order(fx) == n));
        }
    }
}

#[test]
fn recognition_matches_abstract_orders() {
    let f = gf(7, 1).unwrap();
    for kind in [
        GroupKind::Cyclic(3),
        GroupKind::Dihedral(4),
        GroupKind::A4,
        GroupKind::S4,
        GroupKind::Borel(7),
        GroupKind::PGL2(7),
    ] {
        let g = standard_subgroup(&f, kind).unwrap();
        let l = g.label();
        assert_ne!(l, GroupLabel::Unknown, "{kind:?}");
        assert_eq!(l.order(), Some(g.order() as u64), "{kind:?}");
    }
}

#[test]
fn conjugate_by_and_embed_preserve_closure() {
    let f = gf(5, 1).unwrap();
    let g = standard_subgroup(&f, GroupKind::S4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = random_mobius(&g.field, &mut rng);
    let h = g.conjugate_by(&s);
    assert!(h.is_closed());
    assert_eq!(h.order(), 24);
    let big = gf(5, 2).unwrap();
    let e = g.embed(&big).unwrap();
    assert_eq!(e.order(), 24);
    assert!(e.is_closed());
}

fn distinct_triple(f: &FieldCtx, rng: &mut ChaCha8Rng) -> [ProjPoint; 3] {
    loop {
        let mut pick = || {
            let x = random_fe(f, rng);
            if x.0 == 0 && rand::Rng::gen_bool(rng, 0.2) {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite(x)
            }
        };
        let t = [pick(), pick(), pick()];
        if t[0] != t[1] && t[0] != t[2] && t[1] != t[2] {
            return t;
        }
    }
}

#[test]
fn three_point_map_hits_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, k) in [(3, 1), (5, 1), (2, 3), (3, 2), (13, 1)] {
        let f = gf(p, k).unwrap();
        for _ in 0..40 {
            let a = distinct_triple(&f, &mut rng);
            let b = distinct_triple(&f, &mut rng);
            let m = mobius_from_three_points(&f, a, b).unwrap();
            for i in 0..3 {
                assert_eq!(m.apply(&f, a[i]), b[i]);
            }
        }
    }
}

proptest! {
    #[test]
    fn closure_is_idempotent(seed in any::<u64>(), q in prop::sample::select(vec![3u64, 4, 5, 7])) {
        let f = gf_q(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gens = [random_mobius(&f, &mut rng), random_mobius(&f, &mut rng)];
        let g = group_closure(&f, &gens, CLOSURE_CAP).unwrap();
        prop_assert!(g.is_closed());
        let again = group_closure(&f, &g.elements, CLOSURE_CAP).unwrap();
        prop_assert_eq!(again.elements, g.elements);
    }

    #[test]
    fn mobius_group_laws(seed in any::<u64>(), q in prop::sample::select(vec![2u64, 5, 9, 16, 31])) {
        let f = gf_q(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_mobius(&f, &mut rng), random_mobius(&f, &mut rng), random_mobius(&f, &mut rng));
        prop_assert_eq!(a.compose(&f, &b).compose(&f, &c), a.compose(&f, &b.compose(&f, &c)));
        prop_assert!(a.compose(&f, &a.inverse(&f)).is_identity());
        let x = ProjPoint::Finite(random_fe(&f, &mut rng));
        prop_assert_eq!(a.compose(&f, &b).apply(&f, x), a.apply(&f, b.apply(&f, x)));
    }
}
