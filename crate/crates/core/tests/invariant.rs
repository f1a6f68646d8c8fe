use p1dyn::autgrp::{aut_group_bruteforce, fixes_all};
use p1dyn::ff::*;
use p1dyn::invariant::*;
use p1dyn::projline::*;
use p1dyn::ratmap::*;
use p1dyn::sample::{random_fe, random_hom};
use p1dyn::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hom(f: &Field, terms: &[(usize, i64)], d: usize) -> HomPoly {
    let mut h = HomPoly::zero(f, d);
    for &(i, c) in terms {
        h.coeffs[i] = f.add(h.coeffs[i], f.from_i64(c));
    }
    h
}

/// Dimension of the invariant space by exhaustive search: the number of
/// invariant polynomials is `q^dim`.
fn brute_invariant_dim(g: &MatrixGroup, d: usize) -> usize {
    let f = &g.field;
    let q = f.q() as usize;
    let total = q.pow(d as u32 + 1);
    let mut count = 0usize;
    for code in 0..total {
        let coeffs: Vec<Fe> = (0..=d).map(|i| Fe((code / q.pow(i as u32) % q) as u32)).collect();
        let h = HomPoly::new(f, coeffs);
        if g.elements.iter().all(|m| h.substitute(*m) == h) {
            count += 1;
        }
    }
    let mut dim = 0;
    while q.pow(dim) < count {
        dim += 1;
    }
    assert_eq!(q.pow(dim), count);
    dim as usize
}

fn proportional_to(a: &HomPoly, b: &HomPoly) -> bool {
    proportional(&a.field, &[a], &[b])
}

#[test]
fn sl2_three_invariants_in_low_degree() {
    let g = MatrixGroup::sl2(3).unwrap();
    assert_eq!(g.order(), 24);
    let f = g.field.clone();
    let b4 = invariants_of_degree(&g, 4, &Character::Trivial).unwrap();
    assert_eq!(b4.len(), 1);
    let u = hom(&f, &[(3, 1), (1, -1)], 4);
    assert!(proportional_to(&b4[0], &u));

    let b6 = invariants_of_degree(&g, 6, &Character::Trivial).unwrap();
    let c1 = hom(&f, &[(6, 1), (4, 1), (2, 1), (0, 1)], 6);
    let mut rows: Vec<Vec<Fe>> = b6.iter().map(|h| h.coeffs.clone()).collect();
    let r = linalg::rank(&f, &rows, 7);
    rows.push(c1.coeffs.clone());
    assert_eq!(linalg::rank(&f, &rows, 7), r);

    let b0 = invariants_of_degree(&g, 0, &Character::Trivial).unwrap();
    assert_eq!(b0.len(), 1);
}

#[test]
fn invariant_dimensions_match_exhaustive_search() {
    let g = MatrixGroup::sl2(3).unwrap();
    for d in 0..=6 {
        let b = invariants_of_degree(&g, d, &Character::Trivial).unwrap();
        assert_eq!(b.len(), brute_invariant_dim(&g, d), "degree {d}");
        for h in &b {
            assert!(g.elements.iter().all(|m| h.substitute(*m) == *h));
        }
    }
    let g = MatrixGroup::sl2(2).unwrap();
    for d in 0..=7 {
        let b = invariants_of_degree(&g, d, &Character::Trivial).unwrap();
        assert_eq!(b.len(), brute_invariant_dim(&g, d), "degree {d}");
    }
}

#[test]
fn fundamental_invariants() {
    for q in [2u64, 3, 4, 5, 7] {
        let f = gf_q(q).unwrap();
        let (u1, u2) = fundamental_sl2_invariants(&f, q).unwrap();
        let q = q as usize;
        assert_eq!(u1.degree(), q + 1);
        assert_eq!(u2.degree(), q * q - q);
        let dickson = hom(&f, &[(q * q, 1), (1, -1)], q * q + 1);
        assert_eq!(u1.mul(&u2), dickson);
        let sl = MatrixGroup::sl2(q as u64).unwrap();
        assert!(sl.elements.iter().all(|m| u1.substitute(*m) == u1));
        assert!(sl.elements.iter().all(|m| u2.substitute(*m) == u2));
    }
    let f3 = gf(3, 1).unwrap();
    let (u1, _) = fundamental_sl2_invariants(&f3, 3).unwrap();
    assert_eq!(u1, hom(&f3, &[(3, 1), (1, -1)], 4));
}

#[test]
fn relative_invariance_characters() {
    let f3 = gf(3, 1).unwrap();
    let (u1, u2) = fundamental_sl2_invariants(&f3, 3).unwrap();
    let gl = MatrixGroup::gl2(3).unwrap();
    assert_eq!(is_relative_invariant(&u1, &gl), Some(Character::DetPow(1)));
    assert_eq!(is_relative_invariant(&u2, &gl), Some(Character::Trivial));
    let sl = MatrixGroup::sl2(3).unwrap();
    assert_eq!(is_relative_invariant(&HomPoly::x(&f3), &sl), None);
    assert_eq!(is_relative_invariant(&PolyForm::lambda(&f3), &gl), Some(Character::DetPow(1)));
}

#[test]
fn psl2_degree_bound() {
    assert_eq!(psl2_min_degree(3).unwrap(), 7);
    assert_eq!(psl2_min_degree(5).unwrap(), 41);
    assert_eq!(psl2_min_degree(9).unwrap(), 289);
    assert!(psl2_min_degree(2).is_err());
}

#[test]
fn dm_construction_for_psl2_of_three() {
    let f3 = gf(3, 1).unwrap();
    let (u1, u2) = fundamental_sl2_invariants(&f3, 3).unwrap();
    let g = dm_map(&u2, &u1.pow(2)).unwrap();
    assert_eq!(g.degree(), 7);
    let f9 = gf(3, 2).unwrap();
    let aut = aut_group_bruteforce(&g, &f9, 9).unwrap();
    assert_eq!(aut.order(), 12);
    let psl = standard_subgroup(&f3, GroupKind::PSL2(3)).unwrap();
    assert_eq!(aut.group.elements, psl.embed(&f9).unwrap().elements);
}

#[test]
fn dm_degenerate_inputs() {
    let f5 = gf(5, 1).unwrap();
    let zero = HomPoly::zero(&f5, 0);
    let g = hom(&f5, &[(2, 1), (0, 1)], 2);
    let m = dm_map(&zero, &g).unwrap();
    assert_eq!(m.degree(), 1);
    let frob = hom(&f5, &[(5, 1), (0, 1)], 5);
    assert!(dm_map(&HomPoly::zero(&f5, 3), &frob).is_err());
    assert!(dm_map(&hom(&f5, &[(0, 1)], 1), &g).is_err());
}

#[test]
fn form_map_correspondence() {
    let f5 = gf(5, 1).unwrap();
    let z2 = parse_map(&f5, "z^2").unwrap();
    let w = form_from_map(&z2);
    let want = PolyForm::one(hom(&f5, &[(0, 1)], 2), hom(&f5, &[(2, -1)], 2)).unwrap();
    assert_eq!(w, want);
    assert_eq!(w.degree(), z2.degree());
    assert_eq!(map_from_form(&w).unwrap(), z2);

    let id = map_from_form(&PolyForm::lambda(&f5)).unwrap();
    assert_eq!(id.degree(), 1);
    assert!(f5.elements().all(|x| id.apply(ProjPoint::Finite(x)) == ProjPoint::Finite(x)));

    let f3 = gf(3, 1).unwrap();
    let (u1, u2) = fundamental_sl2_invariants(&f3, 3).unwrap();
    let g = dm_map(&u2, &u1.pow(2)).unwrap();
    assert_eq!(map_from_form(&form_from_map(&g)).unwrap(), g);
}

#[test]
fn form_of_power_map_is_relatively_invariant() {
    let f3 = gf(3, 1).unwrap();
    let w = form_from_map(&parse_map(&f3, "z^3").unwrap());
    let sl = MatrixGroup::sl2(3).unwrap();
    assert!(is_relative_invariant(&w, &sl).is_some());
    let (big_f, g) = decompose_form(&w).unwrap();
    assert!(big_f.is_zero() || is_relative_invariant(&big_f, &sl).is_some());
    assert!(g.is_zero() || is_relative_invariant(&g, &sl).is_some());
}

#[test]
fn decompose_examples() {
    for p in [5u32, 7, 11] {
        let f = gf(p, 1).unwrap();
        let lam = PolyForm::lambda(&f);
        let (big_f, g) = decompose_form(&lam).unwrap();
        assert_eq!(assemble_form(&big_f, &g).unwrap(), lam);
        let exact = PolyForm::exact(&hom(&f, &[(2, 1)], 3));
        let (big_f, g) = decompose_form(&exact).unwrap();
        assert!(big_f.is_zero());
        assert_eq!(assemble_form(&big_f, &g).unwrap(), exact);
    }
    for p in [2u32, 3, 5, 7] {
        let f = gf(p, 1).unwrap();
        let n = p as usize - 1;
        let theta = PolyForm::one(hom(&f, &[(0, 1)], n), HomPoly::zero(&f, n)).unwrap();
        assert!(matches!(decompose_form(&theta), Err(Error::DegreeMinusOne { .. })));
    }
}

/// Lifts of small subgroups of PGL2 whose determinants are squares in the
/// base field.
fn lifted_groups() -> Vec<(GroupDesc, MatrixGroup)> {
    let mut out = Vec::new();
    for (q, kind) in [
        (7u64, GroupKind::Cyclic(3)),
        (5, GroupKind::Dihedral(2)),
        (13, GroupKind::Dihedral(3)),
        (13, GroupKind::A4),
        (3, GroupKind::PSL2(3)),
        (5, GroupKind::Borel(5)),
    ] {
        let f = gf_q(q).unwrap();
        let g = standard_subgroup(&f, kind).unwrap();
        if let Ok(m) = MatrixGroup::lift_to_sl2(&g) {
            out.push((g, m));
        }
    }
    assert!(out.len() >= 4);
    out
}

#[test]
fn dm_maps_inherit_the_group() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    for (g, lift) in lifted_groups() {
        let f = lift.field.clone();
        for d in 2..=12usize {
            let fb = invariants_of_degree(&lift, d - 1, &Character::Trivial).unwrap();
            let gb = invariants_of_degree(&lift, d + 1, &Character::Trivial).unwrap();
            for _ in 0..4 {
                let pick = |b: &[HomPoly], deg: usize, rng: &mut ChaCha8Rng| {
                    b.iter().fold(HomPoly::zero(&f, deg), |acc, h| acc.add(&h.scale(random_fe(&f, rng))))
                };
                let big_f = pick(&fb, d - 1, &mut rng);
                let big_g = pick(&gb, d + 1, &mut rng);
                let Ok(m) = dm_map(&big_f, &big_g) else { continue };
                if m.degree() < 2 {
                    continue;
                }
                assert!(fixes_all(&m, &g).unwrap(), "degree {d}");
                checked += 1;
            }
        }
    }
    assert!(checked > 30, "only {checked} maps");
}

#[test]
fn no_psl2_three_map_below_degree_seven() {
    let sl = MatrixGroup::sl2(3).unwrap();
    let f3 = gf(3, 1).unwrap();
    let target = standard_subgroup(&f3, GroupKind::PSL2(3)).unwrap();
    let entries = dm_scan(&sl, &target, 2..=7, &Character::Trivial, 100_000).unwrap();
    assert!(entries.iter().filter(|e| e.target_degree < 7).all(|e| !e.equals_target));
    assert!(entries.iter().any(|e| e.target_degree == 7 && e.equals_target));
}

fn prime_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![(2u32, 1u32), (3, 1), (5, 1), (7, 1), (3, 2)]).prop_map(|(p, k)| gf(p, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn decomposition_reconstructs(f in prime_field(), n in 1usize..12, seed in any::<u64>()) {
        prop_assume!((n + 1) % f.p() as usize != 0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let big_f = random_hom(&f, n - 1, &mut rng);
        let g = random_hom(&f, n + 1, &mut rng);
        let theta = assemble_form(&big_f, &g).unwrap();
        let (f2, g2) = decompose_form(&theta).unwrap();
        prop_assert_eq!(assemble_form(&f2, &g2).unwrap(), theta);
    }

    #[test]
    fn exterior_derivative_squares_to_zero(f in prime_field(), n in 0usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_hom(&f, n + 1, &mut rng);
        prop_assert!(PolyForm::exact(&g).d().is_zero());
    }

    #[test]
    fn euler_antiderivative_of_closed_forms(f in prime_field(), n in 0usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eta = PolyForm::exact(&random_hom(&f, n + 1, &mut rng));
        let PolyForm::One { e1, e2 } = &eta else { unreachable!() };
        let contracted = e1.mul_linear(Fe::ONE, Fe::ZERO).add(&e2.mul_linear(Fe::ZERO, Fe::ONE));
        let lhs = PolyForm::exact(&contracted);
        let k = f.from_i64(n as i64 + 1);
        let PolyForm::One { e1: a1, e2: a2 } = &lhs else { unreachable!() };
        prop_assert_eq!(a1, &e1.scale(k));
        prop_assert_eq!(a2, &e2.scale(k));
    }

    #[test]
    fn form_pullback_is_equivariant(f in prime_field(), seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = p1dyn::sample::random_map(&f, d, &mut rng);
        let m = p1dyn::sample::random_mobius(&f, &mut rng);
        let mat = m.matrix();
        let w = form_from_map(&g).pullback(&mat);
        // Φ^M = M^-1 ∘ Φ ∘ M, taken with the adjugate as M^-1 so no
        // scalar is introduced.
        let (n, dd) = g.coords();
        let sn = n.substitute(mat);
        let sd = dd.substitute(mat);
        let [a, b, c, e] = mat;
        let num = sn.scale(e).add(&sd.scale(f.neg(b)));
        let den = sn.scale(f.neg(c)).add(&sd.scale(a));
        let want = PolyForm::one(den.clone(), num.neg()).unwrap();
        let (w1, w2) = parts(&w);
        let (v1, v2) = parts(&want);
        prop_assert!(proportional(&f, &[&w1, &w2], &[&v1, &v2]));
    }
}

fn parts(w: &PolyForm) -> (HomPoly, HomPoly) {
    match w {
        PolyForm::One { e1, e2 } => (e1.clone(), e2.clone()),
        PolyForm::Two { .. } => panic!("expected a 1-form"),
    }
}
