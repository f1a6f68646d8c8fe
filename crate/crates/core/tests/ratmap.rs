use p1dyn::constructions::{multiplier_spectrum, psl2_map, split_over};
use p1dyn::ff::*;
use p1dyn::projline::*;
use p1dyn::ratmap::*;
use p1dyn::sample::{random_map, random_mobius};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fin(x: u32) -> ProjPoint {
    ProjPoint::Finite(Fe(x))
}

fn map(f: &Field, s: &str) -> RatMap {
    parse_map(f, s).unwrap()
}

fn total(m: &PointMults) -> u32 {
    m.iter().map(|&(_, k)| k).sum()
}

#[test]
fn normalize_examples() {
    let f = gf(5, 1).unwrap();
    let x2y = HomPoly::from_ints(&f, &[0, 0, 1, 0]);
    let xy2 = HomPoly::from_ints(&f, &[0, 1, 0, 0]);
    let r = RatMap::normalize(&x2y, &xy2).unwrap();
    assert_eq!(r.degree(), 1);
    assert_eq!(r.apply(fin(3)), fin(3));

    let x2 = HomPoly::from_ints(&f, &[0, 0, 1]);
    let y2 = HomPoly::from_ints(&f, &[1, 0, 0]);
    let r = RatMap::normalize(&x2, &y2).unwrap();
    assert_eq!(r.degree(), 2);
    assert_eq!(r, map(&f, "z^2"));

    assert!(RatMap::normalize(&x2, &x2).is_err());
    let zero = HomPoly::zero(&f, 2);
    assert!(RatMap::normalize(&zero, &zero).is_err());
}

#[test]
fn psl2_pair_for_three_is_coprime_of_degree_seven() {
    let rec = psl2_map(3).unwrap();
    assert_eq!(rec.map.degree(), 7);
}

#[test]
fn conjugation_examples() {
    let f = gf(7, 1).unwrap();
    let z2 = map(&f, "z^2");
    assert_eq!(z2.conjugate(&Mobius::IDENTITY), z2);
    // Conjugating by z -> 1/z swaps 0 and infinity; z^2 is preserved.
    assert_eq!(z2.conjugate(&Mobius::reciprocal()), z2);
    let shifted = z2.conjugate(&Mobius::translation(Fe(1)));
    assert_eq!(shifted, map(&f, "z^2 + 2*z"));
}

#[test]
fn power_map_twists_to_reciprocal_over_quadratic_extension() {
    let f9 = gf(3, 2).unwrap();
    let z3 = map(&f9, "z^3");
    let target = map(&f9, "1/z^3");
    // tau sends the GF(3)-rational fixed points of z^3 to the fixed points of
    // 1/z^3, which are the roots of z^4 = 1.
    let mut found = 0;
    let pgl = enumerate_pgl2(&f9, PGL2_ENUM_BOUND).unwrap();
    for tau in &pgl.elements {
        if z3.conjugate(tau) == target {
            found += 1;
        }
    }
    assert_eq!(found, 24);
    let f3 = gf(3, 1).unwrap();
    let pgl3 = enumerate_pgl2(&f3, PGL2_ENUM_BOUND).unwrap();
    let z3 = map(&f3, "z^3");
    let target = map(&f3, "1/z^3");
    assert!(pgl3.elements.iter().all(|t| z3.conjugate(t) != target));
}

#[test]
fn fixed_point_examples() {
    let f5 = gf(5, 1).unwrap();
    let fp = map(&f5, "z^2").fixed_points(&f5).unwrap();
    assert_eq!(fp, vec![(fin(0), 1), (fin(1), 1), (ProjPoint::Infinity, 1)]);

    let f3 = gf(3, 1).unwrap();
    let fp = map(&f3, "z^3").fixed_points(&f3).unwrap();
    assert_eq!(fp.len(), 4);
    assert!(fp.iter().all(|&(_, m)| m == 1));

    let f7 = gf(7, 1).unwrap();
    let f49 = gf(7, 2).unwrap();
    let fp = map(&f7, "z + 1/z").fixed_points(&f49).unwrap();
    assert_eq!(fp, vec![(ProjPoint::Infinity, 3)]);
}

#[test]
fn multiplier_examples() {
    let f5 = gf(5, 1).unwrap();
    let z2 = map(&f5, "z^2");
    assert_eq!(z2.multiplier(fin(1)).unwrap(), Fe(2));
    assert_eq!(z2.multiplier(ProjPoint::Infinity).unwrap(), Fe(0));
    assert_eq!(z2.multiplier(fin(0)).unwrap(), Fe(0));
    assert!(z2.multiplier(fin(2)).is_err());
}

/// At a fixed point above a simple zero `c` of `psi = F/G`, the chart
/// derivative of `psi(z^q - z) + z` is `1 - F'(c)/G(c)`, since the inner
/// derivative `q z^(q-1) - 1` equals `-1`.
#[test]
fn psi_form_multiplier_reduction() {
    let cases: [(u32, u32, &[i64], &[i64]); 4] = [
        (3, 1, &[1, 0, 1], &[1, 1]),
        (5, 1, &[2, 0, 1], &[3, 1]),
        (2, 2, &[1, 1, 1], &[1, 0, 1]),
        (7, 1, &[0, 3], &[1]),
    ];
    for (p, k, num, den) in cases {
        let f = gf(p, k).unwrap();
        let to = |c: &[i64]| -> UPoly { upoly::trimmed(c.iter().map(|&x| f.from_i64(x)).collect()) };
        let (a, b) = (to(num), to(den));
        let g = psi_map(&f, &a, &b, f.q() as u64).unwrap();
        let (ext, _) = split_over(&f, &g.fixed_point_form().to_upoly()).unwrap();
        let roots = poly_roots(&f, &a, &ext).unwrap();
        let e = Embedding::new(&f, &ext).unwrap();
        let (ae, be) = (e.apply_all(&a), e.apply_all(&b));
        let gx = g.base_change(&ext).unwrap();
        let fps = gx.fixed_points(&ext).unwrap();
        let qq = f.q() as u64;
        let mut checked = 0;
        for (c, mult) in roots {
            if mult != 1 {
                continue;
            }
            let want = ext.sub(
                Fe::ONE,
                ext.div(upoly::eval(&ext, &upoly::derivative(&ext, &ae), c), upoly::eval(&ext, &be, c)).unwrap(),
            );
            for &(pt, _) in &fps {
                let ProjPoint::Finite(z) = pt else { continue };
                if ext.sub(ext.pow(z, qq), z) == c {
                    assert_eq!(gx.multiplier(pt).unwrap(), want, "p={p} c={c:?}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn periodic_point_examples() {
    let f7 = gf(7, 1).unwrap();
    let f49 = gf(7, 2).unwrap();
    let z2 = map(&f7, "z^2");
    let per2 = z2.periodic_points(2, &f49).unwrap();
    let (cube, _) = roots_of_unity(&f49, 3).unwrap();
    for w in cube {
        assert!(per2.iter().any(|&(pt, _)| pt == ProjPoint::Finite(w)));
    }
    let per1 = z2.periodic_points(1, &f49).unwrap();
    assert_eq!(per1, z2.fixed_points(&f49).unwrap());

    let g = map(&f7, "1/z^3");
    let per2 = g.periodic_points(2, &f49).unwrap();
    assert!(per2.iter().any(|&(pt, _)| pt == fin(0)));
    assert!(per2.iter().any(|&(pt, _)| pt == ProjPoint::Infinity));
    assert!(g.periodic_points(3, &f49).is_err());
}

#[test]
fn psi_map_examples() {
    let f3 = gf(3, 1).unwrap();
    let z = upoly::x();
    let one = upoly::constant(Fe::ONE);
    assert_eq!(psi_map(&f3, &z, &one, 3).unwrap(), map(&f3, "z^3"));
    let z2 = vec![Fe(0), Fe(0), Fe(1)];
    let g = psi_map(&f3, &z2, &one, 3).unwrap();
    assert_eq!(g.degree(), 6);
    assert_eq!(g, map(&f3, "(z^3 - z)^2 + z"));
    let f2 = gf(2, 1).unwrap();
    let g = psi_map(&f2, &one, &z, 2).unwrap();
    assert_eq!(g.degree(), 3);
    assert_eq!(g.degree() % 2, 1);
    assert!(psi_map(&f3, &z, &[], 3).is_err());
}

#[test]
fn preimage_examples() {
    let f5 = gf(5, 1).unwrap();
    assert_eq!(map(&f5, "z^2").preimages(fin(0), &f5).unwrap(), vec![(fin(0), 2)]);
    let f3 = gf(3, 1).unwrap();
    assert_eq!(
        map(&f3, "2*z^3").preimages(ProjPoint::Infinity, &f3).unwrap(),
        vec![(ProjPoint::Infinity, 3)]
    );
    let f7 = gf(7, 1).unwrap();
    let pre = map(&f7, "z + 1/z").preimages(ProjPoint::Infinity, &f7).unwrap();
    assert_eq!(pre, vec![(fin(0), 1), (ProjPoint::Infinity, 1)]);
}

#[test]
fn parser_accepts_common_shapes() {
    let f = gf(5, 1).unwrap();
    assert_eq!(map(&f, "(z^2+1)/z"), map(&f, "z + 1/z"));
    assert_eq!(map(&f, "z*z"), map(&f, "z^2"));
    assert_eq!(map(&f, "-z^2"), map(&f, "4z^2"));
    assert!(parse_map(&f, "z^").is_err());
    assert!(parse_map(&f, "3").is_err());
}

fn small_field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 9, 11]).prop_map(|q| gf_q(q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conjugation_is_a_right_action(f in small_field(), seed in any::<u64>(), d in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_map(&f, d, &mut rng);
        let (a, b) = (random_mobius(&f, &mut rng), random_mobius(&f, &mut rng));
        prop_assert_eq!(g.conjugate(&a).conjugate(&b), g.conjugate(&a.compose(&f, &b)));
        prop_assert_eq!(g.conjugate(&a).degree(), d);
    }

    #[test]
    fn composition_multiplies_degrees(f in small_field(), seed in any::<u64>(), d in 1usize..4, e in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_map(&f, d, &mut rng);
        let h = random_map(&f, e, &mut rng);
        let gh = g.compose(&h).unwrap();
        prop_assert_eq!(gh.degree(), d * e);
        for x in f.elements() {
            let x = ProjPoint::Finite(x);
            prop_assert_eq!(gh.apply(x), g.apply(h.apply(x)));
        }
    }

    #[test]
    fn multiplier_spectrum_is_conjugation_invariant(f in small_field(), seed in any::<u64>(), d in 2usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_map(&f, d, &mut rng);
        let a = random_mobius(&f, &mut rng);
        let (fa, sa) = multiplier_spectrum(&g).unwrap();
        let (fb, sb) = multiplier_spectrum(&g.conjugate(&a)).unwrap();
        prop_assert_eq!(fa.q(), fb.q());
        prop_assert_eq!(sa, sb);
    }

    #[test]
    fn fixed_points_count_d_plus_one(f in small_field(), seed in any::<u64>(), d in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_map(&f, d, &mut rng);
        let form = g.fixed_point_form();
        prop_assume!(!form.is_zero());
        let (ext, _) = split_over(&f, &form.to_upoly()).unwrap();
        let fp = g.fixed_points(&ext).unwrap();
        prop_assert_eq!(total(&fp) as usize, d + 1);
        let pre = g.preimages(ProjPoint::Infinity, &split_over(&f, &g.coords().1.to_upoly()).unwrap().0).unwrap();
        prop_assert_eq!(total(&pre) as usize, d);
    }
}
