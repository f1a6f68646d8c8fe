//! Seeded random objects for property checks.

use rand::Rng;

use crate::ff::{upoly, Fe, Field, FieldCtx};
use crate::projline::Mobius;
use crate::ratmap::{HomPoly, RatMap};

pub fn random_fe<R: Rng>(f: &FieldCtx, rng: &mut R) -> Fe {
    Fe(rng.gen_range(0..f.q()))
}

pub fn random_nonzero<R: Rng>(f: &FieldCtx, rng: &mut R) -> Fe {
    Fe(rng.gen_range(1..f.q()))
}

/// A map of exact degree `d`, by rejection.
pub fn random_map<R: Rng>(f: &Field, d: usize, rng: &mut R) -> RatMap {
    loop {
        let n: Vec<Fe> = (0..=d).map(|_| random_fe(f, rng)).collect();
        let m: Vec<Fe> = (0..=d).map(|_| random_fe(f, rng)).collect();
        let (n, m) = (upoly::trimmed(n), upoly::trimmed(m));
        if n.is_empty() || m.is_empty() {
            continue;
        }
        if let Ok(r) = RatMap::from_upolys(f, &n, &m) {
            if r.degree() == d {
                return r;
            }
        }
    }
}

pub fn random_mobius<R: Rng>(f: &FieldCtx, rng: &mut R) -> Mobius {
    loop {
        let v: Vec<Fe> = (0..4).map(|_| random_fe(f, rng)).collect();
        if let Ok(m) = Mobius::new(f, v[0], v[1], v[2], v[3]) {
            return m;
        }
    }
}

pub fn random_hom<R: Rng>(f: &Field, d: usize, rng: &mut R) -> HomPoly {
    HomPoly::new(f, (0..=d).map(|_| random_fe(f, rng)).collect())
}
