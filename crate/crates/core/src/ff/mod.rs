//! Finite fields GF(p^k) and univariate polynomials over them.

mod embed;
mod field;
pub mod linalg;
pub mod upoly;

pub use embed::{embed, Embedding};
pub use field::{
    create_field, gcd_u64, gf, gf_q, is_prime, lcm_u64, prime_factors, prime_power, Fe, Field,
    FieldCtx, DEFAULT_SIZE_BOUND,
};
pub use upoly::UPoly;

use crate::error::{Error, Result};

/// All `x` with `x^n = 1`, sorted. Returns the roots and whether the list
/// is truncated (fewer than `n` roots exist in the field).
pub fn roots_of_unity(f: &FieldCtx, n: u64) -> Result<(Vec<Fe>, bool)> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    if n % f.p() as u64 == 0 {
        return Err(Error::CharDivides(n));
    }
    let g = gcd_u64(n, (f.q() - 1) as u64);
    let step = (f.q() as u64 - 1) / g;
    let z = f.pow(f.primitive(), step);
    let mut out: Vec<Fe> = (0..g).map(|i| f.pow(z, i)).collect();
    out.sort_unstable();
    Ok((out, g != n))
}

/// A primitive `n`-th root of unity, if the field has one.
pub fn primitive_root_of_unity(f: &FieldCtx, n: u64) -> Option<Fe> {
    if n == 0 || (f.q() as u64 - 1) % n != 0 {
        return None;
    }
    let mut best: Option<Fe> = None;
    for x in roots_of_unity(f, n).ok()?.0 {
        if f.order(x) == n {
            best = Some(x);
            break;
        }
    }
    best
}

/// Smallest extension degree `e` such that GF(p^(k e)) contains the `n`-th
/// roots of unity.
pub fn unity_extension_degree(f: &FieldCtx, n: u64) -> u32 {
    let q = f.q() as u64;
    let mut e = 1u32;
    let mut qe = q % n;
    while (qe + n - 1) % n != 0 {
        e += 1;
        qe = qe * q % n;
    }
    e
}

/// Roots of `coeffs` (over `src`) in the extension `search`, with
/// multiplicities, sorted by encoding.
pub fn poly_roots(src: &Field, coeffs: &[Fe], search: &Field) -> Result<Vec<(Fe, u32)>> {
    let emb = Embedding::new(src, search)?;
    let g = upoly::trimmed(emb.apply_all(coeffs));
    upoly::roots(search, &g)
}

/// Square roots of `a` in the field, sorted.
pub fn sqrt_all(f: &FieldCtx, a: Fe) -> Vec<Fe> {
    let poly = vec![f.neg(a), Fe::ZERO, Fe::ONE];
    upoly::distinct_roots(f, &poly).unwrap_or_default()
}
