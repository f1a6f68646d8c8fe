//! Dense univariate polynomials over a [`FieldCtx`], low-to-high, with no
//! trailing zeros. The zero polynomial is the empty vector.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{lcm_u64, Fe, FieldCtx};
use crate::error::{Error, Result};

pub type UPoly = Vec<Fe>;

pub fn trim(a: &mut UPoly) {
    while a.last() == Some(&Fe::ZERO) {
        a.pop();
    }
}

pub fn trimmed(mut a: UPoly) -> UPoly {
    trim(&mut a);
    a
}

/// Degree, or `None` for the zero polynomial.
pub fn deg(a: &[Fe]) -> Option<usize> {
    let mut n = a.len();
    while n > 0 && a[n - 1] == Fe::ZERO {
        n -= 1;
    }
    n.checked_sub(1)
}

pub fn constant(c: Fe) -> UPoly {
    trimmed(vec![c])
}

pub fn x() -> UPoly {
    vec![Fe::ZERO, Fe::ONE]
}

pub fn add(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> UPoly {
    let n = a.len().max(b.len());
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(Fe::ZERO);
        let y = b.get(i).copied().unwrap_or(Fe::ZERO);
        r.push(f.add(x, y));
    }
    trimmed(r)
}

pub fn sub(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> UPoly {
    let n = a.len().max(b.len());
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(Fe::ZERO);
        let y = b.get(i).copied().unwrap_or(Fe::ZERO);
        r.push(f.sub(x, y));
    }
    trimmed(r)
}

pub fn scale(f: &FieldCtx, a: &[Fe], c: Fe) -> UPoly {
    trimmed(a.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = f.add(r[i + j], f.mul(x, y));
        }
    }
    trimmed(r)
}

pub fn pow(f: &FieldCtx, a: &[Fe], mut e: u64) -> UPoly {
    let mut r = vec![Fe::ONE];
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = mul(f, &r, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mul(f, &b, &b);
        }
    }
    r
}

/// Quotient and remainder.
pub fn divrem(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Result<(UPoly, UPoly)> {
    let db = deg(b).ok_or(Error::ZeroPolynomial)?;
    let mut r = trimmed(a.to_vec());
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let inv = f.inv(b[db])?;
    let mut qt = vec![Fe::ZERO; r.len() - db];
    while r.len() > db {
        let top = r.len() - 1;
        let c = f.mul(r[top], inv);
        let s = top - db;
        qt[s] = c;
        for i in 0..=db {
            r[s + i] = f.sub(r[s + i], f.mul(c, b[i]));
        }
        trim(&mut r);
    }
    Ok((trimmed(qt), r))
}

pub fn rem(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> Result<UPoly> {
    Ok(divrem(f, a, b)?.1)
}

pub fn monic(f: &FieldCtx, a: &[Fe]) -> UPoly {
    match deg(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = f.inv(a[d]).expect("nonzero leading coefficient");
            scale(f, &a[..=d], inv)
        }
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> UPoly {
    let mut a = trimmed(a.to_vec());
    let mut b = trimmed(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b).expect("nonzero divisor");
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn derivative(f: &FieldCtx, a: &[Fe]) -> UPoly {
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_i64(i as i64), c))
            .collect(),
    )
}

pub fn eval(f: &FieldCtx, a: &[Fe], x: Fe) -> Fe {
    a.iter().rev().fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
}

/// `a(b(x))`.
pub fn compose(f: &FieldCtx, a: &[Fe], b: &[Fe]) -> UPoly {
    let mut r: UPoly = Vec::new();
    for &c in a.iter().rev() {
        r = add(f, &mul(f, &r, b), &[c]);
    }
    r
}

pub fn mulmod(f: &FieldCtx, a: &[Fe], b: &[Fe], m: &[Fe]) -> UPoly {
    rem(f, &mul(f, a, b), m).expect("nonzero modulus")
}

pub fn pow_mod(f: &FieldCtx, base: &[Fe], mut e: u64, m: &[Fe]) -> UPoly {
    let mut r = rem(f, &[Fe::ONE], m).expect("nonzero modulus");
    let mut b = rem(f, base, m).expect("nonzero modulus");
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(f, &r, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(f, &b, &b, m);
        }
    }
    r
}

/// Degrees of the distinct irreducible factors of `a` over the coefficient
/// field, with one entry per factor.
pub fn factor_degrees(f: &FieldCtx, a: &[Fe]) -> Vec<u32> {
    let mut out = Vec::new();
    let mut g = monic(f, a);
    let q = f.q() as u64;
    let mut h = x();
    let mut i = 0u32;
    while deg(&g).unwrap_or(0) >= 2 * (i as usize + 1) {
        i += 1;
        h = pow_mod(f, &h, q, &g);
        let mut d = gcd(f, &g, &sub(f, &h, &x()));
        let dd = deg(&d).unwrap_or(0);
        if dd > 0 {
            for _ in 0..dd / i as usize {
                out.push(i);
            }
            // strip every power of the degree-i factors
            while deg(&d).unwrap_or(0) > 0 {
                g = divrem(f, &g, &d).expect("nonzero").0;
                d = gcd(f, &g, &d);
            }
            h = rem(f, &h, &g).unwrap_or_default();
            if g.len() <= 1 {
                break;
            }
        }
    }
    if let Some(d) = deg(&g) {
        if d > 0 {
            out.push(d as u32);
        }
    }
    out.sort_unstable();
    out
}

/// Smallest `e` such that `a` splits into linear factors over the degree-`e`
/// extension of its coefficient field.
pub fn splitting_degree(f: &FieldCtx, a: &[Fe]) -> u32 {
    factor_degrees(f, a)
        .into_iter()
        .fold(1u64, |l, d| lcm_u64(l, d as u64)) as u32
}

fn brute_distinct_roots(f: &FieldCtx, a: &[Fe]) -> Vec<Fe> {
    f.elements().filter(|&x| eval(f, a, x).is_zero()).collect()
}

/// Distinct roots of `a` in its coefficient field, sorted by encoding.
pub fn distinct_roots(f: &FieldCtx, a: &[Fe]) -> Result<Vec<Fe>> {
    let d = deg(a).ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut roots = if (f.q() as u64) * (d as u64) <= 4096 {
        brute_distinct_roots(f, a)
    } else {
        let m = monic(f, a);
        let xq = pow_mod(f, &x(), f.q() as u64, &m);
        let g = gcd(f, &m, &sub(f, &xq, &x()));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f1e1d);
        split_linear(f, &g, &mut rng, &mut out);
        out
    };
    roots.sort_unstable();
    Ok(roots)
}

// `g` is monic and a product of distinct linear factors.
fn split_linear(f: &FieldCtx, g: &[Fe], rng: &mut ChaCha8Rng, out: &mut Vec<Fe>) {
    let d = match deg(g) {
        None | Some(0) => return,
        Some(d) => d,
    };
    if d == 1 {
        out.push(f.neg(g[0]));
        return;
    }
    if (f.q() as u64) * (d as u64) <= 4096 {
        out.extend(brute_distinct_roots(f, g));
        return;
    }
    let q = f.q() as u64;
    loop {
        let delta = Fe(rng.gen_range(0..f.q()));
        let h = if f.p() == 2 {
            // absolute trace of delta*x
            let t = vec![Fe::ZERO, delta];
            let mut acc = rem(f, &t, g).unwrap();
            let mut cur = acc.clone();
            for _ in 1..f.k() {
                cur = mulmod(f, &cur, &cur, g);
                acc = add(f, &acc, &cur);
            }
            acc
        } else {
            let base = vec![delta, Fe::ONE];
            let e = pow_mod(f, &base, (q - 1) / 2, g);
            sub(f, &e, &[Fe::ONE])
        };
        let c = gcd(f, g, &h);
        let dc = deg(&c).unwrap_or(0);
        if dc > 0 && dc < d {
            let other = divrem(f, g, &c).unwrap().0;
            split_linear(f, &c, rng, out);
            split_linear(f, &monic(f, &other), rng, out);
            return;
        }
    }
}

/// Multiplicity of `r` as a root of `a`.
pub fn root_multiplicity(f: &FieldCtx, a: &[Fe], r: Fe) -> u32 {
    let mut cur = trimmed(a.to_vec());
    let mut m = 0;
    while !cur.is_empty() {
        // synthetic division by (x - r)
        let n = cur.len();
        let mut qt = vec![Fe::ZERO; n - 1];
        let mut acc = Fe::ZERO;
        for i in (0..n).rev() {
            acc = f.add(f.mul(acc, r), cur[i]);
            if i > 0 {
                qt[i - 1] = acc;
            }
        }
        if !acc.is_zero() {
            break;
        }
        m += 1;
        cur = trimmed(qt);
    }
    m
}

/// Roots with multiplicities in the coefficient field, sorted by encoding.
pub fn roots(f: &FieldCtx, a: &[Fe]) -> Result<Vec<(Fe, u32)>> {
    let rs = distinct_roots(f, a)?;
    Ok(rs
        .into_iter()
        .map(|r| (r, root_multiplicity(f, a, r)))
        .collect())
}

/// `prod (x - r)` over the given roots.
pub fn from_roots(f: &FieldCtx, rs: &[Fe]) -> UPoly {
    rs.iter()
        .fold(vec![Fe::ONE], |acc, &r| mul(f, &acc, &[f.neg(r), Fe::ONE]))
}
