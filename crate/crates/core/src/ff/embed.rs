use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::field::{Fe, Field, FieldCtx};
use super::upoly;
use crate::error::{Error, Result};

/// A fixed ring embedding GF(p^k) -> GF(p^m), determined by the image of the
/// class of `x`: the smallest root (by encoding) of the source modulus in the
/// target.
#[derive(Clone)]
pub struct Embedding {
    src: Field,
    dst: Field,
    // images of 1, x, ..., x^(k-1)
    powers: Arc<Vec<Fe>>,
}

fn cache() -> &'static Mutex<HashMap<(u32, u32, u32), Arc<Vec<Fe>>>> {
    static C: OnceLock<Mutex<HashMap<(u32, u32, u32), Arc<Vec<Fe>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Embedding {
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding> {
        if src.p() != dst.p() || dst.k() % src.k() != 0 {
            return Err(Error::NoEmbedding {
                p: src.p(),
                k: src.k(),
                m: dst.k(),
            });
        }
        let key = (src.p(), src.k(), dst.k());
        let cached = cache().lock().unwrap().get(&key).cloned();
        let powers = match cached {
            Some(p) => p,
            None => {
                let powers = Arc::new(compute_powers(src, dst)?);
                cache().lock().unwrap().entry(key).or_insert(powers).clone()
            }
        };
        Ok(Embedding {
            src: src.clone(),
            dst: dst.clone(),
            powers,
        })
    }

    pub fn src(&self) -> &Field {
        &self.src
    }
    pub fn dst(&self) -> &Field {
        &self.dst
    }

    pub fn apply(&self, a: Fe) -> Fe {
        if self.src.k() == 1 || self.src.k() == self.dst.k() {
            return a;
        }
        let c = self.src.coeffs(a);
        let d = &self.dst;
        let mut acc = Fe::ZERO;
        for (ci, &pw) in c.iter().zip(self.powers.iter()) {
            if *ci != 0 {
                acc = d.add(acc, d.mul(Fe(*ci), pw));
            }
        }
        acc
    }

    pub fn apply_all(&self, v: &[Fe]) -> Vec<Fe> {
        v.iter().map(|&a| self.apply(a)).collect()
    }

    /// Preimage of `b` when it lies in the image.
    pub fn restrict(&self, b: Fe) -> Option<Fe> {
        let (s, d) = (&self.src, &self.dst);
        if s.k() == d.k() {
            return Some(b);
        }
        if s.k() == 1 {
            return (b.0 < s.p()).then_some(b);
        }
        // solve sum c_i * powers[i] = b over GF(p), coordinates in dst
        let p = s.p() as u64;
        let k = s.k() as usize;
        let m = d.k() as usize;
        let mut rows: Vec<Vec<u64>> = (0..m)
            .map(|r| {
                let mut row: Vec<u64> = self
                    .powers
                    .iter()
                    .map(|&pw| d.coeffs(pw)[r] as u64)
                    .collect();
                row.push(d.coeffs(b)[r] as u64);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r0 = 0;
        for c in 0..k {
            let Some(pr) = (r0..m).find(|&r| rows[r][c] != 0) else {
                continue;
            };
            rows.swap(r0, pr);
            let inv = inv_mod(rows[r0][c], p);
            for v in rows[r0].iter_mut() {
                *v = *v * inv % p;
            }
            for r in 0..m {
                if r != r0 && rows[r][c] != 0 {
                    let f = rows[r][c];
                    for j in 0..=k {
                        rows[r][j] = (rows[r][j] + p * p - f * rows[r0][j] % p) % p;
                    }
                }
            }
            pivots.push(c);
            r0 += 1;
        }
        if rows[r0..].iter().any(|row| row[k] != 0) {
            return None;
        }
        let mut coeffs = vec![0u32; k];
        for (i, &c) in pivots.iter().enumerate() {
            coeffs[c] = rows[i][k] as u32;
        }
        Some(s.from_coeffs(&coeffs))
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn compute_powers(src: &FieldCtx, dst: &FieldCtx) -> Result<Vec<Fe>> {
    let k = src.k() as usize;
    if k == 1 {
        return Ok(vec![Fe::ONE]);
    }
    let modulus: Vec<Fe> = src.modulus().iter().map(|&c| Fe(c)).collect();
    let roots = upoly::distinct_roots(dst, &modulus)?;
    let r = *roots
        .first()
        .ok_or_else(|| Error::Internal("source modulus has no root in target".into()))?;
    let mut out = Vec::with_capacity(k);
    let mut cur = Fe::ONE;
    for _ in 0..k {
        out.push(cur);
        cur = dst.mul(cur, r);
    }
    Ok(out)
}

/// Image of `a` under the fixed embedding `src -> dst`.
pub fn embed(src: &Field, a: Fe, dst: &Field) -> Result<Fe> {
    Ok(Embedding::new(src, dst)?.apply(a))
}
