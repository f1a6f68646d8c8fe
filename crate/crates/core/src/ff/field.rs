use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on `p^k`.
pub const DEFAULT_SIZE_BOUND: u64 = 1 << 31;

/// Fields up to this size get log/exp/Zech tables.
const TABLE_LIMIT: u64 = 1 << 20;

const NONE: u32 = u32::MAX;

/// A field element, encoded as the integer whose base-`p` digits are its
/// coordinates in the polynomial basis `1, x, ..., x^(k-1)`.
///
/// Prime-subfield elements have the same encoding in every extension.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fe(pub u32);

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub type Field = Arc<FieldCtx>;

struct Tables {
    log: Vec<u32>,
    // exp has length 2(q-1) so sums of two logs need no reduction
    exp: Vec<u32>,
    // zech[n] = log(1 + g^n), NONE when 1 + g^n = 0
    zech: Vec<u32>,
}

/// Arithmetic context for GF(p^k).
pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    pw: Vec<u32>,
    tables: Option<Tables>,
    primitive: Fe,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

/// If `q` is a prime power `p^k`, returns `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut k = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        k += 1;
    }
    Some((p as u32, k))
}

// Dense polynomials over Z/p with u64 coefficients, used only to find moduli.
mod zp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv = super::inv_mod(m[dm], p);
        while r.len() > dm {
            let lead = r[r.len() - 1] * inv % p;
            let shift = r.len() - 1 - dm;
            for i in 0..=dm {
                r[shift + i] = (r[shift + i] + p - lead * m[i] % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        rem(&r, m, p)
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = rem(&[1], m, p);
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut r: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut r);
        r
    }

    /// Rabin's irreducibility test for monic `f` of degree `k`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = (f.len() - 1) as u64;
        if k == 1 {
            return true;
        }
        let x = vec![0, 1];
        // x^(p^i) mod f
        let frob = |i: u64| {
            let mut h = x.clone();
            for _ in 0..i {
                h = powmod(&h, p, f, p);
            }
            h
        };
        let full = frob(k);
        if sub(&full, &x, p) != Vec::<u64>::new() {
            return false;
        }
        for r in super::prime_factors(k) {
            let h = frob(k / r);
            let g = gcd(f, &sub(&h, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod_u64(a % p, p - 2, p)
}

fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Lexicographically least monic irreducible of degree `k` over GF(p),
/// comparing coefficient vectors from the constant term upward.
fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    if k == 1 {
        return vec![0, 1];
    }
    let p64 = p as u64;
    let total = p64.pow(k);
    for idx in 0..total {
        // the constant coefficient is the most significant digit of idx
        let mut f = vec![0u64; k as usize + 1];
        let mut r = idx;
        for j in (0..k as usize).rev() {
            f[j] = r % p64;
            r /= p64;
        }
        f[k as usize] = 1;
        if f[0] == 0 {
            continue;
        }
        if zp::is_irreducible(&f, p64) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    fn build(p: u32, k: u32) -> FieldCtx {
        let q = (p as u64).pow(k) as u32;
        let modulus = least_irreducible(p, k);
        let pw = (0..=k).map(|i| (p as u64).pow(i) as u32).collect();
        let mut ctx = FieldCtx {
            p,
            k,
            q,
            modulus,
            pw,
            tables: None,
            primitive: Fe::ONE,
        };
        ctx.primitive = ctx.find_primitive();
        if (q as u64) <= TABLE_LIMIT && k > 1 {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx
    }

    fn find_primitive(&self) -> Fe {
        if self.q == 2 {
            return Fe::ONE;
        }
        let n = (self.q - 1) as u64;
        let fs = prime_factors(n);
        for e in 1..self.q {
            let a = Fe(e);
            if fs.iter().all(|&r| self.pow_slow(a, n / r) != Fe::ONE) {
                return a;
            }
        }
        unreachable!("multiplicative group is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let n = (self.q - 1) as usize;
        let mut log = vec![NONE; self.q as usize];
        let mut exp = vec![0u32; 2 * n];
        let mut cur = Fe::ONE;
        for i in 0..n {
            exp[i] = cur.0;
            exp[i + n] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, self.primitive);
        }
        let mut zech = vec![NONE; n];
        for (i, z) in zech.iter_mut().enumerate() {
            let s = self.add_digits(Fe(exp[i]), Fe::ONE);
            if s.0 != 0 {
                *z = log[s.0 as usize];
            }
        }
        Tables { log, exp, zech }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    /// Field size `p^k`.
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Monic modulus, low-to-high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn primitive(&self) -> Fe {
        self.primitive
    }
    /// Class of `x` in the polynomial basis (equals `0` when `k = 1`).
    pub fn basis_gen(&self) -> Fe {
        if self.k == 1 {
            Fe::ZERO
        } else {
            Fe(self.p)
        }
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    pub fn from_i64(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fe {
        let mut v = 0u32;
        for (i, &d) in c.iter().enumerate().take(self.k as usize) {
            v += (d % self.p) * self.pw[i];
        }
        Fe(v)
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut r = a.0;
        for _ in 0..self.k {
            out.push(r % self.p);
            r /= self.p;
        }
        out
    }

    /// Returns `Some(n)` when `a` lies in the prime field.
    pub fn as_prime(&self, a: Fe) -> Option<u32> {
        (a.0 < self.p).then_some(a.0)
    }

    fn add_digits(&self, a: Fe, b: Fe) -> Fe {
        let (mut x, mut y) = (a.0, b.0);
        let mut v = 0u32;
        for i in 0..self.k as usize {
            let d = (x % self.p + y % self.p) % self.p;
            v += d * self.pw[i];
            x /= self.p;
            y /= self.p;
        }
        Fe(v)
    }

    fn neg_digits(&self, a: Fe) -> Fe {
        let mut x = a.0;
        let mut v = 0u32;
        for i in 0..self.k as usize {
            let d = (self.p - x % self.p) % self.p;
            v += d * self.pw[i];
            x /= self.p;
        }
        Fe(v)
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.k == 1 {
            let s = a.0 + b.0;
            return Fe(if s >= self.p { s - self.p } else { s });
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let n = self.q - 1;
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = t.zech[d as usize];
                if z == NONE {
                    Fe::ZERO
                } else {
                    Fe(t.exp[(la + z) as usize])
                }
            }
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        if self.k == 1 {
            return Fe(self.p - a.0);
        }
        match &self.tables {
            Some(t) => Fe(t.exp[(t.log[a.0 as usize] + (self.q - 1) / 2) as usize]),
            None => self.neg_digits(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if self.k == 1 {
            return Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32);
        }
        match &self.tables {
            Some(t) => Fe(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p as u64;
        let k = self.k as usize;
        let da: Vec<u64> = self.coeffs(a).into_iter().map(u64::from).collect();
        let db: Vec<u64> = self.coeffs(b).into_iter().map(u64::from).collect();
        let mut r = vec![0u64; 2 * k - 1];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                r[i + j] = (r[i + j] + da[i] * db[j]) % p;
            }
        }
        for top in (k..2 * k - 1).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            r[top] = 0;
            for i in 0..k {
                let m = self.modulus[i] as u64;
                r[top - k + i] = (r[top - k + i] + p * p - c * m % p) % p;
            }
        }
        let mut v = 0u32;
        for i in 0..k {
            v += r[i] as u32 * self.pw[i];
        }
        Fe(v)
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = Fe::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow_or_prime(r, b);
            }
            b = self.mul_slow_or_prime(b, b);
            e >>= 1;
        }
        r
    }

    fn mul_slow_or_prime(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
        } else if a.0 == 0 || b.0 == 0 {
            Fe::ZERO
        } else {
            self.mul_slow(a, b)
        }
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.0 == 0 {
            return Fe::ZERO;
        }
        if let Some(t) = &self.tables {
            let n = (self.q - 1) as u64;
            let l = (t.log[a.0 as usize] as u64 * (e % n)) % n;
            return Fe(t.exp[l as usize]);
        }
        let mut r = Fe::ONE;
        let mut b = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// Signed exponent; negative powers of zero are an error.
    pub fn pow_i(&self, a: Fe, e: i64) -> Result<Fe> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        if let Some(t) = &self.tables {
            let n = self.q - 1;
            let l = t.log[a.0 as usize];
            return Ok(Fe(t.exp[((n - l) % n) as usize]));
        }
        Ok(self.pow(a, (self.q - 2) as u64))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Euler's criterion; every element is a square in characteristic 2.
    pub fn is_square(&self, a: Fe) -> bool {
        if self.p == 2 || a.0 == 0 {
            return true;
        }
        self.pow(a, ((self.q - 1) / 2) as u64) == Fe::ONE
    }

    /// Discrete log base the primitive element, when tables exist.
    pub fn log(&self, a: Fe) -> Option<u32> {
        match &self.tables {
            Some(t) if a.0 != 0 => Some(t.log[a.0 as usize]),
            _ => None,
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        assert!(a.0 != 0, "order of zero");
        let mut n = (self.q - 1) as u64;
        for r in prime_factors(n) {
            while n % r == 0 && self.pow(a, n / r) == Fe::ONE {
                n /= r;
            }
        }
        n
    }

    /// True when `a` lies in the subfield GF(p^j).
    pub fn in_subfield(&self, a: Fe, j: u32) -> bool {
        if j == 0 || self.k % j != 0 {
            return false;
        }
        if j == self.k {
            return true;
        }
        let mut b = a;
        for _ in 0..j {
            b = self.frobenius(b);
        }
        b == a
    }

    /// Smallest `j` with `a` in GF(p^j).
    pub fn degree_of(&self, a: Fe) -> u32 {
        (1..=self.k)
            .find(|&j| self.k % j == 0 && self.in_subfield(a, j))
            .unwrap_or(self.k)
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ZERO, |s, x| self.add(s, x))
    }

    pub fn product<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        it.into_iter().fold(Fe::ONE, |s, x| self.mul(s, x))
    }

    /// Human-readable element: an integer in the prime field, otherwise a
    /// polynomial in `w`, the class of `x` modulo the defining polynomial.
    pub fn format(&self, a: Fe) -> String {
        if a.0 < self.p {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let mut terms = Vec::new();
        for (i, &d) in c.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let t = match (i, d) {
                (0, d) => d.to_string(),
                (1, 1) => "w".to_string(),
                (1, d) => format!("{d}*w"),
                (i, 1) => format!("w^{i}"),
                (i, d) => format!("{d}*w^{i}"),
            };
            terms.push(t);
        }
        terms.join("+")
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// GF(p^k) with the default size bound. The same `(p, k)` always yields the
/// same shared context.
pub fn gf(p: u32, k: u32) -> Result<Field> {
    create_field(p, k, DEFAULT_SIZE_BOUND)
}

pub fn create_field(p: u32, k: u32, bound: u64) -> Result<Field> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let size = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if size > bound as u128 || size > DEFAULT_SIZE_BOUND as u128 {
        return Err(Error::FieldTooLarge(size, bound.min(DEFAULT_SIZE_BOUND)));
    }
    if let Some(f) = registry().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    // built outside the lock; a racing duplicate is identical and discarded
    let built = Arc::new(FieldCtx::build(p, k));
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p, k)).or_insert(built).clone())
}

/// GF(q) for a prime power `q`.
pub fn gf_q(q: u64) -> Result<Field> {
    let (p, k) = prime_power(q).ok_or(Error::NotPrime(q))?;
    gf(p, k)
}
