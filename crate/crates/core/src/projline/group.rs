use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::mobius::{Mobius, ProjPoint};
use crate::error::{Error, Result};
use crate::ff::{
    gf, gf_q, prime_power, primitive_root_of_unity, roots_of_unity, unity_extension_degree,
    Embedding, Fe, Field, FieldCtx,
};

/// Default cap on closure size.
pub const CLOSURE_CAP: usize = 10_000;
/// Default bound on `q` for [`enumerate_pgl2`].
pub const PGL2_ENUM_BOUND: u32 = 25;
/// Largest extension degree tried when a constructor needs roots of unity.
pub const EXT_CAP: u32 = 12;

/// Isomorphism-type tag of a finite subgroup of PGL2.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum GroupLabel {
    Cyclic(u64),
    Dihedral(u64),
    A4,
    S4,
    A5,
    PGL2(u64),
    PSL2(u64),
    Borel(u64),
    SemiElementary(u64, u64),
    Unknown,
}

impl GroupLabel {
    /// Abstract order implied by the label.
    pub fn order(&self) -> Option<u64> {
        Some(match *self {
            GroupLabel::Cyclic(n) => n,
            GroupLabel::Dihedral(n) => 2 * n,
            GroupLabel::A4 => 12,
            GroupLabel::S4 => 24,
            GroupLabel::A5 => 60,
            GroupLabel::PGL2(q) => q * q * q - q,
            GroupLabel::PSL2(q) => {
                if q % 2 == 0 {
                    q * q * q - q
                } else {
                    (q * q * q - q) / 2
                }
            }
            GroupLabel::Borel(q) => q * (q - 1),
            GroupLabel::SemiElementary(l, n) => l * n,
            GroupLabel::Unknown => return None,
        })
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Cyclic(n) => write!(f, "Cyclic({n})"),
            GroupLabel::Dihedral(n) => write!(f, "Dihedral({n})"),
            GroupLabel::A4 => write!(f, "A4"),
            GroupLabel::S4 => write!(f, "S4"),
            GroupLabel::A5 => write!(f, "A5"),
            GroupLabel::PGL2(q) => write!(f, "PGL2({q})"),
            GroupLabel::PSL2(q) => write!(f, "PSL2({q})"),
            GroupLabel::Borel(q) => write!(f, "Borel({q})"),
            GroupLabel::SemiElementary(l, n) => write!(f, "SemiElementary({l},{n})"),
            GroupLabel::Unknown => write!(f, "Unknown"),
        }
    }
}

/// A finite subgroup of PGL2 over a concrete field: a sorted element list
/// plus every applicable label, most specific first.
#[derive(Clone, Debug)]
pub struct GroupDesc {
    pub field: Field,
    pub elements: Vec<Mobius>,
    pub labels: Vec<GroupLabel>,
    /// Degree of `field` over the field the caller asked for.
    pub ext_degree: u32,
}

impl PartialEq for GroupDesc {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.elements == o.elements
    }
}

impl GroupDesc {
    /// Builds a descriptor from a set already known to be a group.
    pub fn from_elements(field: &Field, mut elements: Vec<Mobius>) -> GroupDesc {
        elements.sort();
        elements.dedup();
        let labels = recognize_group_type(field, &elements);
        GroupDesc {
            field: field.clone(),
            elements,
            labels,
            ext_degree: 1,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn label(&self) -> GroupLabel {
        self.labels[0]
    }

    pub fn has_label(&self, l: GroupLabel) -> bool {
        self.labels.contains(&l)
    }

    pub fn contains(&self, m: &Mobius) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        let f = &self.field;
        self.contains(&Mobius::IDENTITY)
            && self.elements.iter().all(|a| {
                self.contains(&a.inverse(f))
                    && self.elements.iter().all(|b| self.contains(&a.compose(f, b)))
            })
    }

    /// The same group over an extension field.
    pub fn embed(&self, target: &Field) -> Result<GroupDesc> {
        let e = Embedding::new(&self.field, target)?;
        let els = self.elements.iter().map(|m| m.embed(&e)).collect();
        let mut g = GroupDesc::from_elements(target, els);
        g.ext_degree = self.ext_degree * (target.k() / self.field.k());
        Ok(g)
    }

    /// `s^-1 G s`.
    pub fn conjugate_by(&self, s: &Mobius) -> GroupDesc {
        let f = &self.field;
        let els = self.elements.iter().map(|m| m.conjugate_by(f, s)).collect();
        let mut g = GroupDesc::from_elements(f, els);
        g.ext_degree = self.ext_degree;
        g
    }

    /// Histogram of element orders.
    pub fn order_histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for m in &self.elements {
            *h.entry(m.order(&self.field)).or_insert(0) += 1;
        }
        h
    }
}

/// Closure of `gens` under composition, by breadth-first products.
pub fn group_closure(f: &Field, gens: &[Mobius], cap: usize) -> Result<GroupDesc> {
    if gens.is_empty() {
        return Err(Error::Invalid("empty generator list".into()));
    }
    let mut seen: HashSet<Mobius> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(Mobius::IDENTITY);
    queue.push_back(Mobius::IDENTITY);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(f, g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::ClosureCap(cap));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(GroupDesc::from_elements(f, seen.into_iter().collect()))
}

/// All of PGL2(F) for `|F| <= bound`.
pub fn enumerate_pgl2(f: &Field, bound: u32) -> Result<GroupDesc> {
    if f.q() > bound {
        return Err(Error::BoundExceeded(format!(
            "PGL2 enumeration over a field of size {} (bound {bound})",
            f.q()
        )));
    }
    let mut els = Vec::with_capacity((f.q() as usize).pow(3));
    for b in f.elements() {
        for c in f.elements() {
            for d in f.elements() {
                if d != f.mul(b, c) {
                    els.push(Mobius { a: Fe::ONE, b, c, d });
                }
            }
        }
    }
    for c in f.elements().filter(|c| !c.is_zero()) {
        for d in f.elements() {
            els.push(Mobius {
                a: Fe::ZERO,
                b: Fe::ONE,
                c,
                d,
            });
        }
    }
    Ok(GroupDesc::from_elements(f, els))
}

fn p_part(n: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        r *= p;
    }
    r
}

/// `|PGL2(F_q)|`, or `None` past `u64`.
fn pgl2_order(q: u64) -> Option<u64> {
    q.checked_pow(3).map(|c| c - q)
}

fn common_fixed_point(f: &FieldCtx, els: &[Mobius]) -> bool {
    let mut common: Option<Vec<ProjPoint>> = None;
    for m in els.iter().filter(|m| !m.is_identity()) {
        let fp = m.fixed_points(f);
        common = Some(match common {
            None => fp,
            Some(c) => c.into_iter().filter(|x| fp.contains(x)).collect(),
        });
        if common.as_ref().is_some_and(|c| c.is_empty()) {
            return false;
        }
    }
    true
}

/// Every label that applies to the (closed) set `els`, most specific first.
pub fn recognize_group_type(f: &FieldCtx, els: &[Mobius]) -> Vec<GroupLabel> {
    let n = els.len() as u64;
    let p = f.p() as u64;
    let mut labels = Vec::new();
    if n == 1 {
        return vec![GroupLabel::Cyclic(1)];
    }
    let orders: Vec<u64> = els.iter().map(|m| m.order(f)).collect();
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for &o in &orders {
        *hist.entry(o).or_insert(0) += 1;
    }
    let cfp = common_fixed_point(f, els);
    let n_p = orders.iter().filter(|&&o| p_part(o, p) == o).count() as u64;
    let sylow = p_part(n, p);
    let subfields: Vec<u32> = (1..=f.k()).filter(|j| f.k() % j == 0).collect();

    for &j in &subfields {
        let qq = p.pow(j);
        if pgl2_order(qq) == Some(n) && els.iter().all(|m| m.in_subfield(f, j)) {
            labels.push(GroupLabel::PGL2(qq));
            break;
        }
    }
    for &j in &subfields {
        let qq = p.pow(j);
        if qq % 2 == 1
            && pgl2_order(qq).map(|o| o / 2) == Some(n)
            && els.iter().all(|m| m.in_subfield(f, j))
            && els.iter().all(|m| {
                // squareness inside GF(qq)
                let d = m.det(f);
                f.pow(d, (qq - 1) / 2) == Fe::ONE
            })
        {
            labels.push(GroupLabel::PSL2(qq));
            break;
        }
    }
    if p_part(n, p) > 1 && cfp && n_p == sylow && n == sylow * (sylow - 1) {
        labels.push(GroupLabel::Borel(sylow));
    }
    if hist.contains_key(&n) {
        labels.push(GroupLabel::Cyclic(n));
    } else if n % 2 == 0 && n >= 4 {
        let m = n / 2;
        let dihedral = els.iter().zip(&orders).any(|(r, &o)| {
            if o != m {
                return false;
            }
            let mut sub = HashSet::new();
            let mut cur = Mobius::IDENTITY;
            for _ in 0..m {
                sub.insert(cur);
                cur = cur.compose(f, r);
            }
            els.iter()
                .zip(&orders)
                .all(|(x, &ox)| sub.contains(x) || ox == 2)
        });
        if dihedral {
            labels.push(GroupLabel::Dihedral(m));
        }
    }
    let hist_is = |want: &[(u64, u64)]| {
        hist.len() == want.len() && want.iter().all(|(o, c)| hist.get(o) == Some(c))
    };
    if n == 12 && hist_is(&[(1, 1), (2, 3), (3, 8)]) {
        labels.push(GroupLabel::A4);
    }
    if n == 24 && hist_is(&[(1, 1), (2, 9), (3, 8), (4, 6)]) {
        labels.push(GroupLabel::S4);
    }
    if n == 60 && hist_is(&[(1, 1), (2, 15), (3, 20), (5, 24)]) {
        labels.push(GroupLabel::A5);
    }
    if n % p == 0 && !cfp {
        let mut qq = p;
        while pgl2_order(qq).is_some_and(|o| o <= n) {
            if pgl2_order(qq) == Some(n) && !labels.contains(&GroupLabel::PGL2(qq)) {
                labels.push(GroupLabel::PGL2(qq));
            }
            if qq % 2 == 1
                && pgl2_order(qq).map(|o| o / 2) == Some(n)
                && !labels.contains(&GroupLabel::PSL2(qq))
            {
                labels.push(GroupLabel::PSL2(qq));
            }
            qq *= p;
        }
    }
    if n % p == 0 && cfp && n_p == sylow {
        labels.push(GroupLabel::SemiElementary(sylow, n / sylow));
    }
    if labels.is_empty() {
        labels.push(GroupLabel::Unknown);
    }
    labels
}

/// `{z -> a z + b : a in mu_n, b in Lambda}` with `Lambda` the GF(p)-span of
/// `basis`.
pub fn semi_elementary_subgroup(f: &Field, basis: &[Fe], n: u64) -> Result<GroupDesc> {
    let p = f.p() as u64;
    if n % p == 0 {
        return Err(Error::CharDivides(n));
    }
    let (mu, truncated) = roots_of_unity(f, n)?;
    if truncated {
        return Err(Error::NoRootsOfUnity(n));
    }
    let lambda = additive_span(f, basis);
    if lambda.len() as u64 != p.pow(basis.len() as u32) {
        return Err(Error::InvalidSubgroup("basis is not independent over GF(p)".into()));
    }
    let set: HashSet<Fe> = lambda.iter().copied().collect();
    for &a in &mu {
        for &b in &lambda {
            if !set.contains(&f.mul(a, b)) {
                return Err(Error::InvalidSubgroup(
                    "mu_n does not preserve Lambda".into(),
                ));
            }
        }
    }
    let mut els = Vec::new();
    for &a in &mu {
        for &b in &lambda {
            els.push(Mobius::affine(f, a, b));
        }
    }
    Ok(GroupDesc::from_elements(f, els))
}

/// GF(p)-span of `basis`, sorted.
pub fn additive_span(f: &FieldCtx, basis: &[Fe]) -> Vec<Fe> {
    let mut set: Vec<Fe> = vec![Fe::ZERO];
    for &b in basis {
        let mut next = Vec::new();
        for &s in &set {
            let mut cur = s;
            for _ in 0..f.p() {
                next.push(cur);
                cur = f.add(cur, b);
            }
        }
        next.sort();
        next.dedup();
        set = next;
    }
    set
}

/// Families constructible by [`standard_subgroup`].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GroupKind {
    Cyclic(u64),
    Dihedral(u64),
    Borel(u64),
    PGL2(u64),
    PSL2(u64),
    A4,
    S4,
    A5,
}

impl FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupKind> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "a4" => return Ok(GroupKind::A4),
            "s4" => return Ok(GroupKind::S4),
            "a5" => return Ok(GroupKind::A5),
            _ => {}
        }
        let (name, arg) = lower
            .split_once(':')
            .or_else(|| {
                let open = lower.find('(')?;
                Some((&lower[..open], lower[open + 1..].trim_end_matches(')')))
            })
            .ok_or_else(|| Error::Invalid(format!("unknown group kind {s}")))?;
        let n: u64 = arg
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad group parameter in {s}")))?;
        Ok(match name.trim() {
            "cyclic" | "c" => GroupKind::Cyclic(n),
            "dihedral" | "d" => GroupKind::Dihedral(n),
            "borel" => GroupKind::Borel(n),
            "pgl2" => GroupKind::PGL2(n),
            "psl2" => GroupKind::PSL2(n),
            _ => return Err(Error::Invalid(format!("unknown group kind {s}"))),
        })
    }
}

fn extend(base: &Field, e: u32) -> Result<Field> {
    gf(base.p(), base.k() * e)
}

/// Smallest extension of `base` that contains GF(q).
pub fn field_containing(base: &Field, q: u64) -> Result<Field> {
    let (p, j) = prime_power(q).ok_or(Error::NotPrime(q))?;
    if p != base.p() {
        return Err(Error::FieldMismatch(format!(
            "GF({q}) has characteristic {p}, field has {}",
            base.p()
        )));
    }
    let k = base.k();
    let l = k / crate::ff::gcd_u64(k as u64, j as u64) as u32 * j;
    gf(p, l)
}

fn abstract_order(kind: GroupKind) -> Option<u64> {
    match kind {
        GroupKind::Cyclic(n) => Some(n),
        GroupKind::Dihedral(n) => Some(2 * n),
        GroupKind::A4 => Some(12),
        GroupKind::S4 => Some(24),
        GroupKind::A5 => Some(60),
        _ => None,
    }
}

fn unity_field(base: &Field, n: u64) -> Result<(Field, Fe)> {
    let e = unity_extension_degree(base, n);
    if e > EXT_CAP {
        return Err(Error::NoRootsOfUnity(n));
    }
    let f = extend(base, e)?;
    let z = primitive_root_of_unity(&f, n).ok_or(Error::NoRootsOfUnity(n))?;
    Ok((f, z))
}

fn rational_subset(
    base: &Field,
    q: u64,
    keep: impl Fn(&FieldCtx, &Mobius) -> bool,
) -> Result<GroupDesc> {
    let small = gf_q(q)?;
    let all = enumerate_pgl2(&small, u32::MAX)?;
    let els: Vec<Mobius> = all
        .elements
        .into_iter()
        .filter(|m| keep(&small, m))
        .collect();
    let g = GroupDesc::from_elements(&small, els);
    let target = field_containing(base, q)?;
    let mut out = g.embed(&target)?;
    out.ext_degree = target.k() / base.k();
    Ok(out)
}

/// Standard representative of a subgroup family, over the smallest extension
/// of `base` where it is defined.
pub fn standard_subgroup(base: &Field, kind: GroupKind) -> Result<GroupDesc> {
    let p = base.p() as u64;
    if let Some(n) = abstract_order(kind) {
        if matches!(kind, GroupKind::A4 | GroupKind::S4 | GroupKind::A5) && n % p == 0 {
            return Err(Error::CharDivides(n));
        }
    }
    let mut g = match kind {
        GroupKind::Cyclic(n) | GroupKind::Dihedral(n) => {
            if n % p == 0 {
                return Err(Error::CharDivides(n));
            }
            let (f, z) = unity_field(base, n)?;
            let mut gens = vec![Mobius::scaling(&f, z)];
            if matches!(kind, GroupKind::Dihedral(_)) {
                gens.push(Mobius::reciprocal());
            }
            let mut g = group_closure(&f, &gens, CLOSURE_CAP)?;
            g.ext_degree = f.k() / base.k();
            g
        }
        GroupKind::Borel(q) => {
            return rational_subset(base, q, |_, m| m.c.is_zero());
        }
        GroupKind::PGL2(q) => return rational_subset(base, q, |_, _| true),
        GroupKind::PSL2(q) => {
            if q % 2 == 0 {
                return rational_subset(base, q, |_, _| true);
            }
            return rational_subset(base, q, |f, m| f.is_square(m.det(f)));
        }
        GroupKind::A4 | GroupKind::S4 => {
            let (f, i) = unity_field(base, 4)?;
            let one = Fe::ONE;
            let m1 = f.neg(one);
            let s = Mobius::new(&f, i, i, one, m1)?;
            let u = Mobius::reciprocal();
            let gens = if kind == GroupKind::A4 {
                vec![s, Mobius::scaling(&f, m1), u]
            } else {
                vec![s, Mobius::scaling(&f, i), u]
            };
            let mut g = group_closure(&f, &gens, CLOSURE_CAP)?;
            g.ext_degree = f.k() / base.k();
            g
        }
        GroupKind::A5 => {
            let (f, z) = unity_field(base, 5)?;
            let zp = |e: u64| f.pow(z, e);
            let s = Mobius::new(&f, zp(3), Fe::ZERO, Fe::ZERO, zp(2))?;
            let a = f.sub(zp(1), zp(4));
            let b = f.sub(zp(3), zp(2));
            let t = Mobius::new(&f, a, b, b, f.neg(a))?;
            let mut g = group_closure(&f, &[s, t], CLOSURE_CAP)?;
            g.ext_degree = f.k() / base.k();
            g
        }
    };
    if let Some(n) = abstract_order(kind) {
        if g.order() as u64 != n {
            return Err(Error::Internal(format!(
                "reduction of {kind:?} is not faithful: order {} != {n}",
                g.order()
            )));
        }
    }
    g.labels = recognize_group_type(&g.field, &g.elements);
    Ok(g)
}
