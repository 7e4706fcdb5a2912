//! Commutative coefficient rings: a base field (QQ, QQ(i)) or ZZ, a list of
//! named variables (polynomial, Laurent, or truncated at a fixed power), and
//! an optional finite abelian group ring part given by cyclic generators.
//!
//! Elements are sparse sums of monomials with exact coefficients. Every
//! operation is total or returns a typed error; nothing approximates.

mod coeff;
mod text;

pub use coeff::Coeff;

use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Rationals,
    GaussianRationals,
    Integers,
}

impl Base {
    fn id_str(self) -> &'static str {
        match self {
            Base::Rationals => "QQ",
            Base::GaussianRationals => "QQ(i)",
            Base::Integers => "ZZ",
        }
    }

    fn is_field(self) -> bool {
        !matches!(self, Base::Integers)
    }

    /// Widening allowed: ZZ -> QQ -> QQ(i).
    fn widens_to(self, other: Base) -> bool {
        match (self, other) {
            (a, b) if a == b => true,
            (Base::Integers, Base::Rationals) | (Base::Integers, Base::GaussianRationals) => true,
            (Base::Rationals, Base::GaussianRationals) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    /// Exponents >= 0.
    Polynomial,
    /// Exponents in ZZ; monomials are units.
    Laurent,
    /// Exponents 0..=N; anything above N is zero.
    TruncatedAt(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupGen {
    pub name: String,
    pub order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDescriptor {
    pub base: Base,
    pub vars: Vec<VarSpec>,
    pub group: Vec<GroupGen>,
}

impl RingDescriptor {
    fn id(&self) -> String {
        let mut s = self.base.id_str().to_string();
        for v in &self.vars {
            let k = match v.kind {
                VarKind::Polynomial => "poly".to_string(),
                VarKind::Laurent => "laurent".to_string(),
                VarKind::TruncatedAt(n) => format!("trunc{n}"),
            };
            s.push_str(&format!("[{}:{}]", v.name, k));
        }
        for g in &self.group {
            s.push_str(&format!("{{{}:{}}}", g.name, g.order));
        }
        s
    }
}

#[derive(Debug)]
struct RingInner {
    desc: RingDescriptor,
    id: String,
}

/// Shared handle to a ring. Cheap to clone; equality is pointer identity or
/// identical descriptor, so independently built copies of the same ring are
/// interchangeable.
#[derive(Debug, Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.id == other.0.id
    }
}
impl Eq for Ring {}

pub struct RingBuilder {
    desc: RingDescriptor,
}

impl RingBuilder {
    pub fn poly(mut self, name: &str) -> Self {
        self.desc.vars.push(VarSpec { name: name.into(), kind: VarKind::Polynomial });
        self
    }

    pub fn laurent(mut self, name: &str) -> Self {
        self.desc.vars.push(VarSpec { name: name.into(), kind: VarKind::Laurent });
        self
    }

    /// Variable with exponents capped at `n`; powers above `n` vanish.
    pub fn trunc(mut self, name: &str, n: u32) -> Self {
        assert!(n >= 1, "truncation bound must be at least 1");
        self.desc.vars.push(VarSpec { name: name.into(), kind: VarKind::TruncatedAt(n) });
        self
    }

    pub fn group(mut self, name: &str, order: u32) -> Self {
        assert!(order >= 2, "group generator order must be at least 2");
        self.desc.group.push(GroupGen { name: name.into(), order });
        self
    }

    pub fn build(self) -> Ring {
        let mut names: Vec<&str> = self.desc.vars.iter().map(|v| v.name.as_str()).collect();
        names.extend(self.desc.group.iter().map(|g| g.name.as_str()));
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert!(sorted.len() == names.len(), "duplicate variable or generator name");
        let id = self.desc.id();
        Ring(Arc::new(RingInner { desc: self.desc, id }))
    }
}

impl Ring {
    pub fn builder(base: Base) -> RingBuilder {
        RingBuilder { desc: RingDescriptor { base, vars: Vec::new(), group: Vec::new() } }
    }

    pub fn rationals() -> Ring {
        Ring::builder(Base::Rationals).build()
    }

    pub fn gaussian_rationals() -> Ring {
        Ring::builder(Base::GaussianRationals).build()
    }

    pub fn id(&self) -> &str {
        &self.0.id
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.desc
    }

    pub fn base(&self) -> Base {
        self.0.desc.base
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.0.desc.vars
    }

    pub fn group(&self) -> &[GroupGen] {
        &self.0.desc.group
    }

    /// True for QQ or QQ(i) with no variables and no group part.
    pub fn is_scalar_field(&self) -> bool {
        self.base().is_field() && self.vars().is_empty() && self.group().is_empty()
    }

    fn var_index(&self, name: &str) -> Result<usize> {
        self.vars().iter().position(|v| v.name == name).ok_or_else(|| Error::UnknownVariable {
            name: name.into(),
            ring: self.id().into(),
        })
    }

    fn gen_index(&self, name: &str) -> Result<usize> {
        self.group().iter().position(|g| g.name == name).ok_or_else(|| Error::UnknownVariable {
            name: name.into(),
            ring: self.id().into(),
        })
    }

    /// A copy of this ring with one more variable appended.
    pub fn with_var(&self, name: &str, kind: VarKind) -> Ring {
        let mut desc = self.descriptor().clone();
        desc.vars.push(VarSpec { name: name.into(), kind });
        let id = desc.id();
        Ring(Arc::new(RingInner { desc, id }))
    }

    /// A copy of this ring with one variable removed.
    pub fn without_var(&self, name: &str) -> Result<Ring> {
        let idx = self.var_index(name)?;
        let mut desc = self.descriptor().clone();
        desc.vars.remove(idx);
        let id = desc.id();
        Ok(Ring(Arc::new(RingInner { desc, id })))
    }

    fn trivial_mono(&self) -> Mono {
        Mono { vexp: vec![0; self.vars().len()], gexp: vec![0; self.group().len()] }
    }

    pub fn zero(&self) -> RingElement {
        RingElement { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> RingElement {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> RingElement {
        let mut terms = BTreeMap::new();
        if n != 0 {
            terms.insert(self.trivial_mono(), Coeff::from_int(n));
        }
        RingElement { ring: self.clone(), terms }
    }

    pub fn coeff(&self, c: Coeff) -> Result<RingElement> {
        self.check_coeff(&c)?;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(self.trivial_mono(), c);
        }
        Ok(RingElement { ring: self.clone(), terms })
    }

    pub fn rat(&self, num: i64, den: i64) -> Result<RingElement> {
        self.coeff(Coeff::from_ratio(num, den))
    }

    /// The imaginary unit; requires a Gaussian base.
    pub fn imag(&self) -> Result<RingElement> {
        self.coeff(Coeff::i())
    }

    fn check_coeff(&self, c: &Coeff) -> Result<()> {
        match self.base() {
            Base::GaussianRationals => Ok(()),
            Base::Rationals => {
                if c.is_real() {
                    Ok(())
                } else {
                    Err(Error::Unsupported(format!("imaginary coefficient in {}", self.id())))
                }
            }
            Base::Integers => {
                if c.is_real() && c.is_integral() {
                    Ok(())
                } else {
                    Err(Error::Unsupported(format!("non-integer coefficient in {}", self.id())))
                }
            }
        }
    }

    pub fn var(&self, name: &str) -> Result<RingElement> {
        self.var_pow(name, 1)
    }

    pub fn var_pow(&self, name: &str, e: i64) -> Result<RingElement> {
        let idx = self.var_index(name)?;
        let kind = self.vars()[idx].kind;
        match kind {
            VarKind::Laurent => {}
            VarKind::Polynomial => {
                if e < 0 {
                    return Err(Error::NonUnit {
                        ring: self.id().into(),
                        reason: format!("negative power of polynomial variable `{name}`"),
                    });
                }
            }
            VarKind::TruncatedAt(n) => {
                if e < 0 {
                    return Err(Error::NonUnit {
                        ring: self.id().into(),
                        reason: format!("negative power of truncated variable `{name}`"),
                    });
                }
                if e > n as i64 {
                    return Ok(self.zero());
                }
            }
        }
        let mut m = self.trivial_mono();
        m.vexp[idx] = e;
        let mut terms = BTreeMap::new();
        terms.insert(m, Coeff::one());
        Ok(RingElement { ring: self.clone(), terms })
    }

    pub fn gen(&self, name: &str) -> Result<RingElement> {
        self.gen_pow(name, 1)
    }

    pub fn gen_pow(&self, name: &str, e: i64) -> Result<RingElement> {
        let idx = self.gen_index(name)?;
        let order = self.group()[idx].order as i64;
        let mut m = self.trivial_mono();
        m.gexp[idx] = e.rem_euclid(order) as u32;
        let mut terms = BTreeMap::new();
        terms.insert(m, Coeff::one());
        Ok(RingElement { ring: self.clone(), terms })
    }

    /// Single-term element from coefficient, variable powers, and generator powers.
    pub fn monomial(&self, c: Coeff, vpows: &[(&str, i64)], gpows: &[(&str, i64)]) -> Result<RingElement> {
        let mut e = self.coeff(c)?;
        for (name, p) in vpows {
            e = e.try_mul(&self.var_pow(name, *p)?)?;
        }
        for (name, p) in gpows {
            e = e.try_mul(&self.gen_pow(name, *p)?)?;
        }
        Ok(e)
    }

    pub fn parse(&self, input: &str) -> Result<RingElement> {
        text::parse_element(self, input)
    }
}

/// Exponent vector of one monomial: variable exponents aligned with the
/// ring's variable list, then group exponents reduced mod each order.
///
/// The ordering puts small |exponent| first and, at equal magnitude, the
/// positive power before the negative one, variable by variable. This is the
/// canonical print order: `4 + 18*h`, `h + h^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mono {
    pub vexp: Vec<i64>,
    pub gexp: Vec<u32>,
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.vexp.iter().zip(other.vexp.iter()) {
            let ka = (a.unsigned_abs(), *a < 0);
            let kb = (b.unsigned_abs(), *b < 0);
            match ka.cmp(&kb) {
                std::cmp::Ordering::Equal => {}
                ord => return ord,
            }
        }
        self.gexp.cmp(&other.gexp)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Mono {
    fn is_trivial(&self) -> bool {
        self.vexp.iter().all(|e| *e == 0) && self.gexp.iter().all(|e| *e == 0)
    }
}

/// Sparse element of a [`Ring`]: monomial -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElement {
    ring: Ring,
    terms: BTreeMap<Mono, Coeff>,
}

impl RingElement {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(m, c)| m.is_trivial() && c.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient on a single trivial monomial, if this element is a
    /// scalar (zero counts, with coefficient 0).
    pub fn as_scalar(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_trivial() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn check_same_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.ring.id().into(), right: other.ring.id().into() })
        }
    }

    fn insert_term(terms: &mut BTreeMap<Mono, Coeff>, m: Mono, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_term(&mut terms, m.clone(), c.clone());
        }
        Ok(RingElement { ring: self.ring.clone(), terms })
    }

    pub fn try_sub(&self, other: &RingElement) -> Result<RingElement> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> RingElement {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        RingElement { ring: self.ring.clone(), terms }
    }

    /// Monomial product respecting variable kinds; `None` when a truncated
    /// variable overflows its bound (the term vanishes).
    fn mono_mul(ring: &Ring, a: &Mono, b: &Mono) -> Option<Mono> {
        let mut vexp = Vec::with_capacity(a.vexp.len());
        for (i, (x, y)) in a.vexp.iter().zip(b.vexp.iter()).enumerate() {
            let e = x + y;
            if let VarKind::TruncatedAt(n) = ring.vars()[i].kind {
                if e > n as i64 {
                    return None;
                }
            }
            vexp.push(e);
        }
        let gexp = a
            .gexp
            .iter()
            .zip(b.gexp.iter())
            .enumerate()
            .map(|(i, (x, y))| (x + y) % ring.group()[i].order)
            .collect();
        Some(Mono { vexp, gexp })
    }

    pub fn try_mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_same_ring(other)?;
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(m) = Self::mono_mul(&self.ring, ma, mb) {
                    Self::insert_term(&mut terms, m, ca.mul(cb));
                }
            }
        }
        Ok(RingElement { ring: self.ring.clone(), terms })
    }

    pub fn scale(&self, c: &Coeff) -> RingElement {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(m, k)| (m.clone(), k.mul(c))).collect();
        RingElement { ring: self.ring.clone(), terms }
    }

    pub fn scale_int(&self, n: i64) -> RingElement {
        self.scale(&Coeff::from_int(n))
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.try_mul(self).expect("same ring");
        }
        acc
    }

    pub fn pow_signed(&self, e: i64) -> Result<RingElement> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.invert_unit()?.pow((-e) as u32))
        }
    }

    /// Inverse of a unit. The unit part (terms free of truncated variables)
    /// must be a single monomial with no polynomial-variable content and an
    /// invertible coefficient; any nilpotent remainder is handled by the
    /// finite geometric series.
    pub fn invert_unit(&self) -> Result<RingElement> {
        let ring = &self.ring;
        let trunc_idx: Vec<usize> = ring
            .vars()
            .iter()
            .enumerate()
            .filter(|(_, v)| matches!(v.kind, VarKind::TruncatedAt(_)))
            .map(|(i, _)| i)
            .collect();
        let mut unit_terms: Vec<(&Mono, &Coeff)> = Vec::new();
        let mut nil = ring.zero();
        for (m, c) in &self.terms {
            if trunc_idx.iter().all(|&i| m.vexp[i] == 0) {
                unit_terms.push((m, c));
            } else {
                let mut t = BTreeMap::new();
                t.insert(m.clone(), c.clone());
                nil = nil.try_add(&RingElement { ring: ring.clone(), terms: t })?;
            }
        }
        if unit_terms.is_empty() {
            return Err(Error::NonUnit {
                ring: ring.id().into(),
                reason: "no invertible part (element is zero or nilpotent)".into(),
            });
        }
        if unit_terms.len() > 1 {
            return Err(Error::NonUnit {
                ring: ring.id().into(),
                reason: format!("invertible part has {} terms, need a single monomial", unit_terms.len()),
            });
        }
        let (m0, c0) = unit_terms[0];
        for (i, v) in ring.vars().iter().enumerate() {
            if v.kind == VarKind::Polynomial && m0.vexp[i] != 0 {
                return Err(Error::NonUnit {
                    ring: ring.id().into(),
                    reason: format!("polynomial variable `{}` in the invertible part", v.name),
                });
            }
        }
        if ring.base() == Base::Integers {
            let ok = c0.is_real()
                && c0.is_integral()
                && (c0.is_one() || c0.neg().is_one());
            if !ok {
                return Err(Error::NonUnit {
                    ring: ring.id().into(),
                    reason: format!("coefficient {} is not invertible over ZZ", c0.render()),
                });
            }
        }
        let c0_inv = c0.inv().expect("nonzero coefficient");
        let mut m_inv = ring.trivial_mono();
        for (i, e) in m0.vexp.iter().enumerate() {
            m_inv.vexp[i] = -e;
        }
        for (i, e) in m0.gexp.iter().enumerate() {
            let order = ring.group()[i].order;
            m_inv.gexp[i] = (order - e) % order;
        }
        let mut terms = BTreeMap::new();
        terms.insert(m_inv, c0_inv);
        let u_inv = RingElement { ring: ring.clone(), terms };
        if nil.is_zero() {
            return Ok(u_inv);
        }
        // (u + v)^-1 = u^-1 * sum_j (-u^-1 v)^j, finite because v is nilpotent.
        let x = u_inv.try_mul(&nil)?.neg();
        let mut sum = ring.one();
        let mut p = x.clone();
        while !p.is_zero() {
            sum = sum.try_add(&p)?;
            p = p.try_mul(&x)?;
        }
        sum.try_mul(&u_inv)
    }

    /// Substitute values for variables; the result lives in the ring with
    /// those variables removed. Values assigned to Laurent variables must be
    /// units there (checked before any work). Truncated variables cannot be
    /// assigned.
    pub fn specialize(&self, assignments: &[(&str, &RingElement)]) -> Result<RingElement> {
        let ring = &self.ring;
        let mut target = ring.clone();
        let mut assigned: Vec<(usize, &RingElement)> = Vec::new();
        for (name, val) in assignments {
            let idx = ring.var_index(name)?;
            if matches!(ring.vars()[idx].kind, VarKind::TruncatedAt(_)) {
                return Err(Error::Unsupported(format!(
                    "cannot assign a value to truncated variable `{name}`"
                )));
            }
            assigned.push((idx, val));
            target = target.without_var(name)?;
        }
        let mut inverses: Vec<Option<RingElement>> = Vec::new();
        for (idx, val) in &assigned {
            if (*val).ring() != &target {
                return Err(Error::RingMismatch {
                    left: val.ring().id().into(),
                    right: target.id().into(),
                });
            }
            if ring.vars()[*idx].kind == VarKind::Laurent {
                let inv = val.invert_unit().map_err(|_| Error::NonUnit {
                    ring: target.id().into(),
                    reason: format!(
                        "value for Laurent variable `{}` must be a unit",
                        ring.vars()[*idx].name
                    ),
                })?;
                inverses.push(Some(inv));
            } else {
                inverses.push(None);
            }
        }
        let assigned_idx: Vec<usize> = assigned.iter().map(|(i, _)| *i).collect();
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let mut rm = target.trivial_mono();
            let mut k = 0;
            for (i, e) in m.vexp.iter().enumerate() {
                if !assigned_idx.contains(&i) {
                    rm.vexp[k] = *e;
                    k += 1;
                }
            }
            rm.gexp = m.gexp.clone();
            let mut t = BTreeMap::new();
            t.insert(rm, c.clone());
            let mut term = RingElement { ring: target.clone(), terms: t };
            for (j, (idx, val)) in assigned.iter().enumerate() {
                let e = m.vexp[*idx];
                let p = if e >= 0 {
                    val.pow(e as u32)
                } else {
                    inverses[j].as_ref().expect("laurent inverse").pow((-e) as u32)
                };
                term = term.try_mul(&p)?;
            }
            acc = acc.try_add(&term)?;
        }
        Ok(acc)
    }

    /// Coefficient of `name^degree`, as an element of the ring without that
    /// variable.
    pub fn grade(&self, name: &str, degree: i64) -> Result<RingElement> {
        let idx = self.ring.var_index(name)?;
        let target = self.ring.without_var(name)?;
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.vexp[idx] != degree {
                continue;
            }
            let mut vexp = m.vexp.clone();
            vexp.remove(idx);
            Self::insert_term(&mut terms, Mono { vexp, gexp: m.gexp.clone() }, c.clone());
        }
        Ok(RingElement { ring: target, terms })
    }

    /// All degrees in `name` with a nonzero coefficient.
    pub fn degrees_of(&self, name: &str) -> Result<Vec<i64>> {
        let idx = self.ring.var_index(name)?;
        let mut ds: Vec<i64> = self.terms.keys().map(|m| m.vexp[idx]).collect();
        ds.sort_unstable();
        ds.dedup();
        Ok(ds)
    }

    /// Re-interpret in a wider ring: the base may widen (ZZ -> QQ -> QQ(i)),
    /// every variable must exist there with the same kind (polynomial may
    /// widen to Laurent), and every generator with the same order.
    pub fn coerce_into(&self, target: &Ring) -> Result<RingElement> {
        let src = &self.ring;
        if src == target {
            return Ok(RingElement { ring: target.clone(), terms: self.terms.clone() });
        }
        if !src.base().widens_to(target.base()) {
            return Err(Error::RingMismatch { left: src.id().into(), right: target.id().into() });
        }
        let mut vmap = Vec::with_capacity(src.vars().len());
        for v in src.vars() {
            let ti = target.var_index(&v.name)?;
            let tk = target.vars()[ti].kind;
            let ok = tk == v.kind || (v.kind == VarKind::Polynomial && tk == VarKind::Laurent);
            if !ok {
                return Err(Error::RingMismatch { left: src.id().into(), right: target.id().into() });
            }
            vmap.push(ti);
        }
        let mut gmap = Vec::with_capacity(src.group().len());
        for g in src.group() {
            let ti = target.gen_index(&g.name)?;
            if target.group()[ti].order != g.order {
                return Err(Error::RingMismatch { left: src.id().into(), right: target.id().into() });
            }
            gmap.push(ti);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut tm = target.trivial_mono();
            for (i, e) in m.vexp.iter().enumerate() {
                tm.vexp[vmap[i]] = *e;
            }
            for (i, e) in m.gexp.iter().enumerate() {
                tm.gexp[gmap[i]] = *e;
            }
            Self::insert_term(&mut terms, tm, c.clone());
        }
        Ok(RingElement { ring: target.clone(), terms })
    }

    fn var_support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = Vec::new();
        for m in self.terms.keys() {
            for (i, e) in m.vexp.iter().enumerate() {
                if *e != 0 && !s.contains(&i) {
                    s.push(i);
                }
            }
        }
        s.sort_unstable();
        s
    }

    fn has_group_part(&self) -> bool {
        self.terms.keys().any(|m| m.gexp.iter().any(|e| *e != 0))
    }

    /// Exact division. Succeeds when the divisor is a unit, or when both
    /// sides are univariate in the same variable over the base field and the
    /// division leaves no remainder.
    pub fn divide_exact(&self, divisor: &RingElement) -> Result<RingElement> {
        self.check_same_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(self.ring.zero());
        }
        if let Ok(inv) = divisor.invert_unit() {
            return self.try_mul(&inv);
        }
        let sup_d = divisor.var_support();
        if sup_d.len() != 1 || divisor.has_group_part() || self.has_group_part() {
            return Err(Error::NotDivisible(
                "divisor is not a unit and not univariate over the base".into(),
            ));
        }
        let v = sup_d[0];
        let sup_a = self.var_support();
        if !sup_a.iter().all(|i| *i == v) {
            return Err(Error::NotDivisible("dividend involves other variables".into()));
        }
        if !self.ring.base().is_field() {
            return Err(Error::NotDivisible("univariate division needs a field base".into()));
        }
        // Shift both to ordinary polynomials in the single variable.
        let lo = |e: &RingElement| e.terms.keys().map(|m| m.vexp[v]).min().unwrap();
        let hi = |e: &RingElement| e.terms.keys().map(|m| m.vexp[v]).max().unwrap();
        let (la, ha) = (lo(self), hi(self));
        let (lb, hb) = (lo(divisor), hi(divisor));
        let deg_a = (ha - la) as usize;
        let deg_b = (hb - lb) as usize;
        if deg_a < deg_b {
            return Err(Error::NotDivisible("dividend degree too small".into()));
        }
        let dense = |e: &RingElement, l: i64, d: usize| -> Vec<Coeff> {
            let mut out = vec![Coeff::zero(); d + 1];
            for (m, c) in &e.terms {
                out[(m.vexp[v] - l) as usize] = c.clone();
            }
            out
        };
        let mut rem = dense(self, la, deg_a);
        let den = dense(divisor, lb, deg_b);
        let lead_inv = den[deg_b].inv().expect("leading coefficient nonzero");
        let mut quot = vec![Coeff::zero(); deg_a - deg_b + 1];
        for k in (0..=deg_a - deg_b).rev() {
            let q = rem[k + deg_b].mul(&lead_inv);
            if q.is_zero() {
                continue;
            }
            for j in 0..=deg_b {
                rem[k + j] = rem[k + j].sub(&q.mul(&den[j]));
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible("nonzero remainder".into()));
        }
        let shift = la - lb;
        let kind = self.ring.vars()[v].kind;
        let mut terms = BTreeMap::new();
        for (k, c) in quot.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = shift + k as i64;
            if e < 0 && kind != VarKind::Laurent {
                return Err(Error::NotDivisible("negative exponent outside a Laurent ring".into()));
            }
            let mut m = self.ring.trivial_mono();
            m.vexp[v] = e;
            terms.insert(m, c);
        }
        Ok(RingElement { ring: self.ring.clone(), terms })
    }
}

impl std::ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.try_add(rhs).expect("ring mismatch in +")
    }
}

impl std::ops::Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.try_sub(rhs).expect("ring mismatch in -")
    }
}

impl std::ops::Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.try_mul(rhs).expect("ring mismatch in *")
    }
}

impl std::ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement::neg(self)
    }
}
