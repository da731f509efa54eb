//! Sparse multivariate polynomials over an exact field, in canonical form:
//! no zero coefficients, terms strictly descending in the polynomial's
//! active monomial order.

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::scalar::{FieldTag, Scalar};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A polynomial ring context: base field plus named variables. Shared by
/// reference; two contexts are interchangeable iff they compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingCtx {
    pub field: FieldTag,
    pub vars: Vec<String>,
}

impl RingCtx {
    pub fn new(field: FieldTag, vars: &[&str]) -> Arc<RingCtx> {
        Arc::new(RingCtx {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn rational(vars: &[&str]) -> Arc<RingCtx> {
        Self::new(FieldTag::Rational, vars)
    }

    pub fn prime(p: u64, vars: &[&str]) -> Result<Arc<RingCtx>> {
        Ok(Self::new(FieldTag::prime(p)?, vars))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// The same variables over F_p.
    pub fn reduced(&self, p: u64) -> Result<Arc<RingCtx>> {
        let names: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        RingCtx::prime(p, &names)
    }
}

pub type Term = (Monomial, Scalar);

/// Sparse polynomial; `terms` strictly descending under `order`.
#[derive(Debug, Clone)]
pub struct MultiPoly {
    pub ring: Arc<RingCtx>,
    pub order: MonomialOrder,
    pub terms: Vec<Term>,
}

pub const DEFAULT_ORDER: MonomialOrder = MonomialOrder::GrevLex;

impl MultiPoly {
    pub fn zero(ring: &Arc<RingCtx>) -> MultiPoly {
        MultiPoly {
            ring: ring.clone(),
            order: DEFAULT_ORDER,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<RingCtx>, c: Scalar) -> MultiPoly {
        debug_assert_eq!(c.field(), ring.field);
        let mut p = MultiPoly::zero(ring);
        if !c.is_zero() {
            p.terms.push((Monomial::one(ring.nvars()), c));
        }
        p
    }

    pub fn one(ring: &Arc<RingCtx>) -> MultiPoly {
        MultiPoly::constant(ring, Scalar::one(ring.field))
    }

    pub fn from_int(ring: &Arc<RingCtx>, n: i64) -> MultiPoly {
        MultiPoly::constant(ring, Scalar::from_int(ring.field, n))
    }

    pub fn var(ring: &Arc<RingCtx>, index: usize) -> MultiPoly {
        MultiPoly {
            ring: ring.clone(),
            order: DEFAULT_ORDER,
            terms: vec![(
                Monomial::var(ring.nvars(), index),
                Scalar::one(ring.field),
            )],
        }
    }

    /// Build from arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(
        ring: &Arc<RingCtx>,
        order: MonomialOrder,
        terms: Vec<Term>,
    ) -> MultiPoly {
        let mut p = MultiPoly {
            ring: ring.clone(),
            order,
            terms,
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let order = self.order;
        self.terms
            .sort_by(|(m1, _), (m2, _)| order.cmp(m2, m1).then(m2.cmp(m1)));
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        self.terms = merged;
    }

    /// The same polynomial re-sorted under another order.
    pub fn with_order(&self, order: MonomialOrder) -> MultiPoly {
        if self.order == order {
            return self.clone();
        }
        let mut p = self.clone();
        p.order = order;
        p.terms
            .sort_by(|(m1, _), (m2, _)| order.cmp(m2, m1).then(m2.cmp(m1)));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn field(&self) -> FieldTag {
        self.ring.field
    }

    /// Leading term under the polynomial's own order.
    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// Leading term under an arbitrary order (scan when it differs).
    pub fn leading_under(&self, order: MonomialOrder) -> Option<&Term> {
        if order == self.order {
            return self.terms.first();
        }
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| order.cmp(a, b).then(a.cmp(b)))
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.total_degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = m0.total_degree();
                self.terms.iter().all(|(m, _)| m.total_degree() == d)
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant term (zero scalar if absent).
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| Scalar::zero(self.field()))
    }

    pub fn same_ring(&self, rhs: &MultiPoly) -> bool {
        Arc::ptr_eq(&self.ring, &rhs.ring) || *self.ring == *rhs.ring
    }

    fn check_ring(&self, rhs: &MultiPoly) -> Result<()> {
        if self.same_ring(rhs) {
            Ok(())
        } else {
            Err(Error::MixedContext(format!(
                "{:?}[{}] vs {:?}[{}]",
                self.ring.field,
                self.ring.vars.join(","),
                rhs.ring.field,
                rhs.ring.vars.join(",")
            )))
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(rhs)?;
        let rhs = rhs.with_order(self.order);
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &rhs.terms[j];
            match self.order.cmp(ma, mb).then(ma.cmp(mb)) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca.add(cb);
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(rhs.terms[j..].iter().cloned());
        Ok(MultiPoly {
            ring: self.ring.clone(),
            order: self.order,
            terms: out,
        })
    }

    pub fn sub(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(rhs)?;
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                terms.push((ma.mul(mb)?, ca.mul(cb)));
            }
        }
        Ok(MultiPoly::from_terms(&self.ring, self.order, terms))
    }

    pub fn mul_scalar(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.mul(c)))
                .collect(),
        }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Scalar) -> Result<MultiPoly> {
        if c.is_zero() {
            return Ok(MultiPoly::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, k) in &self.terms {
            terms.push((m.mul(mono)?, k.mul(c)));
        }
        // multiplying by a monomial preserves strict descent
        Ok(MultiPoly {
            ring: self.ring.clone(),
            order: self.order,
            terms,
        })
    }

    pub fn pow(&self, e: u32) -> Result<MultiPoly> {
        let mut acc = MultiPoly::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Monic rescale (leading coefficient 1 under the polynomial's order).
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.mul_scalar(&inv)
            }
        }
    }

    /// Substitute `value` for variable `index` (value in the same ring).
    pub fn substitute(&self, index: usize, value: &MultiPoly) -> Result<MultiPoly> {
        self.check_ring(value)?;
        let mut acc = MultiPoly::zero(&self.ring);
        // group by exponent of the variable, reuse powers
        let max_e = self
            .terms
            .iter()
            .map(|(m, _)| m.0[index])
            .max()
            .unwrap_or(0);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(MultiPoly::one(&self.ring));
        for _ in 0..max_e {
            let next = powers.last().unwrap().mul(value)?;
            powers.push(next);
        }
        for (m, c) in &self.terms {
            let e = m.0[index];
            let mut rest = m.clone();
            rest.0[index] = 0;
            let base = MultiPoly {
                ring: self.ring.clone(),
                order: self.order,
                terms: vec![(rest, c.clone())],
            };
            acc = acc.add(&base.mul(&powers[e as usize])?)?;
        }
        Ok(acc)
    }

    /// Evaluate at a full point (one scalar per variable).
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        debug_assert_eq!(point.len(), self.ring.nvars());
        let mut acc = Scalar::zero(self.field());
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&point[i].pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Partial derivative with respect to variable `index`.
    pub fn partial(&self, index: usize) -> MultiPoly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[index] -= 1;
            terms.push((m2, c.mul(&Scalar::from_int(self.field(), e as i64))));
        }
        MultiPoly::from_terms(&self.ring, self.order, terms)
    }

    /// Homogenize with a fresh variable appended to the ring.
    pub fn homogenize(&self, new_var: &str) -> Result<MultiPoly> {
        if self.ring.vars.iter().any(|v| v == new_var) {
            return Err(Error::VariableClash(new_var.to_string()));
        }
        let mut vars: Vec<&str> = self.ring.vars.iter().map(|s| s.as_str()).collect();
        vars.push(new_var);
        let ring = RingCtx::new(self.ring.field, &vars);
        let d = self.total_degree().unwrap_or(0);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.push((d - m.total_degree()) as u32);
                (Monomial(e), c.clone())
            })
            .collect();
        Ok(MultiPoly::from_terms(&ring, self.order, terms))
    }

    /// Set variable `index` to 1 and drop it from the ring.
    pub fn dehomogenize(&self, index: usize) -> MultiPoly {
        let mut vars: Vec<&str> = Vec::new();
        for (i, v) in self.ring.vars.iter().enumerate() {
            if i != index {
                vars.push(v);
            }
        }
        let ring = RingCtx::new(self.ring.field, &vars);
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = m.0.clone();
                e.remove(index);
                (Monomial(e), c.clone())
            })
            .collect();
        MultiPoly::from_terms(&ring, self.order, terms)
    }

    /// Reduce every coefficient modulo p; the degree never increases and
    /// drops exactly on the terms whose coefficient vanishes mod p.
    pub fn reduce_mod_p(&self, p: u64) -> Result<MultiPoly> {
        let ring = self.ring.reduced(p)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), c.reduce_mod_p(p)?));
        }
        Ok(MultiPoly::from_terms(&ring, self.order, terms))
    }

    /// Map this polynomial into a larger ring; `positions[i]` is the index
    /// in the new ring of our variable i.
    pub fn embed(&self, ring: &Arc<RingCtx>, positions: &[usize]) -> MultiPoly {
        debug_assert_eq!(positions.len(), self.ring.nvars());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; ring.nvars()];
                for (i, &exp) in m.0.iter().enumerate() {
                    e[positions[i]] = exp;
                }
                (Monomial(e), c.clone())
            })
            .collect();
        MultiPoly::from_terms(ring, self.order, terms)
    }

    /// Indices of variables actually occurring.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for i in m.support() {
                seen[i] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i)
            .collect()
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.0[index]).max().unwrap_or(0)
    }

    /// Canonical display string (used for diffable reports and ordering).
    pub fn canonical_string(&self) -> String {
        format!("{}", self)
    }
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if !self.same_ring(other) {
            return false;
        }
        let other = other.with_order(self.order);
        self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (sign, mag) = display_sign_magnitude(c);
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = display_monomial(&self.ring, m);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == "1" {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn display_sign_magnitude(c: &Scalar) -> (bool, String) {
    match c {
        Scalar::Rational(q) => {
            use num_traits::Signed;
            let neg = q.is_negative();
            let a = if neg { -q } else { q.clone() };
            let s = if num_traits::One::is_one(a.denom()) {
                format!("{}", a.numer())
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            (neg, s)
        }
        Scalar::Fp { value, .. } => (false, format!("{value}")),
    }
}

fn display_monomial(ring: &RingCtx, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 1 {
            parts.push(ring.vars[i].clone());
        } else if e > 1 {
            parts.push(format!("{}^{}", ring.vars[i], e));
        }
    }
    parts.join("*")
}
