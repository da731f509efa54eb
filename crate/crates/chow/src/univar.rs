//! Dense univariate arithmetic and factorization.
//!
//! Over F_p: squarefree decomposition, distinct-degree splitting, and
//! Cantor-Zassenhaus equal-degree splitting (brute trial division for p=2).
//! Over Q: Yun squarefree decomposition, rational-root extraction, then
//! factorization mod a good prime, Hensel lifting, and subset
//! recombination. Every result is re-multiplied and checked against the
//! input before it is returned.

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::monomial::Monomial;
use crate::poly::{MultiPoly, RingCtx};
use crate::scalar::{FieldTag, Scalar};
use crate::util::{is_prime, DetRng};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;

/// Dense univariate polynomial; coefficients ascending, last one nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    pub field: FieldTag,
    pub coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero(field: FieldTag) -> UniPoly {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(field: FieldTag, coeffs: Vec<Scalar>) -> UniPoly {
        let mut p = UniPoly { field, coeffs };
        p.normalize();
        p
    }

    pub fn constant(field: FieldTag, c: Scalar) -> UniPoly {
        UniPoly::from_coeffs(field, vec![c])
    }

    pub fn x(field: FieldTag) -> UniPoly {
        UniPoly::from_coeffs(field, vec![Scalar::zero(field), Scalar::one(field)])
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Scalar {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&rhs.coeff(i)));
        }
        UniPoly::from_coeffs(self.field, coeffs)
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut coeffs = vec![Scalar::zero(self.field); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UniPoly::from_coeffs(self.field, coeffs)
    }

    pub fn mul_scalar(&self, c: &Scalar) -> UniPoly {
        UniPoly::from_coeffs(
            self.field,
            self.coeffs.iter().map(|k| k.mul(c)).collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.mul_scalar(&self.lc().inv().expect("nonzero lc"))
    }

    /// Quotient and remainder; divisor must be nonzero.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let dlc_inv = divisor.lc().inv().expect("nonzero lc");
        let dd = divisor.degree();
        if rem.degree() < dd || rem.is_zero() {
            return (UniPoly::zero(self.field), rem);
        }
        let mut quot = vec![Scalar::zero(self.field); rem.degree() - dd + 1];
        while !rem.is_zero() && rem.degree() >= dd {
            let shift = rem.degree() - dd;
            let factor = rem.lc().mul(&dlc_inv);
            quot[shift] = quot[shift].add(&factor);
            // rem -= factor * x^shift * divisor
            let mut sub = vec![Scalar::zero(self.field); shift];
            sub.extend(divisor.coeffs.iter().map(|c| c.mul(&factor)));
            rem = rem.sub(&UniPoly::from_coeffs(self.field, sub));
            if rem.coeffs.len() > shift + dd {
                // leading term must have cancelled
                rem.coeffs.truncate(shift + dd);
                rem.normalize();
            }
        }
        (UniPoly::from_coeffs(self.field, quot), rem)
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.divrem(divisor).1
    }

    /// Exact division; None when the remainder is nonzero.
    pub fn checked_div(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(divisor);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&Scalar::from_int(self.field, i as i64)))
            .collect();
        UniPoly::from_coeffs(self.field, coeffs)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// self^e modulo m.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly) -> UniPoly {
        let mut base = self.rem(m);
        let mut acc = UniPoly::constant(self.field, Scalar::one(self.field));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Convert to a MultiPoly in variable `var` of `ring`.
    pub fn to_multipoly(&self, ring: &Arc<RingCtx>, var: usize) -> MultiPoly {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut m = Monomial::one(ring.nvars());
                m.0[var] = i as u32;
                (m, c.clone())
            })
            .collect();
        MultiPoly::from_terms(ring, crate::poly::DEFAULT_ORDER, terms)
    }
}

/// View a MultiPoly that uses at most one variable as univariate,
/// returning the variable index actually used (or None for constants).
pub fn as_univariate(f: &MultiPoly) -> Option<(Option<usize>, UniPoly)> {
    let support = f.support();
    if support.len() > 1 {
        return None;
    }
    let var = support.first().copied();
    let deg = var.map(|v| f.degree_in(v)).unwrap_or(0) as usize;
    let mut coeffs = vec![Scalar::zero(f.field()); deg + 1];
    for (m, c) in &f.terms {
        let e = var.map(|v| m.0[v]).unwrap_or(0) as usize;
        coeffs[e] = c.clone();
    }
    Some((var, UniPoly::from_coeffs(f.field(), coeffs)))
}

/// Irreducible factorization `unit * prod f_i^{e_i}` of a univariate
/// polynomial, degree-capped by `limits.factor_degree_cap`.
pub fn factor_unipoly(f: &UniPoly, limits: &Limits) -> Result<(Scalar, Vec<(UniPoly, u32)>)> {
    if f.is_zero() {
        return Err(Error::Validation("factoring the zero polynomial".into()));
    }
    if f.degree() > limits.factor_degree_cap {
        return Err(Error::DegreeTooLarge {
            degree: f.degree(),
            bound: limits.factor_degree_cap,
        });
    }
    let unit = f.lc();
    let monic = f.monic();
    let factors = match f.field {
        FieldTag::Prime(p) => factor_monic_fp(&monic, p, limits)?,
        FieldTag::Rational => factor_monic_q(&monic, limits)?,
    };
    // soundness check: multiply back
    let mut prod = UniPoly::constant(f.field, unit.clone());
    for (g, e) in &factors {
        for _ in 0..*e {
            prod = prod.mul(g);
        }
    }
    debug_assert_eq!(&prod, f, "factorization does not multiply back");
    Ok((unit, factors))
}

/// True iff `f` (nonconstant univariate) is irreducible.
pub fn is_irreducible_unipoly(f: &UniPoly, limits: &Limits) -> Result<bool> {
    if f.is_constant() {
        return Ok(false);
    }
    let (_, factors) = factor_unipoly(f, limits)?;
    Ok(factors.len() == 1 && factors[0].1 == 1)
}

// ---------- squarefree decomposition ----------

/// Yun's algorithm, characteristic zero. Input monic.
fn squarefree_q(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let mut out = Vec::new();
    let fd = f.derivative();
    let a0 = f.gcd(&fd);
    let mut b = f.checked_div(&a0).unwrap();
    let mut c = fd.checked_div(&a0).unwrap();
    let mut i = 1u32;
    loop {
        let d = c.sub(&b.derivative());
        if b.is_constant() {
            break;
        }
        let a = b.gcd(&d);
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        b = b.checked_div(&a).unwrap();
        c = d.checked_div(&a).unwrap();
        i += 1;
    }
    out
}

/// Squarefree decomposition in characteristic p, handling p-th powers.
fn squarefree_fp(f: &UniPoly, p: u64) -> Vec<(UniPoly, u32)> {
    if f.is_constant() {
        return Vec::new();
    }
    let fd = f.derivative();
    if fd.is_zero() {
        // f = g(x^p); over the prime field the p-th root just divides exponents
        let g = pth_root_fp(f, p);
        return squarefree_fp(&g, p)
            .into_iter()
            .map(|(h, e)| (h, e * p as u32))
            .collect();
    }
    let mut out = Vec::new();
    let mut c = f.gcd(&fd);
    let mut w = f.checked_div(&c).unwrap();
    let mut i = 1u32;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.checked_div(&y).unwrap();
        if !z.is_constant() {
            out.push((z.monic(), i));
        }
        w = y.clone();
        c = c.checked_div(&y).unwrap();
        i += 1;
    }
    if !c.is_constant() {
        let g = pth_root_fp(&c, p);
        for (h, e) in squarefree_fp(&g, p) {
            out.push((h, e * p as u32));
        }
    }
    out
}

fn pth_root_fp(f: &UniPoly, p: u64) -> UniPoly {
    // valid over the prime field: coefficients are fixed by Frobenius
    let mut coeffs = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate() {
        if !c.is_zero() {
            debug_assert_eq!(i as u64 % p, 0, "not a p-th power");
            let idx = i / p as usize;
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, Scalar::zero(f.field));
            }
            coeffs[idx] = c.clone();
        }
    }
    UniPoly::from_coeffs(f.field, coeffs)
}

// ---------- factorization over F_p ----------

fn factor_monic_fp(f: &UniPoly, p: u64, limits: &Limits) -> Result<Vec<(UniPoly, u32)>> {
    debug_assert!(is_prime(p));
    let mut out: Vec<(UniPoly, u32)> = Vec::new();
    for (g, mult) in squarefree_fp(f, p) {
        for irr in factor_squarefree_fp(&g, p, limits)? {
            out.push((irr, mult));
        }
    }
    sort_factors(&mut out);
    Ok(out)
}

fn factor_squarefree_fp(g: &UniPoly, p: u64, limits: &Limits) -> Result<Vec<UniPoly>> {
    if g.is_constant() {
        return Ok(Vec::new());
    }
    if p == 2 {
        return Ok(factor_squarefree_trial(g, p));
    }
    let mut out = Vec::new();
    // distinct degree
    let field = g.field;
    let x = UniPoly::x(field);
    let mut h = x.clone();
    let mut rest = g.clone();
    let mut d = 1usize;
    while rest.degree() >= 2 * d {
        h = frobenius_pow(&h, p, &rest);
        let g_d = h.sub(&x).gcd(&rest);
        if !g_d.is_constant() {
            out.extend(equal_degree_split(&g_d, d, p, limits)?);
            rest = rest.checked_div(&g_d).unwrap();
            h = h.rem(&rest);
        }
        d += 1;
    }
    if !rest.is_constant() {
        out.push(rest.monic());
    }
    Ok(out)
}

/// h -> h^p mod m.
fn frobenius_pow(h: &UniPoly, p: u64, m: &UniPoly) -> UniPoly {
    h.pow_mod(p, m)
}

/// Cantor-Zassenhaus equal-degree splitting: `g` is squarefree, a product
/// of irreducibles all of degree `d`, p odd.
fn equal_degree_split(g: &UniPoly, d: usize, p: u64, limits: &Limits) -> Result<Vec<UniPoly>> {
    if g.degree() == d {
        return Ok(vec![g.monic()]);
    }
    let field = g.field;
    let mut rng = DetRng::new(limits.seed ^ (g.degree() as u64) ^ (d as u64) << 8);
    // (p^d - 1)/2 as u128-safe exponent; desk-scale p^d stays small
    let mut pd: u128 = 1;
    for _ in 0..d {
        pd *= p as u128;
    }
    let exp = ((pd - 1) / 2) as u64;
    for _ in 0..64 {
        let deg = 1 + (rng.below(g.degree() as u64 - 1)) as usize;
        let coeffs: Vec<Scalar> = (0..=deg)
            .map(|_| Scalar::fp(p, rng.below(p)))
            .collect();
        let r = UniPoly::from_coeffs(field, coeffs);
        if r.is_constant() {
            continue;
        }
        let s = r.pow_mod(exp, g);
        let cand = s
            .sub(&UniPoly::constant(field, Scalar::one(field)))
            .gcd(g);
        if !cand.is_constant() && cand.degree() < g.degree() {
            let rest = g.checked_div(&cand).unwrap();
            let mut out = equal_degree_split(&cand, d, p, limits)?;
            out.extend(equal_degree_split(&rest, d, p, limits)?);
            return Ok(out);
        }
    }
    Err(Error::ResourceLimit(
        "equal-degree splitting did not converge".into(),
    ))
}

/// Brute-force trial division by monic polynomials of increasing degree;
/// used for p = 2 where the CZ exponent trick needs the trace variant.
fn factor_squarefree_trial(g: &UniPoly, p: u64) -> Vec<UniPoly> {
    let field = g.field;
    let mut rest = g.monic();
    let mut out = Vec::new();
    let mut d = 1usize;
    while 2 * d <= rest.degree() {
        let mut found = true;
        while found && 2 * d <= rest.degree() {
            found = false;
            for cand in monic_polys_of_degree(field, p, d) {
                if rest.checked_div(&cand).is_some()
                    && out.iter().all(|f: &UniPoly| f != &cand)
                {
                    // candidate could factor further only if a smaller degree
                    // divisor existed, which the sweep order rules out
                    rest = rest.checked_div(&cand).unwrap();
                    out.push(cand);
                    found = true;
                    break;
                }
            }
        }
        d += 1;
    }
    if !rest.is_constant() {
        out.push(rest);
    }
    out
}

fn monic_polys_of_degree(field: FieldTag, p: u64, d: usize) -> Vec<UniPoly> {
    let mut out = Vec::new();
    let count = (p as u128).pow(d as u32);
    for code in 0..count {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut c = code;
        for _ in 0..d {
            coeffs.push(Scalar::fp(p_of(field), (c % p as u128) as u64));
            c /= p as u128;
        }
        coeffs.push(Scalar::one(field));
        out.push(UniPoly::from_coeffs(field, coeffs));
    }
    out
}

fn p_of(field: FieldTag) -> u64 {
    match field {
        FieldTag::Prime(p) => p,
        FieldTag::Rational => unreachable!(),
    }
}

// ---------- factorization over Q ----------

fn big_coeffs(f: &UniPoly) -> Vec<BigRational> {
    f.coeffs
        .iter()
        .map(|c| c.as_rational().unwrap().clone())
        .collect()
}

/// Integer dense poly used inside the Hensel machinery.
#[derive(Debug, Clone, PartialEq)]
struct ZPoly(Vec<BigInt>);

impl ZPoly {
    fn normalize(&mut self) {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    fn mul(&self, rhs: &ZPoly) -> ZPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return ZPoly(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = ZPoly(out);
        p.normalize();
        p
    }

    fn sub(&self, rhs: &ZPoly) -> ZPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = rhs.0.get(i).cloned().unwrap_or_else(BigInt::zero);
            out.push(a - b);
        }
        let mut p = ZPoly(out);
        p.normalize();
        p
    }

    fn mod_big(&self, m: &BigInt) -> ZPoly {
        let mut p = ZPoly(self.0.iter().map(|c| c.mod_floor(m)).collect());
        p.normalize();
        p
    }

    /// Centered representatives in (-m/2, m/2].
    fn centered(&self, m: &BigInt) -> ZPoly {
        let half = m / 2;
        let mut p = ZPoly(
            self.0
                .iter()
                .map(|c| {
                    let r = c.mod_floor(m);
                    if r > half {
                        r - m
                    } else {
                        r
                    }
                })
                .collect(),
        );
        p.normalize();
        p
    }

    fn norm2_squared(&self) -> BigInt {
        self.0.iter().map(|c| c * c).sum()
    }
}

fn unipoly_to_fp(f: &ZPoly, p: u64) -> UniPoly {
    UniPoly::from_coeffs(
        FieldTag::Prime(p),
        f.0.iter()
            .map(|c| Scalar::fp(p, c.mod_floor(&BigInt::from(p)).to_u64_digits().1.first().copied().unwrap_or(0)))
            .collect(),
    )
}

fn fp_to_zpoly(f: &UniPoly) -> ZPoly {
    let mut p = ZPoly(
        f.coeffs
            .iter()
            .map(|c| BigInt::from(c.as_fp().unwrap()))
            .collect(),
    );
    p.normalize();
    p
}

/// One linear Hensel step: f = g*h mod q, s*g + t*h = 1 mod p,
/// everything monic; returns (g', h') with f = g'*h' mod q*p.
fn hensel_step(
    f: &ZPoly,
    g: &ZPoly,
    h: &ZPoly,
    s: &UniPoly,
    t: &UniPoly,
    p: u64,
    q: &BigInt,
) -> (ZPoly, ZPoly) {
    let pq = q * BigInt::from(p);
    let diff = f.sub(&g.mul(h));
    // e = (f - g h)/q mod p
    let e_coeffs: Vec<BigInt> = diff.0.iter().map(|c| c / q).collect();
    let mut e = ZPoly(e_coeffs);
    e.normalize();
    let e_fp = unipoly_to_fp(&e, p);
    let g_fp = unipoly_to_fp(g, p);
    let h_fp = unipoly_to_fp(h, p);
    let dh = s.mul(&e_fp).rem(&h_fp);
    let dg = t.mul(&e_fp).rem(&g_fp);
    let gq = g.sub(&ZPoly(
        fp_to_zpoly(&dh.neg())
            .0
            .iter()
            .map(|c| c * q)
            .collect(),
    ));
    // careful with sign conventions: g' = g + q*dg, h' = h + q*dh
    let _ = gq;
    let g_new = ZPoly(add_scaled(&g.0, &fp_to_zpoly(&dg).0, q)).mod_big(&pq);
    let h_new = ZPoly(add_scaled(&h.0, &fp_to_zpoly(&dh).0, q)).mod_big(&pq);
    (g_new, h_new)
}

fn add_scaled(a: &[BigInt], b: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        out.push(x + y * q);
    }
    out
}

/// Extended gcd over F_p[x]: returns (s, t) with s*a + t*b = 1.
fn bezout_fp(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
    let field = a.field;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let one = UniPoly::constant(field, Scalar::one(field));
    let zero = UniPoly::zero(field);
    let (mut s0, mut s1) = (one.clone(), zero.clone());
    let (mut t0, mut t1) = (zero, one);
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1.clone(), s0.sub(&q.mul(&s1)));
        (t0, t1) = (t1.clone(), t0.sub(&q.mul(&t1)));
    }
    debug_assert!(r0.is_constant() && !r0.is_zero(), "inputs not coprime");
    let inv = r0.lc().inv().unwrap();
    (s0.mul_scalar(&inv), t0.mul_scalar(&inv))
}

/// Lift the factor list of monic `f` from mod p to mod p^iters-ish >= bound.
fn hensel_lift_list(
    f: &ZPoly,
    factors_fp: &[UniPoly],
    p: u64,
    target: &BigInt,
) -> Vec<ZPoly> {
    if factors_fp.len() == 1 {
        return vec![f.mod_big(target)];
    }
    let mid = factors_fp.len() / 2;
    let (left, right) = factors_fp.split_at(mid);
    let mut g_fp = UniPoly::constant(factors_fp[0].field, Scalar::one(factors_fp[0].field));
    for x in left {
        g_fp = g_fp.mul(x);
    }
    let mut h_fp = UniPoly::constant(factors_fp[0].field, Scalar::one(factors_fp[0].field));
    for x in right {
        h_fp = h_fp.mul(x);
    }
    let (s, t) = bezout_fp(&g_fp, &h_fp);
    let mut g = fp_to_zpoly(&g_fp);
    let mut h = fp_to_zpoly(&h_fp);
    let mut q = BigInt::from(p);
    while &q < target {
        let (g2, h2) = hensel_step(f, &g, &h, &s, &t, p, &q);
        g = g2;
        h = h2;
        q *= BigInt::from(p);
    }
    let mut out = hensel_lift_list(&g, left, p, target);
    out.extend(hensel_lift_list(&h, right, p, target));
    out
}

fn factor_monic_q(f: &UniPoly, limits: &Limits) -> Result<Vec<(UniPoly, u32)>> {
    let mut out: Vec<(UniPoly, u32)> = Vec::new();
    for (g, mult) in squarefree_q(f) {
        for irr in factor_squarefree_q(&g, limits)? {
            out.push((irr, mult));
        }
    }
    sort_factors(&mut out);
    Ok(out)
}

/// Squarefree monic rational polynomial -> monic irreducible factors.
fn factor_squarefree_q(g: &UniPoly, limits: &Limits) -> Result<Vec<UniPoly>> {
    if g.is_constant() {
        return Ok(Vec::new());
    }
    if g.degree() == 1 {
        return Ok(vec![g.monic()]);
    }
    // scale to an integer monic polynomial: G(x) = c^{n-1} g(x/c), c = common
    // denominator of the coefficients
    let coeffs = big_coeffs(g);
    let mut den = BigInt::one();
    for c in &coeffs {
        den = den.lcm(c.denom());
    }
    let n = g.degree();
    // G has integer coefficients: a_i * den^{n-i}
    let int_coeffs: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let scaled = c * BigRational::from(den.pow((n - i) as u32));
            debug_assert!(scaled.denom().is_one());
            scaled.numer().clone()
        })
        .collect();
    let gz = {
        let mut p = ZPoly(int_coeffs);
        p.normalize();
        p
    };
    debug_assert!(gz.lc().is_one());

    // rational roots of the monic integer polynomial are integer divisors of
    // the constant term; peel them off first. The divisor search is bounded,
    // so track whether it was exhaustive.
    let mut gz = gz;
    let mut linear: Vec<BigInt> = Vec::new();
    let mut roots_exhaustive = true;
    loop {
        let (root, exhaustive) = find_integer_root(&gz);
        roots_exhaustive &= exhaustive;
        let Some(root) = root else {
            break;
        };
        // divide by (x - root)
        let mut quot = vec![BigInt::zero(); gz.degree()];
        let mut carry = BigInt::zero();
        for i in (0..gz.0.len()).rev() {
            let c = &gz.0[i] + &carry * &root;
            if i > 0 {
                quot[i - 1] = c.clone();
                carry = c;
            } else {
                debug_assert!(c.is_zero());
            }
        }
        gz = {
            let mut p = ZPoly(quot);
            p.normalize();
            p
        };
        linear.push(root);
        if gz.degree() == 0 {
            break;
        }
    }
    let mut out: Vec<ZPoly> = linear
        .iter()
        .map(|r| ZPoly(vec![-r.clone(), BigInt::one()]))
        .collect();

    if gz.degree() >= 2 {
        if gz.degree() <= 3 && roots_exhaustive {
            // no rational roots left: degree 2 and 3 are irreducible
            out.push(gz.clone());
        } else {
            out.extend(factor_int_monic(&gz, limits)?);
        }
    } else if gz.degree() == 1 {
        out.push(gz.clone());
    }

    // map factors back through x -> c x and re-normalize monic
    let mut result = Vec::new();
    for fz in out {
        let m = fz.degree();
        let coeffs: Vec<BigRational> = fz
            .0
            .iter()
            .enumerate()
            .map(|(i, a)| BigRational::new(a.clone() * den.pow(i as u32), BigInt::one()))
            .collect();
        let poly = UniPoly::from_coeffs(
            FieldTag::Rational,
            coeffs.into_iter().map(Scalar::Rational).collect(),
        )
        .monic();
        debug_assert_eq!(poly.degree(), m);
        result.push(poly);
    }
    Ok(result)
}

/// Bounded integer-root search: divisors of the constant term with trial
/// divisor at most 10^4. Returns (root, whether the search was exhaustive);
/// the full factorization path handles any linear factors it misses.
fn find_integer_root(g: &ZPoly) -> (Option<BigInt>, bool) {
    let Some(c0) = g.0.first().cloned() else {
        return (None, true);
    };
    if c0.is_zero() {
        return (Some(BigInt::zero()), true);
    }
    let bound = c0.abs();
    let cap = BigInt::from(10_000u32);
    let exhaustive = &bound <= &(&cap * &cap);
    let mut d = BigInt::one();
    while &d * &d <= bound && d <= cap {
        if (&c0 % &d).is_zero() {
            for cand in [
                d.clone(),
                -d.clone(),
                &c0 / &d,
                -(&c0 / &d),
            ] {
                if eval_z(g, &cand).is_zero() {
                    return (Some(cand), exhaustive);
                }
            }
        }
        d += 1;
    }
    (None, exhaustive)
}

fn eval_z(g: &ZPoly, x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in g.0.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Zassenhaus on a monic squarefree integer polynomial of degree >= 4 with
/// no integer roots.
fn factor_int_monic(g: &ZPoly, limits: &Limits) -> Result<Vec<ZPoly>> {
    // choose a prime where g stays squarefree
    let mut p = 0u64;
    for cand in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113] {
        let gp = unipoly_to_fp(g, cand);
        if gp.degree() != g.degree() {
            continue;
        }
        if gp.gcd(&gp.derivative()).is_constant() {
            p = cand;
            break;
        }
    }
    if p == 0 {
        return Err(Error::ResourceLimit(
            "no small squarefree reduction prime".into(),
        ));
    }
    let gp = unipoly_to_fp(g, p);
    let modular = factor_squarefree_fp(&gp, p, limits)?;
    if modular.len() == 1 {
        return Ok(vec![g.clone()]);
    }
    // Landau-Mignotte style bound on factor coefficients
    let n = g.degree() as u64;
    let norm = g.norm2_squared().sqrt() + 1;
    let bound = crate::util::binomial(n, n / 2) * norm;
    let mut target = BigInt::from(p);
    while target <= &bound * 2 {
        target *= BigInt::from(p);
    }
    let lifted = hensel_lift_list(&g.mod_big(&target), &modular, p, &target);

    // subset recombination, smallest cardinality first
    let mut remaining: Vec<ZPoly> = lifted;
    let mut rest = g.clone();
    let mut out = Vec::new();
    let mut size = 1usize;
    let mut tries = 0usize;
    while remaining.len() > 0 && size <= remaining.len() {
        let mut advanced = false;
        for subset in subsets_of_size(remaining.len(), size) {
            tries += 1;
            if tries > 200_000 {
                return Err(Error::ResourceLimit(
                    "factor recombination exceeded the try cap".into(),
                ));
            }
            let mut cand = ZPoly(vec![BigInt::one()]);
            for &i in &subset {
                cand = cand.mul(&remaining[i]).mod_big(&target);
            }
            let cand = cand.centered(&target);
            if let Some(q) = zdiv_exact(&rest, &cand) {
                out.push(cand);
                rest = q;
                let mut keep = Vec::new();
                for (i, f) in remaining.drain(..).enumerate() {
                    if !subset.contains(&i) {
                        keep.push(f);
                    }
                }
                remaining = keep;
                advanced = true;
                break;
            }
        }
        if !advanced {
            size += 1;
        } else if remaining.len() < 2 * size {
            // whatever is left is irreducible
            break;
        }
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    Ok(out)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exact division over Z of monic-lc-compatible polys; None if not exact.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    if b.0.is_empty() {
        return None;
    }
    if a.degree() < b.degree() {
        return None;
    }
    let mut rem = a.clone();
    let mut quot = vec![BigInt::zero(); a.degree() - b.degree() + 1];
    let blc = b.lc();
    while !rem.0.is_empty() && rem.degree() >= b.degree() {
        let (q, r) = rem.lc().div_rem(&blc);
        if !r.is_zero() {
            return None;
        }
        let shift = rem.degree() - b.degree();
        quot[shift] = q.clone();
        let mut sub = vec![BigInt::zero(); shift];
        sub.extend(b.0.iter().map(|c| c * &q));
        rem = rem.sub(&ZPoly(sub));
        if rem.0.len() > shift + b.degree() {
            return None;
        }
    }
    if rem.0.is_empty() {
        let mut p = ZPoly(quot);
        p.normalize();
        Some(p)
    } else {
        None
    }
}

fn sort_factors(factors: &mut Vec<(UniPoly, u32)>) {
    factors.sort_by_key(|(f, _)| {
        (
            f.degree(),
            f.coeffs
                .iter()
                .map(|c| format!("{c}"))
                .collect::<Vec<_>>()
                .join(","),
        )
    });
}

// ---------- resultants ----------

/// Resultant of two univariate polynomials over their (shared) field,
/// via the Euclidean polynomial remainder sequence.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> Scalar {
    let field = f.field;
    if f.is_zero() || g.is_zero() {
        return Scalar::zero(field);
    }
    let mut a = f.clone();
    let mut b = g.clone();
    let mut acc = Scalar::one(field);
    let mut sign_flips = 0u64;
    loop {
        if b.is_constant() {
            // res(a, c) = c^{deg a}
            acc = acc.mul(&b.lc().pow(a.degree() as u64));
            break;
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Scalar::zero(field);
        }
        // res(a,b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
        sign_flips += (a.degree() as u64) * (b.degree() as u64);
        acc = acc.mul(&b.lc().pow((a.degree() - r.degree()) as u64));
        a = b;
        b = r;
    }
    if sign_flips % 2 == 1 {
        acc = acc.neg();
    }
    acc
}

/// Discriminant: (-1)^{n(n-1)/2} res(f, f') / lc(f).
pub fn discriminant(f: &UniPoly) -> Scalar {
    let d = f.derivative();
    if d.is_zero() {
        return Scalar::zero(f.field);
    }
    let r = resultant(f, &d);
    let n = f.degree() as u64;
    let signed = if (n * (n - 1) / 2) % 2 == 1 { r.neg() } else { r };
    signed.div(&f.lc()).unwrap_or_else(|_| Scalar::zero(f.field))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::rational(n, d)
    }

    fn upoly_q(coeffs: &[(i64, i64)]) -> UniPoly {
        UniPoly::from_coeffs(
            FieldTag::Rational,
            coeffs.iter().map(|&(n, d)| q(n, d)).collect(),
        )
    }

    fn upoly_fp(p: u64, coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(
            FieldTag::Prime(p),
            coeffs
                .iter()
                .map(|&c| Scalar::from_int(FieldTag::Prime(p), c))
                .collect(),
        )
    }

    #[test]
    fn divrem_roundtrip() {
        let f = upoly_q(&[(2, 1), (0, 1), (3, 1), (1, 1)]); // x^3+3x^2+2
        let g = upoly_q(&[(1, 1), (1, 1)]); // x+1
        let (quot, rem) = f.divrem(&g);
        assert_eq!(quot.mul(&g).add(&rem), f);
    }

    #[test]
    fn factor_difference_of_squares_q() {
        // x^2 - 1 = (x-1)(x+1)
        let f = upoly_q(&[(-1, 1), (0, 1), (1, 1)]);
        let (unit, factors) = factor_unipoly(&f, &Limits::default()).unwrap();
        assert!(unit.is_one());
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().all(|(_, e)| *e == 1));
    }

    #[test]
    fn factor_x2_plus_1_fp5() {
        // x^2+1 = (x+2)(x+3) over F5
        let f = upoly_fp(5, &[1, 0, 1]);
        let (_, factors) = factor_unipoly(&f, &Limits::default()).unwrap();
        assert_eq!(factors.len(), 2);
        let strs: Vec<String> = factors
            .iter()
            .map(|(g, _)| {
                g.coeffs
                    .iter()
                    .map(|c| format!("{c}"))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        assert!(strs.contains(&"2,1".to_string()));
        assert!(strs.contains(&"3,1".to_string()));
    }

    #[test]
    fn x2_plus_1_irreducible_over_q() {
        let f = upoly_q(&[(1, 1), (0, 1), (1, 1)]);
        let (_, factors) = factor_unipoly(&f, &Limits::default()).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].1, 1);
    }

    #[test]
    fn repeated_factors_and_units() {
        // 3(x-1)^2 (x^2+1)
        let xm1 = upoly_q(&[(-1, 1), (1, 1)]);
        let x2p1 = upoly_q(&[(1, 1), (0, 1), (1, 1)]);
        let f = xm1
            .mul(&xm1)
            .mul(&x2p1)
            .mul_scalar(&q(3, 1));
        let (unit, factors) = factor_unipoly(&f, &Limits::default()).unwrap();
        assert_eq!(unit, q(3, 1));
        let mut degs: Vec<(usize, u32)> =
            factors.iter().map(|(g, e)| (g.degree(), *e)).collect();
        degs.sort();
        assert_eq!(degs, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn zassenhaus_quartic() {
        // (x^2+x+1)(x^2+2) has no rational roots and needs recombination
        let a = upoly_q(&[(1, 1), (1, 1), (1, 1)]);
        let b = upoly_q(&[(2, 1), (0, 1), (1, 1)]);
        let f = a.mul(&b);
        let (_, factors) = factor_unipoly(&f, &Limits::default()).unwrap();
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().all(|(g, _)| g.degree() == 2));
    }

    #[test]
    fn degree_cap_enforced() {
        let mut limits = Limits::default();
        limits.factor_degree_cap = 3;
        let f = upoly_q(&[(1, 1), (0, 1), (0, 1), (0, 1), (1, 1)]);
        assert!(matches!(
            factor_unipoly(&f, &limits),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn big_fp_factorization() {
        // x^16 - 1 over F101 splits into linear and quadratic pieces
        let mut coeffs = vec![0i64; 17];
        coeffs[0] = -1;
        coeffs[16] = 1;
        let f = upoly_fp(101, &coeffs);
        let mut limits = Limits::default();
        limits.factor_degree_cap = 16;
        let (_, factors) = factor_unipoly(&f, &limits).unwrap();
        let total: usize = factors.iter().map(|(g, e)| g.degree() * *e as usize).sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn squarefree_char_p_power()
    {
        // (x+1)^5 over F5 has zero derivative handling
        let xp1 = upoly_fp(5, &[1, 1]);
        let mut f = upoly_fp(5, &[1]);
        for _ in 0..5 {
            f = f.mul(&xp1);
        }
        let (_, factors) = factor_unipoly(&f, &Limits::default()).unwrap();
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].1, 5);
        assert_eq!(factors[0].0.degree(), 1);
    }

    #[test]
    fn resultant_of_coprime_and_shared_root() {
        // res(x-2, x-3) = -1... via formula: eval
        let f = upoly_q(&[(-2, 1), (1, 1)]);
        let g = upoly_q(&[(-3, 1), (1, 1)]);
        let r = resultant(&f, &g);
        assert!(!r.is_zero());
        let shared = resultant(&f, &f);
        assert!(shared.is_zero());
    }

    #[test]
    fn discriminant_detects_double_roots() {
        // (x-1)^2 has zero discriminant
        let f = upoly_q(&[(1, 1), (-2, 1), (1, 1)]);
        assert!(discriminant(&f).is_zero());
        // x^2+1: disc = -4
        let g = upoly_q(&[(1, 1), (0, 1), (1, 1)]);
        assert_eq!(discriminant(&g), q(-4, 1));
    }

    #[test]
    fn mignotte_stress_degree_8() {
        // product of two quartics with no rational roots
        let a = upoly_q(&[(1, 1), (0, 1), (0, 1), (0, 1), (1, 1)]); // x^4+1
        let b = upoly_q(&[(3, 1), (1, 1), (0, 1), (1, 1), (1, 1)]); // x^4+x^3+x+3
        let f = a.mul(&b);
        let (_, factors) = factor_unipoly(&f, &Limits::default()).unwrap();
        let prod = factors
            .iter()
            .fold(upoly_q(&[(1, 1)]), |acc, (g, e)| {
                let mut acc = acc;
                for _ in 0..*e {
                    acc = acc.mul(g);
                }
                acc
            });
        assert_eq!(prod, f);
        assert_eq!(factors.len(), 2);
    }
}
