//! Buchberger-based Groebner engine and the ideal toolkit: normal forms,
//! reduced bases with a per-order cache, sum/product/intersection/quotient/
//! saturation, and elimination ideals via block orders.

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{MultiPoly, RingCtx};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

/// A reduced, monic Groebner basis for a fixed order. The zero ideal has an
/// empty basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub polys: Vec<MultiPoly>,
}

impl GroebnerBasis {
    pub fn leading_monomials(&self) -> Vec<&Monomial> {
        self.polys
            .iter()
            .map(|g| &g.leading().expect("basis elements are nonzero").0)
            .collect()
    }

    /// Normal form against this basis.
    pub fn reduce(&self, f: &MultiPoly) -> MultiPoly {
        normal_form(f, &self.polys, self.order)
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        self.reduce(f).is_zero()
    }
}

/// Full normal form: no term of the result is divisible by any leading term
/// of the basis, and `f - result` lies in the ideal the basis generates.
pub fn normal_form(f: &MultiPoly, basis: &[MultiPoly], order: MonomialOrder) -> MultiPoly {
    let mut work = f.with_order(order);
    let basis: Vec<MultiPoly> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.with_order(order))
        .collect();
    let mut out: Vec<(Monomial, Scalar)> = Vec::new();
    'outer: while let Some((m, c)) = work.leading().cloned() {
        for g in &basis {
            let (gm, gc) = g.leading().unwrap();
            if let Some(q) = m.checked_div(gm) {
                let factor = c.div(gc).expect("basis leading coefficients nonzero");
                let sub = g.mul_term(&q, &factor).expect("degree in range");
                work = work.sub(&sub).expect("same ring");
                continue 'outer;
            }
        }
        // irreducible term: move it to the output
        out.push((m, c));
        work.terms.remove(0);
    }
    MultiPoly::from_terms(&f.ring, order, out)
}

/// Exact division by a single polynomial; `None` when not divisible.
pub fn div_exact(f: &MultiPoly, divisor: &MultiPoly, order: MonomialOrder) -> Option<MultiPoly> {
    if f.is_zero() {
        return Some(MultiPoly::zero(&f.ring));
    }
    if divisor.is_zero() {
        return None;
    }
    let mut work = f.with_order(order);
    let divisor = divisor.with_order(order);
    let (dm, dc) = divisor.leading().unwrap().clone();
    let mut quot: Vec<(Monomial, Scalar)> = Vec::new();
    while let Some((m, c)) = work.leading().cloned() {
        let q = m.checked_div(&dm)?;
        let factor = c.div(&dc).ok()?;
        let sub = divisor.mul_term(&q, &factor).ok()?;
        work = work.sub(&sub).expect("same ring");
        quot.push((q, factor));
    }
    Some(MultiPoly::from_terms(&f.ring, order, quot))
}

fn s_poly(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading().unwrap();
    let (gm, gc) = g.leading().unwrap();
    let lcm = fm.lcm(gm);
    let uf = lcm.checked_div(fm).unwrap();
    let ug = lcm.checked_div(gm).unwrap();
    let a = f
        .mul_term(&uf, &fc.inv().expect("nonzero lc"))
        .expect("in range");
    let b = g
        .mul_term(&ug, &gc.inv().expect("nonzero lc"))
        .expect("in range");
    a.sub(&b).expect("same ring")
}

/// Buchberger with the coprime-leading-term and chain criteria, degree-graded
/// pair selection, and a hard pair cap.
pub fn buchberger(
    gens: &[MultiPoly],
    order: MonomialOrder,
    limits: &Limits,
) -> Result<Vec<MultiPoly>> {
    let mut basis: Vec<MultiPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            basis.push(g.with_order(order).monic());
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    // pair queue keyed by (lcm degree, lcm, i, j)
    let mut queue: BTreeMap<(u64, Monomial, usize, usize), ()> = BTreeMap::new();
    let mut pairs_seen: usize = 0;
    let push_pairs =
        |queue: &mut BTreeMap<(u64, Monomial, usize, usize), ()>,
         basis: &[MultiPoly],
         new_idx: usize,
         pairs_seen: &mut usize|
         -> Result<()> {
            for i in 0..new_idx {
                let lm_i = &basis[i].leading().unwrap().0;
                let lm_j = &basis[new_idx].leading().unwrap().0;
                let lcm = lm_i.lcm(lm_j);
                queue.insert((lcm.total_degree(), lcm, i, new_idx), ());
                *pairs_seen += 1;
                if *pairs_seen > limits.pair_cap {
                    return Err(Error::ResourceLimit(format!(
                        "pair queue exceeded {} pairs",
                        limits.pair_cap
                    )));
                }
            }
            Ok(())
        };

    for idx in 1..basis.len() {
        push_pairs(&mut queue, &basis, idx, &mut pairs_seen)?;
    }

    let mut processed: Vec<(usize, usize)> = Vec::new();
    while let Some((key, ())) = queue.pop_first().map(|(k, v)| (k, v)) {
        let (_, lcm, i, j) = key;
        let lm_i = &basis[i].leading().unwrap().0;
        let lm_j = &basis[j].leading().unwrap().0;
        // first criterion: coprime leading monomials reduce to zero
        if lm_i.coprime(lm_j) {
            processed.push((i, j));
            continue;
        }
        // chain criterion: some k with LT(k) | lcm and both chain pairs done
        let mut skip = false;
        for (k, g) in basis.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            let lm_k = &g.leading().unwrap().0;
            if lm_k.divides(&lcm) {
                let pik = (i.min(k), i.max(k));
                let pjk = (j.min(k), j.max(k));
                if processed.contains(&pik) && processed.contains(&pjk) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            processed.push((i, j));
            continue;
        }
        processed.push((i, j));
        let s = s_poly(&basis[i], &basis[j]);
        let r = normal_form(&s, &basis, order);
        if !r.is_zero() {
            basis.push(r.monic());
            let new_idx = basis.len() - 1;
            push_pairs(&mut queue, &basis, new_idx, &mut pairs_seen)?;
        }
    }

    Ok(reduce_basis(basis, order))
}

/// Inter-reduce: drop elements whose leading term another divides, then
/// tail-reduce each against the rest; all monic, sorted by leading term.
fn reduce_basis(mut basis: Vec<MultiPoly>, order: MonomialOrder) -> Vec<MultiPoly> {
    // minimalize
    let mut keep = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let lm_i = basis[i].leading().unwrap().0.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let lm_j = &basis[j].leading().unwrap().0;
            if lm_j.divides(&lm_i) && (lm_j != &lm_i || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<MultiPoly> = basis
        .drain(..)
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();
    // tail reduce
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MultiPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = normal_form(&minimal[i], &others, order);
        if !r.is_zero() {
            reduced.push(r.monic());
        }
    }
    reduced.sort_by(|a, b| {
        let am = &a.leading().unwrap().0;
        let bm = &b.leading().unwrap().0;
        order.cmp(bm, am).then(bm.cmp(am))
    });
    reduced
}

/// An ideal: generators plus cached reduced bases per order.
#[derive(Debug)]
pub struct Ideal {
    pub ring: Arc<RingCtx>,
    pub gens: Vec<MultiPoly>,
    cache: Mutex<BTreeMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl PartialEq for Ideal {
    /// Equality of generator lists, not of the ideals they span; use
    /// `equals` for the semantic test.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.gens == other.gens
    }
}

impl Ideal {
    pub fn new(ring: &Arc<RingCtx>, gens: Vec<MultiPoly>) -> Result<Ideal> {
        for g in &gens {
            if *g.ring != **ring {
                return Err(Error::MixedContext(
                    "ideal generators in different rings".into(),
                ));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn zero(ring: &Arc<RingCtx>) -> Ideal {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn principal(f: MultiPoly) -> Ideal {
        let ring = f.ring.clone();
        Ideal {
            ring,
            gens: if f.is_zero() { vec![] } else { vec![f] },
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// The reduced Groebner basis, computed once per order and cached.
    pub fn groebner_basis(
        &self,
        order: MonomialOrder,
        limits: &Limits,
    ) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.cache.lock().unwrap().get(&order) {
            return Ok(gb.clone());
        }
        let polys = buchberger(&self.gens, order, limits)?;
        let gb = Arc::new(GroebnerBasis { order, polys });
        self.cache
            .lock()
            .unwrap()
            .insert(order, gb.clone());
        Ok(gb)
    }

    /// Ideal membership via normal form.
    pub fn contains(&self, f: &MultiPoly, limits: &Limits) -> Result<bool> {
        let gb = self.groebner_basis(MonomialOrder::GrevLex, limits)?;
        Ok(gb.contains(f))
    }

    /// Semantic equality (mutual membership of generators).
    pub fn equals(&self, other: &Ideal, limits: &Limits) -> Result<bool> {
        if *self.ring != *other.ring {
            return Ok(false);
        }
        for g in &other.gens {
            if !self.contains(g, limits)? {
                return Ok(false);
            }
        }
        for g in &self.gens {
            if !other.contains(g, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `1 ∈ I`.
    pub fn is_unit_ideal(&self, limits: &Limits) -> Result<bool> {
        let gb = self.groebner_basis(MonomialOrder::GrevLex, limits)?;
        Ok(gb
            .polys
            .first()
            .map(|g| g.leading().unwrap().0.is_one())
            .unwrap_or(false))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = Vec::new();
        for f in &self.gens {
            for g in &other.gens {
                gens.push(f.mul(g)?);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::MixedContext("ideals in different rings".into()))
        }
    }

    /// Intersection via the t(1-t) elimination construction.
    pub fn intersection(&self, other: &Ideal, limits: &Limits) -> Result<Ideal> {
        self.check_ring(other)?;
        // extended ring with t in front
        let mut vars: Vec<String> = vec![fresh_var_name(&self.ring)];
        vars.extend(self.ring.vars.iter().cloned());
        let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let ext = RingCtx::new(self.ring.field, &var_refs);
        let positions: Vec<usize> = (1..=self.ring.nvars()).collect();
        let t = MultiPoly::var(&ext, 0);
        let one_minus_t = MultiPoly::one(&ext).sub(&t)?;
        let mut gens = Vec::new();
        for f in &self.gens {
            gens.push(t.mul(&f.embed(&ext, &positions))?);
        }
        for g in &other.gens {
            gens.push(one_minus_t.mul(&g.embed(&ext, &positions))?);
        }
        let basis = buchberger(&gens, MonomialOrder::Block { split: 1 }, limits)?;
        let mut result = Vec::new();
        for g in basis {
            if g.degree_in(0) == 0 {
                result.push(project_drop_first(&g, &self.ring));
            }
        }
        Ideal::new(&self.ring, result)
    }

    /// Colon ideal (I : f).
    pub fn quotient_by_poly(&self, f: &MultiPoly, limits: &Limits) -> Result<Ideal> {
        if f.is_zero() {
            return Err(Error::Validation("quotient by the zero polynomial".into()));
        }
        if self.is_zero_ideal() {
            return Ok(Ideal::zero(&self.ring));
        }
        let inter = self.intersection(&Ideal::principal(f.clone()), limits)?;
        let mut gens = Vec::new();
        for g in &inter.gens {
            let q = div_exact(g, f, MonomialOrder::GrevLex)
                .expect("intersection with (f) is divisible by f");
            gens.push(q);
        }
        Ideal::new(&self.ring, gens)
    }

    /// Colon ideal (I : J) = ∩_j (I : f_j).
    pub fn quotient(&self, other: &Ideal, limits: &Limits) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut acc: Option<Ideal> = None;
        for f in &other.gens {
            let q = self.quotient_by_poly(f, limits)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersection(&q, limits)?,
            });
        }
        match acc {
            // (I : 0) is the unit ideal
            None => Ideal::new(&self.ring, vec![MultiPoly::one(&self.ring)]),
            Some(a) => Ok(a),
        }
    }

    /// Saturation (I : J^∞) by iterated quotient until stabilization.
    pub fn saturation(&self, other: &Ideal, limits: &Limits) -> Result<Ideal> {
        let mut current = self.clone();
        for _ in 0..limits.saturation_cap {
            let next = current.quotient(other, limits)?;
            if next.equals(&current, limits)? {
                return Ok(current);
            }
            current = next;
        }
        Err(Error::ResourceLimit(format!(
            "saturation did not stabilize within {} steps",
            limits.saturation_cap
        )))
    }

    /// I ∩ k[kept variables], computed with the eliminated block first.
    pub fn elimination(&self, keep: &[usize], limits: &Limits) -> Result<Ideal> {
        let n = self.ring.nvars();
        for &k in keep {
            if k >= n {
                return Err(Error::Validation(format!("variable index {k} out of range")));
            }
        }
        let eliminated: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        if eliminated.is_empty() {
            return Ok(self.clone());
        }
        // permuted ring: eliminated first, kept after
        let mut order_of: Vec<usize> = eliminated.clone();
        order_of.extend(keep.iter().copied());
        let names: Vec<&str> = order_of
            .iter()
            .map(|&i| self.ring.vars[i].as_str())
            .collect();
        let permuted = RingCtx::new(self.ring.field, &names);
        // positions[i] = index of original var i inside permuted ring
        let mut positions = vec![0usize; n];
        for (new_idx, &orig) in order_of.iter().enumerate() {
            positions[orig] = new_idx;
        }
        let gens: Vec<MultiPoly> = self
            .gens
            .iter()
            .map(|g| g.embed(&permuted, &positions))
            .collect();
        let basis = buchberger(
            &gens,
            MonomialOrder::Block {
                split: eliminated.len(),
            },
            limits,
        )?;
        let mut kept_polys = Vec::new();
        let back_positions: Vec<usize> = order_of.clone();
        for g in basis {
            if (0..eliminated.len()).all(|i| g.degree_in(i) == 0) {
                // map back into the original ring
                let mapped = g.embed(&self.ring, &back_positions);
                kept_polys.push(mapped);
            }
        }
        Ideal::new(&self.ring, kept_polys)
    }
}

/// gcd of two multivariate polynomials via (f) ∩ (g) = (lcm) and exact
/// division, so it reuses the elimination machinery and stays exact.
pub fn multivariate_gcd(f: &MultiPoly, g: &MultiPoly, limits: &Limits) -> Result<MultiPoly> {
    if f.is_zero() {
        return Ok(g.clone());
    }
    if g.is_zero() {
        return Ok(f.clone());
    }
    let inter = Ideal::principal(f.clone()).intersection(&Ideal::principal(g.clone()), limits)?;
    let gb = inter.groebner_basis(MonomialOrder::GrevLex, limits)?;
    if gb.polys.len() != 1 {
        return Err(Error::Validation(
            "intersection of principal ideals is not principal".into(),
        ));
    }
    let lcm = &gb.polys[0];
    let prod = f.mul(g)?;
    let gcd = div_exact(&prod, lcm, MonomialOrder::GrevLex)
        .ok_or_else(|| Error::Validation("lcm does not divide the product".into()))?;
    Ok(gcd.monic())
}

/// Radical membership via the Rabinowitsch trick: g ∈ √I iff
/// 1 ∈ I + (1 - t·g) in the extended ring.
pub fn in_radical(g: &MultiPoly, ideal: &Ideal, limits: &Limits) -> Result<bool> {
    if g.is_zero() {
        return Ok(true);
    }
    let mut vars: Vec<String> = vec![fresh_var_name(&ideal.ring)];
    vars.extend(ideal.ring.vars.iter().cloned());
    let refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let ext = RingCtx::new(ideal.ring.field, &refs);
    let positions: Vec<usize> = (1..=ideal.ring.nvars()).collect();
    let t = MultiPoly::var(&ext, 0);
    let mut gens: Vec<MultiPoly> = ideal.gens.iter().map(|f| f.embed(&ext, &positions)).collect();
    gens.push(
        MultiPoly::one(&ext)
            .sub(&t.mul(&g.embed(&ext, &positions))?)?,
    );
    Ideal::new(&ext, gens)?.is_unit_ideal(limits)
}

fn fresh_var_name(ring: &RingCtx) -> String {
    let mut name = "t#".to_string();
    while ring.vars.iter().any(|v| *v == name) {
        name.push('#');
    }
    name
}

/// Drop the first variable (exponent known zero) of a polynomial living in
/// an extended ring.
fn project_drop_first(f: &MultiPoly, target: &Arc<RingCtx>) -> MultiPoly {
    let terms = f
        .terms
        .iter()
        .map(|(m, c)| {
            debug_assert_eq!(m.0[0], 0);
            (Monomial(m.0[1..].to_vec()), c.clone())
        })
        .collect();
    MultiPoly::from_terms(target, f.order, terms)
}
