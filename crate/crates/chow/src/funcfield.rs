//! Arithmetic over the function field of a prime quotient, represented
//! implicitly: elements are numerator/denominator pairs of polynomials
//! reduced modulo the prime's basis, with denominators cleared lazily.
//! Used to compute generic-fiber degrees of finite maps: a small Buchberger
//! loop over the fiber variables with function-field coefficients, then a
//! standard-monomial count.

use crate::error::{Error, Result};
use crate::groebner::{normal_form, Ideal};
use crate::limits::Limits;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{MultiPoly, RingCtx, DEFAULT_ORDER};
use crate::scalar::Scalar;
use std::cmp::Ordering;
use std::sync::Arc;

/// The function field Frac(k[kept vars]/P), P prime.
#[derive(Debug)]
pub struct QuotCtx {
    pub ring: Arc<RingCtx>,
    /// Reduced basis of the prime ideal.
    pub reducer: Vec<MultiPoly>,
}

impl QuotCtx {
    pub fn new(image_prime: &Ideal, limits: &Limits) -> Result<Arc<QuotCtx>> {
        let gb = image_prime.groebner_basis(MonomialOrder::GrevLex, limits)?;
        Ok(Arc::new(QuotCtx {
            ring: image_prime.ring.clone(),
            reducer: gb.polys.clone(),
        }))
    }

    fn nf(&self, f: &MultiPoly) -> MultiPoly {
        if self.reducer.is_empty() {
            f.clone()
        } else {
            normal_form(f, &self.reducer, MonomialOrder::GrevLex)
        }
    }
}

/// An element num/den of the function field; num is kept in normal form
/// and den is nonzero modulo the prime.
#[derive(Debug, Clone)]
pub struct Frac {
    pub ctx: Arc<QuotCtx>,
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl Frac {
    pub fn from_poly(ctx: &Arc<QuotCtx>, f: &MultiPoly) -> Frac {
        Frac {
            ctx: ctx.clone(),
            num: ctx.nf(f),
            den: MultiPoly::one(&ctx.ring),
        }
    }

    pub fn one(ctx: &Arc<QuotCtx>) -> Frac {
        Frac::from_poly(ctx, &MultiPoly::one(&ctx.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Frac) -> Result<Frac> {
        let num = self
            .num
            .mul(&rhs.den)?
            .add(&rhs.num.mul(&self.den)?)?;
        Ok(Frac {
            ctx: self.ctx.clone(),
            num: self.ctx.nf(&num),
            den: self.ctx.nf(&self.den.mul(&rhs.den)?),
        })
    }

    pub fn sub(&self, rhs: &Frac) -> Result<Frac> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Frac {
        Frac {
            ctx: self.ctx.clone(),
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Frac) -> Result<Frac> {
        Ok(Frac {
            ctx: self.ctx.clone(),
            num: self.ctx.nf(&self.num.mul(&rhs.num)?),
            den: self.ctx.nf(&self.den.mul(&rhs.den)?),
        })
    }

    pub fn inv(&self) -> Result<Frac> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Frac {
            ctx: self.ctx.clone(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn div(&self, rhs: &Frac) -> Result<Frac> {
        self.mul(&rhs.inv()?)
    }

    pub fn eq(&self, rhs: &Frac) -> Result<bool> {
        let cross = self
            .num
            .mul(&rhs.den)?
            .sub(&rhs.num.mul(&self.den)?)?;
        Ok(self.ctx.nf(&cross).is_zero())
    }
}

/// Sparse polynomial in the fiber variables with function-field
/// coefficients; terms strictly descending grevlex.
#[derive(Debug, Clone)]
pub struct FiberPoly {
    pub terms: Vec<(Monomial, Frac)>,
}

impl FiberPoly {
    fn normalize(mut self) -> FiberPoly {
        self.terms
            .sort_by(|(a, _), (b, _)| MonomialOrder::GrevLex.cmp(b, a).then(b.cmp(a)));
        let mut merged: Vec<(Monomial, Frac)> = Vec::new();
        for (m, c) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    *lc = lc.add(&c).expect("same context");
                }
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        FiberPoly { terms: merged }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading(&self) -> &(Monomial, Frac) {
        &self.terms[0]
    }

    fn sub_scaled(&self, rhs: &FiberPoly, mono: &Monomial, coeff: &Frac) -> Result<FiberPoly> {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            terms.push((m.mul(mono)?, c.mul(coeff)?.neg()));
        }
        Ok(FiberPoly { terms }.normalize())
    }
}

/// Normal form of f against basis (full reduction).
fn fiber_normal_form(f: &FiberPoly, basis: &[FiberPoly]) -> Result<FiberPoly> {
    let mut work = f.clone().normalize();
    let mut out: Vec<(Monomial, Frac)> = Vec::new();
    'outer: while !work.is_zero() {
        let (m, c) = work.leading().clone();
        for g in basis {
            let (gm, gc) = g.leading();
            if let Some(q) = m.checked_div(gm) {
                let factor = c.div(gc)?;
                work = work.sub_scaled(g, &q, &factor)?;
                continue 'outer;
            }
        }
        out.push((m.clone(), c));
        work.terms.remove(0);
    }
    Ok(FiberPoly { terms: out })
}

fn fiber_buchberger(gens: Vec<FiberPoly>, limits: &Limits) -> Result<Vec<FiberPoly>> {
    let mut basis: Vec<FiberPoly> = gens
        .into_iter()
        .map(|g| g.normalize())
        .filter(|g| !g.is_zero())
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    let mut steps = 0usize;
    while let Some((i, j)) = pairs.pop() {
        steps += 1;
        if steps > limits.pair_cap {
            return Err(Error::ResourceLimit(
                "fiber basis computation exceeded the pair cap".into(),
            ));
        }
        let (mi, ci) = basis[i].leading().clone();
        let (mj, cj) = basis[j].leading().clone();
        if mi.coprime(&mj) {
            continue;
        }
        let lcm = mi.lcm(&mj);
        let s = {
            let a = basis[i].sub_scaled(
                &basis[j],
                &lcm.checked_div(&mj).unwrap(),
                &ci.div(&cj)?.mul(&Frac::one(&ci.ctx))?,
            )?;
            // a = basis[i] - (ci/cj) * x^(lcm/mj) * basis[j]; scale to s-poly by
            // multiplying basis[i] side with x^(lcm/mi)
            // simpler: recompute directly
            let ui = lcm.checked_div(&mi).unwrap();
            let uj = lcm.checked_div(&mj).unwrap();
            let mut terms = Vec::new();
            for (m, c) in &basis[i].terms {
                terms.push((m.mul(&ui)?, c.div(&ci)?));
            }
            for (m, c) in &basis[j].terms {
                terms.push((m.mul(&uj)?, c.div(&cj)?.neg()));
            }
            let _ = a;
            FiberPoly { terms }.normalize()
        };
        let r = fiber_normal_form(&s, &basis)?;
        if !r.is_zero() {
            let new_idx = basis.len();
            basis.push(r);
            for k in 0..new_idx {
                pairs.push((k, new_idx));
            }
        }
    }
    Ok(basis)
}

/// Degree of the generic fiber of the projection of V(prime) onto the kept
/// coordinates: dim over Frac(k[kept]/image) of the fiber algebra. Errors
/// with `DegreeComputationFailed` when the fiber is not finite.
pub fn generic_fiber_degree(
    prime: &Ideal,
    keep: &[usize],
    image: &Ideal,
    limits: &Limits,
) -> Result<u64> {
    let big_ring = &prime.ring;
    let n = big_ring.nvars();
    let fiber_vars: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    if fiber_vars.is_empty() {
        return Ok(1);
    }
    let ctx = QuotCtx::new(image, limits)?;
    // positions of kept variables inside the image subring, by order
    let mut kept_sorted = keep.to_vec();
    kept_sorted.sort();
    let to_sub_index = |v: usize| kept_sorted.iter().position(|&k| k == v).unwrap();

    let gb = prime.groebner_basis(MonomialOrder::GrevLex, limits)?;
    let mut fiber_gens = Vec::new();
    for g in &gb.polys {
        // group terms by their fiber-variable part
        let mut groups: Vec<(Monomial, Vec<(Monomial, Scalar)>)> = Vec::new();
        for (m, c) in &g.terms {
            let mut fiber_part = vec![0u32; fiber_vars.len()];
            for (fi, &v) in fiber_vars.iter().enumerate() {
                fiber_part[fi] = m.0[v];
            }
            let mut base_part = vec![0u32; kept_sorted.len()];
            for &v in &kept_sorted {
                base_part[to_sub_index(v)] = m.0[v];
            }
            let fiber_mono = Monomial(fiber_part);
            let base_mono = Monomial(base_part);
            match groups.iter_mut().find(|(fm, _)| *fm == fiber_mono) {
                Some((_, list)) => list.push((base_mono, c.clone())),
                None => groups.push((fiber_mono, vec![(base_mono, c.clone())])),
            }
        }
        let terms: Result<Vec<(Monomial, Frac)>> = groups
            .into_iter()
            .map(|(fm, coeffs)| {
                let poly = MultiPoly::from_terms(&ctx.ring, DEFAULT_ORDER, coeffs);
                Ok((fm, Frac::from_poly(&ctx, &poly)))
            })
            .collect();
        fiber_gens.push(FiberPoly { terms: terms? }.normalize());
    }
    let basis = fiber_buchberger(fiber_gens, limits)?;
    if basis.iter().any(|g| g.leading().0.is_one()) {
        return Err(Error::DegreeComputationFailed(
            "fiber ideal is the unit ideal over the generic point".into(),
        ));
    }
    // finiteness: every fiber variable needs a pure-power leading monomial
    let lt: Vec<Monomial> = basis.iter().map(|g| g.leading().0.clone()).collect();
    for (fi, &v) in fiber_vars.iter().enumerate() {
        let has_power = lt
            .iter()
            .any(|m| m.0[fi] > 0 && m.support().all(|s| s == fi));
        if !has_power {
            return Err(Error::DegreeComputationFailed(format!(
                "generic fiber infinite in variable {}",
                big_ring.vars[v]
            )));
        }
    }
    let monos = crate::cycles::standard_monomials(&lt, fiber_vars.len());
    Ok(monos.len() as u64)
}

/// Compare under grevlex, used by sorting in the fiber engine.
pub fn grevlex_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    MonomialOrder::GrevLex.cmp(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_degree_of_double_cover() {
        // V(y^2 - x) -> x-axis: degree 2
        let r = RingCtx::rational(&["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let prime = Ideal::principal(y.pow(2).unwrap().sub(&x).unwrap());
        let sub = RingCtx::rational(&["x"]);
        let image = Ideal::zero(&sub);
        let limits = Limits::default();
        assert_eq!(generic_fiber_degree(&prime, &[0], &image, &limits).unwrap(), 2);
    }

    #[test]
    fn fiber_degree_of_graph_is_one() {
        let r = RingCtx::rational(&["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let prime = Ideal::principal(y.sub(&x.pow(3).unwrap()).unwrap());
        let sub = RingCtx::rational(&["x"]);
        let image = Ideal::zero(&sub);
        let limits = Limits::default();
        assert_eq!(generic_fiber_degree(&prime, &[0], &image, &limits).unwrap(), 1);
    }

    #[test]
    fn infinite_fiber_detected() {
        // V(x*y - 1) -> x-axis is finite away from 0 but let's project to
        // nothing: keep no constraint on y over the whole plane
        let r = RingCtx::rational(&["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let prime = Ideal::principal(x.clone()); // the line x = 0
        let sub = RingCtx::rational(&["x"]);
        let image = Ideal::principal(MultiPoly::var(&sub, 0));
        let limits = Limits::default();
        // fiber over the point x=0 in the y-direction is the whole line
        assert!(matches!(
            generic_fiber_degree(&prime, &[0], &image, &limits),
            Err(Error::DegreeComputationFailed(_))
        ));
    }

    #[test]
    fn fiber_over_curved_base() {
        // V(z - x^2, y^2 - z) over the parabola z = x^2 in the (x,z)-plane:
        // fiber in y has degree 2
        let r = RingCtx::rational(&["x", "y", "z"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let z = MultiPoly::var(&r, 2);
        let prime = Ideal::new(
            &r,
            vec![
                z.sub(&x.pow(2).unwrap()).unwrap(),
                y.pow(2).unwrap().sub(&z).unwrap(),
            ],
        )
        .unwrap();
        let sub = RingCtx::rational(&["x", "z"]);
        let xs = MultiPoly::var(&sub, 0);
        let zs = MultiPoly::var(&sub, 1);
        let image = Ideal::principal(zs.sub(&xs.pow(2).unwrap()).unwrap());
        let limits = Limits::default();
        assert_eq!(
            generic_fiber_degree(&prime, &[0, 2], &image, &limits).unwrap(),
            2
        );
    }
}
