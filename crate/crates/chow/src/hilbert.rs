//! Hilbert series of quotients by homogeneous ideals, via the combinatorial
//! recursion on the leading-term ideal, plus the derived data: Krull
//! dimension (series pole order), degree, and the Hilbert polynomial. The
//! same numerator drives affine Hilbert polynomials, which feed dimension
//! and multiplicity bookkeeping for local lengths.

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::limits::Limits;
use crate::monomial::{Monomial, MonomialOrder};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Hilbert data of a homogeneous quotient A/I with A in `nvars` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertData {
    /// Numerator N(t) of the series N(t)/(1-t)^nvars, ascending coefficients.
    pub numerator: Vec<BigInt>,
    /// Numerator after cancelling all (1-t) factors.
    pub reduced_numerator: Vec<BigInt>,
    /// Pole order of the series = Krull dimension of the cone.
    pub dimension: usize,
    /// Degree: reduced numerator evaluated at 1.
    pub degree: BigInt,
    /// Hilbert polynomial coefficients in t, ascending, exact rationals.
    pub hilbert_polynomial: Vec<BigRational>,
    pub nvars: usize,
}

impl HilbertData {
    /// Projective dimension (pole order minus one); −1 for the empty scheme.
    pub fn projective_dimension(&self) -> isize {
        self.dimension as isize - 1
    }

    /// Evaluate the Hilbert polynomial at an integer.
    pub fn hp_at(&self, t: i64) -> BigRational {
        eval_poly(&self.hilbert_polynomial, t)
    }
}

fn eval_poly(coeffs: &[BigRational], t: i64) -> BigRational {
    let x = BigRational::from(BigInt::from(t));
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

// ---------- numerator recursion on monomial ideals ----------

fn minimize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut sorted: Vec<Monomial> = gens.to_vec();
    sorted.sort_by_key(|m| m.total_degree());
    let mut out: Vec<Monomial> = Vec::new();
    for m in sorted {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out.sort();
    out
}

fn poly_mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        out.push(x + y);
    }
    while out.last().map_or(false, |c| c.is_zero()) {
        out.pop();
    }
    out
}

/// 1 - t^d.
fn one_minus_td(d: u64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); d as usize + 1];
    v[0] = BigInt::one();
    v[d as usize] = -BigInt::one();
    v
}

/// Numerator of the Hilbert series of A/(monomial ideal), memoized.
pub fn monomial_numerator(gens: &[Monomial]) -> Vec<BigInt> {
    let mut memo: HashMap<Vec<Monomial>, Vec<BigInt>> = HashMap::new();
    numerator_rec(minimize(gens), &mut memo)
}

fn numerator_rec(
    gens: Vec<Monomial>,
    memo: &mut HashMap<Vec<Monomial>, Vec<BigInt>>,
) -> Vec<BigInt> {
    if gens.is_empty() {
        return vec![BigInt::one()];
    }
    if gens.iter().any(|m| m.is_one()) {
        return vec![];
    }
    if let Some(hit) = memo.get(&gens) {
        return hit.clone();
    }
    // pairwise coprime: product formula
    let coprime = (0..gens.len()).all(|i| (i + 1..gens.len()).all(|j| gens[i].coprime(&gens[j])));
    let result = if coprime {
        let mut acc = vec![BigInt::one()];
        for m in &gens {
            acc = poly_mul_int(&acc, &one_minus_td(m.total_degree()));
        }
        acc
    } else {
        // pivot: a variable occurring in the most generators
        let nvars = gens[0].nvars();
        let mut counts = vec![0usize; nvars];
        for m in &gens {
            for i in m.support() {
                counts[i] += 1;
            }
        }
        let pivot = counts
            .iter()
            .enumerate()
            .max_by_key(|(_, &c)| c)
            .map(|(i, _)| i)
            .unwrap();
        // N(M) = N(M + (x)) + t * N(M : x)
        let mut plus: Vec<Monomial> = gens
            .iter()
            .filter(|m| m.0[pivot] == 0)
            .cloned()
            .collect();
        plus.push(Monomial::var(nvars, pivot));
        let colon: Vec<Monomial> = gens
            .iter()
            .map(|m| {
                let mut e = m.clone();
                if e.0[pivot] > 0 {
                    e.0[pivot] -= 1;
                }
                e
            })
            .collect();
        let a = numerator_rec(minimize(&plus), memo);
        let b = numerator_rec(minimize(&colon), memo);
        let mut tb = vec![BigInt::zero()];
        tb.extend(b);
        poly_add_int(&a, &tb)
    };
    memo.insert(gens, result.clone());
    result
}

/// Divide out all (1-t) factors; returns (reduced, count).
fn cancel_one_minus_t(numer: &[BigInt]) -> (Vec<BigInt>, usize) {
    let mut current = numer.to_vec();
    let mut count = 0usize;
    loop {
        if current.is_empty() {
            return (current, count);
        }
        // evaluate at 1
        let at_one: BigInt = current.iter().sum();
        if !at_one.is_zero() {
            return (current, count);
        }
        // synthetic division by (1 - t): q with N = (1-t) q
        // N(t) = sum a_i t^i; q_i = a_0 + a_1 + ... + a_i (shifted form)
        let mut q = Vec::with_capacity(current.len().saturating_sub(1));
        let mut acc = BigInt::zero();
        for a in &current[..current.len() - 1] {
            acc += a;
            q.push(acc.clone());
        }
        while q.last().map_or(false, |c| c.is_zero()) {
            q.pop();
        }
        current = q;
        count += 1;
    }
}

/// binom(t + shift, k) as a polynomial in t with rational coefficients.
fn binomial_poly(shift: i64, k: usize) -> Vec<BigRational> {
    if k == 0 {
        return vec![BigRational::one()];
    }
    // product (t + shift)(t + shift - 1)...(t + shift - k + 1)/k!
    let mut acc = vec![BigRational::one()];
    for j in 0..k {
        let c = BigRational::from(BigInt::from(shift - j as i64));
        // multiply acc by (t + c)
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i] = &next[i] + a * &c;
            next[i + 1] = &next[i + 1] + a;
        }
        acc = next;
    }
    let mut kfact = BigRational::one();
    for j in 1..=k {
        kfact = kfact * BigRational::from(BigInt::from(j as i64));
    }
    acc.into_iter().map(|c| c / &kfact).collect()
}

fn poly_add_rat(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        out.push(x + y);
    }
    while out.last().map_or(false, |c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Hilbert data from a leading-term monomial set in `nvars` variables
/// (projective grading: the series denominator is (1-t)^nvars).
pub fn hilbert_from_monomials(lt: &[Monomial], nvars: usize) -> HilbertData {
    let numerator = monomial_numerator(lt);
    let (reduced, cancelled) = cancel_one_minus_t(&numerator);
    let dimension = nvars - cancelled.min(nvars);
    let degree: BigInt = reduced.iter().sum();
    // HP(t) = sum_i red_i * binom(t - i + D - 1, D - 1)
    let mut hp: Vec<BigRational> = Vec::new();
    if dimension > 0 {
        for (i, c) in reduced.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = binomial_poly(dimension as i64 - 1 - i as i64, dimension - 1);
            let scaled: Vec<BigRational> = term
                .into_iter()
                .map(|x| x * BigRational::from(c.clone()))
                .collect();
            hp = poly_add_rat(&hp, &scaled);
        }
    }
    HilbertData {
        numerator,
        reduced_numerator: reduced,
        dimension,
        degree,
        hilbert_polynomial: hp,
        nvars,
    }
}

/// Hilbert data of a homogeneous ideal, with the internal consistency
/// checks described by the data's invariants.
pub fn hilbert(ideal: &Ideal, limits: &Limits) -> Result<HilbertData> {
    for g in &ideal.gens {
        if !g.is_homogeneous() {
            return Err(Error::NotHomogeneous(g.canonical_string()));
        }
    }
    let gb = ideal.groebner_basis(MonomialOrder::GrevLex, limits)?;
    let lt: Vec<Monomial> = gb
        .polys
        .iter()
        .map(|g| g.leading().unwrap().0.clone())
        .collect();
    let nvars = ideal.ring.nvars();
    let data = hilbert_from_monomials(&lt, nvars);

    // invariant: leading coefficient = degree/(dimension-1)!
    if data.dimension > 0 && !data.degree.is_zero() {
        let mut fact = BigRational::one();
        for j in 1..data.dimension {
            fact = fact * BigRational::from(BigInt::from(j as i64));
        }
        let lead = data
            .hilbert_polynomial
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero);
        let expect = BigRational::from(data.degree.clone()) / fact;
        if lead != expect {
            return Err(Error::Validation(format!(
                "hilbert invariant broken: lead {lead} vs degree/(dim-1)! {expect}"
            )));
        }
    }
    // invariant: polynomial matches the function from the regularity bound
    let reg = regularity_bound(&lt, nvars);
    for t in reg..reg + 4 {
        let hf = BigInt::from(hilbert_function_brute(&lt, nvars, t));
        let hp = data.hp_at(t as i64);
        if hp != BigRational::from(hf.clone()) {
            return Err(Error::Validation(format!(
                "hilbert polynomial {hp} disagrees with function {hf} at t={t}"
            )));
        }
    }
    Ok(data)
}

/// Safe regularity over-estimate: maximal generator degree of the
/// leading-term ideal plus the number of variables.
pub fn regularity_bound(lt: &[Monomial], nvars: usize) -> u64 {
    lt.iter().map(|m| m.total_degree()).max().unwrap_or(0) + nvars as u64
}

/// Brute-force Hilbert function: count degree-t monomials outside the
/// leading-term ideal.
pub fn hilbert_function_brute(lt: &[Monomial], nvars: usize, t: u64) -> u64 {
    let mut count = 0u64;
    let mut exps = vec![0u32; nvars];
    count_monomials(&mut exps, 0, t, lt, &mut count);
    count
}

fn count_monomials(exps: &mut Vec<u32>, var: usize, remaining: u64, lt: &[Monomial], count: &mut u64) {
    if var + 1 == exps.len() {
        exps[var] = remaining as u32;
        let m = Monomial(exps.clone());
        if !lt.iter().any(|g| g.divides(&m)) {
            *count += 1;
        }
        exps[var] = 0;
        return;
    }
    for e in 0..=remaining {
        exps[var] = e as u32;
        count_monomials(exps, var + 1, remaining - e, lt, count);
    }
    exps[var] = 0;
}

/// Affine Krull dimension of A/I via maximal independent variable subsets
/// modulo the leading-term ideal.
pub fn krull_dimension(ideal: &Ideal, limits: &Limits) -> Result<usize> {
    let gb = ideal.groebner_basis(MonomialOrder::GrevLex, limits)?;
    if gb
        .polys
        .first()
        .map(|g| g.leading().unwrap().0.is_one())
        .unwrap_or(false)
    {
        // unit ideal: empty variety; report dimension as usize::MAX sentinel?
        // A/I = 0 has Krull dimension -inf; desk convention: error out
        return Err(Error::Validation(
            "krull dimension of the zero ring (unit ideal)".into(),
        ));
    }
    let lt: Vec<Monomial> = gb
        .polys
        .iter()
        .map(|g| g.leading().unwrap().0.clone())
        .collect();
    let n = ideal.ring.nvars();
    let mut best = 0usize;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        // independent iff no leading monomial supported inside the subset
        let independent = lt.iter().all(|m| {
            m.support().any(|i| mask & (1 << i) == 0)
        });
        if independent {
            best = size;
        }
    }
    Ok(best)
}

/// Affine Hilbert data: dimension of A/I and its multiplicity (the
/// dimension-top coefficient normalization), from the grevlex leading
/// terms. Returns `(affine_dim, multiplicity)`.
pub fn affine_dim_and_multiplicity(ideal: &Ideal, limits: &Limits) -> Result<(usize, BigInt)> {
    let gb = ideal.groebner_basis(MonomialOrder::GrevLex, limits)?;
    if gb
        .polys
        .first()
        .map(|g| g.leading().unwrap().0.is_one())
        .unwrap_or(false)
    {
        // unit ideal: the zero module has every multiplicity zero
        return Ok((0, BigInt::zero()));
    }
    let lt: Vec<Monomial> = gb
        .polys
        .iter()
        .map(|g| g.leading().unwrap().0.clone())
        .collect();
    let numerator = monomial_numerator(&lt);
    let (reduced, cancelled) = cancel_one_minus_t(&numerator);
    let nvars = ideal.ring.nvars();
    let dim = nvars - cancelled.min(nvars);
    let e: BigInt = reduced.iter().sum();
    debug_assert!(e.is_positive());
    Ok((dim, e))
}

/// Multiplicity of A/I in dimension `at_dim`: the full multiplicity when
/// dim(A/I) = at_dim, zero when dim(A/I) < at_dim.
pub fn multiplicity_at_dim(ideal: &Ideal, at_dim: usize, limits: &Limits) -> Result<BigInt> {
    let (dim, e) = affine_dim_and_multiplicity(ideal, limits)?;
    if dim == at_dim {
        Ok(e)
    } else if dim < at_dim {
        Ok(BigInt::zero())
    } else {
        Err(Error::Validation(format!(
            "module has dimension {dim} above the expected {at_dim}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MultiPoly, RingCtx};
    use std::sync::Arc;

    fn p2_ring() -> Arc<crate::poly::RingCtx> {
        RingCtx::rational(&["x", "y", "z"])
    }

    #[test]
    fn ambient_projective_plane() {
        // I = (0) in 3 variables: HP = (t+2)(t+1)/2, degree 1, dim 3 (cone)
        let r = p2_ring();
        let i = Ideal::zero(&r);
        let d = hilbert(&i, &Limits::default()).unwrap();
        assert_eq!(d.dimension, 3);
        assert_eq!(d.degree, BigInt::from(1));
        for t in 0..6 {
            let expect = BigRational::from(BigInt::from((t + 2) * (t + 1) / 2));
            assert_eq!(d.hp_at(t), expect);
        }
    }

    #[test]
    fn smooth_quartic_curve() {
        // a quartic in P^2: HP = 4t - 2, degree 4
        let r = p2_ring();
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let z = MultiPoly::var(&r, 2);
        let f = x
            .pow(4)
            .unwrap()
            .add(&y.pow(4).unwrap())
            .unwrap()
            .add(&z.pow(4).unwrap())
            .unwrap();
        let i = Ideal::principal(f);
        let d = hilbert(&i, &Limits::default()).unwrap();
        assert_eq!(d.degree, BigInt::from(4));
        assert_eq!(d.dimension, 2);
        assert_eq!(
            d.hilbert_polynomial,
            vec![
                BigRational::from(BigInt::from(-2)),
                BigRational::from(BigInt::from(4))
            ]
        );
    }

    #[test]
    fn point_in_p2() {
        // I = (x, y): HP = 1, degree 1, projective dimension 0
        let r = p2_ring();
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let i = Ideal::new(&r, vec![x, y]).unwrap();
        let d = hilbert(&i, &Limits::default()).unwrap();
        assert_eq!(d.degree, BigInt::from(1));
        assert_eq!(d.projective_dimension(), 0);
        assert_eq!(d.hilbert_polynomial, vec![BigRational::one()]);
    }

    #[test]
    fn non_homogeneous_rejected() {
        let r = p2_ring();
        let x = MultiPoly::var(&r, 0);
        let f = x.pow(2).unwrap().add(&MultiPoly::one(&r)).unwrap();
        let i = Ideal::principal(f);
        assert!(matches!(
            hilbert(&i, &Limits::default()),
            Err(Error::NotHomogeneous(_))
        ));
    }

    #[test]
    fn krull_dimensions() {
        let r = RingCtx::rational(&["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let limits = Limits::default();
        // a curve
        let curve = Ideal::new(&r, vec![y.sub(&x.pow(2).unwrap()).unwrap()]).unwrap();
        assert_eq!(krull_dimension(&curve, &limits).unwrap(), 1);
        // a point
        let point = Ideal::new(&r, vec![x.clone(), y.clone()]).unwrap();
        assert_eq!(krull_dimension(&point, &limits).unwrap(), 0);
        // everything
        let zero = Ideal::zero(&r);
        assert_eq!(krull_dimension(&zero, &limits).unwrap(), 2);
    }

    #[test]
    fn affine_multiplicity_of_fat_point() {
        // (x^2, y) has dim 0 and multiplicity 2
        let r = RingCtx::rational(&["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let i = Ideal::new(&r, vec![x.pow(2).unwrap(), y.clone()]).unwrap();
        let (dim, e) = affine_dim_and_multiplicity(&i, &Limits::default()).unwrap();
        assert_eq!(dim, 0);
        assert_eq!(e, BigInt::from(2));
    }

    #[test]
    fn hypersurface_degree_matches() {
        // degree-d hypersurfaces in P^n: degree = d, projective dim = n-1
        for n in 2..=3usize {
            for d in 1..=4u32 {
                let names: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
                let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                let r = RingCtx::rational(&refs);
                let mut f = MultiPoly::var(&r, 0).pow(d).unwrap();
                for v in 1..=n {
                    f = f.add(&MultiPoly::var(&r, v).pow(d).unwrap()).unwrap();
                }
                let data = hilbert(&Ideal::principal(f), &Limits::default()).unwrap();
                assert_eq!(data.degree, BigInt::from(d));
                assert_eq!(data.projective_dimension(), n as isize - 1);
            }
        }
    }
}
