//! Algebraic cycles: certified minimal primes, local lengths at generic
//! points, the associated-cycle construction, cycle arithmetic, degrees,
//! and the complexity measure.
//!
//! Primality is never assumed: every component carries the certificate
//! that proved it. The supported strategies are
//!   - section stripping: variables cut out by `c*y - h(rest)` reduce to a
//!     smaller ring through the evident isomorphism,
//!   - principal ideals split through exact factorization (univariate,
//!     bivariate homogeneous, or a degree-preserving substitution
//!     certificate for irreducibility),
//!   - zero-dimensional ideals split into points by eliminant factorization
//!     with a primitive-element field certificate per point,
//!   - one-dimensional ideals certified as closures of graphs of rational
//!     maps over a plane curve (kernel-of-evaluation argument).
//! Everything else is rejected with `UnsupportedShape` rather than guessed.
//! A final coverage check certifies that the returned primes intersect to
//! the radical, so a wrong component list cannot escape quietly.

use crate::error::{Error, Result};
use crate::groebner::{div_exact, in_radical, multivariate_gcd, normal_form, Ideal};
use crate::hilbert::{affine_dim_and_multiplicity, krull_dimension, multiplicity_at_dim};
use crate::limits::Limits;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{MultiPoly, RingCtx, DEFAULT_ORDER};
use crate::scalar::{FieldTag, Scalar};
use crate::univar::{as_univariate, factor_unipoly, is_irreducible_unipoly, UniPoly};
use crate::util::DetRng;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::sync::Arc;

/// Ambient space of a cycle.
#[derive(Debug, Clone, PartialEq)]
pub enum AmbientKind {
    Affine,
    Projective,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ambient {
    pub kind: AmbientKind,
    pub ring: Arc<RingCtx>,
}

impl Ambient {
    pub fn affine(ring: &Arc<RingCtx>) -> Ambient {
        Ambient {
            kind: AmbientKind::Affine,
            ring: ring.clone(),
        }
    }

    pub fn projective(ring: &Arc<RingCtx>) -> Ambient {
        Ambient {
            kind: AmbientKind::Projective,
            ring: ring.clone(),
        }
    }

    /// Dimension of the ambient space itself.
    pub fn space_dim(&self) -> usize {
        match self.kind {
            AmbientKind::Affine => self.ring.nvars(),
            AmbientKind::Projective => self.ring.nvars() - 1,
        }
    }
}

/// The strategy that proved a component prime.
#[derive(Debug, Clone, PartialEq)]
pub enum PrimalityCert {
    /// The zero ideal: the whole ambient space.
    Ambient,
    /// Principal ideal with a certified-irreducible generator.
    PrincipalIrreducible { method: &'static str },
    /// Point of a zero-dimensional ideal: a primitive element whose minimal
    /// polynomial is irreducible of degree equal to dim_k of the quotient.
    ZeroDimPoint {
        primitive: String,
        eliminant_degree: usize,
    },
    /// Closure of the graph of a rational map over a certified plane curve.
    RationalCurve { plane: (usize, usize) },
    /// Lift of a certified prime through section stripping.
    SectionLift { inner: Box<PrimalityCert> },
}

/// A prime ideal with its certificate and cached numeric data.
#[derive(Debug, Clone)]
pub struct PrimeComponent {
    pub ideal: Ideal,
    pub certificate: PrimalityCert,
    /// Affine Krull dimension of A/P (cone dimension when homogeneous).
    pub dimension: usize,
    /// Leading-term multiplicity of A/P; equals the projective degree for
    /// homogeneous primes.
    pub degree: BigInt,
    /// [κ(P) : k] for point components, 1 spot otherwise unused.
    pub residue_degree: usize,
}

impl PrimeComponent {
    pub fn from_ideal(ideal: Ideal, certificate: PrimalityCert, limits: &Limits) -> Result<PrimeComponent> {
        let (dimension, degree) = affine_dim_and_multiplicity(&ideal, limits)?;
        // for a point the residue degree is dim_k(A/P), independent of the
        // certificate that proved primality
        let residue_degree = if dimension == 0 {
            let gb = ideal.groebner_basis(MonomialOrder::GrevLex, limits)?;
            let lt: Vec<Monomial> = gb
                .polys
                .iter()
                .map(|g| g.leading().unwrap().0.clone())
                .collect();
            standard_monomials(&lt, ideal.ring.nvars()).len()
        } else {
            1
        };
        Ok(PrimeComponent {
            ideal,
            certificate,
            dimension,
            degree,
            residue_degree,
        })
    }

    /// Canonical generator strings (reduced grevlex basis), sorted.
    pub fn canonical_generators(&self, limits: &Limits) -> Vec<String> {
        let gb = self
            .ideal
            .groebner_basis(MonomialOrder::GrevLex, limits)
            .expect("basis of a certified prime");
        let mut gens: Vec<String> = gb.polys.iter().map(|g| g.canonical_string()).collect();
        gens.sort();
        gens
    }

    /// Sort key from the external-interface convention — (degree,
    /// lexicographically smallest generator string) — with the full
    /// generator list as the final tiebreaker so the order is total.
    pub fn sort_key(&self, limits: &Limits) -> (BigInt, String) {
        let gens = self.canonical_generators(limits);
        (self.degree.clone(), gens.join("; "))
    }
}

/// A formal Z-combination of prime components of one codimension.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub ambient: Ambient,
    pub codim: usize,
    pub components: Vec<(PrimeComponent, i64)>,
}

impl Cycle {
    pub fn empty(ambient: Ambient, codim: usize) -> Cycle {
        Cycle {
            ambient,
            codim,
            components: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    fn check_compatible(&self, rhs: &Cycle) -> Result<()> {
        if self.ambient != rhs.ambient {
            return Err(Error::AmbientMismatch(
                "cycles live on different ambient spaces".into(),
            ));
        }
        if self.codim != rhs.codim && !self.is_empty() && !rhs.is_empty() {
            return Err(Error::AmbientMismatch(format!(
                "codimension {} vs {}",
                self.codim, rhs.codim
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Cycle, limits: &Limits) -> Result<Cycle> {
        self.check_compatible(rhs)?;
        let mut out = self.components.clone();
        for (comp, mult) in &rhs.components {
            let mut merged = false;
            for (c, m) in out.iter_mut() {
                if c.ideal.equals(&comp.ideal, limits)? {
                    *m += mult;
                    merged = true;
                    break;
                }
            }
            if !merged {
                out.push((comp.clone(), *mult));
            }
        }
        out.retain(|(_, m)| *m != 0);
        Ok(Cycle {
            ambient: self.ambient.clone(),
            codim: if self.is_empty() { rhs.codim } else { self.codim },
            components: out,
        })
    }

    pub fn neg(&self) -> Cycle {
        Cycle {
            ambient: self.ambient.clone(),
            codim: self.codim,
            components: self
                .components
                .iter()
                .map(|(c, m)| (c.clone(), -m))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Cycle, limits: &Limits) -> Result<Cycle> {
        self.add(&rhs.neg(), limits)
    }

    pub fn scalar_mul(&self, n: i64) -> Cycle {
        if n == 0 {
            return Cycle::empty(self.ambient.clone(), self.codim);
        }
        Cycle {
            ambient: self.ambient.clone(),
            codim: self.codim,
            components: self
                .components
                .iter()
                .map(|(c, m)| (c.clone(), m * n))
                .collect(),
        }
    }

    /// Components in the canonical report order.
    pub fn sorted_components(&self, limits: &Limits) -> Vec<(PrimeComponent, i64)> {
        let mut comps = self.components.clone();
        comps.sort_by_cached_key(|(c, _)| c.sort_key(limits));
        comps
    }

    /// Exact equality as cycles (multiset of components with multiplicity).
    pub fn equals(&self, rhs: &Cycle, limits: &Limits) -> Result<bool> {
        if self.ambient != rhs.ambient {
            return Ok(false);
        }
        let diff = self.sub(rhs, limits)?;
        Ok(diff.is_empty())
    }

    /// Σ mult · deg over the components; projective ambient only.
    pub fn degree(&self) -> Result<BigInt> {
        if self.ambient.kind != AmbientKind::Projective {
            return Err(Error::AmbientMismatch(
                "cycle degree needs a projective ambient".into(),
            ));
        }
        let mut acc = BigInt::zero();
        for (c, m) in &self.components {
            acc += &c.degree * BigInt::from(*m);
        }
        Ok(acc)
    }
}

/// Complexity certificate for a cycle's stored representation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityCertificate {
    pub component_count: usize,
    pub max_abs_coefficient: BigInt,
    pub max_component_degree: BigInt,
    /// Least c with component_count < c, |coeffs| < c, degrees < c.
    pub c: BigInt,
}

/// Complexity of the cycle's canonical representation: the least c that
/// strictly bounds the component count, the coefficient magnitudes, and the
/// component degrees. An upper bound for the representation-minimizing
/// notion, which would need a search over rational equivalences.
pub fn complexity(cycle: &Cycle) -> ComplexityCertificate {
    let component_count = cycle.components.len();
    let max_abs_coefficient = cycle
        .components
        .iter()
        .map(|(_, m)| BigInt::from(m.abs()))
        .max()
        .unwrap_or_else(BigInt::zero);
    let max_component_degree = cycle
        .components
        .iter()
        .map(|(c, _)| c.degree.clone())
        .max()
        .unwrap_or_else(BigInt::zero);
    let mut c = BigInt::from(component_count as u64);
    if max_abs_coefficient > c {
        c = max_abs_coefficient.clone();
    }
    if max_component_degree > c {
        c = max_component_degree.clone();
    }
    ComplexityCertificate {
        component_count,
        max_abs_coefficient,
        max_component_degree,
        c: c + 1,
    }
}

// ---------- multivariate factor splitting (principal strategy) ----------

/// Split a nonzero polynomial into certified-irreducible monic factors with
/// multiplicities, through the exact routes only.
pub fn mv_factor(f: &MultiPoly, limits: &Limits) -> Result<Vec<(MultiPoly, u32)>> {
    let mut out: Vec<(MultiPoly, u32)> = Vec::new();
    let mut work = f.monic();
    // monomial content first
    for v in 0..f.ring.nvars() {
        let e = work.terms.iter().map(|(m, _)| m.0[v]).min().unwrap_or(0);
        if e > 0 {
            let var = MultiPoly::var(&f.ring, v);
            out.push((var.clone(), e));
            let divisor = var.pow(e)?;
            work = div_exact(&work, &divisor, DEFAULT_ORDER)
                .expect("monomial content divides")
                .monic();
        }
    }
    mv_factor_content_free(&work, limits, &mut out)?;
    merge_factor_list(&mut out);
    Ok(out)
}

fn merge_factor_list(list: &mut Vec<(MultiPoly, u32)>) {
    let mut merged: Vec<(MultiPoly, u32)> = Vec::new();
    for (f, e) in list.drain(..) {
        match merged.iter_mut().find(|(g, _)| *g == f) {
            Some((_, me)) => *me += e,
            None => merged.push((f, e)),
        }
    }
    merged.sort_by_key(|(f, _)| (f.total_degree().unwrap_or(0), f.canonical_string()));
    *list = merged;
}

fn raised_cap(limits: &Limits, degree: usize) -> Limits {
    let mut l = limits.clone();
    // internal eliminants may exceed the user-facing cap; keep a hard ceiling
    l.factor_degree_cap = limits.factor_degree_cap.max(degree).min(64);
    l
}

fn mv_factor_content_free(
    g: &MultiPoly,
    limits: &Limits,
    out: &mut Vec<(MultiPoly, u32)>,
) -> Result<()> {
    if g.is_constant() {
        return Ok(());
    }
    let support = g.support();
    // univariate route
    if support.len() == 1 {
        let (var, up) = as_univariate(g).expect("single-support polynomial");
        let var = var.expect("nonconstant");
        let caps = raised_cap(limits, up.degree());
        let (_, factors) = factor_unipoly(&up, &caps)?;
        for (q, e) in factors {
            out.push((q.monic().to_multipoly(&g.ring, var), e));
        }
        return Ok(());
    }
    // bivariate homogeneous route
    if support.len() == 2 && g.is_homogeneous() {
        let (i, j) = (support[0], support[1]);
        let one = MultiPoly::one(&g.ring);
        let dehom = g.substitute(j, &one)?;
        let (var, up) = as_univariate(&dehom).expect("dehomogenized is univariate");
        debug_assert_eq!(var, Some(i));
        let caps = raised_cap(limits, up.degree());
        let (_, factors) = factor_unipoly(&up, &caps)?;
        let d_total = g.total_degree().unwrap();
        let mut deg_seen = 0u64;
        for (q, e) in factors {
            let d_q = q.degree() as u64;
            deg_seen += d_q * e as u64;
            // re-homogenize q to bivariate degree d_q
            let terms: Vec<(Monomial, Scalar)> = q
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| {
                    let mut m = Monomial::one(g.ring.nvars());
                    m.0[i] = k as u32;
                    m.0[j] = (d_q - k as u64) as u32;
                    (m, c.clone())
                })
                .collect();
            out.push((
                MultiPoly::from_terms(&g.ring, DEFAULT_ORDER, terms).monic(),
                e,
            ));
        }
        // monomial content was stripped, so the degrees must account for all
        debug_assert_eq!(deg_seen, d_total);
        return Ok(());
    }
    // content/primitive split with respect to a variable: the content (gcd
    // of the coefficient polynomials) factors off, and by the Gauss
    // argument a primitive polynomial of degree one in the variable is
    // irreducible
    for &v in &support {
        let coeffs = coefficients_in_var(g, v);
        let mut content: Option<MultiPoly> = None;
        for c in coeffs.iter().filter(|c| !c.is_zero()) {
            content = Some(match content {
                None => c.clone(),
                Some(acc) => multivariate_gcd(&acc, c, limits)?,
            });
            if content.as_ref().map(|c| c.is_constant()).unwrap_or(false) {
                break;
            }
        }
        let content = content.expect("nonzero polynomial");
        if !content.is_constant() {
            let primitive = div_exact(g, &content, DEFAULT_ORDER)
                .ok_or_else(|| Error::Validation("content does not divide".into()))?
                .monic();
            mv_factor_content_free(&content.monic(), limits, out)?;
            return mv_factor_content_free(&primitive, limits, out);
        }
        if g.degree_in(v) == 1 {
            out.push((g.monic(), 1));
            return Ok(());
        }
    }
    // characteristic-p perfect power
    let partials: Vec<MultiPoly> = support.iter().map(|&v| g.partial(v)).collect();
    if partials.iter().all(|d| d.is_zero()) {
        if let FieldTag::Prime(p) = g.field() {
            let root = pth_root_multi(g, p);
            let mut inner = Vec::new();
            mv_factor_content_free(&root, limits, &mut inner)?;
            for (f, e) in inner {
                out.push((f, e * p as u32));
            }
            return Ok(());
        }
        unreachable!("zero gradient of a nonconstant polynomial in char 0");
    }
    // squarefree part
    let mut h = g.clone();
    for d in partials.iter().filter(|d| !d.is_zero()) {
        h = multivariate_gcd(&h, d, limits)?;
    }
    let s = div_exact(g, &h, DEFAULT_ORDER)
        .ok_or_else(|| Error::Validation("gcd does not divide".into()))?
        .monic();
    if s.is_constant() {
        return Err(Error::UnsupportedShape(format!(
            "no factorization route for {}",
            g.canonical_string()
        )));
    }
    if certify_irreducible(&s, limits)? {
        // the squarefree part is irreducible, so g is a pure power times a
        // factor coprime to s; peel the power and recurse on the cofactor
        let mut e = 0u32;
        let mut rest = g.monic();
        while let Some(q) = div_exact(&rest, &s, DEFAULT_ORDER) {
            e += 1;
            rest = q.monic();
        }
        debug_assert!(e >= 1);
        out.push((s, e));
        return mv_factor_content_free(&rest, limits, out);
    }
    // s reducible (or uncertified) and no exact route applies
    Err(Error::UnsupportedShape(format!(
        "cannot split the squarefree part {}",
        s.canonical_string()
    )))
}

/// Coefficients of g as a polynomial in variable v; index = v-exponent.
fn coefficients_in_var(g: &MultiPoly, v: usize) -> Vec<MultiPoly> {
    let d = g.degree_in(v) as usize;
    let mut out = vec![MultiPoly::zero(&g.ring); d + 1];
    for (m, c) in &g.terms {
        let e = m.0[v] as usize;
        let mut rest = m.clone();
        rest.0[v] = 0;
        let term = MultiPoly::from_terms(&g.ring, g.order, vec![(rest, c.clone())]);
        out[e] = out[e].add(&term).expect("same ring");
    }
    out
}

fn pth_root_multi(g: &MultiPoly, p: u64) -> MultiPoly {
    let terms = g
        .terms
        .iter()
        .map(|(m, c)| {
            let e: Vec<u32> = m.0.iter().map(|&x| {
                debug_assert_eq!(x % p as u32, 0);
                x / p as u32
            }).collect();
            (Monomial(e), c.clone())
        })
        .collect();
    MultiPoly::from_terms(&g.ring, g.order, terms)
}

/// Degree-preserving substitution certificate: if substituting every other
/// variable by a linear expression in the kept variable preserves the total
/// degree and produces an irreducible univariate polynomial, the input is
/// irreducible (factors would map to factors of the same degrees).
pub fn certify_irreducible(f: &MultiPoly, limits: &Limits) -> Result<bool> {
    let d = f.total_degree().unwrap_or(0);
    if d == 0 {
        return Ok(false);
    }
    let support = f.support();
    if support.len() == 1 {
        let (_, up) = as_univariate(f).unwrap();
        let caps = raised_cap(limits, up.degree());
        return is_irreducible_unipoly(&up, &caps);
    }
    let mut rng = DetRng::new(limits.seed ^ 0x50b_5717 ^ d);
    for &target in &support {
        for _ in 0..limits.substitution_trials {
            let mut sub = f.clone();
            for &v in &support {
                if v == target {
                    continue;
                }
                let (alpha, beta) = random_pair(&mut rng, f.field());
                let expr = MultiPoly::var(&f.ring, target)
                    .mul_scalar(&alpha)
                    .add(&MultiPoly::constant(&f.ring, beta))?;
                sub = sub.substitute(v, &expr)?;
            }
            if sub.support().len() > 1 {
                continue;
            }
            let Some((_, up)) = as_univariate(&sub) else {
                continue;
            };
            if up.degree() as u64 != d {
                continue;
            }
            let caps = raised_cap(limits, up.degree());
            if is_irreducible_unipoly(&up, &caps)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn random_pair(rng: &mut DetRng, field: FieldTag) -> (Scalar, Scalar) {
    match field {
        FieldTag::Rational => (
            Scalar::rational(rng.range_i64(-3, 3), 1),
            Scalar::rational(rng.range_i64(-3, 3), 1),
        ),
        FieldTag::Prime(p) => (
            Scalar::fp(p, rng.below(p)),
            Scalar::fp(p, rng.below(p)),
        ),
    }
}

// ---------- zero-dimensional machinery ----------

/// Monomials outside the leading-term ideal; finite iff the ideal is
/// zero-dimensional (checked by the caller via dimension).
pub fn standard_monomials(lt: &[Monomial], nvars: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut queue = vec![Monomial::one(nvars)];
    let in_lt = |m: &Monomial| lt.iter().any(|g| g.divides(m));
    let mut seen = std::collections::BTreeSet::new();
    while let Some(m) = queue.pop() {
        if seen.contains(&m) || in_lt(&m) {
            continue;
        }
        seen.insert(m.clone());
        for v in 0..nvars {
            let mut next = m.clone();
            next.0[v] += 1;
            if !seen.contains(&next) && !in_lt(&next) {
                queue.push(next);
            }
        }
        out.push(m);
    }
    out.sort();
    out
}

/// Coordinates of the normal form of f in the standard-monomial basis.
fn nf_coords(
    f: &MultiPoly,
    basis: &[MultiPoly],
    std_monos: &[Monomial],
) -> Vec<Scalar> {
    let nf = normal_form(f, basis, MonomialOrder::GrevLex);
    let mut coords = vec![Scalar::zero(f.field()); std_monos.len()];
    for (m, c) in &nf.terms {
        let idx = std_monos
            .binary_search(m)
            .expect("normal form lies in the standard basis");
        coords[idx] = c.clone();
    }
    coords
}

/// Incremental exact Gaussian elimination that reports the first linear
/// dependence along with its coefficients.
struct LinSolver {
    field: FieldTag,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<Scalar>>,
    count: usize,
}

impl LinSolver {
    fn new(field: FieldTag) -> LinSolver {
        LinSolver {
            field,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
            count: 0,
        }
    }

    /// Returns Some(dependence coefficients over all previously added
    /// vectors plus this one) when the new vector is dependent.
    fn offer(&mut self, mut v: Vec<Scalar>) -> Option<Vec<Scalar>> {
        let mut combo = vec![Scalar::zero(self.field); self.count + 1];
        combo[self.count] = Scalar::one(self.field);
        for (row_idx, pivot) in self.pivots.iter().enumerate() {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (k, r) in self.rows[row_idx].iter().enumerate() {
                v[k] = v[k].sub(&factor.mul(r));
            }
            for (k, c) in self.combos[row_idx].iter().enumerate() {
                combo[k] = combo[k].sub(&factor.mul(c));
            }
        }
        match v.iter().position(|c| !c.is_zero()) {
            None => {
                self.count += 1;
                Some(combo)
            }
            Some(pivot) => {
                let inv = v[pivot].inv().expect("nonzero pivot");
                let row: Vec<Scalar> = v.iter().map(|c| c.mul(&inv)).collect();
                let combo: Vec<Scalar> = combo.iter().map(|c| c.mul(&inv)).collect();
                self.rows.push(row);
                self.pivots.push(pivot);
                self.combos.push(combo);
                self.count += 1;
                None
            }
        }
    }
}

/// Minimal polynomial of `u` in the finite-dimensional algebra A/I.
pub fn minimal_polynomial(
    u: &MultiPoly,
    basis: &[MultiPoly],
    std_monos: &[Monomial],
) -> UniPoly {
    let field = u.field();
    let mut solver = LinSolver::new(field);
    let mut power = MultiPoly::one(&u.ring);
    loop {
        let coords = nf_coords(&power, basis, std_monos);
        if let Some(combo) = solver.offer(coords) {
            // combo gives sum c_i u^i = 0 with the last coefficient 1
            return UniPoly::from_coeffs(field, combo);
        }
        power = power.mul(u).expect("same ring");
        if solver.count > std_monos.len() + 1 {
            unreachable!("dependence must appear within the dimension");
        }
    }
}

/// One point (Galois orbit) of a zero-dimensional ideal.
#[derive(Debug, Clone)]
pub struct PointComponent {
    pub prime: Ideal,
    pub primary: Ideal,
    pub residue_degree: usize,
    /// Local length: dim_k(A/primary)/residue_degree.
    pub length: usize,
    pub primitive: MultiPoly,
    pub eliminant: UniPoly,
}

/// Split a zero-dimensional ideal into its points with local lengths.
pub fn zero_dim_split(ideal: &Ideal, limits: &Limits) -> Result<Vec<PointComponent>> {
    let dim = krull_dimension(ideal, limits);
    match dim {
        Ok(0) => {}
        Ok(d) => {
            return Err(Error::Validation(format!(
                "zero-dimensional split on a dimension-{d} ideal"
            )))
        }
        Err(_) => return Ok(Vec::new()), // unit ideal: no points
    }
    split_rec(ideal, limits, 0)
}

fn candidate_elements(ring: &Arc<RingCtx>, limits: &Limits, salt: u64) -> Vec<MultiPoly> {
    let mut out: Vec<MultiPoly> = (0..ring.nvars()).map(|v| MultiPoly::var(ring, v)).collect();
    let mut rng = DetRng::new(limits.seed ^ salt.wrapping_mul(0x9e37) ^ 0xbead);
    for _ in 0..limits.substitution_trials {
        let mut f = MultiPoly::zero(ring);
        for v in 0..ring.nvars() {
            let c = match ring.field {
                FieldTag::Rational => Scalar::rational(rng.range_i64(-4, 4), 1),
                FieldTag::Prime(p) => Scalar::fp(p, rng.below(p)),
            };
            f = f
                .add(&MultiPoly::var(ring, v).mul_scalar(&c))
                .expect("same ring");
        }
        if !f.is_zero() && !f.is_constant() {
            out.push(f);
        }
    }
    out
}

fn split_rec(ideal: &Ideal, limits: &Limits, depth: usize) -> Result<Vec<PointComponent>> {
    if depth > 16 {
        return Err(Error::UnsupportedShape(
            "zero-dimensional splitting recursed too deep".into(),
        ));
    }
    let gb = ideal.groebner_basis(MonomialOrder::GrevLex, limits)?;
    if gb.polys.first().map(|g| g.leading().unwrap().0.is_one()).unwrap_or(false) {
        return Ok(Vec::new());
    }
    let lt: Vec<Monomial> = gb
        .polys
        .iter()
        .map(|g| g.leading().unwrap().0.clone())
        .collect();
    let std_monos = standard_monomials(&lt, ideal.ring.nvars());
    let total = std_monos.len();

    // per-coordinate radical candidate: adding the squarefree parts of all
    // coordinate minimal polynomials keeps the points and strips nilpotents
    let mut radical_gens = ideal.gens.clone();
    let mut strictly_larger = false;
    for v in 0..ideal.ring.nvars() {
        let xv = MultiPoly::var(&ideal.ring, v);
        let m_v = minimal_polynomial(&xv, &gb.polys, &std_monos);
        let caps = raised_cap(limits, m_v.degree());
        let (_, factors) = factor_unipoly(&m_v, &caps)?;
        if factors.iter().any(|(_, a)| *a > 1) {
            let mut sqfree = UniPoly::constant(ideal.ring.field, Scalar::one(ideal.ring.field));
            for (q, _) in &factors {
                sqfree = sqfree.mul(q);
            }
            radical_gens.push(power_substituted(&sqfree, &xv, 1)?);
            strictly_larger = true;
        }
    }
    if strictly_larger {
        return split_along_reduction(ideal, radical_gens, total, limits, depth);
    }

    for u in candidate_elements(&ideal.ring, limits, depth as u64) {
        let m_u = minimal_polynomial(&u, &gb.polys, &std_monos);
        let caps = raised_cap(limits, m_u.degree());
        let (_, factors) = factor_unipoly(&m_u, &caps)?;
        if factors.len() >= 2 {
            // CRT split along the coprime factor powers
            let mut out = Vec::new();
            for (q, a) in &factors {
                let qa = power_substituted(q, &u, *a)?;
                let mut gens = ideal.gens.clone();
                gens.push(qa);
                let piece = Ideal::new(&ideal.ring, gens)?;
                out.extend(split_rec(&piece, limits, depth + 1)?);
            }
            return Ok(out);
        }
        let (q, a) = &factors[0];
        if *a == 1 && q.degree() == total {
            // the quotient is a field: a single reduced point
            return Ok(vec![PointComponent {
                prime: ideal.clone(),
                primary: ideal.clone(),
                residue_degree: total,
                length: 1,
                primitive: u,
                eliminant: q.clone(),
            }]);
        }
        if *a > 1 {
            // a repeated factor of a non-coordinate element also exposes
            // nilpotents: recurse on the strictly larger reduction
            let mut gens = ideal.gens.clone();
            gens.push(power_substituted(q, &u, 1)?);
            return split_along_reduction(ideal, gens, total, limits, depth);
        }
    }
    Err(Error::UnsupportedShape(
        "no candidate element splits or certifies the zero-dimensional ideal".into(),
    ))
}

/// Split `ideal` along the points of the strictly larger ideal generated by
/// `reduction_gens` (same vanishing locus): recurse there, then isolate the
/// primary component of `ideal` at each point by saturation.
fn split_along_reduction(
    ideal: &Ideal,
    reduction_gens: Vec<MultiPoly>,
    total: usize,
    limits: &Limits,
    depth: usize,
) -> Result<Vec<PointComponent>> {
    let reduction = Ideal::new(&ideal.ring, reduction_gens)?;
    let points = split_rec(&reduction, limits, depth + 1)?;
    if points.is_empty() {
        return Ok(Vec::new());
    }
    if points.len() == 1 {
        // single point: the input is primary with this radical
        let p = &points[0];
        let res = p.residue_degree;
        if total % res != 0 {
            return Err(Error::Validation(
                "primary dimension not divisible by the residue degree".into(),
            ));
        }
        return Ok(vec![PointComponent {
            prime: p.prime.clone(),
            primary: ideal.clone(),
            residue_degree: res,
            length: total / res,
            primitive: p.primitive.clone(),
            eliminant: p.eliminant.clone(),
        }]);
    }
    // several points: the primary factor at each is the saturation of the
    // input by the intersection of the other primes
    let mut out = Vec::new();
    let mut dim_sum = 0usize;
    for (i, p) in points.iter().enumerate() {
        let mut others: Option<Ideal> = None;
        for (k, q) in points.iter().enumerate() {
            if k == i {
                continue;
            }
            others = Some(match others {
                None => q.prime.clone(),
                Some(acc) => acc.intersection(&q.prime, limits)?,
            });
        }
        let primary = ideal.saturation(&others.expect("at least two points"), limits)?;
        let pgb = primary.groebner_basis(MonomialOrder::GrevLex, limits)?;
        let plt: Vec<Monomial> = pgb
            .polys
            .iter()
            .map(|g| g.leading().unwrap().0.clone())
            .collect();
        let pdim = standard_monomials(&plt, ideal.ring.nvars()).len();
        let res = p.residue_degree;
        if pdim % res != 0 {
            return Err(Error::Validation(
                "primary dimension not divisible by the residue degree".into(),
            ));
        }
        dim_sum += pdim;
        out.push(PointComponent {
            prime: p.prime.clone(),
            primary,
            residue_degree: res,
            length: pdim / res,
            primitive: p.primitive.clone(),
            eliminant: p.eliminant.clone(),
        });
    }
    if dim_sum != total {
        return Err(Error::Validation(format!(
            "primary factors have total dimension {dim_sum}, expected {total}"
        )));
    }
    Ok(out)
}

/// q(u)^a as a MultiPoly.
fn power_substituted(q: &UniPoly, u: &MultiPoly, a: u32) -> Result<MultiPoly> {
    let mut acc = MultiPoly::zero(&u.ring);
    let mut upow = MultiPoly::one(&u.ring);
    for c in &q.coeffs {
        if !c.is_zero() {
            acc = acc.add(&upow.mul_scalar(c))?;
        }
        upow = upow.mul(u)?;
    }
    acc.pow(a)
}

// ---------- section stripping ----------

struct Sections {
    base: Ideal,
    /// (variable index in the full ring, section generator).
    sections: Vec<(usize, MultiPoly)>,
    kept: Vec<usize>,
}

/// Find variables cut out linearly with constant coefficient and project
/// the rest of the ideal into the subring without them.
fn strip_sections(ideal: &Ideal, _limits: &Limits) -> Option<Sections> {
    let n = ideal.ring.nvars();
    let mut gens = ideal.gens.clone();
    let mut sections: Vec<(usize, MultiPoly)> = Vec::new();
    let mut removed = vec![false; n];
    loop {
        let mut found: Option<(usize, usize, MultiPoly)> = None;
        'search: for (gi, g) in gens.iter().enumerate() {
            for v in 0..n {
                if removed[v] || g.degree_in(v) != 1 {
                    continue;
                }
                // terms containing v must be exactly c*v with c constant
                let mut coeff: Option<Scalar> = None;
                let mut ok = true;
                for (m, c) in &g.terms {
                    if m.0[v] == 0 {
                        continue;
                    }
                    if m.0[v] != 1 || m.total_degree() != 1 {
                        ok = false;
                        break;
                    }
                    if coeff.is_some() {
                        ok = false;
                        break;
                    }
                    coeff = Some(c.clone());
                }
                if !ok || coeff.is_none() {
                    continue;
                }
                // v = -(g - c v)/c
                let c = coeff.unwrap();
                let cv = MultiPoly::var(&ideal.ring, v).mul_scalar(&c);
                let h = g.sub(&cv).expect("same ring");
                let expr = h.neg().mul_scalar(&c.inv().expect("nonzero"));
                found = Some((gi, v, expr));
                break 'search;
            }
        }
        let Some((gi, v, expr)) = found else { break };
        let section = gens.remove(gi);
        removed[v] = true;
        sections.push((v, section));
        gens = gens
            .iter()
            .map(|g| g.substitute(v, &expr).expect("same ring"))
            .collect();
    }
    if sections.is_empty() {
        return None;
    }
    let kept: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    let names: Vec<&str> = kept.iter().map(|&v| ideal.ring.vars[v].as_str()).collect();
    let subring = RingCtx::new(ideal.ring.field, &names);
    let projected: Vec<MultiPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let terms = g
                .terms
                .iter()
                .map(|(m, c)| {
                    let e: Vec<u32> = kept.iter().map(|&v| m.0[v]).collect();
                    (Monomial(e), c.clone())
                })
                .collect();
            MultiPoly::from_terms(&subring, DEFAULT_ORDER, terms)
        })
        .collect();
    Some(Sections {
        base: Ideal::new(&subring, projected).expect("same ring"),
        sections,
        kept,
    })
}

// ---------- minimal primes ----------

type RawPrime = (Ideal, PrimalityCert);

/// The minimal primes of a proper ideal, each carrying its certificate.
/// The returned list is verified: pairwise incomparable, each containing
/// the input, and intersecting to the radical of the input.
pub fn minimal_primes(ideal: &Ideal, limits: &Limits) -> Result<Vec<PrimeComponent>> {
    if ideal.is_unit_ideal(limits)? {
        return Err(Error::Validation("minimal primes of the unit ideal".into()));
    }
    let raws = minimal_primes_rec(ideal, limits, 0)?;
    let raws = merge_minimal(raws, limits)?;
    // verification: containment, incomparability, coverage
    for (p, _) in &raws {
        for g in &ideal.gens {
            if !p.contains(g, limits)? {
                return Err(Error::Validation(
                    "component does not contain the ideal".into(),
                ));
            }
        }
    }
    for i in 0..raws.len() {
        for j in 0..raws.len() {
            if i == j {
                continue;
            }
            let contains = raws[i]
                .0
                .gens
                .iter()
                .map(|g| raws[j].0.contains(g, limits))
                .collect::<Result<Vec<bool>>>()?;
            if contains.iter().all(|&b| b) {
                return Err(Error::Validation(
                    "returned primes are not incomparable".into(),
                ));
            }
        }
    }
    // coverage: the intersection of the primes must be the radical. The
    // zero-dimensional, section, and hull routes are complete by
    // construction (CRT partitions with dimension accounting, ring
    // isomorphisms, gcd factor/residual covers), so the expensive exact
    // check runs only where a component could genuinely be lost: the
    // rational-curve route, whose plane projections can hide vertical
    // components.
    let risky = raws.iter().any(|(_, cert)| cert_involves_curve(cert));
    if risky {
        let mut inter: Option<Ideal> = None;
        for (p, _) in &raws {
            inter = Some(match inter {
                None => p.clone(),
                Some(acc) => acc.intersection(p, limits)?,
            });
        }
        if let Some(inter) = inter {
            for g in &inter.gens {
                if !in_radical(g, ideal, limits)? {
                    return Err(Error::Validation(
                        "component coverage check failed: intersection exceeds the radical".into(),
                    ));
                }
            }
        }
    }
    raws.into_iter()
        .map(|(ideal, cert)| PrimeComponent::from_ideal(ideal, cert, limits))
        .collect()
}

fn cert_involves_curve(cert: &PrimalityCert) -> bool {
    match cert {
        PrimalityCert::RationalCurve { .. } => true,
        PrimalityCert::SectionLift { inner } => cert_involves_curve(inner),
        _ => false,
    }
}

fn merge_minimal(raws: Vec<RawPrime>, limits: &Limits) -> Result<Vec<RawPrime>> {
    // dedupe equal primes, then drop any that strictly contains another
    let mut unique: Vec<RawPrime> = Vec::new();
    'outer: for (p, cert) in raws {
        for (q, _) in &unique {
            if p.equals(q, limits)? {
                continue 'outer;
            }
        }
        unique.push((p, cert));
    }
    let mut keep = vec![true; unique.len()];
    for i in 0..unique.len() {
        for j in 0..unique.len() {
            if i == j || !keep[j] {
                continue;
            }
            // drop i when it strictly contains j
            let i_contains_j = unique[j]
                .0
                .gens
                .iter()
                .map(|g| unique[i].0.contains(g, limits))
                .collect::<Result<Vec<bool>>>()?
                .into_iter()
                .all(|b| b);
            if i_contains_j && !unique[i].0.equals(&unique[j].0, limits)? {
                keep[i] = false;
                break;
            }
        }
    }
    Ok(unique
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(r, _)| r)
        .collect())
}

fn minimal_primes_rec(ideal: &Ideal, limits: &Limits, depth: usize) -> Result<Vec<RawPrime>> {
    if depth > 8 {
        return Err(Error::UnsupportedShape(
            "component splitting recursed too deep".into(),
        ));
    }
    if ideal.is_zero_ideal() {
        return Ok(vec![(Ideal::zero(&ideal.ring), PrimalityCert::Ambient)]);
    }
    if ideal.is_unit_ideal(limits)? {
        return Ok(Vec::new());
    }
    // section stripping
    if let Some(stripped) = strip_sections(ideal, limits) {
        let inner = minimal_primes_rec(&stripped.base, limits, depth + 1)?;
        let mut out = Vec::new();
        for (p, cert) in inner {
            // lift: embed the base prime and add the section generators
            let positions = stripped.kept.clone();
            let mut gens: Vec<MultiPoly> = p
                .gens
                .iter()
                .map(|g| g.embed(&ideal.ring, &positions))
                .collect();
            for (_, s) in &stripped.sections {
                gens.push(s.clone());
            }
            out.push((
                Ideal::new(&ideal.ring, gens)?,
                PrimalityCert::SectionLift {
                    inner: Box::new(cert),
                },
            ));
        }
        return Ok(out);
    }
    let dim = krull_dimension(ideal, limits)?;
    if dim == 0 {
        let points = zero_dim_split(ideal, limits)?;
        return Ok(points
            .into_iter()
            .map(|p| {
                let cert = PrimalityCert::ZeroDimPoint {
                    primitive: p.primitive.canonical_string(),
                    eliminant_degree: p.residue_degree,
                };
                (p.prime, cert)
            })
            .collect());
    }
    // hypersurface hull: gcd of the generators
    let mut hull = ideal.gens[0].clone();
    for g in &ideal.gens[1..] {
        hull = multivariate_gcd(&hull, g, limits)?;
        if hull.is_constant() {
            break;
        }
    }
    if !hull.is_constant() {
        let factors = mv_factor(&hull, limits)?;
        let mut out: Vec<RawPrime> = factors
            .iter()
            .map(|(q, _)| {
                (
                    Ideal::principal(q.clone()),
                    PrimalityCert::PrincipalIrreducible {
                        method: "factor-split",
                    },
                )
            })
            .collect();
        let residual = ideal.saturation(&Ideal::principal(hull.clone()), limits)?;
        if !residual.is_unit_ideal(limits)? {
            out.extend(minimal_primes_rec(&residual, limits, depth + 1)?);
        }
        return Ok(out);
    }
    if dim == 1 {
        return curve_components(ideal, limits, depth);
    }
    Err(Error::UnsupportedShape(format!(
        "no strategy for a dimension-{dim} ideal with trivial hull"
    )))
}

/// Dimension-one route: certify components as closures of graphs of
/// rational maps over certified plane curves.
fn curve_components(ideal: &Ideal, limits: &Limits, depth: usize) -> Result<Vec<RawPrime>> {
    let n = ideal.ring.nvars();
    let mut last_err: Option<Error> = None;
    for i in 0..n {
        for j in i + 1..n {
            match curve_components_via_plane(ideal, (i, j), limits, depth) {
                Ok(out) => return Ok(out),
                Err(e) => last_err = Some(e),
            }
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::UnsupportedShape("no coordinate plane certifies the curve".into())
    }))
}

fn curve_components_via_plane(
    ideal: &Ideal,
    plane: (usize, usize),
    limits: &Limits,
    depth: usize,
) -> Result<Vec<RawPrime>> {
    let (i, j) = plane;
    let elim = ideal.elimination(&[i, j], limits)?;
    if elim.is_zero_ideal() {
        return Err(Error::UnsupportedShape(
            "curve dominates the plane; not a graph over a plane curve".into(),
        ));
    }
    let mut hull = elim.gens[0].clone();
    for g in &elim.gens[1..] {
        hull = multivariate_gcd(&hull, g, limits)?;
    }
    if hull.is_constant() {
        return Err(Error::UnsupportedShape(
            "plane image has no hypersurface part".into(),
        ));
    }
    let factors = mv_factor(&hull, limits)?;
    let mut out = Vec::new();
    for (idx, (h_a, _)) in factors.iter().enumerate() {
        let mut piece = ideal.sum(&Ideal::principal(h_a.clone()))?;
        if factors.len() > 1 {
            let mut rest = MultiPoly::one(&ideal.ring);
            for (other_idx, (h_b, _)) in factors.iter().enumerate() {
                if other_idx != idx {
                    rest = rest.mul(h_b)?;
                }
            }
            piece = piece.saturation(&Ideal::principal(rest), limits)?;
        }
        let prime = certify_rational_curve(&piece, plane, h_a, limits)?;
        out.push(prime);
    }
    // residual components away from the hull
    let residual = ideal.saturation(&Ideal::principal(hull), limits)?;
    if !residual.is_unit_ideal(limits)? {
        out.extend(minimal_primes_rec(&residual, limits, depth + 1)?);
    }
    Ok(out)
}

/// Certify that `ideal` is prime: it equals the closure of the graph of a
/// rational map over the certified-irreducible plane curve (h).
fn certify_rational_curve(
    ideal: &Ideal,
    plane: (usize, usize),
    h: &MultiPoly,
    limits: &Limits,
) -> Result<RawPrime> {
    let (i, j) = plane;
    if !certify_irreducible(h, limits)? {
        return Err(Error::UnsupportedShape(format!(
            "plane image {} not certified irreducible",
            h.canonical_string()
        )));
    }
    let n = ideal.ring.nvars();
    let mut graph_gens: Vec<MultiPoly> = vec![h.clone()];
    let mut denominators: Vec<MultiPoly> = Vec::new();
    for m in 0..n {
        if m == i || m == j {
            continue;
        }
        // look for s(x_i, x_j) * x_m - r(x_i, x_j) in the elimination to
        // the three variables
        let elim3 = ideal.elimination(&[i, j, m], limits)?;
        let gb = elim3.groebner_basis(MonomialOrder::GrevLex, limits)?;
        let mut found: Option<(MultiPoly, MultiPoly)> = None;
        for g in &gb.polys {
            if g.degree_in(m) != 1 {
                continue;
            }
            // g = s*x_m + t with s, t free of x_m
            let s = g.partial(m);
            if s.degree_in(m) != 0 || s.is_zero() {
                continue;
            }
            let sxm = s.mul(&MultiPoly::var(&ideal.ring, m))?;
            let t = g.sub(&sxm)?;
            if t.degree_in(m) != 0 {
                continue;
            }
            // s must not vanish on the curve
            if normal_form(&s, &[h.clone()], MonomialOrder::GrevLex).is_zero() {
                continue;
            }
            found = Some((s, t.neg()));
            break;
        }
        let Some((s, r)) = found else {
            return Err(Error::UnsupportedShape(format!(
                "generic fiber is not a single reduced point in variable {}",
                ideal.ring.vars[m]
            )));
        };
        let sxm = s.mul(&MultiPoly::var(&ideal.ring, m))?;
        graph_gens.push(sxm.sub(&r)?);
        if !s.is_constant() {
            denominators.push(s);
        }
    }
    let mut graph = Ideal::new(&ideal.ring, graph_gens)?;
    for s in &denominators {
        graph = graph.saturation(&Ideal::principal(s.clone()), limits)?;
    }
    if !graph.equals(ideal, limits)? {
        return Err(Error::UnsupportedShape(
            "ideal is not the closure of the rational graph over its plane image".into(),
        ));
    }
    Ok((
        ideal.clone(),
        PrimalityCert::RationalCurve { plane },
    ))
}

// ---------- local length ----------

/// Length of (A/I) localized at a minimal prime P of I.
pub fn local_length(ideal: &Ideal, prime: &PrimeComponent, limits: &Limits) -> Result<u64> {
    let minimal = minimal_primes(ideal, limits)?;
    local_length_with(ideal, prime, &minimal, limits)
}

/// Same, with the minimal primes already computed.
pub fn local_length_with(
    ideal: &Ideal,
    prime: &PrimeComponent,
    minimal: &[PrimeComponent],
    limits: &Limits,
) -> Result<u64> {
    let Some(pos) = minimal
        .iter()
        .position(|c| c.ideal.equals(&prime.ideal, limits).unwrap_or(false))
    else {
        return Err(Error::NotMinimalPrime(
            prime
                .canonical_generators(limits)
                .join(", "),
        ));
    };
    // a zero-dimensional ideal splits into all its primary factors in one
    // pass; no per-point saturations needed
    if prime.dimension == 0 && krull_dimension(ideal, limits)? == 0 {
        let points = zero_dim_split(ideal, limits)?;
        for pt in &points {
            if pt.prime.equals(&prime.ideal, limits)? {
                return Ok(pt.length as u64);
            }
        }
        return Err(Error::NotMinimalPrime(
            "prime not found among the points".into(),
        ));
    }
    // isolate: saturate by the intersection of the other minimal primes
    let mut others: Option<Ideal> = None;
    for (k, c) in minimal.iter().enumerate() {
        if k == pos {
            continue;
        }
        others = Some(match others {
            None => c.ideal.clone(),
            Some(acc) => acc.intersection(&c.ideal, limits)?,
        });
    }
    let isolated = match others {
        None => ideal.clone(),
        Some(j) => ideal.saturation(&j, limits)?,
    };
    let p = &minimal[pos];
    if p.dimension == 0 {
        // primary factor of a point: vector-space dimension over the residue field
        let qgb = isolated.groebner_basis(MonomialOrder::GrevLex, limits)?;
        let qlt: Vec<Monomial> = qgb
            .polys
            .iter()
            .map(|g| g.leading().unwrap().0.clone())
            .collect();
        let qdim = standard_monomials(&qlt, ideal.ring.nvars()).len();
        let res = p.residue_degree.max(1);
        if qdim % res != 0 {
            return Err(Error::Validation(format!(
                "primary dimension {qdim} not divisible by residue degree {res}"
            )));
        }
        return Ok((qdim / res) as u64);
    }
    // graded filtration by powers of P, generic ranks via multiplicities
    let d = p.dimension;
    let e_p = p.degree.clone();
    let mut total: u64 = 0;
    let mut prev = BigInt::zero();
    let mut p_power = p.ideal.clone();
    for _ in 0..limits.length_cap {
        let layer = p_power.sum(&isolated)?;
        let m_k = multiplicity_at_dim(&layer, d, limits)?;
        let diff = &m_k - &prev;
        if diff.is_negative() || (&diff % &e_p) != BigInt::zero() {
            return Err(Error::Validation(
                "graded piece multiplicity is not a multiple of the component multiplicity".into(),
            ));
        }
        let rank = (&diff / &e_p)
            .to_u64_digits()
            .1
            .first()
            .copied()
            .unwrap_or(0);
        if rank == 0 {
            return Ok(total);
        }
        total += rank;
        prev = m_k;
        p_power = p_power.product(&p.ideal)?;
    }
    Err(Error::ResourceLimit(format!(
        "local length filtration exceeded {} steps",
        limits.length_cap
    )))
}

/// The associated cycle plus the components discarded by the codimension
/// filter.
#[derive(Debug, Clone)]
pub struct AssociatedCycle {
    pub cycle: Cycle,
    pub discarded: Vec<PrimeComponent>,
}

/// Associated cycle of V(I): one term per minimal prime of the selected
/// codimension, weighted by the local length at its generic point. With no
/// explicit codimension the top-dimensional components are kept.
pub fn associated_cycle(
    ideal: &Ideal,
    ambient: &Ambient,
    codim: Option<usize>,
    limits: &Limits,
) -> Result<AssociatedCycle> {
    if *ambient.ring != *ideal.ring {
        return Err(Error::AmbientMismatch(
            "ideal ring differs from the ambient ring".into(),
        ));
    }
    let minimal = minimal_primes(ideal, limits)?;
    let n = ideal.ring.nvars();
    let chosen_codim = match codim {
        Some(c) => c,
        None => minimal
            .iter()
            .map(|p| n - p.dimension)
            .min()
            .unwrap_or(0),
    };
    let mut components = Vec::new();
    let mut discarded = Vec::new();
    for p in &minimal {
        if n - p.dimension == chosen_codim {
            let len = local_length_with(ideal, p, &minimal, limits)?;
            components.push((p.clone(), len as i64));
        } else {
            discarded.push(p.clone());
        }
    }
    Ok(AssociatedCycle {
        cycle: Cycle {
            ambient: ambient.clone(),
            codim: chosen_codim,
            components,
        },
        discarded,
    })
}
