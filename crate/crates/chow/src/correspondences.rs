//! Finite correspondences: cycles on X×Y finite and surjective over
//! components of X, with composition via the intersection product and
//! pushforward along the outer projection.
//!
//! Finiteness is certified by exhibiting, for each target variable, a
//! basis element monic in that variable under a block order with the
//! target block leading; surjectivity by matching the elimination ideal
//! against a source component. Nothing is assumed: composition verifies
//! properness at run time and re-certifies its output.

use crate::cycles::{
    associated_cycle, minimal_primes, Ambient, Cycle, PrimalityCert, PrimeComponent,
};
use crate::error::{Error, Result};
use crate::funcfield::generic_fiber_degree;
use crate::groebner::{normal_form, Ideal};
use crate::hilbert::krull_dimension;
use crate::koszul::intersection_product;
use crate::limits::Limits;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{MultiPoly, RingCtx, DEFAULT_ORDER};
use std::collections::BTreeMap;
use std::sync::Arc;

/// An affine variety with its certified component list.
#[derive(Debug, Clone)]
pub struct VarietySpec {
    pub ambient: Ambient,
    pub ideal: Ideal,
    pub components: Vec<PrimeComponent>,
    /// Generic-point Jacobian check outcome, when requested.
    pub smooth: Option<bool>,
}

impl VarietySpec {
    pub fn new(ideal: Ideal, limits: &Limits) -> Result<VarietySpec> {
        let ring = ideal.ring.clone();
        let components = if ideal.is_zero_ideal() {
            minimal_primes(&ideal, limits)?
        } else {
            minimal_primes(&ideal, limits)?
        };
        Ok(VarietySpec {
            ambient: Ambient::affine(&ring),
            ideal,
            components,
            smooth: None,
        })
    }

    /// The whole affine space on the given ring.
    pub fn whole_space(ring: &Arc<RingCtx>, limits: &Limits) -> Result<VarietySpec> {
        VarietySpec::new(Ideal::zero(ring), limits)
    }

    /// Generic-point Jacobian criterion per component: the Jacobian of the
    /// defining ideal has rank equal to the codimension at the generic
    /// point of every component. Records and returns the outcome.
    pub fn check_smooth(&mut self, limits: &Limits) -> Result<bool> {
        let n = self.ideal.ring.nvars();
        for comp in &self.components {
            let codim = n - comp.dimension;
            if codim == 0 {
                continue;
            }
            let gb = comp.ideal.groebner_basis(MonomialOrder::GrevLex, limits)?;
            let rows: Vec<Vec<MultiPoly>> = self
                .ideal
                .gens
                .iter()
                .map(|g| (0..n).map(|v| g.partial(v)).collect())
                .collect();
            let rank = rank_modulo_prime(&rows, &gb.polys);
            if rank != codim {
                self.smooth = Some(false);
                return Ok(false);
            }
        }
        self.smooth = Some(true);
        Ok(true)
    }
}

/// Rank of a polynomial matrix over the fraction field of A/P, by
/// fraction-free elimination with normal-form zero tests.
fn rank_modulo_prime(rows: &[Vec<MultiPoly>], reducer: &[MultiPoly]) -> usize {
    let nf = |f: &MultiPoly| normal_form(f, reducer, MonomialOrder::GrevLex);
    let mut mat: Vec<Vec<MultiPoly>> = rows
        .iter()
        .map(|r| r.iter().map(|f| nf(f)).collect())
        .collect();
    let mut rank = 0usize;
    let ncols = mat.first().map(|r| r.len()).unwrap_or(0);
    let mut row_cursor = 0usize;
    for col in 0..ncols {
        let Some(pivot) = (row_cursor..mat.len()).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row_cursor, pivot);
        let pivot_entry = mat[row_cursor][col].clone();
        for r in 0..mat.len() {
            if r == row_cursor || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for c in 0..ncols {
                // fraction-free row update keeps entries polynomial
                let a = mat[r][c].mul(&pivot_entry).expect("same ring");
                let b = mat[row_cursor][c].mul(&factor).expect("same ring");
                mat[r][c] = nf(&a.sub(&b).expect("same ring"));
            }
        }
        rank += 1;
        row_cursor += 1;
        if row_cursor == mat.len() {
            break;
        }
    }
    rank
}

/// Monic-degree certificate per target variable for one component.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitenessCert {
    pub monic_degrees: BTreeMap<String, usize>,
    /// Index of the source component the component surjects onto.
    pub onto_component: usize,
}

/// A finite correspondence from `source` to `target`.
#[derive(Debug, Clone)]
pub struct Correspondence {
    pub source: VarietySpec,
    pub target: VarietySpec,
    /// Product ring [source vars | target vars].
    pub ring: Arc<RingCtx>,
    pub cycle: Cycle,
    /// One certificate per cycle component, in component order.
    pub finiteness: Vec<FinitenessCert>,
}

/// Product ring with disjoint variable blocks.
pub fn product_ring(a: &RingCtx, b: &RingCtx) -> Result<Arc<RingCtx>> {
    if a.field != b.field {
        return Err(Error::MixedContext("product over different fields".into()));
    }
    for v in &b.vars {
        if a.vars.contains(v) {
            return Err(Error::VariableClash(v.clone()));
        }
    }
    let names: Vec<&str> = a
        .vars
        .iter()
        .chain(b.vars.iter())
        .map(|s| s.as_str())
        .collect();
    Ok(RingCtx::new(a.field, &names))
}

/// Pure-power leading terms for the `first_block` variables under a block
/// order with that block leading; per-variable monic degrees.
fn block_pure_powers(
    ideal: &Ideal,
    first_block: &[usize],
    limits: &Limits,
) -> Result<BTreeMap<usize, usize>> {
    let n = ideal.ring.nvars();
    let rest: Vec<usize> = (0..n).filter(|i| !first_block.contains(i)).collect();
    let mut order_of: Vec<usize> = first_block.to_vec();
    order_of.extend(rest.iter().copied());
    let names: Vec<&str> = order_of
        .iter()
        .map(|&i| ideal.ring.vars[i].as_str())
        .collect();
    let permuted = RingCtx::new(ideal.ring.field, &names);
    let mut positions = vec![0usize; n];
    for (new_idx, &orig) in order_of.iter().enumerate() {
        positions[orig] = new_idx;
    }
    let gens: Vec<MultiPoly> = ideal
        .gens
        .iter()
        .map(|g| g.embed(&permuted, &positions))
        .collect();
    let basis = crate::groebner::buchberger(
        &gens,
        MonomialOrder::Block {
            split: first_block.len(),
        },
        limits,
    )?;
    let mut out = BTreeMap::new();
    for g in &basis {
        let lt = &g.leading().unwrap().0;
        let support: Vec<usize> = lt.support().collect();
        if support.len() == 1 && support[0] < first_block.len() {
            let var = first_block[support[0]];
            let d = lt.0[support[0]] as usize;
            let entry = out.entry(var).or_insert(d);
            if d < *entry {
                *entry = d;
            }
        }
    }
    Ok(out)
}

/// Verify that each component of `cycle` is finite over the source block
/// and surjective onto a source component; returns the certificates.
pub fn check_finite_surjective(
    cycle: &Cycle,
    source: &VarietySpec,
    _target: &VarietySpec,
    limits: &Limits,
) -> Result<Vec<FinitenessCert>> {
    let big = &cycle.ambient.ring;
    let nx = source.ambient.ring.nvars();
    let x_block: Vec<usize> = (0..nx).collect();
    let y_block: Vec<usize> = (nx..big.nvars()).collect();
    let mut out = Vec::new();
    for (comp, _) in &cycle.components {
        let powers = block_pure_powers(&comp.ideal, &y_block, limits)?;
        let mut monic_degrees = BTreeMap::new();
        for &v in &y_block {
            match powers.get(&v) {
                Some(d) => {
                    monic_degrees.insert(big.vars[v].clone(), *d);
                }
                None => {
                    return Err(Error::NotFinite {
                        component: comp.canonical_generators(limits).join(", "),
                        variable: big.vars[v].clone(),
                    })
                }
            }
        }
        // surjectivity: the elimination ideal equals a source component
        let elim = comp.ideal.elimination(&x_block, limits)?;
        let projected = project_ideal(&elim, &x_block, &source.ambient.ring)?;
        let mut onto = None;
        for (idx, sc) in source.components.iter().enumerate() {
            if projected.equals(&sc.ideal, limits)? {
                onto = Some(idx);
                break;
            }
        }
        let Some(onto_component) = onto else {
            return Err(Error::NotSurjective(
                comp.canonical_generators(limits).join(", "),
            ));
        };
        out.push(FinitenessCert {
            monic_degrees,
            onto_component,
        });
    }
    Ok(out)
}

/// Map an ideal whose generators only involve `keep` into the ring on
/// exactly those variables.
fn project_ideal(ideal: &Ideal, keep: &[usize], target: &Arc<RingCtx>) -> Result<Ideal> {
    let gens: Vec<MultiPoly> = ideal
        .gens
        .iter()
        .map(|g| {
            let terms = g
                .terms
                .iter()
                .map(|(m, c)| {
                    let e: Vec<u32> = keep.iter().map(|&v| m.0[v]).collect();
                    (Monomial(e), c.clone())
                })
                .collect();
            MultiPoly::from_terms(target, DEFAULT_ORDER, terms)
        })
        .collect();
    Ideal::new(target, gens)
}

/// Substitute target variables by the map polynomials: g(f_1, ..., f_m) in
/// the source ring.
fn compose_map(g: &MultiPoly, map: &[MultiPoly], source_ring: &Arc<RingCtx>) -> Result<MultiPoly> {
    let mut acc = MultiPoly::zero(source_ring);
    for (m, c) in &g.terms {
        let mut term = MultiPoly::constant(source_ring, c.clone());
        for (j, &e) in m.0.iter().enumerate() {
            if e > 0 {
                term = term.mul(&map[j].pow(e)?)?;
            }
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// The graph of a polynomial map X -> Y as a correspondence.
pub fn graph(
    map: &[MultiPoly],
    source: &VarietySpec,
    target: &VarietySpec,
    limits: &Limits,
) -> Result<Correspondence> {
    let sx = &source.ambient.ring;
    let sy = &target.ambient.ring;
    if map.len() != sy.nvars() {
        return Err(Error::Validation(format!(
            "map has {} coordinates for a {}-variable target",
            map.len(),
            sy.nvars()
        )));
    }
    for f in map {
        if *f.ring != **sx {
            return Err(Error::MixedContext("map coordinate outside the source ring".into()));
        }
    }
    // image lands in the target variety
    for g in &target.ideal.gens {
        let pulled = compose_map(g, map, sx)?;
        if !source.ideal.contains(&pulled, limits)? {
            return Err(Error::ImageNotInTarget(g.canonical_string()));
        }
    }
    let ring = product_ring(sx, sy)?;
    let nx = sx.nvars();
    let x_positions: Vec<usize> = (0..nx).collect();
    let mut gens: Vec<MultiPoly> = source
        .ideal
        .gens
        .iter()
        .map(|g| g.embed(&ring, &x_positions))
        .collect();
    for (j, f) in map.iter().enumerate() {
        let yj = MultiPoly::var(&ring, nx + j);
        gens.push(yj.sub(&f.embed(&ring, &x_positions))?);
    }
    let graph_ideal = Ideal::new(&ring, gens)?;
    let ambient = Ambient::affine(&ring);
    let cycle = associated_cycle(&graph_ideal, &ambient, None, limits)?.cycle;
    let finiteness = check_finite_surjective(&cycle, source, target, limits)?;
    Ok(Correspondence {
        source: source.clone(),
        target: target.clone(),
        ring,
        cycle,
        finiteness,
    })
}

/// A correspondence from an explicit cycle (verifies the certificates).
pub fn correspondence_from_cycle(
    cycle: Cycle,
    source: &VarietySpec,
    target: &VarietySpec,
    limits: &Limits,
) -> Result<Correspondence> {
    let ring = cycle.ambient.ring.clone();
    let finiteness = check_finite_surjective(&cycle, source, target, limits)?;
    Ok(Correspondence {
        source: source.clone(),
        target: target.clone(),
        ring,
        cycle,
        finiteness,
    })
}

/// Sum of two correspondences with the same source and target.
pub fn corr_add(a: &Correspondence, b: &Correspondence, limits: &Limits) -> Result<Correspondence> {
    if *a.ring != *b.ring {
        return Err(Error::MixedContext("correspondences on different products".into()));
    }
    let cycle = a.cycle.add(&b.cycle, limits)?;
    correspondence_from_cycle(cycle, &a.source, &a.target, limits)
}

/// Pushforward of a cycle along the projection onto the `keep` coordinates:
/// componentwise [κ(W):κ(f(W))]·[f(W)] when the dimension is preserved and 0
/// otherwise, extended linearly.
pub fn pushforward(
    cycle: &Cycle,
    keep: &[usize],
    target_ring: &Arc<RingCtx>,
    limits: &Limits,
) -> Result<Cycle> {
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort();
    if keep_sorted.len() != target_ring.nvars() {
        return Err(Error::Validation(
            "kept block does not match the target ring".into(),
        ));
    }
    let target_ambient = Ambient::affine(target_ring);
    let mut out: Option<Cycle> = None;
    for (comp, mult) in &cycle.components {
        let elim = comp.ideal.elimination(&keep_sorted, limits)?;
        let image = project_ideal(&elim, &keep_sorted, target_ring)?;
        let image_dim = if image.is_zero_ideal() {
            target_ring.nvars()
        } else {
            krull_dimension(&image, limits)?
        };
        if image_dim < comp.dimension {
            continue; // fibers are positive-dimensional: pushes to zero
        }
        if image_dim > comp.dimension {
            return Err(Error::DegreeComputationFailed(format!(
                "image dimension {} exceeds the component dimension {}",
                image_dim, comp.dimension
            )));
        }
        let degree = generic_fiber_degree(&comp.ideal, &keep_sorted, &image, limits)?;
        let cert = PrimalityCert::SectionLift {
            inner: Box::new(comp.certificate.clone()),
        };
        let image_comp = if image.is_zero_ideal() {
            PrimeComponent::from_ideal(image, PrimalityCert::Ambient, limits)?
        } else {
            PrimeComponent::from_ideal(image, cert, limits)?
        };
        let term = Cycle {
            ambient: target_ambient.clone(),
            codim: target_ring.nvars() - image_dim,
            components: vec![(image_comp, mult * degree as i64)],
        };
        out = Some(match out {
            None => term,
            Some(acc) => acc.add(&term, limits)?,
        });
    }
    Ok(out.unwrap_or_else(|| Cycle::empty(target_ambient, 0)))
}

/// Composition beta ∘ alpha of correspondences X->Y and Y->Z: intersect the
/// cylinders W_a × Z and X × W_b on X×Y×Z (properness verified by the
/// product machinery) and push forward along the outer projection.
pub fn compose(
    alpha: &Correspondence,
    beta: &Correspondence,
    limits: &Limits,
) -> Result<Correspondence> {
    if *alpha.target.ambient.ring != *beta.source.ambient.ring
        || !alpha
            .target
            .ideal
            .equals(&beta.source.ideal, limits)?
    {
        return Err(Error::MixedContext(
            "target of the first correspondence differs from the source of the second".into(),
        ));
    }
    let nx = alpha.source.ambient.ring.nvars();
    let ny = alpha.target.ambient.ring.nvars();
    let nz = beta.target.ambient.ring.nvars();
    let triple = product_ring(&alpha.ring, &beta.target.ambient.ring)?;
    let ab_positions: Vec<usize> = (0..nx + ny).collect();
    let bc_positions: Vec<usize> = (nx..nx + ny + nz).collect();

    let cylinder = |cyc: &Cycle, positions: &[usize]| -> Result<Cycle> {
        let mut comps = Vec::new();
        for (c, m) in &cyc.components {
            let gens: Vec<MultiPoly> = c
                .ideal
                .gens
                .iter()
                .map(|g| g.embed(&triple, positions))
                .collect();
            let ideal = Ideal::new(&triple, gens)?;
            let cert = PrimalityCert::SectionLift {
                inner: Box::new(c.certificate.clone()),
            };
            comps.push((PrimeComponent::from_ideal(ideal, cert, limits)?, *m));
        }
        let codim = comps
            .first()
            .map(|(c, _)| triple.nvars() - c.dimension)
            .unwrap_or(0);
        Ok(Cycle {
            ambient: Ambient::affine(&triple),
            codim,
            components: comps,
        })
    };
    let cyl_a = cylinder(&alpha.cycle, &ab_positions)?;
    let cyl_b = cylinder(&beta.cycle, &bc_positions)?;
    let product = intersection_product(&cyl_a, &cyl_b, limits)?;

    // outer projection X×Y×Z -> X×Z
    let keep: Vec<usize> = (0..nx).chain(nx + ny..nx + ny + nz).collect();
    let xz_ring = product_ring(&alpha.source.ambient.ring, &beta.target.ambient.ring)?;
    let pushed = pushforward(&product, &keep, &xz_ring, limits)?;
    correspondence_from_cycle(pushed, &alpha.source, &beta.target, limits)
}

/// Exact equality of correspondences as cycles; variable names are
/// presentation detail, so the comparison is positional.
pub fn corr_equal(a: &Correspondence, b: &Correspondence, limits: &Limits) -> Result<bool> {
    if a.ring.field != b.ring.field || a.ring.nvars() != b.ring.nvars() {
        return Ok(false);
    }
    let renamed = rename_cycle_positional(&b.cycle, &a.ring, limits)?;
    a.cycle.equals(&renamed, limits)
}

/// Rebuild a cycle on a ring with the same shape but different names.
fn rename_cycle_positional(cycle: &Cycle, ring: &Arc<RingCtx>, limits: &Limits) -> Result<Cycle> {
    if *cycle.ambient.ring == **ring {
        return Ok(cycle.clone());
    }
    let positions: Vec<usize> = (0..ring.nvars()).collect();
    let mut comps = Vec::new();
    for (c, m) in &cycle.components {
        let gens: Vec<MultiPoly> = c.ideal.gens.iter().map(|g| g.embed(ring, &positions)).collect();
        let ideal = Ideal::new(ring, gens)?;
        comps.push((
            PrimeComponent::from_ideal(ideal, c.certificate.clone(), limits)?,
            *m,
        ));
    }
    Ok(Cycle {
        ambient: Ambient {
            kind: cycle.ambient.kind.clone(),
            ring: ring.clone(),
        },
        codim: cycle.codim,
        components: comps,
    })
}

/// Outcome report of the category-law checks on a sample.
#[derive(Debug, Clone, Default)]
pub struct LawsReport {
    pub checks: Vec<(String, bool)>,
}

impl LawsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn push(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }
}

/// Identity, associativity, and bilinearity checks over samples of
/// composable correspondences; failures are listed, not raised.
pub fn category_laws_check(
    identity_samples: &[(Correspondence, Correspondence)],
    assoc_triples: &[(Correspondence, Correspondence, Correspondence)],
    bilinearity_samples: &[(Correspondence, Correspondence, Correspondence)],
    limits: &Limits,
) -> Result<LawsReport> {
    let mut report = LawsReport::default();
    for (i, (id_corr, alpha)) in identity_samples.iter().enumerate() {
        let left = compose(id_corr, alpha, limits)?;
        let ok = corr_equal(&left, alpha, limits)?;
        report.push(format!("identity-{i}"), ok);
    }
    for (i, (a, b, c)) in assoc_triples.iter().enumerate() {
        let left = compose(&compose(a, b, limits)?, c, limits)?;
        let right = compose(a, &compose(b, c, limits)?, limits)?;
        let ok = corr_equal(&left, &right, limits)?;
        report.push(format!("associativity-{i}"), ok);
    }
    for (i, (a1, a2, b)) in bilinearity_samples.iter().enumerate() {
        let sum = corr_add(a1, a2, limits)?;
        let left = compose(&sum, b, limits)?;
        let right = corr_add(
            &compose(a1, b, limits)?,
            &compose(a2, b, limits)?,
            limits,
        )?;
        let ok = corr_equal(&left, &right, limits)?;
        report.push(format!("bilinearity-{i}"), ok);
    }
    Ok(report)
}
