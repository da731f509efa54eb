//! The transfer harness: reduce a rational cycle-theoretic instance modulo
//! each sampled prime, run the operation on both sides (operate-then-reduce
//! and reduce-then-operate), and compare canonical forms. Rational
//! components may split modulo p, so both sides are re-split over F_p
//! before comparison. Bad primes (coefficient denominators, leading
//! coefficients, eliminant discriminants) are precomputed conservatively,
//! so a disagreement at a good prime is always a red flag.

use crate::cycles::{
    associated_cycle, local_length_with, minimal_primes, zero_dim_split, Ambient, AmbientKind,
    Cycle, PrimeComponent,
};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::hilbert::{hilbert, HilbertData};
use crate::koszul::{build_koszul, homology_length_at, intersection_product};
use crate::limits::Limits;
use crate::monomial::MonomialOrder;
use crate::poly::{MultiPoly, RingCtx};
use crate::scalar::Scalar;
use crate::ultra::{PrimeSample, Verdict};
use crate::univar::discriminant;
use crate::correspondences::{correspondence_from_cycle, compose, pushforward, VarietySpec};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// One transfer instance: the rational-side payload of a cycle-theoretic
/// operation.
#[derive(Debug, Clone)]
pub enum TransferInstance {
    /// Associated cycle of V(I).
    AssociatedCycle { ideal: Ideal, codim: Option<usize> },
    /// Local length of A/I at a minimal prime.
    LocalLength { ideal: Ideal, prime: Ideal },
    /// Koszul homology lengths of a sequence over A/J at a point.
    KoszulData {
        quotient: Ideal,
        sequence: Vec<MultiPoly>,
        point: Ideal,
    },
    /// Intersection product of the cycles of two ideals.
    IntersectionProduct {
        a: Ideal,
        b: Ideal,
        projective: bool,
    },
    /// Pushforward of the cycle of an ideal along a coordinate projection.
    Pushforward { ideal: Ideal, keep: Vec<usize> },
    /// Composition of two correspondences between affine lines/spaces,
    /// given by their defining ideals on [x|y] and [y|z] product rings.
    Compose {
        alpha: Ideal,
        beta: Ideal,
        split: (usize, usize, usize),
    },
    /// Hilbert data (degree, dimension, polynomial) of a homogeneous ideal.
    HilbertDegree { ideal: Ideal },
}

impl TransferInstance {
    pub fn kind(&self) -> &'static str {
        match self {
            TransferInstance::AssociatedCycle { .. } => "associated-cycle",
            TransferInstance::LocalLength { .. } => "local-length",
            TransferInstance::KoszulData { .. } => "koszul-data",
            TransferInstance::IntersectionProduct { .. } => "intersection-product",
            TransferInstance::Pushforward { .. } => "pushforward",
            TransferInstance::Compose { .. } => "compose",
            TransferInstance::HilbertDegree { .. } => "hilbert-degree",
        }
    }

    fn ideals(&self) -> Vec<&Ideal> {
        match self {
            TransferInstance::AssociatedCycle { ideal, .. } => vec![ideal],
            TransferInstance::LocalLength { ideal, prime } => vec![ideal, prime],
            TransferInstance::KoszulData { quotient, point, .. } => vec![quotient, point],
            TransferInstance::IntersectionProduct { a, b, .. } => vec![a, b],
            TransferInstance::Pushforward { ideal, .. } => vec![ideal],
            TransferInstance::Compose { alpha, beta, .. } => vec![alpha, beta],
            TransferInstance::HilbertDegree { ideal } => vec![ideal],
        }
    }

    fn extra_polys(&self) -> Vec<&MultiPoly> {
        match self {
            TransferInstance::KoszulData { sequence, .. } => sequence.iter().collect(),
            _ => vec![],
        }
    }
}

/// Per-prime outcome of a commutation check.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Agree,
    Disagree(String),
    BadPrime,
    Unsupported(String),
}

/// The commutation report for one instance over one sample.
#[derive(Debug, Clone)]
pub struct CommutationReport {
    pub kind: String,
    pub outcomes: Vec<(u64, Outcome)>,
    pub verdict: Verdict,
    /// Primes with a non-agree outcome.
    pub exceptions: Vec<u64>,
    /// The precomputed bad-prime set within the sample.
    pub precomputed_bad: Vec<u64>,
}

impl CommutationReport {
    /// Exceptions must lie inside the precomputed bad-prime set.
    pub fn exceptions_covered(&self) -> bool {
        self.exceptions
            .iter()
            .all(|p| self.precomputed_bad.contains(p))
    }
}

// ---------- reduction helpers ----------

pub fn reduce_ideal(ideal: &Ideal, p: u64) -> Result<Ideal> {
    let ring = ideal.ring.reduced(p)?;
    let gens: Result<Vec<MultiPoly>> = ideal.gens.iter().map(|g| g.reduce_mod_p(p)).collect();
    Ideal::new(&ring, gens?)
}

/// Reduce a rational cycle modulo p and re-split each component over F_p,
/// multiplying multiplicities through. Components of a rational prime stay
/// radical at good primes; any degeneration shows up as a multiplicity and
/// is reported faithfully.
pub fn reduce_cycle_resplit(cycle: &Cycle, p: u64, limits: &Limits) -> Result<Cycle> {
    let ring = cycle.ambient.ring.reduced(p)?;
    let ambient = Ambient {
        kind: cycle.ambient.kind.clone(),
        ring: ring.clone(),
    };
    let mut out = Cycle::empty(ambient.clone(), cycle.codim);
    for (comp, mult) in &cycle.components {
        let reduced = reduce_ideal(&comp.ideal, p)?;
        let piece = associated_cycle(&reduced, &ambient, Some(cycle.codim), limits)?;
        if !piece.discarded.is_empty() {
            return Err(Error::UnsupportedShape(format!(
                "component degenerated in codimension modulo {p}"
            )));
        }
        out = out.add(&piece.cycle.scalar_mul(*mult), limits)?;
    }
    Ok(out)
}

/// Canonical, diffable form of a cycle.
pub fn cycle_canonical_string(cycle: &Cycle, limits: &Limits) -> String {
    let comps = cycle.sorted_components(limits);
    let parts: Vec<String> = comps
        .iter()
        .map(|(c, m)| {
            format!(
                "{}*[{}]",
                m,
                c.canonical_generators(limits).join(", ")
            )
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn hilbert_canonical_string(data: &HilbertData) -> String {
    let hp: Vec<String> = data
        .hilbert_polynomial
        .iter()
        .map(|c| format!("{c}"))
        .collect();
    format!(
        "deg={} dim={} hp=[{}]",
        data.degree,
        data.dimension,
        hp.join(",")
    )
}

// ---------- bad prime precomputation ----------

fn push_rational_parts(s: &Scalar, out: &mut Vec<BigInt>) {
    if let Some(q) = s.as_rational() {
        if !q.denom().is_zero() {
            out.push(q.denom().clone());
        }
        if !q.numer().is_zero() {
            out.push(q.numer().clone());
        }
    }
}

fn collect_from_poly(f: &MultiPoly, out: &mut Vec<BigInt>) {
    // all denominators, plus the leading coefficient's numerator (the
    // strategies need the leading structure to survive reduction)
    for (_, c) in &f.terms {
        if let Some(q) = c.as_rational() {
            out.push(q.denom().clone());
        }
    }
    if let Some((_, c)) = f.leading_under(MonomialOrder::GrevLex) {
        push_rational_parts(c, out);
    }
}

fn collect_from_ideal(ideal: &Ideal, limits: &Limits, out: &mut Vec<BigInt>) {
    for g in &ideal.gens {
        collect_from_poly(g, out);
    }
    if let Ok(gb) = ideal.groebner_basis(MonomialOrder::GrevLex, limits) {
        for g in &gb.polys {
            collect_from_poly(g, out);
        }
    }
}

fn collect_from_component(comp: &PrimeComponent, limits: &Limits, out: &mut Vec<BigInt>) {
    collect_from_ideal(&comp.ideal, limits, out);
    if comp.dimension == 0 {
        // eliminant discriminant of the point: primes dividing it may merge
        // or degenerate the Galois orbit
        if let Ok(points) = zero_dim_split(&comp.ideal, limits) {
            for pt in points {
                let disc = discriminant(&pt.eliminant);
                push_rational_parts(&disc, out);
                for c in &pt.eliminant.coeffs {
                    push_rational_parts(c, out);
                }
            }
        }
    }
}

fn collect_from_cycle(cycle: &Cycle, limits: &Limits, out: &mut Vec<BigInt>) {
    for (c, _) in &cycle.components {
        collect_from_component(c, limits, out);
    }
}

/// Primes of the sample dividing any critical integer of the instance.
pub fn precompute_bad_primes(
    instance: &TransferInstance,
    rational_side: &RationalSide,
    sample: &PrimeSample,
    limits: &Limits,
) -> Vec<u64> {
    let mut critical: Vec<BigInt> = Vec::new();
    for ideal in instance.ideals() {
        collect_from_ideal(ideal, limits, &mut critical);
    }
    for f in instance.extra_polys() {
        collect_from_poly(f, &mut critical);
    }
    match rational_side {
        RationalSide::Cycle(c) => collect_from_cycle(c, limits, &mut critical),
        RationalSide::Length { minimal, .. } => {
            for c in minimal {
                collect_from_component(c, limits, &mut critical);
            }
        }
        RationalSide::Homology { point, .. } => {
            collect_from_component(point, limits, &mut critical);
        }
        RationalSide::Hilbert(_) => {}
    }
    let mut bad = Vec::new();
    'prime: for &p in &sample.primes {
        let pb = BigInt::from(p);
        for c in &critical {
            if !c.is_zero() && (c % &pb).is_zero() && c.abs() != BigInt::from(1u32) {
                bad.push(p);
                continue 'prime;
            }
        }
    }
    bad
}

/// The operate-first side of the comparison, computed once over Q.
#[derive(Debug, Clone)]
pub enum RationalSide {
    Cycle(Cycle),
    Length {
        value: u64,
        minimal: Vec<PrimeComponent>,
    },
    Homology {
        lengths: Vec<u64>,
        point: PrimeComponent,
    },
    Hilbert(HilbertData),
}

/// Run the instance's operation over Q.
pub fn rational_side(instance: &TransferInstance, limits: &Limits) -> Result<RationalSide> {
    match instance {
        TransferInstance::AssociatedCycle { ideal, codim } => {
            let ambient = Ambient::affine(&ideal.ring);
            Ok(RationalSide::Cycle(
                associated_cycle(ideal, &ambient, *codim, limits)?.cycle,
            ))
        }
        TransferInstance::LocalLength { ideal, prime } => {
            let minimal = minimal_primes(ideal, limits)?;
            let target = minimal
                .iter()
                .find(|c| c.ideal.equals(prime, limits).unwrap_or(false))
                .cloned()
                .ok_or_else(|| Error::NotMinimalPrime("transfer payload".into()))?;
            let value = local_length_with(ideal, &target, &minimal, limits)?;
            Ok(RationalSide::Length { value, minimal })
        }
        TransferInstance::KoszulData {
            quotient,
            sequence,
            point,
        } => {
            let complex = build_koszul(&quotient.ring, sequence, Some(quotient), limits)?;
            let comps = minimal_primes(point, limits)?;
            if comps.len() != 1 {
                return Err(Error::Validation(
                    "koszul transfer point must be a single prime".into(),
                ));
            }
            let p = comps[0].clone();
            let mut lengths = Vec::new();
            for i in 0..=sequence.len() {
                lengths.push(homology_length_at(&complex, i, &p, limits)?);
            }
            Ok(RationalSide::Homology { lengths, point: p })
        }
        TransferInstance::IntersectionProduct { a, b, projective } => {
            let kind = if *projective {
                AmbientKind::Projective
            } else {
                AmbientKind::Affine
            };
            let ambient = Ambient {
                kind,
                ring: a.ring.clone(),
            };
            let ca = associated_cycle(a, &ambient, None, limits)?.cycle;
            let cb = associated_cycle(b, &ambient, None, limits)?.cycle;
            Ok(RationalSide::Cycle(intersection_product(&ca, &cb, limits)?))
        }
        TransferInstance::Pushforward { ideal, keep } => {
            let ambient = Ambient::affine(&ideal.ring);
            let cycle = associated_cycle(ideal, &ambient, None, limits)?.cycle;
            let names: Vec<&str> = keep
                .iter()
                .map(|&i| ideal.ring.vars[i].as_str())
                .collect();
            let target = RingCtx::new(ideal.ring.field, &names);
            Ok(RationalSide::Cycle(pushforward(&cycle, keep, &target, limits)?))
        }
        TransferInstance::Compose { alpha, beta, split } => {
            Ok(RationalSide::Cycle(compose_cycle(alpha, beta, *split, limits)?))
        }
        TransferInstance::HilbertDegree { ideal } => {
            Ok(RationalSide::Hilbert(hilbert(ideal, limits)?))
        }
    }
}

/// Build the two correspondences over whole affine spaces and compose.
fn compose_cycle(
    alpha: &Ideal,
    beta: &Ideal,
    split: (usize, usize, usize),
    limits: &Limits,
) -> Result<Cycle> {
    let (nx, ny, nz) = split;
    let ring_xy = &alpha.ring;
    let ring_yz = &beta.ring;
    if ring_xy.nvars() != nx + ny || ring_yz.nvars() != ny + nz {
        return Err(Error::Validation("compose split does not match rings".into()));
    }
    let x_names: Vec<&str> = ring_xy.vars[..nx].iter().map(|s| s.as_str()).collect();
    let y_names: Vec<&str> = ring_xy.vars[nx..].iter().map(|s| s.as_str()).collect();
    let z_names: Vec<&str> = ring_yz.vars[ny..].iter().map(|s| s.as_str()).collect();
    for (a, b) in ring_yz.vars[..ny].iter().zip(&ring_xy.vars[nx..]) {
        if a != b {
            return Err(Error::Validation(
                "middle block names disagree between the two correspondences".into(),
            ));
        }
    }
    let field = ring_xy.field;
    let x_ring = RingCtx::new(field, &x_names);
    let y_ring = RingCtx::new(field, &y_names);
    let z_ring = RingCtx::new(field, &z_names);
    let x_space = VarietySpec::whole_space(&x_ring, limits)?;
    let y_space = VarietySpec::whole_space(&y_ring, limits)?;
    let z_space = VarietySpec::whole_space(&z_ring, limits)?;
    let cycle_a = associated_cycle(alpha, &Ambient::affine(ring_xy), None, limits)?.cycle;
    let cycle_b = associated_cycle(beta, &Ambient::affine(ring_yz), None, limits)?.cycle;
    let corr_a = correspondence_from_cycle(cycle_a, &x_space, &y_space, limits)?;
    let corr_b = correspondence_from_cycle(cycle_b, &y_space, &z_space, limits)?;
    Ok(compose(&corr_a, &corr_b, limits)?.cycle)
}

// ---------- the commutation check ----------

fn modp_canonical(instance: &TransferInstance, p: u64, limits: &Limits) -> Result<String> {
    match instance {
        TransferInstance::AssociatedCycle { ideal, codim } => {
            let reduced = reduce_ideal(ideal, p)?;
            let ambient = Ambient::affine(&reduced.ring);
            let cyc = associated_cycle(&reduced, &ambient, *codim, limits)?.cycle;
            Ok(cycle_canonical_string(&cyc, limits))
        }
        TransferInstance::LocalLength { ideal, prime } => {
            let ideal_p = reduce_ideal(ideal, p)?;
            let prime_p = reduce_ideal(prime, p)?;
            // the rational prime may split; the length must agree at every branch
            let branches = minimal_primes(&prime_p, limits)?;
            let minimal = minimal_primes(&ideal_p, limits)?;
            let mut lengths = Vec::new();
            for b in &branches {
                let target = minimal
                    .iter()
                    .find(|c| c.ideal.equals(&b.ideal, limits).unwrap_or(false))
                    .cloned()
                    .ok_or_else(|| {
                        Error::NotMinimalPrime("reduced prime is not minimal".into())
                    })?;
                lengths.push(local_length_with(&ideal_p, &target, &minimal, limits)?);
            }
            lengths.sort();
            lengths.dedup();
            Ok(format!("lengths={lengths:?}"))
        }
        TransferInstance::KoszulData {
            quotient,
            sequence,
            point,
        } => {
            let quotient_p = reduce_ideal(quotient, p)?;
            let seq_p: Result<Vec<MultiPoly>> =
                sequence.iter().map(|f| f.reduce_mod_p(p)).collect();
            let seq_p = seq_p?;
            let point_p = reduce_ideal(point, p)?;
            let complex = build_koszul(&quotient_p.ring, &seq_p, Some(&quotient_p), limits)?;
            let branches = minimal_primes(&point_p, limits)?;
            let mut per_branch = Vec::new();
            for b in &branches {
                let mut lengths = Vec::new();
                for i in 0..=seq_p.len() {
                    lengths.push(homology_length_at(&complex, i, b, limits)?);
                }
                per_branch.push(lengths);
            }
            per_branch.sort();
            per_branch.dedup();
            Ok(format!("homology={per_branch:?}"))
        }
        TransferInstance::IntersectionProduct { a, b, projective } => {
            let a_p = reduce_ideal(a, p)?;
            let b_p = reduce_ideal(b, p)?;
            let kind = if *projective {
                AmbientKind::Projective
            } else {
                AmbientKind::Affine
            };
            let ambient = Ambient {
                kind,
                ring: a_p.ring.clone(),
            };
            let ca = associated_cycle(&a_p, &ambient, None, limits)?.cycle;
            let cb = associated_cycle(&b_p, &ambient, None, limits)?.cycle;
            let prod = intersection_product(&ca, &cb, limits)?;
            Ok(cycle_canonical_string(&prod, limits))
        }
        TransferInstance::Pushforward { ideal, keep } => {
            let ideal_p = reduce_ideal(ideal, p)?;
            let ambient = Ambient::affine(&ideal_p.ring);
            let cycle = associated_cycle(&ideal_p, &ambient, None, limits)?.cycle;
            let names: Vec<&str> = keep
                .iter()
                .map(|&i| ideal_p.ring.vars[i].as_str())
                .collect();
            let target = RingCtx::new(ideal_p.ring.field, &names);
            let pushed = pushforward(&cycle, keep, &target, limits)?;
            Ok(cycle_canonical_string(&pushed, limits))
        }
        TransferInstance::Compose { alpha, beta, split } => {
            let alpha_p = reduce_ideal(alpha, p)?;
            let beta_p = reduce_ideal(beta, p)?;
            let cyc = compose_cycle(&alpha_p, &beta_p, *split, limits)?;
            Ok(cycle_canonical_string(&cyc, limits))
        }
        TransferInstance::HilbertDegree { ideal } => {
            let ideal_p = reduce_ideal(ideal, p)?;
            Ok(hilbert_canonical_string(&hilbert(&ideal_p, limits)?))
        }
    }
}

fn rational_side_canonical_at(
    side: &RationalSide,
    p: u64,
    limits: &Limits,
) -> Result<String> {
    match side {
        RationalSide::Cycle(cycle) => {
            let reduced = reduce_cycle_resplit(cycle, p, limits)?;
            Ok(cycle_canonical_string(&reduced, limits))
        }
        RationalSide::Length { value, .. } => Ok(format!("lengths=[{value}]")),
        RationalSide::Homology { lengths, .. } => Ok(format!("homology=[{lengths:?}]")),
        RationalSide::Hilbert(data) => Ok(hilbert_canonical_string(data)),
    }
}

/// Check, prime by prime, that reduce-then-operate agrees with
/// operate-then-reduce.
pub fn check_commutation(
    instance: &TransferInstance,
    sample: &PrimeSample,
    limits: &Limits,
) -> Result<CommutationReport> {
    let side = rational_side(instance, limits)?;
    let precomputed_bad = precompute_bad_primes(instance, &side, sample, limits);
    let active = sample.active();
    let outcomes: Vec<(u64, Outcome)> = active
        .par_iter()
        .map(|&p| {
            let run = || -> Result<Outcome> {
                let expected = rational_side_canonical_at(&side, p, limits)?;
                let got = modp_canonical(instance, p, limits)?;
                if expected == got {
                    Ok(Outcome::Agree)
                } else {
                    Ok(Outcome::Disagree(format!(
                        "operate-then-reduce: {expected} | reduce-then-operate: {got}"
                    )))
                }
            };
            let outcome = match run() {
                Ok(o) => o,
                Err(Error::BadPrime(_)) => Outcome::BadPrime,
                Err(Error::UnsupportedShape(m)) | Err(Error::NotFiniteLength(m)) => {
                    Outcome::Unsupported(m)
                }
                Err(e) => Outcome::Unsupported(format!("{e}")),
            };
            (p, outcome)
        })
        .collect();
    let exceptions: Vec<u64> = outcomes
        .iter()
        .filter(|(_, o)| *o != Outcome::Agree)
        .map(|(p, _)| *p)
        .collect();
    let agree_count = outcomes.len() - exceptions.len();
    let disagree_count = outcomes
        .iter()
        .filter(|(_, o)| matches!(o, Outcome::Disagree(_) | Outcome::Unsupported(_)))
        .count();
    let verdict = if disagree_count == 0 && agree_count > 0 {
        Verdict::CofiniteHolds
    } else if agree_count == 0 {
        Verdict::CofiniteFails
    } else {
        Verdict::FilterDependent
    };
    Ok(CommutationReport {
        kind: instance.kind().to_string(),
        outcomes,
        verdict,
        exceptions,
        precomputed_bad,
    })
}

// ---------- complexity survey ----------

/// A pair of homogeneous plane cycles for the survey.
#[derive(Debug, Clone)]
pub struct SurveyInstance {
    pub f: MultiPoly,
    pub g: MultiPoly,
}

/// One field's cumulative table: key (d, n), value max product complexity.
pub type SurveyTable = BTreeMap<(u64, usize), BigInt>;

/// The survey over Q and over the sampled primes; all tables and the
/// monotonicity flag.
#[derive(Debug, Clone)]
pub struct SurveyOutcome {
    pub rational_table: SurveyTable,
    pub prime_tables: Vec<(u64, SurveyTable)>,
    pub monotone: bool,
    pub identical: bool,
}

fn survey_product_complexity(
    f: &MultiPoly,
    g: &MultiPoly,
    limits: &Limits,
) -> Result<(u64, usize, BigInt)> {
    let ring = f.ring.clone();
    let n = ring.nvars() - 1;
    let ambient = Ambient::projective(&ring);
    let ca = associated_cycle(&Ideal::principal(f.clone()), &ambient, None, limits)?.cycle;
    let cb = associated_cycle(&Ideal::principal(g.clone()), &ambient, None, limits)?.cycle;
    let d_inst = crate::cycles::complexity(&ca)
        .c
        .max(crate::cycles::complexity(&cb).c);
    let product = intersection_product(&ca, &cb, limits)?;
    let c_prod = crate::cycles::complexity(&product).c;
    let d_u64 = d_inst.to_u64_digits().1.first().copied().unwrap_or(0);
    Ok((d_u64, n, c_prod))
}

fn cumulative_table(points: &[(u64, usize, BigInt)]) -> SurveyTable {
    let mut table = SurveyTable::new();
    let ds: Vec<u64> = points.iter().map(|(d, _, _)| *d).collect();
    let ns: Vec<usize> = points.iter().map(|(_, n, _)| *n).collect();
    for &d in &ds {
        for &n in &ns {
            let max = points
                .iter()
                .filter(|(di, ni, _)| *di <= d && *ni <= n)
                .map(|(_, _, c)| c.clone())
                .max();
            if let Some(max) = max {
                table.insert((d, n), max);
            }
        }
    }
    table
}

/// Run the survey over Q and over each given prime; the per-field tables
/// must be built from the same corpus.
pub fn complexity_survey(
    corpus: &[SurveyInstance],
    primes: &[u64],
    limits: &Limits,
) -> Result<SurveyOutcome> {
    let mut rational_points = Vec::new();
    for inst in corpus {
        rational_points.push(survey_product_complexity(&inst.f, &inst.g, limits)?);
    }
    let rational_table = cumulative_table(&rational_points);
    let mut prime_tables = Vec::new();
    for &p in primes {
        let mut points = Vec::new();
        for inst in corpus {
            let f_p = inst.f.reduce_mod_p(p)?;
            let g_p = inst.g.reduce_mod_p(p)?;
            points.push(survey_product_complexity(&f_p, &g_p, limits)?);
        }
        prime_tables.push((p, cumulative_table(&points)));
    }
    let monotone = table_is_monotone(&rational_table)
        && prime_tables.iter().all(|(_, t)| table_is_monotone(t));
    let identical = prime_tables.iter().all(|(_, t)| *t == rational_table);
    Ok(SurveyOutcome {
        rational_table,
        prime_tables,
        monotone,
        identical,
    })
}

fn table_is_monotone(table: &SurveyTable) -> bool {
    for (&(d1, n1), c1) in table {
        for (&(d2, n2), c2) in table {
            if d1 <= d2 && n1 <= n2 && c1 > c2 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    fn small_sample() -> PrimeSample {
        PrimeSample::new(crate::util::primes_above(3, 8)).unwrap()
    }

    #[test]
    fn associated_cycle_of_fat_line_commutes() {
        // (x^2): multiplicity 2 on both sides at every odd prime
        let r = RingCtx::rational(&["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let instance = TransferInstance::AssociatedCycle {
            ideal: Ideal::principal(x.pow(2).unwrap()),
            codim: None,
        };
        let report = check_commutation(&instance, &small_sample(), &limits()).unwrap();
        assert_eq!(report.verdict, Verdict::CofiniteHolds);
        assert!(report.exceptions.is_empty());
    }

    #[test]
    fn splitting_component_still_commutes() {
        // (x^2 - 2) is prime over Q and splits at primes where 2 is a QR
        let r = RingCtx::rational(&["x"]);
        let x = MultiPoly::var(&r, 0);
        let two = MultiPoly::from_int(&r, 2);
        let instance = TransferInstance::AssociatedCycle {
            ideal: Ideal::principal(x.pow(2).unwrap().sub(&two).unwrap()),
            codim: None,
        };
        let report = check_commutation(&instance, &small_sample(), &limits()).unwrap();
        assert_eq!(report.verdict, Verdict::CofiniteHolds, "{:?}", report.outcomes);
        assert!(report.exceptions_covered(), "exceptions {:?} not in {:?}", report.exceptions, report.precomputed_bad);
    }

    #[test]
    fn hilbert_degree_of_conic_commutes() {
        let r = RingCtx::rational(&["x", "y", "z"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let z = MultiPoly::var(&r, 2);
        let conic = x.mul(&y).unwrap().sub(&z.pow(2).unwrap()).unwrap();
        let instance = TransferInstance::HilbertDegree {
            ideal: Ideal::principal(conic),
        };
        let report = check_commutation(&instance, &small_sample(), &limits()).unwrap();
        assert_eq!(report.verdict, Verdict::CofiniteHolds);
        assert!(report.exceptions.is_empty());
    }

    #[test]
    fn local_length_commutes() {
        // (x^3, x y) at (x): length 1 everywhere
        let r = RingCtx::rational(&["x", "y"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let ideal = Ideal::new(&r, vec![x.pow(3).unwrap(), x.mul(&y).unwrap()]).unwrap();
        let instance = TransferInstance::LocalLength {
            ideal,
            prime: Ideal::principal(x.clone()),
        };
        let report = check_commutation(&instance, &small_sample(), &limits()).unwrap();
        assert_eq!(report.verdict, Verdict::CofiniteHolds, "{:?}", report.outcomes);
    }

    #[test]
    fn compose_commutes() {
        // (y^2 - x) then (z - y^2): 2 (z - x) on both sides
        let xy = RingCtx::rational(&["x", "y"]);
        let yz = RingCtx::rational(&["y", "z"]);
        let x = MultiPoly::var(&xy, 0);
        let yv = MultiPoly::var(&xy, 1);
        let y2 = MultiPoly::var(&yz, 0);
        let z = MultiPoly::var(&yz, 1);
        let instance = TransferInstance::Compose {
            alpha: Ideal::principal(yv.pow(2).unwrap().sub(&x).unwrap()),
            beta: Ideal::principal(z.sub(&y2.pow(2).unwrap()).unwrap()),
            split: (1, 1, 1),
        };
        let report = check_commutation(&instance, &small_sample(), &limits()).unwrap();
        assert_eq!(report.verdict, Verdict::CofiniteHolds, "{:?}", report.outcomes);
    }

    #[test]
    fn survey_on_line_pairs() {
        let r = RingCtx::rational(&["x", "y", "z"]);
        let x = MultiPoly::var(&r, 0);
        let y = MultiPoly::var(&r, 1);
        let corpus = vec![SurveyInstance {
            f: x.clone(),
            g: y.clone(),
        }];
        let outcome = complexity_survey(&corpus, &[5, 7, 11], &limits()).unwrap();
        assert!(outcome.monotone);
        assert!(outcome.identical);
        // lines meet in one reduced point: complexity 2
        let c = outcome.rational_table.values().next().unwrap();
        assert_eq!(*c, BigInt::from(2));
    }
}
