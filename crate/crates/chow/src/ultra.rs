//! A desk-scale model of the ultraproduct of the prime fields: elements are
//! rules (polynomials in p with rational coefficients) plus finitely many
//! per-prime overrides, and sentences in the ring language are evaluated by
//! brute force at each sampled prime. The nonprincipal ultrafilter is not
//! constructible, so "almost everywhere" is replaced by cofiniteness within
//! the sample, with a capped exception set; genuinely split sentences are
//! reported filter-dependent rather than decided.

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::scalar::inv_mod;
use crate::util::is_prime;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

/// A strictly ascending list of primes with an instance-specific excluded
/// set.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeSample {
    pub primes: Vec<u64>,
    pub excluded: BTreeSet<u64>,
}

impl PrimeSample {
    pub fn new(primes: Vec<u64>) -> Result<PrimeSample> {
        if primes.is_empty() {
            return Err(Error::Validation("empty prime sample".into()));
        }
        for w in primes.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Validation("prime sample must be ascending".into()));
            }
        }
        for &p in &primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        Ok(PrimeSample {
            primes,
            excluded: BTreeSet::new(),
        })
    }

    /// The default transfer sample: the first 50 primes above 3.
    pub fn default_transfer() -> PrimeSample {
        PrimeSample::new(crate::util::primes_above(3, 50)).expect("valid")
    }

    /// The first `count` primes.
    pub fn first(count: usize) -> PrimeSample {
        PrimeSample::new(crate::util::first_primes(count)).expect("valid")
    }

    /// The first `count` odd primes.
    pub fn first_odd(count: usize) -> PrimeSample {
        PrimeSample::new(crate::util::primes_above(2, count)).expect("valid")
    }

    pub fn exclude(&mut self, p: u64) {
        self.excluded.insert(p);
    }

    pub fn active(&self) -> Vec<u64> {
        self.primes
            .iter()
            .copied()
            .filter(|p| !self.excluded.contains(p))
            .collect()
    }

    pub fn descriptor(&self) -> String {
        format!(
            "{} primes in [{}, {}], {} excluded",
            self.primes.len(),
            self.primes.first().unwrap(),
            self.primes.last().unwrap(),
            self.excluded.len()
        )
    }
}

/// An element of the ultraproduct, represented as a rule plus exceptions.
/// The rule is a polynomial in p with rational coefficients; a plain
/// rational is a constant rule. Modulo p the rule collapses to its constant
/// term, so the algebra of rules is exact under +, -, ×.
#[derive(Debug, Clone, PartialEq)]
pub struct UltraElement {
    /// Ascending coefficients of the rule polynomial in p.
    pub rule: Vec<BigRational>,
    /// Per-prime residue overrides.
    pub exceptions: BTreeMap<u64, u64>,
    /// Primes where the element is explicitly undefined.
    pub undefined: BTreeSet<u64>,
}

impl UltraElement {
    pub fn from_rational(q: BigRational) -> UltraElement {
        UltraElement {
            rule: if q.is_zero() { vec![] } else { vec![q] },
            exceptions: BTreeMap::new(),
            undefined: BTreeSet::new(),
        }
    }

    pub fn from_int(n: i64) -> UltraElement {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    /// Rule p^1, p^2 + 2, ...: ascending integer coefficients.
    pub fn from_poly_in_p(coeffs: &[i64]) -> UltraElement {
        UltraElement {
            rule: coeffs
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
            exceptions: BTreeMap::new(),
            undefined: BTreeSet::new(),
        }
    }

    pub fn with_exception(mut self, p: u64, value: u64) -> UltraElement {
        self.exceptions.insert(p, value % p);
        self
    }

    /// Evaluate at a sampled prime. `BadPrime` when a denominator dies and
    /// no override is present.
    pub fn eval(&self, p: u64) -> Result<u64> {
        if self.undefined.contains(&p) {
            return Err(Error::BadPrime(p));
        }
        if let Some(v) = self.exceptions.get(&p) {
            return Ok(v % p);
        }
        let pb = BigInt::from(p);
        let mut acc: u64 = 0;
        let mut p_power: u64 = 1; // p^i mod p is 0 for i >= 1; only i = 0 counts
        for (i, c) in self.rule.iter().enumerate() {
            if (c.denom() % &pb).is_zero() {
                return Err(Error::BadPrime(p));
            }
            if i >= 1 {
                break; // higher coefficients vanish mod p (denominators already checked below)
            }
            let num = c.numer().mod_floor(&pb);
            let den = c.denom().mod_floor(&pb);
            let num64 = to_u64(&num);
            let den64 = to_u64(&den);
            let val = (num64 as u128 * inv_mod(den64, p) as u128 % p as u128) as u64;
            acc = ((acc as u128 + val as u128 * p_power as u128) % p as u128) as u64;
            p_power = 0;
        }
        // denominators of the higher coefficients still matter
        for c in self.rule.iter().skip(1) {
            if (c.denom() % &pb).is_zero() {
                return Err(Error::BadPrime(p));
            }
        }
        Ok(acc)
    }

    /// The almost-everywhere value: the constant term of the rule.
    pub fn ae_value(&self) -> BigRational {
        self.rule.first().cloned().unwrap_or_else(BigRational::zero)
    }

    fn merge_meta(&self, rhs: &UltraElement) -> (BTreeSet<u64>, BTreeSet<u64>) {
        let mut touched: BTreeSet<u64> = self.exceptions.keys().copied().collect();
        touched.extend(rhs.exceptions.keys().copied());
        let mut undef = self.undefined.clone();
        undef.extend(rhs.undefined.iter().copied());
        (touched, undef)
    }

    fn binop(
        &self,
        rhs: &UltraElement,
        rule: Vec<BigRational>,
        op: impl Fn(u64, u64, u64) -> u64,
    ) -> Result<UltraElement> {
        let (touched, undefined) = self.merge_meta(rhs);
        let mut exceptions = BTreeMap::new();
        for p in touched {
            if undefined.contains(&p) {
                continue;
            }
            let a = self.eval(p)?;
            let b = rhs.eval(p)?;
            exceptions.insert(p, op(a, b, p));
        }
        Ok(UltraElement {
            rule,
            exceptions,
            undefined,
        })
    }

    pub fn add(&self, rhs: &UltraElement) -> Result<UltraElement> {
        let rule = poly_add(&self.rule, &rhs.rule);
        self.binop(rhs, rule, |a, b, p| {
            ((a as u128 + b as u128) % p as u128) as u64
        })
    }

    pub fn sub(&self, rhs: &UltraElement) -> Result<UltraElement> {
        let rule = poly_add(&self.rule, &poly_neg(&rhs.rule));
        self.binop(rhs, rule, |a, b, p| {
            ((a as u128 + (p - b % p) as u128) % p as u128) as u64
        })
    }

    pub fn mul(&self, rhs: &UltraElement) -> Result<UltraElement> {
        let rule = poly_mul(&self.rule, &rhs.rule);
        self.binop(rhs, rule, |a, b, p| {
            ((a as u128 * b as u128) % p as u128) as u64
        })
    }

    /// Inverse up to filter equivalence: the constant term of the rule must
    /// be nonzero, otherwise the operand vanishes at all but finitely many
    /// primes.
    pub fn inv(&self) -> Result<UltraElement> {
        let c0 = self.ae_value();
        if c0.is_zero() {
            return Err(Error::DivisionByZeroAlmostEverywhere);
        }
        let mut exceptions = BTreeMap::new();
        let mut undefined = self.undefined.clone();
        for (&p, &v) in &self.exceptions {
            if v % p == 0 {
                undefined.insert(p);
            } else {
                exceptions.insert(p, inv_mod(v % p, p));
            }
        }
        Ok(UltraElement {
            rule: vec![c0.recip()],
            exceptions,
            undefined,
        })
    }

    /// Pointwise agreement over the sample: the primes (outside exclusions)
    /// where the two sides differ or are undefined.
    pub fn disagreement_set(&self, rhs: &UltraElement, sample: &PrimeSample) -> Vec<u64> {
        let mut out = Vec::new();
        for p in sample.active() {
            match (self.eval(p), rhs.eval(p)) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => out.push(p),
            }
        }
        out
    }
}

fn to_u64(b: &BigInt) -> u64 {
    let (_, digits) = b.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
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

fn poly_neg(a: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|c| -c.clone()).collect()
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    while out.last().map_or(false, |c| c.is_zero()) {
        out.pop();
    }
    out
}

// ---------- first-order sentences over the ring language ----------

/// Terms over {0, 1, +, -, ·} with variables and integer literals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Term {
    Int(i64),
    Var(String),
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Formula {
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// A closed formula plus its quantifier depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub formula: Formula,
}

impl Sentence {
    pub fn new(formula: Formula) -> Result<Sentence> {
        let mut bound = Vec::new();
        check_closed(&formula, &mut bound)?;
        Ok(Sentence { formula })
    }

    pub fn quantifier_depth(&self) -> usize {
        fn depth(f: &Formula) -> usize {
            match f {
                Formula::Eq(_, _) => 0,
                Formula::Not(g) => depth(g),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    depth(a).max(depth(b))
                }
                Formula::ForAll(_, g) | Formula::Exists(_, g) => 1 + depth(g),
            }
        }
        depth(&self.formula)
    }

    pub fn negated(&self) -> Sentence {
        Sentence {
            formula: Formula::Not(Box::new(self.formula.clone())),
        }
    }
}

fn check_closed(f: &Formula, bound: &mut Vec<String>) -> Result<()> {
    match f {
        Formula::Eq(a, b) => {
            check_term(a, bound)?;
            check_term(b, bound)
        }
        Formula::Not(g) => check_closed(g, bound),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_closed(a, bound)?;
            check_closed(b, bound)
        }
        Formula::ForAll(v, g) | Formula::Exists(v, g) => {
            bound.push(v.clone());
            check_closed(g, bound)?;
            bound.pop();
            Ok(())
        }
    }
}

fn check_term(t: &Term, bound: &[String]) -> Result<()> {
    match t {
        Term::Int(_) => Ok(()),
        Term::Var(v) => {
            if bound.contains(v) {
                Ok(())
            } else {
                Err(Error::Validation(format!("free variable {v}")))
            }
        }
        Term::Neg(a) => check_term(a, bound),
        Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
            check_term(a, bound)?;
            check_term(b, bound)
        }
    }
}

fn eval_term(t: &Term, p: u64, env: &HashMap<String, u64>) -> u64 {
    match t {
        Term::Int(n) => n.rem_euclid(p as i64) as u64,
        Term::Var(v) => env[v],
        Term::Neg(a) => {
            let x = eval_term(a, p, env);
            (p - x % p) % p
        }
        Term::Add(a, b) => {
            ((eval_term(a, p, env) as u128 + eval_term(b, p, env) as u128) % p as u128) as u64
        }
        Term::Sub(a, b) => {
            let x = eval_term(a, p, env);
            let y = eval_term(b, p, env);
            ((x as u128 + (p - y % p) as u128) % p as u128) as u64
        }
        Term::Mul(a, b) => {
            ((eval_term(a, p, env) as u128 * eval_term(b, p, env) as u128) % p as u128) as u64
        }
    }
}

fn eval_formula(f: &Formula, p: u64, env: &mut HashMap<String, u64>) -> bool {
    match f {
        Formula::Eq(a, b) => eval_term(a, p, env) == eval_term(b, p, env),
        Formula::Not(g) => !eval_formula(g, p, env),
        Formula::And(a, b) => eval_formula(a, p, env) && eval_formula(b, p, env),
        Formula::Or(a, b) => eval_formula(a, p, env) || eval_formula(b, p, env),
        Formula::Implies(a, b) => !eval_formula(a, p, env) || eval_formula(b, p, env),
        Formula::ForAll(v, g) => {
            for x in 0..p {
                let prev = env.insert(v.clone(), x);
                let ok = eval_formula(g, p, env);
                restore(env, v, prev);
                if !ok {
                    return false;
                }
            }
            true
        }
        Formula::Exists(v, g) => {
            for x in 0..p {
                let prev = env.insert(v.clone(), x);
                let ok = eval_formula(g, p, env);
                restore(env, v, prev);
                if ok {
                    return true;
                }
            }
            false
        }
    }
}

fn restore(env: &mut HashMap<String, u64>, v: &str, prev: Option<u64>) {
    match prev {
        Some(x) => {
            env.insert(v.to_string(), x);
        }
        None => {
            env.remove(v);
        }
    }
}

/// Truth value of a closed sentence in F_p by exhaustive enumeration.
pub fn evaluate_sentence(s: &Sentence, p: u64, limits: &Limits) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let depth = s.quantifier_depth();
    if depth > limits.quantifier_depth_cap {
        return Err(Error::DepthExceeded {
            depth,
            bound: limits.quantifier_depth_cap,
        });
    }
    // the cap bounds quantifier enumeration; quantifier-free sentences
    // evaluate in constant time at any prime
    if depth > 0 && p > limits.prime_eval_cap {
        return Err(Error::PrimeTooLarge {
            p,
            bound: limits.prime_eval_cap,
        });
    }
    let mut env = HashMap::new();
    Ok(eval_formula(&s.formula, p, &mut env))
}

/// Cofinite-style verdict for a sentence family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    CofiniteHolds,
    CofiniteFails,
    FilterDependent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CofiniteHolds => write!(f, "cofinite-holds"),
            Verdict::CofiniteFails => write!(f, "cofinite-fails"),
            Verdict::FilterDependent => write!(f, "filter-dependent"),
        }
    }
}

/// Per-prime outcomes and the verdict for one sentence over one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub outcomes: Vec<(u64, bool)>,
    pub verdict: Verdict,
    pub exceptions: Vec<u64>,
    /// (true count, false count) over the active sample.
    pub counts: (usize, usize),
    pub sample: String,
}

impl TransferReport {
    pub fn true_density(&self) -> f64 {
        let total = self.counts.0 + self.counts.1;
        if total == 0 {
            0.0
        } else {
            self.counts.0 as f64 / total as f64
        }
    }

    pub fn false_density(&self) -> f64 {
        let total = self.counts.0 + self.counts.1;
        if total == 0 {
            0.0
        } else {
            self.counts.1 as f64 / total as f64
        }
    }
}

/// Evaluate a sentence over the sample and classify:
/// cofinite-holds when the failures are few and small, symmetrically
/// cofinite-fails, otherwise filter-dependent with both densities.
pub fn los_verdict(s: &Sentence, sample: &PrimeSample, limits: &Limits) -> Result<TransferReport> {
    let active = sample.active();
    let outcomes: Result<Vec<(u64, bool)>> = active
        .par_iter()
        .map(|&p| evaluate_sentence(s, p, limits).map(|b| (p, b)))
        .collect();
    let outcomes = outcomes?;
    let failures: Vec<u64> = outcomes.iter().filter(|(_, b)| !b).map(|(p, _)| *p).collect();
    let successes: Vec<u64> = outcomes.iter().filter(|(_, b)| *b).map(|(p, _)| *p).collect();
    let small_enough = |set: &[u64]| {
        set.len() <= limits.exception_cap
            && set.iter().all(|&p| p <= limits.small_prime_bound)
    };
    let (verdict, exceptions) = if small_enough(&failures) {
        (Verdict::CofiniteHolds, failures.clone())
    } else if small_enough(&successes) {
        (Verdict::CofiniteFails, successes.clone())
    } else {
        (Verdict::FilterDependent, Vec::new())
    };
    Ok(TransferReport {
        counts: (successes.len(), failures.len()),
        outcomes,
        verdict,
        exceptions,
        sample: sample.descriptor(),
    })
}
