//! Monomials as fixed-length exponent vectors and the three monomial orders
//! used by the engine.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Exponent vector; the length always equals the ambient ring's variable
/// count. Exponents are machine integers with checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, rhs: &Monomial) -> Result<Monomial> {
        debug_assert_eq!(self.nvars(), rhs.nvars());
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&rhs.0) {
            out.push(a.checked_add(*b).ok_or(Error::ExponentOverflow)?);
        }
        Ok(Monomial(out))
    }

    /// Componentwise quotient when `rhs` divides `self`.
    pub fn checked_div(&self, rhs: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.nvars(), rhs.nvars());
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&rhs.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, rhs: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn gcd(&self, rhs: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    /// True when the supports are disjoint.
    pub fn coprime(&self, rhs: &Monomial) -> bool {
        self.0.iter().zip(&rhs.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Variable indices with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }
}

/// Total multiplicative monomial order with 1 minimal.
///
/// `Block { split }` compares the first `split` variables grevlex first and
/// breaks ties on the rest grevlex; with the eliminated variables placed in
/// the first block it is an elimination order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block { split: usize },
}

fn cmp_lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn cmp_grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        other => return other,
    }
    // equal degree: the monomial with the smaller last nonzero difference wins
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.nvars(), b.nvars());
        match self {
            MonomialOrder::Lex => cmp_lex(&a.0, &b.0),
            MonomialOrder::GrevLex => cmp_grevlex(&a.0, &b.0),
            MonomialOrder::Block { split } => {
                let s = (*split).min(a.0.len());
                match cmp_grevlex(&a.0[..s], &b.0[..s]) {
                    Ordering::Equal => cmp_grevlex(&a.0[s..], &b.0[s..]),
                    other => other,
                }
            }
        }
    }

    /// True when the order is graded by total degree (grevlex is; lex and
    /// block orders are not).
    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, MonomialOrder::GrevLex)
    }
}
