//! Exact field scalars: rationals in lowest terms, or residues modulo a
//! verified prime. A scalar carries its field tag; arithmetic across tags is
//! rejected at the polynomial layer before it can reach these methods.

use crate::error::{Error, Result};
use crate::util::is_prime;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which field a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

impl FieldTag {
    /// Construct the prime-field tag, verifying primality.
    pub fn prime(p: u64) -> Result<FieldTag> {
        if is_prime(p) {
            Ok(FieldTag::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldTag::Rational => 0,
            FieldTag::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element.
///
/// Rationals are kept in lowest terms with positive denominator (the
/// `BigRational` canonical form). Prime residues satisfy `0 <= value < p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Fp { p: u64, value: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldTag {
        match self {
            Scalar::Rational(_) => FieldTag::Rational,
            Scalar::Fp { p, .. } => FieldTag::Prime(*p),
        }
    }

    pub fn zero(field: FieldTag) -> Scalar {
        match field {
            FieldTag::Rational => Scalar::Rational(BigRational::zero()),
            FieldTag::Prime(p) => Scalar::Fp { p, value: 0 },
        }
    }

    pub fn one(field: FieldTag) -> Scalar {
        match field {
            FieldTag::Rational => Scalar::Rational(BigRational::one()),
            FieldTag::Prime(p) => Scalar::Fp { p, value: 1 },
        }
    }

    /// The image of an integer in the field.
    pub fn from_int(field: FieldTag, n: i64) -> Scalar {
        match field {
            FieldTag::Rational => Scalar::Rational(BigRational::from(BigInt::from(n))),
            FieldTag::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { p, value: r }
            }
        }
    }

    /// A rational a/b. Panics if b = 0.
    pub fn rational(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big_rational(q: BigRational) -> Scalar {
        Scalar::Rational(q)
    }

    pub fn fp(p: u64, value: u64) -> Scalar {
        debug_assert!(is_prime(p));
        Scalar::Fp { p, value: value % p }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    fn expect_same(&self, rhs: &Scalar) {
        debug_assert_eq!(
            self.field(),
            rhs.field(),
            "scalar arithmetic across field tags"
        );
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Fp { p, value: a }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                p: *p,
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Fp { p, value } => Scalar::Fp {
                p: *p,
                value: if *value == 0 { 0 } else { p - value },
            },
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.expect_same(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Fp { p, value: a }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                p: *p,
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse; `DivisionByZero` on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Fp { p, value } => Scalar::Fp {
                p: *p,
                value: inv_mod(*value, *p),
            },
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut acc = Scalar::one(self.field());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Reduce a rational scalar modulo p. `BadPrime(p)` when p divides the
    /// denominator; a prime-field scalar must already live mod p.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Scalar> {
        match self {
            Scalar::Rational(q) => {
                let pb = BigInt::from(p);
                let den = q.denom();
                if (den % &pb).is_zero() {
                    return Err(Error::BadPrime(p));
                }
                let num_red = q.numer().mod_floor_u64(p);
                let den_red = den.mod_floor_u64(p);
                let value = ((num_red as u128 * inv_mod(den_red, p) as u128) % p as u128) as u64;
                Ok(Scalar::Fp { p, value })
            }
            Scalar::Fp { p: q, value } => {
                if *q == p {
                    Ok(Scalar::Fp { p, value: *value })
                } else {
                    Err(Error::MixedContext(format!(
                        "cannot reduce an F{q} value modulo {p}"
                    )))
                }
            }
        }
    }

    /// The underlying rational, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Fp { .. } => None,
        }
    }

    /// The residue, if this is a prime-field scalar.
    pub fn as_fp(&self) -> Option<u64> {
        match self {
            Scalar::Fp { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        let r = self.mod_floor(&BigInt::from(p));
        let (_, digits) = r.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => unreachable!("residue below u64 prime"),
        }
    }
}

/// Inverse of a modulo prime p via extended Euclid.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inverse of a non-unit");
    old_s.rem_euclid(p as i128) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Sign-aware magnitude used by cycle complexity: |a| for rationals, the
/// centered representative for residues.
pub fn scalar_abs_numer(s: &Scalar) -> BigInt {
    match s {
        Scalar::Rational(q) => q.numer().abs(),
        Scalar::Fp { p, value } => {
            let half = p / 2;
            if *value > half {
                BigInt::from(p - value)
            } else {
                BigInt::from(*value)
            }
        }
    }
}
