//! Exact intersection theory over the rationals and prime fields.
//!
//! The crate provides, bottom to top: sparse multivariate polynomial
//! arithmetic with exact coefficients, a Buchberger-based Groebner engine
//! with the usual ideal toolkit, Hilbert series and degrees, algebraic
//! cycles with certified minimal primes and local lengths, Koszul
//! intersection multiplicities by reduction to the diagonal, finite
//! correspondences with composition and pushforward, a desk-scale
//! ultraproduct of prime fields with a first-order sentence evaluator, and
//! a transfer harness that checks, prime by prime, that reducing mod p
//! commutes with the cycle-theoretic operations.

pub mod correspondences;
pub mod cycles;
pub mod error;
pub mod koszul;
pub mod limits;
pub mod monomial;
pub mod funcfield;
pub mod groebner;
pub mod hilbert;
pub mod parse;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod transfer;
pub mod ultra;
pub mod univar;
pub mod util;

pub use error::{Error, Result};
pub use limits::Limits;
pub use monomial::{Monomial, MonomialOrder};
pub use poly::{MultiPoly, RingCtx, DEFAULT_ORDER};
pub use scalar::{FieldTag, Scalar};
