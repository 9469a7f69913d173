//! Exact coefficient rings and elementary number theory.
//!
//! Every ring here is a field; the [`Ring`] trait is the single interface the
//! Clifford algebra, the matrix code and the linear solvers are written
//! against. Rings whose elements carry runtime data (the prime of `F_p`)
//! expose it through an associated context type so that constants can be
//! built without an existing element at hand.

mod cyclo8;
mod fp;
mod fp2;
pub mod ntheory;
mod rational;

use std::fmt;
use std::hash::Hash;

pub use cyclo8::Cyclo8;
pub use fp::{FpElem, PrimeField};
pub use fp2::{Fp2Elem, QuadraticExtension};
pub use ntheory::{is_prime, is_prime_u64, legendre, legendre_u64, mu_l_projection, sqrt_mod};
pub use rational::Rational;

use crate::error::Result;

/// A commutative coefficient field with exact arithmetic.
///
/// `Display` is the serialization format and [`Ring::parse`] its inverse.
pub trait Ring: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Runtime description of the ring (unit type for `Q` and `Q(zeta_8)`).
    type Ctx: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    /// Image of a rational number; fails when the denominator is not invertible.
    fn from_rational(ctx: &Self::Ctx, q: &Rational) -> Result<Self>;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    /// A canonical square root, or `None` when none exists in the ring.
    fn sqrt(&self) -> Option<Self>;

    fn parse(ctx: &Self::Ctx, s: &str) -> Result<Self>;

    /// Short human name of the ring, used in reports.
    fn describe(ctx: &Self::Ctx) -> String;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn scale_i64(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(&self.ctx(), k))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents need an invertible base.
    fn pow_i64(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }
}
