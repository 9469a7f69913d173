use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;

use super::ntheory::{is_prime_u64, mul_mod, pow_mod, sqrt_mod_u64};
use super::{Rational, Ring};
use crate::error::{Error, Result};

/// The prime field `F_p` for an odd prime `p < 2^64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p % 2 == 1 && is_prime_u64(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::InvalidModulus(p.to_string()))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn elem(&self, v: i64) -> FpElem {
        FpElem::from_i64(self, v)
    }
}

/// Residue class modulo an odd prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    r: u64,
    p: u64,
}

impl FpElem {
    pub(crate) fn from_u64_unchecked(r: u64, f: PrimeField) -> Self {
        FpElem { r: r % f.p, p: f.p }
    }

    pub fn residue(&self) -> u64 {
        self.r
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    #[inline]
    fn same(&self, rhs: &Self) {
        assert_eq!(self.p, rhs.p, "mixed moduli in F_p arithmetic");
    }
}

impl fmt::Debug for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.r, self.p)
    }
}

impl Ring for FpElem {
    type Ctx = PrimeField;

    fn ctx(&self) -> PrimeField {
        self.field()
    }

    fn zero(ctx: &PrimeField) -> Self {
        FpElem { r: 0, p: ctx.p }
    }

    fn one(ctx: &PrimeField) -> Self {
        FpElem { r: 1, p: ctx.p }
    }

    fn from_i64(ctx: &PrimeField, v: i64) -> Self {
        FpElem { r: (v as i128).rem_euclid(ctx.p as i128) as u64, p: ctx.p }
    }

    fn from_rational(ctx: &PrimeField, q: &Rational) -> Result<Self> {
        let p = num_bigint::BigInt::from(ctx.p);
        let n = q.numer().mod_floor(&p).to_u64().expect("reduced");
        let d = q.denom().mod_floor(&p).to_u64().expect("reduced");
        let d = FpElem { r: d, p: ctx.p };
        let d_inv = d
            .inv()
            .ok_or_else(|| Error::Precondition(format!("denominator of {q} vanishes mod {}", ctx.p)))?;
        Ok(FpElem { r: n, p: ctx.p }.mul(&d_inv))
    }

    fn add(&self, rhs: &Self) -> Self {
        self.same(rhs);
        let s = self.r as u128 + rhs.r as u128;
        FpElem { r: (s % self.p as u128) as u64, p: self.p }
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.same(rhs);
        let r = if self.r >= rhs.r { self.r - rhs.r } else { self.p - (rhs.r - self.r) };
        FpElem { r, p: self.p }
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.same(rhs);
        FpElem { r: mul_mod(self.r, rhs.r, self.p), p: self.p }
    }

    fn neg(&self) -> Self {
        FpElem { r: if self.r == 0 { 0 } else { self.p - self.r }, p: self.p }
    }

    fn is_zero(&self) -> bool {
        self.r == 0
    }

    fn inv(&self) -> Option<Self> {
        (self.r != 0).then(|| FpElem { r: pow_mod(self.r, self.p - 2, self.p), p: self.p })
    }

    fn sqrt(&self) -> Option<Self> {
        sqrt_mod_u64(self.r, self.p).map(|r| FpElem { r, p: self.p })
    }

    /// Accepts `"18 mod 41"` (the modulus must match) or a bare integer.
    fn parse(ctx: &PrimeField, s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not an element of F_{}: {s:?}", ctx.p));
        let s = s.trim();
        let (val, modulus) = match s.split_once("mod") {
            Some((v, m)) => (v.trim(), Some(m.trim())),
            None => (s, None),
        };
        if let Some(m) = modulus {
            let m: u64 = m.parse().map_err(|_| bad())?;
            if m != ctx.p {
                return Err(Error::RingMismatch);
            }
        }
        let v: i64 = val.parse().map_err(|_| bad())?;
        Ok(Self::from_i64(ctx, v))
    }

    fn describe(ctx: &PrimeField) -> String {
        format!("F_{}", ctx.p)
    }

    fn is_one(&self) -> bool {
        self.r == 1
    }
}
