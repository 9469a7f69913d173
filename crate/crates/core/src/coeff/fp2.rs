use std::fmt;

use super::ntheory::{is_prime_u64, mul_mod, pow_mod, sqrt_mod_u64};
use super::{FpElem, PrimeField, Rational, Ring};
use crate::error::{Error, Result};

/// `F_{p^2} = F_p(s)` with `s^2 = d`, `d` the least quadratic nonresidue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticExtension {
    p: u64,
    d: u64,
}

impl QuadraticExtension {
    pub fn new(p: u64) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime_u64(p) {
            return Err(Error::InvalidModulus(p.to_string()));
        }
        let d = (2..p).find(|&d| pow_mod(d, (p - 1) / 2, p) == p - 1).expect("odd prime has a nonresidue");
        Ok(QuadraticExtension { p, d })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The nonresidue adjoined as `s^2`.
    pub fn nonresidue(&self) -> u64 {
        self.d
    }

    pub fn base(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated")
    }

    pub fn embed(&self, x: &FpElem) -> Fp2Elem {
        assert_eq!(x.modulus(), self.p);
        Fp2Elem { a: x.residue(), b: 0, f: *self }
    }
}

/// Element `a + b s` of a quadratic extension of `F_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp2Elem {
    a: u64,
    b: u64,
    f: QuadraticExtension,
}

impl Fp2Elem {
    pub fn new(f: &QuadraticExtension, a: u64, b: u64) -> Self {
        Fp2Elem { a: a % f.p, b: b % f.p, f: *f }
    }

    pub fn parts(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    fn p(&self) -> u64 {
        self.f.p
    }

    fn add_mod(&self, x: u64, y: u64) -> u64 {
        ((x as u128 + y as u128) % self.p() as u128) as u64
    }

    fn sub_mod(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            self.p() - (y - x)
        }
    }

    fn canonical(self) -> Self {
        let n = self.neg();
        if (n.a, n.b) < (self.a, self.b) {
            n
        } else {
            self
        }
    }
}

impl fmt::Debug for Fp2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fp2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*s mod {}", self.a, self.b, self.f.p)
    }
}

impl Ring for Fp2Elem {
    type Ctx = QuadraticExtension;

    fn ctx(&self) -> QuadraticExtension {
        self.f
    }

    fn zero(ctx: &QuadraticExtension) -> Self {
        Fp2Elem { a: 0, b: 0, f: *ctx }
    }

    fn one(ctx: &QuadraticExtension) -> Self {
        Fp2Elem { a: 1, b: 0, f: *ctx }
    }

    fn from_i64(ctx: &QuadraticExtension, v: i64) -> Self {
        Fp2Elem { a: (v as i128).rem_euclid(ctx.p as i128) as u64, b: 0, f: *ctx }
    }

    fn from_rational(ctx: &QuadraticExtension, q: &Rational) -> Result<Self> {
        Ok(ctx.embed(&FpElem::from_rational(&ctx.base(), q)?))
    }

    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.f, rhs.f, "mixed moduli in F_p^2 arithmetic");
        Fp2Elem { a: self.add_mod(self.a, rhs.a), b: self.add_mod(self.b, rhs.b), f: self.f }
    }

    fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.f, rhs.f, "mixed moduli in F_p^2 arithmetic");
        Fp2Elem { a: self.sub_mod(self.a, rhs.a), b: self.sub_mod(self.b, rhs.b), f: self.f }
    }

    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.f, rhs.f, "mixed moduli in F_p^2 arithmetic");
        let p = self.p();
        let bd = mul_mod(mul_mod(self.b, rhs.b, p), self.f.d, p);
        let a = self.add_mod(mul_mod(self.a, rhs.a, p), bd);
        let b = self.add_mod(mul_mod(self.a, rhs.b, p), mul_mod(self.b, rhs.a, p));
        Fp2Elem { a, b, f: self.f }
    }

    fn neg(&self) -> Self {
        Fp2Elem { a: self.sub_mod(0, self.a), b: self.sub_mod(0, self.b), f: self.f }
    }

    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.p();
        // (a + bs)^{-1} = (a - bs) / (a^2 - d b^2)
        let norm = self.sub_mod(mul_mod(self.a, self.a, p), mul_mod(mul_mod(self.b, self.b, p), self.f.d, p));
        let ni = pow_mod(norm, p - 2, p);
        Some(Fp2Elem { a: mul_mod(self.a, ni, p), b: mul_mod(self.sub_mod(0, self.b), ni, p), f: self.f })
    }

    /// Square root via the norm map; every element of `F_p` has one here.
    fn sqrt(&self) -> Option<Self> {
        let p = self.p();
        let d = self.f.d;
        if self.is_zero() {
            return Some(*self);
        }
        let root = if self.b == 0 {
            match sqrt_mod_u64(self.a, p) {
                Some(r) => Fp2Elem { a: r, b: 0, f: self.f },
                None => {
                    // a = d * (a/d) with a/d a square
                    let ad = mul_mod(self.a, pow_mod(d, p - 2, p), p);
                    let r = sqrt_mod_u64(ad, p)?;
                    Fp2Elem { a: 0, b: r, f: self.f }
                }
            }
        } else {
            let norm = self.sub_mod(mul_mod(self.a, self.a, p), mul_mod(mul_mod(self.b, self.b, p), d, p));
            let n = sqrt_mod_u64(norm, p)?;
            let half = pow_mod(2, p - 2, p);
            let mut found = None;
            for cand in [self.add_mod(self.a, n), self.sub_mod(self.a, n)] {
                let c2 = mul_mod(cand, half, p);
                if let Some(c) = sqrt_mod_u64(c2, p) {
                    if c != 0 {
                        let y = mul_mod(self.b, pow_mod(mul_mod(2, c, p), p - 2, p), p);
                        found = Some(Fp2Elem { a: c, b: y, f: self.f });
                        break;
                    }
                }
            }
            found?
        };
        debug_assert_eq!(root.mul(&root), *self);
        Some(root.canonical())
    }

    /// Accepts `"a+b*s mod p"` or a bare integer.
    fn parse(ctx: &QuadraticExtension, s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not an element of F_{}^2: {s:?}", ctx.p));
        let s = s.trim();
        let (body, modulus) = match s.split_once("mod") {
            Some((v, m)) => (v.trim(), Some(m.trim())),
            None => (s, None),
        };
        if let Some(m) = modulus {
            let m: u64 = m.parse().map_err(|_| bad())?;
            if m != ctx.p {
                return Err(Error::RingMismatch);
            }
        }
        let base = ctx.base();
        let (a, b) = match body.split_once('+') {
            Some((a, b)) => {
                let b = b.trim().strip_suffix("*s").ok_or_else(bad)?;
                (a.trim(), b.trim())
            }
            None => (body, "0"),
        };
        let a: i64 = a.parse().map_err(|_| bad())?;
        let b: i64 = b.parse().map_err(|_| bad())?;
        Ok(Fp2Elem { a: base.elem(a).residue(), b: base.elem(b).residue(), f: *ctx })
    }

    fn describe(ctx: &QuadraticExtension) -> String {
        format!("F_{}^2", ctx.p)
    }
}
