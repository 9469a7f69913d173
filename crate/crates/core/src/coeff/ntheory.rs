//! Legendre symbols, modular square roots, primality and the projection onto
//! the `l`-torsion of `F_p^*`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::FpElem;
use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; this witness set is exact below 2^64.
const WITNESSES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn miller_rabin_u64(n: u64, a: u64) -> bool {
    let d0 = n - 1;
    let s = d0.trailing_zeros();
    let d = d0 >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES_64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    WITNESSES_64.iter().all(|&a| miller_rabin_u64(n, a))
}

fn small_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&k| is_prime_u64(k)).take(count).collect()
}

/// Primality of an arbitrary nonnegative integer. Exact below 2^64; above it
/// runs Miller-Rabin against the first 64 primes as bases.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.sign() == num_bigint::Sign::Minus {
        return false;
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    for a in small_primes(64) {
        let a = BigInt::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        let mut witness = true;
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                witness = false;
                break;
            }
        }
        if witness {
            return false;
        }
    }
    true
}

fn check_odd_prime(p: &BigInt) -> Result<()> {
    if p.is_odd() && is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidModulus(p.to_string()))
    }
}

/// Legendre symbol `(a | p)` via Euler's criterion.
pub fn legendre(a: &BigInt, p: &BigInt) -> Result<i8> {
    check_odd_prime(p)?;
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Ok(0);
    }
    let e = (p - 1u32) >> 1;
    Ok(if r.modpow(&e, p).is_one() { 1 } else { -1 })
}

pub fn legendre_u64(a: i64, p: u64) -> Result<i8> {
    if p.is_multiple_of(2) || !is_prime_u64(p) {
        return Err(Error::InvalidModulus(p.to_string()));
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// Tonelli-Shanks over `F_p`, returning the root with the smaller residue.
pub(crate) fn sqrt_mod_u64(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    debug_assert_eq!(mul_mod(root, root, p), a);
    Some(root.min(p - root))
}

/// Square root in `F_p`; `None` for quadratic nonresidues.
pub fn sqrt_mod(a: &FpElem) -> Option<FpElem> {
    let p = a.modulus();
    sqrt_mod_u64(a.residue(), p).map(|r| FpElem::from_u64_unchecked(r, a.field()))
}

/// Multiplicative order of `x` modulo the prime `p`, assuming `p` does not divide `x`.
pub fn multiplicative_order(x: u64, p: u64) -> u64 {
    let n = p - 1;
    let mut order = n;
    for (q, _) in factor_u64(n) {
        while order.is_multiple_of(q) && pow_mod(x, order / q, p) == 1 {
            order /= q;
        }
    }
    order
}

/// Trial-division factorization; only used on `p - 1` for search-scale primes.
pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Exponent `c` with `c = 0 mod (p-1)/l` and `c = 1 mod l`.
pub(crate) fn projection_exponent(p: u64, l: u64) -> Result<u64> {
    if l < 3 || !is_prime_u64(l) {
        return Err(Error::Precondition(format!("l = {l} is not an odd prime")));
    }
    let n = p - 1;
    if !n.is_multiple_of(l) {
        return Err(Error::Precondition(format!("{l} does not divide {p} - 1")));
    }
    if (n / l).is_multiple_of(l) {
        return Err(Error::Precondition(format!("{l}^2 divides {p} - 1")));
    }
    let k = n / l;
    // c = k * (k^{-1} mod l)
    let k_inv = pow_mod(k % l, l - 2, l);
    Ok((k * k_inv) % n)
}

/// Projection of `x` onto the `l`-torsion subgroup of `F_p^*`.
pub fn mu_l_projection(x: &FpElem, l: u64) -> Result<FpElem> {
    if x.residue() == 0 {
        return Err(Error::Precondition("x must be nonzero".into()));
    }
    let c = projection_exponent(x.modulus(), l)?;
    Ok(FpElem::from_u64_unchecked(pow_mod(x.residue(), c, x.modulus()), x.field()))
}
