use std::fmt;

use super::{Rational, Ring};
use crate::error::{Error, Result};

/// Element `c0 + c1 z + c2 z^2 + c3 z^3` of `Q(z)` with `z^4 = -1`, i.e. the
/// eighth cyclotomic field. It contains `i = z^2` and `sqrt(2) = z - z^3`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo8 {
    c: [Rational; 4],
}

impl Cyclo8 {
    pub fn new(c: [Rational; 4]) -> Self {
        Cyclo8 { c }
    }

    pub fn rational(q: Rational) -> Self {
        let z = Rational::zero(&());
        Cyclo8 { c: [q, z.clone(), z.clone(), z] }
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.c
    }

    /// `z^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut c: [Rational; 4] = std::array::from_fn(|_| Rational::zero(&()));
        if k < 4 {
            c[k] = Rational::one(&());
        } else {
            c[k - 4] = Rational::from_i64(&(), -1);
        }
        Cyclo8 { c }
    }

    pub fn i() -> Self {
        Self::zeta_pow(2)
    }

    pub fn sqrt2() -> Self {
        Self::zeta_pow(1).sub(&Self::zeta_pow(3))
    }

    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Ring::is_zero)
    }

    /// Square root of `q * u` with `q` rational and `u` in {1, -1, 2, -2}.
    fn sqrt_of_rational(q: &Rational) -> Option<Self> {
        if q.is_zero() {
            return Some(Self::zero(&()));
        }
        let units = [
            (1, Self::one(&())),
            (-1, Self::i()),
            (2, Self::sqrt2()),
            (-2, Self::zeta_pow(1).add(&Self::zeta_pow(3))),
        ];
        for (k, root) in units {
            let r = q.mul(&Rational::from_ints(1, k));
            if let Some(s) = r.sqrt_exact() {
                return Some(root.mul(&Self::rational(s)));
            }
        }
        None
    }

    fn canonical_sign(self) -> Self {
        match self.c.iter().find(|x| !x.is_zero()) {
            Some(lead) if lead.is_negative() => self.neg(),
            _ => self,
        }
    }

    fn single_term(&self) -> Option<(usize, &Rational)> {
        let mut nz = self.c.iter().enumerate().filter(|(_, x)| !x.is_zero());
        let first = nz.next()?;
        nz.next().is_none().then_some(first)
    }
}

impl fmt::Debug for Cyclo8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclo8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            let power = match k {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{k}"),
            };
            if k == 0 {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{mag}*{power}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

fn parse_term(t: &str) -> Result<(usize, Rational)> {
    let bad = || Error::Parse(format!("bad cyclotomic term {t:?}"));
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (coef, power) = match body.find('z') {
        None => (body, None),
        Some(pos) => {
            let coef = body[..pos].trim_end_matches('*');
            (coef, Some(&body[pos + 1..]))
        }
    };
    let k = match power {
        None => 0,
        Some("") => 1,
        Some(p) => {
            let e: usize = p.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if e > 3 {
                return Err(bad());
            }
            e
        }
    };
    let c = if coef.is_empty() {
        if k == 0 {
            return Err(bad());
        }
        Rational::one(&())
    } else {
        coef.parse::<Rational>().map_err(|_| bad())?
    };
    Ok((k, c.scale_i64(sign)))
}

impl Ring for Cyclo8 {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero(_: &()) -> Self {
        Self::rational(Rational::zero(&()))
    }

    fn one(_: &()) -> Self {
        Self::rational(Rational::one(&()))
    }

    fn from_i64(_: &(), v: i64) -> Self {
        Self::rational(Rational::from(v))
    }

    fn from_rational(_: &(), q: &Rational) -> Result<Self> {
        Ok(Self::rational(q.clone()))
    }

    fn add(&self, rhs: &Self) -> Self {
        Cyclo8 { c: std::array::from_fn(|k| self.c[k].add(&rhs.c[k])) }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Cyclo8 { c: std::array::from_fn(|k| self.c[k].sub(&rhs.c[k])) }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut c: [Rational; 4] = std::array::from_fn(|_| Rational::zero(&()));
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a.mul(b);
                let k = i + j;
                if k < 4 {
                    c[k] = c[k].add(&p);
                } else {
                    c[k - 4] = c[k - 4].sub(&p);
                }
            }
        }
        Cyclo8 { c }
    }

    fn neg(&self) -> Self {
        Cyclo8 { c: std::array::from_fn(|k| self.c[k].neg()) }
    }

    fn is_zero(&self) -> bool {
        self.c.iter().all(Ring::is_zero)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Multiply by the three nontrivial Galois conjugates (z -> z^3, z^5, z^7);
        // the full product is the rational field norm.
        let conj = |k: i64| {
            let mut acc = Self::zero(&());
            for (j, c) in self.c.iter().enumerate() {
                acc = acc.add(&Self::zeta_pow(k * j as i64).mul(&Self::rational(c.clone())));
            }
            acc
        };
        let others = conj(3).mul(&conj(5)).mul(&conj(7));
        let norm = self.mul(&others);
        debug_assert!(norm.is_rational());
        let n_inv = norm.c[0].inv()?;
        Some(others.mul(&Self::rational(n_inv)))
    }

    /// Supports elements of the form `q z^(2j)` with `q` rational, which covers
    /// every root the spin-group constructions ask for. Other elements report
    /// `None`.
    fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (k, q) = self.single_term()?;
        let root = match k {
            0 => Self::sqrt_of_rational(q)?,
            2 => Self::sqrt_of_rational(q)?.mul(&Self::zeta_pow(1)),
            _ => return None,
        };
        debug_assert_eq!(root.mul(&root), *self);
        Some(root.canonical_sign())
    }

    fn parse(_: &(), s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty cyclotomic element".into()));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..bytes.len() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' && bytes[i - 1] != b'/' {
                terms.push(&s[start..i]);
                start = i;
            }
        }
        terms.push(&s[start..]);
        let mut out = Self::zero(&());
        for t in terms {
            let (k, c) = parse_term(t)?;
            out.c[k] = out.c[k].add(&c);
        }
        Ok(out)
    }

    fn describe(_: &()) -> String {
        "Q(zeta8)".into()
    }
}
