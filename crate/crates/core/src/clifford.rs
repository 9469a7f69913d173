//! The Clifford algebra of the split form `(x, y) = x_1 y_m + ... + x_m y_1`.
//!
//! The ordered basis of `V` is `e_1, ..., e_n, [u_0,] f_n, ..., f_1`; basis
//! vector `k` (0-based) pairs to 1 with basis vector `m - 1 - k` and to 0 with
//! everything else, so `u_0` (present for odd `m`) is its own partner.
//! Elements are stored sparsely as maps from canonical monomials, i.e.
//! increasing products of distinct basis vectors, to nonzero coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::coeff::{Rational, Ring};
use crate::error::{Error, Result};

/// Largest supported ambient dimension; monomials are bitmasks.
pub const MAX_DIM: usize = 63;

/// A basis vector of `V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E(usize),
    U0,
    F(usize),
}

impl Generator {
    /// Position in the ordered basis, 0-based.
    pub fn index(self, m: usize) -> Result<usize> {
        let n = m / 2;
        match self {
            Generator::E(i) if (1..=n).contains(&i) => Ok(i - 1),
            Generator::F(i) if (1..=n).contains(&i) => Ok(m - i),
            Generator::U0 if m % 2 == 1 => Ok(n),
            g => Err(Error::Parse(format!("generator {g} is not a basis vector for m = {m}"))),
        }
    }

    pub fn from_index(k: usize, m: usize) -> Generator {
        let n = m / 2;
        if k < n {
            Generator::E(k + 1)
        } else if m % 2 == 1 && k == n {
            Generator::U0
        } else {
            Generator::F(m - k)
        }
    }

    fn parse(s: &str, m: usize) -> Result<Generator> {
        let bad = || Error::Parse(format!("bad generator {s:?}"));
        let g = match s.split_at_checked(1).ok_or_else(bad)? {
            ("u", "0") => Generator::U0,
            ("e", i) => Generator::E(i.parse().map_err(|_| bad())?),
            ("f", i) => Generator::F(i.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        g.index(m)?;
        Ok(g)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(i) => write!(f, "e{i}"),
            Generator::U0 => write!(f, "u0"),
            Generator::F(i) => write!(f, "f{i}"),
        }
    }
}

/// Canonical monomial: a set of basis positions, read as their increasing
/// product. Ordered by degree, then lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(u64);

impl Monomial {
    pub const UNIT: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, k: usize) -> bool {
        self.0 >> k & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |k| bits >> k & 1 == 1)
    }

    /// All `2^m` canonical monomials.
    pub fn all(m: usize) -> impl Iterator<Item = Monomial> {
        (0..1u64 << m).map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let x = self.0 ^ other.0;
            if x == 0 {
                Ordering::Equal
            } else if self.0 & x & x.wrapping_neg() != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[inline]
fn sign(count: u32) -> i64 {
    if count.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[inline]
fn bits_above(k: usize) -> u64 {
    if k >= 63 {
        0
    } else {
        !((1u64 << (k + 1)) - 1)
    }
}

/// `mono * b_k` in normal order; at most two terms with integer coefficients.
fn mul_by_generator(a: u64, k: usize, m: usize, out: &mut Vec<(u64, i64)>) {
    let p = m - 1 - k;
    let kbit = 1u64 << k;
    if p > k && a >> p & 1 == 1 {
        // b_k must pass its partner b_p: b_p b_k = 2 - b_k b_p.
        let s_right = sign((a & bits_above(p)).count_ones());
        out.push((a & !(1u64 << p), 2 * s_right));
        if a & kbit == 0 {
            let between = a & bits_above(k) & !bits_above(p - 1);
            out.push((a | kbit, -s_right * sign(between.count_ones())));
        }
    } else {
        let s = sign((a & bits_above(k)).count_ones());
        if a & kbit == 0 {
            out.push((a | kbit, s));
        } else if p == k {
            out.push((a & !kbit, s));
        }
    }
}

/// Product of two canonical monomials as an integer combination.
pub(crate) fn monomial_product(a: Monomial, b: Monomial, m: usize) -> Vec<(u64, i64)> {
    let mut cur: Vec<(u64, i64)> = vec![(a.0, 1)];
    let mut next = Vec::new();
    let mut buf = Vec::with_capacity(2);
    for k in b.indices() {
        next.clear();
        for &(mono, c) in &cur {
            buf.clear();
            mul_by_generator(mono, k, m, &mut buf);
            for &(mm, cc) in &buf {
                next.push((mm, c * cc));
            }
        }
        // merge duplicates
        next.sort_unstable_by_key(|t| t.0);
        cur.clear();
        for &(mm, cc) in &next {
            match cur.last_mut() {
                Some(last) if last.0 == mm => last.1 += cc,
                _ => cur.push((mm, cc)),
            }
        }
        cur.retain(|t| t.1 != 0);
    }
    cur
}

/// Value of the symmetric bilinear form on basis vectors `j`, `k`.
pub fn form(j: usize, k: usize, m: usize) -> i64 {
    (j + k == m - 1) as i64
}

/// `Z/2`-grading class of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GradeParity {
    Even,
    Odd,
    Mixed,
    Zero,
}

/// Element of `C(Q)` with coefficients in `R`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiVector<R: Ring> {
    m: usize,
    ctx: R::Ctx,
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> MultiVector<R> {
    pub fn zero(m: usize, ctx: &R::Ctx) -> Self {
        assert!((1..=MAX_DIM).contains(&m), "ambient dimension {m} out of range");
        MultiVector { m, ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn scalar(m: usize, c: R) -> Self {
        let mut out = Self::zero(m, &c.ctx());
        out.insert(Monomial::UNIT, c);
        out
    }

    pub fn one(m: usize, ctx: &R::Ctx) -> Self {
        Self::scalar(m, R::one(ctx))
    }

    pub fn generator(m: usize, g: Generator, ctx: &R::Ctx) -> Result<Self> {
        let k = g.index(m)?;
        Ok(Self::basis_vector(m, k, ctx))
    }

    pub fn basis_vector(m: usize, k: usize, ctx: &R::Ctx) -> Self {
        assert!(k < m);
        let mut out = Self::zero(m, ctx);
        out.insert(Monomial(1 << k), R::one(ctx));
        out
    }

    /// The vector `sum coords[k] b_k` of `V`.
    pub fn vector(m: usize, coords: &[R], ctx: &R::Ctx) -> Self {
        assert_eq!(coords.len(), m);
        let mut out = Self::zero(m, ctx);
        for (k, c) in coords.iter().enumerate() {
            out.insert(Monomial(1 << k), c.clone());
        }
        out
    }

    pub fn from_terms(m: usize, ctx: &R::Ctx, terms: impl IntoIterator<Item = (Monomial, R)>) -> Result<Self> {
        let mut out = Self::zero(m, ctx);
        for (mono, c) in terms {
            if mono.0 >> m != 0 {
                return Err(Error::Parse(format!("monomial {:#b} is not legal for m = {m}", mono.0)));
            }
            out.accumulate(mono, &c);
        }
        Ok(out)
    }

    fn insert(&mut self, mono: Monomial, c: R) {
        if !c.is_zero() {
            self.terms.insert(mono, c);
        }
    }

    fn accumulate(&mut self, mono: Monomial, c: &R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v = v.add(c);
                if v.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c.clone());
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn ring(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: Monomial) -> R {
        self.terms.get(&mono).cloned().unwrap_or_else(|| R::zero(&self.ctx))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, rhs: &Self) -> Result<()> {
        if self.m != rhs.m {
            return Err(Error::DimensionMismatch(self.m, rhs.m));
        }
        if self.ctx != rhs.ctx {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (mono, c) in &rhs.terms {
            out.accumulate(*mono, c);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, k: &R) -> Self {
        self.map_coeffs(|c| c.mul(k))
    }

    fn map_coeffs(&self, f: impl Fn(&R) -> R) -> Self {
        let mut out = Self::zero(self.m, &self.ctx);
        for (mono, c) in &self.terms {
            out.insert(*mono, f(c));
        }
        out
    }

    /// Clifford product.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_compatible(rhs)?;
        let mut out = Self::zero(self.m, &self.ctx);
        let mut cache: HashMap<(u64, u64), Vec<(u64, i64)>> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let prod = cache.entry((a.0, b.0)).or_insert_with(|| monomial_product(*a, *b, self.m));
                if prod.is_empty() {
                    continue;
                }
                let cab = ca.mul(cb);
                for &(mono, k) in prod.iter() {
                    out.accumulate(Monomial(mono), &cab.scale_i64(k));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.m, &self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The anti-involution determined by `(v_1 ... v_r)^* = (-1)^r v_r ... v_1`.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.m, &self.ctx);
        for (mono, c) in &self.terms {
            let mut rev: Vec<(u64, i64)> = vec![(0, 1)];
            let idx: Vec<usize> = mono.indices().collect();
            for &k in idx.iter().rev() {
                let mut next = Vec::new();
                for &(mm, cc) in &rev {
                    let mut buf = Vec::new();
                    mul_by_generator(mm, k, self.m, &mut buf);
                    next.extend(buf.into_iter().map(|(b, s)| (b, s * cc)));
                }
                rev = next;
            }
            let s = sign(mono.degree());
            for (mm, cc) in rev {
                out.accumulate(Monomial(mm), &c.scale_i64(s * cc));
            }
        }
        out
    }

    pub fn grade_parity(&self) -> GradeParity {
        let even = self.terms.keys().any(|m| m.degree() % 2 == 0);
        let odd = self.terms.keys().any(|m| m.degree() % 2 == 1);
        match (even, odd) {
            (false, false) => GradeParity::Zero,
            (true, false) => GradeParity::Even,
            (false, true) => GradeParity::Odd,
            (true, true) => GradeParity::Mixed,
        }
    }

    /// `g g^*`.
    pub fn clifford_norm(&self) -> Self {
        self * &self.star()
    }

    /// Support contained in the unit monomial; zero counts as scalar.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::UNIT)
    }

    pub fn scalar_value(&self) -> Option<R> {
        self.is_scalar().then(|| self.coeff(Monomial::UNIT))
    }

    /// Coordinates in the ordered basis when the element lies in `V`.
    pub fn as_vector(&self) -> Option<Vec<R>> {
        if !self.terms.keys().all(|m| m.degree() == 1) {
            return None;
        }
        Some((0..self.m).map(|k| self.coeff(Monomial(1 << k))).collect())
    }

    /// Serialization: `c*e1 f2` terms joined by `" + "`, `0` for zero.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Inverse of [`MultiVector::to_text`]. Generators may appear in any order;
    /// the product is normal-ordered.
    pub fn parse(m: usize, ctx: &R::Ctx, s: &str) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&m) {
            return Err(Error::InvalidDimension(m, "unsupported ambient dimension".into()));
        }
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty multivector".into()));
        }
        let mut out = Self::zero(m, ctx);
        for term in s.split(" + ") {
            let term = term.trim();
            let (coef, gens) = split_term(term, m)?;
            let coef = match coef {
                Some(c) => R::parse(ctx, c)?,
                None => R::one(ctx),
            };
            let mut prod = Self::scalar(m, coef);
            for g in gens {
                prod = &prod * &Self::generator(m, g, ctx)?;
            }
            out = out.add(&prod)?;
        }
        Ok(out)
    }
}

/// Splits `"c*e1 f2"` into coefficient text and generators. A term that is
/// only generators has no coefficient; a term without generators is all
/// coefficient.
fn split_term(term: &str, m: usize) -> Result<(Option<&str>, Vec<Generator>)> {
    let gens_of = |s: &str| -> Option<Vec<Generator>> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.is_empty() {
            return None;
        }
        toks.iter().map(|t| Generator::parse(t, m).ok()).collect()
    };
    if let Some(pos) = term.rfind('*') {
        if let Some(g) = gens_of(&term[pos + 1..]) {
            return Ok((Some(term[..pos].trim()), g));
        }
    }
    if let Some(g) = gens_of(term) {
        return Ok((None, g));
    }
    // Reject terms that look like generators but are illegal for m.
    if let Some(tok) = term.rsplit('*').next().and_then(|t| t.split_whitespace().next()) {
        if tok.len() > 1 && matches!(&tok[..1], "e" | "f" | "u") && tok[1..].chars().all(|c| c.is_ascii_digit()) {
            Generator::parse(tok, m)?;
        }
    }
    Ok((Some(term), Vec::new()))
}

impl<R: Ring> fmt::Display for MultiVector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            let mut sep = "*";
            for k in mono.indices() {
                write!(f, "{sep}{}", Generator::from_index(k, self.m))?;
                sep = " ";
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for MultiVector<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiVector(m={}; {self})", self.m)
    }
}

/// Panics on mismatched dimension or ring; use [`MultiVector::mul`] to get
/// an error instead.
impl<R: Ring> std::ops::Mul<&MultiVector<R>> for &MultiVector<R> {
    type Output = MultiVector<R>;

    fn mul(self, rhs: &MultiVector<R>) -> MultiVector<R> {
        MultiVector::mul(self, rhs).expect("compatible multivectors")
    }
}

impl<R: Ring> std::ops::Add<&MultiVector<R>> for &MultiVector<R> {
    type Output = MultiVector<R>;

    fn add(self, rhs: &MultiVector<R>) -> MultiVector<R> {
        MultiVector::add(self, rhs).expect("compatible multivectors")
    }
}

impl<R: Ring> std::ops::Sub<&MultiVector<R>> for &MultiVector<R> {
    type Output = MultiVector<R>;

    fn sub(self, rhs: &MultiVector<R>) -> MultiVector<R> {
        MultiVector::sub(self, rhs).expect("compatible multivectors")
    }
}

impl<R: Ring> std::ops::Neg for &MultiVector<R> {
    type Output = MultiVector<R>;

    fn neg(self) -> MultiVector<R> {
        MultiVector::neg(self)
    }
}

/// The lift `w_i = (e_i - f_i)/sqrt(2)` for even `m`, and
/// `omega_i = sqrt(-1) u_0 w_i` for odd `m`. Both square to `-1`.
pub fn weyl_generator<R: Ring>(i: usize, m: usize, ctx: &R::Ctx) -> Result<MultiVector<R>> {
    let n = m / 2;
    if !(1..=n).contains(&i) {
        return Err(Error::Precondition(format!("index {i} outside 1..={n}")));
    }
    let sqrt2 = R::from_i64(ctx, 2).sqrt().ok_or_else(|| Error::UnsupportedRing("sqrt(2)".into()))?;
    let inv_sqrt2 = sqrt2.inv().expect("nonzero");
    let e = MultiVector::generator(m, Generator::E(i), ctx)?;
    let f = MultiVector::generator(m, Generator::F(i), ctx)?;
    let w = (&e - &f).scale(&inv_sqrt2);
    if m.is_multiple_of(2) {
        return Ok(w);
    }
    let sqrt_m1 = R::from_i64(ctx, -1).sqrt().ok_or_else(|| Error::UnsupportedRing("sqrt(-1)".into()))?;
    let w0 = MultiVector::generator(m, Generator::U0, ctx)?.scale(&sqrt_m1);
    Ok(&w0 * &w)
}

/// `(b_j b_k - b_k b_j) / 4`, the image of an elementary element of `so(Q)`.
pub fn lie_element<R: Ring>(j: usize, k: usize, m: usize, ctx: &R::Ctx) -> Result<MultiVector<R>> {
    let bj = MultiVector::basis_vector(m, j, ctx);
    let bk = MultiVector::basis_vector(m, k, ctx);
    let quarter = R::from_rational(ctx, &Rational::from_ints(1, 4))?;
    Ok((&(&bj * &bk) - &(&bk * &bj)).scale(&quarter))
}
