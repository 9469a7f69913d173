//! Root systems `B_n` / `D_n` of the spin torus, spin weights, `rho^vee`,
//! the split Cartan involution criterion and the parity bookkeeping for `m`.
//!
//! Characters are written in the basis `chi_1..chi_n`; cocharacters in the
//! dual basis `lambda_1..lambda_n`, so pairings are plain dot products.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::coeff::{Rational, Ring};
use crate::error::{Error, Result};
use crate::json::{dec, dec_seq, dec_table};
use crate::matrix::Matrix;
use crate::spingroup::SignChange;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RootType {
    B,
    D,
}

impl RootType {
    pub fn of_dim(m: usize) -> RootType {
        if m % 2 == 1 {
            RootType::B
        } else {
            RootType::D
        }
    }

    pub fn dim(self, n: usize) -> usize {
        match self {
            RootType::B => 2 * n + 1,
            RootType::D => 2 * n,
        }
    }
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootType::B => "B",
            RootType::D => "D",
        })
    }
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(RootType::B),
            "D" | "d" => Ok(RootType::D),
            _ => Err(Error::Parse(format!("root type must be B or D, got {s:?}"))),
        }
    }
}

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(v: i64) -> Self {
        HalfInt(v)
    }

    pub fn integer(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn as_integer(self) -> Option<i64> {
        (self.0 % 2 == 0).then_some(self.0 / 2)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn check_m(m: usize) -> Result<()> {
    if !(5..=crate::clifford::MAX_DIM).contains(&m) {
        return Err(Error::InvalidDimension(m, "expected 5 <= m <= 63".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Root {
    /// Integer `chi`-coordinates.
    #[serde(serialize_with = "dec_seq")]
    pub coords: Vec<i64>,
    /// Signed height: negative on negative roots.
    #[serde(serialize_with = "dec")]
    pub height: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RootDatum {
    #[serde(rename = "type")]
    pub root_type: RootType,
    #[serde(serialize_with = "dec")]
    pub rank: usize,
    #[serde(serialize_with = "dec")]
    pub m: usize,
    /// Positive roots first (in generation order), then their negatives.
    pub roots: Vec<Root>,
    #[serde(serialize_with = "dec_table")]
    pub simple_roots: Vec<Vec<i64>>,
    /// Simple coroots in `lambda`-coordinates, aligned with `simple_roots`.
    #[serde(serialize_with = "dec_table")]
    pub simple_coroots: Vec<Vec<i64>>,
}

fn unit(n: usize, i: usize, v: i64) -> Vec<i64> {
    let mut out = vec![0; n];
    out[i] = v;
    out
}

fn combine(a: &[i64], b: &[i64], k: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

pub fn build_root_datum(m: usize) -> Result<RootDatum> {
    check_m(m)?;
    let n = m / 2;
    let ty = RootType::of_dim(m);
    let mut positive = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            positive.push(combine(&unit(n, i, 1), &unit(n, j, 1), -1));
            positive.push(combine(&unit(n, i, 1), &unit(n, j, 1), 1));
        }
        if ty == RootType::B {
            positive.push(unit(n, i, 1));
        }
    }
    let mut simple: Vec<Vec<i64>> = (0..n - 1).map(|i| combine(&unit(n, i, 1), &unit(n, i + 1, 1), -1)).collect();
    let mut coroots = simple.clone();
    match ty {
        RootType::B => {
            simple.push(unit(n, n - 1, 1));
            coroots.push(unit(n, n - 1, 2));
        }
        RootType::D => {
            simple.push(combine(&unit(n, n - 2, 1), &unit(n, n - 1, 1), 1));
            coroots.push(combine(&unit(n, n - 2, 1), &unit(n, n - 1, 1), 1));
        }
    }
    // Express each positive root in the simple roots.
    let basis = Matrix::<Rational>::from_fn(n, n, &(), |i, j| Rational::from(simple[j][i]));
    let mut roots = Vec::with_capacity(2 * positive.len());
    for r in &positive {
        let rhs: Vec<Rational> = r.iter().map(|&x| Rational::from(x)).collect();
        let coeffs = basis.solve(&rhs)?;
        let mut height = 0;
        for c in &coeffs {
            if !c.is_integer() || c.is_negative() {
                return Err(Error::Consistency(format!("root {r:?} is not a nonnegative combination of simple roots")));
            }
            height += i64::try_from(c.numer()).map_err(|_| Error::Consistency("height overflow".into()))?;
        }
        roots.push(Root { coords: r.clone(), height });
    }
    let negatives: Vec<Root> =
        roots.iter().map(|r| Root { coords: r.coords.iter().map(|x| -x).collect(), height: -r.height }).collect();
    roots.extend(negatives);
    Ok(RootDatum { root_type: ty, rank: n, m, roots, simple_roots: simple, simple_coroots: coroots })
}

impl RootDatum {
    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.height > 0)
    }

    pub fn negative_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.height < 0)
    }

    pub fn coxeter_number(&self) -> u64 {
        match self.root_type {
            RootType::B => 2 * self.rank as u64,
            RootType::D => 2 * self.rank as u64 - 2,
        }
    }

    /// Coroot of a root, in `lambda`-coordinates.
    pub fn coroot(&self, coords: &[i64]) -> Vec<i64> {
        let norm2: i64 = coords.iter().map(|x| x * x).sum();
        coords.iter().map(|x| 2 * x / norm2).collect()
    }
}

pub fn coxeter_number(m: usize) -> Result<u64> {
    check_m(m)?;
    let n = (m / 2) as u64;
    Ok(if m % 2 == 1 { 2 * n } else { 2 * n - 2 })
}

/// Canonical pairing of a `chi`-coordinate weight with a cocharacter.
pub fn pairing(weight: &[HalfInt], cochar: &[i64]) -> Result<HalfInt> {
    if weight.len() != cochar.len() {
        return Err(Error::RankMismatch(weight.len(), cochar.len()));
    }
    Ok(HalfInt(weight.iter().zip(cochar).map(|(w, c)| w.0 * c).sum()))
}

/// A weight `1/2 (+-chi_1 +- ... +- chi_n)`; `signs[i]` is the sign at `chi_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinWeight(Vec<i8>);

impl SpinWeight {
    pub fn new(signs: Vec<i8>, ty: RootType) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Precondition("spin weight entries must be +-1".into()));
        }
        if ty == RootType::D && signs.iter().filter(|&&s| s == -1).count() % 2 == 1 {
            return Err(Error::Precondition("type D spin weights have an even number of minus signs".into()));
        }
        Ok(SpinWeight(signs))
    }

    /// The weight carried by the wedge of the given (0-based) subset.
    pub fn of_subset(subset: &[usize], n: usize) -> Self {
        let mut signs = vec![-1; n];
        for &i in subset {
            signs[i] = 1;
        }
        SpinWeight(signs)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn coords(&self) -> Vec<HalfInt> {
        self.0.iter().map(|&s| HalfInt(s as i64)).collect()
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// Positions (0-based) carrying a minus sign.
    pub fn minus_positions(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] == -1).collect()
    }
}

impl fmt::Display for SpinWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&x| if x == 1 { '+' } else { '-' }).collect();
        write!(f, "1/2({s})")
    }
}

impl Serialize for SpinWeight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

/// Subsets of `0..n` as increasing sequences in lexicographic order.
pub fn subsets_lex(n: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(1 << n);
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// Subsets indexing the spin module: all of them for odd `m`; for even `m`
/// those whose size has the parity of `n`.
pub fn spin_subsets(m: usize) -> Vec<Vec<usize>> {
    let n = m / 2;
    subsets_lex(n).into_iter().filter(|s| m % 2 == 1 || s.len() % 2 == n % 2).collect()
}

/// The weights of the spin module, listed in the order of [`spin_subsets`].
pub fn spin_weights(m: usize) -> Result<Vec<SpinWeight>> {
    check_m(m)?;
    Ok(spin_subsets(m).iter().map(|s| SpinWeight::of_subset(s, m / 2)).collect())
}

/// Coordinatewise sign flip.
pub fn d_orbit(eps: &SignChange, w: &SpinWeight) -> Result<SpinWeight> {
    if eps.rank() != w.rank() {
        return Err(Error::RankMismatch(eps.rank(), w.rank()));
    }
    Ok(SpinWeight(w.0.iter().zip(eps.signs()).map(|(a, b)| a * b).collect()))
}

/// `D` acts simply transitively on the spin weights.
pub fn check_simple_transitivity(m: usize) -> Result<bool> {
    let weights: BTreeSet<SpinWeight> = spin_weights(m)?.into_iter().collect();
    let group = SignChange::all(m);
    let top = SpinWeight(vec![1; m / 2]);
    let mut orbit = BTreeSet::new();
    let mut stabilizer = 0;
    for e in &group {
        let w = d_orbit(e, &top)?;
        if w == top {
            stabilizer += 1;
        }
        orbit.insert(w);
    }
    Ok(orbit.len() == group.len() && group.len() == weights.len() && orbit == weights && stabilizer == 1)
}

/// `sum_i m_i lambda_i` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Cocharacter(#[serde(serialize_with = "dec_seq")] pub Vec<i64>);

impl Cocharacter {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Membership in the cocharacter lattice of the spin torus.
    pub fn in_lattice(&self) -> bool {
        self.sum() % 2 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoVee {
    #[serde(serialize_with = "dec")]
    pub m: usize,
    pub coeffs: Cocharacter,
    pub integral: bool,
}

/// Half the sum of the positive coroots.
pub fn rho_vee(m: usize) -> Result<RhoVee> {
    let rd = build_root_datum(m)?;
    let mut twice = vec![0i64; rd.rank];
    for r in rd.positive_roots() {
        for (t, c) in twice.iter_mut().zip(rd.coroot(&r.coords)) {
            *t += c;
        }
    }
    debug_assert!(twice.iter().all(|x| x % 2 == 0));
    let coeffs = Cocharacter(twice.iter().map(|x| x / 2).collect());
    let integral = coeffs.in_lattice();
    Ok(RhoVee { m, coeffs, integral })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanReport {
    #[serde(serialize_with = "dec")]
    pub m: usize,
    #[serde(serialize_with = "dec")]
    pub rank: usize,
    #[serde(serialize_with = "dec")]
    pub roots: usize,
    #[serde(serialize_with = "dec")]
    pub even_height_roots: usize,
    /// `rank + even_height_roots`, the dimension of the fixed Lie subalgebra.
    #[serde(serialize_with = "dec")]
    pub fixed_dim: usize,
    #[serde(serialize_with = "dec")]
    pub half_roots: usize,
    pub holds: bool,
}

/// Dimension of the fixed space of `Ad rho^vee(-1)` via root heights.
pub fn cartan_involution_check(m: usize) -> Result<CartanReport> {
    if !rho_vee(m)?.integral {
        return Err(Error::Precondition(format!("rho^vee is not a cocharacter for m = {m}")));
    }
    let rd = build_root_datum(m)?;
    let even = rd.roots.iter().filter(|r| r.height % 2 == 0).count();
    let fixed = rd.rank + even;
    Ok(CartanReport {
        m,
        rank: rd.rank,
        roots: rd.roots.len(),
        even_height_roots: even,
        fixed_dim: fixed,
        half_roots: rd.roots.len() / 2,
        holds: 2 * fixed == rd.roots.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormType {
    Symmetric,
    Skew,
    None,
}

impl fmt::Display for FormType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormType::Symmetric => "symmetric",
            FormType::Skew => "skew",
            FormType::None => "none",
        })
    }
}

/// Symmetry of the invariant form on the spin module.
pub fn expected_form_type(m: usize) -> FormType {
    let n = m / 2;
    match (m % 2, n % 2) {
        (1, _) if n.is_multiple_of(4) || n % 4 == 3 => FormType::Symmetric,
        (1, _) => FormType::Skew,
        (_, 0) if n.is_multiple_of(4) => FormType::Symmetric,
        (_, 0) => FormType::Skew,
        _ => FormType::None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    #[serde(serialize_with = "dec")]
    pub m: usize,
    pub qualifies: bool,
    pub form_type: FormType,
    pub w0_minus_one: bool,
    #[serde(serialize_with = "dec")]
    pub w0_lift_order: u8,
}

pub fn parity_classify(m: usize) -> Result<ParityReport> {
    check_m(m)?;
    let n = m / 2;
    Ok(ParityReport {
        m,
        qualifies: m >= 7 && matches!(m % 8, 0 | 1 | 7),
        form_type: expected_form_type(m),
        w0_minus_one: crate::spingroup::w0_is_minus_one(m),
        w0_lift_order: if (n * (n + 1) / 2).is_multiple_of(2) { 2 } else { 4 },
    })
}

/// `(z, t_1, ..., t_n)` with `z^2 = t_1 ... t_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusPoint<R: Ring> {
    z: R,
    t: Vec<R>,
}

impl<R: Ring> TorusPoint<R> {
    pub fn new(z: R, t: Vec<R>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::Precondition("torus point needs n >= 1".into()));
        }
        let ctx = z.ctx();
        let prod = t.iter().fold(R::one(&ctx), |acc, x| acc.mul(x));
        if z.mul(&z) != prod || z.inv().is_none() {
            return Err(Error::Membership("z^2 != t_1 ... t_n".into()));
        }
        Ok(TorusPoint { z, t })
    }

    pub fn z(&self) -> &R {
        &self.z
    }

    pub fn t(&self) -> &[R] {
        &self.t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.t.len() != rhs.t.len() {
            return Err(Error::RankMismatch(self.t.len(), rhs.t.len()));
        }
        Ok(TorusPoint { z: self.z.mul(&rhs.z), t: self.t.iter().zip(&rhs.t).map(|(a, b)| a.mul(b)).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.z.is_one() && self.t.iter().all(Ring::is_one)
    }

    /// Least `k <= cap` with `self^k = 1`.
    pub fn order(&self, cap: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.mul(self).ok()?;
        }
        None
    }

    /// `lambda(t) = z * prod_{i : minus} t_i^{-1}`.
    pub fn spin_weight_value(&self, w: &SpinWeight) -> Result<R> {
        if w.rank() != self.t.len() {
            return Err(Error::RankMismatch(w.rank(), self.t.len()));
        }
        let mut v = self.z.clone();
        for i in w.minus_positions() {
            v = v.mul(&self.t[i].inv().expect("torus coordinates are units"));
        }
        Ok(v)
    }
}

impl<R: Ring> Serialize for TorusPoint<R> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TorusPoint", 2)?;
        st.serialize_field("z", &self.z.to_string())?;
        st.serialize_field("t", &self.t.iter().map(ToString::to_string).collect::<Vec<_>>())?;
        st.end()
    }
}

/// `t_i = s^(m_i)`, `z = s^(sum m_i / 2)`.
pub fn cochar_eval<R: Ring>(c: &Cocharacter, s: &R) -> Result<TorusPoint<R>> {
    if !c.in_lattice() {
        return Err(Error::Precondition(format!("coefficient sum {} is odd", c.sum())));
    }
    let pow = |e: i64| s.pow_i64(e).ok_or_else(|| Error::Precondition("evaluation point is not a unit".into()));
    let t = c.0.iter().map(|&e| pow(e)).collect::<Result<Vec<_>>>()?;
    TorusPoint::new(pow(c.sum() / 2)?, t)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LParamReport {
    #[serde(serialize_with = "dec")]
    pub n: usize,
    #[serde(serialize_with = "dec")]
    pub sum: i64,
    pub descends: bool,
    pub l_algebraic: bool,
    /// Entries distinct and positive.
    pub regular: bool,
}

pub fn lparam_descent(n: usize, m_vec: &[i64]) -> Result<LParamReport> {
    if m_vec.len() != n || n == 0 {
        return Err(Error::RankMismatch(n, m_vec.len()));
    }
    let sum: i64 = m_vec.iter().sum();
    let distinct: BTreeSet<i64> = m_vec.iter().copied().collect();
    let descends = sum.rem_euclid(2) == ((n * (n + 1) / 2) % 2) as i64;
    Ok(LParamReport {
        n,
        sum,
        descends,
        l_algebraic: descends && matches!(n % 4, 0 | 3) && sum % 2 == 0,
        regular: distinct.len() == n && m_vec.iter().all(|&x| x > 0),
    })
}
