//! `GSpin_m` and `Spin_m` inside the even Clifford algebra, the covering map
//! onto `SO_m`, explicit Weyl lifts, and the extension of the sign-change
//! group by `{+-1}`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::clifford::{weyl_generator, GradeParity, MultiVector};
use crate::coeff::{Cyclo8, Ring};
use crate::error::{Error, Result};
use crate::json::{dec, dec_seq};
use crate::matrix::Matrix;
use crate::rootdata::RootType;

/// An `m x m` matrix with `g J g^t = J` and `det g = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct SoMatrix<R: Ring>(Matrix<R>);

impl<R: Ring> SoMatrix<R> {
    pub fn new(g: Matrix<R>) -> Result<Self> {
        if !g.is_square() {
            return Err(Error::DimensionMismatch(g.rows(), g.cols()));
        }
        let j = Matrix::anti_identity(g.rows(), g.ring());
        if g.mul(&j)?.mul(&g.transpose())? != j {
            return Err(Error::Membership("g J g^t != J".into()));
        }
        if !g.det()?.is_one() {
            return Err(Error::Membership("determinant is not 1".into()));
        }
        Ok(SoMatrix(g))
    }

    pub fn identity(m: usize, ctx: &R::Ctx) -> Self {
        SoMatrix(Matrix::identity(m, ctx))
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<R> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(SoMatrix(self.0.mul(&rhs.0)?))
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.0.to_json()
    }

    pub fn from_json(v: &serde_json::Value, ctx: &R::Ctx) -> Result<Self> {
        Self::new(Matrix::from_json(v, ctx)?)
    }
}

impl<R: Ring> Serialize for SoMatrix<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<R: Ring> fmt::Debug for SoMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SO{:?}", self.0)
    }
}

fn check_m(m: usize) -> Result<()> {
    if !(2..=crate::clifford::MAX_DIM).contains(&m) {
        return Err(Error::InvalidDimension(m, "expected 2 <= m <= 63".into()));
    }
    Ok(())
}

/// An element of the sign-change subgroup `D` of the Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SignChange(#[serde(serialize_with = "dec_seq")] Vec<i8>);

impl SignChange {
    /// Entries must be `+-1`; for even `m` the number of `-1` entries must be even.
    pub fn new(signs: Vec<i8>, m: usize) -> Result<Self> {
        check_m(m)?;
        if signs.len() != m / 2 {
            return Err(Error::InvalidSignChange(format!("expected {} entries, got {}", m / 2, signs.len())));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSignChange("entries must be 1 or -1".into()));
        }
        let out = SignChange(signs);
        if m.is_multiple_of(2) && out.minus_count() % 2 == 1 {
            return Err(Error::InvalidSignChange("odd number of sign flips for even m".into()));
        }
        Ok(out)
    }

    pub fn identity(n: usize) -> Self {
        SignChange(vec![1; n])
    }

    /// Every element of `D` for the given `m`, ordered by the bitmask of
    /// flipped positions (bit `i` set iff entry `i` is `-1`).
    pub fn all(m: usize) -> Vec<SignChange> {
        let n = m / 2;
        (0..1u64 << n)
            .filter(|mask| m % 2 == 1 || mask.count_ones() % 2 == 0)
            .map(|mask| SignChange((0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect()))
            .collect()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn minus_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == -1).count()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&s| s == 1)
    }

    /// Pointwise product (the group law of `D`).
    pub fn compose(&self, rhs: &Self) -> Self {
        SignChange(self.0.iter().zip(&rhs.0).map(|(a, b)| a * b).collect())
    }

    fn mask(&self) -> u64 {
        self.0.iter().enumerate().filter(|(_, &s)| s == -1).fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// Weyl group element `(eps, sigma)`: the permutation `sigma` followed by the
/// sign change `eps`. `perm[j]` is the 0-based image of `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SignedPerm {
    pub signs: SignChange,
    #[serde(serialize_with = "dec_seq")]
    pub perm: Vec<usize>,
}

impl SignedPerm {
    pub fn new(signs: SignChange, perm: Vec<usize>) -> Result<Self> {
        let n = signs.rank();
        if perm.len() != n {
            return Err(Error::InvalidPermutation(format!("expected {n} entries, got {}", perm.len())));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!("{perm:?} is not a permutation of 0..{n}")));
            }
        }
        Ok(SignedPerm { signs, perm })
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm { signs: SignChange::identity(n), perm: (0..n).collect() }
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    /// `(eps, s)(eps', s') = (eps * s.eps', s s')` where `(s.eps')_{s(j)} = eps'_j`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let n = self.rank();
        let mut moved = vec![1i8; n];
        for j in 0..n {
            moved[self.perm[j]] = rhs.signs.0[j];
        }
        SignedPerm {
            signs: self.signs.compose(&SignChange(moved)),
            perm: (0..n).map(|j| self.perm[rhs.perm[j]]).collect(),
        }
    }

    /// The whole Weyl group of `SO_m` (type B for odd `m`, type D for even `m`).
    pub fn all(m: usize) -> Vec<SignedPerm> {
        let n = m / 2;
        let perms = permutations(n);
        let mut out = Vec::new();
        for s in SignChange::all(m) {
            for p in &perms {
                out.push(SignedPerm { signs: s.clone(), perm: p.clone() });
            }
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// The involution `d_eps`: for each flipped `i`, swaps the `e_i` and `f_i`
/// columns; for odd `m` the middle entry is `(-1)^(#flips)`.
pub fn d_epsilon_matrix<R: Ring>(eps: &SignChange, m: usize, ctx: &R::Ctx) -> Result<SoMatrix<R>> {
    let eps = SignChange::new(eps.0.clone(), m)?;
    let mut target: Vec<usize> = (0..m).collect();
    for (i, &s) in eps.0.iter().enumerate() {
        if s == -1 {
            target.swap(i, m - 1 - i);
        }
    }
    let mut g = Matrix::zeros(m, m, ctx);
    for (col, &row) in target.iter().enumerate() {
        g.set(row, col, R::one(ctx));
    }
    if m % 2 == 1 && eps.minus_count() % 2 == 1 {
        g.set(m / 2, m / 2, R::from_i64(ctx, -1));
    }
    SoMatrix::new(g)
}

/// `diag(M_sigma, [1], M_sigma^at)` with `(M_sigma)_{sigma(j), j} = 1`.
pub fn permutation_section<R: Ring>(perm: &[usize], m: usize, ctx: &R::Ctx) -> Result<SoMatrix<R>> {
    check_m(m)?;
    let n = m / 2;
    let w = SignedPerm::new(SignChange::identity(n), perm.to_vec())?;
    let mut g = Matrix::zeros(m, m, ctx);
    for j in 0..n {
        let i = w.perm[j];
        // e_j -> e_{sigma(j)} and f_j -> f_{sigma(j)}
        g.set(i, j, R::one(ctx));
        g.set(m - 1 - i, m - 1 - j, R::one(ctx));
    }
    if m % 2 == 1 {
        g.set(n, n, R::one(ctx));
    }
    SoMatrix::new(g)
}

/// The section `W -> N(T_SO)`, `s(eps, sigma) = d_eps s(sigma)`.
pub fn weyl_section<R: Ring>(w: &SignedPerm, m: usize, ctx: &R::Ctx) -> Result<SoMatrix<R>> {
    if w.rank() != m / 2 {
        return Err(Error::RankMismatch(w.rank(), m / 2));
    }
    d_epsilon_matrix(&w.signs, m, ctx)?.mul(&permutation_section(&w.perm, m, ctx)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinClass {
    Spin,
    GSpin,
    Neither,
}

/// Conjugates each basis vector; `None` if some image leaves `V`.
fn conjugation_columns<R: Ring>(g: &MultiVector<R>) -> Option<Vec<Vec<R>>> {
    let m = g.dim();
    let gs = g.star();
    (0..m)
        .map(|k| {
            let v = MultiVector::basis_vector(m, k, g.ring());
            (&(g * &v) * &gs).as_vector()
        })
        .collect()
}

type NormAndColumns<R> = Option<(R, Vec<Vec<R>>)>;

fn classify_with_columns<R: Ring>(g: &MultiVector<R>) -> (SpinClass, NormAndColumns<R>) {
    if g.grade_parity() != GradeParity::Even {
        return (SpinClass::Neither, None);
    }
    let Some(norm) = g.clifford_norm().scalar_value() else { return (SpinClass::Neither, None) };
    if norm.inv().is_none() {
        return (SpinClass::Neither, None);
    }
    let Some(cols) = conjugation_columns(g) else { return (SpinClass::Neither, None) };
    let class = if norm.is_one() { SpinClass::Spin } else { SpinClass::GSpin };
    (class, Some((norm, cols)))
}

/// Even parity, unit scalar norm and `g V g^* in V`; `Spin` iff the norm is 1.
pub fn is_gspin<R: Ring>(g: &MultiVector<R>) -> SpinClass {
    classify_with_columns(g).0
}

/// A verified element of `GSpin_m`, with its norm and projection cached.
#[derive(Clone)]
pub struct SpinElement<R: Ring> {
    g: MultiVector<R>,
    norm: R,
    image: SoMatrix<R>,
}

impl<R: Ring> SpinElement<R> {
    pub fn new(g: MultiVector<R>) -> Result<Self> {
        let (class, data) = classify_with_columns(&g);
        let Some((norm, cols)) = data else {
            return Err(Error::Membership(format!("{g} is not in GSpin_{}", g.dim())));
        };
        debug_assert_ne!(class, SpinClass::Neither);
        // v -> N(g)^-1 g v g^* preserves the form for every g in GSpin.
        let m = g.dim();
        let ninv = norm.inv().expect("unit norm");
        let image = SoMatrix::new(Matrix::from_fn(m, m, g.ring(), |i, j| cols[j][i].mul(&ninv)))?;
        Ok(SpinElement { g, norm, image })
    }

    pub fn one(m: usize, ctx: &R::Ctx) -> Self {
        SpinElement { g: MultiVector::one(m, ctx), norm: R::one(ctx), image: SoMatrix::identity(m, ctx) }
    }

    pub fn element(&self) -> &MultiVector<R> {
        &self.g
    }

    pub fn norm(&self) -> &R {
        &self.norm
    }

    pub fn is_spin(&self) -> bool {
        self.norm.is_one()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn ring(&self) -> &R::Ctx {
        self.g.ring()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let g = self.g.mul(&rhs.g)?;
        Ok(SpinElement { g, norm: self.norm.mul(&rhs.norm), image: self.image.mul(&rhs.image)? })
    }

    pub fn neg(&self) -> Self {
        SpinElement { g: self.g.neg(), norm: self.norm.clone(), image: self.image.clone() }
    }
}

impl<R: Ring> fmt::Debug for SpinElement<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinElement({})", self.g)
    }
}

/// The covering map `pi: v -> g v g^*` (normalized by the norm for GSpin).
pub fn project<R: Ring>(g: &SpinElement<R>) -> SoMatrix<R> {
    g.image.clone()
}

/// Product of the Weyl generators over the flipped indices, in increasing order.
pub fn lift_sign_change<R: Ring>(eps: &SignChange, m: usize, ctx: &R::Ctx) -> Result<SpinElement<R>> {
    let eps = SignChange::new(eps.0.clone(), m)?;
    let mut g = MultiVector::one(m, ctx);
    for (i, &s) in eps.0.iter().enumerate() {
        if s == -1 {
            g = g.mul(&weyl_generator(i + 1, m, ctx)?)?;
        }
    }
    SpinElement::new(g)
}

/// Least `k <= cap` with `g^k = 1`.
pub fn element_order<R: Ring>(g: &MultiVector<R>, cap: u64) -> Option<u64> {
    let one = MultiVector::one(g.dim(), g.ring());
    let mut acc = g.clone();
    for k in 1..=cap {
        if acc == one {
            return Some(k);
        }
        acc = &acc * g;
    }
    None
}

/// Whether the longest Weyl element acts as `-1` on characters.
pub fn w0_is_minus_one(m: usize) -> bool {
    m % 2 == 1 || (m / 2).is_multiple_of(2)
}

/// The canonical lift of `w^0 = -1`: the product of all Weyl generators.
pub fn w0_lift<R: Ring>(m: usize, ctx: &R::Ctx) -> Result<SpinElement<R>> {
    if !w0_is_minus_one(m) {
        return Err(Error::Precondition(format!("w0 is not -1 for m = {m}")));
    }
    lift_sign_change(&SignChange(vec![-1; m / 2]), m, ctx)
}

/// Outcome of the exhaustive section search for `1 -> {+-1} -> D~ -> D -> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    #[serde(serialize_with = "dec")]
    pub rank: usize,
    #[serde(rename = "type")]
    pub root_type: RootType,
    #[serde(serialize_with = "dec")]
    pub group_order: usize,
    pub splits: bool,
    /// For a splitting: the sign applied to each canonical lift.
    pub section: Option<Vec<SectionEntry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionEntry {
    pub eps: SignChange,
    #[serde(serialize_with = "dec")]
    pub sign: i8,
}

/// Largest `|D|` searched exhaustively.
pub const MAX_EXTENSION_ORDER: usize = 16;

/// Searches all `2^|D|` sign assignments `d -> +-lift(d)` for a multiplicative
/// section.
pub fn extension_splits(n: usize, ty: RootType) -> Result<ExtensionReport> {
    if n == 0 {
        return Err(Error::Precondition("rank must be positive".into()));
    }
    let m = match ty {
        RootType::B => 2 * n + 1,
        RootType::D => 2 * n,
    };
    let group = SignChange::all(m);
    let order = group.len();
    if order > MAX_EXTENSION_ORDER {
        return Err(Error::Infeasible(format!("|D| = {order} exceeds {MAX_EXTENSION_ORDER}")));
    }
    let lifts: Vec<MultiVector<Cyclo8>> =
        group.iter().map(|e| lift_sign_change::<Cyclo8>(e, m, &()).map(|g| g.g)).collect::<Result<_>>()?;
    let index_of = |mask: u64| group.iter().position(|e| e.mask() == mask).expect("closed under products");
    // lift(a) lift(b) = c(a, b) lift(ab)
    let mut cocycle = vec![vec![0i8; order]; order];
    let mut product = vec![vec![0usize; order]; order];
    for a in 0..order {
        for b in 0..order {
            let ab = index_of(group[a].mask() ^ group[b].mask());
            let lhs = &lifts[a] * &lifts[b];
            cocycle[a][b] = if lhs == lifts[ab] {
                1
            } else if lhs == lifts[ab].neg() {
                -1
            } else {
                return Err(Error::Consistency("lifts are not closed up to sign".into()));
            };
            product[a][b] = ab;
        }
    }
    let sign = |bits: u64, k: usize| if bits >> k & 1 == 1 { -1i8 } else { 1 };
    let found = (0..1u64 << order).find(|&bits| {
        (0..order).all(|a| {
            (0..order).all(|b| sign(bits, a) * sign(bits, b) * cocycle[a][b] == sign(bits, product[a][b]))
        })
    });
    Ok(ExtensionReport {
        rank: n,
        root_type: ty,
        group_order: order,
        splits: found.is_some(),
        section: found
            .map(|bits| group.iter().enumerate().map(|(k, e)| SectionEntry { eps: e.clone(), sign: sign(bits, k) }).collect()),
    })
}
