//! Prime searches and the finitely checkable data behind the residual
//! representation: prime towers, `(l, p, q)` triples, exponent vectors
//! `{n_alpha}` and regular torus points.
//!
//! Every search is smallest-first with an explicit bound, so results are
//! reproducible. Certificates serialize with all numbers as decimal strings.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::Value;

use crate::coeff::ntheory::{multiplicative_order, pow_mod};
use crate::coeff::{is_prime_u64, legendre_u64, FpElem, PrimeField, Rational, Ring};
use crate::error::{Error, Result};
use crate::json::{dec, dec_seq, dec_table};
use crate::rootdata::{self, HalfInt, RootType, SpinWeight, TorusPoint};

/// Default search bound for primes.
pub const DEFAULT_BOUND: u64 = 1_000_000;

/// Default box for exponent searches.
pub const DEFAULT_BOX: i64 = 10;

/// Largest `l` tried by [`prop26`].
pub const MAX_L: u64 = 1_000;

fn require_odd_prime(l: u64, what: &str) -> Result<()> {
    if l < 3 || !is_prime_u64(l) {
        return Err(Error::Precondition(format!("{what} = {l} is not an odd prime")));
    }
    Ok(())
}

fn symbol(a: u64, p: u64) -> i8 {
    legendre_u64(a as i64, p).expect("odd prime modulus")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeTower {
    #[serde(serialize_with = "dec_seq")]
    pub primes: Vec<u64>,
    #[serde(serialize_with = "dec_seq")]
    pub residues_mod_4: Vec<u64>,
    /// `legendre[i][j] = (p_i | p_j)`; zero on the diagonal.
    #[serde(serialize_with = "dec_table")]
    pub legendre: Vec<Vec<i8>>,
}

impl PrimeTower {
    /// Builds the certificate and checks every fact.
    pub fn from_primes(primes: Vec<u64>) -> Result<Self> {
        for &p in &primes {
            require_odd_prime(p, "tower prime")?;
        }
        let tower = PrimeTower {
            residues_mod_4: primes.iter().map(|p| p % 4).collect(),
            legendre: primes.iter().map(|&a| primes.iter().map(|&b| symbol(a, b)).collect()).collect(),
            primes,
        };
        if !tower.holds() {
            return Err(Error::Precondition(format!("{:?} is not a tower of 1 mod 4 mutual residues", tower.primes)));
        }
        Ok(tower)
    }

    fn holds(&self) -> bool {
        let n = self.primes.len();
        self.primes.windows(2).all(|w| w[0] < w[1])
            && self.residues_mod_4.iter().all(|&r| r == 1)
            && (0..n).all(|i| (0..n).all(|j| (i == j) == (self.legendre[i][j] == 0) && (i == j || self.legendre[i][j] == 1)))
    }

    /// Recomputes every symbol and residue from the primes.
    pub fn verify(&self) -> bool {
        PrimeTower::from_primes(self.primes.clone()).is_ok_and(|t| t == *self)
    }
}

/// Greedy tower: each prime is the smallest `p = 1 mod 4` above the previous
/// one that is a square modulo all earlier primes.
pub fn prime_tower(n: usize, bound: u64) -> Result<PrimeTower> {
    if n == 0 {
        return Err(Error::Precondition("tower needs at least one prime".into()));
    }
    let mut primes: Vec<u64> = Vec::with_capacity(n);
    let mut p = 5;
    while primes.len() < n {
        if p > bound {
            return Err(Error::BoundExhausted(bound));
        }
        if p % 4 == 1 && is_prime_u64(p) && primes.iter().all(|&q| symbol(q, p) == 1) {
            primes.push(p);
        }
        p += 4;
    }
    PrimeTower::from_primes(primes)
}

fn is_pair_prime(p: u64, l: u64, tower: &[u64]) -> bool {
    p % 4 == 1
        && (p - 1).is_multiple_of(l)
        && !(p - 1).is_multiple_of(l * l)
        && is_prime_u64(p)
        && tower.iter().all(|&q| q != p && symbol(q, p) == 1)
}

/// Smallest `p <= bound` with `p = 1 mod 4`, `l || p - 1` exactly once, and
/// every tower prime a square mod `p`.
pub fn find_pair(l: u64, tower: &[u64], bound: u64) -> Result<u64> {
    require_odd_prime(l, "l")?;
    for &q in tower {
        require_odd_prime(q, "tower prime")?;
    }
    let step = 4 * l;
    let mut p = 1 + step;
    while p <= bound {
        if is_pair_prime(p, l, tower) {
            return Ok(p);
        }
        p += step;
    }
    Err(Error::BoundExhausted(bound))
}

/// Smallest prime `q` whose multiplicative order mod `p` is exactly `l`.
pub fn find_order_l_prime(p: u64, l: u64, bound: u64) -> Result<u64> {
    require_odd_prime(l, "l")?;
    require_odd_prime(p, "p")?;
    if !(p - 1).is_multiple_of(l) {
        return Err(Error::Precondition(format!("{l} does not divide {p} - 1")));
    }
    (2..=bound)
        .find(|&q| q % p != 0 && is_prime_u64(q) && multiplicative_order(q % p, p) == l)
        .ok_or(Error::BoundExhausted(bound))
}

/// The congruence facts about `(l, p, q)` and a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleCertificate {
    #[serde(serialize_with = "dec")]
    pub l: u64,
    #[serde(serialize_with = "dec")]
    pub p: u64,
    #[serde(serialize_with = "dec")]
    pub q: u64,
    #[serde(serialize_with = "dec_seq")]
    pub tower: Vec<u64>,
    #[serde(serialize_with = "dec")]
    pub p_mod_4: u64,
    #[serde(serialize_with = "dec")]
    pub p_minus_1_mod_l: u64,
    #[serde(serialize_with = "dec")]
    pub p_minus_1_mod_l_squared: u64,
    #[serde(serialize_with = "dec")]
    pub order_of_q_mod_p: u64,
    /// `(p_i | p)` for each tower prime.
    #[serde(serialize_with = "dec_seq")]
    pub tower_symbols: Vec<i8>,
}

impl TripleCertificate {
    /// Records the facts without judging them.
    pub fn build(l: u64, p: u64, q: u64, tower: &[u64]) -> Result<Self> {
        require_odd_prime(l, "l")?;
        require_odd_prime(p, "p")?;
        if q < 2 || !is_prime_u64(q) || q.is_multiple_of(p) {
            return Err(Error::Precondition(format!("q = {q} is not a prime different from p")));
        }
        for &t in tower {
            require_odd_prime(t, "tower prime")?;
        }
        Ok(TripleCertificate {
            l,
            p,
            q,
            tower: tower.to_vec(),
            p_mod_4: p % 4,
            p_minus_1_mod_l: (p - 1) % l,
            p_minus_1_mod_l_squared: (p - 1) % (l * l),
            order_of_q_mod_p: multiplicative_order(q % p, p),
            tower_symbols: tower.iter().map(|&t| symbol(t, p)).collect(),
        })
    }

    /// The recorded facts satisfy the required congruences.
    pub fn holds(&self) -> bool {
        self.p_mod_4 == 1
            && self.p_minus_1_mod_l == 0
            && self.p_minus_1_mod_l_squared != 0
            && self.order_of_q_mod_p == self.l
            && self.tower_symbols.iter().all(|&s| s == 1)
    }

    /// Recomputes every fact from the raw primes and checks them.
    pub fn verify(&self) -> bool {
        TripleCertificate::build(self.l, self.p, self.q, &self.tower).is_ok_and(|c| c == *self && c.holds())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightExponent {
    pub weight: SpinWeight,
    #[serde(serialize_with = "dec")]
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootExponent {
    #[serde(serialize_with = "dec_seq")]
    pub root: Vec<i64>,
    #[serde(serialize_with = "dec")]
    pub exponent: i64,
}

/// Exponents `e_lambda = sum n_alpha <lambda, alpha^vee>` over the spin
/// weights and `e_beta` over the negative roots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentData {
    #[serde(serialize_with = "dec")]
    pub m: usize,
    #[serde(serialize_with = "dec")]
    pub l: u64,
    #[serde(serialize_with = "dec_seq")]
    pub n_alpha: Vec<i64>,
    /// `sum n_alpha alpha^vee` in `lambda`-coordinates.
    #[serde(serialize_with = "dec_seq")]
    pub cocharacter: Vec<i64>,
    pub e_lambda: Vec<WeightExponent>,
    pub e_beta: Vec<RootExponent>,
}

fn weighted_coroot_sum(rd: &rootdata::RootDatum, n_alpha: &[i64]) -> Vec<i64> {
    let mut c = vec![0i64; rd.rank];
    for (coroot, &k) in rd.simple_coroots.iter().zip(n_alpha) {
        for (ci, x) in c.iter_mut().zip(coroot) {
            *ci += k * x;
        }
    }
    c
}

fn integral_pairing(w: &[HalfInt], c: &[i64]) -> i64 {
    rootdata::pairing(w, c).expect("same rank").as_integer().expect("spin weights pair integrally with coroots")
}

impl ExponentData {
    pub fn new(m: usize, n_alpha: Vec<i64>, l: u64) -> Result<Self> {
        let rd = rootdata::build_root_datum(m)?;
        if n_alpha.len() != rd.rank {
            return Err(Error::RankMismatch(n_alpha.len(), rd.rank));
        }
        let c = weighted_coroot_sum(&rd, &n_alpha);
        let e_lambda = rootdata::spin_weights(m)?
            .into_iter()
            .map(|w| {
                let exponent = integral_pairing(&w.coords(), &c);
                WeightExponent { weight: w, exponent }
            })
            .collect();
        let e_beta = rd
            .negative_roots()
            .map(|r| RootExponent { root: r.coords.clone(), exponent: r.coords.iter().zip(&c).map(|(a, b)| a * b).sum() })
            .collect();
        Ok(ExponentData { m, l, n_alpha, cocharacter: c, e_lambda, e_beta })
    }
}

/// The `e_lambda` are pairwise distinct modulo `l`.
pub fn check_condition4(data: &ExponentData) -> bool {
    let l = data.l as i64;
    let mut seen = HashSet::new();
    data.e_lambda.iter().all(|e| seen.insert(e.exponent.rem_euclid(l)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition5 {
    /// Every `|e_beta|` lies in `(0, l)`.
    pub holds: bool,
    #[serde(serialize_with = "dec")]
    pub max_abs: i64,
    /// The weaker statement `e_beta != 0 mod l`.
    pub nonzero_mod_l: bool,
}

pub fn check_condition5(data: &ExponentData) -> Condition5 {
    let l = data.l as i64;
    let max_abs = data.e_beta.iter().map(|e| e.exponent.abs()).max().unwrap_or(0);
    let min_abs = data.e_beta.iter().map(|e| e.exponent.abs()).min().unwrap_or(0);
    Condition5 {
        holds: min_abs > 0 && max_abs < l,
        max_abs,
        nonzero_mod_l: data.e_beta.iter().all(|e| e.exponent.rem_euclid(l) != 0),
    }
}

/// Lexicographically smallest `{n_alpha}` in `[0, box]^n` passing conditions
/// 4 and 5.
pub fn find_generic_exponents(m: usize, l: u64, box_: i64) -> Result<Option<Vec<i64>>> {
    require_odd_prime(l, "l")?;
    let rd = rootdata::build_root_datum(m)?;
    let n = rd.rank;
    if box_ < 0 {
        return Ok(None);
    }
    // Exponents are linear in n_alpha; precompute the coefficient rows.
    let weights = rootdata::spin_weights(m)?;
    let unit = |a: usize| {
        let mut v = vec![0; n];
        v[a] = 1;
        weighted_coroot_sum(&rd, &v)
    };
    let coroots: Vec<Vec<i64>> = (0..n).map(unit).collect();
    let w_rows: Vec<Vec<i64>> =
        weights.iter().map(|w| coroots.iter().map(|c| integral_pairing(&w.coords(), c)).collect()).collect();
    let b_rows: Vec<Vec<i64>> = rd
        .negative_roots()
        .map(|r| coroots.iter().map(|c| r.coords.iter().zip(c).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let li = l as i64;
    let dot = |row: &[i64], x: &[i64]| -> i64 { row.iter().zip(x).map(|(a, b)| a * b).sum() };
    let mut x = vec![0i64; n];
    let mut seen = HashSet::with_capacity(weights.len());
    loop {
        let cond5 = b_rows.iter().all(|r| {
            let e = dot(r, &x).abs();
            e > 0 && e < li
        });
        if cond5 {
            seen.clear();
            if w_rows.iter().all(|r| seen.insert(dot(r, &x).rem_euclid(li))) {
                return Ok(Some(x));
            }
        }
        // next vector in lexicographic order (last coordinate fastest)
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            if x[k] < box_ {
                x[k] += 1;
                break;
            }
            x[k] = 0;
        }
    }
}

/// A torus point over `F_p` with pairwise distinct spin-weight values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularPoint {
    /// Generator of `mu_l` used for the coordinates.
    #[serde(serialize_with = "dec")]
    pub zeta: FpElem,
    /// `t_i = zeta^k_i`.
    #[serde(serialize_with = "dec_seq")]
    pub exponents: Vec<u64>,
    pub point: TorusPoint<FpElem>,
    /// `lambda(t)` for each spin weight, in weight order.
    #[serde(serialize_with = "dec_seq")]
    pub values: Vec<FpElem>,
}

/// Smallest `a >= 2` with `a^((p-1)/l) != 1`, raised to that power.
pub fn mu_l_generator(p: u64, l: u64) -> Result<FpElem> {
    require_odd_prime(p, "p")?;
    require_odd_prime(l, "l")?;
    if !(p - 1).is_multiple_of(l) {
        return Err(Error::Precondition(format!("{l} does not divide {p} - 1")));
    }
    let f = PrimeField::new(p)?;
    let z = (2..p).map(|a| pow_mod(a, (p - 1) / l, p)).find(|&z| z != 1).expect("F_p^* has an element of order l");
    Ok(f.elem(z as i64))
}

fn torus_point_from_exponents(zeta: &FpElem, k: &[u64], l: u64) -> Result<TorusPoint<FpElem>> {
    let t: Vec<FpElem> = k.iter().map(|&e| zeta.pow(e)).collect();
    let prod = t.iter().fold(FpElem::one(&zeta.field()), |a, b| a.mul(b));
    TorusPoint::new(prod.pow(l.div_ceil(2)), t)
}

/// First `t` in `mu_l^n` (lexicographic in the exponents of [`mu_l_generator`])
/// at which the spin weights take pairwise distinct values.
pub fn find_regular_torus_point(m: usize, l: u64, p: u64) -> Result<Option<RegularPoint>> {
    let zeta = mu_l_generator(p, l)?;
    let weights = rootdata::spin_weights(m)?;
    let n = m / 2;
    // lambda(t) = zeta^{<lambda, k>}; two weights collide iff the signed sum
    // of k over the positions where they differ vanishes mod l. Group pairs
    // by their last differing position so the depth-first search can prune.
    let mut pairs_at: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for a in 0..weights.len() {
        for b in a + 1..weights.len() {
            let last = (0..n).rev().find(|&i| weights[a].signs()[i] != weights[b].signs()[i]).expect("distinct weights");
            pairs_at[last].push((a, b));
        }
    }
    let li = l as i64;
    let collides = |k: &[u64], a: usize, b: usize| -> bool {
        let (sa, sb) = (weights[a].signs(), weights[b].signs());
        let d: i64 = (0..k.len()).filter(|&i| sa[i] != sb[i]).map(|i| sa[i] as i64 * k[i] as i64).sum();
        d.rem_euclid(li) == 0
    };
    fn dfs(
        depth: usize,
        k: &mut Vec<u64>,
        n: usize,
        l: u64,
        ok: &dyn Fn(&[u64], usize) -> bool,
    ) -> bool {
        if depth == n {
            return true;
        }
        for v in 0..l {
            k.push(v);
            if ok(k, depth) && dfs(depth + 1, k, n, l, ok) {
                return true;
            }
            k.pop();
        }
        false
    }
    let ok = |k: &[u64], depth: usize| pairs_at[depth].iter().all(|&(a, b)| !collides(k, a, b));
    let mut k = Vec::with_capacity(n);
    if !dfs(0, &mut k, n, l, &ok) {
        return Ok(None);
    }
    let point = torus_point_from_exponents(&zeta, &k, l)?;
    let values = weights.iter().map(|w| point.spin_weight_value(w)).collect::<Result<Vec<_>>>()?;
    let distinct: HashSet<&FpElem> = values.iter().collect();
    if distinct.len() != values.len() {
        return Err(Error::Consistency("regular point search returned colliding values".into()));
    }
    Ok(Some(RegularPoint { zeta, exponents: k, point, values }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    #[serde(serialize_with = "dec")]
    pub item: u8,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop26Report {
    #[serde(serialize_with = "dec")]
    pub m: usize,
    pub items: Vec<CheckItem>,
    pub pass: bool,
}

impl Prop26Report {
    pub fn first_failure(&self) -> Option<&CheckItem> {
        self.items.iter().find(|i| !i.pass)
    }
}

/// Aggregates the checkable conditions into one pass/fail list. Malformed
/// inputs fail the affected item instead of raising an error.
pub fn verify_proposition_2_6_data(m: usize, tower: &[u64], l: u64, p: u64, q: u64, n_alpha: &[i64]) -> Prop26Report {
    let mut items = Vec::new();
    let mut push = |name: &str, r: Result<(bool, String)>| {
        let (pass, detail) = r.unwrap_or_else(|e| (false, e.to_string()));
        items.push(CheckItem { item: items.len() as u8 + 1, name: name.into(), pass, detail });
    };
    push(
        "rho_vee",
        (|| {
            let rho = rootdata::rho_vee(m)?;
            if !rho.integral {
                return Ok((false, format!("rho_vee = {:?} has odd coefficient sum", rho.coeffs.coeffs())));
            }
            let c = rootdata::cochar_eval(&rho.coeffs, &Rational::from(-1))?;
            let order = c.order(2);
            Ok((order == Some(2), format!("rho_vee = {:?}, rho_vee(-1) has order {order:?}", rho.coeffs.coeffs())))
        })(),
    );
    push(
        "tower",
        PrimeTower::from_primes(tower.to_vec()).map(|t| (t.verify(), format!("{} primes", t.primes.len()))),
    );
    push(
        "triple",
        TripleCertificate::build(l, p, q, tower)
            .map(|c| (c.verify(), format!("ord_p(q) = {}, p mod 4 = {}", c.order_of_q_mod_p, c.p_mod_4))),
    );
    let data = (|| {
        require_odd_prime(l, "l")?;
        ExponentData::new(m, n_alpha.to_vec(), l)
    })();
    push("condition4", data.clone().map(|d| (check_condition4(&d), "distinct e_lambda mod l".into())));
    push(
        "condition5",
        data.map(|d| {
            let c = check_condition5(&d);
            (c.holds, format!("max |e_beta| = {}", c.max_abs))
        }),
    );
    push(
        "regular_torus_point",
        (|| {
            let point = find_regular_torus_point(m, l, p)?;
            let transitive = rootdata::check_simple_transitivity(m)?;
            Ok((point.is_some() && transitive, format!("point found: {}, D simply transitive: {transitive}", point.is_some())))
        })(),
    );
    let pass = items.iter().all(|i| i.pass);
    Prop26Report { m, items, pass }
}

/// Output of the full search pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct Prop26Certificate {
    #[serde(serialize_with = "dec")]
    pub m: usize,
    pub tower: PrimeTower,
    pub triple: TripleCertificate,
    pub exponents: ExponentData,
    pub torus_point: Option<RegularPoint>,
    pub report: Prop26Report,
}

/// Number of tower primes: the rank of `D` as an elementary abelian 2-group.
pub fn tower_size(m: usize) -> usize {
    match RootType::of_dim(m) {
        RootType::B => m / 2,
        RootType::D => m / 2 - 1,
    }
}

/// Tower, then the smallest prime `l >= h` admitting generic exponents in the
/// default box, then the smallest `p` and `q`, then the aggregate report.
pub fn prop26(m: usize, bound: u64) -> Result<Prop26Certificate> {
    let h = rootdata::coxeter_number(m)?;
    let weights = rootdata::spin_weights(m)?.len() as u64;
    let tower = prime_tower(tower_size(m).max(1), bound)?;
    let mut l = h.max(3);
    loop {
        if l > MAX_L {
            return Err(Error::BoundExhausted(MAX_L));
        }
        // fewer than |weights| residues can never separate the weights
        if is_prime_u64(l) && l >= weights {
            if let Some(n_alpha) = find_generic_exponents(m, l, DEFAULT_BOX)? {
                let p = find_pair(l, &tower.primes, bound)?;
                let q = find_order_l_prime(p, l, bound)?;
                let report = verify_proposition_2_6_data(m, &tower.primes, l, p, q, &n_alpha);
                return Ok(Prop26Certificate {
                    m,
                    triple: TripleCertificate::build(l, p, q, &tower.primes)?,
                    exponents: ExponentData::new(m, n_alpha, l)?,
                    torus_point: find_regular_torus_point(m, l, p)?,
                    tower,
                    report,
                });
            }
        }
        l += 1;
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("certificate lacks {key:?}")))
}

fn num<T: std::str::FromStr>(v: &Value) -> Result<T> {
    v.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| Error::Parse(format!("expected a decimal string, got {v}")))
}

fn nums<T: std::str::FromStr>(v: &Value) -> Result<Vec<T>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("expected an array, got {v}")))?.iter().map(num).collect()
}

/// Re-derives every fact of a serialized [`Prop26Certificate`] from its raw
/// inputs `(m, tower primes, l, p, q, n_alpha, torus exponents)`.
pub fn verify_certificate(cert: &Value) -> Result<bool> {
    let m: usize = num(field(cert, "m")?)?;
    let primes: Vec<u64> = nums(field(field(cert, "tower")?, "primes")?)?;
    let triple = field(cert, "triple")?;
    let (l, p, q): (u64, u64, u64) = (num(field(triple, "l")?)?, num(field(triple, "p")?)?, num(field(triple, "q")?)?);
    let n_alpha: Vec<i64> = nums(field(field(cert, "exponents")?, "n_alpha")?)?;
    let same = |key: &str, rebuilt: Value| -> Result<bool> { Ok(*field(cert, key)? == rebuilt) };
    let tower_ok = PrimeTower::from_primes(primes.clone()).map(|t| same("tower", serde_json::to_value(t).expect("json")));
    let triple_ok = TripleCertificate::build(l, p, q, &primes).map(|t| same("triple", serde_json::to_value(t).expect("json")));
    let exps_ok = ExponentData::new(m, n_alpha.clone(), l).map(|e| same("exponents", serde_json::to_value(e).expect("json")));
    let point_ok = match field(cert, "torus_point")? {
        Value::Null => Ok(Ok(false)),
        tp => {
            let k: Vec<u64> = nums(field(tp, "exponents")?)?;
            let zeta = mu_l_generator(p, l)?;
            let point = torus_point_from_exponents(&zeta, &k, l)?;
            let values = rootdata::spin_weights(m)?
                .iter()
                .map(|w| point.spin_weight_value(w))
                .collect::<Result<Vec<_>>>()?;
            let distinct = values.iter().collect::<HashSet<_>>().len() == values.len();
            let rebuilt = RegularPoint { zeta, exponents: k, point, values };
            Ok(same("torus_point", serde_json::to_value(rebuilt).expect("json")).map(|s| s && distinct))
        }
    };
    let report = verify_proposition_2_6_data(m, &primes, l, p, q, &n_alpha);
    let report_ok = same("report", serde_json::to_value(&report).expect("json"))?;
    let flatten = |r: Result<Result<bool>>| r.and_then(|x| x).unwrap_or(false);
    Ok(flatten(tower_ok) && flatten(triple_ok) && flatten(exps_ok) && flatten(point_ok) && report_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::mu_l_projection;

    #[test]
    fn towers() {
        assert_eq!(prime_tower(1, 1000).unwrap().primes, vec![5]);
        assert_eq!(prime_tower(2, 1000).unwrap().primes, vec![5, 29]);
        let t = prime_tower(3, 1000).unwrap();
        assert_eq!(t.primes, vec![5, 29, 109]);
        assert!(t.verify());
        assert!(matches!(prime_tower(3, 100), Err(Error::BoundExhausted(100))));
        assert!(PrimeTower::from_primes(vec![5, 13]).is_err());
        let mut bad = t.clone();
        bad.legendre[0][1] = -1;
        assert!(!bad.verify());
    }

    #[test]
    fn pairs_and_orders() {
        assert_eq!(find_pair(3, &[], 1000).unwrap(), 13);
        assert_eq!(find_pair(5, &[], 1000).unwrap(), 41);
        let p = find_pair(5, &[5, 29], 100_000).unwrap();
        assert!(is_pair_prime(p, 5, &[5, 29]));
        assert!((41..p).all(|x| !is_pair_prime(x, 5, &[5, 29])));
        assert_eq!(find_order_l_prime(41, 5, 1000).unwrap(), 37);
        assert_eq!(find_order_l_prime(13, 3, 1000).unwrap(), 3);
        assert!(find_order_l_prime(13, 1, 1000).is_err());
        assert!(find_order_l_prime(13, 5, 1000).is_err());
    }

    #[test]
    fn conditions_on_b3() {
        let d = ExponentData::new(7, vec![1, 3, 9], 19).unwrap();
        assert_eq!(d.cocharacter, vec![1, 2, 15]);
        let mut e: Vec<i64> = d.e_lambda.iter().map(|x| x.exponent).collect();
        e.sort();
        assert_eq!(e, vec![-9, -8, -7, -6, 6, 7, 8, 9]);
        assert!(check_condition4(&d));
        let c5 = check_condition5(&d);
        assert!(c5.holds);
        assert_eq!(c5.max_abs, 17);
        assert!(!check_condition5(&ExponentData::new(7, vec![1, 3, 9], 17).unwrap()).holds);
        assert!(!check_condition4(&ExponentData::new(7, vec![0, 0, 0], 19).unwrap()));
        assert!(!check_condition5(&ExponentData::new(7, vec![0, 0, 0], 19).unwrap()).holds);
        assert!(!check_condition4(&ExponentData::new(7, vec![1, 2, 4], 19).unwrap()));
    }

    #[test]
    fn exponent_search() {
        let x = find_generic_exponents(7, 19, 10).unwrap().unwrap();
        let d = ExponentData::new(7, x.clone(), 19).unwrap();
        assert!(check_condition4(&d) && check_condition5(&d).holds);
        assert!(x <= vec![1, 3, 9]);
        assert_eq!(find_generic_exponents(7, 3, 10).unwrap(), None);
        assert_eq!(find_generic_exponents(7, 19, 0).unwrap(), None);
    }

    #[test]
    fn regular_points() {
        let p = find_pair(19, &[], 10_000).unwrap();
        let r = find_regular_torus_point(7, 19, p).unwrap().unwrap();
        assert_eq!(r.values.len(), 8);
        assert_eq!(find_regular_torus_point(9, 3, 13).unwrap(), None);
        let zeta = mu_l_generator(p, 19).unwrap();
        let ones = torus_point_from_exponents(&zeta, &[0, 0, 0], 19).unwrap();
        let w = rootdata::spin_weights(7).unwrap();
        assert!(w.iter().all(|x| ones.spin_weight_value(x).unwrap().is_one()));
    }

    /// Conditions 4 and 5 against characters `x -> pr(x)^e` evaluated on a
    /// generator of `F_p^*`.
    #[test]
    fn conditions_agree_with_characters() {
        let (l, p) = (11u64, 23u64);
        let f = PrimeField::new(p).unwrap();
        let g = (2..p).find(|&a| multiplicative_order(a, p) == p - 1).unwrap();
        let pr = mu_l_projection(&f.elem(g as i64), l).unwrap();
        let chi = |e: i64| pr.pow_i64(e).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let d = ExponentData::new(7, vec![a, b, c], l).unwrap();
                    let vals: HashSet<FpElem> = d.e_lambda.iter().map(|e| chi(e.exponent)).collect();
                    assert_eq!(check_condition4(&d), vals.len() == d.e_lambda.len());
                    let nontrivial = d.e_beta.iter().all(|e| !chi(e.exponent).is_one());
                    assert_eq!(check_condition5(&d).nonzero_mod_l, nontrivial);
                }
            }
        }
    }

    #[test]
    fn aggregated_report() {
        let c = prop26(7, DEFAULT_BOUND).unwrap();
        assert!(c.report.pass, "{:?}", c.report);
        assert!(verify_certificate(&serde_json::to_value(&c).unwrap()).unwrap());
        let t = &c.triple;
        let zero = verify_proposition_2_6_data(7, &t.tower, t.l, t.p, t.q, &[0, 0, 0]);
        let failed: Vec<u8> = zero.items.iter().filter(|i| !i.pass).map(|i| i.item).collect();
        assert_eq!(failed, vec![4, 5]);
        let mut tampered = serde_json::to_value(&c).unwrap();
        tampered["triple"]["order_of_q_mod_p"] = "4".into();
        assert!(!verify_certificate(&tampered).unwrap());
    }
}
