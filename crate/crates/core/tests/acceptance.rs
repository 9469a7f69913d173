//! Acceptance criteria 1-11. Runs with `harness = false` and prints one
//! PASS/FAIL line per criterion; exits non-zero if any fails or overruns.

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use spinforge::clifford::{weyl_generator, MultiVector};
use spinforge::coeff::{Cyclo8, Rational, Ring};
use spinforge::galois;
use spinforge::matrix::Matrix;
use spinforge::rootdata::{self, FormType, RootType};
use spinforge::spingroup::{self, SignChange, SignedPerm};
use spinforge::spinrep;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

// ---------------------------------------------------------------- oracles

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u128;
    let mut x = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * x % m as u128;
        }
        x = x * x % m as u128;
        e >>= 1;
    }
    r as u64
}

/// Euler's criterion.
fn is_square_mod(a: u64, p: u64) -> bool {
    pow_mod(a, (p - 1) / 2, p) == 1
}

fn order_mod(x: u64, p: u64) -> u64 {
    let mut acc = x % p;
    let mut k = 1;
    while acc != 1 {
        acc = (acc as u128 * x as u128 % p as u128) as u64;
        k += 1;
    }
    k
}

/// Symmetry table, keyed on `n = floor(m/2)`.
fn form_oracle(m: usize) -> FormType {
    let n = m / 2;
    if m % 2 == 1 {
        if matches!(n % 4, 0 | 3) {
            FormType::Symmetric
        } else {
            FormType::Skew
        }
    } else if n % 2 == 1 {
        FormType::None
    } else if n.is_multiple_of(4) {
        FormType::Symmetric
    } else {
        FormType::Skew
    }
}

/// Positive roots of `B_n` / `D_n` as integer vectors.
fn positive_roots(n: usize, ty: RootType) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for s in [-1, 1] {
                let mut r = vec![0; n];
                r[i] = 1;
                r[j] = s;
                out.push(r);
            }
        }
        if ty == RootType::B {
            let mut r = vec![0; n];
            r[i] = 1;
            out.push(r);
        }
    }
    out
}

/// Half the sum of positive coroots, times two.
fn twice_rho_vee(n: usize, ty: RootType) -> Vec<i64> {
    let mut acc = vec![0i64; n];
    for r in positive_roots(n, ty) {
        let norm2: i64 = r.iter().map(|x| x * x).sum();
        for (a, x) in acc.iter_mut().zip(&r) {
            *a += 2 * x / norm2;
        }
    }
    acc
}

/// Matrix of `pi(d_eps)` written down from the defining action on the basis
/// `e_1..e_n, [u_0], f_n..f_1`.
fn d_eps_oracle(signs: &[i8], m: usize) -> Vec<Vec<i64>> {
    let n = m / 2;
    let mut g = vec![vec![0i64; m]; m];
    let flips = signs.iter().filter(|&&s| s == -1).count();
    for k in 0..m {
        let flipped = (k < n && signs[k] == -1) || (k >= m - n && signs[m - 1 - k] == -1);
        let image = if flipped { m - 1 - k } else { k };
        g[image][k] = 1;
    }
    if m % 2 == 1 && flips % 2 == 1 {
        g[n][n] = -1;
    }
    g
}

fn int_matrix<R: Ring>(rows: &[Vec<i64>], ctx: &R::Ctx) -> Matrix<R> {
    Matrix::from_i64(rows, ctx)
}

/// Signed permutation matrix on the character lattice: `chi_j -> eps_{s(j)} chi_{s(j)}`.
fn weyl_lattice_matrix(w: &SignedPerm) -> Vec<Vec<i64>> {
    let n = w.perm.len();
    let mut g = vec![vec![0i64; n]; n];
    for (j, &i) in w.perm.iter().enumerate() {
        g[i][j] = w.signs.signs()[i] as i64;
    }
    g
}

fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spinforge").chain(args.iter().copied());
    let code = spinforge::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn num(v: &Value) -> i64 {
    v.as_str().unwrap_or_else(|| panic!("expected decimal string, got {v}")).parse().unwrap()
}

fn nums(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(num).collect()
}

fn residue(v: &Value) -> u64 {
    let s = v.as_str().unwrap();
    s.split(" mod ").next().unwrap().parse().unwrap()
}

// --------------------------------------------------------------- criteria

fn c1_sign_law() -> Outcome {
    let mut checked = 0;
    for m in [7, 8, 9, 11, 12, 15, 16] {
        let mut prod = MultiVector::<Cyclo8>::one(m, &());
        for k in 1..=m / 2 {
            prod = &prod * &weyl_generator(k, m, &()).unwrap();
            let expected = if (k * (k + 1) / 2) % 2 == 0 { 1 } else { -1 };
            let square = &prod * &prod;
            ensure!(square == MultiVector::scalar(m, Cyclo8::from_i64(&(), expected)), "m={m} k={k}: square {square}");
            checked += 1;
        }
    }
    Ok(format!("{checked} (m, k) pairs"))
}

fn c2_form_classification() -> Outcome {
    for m in [7, 8, 9, 11, 12, 13, 15, 16] {
        let c = spinrep::classify_invariant_form(m).map_err(|e| e.to_string())?;
        ensure!(c.symmetry == form_oracle(m), "m={m}: got {} want {}", c.symmetry, form_oracle(m));
        ensure!(c.module_dim == 1 << (m / 2 - (1 - m % 2)), "m={m}: module dim {}", c.module_dim);
        if c.module_dim > 32 {
            ensure!(c.fields.len() == 2, "m={m}: expected two prime fields, got {:?}", c.fields);
        }
    }
    Ok("m in {7,8,9,11,12,13,15,16}".into())
}

fn c3_covering() -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for m in [2 * n, 2 * n + 1] {
            for eps in SignChange::all(m) {
                let lift = spingroup::lift_sign_change::<Cyclo8>(&eps, m, &()).map_err(|e| e.to_string())?;
                let image = spingroup::project(&lift);
                let oracle = int_matrix::<Cyclo8>(&d_eps_oracle(eps.signs(), m), &());
                ensure!(*image.matrix() == oracle, "m={m} eps={:?}: projection differs", eps.signs());
                let lib = spingroup::d_epsilon_matrix::<Cyclo8>(&eps, m, &()).unwrap();
                ensure!(*lib.matrix() == oracle, "m={m} eps={:?}: d_epsilon_matrix differs", eps.signs());
                count += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let random_lift = |rng: &mut ChaCha8Rng, m: usize| {
        let group = SignChange::all(m);
        let eps = &group[rng.gen_range(0..group.len())];
        let g = spingroup::lift_sign_change::<Cyclo8>(eps, m, &()).unwrap();
        if rng.gen_bool(0.5) {
            g.neg()
        } else {
            g
        }
    };
    for _ in 0..100 {
        let m = rng.gen_range(4..=9);
        let a = random_lift(&mut rng, m);
        let b = random_lift(&mut rng, m);
        let ab = a.mul(&b).map_err(|e| e.to_string())?;
        let lhs = spingroup::project(&ab);
        let rhs = spingroup::project(&a).mul(&spingroup::project(&b)).unwrap();
        ensure!(lhs == rhs, "m={m}: pi not multiplicative");
    }
    Ok(format!("{count} sign changes, 100 random pairs"))
}

fn c4_transitivity() -> Outcome {
    for n in 3..=8 {
        for m in [2 * n, 2 * n + 1] {
            ensure!(rootdata::check_simple_transitivity(m).unwrap(), "library reports failure for m={m}");
            // independent orbit count: flip signs of the all-plus weight
            let weights: BTreeSet<Vec<i8>> =
                rootdata::spin_weights(m).unwrap().iter().map(|w| w.signs().to_vec()).collect();
            let group = SignChange::all(m);
            let orbit: BTreeSet<Vec<i8>> = group.iter().map(|e| e.signs().to_vec()).collect();
            ensure!(orbit.len() == group.len(), "m={m}: action not free");
            ensure!(orbit == weights, "m={m}: orbit is not the weight set");
            let expected = if m % 2 == 1 { 1usize << n } else { 1usize << (n - 1) };
            ensure!(weights.len() == expected, "m={m}: {} weights", weights.len());
        }
    }
    Ok("3 <= n <= 8, types B and D".into())
}

fn c5_section() -> Outcome {
    let mut pairs = 0;
    for n in 1..=3 {
        for m in [2 * n, 2 * n + 1] {
            let w = SignedPerm::all(m);
            let by_matrix: HashMap<Vec<Vec<i64>>, &SignedPerm> = w.iter().map(|x| (weyl_lattice_matrix(x), x)).collect();
            ensure!(by_matrix.len() == w.len(), "m={m}: Weyl elements not distinct");
            let sec: Vec<_> = w.iter().map(|x| spingroup::weyl_section::<Rational>(x, m, &()).unwrap()).collect();
            for (i, a) in w.iter().enumerate() {
                for (j, b) in w.iter().enumerate() {
                    let prod = int_mul(&weyl_lattice_matrix(a), &weyl_lattice_matrix(b));
                    let c = by_matrix.get(&prod).ok_or_else(|| format!("m={m}: W not closed"))?;
                    ensure!(a.compose(b) == **c, "m={m}: compose disagrees with the lattice action");
                    let lhs = spingroup::weyl_section::<Rational>(c, m, &()).unwrap();
                    ensure!(lhs == sec[i].mul(&sec[j]).unwrap(), "m={m}: section not multiplicative");
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn c6_extension() -> Outcome {
    for n in 2..=4 {
        for ty in [RootType::B, RootType::D] {
            let r = spingroup::extension_splits(n, ty).map_err(|e| e.to_string())?;
            ensure!(!r.splits, "{ty}{n} splits");
        }
    }
    for m in [7, 8, 9, 11, 12, 13, 15, 16, 17] {
        ensure!(spingroup::w0_is_minus_one(m), "m={m}: w0 != -1");
        let g = spingroup::w0_lift::<Cyclo8>(m, &()).unwrap();
        let order = spingroup::element_order(g.element(), 8);
        let want = if [11, 12, 13].contains(&m) { 4 } else { 2 };
        ensure!(order == Some(want), "m={m}: order {order:?}, want {want}");
    }
    Ok("no splitting for n <= 4; w0 orders match".into())
}

fn c7_rho_vee() -> Outcome {
    for n in 3..=12 {
        for (ty, m) in [(RootType::B, 2 * n + 1), (RootType::D, 2 * n)] {
            let rule = match ty {
                RootType::B => matches!(n % 4, 0 | 3),
                RootType::D => matches!(n % 4, 0 | 1),
            };
            let twice = twice_rho_vee(n, ty);
            ensure!(twice.iter().all(|x| x % 2 == 0), "{ty}{n}: rho^vee not in Z^n");
            let coeffs: Vec<i64> = twice.iter().map(|x| x / 2).collect();
            // the cocharacter lattice of Spin: integer vectors with even sum
            let oracle = coeffs.iter().sum::<i64>() % 2 == 0;
            ensure!(oracle == rule, "{ty}{n}: oracle {oracle} vs mod-4 rule {rule}");
            let r = rootdata::rho_vee(m).unwrap();
            ensure!(r.coeffs.0 == coeffs, "{ty}{n}: coefficients {:?} vs {coeffs:?}", r.coeffs.0);
            ensure!(r.integral == rule, "{ty}{n}: integral {}", r.integral);
        }
    }
    Ok("3 <= n <= 12".into())
}

fn c8_cartan() -> Outcome {
    let qualifying: Vec<usize> = (5..=17).filter(|&m| m >= 7 && matches!(m % 8, 0 | 1 | 7)).collect();
    for &m in &qualifying {
        let n = m / 2;
        let ty = RootType::of_dim(m);
        let rho: Vec<i64> = twice_rho_vee(n, ty).iter().map(|x| x / 2).collect();
        let pos = positive_roots(n, ty);
        let even = pos.iter().filter(|r| r.iter().zip(&rho).map(|(a, b)| a * b).sum::<i64>() % 2 == 0).count();
        let fixed = n + 2 * even;
        ensure!(2 * fixed == 2 * pos.len(), "m={m}: oracle height count fails");
        let r = rootdata::cartan_involution_check(m).map_err(|e| e.to_string())?;
        ensure!(r.holds && r.fixed_dim == fixed, "m={m}: library {:?}", r);
    }
    for m in [7, 8, 9] {
        let c = spinrep::cartan_fixed_space(m).map_err(|e| e.to_string())?;
        ensure!(c.lie_dim == m * (m - 1) / 2, "m={m}: lie dim {}", c.lie_dim);
        ensure!(c.holds && c.fixed_dim == c.half_roots, "m={m}: {c:?}");
        ensure!(c.half_roots == positive_roots(m / 2, RootType::of_dim(m)).len(), "m={m}: half roots");
    }
    Ok(format!("m in {qualifying:?}; Lie cross-check m in 7,8,9"))
}

fn c9_tower() -> Outcome {
    let (code, out) = run_cli(&["tower", "4"]);
    ensure!(code == 0, "exit {code}");
    let (_, again) = run_cli(&["tower", "4"]);
    ensure!(out == again, "non-deterministic output");
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let primes: Vec<u64> = nums(&v["primes"]).into_iter().map(|x| x as u64).collect();
    ensure!(primes.len() == 4, "{} primes", primes.len());
    for (i, &p) in primes.iter().enumerate() {
        ensure!(is_prime(p) && p % 4 == 1, "{p} is not a prime 1 mod 4");
        for (j, &q) in primes.iter().enumerate() {
            if i != j {
                ensure!(is_square_mod(q, p), "({q}|{p}) != 1");
                ensure!(num(&v["legendre"][i][j]) == 1, "reported symbol ({i},{j}) not 1");
            }
        }
    }
    // greedy smallest-first scan
    let mut greedy: Vec<u64> = Vec::new();
    let mut p = 3;
    while greedy.len() < 4 {
        p += 2;
        if p % 4 == 1 && is_prime(p) && greedy.iter().all(|&q| is_square_mod(q, p)) {
            greedy.push(p);
        }
    }
    ensure!(primes == greedy, "{primes:?} is not the greedy tower {greedy:?}");
    Ok(format!("{primes:?}"))
}

fn verify_prop26_raw(v: &Value) -> Result<(), String> {
    let m = num(&v["m"]) as usize;
    let n = m / 2;
    let ty = RootType::of_dim(m);
    let tower: Vec<u64> = nums(&v["tower"]["primes"]).into_iter().map(|x| x as u64).collect();
    let t = &v["triple"];
    let (l, p, q) = (num(&t["l"]) as u64, num(&t["p"]) as u64, num(&t["q"]) as u64);
    ensure!(is_prime(l) && is_prime(p) && is_prime(q), "non-prime in triple");
    ensure!(p % 4 == 1 && (p - 1) % l == 0 && (p - 1) % (l * l) != 0, "p = {p} fails the congruences for l = {l}");
    ensure!(order_mod(q, p) == l, "ord_{p}({q}) != {l}");
    for (i, &a) in tower.iter().enumerate() {
        ensure!(is_prime(a) && a % 4 == 1 && is_square_mod(a, p), "tower prime {a} not a square mod {p}");
        for &b in &tower[i + 1..] {
            ensure!(is_square_mod(a, b) && is_square_mod(b, a), "tower pair ({a},{b})");
        }
    }
    // cocharacter from the simple coroots
    let n_alpha = nums(&v["exponents"]["n_alpha"]);
    let mut coroots: Vec<Vec<i64>> = (0..n - 1)
        .map(|i| {
            let mut c = vec![0; n];
            c[i] = 1;
            c[i + 1] = -1;
            c
        })
        .collect();
    let mut last = vec![0; n];
    match ty {
        RootType::B => last[n - 1] = 2,
        RootType::D => {
            last[n - 2] = 1;
            last[n - 1] = 1;
        }
    }
    coroots.push(last);
    let c: Vec<i64> = (0..n).map(|i| coroots.iter().zip(&n_alpha).map(|(r, k)| r[i] * k).sum()).collect();
    ensure!(nums(&v["exponents"]["cocharacter"]) == c, "cocharacter mismatch");
    // spin weight exponents: half of sum s_i c_i over admissible sign patterns
    let mut e_lambda = BTreeSet::new();
    let mut count = 0;
    for mask in 0u32..1 << n {
        if ty == RootType::D && !(n as u32 - mask.count_ones()).is_multiple_of(2) {
            continue;
        }
        let twice: i64 = (0..n).map(|i| if mask >> i & 1 == 1 { c[i] } else { -c[i] }).sum();
        ensure!(twice % 2 == 0, "half-integral exponent");
        e_lambda.insert((twice / 2).rem_euclid(l as i64));
        count += 1;
    }
    ensure!(e_lambda.len() == count, "e_lambda not distinct mod l");
    for r in positive_roots(n, ty) {
        let e: i64 = r.iter().zip(&c).map(|(a, b)| a * b).sum();
        ensure!(e != 0 && e.abs() < l as i64, "e_beta = {e} for root {r:?}");
    }
    // torus point
    let tp = &v["torus_point"];
    let zeta = residue(&tp["zeta"]);
    ensure!(zeta != 1 && pow_mod(zeta, l, p) == 1, "zeta = {zeta} not of order l");
    let k = nums(&tp["exponents"]);
    let ts: Vec<u64> = k.iter().map(|&e| pow_mod(zeta, e as u64, p)).collect();
    ensure!(ts == tp["point"]["t"].as_array().unwrap().iter().map(residue).collect::<Vec<_>>(), "t mismatch");
    let z = residue(&tp["point"]["z"]);
    let prod = ts.iter().fold(1u64, |a, &b| (a as u128 * b as u128 % p as u128) as u64);
    ensure!(pow_mod(z, 2, p) == prod, "z^2 != prod t");
    let inv = |x: u64| pow_mod(x, p - 2, p);
    let mut values = BTreeSet::new();
    for mask in 0u32..1 << n {
        if ty == RootType::D && !(n as u32 - mask.count_ones()).is_multiple_of(2) {
            continue;
        }
        let mut val = z;
        for (i, &t) in ts.iter().enumerate() {
            if mask >> i & 1 == 0 {
                val = (val as u128 * inv(t) as u128 % p as u128) as u64;
            }
        }
        values.insert(val);
    }
    let reported: BTreeSet<u64> = tp["values"].as_array().unwrap().iter().map(residue).collect();
    ensure!(values.len() == count && values == reported, "torus values mismatch or collide");
    Ok(())
}

fn c10_prop26() -> Outcome {
    let (code, out) = run_cli(&["prop26", "7"]);
    ensure!(code == 0, "prop26 7 exit {code}");
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let items = v["report"]["items"].as_array().unwrap();
    ensure!(items.len() == 6 && items.iter().all(|i| i["pass"] == true), "prop26 7 items: {items:?}");
    ensure!(galois::verify_certificate(&v).map_err(|e| e.to_string())?, "library re-verification failed");
    verify_prop26_raw(&v)?;
    let detail = format!("l={}, p={}, q={}", v["triple"]["l"], v["triple"]["p"], v["triple"]["q"]).replace('"', "");
    let (code, out) = run_cli(&["prop26", "11"]);
    ensure!(code == 1, "prop26 11 exit {code}");
    let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let failing: Vec<&str> =
        v["report"]["items"].as_array().unwrap().iter().filter(|i| i["pass"] == false).map(|i| i["name"].as_str().unwrap()).collect();
    ensure!(failing == ["rho_vee"], "prop26 11 failing items {failing:?}");
    Ok(detail)
}

fn combinations(pool: &[i64], k: usize) -> Vec<Vec<i64>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in pool.iter().enumerate() {
        for mut rest in combinations(&pool[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn c11_lparam() -> Outcome {
    let pool: Vec<i64> = (0..=8).collect();
    let mut count = 0;
    for n in 1..=6 {
        for ms in combinations(&pool, n) {
            let lhs = if (n * (n + 1) / 2) % 2 == 0 { 1 } else { -1 };
            let rhs = if ms.iter().sum::<i64>() % 2 == 0 { 1 } else { -1 };
            let r = rootdata::lparam_descent(n, &ms).unwrap();
            ensure!(r.descends == (lhs == rhs), "n={n} m={ms:?}");
            let mut rev = ms.clone();
            rev.reverse();
            ensure!(rootdata::lparam_descent(n, &rev).unwrap().descends == r.descends, "order dependence");
            count += 1;
        }
    }
    Ok(format!("{count} parameter vectors"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 11] = [
        ("sign law", c1_sign_law, Duration::from_secs(5)),
        ("invariant form classification", c2_form_classification, Duration::from_secs(120)),
        ("covering correctness", c3_covering, Duration::from_secs(10)),
        ("simple transitivity", c4_transitivity, Duration::from_secs(5)),
        ("section homomorphism", c5_section, Duration::from_secs(10)),
        ("extension and w0 lift order", c6_extension, Duration::from_secs(30)),
        ("rho^vee integrality", c7_rho_vee, Duration::from_secs(1)),
        ("split Cartan criterion", c8_cartan, Duration::from_secs(60)),
        ("prime tower", c9_tower, Duration::from_secs(10)),
        ("search pipeline", c10_prop26, Duration::from_secs(60)),
        ("L-parameter parity", c11_lparam, Duration::from_secs(5)),
    ];
    // Budgets are for optimized builds; debug builds get slack.
    let slack = if cfg!(debug_assertions) { 10 } else { 1 };
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = start.elapsed();
        let over = took > *budget * slack;
        let (tag, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget {budget:?}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {tag} {name} ({:.2}s): {detail}", i + 1, took.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
