use std::collections::BTreeMap;

use proptest::prelude::*;

use spinforge::clifford::{weyl_generator, Monomial, MultiVector};
use spinforge::coeff::{Cyclo8, Rational};
use spinforge::galois::{self, PrimeTower, TripleCertificate};
use spinforge::matrix::Matrix;
use spinforge::rootdata::{self, RootType};
use spinforge::spingroup::{self, SignChange, SpinElement};
use spinforge::spinrep::{self, FormOutcome, SpinModule};

type C = Cyclo8;

fn lifts(m: usize) -> Vec<SpinElement<C>> {
    SignChange::all(m).iter().map(|e| spingroup::lift_sign_change::<C>(e, m, &()).unwrap()).collect()
}

/// `(a e_i f_i + a^-1 f_i e_i) / 2`, a torus element of `Spin_m`.
fn torus_element(m: usize, i: usize, a: i64) -> SpinElement<C> {
    let text = format!("{}*e{i} f{i} + {}*f{i} e{i}", Rational::from_ints(a, 2), Rational::from_ints(1, 2 * a));
    SpinElement::new(MultiVector::<C>::parse(m, &(), &text).unwrap()).unwrap()
}

/// The lifted Weyl generator at `i`; for even `m` paired with the next one,
/// since a single `w_i` is odd.
fn weyl_lift(m: usize, i: usize) -> SpinElement<C> {
    let w = weyl_generator::<C>(i, m, &()).unwrap();
    let g = if m.is_multiple_of(2) { w.mul(&weyl_generator::<C>(i % (m / 2) + 1, m, &()).unwrap()).unwrap() } else { w };
    SpinElement::new(g).unwrap()
}

/// Random words in the lifted Weyl generators and torus elements.
fn word(m: usize, picks: &[(usize, i64)]) -> SpinElement<C> {
    let n = m / 2;
    let mut g = SpinElement::one(m, &());
    for &(i, a) in picks {
        let i = 1 + i % n;
        let x = if a == 0 {
            weyl_lift(m, i)
        } else {
            torus_element(m, i, a)
        };
        g = g.mul(&x).unwrap();
    }
    g
}

fn picks() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..8, prop_oneof![Just(0i64), 1i64..4, -3i64..0]), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn projection_is_multiplicative(m in 5usize..=9, a in picks(), b in picks()) {
        let (g, h) = (word(m, &a), word(m, &b));
        let gh = g.mul(&h).unwrap();
        prop_assert_eq!(spingroup::project(&gh), spingroup::project(&g).mul(&spingroup::project(&h)).unwrap());
        prop_assert_eq!(spingroup::project(&g), spingroup::project(&g.neg()));
    }

    #[test]
    fn spin_matrix_is_multiplicative(m in 5usize..=9, a in picks(), b in picks()) {
        let module = SpinModule::new(m).unwrap();
        let (g, h) = (word(m, &a), word(m, &b));
        let lhs = module.spin_matrix(&g.mul(&h).unwrap()).unwrap();
        let rhs = module.spin_matrix(&g).unwrap().mul(&module.spin_matrix(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn module_compatibility(
        m in 5usize..=9,
        a in prop::collection::vec((any::<u64>(), -3i64..4), 1..4),
        b in prop::collection::vec((any::<u64>(), -3i64..4), 1..4),
        v in prop::collection::vec(-3i64..4, 32),
    ) {
        let module = SpinModule::new(m).unwrap();
        // even elements act on half modules too
        let even = |terms: &[(u64, i64)]| {
            let terms = terms.iter().map(|&(bits, c)| {
                let mut bits = bits & ((1u64 << m) - 1);
                if bits.count_ones() % 2 == 1 {
                    bits ^= 1;
                }
                (Monomial::from_bits(bits), Rational::from(c))
            });
            MultiVector::<Rational>::from_terms(m, &(), terms).unwrap()
        };
        let (x, y) = (even(&a), even(&b));
        let v: Vec<Rational> = v[..module.dim()].iter().map(|&c| Rational::from(c)).collect();
        let lhs = module.clifford_action(&x.mul(&y).unwrap(), &v).unwrap();
        let rhs = module.clifford_action(&x, &module.clifford_action(&y, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn kernel_is_plus_minus_one() {
    for m in 4..=9 {
        let one = MultiVector::<C>::one(m, &());
        let group = lifts(m);
        let mut elements: Vec<SpinElement<C>> = Vec::new();
        for g in &group {
            elements.push(g.clone());
            elements.push(g.neg());
        }
        // close up under products: D~ is generated by the lifts and -1
        for a in &group {
            for b in &group {
                elements.push(a.mul(b).unwrap());
            }
        }
        for g in &elements {
            let trivial = spingroup::project(g).is_identity();
            let central = *g.element() == one || *g.element() == one.neg();
            assert_eq!(trivial, central, "m = {m}, g = {:?}", g.element());
        }
    }
}

#[test]
fn d_epsilon_matrices_are_involutions() {
    for m in 2..=11 {
        for e in SignChange::all(m) {
            let d = spingroup::d_epsilon_matrix::<Rational>(&e, m, &()).unwrap();
            assert!(d.mul(&d).unwrap().is_identity(), "m = {m}");
            assert_eq!(d.matrix().det().unwrap(), Rational::from(1));
        }
    }
}

#[test]
fn w0_order_classification() {
    for m in [7, 8, 9, 11, 12, 13, 15, 16, 17] {
        let g = spingroup::w0_lift::<C>(m, &()).unwrap();
        let order = spingroup::element_order(g.element(), 8).unwrap();
        assert_eq!(order == 2, matches!(m % 8, 0 | 1 | 7), "m = {m}");
    }
}

#[test]
fn parity_equivalence() {
    for m in 5..=24 {
        let r = rootdata::parity_classify(m).unwrap();
        assert_eq!(r.qualifies, m >= 7 && r.w0_minus_one && r.w0_lift_order == 2, "m = {m}");
        if m <= 13 && r.w0_minus_one {
            let g = spingroup::w0_lift::<C>(m, &()).unwrap();
            assert_eq!(spingroup::element_order(g.element(), 8), Some(r.w0_lift_order as u64), "m = {m}");
        }
    }
}

#[test]
fn root_counts_and_height_distribution() {
    for m in 5..=17 {
        let n = m / 2;
        let rd = rootdata::build_root_datum(m).unwrap();
        let (count, mut exponents): (usize, Vec<i64>) = match rd.root_type {
            RootType::B => (2 * n * n, (1..=n as i64).map(|k| 2 * k - 1).collect()),
            RootType::D => (2 * n * (n - 1), (1..n as i64).map(|k| 2 * k - 1).chain([n as i64 - 1]).collect()),
        };
        assert_eq!(rd.roots.len(), count, "m = {m}");
        // the height partition is dual to the exponents
        let mut by_height: BTreeMap<i64, usize> = BTreeMap::new();
        for r in rd.positive_roots() {
            *by_height.entry(r.height).or_default() += 1;
        }
        let h = rootdata::coxeter_number(m).unwrap() as i64;
        assert_eq!(*by_height.keys().max().unwrap(), h - 1, "m = {m}");
        let mut dual = Vec::new();
        for k in 1..h {
            let here = by_height.get(&k).copied().unwrap_or(0);
            let next = by_height.get(&(k + 1)).copied().unwrap_or(0);
            dual.extend(std::iter::repeat_n(k, here - next));
        }
        exponents.sort();
        assert_eq!(dual, exponents, "m = {m}");
        assert!(rd.negative_roots().zip(rd.positive_roots()).all(|(a, b)| a.height == -b.height));
    }
}

#[test]
fn heights_are_pairings_with_rho_vee() {
    for m in 5..=13 {
        let rd = rootdata::build_root_datum(m).unwrap();
        let rho = rootdata::rho_vee(m).unwrap();
        for r in rd.positive_roots() {
            let p: i64 = r.coords.iter().zip(&rho.coeffs.0).map(|(a, b)| a * b).sum();
            assert_eq!(p, r.height, "m = {m}, root {:?}", r.coords);
        }
    }
}

#[test]
fn weights_are_multiplicity_free() {
    for m in 6..=17 {
        let w = rootdata::spin_weights(m).unwrap();
        let distinct: std::collections::BTreeSet<_> = w.iter().cloned().collect();
        assert_eq!(distinct.len(), w.len(), "m = {m}");
        for x in &w {
            let orbit: std::collections::BTreeSet<_> =
                SignChange::all(m).iter().map(|e| rootdata::d_orbit(e, x).unwrap()).collect();
            assert_eq!(orbit, distinct, "m = {m}");
        }
    }
}

#[test]
fn torus_weights_match_spin_weights() {
    for m in 7..=12 {
        let mut a = spinrep::torus_weight_diagnostics(m).unwrap();
        let mut b = rootdata::spin_weights(m).unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, b, "m = {m}");
    }
}

#[test]
fn invariant_form_is_group_invariant() {
    for m in [5, 7, 8, 9] {
        let FormOutcome::Form(form) = spinrep::invariant_form::<C>(m, &()).unwrap() else { panic!("m = {m} not self-dual") };
        let module = SpinModule::new(m).unwrap();
        let mut gens: Vec<SpinElement<C>> = (1..=m / 2).map(|i| weyl_lift(m, i)).collect();
        gens.push(torus_element(m, 1, 3));
        for g in &gens {
            let s: Matrix<C> = module.spin_matrix(g).unwrap();
            assert!(spinrep::form_is_invariant(&form.matrix, &s).unwrap(), "m = {m}");
        }
    }
}

#[test]
fn towers_and_triples_reverify() {
    for n in 1..=6 {
        let t = galois::prime_tower(n, galois::DEFAULT_BOUND).unwrap();
        assert!(t.verify());
        for i in 0..n {
            for j in 0..n {
                assert_eq!(t.legendre[i][j], t.legendre[j][i], "reciprocity for {:?}", t.primes);
            }
        }
        let mut forged = t.clone();
        if n > 1 {
            forged.legendre[0][1] = -1;
            assert!(!forged.verify());
        }
        for l in [3u64, 5, 7, 11, 13] {
            let p = galois::find_pair(l, &t.primes, galois::DEFAULT_BOUND).unwrap();
            let q = galois::find_order_l_prime(p, l, galois::DEFAULT_BOUND).unwrap();
            let c = TripleCertificate::build(l, p, q, &t.primes).unwrap();
            assert!(c.holds() && c.verify(), "l = {l}, p = {p}, q = {q}");
        }
    }
    assert!(PrimeTower::from_primes(vec![5, 13]).is_err());
}

#[test]
fn regular_points_carry_both_premises() {
    for (m, l) in [(7, 11), (8, 11), (9, 17)] {
        let tower = galois::prime_tower(galois::tower_size(m), galois::DEFAULT_BOUND).unwrap();
        let p = galois::find_pair(l, &tower.primes, galois::DEFAULT_BOUND).unwrap();
        let point = galois::find_regular_torus_point(m, l, p).unwrap().expect("regular point");
        let mut values = point.values.clone();
        values.sort_by_key(|v| v.residue());
        values.dedup();
        assert_eq!(values.len(), point.values.len());
        assert!(rootdata::check_simple_transitivity(m).unwrap());
    }
}
