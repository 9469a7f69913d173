//! The spin module: the exterior algebra of `W = span(e_1, ..., e_n)` (or its
//! even/odd half for even `m`) as a Clifford-algebra module, spin matrices,
//! torus weights and the invariant bilinear form.
//!
//! Basis vectors are wedges `e_{i_1} ^ ... ^ e_{i_k}` indexed by subsets in
//! lexicographic order (see [`crate::rootdata::subsets_lex`]). Generators act
//! by: `e_i` wedge on the left, `f_i` twice the contraction, `u_0` by
//! `(-1)^degree`.

use std::collections::HashMap;

use serde::Serialize;

use crate::clifford::{GradeParity, Monomial, MultiVector};
use crate::coeff::{is_prime_u64, FpElem, PrimeField, Rational, Ring};
use crate::error::{Error, Result};
use crate::json::dec;
use crate::linalg::SparseSystem;
use crate::matrix::Matrix;
use crate::rootdata::{self, FormType, SpinWeight};
use crate::spingroup::SpinElement;

/// Largest supported rank; the module has up to `2^20` basis vectors.
pub const MAX_RANK: usize = 20;

/// Exact solves over the rationals are used up to this module dimension.
pub const RATIONAL_FORM_LIMIT: usize = 32;

#[derive(Clone, Debug)]
pub struct SpinModule {
    m: usize,
    n: usize,
    basis: Vec<u64>,
    index: HashMap<u64, usize>,
}

fn parity_sign(bits: u64) -> i64 {
    if bits.count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl SpinModule {
    pub fn new(m: usize) -> Result<Self> {
        let n = m / 2;
        if m < 2 || n > MAX_RANK {
            return Err(Error::InvalidDimension(m, format!("spin module needs 2 <= m <= {}", 2 * MAX_RANK + 1)));
        }
        let basis: Vec<u64> = rootdata::spin_subsets(m)
            .iter()
            .map(|s| s.iter().fold(0u64, |acc, &i| acc | 1 << i))
            .collect();
        let index = basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
        Ok(SpinModule { m, n, basis, index })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether this is a half-spin module (even `m`).
    pub fn is_half(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    /// Basis subsets (0-based) in order.
    pub fn subsets(&self) -> Vec<Vec<usize>> {
        self.basis.iter().map(|&b| (0..self.n).filter(|i| b >> i & 1 == 1).collect()).collect()
    }

    /// Weight carried by basis vector `k`.
    pub fn weight(&self, k: usize) -> SpinWeight {
        let b = self.basis[k];
        SpinWeight::of_subset(&(0..self.n).filter(|i| b >> i & 1 == 1).collect::<Vec<_>>(), self.n)
    }

    /// Action of basis vector `k` of `V` on the wedge `a`.
    fn gen_act(&self, k: usize, a: u64) -> Option<(u64, i64)> {
        let n = self.n;
        if k < n {
            let bit = 1u64 << k;
            (a & bit == 0).then(|| (a | bit, parity_sign(a & (bit - 1))))
        } else if self.m % 2 == 1 && k == n {
            Some((a, parity_sign(a)))
        } else {
            let i = self.m - 1 - k;
            let bit = 1u64 << i;
            (a & bit != 0).then(|| (a & !bit, 2 * parity_sign(a & (bit - 1))))
        }
    }

    fn mono_act(&self, mono: Monomial, a: u64) -> Option<(u64, i64)> {
        let idx: Vec<usize> = mono.indices().collect();
        let mut cur = (a, 1i64);
        for &k in idx.iter().rev() {
            let (b, c) = self.gen_act(k, cur.0)?;
            cur = (b, cur.1 * c);
        }
        Some(cur)
    }

    fn check_element<R: Ring>(&self, x: &MultiVector<R>) -> Result<()> {
        if x.dim() != self.m {
            return Err(Error::DimensionMismatch(x.dim(), self.m));
        }
        if self.is_half() && !matches!(x.grade_parity(), GradeParity::Even | GradeParity::Zero) {
            return Err(Error::Parity("only even elements preserve a half-spin module".into()));
        }
        Ok(())
    }

    fn apply_to_basis<R: Ring>(&self, x: &MultiVector<R>, k: usize, out: &mut [R], scale: &R) {
        for (mono, c) in x.terms() {
            if let Some((b, s)) = self.mono_act(*mono, self.basis[k]) {
                let j = self.index[&b];
                out[j] = out[j].add(&c.mul(scale).scale_i64(s));
            }
        }
    }

    pub fn clifford_action<R: Ring>(&self, x: &MultiVector<R>, v: &[R]) -> Result<Vec<R>> {
        self.check_element(x)?;
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(v.len(), self.dim()));
        }
        let mut out = vec![R::zero(x.ring()); self.dim()];
        for (k, vk) in v.iter().enumerate() {
            if !vk.is_zero() {
                self.apply_to_basis(x, k, &mut out, vk);
            }
        }
        Ok(out)
    }

    /// Matrix of `v -> x v` in the module basis.
    pub fn action_matrix<R: Ring>(&self, x: &MultiVector<R>) -> Result<Matrix<R>> {
        self.check_element(x)?;
        let ctx = x.ring();
        let one = R::one(ctx);
        let mut m = Matrix::zeros(self.dim(), self.dim(), ctx);
        let mut col = vec![R::zero(ctx); self.dim()];
        for k in 0..self.dim() {
            col.iter_mut().for_each(|c| *c = R::zero(ctx));
            self.apply_to_basis(x, k, &mut col, &one);
            for (j, c) in col.iter().enumerate() {
                if !c.is_zero() {
                    m.set(j, k, c.clone());
                }
            }
        }
        Ok(m)
    }

    pub fn spin_matrix<R: Ring>(&self, g: &SpinElement<R>) -> Result<Matrix<R>> {
        self.action_matrix(g.element())
    }

    /// Columns of `b_u b_v - b_v b_u` (four times the Lie element) as sparse
    /// integer entries `(row, value)`.
    fn lie_columns(&self, u: usize, v: usize) -> Vec<Vec<(usize, i64)>> {
        (0..self.dim())
            .map(|k| {
                let a = self.basis[k];
                let mut col: Vec<(usize, i64)> = Vec::with_capacity(2);
                let mut push = |r: Option<(u64, i64)>, sign: i64| {
                    if let Some((b, c)) = r {
                        let j = self.index[&b];
                        match col.iter_mut().find(|e| e.0 == j) {
                            Some(e) => e.1 += sign * c,
                            None => col.push((j, sign * c)),
                        }
                    }
                };
                push(self.gen_act(v, a).and_then(|(b, c)| self.gen_act(u, b).map(|(d, e)| (d, c * e))), 1);
                push(self.gen_act(u, a).and_then(|(b, c)| self.gen_act(v, b).map(|(d, e)| (d, c * e))), -1);
                col.retain(|e| e.1 != 0);
                col
            })
            .collect()
    }
}

/// Weights read off the action of `H_i = (e_i f_i - f_i e_i) / 4`, in module
/// basis order.
pub fn torus_weight_diagnostics(m: usize) -> Result<Vec<SpinWeight>> {
    let module = SpinModule::new(m)?;
    let n = m / 2;
    let half = Rational::from_ints(1, 2);
    let mut signs = vec![vec![0i8; n]; module.dim()];
    for i in 0..n {
        let h = crate::clifford::lie_element::<Rational>(i, m - 1 - i, m, &())?;
        let mat = module.action_matrix(&h)?;
        for (k, row) in signs.iter_mut().enumerate() {
            let d = mat.get(k, k);
            let diagonal = (0..module.dim()).all(|j| j == k || mat.get(j, k).is_zero());
            row[i] = if diagonal && *d == half {
                1
            } else if diagonal && *d == half.neg() {
                -1
            } else {
                return Err(Error::Consistency(format!("basis vector {k} is not a weight vector")));
            };
        }
    }
    signs.into_iter().map(|s| SpinWeight::new(s, rootdata::RootType::of_dim(m))).collect()
}

/// A nondegenerate invariant bilinear form on the spin module.
#[derive(Clone, Debug)]
pub struct InvariantForm<R: Ring> {
    pub m: usize,
    pub matrix: Matrix<R>,
    pub symmetry: FormType,
}

#[derive(Clone, Debug)]
pub enum FormOutcome<R: Ring> {
    Form(InvariantForm<R>),
    NotSelfDual,
}

/// Solves `X^t B + B X = 0` for every `X = (b_u b_v - b_v b_u) / 4`.
pub fn invariant_form<R: Ring>(m: usize, ctx: &R::Ctx) -> Result<FormOutcome<R>> {
    let module = SpinModule::new(m)?;
    let big_n = module.dim();
    let var = |a: usize, b: usize| a * big_n + b;
    let equations_for = |cols: &[Vec<(usize, i64)>], a: usize, b: usize| -> Vec<(usize, R)> {
        // (X^t B)_{ab} = sum_c X_{ca} B_{cb};  (B X)_{ab} = sum_c B_{ac} X_{cb}
        let mut eq: Vec<(usize, R)> = cols[a].iter().map(|&(c, x)| (var(c, b), R::from_i64(ctx, x))).collect();
        eq.extend(cols[b].iter().map(|&(c, x)| (var(a, c), R::from_i64(ctx, x))));
        eq
    };
    let n = m / 2;
    let cartan: Vec<Vec<Vec<(usize, i64)>>> = (0..n).map(|i| module.lie_columns(i, m - 1 - i)).collect();
    let mut first = Vec::new();
    for cols in &cartan {
        for a in 0..big_n {
            for b in 0..big_n {
                first.push(equations_for(cols, a, b));
            }
        }
    }
    let mut sys = SparseSystem::<R>::from_equations(big_n * big_n, ctx, first);
    for u in 0..m {
        for v in u + 1..m {
            if u + v == m - 1 && u < n {
                continue;
            }
            let cols = module.lie_columns(u, v);
            for a in 0..big_n {
                for b in 0..big_n {
                    sys.add_equation(equations_for(&cols, a, b));
                }
            }
        }
    }
    let null = sys.nullspace();
    match null.len() {
        0 => Ok(FormOutcome::NotSelfDual),
        1 => {
            let x = &null[0];
            let b = Matrix::from_fn(big_n, big_n, ctx, |i, j| x[var(i, j)].clone());
            let bt = b.transpose();
            let symmetry = if bt == b {
                FormType::Symmetric
            } else if bt == b.neg() {
                FormType::Skew
            } else {
                return Err(Error::Consistency("invariant form is neither symmetric nor skew".into()));
            };
            if b.det()?.is_zero() {
                return Err(Error::Consistency("invariant form is degenerate".into()));
            }
            Ok(FormOutcome::Form(InvariantForm { m, matrix: b, symmetry }))
        }
        d => Err(Error::Consistency(format!("space of invariant forms has dimension {d}"))),
    }
}

/// Whether `s^t B s = B`.
pub fn form_is_invariant<R: Ring>(b: &Matrix<R>, s: &Matrix<R>) -> Result<bool> {
    Ok(s.transpose().mul(b)?.mul(s)? == *b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormClassification {
    #[serde(serialize_with = "dec")]
    pub m: usize,
    #[serde(serialize_with = "dec")]
    pub module_dim: usize,
    pub symmetry: FormType,
    /// `"Q"` or the prime fields used.
    pub fields: Vec<String>,
    pub expected: FormType,
    pub matches: bool,
}

/// The two smallest primes `p > 2N` with `p = 1 mod 8`.
pub fn form_primes(module_dim: usize) -> [u64; 2] {
    let mut out = Vec::new();
    let mut p = 2 * module_dim as u64 + 1;
    while out.len() < 2 {
        if p % 8 == 1 && is_prime_u64(p) {
            out.push(p);
        }
        p += 1;
    }
    [out[0], out[1]]
}

fn symmetry_of<R: Ring>(o: FormOutcome<R>) -> FormType {
    match o {
        FormOutcome::Form(f) => f.symmetry,
        FormOutcome::NotSelfDual => FormType::None,
    }
}

/// Symmetry type of the invariant form: exact over the rationals for small
/// modules, otherwise over two prime fields that must agree.
pub fn classify_invariant_form(m: usize) -> Result<FormClassification> {
    let module_dim = SpinModule::new(m)?.dim();
    let (symmetry, fields) = if module_dim <= RATIONAL_FORM_LIMIT {
        (symmetry_of(invariant_form::<Rational>(m, &())?), vec!["Q".to_string()])
    } else {
        let [p1, p2] = form_primes(module_dim);
        let s1 = symmetry_of(invariant_form::<FpElem>(m, &PrimeField::new(p1)?)?);
        let s2 = symmetry_of(invariant_form::<FpElem>(m, &PrimeField::new(p2)?)?);
        if s1 != s2 {
            return Err(Error::Consistency(format!("F_{p1} gives {s1}, F_{p2} gives {s2}")));
        }
        (s1, vec![format!("F_{p1}"), format!("F_{p2}")])
    };
    let expected = rootdata::expected_form_type(m);
    Ok(FormClassification { m, module_dim, symmetry, fields, expected, matches: symmetry == expected })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanCrossCheck {
    #[serde(serialize_with = "dec")]
    pub m: usize,
    #[serde(serialize_with = "dec")]
    pub lie_dim: usize,
    #[serde(serialize_with = "dec")]
    pub fixed_dim: usize,
    #[serde(serialize_with = "dec")]
    pub half_roots: usize,
    pub holds: bool,
}

/// Fixed space of conjugation by the spin-side image of `rho^vee(-1)`, which
/// acts on weight vector `lambda` by `(-1)^<lambda, rho^vee>`, on the image of
/// the Lie algebra.
pub fn cartan_fixed_space(m: usize) -> Result<CartanCrossCheck> {
    let rho = rootdata::rho_vee(m)?;
    if !rho.integral {
        return Err(Error::Precondition(format!("rho^vee is not a cocharacter for m = {m}")));
    }
    let module = SpinModule::new(m)?;
    let big_n = module.dim();
    let signs: Vec<i64> = (0..big_n)
        .map(|k| {
            let p = rootdata::pairing(&module.weight(k).coords(), rho.coeffs.coeffs()).expect("same rank");
            let p = p.as_integer().expect("integral pairing");
            if p % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let mut image = Vec::new();
    let mut moved = Vec::new();
    for u in 0..m {
        for v in u + 1..m {
            let mut flat = vec![Rational::zero(&()); big_n * big_n];
            let mut off = vec![Rational::zero(&()); big_n * big_n];
            for (k, col) in module.lie_columns(u, v).into_iter().enumerate() {
                for (j, x) in col {
                    flat[j * big_n + k] = Rational::from(x);
                    if signs[j] != signs[k] {
                        off[j * big_n + k] = Rational::from(x);
                    }
                }
            }
            image.push(flat);
            moved.push(off);
        }
    }
    let lie_dim = Matrix::from_fn(image.len(), big_n * big_n, &(), |i, j| image[i][j].clone()).rank();
    let moved_rank = Matrix::from_fn(moved.len(), big_n * big_n, &(), |i, j| moved[i][j].clone()).rank();
    let fixed_dim = lie_dim - moved_rank;
    let half_roots = rootdata::build_root_datum(m)?.roots.len() / 2;
    Ok(CartanCrossCheck { m, lie_dim, fixed_dim, half_roots, holds: fixed_dim == half_roots })
}
