//! Sparse exact nullspace computation.

use std::collections::{BTreeMap, HashSet};

use crate::coeff::Ring;

/// Homogeneous sparse linear system, reduced incrementally to echelon form.
///
/// Each stored row is normalized so its leading (smallest) column has
/// coefficient one; that column is the row's pivot.
pub struct SparseSystem<R: Ring> {
    nvars: usize,
    ctx: R::Ctx,
    pivots: BTreeMap<usize, BTreeMap<usize, R>>,
    zero: HashSet<usize>,
}

impl<R: Ring> SparseSystem<R> {
    pub fn new(nvars: usize, ctx: &R::Ctx) -> Self {
        SparseSystem { nvars, ctx: ctx.clone(), pivots: BTreeMap::new(), zero: HashSet::new() }
    }

    /// Builds the system from a batch of equations. Single-variable equations
    /// are applied first so the remaining rows stay short.
    pub fn from_equations(nvars: usize, ctx: &R::Ctx, equations: impl IntoIterator<Item = Vec<(usize, R)>>) -> Self {
        let mut sys = Self::new(nvars, ctx);
        let mut rest = Vec::new();
        for eq in equations {
            let row = sys.collect(eq);
            match row.len() {
                0 => {}
                1 => {
                    let c = *row.keys().next().expect("one entry");
                    sys.zero.insert(c);
                }
                _ => rest.push(row),
            }
        }
        for row in rest {
            sys.insert(row);
        }
        sys
    }

    fn collect(&self, eq: Vec<(usize, R)>) -> BTreeMap<usize, R> {
        let mut row: BTreeMap<usize, R> = BTreeMap::new();
        for (c, v) in eq {
            assert!(c < self.nvars, "variable {c} out of range");
            if v.is_zero() || self.zero.contains(&c) {
                continue;
            }
            let e = row.entry(c).or_insert_with(|| R::zero(&self.ctx));
            *e = e.add(&v);
        }
        row.retain(|_, v| !v.is_zero());
        row
    }

    pub fn add_equation(&mut self, eq: Vec<(usize, R)>) {
        let row = self.collect(eq);
        self.insert(row);
    }

    fn insert(&mut self, mut row: BTreeMap<usize, R>) {
        row.retain(|c, _| !self.zero.contains(c));
        loop {
            let Some((&lead, lv)) = row.first_key_value() else { return };
            match self.pivots.get(&lead) {
                Some(prow) => {
                    let f = lv.clone();
                    for (c, v) in prow {
                        let e = row.entry(*c).or_insert_with(|| R::zero(&self.ctx));
                        *e = e.sub(&f.mul(v));
                        if e.is_zero() {
                            row.remove(c);
                        }
                    }
                }
                None => {
                    if row.len() == 1 {
                        self.zero.insert(lead);
                        return;
                    }
                    let inv = lv.inv().expect("field coefficient");
                    for v in row.values_mut() {
                        *v = v.mul(&inv);
                    }
                    self.pivots.insert(lead, row);
                    return;
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len() + self.zero.len()
    }

    pub fn nullity(&self) -> usize {
        self.nvars - self.rank()
    }

    /// A basis of the solution space, one vector per free variable.
    pub fn nullspace(&self) -> Vec<Vec<R>> {
        let free: Vec<usize> = (0..self.nvars).filter(|c| !self.pivots.contains_key(c) && !self.zero.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![R::zero(&self.ctx); self.nvars];
                x[f] = R::one(&self.ctx);
                for (&c, row) in self.pivots.iter().rev() {
                    let mut acc = R::zero(&self.ctx);
                    for (&j, a) in row.range(c + 1..) {
                        if !x[j].is_zero() {
                            acc = acc.add(&a.mul(&x[j]));
                        }
                    }
                    x[c] = acc.neg();
                }
                x
            })
            .collect()
    }
}
