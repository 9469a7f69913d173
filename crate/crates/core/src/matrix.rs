//! Dense exact matrices over a [`Ring`], serialized as row-major JSON arrays
//! of ring-formatted entries.

use std::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::coeff::Ring;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<R: Ring> {
    rows: usize,
    cols: usize,
    ctx: R::Ctx,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize, ctx: &R::Ctx) -> Self {
        Matrix { rows, cols, ctx: ctx.clone(), data: vec![R::zero(ctx); rows * cols] }
    }

    pub fn identity(n: usize, ctx: &R::Ctx) -> Self {
        let mut out = Self::zeros(n, n, ctx);
        for i in 0..n {
            out.set(i, i, R::one(ctx));
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, ctx: &R::Ctx, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, ctx: ctx.clone(), data }
    }

    pub fn from_i64(rows: &[Vec<i64>], ctx: &R::Ctx) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(r, c, ctx, |i, j| R::from_i64(ctx, rows[i][j]))
    }

    /// The anti-diagonal identity `J`.
    pub fn anti_identity(n: usize, ctx: &R::Ctx) -> Self {
        Self::from_fn(n, n, ctx, |i, j| if i + j == n - 1 { R::one(ctx) } else { R::zero(ctx) })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, &self.ctx, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, &self.ctx, |i, j| self.get(i, j).neg())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch(self.rows * self.cols, rhs.rows * rhs.cols));
        }
        Ok(Self::from_fn(self.rows, self.cols, &self.ctx, |i, j| self.get(i, j).add(rhs.get(i, j))))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(self.cols, rhs.rows));
        }
        let mut out = Self::zeros(self.rows, rhs.cols, &self.ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(R::zero(&self.ctx), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn map<S: Ring>(&self, ctx: &S::Ctx, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix::from_fn(self.rows, self.cols, ctx, |i, j| f(self.get(i, j)))
    }

    /// Gaussian elimination: (echelon form, rank, determinant).
    fn eliminate(&self) -> (Matrix<R>, usize, R) {
        let mut a = self.clone();
        let mut rank = 0;
        let mut det = R::one(&self.ctx);
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(piv) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
                det = R::zero(&self.ctx);
                continue;
            };
            if piv != rank {
                for j in 0..a.cols {
                    a.data.swap(piv * a.cols + j, rank * a.cols + j);
                }
                det = det.neg();
            }
            let pv = a.get(rank, col).clone();
            det = det.mul(&pv);
            let inv = pv.inv().expect("nonzero pivot in a field");
            for r in rank + 1..a.rows {
                let f = a.get(r, col).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in col..a.cols {
                    let v = a.get(r, j).sub(&f.mul(a.get(rank, j)));
                    a.set(r, j, v);
                }
            }
            rank += 1;
        }
        if rank < a.rows {
            det = R::zero(&self.ctx);
        }
        (a, rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().1
    }

    pub fn det(&self) -> Result<R> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(self.rows, self.cols));
        }
        if self.rows == 0 {
            return Ok(R::one(&self.ctx));
        }
        Ok(self.eliminate().2)
    }

    /// Unique solution of the square system `self * x = b`.
    pub fn solve(&self, b: &[R]) -> Result<Vec<R>> {
        if !self.is_square() || b.len() != self.rows {
            return Err(Error::DimensionMismatch(self.rows, b.len()));
        }
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, n + 1, &self.ctx, |i, j| if j < n { self.get(i, j).clone() } else { b[i].clone() });
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !aug.get(r, col).is_zero())
                .ok_or_else(|| Error::Consistency("singular system".into()))?;
            for j in 0..=n {
                aug.data.swap(piv * (n + 1) + j, col * (n + 1) + j);
            }
            let inv = aug.get(col, col).inv().expect("nonzero pivot");
            for j in col..=n {
                let v = aug.get(col, j).mul(&inv);
                aug.set(col, j, v);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = aug.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..=n {
                    let v = aug.get(r, j).sub(&f.mul(aug.get(col, j)));
                    aug.set(r, j, v);
                }
            }
        }
        Ok((0..n).map(|i| aug.get(i, n).clone()).collect())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows, &self.ctx)
    }

    /// Rows as vectors of serialized entries.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// Parses the row-major JSON array-of-arrays form.
    pub fn from_json(v: &serde_json::Value, ctx: &R::Ctx) -> Result<Self> {
        let bad = || Error::Parse("matrix JSON must be a rectangular array of string arrays".into());
        let rows = v.as_array().ok_or_else(bad)?;
        let mut out: Vec<Vec<R>> = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(bad)?;
            out.push(row.iter().map(|e| R::parse(ctx, e.as_str().ok_or_else(bad)?)).collect::<Result<_>>()?);
        }
        let cols = out.first().map_or(0, Vec::len);
        if out.iter().any(|r| r.len() != cols) {
            return Err(bad());
        }
        Ok(Matrix::from_fn(out.len(), cols, ctx, |i, j| out[i][j].clone()))
    }
}

impl<R: Ring> Serialize for Matrix<R> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for row in self.to_strings() {
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for row in self.to_strings() {
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
