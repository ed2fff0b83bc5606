use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::scalar::Scalar;

/// Dense matrix over an exact integer scalar, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> IntMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds from `i64` literals; handy in tests and constructions.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        IntMatrix { rows, cols, data: entries.iter().map(|&v| S::from_small(v)).collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<S> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[S]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }
                })
            })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Matrix-vector product `self · x` (column convention).
    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for j in 0..self.cols {
                    acc += self.get(i, j).clone() * x[j].clone();
                }
                acc
            })
            .collect()
    }

    /// Row-vector product `x · self`.
    pub fn vec_mul(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.rows, "dimension mismatch");
        (0..self.cols)
            .map(|j| {
                let mut acc = S::zero();
                for i in 0..self.rows {
                    acc += x[i].clone() * self.get(i, j).clone();
                }
                acc
            })
            .collect()
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { other.get(i, j - self.cols).clone() }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.get(i, j).clone() } else { other.get(i - self.rows, j).clone() }
        })
    }

    /// Keeps the rows with indices in `idx`, in order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> IntMatrix<T> {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.rows {
            self.data.swap(k * self.cols + i, k * self.cols + j);
        }
    }

    /// row_i += c · row_j
    pub fn row_op(&mut self, i: usize, j: usize, c: &S) {
        assert_ne!(i, j);
        for k in 0..self.cols {
            let v = self.get(j, k).clone() * c.clone();
            let t = self.get(i, k).clone() + v;
            self.set(i, k, t);
        }
    }

    /// col_i += c · col_j
    pub fn col_op(&mut self, i: usize, j: usize, c: &S) {
        assert_ne!(i, j);
        for k in 0..self.rows {
            let v = self.get(k, j).clone() * c.clone();
            let t = self.get(k, i).clone() + v;
            self.set(k, i, t);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let v = self.get(i, k).clone();
            self.set(i, k, -v);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for k in 0..self.rows {
            let v = self.get(k, j).clone();
            self.set(k, j, -v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return S::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = S::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = !sign;
                    }
                    None => return S::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(k, k).clone() * a.get(i, j).clone()
                        - a.get(i, k).clone() * a.get(k, j).clone();
                    debug_assert!((num.clone() % prev.clone()).is_zero());
                    a.set(i, j, num / prev.clone());
                }
                a.set(i, k, S::zero());
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        if sign { -d } else { d }
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    /// Inverse of a unimodular matrix; `None` when the determinant is not ±1.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let f = super::snf::snf_with(self, super::snf::Track::UV);
        if f.rank != self.rows || !f.d.is_identity() {
            return None;
        }
        // u·a·v = 1  ⟹  a⁻¹ = v·u
        Some(&f.v.unwrap() * &f.u.unwrap())
    }

    /// Lossless conversion to another scalar via `i64` (panics on overflow,
    /// which cannot happen for the small combinatorial matrices this is
    /// used on).
    pub fn convert<T: Scalar>(&self) -> IntMatrix<T> {
        self.map(|v| T::from_small(v.to_i64().expect("entry exceeds i64")))
    }
}

impl<S: Scalar> Mul for &IntMatrix<S> {
    type Output = IntMatrix<S>;
    fn mul(self, rhs: &IntMatrix<S>) -> IntMatrix<S> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out: IntMatrix<S> = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = a.clone() * rhs.get(k, j).clone();
                    let t = out.get(i, j).clone() + v;
                    out.set(i, j, t);
                }
            }
        }
        out
    }
}

impl<S: Scalar> Add for &IntMatrix<S> {
    type Output = IntMatrix<S>;
    fn add(self, rhs: &IntMatrix<S>) -> IntMatrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + rhs.get(i, j).clone()
        })
    }
}

impl<S: Scalar> Sub for &IntMatrix<S> {
    type Output = IntMatrix<S>;
    fn sub(self, rhs: &IntMatrix<S>) -> IntMatrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() - rhs.get(i, j).clone()
        })
    }
}

impl<S: Scalar> Neg for &IntMatrix<S> {
    type Output = IntMatrix<S>;
    fn neg(self) -> IntMatrix<S> {
        self.map(|v| -v.clone())
    }
}

impl<S: Scalar> fmt::Debug for IntMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
