//! Dense exact matrices over `BigInt` and `BigRational`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type ZMat = Mat<BigInt>;
pub type QMat = Mat<BigRational>;

impl<T: fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T: Clone> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn sub_matrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        Mat::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Mat::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `[[a, b], [c, d]]` assembled from equal-shaped blocks.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (n, k) = (a.rows, a.cols);
        Mat::from_fn(n + c.rows, k + b.cols, |i, j| match (i < n, j < k) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - k).clone(),
            (false, true) => c.get(i - n, j).clone(),
            (false, false) => d.get(i - n, j - k).clone(),
        })
    }

    pub fn vstack(a: &Self, b: &Self) -> Self {
        Mat::from_fn(a.rows + b.rows, a.cols, |i, j| if i < a.rows { a.get(i, j).clone() } else { b.get(i - a.rows, j).clone() })
    }
}

impl<T: Clone + Zero + One + PartialEq> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(v: &[T]) -> Self {
        Mat::from_fn(v.len(), v.len(), |i, j| if i == j { v[i].clone() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }
}

impl<'a, T> Mul<&'a Mat<T>> for &'a Mat<T>
where
    T: Clone + Zero + for<'b> Mul<&'b T, Output = T>,
{
    type Output = Mat<T>;
    fn mul(self, rhs: &'a Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Mat::from_fn(self.rows, rhs.cols, |_, _| T::zero());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.data[i * rhs.cols + j].clone() + a.clone() * rhs.get(k, j);
                    out.data[i * rhs.cols + j] = v;
                }
            }
        }
        out
    }
}

impl<'a, T: Clone + Add<Output = T>> Add<&'a Mat<T>> for &'a Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &'a Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() + rhs.get(i, j).clone())
    }
}

impl<'a, T: Clone + Sub<Output = T>> Sub<&'a Mat<T>> for &'a Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &'a Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.get(i, j).clone() - rhs.get(i, j).clone())
    }
}

impl<T: Clone + Neg<Output = T>> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

pub fn zi(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn q_of(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

impl ZMat {
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| zi(x)).collect()).collect()).expect("rectangular literal")
    }

    pub fn to_q(&self) -> QMat {
        self.map(q_of)
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    /// Entrywise reduction into `[0, n)`.
    pub fn reduce_mod(&self, n: i64) -> Self {
        let n = zi(n);
        self.map(|x| x.mod_floor(&n))
    }

    pub fn det(&self) -> BigInt {
        let d = self.to_q().det();
        debug_assert!(d.is_integer());
        d.to_integer()
    }
}

impl QMat {
    pub fn to_z(&self) -> Option<ZMat> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(self.map(|x| x.to_integer()))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64().unwrap_or(f64::NAN))
    }

    /// Reduced row echelon form; returns `(R, E, pivots)` with `E·self = R`.
    pub fn rref(&self) -> (QMat, QMat, Vec<usize>) {
        let mut r = self.clone();
        let mut e = QMat::identity(self.rows);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !r.get(i, col).is_zero()) else {
                continue;
            };
            r.swap_rows(row, p);
            e.swap_rows(row, p);
            let inv = r.get(row, col).recip();
            for j in 0..self.cols {
                let v = r.get(row, j) * &inv;
                r.set(row, j, v);
            }
            for j in 0..self.rows {
                let v = e.get(row, j) * &inv;
                e.set(row, j, v);
            }
            for i in 0..self.rows {
                if i == row || r.get(i, col).is_zero() {
                    continue;
                }
                let f = r.get(i, col).clone();
                for j in 0..self.cols {
                    let v = r.get(i, j) - &f * r.get(row, j);
                    r.set(i, j, v);
                }
                for j in 0..self.rows {
                    let v = e.get(i, j) - &f * e.get(row, j);
                    e.set(i, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (r, e, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().2.len()
    }

    pub fn det(&self) -> BigRational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return BigRational::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                det = -det;
            }
            let piv = a.get(k, k).clone();
            det *= &piv;
            for i in k + 1..n {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let f = a.get(i, k) / &piv;
                for j in k..n {
                    let v = a.get(i, j) - &f * a.get(k, j);
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMat> {
        if self.rows != self.cols {
            return None;
        }
        let (_, e, piv) = self.rref();
        (piv.len() == self.rows).then_some(e)
    }

    /// Basis (as rows) of `{y : y·self = 0}`.
    pub fn left_kernel(&self) -> QMat {
        let (_, e, piv) = self.rref();
        let k = piv.len();
        e.sub_matrix(k, 0, self.rows - k, self.rows)
    }

    /// Basis (as rows) of the row space.
    pub fn row_basis(&self) -> QMat {
        let (r, _, piv) = self.rref();
        r.sub_matrix(0, 0, piv.len(), self.cols)
    }
}

/// Scale rational rows to primitive integer rows.
pub fn primitive_rows(q: &QMat) -> ZMat {
    let mut rows = Vec::with_capacity(q.rows());
    for i in 0..q.rows() {
        let den = q.row(i).iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = q.row(i).iter().map(|x| (x * q_of(&den)).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let g = if g.is_zero() { BigInt::one() } else { g };
        rows.push(ints.into_iter().map(|x| x / &g).collect());
    }
    Mat::from_rows(rows).unwrap_or_else(|_| ZMat::zeros(0, q.cols()))
}
