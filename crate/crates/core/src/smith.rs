//! Smith normal form over the integers.

use crate::exact::{zi, ZMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `P·A·Q = D` with `P`, `Q` unimodular and `D` diagonal with `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub p: ZMat,
    pub q: ZMat,
    pub d: ZMat,
}

impl Smith {
    /// Nonzero invariant factors, in order.
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).take_while(|x| !x.is_zero()).collect()
    }
}

fn add_row(a: &mut ZMat, dst: usize, src: usize, f: &BigInt) {
    for j in 0..a.cols() {
        let v = a.get(dst, j) + f * a.get(src, j);
        a.set(dst, j, v);
    }
}

fn add_col(a: &mut ZMat, dst: usize, src: usize, f: &BigInt) {
    for i in 0..a.rows() {
        let v = a.get(i, dst) + f * a.get(i, src);
        a.set(i, dst, v);
    }
}

fn neg_row(a: &mut ZMat, r: usize) {
    for j in 0..a.cols() {
        let v = -a.get(r, j);
        a.set(r, j, v);
    }
}

pub fn smith(a: &ZMat) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut p = ZMat::identity(m);
    let mut q = ZMat::identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block goes to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = d.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Smith { p, q, d };
            };
            d.swap_rows(t, bi);
            p.swap_rows(t, bi);
            d.swap_cols(t, bj);
            q.swap_cols(t, bj);
            let piv = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let f = -d.get(i, t).div_floor(&piv);
                if !f.is_zero() {
                    add_row(&mut d, i, t, &f);
                    add_row(&mut p, i, t, &f);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let f = -d.get(t, j).div_floor(&piv);
                if !f.is_zero() {
                    add_col(&mut d, j, t, &f);
                    add_col(&mut q, j, t, &f);
                }
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block
            let bad = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| !d.get(i, j).is_multiple_of(&piv));
            match bad {
                Some((i, _)) => {
                    add_row(&mut d, t, i, &BigInt::one());
                    add_row(&mut p, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            neg_row(&mut d, t);
            neg_row(&mut p, t);
        }
    }
    Smith { p, q, d }
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(u: &ZMat) -> ZMat {
    u.to_q().inverse().and_then(|x| x.to_z()).expect("matrix is unimodular")
}

/// Absolute value of a determinant as `u64`, if it fits.
pub fn abs_u64(x: &BigInt) -> Option<u64> {
    use num_traits::ToPrimitive;
    x.abs().to_u64()
}

pub fn one_if_zero(x: BigInt) -> BigInt {
    if x.is_zero() {
        zi(1)
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &ZMat) {
        let s = smith(a);
        assert_eq!(&(&s.p * a) * &s.q, s.d);
        assert!(s.p.det().abs().is_one());
        assert!(s.q.det().abs().is_one());
        let inv = s.invariants();
        for w in inv.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn smith_forms() {
        check(&ZMat::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        check(&ZMat::from_i64(&[vec![2, 0], vec![0, 3]]));
        check(&ZMat::from_i64(&[vec![0, 0], vec![0, 0]]));
        check(&ZMat::from_i64(&[vec![1, 2], vec![3, 4], vec![5, 6]]));
        let s = smith(&ZMat::from_i64(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariants(), vec![zi(1), zi(6)]);
    }
}
