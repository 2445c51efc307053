//! Symplectic geometry over F₂: the form `Q₀`, its isotropic vectors, the
//! transvection representatives of `Γ(1,2)\Sp₂ₘ(Z)` and their refinements.

use crate::cocycle::m_xstar;
use crate::error::{Error, Result};
use crate::exact::{zi, Mat, ZMat};
use crate::mu8::Mu8;
use crate::symplectic::{in_theta_group, make_generator, Generator, IntegerSymplectic};
use num_integer::Integer;
use serde::Serialize;
use std::fmt;

/// `(x₁..xₘ, x*₁..x*ₘ)` over F₂.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    bits: Vec<u8>,
}

impl F2Vector {
    pub fn zero(m: usize) -> Self {
        F2Vector { bits: vec![0; 2 * m] }
    }

    pub fn new(x: &[u8], xs: &[u8]) -> Result<Self> {
        if x.len() != xs.len() || x.is_empty() {
            return Err(Error::Shape("x and x* must have the same positive length".into()));
        }
        if x.iter().chain(xs).any(|&b| b > 1) {
            return Err(Error::Domain("coordinates must be 0 or 1".into()));
        }
        Ok(F2Vector { bits: x.iter().chain(xs).copied().collect() })
    }

    /// `e_i` (zero-based).
    pub fn e(m: usize, i: usize) -> Self {
        let mut v = Self::zero(m);
        v.bits[i] = 1;
        v
    }

    /// `e*_i` (zero-based).
    pub fn e_star(m: usize, i: usize) -> Self {
        let mut v = Self::zero(m);
        v.bits[m + i] = 1;
        v
    }

    /// The vector whose bit `k` is bit `k` of `n` (`x₁` least significant).
    pub fn from_index(m: usize, n: u64) -> Self {
        F2Vector { bits: (0..2 * m).map(|k| ((n >> k) & 1) as u8).collect() }
    }

    pub fn index(&self) -> u64 {
        self.bits.iter().enumerate().map(|(k, &b)| (b as u64) << k).sum()
    }

    pub fn genus(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn x(&self) -> &[u8] {
        &self.bits[..self.genus()]
    }

    pub fn x_star(&self) -> &[u8] {
        &self.bits[self.genus()..]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&b| b == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        F2Vector { bits: self.bits.iter().zip(&o.bits).map(|(a, b)| a ^ b).collect() }
    }

    /// `⟨v, w⟩ = Σ xᵢy*ᵢ + x*ᵢyᵢ` over F₂.
    pub fn pair(&self, o: &Self) -> u8 {
        let m = self.genus();
        (0..m).fold(0, |s, i| s ^ (self.bits[i] & o.bits[m + i]) ^ (self.bits[m + i] & o.bits[i]))
    }

    /// `v·ḡ` over F₂.
    pub fn act(&self, g: &IntegerSymplectic) -> Self {
        let n = self.bits.len();
        let bits = (0..n).map(|j| (0..n).filter(|&i| self.bits[i] == 1).fold(0u8, |s, i| s ^ g.entry(i, j).is_odd() as u8)).collect();
        F2Vector { bits }
    }

    /// Parses `"x₁..xₘ|x*₁..x*ₘ"`, e.g. `"10|01"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (x, xs) = s.trim().split_once('|').ok_or_else(|| Error::Parse("expected `x|x*` bit strings".into()))?;
        let bits = |t: &str| -> Result<Vec<u8>> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(Error::Parse(format!("unexpected character {c:?}"))),
                })
                .collect()
        };
        let (x, xs) = (bits(x)?, bits(xs)?);
        if x.len() > 16 {
            return Err(Error::Parse("genus too large".into()));
        }
        F2Vector::new(&x, &xs).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.x() {
            write!(f, "{b}")?;
        }
        write!(f, "|")?;
        for b in self.x_star() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for F2Vector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `Q₀(v) = Σ xᵢx*ᵢ mod 2`.
pub fn q0_eval(v: &F2Vector) -> u8 {
    v.x().iter().zip(v.x_star()).fold(0, |s, (a, b)| s ^ (a & b))
}

/// Entrywise reduction mod 2.
pub fn reduce_mod2(g: &IntegerSymplectic) -> ZMat {
    g.matrix().reduce_mod(2)
}

/// All `v` with `Q₀(v) = 0`, ordered by [`F2Vector::index`].
pub fn enumerate_isotropic(m: usize) -> Result<Vec<F2Vector>> {
    if m == 0 {
        return Err(Error::Parameter("genus must be positive".into()));
    }
    if m > 8 {
        return Err(Error::Capacity(format!("exhaustive enumeration limited to m ≤ 8, got {m}")));
    }
    Ok((0..1u64 << (2 * m)).map(|n| F2Vector::from_index(m, n)).filter(|v| q0_eval(v) == 0).collect())
}

/// `1 + col(x*ᵀ; −xᵀ)·row(x, x*)`: the integer lift of `v ↦ v + ⟨v,q⟩q`.
pub fn transvection_rep(q: &F2Vector) -> IntegerSymplectic {
    let m = q.genus();
    let col: Vec<i64> = q.x_star().iter().map(|&b| b as i64).chain(q.x().iter().map(|&b| -(b as i64))).collect();
    let row: Vec<i64> = q.bits().iter().map(|&b| b as i64).collect();
    let g = Mat::from_fn(2 * m, 2 * m, |i, j| zi(col[i] * row[j] + (i == j) as i64));
    IntegerSymplectic::new_unchecked(g)
}

/// `u¹₁₁₁₁ = u_jj(−1)u_kk(−1)` on `Sp₄`.
pub fn u1111_first() -> ZMat {
    ZMat::from_i64(&[vec![1, 0, -1, 0], vec![0, 1, 0, -1], vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
}

/// `u²₁₁₁₁ = u⁻_jj(1)u⁻_kk(1)u⁻_jk(1)` on `Sp₄`.
pub fn u1111_second() -> ZMat {
    ZMat::from_i64(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![1, 1, 1, 0], vec![1, 1, 0, 1]])
}

/// One commuting factor of a refined representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Factor {
    /// `ι_i(1 1; 0 1)`.
    Upper(usize),
    /// `ι_i(1 0; −1 1)`.
    Lower(usize),
    /// `ι_{(j,k)}(u¹₁₁₁₁u²₁₁₁₁)`.
    Pair(usize, usize),
}

impl Factor {
    pub fn matrix(&self, m: usize) -> IntegerSymplectic {
        match *self {
            Factor::Upper(i) => make_generator(m, &Generator::IotaSl2(i, [[1, 1], [0, 1]])).unwrap(),
            Factor::Lower(i) => make_generator(m, &Generator::IotaSl2(i, [[1, 0], [-1, 1]])).unwrap(),
            Factor::Pair(j, k) => make_generator(m, &Generator::IotaSp4(j, k, &u1111_first() * &u1111_second())).unwrap(),
        }
    }
}

/// One coset `Γ(1,2)·M_q` with its refined representative and shift data.
#[derive(Clone, Debug, Serialize)]
pub struct CosetRecord {
    pub q: F2Vector,
    #[serde(skip)]
    pub m_prime: IntegerSymplectic,
    #[serde(skip)]
    pub m: IntegerSymplectic,
    pub s0: Vec<usize>,
    pub s1: Vec<(usize, usize)>,
    pub factors: Vec<Factor>,
    pub m_q: Vec<i64>,
    pub eps_q: Vec<i64>,
    pub m_xstar_q: Mu8,
}

pub fn refine_rep(q: &F2Vector) -> Result<CosetRecord> {
    if q0_eval(q) != 0 {
        return Err(Error::Domain(format!("Q₀({q}) = 1")));
    }
    let m = q.genus();
    let (x, xs) = (q.x(), q.x_star());
    let s0: Vec<usize> = (0..m).filter(|&i| x[i] & xs[i] == 0).collect();
    let s1_flat: Vec<usize> = (0..m).filter(|&i| x[i] & xs[i] == 1).collect();
    let s1: Vec<(usize, usize)> = s1_flat.chunks(2).map(|p| (p[0], p[1])).collect();
    let mut factors = Vec::new();
    let mut m_q = vec![0i64; m];
    let mut eps_q = vec![0i64; m];
    for &i in &s0 {
        match (x[i], xs[i]) {
            (0, 1) => {
                factors.push(Factor::Upper(i));
                m_q[i] = 1;
            }
            (1, 0) => {
                factors.push(Factor::Lower(i));
                eps_q[i] = 1;
            }
            _ => {}
        }
    }
    for &(j, k) in &s1 {
        factors.push(Factor::Pair(j, k));
        for i in [j, k] {
            m_q[i] = -1;
            eps_q[i] = -1;
        }
    }
    let mut mat = IntegerSymplectic::identity(m);
    let mut m_xstar_q = Mu8::ONE;
    for f in &factors {
        let fm = f.matrix(m);
        m_xstar_q *= m_xstar(&fm);
        mat = mat.mul(&fm);
    }
    let m_prime = transvection_rep(q);
    let rec = CosetRecord { q: q.clone(), m_prime, m: mat, s0, s1, factors, m_q, eps_q, m_xstar_q };
    if !in_theta_group(&rec.m_prime.mul(&rec.m.inverse())) {
        return Err(Error::Internal(format!("refined representative for {q} left its coset")));
    }
    Ok(rec)
}

/// `q(g)`: the unique `q` with `Q₀(v·ḡ) = Q₀(v) + ⟨v, q⟩`.
pub fn q0_defect(g: &IntegerSymplectic) -> F2Vector {
    let m = g.genus();
    let row_q0 = |r: usize| -> u8 { (0..m).fold(0, |s, i| s ^ (g.entry(r, i).is_odd() & g.entry(r, m + i).is_odd()) as u8) };
    // ⟨e_i, q⟩ = x*_i(q) and ⟨e*_i, q⟩ = x_i(q)
    let x: Vec<u8> = (0..m).map(|i| row_q0(m + i)).collect();
    let xs: Vec<u8> = (0..m).map(row_q0).collect();
    F2Vector::new(&x, &xs).expect("genus ≥ 1")
}

/// The `q` labelling the right coset `Γ(1,2)·g`, i.e. `g·M_q⁻¹ ∈ Γ(1,2)`.
pub fn coset_index_of(g: &IntegerSymplectic) -> Result<F2Vector> {
    let q = q0_defect(g).act(g);
    if q0_eval(&q) != 0 {
        return Err(Error::Internal(format!("coset label {q} is not isotropic")));
    }
    if !in_theta_group(&g.mul(&transvection_rep(&q).inverse())) {
        return Err(Error::Internal(format!("g·M′_q⁻¹ ∉ Γ(1,2) for q = {q}")));
    }
    Ok(q)
}

/// All coset records of genus `m` in index order.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub genus: usize,
    pub records: Vec<CosetRecord>,
}

impl CosetTable {
    pub fn new(m: usize) -> Result<Self> {
        let records = enumerate_isotropic(m)?.iter().map(refine_rep).collect::<Result<_>>()?;
        Ok(CosetTable { genus: m, records })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn position(&self, q: &F2Vector) -> Option<usize> {
        self.records.iter().position(|r| &r.q == q)
    }

    /// `(i, s)` with `g = s·M_{qᵢ}`, `s ∈ Γ(1,2)`.
    pub fn split(&self, g: &IntegerSymplectic) -> Result<(usize, IntegerSymplectic)> {
        let q = coset_index_of(g)?;
        let i = self.position(&q).ok_or_else(|| Error::Internal(format!("no record for {q}")))?;
        let s = g.mul(&self.records[i].m.inverse());
        if !in_theta_group(&s) {
            return Err(Error::Internal("refined representative outside its coset".into()));
        }
        Ok((i, s))
    }
}

/// `(2^m + 1)·2^{m−1}`.
pub fn coset_count(m: u32) -> u64 {
    ((1u64 << m) + 1) << (m - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{random_word_element, WordGroup};

    #[test]
    fn q0_examples() {
        assert_eq!(q0_eval(&F2Vector::zero(1)), 0);
        assert_eq!(q0_eval(&F2Vector::new(&[1], &[1]).unwrap()), 1);
        assert_eq!(q0_eval(&F2Vector::new(&[1, 0], &[0, 1]).unwrap()), 0);
    }

    #[test]
    fn isotropic_counts() {
        for (m, n) in [(1, 3), (2, 10), (3, 36), (4, 136)] {
            assert_eq!(enumerate_isotropic(m).unwrap().len(), n);
            assert_eq!(coset_count(m as u32), n as u64);
        }
        let v = enumerate_isotropic(1).unwrap();
        assert_eq!(v, vec![F2Vector::zero(1), F2Vector::e(1, 0), F2Vector::e_star(1, 0)]);
        assert!(matches!(enumerate_isotropic(9), Err(Error::Capacity(_))));
    }

    #[test]
    fn transvection_examples() {
        assert!(transvection_rep(&F2Vector::zero(2)).is_identity());
        assert_eq!(*transvection_rep(&F2Vector::e_star(1, 0)).matrix(), ZMat::from_i64(&[vec![1, 1], vec![0, 1]]));
        let q = F2Vector::new(&[1, 1], &[1, 1]).unwrap();
        let want = ZMat::from_i64(&[vec![2, 1, 1, 1], vec![1, 2, 1, 1], vec![-1, -1, 0, -1], vec![-1, -1, -1, 0]]);
        assert_eq!(*transvection_rep(&q).matrix(), want);
    }

    #[test]
    fn transvection_acts_as_transvection_mod2() {
        for q in enumerate_isotropic(3).unwrap() {
            let t = transvection_rep(&q);
            for n in 0..64 {
                let v = F2Vector::from_index(3, n);
                let want = if v.pair(&q) == 1 { v.add(&q) } else { v.clone() };
                assert_eq!(v.act(&t), want);
            }
        }
    }

    #[test]
    fn reduce_mod2_examples() {
        let g = IntegerSymplectic::from_i64(&[vec![2, 1], vec![-1, 0]]).unwrap();
        assert_eq!(reduce_mod2(&g), ZMat::from_i64(&[vec![0, 1], vec![1, 0]]));
        let q = F2Vector::new(&[1, 1], &[1, 1]).unwrap();
        let r = reduce_mod2(&transvection_rep(&q));
        assert_eq!(r, r.transpose());
    }

    #[test]
    fn refine_examples() {
        let r = refine_rep(&F2Vector::zero(2)).unwrap();
        assert!(r.m.is_identity() && r.m_xstar_q == Mu8::ONE);
        let r = refine_rep(&F2Vector::new(&[1, 1], &[1, 1]).unwrap()).unwrap();
        let want = ZMat::from_i64(&[vec![0, -1, -1, 0], vec![-1, 0, 0, -1], vec![1, 1, 1, 0], vec![1, 1, 0, 1]]);
        assert_eq!(*r.m.matrix(), want);
        assert_eq!((r.m_q.clone(), r.eps_q.clone()), (vec![-1, -1], vec![-1, -1]));
        assert_eq!(r.m_xstar_q, Mu8::new(-1));
        let r = refine_rep(&F2Vector::e(1, 0)).unwrap();
        assert_eq!(*r.m.matrix(), ZMat::from_i64(&[vec![1, 0], vec![-1, 1]]));
        assert_eq!((r.m_q.clone(), r.eps_q.clone()), (vec![0], vec![1]));
        assert!(refine_rep(&F2Vector::new(&[1], &[1]).unwrap()).is_err());
    }

    #[test]
    fn refined_reps_reduce_to_same_coset() {
        for m in 1..=3 {
            for q in enumerate_isotropic(m).unwrap() {
                let r = refine_rep(&q).unwrap();
                assert_eq!(coset_index_of(&r.m).unwrap(), q);
                assert_eq!(coset_index_of(&r.m_prime).unwrap(), q);
            }
        }
    }

    #[test]
    fn coset_examples() {
        let g = IntegerSymplectic::from_i64(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert_eq!(coset_index_of(&g).unwrap(), F2Vector::e_star(1, 0));
        for seed in 0..100 {
            let (g, _) = random_word_element(2, WordGroup::Gamma12, 8, seed);
            assert!(coset_index_of(&g).unwrap().is_zero());
        }
    }

    #[test]
    fn cosets_are_distinct() {
        for m in 1..=2 {
            let t = CosetTable::new(m).unwrap();
            for a in &t.records {
                for b in &t.records {
                    assert_eq!(in_theta_group(&a.m.mul(&b.m.inverse())), a.q == b.q);
                }
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        let q = F2Vector::new(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(F2Vector::parse(&q.to_string()).unwrap(), q);
        assert!(F2Vector::parse("1|").is_err());
        assert!(F2Vector::parse("12|01").is_err());
        assert_eq!(F2Vector::from_index(2, q.index()), q);
    }
}
