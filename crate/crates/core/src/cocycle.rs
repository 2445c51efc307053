//! Eighth-root-of-unity layer of the metaplectic cover: Leray signatures,
//! the Rao cocycle `c̃`, the factorization `g = p₁ω_Sp₂`, the normalizing
//! constant `m_{X*}`, the sign cocycle `c̄` and the double cover.

use crate::error::{Error, Result};
use crate::exact::{Mat, QMat, ZMat};
use crate::mu8::Mu8;
use crate::symplectic::{is_symplectic_q, IntegerSymplectic, RMat};
use nalgebra::SymmetricEigen;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// Orientation of the Leray form relative to `⟨x,y⟩ = x·y*ᵀ − x*·yᵀ`.
/// Fixed so that `c̃(ω·u(1), ω) = e^{iπ/4}` in genus one.
const LERAY_ORIENTATION: i64 = 1;

/// A maximal isotropic subspace, spanned by the rows of `basis`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lagrangian {
    basis: QMat,
}

/// `K = (0 1; −1 0)`, so that `⟨u, v⟩ = u·K·vᵀ`.
fn pairing_matrix(m: usize) -> QMat {
    Mat::from_fn(2 * m, 2 * m, |i, j| {
        if i < m && j == i + m {
            BigRational::one()
        } else if i >= m && j + m == i {
            -BigRational::one()
        } else {
            BigRational::zero()
        }
    })
}

impl Lagrangian {
    pub fn new(basis: QMat) -> Result<Self> {
        let m = basis.rows();
        if basis.cols() != 2 * m || m == 0 {
            return Err(Error::Shape("a Lagrangian basis is m×2m".into()));
        }
        if basis.rank() != m {
            return Err(Error::Domain("basis is rank deficient".into()));
        }
        if !(&(&basis * &pairing_matrix(m)) * &basis.transpose()).is_zero() {
            return Err(Error::Domain("subspace is not isotropic".into()));
        }
        Ok(Lagrangian { basis })
    }

    /// `X* = span{e*ᵢ}`.
    pub fn x_star(m: usize) -> Self {
        Lagrangian { basis: Mat::from_fn(m, 2 * m, |i, j| if j == m + i { BigRational::one() } else { BigRational::zero() }) }
    }

    /// `X*·g`: the row space of the bottom `m` rows of `g`.
    pub fn x_star_times(g: &QMat) -> Self {
        let m = g.rows() / 2;
        Lagrangian { basis: g.sub_matrix(m, 0, m, 2 * m) }
    }

    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    pub fn genus(&self) -> usize {
        self.basis.rows()
    }
}

/// Signature of a rational symmetric matrix by congruence diagonalization.
pub fn signature(sym: &QMat) -> i64 {
    let n = sym.rows();
    let mut a = sym.clone();
    let mut sig = 0i64;
    for k in 0..n {
        if let Some(p) = (k..n).find(|&i| !a.get(i, i).is_zero()) {
            swap_sym(&mut a, k, p);
        } else {
            let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a.get(i, j).is_zero());
            let Some((i, j)) = off else { break };
            // row/col i += row/col j turns a_ii into 2a_ij ≠ 0
            for c in 0..n {
                let v = a.get(i, c) + a.get(j, c);
                a.set(i, c, v);
            }
            for r in 0..n {
                let v = a.get(r, i) + a.get(r, j);
                a.set(r, i, v);
            }
            swap_sym(&mut a, k, i);
        }
        let piv = a.get(k, k).clone();
        sig += if piv.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if a.get(i, k).is_zero() {
                continue;
            }
            let f = a.get(i, k) / &piv;
            for c in k..n {
                let v = a.get(i, c) - &f * a.get(k, c);
                a.set(i, c, v);
            }
            for r in k..n {
                let v = a.get(r, i) - &f * a.get(r, k);
                a.set(r, i, v);
            }
        }
    }
    sig
}

fn swap_sym(a: &mut QMat, i: usize, j: usize) {
    a.swap_rows(i, j);
    a.swap_cols(i, j);
}

/// Gram matrix (doubled) of `⟨x₁,x₂⟩ + ⟨x₂,x₃⟩ + ⟨x₃,x₁⟩` on `L₁⊕L₂⊕L₃`.
fn leray_gram(l: [&QMat; 3]) -> QMat {
    let m = l[0].rows();
    let k = pairing_matrix(l[0].cols() / 2);
    let pair = |x: &QMat, y: &QMat| &(x * &k) * &y.transpose();
    let a12 = pair(l[0], l[1]);
    let a23 = pair(l[1], l[2]);
    let a31 = pair(l[2], l[0]);
    let blocks = [
        [None, Some(a12.clone()), Some(a31.transpose())],
        [Some(a12.transpose()), None, Some(a23.clone())],
        [Some(a31), Some(a23.transpose()), None],
    ];
    Mat::from_fn(3 * m, 3 * m, |i, j| match &blocks[i / m][j / m] {
        Some(b) => b.get(i % m, j % m).clone(),
        None => BigRational::zero(),
    })
}

/// Signature of the Leray form of a Lagrangian triple.
pub fn maslov_signature(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian) -> Result<i64> {
    if l1.genus() != l2.genus() || l2.genus() != l3.genus() {
        return Err(Error::Shape("Lagrangians of different genus".into()));
    }
    Ok(LERAY_ORIENTATION * signature(&leray_gram([&l1.basis, &l2.basis, &l3.basis])))
}

/// Floating-point Leray signature for real bases (diagnostics only).
pub fn maslov_signature_real(l: [&RMat; 3], tol: f64) -> i64 {
    let m = l[0].nrows();
    let mut k = RMat::zeros(2 * m, 2 * m);
    for i in 0..m {
        k[(i, m + i)] = 1.0;
        k[(m + i, i)] = -1.0;
    }
    let mut gram = RMat::zeros(3 * m, 3 * m);
    for (p, q) in [(0, 1), (1, 2), (2, 0)] {
        let blk = l[p] * &k * l[q].transpose();
        for i in 0..m {
            for j in 0..m {
                gram[(p * m + i, q * m + j)] += blk[(i, j)];
                gram[(q * m + j, p * m + i)] += blk[(i, j)];
            }
        }
    }
    let e = SymmetricEigen::new(gram).eigenvalues;
    LERAY_ORIENTATION
        * e.iter()
            .map(|&x| {
                if x > tol {
                    1
                } else if x < -tol {
                    -1
                } else {
                    0
                }
            })
            .sum::<i64>()
}

/// `(dᵀ −bᵀ; −cᵀ aᵀ)` for a rational symplectic matrix.
pub fn sp_inverse_q(g: &QMat) -> QMat {
    let m = g.rows() / 2;
    let a = g.sub_matrix(0, 0, m, m);
    let b = g.sub_matrix(0, m, m, m);
    let c = g.sub_matrix(m, 0, m, m);
    let d = g.sub_matrix(m, m, m, m);
    Mat::block2(&d.transpose(), &-&b.transpose(), &-&c.transpose(), &a.transpose())
}

/// `c̃(g₁, g₂) = e^{iπτ/4}`, `τ` the signature on `(X*, X*g₂⁻¹, X*g₁)`.
pub fn rao_cocycle_q(g1: &QMat, g2: &QMat) -> Mu8 {
    let m = g1.rows() / 2;
    let l2 = Lagrangian::x_star_times(&sp_inverse_q(g2));
    let l3 = Lagrangian::x_star_times(g1);
    let tau = maslov_signature(&Lagrangian::x_star(m), &l2, &l3).expect("same genus");
    Mu8::new(tau)
}

pub fn rao_cocycle(g1: &IntegerSymplectic, g2: &IntegerSymplectic) -> Mu8 {
    assert_eq!(g1.genus(), g2.genus(), "genus mismatch");
    rao_cocycle_q(&g1.to_q(), &g2.to_q())
}

/// `g = p₁·ω_S·p₂` with `p₁, p₂` in the Siegel parabolic.
#[derive(Clone, Debug)]
pub struct PwsFactorization {
    pub p1: QMat,
    pub p2: QMat,
    pub s: Vec<usize>,
    pub j: usize,
    pub x_sign: i8,
}

fn h_q(a: &QMat, a_inv_t: &QMat) -> QMat {
    let m = a.rows();
    Mat::block2(a, &QMat::zeros(m, m), &QMat::zeros(m, m), a_inv_t)
}

fn u_q(b: &QMat) -> QMat {
    let m = b.rows();
    Mat::block2(&QMat::identity(m), b, &QMat::zeros(m, m), &QMat::identity(m))
}

pub fn omega_s_q(m: usize, s: &[usize]) -> QMat {
    let mut g = QMat::identity(2 * m);
    for &i in s {
        g.set(i, i, BigRational::zero());
        g.set(m + i, m + i, BigRational::zero());
        g.set(i, m + i, -BigRational::one());
        g.set(m + i, i, BigRational::one());
    }
    g
}

/// Constructive factorization: `S` is the pivot set of the `c`-block.
pub fn pws_decompose(g: &QMat) -> Result<PwsFactorization> {
    if !is_symplectic_q(g) {
        return Err(Error::Domain("input is not symplectic".into()));
    }
    let m = g.rows() / 2;
    let c = g.sub_matrix(m, 0, m, m);
    let (_, e, s) = c.rref();
    let j = s.len();
    // row permutation sending the r-th pivot row to row s[r]
    let free_rows: Vec<usize> = (0..m).filter(|i| !s.contains(i)).collect();
    let mut order = vec![0; m];
    for (r, &p) in s.iter().enumerate() {
        order[p] = r;
    }
    for (k, &p) in free_rows.iter().enumerate() {
        order[p] = j + k;
    }
    let l = e.select_rows(&order);
    let c2 = &l * &c;
    let mut col = QMat::identity(m);
    for &sp in &s {
        for k in (0..m).filter(|k| !s.contains(k)) {
            col.set(sp, k, -c2.get(sp, k).clone());
        }
    }
    let l_inv = l.inverse().ok_or_else(|| Error::Internal("row transform singular".into()))?;
    let col_inv = col.inverse().ok_or_else(|| Error::Internal("column transform singular".into()))?;
    // h(A)·g·h(B) with A⁻ᵀ = L, B = col
    let left = h_q(&l_inv.transpose(), &l);
    let right = h_q(&col, &col_inv.transpose());
    let g1 = &(&left * g) * &right;
    let mut b2 = QMat::zeros(m, m);
    for &x in &s {
        for &y in &s {
            b2.set(x, y, g1.get(m + x, m + y).clone());
        }
    }
    let p2_core = u_q(&b2);
    let w = omega_s_q(m, &s);
    let p1_core = &(&g1 * &u_q(&-&b2)) * &sp_inverse_q(&w);
    if !p1_core.sub_matrix(m, 0, m, m).is_zero() {
        return Err(Error::Internal("left factor is not parabolic".into()));
    }
    let p1 = &h_q(&l.transpose(), &l_inv) * &p1_core;
    let p2 = &p2_core * &h_q(&col_inv, &col.transpose());
    if &(&p1 * &w) * &p2 != *g {
        return Err(Error::Internal("factorization does not reconstruct g".into()));
    }
    let det = p1.sub_matrix(0, 0, m, m).det() * p2.sub_matrix(0, 0, m, m).det();
    let x_sign = if det.is_positive() { 1 } else { -1 };
    Ok(PwsFactorization { p1, p2, s, j, x_sign })
}

/// `m_{X*}(g) = γ(x(g), ψ^{1/2})⁻¹·γ(ψ^{1/2})^{−j(g)}` from a factorization.
pub fn m_xstar_from(f: &PwsFactorization) -> Mu8 {
    Mu8::new(-(f.j as i64) + if f.x_sign < 0 { 2 } else { 0 })
}

pub fn m_xstar_q(g: &QMat) -> Result<Mu8> {
    Ok(m_xstar_from(&pws_decompose(g)?))
}

pub fn m_xstar(g: &IntegerSymplectic) -> Mu8 {
    m_xstar_q(&g.to_q()).expect("integer symplectic input factors")
}

/// `ν(−1, g) = (det a₁a₂, −1)_R·γ(−1, ψ^{1/2})^{−|S|}`.
pub fn nu_minus_one(g: &QMat) -> Result<Mu8> {
    let f = pws_decompose(g)?;
    let hilbert = if f.x_sign < 0 { Mu8::MINUS_ONE } else { Mu8::ONE };
    Ok(hilbert * Mu8::new(-2).pow(-(f.j as i64)))
}

/// `c̄(g₁,g₂) = m(g₁g₂)⁻¹m(g₁)m(g₂)c̃(g₁,g₂) ∈ {±1}`.
pub fn cbar_cocycle(g1: &IntegerSymplectic, g2: &IntegerSymplectic) -> Result<i8> {
    let v = m_xstar(&g1.mul(g2)).inv() * m_xstar(g1) * m_xstar(g2) * rao_cocycle(g1, g2);
    v.as_sign().ok_or_else(|| Error::Internal(format!("c̄ took the value {v}")))
}

/// Element `(g, ε)` of the double cover with cocycle `c̄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverElement {
    pub g: IntegerSymplectic,
    pub eps: i8,
}

impl CoverElement {
    pub fn new(g: IntegerSymplectic, eps: i8) -> Self {
        assert!(eps == 1 || eps == -1, "cover sign must be ±1");
        CoverElement { g, eps }
    }

    pub fn identity(m: usize) -> Self {
        CoverElement { g: IntegerSymplectic::identity(m), eps: 1 }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let c = cbar_cocycle(&self.g, &o.g)?;
        Ok(CoverElement { g: self.g.mul(&o.g), eps: self.eps * o.eps * c })
    }

    pub fn inverse(&self) -> Result<Self> {
        let gi = self.g.inverse();
        let c = cbar_cocycle(&self.g, &gi)?;
        Ok(CoverElement { g: gi, eps: self.eps * c })
    }
}

/// Serializable summary of the cocycle data of a pair.
#[derive(Clone, Debug, Serialize)]
pub struct CocycleReport {
    pub c_tilde_exponent: u8,
    pub c_bar: i8,
    pub m_xstar_g1: u8,
    pub m_xstar_g2: u8,
    pub m_xstar_g1g2: u8,
}

pub fn cocycle_report(g1: &IntegerSymplectic, g2: &IntegerSymplectic) -> Result<CocycleReport> {
    Ok(CocycleReport {
        c_tilde_exponent: rao_cocycle(g1, g2).exponent(),
        c_bar: cbar_cocycle(g1, g2)?,
        m_xstar_g1: m_xstar(g1).exponent(),
        m_xstar_g2: m_xstar(g2).exponent(),
        m_xstar_g1g2: m_xstar(&g1.mul(g2)).exponent(),
    })
}

/// `ZMat` convenience for parabolic checks.
pub fn is_parabolic(g: &ZMat) -> bool {
    let m = g.rows() / 2;
    g.sub_matrix(m, 0, m, m).is_zero()
}
