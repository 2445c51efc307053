//! Integer and real symplectic matrices, generators, congruence subgroups,
//! the action on the Siegel upper half space and the positive Iwasawa
//! decomposition.
//!
//! Group elements act on row vectors `w ↦ w·g`; a matrix is written in
//! blocks `(a b; c d)` and is symplectic when `gᵀJg = J` with
//! `J = (0 −1; 1 0)`.

use crate::error::{Error, Result};
use crate::exact::{zi, Mat, QMat, ZMat};
use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;
pub type CVec = nalgebra::DVector<Complex64>;

/// The standard form `J = (0 −1ₘ; 1ₘ 0)`.
pub fn j_form<T: Clone + Zero + One + std::ops::Neg<Output = T>>(m: usize) -> Mat<T> {
    Mat::from_fn(2 * m, 2 * m, |i, j| {
        if i < m && j == i + m {
            -T::one()
        } else if i >= m && j + m == i {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// An element of `Sp₂ₘ(Z)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerSymplectic {
    m: usize,
    g: ZMat,
}

impl fmt::Debug for IntegerSymplectic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.g)
    }
}

impl IntegerSymplectic {
    pub fn new(g: ZMat) -> Result<Self> {
        if g.rows() != g.cols() || !g.rows().is_multiple_of(2) || g.rows() == 0 {
            return Err(Error::Shape(format!("{}×{} is not 2m×2m", g.rows(), g.cols())));
        }
        if !is_symplectic_exact(&g) {
            return Err(Error::Domain("matrix is not symplectic".into()));
        }
        Ok(IntegerSymplectic { m: g.rows() / 2, g })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(ZMat::from_i64(rows))
    }

    pub(crate) fn new_unchecked(g: ZMat) -> Self {
        debug_assert!(is_symplectic_exact(&g));
        IntegerSymplectic { m: g.rows() / 2, g }
    }

    pub fn identity(m: usize) -> Self {
        IntegerSymplectic { m, g: ZMat::identity(2 * m) }
    }

    pub fn genus(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &ZMat {
        &self.g
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        self.g.get(i, j)
    }

    pub fn a(&self) -> ZMat {
        self.g.sub_matrix(0, 0, self.m, self.m)
    }
    pub fn b(&self) -> ZMat {
        self.g.sub_matrix(0, self.m, self.m, self.m)
    }
    pub fn c(&self) -> ZMat {
        self.g.sub_matrix(self.m, 0, self.m, self.m)
    }
    pub fn d(&self) -> ZMat {
        self.g.sub_matrix(self.m, self.m, self.m, self.m)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.m, rhs.m, "genus mismatch");
        IntegerSymplectic { m: self.m, g: &self.g * &rhs.g }
    }

    /// `(dᵀ −bᵀ; −cᵀ aᵀ)`.
    pub fn inverse(&self) -> Self {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let g = Mat::block2(&d.transpose(), &-&b.transpose(), &-&c.transpose(), &a.transpose());
        IntegerSymplectic { m: self.m, g }
    }

    pub fn is_identity(&self) -> bool {
        self.g.is_identity()
    }

    pub fn to_q(&self) -> QMat {
        self.g.to_q()
    }

    pub fn to_f64(&self) -> RMat {
        self.g.to_f64()
    }

    pub fn in_parabolic(&self) -> bool {
        self.c().is_zero()
    }
}

fn is_symplectic_exact<T>(g: &Mat<T>) -> bool
where
    T: Clone + Zero + One + PartialEq + std::ops::Neg<Output = T> + for<'a> std::ops::Mul<&'a T, Output = T>,
{
    let m = g.rows() / 2;
    let j = j_form::<T>(m);
    &(&g.transpose() * &j) * g == j
}

/// `gᵀJg = J`, exactly for integer input.
pub fn is_symplectic(g: &ZMat) -> Result<bool> {
    if g.rows() != g.cols() || !g.rows().is_multiple_of(2) {
        return Err(Error::Shape("expected an even-dimensional square matrix".into()));
    }
    Ok(is_symplectic_exact(g))
}

/// `gᵀJg = J`, exactly for rational input.
pub fn is_symplectic_q(g: &QMat) -> bool {
    g.rows() == g.cols() && g.rows().is_multiple_of(2) && is_symplectic_exact(g)
}

/// `gᵀJg = J` to `tol` for real input.
pub fn is_symplectic_real(g: &RMat, tol: f64) -> Result<bool> {
    if g.nrows() != g.ncols() || !g.nrows().is_multiple_of(2) {
        return Err(Error::Shape("expected an even-dimensional square matrix".into()));
    }
    let m = g.nrows() / 2;
    let j = real_j(m);
    Ok((g.transpose() * &j * g - &j).amax() <= tol)
}

pub fn real_j(m: usize) -> RMat {
    RMat::from_fn(2 * m, 2 * m, |i, j| {
        if i < m && j == i + m {
            -1.0
        } else if i >= m && j + m == i {
            1.0
        } else {
            0.0
        }
    })
}

// ---------------------------------------------------------------------------
// generators

/// The named generators of the integer symplectic group.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// `u(b) = (1 b; 0 1)`, `b` symmetric.
    U(ZMat),
    /// `u₋(c) = (1 0; c 1)`, `c` symmetric.
    ULower(ZMat),
    /// `h(a) = (a 0; 0 a⁻ᵀ)`, `a ∈ GLₘ(Z)`.
    H(ZMat),
    /// `ω_S` for `S ⊆ {0..m}` (zero-based).
    OmegaS(Vec<usize>),
    /// `u_{ij}(t)`; `i = j` gives `u(t·E_ii)`.
    Uij(usize, usize, i64),
    /// `u⁻_{ij}(t)`; `i = j` gives `u₋(−t·E_ii)`.
    ULowerij(usize, usize, i64),
    /// `v_{ij}(t) = h(1 + t·E_ij)`, `i ≠ j`.
    Vij(usize, usize, i64),
    /// `ι_i` of an `SL₂(Z)` element.
    IotaSl2(usize, [[i64; 2]; 2]),
    /// `ι_{(j,k)}` of an `Sp₄(Z)` element.
    IotaSp4(usize, usize, ZMat),
}

fn elem(m: usize, i: usize, j: usize, t: i64) -> ZMat {
    Mat::from_fn(m, m, |r, c| if r == i && c == j { zi(t) } else { zi(0) })
}

fn sym_elem(m: usize, i: usize, j: usize, t: i64) -> ZMat {
    if i == j {
        elem(m, i, i, t)
    } else {
        &elem(m, i, j, t) + &elem(m, j, i, t)
    }
}

pub fn u_of(b: &ZMat) -> IntegerSymplectic {
    let m = b.rows();
    IntegerSymplectic::new_unchecked(Mat::block2(&ZMat::identity(m), b, &ZMat::zeros(m, m), &ZMat::identity(m)))
}

pub fn ulower_of(c: &ZMat) -> IntegerSymplectic {
    let m = c.rows();
    IntegerSymplectic::new_unchecked(Mat::block2(&ZMat::identity(m), &ZMat::zeros(m, m), c, &ZMat::identity(m)))
}

pub fn omega(m: usize) -> IntegerSymplectic {
    omega_s(m, &(0..m).collect::<Vec<_>>())
}

pub fn omega_s(m: usize, s: &[usize]) -> IntegerSymplectic {
    let mut g = ZMat::identity(2 * m);
    for &i in s {
        g.set(i, i, zi(0));
        g.set(m + i, m + i, zi(0));
        g.set(i, m + i, zi(-1));
        g.set(m + i, i, zi(1));
    }
    IntegerSymplectic::new_unchecked(g)
}

fn check_index(m: usize, i: usize) -> Result<()> {
    if i >= m {
        return Err(Error::Parameter(format!("index {i} out of range for genus {m}")));
    }
    Ok(())
}

fn iota_indices(m: usize, j: usize, k: usize) -> [usize; 4] {
    [j, k, m + j, m + k]
}

pub fn make_generator(m: usize, kind: &Generator) -> Result<IntegerSymplectic> {
    if m == 0 {
        return Err(Error::Parameter("genus must be positive".into()));
    }
    let square = |x: &ZMat| -> Result<()> {
        if x.rows() != m || x.cols() != m {
            return Err(Error::Parameter(format!("expected an {m}×{m} block")));
        }
        Ok(())
    };
    match kind {
        Generator::U(b) | Generator::ULower(b) => {
            square(b)?;
            if *b != b.transpose() {
                return Err(Error::Parameter("block must be symmetric".into()));
            }
            Ok(if matches!(kind, Generator::U(_)) { u_of(b) } else { ulower_of(b) })
        }
        Generator::H(a) => {
            square(a)?;
            let det = a.det();
            if !det.abs().is_one() {
                return Err(Error::Parameter("a must be unimodular".into()));
            }
            let inv_t = crate::smith::unimodular_inverse(a).transpose();
            Ok(IntegerSymplectic::new_unchecked(Mat::block2(a, &ZMat::zeros(m, m), &ZMat::zeros(m, m), &inv_t)))
        }
        Generator::OmegaS(s) => {
            for &i in s {
                check_index(m, i)?;
            }
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            Ok(omega_s(m, &s))
        }
        Generator::Uij(i, j, t) => {
            check_index(m, *i)?;
            check_index(m, *j)?;
            Ok(u_of(&sym_elem(m, *i, *j, *t)))
        }
        Generator::ULowerij(i, j, t) => {
            check_index(m, *i)?;
            check_index(m, *j)?;
            Ok(ulower_of(&sym_elem(m, *i, *j, -*t)))
        }
        Generator::Vij(i, j, t) => {
            check_index(m, *i)?;
            check_index(m, *j)?;
            if i == j {
                return Err(Error::Parameter("v_ij needs i ≠ j".into()));
            }
            make_generator(m, &Generator::H(&ZMat::identity(m) + &elem(m, *i, *j, *t)))
        }
        Generator::IotaSl2(i, x) => {
            check_index(m, *i)?;
            if x[0][0] * x[1][1] - x[0][1] * x[1][0] != 1 {
                return Err(Error::Parameter("SL₂ block must have determinant 1".into()));
            }
            let mut g = ZMat::identity(2 * m);
            let idx = [*i, m + *i];
            for r in 0..2 {
                for c in 0..2 {
                    g.set(idx[r], idx[c], zi(x[r][c]));
                }
            }
            Ok(IntegerSymplectic::new_unchecked(g))
        }
        Generator::IotaSp4(j, k, x) => {
            check_index(m, *j)?;
            check_index(m, *k)?;
            if j == k {
                return Err(Error::Parameter("ι_(j,k) needs j ≠ k".into()));
            }
            if x.rows() != 4 || !is_symplectic(x)? {
                return Err(Error::Parameter("block must lie in Sp₄(Z)".into()));
            }
            let idx = iota_indices(m, *j, *k);
            let mut g = ZMat::identity(2 * m);
            for r in 0..4 {
                for c in 0..4 {
                    g.set(idx[r], idx[c], x.get(r, c).clone());
                }
            }
            IntegerSymplectic::new(g)
        }
    }
}

// ---------------------------------------------------------------------------
// congruence subgroups

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    /// Principal congruence subgroup of level 2.
    Gamma2,
    /// The theta group.
    Gamma12,
    /// `Γ(d, 2d)` for even `d`.
    GammaD2D(i64),
}

fn diag_even(x: &ZMat, y: &ZMat) -> bool {
    (0..x.rows()).all(|i| {
        let s = (0..x.cols()).fold(BigInt::zero(), |s, k| s + x.get(i, k) * y.get(i, k));
        s.is_even()
    })
}

/// Theta-group condition: `diag(abᵀ)` and `diag(cdᵀ)` even, i.e. `g`
/// preserves `Q₀` under the row action.
pub fn in_theta_group(g: &IntegerSymplectic) -> bool {
    diag_even(&g.a(), &g.b()) && diag_even(&g.c(), &g.d())
}

pub fn subgroup_membership(g: &IntegerSymplectic, which: Subgroup) -> Result<bool> {
    let n = 2 * g.genus();
    let m = g.genus();
    match which {
        Subgroup::Gamma2 => Ok(congruent_to_one(g, 2)),
        Subgroup::Gamma12 => Ok(in_theta_group(g)),
        Subgroup::GammaD2D(d) => {
            if d <= 0 || d % 2 != 0 {
                return Err(Error::Parameter("Γ(d,2d) needs positive even d".into()));
            }
            if !congruent_to_one(g, d) {
                return Ok(false);
            }
            let dd = zi(d);
            let prime = |i: usize, j: usize| -> BigInt {
                let one = if i == j { zi(1) } else { zi(0) };
                (g.entry(i, j) - one) / &dd
            };
            debug_assert!(n == 2 * m);
            Ok((0..m).all(|i| prime(m + i, i).is_even() && prime(i, m + i).is_even()))
        }
    }
}

fn congruent_to_one(g: &IntegerSymplectic, d: i64) -> bool {
    let dd = zi(d);
    let n = 2 * g.genus();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let one = if i == j { zi(1) } else { zi(0) };
            (g.entry(i, j) - one).is_multiple_of(&dd)
        })
    })
}

// ---------------------------------------------------------------------------
// random words

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordGroup {
    Sp,
    Gamma12,
    Gamma2,
}

/// The sampling alphabet; inverses are included so words are balanced.
pub fn alphabet(m: usize, group: WordGroup) -> Vec<(String, IntegerSymplectic)> {
    let mut out: Vec<(String, IntegerSymplectic)> = Vec::new();
    let mut push = |name: String, g: IntegerSymplectic| out.push((name, g));
    let diag_step = match group {
        WordGroup::Sp => 1,
        _ => 2,
    };
    let off_step = match group {
        WordGroup::Gamma2 => 2,
        _ => 1,
    };
    if group != WordGroup::Gamma2 {
        push("ω".into(), omega(m));
    }
    for i in 0..m {
        for s in [1, -1] {
            push(format!("u_{i}{i}({})", s * diag_step), make_generator(m, &Generator::Uij(i, i, s * diag_step)).unwrap());
            if group == WordGroup::Gamma2 {
                push(format!("u⁻_{i}{i}({})", s * 2), make_generator(m, &Generator::ULowerij(i, i, s * 2)).unwrap());
            }
        }
        let mut flip = ZMat::identity(m);
        flip.set(i, i, zi(-1));
        push(format!("h(−e_{i})"), make_generator(m, &Generator::H(flip)).unwrap());
        for j in 0..m {
            if i == j {
                continue;
            }
            for s in [1, -1] {
                push(format!("v_{i}{j}({})", s * off_step), make_generator(m, &Generator::Vij(i, j, s * off_step)).unwrap());
                if i < j {
                    push(format!("u_{i}{j}({})", s * off_step), make_generator(m, &Generator::Uij(i, j, s * off_step)).unwrap());
                    if group == WordGroup::Gamma2 {
                        push(format!("u⁻_{i}{j}({})", s * 2), make_generator(m, &Generator::ULowerij(i, j, s * 2)).unwrap());
                    }
                }
            }
        }
    }
    out
}

/// Deterministic random word of the given length over the alphabet.
pub fn random_word_element(m: usize, group: WordGroup, length: usize, seed: u64) -> (IntegerSymplectic, Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_word_with(&mut rng, &alphabet(m, group), m, length)
}

pub fn random_word_with<R: Rng>(
    rng: &mut R,
    letters: &[(String, IntegerSymplectic)],
    m: usize,
    length: usize,
) -> (IntegerSymplectic, Vec<String>) {
    let mut g = IntegerSymplectic::identity(m);
    let mut trace = Vec::with_capacity(length);
    for _ in 0..length {
        let (name, x) = &letters[rng.random_range(0..letters.len())];
        g = g.mul(x);
        trace.push(name.clone());
    }
    (g, trace)
}

// ---------------------------------------------------------------------------
// Siegel upper half space

/// `z = X + iY` with `X`, `Y` real symmetric and `Y` positive definite.
#[derive(Clone, Debug, PartialEq)]
pub struct SiegelPoint {
    pub x: RMat,
    pub y: RMat,
}

impl SiegelPoint {
    pub fn new(x: RMat, y: RMat) -> Result<Self> {
        let m = x.nrows();
        if x.ncols() != m || y.nrows() != m || y.ncols() != m || m == 0 {
            return Err(Error::Shape("X and Y must be m×m".into()));
        }
        if (&x - x.transpose()).amax() > 1e-12 || (&y - y.transpose()).amax() > 1e-12 {
            return Err(Error::Domain("X and Y must be symmetric".into()));
        }
        if y.clone().cholesky().is_none() {
            return Err(Error::Domain("Y must be positive definite".into()));
        }
        Ok(SiegelPoint { x, y })
    }

    /// `i·1ₘ`.
    pub fn base(m: usize) -> Self {
        SiegelPoint { x: RMat::zeros(m, m), y: RMat::identity(m, m) }
    }

    pub fn from_complex(z: &CMat) -> Result<Self> {
        let zs = (z + z.transpose()) * Complex64::new(0.5, 0.0);
        Self::new(zs.map(|w| w.re), zs.map(|w| w.im))
    }

    pub fn genus(&self) -> usize {
        self.x.nrows()
    }

    pub fn z(&self) -> CMat {
        CMat::from_fn(self.genus(), self.genus(), |i, j| Complex64::new(self.x[(i, j)], self.y[(i, j)]))
    }

    pub fn conj(&self) -> CMat {
        self.z().map(|w| w.conj())
    }

    pub fn min_eig_y(&self) -> f64 {
        SymmetricEigen::new(self.y.clone()).eigenvalues.min()
    }

    pub fn cond_y(&self) -> f64 {
        let e = SymmetricEigen::new(self.y.clone()).eigenvalues;
        e.max() / e.min()
    }
}

fn blocks(g: &RMat) -> (RMat, RMat, RMat, RMat) {
    let m = g.nrows() / 2;
    (
        g.view((0, 0), (m, m)).into_owned(),
        g.view((0, m), (m, m)).into_owned(),
        g.view((m, 0), (m, m)).into_owned(),
        g.view((m, m), (m, m)).into_owned(),
    )
}

fn complexify(x: &RMat) -> CMat {
    x.map(|v| Complex64::new(v, 0.0))
}

/// `J(g, z) = cz + d`.
pub fn automorphy(g: &RMat, z: &CMat) -> CMat {
    let (_, _, c, d) = blocks(g);
    complexify(&c) * z + complexify(&d)
}

/// `g(z) = (az + b)(cz + d)⁻¹`.
pub fn mobius_act(g: &RMat, z: &SiegelPoint) -> Result<SiegelPoint> {
    if g.nrows() != 2 * z.genus() {
        return Err(Error::Shape("genus mismatch".into()));
    }
    let (a, b, _, _) = blocks(g);
    let zz = z.z();
    let j = automorphy(g, &zz);
    let scale = j.iter().map(|w| w.norm()).fold(0.0, f64::max).max(1.0);
    let lu = j.clone().lu();
    let det = lu.determinant();
    if det.norm() <= 1e-12 * scale.powi(z.genus() as i32) {
        return Err(Error::Conditioning("cz+d is numerically singular".into()));
    }
    let inv = lu.try_inverse().ok_or_else(|| Error::Conditioning("cz+d is singular".into()))?;
    let w = (complexify(&a) * &zz + complexify(&b)) * inv;
    SiegelPoint::from_complex(&w)
}

pub fn real_u(b: &RMat) -> RMat {
    let m = b.nrows();
    let mut g = RMat::identity(2 * m, 2 * m);
    g.view_mut((0, m), (m, m)).copy_from(b);
    g
}

pub fn real_h(a: &RMat) -> Option<RMat> {
    let m = a.nrows();
    let inv_t = a.clone().try_inverse()?.transpose();
    let mut g = RMat::zeros(2 * m, 2 * m);
    g.view_mut((0, 0), (m, m)).copy_from(a);
    g.view_mut((m, m), (m, m)).copy_from(&inv_t);
    Some(g)
}

// ---------------------------------------------------------------------------
// Iwasawa decomposition

/// `g = p·k` with `p` upper block-triangular (positive-definite `a`-block)
/// and `k` in the stabilizer of `i·1ₘ`.
#[derive(Clone, Debug)]
pub struct IwasawaPair {
    pub p: RMat,
    pub k: RMat,
}

/// Positive-definite square root with eigenvalues floored at `1e−14`.
pub fn spd_sqrt(y: &RMat) -> RMat {
    let e = SymmetricEigen::new(y.clone());
    let d = RMat::from_diagonal(&e.eigenvalues.map(|l| l.max(1e-14).sqrt()));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

pub fn iwasawa_decompose(g: &RMat) -> Result<IwasawaPair> {
    if !is_symplectic_real(g, 1e-8)? {
        return Err(Error::Domain("input is not symplectic".into()));
    }
    let m = g.nrows() / 2;
    let zg = mobius_act(g, &SiegelPoint::base(m)).map_err(|_| Error::Domain("y_g is not positive definite".into()))?;
    let s = spd_sqrt(&zg.y);
    let s_inv = s.clone().try_inverse().ok_or_else(|| Error::Domain("y_g is singular".into()))?;
    let mut p = RMat::zeros(2 * m, 2 * m);
    p.view_mut((0, 0), (m, m)).copy_from(&s);
    p.view_mut((0, m), (m, m)).copy_from(&(&zg.x * &s_inv));
    p.view_mut((m, m), (m, m)).copy_from(&s_inv);
    let (pa, pb, _, pd) = blocks(&p);
    let mut p_inv = RMat::zeros(2 * m, 2 * m);
    p_inv.view_mut((0, 0), (m, m)).copy_from(&pd.transpose());
    p_inv.view_mut((0, m), (m, m)).copy_from(&(-pb.transpose()));
    p_inv.view_mut((m, m), (m, m)).copy_from(&pa.transpose());
    let k = p_inv * g;
    Ok(IwasawaPair { p, k })
}

/// Residual of `(ci + d)(−ci + d)ᵀ y_gᵀ = 1ₘ`.
pub fn identi_residual(g: &RMat) -> Result<f64> {
    let m = g.nrows() / 2;
    let (_, _, c, d) = blocks(g);
    let i = Complex64::new(0.0, 1.0);
    let ci_d = complexify(&c) * i + complexify(&d);
    let mci_d = complexify(&c) * (-i) + complexify(&d);
    let yg = mobius_act(g, &SiegelPoint::base(m))?.y;
    let r = ci_d * mci_d.transpose() * complexify(&yg.transpose()) - CMat::identity(m, m);
    Ok(r.iter().map(|w| w.norm()).fold(0.0, f64::max))
}
