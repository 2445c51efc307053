//! Symplectic Gauss sums and the trivialization `β̃` of `c̃` on the theta
//! group, together with the multiplier `λ` and the shifted cocycle `c̃′`.

use crate::cocycle::{m_xstar, rao_cocycle, CoverElement};
use crate::error::{Error, Result};
use crate::exact::{q_of, zi, QMat, ZMat};
use crate::f2::CosetTable;
use crate::mu8::Mu8;
use crate::smith::{smith, unimodular_inverse};
use crate::symplectic::{in_theta_group, make_generator, subgroup_membership, Generator, IntegerSymplectic, Subgroup};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Distance to `μ₈` beyond which a value is rejected.
pub const SNAP_TOL: f64 = 1e-9;

/// Refuse to enumerate more residue classes than this.
pub const MAX_CLASSES: u64 = 1_000_000;

/// Complete residue system of `Zᵐ / cᵀZᵐ`.
#[derive(Clone, Debug)]
pub struct ResidueSystem {
    pub c: ZMat,
    pub reps: Vec<Vec<BigInt>>,
}

/// Saturation basis and elementary divisors of the row lattice of `c`.
struct RowLattice {
    /// First `r` rows of `Q⁻¹`; `Z`-basis of `Zᵐ ∩ rowspace(c)`.
    basis: ZMat,
    divisors: Vec<BigInt>,
    /// `P` from `P·c·Q = D`.
    p: ZMat,
}

fn row_lattice(c: &ZMat) -> RowLattice {
    let s = smith(c);
    let divisors = s.invariants();
    let qinv = unimodular_inverse(&s.q);
    let idx: Vec<usize> = (0..divisors.len()).collect();
    RowLattice { basis: qinv.select_rows(&idx), divisors, p: s.p }
}

fn class_count(divisors: &[BigInt]) -> Result<u64> {
    let n: BigInt = divisors.iter().product();
    n.to_u64().filter(|&n| n <= MAX_CLASSES).ok_or_else(|| Error::Capacity(format!("{n} residue classes exceed the limit {MAX_CLASSES}")))
}

/// Mixed-radix enumeration of `0 ≤ nₖ < dₖ`.
fn for_each_digits(divisors: &[BigInt], mut f: impl FnMut(&[BigInt])) {
    let mut n = vec![BigInt::zero(); divisors.len()];
    loop {
        f(&n);
        let mut k = 0;
        loop {
            if k == n.len() {
                return;
            }
            n[k] += 1;
            if n[k] < divisors[k] {
                break;
            }
            n[k] = BigInt::zero();
            k += 1;
        }
    }
}

fn combine(digits: &[BigInt], basis: &ZMat) -> Vec<BigInt> {
    (0..basis.cols()).map(|j| digits.iter().enumerate().map(|(k, n)| n * basis.get(k, j)).sum()).collect()
}

pub fn residues_mod_ct(c: &ZMat) -> Result<ResidueSystem> {
    if c.rows() != c.cols() {
        return Err(Error::Shape("c must be square".into()));
    }
    if c.det().is_zero() {
        return Err(Error::Domain("c is singular".into()));
    }
    let lat = row_lattice(c);
    class_count(&lat.divisors)?;
    let mut reps = Vec::new();
    for_each_digits(&lat.divisors, |n| reps.push(combine(n, &lat.basis)));
    Ok(ResidueSystem { c: c.clone(), reps })
}

/// `e^{πiθ}` with `θ` reduced exactly modulo 2 first.
fn exp_pi_i(theta: &BigRational) -> Complex64 {
    let two = BigRational::from_integer(zi(2));
    let r = theta - (theta / &two).floor() * &two;
    Complex64::from_polar(1.0, PI * r.to_f64().expect("reduced angle is finite"))
}

/// `θ(x) = (t·d)·xᵀ` where `t·c = x`; `t = s·P` with `sₖ = nₖ/dₖ`.
fn quadratic_phase(digits: &[BigInt], lat: &RowLattice, d: &ZMat) -> BigRational {
    let m = d.rows();
    let x = combine(digits, &lat.basis);
    let t: Vec<BigRational> = (0..m)
        .map(|j| digits.iter().zip(&lat.divisors).enumerate().map(|(k, (n, dk))| BigRational::new(n * lat.p.get(k, j), dk.clone())).sum())
        .collect();
    (0..m)
        .map(|j| {
            let td: BigRational = (0..m).map(|i| &t[i] * q_of(d.get(i, j))).sum();
            td * q_of(&x[j])
        })
        .sum()
}

/// `G(d, c) = Σ_{l mod cᵀ} e^{πi·l c⁻¹ d lᵀ}`.
pub fn symplectic_gauss_sum(d: &ZMat, c: &ZMat) -> Result<Complex64> {
    if c.rows() != c.cols() || d.rows() != c.rows() || d.cols() != c.cols() {
        return Err(Error::Shape("c and d must be square of equal size".into()));
    }
    if c.det().is_zero() {
        return Err(Error::Domain("c is singular".into()));
    }
    let lat = row_lattice(c);
    class_count(&lat.divisors)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_digits(&lat.divisors, |n| acc += exp_pi_i(&quadratic_phase(n, &lat, d)));
    Ok(acc)
}

/// A value snapped to `μ₈`, with the raw input it came from.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SnappedRoot {
    pub value: Mu8,
    #[serde(serialize_with = "ser_complex")]
    pub raw: Complex64,
    pub residual: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&z.re)?;
    seq.serialize_element(&z.im)?;
    seq.end()
}

impl SnappedRoot {
    pub fn snap(raw: Complex64) -> Result<Self> {
        let (value, residual) = Mu8::snap(raw);
        if !(residual < SNAP_TOL) {
            return Err(Error::Precision(format!("{raw} is {residual:.3e} away from μ₈")));
        }
        Ok(SnappedRoot { value, raw, residual })
    }
}

/// `β̃(g)` for `g` in the theta group.
///
/// Sums `e^{−πi⟨x*, y*⟩}` over `[L ∩ (X*+Y*)] / [(X*∩L) + (Y*∩L)]`, with
/// `Y* = X*g`, normalized by the square root of the index.  Representatives
/// are taken in `X`, so the `⟨x_l, x*_l⟩` factor is trivial; for `det c ≠ 0`
/// this is `|det c|^{−1/2}·conj G(d, c)`.
pub fn beta_tilde(g: &IntegerSymplectic) -> Result<SnappedRoot> {
    if !in_theta_group(g) {
        return Err(Error::Domain("β̃ is defined on the theta group only".into()));
    }
    let (c, d) = (g.c(), g.d());
    let lat = row_lattice(&c);
    let count = class_count(&lat.divisors)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for_each_digits(&lat.divisors, |n| acc += exp_pi_i(&-quadratic_phase(n, &lat, &d)));
    SnappedRoot::snap(acc / (count as f64).sqrt())
}

/// Rational `t` with `t·c = x`, if one exists.
fn solve_left(c: &QMat, x: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = c.rows();
    let (_, e, piv) = c.transpose().rref();
    let ex: Vec<BigRational> = (0..e.rows()).map(|k| (0..x.len()).map(|i| e.get(k, i) * &x[i]).sum()).collect();
    if ex[piv.len()..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut t = vec![BigRational::zero(); m];
    for (k, &p) in piv.iter().enumerate() {
        t[p] = ex[k].clone();
    }
    Some(t)
}

/// Summand at an arbitrary class representative `(x, x*)`; used to check
/// that it is a class function.
pub fn beta_summand(g: &IntegerSymplectic, x: &[BigInt], xs: &[BigInt]) -> Result<Complex64> {
    let m = g.genus();
    let (c, d) = (g.c().to_q(), g.d().to_q());
    let xq: Vec<BigRational> = x.iter().map(q_of).collect();
    let t = solve_left(&c, &xq).ok_or_else(|| Error::Domain("x is not in the row space of c".into()))?;
    let td: Vec<BigRational> = (0..m).map(|j| (0..m).map(|i| &t[i] * d.get(i, j)).sum()).collect();
    // ⟨x_l, x*_l⟩ + ⟨x*, y*⟩ with x* = (0, x* − t·d), y* = (x, t·d)
    let own: BigRational = (0..m).map(|j| &xq[j] * q_of(&xs[j])).sum();
    let cross: BigRational = (0..m).map(|j| -(q_of(&xs[j]) - &td[j]) * &xq[j]).sum();
    Ok(exp_pi_i(&-(own + cross)))
}

/// `λ(r) = m_{X*}(r)·β̃(r)⁻¹`.
pub fn lambda_multiplier(r: &IntegerSymplectic) -> Result<Mu8> {
    Ok(m_xstar(r) * beta_tilde(r)?.value.inv())
}

/// `λ̄(r, ε) = λ(r)·ε`.
pub fn lambda_bar(r: &CoverElement) -> Result<Mu8> {
    Ok(lambda_multiplier(&r.g)? * Mu8::from_sign(r.eps))
}

/// `f(g) = β̃(s)·c̃(s, M_q)` for `g = s·M_q`.
pub fn f_shift(table: &CosetTable, g: &IntegerSymplectic) -> Result<Mu8> {
    let (i, s) = table.split(g)?;
    Ok(beta_tilde(&s)?.value * rao_cocycle(&s, &table.records[i].m))
}

/// `c̃′(g₁, g₂) = c̃(g₁, g₂)·f(g₁)·f(g₂)·f(g₁g₂)⁻¹`.
pub fn modified_cocycle(table: &CosetTable, g1: &IntegerSymplectic, g2: &IntegerSymplectic) -> Result<Mu8> {
    Ok(rao_cocycle(g1, g2) * f_shift(table, g1)? * f_shift(table, g2)? * f_shift(table, &g1.mul(g2))?.inv())
}

/// Generators of `Γ(4, 8)` up to conjugation.
fn level_four_letters(m: usize) -> Vec<IntegerSymplectic> {
    let mut out = Vec::new();
    for i in 0..m {
        for s in [1, -1] {
            out.push(make_generator(m, &Generator::Uij(i, i, 8 * s)).unwrap());
            out.push(make_generator(m, &Generator::ULowerij(i, i, 8 * s)).unwrap());
            for j in (0..m).filter(|&j| j != i) {
                out.push(make_generator(m, &Generator::Vij(i, j, 4 * s)).unwrap());
                if i < j {
                    out.push(make_generator(m, &Generator::Uij(i, j, 4 * s)).unwrap());
                    out.push(make_generator(m, &Generator::ULowerij(i, j, 4 * s)).unwrap());
                }
            }
        }
    }
    out
}

/// Random element of `Γ(4, 8)`: a product of conjugates `w·x·w⁻¹` of level-4
/// letters by short random words, kept only if it passes the membership test.
pub fn sample_gamma48(m: usize, seed: u64, factors: usize, conj_len: usize) -> Result<IntegerSymplectic> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = level_four_letters(m);
    let conj = crate::symplectic::alphabet(m, crate::symplectic::WordGroup::Sp);
    for _ in 0..64 {
        let mut g = IntegerSymplectic::identity(m);
        for _ in 0..factors {
            let (w, _) = crate::symplectic::random_word_with(&mut rng, &conj, m, conj_len);
            let x = &letters[rng.random_range(0..letters.len())];
            g = g.mul(&w.mul(x).mul(&w.inverse()));
        }
        if subgroup_membership(&g, Subgroup::GammaD2D(4))? {
            return Ok(g);
        }
    }
    Err(Error::Internal("Γ(4,8) sampler kept failing the membership test".into()))
}

/// `ι_i(γ)` for an `SL₂(Z)` element.
pub fn iota(m: usize, i: usize, gamma: [[i64; 2]; 2]) -> Result<IntegerSymplectic> {
    make_generator(m, &Generator::IotaSl2(i, gamma))
}
