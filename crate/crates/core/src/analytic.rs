//! Analytic factors: the Gaussian branch of `det^{−1/2}`, the kernel
//! `γ(z′, z)`, the factor `ε(g; z′, z)` and the automorphy factors
//! `J_{1/2}`, `√det(cz+d)`, `J_{3/2}`.

use crate::cocycle::{m_xstar_from, pws_decompose, PwsFactorization};
use crate::error::{Error, Result};
use crate::exact::QMat;
use crate::mu8::Mu8;
use crate::symplectic::{automorphy, mobius_act, CMat, IntegerSymplectic, RMat, SiegelPoint};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use num_traits::Signed;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `det^{−1/2}(S) = ∫ e^{−π x S xᵀ} dx` for complex symmetric `S` with
/// `Re S ≻ 0`.
///
/// Writes `S = L(1 + iC)Lᵀ` with `Re S = LLᵀ` and `C` real symmetric, so
/// `det^{−1/2}(S) = det(Re S)^{−1/2}·∏(1 + iμₖ)^{−1/2}` with every factor on
/// the principal branch (`Re(1 + iμ) = 1`).
pub fn det_invsqrt(s: &CMat) -> Result<Complex64> {
    let m = s.nrows();
    if s.ncols() != m {
        return Err(Error::Shape("det^{−1/2} needs a square matrix".into()));
    }
    if m == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let scale = s.iter().map(|w| w.norm()).fold(1.0, f64::max);
    if (s - s.transpose()).iter().any(|w| w.norm() > 1e-10 * scale) {
        return Err(Error::Domain("matrix is not symmetric".into()));
    }
    let a: RMat = s.map(|w| w.re);
    let b: RMat = s.map(|w| w.im);
    let a = (&a + a.transpose()) * 0.5;
    let b = (&b + b.transpose()) * 0.5;
    let chol = a.clone().cholesky().ok_or_else(|| Error::Domain("Re S is not positive definite".into()))?;
    let l = chol.l();
    let l_inv = l.clone().try_inverse().ok_or_else(|| Error::Domain("Re S is singular".into()))?;
    let c = &l_inv * b * l_inv.transpose();
    let mu = SymmetricEigen::new((&c + c.transpose()) * 0.5).eigenvalues;
    let det_a: f64 = l.diagonal().iter().map(|x| x * x).product();
    let mut out = Complex64::new(det_a.powf(-0.5), 0.0);
    for k in mu.iter() {
        out /= Complex64::new(1.0, *k).sqrt();
    }
    Ok(out)
}

/// `det^{1/2}(S)` on the same branch.
pub fn det_sqrt(s: &CMat) -> Result<Complex64> {
    Ok(det_invsqrt(s)?.inv())
}

fn det_real(y: &RMat) -> f64 {
    y.clone().lu().determinant()
}

/// `γ(z′, z) = det^{−1/2}((z′ − z̄)/2i)·det(Im z′)^{1/4}·det(Im z)^{1/4}`.
pub fn gamma_pair(z1: &SiegelPoint, z2: &SiegelPoint) -> Result<Complex64> {
    if z1.genus() != z2.genus() {
        return Err(Error::Shape("points of different genus".into()));
    }
    let s = (z1.z() - z2.conj()) / (2.0 * I);
    Ok(det_invsqrt(&s)? * (det_real(&z1.y) * det_real(&z2.y)).powf(0.25))
}

/// `ε(g; z₁, z₂) = γ(g z₁, g z₂) / γ(z₁, z₂)`.
pub fn epsilon_factor(g: &RMat, z1: &SiegelPoint, z2: &SiegelPoint) -> Result<Complex64> {
    let num = gamma_pair(&mobius_act(g, z1)?, &mobius_act(g, z2)?)?;
    Ok(num / gamma_pair(z1, z2)?)
}

fn complex_det(x: &CMat) -> Complex64 {
    x.clone().lu().determinant()
}

fn q_to_f64(x: &QMat) -> RMat {
    x.to_f64()
}

/// Holomorphic `J_{1/2}` from a factorization `g = p₁ω_Sp₂`:
/// `|det a₁a₂|^{−1/2}·det^{1/2}(−i·(p₂z)_{SS})`.
pub fn j_half_from(f: &PwsFactorization, z: &SiegelPoint) -> Result<Complex64> {
    let m = z.genus();
    let w = mobius_act(&q_to_f64(&f.p2), z)?.z();
    let ss = CMat::from_fn(f.s.len(), f.s.len(), |i, j| -I * w[(f.s[i], f.s[j])]);
    let a1 = f.p1.sub_matrix(0, 0, m, m).det();
    let a2 = f.p2.sub_matrix(0, 0, m, m).det();
    let x = (a1 * a2).abs();
    let x = num_traits::ToPrimitive::to_f64(&x).ok_or_else(|| Error::Precision("det a₁a₂ overflows".into()))?;
    Ok(det_sqrt(&ss)? * x.powf(-0.5))
}

/// `J_{1/2}(g, z)` straight from the factorization (no `ε`).
pub fn j_half_rao(g: &IntegerSymplectic, z: &SiegelPoint) -> Result<Complex64> {
    check_genus(g, z)?;
    j_half_from(&pws_decompose(&g.to_q())?, z)
}

fn check_genus(g: &IntegerSymplectic, z: &SiegelPoint) -> Result<()> {
    if g.genus() != z.genus() {
        return Err(Error::Shape("genus mismatch".into()));
    }
    Ok(())
}

/// `J_{1/2}(g, z) = ε(g; z, z₀)·|det J(g, z)|^{1/2}·φ(g)`, where the constant
/// phase `φ(g)` is that of the factorized form at `z₀`.
pub fn j_half(g: &IntegerSymplectic, z: &SiegelPoint) -> Result<Complex64> {
    check_genus(g, z)?;
    let f = pws_decompose(&g.to_q())?;
    j_half_with(g, &f, z)
}

fn j_half_with(g: &IntegerSymplectic, f: &PwsFactorization, z: &SiegelPoint) -> Result<Complex64> {
    let gr = g.to_f64();
    let z0 = SiegelPoint::base(z.genus());
    let eps = epsilon_factor(&gr, z, &z0)?;
    let modulus = complex_det(&automorphy(&gr, &z.z())).norm().sqrt();
    let at_base = j_half_from(f, &z0)?;
    Ok(eps * modulus * (at_base / at_base.norm()))
}

/// `√det(cz+d) = J_{1/2}(g, z)·m_{X*}(g)⁻¹`.
pub fn sqrt_det(g: &IntegerSymplectic, z: &SiegelPoint) -> Result<Complex64> {
    check_genus(g, z)?;
    let f = pws_decompose(&g.to_q())?;
    Ok(j_half_with(g, &f, z)? * m_xstar_from(&f).inv().embed())
}

/// `J_{3/2}(g, z) = J_{1/2}(g, z)·(cz + d)`.
pub fn j_three_half(g: &IntegerSymplectic, z: &SiegelPoint) -> Result<CMat> {
    Ok(automorphy(&g.to_f64(), &z.z()) * j_half(g, z)?)
}

/// `β_{z₀}(g₁,g₂)⁻¹ = J_{1/2}(g₁g₂, z) / (J_{1/2}(g₁, g₂z)·J_{1/2}(g₂, z))`.
pub fn analytic_cocycle(g1: &IntegerSymplectic, g2: &IntegerSymplectic, z: &SiegelPoint) -> Result<Complex64> {
    let g2z = mobius_act(&g2.to_f64(), z)?;
    Ok(j_half(&g1.mul(g2), z)? / (j_half(g1, &g2z)? * j_half(g2, z)?))
}

/// Branch-free check value: `|sqrt_det² − det(cz+d)|` relative to `|det|`.
pub fn sqrt_det_residual(g: &IntegerSymplectic, z: &SiegelPoint) -> Result<f64> {
    let s = sqrt_det(g, z)?;
    let d = complex_det(&automorphy(&g.to_f64(), &z.z()));
    Ok((s * s - d).norm() / d.norm().max(1e-300))
}

/// The value `m_{X*}(g)` in `C`.
pub fn m_xstar_c(g: &IntegerSymplectic) -> Result<Complex64> {
    Ok(m_xstar_from(&pws_decompose(&g.to_q())?).embed())
}

/// The eighth root relating two analytic cocycles, if it is one.
pub fn as_mu8(z: Complex64, tol: f64) -> Option<Mu8> {
    let (r, res) = Mu8::snap(z);
    (res < tol).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{cbar_cocycle, rao_cocycle};
    use crate::symplectic::{omega, random_word_element, real_h, real_u, WordGroup};
    use std::f64::consts::PI;

    fn c1(re: f64, im: f64) -> CMat {
        CMat::from_element(1, 1, Complex64::new(re, im))
    }

    fn sp(rows: &[Vec<i64>]) -> IntegerSymplectic {
        IntegerSymplectic::from_i64(rows).unwrap()
    }

    fn point(x: &[f64], y: &[f64]) -> SiegelPoint {
        let m = (x.len() as f64).sqrt() as usize;
        SiegelPoint::new(RMat::from_row_slice(m, m, x), RMat::from_row_slice(m, m, y)).unwrap()
    }

    fn sample_points() -> Vec<SiegelPoint> {
        vec![
            point(&[0.3, 0.1, 0.1, -0.2], &[1.2, 0.3, 0.3, 0.9]),
            point(&[-1.1, 0.4, 0.4, 0.7], &[0.7, -0.2, -0.2, 1.5]),
            point(&[0.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 1.0]),
            point(&[2.5, -0.3, -0.3, 0.05], &[0.4, 0.1, 0.1, 0.3]),
        ]
    }

    #[test]
    fn det_invsqrt_values() {
        assert!((det_invsqrt(&CMat::identity(3, 3)).unwrap() - 1.0).norm() < 1e-14);
        let two = CMat::identity(3, 3) * Complex64::new(2.0, 0.0);
        assert!((det_invsqrt(&two).unwrap() - 2f64.powf(-1.5)).norm() < 1e-14);
        let v = det_invsqrt(&c1(1.0, -1.0)).unwrap();
        assert!((v - Complex64::from_polar(2f64.powf(-0.25), PI / 8.0)).norm() < 1e-14);
        assert!(matches!(det_invsqrt(&c1(-1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn det_invsqrt_matches_quadrature() {
        // ∫ e^{−π s x²} dx by the trapezoid rule on a wide interval
        for (re, im) in [(1.0, -1.0), (0.5, 3.0), (2.0, 0.7)] {
            let s = Complex64::new(re, im);
            let h = 1e-3;
            let quad: Complex64 = (-20_000..=20_000).map(|k| (-PI * s * (k as f64 * h).powi(2)).exp() * h).sum();
            assert!((quad - det_invsqrt(&c1(re, im)).unwrap()).norm() < 1e-9, "{s}");
        }
    }

    #[test]
    fn det_invsqrt_squares_to_inverse_det() {
        for z in sample_points() {
            let s = -z.z() * I;
            let v = det_invsqrt(&s).unwrap();
            assert!((v * v * complex_det(&s) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn gamma_pair_values() {
        for z in sample_points() {
            assert!((gamma_pair(&z, &z).unwrap() - 1.0).norm() < 1e-12);
        }
        let a = point(&[0.0], &[4.0]);
        let b = point(&[0.0], &[1.0]);
        assert!((gamma_pair(&a, &b).unwrap() - 2.0 / 5f64.sqrt()).norm() < 1e-12);
        let pts = sample_points();
        for p in &pts {
            for q in &pts {
                assert!((gamma_pair(p, q).unwrap().norm() - gamma_pair(q, p).unwrap().norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn epsilon_is_unimodular_and_chains() {
        let pts = sample_points();
        for seed in 0..20 {
            let g1 = random_word_element(2, WordGroup::Sp, 5, seed).0.to_f64();
            let g2 = random_word_element(2, WordGroup::Sp, 5, seed + 99).0.to_f64();
            let (z, w) = (&pts[seed as usize % 4], &pts[(seed as usize + 1) % 4]);
            let e = epsilon_factor(&g1, z, w).unwrap();
            assert!((e.norm() - 1.0).abs() < 1e-9);
            assert!((epsilon_factor(&g1, z, z).unwrap() - 1.0).norm() < 1e-12);
            let lhs = epsilon_factor(&(&g1 * &g2), z, w).unwrap();
            let rhs = epsilon_factor(&g1, &mobius_act(&g2, z).unwrap(), &mobius_act(&g2, w).unwrap()).unwrap()
                * epsilon_factor(&g2, z, w).unwrap();
            assert!((lhs - rhs).norm() < 1e-9);
        }
        let id = RMat::identity(4, 4);
        assert!((epsilon_factor(&id, &pts[0], &pts[1]).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn j_half_forms_agree() {
        for seed in 0..40 {
            let (g, _) = random_word_element(2, WordGroup::Sp, 6, seed);
            for z in sample_points() {
                let a = j_half(&g, &z).unwrap();
                let b = j_half_rao(&g, &z).unwrap();
                assert!((a - b).norm() < 1e-9 * a.norm().max(1.0), "seed {seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn j_half_anchors() {
        let z0 = SiegelPoint::base(2);
        // unitary stabilizer of z₀: ω and h of an orthogonal matrix
        let k = omega(2).mul(&sp(&[vec![0, 1, 0, 0], vec![-1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, -1, 0]]));
        assert!((j_half(&k, &z0).unwrap() - 1.0).norm() < 1e-12);
        let p = sp(&[vec![2, 1, 3, 2], vec![1, 1, 2, 1], vec![0, 0, 1, -1], vec![0, 0, -1, 2]]);
        assert!((j_half(&p, &z0).unwrap() - 1.0).norm() < 1e-12);
        let z = point(&[0.0], &[1.0]);
        let v = sqrt_det(&omega(1), &z).unwrap();
        assert!((v - Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-12);
        // real parabolic with a = diag(2, 1/2)·(…) positive
        let a = RMat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let pr = real_h(&a).unwrap() * real_u(&RMat::from_row_slice(2, 2, &[1.0, 0.5, 0.5, -2.0]));
        let e = epsilon_factor(&pr, &z0, &z0).unwrap();
        assert!((e - 1.0).norm() < 1e-12);
        let modulus = complex_det(&automorphy(&pr, &z0.z())).norm().sqrt();
        assert!((modulus - 6f64.powf(-0.5)).abs() < 1e-12);
    }

    #[test]
    fn sqrt_det_squares_and_is_multiplicative() {
        for seed in 0..40 {
            let (g1, _) = random_word_element(2, WordGroup::Sp, 6, seed);
            let (g2, _) = random_word_element(2, WordGroup::Sp, 6, seed + 400);
            for z in sample_points() {
                assert!(sqrt_det_residual(&g1, &z).unwrap() < 1e-9);
                let lhs = sqrt_det(&g1.mul(&g2), &z).unwrap();
                let g2z = mobius_act(&g2.to_f64(), &z).unwrap();
                let rhs = sqrt_det(&g1, &g2z).unwrap() * sqrt_det(&g2, &z).unwrap() * cbar_cocycle(&g1, &g2).unwrap() as f64;
                assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0), "seed {seed}");
            }
        }
    }

    #[test]
    fn analytic_cocycle_is_rao() {
        for seed in 0..60 {
            let (g1, _) = random_word_element(2, WordGroup::Sp, 6, seed);
            let (g2, _) = random_word_element(2, WordGroup::Sp, 6, seed + 4000);
            let z = &sample_points()[seed as usize % 4];
            let v = analytic_cocycle(&g1, &g2, z).unwrap();
            assert!((v - rao_cocycle(&g1, &g2).embed()).norm() < 1e-9, "seed {seed}: {v}");
        }
    }
}
