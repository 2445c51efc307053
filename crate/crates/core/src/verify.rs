//! The induced representation `γ̄` on the double cover and end-to-end checks
//! of the scalar and vector theta transformation laws.

use crate::analytic::sqrt_det;
use crate::cocycle::{m_xstar, CoverElement};
use crate::error::{Error, Result};
use crate::f2::{CosetRecord, CosetTable};
use crate::gauss::{lambda_bar, lambda_multiplier};
use crate::mu8::Mu8;
use crate::symplectic::{
    alphabet, automorphy, in_theta_group, mobius_act, random_word_with, real_h, real_u, CMat, IntegerSymplectic, RMat, SiegelPoint,
    WordGroup,
};
use crate::theta::{big_theta, theta_series, ThetaParams, Weight};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;

// ---------------------------------------------------------------------------
// monomial matrices

/// Matrix with exactly one nonzero entry per row and column, all in `μ₈`.
/// Row `i` holds `coeffs[i]` in column `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialMatrix {
    pub n: usize,
    pub perm: Vec<usize>,
    pub coeffs: Vec<Mu8>,
}

impl MonomialMatrix {
    pub fn new(perm: Vec<usize>, coeffs: Vec<Mu8>) -> Result<Self> {
        let n = perm.len();
        if coeffs.len() != n {
            return Err(Error::Shape("one coefficient per row is required".into()));
        }
        let mut seen = vec![false; n];
        for &j in &perm {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(Error::Domain("column map is not a permutation".into()));
            }
        }
        Ok(MonomialMatrix { n, perm, coeffs })
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Mu8::ONE)
    }

    pub fn scalar(n: usize, c: Mu8) -> Self {
        MonomialMatrix { n, perm: (0..n).collect(), coeffs: vec![c; n] }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::Shape("dimension mismatch".into()));
        }
        let perm = self.perm.iter().map(|&j| o.perm[j]).collect();
        let coeffs = self.perm.iter().zip(&self.coeffs).map(|(&j, &c)| c * o.coeffs[j]).collect();
        Ok(MonomialMatrix { n: self.n, perm, coeffs })
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0; self.n];
        let mut coeffs = vec![Mu8::ONE; self.n];
        for (i, (&j, &c)) in self.perm.iter().zip(&self.coeffs).enumerate() {
            perm[j] = i;
            coeffs[j] = c.inv();
        }
        MonomialMatrix { n: self.n, perm, coeffs }
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<Mu8> {
        (self.perm[i] == j).then_some(self.coeffs[i])
    }

    pub fn dense(&self) -> CMat {
        let mut out = CMat::zeros(self.n, self.n);
        for (i, (&j, c)) in self.perm.iter().zip(&self.coeffs).enumerate() {
            out[(i, j)] = c.embed();
        }
        out
    }

    /// Row-vector product `v·M` where each entry of `v` is itself a vector
    /// (length 1 for weight ½, `m` for weight 3/2).
    pub fn apply_row(&self, v: &[Vec<Complex64>]) -> Result<Vec<Vec<Complex64>>> {
        if v.len() != self.n {
            return Err(Error::Shape("vector length differs from the dimension".into()));
        }
        let mut out = vec![Vec::new(); self.n];
        for (i, (&j, c)) in self.perm.iter().zip(&self.coeffs).enumerate() {
            let w = c.embed();
            out[j] = v[i].iter().map(|x| x * w).collect();
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// induced representation

/// Cover lift `(M_q, δ_q)` of a coset representative, with `δ_q` chosen so
/// that the component prefactor `m_{X*}(q)⁻¹·t_{M_q}` is `+1`.
pub fn plus_lift(rec: &CosetRecord) -> Result<CoverElement> {
    let delta =
        (m_xstar(&rec.m) * rec.m_xstar_q.inv()).as_sign().ok_or_else(|| Error::Internal(format!("lift sign for {} is not real", rec.q)))?;
    Ok(CoverElement::new(rec.m.clone(), delta))
}

/// `γ̄ = Ind λ̄⁻¹` in the basis of plus-lifted coset representatives.
#[derive(Clone, Debug)]
pub struct InducedRep {
    pub table: CosetTable,
    lifts: Vec<CoverElement>,
    lift_inverses: Vec<CoverElement>,
}

impl InducedRep {
    pub fn new(m: usize) -> Result<Self> {
        let table = CosetTable::new(m)?;
        let lifts: Vec<CoverElement> = table.records.iter().map(plus_lift).collect::<Result<_>>()?;
        let lift_inverses = lifts.iter().map(CoverElement::inverse).collect::<Result<_>>()?;
        Ok(InducedRep { table, lifts, lift_inverses })
    }

    pub fn genus(&self) -> usize {
        self.table.genus
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    pub fn lift(&self, i: usize) -> &CoverElement {
        &self.lifts[i]
    }

    /// Row `i`: `M̄ᵢ·r̄ = h̄·M̄ⱼ` with `h̄` over the theta group; entry `(i, j)` is `λ̄(h̄)⁻¹`.
    pub fn matrix(&self, r: &CoverElement) -> Result<MonomialMatrix> {
        if r.g.genus() != self.genus() {
            return Err(Error::Shape("genus mismatch".into()));
        }
        let mut perm = Vec::with_capacity(self.dim());
        let mut coeffs = Vec::with_capacity(self.dim());
        for lift in &self.lifts {
            let moved = lift.mul(r)?;
            let (j, s) = self.table.split(&moved.g)?;
            let h = moved.mul(&self.lift_inverses[j])?;
            if h.g != s || !in_theta_group(&h.g) {
                return Err(Error::Internal("coset bookkeeping left the theta group".into()));
            }
            perm.push(j);
            coeffs.push(lambda_bar(&h)?.inv());
        }
        MonomialMatrix::new(perm, coeffs)
    }
}

/// `γ̄(r̄)` for a single element; builds the coset table each call.
pub fn induced_rep_matrix(r: &CoverElement) -> Result<MonomialMatrix> {
    InducedRep::new(r.g.genus())?.matrix(r)
}

// ---------------------------------------------------------------------------
// random inputs

/// Knobs shared by both law verifiers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub m: usize,
    pub trials: usize,
    pub tol: f64,
    pub seed: u64,
    pub theta: ThetaParams,
    pub max_word_len: usize,
    pub cond_cap: f64,
    /// Resampling budget per trial when a radius or class-count cap is hit.
    pub attempts: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { m: 2, trials: 200, tol: 1e-8, seed: 0, theta: ThetaParams::default(), max_word_len: 8, cond_cap: 1e4, attempts: 64 }
    }
}

/// Independent stream for each trial, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// `z = u(X)·h(A)(i·1ₘ) = X + iAAᵀ` with `X` symmetric in `[−1, 1]` and
/// `A` a perturbed scaled identity; resampled until `cond(Y) ≤ cond_cap`.
pub fn random_point<R: Rng>(rng: &mut R, m: usize, cond_cap: f64) -> Result<SiegelPoint> {
    for _ in 0..256 {
        let scale: f64 = rng.random_range(0.7..1.4);
        let a = RMat::from_fn(m, m, |i, j| if i == j { scale } else { 0.0 } + rng.random_range(-0.4..0.4));
        let mut x = RMat::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v = rng.random_range(-1.0..1.0);
                x[(i, j)] = v;
                x[(j, i)] = v;
            }
        }
        let Some(h) = real_h(&a) else { continue };
        let z = mobius_act(&(real_u(&x) * h), &SiegelPoint::base(m))?;
        if z.cond_y() <= cond_cap && z.min_eig_y() > 0.05 {
            return Ok(z);
        }
    }
    Err(Error::Conditioning("no well-conditioned point found".into()))
}

// ---------------------------------------------------------------------------
// reports

/// Trial with the largest relative error.
#[derive(Clone, Debug, Serialize)]
pub struct WorstCase {
    pub trial: usize,
    pub weight: Weight,
    pub element: Vec<Vec<i64>>,
    pub cover_sign: i8,
    pub word: Vec<String>,
    pub z_re: Vec<Vec<f64>>,
    pub z_im: Vec<Vec<f64>>,
    pub abs_error: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightSummary {
    pub weight: Weight,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    /// Largest `max(|lhs|, |rhs|)` relative to the absolute series size.
    pub max_relative_size: f64,
    /// Both sides vanish to rounding in every trial.
    pub degenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub theorem: String,
    pub genus: usize,
    pub trials: usize,
    pub tolerance: f64,
    pub tail_tol: f64,
    pub seed: u64,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
    pub worst_case: Option<WorstCase>,
    pub per_weight: Vec<WeightSummary>,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub pass: bool,
}

/// Below this ratio of `max(|lhs|, |rhs|)` to the series size a side counts as zero.
const VANISHING: f64 = 1e-10;

struct Sample {
    r: IntegerSymplectic,
    eps: i8,
    word: Vec<String>,
    z: SiegelPoint,
}

struct Comparison {
    weight: Weight,
    abs: f64,
    rel: f64,
    size: f64,
}

/// `|lhs − rhs|` and its ratio to `max(|lhs|, |rhs|)`; when both sides
/// cancel down to rounding the series size `magnitude` is the scale instead.
fn compare(weight: Weight, lhs: &[Complex64], rhs: &[Complex64], magnitude: f64) -> Comparison {
    let norm = |v: &[Complex64]| v.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    let diff: Vec<Complex64> = lhs.iter().zip(rhs).map(|(a, b)| a - b).collect();
    let abs = norm(&diff);
    let top = norm(lhs).max(norm(rhs));
    let size = if magnitude > 0.0 { top / magnitude } else { 1.0 };
    let scale = if size < VANISHING { magnitude } else { top };
    let rel = if scale > 0.0 { abs / scale } else { 0.0 };
    Comparison { weight, abs, rel, size }
}

/// Both sides of a law at one point for one weight, components flattened,
/// with the absolute series size used as the scale for vanishing sides.
#[derive(Clone, Debug)]
pub struct LawSides {
    pub weight: Weight,
    pub lhs: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
    pub magnitude: f64,
}

impl LawSides {
    fn compare(&self) -> Comparison {
        compare(self.weight, &self.lhs, &self.rhs, self.magnitude)
    }
}

fn rows_i64(g: &IntegerSymplectic) -> Vec<Vec<i64>> {
    g.matrix().to_i64_rows().unwrap_or_default()
}

fn rows_f64(x: &RMat) -> Vec<Vec<f64>> {
    (0..x.nrows()).map(|i| (0..x.ncols()).map(|j| x[(i, j)]).collect()).collect()
}

fn is_resamplable(e: &Error) -> bool {
    matches!(e, Error::Capacity(_) | Error::Conditioning(_))
}

type TrialResult = std::result::Result<(Sample, Vec<Comparison>), String>;

fn run_trials<F>(cfg: &VerifyConfig, draw: F) -> Vec<TrialResult>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(Sample, Vec<Comparison>)> + Sync,
{
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let mut last = String::new();
            for _ in 0..cfg.attempts.max(1) {
                match draw(&mut rng) {
                    Ok(v) => return Ok(v),
                    Err(e) if is_resamplable(&e) => last = e.to_string(),
                    Err(e) => return Err(format!("trial {t}: {e}")),
                }
            }
            Err(format!("trial {t}: resampling budget exhausted ({last})"))
        })
        .collect()
}

fn summarize(theorem: &str, cfg: &VerifyConfig, results: Vec<TrialResult>, mut notes: Vec<String>) -> VerificationReport {
    let mut failures = Vec::new();
    let mut worst: Option<WorstCase> = None;
    let mut per_weight: Vec<WeightSummary> = [Weight::Half, Weight::ThreeHalf]
        .into_iter()
        .map(|weight| WeightSummary { weight, max_abs_error: 0.0, max_rel_error: 0.0, max_relative_size: 0.0, degenerate: true })
        .collect();
    for (t, res) in results.into_iter().enumerate() {
        let (sample, comps) = match res {
            Ok(v) => v,
            Err(msg) => {
                failures.push(msg);
                continue;
            }
        };
        for c in comps {
            let w = &mut per_weight[(c.weight == Weight::ThreeHalf) as usize];
            w.max_abs_error = w.max_abs_error.max(c.abs);
            w.max_rel_error = w.max_rel_error.max(c.rel);
            w.max_relative_size = w.max_relative_size.max(c.size);
            w.degenerate &= c.size < VANISHING;
            if worst.as_ref().is_none_or(|x| c.rel > x.rel_error) {
                worst = Some(WorstCase {
                    trial: t,
                    weight: c.weight,
                    element: rows_i64(&sample.r),
                    cover_sign: sample.eps,
                    word: sample.word.clone(),
                    z_re: rows_f64(&sample.z.x),
                    z_im: rows_f64(&sample.z.y),
                    abs_error: c.abs,
                    rel_error: c.rel,
                });
            }
        }
    }
    for w in &per_weight {
        if w.degenerate {
            notes.push(format!(
                "weight {}: both sides vanish identically (odd summand under n ↦ −n−ε); errors are measured against the absolute series size",
                w.weight
            ));
        }
    }
    let mut max_abs_error = per_weight.iter().map(|w| w.max_abs_error).fold(0.0, f64::max);
    let mut max_rel_error = per_weight.iter().map(|w| w.max_rel_error).fold(0.0, f64::max);
    if !failures.is_empty() {
        max_abs_error = f64::INFINITY;
        max_rel_error = f64::INFINITY;
    }
    VerificationReport {
        schema: REPORT_SCHEMA,
        theorem: theorem.into(),
        genus: cfg.m,
        trials: cfg.trials,
        tolerance: cfg.tol,
        tail_tol: cfg.theta.tail_tol,
        seed: cfg.seed,
        max_abs_error,
        max_rel_error,
        worst_case: worst,
        per_weight,
        pass: max_rel_error < cfg.tol,
        failures,
        notes,
    }
}

fn word_len<R: Rng>(rng: &mut R, cfg: &VerifyConfig) -> usize {
    rng.random_range(1..=cfg.max_word_len.max(1))
}

fn image_point(r: &IntegerSymplectic, z: &SiegelPoint, cfg: &VerifyConfig) -> Result<SiegelPoint> {
    let rz = mobius_act(&r.to_f64(), z)?;
    if rz.cond_y() > cfg.cond_cap * cfg.cond_cap {
        return Err(Error::Conditioning("Im r(z) is too flat".into()));
    }
    Ok(rz)
}

fn scaled(v: &[Complex64], c: Complex64) -> Vec<Complex64> {
    v.iter().map(|x| x * c).collect()
}

fn times_j(j: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    (0..j.nrows()).map(|i| (0..j.ncols()).map(|k| j[(i, k)] * v[k]).sum()).collect()
}

// ---------------------------------------------------------------------------
// scalar law

/// `θ_{1/2}(rz) = λ(r)·√det(cz+d)·θ_{1/2}(z)` and
/// `θ_{3/2}(rz) = λ(r)·√det(cz+d)·(cz+d)·θ_{3/2}(z)` for `r` in the theta group.
pub fn scalar_law_at(r: &IntegerSymplectic, z: &SiegelPoint, params: &ThetaParams) -> Result<[LawSides; 2]> {
    scalar_law_at_image(r, z, &mobius_act(&r.to_f64(), z)?, params)
}

fn scalar_law_at_image(r: &IntegerSymplectic, z: &SiegelPoint, rz: &SiegelPoint, params: &ThetaParams) -> Result<[LawSides; 2]> {
    let factor = lambda_multiplier(r)?.embed() * sqrt_det(r, z)?;
    let j = automorphy(&r.to_f64(), &z.z());
    let half = {
        let lhs = theta_series(rz, Weight::Half, params)?;
        let rhs = theta_series(z, Weight::Half, params)?;
        let mag = lhs.magnitude.max(factor.norm() * rhs.magnitude);
        LawSides { weight: Weight::Half, lhs: lhs.value, rhs: scaled(&rhs.value, factor), magnitude: mag }
    };
    let three = {
        let lhs = theta_series(rz, Weight::ThreeHalf, params)?;
        let rhs = theta_series(z, Weight::ThreeHalf, params)?;
        let mag = lhs.magnitude.max(factor.norm() * j.norm() * rhs.magnitude);
        LawSides { weight: Weight::ThreeHalf, lhs: lhs.value, rhs: scaled(&times_j(&j, &rhs.value), factor), magnitude: mag }
    };
    Ok([half, three])
}

pub fn verify_scalar_law(m: usize, trials: usize, tol: f64, seed: u64) -> Result<VerificationReport> {
    verify_scalar_law_with(&VerifyConfig { m, trials, tol, seed, ..Default::default() })
}

pub fn verify_scalar_law_with(cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(1..=3).contains(&cfg.m) {
        return Err(Error::Parameter("the scalar law is checked for m ∈ {1, 2, 3}".into()));
    }
    let letters = alphabet(cfg.m, WordGroup::Gamma12);
    let results = run_trials(cfg, |rng| {
        let len = word_len(rng, cfg);
        let (r, word) = random_word_with(rng, &letters, cfg.m, len);
        let z = random_point(rng, cfg.m, cfg.cond_cap)?;
        let rz = image_point(&r, &z, cfg)?;
        let comps = scalar_law_at_image(&r, &z, &rz, &cfg.theta)?.iter().map(LawSides::compare).collect();
        Ok((Sample { r, eps: 1, word, z }, comps))
    });
    Ok(summarize("main1", cfg, results, vec!["r drawn from words of length ≤ max_word_len over theta-group generators".into()]))
}

// ---------------------------------------------------------------------------
// vector law

/// Both sides of `Θ(r̄z) = ε·√det(cz+d)·[cz+d]·Θ(z)·γ̄(r̄⁻¹)` for each weight,
/// flattened component by component, with the series size.
pub fn vector_law_at(rep: &InducedRep, r: &CoverElement, z: &SiegelPoint, params: &ThetaParams) -> Result<Vec<LawSides>> {
    vector_law_at_image(rep, r, z, &mobius_act(&r.g.to_f64(), z)?, params)
}

fn vector_law_at_image(
    rep: &InducedRep,
    r: &CoverElement,
    z: &SiegelPoint,
    rz: &SiegelPoint,
    params: &ThetaParams,
) -> Result<Vec<LawSides>> {
    let gamma = rep.matrix(&r.inverse()?)?;
    let factor = Mu8::from_sign(r.eps).embed() * sqrt_det(&r.g, z)?;
    let j = automorphy(&r.g.to_f64(), &z.z());
    let mut out = Vec::with_capacity(2);
    for weight in [Weight::Half, Weight::ThreeHalf] {
        let at_rz = big_theta(&rep.table, rz, weight, params)?;
        let at_z = big_theta(&rep.table, z, weight, params)?;
        let moved = gamma.apply_row(&at_z.iter().map(|c| c.value.clone()).collect::<Vec<_>>())?;
        let jn = match weight {
            Weight::Half => 1.0,
            Weight::ThreeHalf => j.norm(),
        };
        let mag = at_rz.iter().map(|c| c.magnitude).sum::<f64>().max(factor.norm() * jn * at_z.iter().map(|c| c.magnitude).sum::<f64>());
        let lhs: Vec<Complex64> = at_rz.iter().flat_map(|c| c.value.clone()).collect();
        let rhs: Vec<Complex64> = moved
            .iter()
            .flat_map(|v| match weight {
                Weight::Half => scaled(v, factor),
                Weight::ThreeHalf => scaled(&times_j(&j, v), factor),
            })
            .collect();
        out.push(LawSides { weight, lhs, rhs, magnitude: mag });
    }
    Ok(out)
}

pub fn verify_vector_law(m: usize, trials: usize, tol: f64, seed: u64) -> Result<VerificationReport> {
    verify_vector_law_with(&VerifyConfig { m, trials, tol, seed, ..Default::default() })
}

pub fn verify_vector_law_with(cfg: &VerifyConfig) -> Result<VerificationReport> {
    if !(1..=2).contains(&cfg.m) {
        return Err(Error::Parameter("the vector law is checked for m ∈ {1, 2}".into()));
    }
    let rep = InducedRep::new(cfg.m)?;
    let mut letters = alphabet(cfg.m, WordGroup::Gamma12);
    for rec in rep.table.records.iter().filter(|r| !r.m.is_identity()) {
        letters.push((format!("M[{}]", rec.q), rec.m.clone()));
        letters.push((format!("M[{}]⁻¹", rec.q), rec.m.inverse()));
    }
    let results = run_trials(cfg, |rng| {
        let len = word_len(rng, cfg);
        let (r, word) = random_word_with(rng, &letters, cfg.m, len);
        let eps = if rng.random_bool(0.5) { 1 } else { -1 };
        let z = random_point(rng, cfg.m, cfg.cond_cap)?;
        let rz = image_point(&r, &z, cfg)?;
        let rbar = CoverElement::new(r.clone(), eps);
        let comps = vector_law_at_image(&rep, &rbar, &z, &rz, &cfg.theta)?.iter().map(LawSides::compare).collect();
        Ok((Sample { r, eps, word, z }, comps))
    });
    let notes = vec![
        format!("{} components, representatives lifted with the plus sign convention", rep.dim()),
        "r drawn from words mixing theta-group generators and coset representatives".into(),
    ];
    Ok(summarize("main112", cfg, results, notes))
}

// ---------------------------------------------------------------------------
// self test

/// One named exact check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfTestReport {
    pub schema: u32,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn check(name: &str, got: impl std::fmt::Debug, want: impl std::fmt::Debug, ok: bool) -> Check {
    Check { name: name.into(), pass: ok, detail: format!("got {got:?}, expected {want:?}") }
}

fn sp(rows: &[Vec<i64>]) -> Result<IntegerSymplectic> {
    IntegerSymplectic::from_i64(rows)
}

/// The two displayed factorizations of the genus-two coset calculation:
/// `u = u⁰·u¹·u²` and `u² = p₁·ω_S·n₂·m₂`.
pub fn genus_two_factorizations() -> Result<[(IntegerSymplectic, Vec<IntegerSymplectic>); 2]> {
    let u = sp(&[vec![2, 1, 1, 1], vec![1, 2, 1, 1], vec![-1, -1, 0, -1], vec![-1, -1, -1, 0]])?;
    let u0 = sp(&[vec![0, -1, 1, 0], vec![-1, 0, 0, 1], vec![0, 0, 0, -1], vec![0, 0, -1, 0]])?;
    let u1 = IntegerSymplectic::new(crate::f2::u1111_first())?;
    let u2 = IntegerSymplectic::new(crate::f2::u1111_second())?;
    let p1 = sp(&[vec![1, -1, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 1, 1]])?;
    let ws = sp(&[vec![0, 0, -1, 0], vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1]])?;
    let n2 = sp(&[vec![1, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]])?;
    let m2 = sp(&[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, -1, 1]])?;
    Ok([(u, vec![u0, u1, u2.clone()]), (u2, vec![p1, ws, n2, m2])])
}

/// Exact constants anchored in the source material, each checked once.
pub fn selftest() -> Result<SelfTestReport> {
    use crate::cocycle::rao_cocycle;
    use crate::f2::{coset_count, enumerate_isotropic};
    use crate::gauss::{beta_tilde, iota, modified_cocycle};
    use crate::symplectic::{omega, omega_s};

    let mut checks = Vec::new();
    for (m, want) in [(1usize, 3usize), (2, 10), (3, 36), (4, 136)] {
        let n = enumerate_isotropic(m)?.len();
        checks.push(check(&format!("isotropic count m={m}"), n, want, n == want));
        let c = coset_count(m as u32) as usize;
        checks.push(check(&format!("coset count m={m}"), c, n, c == n));
    }
    for (k, (lhs, factors)) in genus_two_factorizations()?.iter().enumerate() {
        let prod = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.mul(f));
        checks.push(check(&format!("factorization {}", k + 1), prod.is_identity(), false, &prod == lhs));
    }
    let [(_, f1), _] = genus_two_factorizations()?;
    let u12 = f1[1].mul(&f1[2]);
    let w = omega(2);
    let vals = [rao_cocycle(&u12, &w).inv(), m_xstar(&f1[2]), m_xstar(&u12)];
    checks.push(check("c̃(u¹u², ω)⁻¹ = m(u²) = m(u¹u²) = e^{−iπ/4}", vals, Mu8::new(-1), vals.iter().all(|&v| v == Mu8::new(-1))));
    let ulow4 = iota(1, 0, [[1, 0], [-4, 1]])?;
    let b = beta_tilde(&ulow4)?.value;
    checks.push(check("β̃(u⁻(4)) = e^{iπ/4}", b, Mu8::new(1), b == Mu8::new(1)));
    let g = sp(&[vec![-3, 4], vec![-4, 5]])?;
    let b = beta_tilde(&g)?.value;
    checks.push(check("β̃((−3 4; −4 5)) = −e^{iπ/4}", b, Mu8::new(5), b == Mu8::new(5)));
    for s in [vec![0], vec![1], vec![0, 1]] {
        let b = beta_tilde(&omega_s(2, &s))?.value;
        checks.push(check(&format!("β̃(ω_S) = 1, S = {s:?}"), b, Mu8::ONE, b == Mu8::ONE));
    }
    let fixed = lambda_multiplier(&omega(1))?.embed() * sqrt_det(&omega(1), &SiegelPoint::base(1))?;
    checks.push(check("λ(ω)·√det(ω, i) = 1", fixed, 1.0, (fixed - Complex64::new(1.0, 0.0)).norm() < 1e-12));
    let table = CosetTable::new(2)?;
    let wit = modified_cocycle(&table, &iota(2, 0, [[1, 1], [0, 1]])?, &iota(2, 0, [[1, 0], [-4, 1]])?)?;
    checks.push(check("c̃′(ι(u(1)), ι(u⁻(4))) = −1", wit, Mu8::MINUS_ONE, wit == Mu8::MINUS_ONE));
    let rep = InducedRep::new(2)?;
    let minus = rep.matrix(&CoverElement::new(IntegerSymplectic::identity(2), -1))?;
    let central = minus == MonomialMatrix::scalar(rep.dim(), Mu8::MINUS_ONE);
    checks.push(check("γ̄(1, −1) = −I", central, true, central));
    let pass = checks.iter().all(|c| c.pass);
    Ok(SelfTestReport { schema: REPORT_SCHEMA, checks, pass })
}
