//! Truncated Siegel theta series, their half-shifted sign-twisted variants,
//! and the vector `Θ` indexed by the cosets of the theta group.

use crate::error::{Error, Result};
use crate::f2::{CosetRecord, CosetTable, F2Vector};
use crate::mu8::Mu8;
use crate::symplectic::{CVec, SiegelPoint};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaParams {
    pub tail_tol: f64,
    pub max_radius: usize,
}

impl Default for ThetaParams {
    fn default() -> Self {
        ThetaParams { tail_tol: 1e-12, max_radius: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weight {
    #[serde(rename = "1/2")]
    Half,
    #[serde(rename = "3/2")]
    ThreeHalf,
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Weight::Half => "1/2",
            Weight::ThreeHalf => "3/2",
        })
    }
}

impl std::str::FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1/2" | "half" => Ok(Weight::Half),
            "3/2" | "three_half" => Ok(Weight::ThreeHalf),
            _ => Err(Error::Parse(format!("unknown weight {s:?}; use 1/2 or 3/2"))),
        }
    }
}

/// Summation data for one component: the sign twist `m_q` and the shift `ε_q/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist {
    pub signs: Vec<i64>,
    pub shift: Vec<i64>,
}

impl Twist {
    pub fn plain(m: usize) -> Self {
        Twist { signs: vec![0; m], shift: vec![0; m] }
    }

    fn is_shifted(&self) -> bool {
        self.shift.iter().any(|&e| e != 0)
    }
}

/// A truncated series value with its certified tail bound and radius.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesValue {
    /// One entry for weight ½, `m` entries for weight 3/2.
    #[serde(serialize_with = "ser_cvec")]
    pub value: Vec<Complex64>,
    pub tail_bound: f64,
    pub radius: usize,
    /// `Σ |summand|` over the truncation box; the scale against which
    /// cancellation in `value` is judged.
    pub magnitude: f64,
}

pub(crate) fn ser_cvec<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// `Σ_{‖n‖∞ > R} |n+s|^w e^{−πλ|n+s|²}` bounded shell by shell.
fn tail_bound(m: usize, lambda: f64, radius: usize, shifted: bool, weight: Weight) -> f64 {
    let mut total = 0.0;
    let mut k = radius + 1;
    loop {
        let kf = k as f64;
        let shell = (2.0 * kf + 1.0).powi(m as i32) - (2.0 * kf - 1.0).powi(m as i32);
        let low = if shifted { kf - 0.5 } else { kf };
        let moment = match weight {
            Weight::Half => 1.0,
            Weight::ThreeHalf => (m as f64).sqrt() * (kf + 0.5),
        };
        let term = shell * moment * (-PI * lambda * low * low).exp();
        total += term;
        // terms decay faster than geometrically with ratio < 1/2 here
        if term < 1e-300 || (k > radius + 2 && term < 1e-3 * total) {
            return total * 2.0;
        }
        k += 1;
    }
}

/// Radius from `⌈√(ln(1/tol)/(πλ_min))⌉ + 2`, enlarged until the tail bound holds.
pub fn choose_radius(z: &SiegelPoint, shifted: bool, weight: Weight, params: &ThetaParams) -> Result<(usize, f64)> {
    if !(params.tail_tol > 0.0) {
        return Err(Error::Parameter("tail_tol must be positive".into()));
    }
    let m = z.genus();
    let lambda = z.min_eig_y();
    if !(lambda > 0.0) {
        return Err(Error::Domain("Im z is not positive definite".into()));
    }
    let mut r = ((1.0 / params.tail_tol).ln().max(0.0) / (PI * lambda)).sqrt().ceil() as usize + 2;
    loop {
        let bound = tail_bound(m, lambda, r, shifted, weight);
        if bound < params.tail_tol {
            if r > params.max_radius {
                return Err(Error::Capacity(format!("radius {r} needed, cap is {}", params.max_radius)));
            }
            return Ok((r, bound));
        }
        r += 1;
        if r > params.max_radius.max(1) * 4 + 64 {
            return Err(Error::Capacity(format!("radius above {r} needed, cap is {}", params.max_radius)));
        }
    }
}

/// `Σ_n (−1)^{m_q·n} [ (n + ε/2)ᵀ ] e^{iπ(n+ε/2)z(n+ε/2)ᵀ}` over `‖n‖∞ ≤ R`,
/// accumulated shell by shell from the outside in.
pub fn twisted_series(z: &SiegelPoint, twist: &Twist, weight: Weight, params: &ThetaParams) -> Result<SeriesValue> {
    let m = z.genus();
    if twist.signs.len() != m || twist.shift.len() != m {
        return Err(Error::Shape("twist length differs from the genus".into()));
    }
    let (radius, tail) = choose_radius(z, twist.is_shifted(), weight, params)?;
    let zz = z.z();
    let width = match weight {
        Weight::Half => 1,
        Weight::ThreeHalf => m,
    };
    let r = radius as i64;
    let mut total = vec![Complex64::new(0.0, 0.0); width];
    let mut magnitude = 0.0;
    let mut v = vec![0.0f64; m];
    for k in (0..=r).rev() {
        let mut shell = vec![Complex64::new(0.0, 0.0); width];
        let mut n = vec![-k; m];
        loop {
            if n.iter().any(|x| x.abs() == k) {
                for i in 0..m {
                    v[i] = n[i] as f64 + 0.5 * twist.shift[i] as f64;
                }
                let mut q = Complex64::new(0.0, 0.0);
                for i in 0..m {
                    for j in 0..m {
                        q += zz[(i, j)] * (v[i] * v[j]);
                    }
                }
                let parity: i64 = (0..m).map(|i| twist.signs[i] * n[i]).sum();
                let mut t = (Complex64::new(0.0, PI) * q).exp();
                if parity.rem_euclid(2) == 1 {
                    t = -t;
                }
                match weight {
                    Weight::Half => {
                        shell[0] += t;
                        magnitude += t.norm();
                    }
                    Weight::ThreeHalf => {
                        for i in 0..m {
                            shell[i] += t * v[i];
                        }
                        magnitude += t.norm() * v.iter().map(|x| x * x).sum::<f64>().sqrt();
                    }
                }
            }
            // odometer over [−k, k]^m
            let mut i = 0;
            loop {
                if i == m {
                    break;
                }
                n[i] += 1;
                if n[i] <= k {
                    break;
                }
                n[i] = -k;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        for (a, b) in total.iter_mut().zip(&shell) {
            *a += b;
        }
    }
    Ok(SeriesValue { value: total, tail_bound: tail, radius, magnitude })
}

/// `θ_{1/2}(z) = Σ e^{iπnznᵀ}` or `θ_{3/2}(z) = Σ nᵀe^{iπnznᵀ}`.
pub fn theta_series(z: &SiegelPoint, weight: Weight, params: &ThetaParams) -> Result<SeriesValue> {
    twisted_series(z, &Twist::plain(z.genus()), weight, params)
}

/// One component of `Θ`, carrying its unimodular prefactor.
#[derive(Clone, Debug, Serialize)]
pub struct ThetaComponentValue {
    pub q: F2Vector,
    /// `m_{X*}(q)⁻¹·t_{M_q}`.
    pub prefactor: Mu8,
    #[serde(serialize_with = "ser_cvec")]
    pub value: Vec<Complex64>,
    pub tail_bound: f64,
    pub magnitude: f64,
}

pub fn twist_of(rec: &CosetRecord) -> Twist {
    Twist { signs: rec.m_q.clone(), shift: rec.eps_q.clone() }
}

/// `m_{X*}(q)⁻¹·t_{M_q}·Σ (−1)^{m_q·n} e^{iπ(n+ε_q/2)z(n+ε_q/2)ᵀ}` (and the
/// weight-3/2 analogue), where `t_{M_q} = ±∏ m_{X*}(factor)`.
pub fn theta_component(
    rec: &CosetRecord,
    lift_sign: i8,
    z: &SiegelPoint,
    weight: Weight,
    params: &ThetaParams,
) -> Result<ThetaComponentValue> {
    if lift_sign != 1 && lift_sign != -1 {
        return Err(Error::Parameter("lift sign must be ±1".into()));
    }
    if rec.q.genus() != z.genus() {
        return Err(Error::Shape("genus mismatch".into()));
    }
    let t = Mu8::from_sign(lift_sign) * rec.m_xstar_q;
    let prefactor = rec.m_xstar_q.inv() * t;
    let s = twisted_series(z, &twist_of(rec), weight, params)?;
    let p = prefactor.embed();
    Ok(ThetaComponentValue {
        q: rec.q.clone(),
        prefactor,
        value: s.value.iter().map(|w| w * p).collect(),
        tail_bound: s.tail_bound,
        magnitude: s.magnitude,
    })
}

/// All components in coset-table order, plus-lift.
pub fn big_theta(table: &CosetTable, z: &SiegelPoint, weight: Weight, params: &ThetaParams) -> Result<Vec<ThetaComponentValue>> {
    table.records.iter().map(|rec| theta_component(rec, 1, z, weight, params)).collect()
}

/// Column vector of a weight-3/2 value.
pub fn as_column(v: &[Complex64]) -> CVec {
    CVec::from_column_slice(v)
}
