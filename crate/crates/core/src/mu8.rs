//! Exact eighth roots of unity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::ops::{Mul, MulAssign};

/// `e^{iπk/4}` stored by its exponent `k mod 8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Mu8(u8);

impl Mu8 {
    pub const ONE: Mu8 = Mu8(0);
    pub const MINUS_ONE: Mu8 = Mu8(4);

    pub fn new(k: i64) -> Self {
        Mu8(k.rem_euclid(8) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn inv(self) -> Self {
        Mu8::new(-(self.0 as i64))
    }

    pub fn pow(self, e: i64) -> Self {
        Mu8::new(self.0 as i64 * e)
    }

    pub fn from_sign(s: i8) -> Self {
        if s < 0 {
            Self::MINUS_ONE
        } else {
            Self::ONE
        }
    }

    /// `Some(±1)` when the value is real.
    pub fn as_sign(self) -> Option<i8> {
        match self.0 {
            0 => Some(1),
            4 => Some(-1),
            _ => None,
        }
    }

    pub fn embed(self) -> Complex64 {
        Complex64::from_polar(1.0, FRAC_PI_4 * self.0 as f64)
    }

    /// Nearest eighth root of unity and the distance to it.
    pub fn snap(z: Complex64) -> (Self, f64) {
        let k = (z.arg() / FRAC_PI_4).round() as i64;
        let r = Mu8::new(k);
        (r, (z - r.embed()).norm())
    }
}

impl Mul for Mu8 {
    type Output = Mu8;
    fn mul(self, rhs: Mu8) -> Mu8 {
        Mu8((self.0 + rhs.0) % 8)
    }
}

impl MulAssign for Mu8 {
    fn mul_assign(&mut self, rhs: Mu8) {
        *self = *self * rhs;
    }
}

impl std::iter::Product for Mu8 {
    fn product<I: Iterator<Item = Mu8>>(iter: I) -> Mu8 {
        iter.fold(Mu8::ONE, |a, b| a * b)
    }
}

impl fmt::Display for Mu8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(iπ·{}/4)", self.0)
    }
}
