use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An element `i·b` of `𝔲(1) = iℝ`, stored by its real coefficient `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Imag(pub f64);

impl Imag {
    pub const ZERO: Imag = Imag(0.0);

    /// Coefficient `b` of `i·b`.
    pub fn im(self) -> f64 {
        self.0
    }

    /// `-i · (i b) = b`: the real number paired with this element.
    pub fn times_minus_i(self) -> f64 {
        self.0
    }

    pub fn abs(self) -> f64 {
        self.0.abs()
    }
}

impl Add for Imag {
    type Output = Imag;
    fn add(self, rhs: Imag) -> Imag {
        Imag(self.0 + rhs.0)
    }
}

impl Sub for Imag {
    type Output = Imag;
    fn sub(self, rhs: Imag) -> Imag {
        Imag(self.0 - rhs.0)
    }
}

impl Neg for Imag {
    type Output = Imag;
    fn neg(self) -> Imag {
        Imag(-self.0)
    }
}

impl Mul<f64> for Imag {
    type Output = Imag;
    fn mul(self, rhs: f64) -> Imag {
        Imag(self.0 * rhs)
    }
}

impl fmt::Display for Imag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}i", self.0)
    }
}
