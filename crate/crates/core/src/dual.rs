//! Second-order forward-mode differentiation in one variable.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by the closed-form expressions that get differentiated.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn constant(x: f64) -> Self;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn value(self) -> f64;
    /// max(self, 0), with a zero jet when clamped.
    fn clamp_nonneg(self) -> Self;
}

impl Scalar for f64 {
    fn constant(x: f64) -> Self {
        x
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn value(self) -> f64 {
        self
    }
    fn clamp_nonneg(self) -> Self {
        self.max(0.0)
    }
}

/// Truncated Taylor jet (f, f', f'').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub fn variable(x: f64) -> Self {
        Self { v: x, d1: 1.0, d2: 0.0 }
    }

    /// g(f) given g, g', g'' at f.v.
    fn chain(self, g: f64, dg: f64, ddg: f64) -> Self {
        Self { v: g, d1: dg * self.d1, d2: ddg * self.d1 * self.d1 + dg * self.d2 }
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let inv = o.chain(1.0 / o.v, -1.0 / (o.v * o.v), 2.0 / (o.v * o.v * o.v));
        self * inv
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl Scalar for Jet2 {
    fn constant(x: f64) -> Self {
        Self { v: x, d1: 0.0, d2: 0.0 }
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }
    fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }
    fn value(self) -> f64 {
        self.v
    }
    fn clamp_nonneg(self) -> Self {
        if self.v < 0.0 {
            Self::constant(0.0)
        } else {
            self
        }
    }
}
