//! Order-3 truncated Taylor arithmetic.
//!
//! A [`Jet3`] carries a value together with its first three derivatives with
//! respect to a single real variable. Products follow the Leibniz rule and
//! compositions follow Faà di Bruno's formula, both truncated at order three.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet3 {
    pub v0: f64,
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl Jet3 {
    pub const fn new(v0: f64, v1: f64, v2: f64, v3: f64) -> Self {
        Self { v0, v1, v2, v3 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0, 0.0)
    }

    /// The independent variable evaluated at `x`.
    pub const fn variable(x: f64) -> Self {
        Self::new(x, 1.0, 0.0, 0.0)
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.v0, self.v1, self.v2, self.v3]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn is_constant(&self) -> bool {
        self.v1 == 0.0 && self.v2 == 0.0 && self.v3 == 0.0
    }

    /// Composes an outer function, given by its value and first three
    /// derivatives at `self.v0`, with this jet.
    pub fn compose(self, outer: [f64; 4]) -> Self {
        let [p0, p1, p2, p3] = outer;
        let (u1, u2, u3) = (self.v1, self.v2, self.v3);
        Self {
            v0: p0,
            v1: p1 * u1,
            v2: p2 * u1 * u1 + p1 * u2,
            v3: p3 * u1 * u1 * u1 + 3.0 * p2 * u1 * u2 + p1 * u3,
        }
    }

    pub fn recip(self) -> Result<Self> {
        let x = self.v0;
        if x == 0.0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let r = 1.0 / x;
        Ok(self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }

    pub fn exp(self) -> Self {
        let e = self.v0.exp();
        self.compose([e, e, e, e])
    }

    pub fn ln(self) -> Result<Self> {
        let x = self.v0;
        if x <= 0.0 {
            return Err(Error::Domain(format!("log of non-positive argument {x}")));
        }
        let r = 1.0 / x;
        Ok(self.compose([x.ln(), r, -r * r, 2.0 * r * r * r]))
    }

    pub fn sqrt(self) -> Result<Self> {
        let x = self.v0;
        if x < 0.0 {
            return Err(Error::Domain(format!("sqrt of negative argument {x}")));
        }
        if x == 0.0 && !self.is_constant() {
            return Err(Error::Overflow("derivative of sqrt at zero".into()));
        }
        let s = x.sqrt();
        if x == 0.0 {
            return Ok(Self::constant(0.0));
        }
        Ok(self.compose([
            s,
            0.5 / s,
            -0.25 / (s * x),
            0.375 / (s * x * x),
        ]))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.v0.sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.v0.sin_cos();
        self.compose([c, -s, -c, s])
    }

    /// Raises the jet to a constant real power.
    ///
    /// Integer exponents are allowed on any base; other exponents need a
    /// non-negative base.
    pub fn powf(self, p: f64) -> Result<Self> {
        let x = self.v0;
        let integer = p.fract() == 0.0 && p.abs() < 1e15;
        if x < 0.0 && !integer {
            return Err(Error::Domain(format!(
                "real exponent {p} on negative base {x}"
            )));
        }
        if x == 0.0 && p < 0.0 {
            return Err(Error::Domain(format!("zero raised to negative power {p}")));
        }
        // Falling-factorial coefficients p, p(p-1), p(p-1)(p-2); a zero
        // coefficient kills the term even where x^(p-k) is infinite.
        let mut outer = [0.0; 4];
        let mut coeff = 1.0;
        for (k, slot) in outer.iter_mut().enumerate() {
            if k > 0 {
                coeff *= p - (k as f64 - 1.0);
            }
            *slot = if coeff == 0.0 {
                0.0
            } else if integer {
                coeff * x.powi((p - k as f64) as i32)
            } else {
                coeff * x.powf(p - k as f64)
            };
        }
        let out = self.compose(outer);
        if !out.is_finite() {
            if self.is_constant() && outer[0].is_finite() {
                return Ok(Self::constant(outer[0]));
            }
            return Err(Error::Overflow(format!("{x}^{p}")));
        }
        Ok(out)
    }

    /// General power `self^exponent`; a non-constant exponent goes through
    /// `exp(exponent * ln(self))` and so needs a positive base.
    pub fn pow(self, exponent: Jet3) -> Result<Self> {
        if exponent.is_constant() {
            return self.powf(exponent.v0);
        }
        Ok((exponent * self.ln()?).exp())
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        Jet3::new(self.v0 + o.v0, self.v1 + o.v1, self.v2 + o.v2, self.v3 + o.v3)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        Jet3::new(self.v0 - o.v0, self.v1 - o.v1, self.v2 - o.v2, self.v3 - o.v3)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        Jet3::new(-self.v0, -self.v1, -self.v2, -self.v3)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, o: Jet3) -> Jet3 {
        Jet3::new(
            self.v0 * o.v0,
            self.v1 * o.v0 + self.v0 * o.v1,
            self.v2 * o.v0 + 2.0 * self.v1 * o.v1 + self.v0 * o.v2,
            self.v3 * o.v0 + 3.0 * self.v2 * o.v1 + 3.0 * self.v1 * o.v2 + self.v0 * o.v3,
        )
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, k: f64) -> Jet3 {
        Jet3::new(self.v0 * k, self.v1 * k, self.v2 * k, self.v3 * k)
    }
}

/// Panics on a zero denominator; use [`Jet3::recip`] for a checked version.
impl Div for Jet3 {
    type Output = Jet3;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet3) -> Jet3 {
        self * o.recip().expect("jet division by zero")
    }
}
