//! Dormand–Prince 5(4) stepper for an autonomous scalar ODE `y' = f(y)`.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Adaptive stepper state. `k` is `f(y)` at the current point (FSAL).
///
/// `t` is accumulated with compensated summation: near a collapse thousands
/// of steps are each only a few ulps of `t` long.
pub(crate) struct Stepper<F> {
    f: F,
    pub t: f64,
    t_carry: f64,
    pub y: f64,
    pub k: f64,
    pub h: f64,
    rel_tol: f64,
    abs_tol: f64,
    pub evaluations: usize,
}

pub(crate) struct Accepted {
    /// Size of the step just taken.
    pub h: f64,
}

impl<F: FnMut(f64) -> Result<f64>> Stepper<F> {
    pub fn new(mut f: F, y0: f64, h0: f64, rel_tol: f64, abs_tol: f64) -> Result<Self> {
        let k = f(y0)?;
        Ok(Self {
            f,
            t: 0.0,
            t_carry: 0.0,
            y: y0,
            k,
            h: h0,
            rel_tol,
            abs_tol,
            evaluations: 1,
        })
    }

    /// Current time plus `dt`, including the carried rounding error.
    pub fn time_after(&self, dt: f64) -> f64 {
        self.t + (dt + self.t_carry)
    }

    /// Moves the clock to exactly `t`.
    pub fn set_time(&mut self, t: f64) {
        self.t = t;
        self.t_carry = 0.0;
    }

    fn add_time(&mut self, h: f64) {
        let dt = h + self.t_carry;
        let t = self.t + dt;
        self.t_carry = dt - (t - self.t);
        self.t = t;
    }

    /// One trial step of size `h`: returns `(y_new, f(y_new), error estimate)`.
    fn trial(&mut self, h: f64) -> Result<(f64, f64, f64)> {
        let y = self.y;
        let k1 = self.k;
        let f = &mut self.f;
        let k2 = f(y + h * A21 * k1)?;
        let k3 = f(y + h * (A31 * k1 + A32 * k2))?;
        let k4 = f(y + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
        let k5 = f(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))?;
        let k6 = f(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))?;
        let y_new = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
        let k7 = f(y_new)?;
        self.evaluations += 6;
        let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        Ok((y_new, k7, err))
    }

    /// Advances by one accepted step no longer than `h_max`.
    ///
    /// `admissible` rejects trial states outside the ODE's domain; such trials
    /// shrink the step like an error-test failure.
    pub fn advance(
        &mut self,
        h_max: f64,
        admissible: impl Fn(f64) -> bool,
    ) -> Result<Accepted> {
        let mut h = self.h.min(h_max);
        let mut last_error = None;
        loop {
            if !(h > 0.0) || self.t + h == self.t {
                return Err(last_error.unwrap_or_else(|| {
                    Error::Overflow(format!("step size underflow at t = {}", self.t))
                }));
            }
            // The right-hand side may be undefined past the domain boundary;
            // treat evaluation failures of trial stages as a rejected step.
            let trial = if admissible(self.y + h * self.k) {
                self.trial(h)
            } else {
                Err(Error::Domain("trial state outside the domain".into()))
            };
            let (y_new, k_new, err) = match trial {
                Ok(v) if admissible(v.0) && v.1.is_finite() => v,
                Err(e) => {
                    last_error = Some(e);
                    h *= 0.25;
                    continue;
                }
                _ => {
                    h *= 0.25;
                    continue;
                }
            };
            let scale = self.abs_tol + self.rel_tol * self.y.abs().max(y_new.abs());
            let ratio = (err / scale).abs();
            if ratio <= 1.0 {
                let grow = if ratio == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * ratio.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                self.add_time(h);
                self.y = y_new;
                self.k = k_new;
                self.h = h * grow;
                return Ok(Accepted { h });
            }
            h *= (SAFETY * ratio.powf(-0.2)).max(MIN_FACTOR);
        }
    }
}
