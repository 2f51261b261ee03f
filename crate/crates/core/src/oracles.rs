//! Exact reference solutions: the Burns metric on `Bl₀ℂ²` and the flat round sphere.

use crate::error::{Error, Result};

/// Left-hand side of the Burns implicit solution, `R²/2 + (1/3) log(3R² + 1)`.
/// Strictly increasing in `R ≥ 0`.
pub fn burns_potential_time(r: f64) -> f64 {
    let u = r * r;
    0.5 * u + (3.0 * u).ln_1p() / 3.0
}

/// Collapse time of the Burns flow started at radius `r0`.
pub fn burns_t_sing(r0: f64) -> f64 {
    burns_potential_time(r0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurnsOracle {
    pub r0: f64,
    pub t_sing: f64,
}

impl BurnsOracle {
    pub fn new(r0: f64) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::InvalidArgument(format!("R0 = {r0} must be positive")));
        }
        Ok(Self {
            r0,
            t_sing: burns_t_sing(r0),
        })
    }

    pub fn radius(&self, t: f64) -> Result<f64> {
        burns_radius(self.r0, t)
    }
}

/// Radius of the Burns flow at time `t`: the root of
/// `R²/2 + (1/3) log(3R² + 1) = T_sing - t`, found by bisection on `[0, R0]`
/// down to adjacent floating-point values.
pub fn burns_radius(r0: f64, t: f64) -> Result<f64> {
    let t_sing = burns_t_sing(r0);
    if !(0.0..=t_sing).contains(&t) {
        return Err(Error::OutOfRange(format!("t = {t} outside [0, {t_sing}]")));
    }
    if t == 0.0 {
        return Ok(r0);
    }
    let target = t_sing - t;
    let (mut lo, mut hi) = (0.0_f64, r0);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if burns_potential_time(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Round sphere in the flat metric: `R(t) = √(R0² - 2t)` for every `m`,
/// since the averaged mean curvature is `-1/R`.
pub fn flat_radius(r0: f64, t: f64, m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m = {m} < 2")));
    }
    let t_end = 0.5 * r0 * r0;
    if !(0.0..=t_end).contains(&t) {
        return Err(Error::OutOfRange(format!("t = {t} outside [0, {t_end}]")));
    }
    Ok((r0 * r0 - 2.0 * t).max(0.0).sqrt())
}

pub fn flat_t_sing(r0: f64) -> f64 {
    0.5 * r0 * r0
}
