//! Kähler conditions for `√-1 ∂∂̄(log S + g(S))` and its pullback to the
//! blow-up `Bl₀ℂ²` in the two standard charts.
//!
//! Chart `U₁` has coordinates `(z₁, z₂) ↦ (z₁, z₁ z₂)` and chart `U₂` has
//! `(z₁, z₂) ↦ (z₁ z₂, z₂)`. In each chart the exceptional divisor is the zero
//! set of the fiber coordinate (`z₁` on `U₁`, `z₂` on `U₂`), and
//! `S = |fiber|² (1 + |base|²)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::PotentialExpr;

pub const DEFAULT_S_MAX: f64 = 100.0;
pub const DEFAULT_SAMPLES: usize = 2048;
/// The validity grid spans `[S_max · GRID_LOWER_FACTOR, S_max]` geometrically.
const GRID_LOWER_FACTOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub g_s_at_0: f64,
    /// `g_S(0) > 0`.
    pub cond_extension: bool,
    /// `1/S + g_S > 0` on the grid.
    pub cond_positive_1: bool,
    /// `g_S + S g_SS > 0` on the grid.
    pub cond_positive_2: bool,
    pub first_violation_s: Option<f64>,
    pub samples: usize,
    pub s_max: f64,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.cond_extension && self.cond_positive_1 && self.cond_positive_2
    }

    /// Human-readable names of the failing conditions, in a fixed order.
    pub fn failing_conditions(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.cond_extension {
            out.push("g_S(0) > 0");
        }
        if !self.cond_positive_1 {
            out.push("1/S + g_S > 0");
        }
        if !self.cond_positive_2 {
            out.push("g_S + S g_SS > 0");
        }
        out
    }
}

/// Checks the three conditions for `log S + g` to define a Kähler metric on
/// `ℂᵐ∖{0}` that extends across the exceptional divisor. The two open
/// conditions are only checked on a geometric grid of `samples` points.
pub fn check_validity(expr: &PotentialExpr, s_max: f64, samples: usize) -> Result<ValidityReport> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!("samples = {samples} < 2")));
    }
    if !(s_max > 0.0) || !s_max.is_finite() {
        return Err(Error::InvalidArgument(format!("S_max = {s_max} must be positive")));
    }
    let g_s_at_0 = expr.g_jet(0.0)?.v1;
    let s_min = s_max * GRID_LOWER_FACTOR;
    let ratio = (s_max / s_min).ln() / (samples - 1) as f64;

    let (mut ok1, mut ok2) = (true, true);
    let mut first_violation_s = None;
    for k in 0..samples {
        let s = if k == samples - 1 {
            s_max
        } else {
            s_min * (ratio * k as f64).exp()
        };
        let j = expr.g_jet(s)?;
        let c1 = 1.0 / s + j.v1 > 0.0;
        let c2 = j.v1 + s * j.v2 > 0.0;
        if !(c1 && c2) && first_violation_s.is_none() {
            first_violation_s = Some(s);
        }
        ok1 &= c1;
        ok2 &= c2;
    }
    Ok(ValidityReport {
        g_s_at_0,
        cond_extension: g_s_at_0 > 0.0,
        cond_positive_1: ok1,
        cond_positive_2: ok2,
        first_violation_s,
        samples,
        s_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    U1,
    U2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub chart: Chart,
    /// Coordinate whose zero set is the exceptional divisor in this chart.
    pub z_fiber: Complex64,
    pub z_base: Complex64,
}

impl ChartPoint {
    pub fn new(chart: Chart, z_fiber: Complex64, z_base: Complex64) -> Self {
        Self {
            chart,
            z_fiber,
            z_base,
        }
    }

    /// Chart coordinates in order `(z₁, z₂)`.
    pub fn coords(&self) -> [Complex64; 2] {
        match self.chart {
            Chart::U1 => [self.z_fiber, self.z_base],
            Chart::U2 => [self.z_base, self.z_fiber],
        }
    }

    fn from_coords(chart: Chart, z: [Complex64; 2]) -> Self {
        match chart {
            Chart::U1 => Self::new(chart, z[0], z[1]),
            Chart::U2 => Self::new(chart, z[1], z[0]),
        }
    }

    pub fn s(&self) -> f64 {
        self.z_fiber.norm_sqr() * (1.0 + self.z_base.norm_sqr())
    }

    /// Image under the blow-down map in `ℂ²`.
    pub fn blow_down(&self) -> [Complex64; 2] {
        let [z1, z2] = self.coords();
        match self.chart {
            Chart::U1 => [z1, z1 * z2],
            Chart::U2 => [z1 * z2, z2],
        }
    }

    /// Chart point over `p ∈ ℂ²`; `None` when `p` is not covered away from the divisor.
    pub fn lift(chart: Chart, p: [Complex64; 2]) -> Option<Self> {
        let [x1, x2] = p;
        match chart {
            Chart::U1 if x1 != Complex64::new(0.0, 0.0) => Some(Self::new(chart, x1, x2 / x1)),
            Chart::U2 if x2 != Complex64::new(0.0, 0.0) => Some(Self::new(chart, x2, x1 / x2)),
            _ => None,
        }
    }
}

/// 2×2 Hermitian matrix in chart coordinates `(z₁, z₂)`.
///
/// `a11 = ∂²φ/∂z₁∂z̄₁`, `a22 = ∂²φ/∂z₂∂z̄₂` and `a12 = ∂²φ/∂z̄₁∂z₂`; the
/// remaining entry is `conj(a12)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2 {
    pub a11: f64,
    pub a22: f64,
    pub a12: Complex64,
}

impl HermitianMatrix2 {
    pub fn diag(a11: f64, a22: f64) -> Self {
        Self {
            a11,
            a22,
            a12: Complex64::new(0.0, 0.0),
        }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12.norm_sqr()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a11 > 0.0 && self.det() > 0.0
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.a11 - other.a11)
            .abs()
            .max((self.a22 - other.a22).abs())
            .max((self.a12 - other.a12).norm())
    }
}

/// Fubini–Study coefficient `1/(1+|w|²)²` of `∂∂̄ log(1+|w|²)` on the divisor.
pub fn fubini_study_check(z_base: Complex64) -> f64 {
    let q = 1.0 + z_base.norm_sqr();
    1.0 / (q * q)
}

/// Closed-form pullback of `√-1 ∂∂̄(log S + g(S))` to `Bl₀ℂ²`.
///
/// With `w` the fiber and `b` the base coordinate, the fiber diagonal entry is
/// `(1+|b|²)(g_S + S g_SS)`, the base diagonal entry is
/// `|w|²(g_S + |w|²|b|² g_SS) + 1/(1+|b|²)²` and the off-diagonal entry is
/// `z₁ z̄₂ (g_S + S g_SS)`. On the divisor (`w = 0`) only `g_S(0)` survives.
pub fn pullback_matrix_closed(expr: &PotentialExpr, p: &ChartPoint) -> Result<HermitianMatrix2> {
    let s = p.s();
    let j = expr.g_jet(s)?;
    let (g_s, g_ss) = (j.v1, j.v2);
    let mu_sq = g_s + s * g_ss;
    let w2 = p.z_fiber.norm_sqr();
    let b2 = p.z_base.norm_sqr();
    let fiber = (1.0 + b2) * mu_sq;
    let base = w2 * (g_s + w2 * b2 * g_ss) + fubini_study_check(p.z_base);
    let [z1, z2] = p.coords();
    let a12 = z1 * z2.conj() * mu_sq;
    Ok(match p.chart {
        Chart::U1 => HermitianMatrix2 {
            a11: fiber,
            a22: base,
            a12,
        },
        Chart::U2 => HermitianMatrix2 {
            a11: base,
            a22: fiber,
            a12,
        },
    })
}

/// Restriction of the pullback to the exceptional divisor at base coordinate `w`.
pub fn restriction_to_divisor(expr: &PotentialExpr, chart: Chart, w: Complex64) -> Result<HermitianMatrix2> {
    pullback_matrix_closed(expr, &ChartPoint::new(chart, Complex64::new(0.0, 0.0), w))
}

/// Complex Hessian of `φ = log S + g(S)` in chart coordinates by central
/// finite differences on the four real coordinates, Richardson-extrapolated
/// from steps `h` and `2h`.
pub fn pullback_matrix_numeric(expr: &PotentialExpr, p: &ChartPoint, h: f64) -> Result<HermitianMatrix2> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step h = {h} must be positive")));
    }
    if p.z_fiber.norm() <= 4.0 * h {
        return Err(Error::Domain(format!(
            "stencil of half-width {} reaches the exceptional divisor (|z_fiber| = {})",
            2.0 * h,
            p.z_fiber.norm()
        )));
    }
    let chart = p.chart;
    let [z1, z2] = p.coords();
    let x0 = [z1.re, z1.im, z2.re, z2.im];
    let phi = |x: [f64; 4]| -> Result<f64> {
        let q = ChartPoint::from_coords(chart, [Complex64::new(x[0], x[1]), Complex64::new(x[2], x[3])]);
        let s = q.s();
        if !(s > 0.0) {
            return Err(Error::Domain(format!("S = {s} on the stencil")));
        }
        Ok(s.ln() + expr.eval(s)?)
    };
    let shifted = |di: [f64; 4]| -> [f64; 4] {
        [x0[0] + di[0], x0[1] + di[1], x0[2] + di[2], x0[3] + di[3]]
    };
    let f0 = phi(x0)?;
    let second = |i: usize, j: usize, h: f64| -> Result<f64> {
        let e = |k: usize, t: f64| {
            let mut d = [0.0; 4];
            d[k] = t;
            d
        };
        if i == j {
            let fp = phi(shifted(e(i, h)))?;
            let fm = phi(shifted(e(i, -h)))?;
            Ok((fp - 2.0 * f0 + fm) / (h * h))
        } else {
            let d = |si: f64, sj: f64| {
                let mut v = e(i, si * h);
                v[j] = sj * h;
                v
            };
            let fpp = phi(shifted(d(1.0, 1.0)))?;
            let fpm = phi(shifted(d(1.0, -1.0)))?;
            let fmp = phi(shifted(d(-1.0, 1.0)))?;
            let fmm = phi(shifted(d(-1.0, -1.0)))?;
            Ok((fpp - fpm - fmp + fmm) / (4.0 * h * h))
        }
    };
    let d2 = |i: usize, j: usize| -> Result<f64> {
        Ok((4.0 * second(i, j, h)? - second(i, j, 2.0 * h)?) / 3.0)
    };
    // Real coordinate indices: z₁ = (0, 1), z₂ = (2, 3).
    let a11 = 0.25 * (d2(0, 0)? + d2(1, 1)?);
    let a22 = 0.25 * (d2(2, 2)? + d2(3, 3)?);
    // ∂²/∂z₂∂z̄₁ = ¼[(∂x₂∂x₁ + ∂y₂∂y₁) + i(∂x₂∂y₁ − ∂y₂∂x₁)]
    let re = 0.25 * (d2(2, 0)? + d2(3, 1)?);
    let im = 0.25 * (d2(2, 1)? - d2(3, 0)?);
    Ok(HermitianMatrix2 {
        a11,
        a22,
        a12: Complex64::new(re, im),
    })
}
