//! Singularity time estimates and Type I / Type II classification.
//!
//! Near the exceptional divisor `R·H → -c` and `R²|A|² → W0`, so
//! `R² ≈ 2c (T - t)` and `(T - t)|A|² → W0 / (2c)`. For `f = log S + g`,
//! `c = 1/((2m-1)√g_S(0))` and `W0 = 1/g_S(0)`; for the flat metric every
//! principal curvature is `-1/R`, giving `c = 1` and `W0 = 2m-1`.

use serde::Serialize;

use super::{singularity_time_quadrature, FlowSample, FlowStatus, Trajectory, TAIL_RADIUS};
use crate::error::{Error, Result};
use crate::oracles;
use crate::potential::KahlerPotential;

/// Relative spread below which the tail products count as converged.
const CONVERGENCE_SPREAD: f64 = 0.05;
/// Type II needs the tail products to exceed this multiple of the prediction.
const DIVERGENCE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    /// `lim R·H = -c`.
    pub c: f64,
    /// `lim R²|A|² = W0`.
    pub w0: f64,
    /// `lim (T - t)|A|² = W0 / (2c)`.
    pub limit_predicted: f64,
}

pub fn asymptotic_constants(pot: &KahlerPotential, m: u32) -> Result<AsymptoticConstants> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m = {m} < 2")));
    }
    let k = 2.0 * m as f64 - 1.0;
    let (c, w0) = match pot {
        KahlerPotential::Flat => (1.0, k),
        KahlerPotential::Blowup(g) => {
            let a = g.g_jet(0.0)?.v1;
            if !(a > 0.0) {
                return Err(Error::InvalidPotential(format!("g_S(0) = {a} is not positive")));
            }
            (1.0 / (k * a.sqrt()), 1.0 / a)
        }
    };
    Ok(AsymptoticConstants {
        c,
        w0,
        limit_predicted: w0 / (2.0 * c),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TypeVerdict {
    TypeI,
    TypeII,
    Inconclusive,
}

impl TypeVerdict {
    pub fn label(self) -> &'static str {
        match self {
            TypeVerdict::TypeI => "Type I",
            TypeVerdict::TypeII => "Type II",
            TypeVerdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityReport {
    pub t_sing_trajectory: f64,
    pub t_sing_quadrature: f64,
    pub t_sing_closed_form: Option<f64>,
    pub verdict: TypeVerdict,
    /// Estimated `lim (T - t)|A|²`.
    pub limit_estimate: f64,
    pub limit_predicted: f64,
    /// Predicted `lim R·H = -c`.
    pub c: f64,
    /// Largest `(T - t)|A|²` over the recorded samples and the tail.
    pub sup_product: f64,
}

/// Exact collapse time where a closed form is known.
pub fn closed_form_t_sing(pot: &KahlerPotential, m: u32, r0: f64) -> Option<f64> {
    match pot {
        KahlerPotential::Flat => Some(oracles::flat_t_sing(r0)),
        p if p.is_burns() && m == 2 => Some(oracles::burns_t_sing(r0)),
        _ => None,
    }
}

/// Least-squares intercept of `y` against `x`.
fn intercept(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xm = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - xm) * (y - ym);
        sxx += (x - xm) * (x - xm);
    }
    if sxx == 0.0 {
        return ym;
    }
    ym - xm * sxy / sxx
}

/// Classifies the collapse of a trajectory.
///
/// The products `(T - t)|A|²` are taken over the tail decade
/// `R ∈ [R_hi/10, R_hi]` with `R_hi = min(10⁻², R0/2)`. Their relative spread
/// decides Type I; the reported limit is the intercept of a linear fit against
/// `R²`, which removes the leading correction.
pub fn classify(
    pot: &KahlerPotential,
    m: u32,
    r0: f64,
    traj: &Trajectory,
) -> Result<SingularityReport> {
    if traj.status != FlowStatus::Collapsed {
        return Err(Error::NotCollapsed);
    }
    let t_sing = traj.t_sing.ok_or(Error::NotCollapsed)?;
    let consts = asymptotic_constants(pot, m)?;
    let t_quad = singularity_time_quadrature(pot, m, r0)?;

    let product = |s: &FlowSample| (t_sing - s.t) * s.a_sq;
    let r_hi = TAIL_RADIUS.min(0.5 * r0);
    let window: Vec<&FlowSample> = traj
        .tail
        .iter()
        .filter(|s| s.r <= r_hi && s.r >= 0.1 * r_hi)
        .collect();

    let sup_product = traj
        .samples
        .iter()
        .chain(traj.tail.iter())
        .map(product)
        .fold(f64::NEG_INFINITY, f64::max);

    let (verdict, limit_estimate) = if window.len() < 3 {
        (TypeVerdict::Inconclusive, f64::NAN)
    } else {
        let values: Vec<f64> = window.iter().map(|s| product(s)).collect();
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let fit: Vec<(f64, f64)> = window.iter().map(|s| (s.r * s.r, product(s))).collect();
        let limit = intercept(&fit);
        let spread = (max - min) / mean.abs();
        if spread.is_finite() && spread < CONVERGENCE_SPREAD {
            (TypeVerdict::TypeI, limit)
        } else {
            // Along the whole tail, in time order.
            let tail: Vec<f64> = traj.tail.iter().map(product).collect();
            let increasing = tail.windows(2).all(|w| w[1] >= w[0]);
            let last = tail.last().copied().unwrap_or(f64::NAN);
            if increasing && last > DIVERGENCE_FACTOR * consts.limit_predicted {
                (TypeVerdict::TypeII, limit)
            } else {
                (TypeVerdict::Inconclusive, limit)
            }
        }
    };

    Ok(SingularityReport {
        t_sing_trajectory: t_sing,
        t_sing_quadrature: t_quad,
        t_sing_closed_form: closed_form_t_sing(pot, m, r0),
        verdict,
        limit_estimate,
        limit_predicted: consts.limit_predicted,
        c: consts.c,
        sup_product,
    })
}
