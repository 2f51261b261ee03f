//! The rotationally reduced mean curvature flow `dR/dt = H(R)`.
//!
//! Integration runs in `u = R²`, where `du/dt = 2 R H(R)` tends to the
//! constant `-2c` as `R → 0` and is smooth up to the collapse. Each accepted
//! step is capped so that `u` shrinks by at most a fixed fraction, which gives
//! a geometric sequence of samples all the way down to `r_stop`.

pub mod quadrature;
mod rk;
mod singularity;

use serde::Serialize;

pub use singularity::{
    asymptotic_constants, classify, AsymptoticConstants, SingularityReport, TypeVerdict,
};

use crate::curvature;
use crate::error::{Error, Result};
use crate::potential::KahlerPotential;
use rk::Stepper;

/// Largest relative decrease (or increase) of `u = R²` in one step.
const MAX_U_FRACTION: f64 = 0.25;
/// Trajectory tail is kept for `R ≤ min(TAIL_RADIUS, R0 / 2)`.
pub(crate) const TAIL_RADIUS: f64 = 1e-2;
/// Steps shorter than this many ulps of `t` end the integration.
const CLOCK_ULPS: f64 = 64.0;
/// Radial samples used by [`monotone_radius`].
const PROBE_SAMPLES: usize = 4096;
const PROBE_DECADES: f64 = 8.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowOptions {
    pub r_stop: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Time between recorded samples; `None` records every accepted step.
    pub output_stride: Option<f64>,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            r_stop: 1e-8,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 10_000_000,
            output_stride: None,
        }
    }
}

impl FlowOptions {
    fn validate(&self) -> Result<()> {
        if !(self.r_stop > 0.0) {
            return Err(Error::InvalidArgument(format!("r_stop = {}", self.r_stop)));
        }
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument("max_steps must be positive".into()));
        }
        if let Some(s) = self.output_stride {
            if !(s > 0.0) || !s.is_finite() {
                return Err(Error::InvalidArgument(format!("output stride {s}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "A_sq")]
    pub a_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlowStatus {
    Collapsed,
    Stalled,
    MaxStepsExceeded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub m: u32,
    pub r0: f64,
    pub samples: Vec<FlowSample>,
    pub status: FlowStatus,
    pub t_end: f64,
    /// Every accepted step with `R` below the tail radius, regardless of stride.
    pub tail: Vec<FlowSample>,
    /// Collapse time extrapolated from the last decade of the tail.
    pub t_sing: Option<f64>,
    pub steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &FlowSample {
        self.samples.last().expect("trajectory has the initial sample")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MonotoneRadius {
    /// `H < 0` on the whole probed range.
    Unbounded,
    /// First zero of `H` found by the probe.
    Finite(f64),
}

impl MonotoneRadius {
    pub fn admits(&self, r0: f64) -> bool {
        match *self {
            MonotoneRadius::Unbounded => true,
            MonotoneRadius::Finite(r) => r0 < r,
        }
    }
}

/// `|H| < 1e-14 (1 + 1/R)`, written for `R·H`.
fn is_stalled(r: f64, rh: f64) -> bool {
    rh >= 0.0 || rh.abs() < 1e-14 * (r + 1.0)
}

/// Largest `R* ≤ r_probe_max` with `H < 0` on a dense geometric sample of `(0, R*)`.
pub fn monotone_radius(pot: &KahlerPotential, m: u32, r_probe_max: f64) -> Result<MonotoneRadius> {
    if !(r_probe_max > 0.0) || !r_probe_max.is_finite() {
        return Err(Error::InvalidArgument(format!("probe radius {r_probe_max}")));
    }
    let rh = |r: f64| curvature::scaled_mean_curvature(pot, m, r);
    let r_min = r_probe_max * 10f64.powf(-PROBE_DECADES);
    let mut prev = 0.0;
    if is_stalled(0.0, rh(0.0).or_else(|_| rh(r_min))?) {
        return Ok(MonotoneRadius::Finite(0.0));
    }
    for k in 0..PROBE_SAMPLES {
        let frac = k as f64 / (PROBE_SAMPLES - 1) as f64;
        let r = r_min * 10f64.powf(PROBE_DECADES * frac);
        if is_stalled(r, rh(r)?) {
            // Bisect on the sign change between `prev` and `r`.
            let (mut lo, mut hi) = (prev, r);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if is_stalled(mid, rh(mid)?) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(MonotoneRadius::Finite(hi));
        }
        prev = r;
    }
    Ok(MonotoneRadius::Unbounded)
}

/// `du/dt = 2 R H(R)` with `u = R²`; undefined for `u < 0`.
fn u_rate(pot: &KahlerPotential, m: u32, u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::Domain(format!("u = R² = {u} < 0")));
    }
    Ok(2.0 * curvature::scaled_mean_curvature(pot, m, u.sqrt())?)
}

fn sample_at(pot: &KahlerPotential, m: u32, t: f64, r: f64) -> Result<FlowSample> {
    let c = curvature::sample(pot, m, r)?;
    Ok(FlowSample {
        t,
        r,
        h: c.h,
        a_sq: c.a_sq,
    })
}

/// Integrates the flow from `R(0) = r0` until `R ≤ r_stop`, `H ≥ 0`, or the
/// step budget runs out.
pub fn integrate(pot: &KahlerPotential, m: u32, r0: f64, opts: &FlowOptions) -> Result<Trajectory> {
    opts.validate()?;
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m = {m} < 2")));
    }
    if !(r0 > opts.r_stop) || !r0.is_finite() {
        return Err(Error::InvalidInitialRadius(format!(
            "R0 = {r0} must exceed r_stop = {}",
            opts.r_stop
        )));
    }
    if let MonotoneRadius::Finite(r_star) = monotone_radius(pot, m, r0)? {
        return Err(Error::InvalidInitialRadius(format!(
            "mean curvature vanishes at R = {r_star} < R0 = {r0}"
        )));
    }

    let tail_radius = TAIL_RADIUS.min(0.5 * r0);
    let u0 = r0 * r0;
    let k0 = u_rate(pot, m, u0)?;
    let h0 = 0.01 * u0 / k0.abs().max(f64::MIN_POSITIVE);
    let mut stepper = Stepper::new(|u| u_rate(pot, m, u), u0, h0, opts.rel_tol, opts.abs_tol)?;

    let first = sample_at(pot, m, 0.0, r0)?;
    let mut samples = vec![first];
    let mut tail = Vec::new();
    let mut previous = first;
    let mut outputs = 0u64;
    let mut steps = 0;

    let status = loop {
        if is_stalled(previous.r, previous.r * previous.h) {
            break FlowStatus::Stalled;
        }
        if steps >= opts.max_steps {
            break FlowStatus::MaxStepsExceeded;
        }
        let mut h_max = MAX_U_FRACTION * stepper.y / stepper.k.abs();
        if h_max < CLOCK_ULPS * (stepper.t.next_up() - stepper.t) {
            // The clock can no longer resolve the steps. `u` is tiny and its
            // rate is constant to O(u), so cover the rest in one linear segment.
            let u_stop = opts.r_stop * opts.r_stop;
            let r = opts.r_stop.min(stepper.y.sqrt());
            let dt = (stepper.y - u_stop).max(0.0) / stepper.k.abs();
            let t = stepper.time_after(dt).max(stepper.t.next_up());
            let s = sample_at(pot, m, t, r)?;
            tail.push(s);
            samples.push(s);
            previous = s;
            steps += 1;
            break FlowStatus::Collapsed;
        }
        let mut landing = None;
        if let Some(stride) = opts.output_stride {
            let target = stride * (outputs + 1) as f64;
            if stepper.t + h_max >= target {
                h_max = target - stepper.t;
                landing = Some(target);
            }
        }
        let accepted = stepper.advance(h_max, |u| u > 0.0)?;
        steps += 1;
        if let Some(target) = landing {
            if accepted.h == h_max {
                stepper.set_time(target);
                outputs += 1;
            } else {
                landing = None;
            }
        }
        let r = stepper.y.sqrt();
        let s = sample_at(pot, m, stepper.t, r)?;
        let collapsed = r <= opts.r_stop;
        if r <= tail_radius {
            if tail.is_empty() && previous.r > tail_radius {
                tail.push(previous);
            }
            tail.push(s);
        }
        let stalled = is_stalled(r, r * s.h);
        if opts.output_stride.is_none() || landing.is_some() || collapsed || stalled {
            samples.push(s);
        }
        previous = s;
        if collapsed {
            break FlowStatus::Collapsed;
        }
    };

    if tail.len() < 2 {
        // Ensure the extrapolation has two points even for coarse runs.
        tail = samples.iter().rev().take(2).rev().copied().collect();
    }
    let t_sing = (status == FlowStatus::Collapsed).then(|| extrapolate_collapse(&tail));
    Ok(Trajectory {
        m,
        r0,
        t_end: previous.t,
        samples,
        status,
        tail,
        t_sing,
        steps,
    })
}

/// Fits `R² = a (T - t)` on the samples within a decade of the final radius
/// and returns `T`.
fn extrapolate_collapse(tail: &[FlowSample]) -> f64 {
    let last = tail.last().expect("non-empty tail");
    let mut window: Vec<&FlowSample> = tail.iter().filter(|s| s.r <= 10.0 * last.r).collect();
    if window.len() < 2 {
        window = tail.iter().rev().take(2).collect();
    }
    let n = window.len() as f64;
    let t_mean = window.iter().map(|s| s.t).sum::<f64>() / n;
    let u_mean = window.iter().map(|s| s.r * s.r).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for s in &window {
        let dt = s.t - t_mean;
        sxy += dt * (s.r * s.r - u_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    t_mean - u_mean / slope
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Evolves `R` for `duration` along the flow (forward) or its time reversal
/// `dR/dt = -H(R)` (backward) and returns the final radius.
pub fn evolve(
    pot: &KahlerPotential,
    m: u32,
    r_start: f64,
    duration: f64,
    direction: Direction,
    opts: &FlowOptions,
) -> Result<f64> {
    opts.validate()?;
    if !(r_start > 0.0) || !(duration >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "R = {r_start}, duration = {duration}"
        )));
    }
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let u0 = r_start * r_start;
    let k0 = sign * u_rate(pot, m, u0)?;
    let h0 = (0.01 * u0 / k0.abs().max(f64::MIN_POSITIVE)).min(duration.max(f64::MIN_POSITIVE));
    let mut stepper = Stepper::new(
        |u| Ok(sign * u_rate(pot, m, u)?),
        u0,
        h0,
        opts.rel_tol,
        opts.abs_tol,
    )?;
    let mut steps = 0;
    while stepper.t < duration {
        if steps >= opts.max_steps {
            return Err(Error::Overflow("step budget exhausted".into()));
        }
        let left = duration - stepper.t;
        let h_max = (MAX_U_FRACTION * stepper.y / stepper.k.abs()).min(left);
        let accepted = stepper.advance(h_max, |u| u > 0.0)?;
        if accepted.h == left {
            stepper.set_time(duration);
        }
        steps += 1;
    }
    Ok(stepper.y.sqrt())
}

/// `T_sing = ∫₀^{R0} dR / (-H(R))` by adaptive Gauss–Kronrod quadrature.
pub fn singularity_time_quadrature(pot: &KahlerPotential, m: u32, r0: f64) -> Result<f64> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::InvalidArgument(format!("R0 = {r0}")));
    }
    let integrand = |r: f64| -> Result<f64> {
        let rh = curvature::scaled_mean_curvature(pot, m, r)?;
        if is_stalled(r, rh) {
            return Err(Error::StallDetected {
                radius: r,
                mean_curvature: if r > 0.0 { rh / r } else { rh },
            });
        }
        Ok(r / -rh)
    };
    let (value, _) = quadrature::integrate(integrand, 0.0, r0, 1e-14, 1e-14)?;
    Ok(value)
}

/// Radii on the uniform grid `R_max·i/samples` where `|A|²` exceeds `threshold`.
pub fn blow_up_locus_scan(
    pot: &KahlerPotential,
    m: u32,
    r_max: f64,
    samples: usize,
    threshold: f64,
) -> Result<Vec<f64>> {
    if samples == 0 || !(r_max > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "R_max = {r_max}, samples = {samples}"
        )));
    }
    let mut out = Vec::new();
    for i in 1..=samples {
        let r = r_max * i as f64 / samples as f64;
        if curvature::norm_a_squared(pot, m, r)? > threshold {
            out.push(r);
        }
    }
    Ok(out)
}
