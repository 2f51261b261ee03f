//! Principal curvatures, mean curvature and |A|² of the round hyperspheres
//! `Σ_R = {S = R²}` in `ℂᵐ∖{0}` with the metric `√-1 ∂∂̄ f(S)`.
//!
//! All quantities are signed as for the inward-collapsing family: for the
//! flat metric every principal curvature equals `-1/R`. The mean curvature is
//! the average of the `2m-1` principal curvatures.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{KahlerPotential, RadialCoefficients};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameData {
    /// Tangential metric coefficient `η² = f_S`.
    pub eta_sq: f64,
    /// Coefficient on the span of the normal and its complex rotation, `μ² = f_S + S f_SS`.
    pub mu_sq: f64,
    pub m: u32,
    pub s: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureSample {
    #[serde(rename = "R")]
    pub r: f64,
    pub lambda_tan: f64,
    pub lambda_last: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "A_sq")]
    pub a_sq: f64,
}

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("complex dimension m = {m} < 2")));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius R = {r} must be positive")));
    }
    Ok(())
}

/// Radial coefficients at `S = R²` with `μ² > 0` enforced.
fn coefficients(pot: &KahlerPotential, r: f64) -> Result<RadialCoefficients> {
    let c = pot.radial(r * r)?;
    if !(c.mu_sq > 0.0) {
        return Err(Error::NotPositive {
            quantity: "f_S + S f_SS",
            value: c.mu_sq,
            radius: r,
        });
    }
    if !(c.f_s > 0.0) {
        return Err(Error::NotPositive {
            quantity: "f_S",
            value: c.f_s,
            radius: r,
        });
    }
    Ok(c)
}

pub fn frame(pot: &KahlerPotential, m: u32, r: f64) -> Result<FrameData> {
    check_m(m)?;
    check_radius(r)?;
    let c = coefficients(pot, r)?;
    Ok(FrameData {
        eta_sq: c.f_s,
        mu_sq: c.mu_sq,
        m,
        s: c.s,
        r,
    })
}

/// Diagonal entries of the second fundamental form of a hypersurface whose
/// Euclidean second fundamental form is `τ g₀`, in a `g₀`-orthonormal frame
/// `e_1..e_{d-1}` (coefficient `η²`), `e_d` (coefficient `μ²`) and normal
/// `n = e_{d+1}` (coefficient `A²`).
///
/// Returns `(pi_tan, pi_last)`; `pi_tan` has multiplicity `d - 1`.
#[allow(clippy::too_many_arguments)]
pub fn second_fundamental_form_diag(
    eta: f64,
    mu: f64,
    a: f64,
    tau: f64,
    dn_eta: f64,
    dn_mu: f64,
    d: u32,
) -> Result<(f64, f64)> {
    if !(eta > 0.0 && mu > 0.0 && a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "frame coefficients must be positive (eta = {eta}, mu = {mu}, A = {a})"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidArgument(format!("hypersurface dimension d = {d} < 2")));
    }
    let pi_tan = eta * eta * tau / a + eta * dn_eta / a;
    let pi_last = mu * mu * tau / a + mu * dn_mu / a;
    if !(pi_tan.is_finite() && pi_last.is_finite()) {
        return Err(Error::Overflow("second fundamental form".into()));
    }
    Ok((pi_tan, pi_last))
}

/// The frame data of `Σ_R` in the form expected by
/// [`second_fundamental_form_diag`], built from f-jets:
/// `(η, μ, A, τ, ∇ₙη, ∇ₙμ)` with `τ = 1/R`, `∇ₙη = R f_SS / η` and
/// `∇ₙμ = R (2 f_SS + S f_SSS) / μ`.
pub fn hypersphere_frame_inputs(pot: &KahlerPotential, r: f64) -> Result<[f64; 6]> {
    check_radius(r)?;
    let s = r * r;
    let f = pot.f_jet(s)?;
    let eta_sq = f.v1;
    let mu_sq = f.v1 + s * f.v2;
    if !(eta_sq > 0.0 && mu_sq > 0.0) {
        return Err(Error::NotPositive {
            quantity: "f_S + S f_SS",
            value: mu_sq.min(eta_sq),
            radius: r,
        });
    }
    let (eta, mu) = (eta_sq.sqrt(), mu_sq.sqrt());
    let dn_eta = r * f.v2 / eta;
    let dn_mu = r * (2.0 * f.v2 + s * f.v3) / mu;
    Ok([eta, mu, mu, 1.0 / r, dn_eta, dn_mu])
}

/// Converts second-fundamental-form entries into signed principal
/// curvatures `(λ_tan, λ_last)`, oriented as the collapsing family.
pub fn shape_operator_eigenvalues(pi_tan: f64, pi_last: f64, eta: f64, mu: f64) -> (f64, f64) {
    (-pi_tan / (eta * eta), -pi_last / (mu * mu))
}

fn lambdas(c: &RadialCoefficients, r: f64) -> (f64, f64) {
    let mu = c.mu_sq.sqrt();
    let lambda_tan = -mu * c.inv_f_s / r;
    let lambda_last = -c.reeb / (c.mu_sq * mu * r);
    (lambda_tan, lambda_last)
}

/// `λ₁ = … = λ_{2m-2} = -√(f_S + S f_SS) / (f_S √S)` and
/// `λ_{2m-1} = -(f_S + 3S f_SS + S² f_SSS) / ((f_S + S f_SS)^{3/2} √S)`.
pub fn principal_curvatures(pot: &KahlerPotential, m: u32, r: f64) -> Result<(f64, f64)> {
    check_m(m)?;
    check_radius(r)?;
    let c = coefficients(pot, r)?;
    Ok(lambdas(&c, r))
}

/// `R·H(R)`, evaluated so that it stays finite as `R → 0`.
///
/// `R H = -((2m-2) μ⁴ / f_S + N) / ((2m-1) μ³)` with `N = f_S + 3S f_SS + S² f_SSS`.
fn r_times_h(c: &RadialCoefficients, m: u32) -> f64 {
    let k = 2.0 * m as f64 - 1.0;
    let mu = c.mu_sq.sqrt();
    -((k - 1.0) * c.mu_sq * c.mu_sq * c.inv_f_s + c.reeb) / (k * c.mu_sq * mu)
}

/// Closed-form mean curvature
/// `H = -((2m-2)(f_S+S f_SS)² + f_S (S² f_SSS + 3S f_SS + f_S)) / ((2m-1)(f_S+S f_SS)^{3/2} √S f_S)`.
pub fn mean_curvature(pot: &KahlerPotential, m: u32, r: f64) -> Result<f64> {
    check_m(m)?;
    check_radius(r)?;
    let c = coefficients(pot, r)?;
    Ok(r_times_h(&c, m) / r)
}

/// `R·H(R)` for `R ≥ 0`; at `R = 0` this is the limit value.
pub fn scaled_mean_curvature(pot: &KahlerPotential, m: u32, r: f64) -> Result<f64> {
    check_m(m)?;
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("radius R = {r}")));
    }
    let c = if r == 0.0 {
        let c = pot.radial(0.0)?;
        if !(c.mu_sq > 0.0) {
            return Err(Error::NotPositive {
                quantity: "g_S(0)",
                value: c.mu_sq,
                radius: 0.0,
            });
        }
        c
    } else {
        coefficients(pot, r)?
    };
    Ok(r_times_h(&c, m))
}

/// Closed-form `|A|² = ((2m-2) μ⁸ + f_S² N²) / (f_S² μ⁶ S)`, written with
/// `μ² = f_S + S f_SS`.
pub fn norm_a_squared(pot: &KahlerPotential, m: u32, r: f64) -> Result<f64> {
    check_m(m)?;
    check_radius(r)?;
    let c = coefficients(pot, r)?;
    Ok(norm_a_squared_from(&c, m))
}

fn norm_a_squared_from(c: &RadialCoefficients, m: u32) -> f64 {
    let mu4 = c.mu_sq * c.mu_sq;
    let mu6 = mu4 * c.mu_sq;
    let q = c.inv_f_s * c.inv_f_s;
    // Divide numerator and denominator by f_S² so S → 0 stays finite.
    ((2.0 * m as f64 - 2.0) * mu4 * mu4 * q + c.reeb * c.reeb) / (mu6 * c.s)
}

/// One sample of all curvature quantities at radius `r`.
pub fn sample(pot: &KahlerPotential, m: u32, r: f64) -> Result<CurvatureSample> {
    check_m(m)?;
    check_radius(r)?;
    let c = coefficients(pot, r)?;
    let (lambda_tan, lambda_last) = lambdas(&c, r);
    Ok(CurvatureSample {
        r,
        lambda_tan,
        lambda_last,
        h: r_times_h(&c, m) / r,
        a_sq: norm_a_squared_from(&c, m),
    })
}
