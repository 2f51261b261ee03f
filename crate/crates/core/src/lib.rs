//! Mean curvature flow of `U(m)`-invariant hyperspheres in radial Kähler
//! metrics on the blow-up of `C^m` at the origin.
//!
//! A potential is written `f = log S + g(S)` with `S = |z|²`; the user supplies
//! `g` as an expression in `S`. The crate checks when such an `f` extends across
//! the exceptional divisor, evaluates the principal curvatures of the spheres
//! `|z| = R`, integrates the radial flow `dR/dt = H(R)` to its collapse and
//! classifies the singularity.
//!
//! ```
//! use blowup_mcf::{flow, KahlerPotential};
//!
//! let burns = KahlerPotential::parse("S").unwrap();
//! let traj = flow::integrate(&burns, 2, 1.0, &flow::FlowOptions::default()).unwrap();
//! let report = flow::classify(&burns, 2, 1.0, &traj).unwrap();
//! assert!((report.t_sing_quadrature - (0.5 + 4f64.ln() / 3.0)).abs() < 1e-10);
//! ```

// Negated comparisons are deliberate: they reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod flow;
pub mod oracles;
pub mod potential;

pub use error::{Error, Result};
pub use potential::{Jet3, KahlerPotential, PotentialExpr};
