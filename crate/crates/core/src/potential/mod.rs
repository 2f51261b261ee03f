//! Radial Kähler potentials `f(S) = log S + g(S)` and their jets.

mod jet;
mod parse;

use std::fmt;
use std::str::FromStr;

pub use jet::Jet3;
pub use parse::{BinOp, Expr, Func};

use crate::error::{Error, Result};

/// A parsed radial function `g(S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialExpr {
    root: Expr,
}

impl PotentialExpr {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self {
            root: parse::parse(text)?,
        })
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// True for the Burns potential `g = S`.
    pub fn is_identity(&self) -> bool {
        self.root == Expr::Var
    }

    /// Plain floating-point evaluation, independent of the jet machinery.
    pub fn eval(&self, s: f64) -> Result<f64> {
        let v = eval_plain(&self.root, s)?;
        if !v.is_finite() {
            return Err(Error::Overflow(format!("g({s}) = {v}")));
        }
        Ok(v)
    }

    /// Value and first three derivatives of `g` at `s`; `s = 0` is allowed.
    pub fn g_jet(&self, s: f64) -> Result<Jet3> {
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::Domain(format!("g evaluated at S = {s}")));
        }
        let j = eval_jet(&self.root, Jet3::variable(s))?;
        if !j.is_finite() {
            return Err(Error::Overflow(format!("jet of g at S = {s}: {j:?}")));
        }
        Ok(j)
    }

    /// Jet of `f = log S + g`; needs `s > 0`.
    pub fn f_jet(&self, s: f64) -> Result<Jet3> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::Domain(format!("f = log S + g needs S > 0, got {s}")));
        }
        let g = self.g_jet(s)?;
        let r = 1.0 / s;
        Ok(Jet3::new(
            s.ln() + g.v0,
            r + g.v1,
            -r * r + g.v2,
            2.0 * r * r * r + g.v3,
        ))
    }
}

impl FromStr for PotentialExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for PotentialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

fn eval_plain(e: &Expr, s: f64) -> Result<f64> {
    Ok(match e {
        Expr::Num(x) => *x,
        Expr::Var => s,
        Expr::Neg(a) => -eval_plain(a, s)?,
        Expr::Binary(op, a, b) => {
            let (x, y) = (eval_plain(a, s)?, eval_plain(b, s)?);
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(Error::Domain("division by zero".into()));
                    }
                    x / y
                }
                BinOp::Pow => {
                    if x < 0.0 && y.fract() != 0.0 {
                        return Err(Error::Domain(format!(
                            "real exponent {y} on negative base {x}"
                        )));
                    }
                    if x == 0.0 && y < 0.0 {
                        return Err(Error::Domain(format!("zero raised to negative power {y}")));
                    }
                    x.powf(y)
                }
            }
        }
        Expr::Call(func, a) => {
            let x = eval_plain(a, s)?;
            match func {
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(Error::Domain(format!("log of non-positive argument {x}")));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(Error::Domain(format!("sqrt of negative argument {x}")));
                    }
                    x.sqrt()
                }
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
            }
        }
    })
}

fn eval_jet(e: &Expr, s: Jet3) -> Result<Jet3> {
    Ok(match e {
        Expr::Num(x) => Jet3::constant(*x),
        Expr::Var => s,
        Expr::Neg(a) => -eval_jet(a, s)?,
        Expr::Binary(op, a, b) => {
            let (x, y) = (eval_jet(a, s)?, eval_jet(b, s)?);
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => x * y.recip()?,
                BinOp::Pow => x.pow(y)?,
            }
        }
        Expr::Call(func, a) => {
            let x = eval_jet(a, s)?;
            match func {
                Func::Exp => x.exp(),
                Func::Log => x.ln()?,
                Func::Sqrt => x.sqrt()?,
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
            }
        }
    })
}

/// Radial coefficients of the metric `√-1 ∂∂̄ f(S)` at one value of `S`.
///
/// `mu_sq = f_S + S f_SS` and `reeb = f_S + 3 S f_SS + S² f_SSS`. For
/// `f = log S + g` the `1/S` terms cancel exactly in both, so they are formed
/// from g-jets, which keeps them accurate as `S → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialCoefficients {
    pub s: f64,
    pub f_s: f64,
    /// `1 / f_S`, finite (zero) at `S = 0`.
    pub inv_f_s: f64,
    pub mu_sq: f64,
    pub reeb: f64,
}

/// The ambient Kähler potential.
#[derive(Debug, Clone, PartialEq)]
pub enum KahlerPotential {
    /// `f = log S + g(S)`: the class that extends across the exceptional divisor.
    Blowup(PotentialExpr),
    /// `f = S`: the Euclidean metric.
    Flat,
}

impl KahlerPotential {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self::Blowup(PotentialExpr::parse(text)?))
    }

    /// Burns metric `f = log S + S`.
    pub fn burns() -> Self {
        Self::Blowup(PotentialExpr { root: Expr::Var })
    }

    pub fn g(&self) -> Option<&PotentialExpr> {
        match self {
            Self::Blowup(g) => Some(g),
            Self::Flat => None,
        }
    }

    pub fn is_burns(&self) -> bool {
        matches!(self, Self::Blowup(g) if g.is_identity())
    }

    pub fn f_jet(&self, s: f64) -> Result<Jet3> {
        match self {
            Self::Blowup(g) => g.f_jet(s),
            Self::Flat => Ok(Jet3::variable(s)),
        }
    }

    /// Plain value of `f`.
    pub fn f_value(&self, s: f64) -> Result<f64> {
        match self {
            Self::Blowup(g) => {
                if !(s > 0.0) {
                    return Err(Error::Domain(format!("f = log S + g needs S > 0, got {s}")));
                }
                Ok(s.ln() + g.eval(s)?)
            }
            Self::Flat => Ok(s),
        }
    }

    /// Radial coefficients at `s ≥ 0` (`s = 0` only for [`Self::Blowup`]).
    pub fn radial(&self, s: f64) -> Result<RadialCoefficients> {
        match self {
            Self::Blowup(g) => {
                let j = g.g_jet(s)?;
                let mu_sq = j.v1 + s * j.v2;
                let reeb = j.v1 + 3.0 * s * j.v2 + s * s * j.v3;
                let (f_s, inv_f_s) = if s == 0.0 {
                    (f64::INFINITY, 0.0)
                } else {
                    (1.0 / s + j.v1, s / (1.0 + s * j.v1))
                };
                Ok(RadialCoefficients {
                    s,
                    f_s,
                    inv_f_s,
                    mu_sq,
                    reeb,
                })
            }
            Self::Flat => {
                if !(s >= 0.0) {
                    return Err(Error::Domain(format!("S = {s}")));
                }
                Ok(RadialCoefficients {
                    s,
                    f_s: 1.0,
                    inv_f_s: 1.0,
                    mu_sq: 1.0,
                    reeb: 1.0,
                })
            }
        }
    }

    /// `g_S(0)`, the extension coefficient along the exceptional divisor.
    pub fn g_s_at_zero(&self) -> Result<f64> {
        match self {
            Self::Blowup(g) => Ok(g.g_jet(0.0)?.v1),
            Self::Flat => Err(Error::InvalidPotential(
                "the flat metric has no log S + g decomposition".into(),
            )),
        }
    }
}

impl fmt::Display for KahlerPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Blowup(g) => write!(f, "log S + {g}"),
            Self::Flat => f.write_str("S"),
        }
    }
}

impl From<PotentialExpr> for KahlerPotential {
    fn from(g: PotentialExpr) -> Self {
        Self::Blowup(g)
    }
}

pub fn parse_potential(text: &str) -> Result<PotentialExpr> {
    PotentialExpr::parse(text)
}

pub fn eval_g_jet(expr: &PotentialExpr, s: f64) -> Result<Jet3> {
    expr.g_jet(s)
}

pub fn eval_f_jet(expr: &PotentialExpr, s: f64) -> Result<Jet3> {
    expr.f_jet(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str) -> PotentialExpr {
        PotentialExpr::parse(text).unwrap()
    }

    fn close(a: Jet3, b: [f64; 4], tol: f64) {
        for (x, y) in a.to_array().iter().zip(b) {
            assert!((x - y).abs() <= tol * (1.0 + y.abs()), "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn g_jet_examples() {
        close(g("S").g_jet(2.0).unwrap(), [2.0, 1.0, 0.0, 0.0], 0.0);
        close(g("S^2").g_jet(1.5).unwrap(), [2.25, 3.0, 2.0, 0.0], 0.0);
        close(g("exp(S)").g_jet(0.0).unwrap(), [1.0, 1.0, 1.0, 1.0], 0.0);
    }

    #[test]
    fn f_jet_examples() {
        close(g("S").f_jet(1.0).unwrap(), [1.0, 2.0, -1.0, 2.0], 0.0);
        close(
            g("0").f_jet(4.0).unwrap(),
            [4f64.ln(), 0.25, -0.0625, 0.03125],
            1e-15,
        );
        close(
            g("S").f_jet(0.25).unwrap(),
            [0.25f64.ln() + 0.25, 5.0, -16.0, 128.0],
            1e-15,
        );
    }

    #[test]
    fn f_jet_first_derivative_is_same_arithmetic() {
        let e = g("log(1+S) + S*exp(-S)");
        for s in [0.01, 0.3, 2.0, 9.5] {
            assert_eq!(e.f_jet(s).unwrap().v1, 1.0 / s + e.g_jet(s).unwrap().v1);
        }
    }

    #[test]
    fn f_is_singular_at_origin() {
        assert!(matches!(g("S").f_jet(0.0), Err(Error::Domain(_))));
        assert!(g("S").g_jet(0.0).is_ok());
        assert!(matches!(g("S").g_jet(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn domain_errors_surface() {
        assert!(matches!(g("log(S - 1)").g_jet(0.5), Err(Error::Domain(_))));
        assert!(matches!(g("(S-1)^0.5").g_jet(0.5), Err(Error::Domain(_))));
        assert!(matches!(g("1/(S-1)").eval(1.0), Err(Error::Domain(_))));
        assert!(matches!(g("exp(exp(S))").g_jet(10.0), Err(Error::Overflow(_))));
    }

    #[test]
    fn radial_coefficients_match_f_jets() {
        let p = KahlerPotential::parse("log(1+S) + S + 0.1*S^2").unwrap();
        for s in [0.05, 0.5, 1.0, 4.0] {
            let r = p.radial(s).unwrap();
            let f = p.f_jet(s).unwrap();
            let mu_sq = f.v1 + s * f.v2;
            let reeb = f.v1 + 3.0 * s * f.v2 + s * s * f.v3;
            assert!((r.mu_sq - mu_sq).abs() < 1e-12 * (1.0 + mu_sq.abs()));
            assert!((r.reeb - reeb).abs() < 1e-12 * (1.0 + reeb.abs()));
            assert!((r.f_s * r.inv_f_s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn burns_radial_coefficients_at_origin() {
        let r = KahlerPotential::burns().radial(0.0).unwrap();
        assert_eq!((r.mu_sq, r.reeb, r.inv_f_s), (1.0, 1.0, 0.0));
    }
}
