//! Absolute monomial exponential families.
//!
//! An [`Amef`] of degree `l >= 1` has density `p(x) = exp(θ|x|^l − F(θ))` on
//! the whole real line, with natural parameter `θ < 0`. This is the maximum
//! entropy family for a constraint on the raw absolute moment `E[|X|^l]`:
//! degree 1 is the centered Laplacian family, degree 2 the centered Gaussian
//! family. Entropies are available in closed form in both the natural
//! coordinate `θ` and the dual expectation coordinate `η = E[|X|^l] =
//! −1/(lθ)`, and the two coordinate systems are Legendre conjugates of each
//! other.
//!
//! Parameters are stored in natural form only; `η` is derived on demand so
//! the two coordinates cannot drift apart.

use crate::error::{Error, Result};
use crate::special::log_gamma_raw;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

fn check_degree(degree: u32) -> Result<f64> {
    if degree < 1 {
        return Err(Error::Domain("degree must be at least 1"));
    }
    Ok(f64::from(degree))
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta >= 0.0 {
        return Err(Error::Domain(
            "natural parameter must be finite and negative",
        ));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::Domain(
            "expectation parameter must be finite and positive",
        ));
    }
    Ok(())
}

/// Constant part of the entropy in natural coordinates:
/// `log 2 + log Γ(1/l) − log l + 1/l`.
pub(crate) fn natural_entropy_constant(l: f64) -> f64 {
    LN_2 + log_gamma_raw(1.0 / l) - l.ln() + 1.0 / l
}

/// Constant part of the entropy in expectation coordinates:
/// `log 2 + log Γ(1/l) − log l + (1 + log l)/l`.
pub(crate) fn expectation_entropy_constant(l: f64) -> f64 {
    LN_2 + log_gamma_raw(1.0 / l) - l.ln() + (1.0 + l.ln()) / l
}

/// Entropy of the degree-`l` family member with expectation parameter `eta`,
/// i.e. the member matching the moment constraint `E[|X|^l] = eta`.
pub fn entropy_expectation(degree: u32, eta: f64) -> Result<f64> {
    let l = check_degree(degree)?;
    check_eta(eta)?;
    Ok(expectation_entropy_constant(l) + eta.ln() / l)
}

/// The expectation parameter below which the degree-`l` entropy goes
/// negative; equivalently the `η` at which the entropy is exactly zero.
pub fn negative_entropy_threshold(degree: u32) -> Result<f64> {
    let l = check_degree(degree)?;
    // Solve b_l + log(η)/l = 0 in log space.
    let log_eta = (l - 1.0) * l.ln() - 1.0 - l * (LN_2 + log_gamma_raw(1.0 / l));
    Ok(log_eta.exp())
}

/// A member of the absolute monomial exponential family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amef {
    degree: u32,
    theta: f64,
}

impl Amef {
    /// Family member of the given degree with natural parameter `theta < 0`.
    pub fn new(degree: u32, theta: f64) -> Result<Self> {
        check_degree(degree)?;
        check_theta(theta)?;
        Ok(Self { degree, theta })
    }

    /// Family member matching the moment constraint `E[|X|^degree] = eta`.
    pub fn from_expectation(degree: u32, eta: f64) -> Result<Self> {
        let l = check_degree(degree)?;
        check_eta(eta)?;
        Ok(Self {
            degree,
            theta: -1.0 / (l * eta),
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Expectation parameter `η = E[|X|^l] = −1/(lθ)`.
    pub fn eta(&self) -> f64 {
        -1.0 / (f64::from(self.degree) * self.theta)
    }

    fn l(&self) -> f64 {
        f64::from(self.degree)
    }

    /// Log-normalizer `F(θ) = log 2 + log Γ(1/l) − log l − log(−θ)/l`.
    pub fn log_normalizer(&self) -> f64 {
        let l = self.l();
        LN_2 + log_gamma_raw(1.0 / l) - l.ln() - (-self.theta).ln() / l
    }

    /// Log-normalizer of the same member restricted to `[0, ∞)`.
    pub fn half_support_log_normalizer(&self) -> f64 {
        self.log_normalizer() - LN_2
    }

    /// Differential entropy, `a_l − log(−θ)/l`.
    ///
    /// Satisfies `entropy() = log_normalizer() + 1/l` and agrees with
    /// [`entropy_expectation`] evaluated at `eta()`.
    pub fn entropy(&self) -> f64 {
        let l = self.l();
        natural_entropy_constant(l) - (-self.theta).ln() / l
    }

    /// Log-density at `x`: `θ|x|^l − F(θ)`.
    pub fn log_density(&self, x: f64) -> f64 {
        self.theta * x.abs().powi(self.degree as i32) - self.log_normalizer()
    }

    /// The location-scale extension of this member.
    pub fn with_location_scale(self, location: f64, dispersion: f64) -> Result<LocationScaleAmef> {
        LocationScaleAmef::new(self.degree, self.theta, location, dispersion)
    }
}

/// A location-scale extension of an [`Amef`]: density
/// `p((x − μ)/σ) / σ` with location `μ` and dispersion `σ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocationScaleAmef {
    standard: Amef,
    location: f64,
    dispersion: f64,
}

impl LocationScaleAmef {
    pub fn new(degree: u32, theta: f64, location: f64, dispersion: f64) -> Result<Self> {
        if !location.is_finite() {
            return Err(Error::Domain("location must be finite"));
        }
        if !dispersion.is_finite() || dispersion <= 0.0 {
            return Err(Error::Domain("dispersion must be finite and positive"));
        }
        Ok(Self {
            standard: Amef::new(degree, theta)?,
            location,
            dispersion,
        })
    }

    /// Location-scale member in expectation coordinates.
    pub fn from_expectation(degree: u32, eta: f64, location: f64, dispersion: f64) -> Result<Self> {
        let base = Amef::from_expectation(degree, eta)?;
        Self::new(degree, base.theta(), location, dispersion)
    }

    pub fn standard(&self) -> &Amef {
        &self.standard
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn dispersion(&self) -> f64 {
        self.dispersion
    }

    /// Differential entropy: the standard member's entropy plus `log σ`,
    /// independent of the location parameter.
    pub fn entropy(&self) -> f64 {
        self.standard.entropy() + self.dispersion.ln()
    }

    /// Log-density at `x`.
    pub fn log_density(&self, x: f64) -> f64 {
        self.standard
            .log_density((x - self.location) / self.dispersion)
            - self.dispersion.ln()
    }
}
