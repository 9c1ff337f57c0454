//! Poisson kernel of the right half plane, Perron-type integrals and the
//! decay estimates behind the norm bound of the Poisson–Perron operator.
//!
//! Closed forms are the primary API. Quadrature routines exist as oracles and
//! always report `quadrature error + analytic tail bound`.

mod decay;
mod perron;
mod quadrature;

pub use decay::{
    decay_bound_check, decay_inner_integral, decay_lower_bound, decay_outer_check, monotonicity_check, DecayBranch,
    DecayCheck, MonotoneFunction, MonotonicityReport, OuterDecayReport, OuterTruncation,
};
pub use perron::{
    perron_closed_form, perron_line_integral, perron_transform, perron_transform_quadrature, LineIntegral,
};
pub use quadrature::{
    adaptive, gauss_legendre, geometric_breaks, gk15, integrate_breaks, integrate_panels, QuadResult,
    GAUSS_LEGENDRE_POINTS,
};

use std::f64::consts::PI;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Half-width of the integration window; `None` picks it from the tail bound.
    pub truncation: Option<f64>,
    /// Absolute tolerance on `quadrature error + tail bound`.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            truncation: None,
            tolerance: 1e-6,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            truncation: None,
            tolerance,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerance must be > 0, got {}",
                self.tolerance
            )));
        }
        if let Some(t) = self.truncation {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::InvalidParameter(format!("truncation must be > 0, got {t}")));
            }
        }
        Ok(())
    }
}

/// A quadrature estimate with its error accounting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: Complex64,
    pub quadrature_error: f64,
    pub tail_bound: f64,
    pub truncation: f64,
}

impl OracleResult {
    pub fn error_bound(&self) -> f64 {
        self.quadrature_error + self.tail_bound
    }
}

/// Largest window tried when searching for a truncation that meets the tail budget.
pub(crate) const MAX_TRUNCATION: f64 = 1e8;

pub(crate) fn check_depth(u: f64) -> Result<()> {
    if !(u > 0.0) || !u.is_finite() {
        return Err(Error::InvalidParameter(format!("u must be > 0, got {u}")));
    }
    Ok(())
}

/// `P_u(t) = u / (π (u² + t²))`.
pub fn poisson_eval(u: f64, t: f64) -> Result<f64> {
    check_depth(u)?;
    Ok(poisson(u, t))
}

pub(crate) fn poisson(u: f64, t: f64) -> f64 {
    u / (PI * (u * u + t * t))
}

/// `∫_{-T}^{T} P_u` by quadrature, completed with the exact tail mass
/// `1 − (2/π) arctan(T/u)`.
pub fn poisson_mass(u: f64, spec: QuadratureSpec) -> Result<OracleResult> {
    check_depth(u)?;
    spec.validate()?;
    let t = spec.truncation.unwrap_or(1e3 * u);
    let f = |x: f64| Complex64::new(poisson(u, x), 0.0);
    let q = integrate_breaks(&f, &geometric_breaks(&[0.0], u, t), spec.tolerance);
    let tail = 1.0 - 2.0 / PI * (t / u).atan();
    Ok(OracleResult {
        value: q.value + tail,
        quadrature_error: q.error,
        tail_bound: 0.0,
        truncation: t,
    })
}

/// `(e^{-iλ·} * P_u)(t) = e^{-(u+it)λ}`.
pub fn char_poisson_convolve(lambda: f64, u: f64, t: f64) -> Result<Complex64> {
    check_depth(u)?;
    if !(lambda >= 0.0) {
        return Err(Error::InvalidFrequency(format!("λ = {lambda} must be >= 0")));
    }
    Ok((-Complex64::new(u, t) * lambda).exp())
}

/// Quadrature of `∫ e^{-iλ(t-y)} P_u(y) dy`.
///
/// For `λ > 0` each tail is bounded by `2P_u(Y)/λ` (integration by parts with a
/// decreasing kernel); for `λ = 0` the exact tail mass is added.
pub fn char_poisson_quadrature(lambda: f64, u: f64, t: f64, spec: QuadratureSpec) -> Result<OracleResult> {
    check_depth(u)?;
    spec.validate()?;
    if !(lambda >= 0.0) {
        return Err(Error::InvalidFrequency(format!("λ = {lambda} must be >= 0")));
    }
    let tail_at = |y: f64| {
        if lambda == 0.0 {
            0.0
        } else {
            4.0 * poisson(u, y) / lambda
        }
    };
    let y_max = match spec.truncation {
        Some(y) => y,
        None => {
            let mut y = 16.0 * u;
            while tail_at(y) > spec.tolerance / 2.0 && y < MAX_TRUNCATION {
                y *= 2.0;
            }
            y
        }
    };
    let tail = tail_at(y_max);
    let f = |y: f64| Complex64::cis(-lambda * (t - y)) * poisson(u, y);
    let width = (PI / (4.0 * lambda + 1.0)).min(u / 4.0);
    let q = integrate_panels(&f, -y_max, y_max, width, spec.tolerance / 2.0);
    let mut value = q.value;
    if lambda == 0.0 {
        value += 1.0 - 2.0 / PI * (y_max / u).atan();
    }
    let out = OracleResult {
        value,
        quadrature_error: q.error,
        tail_bound: tail,
        truncation: y_max,
    };
    if out.error_bound() > spec.tolerance {
        return Err(Error::AccuracyNotAchieved {
            estimate: out.value.re,
            error_bound: out.error_bound(),
            tolerance: spec.tolerance,
        });
    }
    Ok(out)
}
