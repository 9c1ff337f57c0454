//! Perron's formula `(Γ(k+1)/2πi) ∫_{α-i∞}^{α+i∞} e^{ys} s^{-1-k} ds = y^k·[y ≥ 0]`
//! and the Poisson–Perron transform of a Dirichlet polynomial.

use std::f64::consts::PI;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::{check_depth, integrate_panels, OracleResult, QuadratureSpec, MAX_TRUNCATION};
use crate::error::{Error, Result};
use crate::series::DirichletPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineIntegral {
    /// Real part of the quadrature estimate.
    pub estimate: f64,
    /// Imaginary part, which vanishes in exact arithmetic.
    pub imaginary: f64,
    pub closed_form: f64,
    pub quadrature_error: f64,
    pub tail_bound: f64,
    pub truncation: f64,
}

/// `y^k` for `y ≥ 0`, else 0.
pub fn perron_closed_form(y: f64, k: f64) -> f64 {
    if y >= 0.0 {
        y.powf(k)
    } else {
        0.0
    }
}

/// `∫_{|t|>T} (c+it)^{-1-k} dt = ((c+iT)^{-k} − (c−iT)^{-k}) / (ik)`.
fn exact_tail(c: f64, k: f64, t: f64) -> Complex64 {
    (Complex64::new(c, t).powf(-k) - Complex64::new(c, -t).powf(-k)) / Complex64::new(0.0, k)
}

/// Bound on `|∫_{|t|>T} e^{iyt} (c+it)^{-1-k} dt|` for `y ≠ 0`: integrating by
/// parts once gives `2T^{-1-k}/|y|` per side.
fn oscillatory_tail(y: f64, k: f64, t: f64) -> f64 {
    4.0 * t.powf(-1.0 - k) / y.abs()
}

/// Quadrature of the Perron line integral along `Re s = α`, `s = α + it`.
///
/// The window `[-T, T]` is doubled until the tail bound is below half the
/// tolerance; for `y = 0` the tail is added exactly instead.
pub fn perron_line_integral(y: f64, k: f64, alpha: f64, spec: QuadratureSpec) -> Result<LineIntegral> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("k must be > 0, got {k}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("α must be > 0, got {alpha}")));
    }
    spec.validate()?;
    let scale = gamma(k + 1.0) / (2.0 * PI);
    let weight = scale * (y * alpha).exp();
    let tail_at = |t: f64| {
        if y == 0.0 {
            0.0
        } else {
            weight * oscillatory_tail(y, k, t)
        }
    };
    let t_max = pick_truncation(spec, tail_at)?;
    let f = |t: f64| Complex64::cis(y * t) * Complex64::new(alpha, t).powf(-1.0 - k);
    let width = (PI / (4.0 * y.abs() + 1.0)).min(alpha / 4.0);
    let q = integrate_panels(&f, -t_max, t_max, width, spec.tolerance / (2.0 * weight));
    let mut value = q.value;
    if y == 0.0 {
        value += exact_tail(alpha, k, t_max);
    }
    let value = value * weight;
    let out = LineIntegral {
        estimate: value.re,
        imaginary: value.im,
        closed_form: perron_closed_form(y, k),
        quadrature_error: q.error * weight,
        tail_bound: tail_at(t_max),
        truncation: t_max,
    };
    let bound = out.quadrature_error + out.tail_bound;
    if bound > spec.tolerance {
        return Err(Error::AccuracyNotAchieved {
            estimate: out.estimate,
            error_bound: bound,
            tolerance: spec.tolerance,
        });
    }
    Ok(out)
}

fn pick_truncation(spec: QuadratureSpec, tail_at: impl Fn(f64) -> f64) -> Result<f64> {
    if let Some(t) = spec.truncation {
        return Ok(t);
    }
    let mut t = 16.0;
    while tail_at(t) > spec.tolerance / 2.0 {
        t *= 2.0;
        if t > MAX_TRUNCATION {
            return Err(Error::AccuracyNotAchieved {
                estimate: f64::NAN,
                error_bound: tail_at(t),
                tolerance: spec.tolerance,
            });
        }
    }
    Ok(t)
}

fn check_transform_args(u: f64, k: f64, x: f64) -> Result<()> {
    check_depth(u)?;
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("k must be >= 0, got {k}")));
    }
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("x must be finite, got {x}")));
    }
    Ok(())
}

/// `e^{-u|x|} Σ_{λ_n < x} a_n (x − λ_n)^k`. Pass a vertical limit `D^ω` to
/// evaluate the transform of `f_ω`.
pub fn perron_transform(d: &DirichletPolynomial, u: f64, k: f64, x: f64) -> Result<Complex64> {
    check_transform_args(u, k, x)?;
    let sum: Complex64 = d
        .terms()
        .filter(|&(n, _)| d.lambda(n) < x)
        .map(|(n, a)| a * (x - d.lambda(n)).powf(k))
        .sum();
    Ok(sum * (-u * x.abs()).exp())
}

/// Oracle for [`perron_transform`]: quadrature of
/// `(Γ(k+1)/2π) ∫ (g * P_u)(t) (u+it)^{-1-k} e^{ixt} dt` with
/// `(g * P_u)(t) = Σ a_n e^{-(u+it)λ_n}`.
pub fn perron_transform_quadrature(
    d: &DirichletPolynomial,
    u: f64,
    k: f64,
    x: f64,
    spec: QuadratureSpec,
) -> Result<OracleResult> {
    check_transform_args(u, k, x)?;
    spec.validate()?;
    // (shift y_n = x − λ_n, damped coefficient a_n e^{-uλ_n})
    let terms: Vec<(f64, Complex64)> = d
        .terms()
        .map(|(n, a)| (x - d.lambda(n), a * (-u * d.lambda(n)).exp()))
        .collect();
    if k == 0.0 && terms.iter().any(|&(y, _)| y == 0.0) {
        return Err(Error::InvalidParameter(
            "k = 0 with x equal to a frequency: the integral does not converge absolutely".into(),
        ));
    }
    let scale = gamma(k + 1.0) / (2.0 * PI);
    let tail_at = |t: f64| -> f64 {
        terms
            .iter()
            .filter(|(y, _)| *y != 0.0)
            .map(|(y, c)| scale * c.norm() * oscillatory_tail(*y, k, t))
            .sum()
    };
    let t_max = pick_truncation(spec, tail_at)?;
    let f = |t: f64| -> Complex64 {
        let denom = Complex64::new(u, t).powf(-1.0 - k);
        terms.iter().map(|(y, c)| c * Complex64::cis(y * t)).sum::<Complex64>() * denom
    };
    let fastest = terms.iter().map(|(y, _)| y.abs()).fold(0.0, f64::max);
    let width = (PI / (4.0 * fastest + 1.0)).min(u / 4.0);
    let q = integrate_panels(&f, -t_max, t_max, width, spec.tolerance / (2.0 * scale));
    let mut value = q.value;
    for (y, c) in &terms {
        if *y == 0.0 {
            value += c * exact_tail(u, k, t_max);
        }
    }
    let out = OracleResult {
        value: value * scale,
        quadrature_error: q.error * scale,
        tail_bound: tail_at(t_max),
        truncation: t_max,
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
