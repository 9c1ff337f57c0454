//! Decay of `y ↦ (∫ (P_u(t−y)/|u+it|)^{1+ε} dt)^{1/(1+ε)}` and the integral of
//! that function over `y`.
//!
//! Two bounds are checked: `4|y|^{-(1+ε/(1+ε))}` for `|y| > 4u`, and the
//! uniform Lyapunov bound `(1/u)^{1+ε/(1+ε)}`. The integral over `y` is
//! computed on growing windows and compared with its claimed bound
//! `8((1+ε)/ε) u^{-ε/(1+ε)}`, together with the rigorous lower estimate
//! `(2u)^{1/(1+ε)} / (2πu(|y|+2u))` for the integrand, whose integral grows
//! logarithmically.

use std::f64::consts::PI;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{adaptive, check_depth, geometric_breaks, integrate_breaks, poisson, OracleResult, QuadratureSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayBranch {
    /// `|y| > 4u`: `4|y|^{-(1+ε/(1+ε))}`.
    Far,
    /// `(1/u)^{1+ε/(1+ε)}`, valid for every `y`.
    Lyapunov,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    pub u: f64,
    pub eps: f64,
    pub y: f64,
    /// The inner integral itself.
    pub integral: f64,
    /// `integral^{1/(1+ε)}`.
    pub value: f64,
    /// Upper end of `value` allowing for quadrature and tail error.
    pub value_upper: f64,
    pub bound: f64,
    pub branch: DecayBranch,
    pub holds: bool,
}

fn check_params(u: f64, eps: f64) -> Result<()> {
    check_depth(u)?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("ε must be > 0, got {eps}")));
    }
    Ok(())
}

/// `∫ (P_u(t−y)/|u+it|)^{1+ε} dt`.
///
/// Beyond `|t| = T ≥ 2|y|` the integrand is at most `(4u/π)^{1+ε} |t|^{-3(1+ε)}`,
/// which gives the reported tail bound.
pub fn decay_inner_integral(u: f64, eps: f64, y: f64, spec: QuadratureSpec) -> Result<OracleResult> {
    check_params(u, eps)?;
    spec.validate()?;
    let p = 1.0 + eps;
    let decay = 3.0 * p - 1.0;
    let tail_at = |t: f64| 2.0 * (4.0 * u / PI).powf(p) * t.powf(-decay) / decay;
    let mut t_max = spec.truncation.unwrap_or(0.0).max(2.0 * y.abs()).max(16.0 * u);
    while tail_at(t_max) > spec.tolerance / 2.0 && t_max < super::MAX_TRUNCATION * (1.0 + y.abs()) {
        t_max *= 2.0;
    }
    let f = |t: f64| Complex64::new((poisson(u, t - y) / u.hypot(t)).powf(p), 0.0);
    let breaks = geometric_breaks(&[0.0, y], u, t_max);
    let q = integrate_breaks(&f, &breaks, spec.tolerance / 2.0);
    Ok(OracleResult {
        value: q.value,
        quadrature_error: q.error,
        tail_bound: tail_at(t_max),
        truncation: t_max,
    })
}

/// Compares the decay function at `y` with the applicable bound: the far
/// branch when `|y| > 4u`, the Lyapunov bound otherwise.
pub fn decay_bound_check(u: f64, eps: f64, y: f64, spec: QuadratureSpec) -> Result<DecayCheck> {
    let inner = decay_inner_integral(u, eps, y, spec)?;
    let p = 1.0 + eps;
    let integral = inner.value.re;
    let value = integral.max(0.0).powf(1.0 / p);
    let value_upper = (integral + inner.error_bound()).powf(1.0 / p);
    let exponent = 1.0 + eps / p;
    let (branch, bound) = if y.abs() > 4.0 * u {
        (DecayBranch::Far, 4.0 * y.abs().powf(-exponent))
    } else {
        (DecayBranch::Lyapunov, (1.0 / u).powf(exponent))
    };
    Ok(DecayCheck {
        u,
        eps,
        y,
        integral,
        value,
        value_upper,
        bound,
        branch,
        holds: value_upper <= bound,
    })
}

/// Rigorous pointwise lower bound for the decay function, from the window
/// `|t − y| ≤ u` where `P_u(t−y) ≥ 1/(2πu)` and `|u+it| ≤ |y| + 2u`.
pub fn decay_lower_bound(u: f64, eps: f64, y: f64) -> f64 {
    (2.0 * u).powf(1.0 / (1.0 + eps)) / (2.0 * PI * u * (y.abs() + 2.0 * u))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuterTruncation {
    /// Window half-width `Y`.
    pub y: f64,
    /// Quadrature of the decay function over `[-Y, Y]`.
    pub integral: f64,
    /// Closed-form integral of [`decay_lower_bound`] over `[-Y, Y]`.
    pub lower_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuterDecayReport {
    pub u: f64,
    pub eps: f64,
    /// `8((1+ε)/ε) u^{-ε/(1+ε)}`.
    pub bound: f64,
    /// `4u^{-ε/(1+ε)} + 8((1+ε)/ε)(4u)^{-ε/(1+ε)}`, the split estimate.
    pub split_bound: f64,
    pub truncations: Vec<OuterTruncation>,
    /// First window whose quadrature exceeds `bound`.
    pub exceeded_at: Option<f64>,
    /// Window beyond which even the lower bound exceeds `bound`.
    pub certified_exceeded_at: f64,
    pub holds: bool,
}

/// Integrates the decay function over `[-Y, Y]` for `Y = 4u·2^j` up to `y_max`.
pub fn decay_outer_check(u: f64, eps: f64, y_max: f64, spec: QuadratureSpec) -> Result<OuterDecayReport> {
    check_params(u, eps)?;
    spec.validate()?;
    if !(y_max > 4.0 * u) {
        return Err(Error::InvalidParameter(format!("y_max must exceed 4u, got {y_max}")));
    }
    let p = 1.0 + eps;
    let bound = 8.0 * (p / eps) * u.powf(-eps / p);
    let split_bound = 4.0 * u.powf(-eps / p) + 8.0 * (p / eps) * (4.0 * u).powf(-eps / p);
    let inner_spec = QuadratureSpec {
        truncation: None,
        tolerance: spec.tolerance * 1e-3,
    };
    let h = |y: f64| -> Complex64 {
        let v = decay_inner_integral(u, eps, y, inner_spec)
            .map(|r| r.value.re.max(0.0).powf(1.0 / p))
            .unwrap_or(f64::NAN);
        Complex64::new(v, 0.0)
    };
    let lower_integral = |y: f64| (2.0 * u).powf(1.0 / p) / (PI * u) * ((y + 2.0 * u) / (2.0 * u)).ln();

    let mut truncations = Vec::new();
    let central = adaptive(&h, -4.0 * u, 4.0 * u, spec.tolerance);
    let mut total = central.value.re;
    let mut lo = 4.0 * u;
    while lo < y_max {
        let hi = 2.0 * lo;
        let right = adaptive(&h, lo, hi, spec.tolerance);
        let left = adaptive(&h, -hi, -lo, spec.tolerance);
        total += right.value.re + left.value.re;
        truncations.push(OuterTruncation {
            y: hi,
            integral: total,
            lower_bound: lower_integral(hi),
        });
        lo = hi;
    }
    if truncations.iter().any(|t| t.integral.is_nan()) {
        return Err(Error::AccuracyNotAchieved {
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
            tolerance: spec.tolerance,
        });
    }
    let exceeded_at = truncations.iter().find(|t| t.integral > bound).map(|t| t.y);
    // lower_integral(Y) > bound  ⇔  Y > 2u (exp(bound πu / (2u)^{1/(1+ε)}) − 1)
    let certified_exceeded_at = 2.0 * u * ((bound * PI * u / (2.0 * u).powf(1.0 / p)).exp() - 1.0);
    Ok(OuterDecayReport {
        u,
        eps,
        bound,
        split_bound,
        holds: exceeded_at.is_none() && certified_exceeded_at.is_infinite(),
        truncations,
        exceeded_at,
        certified_exceeded_at,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonotoneFunction {
    /// `g(t) = u / (((tu)² + (2yt−1)²)(u + 1/t − y))` on `[0, 1/y]`, `y > 4u`.
    G,
    /// `h(t) = u / (((tu)² + 1)(u + y + 1/t))` on `[0, 1/|y|]`, `y < −4u`.
    H,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub function: MonotoneFunction,
    pub u: f64,
    pub y: f64,
    pub points: usize,
    pub increasing: bool,
    /// First grid point where the function decreased.
    pub first_violation: Option<f64>,
    pub max_value: f64,
    pub end_value: f64,
}

/// Checks on a uniform grid whether the auxiliary function for `y` (`g` when
/// `y > 4u`, `h` when `y < −4u`) is increasing. Both tend to 0 at `t = 0`.
pub fn monotonicity_check(u: f64, y: f64, points: usize) -> Result<MonotonicityReport> {
    check_depth(u)?;
    if points < 2 {
        return Err(Error::InvalidParameter("need at least 2 grid points".into()));
    }
    let function = if y > 4.0 * u {
        MonotoneFunction::G
    } else if y < -4.0 * u {
        MonotoneFunction::H
    } else {
        return Err(Error::InvalidParameter(format!("need |y| > 4u, got y = {y}, u = {u}")));
    };
    let f = |t: f64| -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        match function {
            MonotoneFunction::G => {
                let q = (t * u).powi(2) + (2.0 * y * t - 1.0).powi(2);
                u / (q * (u + 1.0 / t - y))
            }
            MonotoneFunction::H => u / (((t * u).powi(2) + 1.0) * (u + y + 1.0 / t)),
        }
    };
    let end = 1.0 / y.abs();
    let values: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let t = end * i as f64 / (points - 1) as f64;
            (t, f(t))
        })
        .collect();
    let first_violation = values.windows(2).find(|w| w[1].1 < w[0].1).map(|w| w[1].0);
    Ok(MonotonicityReport {
        function,
        u,
        y,
        points,
        increasing: first_violation.is_none(),
        first_violation,
        max_value: values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max),
        end_value: values.last().unwrap().1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tolerance(1e-10)
    }

    #[test]
    fn far_branch_example() {
        let c = decay_bound_check(1.0, 1.0, 5.0, spec()).unwrap();
        assert_eq!(c.branch, DecayBranch::Far);
        assert!((c.bound - 4.0 * 5f64.powf(-1.5)).abs() < 1e-15);
        assert!(c.holds, "{c:?}");
    }

    #[test]
    fn lyapunov_branch_example() {
        let c = decay_bound_check(2.0, 1.0, 0.0, spec()).unwrap();
        assert_eq!(c.branch, DecayBranch::Lyapunov);
        assert!((c.bound - 0.5f64.powf(1.5)).abs() < 1e-15);
        assert!(c.holds);
    }

    #[test]
    fn inner_integral_matches_closed_form_at_eps_one_far_out() {
        // For |y| ≫ u the integral is dominated by ∫ P_u² / y² = 1/(2πu y²).
        let (u, y) = (1.0, 1e4);
        let r = decay_inner_integral(u, 1.0, y, spec()).unwrap();
        let approx = 1.0 / (2.0 * PI * u * y * y);
        assert!((r.value.re / approx - 1.0).abs() < 1e-3, "{} vs {approx}", r.value.re);
    }

    #[test]
    fn decay_bound_fails_far_from_origin() {
        // value ≈ ‖P_u‖_{1+ε}/|y| decays like 1/|y|, slower than |y|^{-3/2}
        let c = decay_bound_check(1.0, 1.0, 1000.0, spec()).unwrap();
        assert_eq!(c.branch, DecayBranch::Far);
        assert!(!c.holds, "{c:?}");
        assert!(c.value >= decay_lower_bound(1.0, 1.0, 1000.0));
    }

    #[test]
    fn lower_bound_is_below_value() {
        for y in [-50.0, -3.0, 0.0, 2.0, 40.0, 900.0] {
            let c = decay_bound_check(0.5, 0.5, y, spec()).unwrap();
            assert!(c.value >= decay_lower_bound(0.5, 0.5, y));
        }
    }

    #[test]
    fn monotonicity_h_holds_g_fails() {
        for (u, y) in [(1.0, -5.0), (0.5, -3.0)] {
            let r = monotonicity_check(u, y, 1000).unwrap();
            assert_eq!(r.function, MonotoneFunction::H);
            assert!(r.increasing, "{r:?}");
        }
        for (u, y) in [(1.0, 5.0), (0.5, 3.0)] {
            let r = monotonicity_check(u, y, 1000).unwrap();
            assert_eq!(r.function, MonotoneFunction::G);
            assert!(!r.increasing);
            assert!(r.max_value > 1.0, "peak near t = 1/(2y): {r:?}");
        }
        assert!(monotonicity_check(1.0, 2.0, 1000).is_err());
    }
}
