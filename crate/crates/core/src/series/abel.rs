//! Abel summation majorant: `|Σ a_n e^{-(u+ε)λ_n}|` against
//! `sup_{n≤N} |e^{-ελ_n} Σ_{k≤n} a_k|`.

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbelBound {
    pub lhs: f64,
    pub rhs: f64,
    /// `C(u) = 1 + 1/u²`.
    pub constant: f64,
    /// Best constant for this `λ`, `u`, `ε`; see [`abel_sharp_constant`].
    pub sharp_constant: f64,
    pub holds: bool,
}

impl AbelBound {
    /// `lhs / rhs`, or 0 when both vanish.
    pub fn ratio(&self) -> f64 {
        if self.rhs == 0.0 {
            if self.lhs == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.lhs / self.rhs
        }
    }
}

fn check(a_len: usize, lambda: &[f64], u: f64, eps: f64) -> Result<()> {
    if !(u > 0.0) || !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Abel majorant needs u > 0 and ε > 0, got u = {u}, ε = {eps}"
        )));
    }
    if a_len != lambda.len() {
        return Err(Error::InvalidParameter(format!(
            "{a_len} coefficients for {} frequencies",
            lambda.len()
        )));
    }
    Ok(())
}

/// Evaluates both sides and checks `lhs ≤ (1 + 1/u²)·rhs`.
pub fn abel_majorant(a: &[Complex64], lambda: &[f64], u: f64, eps: f64) -> Result<AbelBound> {
    check(a.len(), lambda, u, eps)?;
    let lhs = a
        .iter()
        .zip(lambda)
        .map(|(a, l)| a * (-(u + eps) * l).exp())
        .sum::<Complex64>()
        .norm();
    let mut partial = Complex64::new(0.0, 0.0);
    let mut rhs = 0.0f64;
    for (a, l) in a.iter().zip(lambda) {
        partial += a;
        rhs = rhs.max((-eps * l).exp() * partial.norm());
    }
    let constant = 1.0 + 1.0 / (u * u);
    Ok(AbelBound {
        lhs,
        rhs,
        constant,
        sharp_constant: abel_sharp_constant(lambda, u, eps)?,
        holds: lhs <= constant * rhs,
    })
}

/// `Σ_{n<N} e^{ελ_n}(w_n − w_{n+1}) + e^{ελ_N} w_N` with `w_n = e^{-(u+ε)λ_n}`,
/// the smallest `C` with `lhs ≤ C·rhs` for every coefficient vector of length `N`.
pub fn abel_sharp_constant(lambda: &[f64], u: f64, eps: f64) -> Result<f64> {
    check(lambda.len(), lambda, u, eps)?;
    let w = |l: f64| (-(u + eps) * l).exp();
    let mut total = 0.0;
    for (i, &l) in lambda.iter().enumerate() {
        let next = lambda.get(i + 1).map_or(0.0, |&m| w(m));
        total += (eps * l).exp() * (w(l) - next);
    }
    Ok(total)
}
