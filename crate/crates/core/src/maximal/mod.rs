//! Maximal operators, the lattice machinery of the transference argument for
//! the Carleson maximal function, and Monte Carlo norm estimates.

mod carleson;
mod lattice;
mod operators;
mod weak;

pub use carleson::{
    carleson_maximal, carleson_transference_check, phi, ThresholdOrder, TorusPolynomial, TransferenceCheck,
};
pub use lattice::{
    bezout_pair, gcd, integer_det, mat_mul, mat_vec, rational_direction, transpose, unimodular_plan, IntMatrix,
    RationalDirection, UnimodularPlan,
};
pub use operators::{hl_flow, smax_u, tmax_weighted, HlGrid};
pub use weak::{weak_l1_norm, weak_l1_norm_exact, WEAK_GRID_POINTS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{lp_norm, moments_to_norm, par_haar_map, CharacterPoint, GroupModel, NormMethod};
use crate::series::DirichletPolynomial;

/// Batches used for the weak-L1 error bar.
const WEAK_BATCHES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "kebab-case")]
pub enum Exponent {
    Lp(f64),
    WeakL1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalEstimate {
    pub operator: String,
    pub exponent: Exponent,
    pub samples: usize,
    pub seed: u64,
    pub estimate: f64,
    /// Monte Carlo standard error. For the weak-L1 quasinorm: standard error of
    /// the mean over 20 equal batches.
    pub error_bar: f64,
}

/// Estimates the `exponent` norm of `ω ↦ eval(ω)` over Haar samples of `model`.
pub fn estimate_on_model<F>(
    operator: &str,
    model: &GroupModel,
    exponent: Exponent,
    samples: usize,
    seed: u64,
    eval: F,
) -> Result<MaximalEstimate>
where
    F: Fn(&CharacterPoint) -> Result<f64> + Sync,
{
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let values: Vec<f64> = par_haar_map(model.dim(), samples, seed, |angles| {
        CharacterPoint::new(angles.to_vec()).and_then(|w| eval(&w))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let (estimate, error_bar) = match exponent {
        Exponent::Lp(p) => {
            if p.is_nan() || p < 1.0 {
                return Err(Error::InvalidExponent(p));
            }
            let e = moments_to_norm(&values, p, NormMethod::HaarMc { samples });
            (e.value, e.std_error.unwrap_or(0.0))
        }
        Exponent::WeakL1 => {
            let estimate = weak_l1_norm(&values)?;
            let batches = WEAK_BATCHES.min(samples);
            let size = samples / batches;
            let per: Vec<f64> = (0..batches)
                .map(|b| weak_l1_norm(&values[b * size..(b + 1) * size]))
                .collect::<Result<_>>()?;
            let mean = per.iter().sum::<f64>() / batches as f64;
            let var = per.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (batches - 1).max(1) as f64;
            (estimate, (var / batches as f64).sqrt())
        }
    };
    Ok(MaximalEstimate {
        operator: operator.to_string(),
        exponent,
        samples,
        seed,
        estimate,
        error_bar,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialSumRatio {
    pub n: usize,
    pub k: f64,
    pub partial_sup: f64,
    pub full_sup: f64,
    /// `‖S_N D‖_∞ / ‖D‖_∞`.
    pub lhs: f64,
    /// `(1/k)(λ_{N+1}/(λ_{N+1} − λ_N))^k`.
    pub scale: f64,
    /// `lhs / scale`, the empirical constant.
    pub constant: f64,
}

/// Compares `‖S_N D‖_∞` with `‖D‖_∞`, both estimated by [`lp_norm`] at `p = ∞`
/// with `method`. `S_N D` keeps the terms of index at most `n`.
pub fn partial_sum_ratio(
    d: &DirichletPolynomial,
    n: usize,
    k: f64,
    model: &GroupModel,
    method: NormMethod,
    seed: u64,
) -> Result<PartialSumRatio> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::InvalidParameter(format!("k must lie in (0, 1], got {k}")));
    }
    let freq = d.frequency();
    let l = freq
        .value(n)
        .ok_or_else(|| Error::InvalidFrequency(format!("no λ_{n}")))?;
    let l_next = freq
        .value(n + 1)
        .ok_or_else(|| Error::InvalidFrequency(format!("frequency must supply λ_{}", n + 1)))?;
    let partial = DirichletPolynomial::from_terms(freq.clone(), d.terms().filter(|&(m, _)| m <= n))?;
    let full_sup = lp_norm(d, model, f64::INFINITY, method, seed)?.value;
    if full_sup == 0.0 {
        return Err(Error::InvalidParameter("‖D‖_∞ estimate is zero".into()));
    }
    let partial_sup = lp_norm(&partial, model, f64::INFINITY, method, seed)?.value;
    let lhs = partial_sup / full_sup;
    let scale = (l_next / (l_next - l)).powf(k) / k;
    Ok(PartialSumRatio {
        n,
        k,
        partial_sup,
        full_sup,
        lhs,
        scale,
        constant: lhs / scale,
    })
}
