//! Prefix estimate of `limsup_N log(sup_t |Σ_{n≤N} a_n e^{-itλ_n}|) / λ_N`.
//!
//! The supremum over `t ∈ ℝ` is approximated from below by a uniform grid on
//! `[-T, T]` (always containing `t = 0`) with local refinement around the best
//! grid points, and optionally by the maximum over Haar samples of a torus
//! model. Both lower estimates are reported; the larger one is used.

use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{par_haar_map, GroupModel};

/// Points per zoom level of the local refinement.
const REFINE_POINTS: usize = 33;
const REFINE_LEVELS: usize = 3;

#[derive(Clone, Debug)]
pub struct TorusSup {
    pub model: GroupModel,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct SupEstimator {
    pub t_max: f64,
    /// Rounded up to an odd number so that `t = 0` is a node.
    pub grid_points: usize,
    /// Grid maxima refined per checkpoint.
    pub refine_top: usize,
    pub torus: Option<TorusSup>,
}

impl Default for SupEstimator {
    fn default() -> Self {
        Self {
            t_max: 200.0,
            grid_points: 4097,
            refine_top: 3,
            torus: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSup {
    pub n: usize,
    pub lambda_n: f64,
    pub grid_sup: f64,
    pub grid_argmax: f64,
    pub torus_sup: Option<f64>,
    /// `log(sup) / λ_N`; `None` when `λ_N = 0`.
    pub ratio: Option<f64>,
}

impl CheckpointSup {
    pub fn sup(&self) -> f64 {
        self.grid_sup.max(self.torus_sup.unwrap_or(0.0))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AbscissaEstimate {
    pub checkpoints: Vec<CheckpointSup>,
    /// Maximum ratio over the later half of the checkpoints with `λ_N > 0`.
    pub estimate: f64,
    /// The supremum did not grow over the later half of the checkpoints.
    pub no_growth: bool,
}

/// See the module docs. Checkpoints are `N = 1, 2, 4, ...` and `n_max`.
pub fn sigma_u_estimate(
    coeffs: &[Complex64],
    lambda: &[f64],
    n_max: usize,
    est: &SupEstimator,
) -> Result<AbscissaEstimate> {
    if n_max == 0 || n_max > coeffs.len() || n_max > lambda.len() {
        return Err(Error::InvalidParameter(format!(
            "n_max = {n_max} must be in 1..={}",
            coeffs.len().min(lambda.len())
        )));
    }
    if !(est.t_max > 0.0) || est.grid_points < 1 {
        return Err(Error::InvalidParameter(
            "sup grid needs T > 0 and at least one point".into(),
        ));
    }
    let coeffs = &coeffs[..n_max];
    let lambda = &lambda[..n_max];
    let marks: Vec<usize> = {
        let mut m: Vec<usize> = std::iter::successors(Some(1usize), |k| k.checked_mul(2))
            .take_while(|&k| k < n_max)
            .collect();
        m.push(n_max);
        m
    };
    if marks.iter().all(|&n| lambda[n - 1] == 0.0) {
        return Err(Error::UndefinedAbscissa);
    }

    let m = est.grid_points | 1;
    let half = (m - 1) / 2;
    let grid_t = |i: usize| {
        if half == 0 {
            0.0
        } else {
            est.t_max * (i as f64 - half as f64) / half as f64
        }
    };
    let prefix_moduli = |t: f64| -> Vec<f64> {
        let mut out = Vec::with_capacity(marks.len());
        let mut s = Complex64::new(0.0, 0.0);
        let mut next = 0;
        for (k, (a, l)) in coeffs.iter().zip(lambda).enumerate() {
            s += a * Complex64::cis(-t * l);
            if k + 1 == marks[next] {
                out.push(s.norm());
                next += 1;
            }
        }
        out
    };
    let prefix_modulus = |t: f64, n: usize| -> f64 {
        coeffs[..n]
            .iter()
            .zip(lambda)
            .map(|(a, l)| a * Complex64::cis(-t * l))
            .sum::<Complex64>()
            .norm()
    };

    let grid: Vec<Vec<f64>> = (0..m).into_par_iter().map(|i| prefix_moduli(grid_t(i))).collect();
    let spacing = if half == 0 { est.t_max } else { est.t_max / half as f64 };

    let torus: Option<Vec<f64>> = match &est.torus {
        Some(ts) => {
            let terms: Vec<(Vec<i64>, Complex64)> = (1..=n_max)
                .map(|n| Ok((ts.model.row(n)?.to_vec(), coeffs[n - 1])))
                .collect::<Result<_>>()?;
            let per_sample = par_haar_map(ts.model.dim(), ts.samples.max(1), ts.seed, |angles| {
                let mut out = Vec::with_capacity(marks.len());
                let mut s = Complex64::new(0.0, 0.0);
                let mut next = 0;
                for (k, (row, a)) in terms.iter().enumerate() {
                    let phase: f64 = row.iter().zip(angles).map(|(&r, &x)| r as f64 * x).sum();
                    s += a * Complex64::cis(phase);
                    if k + 1 == marks[next] {
                        out.push(s.norm());
                        next += 1;
                    }
                }
                out
            });
            Some(
                (0..marks.len())
                    .map(|j| per_sample.iter().map(|v| v[j]).fold(0.0, f64::max))
                    .collect(),
            )
        }
        None => None,
    };

    let checkpoints: Vec<CheckpointSup> = marks
        .par_iter()
        .enumerate()
        .map(|(j, &n)| {
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| grid[b][j].total_cmp(&grid[a][j]));
            let mut best = grid[order[0]][j];
            let mut best_t = grid_t(order[0]);
            for &i in order.iter().take(est.refine_top) {
                let mut centre = grid_t(i);
                let mut radius = spacing;
                for _ in 0..REFINE_LEVELS {
                    let mut local_best = (f64::NEG_INFINITY, centre);
                    for k in 0..REFINE_POINTS {
                        let t = centre - radius + 2.0 * radius * k as f64 / (REFINE_POINTS - 1) as f64;
                        let v = prefix_modulus(t, n);
                        if v > local_best.0 {
                            local_best = (v, t);
                        }
                    }
                    if local_best.0 > best {
                        best = local_best.0;
                        best_t = local_best.1;
                    }
                    centre = local_best.1;
                    radius /= (REFINE_POINTS - 1) as f64 / 4.0;
                }
            }
            let torus_sup = torus.as_ref().map(|t| t[j]);
            let lambda_n = lambda[n - 1];
            let sup = best.max(torus_sup.unwrap_or(0.0));
            CheckpointSup {
                n,
                lambda_n,
                grid_sup: best,
                grid_argmax: best_t,
                torus_sup,
                ratio: (lambda_n > 0.0).then(|| sup.ln() / lambda_n),
            }
        })
        .collect();

    let usable: Vec<&CheckpointSup> = checkpoints.iter().filter(|c| c.ratio.is_some()).collect();
    let later = &usable[usable.len() / 2..];
    let estimate = later.iter().filter_map(|c| c.ratio).fold(f64::NEG_INFINITY, f64::max);
    let first_sup = later.first().map_or(0.0, |c| c.sup());
    let no_growth = later.len() > 1 && later.iter().all(|c| c.sup() <= first_sup * (1.0 + 1e-12));
    Ok(AbscissaEstimate {
        checkpoints,
        estimate,
        no_growth,
    })
}
