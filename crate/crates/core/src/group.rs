//! Finite-torus models `T^P` of λ-Dirichlet groups.
//!
//! A model carries a basis `b_1..b_P` and the integer rows `R_n` of a basis
//! decomposition. A point is a vector of angles `θ`, the character of `λ_n` is
//! `h_n(θ) = exp(i Σ_j R_{nj} θ_j)`, and the flow is `β(t) = (-t b_j)_j`, so that
//! `h_n(β(t)) = e^{-iλ_n t}`.

use std::f64::consts::TAU;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::BasisDecomposition;
use crate::series::DirichletPolynomial;

/// Samples per independently seeded block. Block `b` draws from
/// `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so results do not depend on
/// the number of worker threads.
pub const SAMPLE_BLOCK: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupModel {
    basis: Vec<f64>,
    /// `rows[n - 1]` is the row of frequency index `n`.
    rows: Vec<Vec<i64>>,
}

/// A point of the torus, angles in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterPoint {
    angles: Vec<f64>,
}

impl CharacterPoint {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter("non-finite angle".into()));
        }
        Ok(Self {
            angles: angles.into_iter().map(|a| a.rem_euclid(TAU)).collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self { angles: vec![0.0; dim] }
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    /// Group product: angles add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidModel(format!(
                "points of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Self::new(self.angles.iter().zip(&other.angles).map(|(a, b)| a + b).collect())
    }
}

/// Builds the torus model of a basis decomposition whose `i`-th row belongs to
/// frequency index `i + 1`.
pub fn build_model(decomp: &BasisDecomposition) -> Result<GroupModel> {
    GroupModel::new(decomp.basis().to_vec(), decomp.rows().to_vec())
}

impl GroupModel {
    pub fn new(basis: Vec<f64>, rows: Vec<Vec<i64>>) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::InvalidModel("empty basis".into()));
        }
        if basis.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidModel("non-finite basis element".into()));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != basis.len()) {
            return Err(Error::InvalidModel(format!(
                "row {} has length {}, basis has {}",
                i + 1,
                rows[i].len(),
                basis.len()
            )));
        }
        Ok(Self { basis, rows })
    }

    /// `λ = (log n)` with the log-prime basis; characters are completely
    /// multiplicative functions determined by their values at primes.
    pub fn ordinary(n_max: usize) -> Result<Self> {
        build_model(&BasisDecomposition::ordinary(n_max.max(2)))
    }

    /// `λ = (n - 1)` with basis `(1)`.
    pub fn linear(n_max: usize) -> Result<Self> {
        build_model(&BasisDecomposition::linear(n_max))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[f64] {
        &self.basis
    }

    /// Number of frequency indices covered.
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn covers(&self, n: usize) -> bool {
        n >= 1 && n <= self.rows.len()
    }

    pub fn row(&self, n: usize) -> Result<&[i64]> {
        if !self.covers(n) {
            return Err(Error::ModelMismatch(n));
        }
        Ok(&self.rows[n - 1])
    }

    /// `λ_n = Σ_j R_{nj} b_j`.
    pub fn frequency_value(&self, n: usize) -> Result<f64> {
        Ok(self.row(n)?.iter().zip(&self.basis).map(|(&r, &b)| r as f64 * b).sum())
    }

    pub fn identity(&self) -> CharacterPoint {
        CharacterPoint::identity(self.dim())
    }

    fn check_point(&self, point: &CharacterPoint) -> Result<()> {
        if point.dim() != self.dim() {
            return Err(Error::InvalidModel(format!(
                "point of dimension {} on a model of dimension {}",
                point.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `Σ_j R_{nj} θ_j`.
    pub fn phase(&self, n: usize, point: &CharacterPoint) -> Result<f64> {
        self.check_point(point)?;
        Ok(phase_of(self.row(n)?, &point.angles))
    }

    /// `h_{λ_n}(θ)`.
    pub fn character(&self, n: usize, point: &CharacterPoint) -> Result<Complex64> {
        Ok(Complex64::cis(self.phase(n, point)?))
    }

    /// `β(t)`.
    pub fn flow_point(&self, t: f64) -> CharacterPoint {
        CharacterPoint {
            angles: self.basis.iter().map(|b| (-t * b).rem_euclid(TAU)).collect(),
        }
    }

    /// `count` i.i.d. Haar (uniform angle) points, deterministic under `seed`.
    pub fn haar_sample(&self, count: usize, seed: u64) -> Result<Vec<CharacterPoint>> {
        if count == 0 {
            return Err(Error::InvalidParameter("sample count must be >= 1".into()));
        }
        Ok(par_haar_map(self.dim(), count, seed, |angles| CharacterPoint {
            angles: angles.to_vec(),
        }))
    }
}

fn phase_of(row: &[i64], angles: &[f64]) -> f64 {
    row.iter().zip(angles).map(|(&r, &a)| r as f64 * a).sum()
}

/// Applies `f` to `count` Haar points of `T^dim` in parallel, returning the
/// results in sample order. See [`SAMPLE_BLOCK`] for the seeding rule.
pub fn par_haar_map<T, F>(dim: usize, count: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[f64]) -> T + Sync,
{
    let blocks = count.div_ceil(SAMPLE_BLOCK);
    (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = block_rng(seed, b as u64);
            let len = SAMPLE_BLOCK.min(count - b * SAMPLE_BLOCK);
            let mut angles = vec![0.0; dim];
            (0..len)
                .map(|_| {
                    for a in angles.iter_mut() {
                        *a = rng.random::<f64>() * TAU;
                    }
                    f(&angles)
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn block_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

impl DirichletPolynomial {
    /// `f(θ) = Σ a_n h_{λ_n}(θ)`.
    pub fn eval_on_model(&self, model: &GroupModel, point: &CharacterPoint) -> Result<Complex64> {
        model.check_point(point)?;
        self.terms()
            .map(|(n, a)| Ok(a * Complex64::cis(phase_of(model.row(n)?, &point.angles))))
            .sum()
    }

    fn check_model(&self, model: &GroupModel) -> Result<Vec<(Vec<i64>, Complex64)>> {
        self.terms().map(|(n, a)| Ok((model.row(n)?.to_vec(), a))).collect()
    }
}

/// Closed form of `(1/2T) ∫_{-T}^{T} f(ω β(t)) dt`.
pub fn besicovitch_mean(
    f: &DirichletPolynomial,
    model: &GroupModel,
    omega: &CharacterPoint,
    t: f64,
) -> Result<Complex64> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("T must be > 0, got {t}")));
    }
    model.check_point(omega)?;
    f.terms()
        .map(|(n, a)| {
            let h = Complex64::cis(phase_of(model.row(n)?, &omega.angles));
            Ok(a * h * sinc(f.lambda(n) * t))
        })
        .sum()
}

/// `Σ_{λ_n > 0} |a_n| / (λ_n T)`.
pub fn besicovitch_error_bound(f: &DirichletPolynomial, t: f64) -> f64 {
    f.terms()
        .filter(|&(n, _)| f.lambda(n) > 0.0)
        .map(|(n, a)| a.norm() / (f.lambda(n) * t))
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum NormMethod {
    HaarMc {
        samples: usize,
    },
    /// `(1/2T) ∫_{-T}^{T} |f(β(t))|^p dt`; `step` is the quadrature panel width
    /// (and the grid spacing for `p = ∞`).
    FlowAverage {
        t_max: f64,
        step: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub p: f64,
    pub value: f64,
    /// Monte Carlo standard error (Haar sampling, finite `p`).
    pub std_error: Option<f64>,
    /// `true` when computed in closed form (flow average, even integer `p`).
    pub closed_form: bool,
    /// Points examined (samples or grid points); 0 for closed forms.
    pub points: usize,
    pub method: NormMethod,
}

/// Estimates `‖f‖_p` on the model. `p = f64::INFINITY` gives the maximum over
/// the sampled points, a lower estimate of the supremum.
pub fn lp_norm(
    f: &DirichletPolynomial,
    model: &GroupModel,
    p: f64,
    method: NormMethod,
    seed: u64,
) -> Result<NormEstimate> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let terms = f.check_model(model)?;
    match method {
        NormMethod::HaarMc { samples } => {
            if samples < 2 {
                return Err(Error::InvalidParameter(
                    "Haar Monte Carlo needs at least 2 samples".into(),
                ));
            }
            let moduli = par_haar_map(model.dim(), samples, seed, |angles| eval_rows(&terms, angles).norm());
            Ok(moments_to_norm(&moduli, p, method))
        }
        NormMethod::FlowAverage { t_max, step } => {
            if !(t_max > 0.0) || !(step > 0.0) || step > t_max {
                return Err(Error::InvalidParameter(format!(
                    "flow average needs 0 < step <= T, got T = {t_max}, step = {step}"
                )));
            }
            let lambdas: Vec<f64> = f.terms().map(|(n, _)| f.lambda(n)).collect();
            if p.is_finite() && p.fract() == 0.0 && (p as u64).is_multiple_of(2) && p <= 8.0 {
                let q = (p as u32) / 2;
                let power = polynomial_power(&terms, model.basis(), q);
                let mean = flow_mean_square(&power, t_max);
                return Ok(NormEstimate {
                    p,
                    value: mean.max(0.0).powf(1.0 / p),
                    std_error: None,
                    closed_form: true,
                    points: 0,
                    method,
                });
            }
            let coeffs: Vec<Complex64> = terms.iter().map(|(_, a)| *a).collect();
            let eval = |t: f64| -> f64 {
                coeffs
                    .iter()
                    .zip(&lambdas)
                    .map(|(a, l)| a * Complex64::cis(-l * t))
                    .sum::<Complex64>()
                    .norm()
            };
            let panels = (2.0 * t_max / step).ceil() as usize;
            let width = 2.0 * t_max / panels as f64;
            if p.is_infinite() {
                let max = (0..=panels)
                    .into_par_iter()
                    .map(|i| eval(-t_max + i as f64 * width))
                    .reduce(|| 0.0, f64::max);
                return Ok(NormEstimate {
                    p,
                    value: max,
                    std_error: None,
                    closed_form: false,
                    points: panels + 1,
                    method,
                });
            }
            let integral: f64 = (0..panels)
                .into_par_iter()
                .map(|i| {
                    let a = -t_max + i as f64 * width;
                    crate::kernels::gauss_legendre(|t| eval(t).powf(p), a, a + width)
                })
                .sum();
            Ok(NormEstimate {
                p,
                value: (integral / (2.0 * t_max)).powf(1.0 / p),
                std_error: None,
                closed_form: false,
                points: panels * crate::kernels::GAUSS_LEGENDRE_POINTS,
                method,
            })
        }
    }
}

fn eval_rows(terms: &[(Vec<i64>, Complex64)], angles: &[f64]) -> Complex64 {
    terms
        .iter()
        .map(|(row, a)| a * Complex64::cis(phase_of(row, angles)))
        .sum()
}

/// Mean of `|f|^p` with its delta-method standard error on `‖f‖_p`.
pub fn moments_to_norm(moduli: &[f64], p: f64, method: NormMethod) -> NormEstimate {
    let n = moduli.len();
    if p.is_infinite() {
        return NormEstimate {
            p,
            value: moduli.iter().copied().fold(0.0, f64::max),
            std_error: None,
            closed_form: false,
            points: n,
            method,
        };
    }
    let powered: Vec<f64> = moduli.iter().map(|m| m.powf(p)).collect();
    let mean = powered.iter().sum::<f64>() / n as f64;
    let var = powered.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let se_mean = (var / n as f64).sqrt();
    let value = mean.powf(1.0 / p);
    let std_error = if mean > 0.0 { se_mean * value / (p * mean) } else { 0.0 };
    NormEstimate {
        p,
        value,
        std_error: Some(std_error),
        closed_form: false,
        points: n,
        method,
    }
}

/// `f^q` with terms grouped by their exact integer row, each carrying its
/// frequency `Σ_j R_j b_j`.
fn polynomial_power(terms: &[(Vec<i64>, Complex64)], basis: &[f64], q: u32) -> Vec<(f64, Complex64)> {
    use std::collections::BTreeMap;
    let mut acc: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
    acc.insert(vec![0; basis.len()], Complex64::new(1.0, 0.0));
    for _ in 0..q {
        let mut next: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for (row, c) in &acc {
            for (r, a) in terms {
                let key: Vec<i64> = row.iter().zip(r).map(|(x, y)| x + y).collect();
                *next.entry(key).or_default() += c * a;
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(row, c)| {
            let l = row.iter().zip(basis).map(|(&r, &b)| r as f64 * b).sum();
            (l, c)
        })
        .collect()
}

/// `(1/2T) ∫_{-T}^{T} |Σ c_k e^{-iμ_k t}|² dt = Σ_{k,l} c_k c̄_l sinc((μ_k − μ_l) T)`.
fn flow_mean_square(terms: &[(f64, Complex64)], t: f64) -> f64 {
    let mut total = 0.0;
    for (i, (mi, ci)) in terms.iter().enumerate() {
        total += ci.norm_sqr();
        for (mj, cj) in &terms[..i] {
            total += 2.0 * (ci * cj.conj()).re * sinc((mi - mj) * t);
        }
    }
    total
}
