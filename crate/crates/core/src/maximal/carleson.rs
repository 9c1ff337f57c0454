//! Carleson maximal function `M_x f(z) = sup_S |Σ_{<α,x> ≤ S} f̂(α) z^α|` of
//! polynomials on `T^N`, and its change of variables under `Φ_M(z)^α = z^{Mᵀα}`.

use num::complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::lattice::{mat_vec, transpose, unimodular_plan, IntMatrix};
use super::{Exponent, MaximalEstimate};
use crate::error::{Error, Result};
use crate::group::{block_rng, moments_to_norm, par_haar_map, NormMethod};

/// Trigonometric polynomial `Σ c_α z^α` on `T^N`, points given by angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusPolynomial {
    dim: usize,
    terms: Vec<(Vec<i64>, Complex64)>,
}

impl TorusPolynomial {
    pub fn new(dim: usize, terms: Vec<(Vec<i64>, Complex64)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("torus dimension must be >= 1".into()));
        }
        if let Some((a, _)) = terms.iter().find(|(a, _)| a.len() != dim) {
            return Err(Error::InvalidParameter(format!(
                "exponent {a:?} does not have dimension {dim}"
            )));
        }
        Ok(Self { dim, terms })
    }

    /// `terms` monomials with exponents uniform in `[-degree, degree]^dim` and
    /// standard complex Gaussian coefficients.
    pub fn random(dim: usize, terms: usize, degree: i64, seed: u64) -> Result<Self> {
        let mut rng = block_rng(seed, 0);
        let terms = (0..terms)
            .map(|_| {
                let alpha = (0..dim).map(|_| rng.random_range(-degree..=degree)).collect();
                let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                (alpha, c)
            })
            .collect();
        Self::new(dim, terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<i64>, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, angles: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, c)| c * Complex64::cis(dot_angles(a, angles)))
            .sum()
    }

    /// `f ∘ Φ_M`, whose spectrum is `{Mᵀα}`.
    pub fn substitute(&self, m: &[Vec<i64>]) -> Result<Self> {
        let mt = transpose(m);
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| Ok((mat_vec(&mt, a)?, *c)))
            .collect::<Result<_>>()?;
        Self::new(self.dim, terms)
    }
}

fn dot_angles(a: &[i64], angles: &[f64]) -> f64 {
    a.iter().zip(angles).map(|(&k, &t)| k as f64 * t).sum()
}

/// `Φ_M(θ) = Mθ`.
pub fn phi(m: &[Vec<i64>], angles: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot_angles(row, angles)).collect()
}

/// Terms grouped by threshold value, in increasing order.
#[derive(Clone, Debug)]
pub struct ThresholdOrder {
    groups: Vec<Vec<usize>>,
}

impl ThresholdOrder {
    fn from_keys<K: PartialOrd + Copy>(keys: Vec<K>) -> Self {
        let mut idx: Vec<usize> = (0..keys.len()).collect();
        idx.sort_by(|&a, &b| keys[a].partial_cmp(&keys[b]).expect("finite keys"));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in idx {
            match groups.last_mut() {
                Some(g) if keys[g[0]] == keys[i] => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        Self { groups }
    }

    /// Orders by `<α, x>` in floating point.
    pub fn real(f: &TorusPolynomial, x: &[f64]) -> Result<Self> {
        if x.len() != f.dim || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "direction must be finite and match the dimension".into(),
            ));
        }
        Ok(Self::from_keys(f.terms.iter().map(|(a, _)| dot_angles(a, x)).collect()))
    }

    /// Orders by the exact integer `<α, q>`.
    pub fn rational(f: &TorusPolynomial, q: &[i64]) -> Result<Self> {
        if q.len() != f.dim {
            return Err(Error::InvalidParameter("direction must match the dimension".into()));
        }
        let keys = f
            .terms
            .iter()
            .map(|(a, _)| a.iter().zip(q).map(|(&x, &y)| x as i128 * y as i128).sum::<i128>())
            .collect();
        Ok(Self::from_keys(keys))
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Largest prefix-sum modulus at `angles`.
    pub fn maximal(&self, f: &TorusPolynomial, angles: &[f64]) -> f64 {
        let mut s = Complex64::new(0.0, 0.0);
        let mut best: f64 = 0.0;
        for g in &self.groups {
            for &i in g {
                let (a, c) = &f.terms[i];
                s += c * Complex64::cis(dot_angles(a, angles));
            }
            best = best.max(s.norm());
        }
        best
    }
}

/// `M_x f(z)` by brute force; terms with equal `<α, x>` enter together.
pub fn carleson_maximal(f: &TorusPolynomial, x: &[f64], angles: &[f64]) -> Result<f64> {
    if angles.len() != f.dim {
        return Err(Error::InvalidParameter("point dimension mismatch".into()));
    }
    Ok(ThresholdOrder::real(f, x)?.maximal(f, angles))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferenceCheck {
    pub q: Vec<i64>,
    pub matrix: IntMatrix,
    /// `‖M_q f‖₂` from Haar samples `θ`.
    pub direct: MaximalEstimate,
    /// `‖M_q f‖₂` from the same samples mapped through `Φ_{Aᵀ}`, computed as
    /// the first-coordinate maximal function of `f ∘ Φ_{Aᵀ}`.
    pub substituted: MaximalEstimate,
    /// `‖f‖₂` from the direct samples.
    pub plain: MaximalEstimate,
    /// Samples where `M_q f < |f|` (beyond rounding), over both estimates.
    pub dominance_violations: usize,
    /// `|direct − substituted| ≤ 2·(error bar direct + error bar substituted)`.
    pub agree: bool,
}

/// Compares `‖M_q f‖₂` before and after the substitution `z ↦ Φ_{Aᵀ}(z)`,
/// where `A` is the unimodular plan of `q`. After substitution the spectrum is
/// `{Aα}` and `(Aα)₁ = <q, α>`, so `M_q` becomes the maximal partial sum in the
/// first variable.
pub fn carleson_transference_check(
    f: &TorusPolynomial,
    q: &[i64],
    samples: usize,
    seed: u64,
) -> Result<TransferenceCheck> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let plan = unimodular_plan(q, 1)?;
    let g = f.substitute(&transpose(plan.matrix()))?;
    let direct_order = ThresholdOrder::rational(f, q)?;
    let mut e1 = vec![0; f.dim];
    e1[0] = 1;
    let sub_order = ThresholdOrder::rational(&g, &e1)?;
    let rows = par_haar_map(f.dim, samples, seed, |angles| {
        let plain = f.eval(angles).norm();
        let direct = direct_order.maximal(f, angles);
        let substituted = sub_order.maximal(&g, angles);
        let plain_sub = g.eval(angles).norm();
        let slack = 1e-12 * (1.0 + plain.max(plain_sub));
        let violations = usize::from(direct + slack < plain) + usize::from(substituted + slack < plain_sub);
        (plain, direct, substituted, violations)
    });
    let pick = |k: usize| -> Vec<f64> {
        rows.iter()
            .map(|r| match k {
                0 => r.0,
                1 => r.1,
                _ => r.2,
            })
            .collect()
    };
    let estimate = |name: &str, v: Vec<f64>| {
        let e = moments_to_norm(&v, 2.0, NormMethod::HaarMc { samples });
        MaximalEstimate {
            operator: name.to_string(),
            exponent: Exponent::Lp(2.0),
            samples,
            seed,
            estimate: e.value,
            error_bar: e.std_error.unwrap_or(0.0),
        }
    };
    let direct = estimate("carleson", pick(1));
    let substituted = estimate("carleson-substituted", pick(2));
    let plain = estimate("identity", pick(0));
    let agree = (direct.estimate - substituted.estimate).abs() <= 2.0 * (direct.error_bar + substituted.error_bar);
    Ok(TransferenceCheck {
        q: q.to_vec(),
        matrix: plan.matrix().clone(),
        direct,
        substituted,
        plain,
        dominance_violations: rows.iter().map(|r| r.3).sum(),
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_monomial() {
        let f = TorusPolynomial::new(2, vec![(vec![3, -1], Complex64::new(0.6, 0.8))]).unwrap();
        for z in [[0.0, 0.0], [1.0, 2.0], [5.0, -3.0]] {
            assert!((carleson_maximal(&f, &[1.0, 0.5], &z).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn prefix_enumeration() {
        let f = TorusPolynomial::new(1, vec![(vec![1], c(1.0)), (vec![2], c(1.0))]).unwrap();
        assert_eq!(carleson_maximal(&f, &[1.0], &[0.0]).unwrap(), 2.0);
    }

    #[test]
    fn ties_enter_together() {
        // <α, x> = 1 for both terms, which cancel at z = 1.
        let f = TorusPolynomial::new(2, vec![(vec![1, 0], c(1.0)), (vec![0, 1], c(-1.0))]).unwrap();
        assert_eq!(carleson_maximal(&f, &[1.0, 1.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(ThresholdOrder::rational(&f, &[1, 1]).unwrap().groups().len(), 1);
        assert_eq!(carleson_maximal(&f, &[1.0, 2.0], &[0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn dominates_modulus() {
        let f = TorusPolynomial::random(3, 10, 3, 11).unwrap();
        let x = [1.0, 2f64.sqrt(), 0.3];
        for k in 0..200 {
            let z = [0.1 * k as f64, 0.37 * k as f64, 1.3 * k as f64];
            assert!(carleson_maximal(&f, &x, &z).unwrap() >= f.eval(&z).norm() - 1e-12);
        }
    }

    #[test]
    fn substitution_rewrites_phases() {
        let f = TorusPolynomial::random(3, 6, 2, 5).unwrap();
        let plan = unimodular_plan(&[2, 3, 5], 1).unwrap();
        let m = transpose(plan.matrix());
        let g = f.substitute(&m).unwrap();
        let theta = [0.4, 1.1, -2.0];
        assert!((g.eval(&theta) - f.eval(&phi(&m, &theta))).norm() < 1e-12);
    }

    #[test]
    fn transference_small() {
        let f = TorusPolynomial::random(3, 8, 3, 1).unwrap();
        let r = carleson_transference_check(&f, &[3, 5, 7], 20_000, 9).unwrap();
        assert_eq!(r.dominance_violations, 0);
        assert!(r.agree, "{r:?}");
        assert!(r.direct.estimate >= r.plain.estimate);
    }
}
