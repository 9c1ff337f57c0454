//! Dirichlet polynomials `D(s) = Σ a_n e^{-λ_n s}` and their elementary
//! operations.

mod abel;
mod abscissa;

pub use abel::{abel_majorant, abel_sharp_constant, AbelBound};
pub use abscissa::{sigma_u_estimate, AbscissaEstimate, CheckpointSup, SupEstimator, TorusSup};

use std::collections::BTreeMap;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::{BasisDecomposition, Frequency};
use crate::group::{CharacterPoint, GroupModel};

#[derive(Clone, Debug, PartialEq)]
pub struct DirichletPolynomial {
    freq: Frequency,
    terms: BTreeMap<usize, Complex64>,
}

impl DirichletPolynomial {
    /// The zero polynomial.
    pub fn zero(freq: Frequency) -> Self {
        Self {
            freq,
            terms: BTreeMap::new(),
        }
    }

    /// Builds from `(index, coefficient)` pairs; repeated indices add up.
    pub fn from_terms(freq: Frequency, terms: impl IntoIterator<Item = (usize, Complex64)>) -> Result<Self> {
        let mut d = Self::zero(freq);
        for (n, a) in terms {
            d.add_term(n, a)?;
        }
        Ok(d)
    }

    /// `a_1, a_2, ...` on consecutive indices starting at 1.
    pub fn from_coefficients(freq: Frequency, coeffs: &[Complex64]) -> Result<Self> {
        Self::from_terms(freq, coeffs.iter().enumerate().map(|(i, &a)| (i + 1, a)))
    }

    pub fn add_term(&mut self, n: usize, a: Complex64) -> Result<()> {
        if !self.freq.contains_index(n) {
            return Err(Error::InvalidParameter(format!(
                "index {n} is not valid for frequency {}",
                self.freq
            )));
        }
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coefficient at index {n} is not finite"
            )));
        }
        *self.terms.entry(n).or_default() += a;
        Ok(())
    }

    pub fn frequency(&self) -> &Frequency {
        &self.freq
    }

    /// `λ_n`; the index must be valid for the frequency.
    pub fn lambda(&self, n: usize) -> f64 {
        self.freq.value(n).expect("index validated on insertion")
    }

    /// Stored terms in increasing index order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.terms.iter().map(|(&n, &a)| (n, a))
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.terms.get(&n).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// `Σ a_n e^{-λ_n s}` by direct summation.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.terms().map(|(n, a)| a * (-self.lambda(n) * s).exp()).sum()
    }

    fn map_terms(&self, f: impl Fn(usize, Complex64) -> Option<Complex64>) -> Self {
        Self {
            freq: self.freq.clone(),
            terms: self.terms().filter_map(|(n, a)| f(n, a).map(|b| (n, b))).collect(),
        }
    }

    /// The first `n` stored terms in index order.
    pub fn partial_sum(&self, n: usize) -> Self {
        Self {
            freq: self.freq.clone(),
            terms: self.terms().take(n).collect(),
        }
    }

    /// Coefficients `a_n e^{-λ_n z}`.
    pub fn translate(&self, z: Complex64) -> Self {
        self.map_terms(|n, a| Some(a * (-self.lambda(n) * z).exp()))
    }

    /// Coefficients `a_n h_{λ_n}(ω)`.
    pub fn vertical_limit(&self, model: &GroupModel, omega: &CharacterPoint) -> Result<Self> {
        let mut out = Self::zero(self.freq.clone());
        for (n, a) in self.terms() {
            out.terms.insert(n, a * model.character(n, omega)?);
        }
        Ok(out)
    }

    /// Riesz mean `Σ_{λ_n < x} a_n (1 - λ_n/x)^k e^{-λ_n s}`.
    pub fn riesz_mean(&self, x: f64, k: f64) -> Result<Self> {
        if !(x > 0.0) {
            return Err(Error::InvalidAbscissa(x));
        }
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter(format!("Riesz order k = {k} must be >= 0")));
        }
        Ok(self.map_terms(|n, a| {
            let l = self.lambda(n);
            (l < x).then(|| a * (1.0 - l / x).powf(k))
        }))
    }

    /// Keeps the terms whose Bohr-matrix row is supported on the first
    /// `cutoff` basis columns. Row `i` of `decomp` belongs to index `i + 1`.
    pub fn abschnitt(&self, decomp: &BasisDecomposition, cutoff: usize) -> Result<Self> {
        let mut out = Self::zero(self.freq.clone());
        for (n, a) in self.terms() {
            let row = decomp.row(n - 1).ok_or(Error::ModelMismatch(n))?;
            if row.iter().skip(cutoff).all(|&r| r == 0) {
                out.terms.insert(n, a);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&PolynomialJson::from(self)).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PolynomialJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermJson {
    n: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// On-disk form: `{"freq": <spec or array>, "terms": [{"n", "re", "im"}]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct PolynomialJson {
    freq: Frequency,
    terms: Vec<TermJson>,
}

impl From<&DirichletPolynomial> for PolynomialJson {
    fn from(d: &DirichletPolynomial) -> Self {
        Self {
            freq: d.freq.clone(),
            terms: d.terms().map(|(n, a)| TermJson { n, re: a.re, im: a.im }).collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for DirichletPolynomial {
    type Error = Error;

    fn try_from(raw: PolynomialJson) -> Result<Self> {
        Self::from_terms(
            raw.freq,
            raw.terms.into_iter().map(|t| (t.n, Complex64::new(t.re, t.im))),
        )
    }
}

impl Serialize for DirichletPolynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DirichletPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        PolynomialJson::deserialize(deserializer)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn linear(coeffs: &[f64]) -> DirichletPolynomial {
        let cs: Vec<_> = coeffs.iter().map(|&a| c(a)).collect();
        DirichletPolynomial::from_coefficients(Frequency::linear(), &cs).unwrap()
    }

    #[test]
    fn partial_sums() {
        let d = linear(&[1.0, 2.0, 3.0]);
        let p = d.partial_sum(2);
        assert_eq!(p.terms().collect::<Vec<_>>(), vec![(1, c(1.0)), (2, c(2.0))]);
        assert!(d.partial_sum(0).is_empty());
        assert_eq!(d.partial_sum(3), d);
        assert_eq!(d.partial_sum(10), d);
    }

    #[test]
    fn translate_values() {
        let d = linear(&[1.0, 2.0, 3.0]);
        assert_eq!(d.translate(Complex64::new(0.0, 0.0)), d);
        let single = DirichletPolynomial::from_terms(Frequency::linear(), [(2, c(1.0))]).unwrap();
        let t = single.translate(c(1.0));
        assert!((t.coefficient(2) - c((-1f64).exp())).norm() < 1e-16);
    }

    #[test]
    fn riesz_examples() {
        let d = linear(&[1.0, 1.0]);
        let r = d.riesz_mean(2.0, 1.0).unwrap();
        assert_eq!(r.coefficient(1), c(1.0));
        assert_eq!(r.coefficient(2), c(0.5));
        assert_eq!(r.eval(c(0.0)), c(1.5));
        let shifted = DirichletPolynomial::from_coefficients(
            Frequency::explicit("shifted", vec![1.0, 2.0]).unwrap(),
            &[c(1.0), c(1.0)],
        )
        .unwrap();
        assert!(shifted.riesz_mean(1.0, 2.0).unwrap().is_empty());
        assert!(matches!(d.riesz_mean(0.0, 1.0), Err(Error::InvalidAbscissa(_))));
        assert!(matches!(d.riesz_mean(-1.0, 1.0), Err(Error::InvalidAbscissa(_))));
        // tie λ_n = x is excluded
        assert_eq!(d.riesz_mean(1.0, 0.0).unwrap().len(), 1);
        assert_eq!(
            linear(&[1.0, 2.0, 3.0]).riesz_mean(1.5, 0.0).unwrap(),
            linear(&[1.0, 2.0])
        );
    }

    #[test]
    fn vertical_limit_identity_and_phase() {
        let model = GroupModel::ordinary(10).unwrap();
        let d = DirichletPolynomial::from_terms(Frequency::log(), [(2, c(1.0)), (3, c(-2.0))]).unwrap();
        assert_eq!(d.vertical_limit(&model, &model.identity()).unwrap(), d);
        let w = CharacterPoint::new(vec![std::f64::consts::FRAC_PI_2, 0.0, 0.0, 0.0]).unwrap();
        let v = d.vertical_limit(&model, &w).unwrap();
        assert!((v.coefficient(2) - Complex64::i()).norm() < 1e-15);
        let small = GroupModel::ordinary(2).unwrap();
        assert!(matches!(
            d.vertical_limit(&small, &small.identity()),
            Err(Error::ModelMismatch(3))
        ));
    }

    #[test]
    fn abschnitt_ordinary() {
        let decomp = BasisDecomposition::ordinary(10);
        let d = DirichletPolynomial::from_coefficients(Frequency::log(), &[c(1.0); 10]).unwrap();
        let keep = |n| -> Vec<usize> { d.abschnitt(&decomp, n).unwrap().terms().map(|t| t.0).collect() };
        assert_eq!(keep(1), vec![1, 2, 4, 8]);
        assert_eq!(keep(2), vec![1, 2, 3, 4, 6, 8, 9]);
        assert_eq!(d.abschnitt(&decomp, 4).unwrap(), d);
        let short = BasisDecomposition::ordinary(5);
        assert!(matches!(d.abschnitt(&short, 1), Err(Error::ModelMismatch(6))));
    }

    #[test]
    fn json_round_trip() {
        let d = DirichletPolynomial::from_terms(Frequency::sqrt_log(), [(1, Complex64::new(1.0, -0.5)), (7, c(2.0))])
            .unwrap();
        assert_eq!(DirichletPolynomial::from_json(&d.to_json().unwrap()).unwrap(), d);
        let explicit =
            DirichletPolynomial::from_json(r#"{"freq": [0.0, 0.5, 3.0], "terms": [{"n": 3, "re": 1.0}]}"#).unwrap();
        assert_eq!(explicit.lambda(3), 3.0);
        assert!(DirichletPolynomial::from_json(r#"{"freq": [0.0], "terms": [{"n": 2, "re": 1.0}]}"#).is_err());
    }

    proptest! {
        #[test]
        fn translate_composition(zr in -2.0..2.0f64, zi in -5.0..5.0f64, wr in -2.0..2.0f64, wi in -5.0..5.0f64) {
            let d = DirichletPolynomial::from_coefficients(
                Frequency::log(),
                &[c(1.0), Complex64::new(0.5, 2.0), c(-3.0), Complex64::new(0.0, 1.0)],
            ).unwrap();
            let z = Complex64::new(zr, zi);
            let w = Complex64::new(wr, wi);
            let lhs = d.translate(z).translate(w);
            let rhs = d.translate(z + w);
            for n in 1..=4 {
                let (a, b) = (lhs.coefficient(n), rhs.coefficient(n));
                prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
            }
        }

        #[test]
        fn vertical_limits_preserve_moduli(angles in prop::collection::vec(0.0..6.3f64, 4)) {
            let model = GroupModel::ordinary(10).unwrap();
            let d = DirichletPolynomial::from_coefficients(Frequency::log(), &[c(1.0), c(-2.0), Complex64::new(0.3, 0.4), c(5.0), c(1.0), c(2.0), c(3.0), c(4.0), c(5.0), c(6.0)]).unwrap();
            let w = CharacterPoint::new(angles).unwrap();
            let v = d.vertical_limit(&model, &w).unwrap();
            for n in 1..=10 {
                prop_assert!((v.coefficient(n).norm() - d.coefficient(n).norm()).abs() < 1e-13);
            }
        }

        #[test]
        fn abschnitt_idempotent(nc in 0usize..6, mc in 0usize..6) {
            let decomp = BasisDecomposition::ordinary(30);
            let d = DirichletPolynomial::from_coefficients(Frequency::log(), &vec![c(1.0); 30]).unwrap();
            let lhs = d.abschnitt(&decomp, nc).unwrap().abschnitt(&decomp, mc).unwrap();
            prop_assert_eq!(lhs, d.abschnitt(&decomp, nc.min(mc)).unwrap());
        }

        #[test]
        fn riesz_k0_is_partial_sum(x in 0.01..20.0f64) {
            let d = linear(&(1..=25).map(f64::from).collect::<Vec<_>>());
            prop_assume!(x.fract() != 0.0);
            let n = x.ceil() as usize;
            prop_assert_eq!(d.riesz_mean(x, 0.0).unwrap(), d.partial_sum(n));
        }
    }
}
