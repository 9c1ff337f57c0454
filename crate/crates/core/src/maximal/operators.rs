//! Maximal operators along the vertical limit `f_ω(t) = Σ a_n h_{λ_n}(ω) e^{-iλ_n t}`.

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CharacterPoint, GroupModel};
use crate::series::DirichletPolynomial;

fn twisted(f: &DirichletPolynomial, model: &GroupModel, omega: &CharacterPoint) -> Result<Vec<(usize, Complex64)>> {
    f.terms()
        .map(|(n, a)| Ok((n, a * model.character(n, omega)?)))
        .collect()
}

/// `sup_N |Σ_{n≤N} a_n e^{-uλ_n} h_{λ_n}(ω)|`.
pub fn smax_u(f: &DirichletPolynomial, model: &GroupModel, u: f64, omega: &CharacterPoint) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::InvalidParameter(format!("u must be > 0, got {u}")));
    }
    let mut s = Complex64::new(0.0, 0.0);
    let mut best: f64 = 0.0;
    for (n, b) in twisted(f, model, omega)? {
        s += b * (-u * f.lambda(n)).exp();
        best = best.max(s.norm());
    }
    Ok(best)
}

/// `sup_N |Σ_{n≤N} a_n h_{λ_n}(ω)| · k_N · ((λ_{N+1} − λ_N)/λ_{N+1})^{k_N}` over
/// `N = 1..=max index`, with `weights[N-1] = k_N`.
pub fn tmax_weighted(
    f: &DirichletPolynomial,
    model: &GroupModel,
    weights: &[f64],
    omega: &CharacterPoint,
) -> Result<f64> {
    let last = match f.max_index() {
        Some(n) => n,
        None => return Ok(0.0),
    };
    if weights.len() < last {
        return Err(Error::InvalidParameter(format!(
            "need {last} weights, got {}",
            weights.len()
        )));
    }
    if let Some(k) = weights[..last].iter().find(|&&k| !(k > 0.0 && k <= 1.0)) {
        return Err(Error::InvalidParameter(format!("weights must lie in (0, 1], got {k}")));
    }
    let freq = f.frequency();
    let coeffs = twisted(f, model, omega)?;
    let mut next = coeffs.iter().peekable();
    let mut s = Complex64::new(0.0, 0.0);
    let mut best: f64 = 0.0;
    for big_n in 1..=last {
        while let Some(&&(n, b)) = next.peek() {
            if n > big_n {
                break;
            }
            s += b;
            next.next();
        }
        let l = freq
            .value(big_n)
            .ok_or_else(|| Error::InvalidFrequency(format!("no λ_{big_n}")))?;
        let l_next = freq
            .value(big_n + 1)
            .ok_or_else(|| Error::InvalidFrequency(format!("frequency must supply λ_{}", big_n + 1)))?;
        if l_next == 0.0 {
            return Err(Error::InvalidFrequency(format!("λ_{} = 0", big_n + 1)));
        }
        let k = weights[big_n - 1];
        best = best.max(s.norm() * k * ((l_next - l) / l_next).powf(k));
    }
    Ok(best)
}

/// Windows of length `2^j·step`, `j = 0..=levels`, centred at `c·step` for
/// `|c| ≤ centres`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HlGrid {
    pub step: f64,
    pub levels: u32,
    pub centres: usize,
}

impl Default for HlGrid {
    fn default() -> Self {
        Self {
            step: 0.01,
            levels: 12,
            centres: 1000,
        }
    }
}

/// Lower estimate of `sup_I (1/|I|) ∫_I |f_ω(t)| dt`: midpoint Riemann sums with
/// spacing `step` over the windows of `grid`.
pub fn hl_flow(f: &DirichletPolynomial, model: &GroupModel, omega: &CharacterPoint, grid: &HlGrid) -> Result<f64> {
    if !(grid.step > 0.0) || !grid.step.is_finite() || grid.levels > 30 {
        return Err(Error::InvalidParameter(
            "hl grid needs step > 0 and at most 30 levels".into(),
        ));
    }
    let terms: Vec<(f64, Complex64)> = twisted(f, model, omega)?
        .into_iter()
        .map(|(n, b)| (f.lambda(n), b))
        .collect();
    let modulus = |t: f64| -> f64 {
        terms
            .iter()
            .map(|(l, b)| b * Complex64::cis(-l * t))
            .sum::<Complex64>()
            .norm()
    };
    // Sample |f_ω| at half steps k·step/2; window (c, j ≥ 1) uses the odd k.
    let half_width = 1usize << grid.levels.saturating_sub(1);
    let reach = (grid.centres + half_width + 1) as i64;
    let offset = 2 * reach;
    let values: Vec<f64> = (-offset..=offset)
        .map(|k| modulus(k as f64 * grid.step / 2.0))
        .collect();
    let at = |k: i64| values[(k + offset) as usize];
    // prefix sums over the odd half-step indices (offset is even)
    let first_odd = -offset + 1;
    let mut odd_prefix = vec![0.0];
    for k in (first_odd..=offset).step_by(2) {
        let last = *odd_prefix.last().unwrap();
        odd_prefix.push(last + at(k));
    }
    let odd_sum = |lo: i64, hi: i64| -> f64 {
        // odd indices lo..=hi
        let i = ((lo - first_odd) / 2) as usize;
        let j = ((hi - first_odd) / 2) as usize + 1;
        odd_prefix[j] - odd_prefix[i]
    };
    let mut best: f64 = 0.0;
    for c in -(grid.centres as i64)..=grid.centres as i64 {
        best = best.max(at(2 * c));
        for j in 1..=grid.levels {
            let m = 1i64 << j;
            // midpoints step·(c − m/2 + i + 1/2), i = 0..m, i.e. odd k = 2c − m + 1 + 2i
            let lo = 2 * c - m + 1;
            let hi = 2 * c + m - 1;
            best = best.max(odd_sum(lo, hi) / m as f64);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frequency::Frequency;
    use crate::group::besicovitch_mean;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn model() -> GroupModel {
        GroupModel::ordinary(16).unwrap()
    }

    #[test]
    fn smax_single_term() {
        let f = DirichletPolynomial::from_terms(Frequency::log(), [(3, c(-2.0))]).unwrap();
        let m = model();
        for w in m.haar_sample(5, 1).unwrap() {
            let v = smax_u(&f, &m, 0.7, &w).unwrap();
            assert!((v - 2.0 * 3f64.powf(-0.7)).abs() < 1e-14);
        }
    }

    #[test]
    fn smax_tends_to_constant_term() {
        let f = DirichletPolynomial::from_coefficients(Frequency::log(), &[c(0.5), c(3.0), c(1.0)]).unwrap();
        let m = model();
        let w = &m.haar_sample(1, 2).unwrap()[0];
        assert!((smax_u(&f, &m, 60.0, w).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn smax_non_increasing_in_u() {
        let coeffs: Vec<Complex64> = (1..=16)
            .map(|n| Complex64::new((n as f64).sin(), (n as f64).cos()))
            .collect();
        let f = DirichletPolynomial::from_coefficients(Frequency::log(), &coeffs).unwrap();
        let m = model();
        for w in m.haar_sample(20, 3).unwrap() {
            let mut prev = f64::INFINITY;
            for u in [0.1, 0.2, 0.5, 1.0, 2.0, 5.0] {
                let v = smax_u(&f, &m, u, &w).unwrap();
                assert!(v <= prev + 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn tmax_single_term_example() {
        let freq = Frequency::explicit("one-two", vec![1.0, 2.0]).unwrap();
        let f = DirichletPolynomial::from_terms(freq, [(1, c(3.0))]).unwrap();
        let m = GroupModel::new(vec![1.0], vec![vec![1], vec![2]]).unwrap();
        let v = tmax_weighted(&f, &m, &[1.0], &m.identity()).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
    }

    #[test]
    fn tmax_needs_next_frequency() {
        let freq = Frequency::explicit("short", vec![1.0, 2.0]).unwrap();
        let f = DirichletPolynomial::from_terms(freq, [(2, c(1.0))]).unwrap();
        let m = GroupModel::new(vec![1.0], vec![vec![1], vec![2]]).unwrap();
        assert!(matches!(
            tmax_weighted(&f, &m, &[1.0, 1.0], &m.identity()),
            Err(Error::InvalidFrequency(_))
        ));
    }

    #[test]
    fn tmax_vanishes_with_weights() {
        let f = DirichletPolynomial::from_coefficients(Frequency::log(), &[c(1.0), c(1.0), c(1.0)]).unwrap();
        let m = model();
        let w = m.identity();
        let mut prev = f64::INFINITY;
        for k in [1.0, 0.1, 0.01, 0.001] {
            let v = tmax_weighted(&f, &m, &[k; 3], &w).unwrap();
            assert!(v <= 3.0 * k);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn hl_of_constant_and_character() {
        let m = model();
        let w = m.haar_sample(1, 4).unwrap().remove(0);
        let grid = HlGrid {
            step: 0.05,
            levels: 6,
            centres: 50,
        };
        let one = DirichletPolynomial::from_terms(Frequency::log(), [(1, c(1.0))]).unwrap();
        assert!((hl_flow(&one, &m, &w, &grid).unwrap() - 1.0).abs() < 1e-14);
        let h = DirichletPolynomial::from_terms(Frequency::log(), [(5, c(1.0))]).unwrap();
        assert!((hl_flow(&h, &m, &w, &grid).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hl_dominates_point_value_and_besicovitch_mean() {
        let coeffs: Vec<Complex64> = (1..=8).map(|n| c(1.0 / n as f64)).collect();
        let f = DirichletPolynomial::from_coefficients(Frequency::log(), &coeffs).unwrap();
        let m = model();
        let grid = HlGrid {
            step: 0.01,
            levels: 10,
            centres: 100,
        };
        for w in m.haar_sample(5, 8).unwrap() {
            let hl = hl_flow(&f, &m, &w, &grid).unwrap();
            assert!(hl >= f.eval_on_model(&m, &w).unwrap().norm() - 1e-12);
            // widest window centred at 0 has half-length 2^9 · step
            let mean = besicovitch_mean(&f, &m, &w, 512.0 * grid.step).unwrap().norm();
            assert!(hl >= mean - 1e-3, "{hl} < {mean}");
        }
    }
}
