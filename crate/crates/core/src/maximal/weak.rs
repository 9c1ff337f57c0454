//! Empirical weak-L1 quasinorm `sup_α α·μ(|g| ≥ α)` of a sample.

use crate::error::{Error, Result};

pub const WEAK_GRID_POINTS: usize = 64;

fn sorted_abs(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("weak-L1 norm of an empty sample".into()));
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidParameter(
            "weak-L1 norm of a sample containing NaN".into(),
        ));
    }
    let mut v: Vec<f64> = values.iter().map(|x| x.abs()).collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Linear-interpolation percentile of sorted data, `p ∈ [0, 1]`.
fn percentile(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let i = h.floor() as usize;
    let j = (i + 1).min(sorted.len() - 1);
    sorted[i] + (h - i as f64) * (sorted[j] - sorted[i])
}

/// Fraction of samples with value `≥ alpha`.
fn tail(sorted: &[f64], alpha: f64) -> f64 {
    let below = sorted.partition_point(|&v| v < alpha);
    (sorted.len() - below) as f64 / sorted.len() as f64
}

/// `max_α α·μ(|g| ≥ α)` over 64 log-spaced levels between the 1st and 99.9th
/// percentiles of `|g|`. A lower estimate of the empirical quasinorm.
pub fn weak_l1_norm(values: &[f64]) -> Result<f64> {
    let v = sorted_abs(values)?;
    let mut lo = percentile(&v, 0.01);
    let hi = percentile(&v, 0.999);
    if hi == 0.0 {
        return Ok(0.0);
    }
    if lo == 0.0 {
        lo = v[v.partition_point(|&x| x == 0.0)].min(hi);
    }
    if lo == hi {
        return Ok(lo * tail(&v, lo));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..WEAK_GRID_POINTS)
        .map(|k| {
            let alpha = (a + (b - a) * k as f64 / (WEAK_GRID_POINTS - 1) as f64).exp();
            alpha * tail(&v, alpha)
        })
        .fold(0.0, f64::max))
}

/// The same supremum taken over every sample value, which is exact.
pub fn weak_l1_norm_exact(values: &[f64]) -> Result<f64> {
    let v = sorted_abs(values)?;
    Ok(v.iter().map(|&x| x * tail(&v, x)).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        assert_eq!(weak_l1_norm(&[-2.5; 10]).unwrap(), 2.5);
        assert_eq!(weak_l1_norm_exact(&[2.5; 10]).unwrap(), 2.5);
    }

    #[test]
    fn three_values() {
        assert!((weak_l1_norm_exact(&[1.0, 2.0, 4.0]).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        let grid = weak_l1_norm(&[1.0, 2.0, 4.0]).unwrap();
        assert!(grid <= 4.0 / 3.0 && grid > 1.3, "{grid}");
    }

    #[test]
    fn homogeneous() {
        let g: Vec<f64> = (1..500).map(|k| ((k * 7919) % 1000) as f64 / 37.0).collect();
        let base = weak_l1_norm(&g).unwrap();
        let scaled: Vec<f64> = g.iter().map(|v| -3.0 * v).collect();
        assert!((weak_l1_norm(&scaled).unwrap() - 3.0 * base).abs() < 1e-12 * base);
    }

    #[test]
    fn below_mean() {
        let g: Vec<f64> = (0..1000).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        assert!(weak_l1_norm(&g).unwrap() <= mean);
        assert!(weak_l1_norm_exact(&g).unwrap() <= mean);
        assert!(weak_l1_norm(&g).unwrap() <= weak_l1_norm_exact(&g).unwrap());
    }

    #[test]
    fn empty_rejected() {
        assert!(weak_l1_norm(&[]).is_err());
    }
}
