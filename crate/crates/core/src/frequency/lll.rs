//! Integer relation search by LLL reduction of the lattice spanned by the rows
//! `(e_i, W·x_i)`, with `W = 1/τ`.
//!
//! A reduced vector `(c, W·Σ c_i x_i)` is short only when both the coefficients
//! and the residual `|Σ c_i x_i|` are small, so the reduced basis lists the best
//! candidate relations. This is a heuristic: it never proves independence.

use num::bigint::BigInt;
use num::{Integer, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_SWAPS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegerRelation {
    pub coefficients: Vec<i64>,
    /// `|Σ c_i x_i|`, evaluated in floating point.
    pub residual: f64,
}

/// Candidate integer relations among `x`, read off the LLL-reduced basis of the
/// lattice and ordered by lattice norm (shortest first).
///
/// The lattice is made integral by rounding `W·x_i`; the reduction itself runs
/// in exact integer arithmetic.
pub fn find_integer_relation(x: &[f64], tolerance: f64) -> Result<Vec<IntegerRelation>> {
    if x.is_empty() {
        return Ok(Vec::new());
    }
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "relation tolerance must be positive, got {tolerance}"
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidRelations("non-finite value".into()));
    }
    let weight = 1.0 / tolerance;
    let m = x.len();
    let basis: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..m).map(|j| BigInt::from(u8::from(i == j))).collect();
            let scaled = (weight * x[i]).round();
            row.push(float_to_bigint(scaled)?);
            Ok(row)
        })
        .collect::<Result<_>>()?;

    let reduced = lll_reduce(basis)?;
    let mut scored: Vec<(BigInt, IntegerRelation)> = reduced
        .into_iter()
        .map(|b| {
            let norm: BigInt = b.iter().map(|v| v * v).sum();
            let coefficients = b[..m]
                .iter()
                .map(|c| c.to_i64().ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()?;
            let residual = dot_compensated(&coefficients, x).abs();
            Ok((norm, IntegerRelation { coefficients, residual }))
        })
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(scored.into_iter().map(|(_, r)| r).collect())
}

fn float_to_bigint(v: f64) -> Result<BigInt> {
    num::FromPrimitive::from_f64(v).ok_or(Error::Overflow)
}

/// `Σ c_i x_i` with compensated summation.
fn dot_compensated(c: &[i64], x: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (&ci, &xi) in c.iter().zip(x) {
        let term = ci as f64 * xi;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn inner(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `num / den` for `den > 0`.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * &two))
}

/// Integral LLL with parameter 3/4 on linearly independent integer rows.
fn lll_reduce(mut b: Vec<Vec<BigInt>>) -> Result<Vec<Vec<BigInt>>> {
    let n = b.len();
    if n < 2 {
        return Ok(b);
    }
    // 1-based bookkeeping: d[0] = 1, d[i] = Gram determinant of b_1..b_i.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::from(1);
    d[1] = inner(&b[0], &b[0]);
    let mut k = 2;
    let mut kmax = 1;
    let mut swaps = 0;

    let red = |k: usize, l: usize, b: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt]| {
        if (&lam[k][l] * BigInt::from(2)).abs() > d[l] {
            let q = round_div(&lam[k][l], &d[l]);
            let bl = b[l - 1].clone();
            for (x, y) in b[k - 1].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l];
            for i in 1..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = inner(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::InvalidRelations("lattice rows are linearly dependent".into()));
                    }
                    d[k] = u;
                }
            }
        }
        red(k, k - 1, &mut b, &mut lam, &d);
        let lhs = BigInt::from(4) * &d[k] * &d[k - 2];
        let rhs = BigInt::from(3) * &d[k - 1] * &d[k - 1] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            b.swap(k - 1, k - 2);
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let big_b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = big_b;
            k = (k - 1).max(2);
            swaps += 1;
            if swaps > MAX_SWAPS {
                return Err(Error::InvalidRelations("lattice reduction did not terminate".into()));
            }
        } else {
            for l in (1..k - 1).rev() {
                red(k, l, &mut b, &mut lam, &d);
            }
            k += 1;
        }
    }
    Ok(b)
}
