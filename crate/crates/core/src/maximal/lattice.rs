//! Exact integer machinery for rational directions `x = q/Q`: a unimodular
//! matrix `A` whose first row is `q`, its integer inverse, and the rational
//! approximation of real directions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnimodularPlan {
    q: Vec<i64>,
    denominator: i64,
    a: IntMatrix,
    a_inv: IntMatrix,
}

impl UnimodularPlan {
    pub fn q(&self) -> &[i64] {
        &self.q
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn inverse(&self) -> &IntMatrix {
        &self.a_inv
    }

    /// `det A` by fraction-free elimination.
    pub fn determinant(&self) -> Result<i128> {
        integer_det(&self.a)
    }

    /// `det A = 1` and `A·A⁻¹ = I`, both checked in exact arithmetic.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.determinant()? == 1 && is_identity(&mat_mul(&self.a, &self.a_inv)?))
    }
}

/// `(r₁, r₂)` with `q₁r₂ − q₂r₁ = 1`, `r₂` the least nonnegative residue of
/// `q₁⁻¹` modulo `|q₂|`.
pub fn bezout_pair(q1: i64, q2: i64) -> Result<(i64, i64)> {
    let g = gcd(q1, q2);
    if g != 1 {
        return Err(Error::NotCoprime(g));
    }
    if q2 == 0 {
        // q1 = ±1
        return Ok((0, q1));
    }
    let m = (q2 as i128).abs();
    let r2 = mod_inverse((q1 as i128).rem_euclid(m), m);
    let r1 = (q1 as i128 * r2 - 1) / q2 as i128;
    Ok((to_i64(r1)?, to_i64(r2)?))
}

/// Builds `A` with rows `q`, `(r₁, r₂, 0, …)` and `e_3, …, e_N`. Its inverse is
/// `[[M⁻¹, −M⁻¹C], [0, I]]` with `M = [[q₁, q₂], [r₁, r₂]]` and `C` the
/// top-right block.
pub fn unimodular_plan(q: &[i64], denominator: i64) -> Result<UnimodularPlan> {
    if q.len() < 2 {
        return Err(Error::InvalidParameter("direction needs at least 2 coordinates".into()));
    }
    if denominator < 1 {
        return Err(Error::InvalidParameter(format!(
            "denominator must be >= 1, got {denominator}"
        )));
    }
    let n = q.len();
    let (r1, r2) = bezout_pair(q[0], q[1])?;
    let mut a = vec![vec![0i64; n]; n];
    a[0].copy_from_slice(q);
    a[1][0] = r1;
    a[1][1] = r2;
    for (i, row) in a.iter_mut().enumerate().skip(2) {
        row[i] = 1;
    }
    let minv = [[r2 as i128, -(q[1] as i128)], [-(r1 as i128), q[0] as i128]];
    let mut a_inv = vec![vec![0i64; n]; n];
    for i in 0..2 {
        a_inv[i][0] = to_i64(minv[i][0])?;
        a_inv[i][1] = to_i64(minv[i][1])?;
        for j in 2..n {
            // C has q_j in its first row and zeros below.
            a_inv[i][j] = to_i64(-minv[i][0] * q[j] as i128)?;
        }
    }
    for (i, row) in a_inv.iter_mut().enumerate().skip(2) {
        row[i] = 1;
    }
    Ok(UnimodularPlan {
        q: q.to_vec(),
        denominator,
        a,
        a_inv,
    })
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a, m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let k = old_r / r;
        (old_r, r) = (r, old_r - k * r);
        (old_s, s) = (s, old_s - k * s);
    }
    old_s.rem_euclid(m)
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

/// Determinant by Bareiss elimination in checked `i128`.
pub fn integer_det(m: &[Vec<i64>]) -> Result<i128> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i][j].checked_mul(a[k][k]).ok_or(Error::Overflow)?;
                let y = a[i][k].checked_mul(a[k][j]).ok_or(Error::Overflow)?;
                a[i][j] = x.checked_sub(y).ok_or(Error::Overflow)? / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<IntMatrix> {
    let inner = b.len();
    if a.iter().any(|r| r.len() != inner) {
        return Err(Error::InvalidParameter("matrix shapes do not match".into()));
    }
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let s = (0..inner).try_fold(0i128, |acc, k| acc.checked_add(row[k] as i128 * b[k][j] as i128));
                    to_i64(s.ok_or(Error::Overflow)?)
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Result<Vec<i64>> {
    a.iter()
        .map(|row| {
            if row.len() != v.len() {
                return Err(Error::InvalidParameter("matrix and vector shapes do not match".into()));
            }
            let s = row
                .iter()
                .zip(v)
                .try_fold(0i128, |acc, (&x, &y)| acc.checked_add(x as i128 * y as i128));
            to_i64(s.ok_or(Error::Overflow)?)
        })
        .collect()
}

pub fn transpose(a: &[Vec<i64>]) -> IntMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

fn is_identity(m: &[Vec<i64>]) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
}

/// `q/Q ≈ x`, with `permutation[k]` the original coordinate placed at `k`
/// so that the leading pair of the permuted `q` is coprime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalDirection {
    pub q: Vec<i64>,
    pub denominator: i64,
    pub permutation: Vec<usize>,
    /// `max_j |x_j − q_j/Q|`.
    pub error: f64,
}

impl RationalDirection {
    /// `q` in permuted order.
    pub fn permuted_q(&self) -> Vec<i64> {
        self.permutation.iter().map(|&j| self.q[j]).collect()
    }

    /// Reorders any coordinate vector the same way.
    pub fn permute<T: Copy>(&self, v: &[T]) -> Vec<T> {
        self.permutation.iter().map(|&j| v[j]).collect()
    }
}

/// Last continued-fraction convergent of `x` with denominator at most `bound`.
fn convergent(x: f64, bound: i64) -> (i64, i64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    loop {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if q2 > bound as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (p1 as i64, q1 as i64)
}

fn coprime_pair(q: &[i64]) -> Option<(usize, usize)> {
    (0..q.len())
        .flat_map(|i| (i + 1..q.len()).map(move |j| (i, j)))
        .find(|&(i, j)| gcd(q[i], q[j]) == 1)
}

fn lcm(a: i64, b: i64) -> Option<i64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Approximates a real direction by `q/Q` with `Q ≤ max_denominator`.
///
/// Each coordinate is replaced by its last convergent with denominator at most
/// `max_denominator^{1/N}` and `Q` is their least common multiple. When no pair
/// of the resulting `q` is coprime, `Q` is incremented with `q_j = round(Q x_j)`.
pub fn rational_direction(x: &[f64], max_denominator: i64) -> Result<RationalDirection> {
    if x.len() < 2 || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "direction needs at least 2 finite coordinates".into(),
        ));
    }
    if max_denominator < 1 {
        return Err(Error::InvalidParameter("max denominator must be >= 1".into()));
    }
    let per = ((max_denominator as f64).powf(1.0 / x.len() as f64).floor() as i64).max(1);
    let fracs: Vec<(i64, i64)> = x.iter().map(|&v| convergent(v, per)).collect();
    let mut big_q = fracs
        .iter()
        .try_fold(1i64, |acc, &(_, d)| lcm(acc, d))
        .ok_or(Error::Overflow)?;
    let mut q: Vec<i64> = fracs.iter().map(|&(p, d)| p * (big_q / d)).collect();
    let pair = loop {
        if let Some(pair) = coprime_pair(&q) {
            break pair;
        }
        big_q += 1;
        if big_q > max_denominator {
            return Err(Error::NotCoprime(q.iter().fold(0, |g, &v| gcd(g, v))));
        }
        q = x.iter().map(|&v| (v * big_q as f64).round() as i64).collect();
    };
    let mut permutation = vec![pair.0, pair.1];
    permutation.extend((0..x.len()).filter(|&j| j != pair.0 && j != pair.1));
    let error = x
        .iter()
        .zip(&q)
        .map(|(&v, &n)| (v - n as f64 / big_q as f64).abs())
        .fold(0.0, f64::max);
    Ok(RationalDirection {
        q,
        denominator: big_q,
        permutation,
        error,
    })
}
