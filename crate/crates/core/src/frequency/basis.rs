//! Extraction of a ℚ-independent basis `B` and an integer matrix `R` with
//! `λ_n = Σ_j R_{nj} b_j`.
//!
//! Values are processed in order. An independent value is appended to the
//! basis. A dependent value `v = Σ q_j b_j` with rational `q_j` forces the basis
//! to be rescaled by `1/K`, `K` the lcm of the denominators of the `q_j`, after
//! which every existing row is multiplied by `K` and the new row is `K·q`.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lll::find_integer_relation;
use super::{Frequency, FrequencyRule};
use crate::error::{Error, Result};

/// Residuals above `AMBIGUITY_FACTOR · τ` count as independent.
const AMBIGUITY_FACTOR: f64 = 100.0;
/// Relative tolerance for a declared value against its symbolic expansion.
const DECLARED_VALUE_RTOL: f64 = 1e-9;

/// A named real declared ℚ-independent of the other generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub value: f64,
}

impl Generator {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
        }
    }
}

/// A rational combination of named generators, optionally with the real value
/// it is claimed to equal.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolicValue {
    pub coefficients: BTreeMap<String, BigRational>,
    pub declared: Option<f64>,
}

impl SymbolicValue {
    pub fn generator(name: &str) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(name.to_string(), BigRational::one());
        Self {
            coefficients,
            declared: None,
        }
    }

    pub fn with_term(mut self, name: &str, coeff: BigRational) -> Self {
        let entry = self
            .coefficients
            .entry(name.to_string())
            .or_insert_with(BigRational::zero);
        *entry += coeff;
        self
    }

    pub fn with_declared(mut self, value: f64) -> Self {
        self.declared = Some(value);
        self
    }
}

impl fmt::Display for SymbolicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.coefficients.iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (name, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if a.is_one() {
                f.write_str(name)?;
            } else {
                write!(f, "{a}*{name}")?;
            }
        }
        Ok(())
    }
}

/// Parses `expr` as a rational linear combination of the given generator names.
///
/// Terms look like `r2`, `3*r2`, `1/2*r2`, `r2/2`, `0.25*r2` or a bare rational,
/// which multiplies the generator named `1`.
pub fn parse_linear_combination(expr: &str, generators: &[Generator]) -> Result<SymbolicValue> {
    let bad = |msg: String| Error::InvalidRelations(format!("{expr:?}: {msg}"));
    let known = |name: &str| generators.iter().any(|g| g.name == name);
    let mut out = SymbolicValue::default();
    let src: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(bad("empty expression".into()));
    }

    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in src.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !src[..i].ends_with(['*', '/']) {
            terms.push(&src[start..i]);
            start = i;
        }
    }
    terms.push(&src[start..]);

    for raw in terms {
        let (sign, body) = match raw.as_bytes().first() {
            Some(b'-') => (-1, &raw[1..]),
            Some(b'+') => (1, &raw[1..]),
            _ => (1, raw),
        };
        if body.is_empty() {
            return Err(bad("dangling sign".into()));
        }
        let (coeff_part, name_part) = match body.split_once('*') {
            Some((c, n)) => (Some(c), n),
            None if parse_rational(body).is_some() => (Some(body), "1"),
            None => (None, body),
        };
        let (name, divisor) = match name_part.split_once('/') {
            Some((n, d)) => (n, parse_rational(d).ok_or_else(|| bad(format!("bad divisor {d:?}")))?),
            None => (name_part, BigRational::one()),
        };
        if divisor.is_zero() {
            return Err(bad("division by zero".into()));
        }
        let coeff = match coeff_part {
            Some(c) => parse_rational(c).ok_or_else(|| bad(format!("bad coefficient {c:?}")))?,
            None => BigRational::one(),
        };
        if !known(name) {
            return Err(bad(format!("unknown generator {name:?}")));
        }
        out = out.with_term(name, coeff / divisor * BigRational::from_integer(sign.into()));
    }
    Ok(out)
}

/// Integers, `p/q` fractions and finite decimals, all converted exactly.
fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(i));
    }
    let (int, frac) = s.split_once('.')?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let neg = int.starts_with('-');
    let int_digits = int.trim_start_matches(['-', '+']);
    if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_digits}{frac}").parse().ok()?;
    let denom = num::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, denom);
    Some(if neg { -r } else { r })
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelationData {
    Symbolic {
        generators: Vec<Generator>,
        values: Vec<SymbolicValue>,
    },
    Numeric {
        values: Vec<f64>,
        tolerance: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Exactness {
    SymbolicExact,
    /// Relations found by lattice reduction; not a proof.
    Numeric {
        tolerance: f64,
    },
    /// Linear independence of the nonzero values assumed, never checked.
    AssumedIndependent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDecomposition {
    basis: Vec<f64>,
    /// Basis elements as generator combinations (symbolic mode only).
    basis_exact: Option<Vec<String>>,
    rows: Vec<Vec<i64>>,
    values: Vec<f64>,
    exactness: Exactness,
}

impl BasisDecomposition {
    /// Assembles a decomposition from parts, checking shapes only.
    pub fn from_parts(basis: Vec<f64>, rows: Vec<Vec<i64>>, values: Vec<f64>, exactness: Exactness) -> Result<Self> {
        if rows.len() != values.len() {
            return Err(Error::InvalidRelations(format!(
                "{} rows for {} values",
                rows.len(),
                values.len()
            )));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != basis.len()) {
            return Err(Error::InvalidRelations(format!(
                "row {} has length {}, basis has {}",
                i + 1,
                rows[i].len(),
                basis.len()
            )));
        }
        Ok(Self {
            basis,
            basis_exact: None,
            rows,
            values,
            exactness,
        })
    }

    /// The ordinary frequency `(log n)_{n ≤ n_max}` over the basis of logarithms
    /// of primes `≤ n_max`; row `n` is the exponent vector of `n`.
    pub fn ordinary(n_max: usize) -> Self {
        let primes = primes_up_to(n_max);
        let rows: Vec<Vec<i64>> = (1..=n_max)
            .map(|n| {
                let mut m = n;
                primes
                    .iter()
                    .map(|&p| {
                        let mut e = 0;
                        while m % p == 0 {
                            m /= p;
                            e += 1;
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        Self {
            basis: primes.iter().map(|&p| (p as f64).ln()).collect(),
            basis_exact: Some(primes.iter().map(|p| format!("log{p}")).collect()),
            rows,
            values: (1..=n_max).map(|n| (n as f64).ln()).collect(),
            exactness: Exactness::SymbolicExact,
        }
    }

    /// `λ = (0, 1, ..., n_max - 1)` over the basis `(1)`.
    pub fn linear(n_max: usize) -> Self {
        Self {
            basis: vec![1.0],
            basis_exact: Some(vec!["1".into()]),
            rows: (0..n_max as i64).map(|n| vec![n]).collect(),
            values: (0..n_max).map(|n| n as f64).collect(),
            exactness: Exactness::SymbolicExact,
        }
    }

    /// Treats every nonzero value as its own basis element. Use it when the
    /// values are believed independent but [`decompose_basis`] is inconclusive.
    pub fn independent(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidRelations(format!("non-finite value {v}")));
        }
        let basis: Vec<f64> = values.iter().copied().filter(|&v| v != 0.0).collect();
        let mut next = 0;
        let rows = values
            .iter()
            .map(|&v| {
                let mut row = vec![0; basis.len()];
                if v != 0.0 {
                    row[next] = 1;
                    next += 1;
                }
                row
            })
            .collect();
        Self::from_parts(basis, rows, values, Exactness::AssumedIndependent)
    }

    /// Decomposition of `λ_1..λ_n`: exact for the ordinary and linear rules,
    /// numeric with tolerance `tolerance` otherwise.
    pub fn for_frequency(freq: &Frequency, n: usize, tolerance: f64) -> Result<Self> {
        match freq.rule() {
            FrequencyRule::Log => Ok(Self::ordinary(n)),
            FrequencyRule::Linear => Ok(Self::linear(n)),
            _ => decompose_basis(&RelationData::Numeric {
                values: freq.prefix(n)?,
                tolerance,
            }),
        }
    }

    pub fn basis(&self) -> &[f64] {
        &self.basis
    }

    pub fn basis_exact(&self) -> Option<&[String]> {
        self.basis_exact.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Row of the `i`-th value (0-based).
    pub fn row(&self, i: usize) -> Option<&[i64]> {
        self.rows.get(i).map(Vec::as_slice)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    /// `Σ_j R_{ij} b_j`.
    pub fn reconstruct(&self, i: usize) -> f64 {
        self.rows[i].iter().zip(&self.basis).map(|(&r, &b)| r as f64 * b).sum()
    }

    /// `max_i |Σ_j R_{ij} b_j − λ_i|` in floating point.
    pub fn max_reconstruction_error(&self) -> f64 {
        (0..self.len())
            .map(|i| (self.reconstruct(i) - self.values[i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Runs the basis induction over `data`. See the module docs.
pub fn decompose_basis(data: &RelationData) -> Result<BasisDecomposition> {
    match data {
        RelationData::Symbolic { generators, values } => decompose_symbolic(generators, values),
        RelationData::Numeric { values, tolerance } => decompose_numeric(values, *tolerance),
    }
}

fn decompose_symbolic(generators: &[Generator], values: &[SymbolicValue]) -> Result<BasisDecomposition> {
    let g = generators.len();
    for (i, gen) in generators.iter().enumerate() {
        if !gen.value.is_finite() || gen.value == 0.0 {
            return Err(Error::InvalidRelations(format!(
                "generator {:?} has value {}",
                gen.name, gen.value
            )));
        }
        if generators[..i].iter().any(|h| h.name == gen.name) {
            return Err(Error::InvalidRelations(format!(
                "generator {:?} declared twice",
                gen.name
            )));
        }
    }
    let index_of = |name: &str| generators.iter().position(|gen| gen.name == name);

    // Values as vectors over the generators.
    let mut vectors = Vec::with_capacity(values.len());
    let mut reals = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let mut vec = vec![BigRational::zero(); g];
        for (name, c) in &v.coefficients {
            let j = index_of(name)
                .ok_or_else(|| Error::InvalidRelations(format!("value {}: unknown generator {name:?}", i + 1)))?;
            vec[j] += c;
        }
        let real = real_value(&vec, generators);
        if let Some(d) = v.declared {
            if (d - real).abs() > DECLARED_VALUE_RTOL * d.abs().max(1.0) {
                return Err(Error::InvalidRelations(format!(
                    "value {} declared as {d} but its combination {v} evaluates to {real}",
                    i + 1
                )));
            }
        }
        if real < 0.0 || (real == 0.0 && vec.iter().any(|c| !c.is_zero())) {
            return Err(Error::InvalidRelations(format!(
                "value {} ({v}) is not positive",
                i + 1
            )));
        }
        vectors.push(vec);
        reals.push(real);
    }

    let mut basis: Vec<Vec<BigRational>> = Vec::new();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for v in &vectors {
        if v.iter().all(Zero::is_zero) {
            rows.push(vec![BigInt::zero(); basis.len()]);
            continue;
        }
        match solve_exact(&basis, v) {
            None => {
                basis.push(v.clone());
                for r in rows.iter_mut() {
                    r.push(BigInt::zero());
                }
                let mut row = vec![BigInt::zero(); basis.len()];
                *row.last_mut().unwrap() = BigInt::one();
                rows.push(row);
            }
            Some(q) => {
                let k = q.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                if !k.is_one() {
                    let kr = BigRational::from_integer(k.clone());
                    for b in basis.iter_mut() {
                        for c in b.iter_mut() {
                            *c = &*c / &kr;
                        }
                    }
                    for r in rows.iter_mut() {
                        for c in r.iter_mut() {
                            *c *= &k;
                        }
                    }
                }
                let kr = BigRational::from_integer(k);
                rows.push(q.iter().map(|c| (c * &kr).to_integer()).collect());
            }
        }
    }

    // R·B must reproduce every value exactly.
    for (row, v) in rows.iter().zip(&vectors) {
        let mut acc = vec![BigRational::zero(); g];
        for (r, b) in row.iter().zip(&basis) {
            let rr = BigRational::from_integer(r.clone());
            for (a, c) in acc.iter_mut().zip(b) {
                *a += &rr * c;
            }
        }
        debug_assert_eq!(&acc, v);
    }

    let rows_i64 = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| c.to_i64().ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let basis_exact = basis
        .iter()
        .map(|b| {
            let mut sv = SymbolicValue::default();
            for (c, gen) in b.iter().zip(generators) {
                if !c.is_zero() {
                    sv = sv.with_term(&gen.name, c.clone());
                }
            }
            sv.to_string()
        })
        .collect();
    Ok(BasisDecomposition {
        basis: basis.iter().map(|b| real_value(b, generators)).collect(),
        basis_exact: Some(basis_exact),
        rows: rows_i64,
        values: reals,
        exactness: Exactness::SymbolicExact,
    })
}

fn real_value(vec: &[BigRational], generators: &[Generator]) -> f64 {
    vec.iter()
        .zip(generators)
        .map(|(c, gen)| c.to_f64().unwrap_or(f64::NAN) * gen.value)
        .sum()
}

/// Solves `Σ_j q_j basis_j = v` over ℚ, `None` when `v` is independent of the
/// (independent) basis vectors.
fn solve_exact(basis: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let p = basis.len();
    let g = v.len();
    // augmented g × (p+1) matrix
    let mut m: Vec<Vec<BigRational>> = (0..g)
        .map(|i| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(p);
    for col in 0..p {
        let Some(r) = (pivot_row..g).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, r);
        let inv = m[pivot_row][col].recip();
        for c in col..=p {
            m[pivot_row][c] = &m[pivot_row][c] * &inv;
        }
        for r in 0..g {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=p {
                    let delta = &factor * &m[pivot_row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[p].is_zero()) {
        return None;
    }
    let mut q = vec![BigRational::zero(); p];
    for (r, &col) in pivots.iter().enumerate() {
        q[col] = m[r][p].clone();
    }
    Some(q)
}

fn decompose_numeric(values: &[f64], tolerance: f64) -> Result<BasisDecomposition> {
    if !(tolerance > 0.0) || !tolerance.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "relation tolerance must be positive, got {tolerance}"
        )));
    }
    let mut basis: Vec<f64> = Vec::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidRelations(format!(
                "value {} = {v} is not a nonnegative real",
                i + 1
            )));
        }
        if v == 0.0 {
            rows.push(vec![0; basis.len()]);
            continue;
        }
        let mut x = Vec::with_capacity(basis.len() + 1);
        x.push(v);
        x.extend_from_slice(&basis);
        let best = if basis.is_empty() {
            None
        } else {
            find_integer_relation(&x, tolerance)?
                .into_iter()
                .find(|rel| rel.coefficients[0] != 0)
        };
        match best {
            Some(rel) if rel.residual <= tolerance => {
                // v = Σ (-c_j / c_0) b_j
                let c0 = rel.coefficients[0];
                let q: Vec<(i64, i64)> = rel.coefficients[1..].iter().map(|&c| reduce(-c, c0)).collect();
                let k = q.iter().try_fold(1i64, |acc, &(_, d)| {
                    let l = acc.lcm(&d);
                    (l > 0).then_some(l)
                });
                let k = k.ok_or(Error::Overflow)?;
                if k != 1 {
                    for b in basis.iter_mut() {
                        *b /= k as f64;
                    }
                    for r in rows.iter_mut() {
                        for c in r.iter_mut() {
                            *c = c.checked_mul(k).ok_or(Error::Overflow)?;
                        }
                    }
                }
                let row = q
                    .iter()
                    .map(|&(n, d)| n.checked_mul(k / d).ok_or(Error::Overflow))
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
            Some(rel) if rel.residual <= AMBIGUITY_FACTOR * tolerance => {
                return Err(Error::AmbiguousRelation {
                    index: i + 1,
                    residual: rel.residual,
                    tolerance,
                });
            }
            _ => {
                basis.push(v);
                for r in rows.iter_mut() {
                    r.push(0);
                }
                let mut row = vec![0; basis.len()];
                *row.last_mut().unwrap() = 1;
                rows.push(row);
            }
        }
    }
    Ok(BasisDecomposition {
        basis,
        basis_exact: None,
        rows,
        values: values.to_vec(),
        exactness: Exactness::Numeric { tolerance },
    })
}

/// `n/d` in lowest terms with a positive denominator.
fn reduce(n: i64, d: i64) -> (i64, i64) {
    let g = n.gcd(&d).max(1);
    let (n, d) = (n / g, d / g);
    if d < 0 {
        (-n, -d)
    } else {
        (n, d)
    }
}

/// Sieve of Eratosthenes.
pub(crate) fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn independent_assumption() {
        let d = BasisDecomposition::independent(vec![0.0, 0.5, 0.7]).unwrap();
        assert_eq!(d.rank(), 2);
        assert_eq!(d.rows(), &[vec![0, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(d.max_reconstruction_error(), 0.0);
        assert_eq!(d.exactness(), Exactness::AssumedIndependent);
    }

    fn r2() -> f64 {
        2f64.sqrt()
    }

    fn symbolic(gens: &[(&str, f64)], exprs: &[&str]) -> Result<BasisDecomposition> {
        let generators: Vec<Generator> = gens.iter().map(|&(n, v)| Generator::new(n, v)).collect();
        let values = exprs
            .iter()
            .map(|e| parse_linear_combination(e, &generators))
            .collect::<Result<Vec<_>>>()?;
        decompose_basis(&RelationData::Symbolic { generators, values })
    }

    #[test]
    fn one_sqrt2_sum() {
        let d = symbolic(&[("1", 1.0), ("r2", r2())], &["1", "r2", "1+r2"]).unwrap();
        assert_eq!(d.basis(), &[1.0, r2()]);
        assert_eq!(d.rows(), &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(d.exactness(), Exactness::SymbolicExact);
    }

    #[test]
    fn single_value_is_base_case() {
        let d = symbolic(&[("r2", r2())], &["r2"]).unwrap();
        assert_eq!(d.basis(), &[r2()]);
        assert_eq!(d.rows(), &[vec![1]]);
    }

    #[test]
    fn half_forces_rescaling_by_two() {
        let d = symbolic(&[("r2", r2())], &["r2", "r2/2"]).unwrap();
        assert_eq!(d.basis(), &[r2() / 2.0]);
        assert_eq!(d.basis_exact().unwrap(), &["1/2*r2".to_string()]);
        assert_eq!(d.rows(), &[vec![2], vec![1]]);
    }

    #[test]
    fn independent_inputs_give_identity_rows() {
        let d = symbolic(&[("a", 1.0), ("b", r2()), ("c", 3f64.sqrt())], &["a", "b", "c"]).unwrap();
        assert_eq!(d.rows(), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn zero_value_gets_zero_row() {
        let d = symbolic(&[("1", 1.0)], &["0", "1", "3/2"]).unwrap();
        assert_eq!(d.basis(), &[0.5]);
        assert_eq!(d.rows(), &[vec![0], vec![2], vec![3]]);
    }

    #[test]
    fn inconsistent_symbolic_data_rejected() {
        let gens = vec![Generator::new("r2", r2())];
        assert!(matches!(
            parse_linear_combination("r3", &gens),
            Err(Error::InvalidRelations(_))
        ));
        let v = SymbolicValue::generator("r2").with_declared(1.5);
        assert!(matches!(
            decompose_basis(&RelationData::Symbolic {
                generators: gens.clone(),
                values: vec![v]
            }),
            Err(Error::InvalidRelations(_))
        ));
        let dup = vec![Generator::new("x", 1.0), Generator::new("x", 2.0)];
        assert!(decompose_basis(&RelationData::Symbolic {
            generators: dup,
            values: vec![]
        })
        .is_err());
        let neg = parse_linear_combination("-r2", &gens).unwrap();
        assert!(decompose_basis(&RelationData::Symbolic {
            generators: gens,
            values: vec![neg]
        })
        .is_err());
    }

    #[test]
    fn parser_forms() {
        let gens = vec![Generator::new("1", 1.0), Generator::new("r2", r2())];
        let v = parse_linear_combination("3/4*r2 - 0.5 + 2*r2 + 1", &gens).unwrap();
        assert_eq!(v.coefficients["r2"], BigRational::new(11.into(), 4.into()));
        assert_eq!(v.coefficients["1"], BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn ordinary_matches_symbolic_induction() {
        let n = 40;
        let primes = primes_up_to(n);
        let generators: Vec<Generator> = primes
            .iter()
            .map(|p| Generator::new(format!("log{p}"), (*p as f64).ln()))
            .collect();
        let ord = BasisDecomposition::ordinary(n);
        let values = ord
            .rows()
            .iter()
            .map(|row| {
                let mut sv = SymbolicValue::default();
                for (e, p) in row.iter().zip(&primes) {
                    if *e != 0 {
                        sv = sv.with_term(&format!("log{p}"), BigRational::from_integer((*e).into()));
                    }
                }
                sv
            })
            .collect();
        let d = decompose_basis(&RelationData::Symbolic { generators, values }).unwrap();
        assert_eq!(d.rows(), ord.rows());
        assert_eq!(d.basis(), ord.basis());
        assert!(ord.max_reconstruction_error() < 1e-13);
        assert_eq!(ord.row(11).unwrap(), &[2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn numeric_mode_matches_hand_traces() {
        let d = decompose_basis(&RelationData::Numeric {
            values: vec![r2(), r2() / 2.0],
            tolerance: 1e-10,
        })
        .unwrap();
        assert_eq!(d.rows(), &[vec![2], vec![1]]);
        assert!((d.basis()[0] - r2() / 2.0).abs() < 1e-15);

        let d = decompose_basis(&RelationData::Numeric {
            values: vec![1.0, r2(), 1.0 + r2()],
            tolerance: 1e-10,
        })
        .unwrap();
        assert_eq!(d.rows(), &[vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert!(d.max_reconstruction_error() <= 1e-10);
    }

    #[test]
    fn numeric_mode_small_ordinary_prefix() {
        let values: Vec<f64> = (1..=12).map(|n| (n as f64).ln()).collect();
        let d = decompose_basis(&RelationData::Numeric {
            values,
            tolerance: 1e-12,
        })
        .unwrap();
        assert_eq!(d.rows(), BasisDecomposition::ordinary(12).rows());
    }

    #[test]
    fn numeric_mode_reports_ambiguity() {
        // 1 and 1 + 5e-11 are related by (1, -1) only up to a residual between τ and 100τ.
        let err = decompose_basis(&RelationData::Numeric {
            values: vec![1.0, 1.0 + 5e-11],
            tolerance: 1e-12,
        })
        .unwrap_err();
        assert!(matches!(err, Error::AmbiguousRelation { index: 2, .. }), "{err:?}");
    }

    #[test]
    fn linear_rows() {
        let d = BasisDecomposition::linear(4);
        assert_eq!(d.rows(), &[vec![0], vec![1], vec![2], vec![3]]);
    }

    proptest! {
        #[test]
        fn symbolic_reconstruction_exact(coeffs in prop::collection::vec((1i64..6, 1i64..6, 0i64..4, 1i64..4), 1..8)) {
            let gens = vec![Generator::new("a", 1.0), Generator::new("b", r2())];
            let values: Vec<SymbolicValue> = coeffs.iter().map(|&(p, q, s, t)| {
                SymbolicValue::default()
                    .with_term("a", BigRational::new(p.into(), q.into()))
                    .with_term("b", BigRational::new(s.into(), t.into()))
            }).collect();
            let d = decompose_basis(&RelationData::Symbolic { generators: gens, values: values.clone() }).unwrap();
            prop_assert!(d.rank() <= 2);
            prop_assert!(d.max_reconstruction_error() < 1e-9);
        }
    }
}
