//! Monte Carlo simulation of vertical limits `D^ω(σ) = Σ a_n h_{λ_n}(ω) e^{-λ_n σ}`
//! along dyadic partial sums.
//!
//! For `λ = (log n)` a character is a completely multiplicative `χ` with
//! independent uniform values `χ(p)` at the primes. Other frequencies use
//! vertical translations `h_{λ_n}(β(τ)) = e^{-iλ_n τ}`, `τ` uniform on
//! `[0, TRANSLATION_RANGE]`, which makes the run a diagnostic only.

use std::f64::consts::TAU;
use std::path::PathBuf;

use num::complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frequency::{check_condition, Condition, Frequency, Verdict};
use crate::group::block_rng;

pub const TRANSLATION_RANGE: f64 = 1e6;

/// Stream reserved for random coefficients; paths use streams `0..chars`.
const COEFF_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum CoefficientRule {
    /// `a_n = n^{-a}`.
    Power { a: f64 },
    /// Independent standard complex Gaussians times `scale`.
    RandomGaussian { scale: f64 },
    /// One coefficient per line, `re` or `re im` (comma or whitespace separated);
    /// missing indices are zero.
    File { path: PathBuf },
}

impl CoefficientRule {
    /// Parses `n^-a`, `random-gaussian(scale)` or `file:<path>`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("n^") {
            let a: f64 = rest
                .trim_start_matches('(')
                .trim_end_matches(')')
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in coefficient rule {t:?}")))?;
            return Ok(Self::Power { a: -a });
        }
        if let Some(rest) = t.strip_prefix("random-gaussian(").and_then(|r| r.strip_suffix(')')) {
            let scale: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad scale in coefficient rule {t:?}")))?;
            if !(scale > 0.0) || !scale.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "Gaussian scale must be > 0, got {scale}"
                )));
            }
            return Ok(Self::RandomGaussian { scale });
        }
        if let Some(path) = t.strip_prefix("file:") {
            return Ok(Self::File {
                path: PathBuf::from(path),
            });
        }
        Err(Error::Parse(format!(
            "unknown coefficient rule {t:?}; expected n^-a, random-gaussian(scale) or file:<path>"
        )))
    }

    /// `a_1, …, a_{n_max}`.
    pub fn coefficients(&self, n_max: usize, seed: u64) -> Result<Vec<Complex64>> {
        match self {
            Self::Power { a } => Ok((1..=n_max).map(|n| Complex64::new((n as f64).powf(-a), 0.0)).collect()),
            Self::RandomGaussian { scale } => {
                let mut rng = block_rng(seed, COEFF_STREAM);
                Ok((0..n_max)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(re, im) * (*scale / 2f64.sqrt())
                    })
                    .collect())
            }
            Self::File { path } => {
                let text = std::fs::read_to_string(path)?;
                let mut out = parse_coefficients(&text)?;
                out.resize(n_max, Complex64::new(0.0, 0.0));
                Ok(out)
            }
        }
    }
}

fn parse_coefficients(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("line {}: bad coefficient {line:?}", i + 1)))?;
        let c = match parts.as_slice() {
            [re] => Complex64::new(*re, 0.0),
            [re, im] => Complex64::new(*re, *im),
            _ => return Err(Error::Parse(format!("line {}: expected `re` or `re im`", i + 1))),
        };
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::Parse(format!("line {}: coefficient is not finite", i + 1)));
        }
        out.push(c);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelsonConfig {
    pub freq: Frequency,
    pub coeff: CoefficientRule,
    pub sigma: f64,
    pub chars: usize,
    pub n_max: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelsonPath {
    pub character: usize,
    /// `(N, |S_N − S_{N/2}|)` for `N = 2, 4, …, n_max`.
    pub increments: Vec<(usize, f64)>,
    pub final_sum: Complex64,
    /// Least-squares slope of `log increment` against `log N` (nonzero increments only).
    pub decay_slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicSummary {
    pub n: usize,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelsonSummary {
    pub dyadic: Vec<DyadicSummary>,
    /// Medians strictly decrease from each dyadic level to the next.
    pub median_decreasing: bool,
    pub median_decay_slope: Option<f64>,
    pub l2_prefix_mass: f64,
    /// Masses `Σ_{N/2 < n ≤ N} |a_n|²` strictly decrease over the last four
    /// dyadic blocks.
    pub l2_evidence: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelsonRun {
    pub config: HelsonConfig,
    pub paths: Vec<HelsonPath>,
    pub summary: HelsonSummary,
}

impl HelsonRun {
    /// Median increment at dyadic level `n`.
    pub fn median_at(&self, n: usize) -> Option<f64> {
        self.summary.dyadic.iter().find(|d| d.n == n).map(|d| d.median)
    }

    /// Long-format table: `character,n,increment`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["character", "n", "increment"]).map_err(csv_err)?;
        for p in &self.paths {
            for (n, inc) in &p.increments {
                w.write_record([p.character.to_string(), n.to_string(), format!("{inc:e}")])
                    .map_err(csv_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn smallest_prime_factors(n: usize) -> Vec<usize> {
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    spf
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn log_slope(incs: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = incs
        .iter()
        .filter(|(_, v)| *v > 0.0)
        .map(|&(n, v)| ((n as f64).ln(), v.ln()))
        .collect();
    slope(&pts)
}

/// Runs the simulation; paths are computed in parallel, path `c` drawing from
/// stream `c` of the seed.
pub fn helson_simulate(config: &HelsonConfig) -> Result<HelsonRun> {
    if !(config.sigma > 0.0) || !config.sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("σ must be > 0, got {}", config.sigma)));
    }
    if config.chars == 0 {
        return Err(Error::InvalidParameter("need at least one character".into()));
    }
    if config.n_max < 2 {
        return Err(Error::InvalidParameter("n_max must be >= 2".into()));
    }
    let lambda = config.freq.prefix(config.n_max)?;
    let coeffs = config.coeff.coefficients(config.n_max, config.seed)?;
    let damped: Vec<Complex64> = coeffs
        .iter()
        .zip(&lambda)
        .map(|(a, l)| a * (-l * config.sigma).exp())
        .collect();
    let marks: Vec<usize> = std::iter::successors(Some(2usize), |k| k.checked_mul(2))
        .take_while(|&k| k <= config.n_max)
        .collect();

    let ordinary = config.freq.is_ordinary();
    let spf = if ordinary {
        smallest_prime_factors(config.n_max)
    } else {
        Vec::new()
    };
    let phases = |c: usize| -> Vec<f64> {
        let mut rng = block_rng(config.seed, c as u64);
        if ordinary {
            // phase(1) = 0, phase(p) uniform, phase(n) = phase(p) + phase(n/p)
            let mut ph = vec![0.0; config.n_max + 1];
            for n in 2..=config.n_max {
                let p = spf[n];
                ph[n] = if p == n {
                    rng.random::<f64>() * TAU
                } else {
                    ph[p] + ph[n / p]
                };
            }
            ph.remove(0);
            ph
        } else {
            let tau = rng.random::<f64>() * TRANSLATION_RANGE;
            lambda.iter().map(|l| -l * tau).collect()
        }
    };

    let paths: Vec<HelsonPath> = (0..config.chars)
        .into_par_iter()
        .map(|c| {
            let ph = phases(c);
            let mut s = Complex64::new(0.0, 0.0);
            let mut partial = Vec::with_capacity(marks.len() + 1);
            let mut next = 0;
            for (k, (a, t)) in damped.iter().zip(&ph).enumerate() {
                if *a != Complex64::new(0.0, 0.0) {
                    s += a * Complex64::cis(*t);
                }
                let n = k + 1;
                if n == 1 || (next < marks.len() && n == marks[next]) {
                    partial.push(s);
                    if n != 1 {
                        next += 1;
                    }
                }
            }
            let increments: Vec<(usize, f64)> = marks
                .iter()
                .enumerate()
                .map(|(j, &n)| (n, (partial[j + 1] - partial[j]).norm()))
                .collect();
            HelsonPath {
                character: c,
                decay_slope: log_slope(&increments),
                increments,
                final_sum: s,
            }
        })
        .collect();

    let dyadic: Vec<DyadicSummary> = marks
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let mut v: Vec<f64> = paths.iter().map(|p| p.increments[j].1).collect();
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            let max = v.iter().copied().fold(0.0, f64::max);
            DyadicSummary {
                n,
                median: median(&mut v),
                mean,
                max,
            }
        })
        .collect();
    let median_decreasing = dyadic.windows(2).all(|w| w[1].median < w[0].median);
    let median_points: Vec<(usize, f64)> = dyadic.iter().map(|d| (d.n, d.median)).collect();

    let mut blocks = Vec::new();
    let mut lo = 1;
    for &n in &marks {
        blocks.push(coeffs[lo..n].iter().map(|a| a.norm_sqr()).sum::<f64>());
        lo = n;
    }
    let tail = &blocks[blocks.len().saturating_sub(4)..];
    let l2_evidence = tail.len() == 4 && tail.windows(2).all(|w| w[1] < w[0]);

    let mut diagnostics = Vec::new();
    if !l2_evidence {
        diagnostics.push(
            "coefficient masses do not decay over the last dyadic blocks: outside the square-summable regime".into(),
        );
    }
    if !ordinary {
        diagnostics.push(format!(
            "diagnostic only: vertical translations τ ~ U[0, {TRANSLATION_RANGE:e}] stand in for Haar characters"
        ));
        let lc = check_condition(&config.freq, Condition::Landau { delta: 1.0 }, config.n_max)?;
        if lc.verdict == Verdict::EvidenceFails {
            diagnostics.push(
                "diagnostic only: the frequency fails the Landau condition on this prefix; no convergence result covers this case".into(),
            );
        }
    }

    Ok(HelsonRun {
        config: config.clone(),
        paths,
        summary: HelsonSummary {
            dyadic,
            median_decreasing,
            median_decay_slope: log_slope(&median_points),
            l2_prefix_mass: coeffs.iter().map(|a| a.norm_sqr()).sum(),
            l2_evidence,
            diagnostics,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(coeff: CoefficientRule, n_max: usize) -> HelsonConfig {
        HelsonConfig {
            freq: Frequency::log(),
            coeff,
            sigma: 0.05,
            chars: 20,
            n_max,
            seed: 7,
        }
    }

    #[test]
    fn parse_rules() {
        assert_eq!(
            CoefficientRule::parse("n^-0.75").unwrap(),
            CoefficientRule::Power { a: 0.75 }
        );
        assert_eq!(
            CoefficientRule::parse("random-gaussian(2)").unwrap(),
            CoefficientRule::RandomGaussian { scale: 2.0 }
        );
        assert!(matches!(
            CoefficientRule::parse("file:/tmp/a.txt").unwrap(),
            CoefficientRule::File { .. }
        ));
        assert!(CoefficientRule::parse("n**2").is_err());
        assert!(CoefficientRule::parse("random-gaussian(-1)").is_err());
    }

    #[test]
    fn character_is_completely_multiplicative() {
        let spf = smallest_prime_factors(100);
        assert_eq!(spf[91], 7);
        assert_eq!(spf[97], 97);
        let cfg = config(CoefficientRule::Power { a: 0.0 }, 64);
        let run = helson_simulate(&HelsonConfig { sigma: 1e-9, ..cfg }).unwrap();
        // |S_2 − S_1| = |χ(2)| · 2^{-σ}
        assert!((run.paths[0].increments[0].1 - 2f64.powf(-1e-9)).abs() < 1e-12);
    }

    #[test]
    fn finite_polynomial_has_zero_increments() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        std::fs::write(&path, "1\n0.5 0.5\n# comment\n-1,2\n").unwrap();
        let run = helson_simulate(&config(CoefficientRule::File { path }, 256)).unwrap();
        for p in &run.paths {
            for &(n, v) in &p.increments {
                if n > 4 {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn deterministic_csv() {
        let cfg = config(CoefficientRule::Power { a: 0.75 }, 1024);
        let mut a = Vec::new();
        let mut b = Vec::new();
        helson_simulate(&cfg).unwrap().write_csv(&mut a).unwrap();
        helson_simulate(&cfg).unwrap().write_csv(&mut b).unwrap();
        assert_eq!(a, b);
        let other = helson_simulate(&HelsonConfig { seed: 8, ..cfg }).unwrap();
        let mut c = Vec::new();
        other.write_csv(&mut c).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn square_summability_evidence() {
        let run = helson_simulate(&config(CoefficientRule::Power { a: 0.75 }, 1024)).unwrap();
        assert!(run.summary.l2_evidence);
        let run = helson_simulate(&config(CoefficientRule::RandomGaussian { scale: 1.0 }, 1024)).unwrap();
        assert!(!run.summary.l2_evidence);
        assert!(!run.summary.diagnostics.is_empty());
    }

    #[test]
    fn non_ordinary_is_labelled() {
        let cfg = HelsonConfig {
            freq: Frequency::log_log(),
            ..config(CoefficientRule::Power { a: 0.75 }, 1024)
        };
        let run = helson_simulate(&cfg).unwrap();
        assert!(run
            .summary
            .diagnostics
            .iter()
            .any(|d| d.contains("vertical translations")));
    }

    #[test]
    fn rejects_nonpositive_sigma() {
        let cfg = config(CoefficientRule::Power { a: 0.75 }, 64);
        assert!(helson_simulate(&HelsonConfig { sigma: 0.0, ..cfg }).is_err());
    }
}
