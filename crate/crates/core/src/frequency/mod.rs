//! Frequencies: strictly increasing nonnegative real sequences `λ = (λ_n)`,
//! indexed from `n = 1`.
//!
//! Closed-form rules are evaluated lazily; explicit frequencies are validated
//! once on construction. The regularity conditions (Bohr's gap condition,
//! Landau's gap condition and the growth index `L(λ)`) can only be observed on
//! finite prefixes, so [`check_condition`] reports prefix statistics together
//! with a trend-based verdict rather than a proof.

mod basis;
mod lll;

pub use basis::{
    decompose_basis, parse_linear_combination, BasisDecomposition, Exactness, Generator, RelationData, SymbolicValue,
};
pub use lll::{find_integer_relation, IntegerRelation};

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the entries of a [`Frequency`] are produced.
#[derive(Clone, Debug, PartialEq)]
pub enum FrequencyRule {
    /// `λ_n = log n`, the ordinary frequency.
    Log,
    /// `λ_n = n - 1`, i.e. `(0, 1, 2, ...)`.
    Linear,
    /// `λ_n = sqrt(log n)`.
    SqrtLog,
    /// `λ_n = log log (n + 2)`; shifted so that every entry is a nonnegative real.
    LogLog,
    /// A finite, validated list.
    Explicit(Arc<[f64]>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Frequency {
    rule: FrequencyRule,
    name: String,
}

impl Frequency {
    pub fn log() -> Self {
        Self::from_rule(FrequencyRule::Log, "log(n)")
    }

    pub fn linear() -> Self {
        Self::from_rule(FrequencyRule::Linear, "n")
    }

    pub fn sqrt_log() -> Self {
        Self::from_rule(FrequencyRule::SqrtLog, "sqrt(log(n))")
    }

    pub fn log_log() -> Self {
        Self::from_rule(FrequencyRule::LogLog, "log(log(n))")
    }

    fn from_rule(rule: FrequencyRule, name: &str) -> Self {
        Self {
            rule,
            name: name.to_string(),
        }
    }

    /// Builds a finite frequency, checking that the entries are finite,
    /// nonnegative and strictly increasing.
    pub fn explicit(name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidFrequency("empty frequency".into()));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidFrequency(format!("entry {} is not finite", bad + 1)));
        }
        if values[0] < 0.0 {
            return Err(Error::InvalidFrequency(format!(
                "first entry {} is negative",
                values[0]
            )));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidFrequency(format!(
                "entries {} and {} are not strictly increasing ({} >= {})",
                i + 1,
                i + 2,
                values[i],
                values[i + 1]
            )));
        }
        Ok(Self {
            rule: FrequencyRule::Explicit(values.into()),
            name: name.into(),
        })
    }

    /// Reads one real per line; blank lines and lines starting with `#` are skipped.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::InvalidFrequency(format!(
                    "{}:{}: cannot parse {line:?} as a real",
                    path.display(),
                    lineno + 1
                ))
            })?;
            values.push(v);
        }
        Self::explicit(format!("file:{}", path.display()), values)
    }

    /// Parses the frequency mini-language: `log(n)`, `n`, `sqrt(log(n))`,
    /// `log(log(n))` or `file:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        match compact.as_str() {
            "log(n)" => Ok(Self::log()),
            "n" => Ok(Self::linear()),
            "sqrt(log(n))" => Ok(Self::sqrt_log()),
            "log(log(n))" => Ok(Self::log_log()),
            _ => match spec.trim().strip_prefix("file:") {
                Some(path) => Self::from_file(path.trim()),
                None => Err(Error::InvalidFrequency(format!(
                    "unknown frequency {spec:?}; expected log(n), n, sqrt(log(n)), log(log(n)) or file:<path>"
                ))),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rule(&self) -> &FrequencyRule {
        &self.rule
    }

    pub fn is_ordinary(&self) -> bool {
        self.rule == FrequencyRule::Log
    }

    /// Number of entries, `None` for rule-generated (infinite) frequencies.
    pub fn len(&self) -> Option<usize> {
        match &self.rule {
            FrequencyRule::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `λ_n` for `n ≥ 1`, or `None` when `n` is out of range.
    pub fn value(&self, n: usize) -> Option<f64> {
        if n == 0 {
            return None;
        }
        let x = n as f64;
        match &self.rule {
            FrequencyRule::Log => Some(x.ln()),
            FrequencyRule::Linear => Some(x - 1.0),
            FrequencyRule::SqrtLog => Some(x.ln().sqrt()),
            FrequencyRule::LogLog => Some((x + 2.0).ln().ln()),
            FrequencyRule::Explicit(v) => v.get(n - 1).copied(),
        }
    }

    pub fn contains_index(&self, n: usize) -> bool {
        n >= 1 && self.len().is_none_or(|len| n <= len)
    }

    /// `(λ_1, ..., λ_n)`.
    pub fn prefix(&self, n: usize) -> Result<Vec<f64>> {
        if let Some(len) = self.len() {
            if n > len {
                return Err(Error::InvalidFrequency(format!(
                    "prefix of length {n} requested from {} with {len} entries",
                    self.name
                )));
            }
        }
        Ok((1..=n).map(|k| self.value(k).unwrap()).collect())
    }

    /// Mini-language form used for JSON I/O; explicit frequencies have none.
    pub fn spec(&self) -> Option<String> {
        match &self.rule {
            FrequencyRule::Explicit(_) => self.name.starts_with("file:").then(|| self.name.clone()),
            _ => Some(self.name.clone()),
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// JSON form of a frequency: either a mini-language string or an explicit array.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FrequencySpec {
    Rule(String),
    Values(Vec<f64>),
}

impl FrequencySpec {
    pub fn resolve(&self) -> Result<Frequency> {
        match self {
            FrequencySpec::Rule(s) => Frequency::parse(s),
            FrequencySpec::Values(v) => Frequency::explicit("explicit", v.clone()),
        }
    }
}

impl From<&Frequency> for FrequencySpec {
    fn from(freq: &Frequency) -> Self {
        match (freq.spec(), &freq.rule) {
            (Some(s), _) => FrequencySpec::Rule(s),
            (None, FrequencyRule::Explicit(v)) => FrequencySpec::Values(v.to_vec()),
            (None, _) => unreachable!("rule frequencies always have a spec"),
        }
    }
}

impl Serialize for Frequency {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FrequencySpec::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Frequency {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        FrequencySpec::deserialize(deserializer)?
            .resolve()
            .map_err(serde::de::Error::custom)
    }
}

/// Which regularity statistic to compute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Condition {
    /// Bohr: `λ_{n+1} - λ_n ≥ C e^{-(l+δ) λ_n}`.
    Bohr { l: f64, delta: f64 },
    /// Landau: `λ_{n+1} - λ_n ≥ C e^{-e^{δ λ_n}}`.
    Landau { delta: f64 },
    /// `L(λ) = limsup (log n) / λ_n`.
    LValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EvidenceHolds,
    EvidenceFails,
    Inconclusive,
}

/// One nested-prefix statistic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    /// Prefix end (BC/LC) or dyadic block end (L-value).
    pub n: usize,
    pub value: f64,
    /// Index at which the infimum (BC/LC) or supremum (L-value) is attained.
    pub attained_at: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub prefix_len: usize,
    /// Candidate constant `C` (BC/LC) or the limsup estimate (L-value).
    pub witness: f64,
    pub trend: Vec<TrendPoint>,
    pub verdict: Verdict,
    /// L-value only: the block suprema keep growing.
    pub diverging: bool,
    pub notes: Vec<String>,
}

/// Number of trailing checkpoints the verdict rule inspects.
const VERDICT_WINDOW: usize = 3;

/// Computes the prefix statistic for `cond` over `λ_1..λ_n`.
///
/// For BC/LC the trend holds the prefix infima at the checkpoints `2, 4, 8, ...`
/// (and `n` itself). The verdict is `EvidenceHolds` when the infimum is
/// positive and unchanged over the last three checkpoints, `EvidenceFails` when
/// it strictly decreased at each of them, and `Inconclusive` otherwise.
pub fn check_condition(freq: &Frequency, cond: Condition, n: usize) -> Result<ConditionReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("prefix length must be >= 2, got {n}")));
    }
    match cond {
        Condition::Bohr { l, delta } => {
            if l <= 0.0 || delta <= 0.0 {
                return Err(Error::InvalidParameter(
                    "Bohr condition needs l > 0 and delta > 0".into(),
                ));
            }
            gap_condition(freq, cond, n, |lambda| (l + delta) * lambda)
        }
        Condition::Landau { delta } => {
            if delta <= 0.0 {
                return Err(Error::InvalidParameter("Landau condition needs delta > 0".into()));
            }
            gap_condition(freq, cond, n, |lambda| (delta * lambda).exp())
        }
        Condition::LValue => l_value(freq, n),
    }
}

/// Checkpoints `2, 4, 8, ...` below `n`, followed by `n`.
fn checkpoints(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(2usize), |k| k.checked_mul(2))
        .take_while(|&k| k < n)
        .collect();
    out.push(n);
    out
}

/// `inf_{k<n} (λ_{k+1} - λ_k) · exp(log_weight(λ_k))`, evaluated in log space.
fn gap_condition(
    freq: &Frequency,
    cond: Condition,
    n: usize,
    log_weight: impl Fn(f64) -> f64,
) -> Result<ConditionReport> {
    let lambda = freq.prefix(n)?;
    let marks = checkpoints(n);
    let mut trend = Vec::with_capacity(marks.len());
    let mut best = f64::INFINITY;
    let mut best_at = 0;
    let mut next_mark = marks.iter().peekable();

    for k in 1..n {
        let gap = lambda[k] - lambda[k - 1];
        if gap <= 0.0 {
            return Err(Error::InvalidFrequency(format!(
                "{} is not strictly increasing at index {k}",
                freq.name()
            )));
        }
        let stat = gap.ln() + log_weight(lambda[k - 1]);
        if stat < best {
            best = stat;
            best_at = k;
        }
        // prefix ending at k+1 covers gaps 1..=k
        if next_mark.peek() == Some(&&(k + 1)) {
            trend.push(TrendPoint {
                n: k + 1,
                value: best.exp(),
                attained_at: best_at,
            });
            next_mark.next();
        }
    }

    let witness = best.exp();
    let verdict = gap_verdict(&trend);
    Ok(ConditionReport {
        condition: cond,
        prefix_len: n,
        witness,
        trend,
        verdict,
        diverging: false,
        notes: Vec::new(),
    })
}

fn gap_verdict(trend: &[TrendPoint]) -> Verdict {
    if trend.len() <= VERDICT_WINDOW {
        return Verdict::Inconclusive;
    }
    let tail = &trend[trend.len() - VERDICT_WINDOW - 1..];
    let last = tail[VERDICT_WINDOW].value;
    if !(last > 0.0) {
        return Verdict::EvidenceFails;
    }
    if tail.iter().all(|p| p.value == last) {
        Verdict::EvidenceHolds
    } else if tail.windows(2).all(|w| w[1].value < w[0].value) {
        Verdict::EvidenceFails
    } else {
        Verdict::Inconclusive
    }
}

/// Growth index `L(λ) = limsup (log n)/λ_n` estimated from dyadic block suprema
/// `sup_{N/2 < k ≤ N} (log k)/λ_k`. Entries with `λ_k = 0` are skipped.
///
/// The witness is the last block supremum. Suprema that strictly increase over
/// the last three blocks are reported as a diverging trend (`L = +∞`,
/// `EvidenceFails`); otherwise the estimate is taken as finite.
pub fn l_value(freq: &Frequency, n: usize) -> Result<ConditionReport> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("prefix length must be >= 2, got {n}")));
    }
    let lambda = freq.prefix(n)?;
    if let Some(i) = lambda.windows(2).position(|w| w[1] <= w[0]) {
        return Err(Error::InvalidFrequency(format!(
            "{} is not strictly increasing at index {}",
            freq.name(),
            i + 1
        )));
    }
    let mut notes = Vec::new();
    let zeros: Vec<usize> = (1..=n).filter(|&k| lambda[k - 1] == 0.0).collect();
    if !zeros.is_empty() {
        notes.push(format!(
            "indices {zeros:?} have λ = 0 and are excluded from the supremum"
        ));
    }

    let mut trend = Vec::new();
    let mut lo = 1usize;
    while lo <= n {
        let hi = (2 * lo).min(n + 1);
        let mut sup = f64::NEG_INFINITY;
        let mut at = 0;
        for k in lo..hi {
            let l = lambda[k - 1];
            if l > 0.0 {
                let r = (k as f64).ln() / l;
                if r > sup {
                    sup = r;
                    at = k;
                }
            }
        }
        if at > 0 {
            trend.push(TrendPoint {
                n: hi - 1,
                value: sup,
                attained_at: at,
            });
        }
        lo = hi;
    }

    let Some(last) = trend.last() else {
        return Err(Error::InvalidFrequency("every entry of the prefix is zero".into()));
    };
    let witness = last.value;
    let diverging = trend.len() > VERDICT_WINDOW
        && trend[trend.len() - VERDICT_WINDOW - 1..]
            .windows(2)
            .all(|w| w[1].value > w[0].value);
    let verdict = if trend.len() <= VERDICT_WINDOW {
        Verdict::Inconclusive
    } else if diverging {
        notes.push("block suprema increase: L = +inf trend".into());
        Verdict::EvidenceFails
    } else {
        Verdict::EvidenceHolds
    };
    Ok(ConditionReport {
        condition: Condition::LValue,
        prefix_len: n,
        witness,
        trend,
        verdict,
        diverging,
        notes,
    })
}
