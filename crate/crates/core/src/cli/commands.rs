use anyhow::{bail, Context};
use num::complex::Complex64;
use serde_json::{json, Value};

use dirichlet_lab::frequency::{
    check_condition, decompose_basis, l_value, parse_linear_combination, BasisDecomposition, Condition, Frequency,
    FrequencyRule, Generator, RelationData, Verdict,
};
use dirichlet_lab::group::{
    besicovitch_error_bound, besicovitch_mean, build_model, lp_norm, CharacterPoint, GroupModel, NormMethod,
};
use dirichlet_lab::helson::{helson_simulate, CoefficientRule, HelsonConfig};
use dirichlet_lab::kernels::{
    decay_bound_check, decay_outer_check, monotonicity_check, perron_line_integral, perron_transform,
    perron_transform_quadrature, QuadratureSpec,
};
use dirichlet_lab::maximal::{
    carleson_transference_check, estimate_on_model, hl_flow, partial_sum_ratio, rational_direction, smax_u,
    tmax_weighted, Exponent, HlGrid, TorusPolynomial,
};
use dirichlet_lab::report::CheckRecord;
use dirichlet_lab::series::{sigma_u_estimate, DirichletPolynomial, SupEstimator, TorusSup};
use dirichlet_lab::Error;

use super::args::*;
use super::{Config, Outcome, Table};

pub fn dispatch(cmd: &Command, config: &Config, seed: u64) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Freq(FreqCmd::Check(a)) => freq_check(config.merge(a)?),
        Command::Freq(FreqCmd::Basis(a)) => freq_basis(config.merge(a)?),
        Command::Series(SeriesCmd::Abscissa(a)) => series_abscissa(config.merge(a)?, seed),
        Command::Series(SeriesCmd::Abschnitt(a)) => series_abschnitt(config.merge(a)?, seed),
        Command::Group(GroupCmd::Norm(a)) => group_norm(config.merge(a)?, seed),
        Command::Group(GroupCmd::Besicovitch(a)) => group_besicovitch(config.merge(a)?, seed),
        Command::Kernel(KernelCmd::Perron(a)) => kernel_perron(config.merge(a)?),
        Command::Kernel(KernelCmd::Bounds(a)) => kernel_bounds(config.merge(a)?),
        Command::Maximal(MaximalCmd::Carleson(a)) => maximal_carleson(config.merge(a)?, seed),
        Command::Maximal(MaximalCmd::Smax(a)) => maximal_smax(config.merge(a)?, seed),
        Command::Maximal(MaximalCmd::Ratio(a)) => maximal_ratio(config.merge(a)?, seed),
        Command::Helson(HelsonCmd::Simulate(a)) => helson(config.merge(a)?, seed),
    }
}

const DEFAULT_TOL: f64 = 1e-9;

fn frequency(spec: Option<&str>) -> anyhow::Result<Frequency> {
    let spec = spec.unwrap_or("log(n)");
    Frequency::parse(spec).with_context(|| format!("bad frequency {spec:?}"))
}

fn polynomial(freq: &Frequency, coeff: Option<&str>, n: usize, seed: u64) -> anyhow::Result<DirichletPolynomial> {
    let rule = CoefficientRule::parse(coeff.unwrap_or("n^-0"))?;
    let coeffs = rule.coefficients(n, seed)?;
    Ok(DirichletPolynomial::from_coefficients(freq.clone(), &coeffs)?)
}

fn decomposition(
    freq: &Frequency,
    n: usize,
    tol: Option<f64>,
    independent: Option<bool>,
) -> anyhow::Result<BasisDecomposition> {
    let exact = matches!(freq.rule(), FrequencyRule::Log | FrequencyRule::Linear);
    if independent.unwrap_or(false) && !exact {
        return Ok(BasisDecomposition::independent(freq.prefix(n)?)?);
    }
    BasisDecomposition::for_frequency(freq, n, tol.unwrap_or(DEFAULT_TOL)).map_err(|e| match e {
        Error::AmbiguousRelation { .. } => {
            anyhow::Error::new(e).context("pass --assume-independent to skip relation detection")
        }
        e => e.into(),
    })
}

fn model(freq: &Frequency, n: usize, tol: Option<f64>, independent: Option<bool>) -> anyhow::Result<GroupModel> {
    Ok(build_model(&decomposition(freq, n, tol, independent)?)?)
}

fn list(text: &str) -> anyhow::Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number {s:?} in {text:?}"))
        })
        .collect()
}

fn exponent(text: &str) -> anyhow::Result<f64> {
    match text.trim() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        t => t.parse().with_context(|| format!("bad exponent {t:?}")),
    }
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

fn freq_check((a, config): (FreqCheck, Value)) -> anyhow::Result<Outcome> {
    let freq = frequency(a.freq.as_deref())?;
    let n = a.n.unwrap_or(1000);
    let report = match a.cond.as_deref().unwrap_or("bc") {
        "bc" => check_condition(
            &freq,
            Condition::Bohr {
                l: a.l.unwrap_or(1.0),
                delta: a.delta.unwrap_or(0.1),
            },
            n,
        )?,
        "lc" => check_condition(
            &freq,
            Condition::Landau {
                delta: a.delta.unwrap_or(1.0),
            },
            n,
        )?,
        "l" => l_value(&freq, n)?,
        other => bail!("unknown condition {other:?}; expected bc, lc or l"),
    };
    let inputs = json!({ "freq": freq.name(), "n": n });
    let mut checks = vec![
        CheckRecord::info("witness", inputs.clone(), json!(report.witness)),
        CheckRecord::info("verdict", inputs.clone(), json!(report.verdict)),
    ];
    if let Some(expect) = &a.expect {
        let want = match expect.as_str() {
            "holds" => Verdict::EvidenceHolds,
            "fails" => Verdict::EvidenceFails,
            "inconclusive" => Verdict::Inconclusive,
            other => bail!("unknown verdict {other:?}; expected holds, fails or inconclusive"),
        };
        checks.push(CheckRecord::asserted(
            "expected-verdict",
            inputs,
            json!(report.verdict),
            json!(want),
            report.verdict == want,
        ));
    }
    let mut table = Table::new(&["n", "value", "attained_at"]);
    for p in &report.trend {
        table.push(vec![p.n.to_string(), fmt(p.value), p.attained_at.to_string()]);
    }
    Ok(Outcome {
        config,
        checks,
        data: serde_json::to_value(&report)?,
        table: Some(table),
    })
}

fn freq_basis((a, config): (FreqBasis, Value)) -> anyhow::Result<Outcome> {
    let tol = a.tol.unwrap_or(DEFAULT_TOL);
    let decomp = if a.generators.is_empty() && a.values.is_empty() {
        let freq = frequency(a.freq.as_deref())?;
        BasisDecomposition::for_frequency(&freq, a.n.unwrap_or(32), tol)?
    } else {
        let generators = a
            .generators
            .iter()
            .map(|g| {
                let (name, value) = g
                    .split_once('=')
                    .with_context(|| format!("generator {g:?} is not name=value"))?;
                Ok(Generator {
                    name: name.trim().to_string(),
                    value: value
                        .trim()
                        .parse()
                        .with_context(|| format!("bad generator value in {g:?}"))?,
                })
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let values = a
            .values
            .iter()
            .map(|v| parse_linear_combination(v, &generators))
            .collect::<Result<Vec<_>, _>>()?;
        decompose_basis(&RelationData::Symbolic { generators, values })?
    };
    let err = decomp.max_reconstruction_error();
    let scale = decomp.values().iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let checks = vec![
        CheckRecord::info("rank", json!({}), json!(decomp.rank())),
        CheckRecord::asserted(
            "reconstruction",
            json!({ "tol": tol }),
            json!(err),
            json!(tol * scale),
            err <= tol * scale,
        ),
    ];
    let mut table = Table::new(&["index", "value", "row"]);
    for i in 0..decomp.len() {
        let row = decomp.row(i).unwrap_or(&[]);
        let row: Vec<String> = row.iter().map(|r| r.to_string()).collect();
        table.push(vec![(i + 1).to_string(), fmt(decomp.values()[i]), row.join(" ")]);
    }
    Ok(Outcome {
        config,
        checks,
        data: serde_json::to_value(&decomp)?,
        table: Some(table),
    })
}

fn series_abscissa((a, config): (SeriesAbscissa, Value), seed: u64) -> anyhow::Result<Outcome> {
    let freq = frequency(a.freq.as_deref())?;
    let n = a.n.unwrap_or(1024);
    let rule = CoefficientRule::parse(a.coeff.as_deref().unwrap_or("n^-0"))?;
    let coeffs = rule.coefficients(n, seed)?;
    let lambda = freq.prefix(n)?;
    let mut est = SupEstimator::default();
    if let Some(t) = a.t_max {
        est.t_max = t;
    }
    if let Some(g) = a.grid {
        est.grid_points = g;
    }
    let samples = a.torus_samples.unwrap_or(0);
    if samples > 0 {
        est.torus = Some(TorusSup {
            model: model(&freq, n, a.tol, a.assume_independent)?,
            samples,
            seed,
        });
    }
    let r = sigma_u_estimate(&coeffs, &lambda, n, &est)?;
    let checks = vec![
        CheckRecord::info("estimate", json!({ "freq": freq.name(), "n": n }), json!(r.estimate)),
        CheckRecord::info("no-growth", json!({}), json!(r.no_growth)),
    ];
    let mut table = Table::new(&["n", "lambda_n", "grid_sup", "grid_argmax", "torus_sup", "ratio"]);
    for c in &r.checkpoints {
        table.push(vec![
            c.n.to_string(),
            fmt(c.lambda_n),
            fmt(c.grid_sup),
            fmt(c.grid_argmax),
            c.torus_sup.map(fmt).unwrap_or_default(),
            c.ratio.map(fmt).unwrap_or_default(),
        ]);
    }
    Ok(Outcome {
        config,
        checks,
        data: serde_json::to_value(&r)?,
        table: Some(table),
    })
}

fn series_abschnitt((a, config): (SeriesAbschnitt, Value), seed: u64) -> anyhow::Result<Outcome> {
    let d = match &a.poly {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            DirichletPolynomial::from_json(&text)?
        }
        None => polynomial(
            &frequency(a.freq.as_deref())?,
            a.coeff.as_deref(),
            a.n.unwrap_or(10),
            seed,
        )?,
    };
    let top = d.max_index().unwrap_or(1);
    let decomp = decomposition(d.frequency(), top, a.tol, a.assume_independent)?;
    let cutoff = a.cutoff.unwrap_or(1);
    let cut = d.abschnitt(&decomp, cutoff)?;
    let kept: Vec<usize> = cut.terms().map(|(n, _)| n).collect();
    let checks = vec![CheckRecord::info("kept", json!({ "cutoff": cutoff }), json!(kept))];
    let mut table = Table::new(&["n", "re", "im"]);
    for (n, c) in cut.terms() {
        table.push(vec![n.to_string(), fmt(c.re), fmt(c.im)]);
    }
    Ok(Outcome {
        config,
        checks,
        data: serde_json::from_str(&cut.to_json()?)?,
        table: Some(table),
    })
}

fn norm_method(
    method: Option<&str>,
    samples: Option<usize>,
    t_max: Option<f64>,
    step: Option<f64>,
) -> anyhow::Result<NormMethod> {
    Ok(match method.unwrap_or("haar") {
        "haar" => NormMethod::HaarMc {
            samples: samples.unwrap_or(100_000),
        },
        "flow" => NormMethod::FlowAverage {
            t_max: t_max.unwrap_or(1000.0),
            step: step.unwrap_or(0.01),
        },
        other => bail!("unknown method {other:?}; expected haar or flow"),
    })
}

fn group_norm((a, config): (GroupNorm, Value), seed: u64) -> anyhow::Result<Outcome> {
    let freq = frequency(a.freq.as_deref())?;
    let n = a.n.unwrap_or(16);
    let d = polynomial(&freq, a.coeff.as_deref(), n, seed)?;
    let m = model(&freq, n, a.tol, a.assume_independent)?;
    let p = exponent(a.p.as_deref().unwrap_or("2"))?;
    let method = norm_method(a.method.as_deref(), a.samples, a.t_max, a.step)?;
    let est = lp_norm(&d, &m, p, method, seed)?;
    let parseval: f64 = d.terms().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
    let mut checks = vec![CheckRecord::info("norm", json!({ "p": a.p, "n": n }), json!(est.value))];
    if p == 2.0 {
        checks.push(
            CheckRecord::info("parseval", json!({}), json!(parseval))
                .with_note("(Σ|a_n|²)^{1/2}, the exact L2 norm on the group"),
        );
    }
    Ok(Outcome {
        config,
        checks,
        data: serde_json::to_value(&est)?,
        table: None,
    })
}

fn group_besicovitch((a, config): (GroupBesicovitch, Value), seed: u64) -> anyhow::Result<Outcome> {
    let freq = frequency(a.freq.as_deref())?;
    let n = a.n.unwrap_or(16);
    let d = polynomial(&freq, a.coeff.as_deref(), n, seed)?;
    let m = model(&freq, n, a.tol, a.assume_independent)?;
    let omega = match &a.point {
        Some(p) => CharacterPoint::new(list(p)?)?,
        None => m.identity(),
    };
    let t = a.t.unwrap_or(1000.0);
    let mean = besicovitch_mean(&d, &m, &omega, t)?;
    let constant: Complex64 = d.terms().filter(|&(k, _)| d.lambda(k) == 0.0).map(|(_, c)| c).sum();
    let bound = besicovitch_error_bound(&d, t);
    let err = (mean - constant).norm();
    let checks = vec![CheckRecord::asserted(
        "besicovitch-error",
        json!({ "t": t }),
        json!(err),
        json!(bound),
        err <= bound * (1.0 + 1e-12) + 1e-15,
    )];
    Ok(Outcome {
        config,
        checks,
        data: json!({ "mean": [mean.re, mean.im], "constant_term": [constant.re, constant.im], "error_bound": bound }),
        table: None,
    })
}

fn accuracy_failure(name: &str, inputs: Value, e: Error, tol: f64) -> anyhow::Result<CheckRecord> {
    match e {
        Error::AccuracyNotAchieved {
            estimate, error_bound, ..
        } => Ok(CheckRecord::asserted(name, inputs, json!(estimate), json!(tol), false)
            .with_note(format!("quadrature error bound {error_bound:e} exceeds the tolerance"))),
        other => Err(other.into()),
    }
}

fn kernel_perron((a, config): (KernelPerron, Value)) -> anyhow::Result<Outcome> {
    let tol = a.tol.unwrap_or(1e-3);
    let spec = QuadratureSpec::with_tolerance(tol);
    let k = a.k.unwrap_or(1.0);
    if let Some(y) = a.y {
        let alpha = a.alpha.unwrap_or(1.0);
        let inputs = json!({ "y": y, "k": k, "alpha": alpha });
        let (check, data) = match perron_line_integral(y, k, alpha, spec) {
            Ok(r) => {
                let diff = (r.estimate - r.closed_form).abs();
                (
                    CheckRecord::asserted(
                        "line-integral",
                        inputs,
                        json!(r.estimate),
                        json!(r.closed_form),
                        diff <= tol,
                    ),
                    serde_json::to_value(r)?,
                )
            }
            Err(e) => (accuracy_failure("line-integral", inputs, e, tol)?, Value::Null),
        };
        return Ok(Outcome {
            config,
            checks: vec![check],
            data,
            table: None,
        });
    }
    let u = a.u.unwrap_or(1.0);
    let x = a.x.context("--x is required unless --y selects the line integral")?;
    let lambda = list(a.lambda.as_deref().unwrap_or("1"))?;
    let coeffs = match &a.coeffs {
        Some(c) => list(c)?,
        None => vec![1.0; lambda.len()],
    };
    if coeffs.len() != lambda.len() {
        bail!("{} coefficients for {} frequencies", coeffs.len(), lambda.len());
    }
    let freq = Frequency::explicit("explicit", lambda.clone())?;
    let coeffs: Vec<Complex64> = coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    let d = DirichletPolynomial::from_coefficients(freq, &coeffs)?;
    let closed = perron_transform(&d, u, k, x)?;
    let inputs = json!({ "u": u, "k": k, "x": x, "lambda": lambda });
    let (check, data) = match perron_transform_quadrature(&d, u, k, x, spec) {
        Ok(q) => {
            let diff = (q.value - closed).norm();
            (
                CheckRecord::asserted(
                    "perron-transform",
                    inputs,
                    json!(q.value.re),
                    json!(closed.re),
                    diff <= tol,
                ),
                json!({ "closed_form": [closed.re, closed.im], "quadrature": q }),
            )
        }
        Err(e) => (
            accuracy_failure("perron-transform", inputs, e, tol)?,
            json!({ "closed_form": [closed.re, closed.im] }),
        ),
    };
    Ok(Outcome {
        config,
        checks: vec![check],
        data,
        table: None,
    })
}

fn kernel_bounds((a, config): (KernelBounds, Value)) -> anyhow::Result<Outcome> {
    let u = a.u.unwrap_or(1.0);
    let eps = a.eps.unwrap_or(1.0);
    let ys = match &a.y {
        Some(y) => list(y)?,
        None => [5.0, -5.0, 8.0, -8.0, 16.0, -16.0].iter().map(|m| m * u).collect(),
    };
    let spec = QuadratureSpec::with_tolerance(a.tol.unwrap_or(1e-10));
    let mut checks = Vec::new();
    let mut pointwise = Vec::new();
    for &y in &ys {
        let c = decay_bound_check(u, eps, y, spec)?;
        checks.push(CheckRecord::asserted(
            format!("decay-bound y={y}"),
            json!({ "u": u, "eps": eps, "y": y, "branch": c.branch }),
            json!(c.value),
            json!(c.bound),
            c.holds,
        ));
        pointwise.push(c);
    }
    let mut monotone = Vec::new();
    for y in [5.0 * u, -5.0 * u] {
        let r = monotonicity_check(u, y, 1000)?;
        checks.push(
            CheckRecord::info(
                format!("monotone {:?} y={y}", r.function),
                json!({ "u": u, "y": y }),
                json!(r.increasing),
            )
            .with_note("increasing on the grid over [0, 1/|y|]"),
        );
        monotone.push(r);
    }
    let outer_max = a.outer_max.unwrap_or(1e12);
    let mut table = Table::new(&["y", "integral", "lower_bound"]);
    let outer = if outer_max > 0.0 {
        let r = decay_outer_check(u, eps, outer_max, QuadratureSpec::with_tolerance(1e-6))?;
        for t in &r.truncations {
            table.push(vec![fmt(t.y), fmt(t.integral), fmt(t.lower_bound)]);
        }
        let last = r.truncations.last().map_or(0.0, |t| t.integral);
        let mut rec = CheckRecord::asserted(
            "outer-integral",
            json!({ "u": u, "eps": eps, "y_max": outer_max }),
            json!(last),
            json!(r.bound),
            r.holds,
        );
        if let Some(y) = r.exceeded_at {
            rec = rec.with_note(format!(
                "truncated integral exceeds the bound at Y = {y:e}; its lower estimate alone exceeds it beyond Y = {:e}",
                r.certified_exceeded_at
            ));
        }
        checks.push(rec);
        Some(r)
    } else {
        None
    };
    Ok(Outcome {
        config,
        checks,
        data: json!({ "pointwise": pointwise, "monotonicity": monotone, "outer": outer }),
        table: Some(table),
    })
}

fn maximal_carleson((a, config): (MaximalCarleson, Value), seed: u64) -> anyhow::Result<Outcome> {
    let x = list(a.x.as_deref().unwrap_or("1,1.4142135623730951,1.7320508075688772"))?;
    let f = match &a.poly {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            serde_json::from_str::<TorusPolynomial>(&text).context("bad torus polynomial JSON")?
        }
        None => TorusPolynomial::random(x.len(), a.terms.unwrap_or(8), a.degree.unwrap_or(3), seed)?,
    };
    if f.dim() != x.len() {
        bail!(
            "direction has {} coordinates, polynomial has dimension {}",
            x.len(),
            f.dim()
        );
    }
    let dir = rational_direction(&x, a.max_den.unwrap_or(1_000_000))?;
    let permuted = TorusPolynomial::new(
        f.dim(),
        f.terms().iter().map(|(alpha, c)| (dir.permute(alpha), *c)).collect(),
    )?;
    let r = carleson_transference_check(&permuted, &dir.permuted_q(), a.samples.unwrap_or(100_000), seed)?;
    let checks = vec![
        CheckRecord::asserted(
            "dominance",
            json!({}),
            json!(r.dominance_violations),
            json!(0),
            r.dominance_violations == 0,
        ),
        CheckRecord::asserted(
            "transference",
            json!({ "q": dir.q, "denominator": dir.denominator }),
            json!([r.direct.estimate, r.direct.error_bar]),
            json!([r.substituted.estimate, r.substituted.error_bar]),
            r.agree,
        )
        .with_note("agreement means |direct − substituted| ≤ 2·(sum of the two error bars)"),
        CheckRecord::info("norm-of-f", json!({}), json!(r.plain.estimate)),
    ];
    Ok(Outcome {
        config,
        checks,
        data: json!({ "direction": dir, "check": r }),
        table: None,
    })
}

fn maximal_smax((a, config): (MaximalSmax, Value), seed: u64) -> anyhow::Result<Outcome> {
    let freq = frequency(a.freq.as_deref())?;
    let n = a.n.unwrap_or(64);
    let d = polynomial(&freq, a.coeff.as_deref(), n, seed)?;
    let m = model(&freq, n, a.tol, a.assume_independent)?;
    let u = a.u.unwrap_or(1.0);
    let exp = match a.norm.as_deref().unwrap_or("weak") {
        "weak" => Exponent::WeakL1,
        p => Exponent::Lp(exponent(p)?),
    };
    let samples = a.samples.unwrap_or(10_000);
    let operator = a.operator.clone().unwrap_or_else(|| "smax".into());
    let est = match operator.as_str() {
        "smax" => estimate_on_model("smax", &m, exp, samples, seed, |w| smax_u(&d, &m, u, w))?,
        "tmax" => {
            let weights: Vec<f64> = (1..=n).map(|k| (-u * d.lambda(k)).exp()).collect();
            estimate_on_model("tmax", &m, exp, samples, seed, |w| tmax_weighted(&d, &m, &weights, w))?
        }
        "hl" => {
            let grid = HlGrid {
                step: a.step.unwrap_or(0.05),
                levels: a.levels.unwrap_or(8),
                centres: a.centres.unwrap_or(100),
            };
            estimate_on_model("hl", &m, exp, samples, seed, |w| hl_flow(&d, &m, w, &grid))?
        }
        other => bail!("unknown operator {other:?}; expected smax, tmax or hl"),
    };
    let checks = vec![CheckRecord::info(
        format!("{operator}-norm"),
        json!({ "u": u, "n": n, "samples": samples }),
        json!([est.estimate, est.error_bar]),
    )];
    Ok(Outcome {
        config,
        checks,
        data: serde_json::to_value(&est)?,
        table: None,
    })
}

fn maximal_ratio((a, config): (MaximalRatio, Value), seed: u64) -> anyhow::Result<Outcome> {
    let freq = frequency(a.freq.as_deref())?;
    let n = a.n.unwrap_or(64);
    let cut = a.cut.unwrap_or(n / 2).max(1);
    let d = polynomial(&freq, a.coeff.as_deref(), n, seed)?;
    let m = model(&freq, n, a.tol, a.assume_independent)?;
    let k = match a.k {
        Some(k) => k,
        None => {
            let l = d.lambda(cut);
            if l > 0.0 {
                (1.0 / l).min(1.0)
            } else {
                1.0
            }
        }
    };
    let method = norm_method(
        Some(a.method.as_deref().unwrap_or("flow")),
        a.samples,
        a.t_max.or(Some(200.0)),
        a.step,
    )?;
    let r = partial_sum_ratio(&d, cut, k, &m, method, seed)?;
    let checks = vec![
        CheckRecord::info("lhs", json!({ "n": cut, "k": k }), json!(r.lhs)),
        CheckRecord::info("scale", json!({}), json!(r.scale)),
        CheckRecord::info("empirical-constant", json!({}), json!(r.constant)),
    ];
    Ok(Outcome {
        config,
        checks,
        data: serde_json::to_value(&r)?,
        table: None,
    })
}

fn helson((a, config): (HelsonSimulate, Value), seed: u64) -> anyhow::Result<Outcome> {
    let cfg = HelsonConfig {
        freq: frequency(a.freq.as_deref())?,
        coeff: CoefficientRule::parse(a.coeff.as_deref().unwrap_or("n^-0.75"))?,
        sigma: a.sigma.unwrap_or(0.05),
        chars: a.chars.unwrap_or(100),
        n_max: a.nmax.unwrap_or(16384),
        seed,
    };
    let run = helson_simulate(&cfg)?;
    let mut checks: Vec<CheckRecord> = run
        .summary
        .dyadic
        .iter()
        .map(|d| CheckRecord::info(format!("median N={}", d.n), json!({}), json!(d.median)))
        .collect();
    checks.push(CheckRecord::info(
        "medians-decreasing",
        json!({}),
        json!(run.summary.median_decreasing),
    ));
    let top = run.summary.dyadic.last().map(|d| d.n).unwrap_or(0);
    let regular = cfg.freq.is_ordinary() && run.summary.l2_evidence;
    if let (true, Some(hi), Some(lo)) = (regular, run.median_at(top), run.median_at(top / 16)) {
        checks.push(CheckRecord::asserted(
            format!("median N={top} < median N={}", top / 16),
            json!({}),
            json!(hi),
            json!(lo),
            hi < lo,
        ));
    }
    for note in &run.summary.diagnostics {
        checks.push(CheckRecord::info("diagnostic", json!({}), json!(note)));
    }
    let mut buf = Vec::new();
    run.write_csv(&mut buf)?;
    let mut table = Table::new(&["character", "n", "increment"]);
    for line in String::from_utf8(buf)?.lines().skip(1) {
        table.push(line.split(',').map(str::to_string).collect());
    }
    Ok(Outcome {
        config,
        checks,
        data: json!({ "summary": run.summary, "paths": run.paths.len() }),
        table: Some(table),
    })
}
