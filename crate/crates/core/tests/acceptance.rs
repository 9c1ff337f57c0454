//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use dirichlet_lab::frequency::{check_condition, l_value, Condition, Frequency, Verdict};
use dirichlet_lab::group::{besicovitch_error_bound, besicovitch_mean, lp_norm, GroupModel, NormMethod};
use dirichlet_lab::helson::{helson_simulate, CoefficientRule, HelsonConfig};
use dirichlet_lab::kernels::{
    decay_bound_check, decay_outer_check, perron_line_integral, perron_transform, perron_transform_quadrature,
    QuadratureSpec,
};
use dirichlet_lab::maximal::{carleson_transference_check, gcd, mat_vec, unimodular_plan, TorusPolynomial};
use dirichlet_lab::series::{abel_majorant, sigma_u_estimate, DirichletPolynomial, SupEstimator};

const PERRON_TOL: f64 = 1e-3;
const PERRON_TIME: Duration = Duration::from_secs(10);
const LINE_TIME: Duration = Duration::from_secs(30);
const ABEL_INSTANCES: usize = 1000;
const ABEL_TERMS: usize = 32;
const LATTICE_PLANS: usize = 500;
const LATTICE_VECTORS: usize = 1000;
const CARLESON_SAMPLES: usize = 100_000;
const CARLESON_ERROR_BARS: f64 = 2.0;
const HAAR_SAMPLES: usize = 100_000;
const PARSEVAL_REL: f64 = 0.02;
const FLOW_REL: f64 = 0.03;
const HELSON_TIME: Duration = Duration::from_secs(120);
const OUTER_Y_MAX: f64 = 1e12;

struct Line {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Line);

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn perron_identity() -> Line {
    let start = Instant::now();
    let freq = Frequency::explicit("(0,1)", vec![0.0, 1.0]).unwrap();
    let d = DirichletPolynomial::from_coefficients(freq, &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let mut worst: f64 = 0.0;
    for x in [0.5, 1.5, 2.5] {
        let exact = perron_transform(&d, 1.0, 1.0, x).unwrap();
        match perron_transform_quadrature(&d, 1.0, 1.0, x, QuadratureSpec::with_tolerance(PERRON_TOL / 10.0)) {
            Ok(q) => worst = worst.max((q.value - exact).norm()),
            Err(e) => return line(false, format!("x={x}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    line(
        worst <= PERRON_TOL && elapsed < PERRON_TIME,
        format!("max |quadrature − closed form| = {worst:.2e} (tol {PERRON_TOL:e}), {elapsed:.2?}"),
    )
}

fn perron_line() -> Line {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for y in [-1.0, 0.0, 0.5, 1.0, 2.0] {
        for k in [0.5, 1.0, 2.0] {
            match perron_line_integral(y, k, 1.0, QuadratureSpec::with_tolerance(PERRON_TOL / 10.0)) {
                Ok(r) => {
                    let exact = if y >= 0.0 { f64::powf(y, k) } else { 0.0 };
                    worst = worst.max((r.estimate - exact).abs());
                }
                Err(e) => return line(false, format!("y={y}, k={k}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    line(
        worst <= PERRON_TOL && elapsed < LINE_TIME,
        format!("max |estimate − y^k| = {worst:.2e} over 15 pairs (tol {PERRON_TOL:e}), {elapsed:.2?}"),
    )
}

fn decay_lemma() -> Line {
    let spec = QuadratureSpec::with_tolerance(1e-10);
    let mut pointwise = 0;
    let mut pointwise_fail = Vec::new();
    let mut outer_fail = Vec::new();
    for u in [0.5, 1.0, 2.0] {
        for eps in [0.5, 1.0] {
            for m in [5.0, -5.0, 8.0, -8.0, 16.0, -16.0] {
                let r = decay_bound_check(u, eps, m * u, spec).unwrap();
                pointwise += 1;
                if !r.holds {
                    pointwise_fail.push(format!("(u={u}, ε={eps}, y={})", m * u));
                }
            }
            let r = decay_outer_check(u, eps, OUTER_Y_MAX, QuadratureSpec::with_tolerance(1e-6)).unwrap();
            if !r.holds {
                let at = r.exceeded_at.map_or("beyond 1e12".to_string(), |y| format!("{y:.1e}"));
                outer_fail.push(format!("(u={u}, ε={eps}: bound {:.2} exceeded at Y={at})", r.bound));
            }
        }
    }
    let violations = pointwise_fail.len() + outer_fail.len();
    let mut detail = format!(
        "pointwise {}/{pointwise} hold; outer integral violations {}/6",
        pointwise - pointwise_fail.len(),
        outer_fail.len()
    );
    for f in pointwise_fail.iter().chain(&outer_fail) {
        detail.push_str("\n      ");
        detail.push_str(f);
    }
    line(violations == 0, detail)
}

fn abel_lemma() -> Line {
    let lambda: Vec<f64> = (1..=ABEL_TERMS).map(|n| (n as f64).ln()).collect();
    let mut violations = Vec::new();
    let mut worst: f64 = 0.0;
    for (i, u) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        for (j, eps) in [0.5, 1.0, 2.0].into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + 10 * i as u64 + j as u64);
            for _ in 0..ABEL_INSTANCES {
                let a: Vec<Complex64> = (0..ABEL_TERMS)
                    .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                let r = abel_majorant(&a, &lambda, u, eps).unwrap();
                worst = worst.max(r.ratio() / r.constant);
                if !r.holds {
                    violations.push((u, eps));
                }
            }
        }
    }
    line(
        violations.is_empty(),
        format!(
            "{} violations in 9×{ABEL_INSTANCES} instances; max lhs/(C(u)·rhs) = {worst:.3}",
            violations.len()
        ),
    )
}

fn lattice() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad_plans = 0;
    let mut bad_vectors = 0;
    let mut plans = 0;
    while plans < LATTICE_PLANS {
        let dim = rng.random_range(2..=6);
        let q: Vec<i64> = (0..dim).map(|_| rng.random_range(-1000..=1000)).collect();
        if gcd(q[0], q[1]) != 1 {
            continue;
        }
        plans += 1;
        let plan = unimodular_plan(&q, 1).unwrap();
        if plan.determinant().unwrap() != 1 || !plan.verify().unwrap() {
            bad_plans += 1;
        }
        for _ in 0..LATTICE_VECTORS / LATTICE_PLANS {
            let beta: Vec<i64> = (0..dim).map(|_| rng.random_range(-10_000..=10_000)).collect();
            let x = mat_vec(plan.inverse(), &beta).unwrap();
            let dot: i128 = q.iter().zip(&x).map(|(&a, &b)| a as i128 * b as i128).sum();
            if dot != beta[0] as i128 {
                bad_vectors += 1;
            }
        }
    }
    line(
        bad_plans == 0 && bad_vectors == 0,
        format!(
            "{bad_plans}/{LATTICE_PLANS} plans fail det/inverse, {bad_vectors}/{LATTICE_VECTORS} fail <q, A⁻¹β> = β₁"
        ),
    )
}

fn carleson() -> Line {
    let directions: [[i64; 3]; 3] = [[2, 3, 5], [1, 4, 9], [5, -3, 7]];
    let mut disagreements = Vec::new();
    let mut dominance = 0;
    let mut worst: f64 = 0.0;
    for p in 0..5u64 {
        let f = TorusPolynomial::random(3, 8, 3, 100 + p).unwrap();
        for (k, q) in directions.iter().enumerate() {
            let r = carleson_transference_check(&f, q, CARLESON_SAMPLES, 10 * p + k as u64).unwrap();
            let diff = (r.direct.estimate - r.substituted.estimate).abs();
            let bars = r.direct.error_bar + r.substituted.error_bar;
            worst = worst.max(diff / bars);
            dominance += r.dominance_violations;
            if diff > CARLESON_ERROR_BARS * bars {
                disagreements.push(format!("poly {p}, q={q:?}"));
            }
        }
    }
    line(
        disagreements.is_empty() && dominance == 0,
        format!(
            "{} of 15 pairs disagree; max |Δ|/(σ₁+σ₂) = {worst:.2}; {dominance} samples with M_x f < |f| {:?}",
            disagreements.len(),
            disagreements
        ),
    )
}

fn group_model() -> Line {
    let n = 12;
    let m = GroupModel::ordinary(n).unwrap();
    let coeffs = CoefficientRule::parse("random-gaussian(1)")
        .unwrap()
        .coefficients(n, 3)
        .unwrap();
    let d = DirichletPolynomial::from_coefficients(Frequency::log(), &coeffs).unwrap();
    let parseval = coeffs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let haar2 = lp_norm(&d, &m, 2.0, NormMethod::HaarMc { samples: HAAR_SAMPLES }, 11).unwrap();
    let parseval_rel = (haar2.value - parseval).abs() / parseval;

    let mut flow_rel: f64 = 0.0;
    for p in [1.0, 2.0, 4.0] {
        let haar = lp_norm(&d, &m, p, NormMethod::HaarMc { samples: HAAR_SAMPLES }, 12).unwrap();
        let flow = lp_norm(&d, &m, p, NormMethod::FlowAverage { t_max: 1e4, step: 0.01 }, 0).unwrap();
        flow_rel = flow_rel.max((flow.value - haar.value).abs() / haar.value);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut besicovitch_ok = true;
    let mut worst_ratio: f64 = 0.0;
    for t in [10.0, 100.0, 1000.0] {
        let omega = dirichlet_lab::group::CharacterPoint::new(
            (0..m.dim())
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect(),
        )
        .unwrap();
        let mean = besicovitch_mean(&d, &m, &omega, t).unwrap();
        let err = (mean - coeffs[0]).norm();
        let bound = besicovitch_error_bound(&d, t);
        worst_ratio = worst_ratio.max(err / bound);
        besicovitch_ok &= err <= bound;
    }
    line(
        parseval_rel <= PARSEVAL_REL && flow_rel <= FLOW_REL && besicovitch_ok,
        format!(
            "Parseval rel. error {parseval_rel:.2e} (tol {PARSEVAL_REL}); flow vs Haar max rel. diff {flow_rel:.2e} (tol {FLOW_REL}); Besicovitch error/bound max {worst_ratio:.3}"
        ),
    )
}

fn bohr_cahen() -> Line {
    let n = 1 << 12;
    let ones = vec![c(1.0, 0.0); n];
    let lambda = Frequency::log().prefix(n).unwrap();
    let r = sigma_u_estimate(&ones, &lambda, n, &SupEstimator::default()).unwrap();
    let off: Vec<usize> = r
        .checkpoints
        .iter()
        .filter(|cp| cp.lambda_n > 0.0)
        .filter(|cp| cp.ratio != Some(1.0) || cp.grid_argmax != 0.0)
        .map(|cp| cp.n)
        .collect();
    line(
        off.is_empty() && r.estimate == 1.0,
        format!(
            "estimate {} over {} checkpoints with λ_N > 0 up to N={n}; checkpoints off 1 or not at t=0: {off:?}",
            r.estimate,
            r.checkpoints.iter().filter(|cp| cp.lambda_n > 0.0).count()
        ),
    )
}

fn classification() -> Line {
    let n = 1_000_000;
    let bc = Condition::Bohr { l: 1.0, delta: 0.1 };
    let lc = Condition::Landau { delta: 1.0 };
    let verdict = |f: &Frequency, cond| check_condition(f, cond, n).unwrap().verdict;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut expect = |label: &str, got: String, want: bool| {
        ok &= want;
        rows.push(format!("{label}: {got}{}", if want { "" } else { "  <-- mismatch" }));
    };

    let log = Frequency::log();
    let v = verdict(&log, bc);
    expect("(log n) BC", format!("{v:?}"), v == Verdict::EvidenceHolds);
    let r = l_value(&log, n).unwrap();
    expect(
        "(log n) L",
        format!("{}", r.witness),
        (r.witness - 1.0).abs() < 1e-12 && !r.diverging,
    );

    let sqrt = Frequency::sqrt_log();
    let v = verdict(&sqrt, lc);
    expect("(√log n) LC", format!("{v:?}"), v == Verdict::EvidenceHolds);
    let v = verdict(&sqrt, bc);
    expect("(√log n) BC", format!("{v:?}"), v == Verdict::EvidenceFails);
    let r = l_value(&sqrt, n).unwrap();
    expect(
        "(√log n) L",
        format!("diverging={} witness={:.3}", r.diverging, r.witness),
        r.diverging,
    );

    let loglog = Frequency::log_log();
    let v = verdict(&loglog, lc);
    expect("(log log n) LC", format!("{v:?}"), v == Verdict::EvidenceFails);
    let r = l_value(&loglog, n).unwrap();
    expect(
        "(log log n) L",
        format!("diverging={} witness={:.3}", r.diverging, r.witness),
        r.diverging,
    );

    let lin = Frequency::linear();
    let v1 = verdict(&lin, bc);
    let v2 = verdict(&lin, lc);
    let r = l_value(&lin, n).unwrap();
    expect(
        "(n) BC/LC/L",
        format!("{v1:?}/{v2:?}/{:.3}", r.witness),
        v1 == Verdict::EvidenceHolds && v2 == Verdict::EvidenceHolds && !r.diverging && r.witness.is_finite(),
    );
    line(ok, rows.join("\n      "))
}

fn helson() -> Line {
    let start = Instant::now();
    let cfg = HelsonConfig {
        freq: Frequency::log(),
        coeff: CoefficientRule::parse("n^-0.75").unwrap(),
        sigma: 0.05,
        chars: 100,
        n_max: 1 << 14,
        seed: 7,
    };
    let run = helson_simulate(&cfg).unwrap();
    let elapsed = start.elapsed();
    let hi = run.median_at(1 << 14).unwrap();
    let lo = run.median_at(1 << 10).unwrap();
    line(
        hi < lo && elapsed < HELSON_TIME,
        format!("median increment N=2^14: {hi:.4e} vs N=2^10: {lo:.4e}; {elapsed:.2?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Perron transform identity", perron_identity),
        ("Perron line integral", perron_line),
        ("decay lemma", decay_lemma),
        ("Abel lemma", abel_lemma),
        ("lattice machinery", lattice),
        ("Carleson maximal invariance", carleson),
        ("group model fidelity", group_model),
        ("Bohr–Cahen estimate", bohr_cahen),
        ("frequency classification", classification),
        ("Helson simulation", helson),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        failed += usize::from(!v.pass);
        println!(
            "{} {:>2}. {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
