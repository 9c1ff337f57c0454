use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn dlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlab"))
        .current_dir(dir)
        .env_remove("DLAB_SEED")
        .args(args)
        .output()
        .expect("cannot run dlab")
}

fn report(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn bohr_condition_for_log_n() {
    let tmp = TempDir::new().unwrap();
    let o = dlab(
        tmp.path(),
        &[
            "freq", "check", "--freq", "log(n)", "--cond", "bc", "--l", "1", "--delta", "0.1", "--n", "1000",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(tmp.path(), "report.json");
    assert_eq!(r["command"][1], "freq");
    assert_eq!(r["command"][2], "check");
    let witness = r["data"]["witness"].as_f64().unwrap();
    assert!((witness - 2f64.ln()).abs() < 1e-12);
    assert_eq!(r["data"]["verdict"], "evidence-holds");
}

#[test]
fn perron_transform_example() {
    let tmp = TempDir::new().unwrap();
    let o = dlab(
        tmp.path(),
        &[
            "kernel", "perron", "--u", "1", "--k", "1", "--x", "2", "--lambda", "1", "--tol", "1e-3",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(tmp.path(), "report.json");
    let closed = r["data"]["closed_form"][0].as_f64().unwrap();
    assert!((closed - (-2f64).exp()).abs() < 1e-15);
    assert_eq!(r["checks"][0]["pass"], true);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let usage = dlab(tmp.path(), &["freq", "frobnicate"]);
    assert_eq!(usage.status.code(), Some(2));
    let bad = dlab(tmp.path(), &["freq", "check", "--freq", "n^2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("error:"));
    let help = dlab(tmp.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));

    let failed = dlab(
        tmp.path(),
        &[
            "freq",
            "check",
            "--freq",
            "sqrt(log(n))",
            "--cond",
            "bc",
            "--n",
            "100000",
            "--expect",
            "holds",
        ],
    );
    assert_eq!(failed.status.code(), Some(1), "{}", stdout(&failed));
    assert!(stdout(&failed).contains("FAIL expected-verdict"));
    let r = report(tmp.path(), "report.json");
    assert_eq!(r["checks"].as_array().unwrap().last().unwrap()["pass"], false);
}

#[test]
fn helson_csv_is_deterministic_and_env_seed_wins() {
    let tmp = TempDir::new().unwrap();
    let args = |csv: &'static str, seed: &'static str| {
        vec![
            "helson", "simulate", "--freq", "log(n)", "--coeff", "n^-0.75", "--sigma", "0.05", "--chars", "20",
            "--nmax", "1024", "--seed", seed, "--csv", csv,
        ]
    };
    assert_eq!(dlab(tmp.path(), &args("a.csv", "7")).status.code(), Some(0));
    assert_eq!(dlab(tmp.path(), &args("b.csv", "7")).status.code(), Some(0));
    assert_eq!(dlab(tmp.path(), &args("c.csv", "8")).status.code(), Some(0));
    let read = |name: &str| std::fs::read_to_string(tmp.path().join(name)).unwrap();
    let a = read("a.csv");
    assert!(a.starts_with("character,n,increment\n"));
    assert_eq!(a.lines().count(), 1 + 20 * 10);
    assert_eq!(a, read("b.csv"));
    assert_ne!(a, read("c.csv"));

    let o = Command::new(env!("CARGO_BIN_EXE_dlab"))
        .current_dir(tmp.path())
        .env("DLAB_SEED", "7")
        .args(args("d.csv", "8"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(a, read("d.csv"));
    assert_eq!(report(tmp.path(), "report.json")["seed"], 7);
}

#[test]
fn config_file_merges_under_flags() {
    let tmp = TempDir::new().unwrap();
    std::fs::write(
        tmp.path().join("cfg.json"),
        r#"{"freq": "n", "cond": "lc", "n": 512, "seed": 3}"#,
    )
    .unwrap();
    let o = dlab(
        tmp.path(),
        &["--config", "cfg.json", "--out", "r.json", "freq", "check", "--n", "256"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(tmp.path(), "r.json");
    assert_eq!(r["config"]["freq"], "n");
    assert_eq!(r["config"]["cond"], "lc");
    assert_eq!(r["config"]["n"], 256);
    assert_eq!(r["seed"], 3);
    assert_eq!(r["data"]["prefix_len"], 256);

    std::fs::write(tmp.path().join("bad.json"), r#"{"frequency": "n"}"#).unwrap();
    let o = dlab(tmp.path(), &["--config", "bad.json", "freq", "check"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn symbolic_basis_from_generators() {
    let tmp = TempDir::new().unwrap();
    let o = dlab(
        tmp.path(),
        &[
            "freq",
            "basis",
            "--generator",
            "r2=1.4142135623730951",
            "--generator",
            "one=1",
            "--value",
            "r2",
            "--value",
            "one",
            "--value",
            "2*r2+3*one",
            "--csv",
            "basis.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(tmp.path(), "report.json");
    assert_eq!(r["checks"][0]["value"], 2);
    let csv = std::fs::read_to_string(tmp.path().join("basis.csv")).unwrap();
    assert!(csv.lines().last().unwrap().ends_with(",2 3"), "{csv}");
}

#[test]
fn relation_search_can_be_skipped() {
    let tmp = TempDir::new().unwrap();
    let base = [
        "group",
        "norm",
        "--freq",
        "sqrt(log(n))",
        "--n",
        "16",
        "--p",
        "2",
        "--samples",
        "20000",
    ];
    let o = dlab(tmp.path(), &base);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--assume-independent"));
    let mut args = base.to_vec();
    args.push("--assume-independent");
    let o = dlab(tmp.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = report(tmp.path(), "report.json");
    assert_eq!(r["config"]["assume_independent"], true);
    let norm = r["data"]["value"].as_f64().unwrap();
    assert!((norm - 4.0).abs() < 0.1, "{norm}");
}

#[test]
fn decay_bounds_report_the_outer_failure() {
    let tmp = TempDir::new().unwrap();
    let o = dlab(
        tmp.path(),
        &[
            "kernel",
            "bounds",
            "--u",
            "1",
            "--eps",
            "1",
            "--outer-max",
            "1e9",
            "--csv",
            "outer.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.matches("PASS decay-bound").count(), 6, "{out}");
    assert!(out.contains("FAIL outer-integral"));
    let r = report(tmp.path(), "report.json");
    let exceeded = r["data"]["outer"]["exceeded_at"].as_f64().unwrap();
    assert!(exceeded > 1e8 && exceeded < 1e9, "{exceeded}");
}
