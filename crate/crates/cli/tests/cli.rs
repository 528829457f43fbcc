use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn pvoros(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pvoros"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("PVOROS_THREADS", n),
        None => cmd.env_remove("PVOROS_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Two candidates whose curves cross: `narrow` is better at low false
/// positive rates, `wide` at high ones.
fn crossing(dir: &Path) -> (PathBuf, PathBuf) {
    let narrow = write(dir, "narrow.csv", "fpr,tpr,threshold\n0.01,0.3,5\n0.03,0.5,4\n0.1,0.6,3\n0.6,0.8,2\n");
    let wide = write(dir, "wide.csv", "fpr,tpr,threshold\n0.01,0.1,5\n0.05,0.3,4\n0.1,0.55,3\n0.3,0.99,2\n");
    (narrow, wide)
}

fn synth(dir: &Path, name: &str, mu: f64, seed: u64) -> PathBuf {
    let p = dir.join(name);
    let mu = mu.to_string();
    let seed = seed.to_string();
    ok(&pvoros(
        &["synth", "--mu-pos", &mu, "--n-pos", "200", "--n-neg", "1800", "--seed", &seed, "--out", s(&p)],
        None,
    ));
    p
}

#[test]
fn region_prints_case() {
    let out = ok(&pvoros(
        &["region", "--n-pos", "1000", "--n-neg", "9000", "--alpha", "0.15", "--kappa", "900"],
        None,
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["case"], "Case1Triangle");
    assert!((v["area"].as_f64().unwrap() - 0.03825).abs() < 1e-12);
    assert_eq!(v["practical"], true);

    let out = ok(&pvoros(
        &["region", "--n-pos", "1000", "--n-neg", "9000", "--alpha", "1", "--kappa", "900"],
        None,
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["case"], "DegenerateSegment");
    assert_eq!(v["area"].as_f64(), Some(0.0));
    assert_eq!(v["practical"], false);
}

#[test]
fn report_files_schema_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = synth(dir.path(), "a.csv", 1.0, 1);
    let b = synth(dir.path(), "b.csv", 1.5, 2);
    let test_dir = dir.path().join("test");
    fs::create_dir(&test_dir).unwrap();
    let ta = synth(&test_dir, "a.csv", 1.0, 11);
    let out1 = dir.path().join("out1");
    let out2 = dir.path().join("out2");
    let common = [
        "--alpha", "0.15", "--kappa-frac", "0.09", "--ratio-range", "0.1111111111111111,0.16666666666666666",
        "--samples", "2000", "--seed", "5", "--alpha-grid", "0.15:0.55:3", "--kappa-grid", "0.05:0.5:3",
    ];
    let mut args1 = vec!["report", s(&a), s(&b), "--test", s(&ta), "--out", s(&out1)];
    args1.extend(common);
    ok(&pvoros(&args1, Some("1")));
    let mut args2 = vec!["report", s(&a), s(&b), "--test", s(&ta), "--out", s(&out2)];
    args2.extend(common);
    ok(&pvoros(&args2, Some("4")));

    for f in ["report.json", "region.svg", "area_vs_t.csv", "heatmap.csv", "heatmap.svg"] {
        let x = fs::read(out1.join(f)).unwrap();
        assert_eq!(x, fs::read(out2.join(f)).unwrap(), "{f} differs between runs");
    }

    let report: Value = serde_json::from_slice(&fs::read(out1.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "pvoros/1");
    assert_eq!(report["region"]["case"], "Case1Triangle");
    assert!((report["region"]["area"].as_f64().unwrap() - 0.03825).abs() < 1e-12);
    assert_eq!(report["candidates"].as_array().unwrap().len(), 2);
    assert_eq!(report["selections"].as_array().unwrap().len(), 4);
    let costs: Vec<&Value> = report["selections"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| &s["expected_test_cost"])
        .filter(|c| !c.is_null())
        .collect();
    for c in costs {
        assert_eq!(c["seed"], 5);
        assert_eq!(c["samples"], 2000);
    }

    let schema: Value =
        serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}");

    let text = fs::read_to_string(out1.join("report.json")).unwrap();
    assert!(text.contains("\"area\": 3.8250000000000"), "floats use 17 significant digits");

    let area = fs::read_to_string(out1.join("area_vs_t.csv")).unwrap();
    assert_eq!(area.lines().next().unwrap(), "t,a,b");
    assert_eq!(area.lines().count(), 202);
}

#[test]
fn schema_rejects_wrong_version() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    assert!(!validator.is_valid(&serde_json::json!({"schema": "pvoros/2"})));
}

#[test]
fn heatmap_has_both_winners_for_crossing_curves() {
    let dir = tempfile::tempdir().unwrap();
    let (narrow, wide) = crossing(dir.path());
    let out = dir.path().join("hm");
    ok(&pvoros(
        &[
            "heatmap", s(&narrow), s(&wide), "--n-pos", "1000", "--n-neg", "9000", "--t-range", "0.1,0.45",
            "--resolution", "129", "--alpha-grid", "0.11:0.6:8", "--kappa-grid", "0.005:0.7:10", "--out", s(&out),
        ],
        None,
    ));
    let csv = fs::read_to_string(out.join("heatmap.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "alpha,kappa_frac,outcome,narrow,wide");
    assert_eq!(csv.lines().count(), 81);
    let outcomes: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap()).collect();
    assert!(outcomes.contains(&"narrow"), "{outcomes:?}");
    assert!(outcomes.contains(&"wide"), "{outcomes:?}");
    assert!(fs::read_to_string(out.join("heatmap.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn select_prints_every_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let (narrow, wide) = crossing(dir.path());
    let out = ok(&pvoros(
        &[
            "select", s(&narrow), s(&wide), "--n-pos", "1000", "--n-neg", "9000", "--alpha", "0.15",
            "--kappa", "1500", "--t-range", "0.1,0.6",
        ],
        None,
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|s| s["strategy"].as_str().unwrap()).collect();
    assert_eq!(names, ["max_pv", "max_voros", "max_feasible_recall", "max_feasible_pauroc"]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let (narrow, wide) = crossing(dir.path());
    let cfg = write(
        dir.path(),
        "run.toml",
        "n_pos = 1000\nn_neg = 9000\nalpha = 0.15\nkappa = 900.0\nt_range = [0.1, 0.6]\nstrategies = [\"max_pv\"]\n",
    );
    let out = ok(&pvoros(&["select", s(&narrow), s(&wide), "--config", s(&cfg), "--kappa-frac", "0.15"], None));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn assumption_violations_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (narrow, _) = crossing(dir.path());
    let out = pvoros(
        &["select", s(&narrow), "--n-pos", "1000", "--n-neg", "9000", "--alpha", "0.05", "--kappa", "900", "--t-range", "0.1,0.2"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("prevalence < alpha < 1"), "{err}");

    let out = pvoros(
        &["select", s(&narrow), "--n-pos", "1000", "--n-neg", "9000", "--alpha", "0.15", "--kappa", "900", "--t-range", "0.5,0.7"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0.6136"));

    let out = pvoros(&["select", s(&narrow), "--alpha", "0.15"], None);
    assert_eq!(out.status.code(), Some(2));

    let out = pvoros(&["synth", "--sigma-pos", "0", "--n-pos", "1", "--n-neg", "1"], None);
    assert_eq!(out.status.code(), Some(2));

    let out = pvoros(&["select", s(&narrow), "--bogus"], None);
    assert_eq!(out.status.code(), Some(2));

    let out = pvoros(&["select", s(&narrow), "--n-pos", "1000", "--n-neg", "9000", "--alpha", "0.15", "--kappa", "900", "--t-range", "0.1,0.2"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_data_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.csv", "");
    let out = pvoros(&["select", s(&empty), "--alpha", "0.15", "--kappa", "900", "--t-range", "0.1,0.2"], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no rows"));

    let bad = write(dir.path(), "bad.csv", "id,score,label\n1,0.5,1\n2,0.3,yes\n");
    let out = pvoros(&["select", s(&bad), "--alpha", "0.15", "--kappa", "900", "--t-range", "0.1,0.2"], None);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.csv:3:"));

    let missing = dir.path().join("missing.csv");
    let out = pvoros(&["select", s(&missing), "--alpha", "0.15", "--kappa", "900", "--t-range", "0.1,0.2"], None);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn synth_to_stdout_and_round_trip() {
    let out = ok(&pvoros(&["synth", "--n-pos", "1", "--n-neg", "1", "--seed", "3"], None));
    assert_eq!(out.lines().count(), 3);
    assert_eq!(out.lines().next().unwrap(), "id,score,label");

    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "m.csv", &out);
    let first = pvoros::ingest::ingest(&p).unwrap();
    let pts = write(dir.path(), "m_points.csv", &pvoros::ingest::rocpoints_csv(&first.curve));
    let second = pvoros::ingest::ingest(&pts).unwrap();
    assert_eq!(first.curve.points(), second.curve.points());
}
