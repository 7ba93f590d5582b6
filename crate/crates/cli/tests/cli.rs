use std::path::Path;
use std::process::{Command, Output};

fn envcontour(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_envcontour"))
        .args(args)
        .env_remove("ENVCONTOUR_SEED")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn manifest(out: &Path) -> serde_json::Value {
    let path = format!("{}.manifest.json", out.display());
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn value(table: &str, key: &str) -> f64 {
    table
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no {key} in\n{table}"))
        .parse()
        .unwrap()
}

#[test]
fn iform_contour_to_csv_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = envcontour(&[
        "--quiet", "contour", "--config", "sea-state", "--method", "iform", "--return-period", "50", "--points", "36",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("# manifest: c.csv.manifest.json"));
    let m = manifest(&out);
    assert_eq!(m["status"], "complete");
    assert_eq!(m["config_sha256"].as_str().unwrap().len(), 64);
    assert!(m["seed"].is_null());
    assert_eq!(m["outputs"].as_array().unwrap().len(), 1);
    assert!(m["command"].as_array().unwrap().iter().any(|a| a == "iform"));
}

#[test]
fn marginal_alpha_above_half_is_a_usage_error() {
    let o = envcontour(&["contour", "--config", "sea-state", "--method", "iform", "--alpha", "0.6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("marginal alpha must be < 0.5"), "{}", stderr(&o));
}

#[test]
fn exceedance_kind_mismatch_is_explained() {
    let o = envcontour(&[
        "contour", "--config", "sea-state", "--method", "hd", "--alpha", "1e-3", "--kind", "marginal", "--grid", "50",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("total exceedance probability"), "{}", stderr(&o));
}

#[test]
fn ds_is_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = envcontour(&[
            "--quiet", "contour", "--config", "normal-mixture", "--method", "ds", "--alpha", "1e-2", "--samples", "20000",
            "--angles", "72", "--seed", "42", "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(manifest(&out)["seed"], 42);
        std::fs::read_to_string(&out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("# manifest")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn seed_comes_from_the_environment() {
    let args = ["sample", "--config", "sea-state", "--count", "5"];
    let with_env = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_envcontour"))
            .args(["--quiet"])
            .args(args)
            .env("ENVCONTOUR_SEED", seed)
            .output()
            .unwrap();
        assert!(o.status.success());
        stdout(&o)
    };
    let explicit = envcontour(&["--quiet", "sample", "--config", "sea-state", "--count", "5", "--seed", "7"]);
    assert_eq!(with_env("7"), stdout(&explicit));
    assert_ne!(with_env("8"), stdout(&explicit));
}

#[test]
fn capacity_beyond_every_response_never_fails() {
    let o = envcontour(&["response", "--config", "sea-state-tp", "--response", "sdof", "--capacity", "1000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(value(&stdout(&o), "pf"), 0.0);
}

#[test]
fn response_on_a_written_contour() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let o = envcontour(&[
        "--quiet", "contour", "--config", "sea-state-tp", "--method", "iform", "--return-period", "50",
        "--state-duration", "6", "--out", c.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = envcontour(&["response", "--response", "sdof", "--contour", c.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = value(&stdout(&o), "response");
    assert!((r - 14.51).abs() < 0.05, "{r}");
}

#[test]
fn response_modes_are_exclusive() {
    let o = envcontour(&["response", "--config", "sea-state", "--response", "sdof", "--all-states", "--capacity", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_target_is_a_usage_error() {
    let o = envcontour(&["reproduce", "table9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reproduce_an_analytic_figure() {
    let dir = tempfile::tempdir().unwrap();
    let o = envcontour(&["--quiet", "reproduce", "fig8", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("# fig8: 4 of 4 cells within tolerance"), "{}", stdout(&o));
    let cmp = std::fs::read_to_string(dir.path().join("fig8.comparison.csv")).unwrap();
    assert!(cmp.lines().nth(1).unwrap().starts_with("key,computed,expected,source,status"));
    let m = manifest(&dir.path().join("reproduce"));
    assert_eq!(m["status"], "complete");
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
}

#[test]
fn lists_models() {
    let o = envcontour(&["models"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["sea-state", "normal-mixture", "weibull-normal", "directional", "directional-cartesian"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name},"))), "{text}");
    }
}

#[test]
fn model_files_are_accepted() {
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/normal-mixture.toml");
    let o = envcontour(&["--quiet", "contour", "--config", config, "--method", "isorm", "--alpha", "1e-3", "--points", "12"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| !l.starts_with('#')).count(), 14);
}
